//! Named channel families, so front ends can pick a channel by string.

use crate::error::{invalid, Result};

use super::{binary_entropy, Dmc};

/// Parameters a family may read. Families reject what they need but lack.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ChannelParams {
    pub eps: Option<f64>,
    pub v1: Option<f64>,
    pub v2: Option<f64>,
}

impl ChannelParams {
    pub fn eps(eps: f64) -> Self {
        ChannelParams { eps: Some(eps), ..Default::default() }
    }

    fn need(v: Option<f64>, name: &str, family: &str) -> Result<f64> {
        match v {
            Some(v) => Ok(v),
            None => invalid(format!("channel {family} needs --{name}")),
        }
    }
}

pub trait ChannelFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn build(&self, params: &ChannelParams) -> Result<Dmc>;
    /// Closed-form capacity in nats, when one is known.
    fn closed_form_capacity(&self, _params: &ChannelParams) -> Option<Result<f64>> {
        None
    }
}

struct Bsc;
struct ZChannel;
struct Bec;
struct Ternary;

impl ChannelFamily for Bsc {
    fn name(&self) -> &'static str {
        "bsc"
    }
    fn build(&self, p: &ChannelParams) -> Result<Dmc> {
        Dmc::bsc(ChannelParams::need(p.eps, "eps", "bsc")?)
    }
    fn closed_form_capacity(&self, p: &ChannelParams) -> Option<Result<f64>> {
        Some(ChannelParams::need(p.eps, "eps", "bsc").and_then(bsc_capacity))
    }
}

impl ChannelFamily for ZChannel {
    fn name(&self) -> &'static str {
        "z"
    }
    fn build(&self, p: &ChannelParams) -> Result<Dmc> {
        Dmc::z(ChannelParams::need(p.eps, "eps", "z")?)
    }
    fn closed_form_capacity(&self, p: &ChannelParams) -> Option<Result<f64>> {
        Some(ChannelParams::need(p.eps, "eps", "z").and_then(z_capacity))
    }
}

impl ChannelFamily for Bec {
    fn name(&self) -> &'static str {
        "bec"
    }
    fn build(&self, p: &ChannelParams) -> Result<Dmc> {
        Dmc::bec(ChannelParams::need(p.eps, "eps", "bec")?)
    }
    fn closed_form_capacity(&self, p: &ChannelParams) -> Option<Result<f64>> {
        Some(ChannelParams::need(p.eps, "eps", "bec").map(|e| (1.0 - e) * std::f64::consts::LN_2))
    }
}

impl ChannelFamily for Ternary {
    fn name(&self) -> &'static str {
        "ternary"
    }
    fn build(&self, p: &ChannelParams) -> Result<Dmc> {
        Dmc::ternary(ChannelParams::need(p.v1, "v1", "ternary")?, ChannelParams::need(p.v2, "v2", "ternary")?)
    }
}

/// `log 2 - h_b(ε)`.
pub fn bsc_capacity(eps: f64) -> Result<f64> {
    Ok(std::f64::consts::LN_2 - binary_entropy(eps)?)
}

/// `log(1 + (1-ε) ε^{ε/(1-ε)})`.
pub fn z_capacity(eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return invalid(format!("eps = {eps} outside [0,1]"));
    }
    if eps == 1.0 {
        return Ok(0.0);
    }
    let pow = if eps == 0.0 { 1.0 } else { (eps / (1.0 - eps) * eps.ln()).exp() };
    Ok(((1.0 - eps) * pow).ln_1p())
}

pub struct ChannelRegistry {
    families: Vec<Box<dyn ChannelFamily>>,
}

impl ChannelRegistry {
    pub fn builtin() -> Self {
        ChannelRegistry { families: vec![Box::new(Bsc), Box::new(ZChannel), Box::new(Bec), Box::new(Ternary)] }
    }

    pub fn register(&mut self, family: Box<dyn ChannelFamily>) {
        self.families.retain(|f| f.name() != family.name());
        self.families.push(family);
    }

    pub fn get(&self, name: &str) -> Option<&dyn ChannelFamily> {
        self.families.iter().find(|f| f.name() == name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.iter().map(|f| f.name()).collect()
    }
}
