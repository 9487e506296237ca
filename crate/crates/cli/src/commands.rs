use tiltbound::bounds::{awgn_bound, awgn_map_error, fano_bounds, gpv_bound_limit, map_error, Theta, TiltedSpectrum};
use tiltbound::channels::{code_joint, ChannelRegistry};
use tiltbound::codebound::{code_lower_bound, exact_code_error, ml_unique, monte_carlo_code_error};
use tiltbound::reliability::{
    f_lower_bound, f_lower_bound_dmc, rate_grid, sphere_packing, ExponentPoint, ExponentRegistry, InputSearch,
};
use tiltbound::Error;

use crate::config::{
    config, finite_thetas, parse_code, parse_grid, parse_prior, parse_thetas, BoundArgs, CapacityArgs, CliError,
    CodeCheckArgs, ReliabilityArgs,
};
use crate::csv::{Cell, Table};

const RATE_POINTS: usize = 64;

fn theta_cell(t: Theta) -> Cell {
    match t {
        Theta::Finite(v) => Cell::Num(v),
        Theta::Limit => Cell::from("limit"),
    }
}

pub fn run_bound(args: &BoundArgs) -> Result<Table, CliError> {
    let thetas = parse_thetas(&args.theta)?;
    let alphas = parse_grid(&args.alpha_grid)?;
    let mut t = Table::new(&["series", "theta", "alpha", "value"]);
    t.meta("command", "bound")
        .meta("channel", args.channel.describe())
        .meta("prior", &args.prior)
        .meta("theta", &args.theta)
        .meta("alpha_grid", &args.alpha_grid);

    if args.channel.channel == "awgn" {
        let sigma = args.channel.sigma.ok_or_else(|| CliError::Config("awgn needs --sigma".into()))?;
        if args.prior != "uniform" {
            return config("the Gaussian channel uses equiprobable ±1 inputs only");
        }
        for &theta in &thetas {
            let Theta::Finite(th) = theta else {
                return config("the Gaussian closed form needs finite θ");
            };
            for &a in &alphas {
                t.push(vec!["gpv".into(), theta_cell(theta), a.into(), awgn_bound(sigma, th, a)?.into()]);
            }
        }
        t.push(vec!["pe".into(), Cell::Empty, Cell::Empty, awgn_map_error(sigma)?.into()]);
        return Ok(t);
    }

    let w = args.channel.dmc()?;
    let m = w.joint(&parse_prior(&args.prior, w.nx())?)?;
    for &theta in &thetas {
        match theta {
            Theta::Finite(th) => {
                let spectrum = TiltedSpectrum::new(&m, th)?;
                for &a in &alphas {
                    t.push(vec!["gpv".into(), theta_cell(theta), a.into(), spectrum.bound(a)?.into()]);
                }
            }
            Theta::Limit => {
                for &a in &alphas {
                    t.push(vec!["gpv".into(), theta_cell(theta), a.into(), gpv_bound_limit(&m, a, true)?.into()]);
                }
            }
        }
    }
    t.push(vec!["pe".into(), Cell::Empty, Cell::Empty, map_error(&m).into()]);
    if let Ok(f) = fano_bounds(&m) {
        t.push(vec!["fano".into(), Cell::Empty, Cell::Empty, f.original.into()]);
        t.push(vec!["fano_weakened".into(), Cell::Empty, Cell::Empty, f.weakened.into()]);
    }
    Ok(t)
}

pub(crate) fn exponent_row(series: String, p: &ExponentPoint) -> Vec<Cell> {
    vec![series.into(), p.rate.into(), p.value.into(), p.s_star.into(), p.p_star.into(), p.clamped.into()]
}

pub const EXPONENT_HEADER: [&str; 6] = ["series", "rate", "value", "s_star", "p_star", "clamped"];

pub fn run_reliability(args: &ReliabilityArgs) -> Result<Table, CliError> {
    let thetas = finite_thetas(&args.theta)?;
    let mut t = Table::new(&EXPONENT_HEADER);
    t.meta("command", "reliability")
        .meta("channel", args.channel.describe())
        .meta("theta", &args.theta)
        .meta("rate_grid", args.rate_grid.as_deref().unwrap_or("64 interior points of (0,C)"))
        .meta("units", "nats");

    let registry = ExponentRegistry::builtin();
    if let (Some(model), Some(eps)) = (registry.get(&args.channel.channel), args.channel.eps) {
        let cap = model.capacity(eps)?;
        let rates = match &args.rate_grid {
            Some(g) => parse_grid(g)?,
            None => rate_grid(cap, RATE_POINTS),
        };
        t.meta("capacity", crate::csv::fmt_num(cap));
        for &theta in &thetas {
            for &r in &rates {
                t.push(exponent_row(format!("F_theta={theta}"), &f_lower_bound(model, eps, r, theta)?));
            }
        }
        for &r in &rates {
            t.push(exponent_row("E_sp".into(), &sphere_packing(model, eps, r)?));
        }
        return Ok(t);
    }

    let w = args.channel.dmc()?;
    let cap = w.capacity()?.capacity;
    let rates = match &args.rate_grid {
        Some(g) => parse_grid(g)?,
        None => rate_grid(cap, RATE_POINTS),
    };
    t.meta("capacity", crate::csv::fmt_num(cap));
    let candidates = match &args.prior {
        Some(p) => vec![parse_prior(p, w.nx())?],
        None if w.nx() == 2 => vec![],
        None => return config("channels with more than two inputs need --prior"),
    };
    for &theta in &thetas {
        for &r in &rates {
            let search =
                if candidates.is_empty() { InputSearch::BinaryScan } else { InputSearch::Candidates(&candidates) };
            t.push(exponent_row(format!("F_theta={theta}"), &f_lower_bound_dmc(&w, search, r, theta)?));
        }
    }
    Ok(t)
}

pub fn run_code_check(args: &CodeCheckArgs) -> Result<Table, CliError> {
    let w = args.channel.dmc()?;
    let code = parse_code(&args.code)?;
    let thetas = finite_thetas(&args.theta)?;
    let alphas = parse_grid(&args.alpha_grid)?;

    let exact = match exact_code_error(&code, &w) {
        Err(Error::SizeCap { .. }) if args.seed.is_some() => {
            let seed = args.seed.expect("checked above");
            let mc = monte_carlo_code_error(&code, &w, args.mc_samples, seed)?;
            let mut t = Table::new(&["samples", "errors", "pe_estimate", "pe_low", "pe_high"]);
            t.meta("command", "code-check")
                .meta("channel", args.channel.describe())
                .meta("code", &args.code)
                .meta("mode", "monte-carlo (code too long to enumerate)")
                .meta("seed", seed);
            t.push(vec![
                (mc.samples as f64).into(),
                (mc.errors as f64).into(),
                mc.estimate.into(),
                mc.lower.into(),
                mc.upper.into(),
            ]);
            return Ok(t);
        }
        other => other?,
    };
    let unique = ml_unique(&code, &w)?;
    let mut t = Table::new(&["alpha", "theta", "bound", "exact_pe", "sound", "ml_unique"]);
    t.meta("command", "code-check")
        .meta("channel", args.channel.describe())
        .meta("code", &args.code)
        .meta("codewords", code.size())
        .meta("length", code.len());
    for &theta in &thetas {
        for &a in &alphas {
            let b = code_lower_bound(&code, &w, theta, a)?;
            t.push(vec![a.into(), theta.into(), b.into(), exact.into(), (b <= exact + 1e-12).into(), unique.into()]);
        }
    }
    // Keep the equivalence with the generic evaluator visible in the output.
    let m = code_joint(&code, &w)?;
    t.meta("map_error_via_joint_model", crate::csv::fmt_num(map_error(&m)));
    Ok(t)
}

pub fn run_capacity(args: &CapacityArgs) -> Result<Table, CliError> {
    let w = args.channel.dmc()?;
    let mut t = Table::new(&["method", "capacity"]);
    t.meta("command", "capacity").meta("channel", args.channel.describe()).meta("units", "nats");
    if let Some(family) = ChannelRegistry::builtin().get(&args.channel.channel) {
        if let Some(c) = family.closed_form_capacity(&args.channel.params()) {
            t.push(vec!["closed_form".into(), c?.into()]);
        }
    }
    let est = w.capacity()?;
    t.meta("iterations", est.iterations);
    t.push(vec!["blahut_arimoto".into(), est.capacity.into()]);
    Ok(t)
}
