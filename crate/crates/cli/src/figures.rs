//! Fixed data series for the five reference figures, selectable by number.

use tiltbound::bounds::{
    awgn_bound, awgn_map_error, fano_bounds, map_error, maximize_over_alpha, Theta, TiltedSpectrum,
};
use tiltbound::channels::Dmc;
use tiltbound::prob::{JointFiniteModel, Pmf};
use tiltbound::reliability::{f_lower_bound, rate_grid, sphere_packing, BinaryExponentModel, BscExponents, ZExponents};

use crate::commands::{exponent_row, EXPONENT_HEADER};
use crate::config::{config, parse_grid, CliError};
use crate::csv::{Cell, Table};

pub const TERNARY_V1: f64 = 0.27;
pub const TERNARY_V2: f64 = 0.33;
pub const AWGN_SIGMA: f64 = 0.429858;
pub const EXPONENT_EPS: f64 = 0.01;

pub trait Figure {
    fn id(&self) -> u8;
    fn title(&self) -> &'static str;
    fn render(&self) -> Result<Table, CliError>;
}

pub fn ternary_model() -> Result<JointFiniteModel, CliError> {
    Ok(Dmc::ternary(TERNARY_V1, TERNARY_V2)?.joint(&Pmf::uniform(3)?)?)
}

fn xy_table(title: &str, x: &str) -> Table {
    let mut t = Table::new(&["series", x, "value"]);
    t.meta("figure", title);
    t
}

fn row(series: impl Into<String>, x: f64, v: f64) -> Vec<Cell> {
    vec![Cell::Text(series.into()), x.into(), v.into()]
}

struct TernaryAlphaSweep;
struct TernaryThetaSweep;
struct GaussianAlphaSweep;
struct ExponentFigure {
    id: u8,
    title: &'static str,
    model: &'static dyn BinaryExponentModel,
    thetas: &'static [f64],
}

impl Figure for TernaryAlphaSweep {
    fn id(&self) -> u8 {
        1
    }
    fn title(&self) -> &'static str {
        "ternary channel, bound vs alpha"
    }
    fn render(&self) -> Result<Table, CliError> {
        let m = ternary_model()?;
        let alphas = parse_grid("0:1:0.01")?;
        let mut t = xy_table(self.title(), "alpha");
        t.meta("channel", format!("ternary v1={TERNARY_V1} v2={TERNARY_V2}")).meta("prior", "uniform");
        for theta in [1.0, 20.0, 100.0] {
            let s = TiltedSpectrum::new(&m, theta)?;
            for &a in &alphas {
                t.push(row(format!("theta={theta}"), a, s.bound(a)?));
            }
        }
        let pe = map_error(&m);
        let fano = fano_bounds(&m)?;
        for (name, v) in [("pe", pe), ("fano", fano.original), ("fano_weakened", fano.weakened)] {
            for &a in &alphas {
                t.push(row(name, a, v));
            }
        }
        Ok(t)
    }
}

impl Figure for TernaryThetaSweep {
    fn id(&self) -> u8 {
        2
    }
    fn title(&self) -> &'static str {
        "ternary channel, bound maximized over alpha vs theta"
    }
    fn render(&self) -> Result<Table, CliError> {
        let m = ternary_model()?;
        let thetas = parse_grid("1:20:0.25")?;
        let mut t = Table::new(&["series", "theta", "value", "alpha_star"]);
        t.meta("figure", self.title())
            .meta("channel", format!("ternary v1={TERNARY_V1} v2={TERNARY_V2}"))
            .meta("prior", "uniform");
        let base = maximize_over_alpha(&m, Theta::Finite(1.0))?;
        for &th in &thetas {
            let opt = maximize_over_alpha(&m, Theta::Finite(th))?;
            t.push(vec!["maximized".into(), th.into(), opt.value.into(), opt.alpha.into()]);
        }
        let pe = map_error(&m);
        for &th in &thetas {
            t.push(vec!["theta=1".into(), th.into(), base.value.into(), base.alpha.into()]);
        }
        for &th in &thetas {
            t.push(vec!["pe".into(), th.into(), pe.into(), Cell::Empty]);
        }
        Ok(t)
    }
}

impl Figure for GaussianAlphaSweep {
    fn id(&self) -> u8 {
        3
    }
    fn title(&self) -> &'static str {
        "binary-input Gaussian channel, bound vs alpha"
    }
    fn render(&self) -> Result<Table, CliError> {
        let alphas = parse_grid("0:1:0.01")?;
        let mut t = xy_table(self.title(), "alpha");
        t.meta("channel", format!("awgn sigma={AWGN_SIGMA}")).meta("prior", "uniform");
        for theta in [1.0, 10.0, 100.0] {
            for &a in &alphas {
                t.push(row(format!("theta={theta}"), a, awgn_bound(AWGN_SIGMA, theta, a)?));
            }
        }
        let pe = awgn_map_error(AWGN_SIGMA)?;
        for &a in &alphas {
            t.push(row("pe", a, pe));
        }
        Ok(t)
    }
}

impl Figure for ExponentFigure {
    fn id(&self) -> u8 {
        self.id
    }
    fn title(&self) -> &'static str {
        self.title
    }
    fn render(&self) -> Result<Table, CliError> {
        let cap = self.model.capacity(EXPONENT_EPS)?;
        let rates = rate_grid(cap, 64);
        let mut t = Table::new(&EXPONENT_HEADER);
        t.meta("figure", self.title)
            .meta("channel", format!("{} eps={EXPONENT_EPS}", self.model.name()))
            .meta("capacity", crate::csv::fmt_num(cap))
            .meta("units", "nats");
        for &theta in self.thetas {
            for &r in &rates {
                let p = f_lower_bound(self.model, EXPONENT_EPS, r, theta)?;
                t.push(exponent_row(format!("F_theta={theta}"), &p));
            }
        }
        for &r in &rates {
            t.push(exponent_row("E_sp".into(), &sphere_packing(self.model, EXPONENT_EPS, r)?));
        }
        Ok(t)
    }
}

pub struct FigureRegistry {
    figures: Vec<Box<dyn Figure>>,
}

impl FigureRegistry {
    pub fn builtin() -> Self {
        FigureRegistry {
            figures: vec![
                Box::new(TernaryAlphaSweep),
                Box::new(TernaryThetaSweep),
                Box::new(GaussianAlphaSweep),
                Box::new(ExponentFigure {
                    id: 4,
                    title: "BSC(0.01) exponents",
                    model: &BscExponents,
                    thetas: &[1.0, 2.0],
                }),
                Box::new(ExponentFigure {
                    id: 5,
                    title: "Z(0.01) exponents",
                    model: &ZExponents,
                    thetas: &[1.0, 3.0, 10.0, 100.0],
                }),
            ],
        }
    }

    pub fn get(&self, id: u8) -> Option<&dyn Figure> {
        self.figures.iter().find(|f| f.id() == id).map(|b| b.as_ref())
    }
}

pub fn run_figure(id: u8) -> Result<Table, CliError> {
    match FigureRegistry::builtin().get(id) {
        Some(f) => f.render(),
        None => config(format!("figure {id} does not exist; choose 1 to 5")),
    }
}
