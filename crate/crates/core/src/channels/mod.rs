//! Discrete memoryless channels, their memoryless extensions, tilting and
//! capacity.

mod code;
mod format;
mod registry;

pub use code::{code_joint, BlockCode};
pub use registry::{bsc_capacity, z_capacity, ChannelFamily, ChannelParams, ChannelRegistry};

use crate::error::{invalid, Error, Result};
use crate::prob::{check_theta, JointFiniteModel, LogSum, Pmf, ThetaRange, MAX_ENTRIES};

/// A channel `W(y|x)` with finite alphabets, stored as log probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Dmc {
    nx: usize,
    ny: usize,
    log_w: Vec<f64>,
}

impl Dmc {
    /// Rows may be off by up to 1e-9 and are renormalized.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Dmc> {
        let nx = rows.len();
        if nx == 0 {
            return invalid("channel has no inputs");
        }
        let ny = rows[0].len();
        let mut log_w = Vec::with_capacity(nx * ny);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != ny {
                return invalid(format!("row {x} has {} entries, expected {ny}", row.len()));
            }
            log_w.extend_from_slice(Pmf::from_probs(row)?.log_masses());
        }
        Ok(Dmc { nx, ny, log_w })
    }

    fn check_param(name: &str, v: f64) -> Result<()> {
        if (0.0..=1.0).contains(&v) {
            Ok(())
        } else {
            invalid(format!("{name} = {v} outside [0,1]"))
        }
    }

    /// Binary symmetric channel with crossover probability `eps`.
    pub fn bsc(eps: f64) -> Result<Dmc> {
        Self::check_param("eps", eps)?;
        Self::from_rows(&[vec![1.0 - eps, eps], vec![eps, 1.0 - eps]])
    }

    /// Z-channel: input 0 is received perfectly, input 1 flips to 0 with
    /// probability `eps`.
    pub fn z(eps: f64) -> Result<Dmc> {
        Self::check_param("eps", eps)?;
        Self::from_rows(&[vec![1.0, 0.0], vec![eps, 1.0 - eps]])
    }

    /// Binary erasure channel; outputs are ordered `0, 1, E`.
    pub fn bec(eps: f64) -> Result<Dmc> {
        Self::check_param("eps", eps)?;
        Self::from_rows(&[vec![1.0 - eps, 0.0, eps], vec![0.0, 1.0 - eps, eps]])
    }

    /// Ternary channel with `W(x|x) = 1 - v1 - v2`; a wrong output 1 has
    /// probability `v1`, a wrong output 2 has `v2`, and a wrong output 0
    /// takes `v1` from input 1 and `v2` from input 2.
    pub fn ternary(v1: f64, v2: f64) -> Result<Dmc> {
        let keep = 1.0 - v1 - v2;
        if !(v1 > 0.0 && v2 > v1 && keep > v2) {
            return invalid(format!("ternary channel needs 1-v1-v2 > v2 > v1 > 0, got ({v1}, {v2})"));
        }
        Self::from_rows(&[vec![keep, v1, v2], vec![v1, keep, v2], vec![v2, v1, keep]])
    }

    pub fn identity(n: usize) -> Result<Dmc> {
        let rows: Vec<Vec<f64>> = (0..n).map(|x| (0..n).map(|y| if x == y { 1.0 } else { 0.0 }).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn log_prob(&self, x: usize, y: usize) -> f64 {
        self.log_w[x * self.ny + y]
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.log_prob(x, y).exp()
    }

    pub fn log_row(&self, x: usize) -> &[f64] {
        &self.log_w[x * self.ny..(x + 1) * self.ny]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.nx).map(|x| self.log_row(x).iter().map(|l| l.exp()).collect()).collect()
    }

    /// Joint model of an input distribution sent through this channel.
    pub fn joint(&self, prior: &Pmf) -> Result<JointFiniteModel> {
        if prior.len() != self.nx {
            return invalid(format!("prior has {} entries, channel has {} inputs", prior.len(), self.nx));
        }
        JointFiniteModel::from_log_rows(prior.clone(), self.ny, self.log_w.clone())
    }

    /// The n-th memoryless extension. Tuples are indexed lexicographically,
    /// first symbol most significant.
    pub fn product(&self, n: usize) -> Result<Dmc> {
        if n == 0 {
            return invalid("block length must be positive");
        }
        let needed = (self.nx as f64 * self.ny as f64).powi(n as i32);
        if needed > MAX_ENTRIES as f64 {
            return Err(Error::SizeCap { needed, cap: MAX_ENTRIES });
        }
        let mut cur = Dmc { nx: 1, ny: 1, log_w: vec![0.0] };
        for _ in 0..n {
            let (nx, ny) = (cur.nx * self.nx, cur.ny * self.ny);
            let mut log_w = vec![0.0; nx * ny];
            for xa in 0..cur.nx {
                for xb in 0..self.nx {
                    let x = xa * self.nx + xb;
                    for ya in 0..cur.ny {
                        for yb in 0..self.ny {
                            log_w[x * ny + ya * self.ny + yb] = cur.log_prob(xa, ya) + self.log_prob(xb, yb);
                        }
                    }
                }
            }
            cur = Dmc { nx, ny, log_w };
        }
        Ok(cur)
    }

    /// Tilts every row: `W^θ(·|x) / Σ_y W^θ(y|x)`.
    pub fn tilted(&self, theta: f64) -> Result<Dmc> {
        check_theta(theta, ThetaRange::AtLeastOne)?;
        let mut log_w = Vec::with_capacity(self.log_w.len());
        for x in 0..self.nx {
            log_w.extend(crate::prob::tilt_log(self.log_row(x), theta));
        }
        Ok(Dmc { nx: self.nx, ny: self.ny, log_w })
    }

    /// True when all rows are permutations of each other (to 1e-12).
    pub fn is_row_symmetric(&self) -> bool {
        let sorted = |x: usize| {
            let mut r: Vec<f64> = self.log_row(x).iter().map(|l| l.exp()).collect();
            r.sort_by(f64::total_cmp);
            r
        };
        let first = sorted(0);
        (1..self.nx).all(|x| sorted(x).iter().zip(&first).all(|(a, b)| (a - b).abs() <= 1e-12))
    }

    /// Capacity in nats by Blahut–Arimoto alternating maximization.
    pub fn capacity(&self) -> Result<CapacityEstimate> {
        blahut_arimoto(self, 1e-10, 100_000)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityEstimate {
    pub capacity: f64,
    pub input: Pmf,
    pub iterations: usize,
}

/// Iterates until the certified gap `max_x D(W_x‖q) - log Σ p_x e^{D_x}`
/// falls below `tol`, or until successive capacity estimates differ by less
/// than `tol`.
pub fn blahut_arimoto(w: &Dmc, tol: f64, max_iter: usize) -> Result<CapacityEstimate> {
    let mut p = vec![1.0 / w.nx as f64; w.nx];
    let mut gap = f64::INFINITY;
    let mut previous = f64::NEG_INFINITY;
    for it in 1..=max_iter {
        let mut q = vec![0.0; w.ny];
        for x in 0..w.nx {
            for y in 0..w.ny {
                q[y] += p[x] * w.prob(x, y);
            }
        }
        let d: Vec<f64> = (0..w.nx)
            .map(|x| {
                (0..w.ny)
                    .filter(|&y| w.log_prob(x, y) > f64::NEG_INFINITY)
                    .map(|y| w.prob(x, y) * (w.log_prob(x, y) - q[y].ln()))
                    .sum()
            })
            .collect();
        let mut acc = LogSum::new();
        for x in 0..w.nx {
            acc.add(p[x].ln() + d[x]);
        }
        let lower = acc.value();
        let upper = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        gap = upper - lower;
        // The certified gap is the stronger test, but it closes only
        // sublinearly when the rows are nearly identical; the estimates
        // themselves settle long before that.
        if gap < tol || (lower - previous).abs() < tol {
            return Ok(CapacityEstimate { capacity: lower.max(0.0), input: Pmf::from_probs(&p)?, iterations: it });
        }
        let norm: f64 = (0..w.nx).map(|x| p[x] * d[x].exp()).sum();
        for x in 0..w.nx {
            p[x] = p[x] * d[x].exp() / norm;
        }
        previous = lower;
    }
    Err(Error::NonConvergence { iterations: max_iter, gap })
}

/// Binary entropy in nats.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("binary entropy argument {p} outside [0,1]"));
    }
    let term = |q: f64| if q > 0.0 { -q * q.ln() } else { 0.0 };
    Ok(term(p) + term(1.0 - p))
}

/// `log [ W^θ(y|x) / Σ_x' P(x') W^θ(y|x') ]`.
pub fn j_theta(prior: &Pmf, w: &Dmc, theta: f64, x: usize, y: usize) -> Result<f64> {
    check_theta(theta, ThetaRange::AtLeastOne)?;
    if prior.len() != w.nx || x >= w.nx || y >= w.ny {
        return invalid("index or prior size does not match the channel");
    }
    let mut den = LogSum::new();
    for xp in 0..w.nx {
        let l = w.log_prob(xp, y);
        if l > f64::NEG_INFINITY {
            den.add(prior.log_mass(xp) + theta * l);
        }
    }
    let den = den.value();
    if den == f64::NEG_INFINITY {
        return Err(Error::ZeroProbabilityObservation { y });
    }
    let num = w.log_prob(x, y);
    Ok(if num == f64::NEG_INFINITY { num } else { theta * num - den })
}

/// Information density `log P(y|x) / P(y)`.
pub fn information_density(prior: &Pmf, w: &Dmc, x: usize, y: usize) -> Result<f64> {
    let m = w.joint(prior)?;
    if x >= w.nx || y >= w.ny {
        return invalid("index outside the channel alphabets");
    }
    let ly = m.log_output(y);
    if ly == f64::NEG_INFINITY {
        return Err(Error::ZeroProbabilityObservation { y });
    }
    Ok(m.log_likelihood(x, y) - ly)
}
