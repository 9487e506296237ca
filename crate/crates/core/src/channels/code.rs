use crate::error::{invalid, Error, Result};
use crate::prob::{JointFiniteModel, Pmf, MAX_ENTRIES};

use super::Dmc;

/// A block code: `M` distinct codewords of common length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCode {
    n: usize,
    words: Vec<Vec<usize>>,
}

impl BlockCode {
    pub fn new(words: Vec<Vec<usize>>) -> Result<BlockCode> {
        let n = match words.first() {
            Some(w) if !w.is_empty() => w.len(),
            _ => return invalid("a code needs at least one non-empty codeword"),
        };
        if words.iter().any(|w| w.len() != n) {
            return invalid("codewords have different lengths");
        }
        for i in 0..words.len() {
            if words[..i].contains(&words[i]) {
                return invalid(format!("codeword {i} is repeated"));
            }
        }
        Ok(BlockCode { n, words })
    }

    /// The binary repetition code `{0^n, 1^n}`.
    pub fn repetition(n: usize) -> Result<BlockCode> {
        Self::new(vec![vec![0; n], vec![1; n]])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub(crate) fn check_against(&self, w: &Dmc) -> Result<()> {
        if let Some(bad) = self.words.iter().flatten().find(|&&s| s >= w.nx()) {
            return invalid(format!("code symbol {bad} outside channel input alphabet"));
        }
        Ok(())
    }

    /// Number of output sequences `|Y|^n`, checked against the size cap
    /// together with the number of codewords.
    pub(crate) fn outputs(&self, w: &Dmc) -> Result<usize> {
        let needed = (w.ny() as f64).powi(self.n as i32) * self.size() as f64;
        if needed > MAX_ENTRIES as f64 {
            return Err(Error::SizeCap { needed, cap: MAX_ENTRIES });
        }
        Ok(w.ny().pow(self.n as u32))
    }

    /// Log-likelihood `log W^n(y|c_m)` of every codeword for the output
    /// sequence with lexicographic index `y`.
    pub(crate) fn log_likelihoods(&self, w: &Dmc, y: usize, out: &mut Vec<f64>) {
        out.clear();
        let mut symbols = vec![0; self.n];
        let mut rest = y;
        for i in (0..self.n).rev() {
            symbols[i] = rest % w.ny();
            rest /= w.ny();
        }
        for c in &self.words {
            out.push(c.iter().zip(&symbols).map(|(&x, &s)| w.log_prob(x, s)).sum());
        }
    }
}

/// Hypothesis-testing model of a code used over `w` with equiprobable
/// messages. Hypotheses are the codewords in code order; outputs are the
/// length-n sequences in lexicographic order.
pub fn code_joint(code: &BlockCode, w: &Dmc) -> Result<JointFiniteModel> {
    code.check_against(w)?;
    let ny = code.outputs(w)?;
    let m = code.size();
    let mut log_lik = vec![0.0; m * ny];
    let mut buf = Vec::with_capacity(m);
    for y in 0..ny {
        code.log_likelihoods(w, y, &mut buf);
        for (c, &l) in buf.iter().enumerate() {
            log_lik[c * ny + y] = l;
        }
    }
    JointFiniteModel::from_log_rows(Pmf::uniform(m)?, ny, log_lik)
}
