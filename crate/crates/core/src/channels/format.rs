//! Plain-text formats.
//!
//! Channel file: `#` comments, a header `NX NY`, then NX rows of NY
//! probabilities. Code file: header `N M`, then M rows of N input symbols.

use std::str::FromStr;

use crate::error::{Error, Result};

use super::{BlockCode, Dmc};

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn fields<T: FromStr>(line: usize, s: &str) -> Result<Vec<T>> {
    s.split_whitespace()
        .map(|tok| tok.parse::<T>().map_err(|_| Error::Parse { line, msg: format!("cannot parse {tok:?}") }))
        .collect()
}

impl FromStr for Dmc {
    type Err = Error;

    fn from_str(text: &str) -> Result<Dmc> {
        let mut lines = data_lines(text);
        let (hl, h) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty channel file".into() })?;
        let dims: Vec<usize> = fields(hl, h)?;
        let [nx, ny] = dims[..] else {
            return Err(Error::Parse { line: hl, msg: "header must be `NX NY`".into() });
        };
        let mut rows = Vec::with_capacity(nx);
        for (ln, l) in lines.by_ref().take(nx) {
            let row: Vec<f64> = fields(ln, l)?;
            if row.len() != ny {
                return Err(Error::Parse { line: ln, msg: format!("expected {ny} entries") });
            }
            rows.push(row);
        }
        if rows.len() != nx {
            return Err(Error::Parse { line: 0, msg: format!("expected {nx} rows, found {}", rows.len()) });
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse { line: ln, msg: "unexpected trailing data".into() });
        }
        Dmc::from_rows(&rows)
    }
}

impl FromStr for BlockCode {
    type Err = Error;

    fn from_str(text: &str) -> Result<BlockCode> {
        let mut lines = data_lines(text);
        let (hl, h) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty code file".into() })?;
        let dims: Vec<usize> = fields(hl, h)?;
        let [n, m] = dims[..] else {
            return Err(Error::Parse { line: hl, msg: "header must be `N M`".into() });
        };
        let mut words = Vec::with_capacity(m);
        for (ln, l) in lines.by_ref().take(m) {
            let w: Vec<usize> = fields(ln, l)?;
            if w.len() != n {
                return Err(Error::Parse { line: ln, msg: format!("expected {n} symbols") });
            }
            words.push(w);
        }
        if words.len() != m {
            return Err(Error::Parse { line: 0, msg: format!("expected {m} codewords, found {}", words.len()) });
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse { line: ln, msg: "unexpected trailing data".into() });
        }
        BlockCode::new(words)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_channel_with_comments() {
        let w: Dmc = "# a BSC\n2 2\n0.9 0.1 # row 0\n\n0.1 0.9\n".parse().unwrap();
        assert_eq!(w, Dmc::bsc(0.1).unwrap());
    }

    #[test]
    fn channel_errors() {
        assert!(matches!("2 2\n0.9 0.1\n".parse::<Dmc>(), Err(Error::Parse { .. })));
        assert!(matches!("2 2\n0.9 x\n0.1 0.9".parse::<Dmc>(), Err(Error::Parse { line: 2, .. })));
        assert!(matches!("2 2\n0.9 0.2\n0.1 0.9".parse::<Dmc>(), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn parses_code() {
        let c: BlockCode = "3 2\n0 0 0\n1 1 1\n".parse().unwrap();
        assert_eq!(c, BlockCode::repetition(3).unwrap());
        assert!("3 2\n0 0 0\n".parse::<BlockCode>().is_err());
    }
}
