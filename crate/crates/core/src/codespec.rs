//! Textual code descriptions used by the command line and parameter files.
//!
//! `bch:N:K` builds a narrow-sense BCH code, `spc:N` the single parity-check
//! code of length `N`, `uncoded:N` the rate-one identity code. Anything else
//! is read as a path to an alist file.

use std::fs::File;
use std::path::Path;

use crate::alist::load_alist;
use crate::bch::{construct_bch, designed_t_for, HForm};
use crate::code::{LinearCode, ParityCheckMatrix};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

pub fn bch_from_nk(n: usize, k: usize, form: HForm) -> Result<LinearCode> {
    let m = (n + 1).trailing_zeros();
    if n < 3 || (n + 1) != 1 << m {
        return Err(Error::Construction(format!("BCH length {n} is not 2^m - 1")));
    }
    let t = designed_t_for(m, k)?;
    construct_bch(m, n, t, form)
}

pub fn single_parity_check(n: usize) -> Result<LinearCode> {
    if n < 2 {
        return Err(Error::Construction("a parity check needs at least two bits".into()));
    }
    let h = ParityCheckMatrix::new(BitMatrix::from_rows(&[vec![1u8; n]]))?;
    LinearCode::from_parity_check(format!("SPC({n},{})", n - 1), h)
}

fn numbers(rest: &str, want: usize, spec: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = rest.split([':', ',']).map(str::trim).collect();
    if parts.len() != want {
        return Err(Error::Argument(format!("cannot read code spec {spec:?}")));
    }
    parts
        .iter()
        .map(|p| p.parse().map_err(|_| Error::Argument(format!("bad number {p:?} in code spec {spec:?}"))))
        .collect()
}

/// Builds the code described by `spec`.
pub fn parse_code_spec(spec: &str, form: HForm) -> Result<LinearCode> {
    let lower = spec.to_ascii_lowercase();
    if let Some(rest) = lower.strip_prefix("bch:") {
        let v = numbers(rest, 2, spec)?;
        return bch_from_nk(v[0], v[1], form);
    }
    if let Some(rest) = lower.strip_prefix("spc:") {
        return single_parity_check(numbers(rest, 1, spec)?[0]);
    }
    if let Some(rest) = lower.strip_prefix("uncoded:") {
        return Ok(LinearCode::uncoded(numbers(rest, 1, spec)?[0]));
    }
    let path = Path::new(spec);
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
    let file = File::open(path).map_err(|e| Error::Argument(format!("cannot open code file {spec:?}: {e}")))?;
    load_alist(file, name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_named_codes() {
        let c = parse_code_spec("bch:63:36", HForm::Systematic).unwrap();
        assert_eq!((c.n(), c.k()), (63, 36));
        let c = parse_code_spec("BCH:127,106", HForm::Cyclic).unwrap();
        assert_eq!((c.n(), c.k()), (127, 106));
        let c = parse_code_spec("spc:3", HForm::Systematic).unwrap();
        assert_eq!((c.n(), c.k(), c.graph().num_edges()), (3, 2, 3));
        assert_eq!(parse_code_spec("uncoded:8", HForm::Systematic).unwrap().k(), 8);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(parse_code_spec("bch:64:36", HForm::Systematic).is_err());
        assert!(parse_code_spec("bch:63:37", HForm::Systematic).is_err());
        assert!(parse_code_spec("bch:63", HForm::Systematic).is_err());
        assert!(parse_code_spec("/nonexistent/file.alist", HForm::Systematic).is_err());
    }
}
