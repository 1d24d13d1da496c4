//! Narrow-sense binary primitive BCH codes.

use serde::{Deserialize, Serialize};

use crate::code::{LinearCode, ParityCheckMatrix};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// Primitive polynomials for GF(2^m), 2 ≤ m ≤ 8, bit i = coefficient of x^i.
const PRIMITIVE_POLYS: [u32; 7] = [0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D];

/// Shape of the parity-check matrix built for a BCH code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HForm {
    /// `H = [I | Pᵀ]` matching the systematic encoder.
    #[default]
    Systematic,
    /// Cyclic shifts of the reciprocal parity polynomial `h(x) = (xⁿ−1)/g(x)`.
    Cyclic,
}

impl std::str::FromStr for HForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "systematic" => Ok(HForm::Systematic),
            "cyclic" => Ok(HForm::Cyclic),
            other => Err(Error::Config(format!("unknown H form {other:?}"))),
        }
    }
}

/// GF(2^m) with log/antilog tables.
#[derive(Debug, Clone)]
pub struct Gf2m {
    m: u32,
    poly: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Gf2m {
    pub fn new(m: u32) -> Result<Self> {
        if !(2..=8).contains(&m) {
            return Err(Error::Construction(format!("field degree m={m} outside 2..=8")));
        }
        let poly = PRIMITIVE_POLYS[(m - 2) as usize];
        let order = (1u32 << m) - 1;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; (order + 1) as usize];
        let mut x = 1u32;
        for (i, e) in exp.iter_mut().enumerate() {
            *e = x;
            log[x as usize] = i as u32;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        Ok(Gf2m { m, poly, exp, log })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Number of nonzero elements, `2^m − 1`.
    pub fn order(&self) -> u32 {
        (1 << self.m) - 1
    }

    pub fn primitive_poly(&self) -> u32 {
        self.poly
    }

    /// `α^i`.
    pub fn alpha_pow(&self, i: u32) -> u32 {
        self.exp[(i % self.order()) as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(s % self.order()) as usize]
    }

    /// Cyclotomic coset of `i` modulo `2^m − 1`, sorted.
    pub fn cyclotomic_coset(&self, i: u32) -> Vec<u32> {
        let order = self.order();
        let mut coset = vec![i % order];
        let mut j = (2 * i) % order;
        while j != coset[0] {
            coset.push(j);
            j = (2 * j) % order;
        }
        coset.sort_unstable();
        coset
    }

    /// Minimal polynomial of `α^i` over GF(2), coefficients low to high.
    pub fn minimal_poly(&self, i: u32) -> Vec<u8> {
        // ∏ (x + α^j) over the coset, computed with GF(2^m) coefficients.
        let mut p: Vec<u32> = vec![1];
        for j in self.cyclotomic_coset(i) {
            let root = self.alpha_pow(j);
            let mut next = vec![0u32; p.len() + 1];
            for (d, &c) in p.iter().enumerate() {
                next[d + 1] ^= c;
                next[d] ^= self.mul(c, root);
            }
            p = next;
        }
        p.into_iter()
            .map(|c| {
                debug_assert!(c <= 1, "minimal polynomial must have binary coefficients");
                c as u8
            })
            .collect()
    }
}

fn poly_mul(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 1 {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= y;
            }
        }
    }
    out
}

/// Remainder of `a` modulo monic `g` over GF(2).
fn poly_rem(a: &[u8], g: &[u8]) -> Vec<u8> {
    let dg = g.len() - 1;
    let mut r = a.to_vec();
    for i in (dg..r.len()).rev() {
        if r[i] == 1 {
            for (j, &c) in g.iter().enumerate() {
                r[i - dg + j] ^= c;
            }
        }
    }
    r.truncate(dg);
    r.resize(dg, 0);
    r
}

/// Quotient of `a` by monic `g`, assuming exact division.
fn poly_div_exact(a: &[u8], g: &[u8]) -> Vec<u8> {
    let dg = g.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0u8; a.len() - dg];
    for i in (dg..r.len()).rev() {
        if r[i] == 1 {
            q[i - dg] = 1;
            for (j, &c) in g.iter().enumerate() {
                r[i - dg + j] ^= c;
            }
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0), "division not exact");
    q
}

/// Generator polynomial of the narrow-sense BCH code of length `2^m − 1`
/// and designed error-correcting capability `t`: the product of the distinct
/// minimal polynomials of `α, α³, …, α^(2t−1)`.
pub fn generator_poly(field: &Gf2m, t: u32) -> Vec<u8> {
    let mut seen: Vec<Vec<u32>> = Vec::new();
    let mut g = vec![1u8];
    for i in (1..2 * t).step_by(2) {
        let coset = field.cyclotomic_coset(i);
        if seen.contains(&coset) {
            continue;
        }
        g = poly_mul(&g, &field.minimal_poly(i));
        seen.push(coset);
    }
    g
}

/// Builds the BCH code of length `n = 2^m − 1` correcting `t` errors.
///
/// Bit `j` of a codeword is the coefficient of `x^j`. The encoder is
/// systematic with parity in positions `0..n−k` and the message in
/// `n−k..n`, i.e. `c(x) = x^{n−k}·m(x) + (x^{n−k}·m(x) mod g(x))`.
pub fn construct_bch(m: u32, n: usize, t: u32, form: HForm) -> Result<LinearCode> {
    let field = Gf2m::new(m)?;
    if n != field.order() as usize {
        return Err(Error::Construction(format!(
            "length {n} is not 2^{m} - 1 = {}",
            field.order()
        )));
    }
    if t == 0 {
        return Err(Error::Construction("designed t must be positive".into()));
    }
    let g = generator_poly(&field, t);
    let r = g.len() - 1;
    if r >= n {
        return Err(Error::Construction(format!(
            "t={t} leaves no information bits (deg g = {r} ≥ n = {n})"
        )));
    }
    let k = n - r;

    let mut gen = BitMatrix::zeros(k, n);
    let mut parity_cols = BitMatrix::zeros(r, k);
    for i in 0..k {
        let mut mono = vec![0u8; r + i + 1];
        mono[r + i] = 1;
        let rem = poly_rem(&mono, &g);
        gen.set(i, r + i, true);
        for (j, &b) in rem.iter().enumerate() {
            if b == 1 {
                gen.set(i, j, true);
                parity_cols.set(j, i, true);
            }
        }
    }

    let h_bits = match form {
        HForm::Systematic => {
            let mut h = BitMatrix::zeros(r, n);
            for j in 0..r {
                h.set(j, j, true);
                for i in 0..k {
                    if parity_cols.get(j, i) {
                        h.set(j, r + i, true);
                    }
                }
            }
            h
        }
        HForm::Cyclic => {
            let mut xn1 = vec![0u8; n + 1];
            xn1[0] = 1;
            xn1[n] = 1;
            let hpoly = poly_div_exact(&xn1, &g);
            // Row j holds the reciprocal of h(x) shifted by j: H[j][j + l] = h_{k−l}.
            let mut h = BitMatrix::zeros(r, n);
            for j in 0..r {
                for l in 0..=k {
                    if hpoly[k - l] == 1 {
                        h.set(j, j + l, true);
                    }
                }
            }
            h
        }
    };
    let h = ParityCheckMatrix::new(h_bits)?;
    let info: Vec<usize> = (r..n).collect();
    let form_name = match form {
        HForm::Systematic => "systematic",
        HForm::Cyclic => "cyclic",
    };
    let gpoly: String = g.iter().rev().map(|&b| if b == 1 { '1' } else { '0' }).collect();
    Ok(LinearCode::from_parts(format!("BCH({n},{k})"), h, gen, info)?
        .with_metadata("primitive_poly", format!("{:#x}", field.primitive_poly()))
        .with_metadata("generator_poly", gpoly)
        .with_metadata("designed_t", t.to_string())
        .with_metadata("h_form", form_name))
}

/// Smallest designed `t` giving dimension `k` for length `2^m − 1`, if any.
pub fn designed_t_for(m: u32, k: usize) -> Result<u32> {
    let field = Gf2m::new(m)?;
    let n = field.order() as usize;
    for t in 1..=(n as u32) / 2 {
        let deg = generator_poly(&field, t).len() - 1;
        if n - deg == k {
            return Ok(t);
        }
        if n <= deg {
            break;
        }
    }
    Err(Error::Construction(format!("no narrow-sense BCH code of length {n} has k={k}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_tables_are_consistent() {
        for m in 2..=8 {
            let f = Gf2m::new(m).unwrap();
            let mut seen = vec![false; 1 << m];
            for i in 0..f.order() {
                let a = f.alpha_pow(i);
                assert!(!seen[a as usize], "α must be primitive for m={m}");
                seen[a as usize] = true;
            }
        }
    }

    #[test]
    fn known_minimal_polys_gf64() {
        let f = Gf2m::new(6).unwrap();
        // m1 = x^6 + x + 1, m3 = x^6 + x^4 + x^2 + x + 1
        assert_eq!(f.minimal_poly(1), vec![1, 1, 0, 0, 0, 0, 1]);
        assert_eq!(f.minimal_poly(3), vec![1, 1, 1, 0, 1, 0, 1]);
        // coset of 9 has size 3
        assert_eq!(f.minimal_poly(9).len(), 4);
    }

    #[test]
    fn hamming_is_bch_t1() {
        let code = construct_bch(3, 7, 1, HForm::Systematic).unwrap();
        assert_eq!((code.n(), code.k()), (7, 4));
    }

    #[test]
    fn too_large_t_is_an_error() {
        assert!(construct_bch(3, 7, 4, HForm::Systematic).is_err());
        assert!(construct_bch(9, 511, 1, HForm::Systematic).is_err());
    }

    #[test]
    fn cyclic_and_systematic_forms_define_the_same_code() {
        let a = construct_bch(6, 63, 3, HForm::Systematic).unwrap();
        let b = construct_bch(6, 63, 3, HForm::Cyclic).unwrap();
        assert_eq!(b.parity_check().rank(), 18);
        let gt = a.generator().transpose();
        assert!(b.parity_check().bits().mul(&gt).is_zero());
    }

    #[test]
    fn designed_t_lookup() {
        assert_eq!(designed_t_for(6, 45).unwrap(), 3);
        assert_eq!(designed_t_for(6, 36).unwrap(), 5);
        assert_eq!(designed_t_for(7, 106).unwrap(), 3);
        assert!(designed_t_for(6, 40).is_err());
    }
}
