//! Bitwise cross-entropy between soft outputs and transmitted bits.
//!
//! Soft outputs are LLRs with positive values favouring bit 0, so the
//! decoder's probability of bit 1 is `σ(−s)`.

/// `log σ(z)` without overflow.
#[inline]
pub fn log_sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        -(-z).exp().ln_1p()
    } else {
        z - z.exp().ln_1p()
    }
}

#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `H = −(1/n) Σ_v [x_v log P(bit 1) + (1 − x_v) log P(bit 0)]` with
/// `P(bit 1) = σ(−s_v)`.
pub fn loss_cross_entropy(s: &[f64], x: &[u8]) -> f64 {
    assert_eq!(s.len(), x.len(), "soft output and truth differ in length");
    let n = s.len() as f64;
    let total: f64 = s
        .iter()
        .zip(x)
        .map(|(&s, &b)| if b & 1 == 1 { -log_sigmoid(-s) } else { -log_sigmoid(s) })
        .sum();
    total / n
}

/// `∂H/∂s_v = (σ(s_v) + x_v − 1) / n`, written into `out`.
pub fn loss_gradient(s: &[f64], x: &[u8], out: &mut [f64]) {
    let n = s.len() as f64;
    for ((o, &s), &b) in out.iter_mut().zip(s).zip(x) {
        *o = if b & 1 == 1 { sigmoid(s) } else { -sigmoid(-s) } / n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uninformative_output_costs_log2() {
        assert!((loss_cross_entropy(&[0.0; 8], &[0; 8]) - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((loss_cross_entropy(&[0.0; 8], &[1; 8]) - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn confident_correct_output() {
        // −log σ(10) to 30 digits: 4.53988992168646467694878294414e-5
        let h = loss_cross_entropy(&[10.0; 4], &[0; 4]);
        assert!((h - 4.539_889_921_686_465e-5).abs() < 1e-18);
        let h = loss_cross_entropy(&[-10.0; 4], &[1; 4]);
        assert!((h - 4.539_889_921_686_465e-5).abs() < 1e-18);
    }

    #[test]
    fn confident_wrong_output_diverges_but_stays_finite() {
        let h = loss_cross_entropy(&[-1e4; 3], &[0; 3]);
        assert!(h.is_finite() && h > 10.0);
        assert!((h - 1e4).abs() < 1e-9);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let s = [-3.0, -0.2, 0.0, 0.7, 12.0];
        let x = [0u8, 1, 0, 1, 0];
        let mut g = [0.0; 5];
        loss_gradient(&s, &x, &mut g);
        for v in 0..5 {
            let h = 1e-6;
            let mut sp = s;
            let mut sm = s;
            sp[v] += h;
            sm[v] -= h;
            let fd = (loss_cross_entropy(&sp, &x) - loss_cross_entropy(&sm, &x)) / (2.0 * h);
            assert!((fd - g[v]).abs() < 1e-9, "{v}: {fd} vs {}", g[v]);
        }
    }
}
