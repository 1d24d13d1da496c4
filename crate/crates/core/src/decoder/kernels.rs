//! Single-message node rules.
//!
//! Each function computes one outgoing message from the incoming messages of
//! the *other* neighbours (the exclusion set is the caller's job). The
//! decoder uses check-wide versions of these rules that process a whole
//! check node at once; these scalar forms are the readable reference and are
//! what the decoder is tested against.

use super::{min_log_magnitude, LLR_CLAMP};
use crate::real::Real;

/// Variable-to-check message: channel LLR plus the other incoming check
/// messages.
pub fn vn_update<F: Real>(llr: F, incoming: &[F]) -> F {
    incoming.iter().fold(llr, |acc, &m| acc + m)
}

/// Sum-product check rule on LLR-domain inputs:
/// `2·atanh(∏ tanh(μ/2))`, with inputs clamped to `±LLR_CLAMP` and the
/// product to `±ATANH_CLAMP`. Evaluated as `sign·φ(Σ φ(|μ|))`.
pub fn cn_update_spa<F: Real>(incoming: &[F]) -> F {
    let limit = F::from_f64(LLR_CLAMP);
    let floor = F::from_f64(min_log_magnitude());
    let mut s = F::zero();
    let mut negative = false;
    for &m in incoming {
        let x = m.clamp_abs(limit);
        s += x.abs().phi();
        negative ^= x.is_negative();
    }
    let mag = if s < floor { floor } else { s }.phi();
    if negative {
        -mag
    } else {
        mag
    }
}

/// Smallest magnitude and sign parity (true = negative) of `incoming`.
/// Uses comparisons only.
#[inline]
fn min_abs_and_parity<F: Real>(incoming: &[F]) -> (F, bool) {
    let mut min = F::infinity();
    let mut neg = false;
    for &m in incoming {
        let a = m.abs();
        if a < min {
            min = a;
        }
        neg ^= m.is_negative();
    }
    (min, neg)
}

/// Min-sum: smallest incoming magnitude with the product of signs.
pub fn cn_update_ms<F: Real>(incoming: &[F]) -> F {
    let (min, neg) = min_abs_and_parity(incoming);
    if neg && min > F::zero() {
        -min
    } else {
        min
    }
}

/// Offset min-sum with a global offset `beta`.
pub fn cn_update_oms<F: Real>(incoming: &[F], beta: F) -> F {
    cn_update_noms(incoming, beta)
}

/// Neural offset min-sum: `ReLU(min|μ| − β) · ∏ sign(μ)`, with the sign
/// applied by negation so that no multiplication is performed.
pub fn cn_update_noms<F: Real>(incoming: &[F], beta: F) -> F {
    let (min, neg) = min_abs_and_parity(incoming);
    let off = min - beta;
    if off > F::zero() {
        if neg {
            -off
        } else {
            off
        }
    } else {
        F::zero()
    }
}

/// Soft output: channel LLR plus all incoming check messages.
pub fn marginalize<F: Real>(llr: F, incoming: &[F]) -> F {
    vn_update(llr, incoming)
}

/// Weighted soft output of the neural sum-product decoder.
pub fn marginalize_weighted<F: Real>(llr: F, llr_weight: F, incoming: &[F], weights: &[F]) -> F {
    incoming
        .iter()
        .zip(weights)
        .fold(llr_weight * llr, |acc, (&m, &w)| acc + w * m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Counted;

    #[test]
    fn vn_examples() {
        assert_eq!(vn_update(1.0, &[0.5, -0.25]), 1.25);
        assert_eq!(vn_update(-3.0, &[0.0, 0.0]), -3.0);
        assert_eq!(vn_update(2.5, &[]), 2.5);
    }

    #[test]
    fn spa_examples() {
        assert_eq!(cn_update_spa(&[0.0, 2.0, -4.0]), 0.0);
        // 2·atanh(tanh(1)²) to 30 digits: 1.32500274735786443093775119683
        assert!((cn_update_spa(&[2.0, 2.0]) - 1.325_002_747_357_864_4).abs() < 1e-12);
        assert!(cn_update_spa(&[3.0, -5.0, 2.0]) < 0.0);
        assert!(cn_update_spa(&[3.0, -5.0, -2.0]) > 0.0);
    }

    #[test]
    fn spa_saturates_at_clamp() {
        let big: f64 = cn_update_spa(&[1e6, 1e6]);
        assert_eq!(big, crate::real::phi(min_log_magnitude()));
        // 2·atanh(1 − 1e-12) = ln(2e12 − 1) = 28.3241...; the f64 clamp is within 1e-4
        assert!((big - (2e12f64 - 1.0).ln()).abs() < 1e-4);
        assert_eq!(cn_update_spa(&[1e6, -1e6]), -big);
        assert_eq!(cn_update_spa(&[0.0, 0.7]), 0.0);
    }

    #[test]
    fn spa_keeps_precision_for_large_inputs() {
        // 2·atanh(tanh(12)·tanh(13)) to 30 digits: 23.8730719889570275035568674454
        assert!((cn_update_spa(&[24.0, 26.0]) - 23.873_071_988_957_027).abs() < 1e-12);
    }

    #[test]
    fn min_sum_examples() {
        assert_eq!(cn_update_ms(&[3.0, -5.0, 2.0]), -2.0);
        assert_eq!(cn_update_ms(&[1.0]), 1.0);
        assert_eq!(cn_update_ms(&[-1.0]), -1.0);
        assert_eq!(cn_update_ms(&[4.0, 0.0, -1.0]), 0.0);
    }

    #[test]
    fn offset_examples() {
        assert_eq!(cn_update_oms(&[3.0, -5.0, 2.0], 0.5), -1.5);
        assert_eq!(cn_update_oms(&[3.0, -5.0, 2.0], 3.0), 0.0);
        assert_eq!(cn_update_noms(&[3.0, -5.0, 2.0], -1.0), -3.0);
        assert_eq!(cn_update_noms(&[3.0, -5.0, 2.0], 7.0), 0.0);
        // ReLU at exactly zero stays zero
        assert_eq!(cn_update_noms(&[2.0, 2.0], 2.0), 0.0);
    }

    #[test]
    fn offset_rule_uses_no_multiplications() {
        Counted::reset();
        let inc = [Counted(3.0), Counted(-5.0), Counted(2.0)];
        assert_eq!(cn_update_noms(&inc, Counted(0.5)), Counted(-1.5));
        assert_eq!(cn_update_ms(&inc), Counted(-2.0));
        assert_eq!(Counted::multiplications(), 0);
        let _ = cn_update_spa(&inc);
        assert!(Counted::multiplications() > 0);
    }

    #[test]
    fn marginal_examples() {
        assert_eq!(marginalize(1.0, &[]), 1.0);
        assert_eq!(marginalize(1.0, &[2.0, -0.5]), 2.5);
        assert_eq!(marginalize_weighted(1.0, 1.0, &[2.0, -0.5], &[1.0, 1.0]), 2.5);
        assert_eq!(marginalize_weighted(1.0, 0.5, &[2.0, -0.5], &[2.0, 0.0]), 4.5);
    }
}
