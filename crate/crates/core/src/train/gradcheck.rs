//! Central-difference check of the analytic gradients.
//!
//! A coordinate is kink-adjacent when moving it by `±kink_radius` changes
//! any discrete decision of the forward pass on any frame: an argmin, a
//! ReLU gate, a message sign or a clamp. The loss is not differentiable there and the
//! comparison is skipped.

use super::backward::LossMode;
use super::{minibatch_gradient, mean_loss, Minibatch};
use crate::code::LinearCode;
use crate::decoder::{decode, DecodeTape, DecoderParams, min_log_magnitude, LLR_CLAMP};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordinateCheck {
    /// Index into [`DecoderParams::trainable`].
    pub index: usize,
    pub analytic: f64,
    pub numeric: f64,
    pub kink_adjacent: bool,
}

/// Gradients smaller than this are compared in absolute terms. A central
/// difference with `h = 1e-4` on a loss near 0.1 carries rounding noise of
/// a few `1e-13`, which is all of a `1e-8` gradient's fifth digit. At the
/// floor the noise stays well below a `1e-5` tolerance.
pub const GRADIENT_FLOOR: f64 = 1e-7;

impl CoordinateCheck {
    /// `|a − f| / max(|a|, |f|, GRADIENT_FLOOR)`.
    pub fn relative_error(&self) -> f64 {
        let scale = self.analytic.abs().max(self.numeric.abs()).max(GRADIENT_FLOOR);
        (self.analytic - self.numeric).abs() / scale
    }
}

/// Compares analytic and finite-difference gradients of the mean loss over
/// `frames` for the trainable coordinates `indices`.
pub fn check_gradient(
    code: &LinearCode,
    params: &DecoderParams,
    frames: &Minibatch,
    indices: &[usize],
    h: f64,
    kink_radius: f64,
) -> Result<Vec<CoordinateCheck>> {
    let analytic = minibatch_gradient(code, params, frames, LossMode::Final)?.flatten();
    let base_pattern = pattern(code, params, frames)?;
    let theta = params.trainable();
    let mut out = Vec::with_capacity(indices.len());
    for &i in indices {
        let at = |delta: f64| {
            let mut p = params.clone();
            let mut th = theta.clone();
            th[i] += delta;
            p.set_trainable(&th);
            p
        };
        let numeric = (mean_loss(code, &at(h), frames)? - mean_loss(code, &at(-h), frames)?) / (2.0 * h);
        let kink_adjacent = pattern(code, &at(kink_radius), frames)? != base_pattern
            || pattern(code, &at(-kink_radius), frames)? != base_pattern;
        out.push(CoordinateCheck { index: i, analytic: analytic[i], numeric, kink_adjacent });
    }
    Ok(out)
}

/// Every discrete decision taken while decoding `frames`.
fn pattern(code: &LinearCode, params: &DecoderParams, frames: &Minibatch) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for llr in &frames.llr {
        let (_, tape) = decode::<f64>(code, params, llr, true)?;
        push_decisions(&tape.expect("tape requested"), &mut out);
    }
    Ok(out)
}

fn push_decisions(tape: &DecodeTape<f64>, out: &mut Vec<u32>) {
    if tape.variant.is_min_sum_family() {
        for (&a, &r) in tape.argmin_edge.iter().zip(&tape.relu_active) {
            out.push(a);
            out.push(r as u32);
        }
        out.extend(tape.v2c.iter().map(|&m| (m < 0.0) as u32));
    } else {
        for (&pre, &s) in tape.v2c_pre.iter().zip(&tape.cn_logmag) {
            out.push((pre.abs() < LLR_CLAMP) as u32);
            out.push((s > min_log_magnitude()) as u32);
        }
    }
}
