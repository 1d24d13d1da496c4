//! Reverse-mode derivatives of the loss through an unrolled decode.
//!
//! Min-sum family: the check rule is piecewise linear. Only the recorded
//! argmin input and the offset receive gradient, and only when the ReLU
//! passed a nonzero value. Signs are treated as constants.
//!
//! Sum-product family: the gradient runs through the weighted sums,
//! `tanh(x/2)`, the excluded products and `2·atanh`, the last two expressed
//! through the recorded log-magnitude. A clamped forward value has zero
//! gradient.

use serde::{Deserialize, Serialize};

use super::loss::{loss_cross_entropy, loss_gradient};
use crate::code::LinearCode;
use crate::decoder::{DecodeTape, DecoderParams, FanIn, NspaWeights, Variant, min_log_magnitude, LLR_CLAMP};
use crate::error::{Error, Result};

/// Which soft outputs enter the loss.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossMode {
    /// Cross-entropy of the last iteration's soft output.
    Final,
    /// Mean of the cross-entropies after every iteration.
    #[default]
    AllIterations,
}

/// Loss and gradients for one frame or a whole minibatch.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientBuffer {
    /// Congruent with `DecoderParams::offsets` (tied slots, not edges).
    pub d_offsets: Vec<f64>,
    pub d_weights: Option<NspaWeights>,
    pub loss: f64,
}

impl GradientBuffer {
    pub fn zeros_for(params: &DecoderParams) -> Self {
        GradientBuffer {
            d_offsets: vec![0.0; params.offsets.as_ref().map_or(0, |o| o.values.len())],
            d_weights: params.weights.as_ref().map(NspaWeights::zeros_like),
            loss: 0.0,
        }
    }

    /// Same layout as [`DecoderParams::trainable`].
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = self.d_offsets.clone();
        if let Some(w) = &self.d_weights {
            out.extend(w.iter().copied());
        }
        out
    }

    pub fn add_assign(&mut self, other: &GradientBuffer) {
        self.loss += other.loss;
        for (a, b) in self.d_offsets.iter_mut().zip(&other.d_offsets) {
            *a += b;
        }
        if let (Some(a), Some(b)) = (self.d_weights.as_mut(), other.d_weights.as_ref()) {
            for (x, y) in a.iter_mut().zip(b.iter()) {
                *x += y;
            }
        }
    }

    pub fn scale(&mut self, f: f64) {
        self.loss *= f;
        self.d_offsets.iter_mut().for_each(|x| *x *= f);
        if let Some(w) = self.d_weights.as_mut() {
            w.iter_mut().for_each(|x| *x *= f);
        }
    }

    pub fn norm(&self) -> f64 {
        self.flatten().iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Backward pass bound to a code and parameter set; reusable across frames.
pub struct Backprop<'a> {
    code: &'a LinearCode,
    params: &'a DecoderParams,
    mode: LossMode,
    fan: Option<FanIn>,
}

impl<'a> Backprop<'a> {
    pub fn new(code: &'a LinearCode, params: &'a DecoderParams, mode: LossMode) -> Result<Self> {
        params.validate(code)?;
        let fan = (!params.variant.is_min_sum_family()).then(|| FanIn::new(code.graph()));
        Ok(Backprop { code, params, mode, fan })
    }

    /// Loss and parameter gradients for one recorded decode with truth `x`.
    pub fn gradient(&self, tape: &DecodeTape<f64>, x: &[u8]) -> Result<GradientBuffer> {
        let graph = self.code.graph();
        let p = self.params;
        if tape.variant != p.variant
            || tape.iterations != p.iterations
            || tape.n != graph.num_vars()
            || tape.num_edges != graph.num_edges()
        {
            return Err(Error::Argument("tape was not recorded with these parameters".into()));
        }
        if x.len() != tape.n {
            return Err(Error::Argument(format!("expected {} truth bits, got {}", tape.n, x.len())));
        }
        // Per-iteration ∂J/∂s^t; only the last one is nonzero in Final mode.
        let n = tape.n;
        let t_max = tape.iterations;
        let mut g_soft = vec![0.0; t_max * n];
        let loss = match self.mode {
            LossMode::Final => {
                let s = tape.final_soft();
                loss_gradient(s, x, &mut g_soft[(t_max - 1) * n..]);
                loss_cross_entropy(s, x)
            }
            LossMode::AllIterations => {
                let w = 1.0 / t_max as f64;
                let mut total = 0.0;
                for t in 0..t_max {
                    let s = tape.soft_at(t);
                    let g = &mut g_soft[t * n..(t + 1) * n];
                    loss_gradient(s, x, g);
                    g.iter_mut().for_each(|v| *v *= w);
                    total += loss_cross_entropy(s, x);
                }
                total * w
            }
        };
        let mut out = GradientBuffer::zeros_for(p);
        out.loss = loss;
        if p.variant.is_min_sum_family() {
            self.backward_min_sum(tape, &g_soft, &mut out);
        } else {
            self.backward_spa(tape, &g_soft, &mut out);
        }
        Ok(out)
    }

    fn backward_min_sum(&self, tape: &DecodeTape<f64>, g_soft: &[f64], out: &mut GradientBuffer) {
        let graph = self.code.graph();
        let (n, e_count, t_max) = (tape.n, tape.num_edges, tape.iterations);
        let has_offsets = self.params.offsets.is_some();
        // ∂J/∂β for every (t, e), reduced into tied slots at the end.
        let mut d_beta = if has_offsets { vec![0.0; t_max * e_count] } else { Vec::new() };
        let mut g_c2v = vec![0.0; e_count];
        let mut g_v2c = vec![0.0; e_count];
        for t in (0..t_max).rev() {
            // Soft output s^t = l + Σ c2v^t.
            for v in 0..n {
                let g = g_soft[t * n + v];
                if g != 0.0 {
                    for &e in graph.var_edges(v) {
                        g_c2v[e] += g;
                    }
                }
            }
            // Check nodes.
            g_v2c.iter_mut().for_each(|x| *x = 0.0);
            let v2c = tape.v2c_at(t);
            for c in 0..graph.num_checks() {
                let r = graph.check_edges(c);
                let parity = r.clone().fold(false, |acc, e| acc ^ (v2c[e] < 0.0));
                for e in r {
                    let i = t * e_count + e;
                    let g = g_c2v[e];
                    if g == 0.0 || !tape.relu_active[i] {
                        continue;
                    }
                    let sgn = if parity ^ (v2c[e] < 0.0) { -1.0 } else { 1.0 };
                    if has_offsets {
                        d_beta[i] = -sgn * g;
                    }
                    let arg = tape.argmin_edge[i] as usize;
                    let s_arg = if v2c[arg] < 0.0 { -1.0 } else { 1.0 };
                    g_v2c[arg] += g * sgn * s_arg;
                }
            }
            // Variable nodes: v2c^t[e] = l + Σ_{e' ≠ e} c2v^{t−1}[e'].
            g_c2v.iter_mut().for_each(|x| *x = 0.0);
            if t > 0 {
                for v in 0..n {
                    let edges = graph.var_edges(v);
                    let total: f64 = edges.iter().map(|&e| g_v2c[e]).sum();
                    for &e in edges {
                        g_c2v[e] = total - g_v2c[e];
                    }
                }
            }
        }
        if has_offsets {
            let tying = self.params.offsets.as_ref().unwrap().tying;
            for t in 0..t_max {
                for e in 0..e_count {
                    out.d_offsets[tying.slot(t, e, graph)] += d_beta[t * e_count + e];
                }
            }
        }
    }

    fn backward_spa(&self, tape: &DecodeTape<f64>, g_soft: &[f64], out: &mut GradientBuffer) {
        let graph = self.code.graph();
        let fan = self.fan.as_ref().expect("fan-in built for sum-product variants");
        let (n, e_count, t_max) = (tape.n, tape.num_edges, tape.iterations);
        let f_len = fan.len();
        let ones;
        let w = match &self.params.weights {
            Some(w) => w,
            None => {
                ones = NspaWeights::ones(t_max, graph);
                &ones
            }
        };
        let mut dw = out.d_weights.take();
        let llr = &tape.llr;
        let mut g_c2v = vec![0.0; e_count];
        let mut g_p = vec![0.0; e_count];
        let mut g_u = vec![0.0; e_count];
        let mut scratch_u = Vec::new();
        let mut scratch_g = Vec::new();
        let mut prefix = Vec::new();
        let mut suffix = Vec::new();
        for t in (0..t_max).rev() {
            // Soft output s^t = w_l·l + Σ w_e·c2v^t.
            let c2v = tape.c2v_at(t);
            for v in 0..n {
                let g = g_soft[t * n + v];
                if g == 0.0 {
                    continue;
                }
                if let Some(d) = dw.as_mut() {
                    d.output_llr[v] += g * llr[v];
                }
                for &e in graph.var_edges(v) {
                    if let Some(d) = dw.as_mut() {
                        d.output_edge[e] += g * c2v[e];
                    }
                    g_c2v[e] += g * w.output_edge[e];
                }
            }
            // c2v = 2·atanh(clamp(p)) with |p| = e^{−S}, so 1 − p² = −expm1(−2S).
            let floor = min_log_magnitude();
            for e in 0..e_count {
                let s = tape.cn_logmag[t * e_count + e];
                g_p[e] = if s > floor { g_c2v[e] * 2.0 / -(-2.0 * s).exp_m1() } else { 0.0 };
            }
            // p_e = ∏_{e' ≠ e} u_{e'} within each check.
            let u_all = tape.v2c_at(t);
            for c in 0..graph.num_checks() {
                let r = graph.check_edges(c);
                let u = &u_all[r.clone()];
                let gp = &g_p[r.clone()];
                let d = u.len();
                for j in 0..d {
                    scratch_u.clear();
                    scratch_g.clear();
                    for i in (0..d).filter(|&i| i != j) {
                        scratch_u.push(u[i]);
                        scratch_g.push(gp[i]);
                    }
                    g_u[r.start + j] = sum_of_excluded_products(&scratch_u, &scratch_g, &mut prefix, &mut suffix);
                }
            }
            // u = tanh(clamp(pre)/2); then pre = w_in·l + Σ w_f·c2v^{t−1}[src].
            let w_edge = &w.edge[t * f_len..(t + 1) * f_len];
            let prev = (t > 0).then(|| tape.c2v_at(t - 1));
            g_c2v.iter_mut().for_each(|x| *x = 0.0);
            for e in 0..e_count {
                let i = t * e_count + e;
                let pre = tape.v2c_pre[i];
                let ch = (0.5 * pre).cosh();
                let g_pre = if pre.abs() < LLR_CLAMP { g_u[e] * 0.5 / (ch * ch) } else { 0.0 };
                if g_pre == 0.0 {
                    continue;
                }
                let v = graph.edge_var(e);
                if let Some(d) = dw.as_mut() {
                    d.input[t * n + v] += g_pre * llr[v];
                }
                if let Some(prev) = prev {
                    for (k, &src) in fan.range(e).zip(fan.sources(e)) {
                        if let Some(d) = dw.as_mut() {
                            d.edge[t * f_len + k] += g_pre * prev[src];
                        }
                        g_c2v[src] += g_pre * w_edge[k];
                    }
                }
            }
        }
        out.d_weights = dw;
    }
}

/// `Σ_i g_i · ∏_{k ≠ i} u_k`.
fn sum_of_excluded_products(u: &[f64], g: &[f64], prefix: &mut Vec<f64>, suffix: &mut Vec<f64>) -> f64 {
    let d = u.len();
    prefix.clear();
    prefix.push(1.0);
    for i in 0..d {
        prefix.push(prefix[i] * u[i]);
    }
    suffix.clear();
    suffix.resize(d + 1, 1.0);
    for i in (0..d).rev() {
        suffix[i] = suffix[i + 1] * u[i];
    }
    (0..d).map(|i| g[i] * prefix[i] * suffix[i + 1]).sum()
}

/// Decodes `llr` with a tape and returns loss and gradients.
pub fn loss_and_gradient(
    code: &LinearCode,
    params: &DecoderParams,
    llr: &[f64],
    x: &[u8],
    mode: LossMode,
) -> Result<GradientBuffer> {
    let (_, tape) = crate::decoder::decode(code, params, llr, true)?;
    Backprop::new(code, params, mode)?.gradient(&tape.expect("tape requested"), x)
}

/// Min-sum-family backward pass with the final-iteration loss.
pub fn backward(code: &LinearCode, params: &DecoderParams, tape: &DecodeTape<f64>, x: &[u8]) -> Result<GradientBuffer> {
    if !params.variant.is_min_sum_family() {
        return Err(Error::Argument(format!("{} is not a min-sum variant", params.variant)));
    }
    Backprop::new(code, params, LossMode::Final)?.gradient(tape, x)
}

/// Sum-product-family backward pass with the final-iteration loss.
pub fn backward_nspa(
    code: &LinearCode,
    params: &DecoderParams,
    tape: &DecodeTape<f64>,
    x: &[u8],
) -> Result<GradientBuffer> {
    if !matches!(params.variant, Variant::Nspa | Variant::Spa) {
        return Err(Error::Argument(format!("{} is not a sum-product variant", params.variant)));
    }
    Backprop::new(code, params, LossMode::Final)?.gradient(tape, x)
}
