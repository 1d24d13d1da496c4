//! Unrolled flooding-schedule belief propagation.
//!
//! Each iteration computes every variable-to-check message, then every
//! check-to-variable message. After the last iteration the soft output is
//! formed from the channel LLRs and the final check messages. Positive soft
//! values favour bit 0.

pub mod kernels;
pub mod params;
mod tape;

pub use params::{DecoderParams, FanIn, NspaWeights, Offsets, Tying, Variant};
pub use tape::DecodeTape;

use crate::code::{syndrome_check, LinearCode};
use crate::error::{Error, Result};
use crate::real::Real;

/// LLR-domain messages are clamped to this magnitude before `tanh`. Channel
/// LLRs beyond 30 are routine at 6 to 8 dB, so the limit sits well above
/// that to leave cycle-free decoding exact.
pub const LLR_CLAMP: f64 = 60.0;
/// The excluded tanh product `p` at a check node is clamped to this
/// magnitude before `2·atanh`, bounding check messages near 28.3.
pub const ATANH_CLAMP: f64 = 1.0 - 1e-12;

/// `−ln ATANH_CLAMP`: the same clamp on `S = −ln|p|`, the form in which
/// the sum-product check rule is evaluated.
#[inline]
pub fn min_log_magnitude() -> f64 {
    -(ATANH_CLAMP - 1.0).ln_1p()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SoftOutput<F> {
    /// Posterior LLR estimates.
    pub s: Vec<F>,
    /// `hard[v] = 1` iff `s[v] < 0`.
    pub hard: Vec<u8>,
    /// Iterations actually run (less than `T` only with early stopping).
    pub iterations_run: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecodeOptions {
    pub record_tape: bool,
    /// Stop as soon as the hard decision satisfies every check. Off by
    /// default: the unrolled decoder always runs all `T` iterations.
    pub early_stop: bool,
}

#[inline]
pub fn hard_decision<F: Real>(s: F) -> u8 {
    u8::from(s.is_negative())
}

enum Rule<F> {
    Spa,
    MinSum,
    Oms(F),
    /// Offsets expanded to `[T × E]`.
    Noms(Vec<F>),
    Nspa(NspaKernel<F>),
}

struct NspaKernel<F> {
    fan: FanIn,
    input: Vec<F>,
    edge: Vec<F>,
    output_llr: Vec<F>,
    output_edge: Vec<F>,
}

/// Scratch buffers for one decoding thread.
#[derive(Debug, Clone)]
pub struct Workspace<F> {
    v2c: Vec<F>,
    /// Sum-product family: `φ(|clamped v2c|)` per edge.
    logmag: Vec<F>,
    c2v: Vec<F>,
    prefix: Vec<F>,
    suffix: Vec<F>,
}

/// A decoder bound to a code and a parameter set.
///
/// Construction converts and expands the parameters once; decoding is then a
/// pure function of the input LLRs, so one `Decoder` can serve many threads,
/// each with its own [`Workspace`].
pub struct Decoder<'a, F: Real> {
    code: &'a LinearCode,
    variant: Variant,
    iterations: usize,
    rule: Rule<F>,
}

impl<'a, F: Real> Decoder<'a, F> {
    pub fn new(code: &'a LinearCode, params: &DecoderParams) -> Result<Self> {
        params.validate(code)?;
        let graph = code.graph();
        let conv = |xs: &[f64]| xs.iter().map(|&x| F::from_f64(x)).collect::<Vec<F>>();
        let rule = match params.variant {
            Variant::Spa => Rule::Spa,
            Variant::MinSum => Rule::MinSum,
            Variant::Oms => Rule::Oms(F::from_f64(params.offsets.as_ref().unwrap().values[0])),
            Variant::Noms => {
                let offsets = params.offsets.as_ref().unwrap();
                Rule::Noms(conv(&offsets.expand(params.iterations, graph)))
            }
            Variant::Nspa => {
                let w = params.weights.as_ref().unwrap();
                Rule::Nspa(NspaKernel {
                    fan: FanIn::new(graph),
                    input: conv(&w.input),
                    edge: conv(&w.edge),
                    output_llr: conv(&w.output_llr),
                    output_edge: conv(&w.output_edge),
                })
            }
        };
        Ok(Decoder { code, variant: params.variant, iterations: params.iterations, rule })
    }

    pub fn code(&self) -> &LinearCode {
        self.code
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn workspace(&self) -> Workspace<F> {
        let graph = self.code.graph();
        let max_dc = (0..graph.num_checks()).map(|c| graph.check_degree(c)).max().unwrap_or(0);
        Workspace {
            v2c: vec![F::zero(); graph.num_edges()],
            logmag: vec![F::zero(); graph.num_edges()],
            c2v: vec![F::zero(); graph.num_edges()],
            prefix: vec![F::zero(); max_dc + 1],
            suffix: vec![F::zero(); max_dc + 1],
        }
    }

    /// Decodes one frame of channel LLRs.
    pub fn decode(&self, llr: &[F]) -> Result<SoftOutput<F>> {
        let mut ws = self.workspace();
        Ok(self.decode_with(llr, &mut ws, DecodeOptions::default())?.0)
    }

    /// Decodes one frame reusing `ws`; records a tape if asked.
    pub fn decode_with(
        &self,
        llr: &[F],
        ws: &mut Workspace<F>,
        opts: DecodeOptions,
    ) -> Result<(SoftOutput<F>, Option<DecodeTape<F>>)> {
        let graph = self.code.graph();
        let (n, e_count, t_max) = (graph.num_vars(), graph.num_edges(), self.iterations);
        if llr.len() != n {
            return Err(Error::Argument(format!("expected {n} LLRs, got {}", llr.len())));
        }
        let mut tape = opts
            .record_tape
            .then(|| DecodeTape::new(self.variant, t_max, n, e_count, llr));
        ws.c2v.iter_mut().for_each(|m| *m = F::zero());
        let mut s = vec![F::zero(); n];
        let mut hard = vec![0u8; n];
        let mut run = 0;

        for t in 0..t_max {
            match &self.rule {
                Rule::Spa => self.vn_spa(t, llr, ws, None, tape.as_mut()),
                Rule::Nspa(k) => self.vn_spa(t, llr, ws, Some(k), tape.as_mut()),
                _ => self.vn_min_sum(llr, ws),
            }
            match &self.rule {
                Rule::Spa | Rule::Nspa(_) => self.cn_spa(t, ws, tape.as_mut()),
                _ => self.cn_min_sum(t, ws, tape.as_mut()),
            }
            run = t + 1;
            let last = t + 1 == t_max;
            if last || opts.early_stop || tape.is_some() {
                self.marginalize_into(llr, &ws.c2v, &mut s);
                if let Some(tp) = tape.as_mut() {
                    tp.record_iteration(t, &ws.v2c, &ws.c2v, &s);
                }
                if opts.early_stop && !last {
                    for (h, &x) in hard.iter_mut().zip(&s) {
                        *h = hard_decision(x);
                    }
                    if syndrome_check(self.code, &hard) {
                        break;
                    }
                }
            }
        }
        for (h, &x) in hard.iter_mut().zip(&s) {
            *h = hard_decision(x);
        }
        if let Some(tp) = tape.as_mut() {
            tp.truncate(run);
        }
        Ok((SoftOutput { s, hard, iterations_run: run }, tape))
    }

    /// Soft output from channel LLRs and one iteration's check messages.
    pub fn marginalize_into(&self, llr: &[F], c2v: &[F], out: &mut [F]) {
        let graph = self.code.graph();
        match &self.rule {
            Rule::Nspa(k) => {
                for (v, o) in out.iter_mut().enumerate() {
                    let mut acc = k.output_llr[v] * llr[v];
                    for &e in graph.var_edges(v) {
                        acc += k.output_edge[e] * c2v[e];
                    }
                    *o = acc;
                }
            }
            _ => {
                for (v, o) in out.iter_mut().enumerate() {
                    let mut acc = llr[v];
                    for &e in graph.var_edges(v) {
                        acc += c2v[e];
                    }
                    *o = acc;
                }
            }
        }
    }

    // Min-sum family: μ_{v,c} = (l_v + Σ_all μ_{c',v}) − μ_{c,v}.
    fn vn_min_sum(&self, llr: &[F], ws: &mut Workspace<F>) {
        let graph = self.code.graph();
        for (v, &l) in llr.iter().enumerate() {
            let edges = graph.var_edges(v);
            let mut total = l;
            for &e in edges {
                total += ws.c2v[e];
            }
            for &e in edges {
                ws.v2c[e] = total - ws.c2v[e];
            }
        }
    }

    // Sum-product family: explicit exclusion sums (weighted for NSPA), then
    // clamp. ws.v2c holds tanh(x/2) afterwards and ws.logmag holds φ(|x|).
    fn vn_spa(
        &self,
        t: usize,
        llr: &[F],
        ws: &mut Workspace<F>,
        nspa: Option<&NspaKernel<F>>,
        mut tape: Option<&mut DecodeTape<F>>,
    ) {
        let graph = self.code.graph();
        let n = graph.num_vars();
        let half = F::from_f64(0.5);
        let limit = F::from_f64(LLR_CLAMP);
        for e in 0..graph.num_edges() {
            let v = graph.edge_var(e);
            let pre = match nspa {
                None => {
                    let mut acc = llr[v];
                    for &src in graph.var_edges(v) {
                        if src != e {
                            acc += ws.c2v[src];
                        }
                    }
                    acc
                }
                Some(k) => {
                    let w = &k.edge[t * k.fan.len()..(t + 1) * k.fan.len()];
                    let mut acc = k.input[t * n + v] * llr[v];
                    for (i, &src) in k.fan.range(e).zip(k.fan.sources(e)) {
                        acc += w[i] * ws.c2v[src];
                    }
                    acc
                }
            };
            if let Some(tp) = tape.as_deref_mut() {
                tp.set_v2c_pre(t, e, pre);
            }
            let x = pre.clamp_abs(limit);
            ws.v2c[e] = (half * x).tanh();
            ws.logmag[e] = x.abs().phi();
        }
    }

    // 2·atanh(∏ tanh) over the other edges, evaluated as sign·φ(Σ φ): the
    // exclusion sums come from prefix and suffix sums of ws.logmag.
    fn cn_spa(&self, t: usize, ws: &mut Workspace<F>, mut tape: Option<&mut DecodeTape<F>>) {
        let graph = self.code.graph();
        let zero = F::zero();
        let floor = F::from_f64(min_log_magnitude());
        for c in 0..graph.num_checks() {
            let r = graph.check_edges(c);
            let d = r.len();
            let lam = &ws.logmag[r.clone()];
            let u = &ws.v2c[r.clone()];
            let parity = u.iter().fold(false, |acc, x| acc ^ x.is_negative());
            ws.prefix[0] = zero;
            for i in 0..d {
                ws.prefix[i + 1] = ws.prefix[i] + lam[i];
            }
            ws.suffix[d] = zero;
            for i in (0..d).rev() {
                ws.suffix[i] = ws.suffix[i + 1] + lam[i];
            }
            for (i, e) in r.enumerate() {
                let s = ws.prefix[i] + ws.suffix[i + 1];
                if let Some(tp) = tape.as_deref_mut() {
                    tp.set_cn_logmag(t, e, s);
                }
                let mag = if s < floor { floor } else { s }.phi();
                ws.c2v[e] = if parity ^ u[i].is_negative() { -mag } else { mag };
            }
        }
    }

    fn cn_min_sum(&self, t: usize, ws: &mut Workspace<F>, mut tape: Option<&mut DecodeTape<F>>) {
        let graph = self.code.graph();
        let e_count = graph.num_edges();
        let zero = F::zero();
        for c in 0..graph.num_checks() {
            let r = graph.check_edges(c);
            let (mut min1, mut min2) = (F::infinity(), F::infinity());
            let (mut i1, mut i2) = (usize::MAX, usize::MAX);
            let mut parity = false;
            for e in r.clone() {
                let x = ws.v2c[e];
                let a = x.abs();
                parity ^= x.is_negative();
                if a < min1 {
                    min2 = min1;
                    i2 = i1;
                    min1 = a;
                    i1 = e;
                } else if a < min2 {
                    min2 = a;
                    i2 = e;
                }
            }
            for e in r {
                let (mag, arg) = if e == i1 { (min2, i2) } else { (min1, i1) };
                let neg = parity ^ ws.v2c[e].is_negative();
                let beta = match &self.rule {
                    Rule::MinSum => None,
                    Rule::Oms(b) => Some(*b),
                    Rule::Noms(offsets) => Some(offsets[t * e_count + e]),
                    Rule::Spa | Rule::Nspa(_) => unreachable!(),
                };
                let (out, active) = match beta {
                    None => (if neg && mag > zero { -mag } else { mag }, true),
                    Some(b) => {
                        let off = mag - b;
                        if off > zero {
                            (if neg { -off } else { off }, true)
                        } else {
                            (zero, false)
                        }
                    }
                };
                ws.c2v[e] = out;
                if let Some(tp) = tape.as_deref_mut() {
                    tp.set_min_sum(t, e, arg, active);
                }
            }
        }
    }
}

/// Runs `params` on `code` for one frame, optionally recording a tape.
pub fn decode<F: Real>(
    code: &LinearCode,
    params: &DecoderParams,
    llr: &[F],
    record_tape: bool,
) -> Result<(SoftOutput<F>, Option<DecodeTape<F>>)> {
    let dec = Decoder::new(code, params)?;
    let mut ws = dec.workspace();
    dec.decode_with(llr, &mut ws, DecodeOptions { record_tape, early_stop: false })
}
