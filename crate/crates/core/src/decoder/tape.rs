use super::{Decoder, Variant};
use crate::real::Real;

/// Forward state of one decode, kept for the backward pass.
///
/// All per-edge arrays are iteration-major, `[t * E + e]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeTape<F> {
    pub variant: Variant,
    pub iterations: usize,
    pub n: usize,
    pub num_edges: usize,
    pub llr: Vec<F>,
    /// Variable-to-check messages: LLR domain for the min-sum family, tanh
    /// domain for the sum-product family.
    pub v2c: Vec<F>,
    /// Sum-product family only: variable-to-check values before clamping
    /// and `tanh`.
    pub v2c_pre: Vec<F>,
    /// Check-to-variable messages (LLR domain).
    pub c2v: Vec<F>,
    /// Sum-product family only: `S = −ln|p|` for the excluded tanh product
    /// `p`, before clamping (`S = ∞` when `p = 0`).
    pub cn_logmag: Vec<F>,
    /// Soft output after each iteration, `[t * n + v]`.
    pub soft: Vec<F>,
    /// Min-sum family only: edge attaining the excluded minimum.
    pub argmin_edge: Vec<u32>,
    /// Min-sum family only: whether the offset ReLU passed a nonzero value
    /// (always true for plain min-sum).
    pub relu_active: Vec<bool>,
}

impl<F: Real> DecodeTape<F> {
    pub(super) fn new(variant: Variant, iterations: usize, n: usize, num_edges: usize, llr: &[F]) -> Self {
        let te = iterations * num_edges;
        let spa = !variant.is_min_sum_family();
        DecodeTape {
            variant,
            iterations,
            n,
            num_edges,
            llr: llr.to_vec(),
            v2c: vec![F::zero(); te],
            v2c_pre: if spa { vec![F::zero(); te] } else { Vec::new() },
            c2v: vec![F::zero(); te],
            cn_logmag: if spa { vec![F::zero(); te] } else { Vec::new() },
            soft: vec![F::zero(); iterations * n],
            argmin_edge: if spa { Vec::new() } else { vec![0; te] },
            relu_active: if spa { Vec::new() } else { vec![false; te] },
        }
    }

    pub(super) fn record_iteration(&mut self, t: usize, v2c: &[F], c2v: &[F], soft: &[F]) {
        let e = self.num_edges;
        self.v2c[t * e..(t + 1) * e].copy_from_slice(v2c);
        self.c2v[t * e..(t + 1) * e].copy_from_slice(c2v);
        self.soft[t * self.n..(t + 1) * self.n].copy_from_slice(soft);
    }

    #[inline]
    pub(super) fn set_v2c_pre(&mut self, t: usize, e: usize, x: F) {
        self.v2c_pre[t * self.num_edges + e] = x;
    }

    #[inline]
    pub(super) fn set_cn_logmag(&mut self, t: usize, e: usize, s: F) {
        self.cn_logmag[t * self.num_edges + e] = s;
    }

    #[inline]
    pub(super) fn set_min_sum(&mut self, t: usize, e: usize, argmin: usize, active: bool) {
        let i = t * self.num_edges + e;
        self.argmin_edge[i] = argmin as u32;
        self.relu_active[i] = active;
    }

    /// Drops iterations that were never run (early stopping).
    pub(super) fn truncate(&mut self, iterations: usize) {
        if iterations == self.iterations {
            return;
        }
        let te = iterations * self.num_edges;
        self.iterations = iterations;
        for v in [&mut self.v2c, &mut self.v2c_pre, &mut self.c2v, &mut self.cn_logmag] {
            if !v.is_empty() {
                v.truncate(te);
            }
        }
        self.soft.truncate(iterations * self.n);
        if !self.argmin_edge.is_empty() {
            self.argmin_edge.truncate(te);
            self.relu_active.truncate(te);
        }
    }

    /// Messages of iteration `t` as a slice.
    pub fn c2v_at(&self, t: usize) -> &[F] {
        &self.c2v[t * self.num_edges..(t + 1) * self.num_edges]
    }

    pub fn v2c_at(&self, t: usize) -> &[F] {
        &self.v2c[t * self.num_edges..(t + 1) * self.num_edges]
    }

    pub fn soft_at(&self, t: usize) -> &[F] {
        &self.soft[t * self.n..(t + 1) * self.n]
    }

    /// Final soft output.
    pub fn final_soft(&self) -> &[F] {
        self.soft_at(self.iterations - 1)
    }

    /// Recomputes the final soft output from the recorded channel LLRs and
    /// last-iteration check messages.
    pub fn replay_soft(&self, decoder: &Decoder<'_, F>) -> Vec<F> {
        let mut out = vec![F::zero(); self.n];
        decoder.marginalize_into(&self.llr, self.c2v_at(self.iterations - 1), &mut out);
        out
    }
}
