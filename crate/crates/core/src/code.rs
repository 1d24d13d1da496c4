//! Binary linear codes and their Tanner graphs.
//!
//! Edges of the Tanner graph are numbered in row-major order of the
//! parity-check matrix (check index ascending, then variable index
//! ascending). Every per-edge array in the crate (messages, offsets, weights)
//! uses this numbering, so parameter files are portable between codes built
//! from the same matrix.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// A binary parity-check matrix `H` (`m × n`).
#[derive(Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    bits: BitMatrix,
    rank: usize,
}

impl ParityCheckMatrix {
    /// Wraps `bits`, checking that every row has at least two ones and every
    /// column at least one.
    pub fn new(bits: BitMatrix) -> Result<Self> {
        for r in 0..bits.rows() {
            if bits.row_weight(r) < 2 {
                return Err(Error::Construction(format!(
                    "row {r} has weight {} (need at least 2)",
                    bits.row_weight(r)
                )));
            }
        }
        let mut col_seen = vec![false; bits.cols()];
        for r in 0..bits.rows() {
            for c in bits.row_support(r) {
                col_seen[c] = true;
            }
        }
        if let Some(c) = col_seen.iter().position(|&s| !s) {
            return Err(Error::Construction(format!("column {c} has no ones")));
        }
        let rank = bits.rank();
        Ok(ParityCheckMatrix { bits, rank })
    }

    /// An `0 × n` matrix; every word is a codeword.
    pub fn empty(n: usize) -> Self {
        ParityCheckMatrix {
            bits: BitMatrix::zeros(0, n),
            rank: 0,
        }
    }

    pub fn rows(&self) -> usize {
        self.bits.rows()
    }

    pub fn cols(&self) -> usize {
        self.bits.cols()
    }

    /// GF(2) rank; `n - rank` is the code dimension.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits.get(r, c)
    }

    /// FNV-1a over the row-major bit pattern; identifies a matrix in manifests
    /// and parameter files.
    pub fn checksum(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        feed(self.rows() as u64);
        feed(self.cols() as u64);
        for r in 0..self.rows() {
            for &w in self.bits.row_words(r) {
                feed(w);
            }
        }
        h
    }
}

impl fmt::Debug for ParityCheckMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H(rank {}) ", self.rank)?;
        self.bits.fmt(f)
    }
}

/// Tanner graph in compressed adjacency form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    n: usize,
    m: usize,
    edge_check: Vec<usize>,
    edge_var: Vec<usize>,
    // Edges of check c are check_ptr[c]..check_ptr[c + 1] (contiguous by construction).
    check_ptr: Vec<usize>,
    var_ptr: Vec<usize>,
    var_edges: Vec<usize>,
}

impl TannerGraph {
    pub fn from_matrix(h: &ParityCheckMatrix) -> Self {
        let (m, n) = (h.rows(), h.cols());
        let mut edge_check = Vec::new();
        let mut edge_var = Vec::new();
        let mut check_ptr = Vec::with_capacity(m + 1);
        check_ptr.push(0);
        for c in 0..m {
            for v in h.bits().row_support(c) {
                edge_check.push(c);
                edge_var.push(v);
            }
            check_ptr.push(edge_check.len());
        }
        let mut var_deg = vec![0usize; n];
        for &v in &edge_var {
            var_deg[v] += 1;
        }
        let mut var_ptr = Vec::with_capacity(n + 1);
        var_ptr.push(0);
        for d in &var_deg {
            var_ptr.push(var_ptr.last().unwrap() + d);
        }
        let mut fill = var_ptr.clone();
        let mut var_edges = vec![0; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v]] = e;
            fill[v] += 1;
        }
        TannerGraph {
            n,
            m,
            edge_check,
            edge_var,
            check_ptr,
            var_ptr,
            var_edges,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_checks(&self) -> usize {
        self.m
    }

    pub fn num_edges(&self) -> usize {
        self.edge_var.len()
    }

    /// `(check, variable)` endpoints of edge `e`.
    #[inline]
    pub fn edge(&self, e: usize) -> (usize, usize) {
        (self.edge_check[e], self.edge_var[e])
    }

    #[inline]
    pub fn edge_var(&self, e: usize) -> usize {
        self.edge_var[e]
    }

    #[inline]
    pub fn edge_check(&self, e: usize) -> usize {
        self.edge_check[e]
    }

    /// Edge ids incident to check `c`; always a contiguous ascending range.
    #[inline]
    pub fn check_edges(&self, c: usize) -> std::ops::Range<usize> {
        self.check_ptr[c]..self.check_ptr[c + 1]
    }

    /// Edge ids incident to variable `v`, ascending.
    #[inline]
    pub fn var_edges(&self, v: usize) -> &[usize] {
        &self.var_edges[self.var_ptr[v]..self.var_ptr[v + 1]]
    }

    pub fn check_degree(&self, c: usize) -> usize {
        self.check_ptr[c + 1] - self.check_ptr[c]
    }

    pub fn var_degree(&self, v: usize) -> usize {
        self.var_ptr[v + 1] - self.var_ptr[v]
    }

    /// The common check degree, if all checks have the same degree.
    pub fn regular_check_degree(&self) -> Option<usize> {
        if self.m == 0 {
            return None;
        }
        let d = self.check_degree(0);
        (0..self.m).all(|c| self.check_degree(c) == d).then_some(d)
    }

    /// Degree → number of checks with that degree.
    pub fn check_degree_profile(&self) -> BTreeMap<usize, usize> {
        let mut p = BTreeMap::new();
        for c in 0..self.m {
            *p.entry(self.check_degree(c)).or_insert(0) += 1;
        }
        p
    }

    /// Degree → number of variables with that degree.
    pub fn var_degree_profile(&self) -> BTreeMap<usize, usize> {
        let mut p = BTreeMap::new();
        for v in 0..self.n {
            *p.entry(self.var_degree(v)).or_insert(0) += 1;
        }
        p
    }
}

/// Generator matrix derived from a parity-check matrix.
#[derive(Debug, Clone)]
pub struct Generator {
    /// `k × n`, in the column order of `H`.
    pub g: BitMatrix,
    /// Columns of `H` that carry message bits, one per row of `g`. Row `i` of
    /// `g` has a one in `info_positions[i]` and zeros in the other
    /// information positions, so encoding is systematic on this set.
    pub info_positions: Vec<usize>,
    pub rank: usize,
}

/// Finds a generator matrix for the null space of `h` by Gauss-Jordan
/// elimination.
///
/// Elimination picks pivot columns right to left, so the information set
/// (the non-pivot columns) sits at the front whenever possible. Rather than permuting columns of `H`, the
/// resulting `G` is written back in the original column order, so encoder and
/// decoder always agree on bit positions. If `h` is rank deficient the
/// dimension grows accordingly and a warning is logged.
pub fn derive_generator(h: &ParityCheckMatrix) -> Generator {
    let n = h.cols();
    let mut r = h.bits().clone();
    let pivots = r.rref_in_order((0..n).rev());
    let rank = pivots.len();
    if rank < h.rows() {
        log::warn!(
            "parity-check matrix has {} rows but rank {}; using k = {}",
            h.rows(),
            rank,
            n - rank
        );
    }
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let info_positions: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let mut g = BitMatrix::zeros(info_positions.len(), n);
    for (i, &f) in info_positions.iter().enumerate() {
        g.set(i, f, true);
        for (row, &p) in pivots.iter().enumerate() {
            if r.get(row, f) {
                g.set(i, p, true);
            }
        }
    }
    Generator {
        g,
        info_positions,
        rank,
    }
}

/// A binary linear code with its encoder and Tanner graph.
#[derive(Debug, Clone)]
pub struct LinearCode {
    name: String,
    h: ParityCheckMatrix,
    g: BitMatrix,
    info_positions: Vec<usize>,
    graph: TannerGraph,
    metadata: BTreeMap<String, String>,
}

impl LinearCode {
    /// Builds a code from `H`, deriving the generator matrix.
    pub fn from_parity_check(name: impl Into<String>, h: ParityCheckMatrix) -> Result<Self> {
        let gen = derive_generator(&h);
        if gen.info_positions.is_empty() {
            return Err(Error::Construction("code has dimension 0".into()));
        }
        let graph = TannerGraph::from_matrix(&h);
        Ok(LinearCode {
            name: name.into(),
            h,
            g: gen.g,
            info_positions: gen.info_positions,
            graph,
            metadata: BTreeMap::new(),
        })
    }

    /// Builds a code from a matching `(H, G)` pair. `G` must have full row
    /// rank `n - rank(H)` and satisfy `G·Hᵀ = 0`.
    pub fn from_parts(
        name: impl Into<String>,
        h: ParityCheckMatrix,
        g: BitMatrix,
        info_positions: Vec<usize>,
    ) -> Result<Self> {
        if g.cols() != h.cols() {
            return Err(Error::Construction("G and H lengths differ".into()));
        }
        if !g.mul(&h.bits().transpose()).is_zero() {
            return Err(Error::Construction("G·Hᵀ ≠ 0".into()));
        }
        if g.rows() != h.cols() - h.rank() || g.rank() != g.rows() {
            return Err(Error::Construction("G does not span the null space of H".into()));
        }
        if info_positions.len() != g.rows() {
            return Err(Error::Construction("information set size differs from k".into()));
        }
        let graph = TannerGraph::from_matrix(&h);
        Ok(LinearCode {
            name: name.into(),
            h,
            g,
            info_positions,
            graph,
            metadata: BTreeMap::new(),
        })
    }

    /// The rate-1 "code" with no checks. Decoding reduces to a hard decision
    /// on the channel LLRs.
    pub fn uncoded(n: usize) -> Self {
        let h = ParityCheckMatrix::empty(n);
        LinearCode {
            name: format!("uncoded({n})"),
            graph: TannerGraph::from_matrix(&h),
            h,
            g: BitMatrix::identity(n),
            info_positions: (0..n).collect(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn k(&self) -> usize {
        self.g.rows()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    pub fn parity_check(&self) -> &ParityCheckMatrix {
        &self.h
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.g
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn graph(&self) -> &TannerGraph {
        &self.graph
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    /// Encodes `message` (k bits, values 0/1) as `message · G`.
    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        if message.len() != self.k() {
            return Err(Error::Argument(format!(
                "message has {} bits, code dimension is {}",
                message.len(),
                self.k()
            )));
        }
        let n = self.n();
        let words = n.div_ceil(64);
        let mut acc = vec![0u64; words];
        for (i, &b) in message.iter().enumerate() {
            if b & 1 == 1 {
                for (a, &w) in acc.iter_mut().zip(self.g.row_words(i)) {
                    *a ^= w;
                }
            }
        }
        Ok((0..n).map(|c| ((acc[c / 64] >> (c % 64)) & 1) as u8).collect())
    }

    /// `true` iff `H · wordᵀ = 0`.
    pub fn syndrome_check(&self, word: &[u8]) -> bool {
        syndrome_check(self, word)
    }
}

/// `true` iff `word` satisfies every parity check of `code`.
pub fn syndrome_check(code: &LinearCode, word: &[u8]) -> bool {
    let g = code.graph();
    (0..g.num_checks()).all(|c| {
        g.check_edges(c)
            .fold(0u8, |acc, e| acc ^ (word[g.edge_var(e)] & 1))
            == 0
    })
}
