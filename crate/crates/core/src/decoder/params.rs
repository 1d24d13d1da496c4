use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::code::{LinearCode, TannerGraph};
use crate::error::{Error, Result};

/// Check-node rule and parameterisation of an unrolled decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Sum-product.
    Spa,
    /// Min-sum.
    #[serde(rename = "ms")]
    MinSum,
    /// Offset min-sum with one global offset.
    Oms,
    /// Neural offset min-sum: learnable offsets per edge and iteration
    /// (or per tied slot).
    Noms,
    /// Neural sum-product with multiplicative weights.
    Nspa,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Spa => "spa",
            Variant::MinSum => "ms",
            Variant::Oms => "oms",
            Variant::Noms => "noms",
            Variant::Nspa => "nspa",
        }
    }

    pub fn is_min_sum_family(self) -> bool {
        matches!(self, Variant::MinSum | Variant::Oms | Variant::Noms)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "spa" => Ok(Variant::Spa),
            "ms" | "min-sum" | "minsum" => Ok(Variant::MinSum),
            "oms" => Ok(Variant::Oms),
            "noms" => Ok(Variant::Noms),
            "nspa" | "neural-spa" => Ok(Variant::Nspa),
            other => Err(Error::Config(format!("unknown decoder variant {other:?}"))),
        }
    }
}

/// How `(iteration, edge)` pairs share offset parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tying {
    /// One offset per edge per iteration (`E·T` slots).
    PerEdge,
    /// One offset per iteration (`T` slots).
    PerIteration,
    /// One offset per check node per iteration (`m·T` slots).
    PerCheckNode,
    /// A single offset shared by everything.
    Global,
}

impl Tying {
    pub fn name(self) -> &'static str {
        match self {
            Tying::PerEdge => "per-edge",
            Tying::PerIteration => "per-iteration",
            Tying::PerCheckNode => "per-check-node",
            Tying::Global => "global",
        }
    }

    pub fn num_slots(self, iterations: usize, graph: &TannerGraph) -> usize {
        match self {
            Tying::PerEdge => iterations * graph.num_edges(),
            Tying::PerIteration => iterations,
            Tying::PerCheckNode => iterations * graph.num_checks(),
            Tying::Global => 1,
        }
    }

    /// Slot used by edge `e` at iteration `t` (0-based).
    #[inline]
    pub fn slot(self, t: usize, e: usize, graph: &TannerGraph) -> usize {
        match self {
            Tying::PerEdge => t * graph.num_edges() + e,
            Tying::PerIteration => t,
            Tying::PerCheckNode => t * graph.num_checks() + graph.edge_check(e),
            Tying::Global => 0,
        }
    }
}

impl fmt::Display for Tying {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tying {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-edge" => Ok(Tying::PerEdge),
            "per-iteration" => Ok(Tying::PerIteration),
            "per-check-node" | "per-check" => Ok(Tying::PerCheckNode),
            "global" => Ok(Tying::Global),
            other => Err(Error::Config(format!("unknown tying scheme {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Offsets {
    pub tying: Tying,
    pub values: Vec<f64>,
}

impl Offsets {
    /// Offsets expanded to one value per `(iteration, edge)`, iteration-major.
    pub fn expand(&self, iterations: usize, graph: &TannerGraph) -> Vec<f64> {
        let e_count = graph.num_edges();
        let mut out = Vec::with_capacity(iterations * e_count);
        for t in 0..iterations {
            for e in 0..e_count {
                out.push(self.values[self.tying.slot(t, e, graph)]);
            }
        }
        out
    }
}

/// Edges feeding each variable-to-check message: for edge `e = (c, v)`, the
/// other edges at `v` in ascending order. Indexes the per-iteration edge
/// weights of the neural sum-product decoder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanIn {
    ptr: Vec<usize>,
    src: Vec<usize>,
}

impl FanIn {
    pub fn new(graph: &TannerGraph) -> Self {
        let mut ptr = Vec::with_capacity(graph.num_edges() + 1);
        let mut src = Vec::new();
        ptr.push(0);
        for e in 0..graph.num_edges() {
            let v = graph.edge_var(e);
            src.extend(graph.var_edges(v).iter().copied().filter(|&x| x != e));
            ptr.push(src.len());
        }
        FanIn { ptr, src }
    }

    /// Total number of `(edge, source edge)` pairs per iteration.
    pub fn len(&self) -> usize {
        self.src.len()
    }

    pub fn is_empty(&self) -> bool {
        self.src.is_empty()
    }

    /// Index range into the per-iteration weight block for edge `e`.
    #[inline]
    pub fn range(&self, e: usize) -> std::ops::Range<usize> {
        self.ptr[e]..self.ptr[e + 1]
    }

    #[inline]
    pub fn sources(&self, e: usize) -> &[usize] {
        &self.src[self.ptr[e]..self.ptr[e + 1]]
    }
}

/// Multiplicative weights of the neural sum-product decoder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NspaWeights {
    /// Channel-LLR weight per iteration and variable, `[T × n]`.
    pub input: Vec<f64>,
    /// Weight on each incoming check message of each variable-to-check
    /// message, `[T × F]` with `F` = [`FanIn::len`].
    pub edge: Vec<f64>,
    /// Channel-LLR weight in the output layer, `[n]`.
    pub output_llr: Vec<f64>,
    /// Check-message weight in the output layer, one per edge, `[E]`.
    pub output_edge: Vec<f64>,
}

impl NspaWeights {
    /// All weights equal to one (the plain sum-product decoder).
    pub fn ones(iterations: usize, graph: &TannerGraph) -> Self {
        let fan = FanIn::new(graph);
        NspaWeights {
            input: vec![1.0; iterations * graph.num_vars()],
            edge: vec![1.0; iterations * fan.len()],
            output_llr: vec![1.0; graph.num_vars()],
            output_edge: vec![1.0; graph.num_edges()],
        }
    }

    pub fn len(&self) -> usize {
        self.input.len() + self.edge.len() + self.output_llr.len() + self.output_edge.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn zeros_like(&self) -> Self {
        NspaWeights {
            input: vec![0.0; self.input.len()],
            edge: vec![0.0; self.edge.len()],
            output_llr: vec![0.0; self.output_llr.len()],
            output_edge: vec![0.0; self.output_edge.len()],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.input.iter().chain(&self.edge).chain(&self.output_llr).chain(&self.output_edge)
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.input
            .iter_mut()
            .chain(self.edge.iter_mut())
            .chain(self.output_llr.iter_mut())
            .chain(self.output_edge.iter_mut())
    }
}

/// Everything needed to run a decoder besides the code itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoderParams {
    pub variant: Variant,
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offsets: Option<Offsets>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<NspaWeights>,
}

impl DecoderParams {
    pub fn spa(iterations: usize) -> Self {
        DecoderParams { variant: Variant::Spa, iterations, offsets: None, weights: None }
    }

    pub fn min_sum(iterations: usize) -> Self {
        DecoderParams { variant: Variant::MinSum, iterations, offsets: None, weights: None }
    }

    pub fn oms(iterations: usize, beta: f64) -> Self {
        DecoderParams {
            variant: Variant::Oms,
            iterations,
            offsets: Some(Offsets { tying: Tying::Global, values: vec![beta] }),
            weights: None,
        }
    }

    /// NOMS with every slot set to `beta`.
    pub fn noms_constant(iterations: usize, graph: &TannerGraph, tying: Tying, beta: f64) -> Self {
        DecoderParams {
            variant: Variant::Noms,
            iterations,
            offsets: Some(Offsets { tying, values: vec![beta; tying.num_slots(iterations, graph)] }),
            weights: None,
        }
    }

    pub fn noms(iterations: usize, tying: Tying, values: Vec<f64>) -> Self {
        DecoderParams {
            variant: Variant::Noms,
            iterations,
            offsets: Some(Offsets { tying, values }),
            weights: None,
        }
    }

    /// Neural SPA with all weights one.
    pub fn nspa_unit(iterations: usize, graph: &TannerGraph) -> Self {
        DecoderParams {
            variant: Variant::Nspa,
            iterations,
            offsets: None,
            weights: Some(NspaWeights::ones(iterations, graph)),
        }
    }

    /// Checks that the parameter arrays fit `code` and the variant.
    pub fn validate(&self, code: &LinearCode) -> Result<()> {
        let graph = code.graph();
        let t = self.iterations;
        if t == 0 {
            return Err(Error::Config("decoder needs at least one iteration".into()));
        }
        match (self.variant, &self.offsets, &self.weights) {
            (Variant::Spa | Variant::MinSum, None, None) => Ok(()),
            (Variant::Oms, Some(o), None) => {
                if o.tying != Tying::Global || o.values.len() != 1 {
                    return Err(Error::Config("OMS takes exactly one global offset".into()));
                }
                check_finite(&o.values)
            }
            (Variant::Noms, Some(o), None) => {
                let want = o.tying.num_slots(t, graph);
                if o.values.len() != want {
                    return Err(Error::Config(format!(
                        "{} NOMS with T={t} needs {want} offsets, got {}",
                        o.tying,
                        o.values.len()
                    )));
                }
                check_finite(&o.values)
            }
            (Variant::Nspa, None, Some(w)) => {
                let fan = FanIn::new(graph);
                let shapes = [
                    ("input", w.input.len(), t * graph.num_vars()),
                    ("edge", w.edge.len(), t * fan.len()),
                    ("output_llr", w.output_llr.len(), graph.num_vars()),
                    ("output_edge", w.output_edge.len(), graph.num_edges()),
                ];
                for (name, got, want) in shapes {
                    if got != want {
                        return Err(Error::Config(format!(
                            "NSPA {name} weights: expected {want}, got {got}"
                        )));
                    }
                }
                check_finite(&w.iter().copied().collect::<Vec<_>>())
            }
            (v, o, w) => Err(Error::Config(format!(
                "variant {v} does not take {}{}",
                if o.is_some() { "offsets " } else { "" },
                if w.is_some() { "weights" } else { "" }
            ))),
        }
    }

    /// Trainable values flattened: offsets first, then NSPA weights in field
    /// order.
    pub fn trainable(&self) -> Vec<f64> {
        let mut out = Vec::new();
        if let Some(o) = &self.offsets {
            out.extend_from_slice(&o.values);
        }
        if let Some(w) = &self.weights {
            out.extend(w.iter().copied());
        }
        out
    }

    pub fn set_trainable(&mut self, values: &[f64]) {
        let mut it = values.iter().copied();
        if let Some(o) = &mut self.offsets {
            for x in o.values.iter_mut() {
                *x = it.next().expect("parameter vector too short");
            }
        }
        if let Some(w) = &mut self.weights {
            for x in w.iter_mut() {
                *x = it.next().expect("parameter vector too short");
            }
        }
        assert!(it.next().is_none(), "parameter vector too long");
    }

    pub fn num_trainable(&self) -> usize {
        self.offsets.as_ref().map_or(0, |o| o.values.len())
            + self.weights.as_ref().map_or(0, NspaWeights::len)
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::Config(format!("parameter {i} is not finite"))),
        None => Ok(()),
    }
}
