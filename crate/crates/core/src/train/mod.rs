//! Minibatch gradient training of the learnable decoders.
//!
//! Frames are noisy all-zeros codewords. Each minibatch draws from its own
//! random stream keyed by `(seed, minibatch index)`, so a run can resume
//! from a checkpoint knowing only the index of the next minibatch.

pub mod adam;
pub mod backward;
pub mod gradcheck;
pub mod loss;

use std::time::Instant;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use adam::{adam_step, AdamConfig, AdamState};
pub use backward::{backward, backward_nspa, loss_and_gradient, Backprop, GradientBuffer, LossMode};
pub use loss::loss_cross_entropy;

use crate::channel::{all_zeros_llr, stream_rng, ChannelConfig};
use crate::code::{LinearCode, TannerGraph};
use crate::decoder::{DecodeOptions, Decoder, DecoderParams, FanIn, Offsets, Tying, Variant};
use crate::error::{Error, Result};

/// Random stream for offset initialisation; minibatch `b` uses `b + 1`.
const INIT_STREAM: u64 = 0;
const HELDOUT_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Init {
    /// Offsets i.i.d. standard normal.
    StandardNormal,
    Constant(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    /// Unrolled decoder iterations `T`.
    pub iterations: usize,
    pub minibatches: usize,
    pub batch_size: usize,
    pub snr_set_db: Vec<f64>,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    /// Offset initialisation. Neural SPA weights always start at one.
    pub init: Init,
    pub tying: Tying,
    pub seed: u64,
    /// Held-out loss and checkpoint cadence, in minibatches.
    pub eval_every: usize,
    /// Frames in the fixed held-out set (same SNR mix as training).
    pub heldout_frames: usize,
    /// Training objective. Held-out loss is always the final-iteration
    /// cross-entropy so runs with different objectives compare directly.
    pub loss: LossMode,
}

impl Default for TrainConfig {
    fn default() -> Self {
        let adam = AdamConfig::default();
        TrainConfig {
            iterations: 5,
            minibatches: 20_000,
            batch_size: 120,
            snr_set_db: (1..=8).map(f64::from).collect(),
            learning_rate: adam.learning_rate,
            adam_beta1: adam.beta1,
            adam_beta2: adam.beta2,
            adam_eps: adam.eps,
            init: Init::StandardNormal,
            tying: Tying::PerEdge,
            seed: 0,
            eval_every: 500,
            heldout_frames: 1200,
            loss: LossMode::AllIterations,
        }
    }
}

impl TrainConfig {
    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.adam_beta1,
            beta2: self.adam_beta2,
            eps: self.adam_eps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be positive".into()));
        }
        if self.snr_set_db.is_empty() {
            return Err(Error::Config("training SNR set is empty".into()));
        }
        if self.batch_size == 0 || !self.batch_size.is_multiple_of(self.snr_set_db.len()) {
            return Err(Error::Config(format!(
                "batch size {} is not a positive multiple of the {} training SNRs",
                self.batch_size,
                self.snr_set_db.len()
            )));
        }
        if !self.heldout_frames.is_multiple_of(self.snr_set_db.len()) {
            return Err(Error::Config("held-out frames must split evenly across SNRs".into()));
        }
        if self.eval_every == 0 {
            return Err(Error::Config("eval_every must be positive".into()));
        }
        Ok(())
    }
}

/// Channel LLRs and transmitted bits for a set of frames.
#[derive(Debug, Clone, PartialEq)]
pub struct Minibatch {
    pub llr: Vec<Vec<f64>>,
    pub truth: Vec<Vec<u8>>,
    pub ebn0_db: Vec<f64>,
}

impl Minibatch {
    pub fn len(&self) -> usize {
        self.llr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.llr.is_empty()
    }
}

/// `batch_size` noisy all-zeros frames, an equal number per training SNR in
/// the order of `cfg.snr_set_db`.
pub fn make_minibatch<R: Rng + ?Sized>(cfg: &TrainConfig, code: &LinearCode, rng: &mut R) -> Result<Minibatch> {
    stratified_frames(code, &cfg.snr_set_db, cfg.batch_size, rng)
}

fn stratified_frames<R: Rng + ?Sized>(
    code: &LinearCode,
    snrs: &[f64],
    count: usize,
    rng: &mut R,
) -> Result<Minibatch> {
    let per = count / snrs.len();
    let n = code.n();
    let mut mb = Minibatch { llr: Vec::with_capacity(count), truth: Vec::with_capacity(count), ebn0_db: Vec::new() };
    for &snr in snrs {
        let ch = ChannelConfig::new(snr, code.rate())?;
        for _ in 0..per {
            let mut llr = vec![0.0; n];
            all_zeros_llr(&ch, &mut llr, rng);
            mb.llr.push(llr);
            mb.truth.push(vec![0; n]);
            mb.ebn0_db.push(snr);
        }
    }
    Ok(mb)
}

/// Initial parameters for training `variant`.
pub fn initial_params(code: &LinearCode, variant: Variant, cfg: &TrainConfig) -> Result<DecoderParams> {
    let graph = code.graph();
    let t = cfg.iterations;
    let mut draw = {
        let mut rng = stream_rng(cfg.seed, INIT_STREAM);
        let init = cfg.init;
        move || match init {
            Init::StandardNormal => StandardNormal.sample(&mut rng),
            Init::Constant(b) => b,
        }
    };
    match variant {
        Variant::Noms => {
            let values = (0..cfg.tying.num_slots(t, graph)).map(|_| draw()).collect();
            Ok(DecoderParams::noms(t, cfg.tying, values))
        }
        Variant::Oms => Ok(DecoderParams::oms(t, draw())),
        Variant::Nspa => Ok(DecoderParams::nspa_unit(t, graph)),
        Variant::Spa | Variant::MinSum => {
            Err(Error::Config(format!("variant {variant} has no trainable parameters")))
        }
    }
}

/// One row of the training log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRow {
    /// 1-based index of the minibatch just applied.
    pub minibatch: usize,
    pub mean_loss: f64,
    pub grad_norm: f64,
    /// Seconds since this training session started.
    pub wall_time: f64,
}

/// Held-out loss measured after `minibatch` updates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeldoutRow {
    pub minibatch: usize,
    pub loss: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub params: DecoderParams,
    pub adam: AdamState,
    pub log: Vec<LogRow>,
    pub heldout: Vec<HeldoutRow>,
}

/// Training state: parameters, optimiser moments and the minibatch cursor.
pub struct Trainer<'a> {
    code: &'a LinearCode,
    cfg: TrainConfig,
    params: DecoderParams,
    adam: AdamState,
    next: usize,
    heldout: Minibatch,
    started: Instant,
    log: Vec<LogRow>,
    heldout_log: Vec<HeldoutRow>,
}

impl<'a> Trainer<'a> {
    pub fn new(code: &'a LinearCode, variant: Variant, cfg: TrainConfig) -> Result<Self> {
        cfg.validate()?;
        let params = initial_params(code, variant, &cfg)?;
        let adam = AdamState::new(params.num_trainable());
        Self::resume(code, cfg, params, adam, 0)
    }

    /// Continues a run from saved state; `next` is the 0-based index of the
    /// next minibatch.
    pub fn resume(
        code: &'a LinearCode,
        cfg: TrainConfig,
        params: DecoderParams,
        adam: AdamState,
        next: usize,
    ) -> Result<Self> {
        cfg.validate()?;
        params.validate(code)?;
        if adam.m.len() != params.num_trainable() || adam.v.len() != params.num_trainable() {
            return Err(Error::Config("optimizer state does not match the parameters".into()));
        }
        if params.iterations != cfg.iterations {
            return Err(Error::Config(format!(
                "parameters unrolled for {} iterations, config says {}",
                params.iterations, cfg.iterations
            )));
        }
        let mut rng = stream_rng(cfg.seed, HELDOUT_STREAM);
        let heldout = stratified_frames(code, &cfg.snr_set_db, cfg.heldout_frames, &mut rng)?;
        Ok(Trainer {
            code,
            cfg,
            params,
            adam,
            next,
            heldout,
            started: Instant::now(),
            log: Vec::new(),
            heldout_log: Vec::new(),
        })
    }

    pub fn params(&self) -> &DecoderParams {
        &self.params
    }

    pub fn adam(&self) -> &AdamState {
        &self.adam
    }

    pub fn config(&self) -> &TrainConfig {
        &self.cfg
    }

    /// 0-based index of the next minibatch.
    pub fn next_minibatch(&self) -> usize {
        self.next
    }

    /// Rows logged by [`Trainer::run`] in this session, kept when it fails.
    pub fn log(&self) -> &[LogRow] {
        &self.log
    }

    pub fn heldout_log(&self) -> &[HeldoutRow] {
        &self.heldout_log
    }

    pub fn is_done(&self) -> bool {
        self.next >= self.cfg.minibatches
    }

    /// Mean loss and gradient over one minibatch at the current parameters.
    pub fn minibatch_gradient(&self, mb: &Minibatch) -> Result<GradientBuffer> {
        minibatch_gradient(self.code, &self.params, mb, self.cfg.loss)
    }

    /// Draws the next minibatch, backpropagates and applies one Adam update.
    /// A non-finite loss or gradient leaves the parameters untouched.
    pub fn step(&mut self) -> Result<LogRow> {
        let b = self.next;
        let mut rng = stream_rng(self.cfg.seed, b as u64 + 1);
        let mb = make_minibatch(&self.cfg, self.code, &mut rng)?;
        let grad = self.minibatch_gradient(&mb)?;
        let flat = grad.flatten();
        if !grad.loss.is_finite() {
            return Err(Error::Diverged { minibatch: b + 1, msg: format!("loss is {}", grad.loss) });
        }
        if let Some(i) = flat.iter().position(|g| !g.is_finite()) {
            return Err(Error::Diverged { minibatch: b + 1, msg: format!("gradient {i} is {}", flat[i]) });
        }
        let mut theta = self.params.trainable();
        adam_step(&mut self.adam, &mut theta, &flat, &self.cfg.adam());
        self.params.set_trainable(&theta);
        self.next += 1;
        Ok(LogRow {
            minibatch: b + 1,
            mean_loss: grad.loss,
            grad_norm: grad.norm(),
            wall_time: self.started.elapsed().as_secs_f64(),
        })
    }

    /// Mean final-iteration cross-entropy on the fixed held-out frames.
    pub fn heldout_loss(&self) -> Result<f64> {
        mean_loss(self.code, &self.params, &self.heldout)
    }

    /// Runs the remaining minibatches. Held-out loss is measured after the
    /// first update, every `eval_every` updates and at the end; `checkpoint`
    /// is called every `eval_every` updates.
    pub fn run(&mut self, mut checkpoint: impl FnMut(&Trainer<'_>) -> Result<()>) -> Result<TrainOutcome> {
        while !self.is_done() {
            let row = self.step()?;
            self.log.push(row);
            let b = row.minibatch;
            if b == 1 || b % self.cfg.eval_every == 0 || self.is_done() {
                let loss = self.heldout_loss()?;
                self.heldout_log.push(HeldoutRow { minibatch: b, loss });
            }
            if b % self.cfg.eval_every == 0 {
                checkpoint(self)?;
            }
        }
        Ok(TrainOutcome {
            params: self.params.clone(),
            adam: self.adam.clone(),
            log: self.log.clone(),
            heldout: self.heldout_log.clone(),
        })
    }
}

/// Trains `variant` on `code` from a fresh initialisation.
pub fn train(code: &LinearCode, variant: Variant, cfg: &TrainConfig) -> Result<TrainOutcome> {
    Trainer::new(code, variant, cfg.clone())?.run(|_| Ok(()))
}

/// Mean loss and gradient over `mb`. Frames are processed in parallel and
/// reduced in frame order.
pub fn minibatch_gradient(
    code: &LinearCode,
    params: &DecoderParams,
    mb: &Minibatch,
    mode: LossMode,
) -> Result<GradientBuffer> {
    let decoder = Decoder::<f64>::new(code, params)?;
    let bp = Backprop::new(code, params, mode)?;
    let opts = DecodeOptions { record_tape: true, early_stop: false };
    let per_frame: Vec<Result<GradientBuffer>> = mb
        .llr
        .par_iter()
        .zip(&mb.truth)
        .map_init(
            || decoder.workspace(),
            |ws, (llr, x)| {
                let (_, tape) = decoder.decode_with(llr, ws, opts)?;
                bp.gradient(&tape.expect("tape requested"), x)
            },
        )
        .collect();
    let mut total = GradientBuffer::zeros_for(params);
    for g in per_frame {
        total.add_assign(&g?);
    }
    if !mb.is_empty() {
        total.scale(1.0 / mb.len() as f64);
    }
    Ok(total)
}

/// Mean final-iteration cross-entropy of `params` over `frames`.
pub fn mean_loss(code: &LinearCode, params: &DecoderParams, frames: &Minibatch) -> Result<f64> {
    if frames.is_empty() {
        return Ok(f64::NAN);
    }
    let decoder = Decoder::<f64>::new(code, params)?;
    let losses: Vec<Result<f64>> = frames
        .llr
        .par_iter()
        .zip(&frames.truth)
        .map_init(
            || decoder.workspace(),
            |ws, (llr, x)| {
                let (out, _) = decoder.decode_with(llr, ws, DecodeOptions::default())?;
                Ok(loss_cross_entropy(&out.s, x))
            },
        )
        .collect();
    let mut sum = 0.0;
    for l in losses {
        sum += l?;
    }
    Ok(sum / frames.len() as f64)
}

/// Re-ties NOMS offsets: each new slot takes the mean of the per-edge
/// offsets it merges.
pub fn tie_offsets(params: &DecoderParams, scheme: Tying, graph: &TannerGraph) -> Result<DecoderParams> {
    let offsets = match (params.variant, &params.offsets) {
        (Variant::Noms | Variant::Oms, Some(o)) => o,
        _ => return Err(Error::Config(format!("variant {} has no offsets to tie", params.variant))),
    };
    let t = params.iterations;
    let expanded = offsets.expand(t, graph);
    let slots = scheme.num_slots(t, graph);
    let mut sum = vec![0.0; slots];
    let mut count = vec![0usize; slots];
    for ti in 0..t {
        for e in 0..graph.num_edges() {
            let s = scheme.slot(ti, e, graph);
            sum[s] += expanded[ti * graph.num_edges() + e];
            count[s] += 1;
        }
    }
    let values = sum.iter().zip(&count).map(|(s, &c)| if c == 0 { 0.0 } else { s / c as f64 }).collect();
    Ok(DecoderParams {
        variant: Variant::Noms,
        iterations: t,
        offsets: Some(Offsets { tying: scheme, values }),
        weights: None,
    })
}

/// Number of trainable parameters of `variant` unrolled `iterations` times,
/// counted from the actual parameter arrays.
pub fn count_parameters(code: &LinearCode, variant: Variant, iterations: usize, tying: Tying) -> usize {
    let graph = code.graph();
    match variant {
        Variant::Spa | Variant::MinSum => 0,
        Variant::Oms => 1,
        Variant::Noms => tying.num_slots(iterations, graph),
        Variant::Nspa => {
            let fan = FanIn::new(graph);
            iterations * graph.num_vars() + iterations * fan.len() + graph.num_vars() + graph.num_edges()
        }
    }
}

/// The closed-form neural SPA count `nT + ET(d − 1) + n + nE` for a code
/// with `E` edges and regular degree `d`. See the README for how this
/// relates to [`count_parameters`].
pub fn nspa_parameter_formula(n: usize, edges: usize, degree: usize, iterations: usize) -> usize {
    n * iterations + edges * iterations * (degree - 1) + n + n * edges
}
