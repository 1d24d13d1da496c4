//! Monte-Carlo bit and frame error rates.
//!
//! Each SNR point runs in rounds. In every round each worker decodes its
//! share of frames from its own random stream, keyed by
//! `(seed, SNR index, worker)`, and the tallies are merged in worker order.
//! The stopping rule is checked between rounds, so results depend only on
//! the seed and the worker count.

pub mod compare;
pub mod histogram;

use std::io::{Read, Write};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use compare::{compare_curves, snr_at_ber, GapReport};
pub use histogram::{export_histograms, OffsetHistogram};

use crate::channel::{all_zeros_llr, stream_rng, transmit, ChannelConfig};
use crate::code::LinearCode;
use crate::decoder::{DecodeOptions, Decoder, DecoderParams, Workspace};
use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;
/// High bit set on evaluation streams so they never coincide with the
/// training streams of the same seed.
const EVAL_STREAM_BASE: u64 = 1 << 63;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalConfig {
    pub snr_list_db: Vec<f64>,
    pub min_frame_errors: u64,
    /// Minimum frames per SNR point.
    pub min_frames: u64,
    /// Points that reach this many frames stop and are flagged censored.
    pub max_frames: u64,
    pub seed: u64,
    pub workers: usize,
    /// Frames simulated between stopping-rule checks (all workers together).
    pub round_frames: u64,
    /// Transmit the all-zeros codeword instead of random codewords.
    pub all_zeros: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            snr_list_db: (1..=8).map(f64::from).collect(),
            min_frame_errors: 100,
            min_frames: 100_000,
            max_frames: 100_000_000,
            seed: 0,
            workers: 1,
            round_frames: 10_000,
            all_zeros: false,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::Config("need at least one worker".into()));
        }
        if self.round_frames == 0 || self.max_frames == 0 {
            return Err(Error::Config("round and maximum frame counts must be positive".into()));
        }
        if self.max_frames < self.min_frames {
            return Err(Error::Config(format!(
                "max_frames {} is below min_frames {}",
                self.max_frames, self.min_frames
            )));
        }
        Ok(())
    }
}

/// Error counts for one worker or one SNR point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub frames: u64,
    pub bit_errors: u64,
    /// Sum over frames of the squared per-frame bit-error count.
    pub bit_errors_sq: u64,
    pub frame_errors: u64,
}

impl Tally {
    pub fn merge(&mut self, other: &Tally) {
        self.frames += other.frames;
        self.bit_errors += other.bit_errors;
        self.bit_errors_sq += other.bit_errors_sq;
        self.frame_errors += other.frame_errors;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub ebn0_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Stopped at `max_frames` before the error target was met.
    pub censored: bool,
}

impl BerPoint {
    pub fn from_tally(ebn0_db: f64, n: usize, t: Tally, censored: bool) -> Self {
        let bits = t.frames as f64 * n as f64;
        let ber = if t.frames == 0 { f64::NAN } else { t.bit_errors as f64 / bits };
        let fer = if t.frames == 0 { f64::NAN } else { t.frame_errors as f64 / t.frames as f64 };
        let (ci_lo, ci_hi) = ber_ci95(&t, n);
        BerPoint {
            ebn0_db,
            frames: t.frames,
            bit_errors: t.bit_errors,
            frame_errors: t.frame_errors,
            ber,
            fer,
            ci_lo,
            ci_hi,
            censored,
        }
    }

    pub fn ci_overlaps(&self, other: &BerPoint) -> bool {
        self.ci_lo <= other.ci_hi && other.ci_lo <= self.ci_hi
    }
}

/// Normal-approximation 95% interval on the BER of `n`-bit frames, clipped
/// to `[0, 1]`. The standard error comes from the spread of per-frame error
/// counts: bit errors cluster in failed frames, so treating the `frames·n`
/// bits as independent trials would understate it several times over. With
/// `n = 1` this is the usual binomial interval.
pub fn ber_ci95(t: &Tally, n: usize) -> (f64, f64) {
    if t.frames == 0 || n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let frames = t.frames as f64;
    let mean = t.bit_errors as f64 / frames;
    let var = (t.bit_errors_sq as f64 / frames - mean * mean).max(0.0);
    let p = mean / n as f64;
    let half = Z95 * (var / frames).sqrt() / n as f64;
    ((p - half).max(0.0), (p + half).min(1.0))
}

struct Worker {
    rng: ChaCha8Rng,
    ws: Workspace<f64>,
}

/// Simulates every point of `cfg.snr_list_db`.
pub fn run_ber(code: &LinearCode, params: &DecoderParams, cfg: &EvalConfig) -> Result<Vec<BerPoint>> {
    cfg.validate()?;
    let decoder = Decoder::<f64>::new(code, params)?;
    cfg.snr_list_db
        .iter()
        .enumerate()
        .map(|(i, &snr)| run_point(&decoder, cfg, i, snr))
        .collect()
}

/// Frames each worker simulates in a round of `total` frames.
fn shares(total: u64, workers: usize) -> Vec<u64> {
    let w = workers as u64;
    (0..w).map(|i| total / w + u64::from(i < total % w)).collect()
}

fn run_point(decoder: &Decoder<'_, f64>, cfg: &EvalConfig, snr_index: usize, ebn0_db: f64) -> Result<BerPoint> {
    let code = decoder.code();
    let ch = ChannelConfig::new(ebn0_db, code.rate())?;
    let mut workers: Vec<Worker> = (0..cfg.workers)
        .map(|w| Worker {
            rng: stream_rng(cfg.seed, EVAL_STREAM_BASE | ((snr_index as u64) << 32) | w as u64),
            ws: decoder.workspace(),
        })
        .collect();
    let mut total = Tally::default();
    loop {
        if total.frames >= cfg.min_frames && total.frame_errors >= cfg.min_frame_errors {
            return Ok(BerPoint::from_tally(ebn0_db, code.n(), total, false));
        }
        if total.frames >= cfg.max_frames {
            log::warn!("{ebn0_db} dB stopped at {} frames with {} frame errors", total.frames, total.frame_errors);
            return Ok(BerPoint::from_tally(ebn0_db, code.n(), total, true));
        }
        let round = cfg.round_frames.min(cfg.max_frames - total.frames);
        let tallies: Vec<Result<Tally>> = workers
            .par_iter_mut()
            .zip(shares(round, cfg.workers))
            .map(|(w, frames)| simulate(decoder, &ch, cfg.all_zeros, frames, w))
            .collect();
        for t in tallies {
            total.merge(&t?);
        }
    }
}

fn simulate(
    decoder: &Decoder<'_, f64>,
    ch: &ChannelConfig,
    all_zeros: bool,
    frames: u64,
    w: &mut Worker,
) -> Result<Tally> {
    let code = decoder.code();
    let (n, k) = (code.n(), code.k());
    let mut llr = vec![0.0; n];
    let zeros = vec![0u8; n];
    let mut msg = vec![0u8; k];
    let mut tally = Tally::default();
    for _ in 0..frames {
        let truth = if all_zeros {
            all_zeros_llr(ch, &mut llr, &mut w.rng);
            zeros.clone()
        } else {
            for b in msg.iter_mut() {
                *b = u8::from(w.rng.random::<bool>());
            }
            let word = code.encode(&msg)?;
            let rx = transmit(ch, &word, &mut w.rng);
            llr.copy_from_slice(&rx.llr);
            word
        };
        let (out, _) = decoder.decode_with(&llr, &mut w.ws, DecodeOptions::default())?;
        let errs = out.hard.iter().zip(&truth).filter(|(a, b)| a != b).count() as u64;
        tally.frames += 1;
        tally.bit_errors += errs;
        tally.bit_errors_sq += errs * errs;
        tally.frame_errors += u64::from(errs > 0);
    }
    Ok(tally)
}

#[derive(Debug, Serialize, Deserialize)]
struct BerRow {
    label: String,
    ebn0_db: f64,
    frames: u64,
    bit_errors: u64,
    frame_errors: u64,
    ber: f64,
    fer: f64,
    ci_lo: f64,
    ci_hi: f64,
    censored: bool,
}

/// A labelled BER curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub points: Vec<BerPoint>,
}

/// Writes curves as CSV with columns
/// `label,ebn0_db,frames,bit_errors,frame_errors,ber,fer,ci_lo,ci_hi,censored`.
pub fn write_ber_csv<W: Write>(curves: &[Curve], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for c in curves {
        for p in &c.points {
            out.serialize(BerRow {
                label: c.label.clone(),
                ebn0_db: p.ebn0_db,
                frames: p.frames,
                bit_errors: p.bit_errors,
                frame_errors: p.frame_errors,
                ber: p.ber,
                fer: p.fer,
                ci_lo: p.ci_lo,
                ci_hi: p.ci_hi,
                censored: p.censored,
            })
            .map_err(csv_error)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads curves written by [`write_ber_csv`], grouped by label in order of
/// first appearance.
pub fn read_ber_csv<R: Read>(r: R) -> Result<Vec<Curve>> {
    let mut curves: Vec<Curve> = Vec::new();
    for row in csv::Reader::from_reader(r).deserialize::<BerRow>() {
        let row = row.map_err(csv_error)?;
        let p = BerPoint {
            ebn0_db: row.ebn0_db,
            frames: row.frames,
            bit_errors: row.bit_errors,
            frame_errors: row.frame_errors,
            ber: row.ber,
            fer: row.fer,
            ci_lo: row.ci_lo,
            ci_hi: row.ci_hi,
            censored: row.censored,
        };
        match curves.iter_mut().find(|c| c.label == row.label) {
            Some(c) => c.points.push(p),
            None => curves.push(Curve { label: row.label, points: vec![p] }),
        }
    }
    Ok(curves)
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    Error::Format(format!("CSV: {e}"))
}

#[cfg(test)]
mod tests;
