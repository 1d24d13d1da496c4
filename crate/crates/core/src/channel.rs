//! BPSK over the real AWGN channel.
//!
//! Bit 0 maps to +1 and bit 1 to −1. Channel LLRs are `2y/σ²`, so a positive
//! LLR favours bit 0.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// Name of the generator behind every random stream, recorded in outputs.
pub const RNG_NAME: &str = "ChaCha8 + Ziggurat normal (rand_distr)";

/// Noise variance per real dimension for unit-energy BPSK at the given
/// Eb/N0 and code rate: `σ² = 1 / (2·R·10^(Eb/N0 / 10))`.
pub fn ebn0_to_sigma2(ebn0_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::Argument(format!("code rate {rate} outside (0, 1]")));
    }
    if !ebn0_db.is_finite() {
        return Err(Error::Argument("Eb/N0 must be finite".into()));
    }
    Ok(1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub ebn0_db: f64,
    pub rate: f64,
    pub sigma2: f64,
}

impl ChannelConfig {
    pub fn new(ebn0_db: f64, rate: f64) -> Result<Self> {
        let sigma2 = ebn0_to_sigma2(ebn0_db, rate)?;
        Ok(ChannelConfig { ebn0_db, rate, sigma2 })
    }

    /// A channel specified directly by its noise variance.
    pub fn from_sigma2(sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::Argument(format!("noise variance {sigma2} must be positive")));
        }
        Ok(ChannelConfig { ebn0_db: f64::NAN, rate: f64::NAN, sigma2 })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedFrame {
    pub y: Vec<f64>,
    pub llr: Vec<f64>,
    pub truth_bits: Vec<u8>,
}

pub fn modulate_bpsk(bits: &[u8]) -> Vec<f64> {
    bits.iter().map(|&b| if b & 1 == 0 { 1.0 } else { -1.0 }).collect()
}

#[inline]
pub fn llr_from_sample(y: f64, sigma2: f64) -> f64 {
    2.0 * y / sigma2
}

/// Adds white Gaussian noise to `symbols` and computes channel LLRs.
pub fn transmit<R: Rng + ?Sized>(
    cfg: &ChannelConfig,
    bits: &[u8],
    rng: &mut R,
) -> ReceivedFrame {
    let noise = Normal::new(0.0, cfg.sigma()).expect("σ is positive and finite");
    let y: Vec<f64> = modulate_bpsk(bits)
        .into_iter()
        .map(|x| x + noise.sample(rng))
        .collect();
    let llr = y.iter().map(|&y| llr_from_sample(y, cfg.sigma2)).collect();
    ReceivedFrame { y, llr, truth_bits: bits.to_vec() }
}

/// Channel LLRs for the all-zeros codeword (all +1 symbols), written into
/// `out`.
pub fn all_zeros_llr<R: Rng + ?Sized>(cfg: &ChannelConfig, out: &mut [f64], rng: &mut R) {
    let noise = Normal::new(0.0, cfg.sigma()).expect("σ is positive and finite");
    for l in out.iter_mut() {
        *l = llr_from_sample(1.0 + noise.sample(rng), cfg.sigma2);
    }
}

/// Deterministic random stream for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Writes `(y, llr)` pairs as CSV for debugging.
pub fn write_frame_csv<W: std::io::Write>(frame: &ReceivedFrame, mut w: W) -> std::io::Result<()> {
    writeln!(w, "index,bit,y,llr")?;
    for (i, ((y, l), b)) in frame.y.iter().zip(&frame.llr).zip(&frame.truth_bits).enumerate() {
        writeln!(w, "{i},{b},{y},{l}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bpsk_mapping() {
        assert_eq!(modulate_bpsk(&[0, 0, 0]), vec![1.0, 1.0, 1.0]);
        assert_eq!(modulate_bpsk(&[1, 0]), vec![-1.0, 1.0]);
        assert_eq!(modulate_bpsk(&[1; 4]), vec![-1.0; 4]);
    }

    #[test]
    fn sigma2_conversion() {
        assert_eq!(ebn0_to_sigma2(0.0, 0.5).unwrap(), 1.0);
        // closed form 1 / 10^0.1 and 63 / (90 · 10^0.8), evaluated with mpmath at 30 digits
        assert!((ebn0_to_sigma2(1.0, 0.5).unwrap() - 0.794_328_234_724_281_5).abs() < 1e-12);
        assert!((ebn0_to_sigma2(8.0, 45.0 / 63.0).unwrap() - 0.110_942_523_472_277_9).abs() < 1e-12);
        assert!(ebn0_to_sigma2(1.0, 0.0).is_err());
        assert!(ebn0_to_sigma2(1.0, -0.5).is_err());
        assert!(ebn0_to_sigma2(1.0, 1.5).is_err());
    }

    #[test]
    fn llr_of_sample() {
        assert_eq!(llr_from_sample(0.5, 0.25), 4.0);
        assert!(llr_from_sample(0.1, 1.0) > 0.0);
    }

    #[test]
    fn near_noiseless_limit() {
        let cfg = ChannelConfig::from_sigma2(1e-6).unwrap();
        let bits = [0u8, 1, 1, 0, 1];
        let f = transmit(&cfg, &bits, &mut stream_rng(3, 0));
        for (i, &b) in bits.iter().enumerate() {
            let x = if b == 0 { 1.0 } else { -1.0 };
            assert!((f.y[i] - x).abs() < 1e-2);
            assert_eq!(f.llr[i] > 0.0, b == 0);
            assert!(f.llr[i].abs() > 1e5);
            assert_eq!(f.llr[i], 2.0 * f.y[i] / 1e-6);
        }
    }

    #[test]
    fn empirical_noise_variance() {
        let cfg = ChannelConfig::new(2.0, 0.5).unwrap();
        let mut rng = stream_rng(11, 0);
        let n = 1_000_000;
        let mut llr = vec![0.0; n];
        all_zeros_llr(&cfg, &mut llr, &mut rng);
        let z: Vec<f64> = llr.iter().map(|l| l * cfg.sigma2 / 2.0 - 1.0).collect();
        let mean = z.iter().sum::<f64>() / n as f64;
        let var = z.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 5e-3);
        assert!((var / cfg.sigma2 - 1.0).abs() < 0.01, "var {var} vs {}", cfg.sigma2);
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let cfg = ChannelConfig::new(3.0, 0.5).unwrap();
        let a = transmit(&cfg, &[0; 8], &mut stream_rng(1, 2));
        let b = transmit(&cfg, &[0; 8], &mut stream_rng(1, 2));
        let c = transmit(&cfg, &[0; 8], &mut stream_rng(1, 3));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
