use std::io::Write;

use serde::Serialize;

use super::csv_error;
use crate::code::TannerGraph;
use crate::decoder::DecoderParams;
use crate::error::{Error, Result};

/// Histogram of one iteration's offsets. Bins span that iteration's
/// minimum to maximum; the last bin is closed on the right.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetHistogram {
    /// 1-based iteration.
    pub iteration: usize,
    /// `bins + 1` edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl OffsetHistogram {
    pub fn from_values(iteration: usize, values: &[f64], bins: usize) -> Self {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let width = (hi - lo) / bins as f64;
        let edges = (0..=bins).map(|i| if i == bins { hi } else { lo + width * i as f64 }).collect();
        let mut counts = vec![0u64; bins];
        for &x in values {
            let b = if width > 0.0 { (((x - lo) / width) as usize).min(bins - 1) } else { 0 };
            counts[b] += 1;
        }
        OffsetHistogram { iteration, edges, counts }
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1]))
    }

    /// Centre of the tallest local maximum lying above `threshold` that is
    /// separated from the overall mode by a lower bin and holds at least
    /// `min_share` of the values. `None` when there is no such second mode.
    pub fn secondary_mode(&self, threshold: f64, min_share: f64) -> Option<f64> {
        let total: u64 = self.counts.iter().sum();
        let main = (0..self.counts.len()).max_by_key(|&i| (self.counts[i], std::cmp::Reverse(i)))?;
        let centers: Vec<f64> = self.centers().collect();
        let c = &self.counts;
        (0..c.len())
            .filter(|&j| j != main && centers[j] > threshold)
            .filter(|&j| c[j] as f64 >= min_share * total as f64 && c[j] > 0)
            .filter(|&j| (j == 0 || c[j] >= c[j - 1]) && (j + 1 == c.len() || c[j] >= c[j + 1]))
            .filter(|&j| {
                let (a, b) = if j < main { (j, main) } else { (main, j) };
                (a + 1..b).any(|i| c[i] < c[j])
            })
            .max_by_key(|&j| c[j])
            .map(|j| centers[j])
    }

    /// CSV with columns `value,frequency,bin_lo,bin_hi`; `value` is the bin
    /// centre.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        #[derive(Serialize)]
        struct Row {
            value: f64,
            frequency: u64,
            bin_lo: f64,
            bin_hi: f64,
        }
        let mut out = csv::Writer::from_writer(w);
        for (i, (value, &frequency)) in self.centers().zip(&self.counts).enumerate() {
            out.serialize(Row { value, frequency, bin_lo: self.edges[i], bin_hi: self.edges[i + 1] })
                .map_err(csv_error)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Per-iteration histograms of NOMS offsets, expanded to one value per
/// edge, so each histogram holds `E` values whatever the tying.
pub fn export_histograms(params: &DecoderParams, graph: &TannerGraph, bins: usize) -> Result<Vec<OffsetHistogram>> {
    let offsets = params
        .offsets
        .as_ref()
        .ok_or_else(|| Error::Config(format!("variant {} has no offsets", params.variant)))?;
    if bins == 0 {
        return Err(Error::Argument("histograms need at least one bin".into()));
    }
    let e = graph.num_edges();
    let expanded = offsets.expand(params.iterations, graph);
    Ok((0..params.iterations)
        .map(|t| OffsetHistogram::from_values(t + 1, &expanded[t * e..(t + 1) * e], bins))
        .collect())
}
