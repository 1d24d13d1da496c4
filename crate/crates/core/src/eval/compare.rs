//! Gaps between BER curves.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use super::{csv_error, Curve};
use crate::error::{Error, Result};

/// Eb/N0 at which the curve crosses `target`, interpolating linearly in
/// `log10(BER)` between the two bracketing points. `None` if the curve
/// never brackets the target.
pub fn snr_at_ber(points: &[(f64, f64)], target: f64) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = points.iter().copied().filter(|&(_, b)| b > 0.0 && b.is_finite()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let lt = target.log10();
    for w in pts.windows(2) {
        let ((x0, b0), (x1, b1)) = (w[0], w[1]);
        let (l0, l1) = (b0.log10(), b1.log10());
        if (l0 - lt) * (l1 - lt) <= 0.0 {
            if l0 == l1 {
                return Some(x0);
            }
            return Some(x0 + (lt - l0) * (x1 - x0) / (l1 - l0));
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub label: String,
    pub ebn0_db: f64,
    pub ber_reference: f64,
    pub ber: f64,
    /// `ber / ber_reference`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapRow {
    pub label: String,
    pub target_ber: f64,
    pub snr_reference: Option<f64>,
    pub snr: Option<f64>,
    /// Positive when `label` reaches the target at a lower Eb/N0 than the
    /// reference. `None` when either curve misses the target.
    pub gap_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub reference: String,
    pub ratios: Vec<RatioRow>,
    pub gaps: Vec<GapRow>,
}

/// Compares every curve against the first one.
pub fn compare_curves(curves: &[Curve], targets: &[f64]) -> Result<GapReport> {
    let (reference, others) = curves
        .split_first()
        .ok_or_else(|| Error::Argument("nothing to compare".into()))?;
    let xy = |c: &Curve| c.points.iter().map(|p| (p.ebn0_db, p.ber)).collect::<Vec<_>>();
    let ref_xy = xy(reference);
    let mut ratios = Vec::new();
    let mut gaps = Vec::new();
    for c in others {
        for p in &c.points {
            if let Some(r) = reference.points.iter().find(|r| r.ebn0_db == p.ebn0_db) {
                ratios.push(RatioRow {
                    label: c.label.clone(),
                    ebn0_db: p.ebn0_db,
                    ber_reference: r.ber,
                    ber: p.ber,
                    ratio: p.ber / r.ber,
                });
            }
        }
        let c_xy = xy(c);
        for &target in targets {
            let snr_reference = snr_at_ber(&ref_xy, target);
            let snr = snr_at_ber(&c_xy, target);
            let gap_db = snr_reference.zip(snr).map(|(a, b)| a - b);
            gaps.push(GapRow { label: c.label.clone(), target_ber: target, snr_reference, snr, gap_db });
        }
    }
    Ok(GapReport { reference: reference.label.clone(), ratios, gaps })
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "undefined".to_string(), |v| format!("{v:.4}"))
}

impl GapReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "reference: {}", self.reference);
        for r in &self.ratios {
            let _ = writeln!(
                s,
                "{:>12} {:>6.2} dB  BER {:.4e} vs {:.4e}  ratio {:.4}",
                r.label, r.ebn0_db, r.ber, r.ber_reference, r.ratio
            );
        }
        for g in &self.gaps {
            let _ = writeln!(
                s,
                "{:>12} at BER {:.1e}: {} dB vs {} dB, gap {} dB",
                g.label,
                g.target_ber,
                opt(g.snr),
                opt(g.snr_reference),
                opt(g.gap_db)
            );
        }
        s
    }

    /// CSV with columns `kind,label,ebn0_db,target_ber,ber_reference,ber,ratio,snr_reference,snr,gap_db`;
    /// undefined values are written as `undefined`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "kind", "label", "ebn0_db", "target_ber", "ber_reference", "ber", "ratio", "snr_reference", "snr", "gap_db",
        ])
        .map_err(csv_error)?;
        for r in &self.ratios {
            out.write_record([
                "ratio".to_string(),
                r.label.clone(),
                r.ebn0_db.to_string(),
                String::new(),
                r.ber_reference.to_string(),
                r.ber.to_string(),
                r.ratio.to_string(),
                String::new(),
                String::new(),
                String::new(),
            ])
            .map_err(csv_error)?;
        }
        let full = |x: Option<f64>| x.map_or_else(|| "undefined".to_string(), |v| v.to_string());
        for g in &self.gaps {
            out.write_record([
                "gap".to_string(),
                g.label.clone(),
                String::new(),
                g.target_ber.to_string(),
                String::new(),
                String::new(),
                String::new(),
                full(g.snr_reference),
                full(g.snr),
                full(g.gap_db),
            ])
            .map_err(csv_error)?;
        }
        out.flush()?;
        Ok(())
    }
}
