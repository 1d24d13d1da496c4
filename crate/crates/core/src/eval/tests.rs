use super::*;
use crate::bch::{construct_bch, HForm};
use crate::code::ParityCheckMatrix;
use crate::decoder::Tying;
use crate::gf2::BitMatrix;

fn q_function(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(x / std::f64::consts::SQRT_2)
}

fn spc(n: usize) -> LinearCode {
    let h = ParityCheckMatrix::new(BitMatrix::from_rows(&[vec![1u8; n]])).unwrap();
    LinearCode::from_parity_check(format!("SPC({n},{})", n - 1), h).unwrap()
}

#[test]
fn q_function_oracle() {
    // Q(√(2·10^0.8)) from a 30-digit evaluation: 1.90907774e-4.
    assert!((q_function((2.0 * 10f64.powf(0.8)).sqrt()) - 1.909_077_74e-4).abs() < 1e-10);
}

#[test]
fn uncoded_ber_matches_closed_form() {
    let code = LinearCode::uncoded(500);
    let cfg = EvalConfig {
        snr_list_db: vec![8.0],
        min_frames: 4000,
        min_frame_errors: 100,
        round_frames: 4000,
        seed: 1,
        ..Default::default()
    };
    let p = &run_ber(&code, &DecoderParams::spa(5), &cfg).unwrap()[0];
    let oracle = 1.909_077_74e-4;
    assert!(p.ci_lo <= oracle && oracle <= p.ci_hi, "{p:?}");
    assert!(!p.censored);
}

#[test]
fn dead_offsets_reduce_to_channel_decisions() {
    let code = construct_bch(6, 63, 5, HForm::Systematic).unwrap();
    let params = DecoderParams::noms_constant(5, code.graph(), Tying::PerEdge, 1e3);
    let snr = 4.0;
    let cfg = EvalConfig { snr_list_db: vec![snr], min_frames: 3000, round_frames: 3000, seed: 2, ..Default::default() };
    let p = &run_ber(&code, &params, &cfg).unwrap()[0];
    let oracle = q_function((2.0 * code.rate() * 10f64.powf(snr / 10.0)).sqrt());
    assert!(p.ci_lo <= oracle && oracle <= p.ci_hi, "{p:?} vs {oracle}");
}

#[test]
fn stopping_rule_and_censoring() {
    let code = spc(3);
    let cfg = EvalConfig {
        snr_list_db: vec![0.0, 30.0],
        min_frames: 10,
        min_frame_errors: 5,
        max_frames: 500,
        round_frames: 100,
        ..Default::default()
    };
    let pts = run_ber(&code, &DecoderParams::spa(5), &cfg).unwrap();
    assert!(!pts[0].censored);
    assert!(pts[0].frames >= 10 && pts[0].frame_errors >= 5);
    assert!(pts[1].censored);
    assert_eq!(pts[1].frames, 500);
    for p in &pts {
        assert!(p.bit_errors <= p.frames * 3);
        assert!(p.frame_errors <= p.frames);
        assert!(p.frame_errors <= p.bit_errors);
    }
}

#[test]
fn deterministic_and_independent_of_thread_count() {
    let code = construct_bch(4, 15, 2, HForm::Systematic).unwrap();
    let cfg = EvalConfig {
        snr_list_db: vec![2.0, 4.0],
        min_frames: 1000,
        round_frames: 1000,
        workers: 3,
        seed: 5,
        ..Default::default()
    };
    let params = DecoderParams::min_sum(5);
    let run_on = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_ber(&code, &params, &cfg).unwrap())
    };
    let a = run_on(1);
    assert_eq!(a, run_on(4));
    assert_eq!(a, run_on(1));
    let other_seed = EvalConfig { seed: 6, ..cfg.clone() };
    assert_ne!(a, run_ber(&code, &params, &other_seed).unwrap());
}

#[test]
fn worker_tallies_sum_to_the_total() {
    let code = construct_bch(4, 15, 2, HForm::Systematic).unwrap();
    let cfg = EvalConfig {
        snr_list_db: vec![3.0],
        min_frames: 900,
        min_frame_errors: 1,
        round_frames: 900,
        workers: 3,
        ..Default::default()
    };
    let params = DecoderParams::spa(5);
    let decoder = Decoder::<f64>::new(&code, &params).unwrap();
    let ch = ChannelConfig::new(3.0, code.rate()).unwrap();
    let mut sum = Tally::default();
    for w in 0..3u64 {
        let mut worker = Worker { rng: stream_rng(0, EVAL_STREAM_BASE | w), ws: decoder.workspace() };
        sum.merge(&simulate(&decoder, &ch, false, 300, &mut worker).unwrap());
    }
    let p = &run_ber(&code, &params, &cfg).unwrap()[0];
    assert_eq!((p.frames, p.bit_errors, p.frame_errors), (sum.frames, sum.bit_errors, sum.frame_errors));
}

#[test]
fn shares_split_evenly() {
    assert_eq!(shares(10, 3), vec![4, 3, 3]);
    assert_eq!(shares(2, 4), vec![1, 1, 0, 0]);
}

#[test]
fn ber_csv_round_trip() {
    let pts = vec![
        BerPoint::from_tally(1.0, 63, Tally { frames: 1000, bit_errors: 340, bit_errors_sq: 1300, frame_errors: 120 }, false),
        BerPoint::from_tally(2.5, 63, Tally { frames: 5000, bit_errors: 3, bit_errors_sq: 9, frame_errors: 1 }, true),
    ];
    let curves = vec![
        Curve { label: "spa".into(), points: pts.clone() },
        Curve { label: "noms".into(), points: pts[..1].to_vec() },
    ];
    let mut buf = Vec::new();
    write_ber_csv(&curves, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("label,ebn0_db,frames,bit_errors,frame_errors,ber,fer,ci_lo,ci_hi,censored\n"));
    assert_eq!(read_ber_csv(buf.as_slice()).unwrap(), curves);
}

#[test]
fn confidence_interval() {
    // One-bit frames give the binomial interval.
    let single = Tally { frames: 1_000_000, bit_errors: 100, bit_errors_sq: 100, frame_errors: 100 };
    let (lo, hi) = ber_ci95(&single, 1);
    assert!((lo - (1e-4 - 1.96 * (1e-4 * (1.0 - 1e-4) / 1e6f64).sqrt())).abs() < 1e-9);
    assert!(lo < 1e-4 && hi > 1e-4);
    // 100 ten-bit frames, 10 of them with 5 errors: mean 0.5, variance 2.25,
    // half width 1.959964·√(2.25/100)/10 = 0.0293994598.
    let clustered = Tally { frames: 100, bit_errors: 50, bit_errors_sq: 250, frame_errors: 10 };
    let (lo, hi) = ber_ci95(&clustered, 10);
    assert!((lo - (0.05 - 0.029_399_459_8)).abs() < 1e-10);
    assert!((hi - (0.05 + 0.029_399_459_8)).abs() < 1e-10);
    assert_eq!(ber_ci95(&Tally { frames: 100, ..Tally::default() }, 4), (0.0, 0.0));
}

#[test]
fn histogram_of_equal_offsets_has_one_bin() {
    let code = spc(6);
    let p = DecoderParams::noms_constant(3, code.graph(), Tying::PerEdge, 0.7);
    let hs = export_histograms(&p, code.graph(), 20).unwrap();
    assert_eq!(hs.len(), 3);
    for h in &hs {
        assert_eq!(h.counts.iter().filter(|&&c| c > 0).count(), 1);
        assert_eq!(h.counts.iter().sum::<u64>(), 6);
        assert_eq!(h.edges.len(), 21);
    }
}

#[test]
fn histogram_of_normal_offsets_looks_normal() {
    use rand_distr::{Distribution, StandardNormal};
    let code = construct_bch(7, 127, 3, HForm::Systematic).unwrap();
    let g = code.graph();
    let mut rng = stream_rng(4, 0);
    let values: Vec<f64> = (0..5 * g.num_edges()).map(|_| StandardNormal.sample(&mut rng)).collect();
    let p = DecoderParams::noms(5, Tying::PerEdge, values);
    for h in export_histograms(&p, g, 20).unwrap() {
        let e = g.num_edges() as f64;
        assert_eq!(h.counts.iter().sum::<u64>() as f64, e);
        // χ² against the normal probability of each bin, pooling sparse bins.
        let phi = |x: f64| 1.0 - q_function(x);
        let (mut chi2, mut dof, mut acc_o, mut acc_e) = (0.0, 0usize, 0.0, 0.0);
        for (i, &c) in h.counts.iter().enumerate() {
            acc_o += c as f64;
            acc_e += e * (phi(h.edges[i + 1]) - phi(h.edges[i]));
            if acc_e >= 5.0 {
                chi2 += (acc_o - acc_e) * (acc_o - acc_e) / acc_e;
                dof += 1;
                acc_o = 0.0;
                acc_e = 0.0;
            }
        }
        // Generous bound: mean dof, plus eight standard deviations.
        let bound = dof as f64 + 8.0 * (2.0 * dof as f64).sqrt();
        assert!(chi2 < bound, "iteration {}: χ² {chi2} with {dof} bins", h.iteration);
    }
}

#[test]
fn histogram_needs_offsets() {
    let code = spc(3);
    assert!(export_histograms(&DecoderParams::spa(2), code.graph(), 20).is_err());
}

fn curve(label: &str, pts: &[(f64, f64)]) -> Curve {
    Curve {
        label: label.into(),
        points: pts
            .iter()
            .map(|&(x, b)| BerPoint {
                ebn0_db: x,
                frames: 0,
                bit_errors: 0,
                frame_errors: 0,
                ber: b,
                fer: 0.0,
                ci_lo: b,
                ci_hi: b,
                censored: false,
            })
            .collect(),
    }
}

const FIG2_SPA: [(f64, f64); 8] = [
    (1.0, 8.89904797e-02),
    (2.0, 6.15665093e-02),
    (3.0, 3.53112705e-02),
    (4.0, 1.71428565e-02),
    (5.0, 7.35365087e-03),
    (6.0, 2.41063489e-03),
    (7.0, 6.24761917e-04),
    (8.0, 8.24175804e-05),
];
const FIG2_NOMS: [(f64, f64); 8] = [
    (1.0, 0.0899547029043432),
    (2.0, 0.06459990737568676),
    (3.0, 0.039068427797444585),
    (4.0, 0.01667285219443493),
    (5.0, 0.00421805412812607),
    (6.0, 0.0006943651428063898),
    (7.0, 9.103828048672173e-05),
    (8.0, 1.2290081026748483e-05),
];
const FIG3_NSPA: [(f64, f64); 8] = [
    (1.0, 0.07345816260377525),
    (2.0, 0.051815791461319136),
    (3.0, 0.032605883796899486),
    (4.0, 0.013695185583816412),
    (5.0, 0.0030964205013941605),
    (6.0, 0.0005131328008459374),
    (7.0, 6.364986750756875e-05),
    (8.0, 8.16391096482831e-06),
];
const FIG3_NOMS: [(f64, f64); 8] = [
    (1.0, 0.07379238341610177),
    (2.0, 0.05209934414672986),
    (3.0, 0.03354497504358718),
    (4.0, 0.017030470112099298),
    (5.0, 0.004622522454477363),
    (6.0, 0.0005438169149719594),
    (7.0, 5.4916696564008636e-05),
    (8.0, 7.707291615798542e-06),
];

#[test]
fn identical_curves_have_no_gap() {
    let a = curve("a", &FIG2_SPA);
    let b = curve("b", &FIG2_SPA);
    let r = compare_curves(&[a, b], &[1e-2, 1e-3, 1e-4]).unwrap();
    assert!(r.gaps.iter().all(|g| g.gap_db == Some(0.0)));
    assert!(r.ratios.iter().all(|x| x.ratio == 1.0));
}

#[test]
fn published_noms_gain_over_spa() {
    let r = compare_curves(&[curve("spa", &FIG2_SPA), curve("noms", &FIG2_NOMS)], &[1e-4]).unwrap();
    let gap = r.gaps[0].gap_db.unwrap();
    assert!((0.9..=1.0).contains(&gap), "{gap}");
}

#[test]
fn published_noms_close_to_neural_spa() {
    let r = compare_curves(&[curve("nspa", &FIG3_NSPA), curve("noms", &FIG3_NOMS)], &[1e-5]).unwrap();
    let gap = r.gaps[0].gap_db.unwrap();
    assert!(gap.abs() < 0.1, "{gap}");
}

#[test]
fn unreached_target_is_undefined() {
    let r = compare_curves(&[curve("spa", &FIG2_SPA), curve("noms", &FIG2_NOMS)], &[1e-6]).unwrap();
    assert_eq!(r.gaps[0].gap_db, None);
    assert!(r.to_text().contains("undefined"));
    let mut buf = Vec::new();
    r.write_csv(&mut buf).unwrap();
    assert!(String::from_utf8(buf).unwrap().contains("undefined"));
}

#[test]
fn interpolation_is_log_linear() {
    let x = snr_at_ber(&[(1.0, 1e-2), (2.0, 1e-4)], 1e-3).unwrap();
    assert!((x - 1.5).abs() < 1e-12);
    assert_eq!(snr_at_ber(&[(1.0, 1e-2), (2.0, 1e-4)], 1e-5), None);
}

#[test]
fn secondary_mode_detection() {
    // Main mode near 0.5, a separate bump at 7.
    let mut values: Vec<f64> = (0..200).map(|i| (i % 10) as f64 * 0.1).collect();
    values.extend(std::iter::repeat_n(7.0, 30));
    values.extend([3.0, 9.0]);
    let h = OffsetHistogram::from_values(1, &values, 20);
    let m = h.secondary_mode(5.0, 0.01).unwrap();
    assert!((6.5..7.5).contains(&m), "{m}");
    assert_eq!(h.secondary_mode(8.0, 0.01), None);
    assert_eq!(h.secondary_mode(5.0, 0.5), None);

    // A monotone tail has no second mode.
    let tail: Vec<f64> = (0..100).flat_map(|i| std::iter::repeat_n(i as f64 * 0.1, 100 - i)).collect();
    assert_eq!(OffsetHistogram::from_values(1, &tail, 20).secondary_mode(5.0, 0.0), None);
}
