use noms::bch::HForm;
use noms::codespec::{bch_from_nk, single_parity_check};
use noms::decoder::kernels::{cn_update_ms, cn_update_noms, cn_update_oms, cn_update_spa};
use noms::decoder::{Decoder, DecoderParams, Tying};
use noms::LinearCode;
use proptest::prelude::*;

fn bch15() -> LinearCode {
    bch_from_nk(15, 7, HForm::Systematic).unwrap()
}

fn llrs(n: usize, scale: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-scale..scale, n)
}

/// SPA, MS, OMS, NOMS with per-edge offsets and NSPA with perturbed weights.
fn variants(code: &LinearCode, t: usize, knobs: &[f64]) -> Vec<DecoderParams> {
    let g = code.graph();
    let e = g.num_edges();
    let offsets: Vec<f64> = (0..e * t).map(|i| knobs[i % knobs.len()]).collect();
    let mut nspa = DecoderParams::nspa_unit(t, g);
    let theta: Vec<f64> = nspa.trainable().iter().enumerate().map(|(i, w)| w + 0.3 * knobs[i % knobs.len()]).collect();
    nspa.set_trainable(&theta);
    vec![
        DecoderParams::spa(t),
        DecoderParams::min_sum(t),
        DecoderParams::oms(t, knobs[0].abs()),
        DecoderParams::noms(t, Tying::PerEdge, offsets),
        nspa,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Flipping the LLR signs on a codeword's support flips the soft output
    /// on the same support and nothing else.
    #[test]
    fn decoders_are_codeword_symmetric(
        llr in llrs(15, 12.0),
        msg in prop::collection::vec(0u8..2, 7),
        knobs in prop::collection::vec(-1.5f64..1.5, 7),
    ) {
        let code = bch15();
        let word = code.encode(&msg).unwrap();
        let flip = |v: &[f64]| -> Vec<f64> {
            v.iter().zip(&word).map(|(&x, &c)| if c == 1 { -x } else { x }).collect()
        };
        for p in variants(&code, 5, &knobs) {
            let dec = Decoder::<f64>::new(&code, &p).unwrap();
            let a = dec.decode(&llr).unwrap();
            let b = dec.decode(&flip(&llr)).unwrap();
            prop_assert_eq!(flip(&a.s), b.s, "{}", p.variant);
        }
    }

    #[test]
    fn spa_is_exact_on_a_single_check(n in 2usize..8, llr in llrs(8, 20.0)) {
        let code = single_parity_check(n).unwrap();
        let llr = &llr[..n];
        let s = Decoder::<f64>::new(&code, &DecoderParams::spa(1)).unwrap().decode(llr).unwrap().s;
        let words: Vec<Vec<u8>> = (0..1u32 << (n - 1))
            .map(|m| code.encode(&(0..n - 1).map(|i| ((m >> i) & 1) as u8).collect::<Vec<_>>()).unwrap())
            .collect();
        for v in 0..n {
            let lse = |bit: u8| {
                let xs: Vec<f64> = words
                    .iter()
                    .filter(|w| w[v] == bit)
                    .map(|w| -w.iter().zip(llr).map(|(&c, l)| c as f64 * l).sum::<f64>())
                    .collect();
                let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
            };
            prop_assert!((s[v] - (lse(0) - lse(1))).abs() < 1e-9, "bit {} of {:?}", v, llr);
        }
    }

    #[test]
    fn outputs_stay_finite(llr in llrs(15, 1e6), knobs in prop::collection::vec(-50.0f64..50.0, 5)) {
        let code = bch15();
        for p in variants(&code, 5, &knobs) {
            let out = Decoder::<f64>::new(&code, &p).unwrap().decode(&llr).unwrap();
            prop_assert!(out.s.iter().all(|x| x.is_finite()), "{}", p.variant);
        }
    }

    #[test]
    fn huge_offsets_silence_the_checks(llr in llrs(15, 10.0)) {
        let code = bch15();
        let p = DecoderParams::noms_constant(5, code.graph(), Tying::PerEdge, 1e3);
        let s = Decoder::<f64>::new(&code, &p).unwrap().decode(&llr).unwrap().s;
        prop_assert_eq!(s, llr);
    }

    #[test]
    fn tied_noms_is_oms(llr in llrs(15, 10.0), beta in 0.0f64..3.0) {
        let code = bch15();
        let tied = DecoderParams::noms_constant(5, code.graph(), Tying::PerEdge, beta);
        let a = Decoder::<f64>::new(&code, &tied).unwrap().decode(&llr).unwrap().s;
        let b = Decoder::<f64>::new(&code, &DecoderParams::oms(5, beta)).unwrap().decode(&llr).unwrap().s;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn check_messages_never_exceed_the_weakest_input(incoming in prop::collection::vec(-25.0f64..25.0, 1..10), beta in -2.0f64..2.0) {
        let weakest = incoming.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
        prop_assert!(cn_update_spa(&incoming).abs() <= weakest * (1.0 + 1e-12));
        prop_assert_eq!(cn_update_ms(&incoming).abs(), weakest);
        prop_assert!(cn_update_oms(&incoming, beta.abs()).abs() <= weakest);
        prop_assert_eq!(cn_update_noms(&incoming, beta).abs(), (weakest - beta).max(0.0));
    }

    #[test]
    fn check_sign_is_the_parity_of_input_signs(incoming in prop::collection::vec(0.1f64..25.0, 1..10), mask in any::<u16>()) {
        let signed: Vec<f64> = incoming.iter().enumerate().map(|(i, &x)| if mask >> i & 1 == 1 { -x } else { x }).collect();
        let negative = (mask as u32 & ((1 << incoming.len()) - 1)).count_ones() % 2 == 1;
        prop_assert_eq!(cn_update_ms(&signed) < 0.0, negative);
        prop_assert_eq!(cn_update_spa(&signed) < 0.0, negative);
    }
}
