use noms::bch::HForm;
use noms::channel::stream_rng;
use noms::codespec::bch_from_nk;
use noms::decoder::{DecoderParams, Tying};
use noms::train::backward::LossMode;
use noms::train::gradcheck::check_gradient;
use noms::train::{make_minibatch, minibatch_gradient, TrainConfig};
use noms::LinearCode;
use proptest::prelude::*;

fn bch15() -> LinearCode {
    bch_from_nk(15, 7, HForm::Systematic).unwrap()
}

fn frames(code: &LinearCode, seed: u64) -> noms::train::Minibatch {
    let cfg = TrainConfig { batch_size: 4, snr_set_db: vec![1.0, 3.0], ..TrainConfig::default() };
    make_minibatch(&cfg, code, &mut stream_rng(seed, 0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn noms_gradient_matches_finite_differences(
        offsets in prop::collection::vec(-1.0f64..1.5, 64 * 3),
        seed in any::<u64>(),
    ) {
        let code = bch15();
        let slots = Tying::PerEdge.num_slots(3, code.graph());
        let params = DecoderParams::noms(3, Tying::PerEdge, offsets[..slots].to_vec());
        let mb = frames(&code, seed);
        let idx: Vec<usize> = (0..params.num_trainable()).step_by(7).collect();
        for c in check_gradient(&code, &params, &mb, &idx, 1e-4, 1e-3).unwrap() {
            if !c.kink_adjacent {
                prop_assert!(c.relative_error() < 1e-5, "{:?}", c);
            }
        }
    }

    #[test]
    fn nspa_gradient_matches_finite_differences(shift in prop::collection::vec(-0.3f64..0.3, 16), seed in any::<u64>()) {
        let code = bch15();
        let mut params = DecoderParams::nspa_unit(3, code.graph());
        let theta: Vec<f64> = params.trainable().iter().enumerate().map(|(i, w)| w + shift[i % shift.len()]).collect();
        params.set_trainable(&theta);
        let mb = frames(&code, seed);
        let idx: Vec<usize> = (0..params.num_trainable()).step_by(23).collect();
        for c in check_gradient(&code, &params, &mb, &idx, 1e-4, 1e-3).unwrap() {
            if !c.kink_adjacent {
                prop_assert!(c.relative_error() < 1e-5, "{:?}", c);
            }
        }
    }

    #[test]
    fn dead_offsets_get_no_gradient(beta in 100.0f64..1e4, seed in any::<u64>()) {
        let code = bch15();
        let params = DecoderParams::noms_constant(3, code.graph(), Tying::PerEdge, beta);
        let g = minibatch_gradient(&code, &params, &frames(&code, seed), LossMode::AllIterations).unwrap();
        prop_assert!(g.d_offsets.iter().all(|&x| x == 0.0));
        prop_assert!(g.loss > 0.0);
    }
}
