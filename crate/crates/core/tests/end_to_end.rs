use num_rational::Ratio;
use rand::Rng;

use annhard_core::algebra::{hermitian, FieldSpec};
use annhard_core::bits::BitVector;
use annhard_core::cp_reduction::{reduce_with, Caps, Metric};
use annhard_core::formats;
use annhard_core::instances::{gen_ov, Force, OvGenConfig};
use annhard_core::protocol::{
    accept_probability, ama_run, ama_soundness_exhaustive, honest_merlin, ma_run, soundness_exhaustive,
    CodeChoice, FieldPolicy, MeasureConfig, ProtocolParams, SubsetSource,
};
use annhard_core::seed::rng;
use annhard_core::solvers::{closest_pair, solve_ov};

fn random_bits(r: &mut impl Rng, m: usize, density: f64) -> BitVector {
    BitVector::from_bools(&(0..m).map(|_| r.gen_bool(density)).collect::<Vec<_>>())
}

#[test]
fn hermitian_q2_random_checks() {
    let pair = hermitian::hermitian_code_pair(2, hermitian::pole_order_for_dimension(2, 2).unwrap()).unwrap();
    assert_eq!(pair.n(), 8);
    let f: FieldSpec = pair.field().clone();
    let mut r = rng(1);
    for _ in 0..1000 {
        let msg: Vec<_> = (0..pair.c.k()).map(|_| f.from_index(r.gen_range(0..4))).collect();
        let w = pair.c.encode(&msg).unwrap();
        for (&pos, &sym) in pair.c.systematic_positions().iter().zip(&msg) {
            assert_eq!(w.symbols[pos], sym);
        }
        let other: Vec<_> = (0..pair.c.k()).map(|_| f.from_index(r.gen_range(0..4))).collect();
        let v = pair.c.encode(&other).unwrap();
        assert!(pair.pointwise_product(&w, &v).is_ok());
    }
}

#[test]
fn hermitian_backend_protocol() {
    let params = ProtocolParams::ma(4, 2, &CodeChoice::Hermitian { q: 3 }, None).unwrap();
    assert_eq!(params.n(), 27);
    let mut r = rng(2);
    let cfg = MeasureConfig::default();
    for _ in 0..20 {
        let a = random_bits(&mut r, 4, 0.5);
        let b = random_bits(&mut r, 4, 0.5);
        if a.is_orthogonal(&b) {
            let mu = honest_merlin(&params, &a, &b).unwrap();
            assert_eq!(accept_probability(&params, &a, &b, &mu, &cfg).unwrap().value(), 1.0);
        } else {
            let (s, _) = soundness_exhaustive(&params, &a, &b).unwrap();
            assert!(s <= Ratio::new(1, 2), "{a} {b}: {s}");
        }
    }
}

#[test]
fn ama_runs_and_soundness() {
    let code = CodeChoice::ReedSolomon(FieldPolicy::Characteristic(3));
    let params = ProtocolParams::ama(4, 2, &code, None, SubsetSource::Uniform).unwrap();
    let mut r = rng(3);
    for i in 0..30 {
        let a = random_bits(&mut r, 4, 0.6);
        let b = random_bits(&mut r, 4, 0.6);
        if a.is_orthogonal(&b) {
            assert!(ama_run(&params, &a, &b, i).unwrap().verdict.accepted());
        } else {
            let s = ama_soundness_exhaustive(&params, &a, &b, 10_000_000).unwrap();
            assert!(s <= Ratio::new(1, 2), "{a} {b}: {s}");
        }
    }
}

#[test]
fn ma_transcripts_recheck() {
    let params = ProtocolParams::ma(6, 3, &CodeChoice::ReedSolomon(FieldPolicy::Smallest), None).unwrap();
    let mut r = rng(4);
    for i in 0..20 {
        let a = random_bits(&mut r, 6, 0.4);
        let b = random_bits(&mut r, 6, 0.4);
        let tr = ma_run(&params, &a, &b, i).unwrap();
        assert_eq!(tr.recheck(&params, &a).unwrap(), tr.verdict);
        if a.is_orthogonal(&b) {
            assert!(tr.verdict.accepted());
        }
    }
}

#[test]
fn reduction_classifies_random_instances() {
    let params = ProtocolParams::ma(4, 2, &CodeChoice::ReedSolomon(FieldPolicy::Characteristic(5)), Some(1)).unwrap();
    let caps = Caps::default();
    for seed in 0..12 {
        let ov = gen_ov(&OvGenConfig::new(4, 4, 4, Force::Any, seed)).unwrap();
        let (cp, cert) = reduce_with(&ov, &params, &caps, seed).unwrap();
        let v = closest_pair(&cp).unwrap().value as u128;
        assert_eq!(cert.classify(v), Some(solve_ov(&ov).is_some()), "seed {seed}: {v}");
        let l2 = closest_pair(&cp.with_metric(Metric::L2)).unwrap();
        assert_eq!(l2.value as u128, v);
    }
}

#[test]
fn artefacts_round_trip() {
    let params = ProtocolParams::ma(4, 2, &CodeChoice::ReedSolomon(FieldPolicy::Characteristic(5)), Some(1)).unwrap();
    let ov = gen_ov(&OvGenConfig::new(4, 3, 2, Force::Yes, 9)).unwrap();
    assert_eq!(formats::read_ov(&formats::write_ov(&ov)).unwrap(), ov);
    let (cp, cert) = reduce_with(&ov, &params, &Caps::default(), 9).unwrap();
    assert_eq!(formats::read_cp(&formats::write_cp(&cp)).unwrap(), cp);
    assert_eq!(formats::read_cert(&formats::write_cert(&cert)).unwrap(), cert);
    assert_eq!(cp.provenance, "ov-to-cp");
}
