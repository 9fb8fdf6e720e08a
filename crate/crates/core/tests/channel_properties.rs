use proptest::prelude::*;

use noqc::channels::{entanglement_fidelity, pauli_twirl, Channel};
use noqc::qcore::{expm_hermitian, CMatrix, DensityMatrix, HermitianOperator, Operator, SystemLayout};
use noqc::C;

fn unitary(layout: &SystemLayout, e: &[(f64, f64)]) -> Operator<f64> {
    let d = layout.dim();
    let a = CMatrix::from_fn(d, |i, j| C::new(e[i * d + j].0, e[i * d + j].1));
    let h = CMatrix::from_fn(d, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let h = HermitianOperator::new(Operator::new(layout.clone(), h).unwrap()).unwrap();
    expm_hermitian(&h, 1.0).unwrap()
}

/// Random CPTP map on `s`: a unitary on `(s, e)` with `e` starting in `|0>`,
/// followed by tracing out `e`.
fn random_channel(e: &[(f64, f64)], mix: f64) -> Channel<f64> {
    let wide = SystemLayout::registers(&["s", "e"]).unwrap();
    let u = Channel::unitary(&unitary(&wide, e)).unwrap();
    let env = DensityMatrix::from_bloch(&SystemLayout::registers(&["e"]).unwrap(), [0.0, 0.0, mix]).unwrap();
    u.contract(&env).unwrap()
}

fn entries(dim: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.5..1.5, -1.5..1.5), dim * dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(a in entries(4), b in entries(4), c in entries(4), m in 0.0..0.5_f64) {
        let (x, y, z) = (random_channel(&a, m), random_channel(&b, 0.5), random_channel(&c, 0.25));
        let left = x.compose(&y).unwrap().compose(&z).unwrap();
        let right = x.compose(&y.compose(&z).unwrap()).unwrap();
        prop_assert!(left.superoperator().distance(right.superoperator()) < 1e-12);
    }

    #[test]
    fn random_channels_are_cptp(a in entries(4), m in 0.0..0.5_f64) {
        let ch = random_channel(&a, m);
        prop_assert!(ch.validate().is_ok());
    }

    #[test]
    fn kraus_and_choi_round_trip(a in entries(4), m in 0.0..0.5_f64) {
        let ch = random_channel(&a, m);
        let k = ch.kraus().unwrap();
        prop_assert!(k.len() <= 4);
        let back = Channel::from_kraus(&k);
        prop_assert!(back.superoperator().distance(ch.superoperator()) < 1e-10);
        let choi = Channel::from_choi(ch.layout().clone(), &ch.choi()).unwrap();
        prop_assert_eq!(choi.superoperator(), ch.superoperator());
    }

    #[test]
    fn fidelity_is_unitarily_invariant(a in entries(4), b in entries(2), m in 0.0..0.5_f64) {
        let ch = random_channel(&a, m);
        let l = ch.layout().clone();
        let u = unitary(&l, &b);
        let undo = Channel::unitary(&u.adjoint()).unwrap().compose(&ch).unwrap();
        let f1 = entanglement_fidelity(&ch, &u).unwrap();
        let f2 = entanglement_fidelity(&undo, &Operator::identity(&l)).unwrap();
        prop_assert!((f1 - f2).abs() < 1e-12);
        // the twirl keeps the identity weight
        let tw = pauli_twirl(&undo).unwrap();
        prop_assert!((tw.identity_probability() - f2).abs() < 1e-12);
    }

    #[test]
    fn twirl_is_a_distribution(a in entries(4), m in 0.0..0.5_f64) {
        let tw = pauli_twirl(&random_channel(&a, m)).unwrap();
        let total: f64 = tw.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(tw.probabilities().iter().all(|p| *p >= -1e-12));
    }
}

#[test]
fn tensor_then_contract_recovers_factor() {
    let a = [(0.3, 0.1), (-0.2, 0.4), (0.5, -0.1), (0.1, 0.2)].repeat(4);
    let x = random_channel(&a, 0.2);
    let y = Channel::depolarizing(&SystemLayout::registers(&["t"]).unwrap(), "t", 0.3).unwrap();
    let both = x.tensor(&y).unwrap();
    let env = DensityMatrix::maximally_mixed(&SystemLayout::registers(&["t"]).unwrap());
    let back = both.contract(&env).unwrap();
    assert!(back.superoperator().distance(x.superoperator()) < 1e-13);
}

#[test]
fn single_precision_channel_algebra() {
    let l = SystemLayout::registers(&["s"]).unwrap();
    let dep = Channel::<f32>::depolarizing(&l, "s", 0.2).unwrap();
    let tw = pauli_twirl(&dep.compose(&dep).unwrap()).unwrap();
    // two rounds keep (1 - 0.2)^2 of the state
    let keep = 1.0 - 0.64_f32;
    assert!((tw.probabilities()[3] - keep / 4.0).abs() < 1e-6);
}
