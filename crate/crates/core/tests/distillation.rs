use proptest::prelude::*;

use noqc::faulttol::{
    distill, distill_with, threshold_with, vacuum_error_budget, BudgetOptions, DistillationConfig,
    DistillationInstrument, IdleAccounting, NoisyParts, Readout,
};
use noqc::qcore::CMatrix;

fn config(n: usize, eps: f64) -> DistillationConfig<f64> {
    DistillationConfig::new(n, eps, 1e4).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn records_form_a_distribution(n in prop::sample::select(vec![1usize, 3, 5, 7]), eps in 0.0..0.6_f64, output in any::<bool>()) {
        let readout = if output { Readout::Output } else { Readout::Input };
        let r = distill(&config(n, eps).with_readout(readout)).unwrap();
        prop_assert_eq!(r.records.len(), 1 << n);
        prop_assert!((r.total_probability() - 1.0).abs() < 1e-9);
        prop_assert!(r.p_fail <= 0.5 && r.p_fail >= 0.0);
        let from_records: f64 = r.records.iter().map(|x| x.error()).sum();
        prop_assert!((from_records - r.p_fail).abs() < 1e-12);
    }
}

#[test]
fn prefix_sharing_matches_leaf_evaluation() {
    for n in [1, 5, 9] {
        let c = config(n, 0.15);
        let inst = DistillationInstrument::build(&c).unwrap();
        let tree = distill_with(&inst, &c).unwrap();
        for rec in tree.records.iter().step_by(7) {
            let outcomes: Vec<usize> = (0..n).map(|k| ((rec.outcome >> (n - 1 - k)) & 1) as usize).collect();
            let a = inst.leaf(&CMatrix::unit(2, 0, 0), &outcomes);
            let b = inst.leaf(&CMatrix::unit(2, 1, 1), &outcomes);
            let (pa, pb) = (0.5 * (a[0].re + a[3].re), 0.5 * (b[0].re + b[3].re));
            assert!((pa + pb - rec.probability).abs() < 1e-12);
            assert!((pa / (pa + pb) - rec.posterior).abs() < 1e-12);
        }
    }
}

#[test]
fn perfect_rounds_classify_flipped_data() {
    let c = config(5, 0.4).with_noise(NoisyParts::NONE);
    for readout in [Readout::Input, Readout::Output] {
        let r = distill(&c.with_readout(readout)).unwrap();
        assert!(r.records.iter().all(|x| x.probability == 0.0 || x.posterior == 0.0 || x.posterior == 1.0));
        assert_eq!(r.p_fail, 0.0);
    }
}

#[test]
fn more_rounds_do_not_hurt_at_low_noise() {
    let series: Vec<f64> = [1, 3, 5, 7].iter().map(|&n| distill(&config(n, 0.1)).unwrap().p_fail).collect();
    assert!(series.windows(2).all(|w| w[1] <= w[0]), "{series:?}");
}

#[test]
fn budget_increases_on_the_low_noise_range() {
    let totals: Vec<f64> = (0..=10).map(|k| vacuum_error_budget(k as f64 * 0.05, 1e4, 17).unwrap().total()).collect();
    assert!(totals.windows(2).all(|w| w[1] > w[0]), "{totals:?}");
}

#[test]
fn threshold_brackets_the_budget() {
    for accounting in [IdleAccounting::Off, IdleAccounting::InDistillation, IdleAccounting::Additive] {
        let options = BudgetOptions {
            accounting,
            ..BudgetOptions::default()
        };
        let t = threshold_with(1e4, 9, options).unwrap();
        let (lo, hi) = t.bracket;
        assert!(hi - lo <= 1e-4 && lo <= t.epsilon_star && t.epsilon_star <= hi);
        assert!(t.budget_at_bracket.0 < 0.03 && 0.03 <= t.budget_at_bracket.1);
        assert_eq!(t.history.len(), t.iterations + 1);
        assert!(t.history.windows(2).all(|w| w[1].0 >= w[0].0 && w[1].1 <= w[0].1));
    }
}

#[test]
fn missing_threshold_is_reported() {
    let e = threshold_with(1e3, 17, BudgetOptions::default()).unwrap_err();
    assert!(matches!(e, noqc::Error::NoThreshold { side: "above", .. }), "{e}");
}
