//! Monte Carlo estimates against the closed-form bounds.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use peakcount::counting::{
    iac_bounds, ic_probability_bounds, mallows_lower, polya_lower_certified, Quantity,
};
use peakcount::estimate::estimate_sp;
use peakcount::sampling::ModelSpec;
use peakcount::Vote;

const TRIALS: u64 = 40_000;

fn check(model: ModelSpec, n: u64, m: u64, lower: Option<f64>, upper: Option<f64>) {
    let est = estimate_sp(&model, n as usize, m as usize, TRIALS, 3, 4).unwrap();
    let (p, s) = (est.point_f64(), est.sigma().max(1.0 / TRIALS as f64));
    if let Some(lo) = lower {
        assert!(
            p >= lo - 3.0 * s,
            "{model} ({n},{m}): {p} below lower bound {lo}"
        );
    }
    if let Some(hi) = upper {
        assert!(
            p <= hi + 3.0 * s,
            "{model} ({n},{m}): {p} above upper bound {hi}"
        );
    }
    assert!(est.ci_low <= p && p <= est.ci_high);
}

fn f(q: &Option<Quantity>) -> Option<f64> {
    q.as_ref().map(Quantity::to_f64)
}

#[test]
fn ic_and_iac_between_bounds() {
    for (n, m) in [(5, 5), (2, 5), (5, 4), (10, 3)] {
        if let Ok(b) = ic_probability_bounds(n, m) {
            let lower = f(&b.lower).or(f(&b.exact));
            let upper = f(&b.upper).or(f(&b.exact));
            check(ModelSpec::Ic, n, m, lower, upper);
        }
        if let Ok(b) = iac_bounds(n, m) {
            let lower = f(&b.lower).or(f(&b.exact));
            let upper = f(&b.upper).or(f(&b.exact));
            check(ModelSpec::Iac, n, m, lower, upper);
        }
    }
}

#[test]
fn polya_above_certified_bound() {
    for (n, m, a) in [
        (10, 5, 120),
        (10, 5, 60),
        (25, 5, 120),
        (10, 5, 10),
        (10, 10, 3_628_800),
    ] {
        let lo = polya_lower_certified(n, m, a).unwrap().to_f64().unwrap();
        check(ModelSpec::Polya { a }, n, m, Some(lo), None);
    }
}

#[test]
fn mallows_above_lower_bound() {
    for (n, m, phi) in [
        (10, 5, (1, 10)),
        (10, 5, (1, 5)),
        (25, 5, (1, 20)),
        (10, 10, (1, 10)),
    ] {
        let phi = BigRational::new(phi.0.into(), phi.1.into());
        let lo = mallows_lower(n, m, &phi).unwrap().to_f64().unwrap();
        let reference: Vote = Vote::identity(m as usize).reverse();
        check(ModelSpec::Mallows { phi, reference }, n, m, Some(lo), None);
    }
}

#[test]
fn results_do_not_depend_on_workers() {
    let phi = BigRational::new(1.into(), 10.into());
    let models = [
        ModelSpec::Ic,
        ModelSpec::Iac,
        ModelSpec::Polya { a: 24 },
        ModelSpec::Mallows {
            phi,
            reference: Vote::identity(4),
        },
    ];
    for model in models {
        let base = estimate_sp(&model, 6, 4, 5_000, 17, 1).unwrap();
        for workers in [4, 8] {
            assert_eq!(
                estimate_sp(&model, 6, 4, 5_000, 17, workers).unwrap(),
                base,
                "{model}"
            );
        }
    }
}
