//! Monte Carlo estimates of the probability that a random election is
//! single-peaked.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::recognition::recognize_fast;
use crate::sampling::{sample, ModelSpec, RngStream};

/// Trials per block; block `b` always draws from stream `b`, so results do
/// not depend on how blocks are scheduled.
pub const BLOCK_TRIALS: u64 = 1024;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub successes: u64,
    pub trials: u64,
    pub point: BigRational,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Estimate {
    pub fn point_f64(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    /// Binomial standard error of the point estimate.
    pub fn sigma(&self) -> f64 {
        let p = self.point_f64();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let t = trials as f64;
    let p = successes as f64 / t;
    let z2 = z * z;
    let denom = 1.0 + z2 / t;
    let center = (p + z2 / (2.0 * t)) / denom;
    let half = z * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt() / denom;
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

pub fn estimate_sp(
    model: &ModelSpec,
    n: usize,
    m: usize,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    if workers == 0 {
        return Err(Error::Parameter("workers must be at least 1".into()));
    }
    if n == 0 || m == 0 {
        return Err(Error::Parameter("n and m must be positive".into()));
    }
    model.validate(m)?;
    let blocks = trials.div_ceil(BLOCK_TRIALS);
    let run_block = |b: u64| -> Result<u64> {
        let mut rng = RngStream::new(seed, b);
        let len = BLOCK_TRIALS.min(trials - b * BLOCK_TRIALS);
        let mut hits = 0;
        for _ in 0..len {
            if recognize_fast(&sample(model, n, m, &mut rng)?).is_some() {
                hits += 1;
            }
        }
        Ok(hits)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Parameter(format!("cannot start {workers} workers: {e}")))?;
    let successes = pool.install(|| {
        (0..blocks)
            .into_par_iter()
            .map(run_block)
            .try_reduce(|| 0, |a, b| Ok(a + b))
    })?;
    let (ci_low, ci_high) = wilson(successes, trials, Z95);
    Ok(Estimate {
        successes,
        trials,
        point: BigRational::new(BigInt::from(successes), BigInt::from(trials)),
        ci_low,
        ci_high,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_edges() {
        let (lo, hi) = wilson(0, 100, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson(100, 100, Z95);
        assert!(lo > 0.95 && hi == 1.0);
        let (lo, hi) = wilson(50, 100, Z95);
        assert!((lo + hi - 1.0).abs() < 1e-12);
        assert!((hi - 0.5968).abs() < 1e-3);
    }

    #[test]
    fn all_pairs_of_three_are_single_peaked() {
        let e = estimate_sp(&ModelSpec::Ic, 2, 3, 3000, 1, 2).unwrap();
        assert_eq!(e.successes, 3000);
        assert_eq!(e.point, BigRational::from_integer(1.into()));
    }

    #[test]
    fn worker_count_does_not_matter() {
        let model = ModelSpec::Polya { a: 2 };
        let base = estimate_sp(&model, 5, 5, 5000, 42, 1).unwrap();
        for w in [2, 4, 8] {
            assert_eq!(estimate_sp(&model, 5, 5, 5000, 42, w).unwrap(), base);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(estimate_sp(&ModelSpec::Ic, 2, 3, 0, 1, 1).is_err());
        assert!(estimate_sp(&ModelSpec::Ic, 2, 3, 10, 1, 0).is_err());
        assert!(estimate_sp(&ModelSpec::Polya { a: 0 }, 2, 3, 10, 1, 1).is_err());
    }
}
