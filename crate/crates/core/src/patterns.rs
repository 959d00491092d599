//! Permutation patterns: containment, brute-force avoider counts, and the
//! closed forms for the two avoidance classes behind the upper bounds.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::counting::binomial;
use crate::error::{Error, Result};
use crate::vote::{next_permutation, Candidate, Permutation};

/// Largest `m` accepted by [`count_avoiders`].
pub const AVOIDERS_MAX_M: usize = 9;

/// Lexicographically first strictly increasing index list `μ` (0-based)
/// with `τ[μ]` order-isomorphic to `π`, or `None` if `τ` avoids `π`.
pub fn contains_pattern(tau: &Permutation, pi: &Permutation) -> Option<Vec<usize>> {
    matches(tau.ranking(), pi.ranking())
}

fn matches(tau: &[Candidate], pi: &[Candidate]) -> Option<Vec<usize>> {
    let k = pi.len();
    if k > tau.len() {
        return None;
    }
    let mut picked = Vec::with_capacity(k);
    if extend(tau, pi, 0, &mut picked) {
        Some(picked)
    } else {
        None
    }
}

fn extend(tau: &[Candidate], pi: &[Candidate], from: usize, picked: &mut Vec<usize>) -> bool {
    let j = picked.len();
    if j == pi.len() {
        return true;
    }
    // Leave room for the remaining pattern entries.
    let last = tau.len() - (pi.len() - j);
    for i in from..=last {
        let ok = picked
            .iter()
            .enumerate()
            .all(|(jj, &ii)| (pi[jj] < pi[j]) == (tau[ii] < tau[i]));
        if ok {
            picked.push(i);
            if extend(tau, pi, i + 1, picked) {
                return true;
            }
            picked.pop();
        }
    }
    false
}

fn avoids_all(tau: &[Candidate], patterns: &[Permutation]) -> bool {
    patterns.iter().all(|p| matches(tau, p.ranking()).is_none())
}

/// Number of `m`-permutations avoiding every pattern in `patterns`.
pub fn count_avoiders(m: usize, patterns: &[Permutation]) -> Result<BigUint> {
    if m > AVOIDERS_MAX_M {
        return Err(Error::Capability(format!(
            "counting avoiders scans all m! permutations; m = {m} exceeds {AVOIDERS_MAX_M}"
        )));
    }
    if m == 0 {
        return Ok(BigUint::one());
    }
    let total: u64 = (1..=m as Candidate)
        .into_par_iter()
        .map(|first| {
            let mut rest: Vec<Candidate> = (1..=m as Candidate).filter(|&c| c != first).collect();
            let mut tau = Vec::with_capacity(m);
            let mut count = 0u64;
            loop {
                tau.clear();
                tau.push(first);
                tau.extend_from_slice(&rest);
                if avoids_all(&tau, patterns) {
                    count += 1;
                }
                if !next_permutation(&mut rest) {
                    break;
                }
            }
            count
        })
        .sum();
    Ok(BigUint::from(total))
}

/// `C(2m-2, m-1)`.
pub fn central_binomial_count(m: u64) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::Precondition("m must be positive".into()));
    }
    Ok(binomial(2 * m - 2, m - 1))
}

/// Large Schröder number indexed so that `schroder(1) = 1, schroder(2) = 2,
/// schroder(3) = 6, …`, via `(j+1) r_j = 3(2j-1) r_{j-1} - (j-2) r_{j-2}`.
pub fn schroder(m: u64) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::Precondition("m must be positive".into()));
    }
    let (mut prev, mut cur) = (BigUint::zero(), BigUint::one());
    if m >= 2 {
        prev = cur;
        cur = BigUint::from(2u32);
    }
    for j in 2..m {
        let next = (3u64 * (2 * j - 1) * &cur - (j - 2) * &prev) / (j + 1);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}
