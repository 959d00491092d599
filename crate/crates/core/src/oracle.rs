//! Brute-force ground truth by exhaustive enumeration.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::configurations::{avoids_all, Configuration};
use crate::counting::{factorial, multiset_coeff};
use crate::error::{Error, Result};
use crate::recognition::recognize_exhaustive;
use crate::sampling::pmf_polya_multiset;
use crate::vote::{all_votes, Election, Vote};

/// Largest number of ordered elections the oracle will enumerate.
pub const ELECTIONS_MAX: u64 = 100_000_000;
/// Largest number of vote multisets the oracle will enumerate.
pub const MULTISETS_MAX: u64 = 10_000_000;

fn election_count(n: usize, m: usize) -> Option<u64> {
    let f: u64 = (1..=m as u64).try_fold(1u64, |acc, i| acc.checked_mul(i))?;
    (0..n).try_fold(1u64, |acc, _| acc.checked_mul(f))
}

fn guard(n: usize, m: usize) -> Result<u64> {
    if n == 0 || m == 0 {
        return Err(Error::Parameter("n and m must be positive".into()));
    }
    election_count(n, m)
        .filter(|&c| c <= ELECTIONS_MAX)
        .ok_or_else(|| {
            Error::Capability(format!(
                "({m}!)^{n} elections exceed the enumeration limit of {ELECTIONS_MAX}"
            ))
        })
}

/// Every ordered `(n, m)`-election, lexicographically by vote ranks.
#[derive(Debug)]
pub struct Elections {
    votes: Vec<Vote>,
    idx: Vec<usize>,
    done: bool,
}

impl Iterator for Elections {
    type Item = Election;

    fn next(&mut self) -> Option<Election> {
        if self.done {
            return None;
        }
        let e = Election::new(self.idx.iter().map(|&i| self.votes[i].clone()).collect())
            .expect("well-formed election");
        // Odometer step, last vote fastest.
        self.done = true;
        for slot in self.idx.iter_mut().rev() {
            *slot += 1;
            if *slot < self.votes.len() {
                self.done = false;
                break;
            }
            *slot = 0;
        }
        Some(e)
    }
}

pub fn enumerate_elections(n: usize, m: usize) -> Result<Elections> {
    guard(n, m)?;
    Ok(Elections {
        votes: all_votes(m),
        idx: vec![0; n],
        done: false,
    })
}

/// Counts elections satisfying `pred`, sharded by first vote.
fn count_where<F>(n: usize, m: usize, pred: F) -> Result<BigUint>
where
    F: Fn(&Election) -> bool + Sync,
{
    guard(n, m)?;
    let votes = all_votes(m);
    let total: u64 = votes
        .par_iter()
        .map(|first| {
            let mut idx = vec![0usize; n - 1];
            let mut count = 0u64;
            loop {
                let mut list = Vec::with_capacity(n);
                list.push(first.clone());
                list.extend(idx.iter().map(|&i| votes[i].clone()));
                if pred(&Election::new(list).expect("well-formed election")) {
                    count += 1;
                }
                let mut carried = true;
                for slot in idx.iter_mut().rev() {
                    *slot += 1;
                    if *slot < votes.len() {
                        carried = false;
                        break;
                    }
                    *slot = 0;
                }
                if carried {
                    break;
                }
            }
            count
        })
        .sum();
    Ok(BigUint::from(total))
}

fn exhaustive_sp(e: &Election) -> bool {
    recognize_exhaustive(e)
        .expect("oracle sizes stay under the exhaustive guard")
        .is_some()
}

/// Number of single-peaked ordered `(n, m)`-elections.
pub fn brute_count_sp(n: usize, m: usize) -> Result<BigUint> {
    count_where(n, m, exhaustive_sp)
}

/// Number of ordered `(n, m)`-elections avoiding every configuration in `cfgs`.
pub fn brute_count_avoiders(n: usize, m: usize, cfgs: &[Configuration]) -> Result<BigUint> {
    count_where(n, m, |e| avoids_all(e, cfgs))
}

fn multiset_guard(n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::Parameter("n and m must be positive".into()));
    }
    let total = multiset_coeff(&factorial(m as u64), n as u64);
    if total > BigUint::from(MULTISETS_MAX) {
        return Err(Error::Capability(format!(
            "{total} multisets exceed the enumeration limit of {MULTISETS_MAX}"
        )));
    }
    Ok(())
}

/// Folds `visit` over every single-peaked multiset, sharded by smallest vote.
fn fold_sp_multisets<T, F>(n: usize, m: usize, visit: F) -> Result<T>
where
    T: Send + Zero,
    F: Fn(&Election) -> T + Sync,
{
    multiset_guard(n, m)?;
    let votes = all_votes(m);
    Ok((0..votes.len())
        .into_par_iter()
        .map(|first| {
            // Nondecreasing index sequences starting at `first`.
            let mut idx = vec![first; n];
            let mut acc = T::zero();
            loop {
                let e = Election::new(idx.iter().map(|&i| votes[i].clone()).collect())
                    .expect("well-formed election");
                if exhaustive_sp(&e) {
                    acc = acc + visit(&e);
                }
                let Some(pos) = (1..n).rev().find(|&p| idx[p] + 1 < votes.len()) else {
                    break;
                };
                let next = idx[pos] + 1;
                idx[pos..].iter_mut().for_each(|x| *x = next);
            }
            acc
        })
        .reduce(T::zero, |a, b| a + b))
}

/// Number of size-`n` multisets of `m`-votes that are single-peaked.
pub fn brute_count_sp_multisets(n: usize, m: usize) -> Result<BigUint> {
    fold_sp_multisets(n, m, |_| BigUint::from(1u32))
}

/// Exact probability that a Pólya urn election with homogeneity `a` is
/// single-peaked, summed over multisets.
pub fn brute_sp_probability_polya(n: usize, m: usize, a: u64) -> Result<BigRational> {
    if a == 0 {
        return Err(Error::Parameter("homogeneity a must be at least 1".into()));
    }
    fold_sp_multisets(n, m, |e| {
        pmf_polya_multiset(&e.to_multiset(), a).expect("valid multiset")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configurations::{gs_configuration, sp_forbidden_set};
    use crate::counting::sp_count_exact;

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_elections(2, 2).unwrap().count(), 4);
        assert_eq!(enumerate_elections(3, 3).unwrap().count(), 216);
        assert_eq!(enumerate_elections(2, 4).unwrap().count(), 576);
        assert!(enumerate_elections(3, 10).unwrap_err().is_capability());
        let all: Vec<_> = enumerate_elections(2, 3).unwrap().collect();
        let mut sorted = all.clone();
        sorted.sort_by(|a, b| a.votes().cmp(b.votes()));
        assert_eq!(all, sorted);
        sorted.dedup();
        assert_eq!(sorted.len(), 36);
    }

    #[test]
    fn sp_counts() {
        assert_eq!(brute_count_sp(2, 3).unwrap(), BigUint::from(36u32));
        assert_eq!(brute_count_sp(3, 3).unwrap(), BigUint::from(168u32));
        for m in 1..=5 {
            assert_eq!(brute_count_sp(1, m).unwrap(), factorial(m as u64));
        }
        assert_eq!(brute_count_sp(2, 4).unwrap(), sp_count_exact(2, 4).unwrap());
    }

    #[test]
    fn avoider_counts() {
        assert_eq!(
            brute_count_avoiders(3, 3, &sp_forbidden_set()).unwrap(),
            BigUint::from(168u32)
        );
        assert_eq!(
            brute_count_avoiders(2, 3, &[gs_configuration()]).unwrap(),
            BigUint::from(36u32)
        );
        assert_eq!(
            brute_count_avoiders(3, 3, &[]).unwrap(),
            BigUint::from(216u32)
        );
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(
            brute_count_sp_multisets(2, 3).unwrap(),
            BigUint::from(21u32)
        );
        assert_eq!(
            brute_count_sp_multisets(5, 3).unwrap(),
            BigUint::from(150u32)
        );
        assert_eq!(
            brute_count_sp_multisets(2, 4).unwrap(),
            BigUint::from(252u32)
        );
    }
}
