//! Votes, elections and the small amount of permutation algebra they need.
//!
//! Candidates are the integers `1..=m`. A [`Vote`] stores its ranking
//! most-preferred first, so `ranking()[0]` is the top choice. The same type
//! doubles as an `m`-permutation written as its sequence of values
//! `π(1) π(2) … π(m)`; [`Permutation`] is an alias used where that reading is
//! the intended one.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Candidate = u16;

/// A total order over the candidates `1..=m`, most-preferred first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vote {
    ranking: Box<[Candidate]>,
}

/// A vote read as the value sequence of a permutation.
pub type Permutation = Vote;

impl Vote {
    /// Builds a vote, checking that `ranking` is a permutation of `1..=m`.
    pub fn new(ranking: Vec<Candidate>) -> Result<Self> {
        let m = ranking.len();
        if m == 0 {
            return Err(Error::InvalidVote("empty ranking".into()));
        }
        let mut seen = vec![false; m];
        for &c in &ranking {
            let idx = c as usize;
            if idx == 0 || idx > m {
                return Err(Error::InvalidVote(format!("candidate {c} outside 1..={m}")));
            }
            if std::mem::replace(&mut seen[idx - 1], true) {
                return Err(Error::InvalidVote(format!("candidate {c} repeated")));
            }
        }
        Ok(Vote {
            ranking: ranking.into_boxed_slice(),
        })
    }

    pub(crate) fn from_vec_unchecked(ranking: Vec<Candidate>) -> Self {
        debug_assert!(Vote::new(ranking.clone()).is_ok());
        Vote {
            ranking: ranking.into_boxed_slice(),
        }
    }

    pub fn identity(m: usize) -> Self {
        Vote::from_vec_unchecked((1..=m as Candidate).collect())
    }

    pub fn ranking(&self) -> &[Candidate] {
        &self.ranking
    }

    /// Number of candidates.
    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }

    /// `positions()[c - 1]` is the 0-based rank of candidate `c`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.len()];
        for (i, &c) in self.ranking.iter().enumerate() {
            pos[c as usize - 1] = i;
        }
        pos
    }

    /// True if this vote ranks `a` above `b`.
    pub fn prefers(&self, a: Candidate, b: Candidate) -> bool {
        let pa = self.ranking.iter().position(|&c| c == a);
        let pb = self.ranking.iter().position(|&c| c == b);
        matches!((pa, pb), (Some(x), Some(y)) if x < y)
    }

    pub fn reverse(&self) -> Vote {
        let mut r = self.ranking.to_vec();
        r.reverse();
        Vote::from_vec_unchecked(r)
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.ranking.iter().enumerate() {
            inv[v as usize - 1] = (i + 1) as Candidate;
        }
        Vote::from_vec_unchecked(inv)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        same_len(self, other)?;
        Ok(Vote::from_vec_unchecked(
            other
                .ranking
                .iter()
                .map(|&j| self.ranking[j as usize - 1])
                .collect(),
        ))
    }

    pub fn is_identity(&self) -> bool {
        self.ranking
            .iter()
            .enumerate()
            .all(|(i, &c)| c as usize == i + 1)
    }

    /// Position of this permutation in the lexicographic listing of all
    /// `m`-permutations (0-based). Requires `m ≤ 34`.
    pub fn lex_index(&self) -> u128 {
        let m = self.len();
        assert!(m <= MAX_LEX_M, "lex_index needs m <= {MAX_LEX_M}");
        let mut used = vec![false; m];
        let mut idx: u128 = 0;
        for (i, &c) in self.ranking.iter().enumerate() {
            let smaller = (1..c).filter(|&d| !used[d as usize - 1]).count() as u128;
            idx += smaller * factorial_u128(m - 1 - i);
            used[c as usize - 1] = true;
        }
        idx
    }

    /// Inverse of [`Vote::lex_index`].
    pub fn from_lex_index(m: usize, mut idx: u128) -> Result<Vote> {
        if m == 0 || m > MAX_LEX_M {
            return Err(Error::Parameter(format!(
                "lex unranking supports 1 <= m <= {MAX_LEX_M}"
            )));
        }
        if idx >= factorial_u128(m) {
            return Err(Error::Parameter(format!("index {idx} >= {m}!")));
        }
        let mut pool: Vec<Candidate> = (1..=m as Candidate).collect();
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let f = factorial_u128(m - 1 - i);
            let q = (idx / f) as usize;
            idx %= f;
            out.push(pool.remove(q));
        }
        Ok(Vote::from_vec_unchecked(out))
    }
}

pub(crate) const MAX_LEX_M: usize = 34;

pub(crate) fn factorial_u128(k: usize) -> u128 {
    (1..=k as u128).product()
}

fn same_len(a: &Vote, b: &Vote) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

impl fmt::Debug for Vote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vote({self})")
    }
}

/// Space-separated candidate indices, most-preferred first.
impl fmt::Display for Vote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.ranking.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Accepts either whitespace-separated integers (`"2 4 1 3"`) or, for up to
/// nine candidates, the compact digit form used throughout the literature
/// (`"2413"`).
impl FromStr for Vote {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parts: Vec<&str> = s.split_whitespace().collect();
        let ranking: Result<Vec<Candidate>> = if parts.len() == 1 && s.len() > 1 {
            s.chars()
                .map(|ch| {
                    ch.to_digit(10)
                        .filter(|&d| d > 0)
                        .map(|d| d as Candidate)
                        .ok_or_else(|| Error::InvalidVote(format!("bad digit {ch:?} in {s:?}")))
                })
                .collect()
        } else {
            parts
                .iter()
                .map(|p| {
                    p.parse::<Candidate>()
                        .map_err(|_| Error::InvalidVote(format!("bad candidate {p:?}")))
                })
                .collect()
        };
        Vote::new(ranking?)
    }
}

/// Number of candidate pairs the two votes order differently.
///
/// Runs in `O(m log m)` by counting inversions with a merge sort.
pub fn kendall_tau(v: &Vote, w: &Vote) -> Result<u64> {
    same_len(v, w)?;
    let pos_v = v.positions();
    let mut seq: Vec<usize> = w.ranking.iter().map(|&c| pos_v[c as usize - 1]).collect();
    let mut buf = vec![0; seq.len()];
    Ok(count_inversions(&mut seq, &mut buf))
}

fn count_inversions(seq: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = seq.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = {
        let (lo, hi) = seq.split_at_mut(mid);
        let (blo, bhi) = buf.split_at_mut(mid);
        count_inversions(lo, blo) + count_inversions(hi, bhi)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if seq[i] <= seq[j] {
            buf[k] = seq[i];
            i += 1;
        } else {
            buf[k] = seq[j];
            inv += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&seq[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&seq[j..n]);
    seq.copy_from_slice(&buf[..n]);
    inv
}

pub fn reverse(v: &Vote) -> Vote {
    v.reverse()
}

pub fn inverse(p: &Permutation) -> Permutation {
    p.inverse()
}

/// The permutation sending `i` to `j` whenever the `i`-th item of `t1` is the
/// `j`-th item of `t2`.
pub fn perm_of_pair(t1: &Vote, t2: &Vote) -> Result<Permutation> {
    same_len(t1, t2)?;
    let pos2 = t2.positions();
    Ok(Vote::from_vec_unchecked(
        t1.ranking
            .iter()
            .map(|&c| (pos2[c as usize - 1] + 1) as Candidate)
            .collect(),
    ))
}

/// Rearranges `p` into its lexicographic successor; returns false (leaving
/// `p` sorted ascending) once the last permutation has been passed.
pub fn next_permutation<T: Ord>(p: &mut [T]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        p.reverse();
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All `m`-permutations in lexicographic order.
pub fn all_votes(m: usize) -> Vec<Vote> {
    let mut cur: Vec<Candidate> = (1..=m as Candidate).collect();
    let mut out = Vec::new();
    loop {
        out.push(Vote::from_vec_unchecked(cur.clone()));
        if !next_permutation(&mut cur) {
            break;
        }
    }
    out
}

/// An ordered list of `n ≥ 1` votes over the same `m` candidates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Election {
    m: usize,
    votes: Vec<Vote>,
}

impl Election {
    pub fn new(votes: Vec<Vote>) -> Result<Self> {
        let m = votes
            .first()
            .map(Vote::len)
            .ok_or_else(|| Error::InvalidElection("an election needs at least one vote".into()))?;
        if let Some(bad) = votes.iter().find(|v| v.len() != m) {
            return Err(Error::Dimension {
                expected: m,
                found: bad.len(),
            });
        }
        Ok(Election { m, votes })
    }

    /// Parses each string with [`Vote::from_str`].
    pub fn parse<S: AsRef<str>>(votes: &[S]) -> Result<Self> {
        Election::new(
            votes
                .iter()
                .map(|s| s.as_ref().parse())
                .collect::<Result<_>>()?,
        )
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.votes.len()
    }

    pub fn votes(&self) -> &[Vote] {
        &self.votes
    }

    pub fn into_votes(self) -> Vec<Vote> {
        self.votes
    }

    pub fn to_multiset(&self) -> MultisetElection {
        let mut counts = BTreeMap::new();
        for v in &self.votes {
            *counts.entry(v.clone()).or_insert(0) += 1;
        }
        MultisetElection { m: self.m, counts }
    }
}

impl fmt::Display for Election {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.votes.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// An unordered election: each distinct vote with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultisetElection {
    m: usize,
    counts: BTreeMap<Vote, usize>,
}

impl MultisetElection {
    pub fn new(m: usize, counts: BTreeMap<Vote, usize>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidElection("empty multiset".into()));
        }
        for (v, &c) in &counts {
            if v.len() != m {
                return Err(Error::Dimension {
                    expected: m,
                    found: v.len(),
                });
            }
            if c == 0 {
                return Err(Error::InvalidElection(format!(
                    "vote {v} has multiplicity 0"
                )));
            }
        }
        Ok(MultisetElection { m, counts })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn counts(&self) -> &BTreeMap<Vote, usize> {
        &self.counts
    }

    pub fn multiplicity(&self, v: &Vote) -> usize {
        self.counts.get(v).copied().unwrap_or(0)
    }

    /// Expands to an ordered election with the distinct votes in ascending
    /// order, each repeated by its multiplicity.
    pub fn to_election(&self) -> Election {
        let votes = self
            .counts
            .iter()
            .flat_map(|(v, &c)| std::iter::repeat_n(v.clone(), c))
            .collect();
        Election { m: self.m, votes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vote {
        s.parse().unwrap()
    }

    fn kendall_brute(a: &Vote, b: &Vote) -> u64 {
        let m = a.len() as Candidate;
        let mut d = 0;
        for x in 1..=m {
            for y in x + 1..=m {
                if a.prefers(x, y) != b.prefers(x, y) {
                    d += 1;
                }
            }
        }
        d
    }

    #[test]
    fn kendall_examples() {
        assert_eq!(kendall_tau(&v("2413"), &v("2413")).unwrap(), 0);
        assert_eq!(kendall_tau(&v("1234"), &v("4321")).unwrap(), 6);
        assert_eq!(kendall_tau(&v("123"), &v("132")).unwrap(), 1);
        assert_eq!(kendall_brute(&v("123"), &v("132")), 1);
        let w = v("2413");
        assert_eq!(kendall_tau(&w, &w.reverse()).unwrap(), 6);
    }

    #[test]
    fn kendall_matches_pair_count_exhaustively() {
        let votes = all_votes(5);
        for a in votes.iter().step_by(7) {
            for b in &votes {
                assert_eq!(kendall_tau(a, b).unwrap(), kendall_brute(a, b));
            }
        }
    }

    #[test]
    fn kendall_dimension_error() {
        assert!(matches!(
            kendall_tau(&v("12"), &v("123")),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(v("123").reverse(), v("321"));
        assert_eq!(Vote::identity(1).reverse(), Vote::identity(1));
    }

    #[test]
    fn perm_of_pair_examples() {
        // bac / cab
        assert_eq!(perm_of_pair(&v("213"), &v("312")).unwrap(), v("321"));
        assert_eq!(perm_of_pair(&v("123"), &v("231")).unwrap(), v("312"));
        assert!(perm_of_pair(&v("2413"), &v("2413")).unwrap().is_identity());
        assert!(perm_of_pair(&v("12"), &v("321")).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(v("321").inverse(), v("321"));
        assert_eq!(v("312").inverse(), v("231"));
        assert!(Vote::identity(4).inverse().is_identity());
    }

    #[test]
    fn lex_rank_roundtrip() {
        for (i, p) in all_votes(5).iter().enumerate() {
            assert_eq!(p.lex_index(), i as u128);
            assert_eq!(&Vote::from_lex_index(5, i as u128).unwrap(), p);
        }
        assert!(Vote::from_lex_index(3, 6).is_err());
    }

    #[test]
    fn rejects_bad_votes() {
        assert!(Vote::new(vec![1, 1, 2]).is_err());
        assert!(Vote::new(vec![0, 1]).is_err());
        assert!(Vote::new(vec![]).is_err());
        assert!("1 2 4".parse::<Vote>().is_err());
        assert_eq!("10 9 8 7 6 5 4 3 2 1".parse::<Vote>().unwrap().len(), 10);
    }

    #[test]
    fn election_validation() {
        assert!(Election::new(vec![]).is_err());
        assert!(matches!(
            Election::parse(&["123", "12"]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn multiset_roundtrip_keeps_counts() {
        let e = Election::parse(&["123", "321", "123", "213"]).unwrap();
        let ms = e.to_multiset();
        assert_eq!(ms.n(), 4);
        assert_eq!(ms.m(), 3);
        assert_eq!(ms.multiplicity(&v("123")), 2);
        let back = ms.to_election();
        assert_eq!(back.n(), e.n());
        assert_eq!(back.to_multiset(), ms);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn vote_strategy(m: usize) -> impl Strategy<Value = Vote> {
            Just((1..=m as Candidate).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|r| Vote::new(r).unwrap())
        }

        fn pair() -> impl Strategy<Value = (Vote, Vote)> {
            (1usize..9).prop_flat_map(|m| (vote_strategy(m), vote_strategy(m)))
        }

        proptest! {
            #[test]
            fn kendall_symmetric_and_definite((a, b) in pair()) {
                let d = kendall_tau(&a, &b).unwrap();
                prop_assert_eq!(d, kendall_tau(&b, &a).unwrap());
                prop_assert_eq!(d == 0, a == b);
                let m = a.len() as u64;
                prop_assert!(d <= m * (m - 1) / 2);
            }

            #[test]
            fn perm_of_pair_inverse_relation((a, b) in pair()) {
                let p = perm_of_pair(&a, &b).unwrap();
                let q = perm_of_pair(&b, &a).unwrap();
                prop_assert_eq!(&p, &q.inverse());
                prop_assert!(p.compose(&q).unwrap().is_identity());
                prop_assert_eq!(p.inverse().inverse(), p);
            }
        }
    }
}
