//! Deciding single-peakedness.
//!
//! A vote has a valley on an axis when some candidate is ranked below a
//! candidate to its left and a candidate to its right. An election is
//! single-peaked with respect to an axis when no vote has a valley there.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::vote::{next_permutation, Candidate, Election, Vote};

/// Largest candidate count accepted by [`recognize_exhaustive`].
pub const EXHAUSTIVE_MAX_M: usize = 10;

/// A left-to-right ordering of the candidates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Axis {
    order: Vec<Candidate>,
}

impl Axis {
    pub fn new(order: Vec<Candidate>) -> Result<Self> {
        // Same invariant as a vote.
        Vote::new(order.clone())?;
        Ok(Axis { order })
    }

    pub fn identity(m: usize) -> Self {
        Axis {
            order: (1..=m as Candidate).collect(),
        }
    }

    /// Reads a vote's ranking left to right as an axis.
    pub fn from_vote(v: &Vote) -> Self {
        Axis {
            order: v.ranking().to_vec(),
        }
    }

    pub fn order(&self) -> &[Candidate] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn reverse(&self) -> Axis {
        let mut order = self.order.clone();
        order.reverse();
        Axis { order }
    }

    /// The orientation whose first candidate is smaller than its last.
    pub fn canonical(self) -> Axis {
        match (self.order.first(), self.order.last()) {
            (Some(a), Some(b)) if a > b => self.reverse(),
            _ => self,
        }
    }

    /// `positions()[c - 1]` is the 0-based axis position of candidate `c`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &c) in self.order.iter().enumerate() {
            pos[c as usize - 1] = i;
        }
        pos
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.order.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Axis({self})")
    }
}

/// Whether `v` ranks `c2` below both `c1` and `c3`.
///
/// The axis must place `c1`, `c2`, `c3` in that left-to-right order.
pub fn has_valley(
    v: &Vote,
    axis: &Axis,
    c1: Candidate,
    c2: Candidate,
    c3: Candidate,
) -> Result<bool> {
    check_dims(axis.len(), v.len())?;
    let m = axis.len();
    if [c1, c2, c3].iter().any(|&c| c == 0 || c as usize > m) {
        return Err(Error::Precondition(format!(
            "candidates ({c1}, {c2}, {c3}) not all in 1..={m}"
        )));
    }
    let apos = axis.positions();
    let (a1, a2, a3) = (
        apos[c1 as usize - 1],
        apos[c2 as usize - 1],
        apos[c3 as usize - 1],
    );
    if !(a1 < a2 && a2 < a3) {
        return Err(Error::Precondition(format!(
            "axis does not order {c1} before {c2} before {c3}"
        )));
    }
    let vpos = v.positions();
    let r = |c: Candidate| vpos[c as usize - 1];
    Ok(r(c2) > r(c1) && r(c2) > r(c3))
}

/// Walks the ranking from the top: every next candidate must extend the
/// contiguous axis interval covered so far.
fn vote_sp_on_axis(ranking: &[Candidate], axis_pos: &[usize]) -> bool {
    let mut iter = ranking.iter();
    let Some(&top) = iter.next() else {
        return true;
    };
    let (mut lo, mut hi) = (axis_pos[top as usize - 1], axis_pos[top as usize - 1]);
    for &c in iter {
        let p = axis_pos[c as usize - 1];
        if lo > 0 && p == lo - 1 {
            lo = p;
        } else if p == hi + 1 {
            hi = p;
        } else {
            return false;
        }
    }
    true
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Dimension { expected, found });
    }
    Ok(())
}

/// True iff no vote of `e` has a valley on `axis`.
pub fn is_sp_wrt_axis(e: &Election, axis: &Axis) -> Result<bool> {
    check_dims(e.m(), axis.len())?;
    let pos = axis.positions();
    Ok(e.votes().iter().all(|v| vote_sp_on_axis(v.ranking(), &pos)))
}

pub fn is_vote_sp_wrt_axis(v: &Vote, axis: &Axis) -> Result<bool> {
    check_dims(v.len(), axis.len())?;
    Ok(vote_sp_on_axis(v.ranking(), &axis.positions()))
}

/// All `2^(m-1)` votes single-peaked with respect to `axis`, sorted.
///
/// Built from the bottom up: each successive last-ranked candidate is one of
/// the two outermost axis candidates still unranked.
pub fn enumerate_sp_votes(axis: &Axis) -> Vec<Vote> {
    let m = axis.len();
    let order = axis.order();
    let mut out = Vec::with_capacity(1 << (m.saturating_sub(1)).min(30));
    for choice in 0u64..(1u64 << (m - 1)) {
        let (mut lo, mut hi) = (0usize, m - 1);
        let mut bottom_up = Vec::with_capacity(m);
        for step in 0..m - 1 {
            if choice >> step & 1 == 0 {
                bottom_up.push(order[lo]);
                lo += 1;
            } else {
                bottom_up.push(order[hi]);
                hi -= 1;
            }
        }
        bottom_up.push(order[lo]);
        bottom_up.reverse();
        out.push(Vote::from_vec_unchecked(bottom_up));
    }
    out.sort();
    out
}

/// Lexicographically smallest witnessing axis, found by scanning one
/// orientation of every axis. Limited to `m ≤ 10`.
pub fn recognize_exhaustive(e: &Election) -> Result<Option<Axis>> {
    let m = e.m();
    if m > EXHAUSTIVE_MAX_M {
        return Err(Error::Capability(format!(
            "exhaustive recognition supports m <= {EXHAUSTIVE_MAX_M}, got {m}"
        )));
    }
    if m == 1 {
        return Ok(Some(Axis::identity(1)));
    }
    let rankings: Vec<&[Candidate]> = e.votes().iter().map(Vote::ranking).collect();
    // Shards by first axis candidate; the first shard with a witness holds
    // the lexicographic minimum.
    let found = (1..=m as Candidate)
        .into_par_iter()
        .find_map_first(|first| {
            let mut rest: Vec<Candidate> = (1..=m as Candidate).filter(|&c| c != first).collect();
            let mut axis = vec![0; m];
            let mut pos = vec![0; m];
            loop {
                // Only the orientation with first < last; the reverse is
                // lexicographically larger and equivalent.
                if *rest.last().unwrap() > first {
                    axis[0] = first;
                    axis[1..].copy_from_slice(&rest);
                    for (i, &c) in axis.iter().enumerate() {
                        pos[c as usize - 1] = i;
                    }
                    if rankings.iter().all(|r| vote_sp_on_axis(r, &pos)) {
                        return Some(axis.clone());
                    }
                }
                if !next_permutation(&mut rest) {
                    return None;
                }
            }
        });
    Ok(found.map(|order| Axis { order }))
}

/// Polynomial-time recognition.
///
/// Builds the axis from both ends inwards. Among the still unplaced
/// candidates `R`, the last-ranked candidate of every vote must sit at an end
/// of `R`'s interval, so there are at most two such candidates and at most
/// two ways to place them. Each placement is checked against the innermost
/// candidate already placed on either side; the set `R` at each depth does
/// not depend on the side choices, so failures are memoized on
/// `(|R|, left end, right end)`.
pub fn recognize_fast(e: &Election) -> Option<Axis> {
    let m = e.m();
    if m <= 2 {
        return Some(Axis::identity(m));
    }
    if e.n() == 1 {
        return Some(Axis::from_vote(&e.votes()[0]).canonical());
    }
    let mut search = FastSearch::new(e);
    if search.descend() {
        let mut order = search.left.clone();
        order.extend(search.right.iter().rev());
        let axis = Axis { order }.canonical();
        debug_assert!(is_sp_wrt_axis(e, &axis).unwrap());
        Some(axis)
    } else {
        None
    }
}

/// Convenience wrapper: is the election single-peaked at all?
pub fn is_single_peaked(e: &Election) -> bool {
    recognize_fast(e).is_some()
}

struct FastSearch<'a> {
    rankings: Vec<&'a [Candidate]>,
    /// `pos[v][c - 1]`: rank of candidate `c` in vote `v`, 0 = top.
    pos: Vec<Vec<usize>>,
    remaining: Vec<bool>,
    remaining_count: usize,
    left: Vec<Candidate>,
    right: Vec<Candidate>,
    failed: HashSet<(usize, Option<Candidate>, Option<Candidate>)>,
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

impl<'a> FastSearch<'a> {
    fn new(e: &'a Election) -> Self {
        let m = e.m();
        FastSearch {
            rankings: e.votes().iter().map(Vote::ranking).collect(),
            pos: e.votes().iter().map(Vote::positions).collect(),
            remaining: vec![true; m],
            remaining_count: m,
            left: Vec::with_capacity(m),
            right: Vec::with_capacity(m),
            failed: HashSet::new(),
        }
    }

    fn bottoms(&self) -> Option<Vec<Candidate>> {
        let mut b: Vec<Candidate> = Vec::with_capacity(2);
        for r in &self.rankings {
            let x = *r
                .iter()
                .rev()
                .find(|&&c| self.remaining[c as usize - 1])
                .expect("remaining set is non-empty");
            if !b.contains(&x) {
                if b.len() == 2 {
                    return None;
                }
                b.push(x);
            }
        }
        Some(b)
    }

    /// Can `q` go next to the innermost candidate on `side`? Any vote that
    /// prefers that neighbour to `q` must rank `q` above every other
    /// candidate to the inside of it and above the innermost candidate on
    /// the opposite side.
    fn placement_ok(&self, q: Candidate, side: Side) -> bool {
        let (near, far) = match side {
            Side::Left => (self.left.last(), self.right.last()),
            Side::Right => (self.right.last(), self.left.last()),
        };
        let Some(&near) = near else {
            return true;
        };
        self.pos.iter().all(|p| {
            let rq = p[q as usize - 1];
            if p[near as usize - 1] > rq {
                return true;
            }
            if let Some(&far) = far {
                if p[far as usize - 1] < rq {
                    return false;
                }
            }
            self.remaining
                .iter()
                .enumerate()
                .all(|(i, &live)| !live || i + 1 == q as usize || p[i] > rq)
        })
    }

    fn place(&mut self, q: Candidate, side: Side) -> bool {
        if !self.placement_ok(q, side) {
            return false;
        }
        match side {
            Side::Left => self.left.push(q),
            Side::Right => self.right.push(q),
        }
        self.remaining[q as usize - 1] = false;
        self.remaining_count -= 1;
        true
    }

    fn unplace(&mut self, side: Side) {
        let q = match side {
            Side::Left => self.left.pop(),
            Side::Right => self.right.pop(),
        }
        .unwrap();
        self.remaining[q as usize - 1] = true;
        self.remaining_count += 1;
    }

    fn try_moves(&mut self, moves: &[(Candidate, Side)]) -> bool {
        let mut done = 0;
        for &(q, side) in moves {
            if !self.place(q, side) {
                break;
            }
            done += 1;
        }
        let ok = done == moves.len() && self.descend();
        if !ok {
            for &(_, side) in moves[..done].iter().rev() {
                self.unplace(side);
            }
        }
        ok
    }

    fn descend(&mut self) -> bool {
        if self.remaining_count == 0 {
            return true;
        }
        let key = (
            self.remaining_count,
            self.left.last().copied(),
            self.right.last().copied(),
        );
        if self.failed.contains(&key) {
            return false;
        }
        let Some(b) = self.bottoms() else {
            self.failed.insert(key);
            return false;
        };
        let fresh = self.left.is_empty() && self.right.is_empty();
        let ok = match b[..] {
            [x] if self.remaining_count == 1 => self.try_moves(&[(x, Side::Left)]),
            // Mirror images of each other on an empty axis.
            [x] if fresh => self.try_moves(&[(x, Side::Left)]),
            [x, y] if fresh => self.try_moves(&[(x, Side::Left), (y, Side::Right)]),
            [x] => self.try_moves(&[(x, Side::Left)]) || self.try_moves(&[(x, Side::Right)]),
            [x, y] => {
                self.try_moves(&[(x, Side::Left), (y, Side::Right)])
                    || self.try_moves(&[(y, Side::Left), (x, Side::Right)])
            }
            _ => unreachable!("at most two bottom candidates"),
        };
        if !ok {
            self.failed.insert(key);
        }
        ok
    }
}
