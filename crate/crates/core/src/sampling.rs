//! Random elections under Impartial Culture, Impartial Anonymous Culture,
//! the Pólya urn and the Mallows model, plus exact probability mass
//! functions used to certify the samplers.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counting::{factorial, mallows_z, pochhammer_k};
use crate::error::{Error, Result};
use crate::vote::{
    factorial_u128, kendall_tau, Candidate, Election, MultisetElection, Vote, MAX_LEX_M,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSpec {
    Ic,
    Iac,
    /// Pólya urn with homogeneity `a >= 1`.
    Polya {
        a: u64,
    },
    /// Mallows model with dispersion `0 < φ <= 1` around `reference`.
    Mallows {
        phi: BigRational,
        reference: Vote,
    },
}

impl ModelSpec {
    pub fn validate(&self, m: usize) -> Result<()> {
        match self {
            ModelSpec::Polya { a: 0 } => Err(Error::Parameter(
                "Pólya homogeneity must be at least 1 (a = 0 is Impartial Culture)".into(),
            )),
            ModelSpec::Mallows { phi, reference } => {
                if *phi <= BigRational::zero() || *phi > BigRational::one() {
                    return Err(Error::Parameter(format!(
                        "phi must lie in (0, 1], got {phi}"
                    )));
                }
                if reference.len() != m {
                    return Err(Error::Dimension {
                        expected: m,
                        found: reference.len(),
                    });
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Ic => "ic",
            ModelSpec::Iac => "iac",
            ModelSpec::Polya { .. } => "polya",
            ModelSpec::Mallows { .. } => "mallows",
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Ic => f.write_str("ic"),
            ModelSpec::Iac => f.write_str("iac"),
            ModelSpec::Polya { a } => write!(f, "polya(a={a})"),
            ModelSpec::Mallows { phi, reference } => {
                write!(f, "mallows(phi={phi}, reference={reference})")
            }
        }
    }
}

/// A reproducible random stream: the same `(seed, stream)` always yields the
/// same draws.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngStream { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

fn uniform_vote<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vote {
    let mut r: Vec<Candidate> = (1..=m as Candidate).collect();
    r.shuffle(rng);
    Vote::from_vec_unchecked(r)
}

/// One urn step with `drawn` earlier votes: an integer `u < m! + a·drawn`
/// names either the fresh vote of lexicographic rank `u` or a copy of
/// `history[(u - m!) / a]`.
pub fn polya_decode(u: u128, m: usize, a: u64, history: &[Vote]) -> Vote {
    let f = factorial_u128(m);
    if u < f {
        Vote::from_lex_index(m, u).expect("rank below m!")
    } else {
        history[((u - f) / a as u128) as usize].clone()
    }
}

fn polya_votes<R: Rng + ?Sized>(n: usize, m: usize, a: u64, rng: &mut R) -> Vec<Vote> {
    let mut history: Vec<Vote> = Vec::with_capacity(n);
    let f = (m <= MAX_LEX_M).then(|| factorial_u128(m));
    let ln_f: f64 = (2..=m).map(|i| (i as f64).ln()).sum();
    for i in 0..n {
        let range = f.and_then(|f| (a as u128).checked_mul(i as u128)?.checked_add(f));
        let v = match range {
            Some(range) => polya_decode(rng.gen_range(0..range), m, a, &history),
            None => {
                // m! + a·i exceeds 128 bits; P(copy) = 1 / (1 + m!/(a·i)).
                let ratio = (ln_f - (a as f64 * i as f64).ln()).exp();
                if rng.gen::<f64>() < 1.0 / (1.0 + ratio) {
                    history[rng.gen_range(0..i)].clone()
                } else {
                    uniform_vote(m, rng)
                }
            }
        };
        history.push(v);
    }
    history
}

/// Repeated insertion: the `i`-th reference candidate goes to position `j`
/// (1-based, among `i` slots) with weight `φ^{i-j}`.
fn mallows_vote<R: Rng + ?Sized>(reference: &Vote, phi: f64, rng: &mut R) -> Vote {
    let m = reference.len();
    let mut out: Vec<Candidate> = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for (idx, &c) in reference.ranking().iter().enumerate() {
        let i = idx + 1;
        weights.clear();
        let mut w = 1.0;
        for _ in 0..i {
            weights.push(w);
            w *= phi;
        }
        // weights[d] is the weight of d displacements, i.e. position i - d.
        let total: f64 = weights.iter().sum();
        let mut u = rng.gen::<f64>() * total;
        let mut d = 0;
        while d + 1 < i && u >= weights[d] {
            u -= weights[d];
            d += 1;
        }
        out.insert(i - 1 - d, c);
    }
    Vote::from_vec_unchecked(out)
}

/// Draws one `(n, m)`-election from `model`.
pub fn sample(model: &ModelSpec, n: usize, m: usize, rng: &mut RngStream) -> Result<Election> {
    if n == 0 || m == 0 {
        return Err(Error::Parameter("n and m must be positive".into()));
    }
    model.validate(m)?;
    let votes = match model {
        ModelSpec::Ic => (0..n).map(|_| uniform_vote(m, rng)).collect(),
        ModelSpec::Iac => polya_votes(n, m, 1, rng),
        ModelSpec::Polya { a } => polya_votes(n, m, *a, rng),
        ModelSpec::Mallows { phi, reference } => {
            let phi = phi.to_f64().expect("phi in (0, 1]");
            (0..n).map(|_| mallows_vote(reference, phi, rng)).collect()
        }
    };
    Election::new(votes)
}

fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Probability that the urn produces exactly this ordered sequence of votes:
/// `∏ (1)_{n_i,a} / (m!)_{n,a}`.
pub fn pmf_polya_sequence(e: &Election, a: u64) -> Result<BigRational> {
    pmf_polya_parts(&e.to_multiset(), a).map(|(seq, _)| seq)
}

/// Probability that the urn produces this multiset of votes in any order.
pub fn pmf_polya(e: &Election, a: u64) -> Result<BigRational> {
    pmf_polya_multiset(&e.to_multiset(), a)
}

pub fn pmf_polya_multiset(e: &MultisetElection, a: u64) -> Result<BigRational> {
    pmf_polya_parts(e, a).map(|(seq, orderings)| seq * int(orderings))
}

fn pmf_polya_parts(e: &MultisetElection, a: u64) -> Result<(BigRational, BigUint)> {
    if a == 0 {
        return Err(Error::Parameter(
            "Pólya homogeneity must be at least 1".into(),
        ));
    }
    let n = e.n() as u64;
    let mut num = BigRational::one();
    let mut orderings = factorial(n);
    for &k in e.counts().values() {
        num *= pochhammer_k(&BigRational::one(), k as u64, a);
        orderings /= factorial(k as u64);
    }
    let den = pochhammer_k(&int(factorial(e.m() as u64)), n, a);
    Ok((num / den, orderings))
}

fn check_reference(w: &Vote, phi: &BigRational, reference: &Vote) -> Result<()> {
    ModelSpec::Mallows {
        phi: phi.clone(),
        reference: reference.clone(),
    }
    .validate(w.len())
}

/// `φ^{κ(reference, w)} / Z`.
pub fn pmf_mallows(w: &Vote, phi: &BigRational, reference: &Vote) -> Result<BigRational> {
    check_reference(w, phi, reference)?;
    let k = kendall_tau(reference, w)?;
    Ok(num_traits::pow(phi.clone(), k as usize) / mallows_z(w.len() as u64, phi)?)
}

/// Probability that the repeated-insertion sampler emits `w`.
pub fn rim_probability(w: &Vote, phi: &BigRational, reference: &Vote) -> Result<BigRational> {
    check_reference(w, phi, reference)?;
    let pos = w.positions();
    let mut prob = BigRational::one();
    let mut geometric = BigRational::zero();
    let mut power = BigRational::one();
    for (idx, &c) in reference.ranking().iter().enumerate() {
        let i = idx + 1;
        geometric += &power;
        power *= phi;
        // Slot of c among the first i reference candidates, ordered as in w.
        let j = 1 + reference.ranking()[..idx]
            .iter()
            .filter(|&&d| pos[d as usize - 1] < pos[c as usize - 1])
            .count();
        prob *= num_traits::pow(phi.clone(), i - j) / &geometric;
    }
    Ok(prob)
}

/// Largest number of urn paths [`polya_path_distribution`] will walk.
pub const POLYA_PATHS_MAX: u128 = 10_000_000;

/// Exact distribution of the urn sampler's output, by walking every draw
/// path through [`polya_decode`]. Keys are ordered vote sequences.
pub fn polya_path_distribution(
    n: usize,
    m: usize,
    a: u64,
) -> Result<BTreeMap<Vec<Vote>, BigRational>> {
    if a == 0 || n == 0 || m == 0 || m > MAX_LEX_M {
        return Err(Error::Parameter("need a, n >= 1 and 1 <= m <= 34".into()));
    }
    let f = factorial_u128(m);
    let mut paths: u128 = 1;
    for i in 0..n {
        paths = paths
            .checked_mul(f + a as u128 * i as u128)
            .filter(|&p| p <= POLYA_PATHS_MAX)
            .ok_or_else(|| Error::Capability("too many urn paths to enumerate".into()))?;
    }
    let mut out = BTreeMap::new();
    let mut history = Vec::with_capacity(n);
    walk_paths(n, m, a, f, &mut history, BigRational::one(), &mut out);
    Ok(out)
}

fn walk_paths(
    n: usize,
    m: usize,
    a: u64,
    f: u128,
    history: &mut Vec<Vote>,
    prob: BigRational,
    out: &mut BTreeMap<Vec<Vote>, BigRational>,
) {
    let i = history.len();
    if i == n {
        *out.entry(history.clone()).or_insert_with(BigRational::zero) += prob;
        return;
    }
    let range = f + a as u128 * i as u128;
    let step = &prob / int(BigUint::from(range));
    for u in 0..range {
        let v = polya_decode(u, m, a, history);
        history.push(v);
        walk_paths(n, m, a, f, history, step.clone(), out);
        history.pop();
    }
}
