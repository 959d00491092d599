//! Exact counts, probabilities and bounds for single-peakedness under the
//! Impartial Culture, Impartial Anonymous Culture, Pólya urn and Mallows
//! models.
//!
//! Everything that is a ratio of integers is computed as an exact
//! [`BigRational`]. Quantities that are only meaningful as magnitudes (the
//! Stanley–Wilf style upper bounds) are returned as natural logarithms.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::decimal::{self, Decimal, Rounding};
use crate::error::{Error, Result};

/// Refuse exact work whose central integers would exceed this many bits.
const MAX_EXACT_BITS: f64 = (1u64 << 24) as f64;
/// Above this many bits the Pólya bound switches to log space.
const POLYA_EXACT_BITS: f64 = (1u64 << 20) as f64;

/// An exact value or the natural log of a positive value.
#[derive(Clone, Debug, PartialEq)]
pub enum Quantity {
    Exact(BigRational),
    Log(f64),
}

impl Quantity {
    pub fn ln(&self) -> f64 {
        match self {
            Quantity::Exact(q) => decimal::ln_abs(q),
            Quantity::Log(l) => *l,
        }
    }

    /// Nearest `f64`; values below the subnormal range become `0.0`.
    pub fn to_f64(&self) -> f64 {
        match self {
            Quantity::Exact(q) => q.to_f64().unwrap_or_else(|| self.ln().exp()),
            Quantity::Log(l) => l.exp(),
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Quantity::Exact(q) => Some(q),
            Quantity::Log(_) => None,
        }
    }

    pub fn to_decimal(&self, sig: usize, rounding: Rounding) -> Decimal {
        match self {
            Quantity::Exact(q) => decimal::to_decimal(q, sig, rounding),
            Quantity::Log(l) => decimal::decimal_from_ln(*l, sig, rounding),
        }
    }
}

impl From<BigRational> for Quantity {
    fn from(q: BigRational) -> Self {
        Quantity::Exact(q)
    }
}

impl From<BigUint> for Quantity {
    fn from(x: BigUint) -> Self {
        Quantity::Exact(BigRational::from_integer(x.into()))
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Exact(q) => write!(f, "{q}"),
            Quantity::Log(l) => write!(f, "exp({l})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundResult {
    pub lower: Option<Quantity>,
    pub upper: Option<Quantity>,
    pub exact: Option<Quantity>,
    pub formula: &'static str,
}

impl BoundResult {
    fn between(lower: Option<Quantity>, upper: Option<Quantity>, formula: &'static str) -> Self {
        BoundResult {
            lower,
            upper,
            exact: None,
            formula,
        }
    }
}

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn binomial_big(n: &BigUint, k: u64) -> BigUint {
    if BigUint::from(k) > *n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

fn check_size(n: u64, m: u64, what: &str) -> Result<()> {
    let bits = n as f64 * ln_factorial(m) / std::f64::consts::LN_2;
    if bits > MAX_EXACT_BITS {
        return Err(Error::Capability(format!(
            "{what} for (n, m) = ({n}, {m}) needs about {bits:.0} bits"
        )));
    }
    Ok(())
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}

/// The Pochhammer k-symbol `(x)_{n,k} = x (x + k) … (x + (n-1)k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PochhammerK {
    pub x: BigRational,
    pub n: u64,
    pub k: u64,
}

impl PochhammerK {
    pub fn value(&self) -> BigRational {
        pochhammer_k(&self.x, self.n, self.k)
    }
}

pub fn pochhammer_k(x: &BigRational, n: u64, k: u64) -> BigRational {
    let k = int(k);
    let mut term = x.clone();
    let mut acc = BigRational::one();
    for _ in 0..n {
        acc *= &term;
        term += &k;
    }
    acc
}

/// `H_k = 1 + 1/2 + … + 1/k`, with `H_0 = 0`.
pub fn harmonic(k: u64) -> BigRational {
    (1..=k).fold(BigRational::zero(), |acc, i| acc + ratio(1, i))
}

/// Number of size-`n` multisets over `x` types, `C(x + n - 1, n)`.
pub fn multiset_coeff(x: &BigUint, n: u64) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    binomial_big(&(x + n - 1u32), n)
}

/// Total number of ordered `(n, m)`-elections, `(m!)^n`.
pub fn total_elections(n: u64, m: u64) -> Result<BigUint> {
    check_size(n, m, "the election count")?;
    Ok(num_traits::pow(factorial(m), n as usize))
}

/// Number of single-peaked ordered `(n, m)`-elections where a closed form
/// exists: `n <= 2`, `m <= 4`.
pub fn sp_count_exact(n: u64, m: u64) -> Result<BigUint> {
    require(n >= 1 && m >= 1, || "n and m must be positive".into())?;
    check_size(n, m, "the exact count")?;
    let two = BigUint::from(2u32);
    let count = if m <= 2 || n == 1 {
        num_traits::pow(factorial(m), n as usize)
    } else if n == 2 {
        factorial(m) * binomial(2 * m - 2, m - 1)
    } else if m == 3 {
        6u32 * two.pow(n as u32 - 1) * (two.pow(n as u32) - 1u32)
    } else if m == 4 {
        24u32 * BigUint::from(4u32).pow(n as u32 - 1) * (two.pow(n as u32 + 1) - 3u32)
    } else {
        return Err(Error::Capability(format!(
            "no closed form for the number of single-peaked ({n}, {m})-elections"
        )));
    };
    Ok(count)
}

/// Exact single-peakedness probability under Impartial Culture.
pub fn ic_probability_exact(n: u64, m: u64) -> Result<BigRational> {
    let count = sp_count_exact(n, m)?;
    Ok(BigRational::new(
        count.into(),
        total_elections(n, m)?.into(),
    ))
}

/// Counting bounds on the number of single-peaked `(n, m)`-elections:
/// `(m!/2)(2^{(m-1)n} + (2^{m-1}-2)^n - 2(2^{m-1}-1)^n) <= a <= (m!/2) 2^{(m-1)n}`.
pub fn sp_bounds_ic(n: u64, m: u64) -> Result<BoundResult> {
    require(n >= 2 && m >= 2, || "bounds need n, m >= 2".into())?;
    check_size(n, m, "the counting bounds")?;
    let half = factorial(m) / 2u32;
    let q = BigInt::from(2u32).pow(m as u32 - 1);
    let e = n as usize;
    let top = num_traits::pow(q.clone(), e);
    let upper = BigInt::from(half.clone()) * &top;
    let lower =
        BigInt::from(half) * (&top + num_traits::pow(&q - 2, e) - 2 * num_traits::pow(&q - 1, e));
    let mut b = BoundResult::between(
        Some(int(lower).into()),
        Some(int(upper).into()),
        "ic-count-bounds",
    );
    if let Ok(c) = sp_count_exact(n, m) {
        b.exact = Some(c.into());
    }
    Ok(b)
}

/// The same bounds divided by `(m!)^n`.
pub fn ic_probability_bounds(n: u64, m: u64) -> Result<BoundResult> {
    let counts = sp_bounds_ic(n, m)?;
    let total = int(total_elections(n, m)?);
    let scale = |q: Option<Quantity>| {
        q.map(|q| Quantity::Exact(q.as_exact().expect("exact count") / &total))
    };
    Ok(BoundResult {
        lower: scale(counts.lower),
        upper: scale(counts.upper),
        exact: scale(counts.exact),
        formula: "ic-probability-bounds",
    })
}

/// `ε(n, m) = (2(2^{m-1}-1)^n - (2^{m-1}-2)^n) / 2^{(m-1)n}`, the relative gap
/// between the counting bounds.
pub fn ic_epsilon(n: u64, m: u64) -> Result<BigRational> {
    require(m >= 2, || "m must be at least 2".into())?;
    let q = BigInt::from(2u32).pow(m as u32 - 1);
    let e = n as usize;
    let num = 2 * num_traits::pow(&q - 1, e) - num_traits::pow(&q - 2, e);
    Ok(BigRational::new(num, num_traits::pow(q, e)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SwKind {
    SinglePeaked,
    GroupSeparable,
    /// Any domain avoiding a `(2, k)`-configuration, given `ln c_k`.
    Generic {
        ln_ck: f64,
    },
}

/// Natural log of the pattern-avoidance upper bound on the number of
/// `(n, m)`-elections in the given domain.
pub fn sw_upper(n: u64, m: u64, kind: SwKind) -> Result<f64> {
    require(n >= 2 && m >= 2, || "upper bounds need n, m >= 2".into())?;
    let lf = ln_factorial(m);
    let (n1, m) = ((n - 1) as f64, m as f64);
    Ok(match kind {
        SwKind::SinglePeaked => lf + (m - 1.0) * n1 * 4f64.ln(),
        SwKind::GroupSeparable => lf + m * n1 * (3.0 + 2.0 * 2f64.sqrt()).ln(),
        SwKind::Generic { ln_ck } => lf + m * n1 * ln_ck,
    })
}

/// Exponent `2 k^4 C(k^2, k)` of the explicit Marcus–Tardos constant
/// `c_k = 15^{2 k^4 C(k^2, k)}`.
pub fn marcus_tardos_exponent(k: u64) -> BigUint {
    2u32 * BigUint::from(k).pow(4) * binomial(k * k, k)
}

/// The explicit constant as an exact integer, for small `k`.
pub fn marcus_tardos_ck(k: u64) -> Result<BigUint> {
    require(k >= 1, || "k must be positive".into())?;
    let e = marcus_tardos_exponent(k)
        .to_u32()
        .filter(|&e| e <= 1_000_000)
        .ok_or_else(|| {
            Error::Capability(format!(
                "15^(2k^4 C(k^2,k)) for k = {k} is too large; use its logarithm"
            ))
        })?;
    Ok(BigUint::from(15u32).pow(e))
}

pub fn marcus_tardos_ln_ck(k: u64) -> f64 {
    marcus_tardos_exponent(k).to_f64().unwrap_or(f64::INFINITY) * 15f64.ln()
}

/// Best known growth constants for single patterns of length `k`.
pub fn known_best(k: u64) -> Option<f64> {
    match k {
        2 => Some(1.0),
        3 => Some(4.0),
        4 => Some(13.738),
        _ => None,
    }
}

/// Exact single-peakedness probability under Impartial Anonymous Culture
/// where a closed form exists (`n <= 2` or `m <= 3`).
pub fn iac_exact(n: u64, m: u64) -> Result<BigRational> {
    require(n >= 1 && m >= 1, || "n and m must be positive".into())?;
    if m <= 2 || n == 1 {
        Ok(BigRational::one())
    } else if n == 2 {
        check_size(1, m, "the IAC probability")?;
        Ok(BigRational::new(
            (binomial(2 * m - 2, m - 1) + 1u32).into(),
            (factorial(m) + 1u32).into(),
        ))
    } else if m == 3 {
        Ok(ratio(60 * n, (n + 2) * (n + 3) * (n + 4)))
    } else {
        Err(Error::Capability(format!(
            "no closed form for the IAC probability at ({n}, {m})"
        )))
    }
}

/// IAC probability bounds; the lower bound is the inclusion–exclusion count
/// `(m!/2)[((q;n)) - 2((q-1;n)) + ((q-2;n))] / ((m!;n))` with `q = 2^{m-1}`.
pub fn iac_bounds(n: u64, m: u64) -> Result<BoundResult> {
    require(n >= 2 && m >= 2, || "bounds need n, m >= 2".into())?;
    check_size(1, m, "the IAC bounds")?;
    let f = factorial(m);
    let half = int(&f / 2u32);
    let total = int(multiset_coeff(&f, n));
    let q = BigUint::from(2u32).pow(m as u32 - 1);
    let mc = |x: &BigUint| int(multiset_coeff(x, n));
    let top = mc(&q);
    let upper = &half * &top / &total;
    let lower = &half * (&top - int(2) * mc(&(&q - 1u32)) + mc(&(&q - 2u32))) / &total;
    let mut b = BoundResult::between(Some(lower.into()), Some(upper.into()), "iac-bounds");
    if let Ok(x) = iac_exact(n, m) {
        b.exact = Some(x.into());
    }
    Ok(b)
}

fn polya_check(n: u64, m: u64, a: u64) -> Result<()> {
    if a == 0 {
        return Err(Error::Precondition(
            "homogeneity a = 0 is Impartial Culture; use the IC formulas".into(),
        ));
    }
    require(n >= 2 && m >= 2, || {
        "the Pólya bound needs n, m >= 2".into()
    })
}

/// Lower bound on the single-peakedness probability under the Pólya urn
/// with homogeneity `a`, evaluated exactly.
pub fn polya_lower_exact(n: u64, m: u64, a: u64) -> Result<BigRational> {
    polya_check(n, m, a)?;
    check_size(n, m, "the exact Pólya bound")?;
    let f = int(factorial(m));
    let ar = int(a);
    let pre = &f * int(factorial(n - 1)) / (&ar * pochhammer_k(&(&f / &ar), n, 1));
    let mut bracket =
        BigRational::one() + ratio(2, a) * int(binomial(2 * m - 2, m - 1)) * harmonic(n - 1);
    let q = int(BigUint::from(2u32).pow(m as u32 - 1) - 2u32);
    let mut tail = BigRational::zero();
    for l in 2..n {
        let p = pochhammer_k(&q, n - l, a) / num_traits::pow(ar.clone(), (n - l) as usize);
        tail += p * harmonic(l - 1) / int(BigUint::from(l) * factorial(n - l));
    }
    bracket += ratio(n, a) * tail;
    Ok(pre * bracket)
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    let mut sum = 0.0;
    let mut c = 0.0;
    for &x in xs {
        // Kahan summation of the scaled terms.
        let y = (x - hi).exp() - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    hi + sum.ln()
}

/// The same bound as [`polya_lower_exact`], evaluated in log space.
pub fn polya_lower_ln(n: u64, m: u64, a: u64) -> Result<f64> {
    polya_check(n, m, a)?;
    let ln_a = (a as f64).ln();
    let ln_f = ln_factorial(m);
    // ln(m!/a + i - 1) without forming m!/a in floating point.
    let ln_x = ln_f - ln_a;
    let inv_x = (-ln_x).exp();
    let ln_rising: f64 = (0..n).map(|i| ln_x + (i as f64 * inv_x).ln_1p()).sum();
    let ln_pre = ln_f + ln_factorial(n - 1) - ln_a - ln_rising;

    let ln_h: Vec<f64> = {
        let mut h = 0.0f64;
        let mut v = vec![f64::NEG_INFINITY];
        for i in 1..n {
            h += 1.0 / i as f64;
            v.push(h.ln());
        }
        v
    };
    let ln_central = decimal::ln_abs(&int(binomial(2 * m - 2, m - 1)));
    let mut terms = vec![0.0, 2f64.ln() - ln_a + ln_central + ln_h[n as usize - 1]];
    let q = 2f64.powi(m as i32 - 1) - 2.0;
    for l in 2..n {
        let k = n - l;
        let ln_p: f64 = (0..k)
            .map(|i| ((q + i as f64 * a as f64) / a as f64).ln())
            .sum();
        terms.push(
            (n as f64).ln() - ln_a + ln_p + ln_h[l as usize - 1]
                - (l as f64).ln()
                - ln_factorial(k),
        );
    }
    Ok(ln_pre + log_sum_exp(&terms))
}

/// Probability, under the Pólya urn, that the election has at most two
/// distinct votes and they form a single-peaked pair. A guaranteed lower
/// bound on the single-peakedness probability, and exact for `n <= 2`.
///
/// `m! (1)_{n,a} + m!(C-1)/2 · Σ_{l=1}^{n-1} C(n,l) (1)_{l,a} (1)_{n-l,a}`
/// over `(m!)_{n,a}`, with `C = C(2m-2, m-1)` single-peaked partners per vote.
pub fn polya_lower_certified(n: u64, m: u64, a: u64) -> Result<BigRational> {
    require(n >= 1 && m >= 1, || "n and m must be positive".into())?;
    let f = factorial(m);
    let bits = n as f64 * ((f.bits() as f64).max(1.0) + (a as f64 * n as f64 + 1.0).log2());
    if bits > MAX_EXACT_BITS {
        return Err(Error::Capability(format!(
            "the certified Pólya bound for (n, m) = ({n}, {m}) needs about {bits:.0} bits"
        )));
    }
    // rising[l] = (1)_{l,a}
    let mut rising = vec![BigUint::one()];
    for l in 1..=n {
        let next = &rising[l as usize - 1] * (BigUint::one() + BigUint::from(a) * (l - 1));
        rising.push(next);
    }
    let denom: BigUint = (0..n).map(|i| &f + BigUint::from(a) * i).product();
    let partners = binomial(2 * m - 2, m - 1) - 1u32;
    let mut mixed = BigUint::zero();
    for l in 1..n {
        mixed += binomial(n, l) * &rising[l as usize] * &rising[(n - l) as usize];
    }
    let num = &f * &rising[n as usize] + &f * partners * mixed / 2u32;
    Ok(BigRational::new(num.into(), denom.into()))
}

/// Pólya lower bound, exact when the arithmetic stays small and in log space
/// otherwise.
///
/// This closed form counts every unordered pair of votes twice in its
/// two-vote term, so it can exceed the true probability (and
/// even 1 for small `n`). [`polya_lower_certified`] is a guaranteed bound.
pub fn polya_lower(n: u64, m: u64, a: u64) -> Result<Quantity> {
    polya_check(n, m, a)?;
    let bits = n as f64 * (ln_factorial(m) + (a as f64).ln() + (n as f64).ln() + m as f64)
        / std::f64::consts::LN_2;
    if bits <= POLYA_EXACT_BITS {
        polya_lower_exact(n, m, a).map(Quantity::Exact)
    } else {
        polya_lower_ln(n, m, a).map(Quantity::Log)
    }
}

/// The simplified bound for `a = m!`:
/// `(1/n)(1 + 2 ln(n-1)/m! · (2m-2)!/((m-1)!)^2)`. Derived from
/// [`polya_lower`], so it can overshoot as well.
pub fn polya_lower_simple(n: u64, m: u64) -> Result<f64> {
    require(n >= 2 && m >= 2, || "the bound needs n, m >= 2".into())?;
    let c_over_f = BigRational::new(binomial(2 * m - 2, m - 1).into(), factorial(m).into())
        .to_f64()
        .unwrap_or(0.0);
    Ok((1.0 + 2.0 * ((n - 1) as f64).ln() * c_over_f) / n as f64)
}

fn check_phi(phi: &BigRational) -> Result<()> {
    if *phi <= BigRational::zero() || *phi > BigRational::one() {
        return Err(Error::Parameter(format!(
            "phi must lie in (0, 1], got {phi}"
        )));
    }
    Ok(())
}

/// Mallows normalization `Z = ∏_{i=1}^{m} (1 + φ + … + φ^{i-1})`.
pub fn mallows_z(m: u64, phi: &BigRational) -> Result<BigRational> {
    check_phi(phi)?;
    let mut z = BigRational::one();
    let mut geometric = BigRational::zero();
    let mut power = BigRational::one();
    for _ in 0..m {
        geometric += &power;
        power *= phi;
        z *= &geometric;
    }
    Ok(z)
}

/// `((1 + φ(m-1) + φ²(m-2)(m-3)/2) / Z)^n`, the Mallows lower bound.
pub fn mallows_lower(n: u64, m: u64, phi: &BigRational) -> Result<BigRational> {
    check_phi(phi)?;
    require(n >= 1 && m >= 2, || "the bound needs n >= 1, m >= 2".into())?;
    let base = mallows_single(m, phi)?;
    Ok(num_traits::pow(base, n as usize))
}

fn mallows_single(m: u64, phi: &BigRational) -> Result<BigRational> {
    let mi = m as i64;
    let num = BigRational::one() + phi * int(mi - 1) + phi * phi * ratio((mi - 2) * (mi - 3), 2);
    Ok(num / mallows_z(m, phi)?)
}

/// The two bounds at `φ = 1/m`: the refined `(1.5 ((1-1/m)/(1-m^{-m}))^{m-1})^n`
/// and the rough `(1-1/m)^{(m-1)n}`, in that order.
pub fn mallows_lower_simple(n: u64, m: u64) -> Result<(BigRational, BigRational)> {
    require(m >= 2, || "the bound needs m >= 2".into())?;
    let inv = ratio(1, m);
    let one = BigRational::one();
    let geometric_cap = (&one - &inv) / (&one - num_traits::pow(inv.clone(), m as usize));
    let refined = ratio(3, 2) * num_traits::pow(geometric_cap, m as usize - 1);
    let rough = num_traits::pow(&one - &inv, (m as usize - 1) * n as usize);
    Ok((num_traits::pow(refined, n as usize), rough))
}
