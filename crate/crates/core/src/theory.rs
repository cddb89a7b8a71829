//! Closed forms, bounds and asymptotics for cycle statistics, in exact
//! rational arithmetic.
//!
//! Symbols: `q` is the field order, `d` the map degree, `k` a cycle length.
//! `falling(n, k) = n (n - 1) ... (n - k + 1)`, zero once `k > n`.
//! Asymptotic values are plain `f64` diagnostics and never enter exact
//! comparisons.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fmaps::DegreeMode;

pub type Rational = BigRational;

#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_86;

pub fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn to_f64(r: &Rational) -> f64 {
    // numerator and denominator may both overflow f64 individually
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = r.denom().bits().max(r.numer().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn falling(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    falling(n, k) / factorial(k)
}

pub fn factorial(n: u64) -> BigInt {
    falling(n, n)
}

fn pow(q: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(q), e as usize)
}

/// `q^e` for a possibly negative exponent.
fn pow_signed(q: u64, e: i64) -> Rational {
    if e >= 0 {
        int(pow(q, e as u64))
    } else {
        Rational::new(BigInt::one(), pow(q, (-e) as u64))
    }
}

/// `1 + 1/2 + ... + 1/n`
pub fn harmonic(n: u64) -> Rational {
    (1..=n).fold(Rational::zero(), |acc, k| acc + ratio(1, k))
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Lower and upper bounds on one quantity, with the conditions that decide
/// how an observation is compared against them.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundSet {
    pub lower: Rational,
    pub upper: Rational,
    /// The lower bound is attained exactly.
    pub lower_is_tight: bool,
    /// The lower bound is at most zero and says nothing about a count.
    pub lower_vacuous: bool,
    /// False when only the upper bound is asserted.
    pub lower_applies: bool,
    pub strict_lower: bool,
    pub strict_upper: bool,
    /// A second, sharper lower bound where one is available.
    pub extra_lower: Option<Rational>,
    /// Float minorant reported as a diagnostic.
    pub minorant: Option<f64>,
}

impl BoundSet {
    fn new(lower: Rational, upper: Rational) -> Self {
        let lower_vacuous = !lower.is_positive();
        BoundSet {
            lower,
            upper,
            lower_is_tight: false,
            lower_vacuous,
            lower_applies: true,
            strict_lower: false,
            strict_upper: false,
            extra_lower: None,
            minorant: None,
        }
    }
}

fn check_k(k: u64, lo: u64, hi: u64) -> Result<()> {
    if k < lo || k > hi {
        return Err(Error::out_of_range(
            "cycle length",
            format!("k = {k} outside {lo}..={hi}"),
        ));
    }
    Ok(())
}

/// Total number of `k`-cycles over all polynomials of degree at most `d`:
/// `falling(q, k) / k * q^(d - k + 1)`.
pub fn poly_cycle_sum(q: u64, d: u64, k: u64) -> Result<BigInt> {
    check_k(k, 1, d + 1)?;
    let (quot, rem) = (falling(q, k) * pow(q, d + 1 - k)).div_rem(&BigInt::from(k));
    debug_assert!(rem.is_zero());
    Ok(quot)
}

/// Average number of `k`-cycles of a degree-`d` polynomial, valid for
/// `1 <= k <= d` and for `d = 0, k = 1`.
pub fn poly_avg_k(q: u64, d: u64, k: u64) -> Result<Rational> {
    if !((1..=d).contains(&k) || (d == 0 && k == 1)) {
        return Err(Error::out_of_range(
            "cycle length",
            format!("closed form needs 1 <= k <= d or d = 0, k = 1; got d = {d}, k = {k}"),
        ));
    }
    Ok(Rational::new(falling(q, k), BigInt::from(k) * pow(q, k)))
}

fn poly_short_cycle_sum(q: u64, d: u64) -> Rational {
    (1..=d.min(q)).fold(Rational::zero(), |acc, k| {
        acc + Rational::new(falling(q, k), BigInt::from(k) * pow(q, k))
    })
}

/// Bounds on the average component count of degree-`d` polynomials. The
/// lower bound is attained exactly when `d >= q` and strict otherwise.
pub fn poly_component_bounds(q: u64, d: u64) -> BoundSet {
    let lower = poly_short_cycle_sum(q, d);
    let upper = if d + 1 < q {
        harmonic(d + 1) + ratio(q, d + 2)
    } else {
        harmonic(q)
    };
    let mut b = BoundSet::new(lower, upper);
    b.lower_is_tight = d >= q;
    b.strict_lower = !b.lower_is_tight;
    b.minorant = Some(((d.min(isqrt(q)) + 1) as f64).ln() - 0.25);
    b
}

/// Lower bound on the average periodic-point count, with its tightness flag
/// and float minorant.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicLower {
    pub value: Rational,
    pub tight: bool,
    pub minorant: f64,
}

pub fn poly_periodic_lower(q: u64, d: u64) -> PeriodicLower {
    let value = (1..=d.min(q)).fold(Rational::zero(), |acc, k| {
        acc + Rational::new(falling(q, k), pow(q, k))
    });
    PeriodicLower {
        value,
        tight: d >= q,
        minorant: 5.0 / 6.0 * d.min(isqrt(q)) as f64,
    }
}

/// Number of rational maps on `P^1(F_q)` of degree at most / exactly `d`.
pub fn rat_count(q: u64, d: u64, mode: DegreeMode) -> BigInt {
    match mode {
        DegreeMode::AtMost => pow(q, 2 * d + 1) + 1,
        DegreeMode::Exactly if d == 0 => BigInt::from(q + 1),
        DegreeMode::Exactly => pow(q, 2 * d - 1) * BigInt::from(q * q - 1),
    }
}

/// Probability that two polynomials of degree at most `d` are coprime.
pub fn coprime_prob(q: u64, d: u64) -> Rational {
    Rational::one() - ratio(1, q) + Rational::new(BigInt::from(q - 1), pow(q, 2 * d + 2))
}

/// `K = falling(q + 1, k) / k * q^(2d - k)`
pub fn precycle_factor(q: u64, d: u64, k: u64) -> Rational {
    Rational::new(falling(q + 1, k), BigInt::from(k)) * pow_signed(q, 2 * d as i64 - k as i64)
}

/// Strict bounds `((q - k - 1) K, q K)` on the total number of `k`-cycles
/// over rational maps of degree at most `d`.
pub fn rat_k_cycle_total_bounds(q: u64, d: u64, k: u64) -> Result<BoundSet> {
    check_k(k, 1, d + 1)?;
    let kf = precycle_factor(q, d, k);
    let lower = int(q as i64 - k as i64 - 1) * &kf;
    let mut b = BoundSet::new(lower, int(q) * kf);
    b.strict_lower = true;
    b.strict_upper = true;
    Ok(b)
}

/// Strict bounds on the average number of `k`-cycles of degree-`d` rational
/// maps around `falling(q + 1, k) / (k q^k)`. At `k = d + 1` only the upper
/// bound is asserted.
pub fn rat_avg_k_bounds(q: u64, d: u64, k: u64) -> Result<BoundSet> {
    check_k(k, 1, d + 1)?;
    let center = rat_avg_k_center(q, k);
    let lower = &center * (Rational::one() - ratio(2 * k + 2, q));
    let upper = &center * (Rational::one() + ratio(2, q * q));
    let mut b = BoundSet::new(lower, upper);
    b.lower_applies = k <= d;
    b.strict_lower = true;
    b.strict_upper = true;
    Ok(b)
}

pub fn rat_avg_k_center(q: u64, k: u64) -> Rational {
    Rational::new(falling(q + 1, k), BigInt::from(k) * pow(q, k))
}

/// Bounds on the average component count of degree-`d` rational maps.
///
/// `lower` is `H(min(d, isqrt q)) - 4` (strict); when `d <= sqrt q` the sharper
/// `H(d) - (d^2 + 15 d) / (4 q)` is carried in `extra_lower`.
pub fn rat_component_bounds(q: u64, d: u64) -> BoundSet {
    let s = d.min(isqrt(q));
    let lower = harmonic(s) - int(4);
    let upper_factor = Rational::one() + ratio(2, q * q);
    let upper = if d + 1 < q {
        ratio(q + 1, d + 2) + &upper_factor * harmonic(d + 1)
    } else {
        upper_factor * harmonic(q + 1)
    };
    let mut b = BoundSet::new(lower, upper);
    b.strict_lower = true;
    if d * d <= q {
        b.extra_lower = Some(harmonic(d) - ratio(d * d + 15 * d, 4 * q));
    }
    b.minorant = Some(((s + 1) as f64).ln() - 4.0);
    b
}

pub fn rat_periodic_lower(q: u64, d: u64) -> PeriodicLower {
    let value = (1..=d.min(q)).fold(Rational::zero(), |acc, k| {
        let term = Rational::new(falling(q + 1, k), pow(q, k));
        acc + term * (Rational::one() - ratio(k + 4, q))
    });
    PeriodicLower {
        value,
        tight: false,
        minorant: 5.0 / 6.0 * d.min(isqrt(q)) as f64 - 3.0,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomMapStats {
    pub components_exact: Rational,
    pub components_asymptotic: f64,
    pub periodic_exact: Rational,
    pub periodic_asymptotic: f64,
}

/// Exact and asymptotic averages for a uniformly random self-map of `n` points.
pub fn random_map_stats(n: u64) -> RandomMapStats {
    let (components, periodic) = random_map_sums(n);
    let nf = n as f64;
    RandomMapStats {
        components_exact: components,
        components_asymptotic: 0.5 * nf.ln() + (2f64.ln() + EULER_GAMMA) / 2.0,
        periodic_exact: periodic,
        periodic_asymptotic: (std::f64::consts::PI / 2.0).sqrt() * nf.sqrt(),
    }
}

/// Exact `sum falling(n, k) / (k n^k)` and `sum falling(n, k) / n^k` over
/// `1 <= k <= n`, accumulated as integers over the common denominators
/// `lcm(1..n) n^n` and `n^n`.
fn random_map_sums(n: u64) -> (Rational, Rational) {
    if n == 0 {
        return (Rational::zero(), Rational::zero());
    }
    let lcm = lcm_upto(n);
    let nn = pow(n, n);
    // a_k = falling(n, k) n^(n - k)
    let mut a = nn.clone();
    let mut comp = BigInt::zero();
    let mut per = BigInt::zero();
    for k in 1..=n {
        comp += &a * (&lcm / BigInt::from(k));
        per += &a;
        a = a * BigInt::from(n - k) / BigInt::from(n);
    }
    (Rational::new(comp, lcm * &nn), Rational::new(per, nn))
}

fn lcm_upto(n: u64) -> BigInt {
    let mut l = BigInt::one();
    for i in 2..=n {
        // i = p^e contributes one more factor p
        let p = (2..=i).find(|p| i % p == 0).expect("i has a prime factor");
        let mut r = i;
        while r % p == 0 {
            r /= p;
        }
        if r == 1 {
            l *= BigInt::from(p);
        }
    }
    l
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadGraphStats {
    pub graph_count: BigInt,
    pub avg_periodic: Rational,
    /// `-1 + C(mt, t)^-1 * sum_{k=0}^{t} m^k C(mt - k, t - k)`
    pub avg_periodic_shifted: Rational,
    /// `-1 + 4^t / C(2t, t)`, only for `m = 2`.
    pub avg_periodic_m2: Option<Rational>,
    pub asymptotic: f64,
}

/// Counts and average periodic points of labeled graphs on `m t` vertices
/// with out-degree 1 and every in-degree 0 or `m`.
pub fn quad_graph_stats(m: u64, t: u64) -> Result<QuadGraphStats> {
    if m == 0 || t == 0 {
        return Err(Error::out_of_range("quadratic graph", "need m, t >= 1"));
    }
    let n = m * t;
    let choose_images = binomial(n, t);
    let graph_count =
        &choose_images * factorial(n) / num_traits::pow(factorial(m), t as usize);
    let term = |k: u64| num_traits::pow(BigInt::from(m), k as usize) * binomial(n - k, t - k);
    let direct: BigInt = (1..=t).map(term).sum();
    let shifted: BigInt = (0..=t).map(term).sum();
    let avg_periodic = Rational::new(direct, choose_images.clone());
    let avg_periodic_shifted = Rational::new(shifted, choose_images) - Rational::one();
    let avg_periodic_m2 = (m == 2).then(|| {
        Rational::new(num_traits::pow(BigInt::from(4), t as usize), binomial(2 * t, t))
            - Rational::one()
    });
    Ok(QuadGraphStats {
        graph_count,
        avg_periodic,
        avg_periodic_shifted,
        avg_periodic_m2,
        asymptotic: -1.0 + (std::f64::consts::PI / 2.0).sqrt() * (n as f64).sqrt(),
    })
}
