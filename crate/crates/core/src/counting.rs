//! Exact counts of virtual n-crossing types.
//!
//! Labeled types are fragmented permutations; types up to rotation are
//! counted with Burnside's lemma. Every exact quantity is a [`BigUint`].
//! [`Census`] holds the brute-force route: it generates every labeled type
//! and quotients by rotation through [`CrossingType::canonical`].

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigUint;
use num_integer::{binomial, Integer};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::crossing::{all_pairs, CrossingType, MulticrossingSpec};

/// Largest `n` the census enumerates unless configured otherwise.
/// `F_8 = 394353` labeled types.
pub const DEFAULT_BRUTE_FORCE_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("{what} is undefined for n = {n}")]
    OutOfDomain { what: &'static str, n: usize },
    #[error("{d} does not divide {n}")]
    NotDivisor { n: usize, d: usize },
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("n = {n} exceeds the brute-force bound {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("Burnside sum for n = {n} is not divisible by n")]
    Indivisible { n: usize },
}

pub type Result<T, E = CountError> = std::result::Result<T, E>;

pub fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn totient(n: usize) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// `hi! / lo!` for `lo <= hi`.
fn falling(hi: usize, lo: usize) -> BigUint {
    (lo + 1..=hi).fold(BigUint::one(), |acc, k| acc * k)
}

/// Number of set partitions of `n` elements, from the Bell triangle.
pub fn bell(n: usize) -> BigUint {
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().unwrap().clone());
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row.swap_remove(0)
}

/// Fragmented permutations of `n` elements with exactly `k` parts:
/// `C(n-1, k-1) n! / k!`. Zero outside `1 <= k <= n`.
pub fn fragmented_count_by_parts(n: usize, k: usize) -> BigUint {
    if k == 0 || k > n {
        return BigUint::zero();
    }
    binomial(BigUint::from(n - 1), BigUint::from(k - 1)) * falling(n, k)
}

/// All fragmented permutations of `n` elements (`F_0 = 1` by convention).
pub fn fragmented_count(n: usize) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    (1..=n).map(|k| fragmented_count_by_parts(n, k)).sum()
}

/// Labeled types invariant under rotation by `d` arcs, for `d | n`:
/// `sum_k C(d-1, k-1) (d!/k!) (n/d)^(d-k)`.
pub fn fix_count(n: usize, d: usize) -> Result<BigUint> {
    if d == 0 || !n.is_multiple_of(d) {
        return Err(CountError::NotDivisor { n, d });
    }
    let q = BigUint::from(n / d);
    Ok((1..=d)
        .map(|k| {
            binomial(BigUint::from(d - 1), BigUint::from(k - 1))
                * falling(d, k)
                * q.pow((d - k) as u32)
        })
        .sum())
}

/// Types of virtual n-crossings up to rotation, via Burnside's lemma over
/// the divisors of `n`.
pub fn vcount(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(CountError::OutOfDomain { what: "vcount", n });
    }
    let mut total = BigUint::zero();
    for d in divisors(n) {
        total += fix_count(n, d)? * totient(n / d);
    }
    let (q, r) = total.div_rem(&BigUint::from(n));
    if !r.is_zero() {
        return Err(CountError::Indivisible { n });
    }
    Ok(q)
}

/// `(F_p - 1)/p + 1` for prime `p`.
pub fn vcount_prime(p: usize) -> Result<BigUint> {
    if !is_prime(p) {
        return Err(CountError::NotPrime(p));
    }
    let (q, r) = (fragmented_count(p) - 1u32).div_rem(&BigUint::from(p));
    if !r.is_zero() {
        return Err(CountError::Indivisible { n: p });
    }
    Ok(q + 1u32)
}

/// Almost virtual n-crossings: `n - 1` up to rotation, `floor(n/2)` up to
/// rotation and reflection.
pub fn almost_virtual_count(n: usize, up_to_reflection: bool) -> Result<usize> {
    if n < 2 {
        return Err(CountError::OutOfDomain {
            what: "almost_virtual_count",
            n,
        });
    }
    Ok(if up_to_reflection { n / 2 } else { n - 1 })
}

/// Natural logarithm of a big integer; finite for any nonzero input.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// A positive real stored by its natural logarithm, so magnitudes past the
/// `f64` range stay finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Estimate {
    ln: f64,
}

impl Estimate {
    pub fn ln(&self) -> f64 {
        self.ln
    }

    /// Plain floating value; `inf` once it leaves the `f64` range.
    pub fn to_f64(&self) -> f64 {
        self.ln.exp()
    }

    /// `exact / self`.
    pub fn ratio_of(&self, exact: &BigUint) -> f64 {
        (ln_biguint(exact) - self.ln).exp()
    }

    /// Decimal mantissa in `[1, 10)` and exponent.
    pub fn decimal(&self) -> (f64, i64) {
        let log10 = self.ln / std::f64::consts::LN_10;
        let exp = log10.floor();
        (10f64.powf(log10 - exp), exp as i64)
    }
}

impl std::fmt::Display for Estimate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (m, e) = self.decimal();
        write!(f, "{m:.6}e{e}")
    }
}

/// Asymptotic `n! e^(2 sqrt n) / (2 sqrt(pi e) n^(7/4))`, evaluated in the
/// log domain.
pub fn v_estimate(n: usize) -> Result<Estimate> {
    if n < 2 {
        return Err(CountError::OutOfDomain {
            what: "v_estimate",
            n,
        });
    }
    let x = n as f64;
    let ln_fact = statrs::function::gamma::ln_gamma(x + 1.0);
    let ln = ln_fact + 2.0 * x.sqrt()
        - (2.0f64).ln()
        - 0.5 * (std::f64::consts::PI * std::f64::consts::E).ln()
        - 1.75 * x.ln();
    Ok(Estimate { ln })
}

fn decimal<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

fn decimal_map<S: Serializer>(
    m: &BTreeMap<usize, BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(d, v)| (d.to_string(), v.to_str_radix(10))))
}

fn estimate_str<S: Serializer>(e: &Estimate, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

/// Every exact count for one `n`, plus the asymptotic estimate.
#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    pub n: usize,
    #[serde(serialize_with = "decimal")]
    pub bell: BigUint,
    #[serde(serialize_with = "decimal")]
    pub fragmented: BigUint,
    #[serde(serialize_with = "decimal_map")]
    pub fix_by_divisor: BTreeMap<usize, BigUint>,
    #[serde(serialize_with = "decimal")]
    pub vcount: BigUint,
    #[serde(serialize_with = "estimate_str")]
    pub estimate: Estimate,
    pub ratio: f64,
}

impl CountReport {
    pub fn new(n: usize) -> Result<Self> {
        let vcount = vcount(n)?;
        let estimate = v_estimate(n)?;
        let fix_by_divisor = divisors(n)
            .into_iter()
            .map(|d| fix_count(n, d).map(|v| (d, v)))
            .collect::<Result<_>>()?;
        Ok(Self {
            n,
            bell: bell(n),
            fragmented: fragmented_count(n),
            fix_by_divisor,
            ratio: estimate.ratio_of(&vcount),
            vcount,
            estimate,
        })
    }

    /// `n * vcount == sum_d phi(n/d) Fix(n, d)`.
    pub fn burnside_holds(&self) -> bool {
        let lhs = &self.vcount * self.n;
        let rhs: BigUint = self
            .fix_by_divisor
            .iter()
            .map(|(&d, v)| v * totient(self.n / d))
            .sum();
        lhs == rhs
    }
}

/// Set partitions of `1..=n` via restricted growth strings, parts in order
/// of their smallest member.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i > n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            go(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(1, n, &mut Vec::new(), &mut out);
    out
}

/// Calls `f` with every ordering of every part of `partition`.
fn for_each_ordering(n: usize, partition: &[Vec<usize>], mut f: impl FnMut(CrossingType)) {
    partition
        .iter()
        .map(|part| part.iter().copied().permutations(part.len()).collect_vec())
        .multi_cartesian_product()
        .for_each(|parts| f(CrossingType::from_parts_unchecked(n, parts)));
}

/// Brute-force enumeration of labeled types, bounded by `bound`.
///
/// With `parallel` set the work is split by set partition across the rayon
/// pool; results are merged in sorted maps so output never depends on
/// scheduling.
#[derive(Debug, Clone, Copy)]
pub struct Census {
    pub bound: usize,
    pub parallel: bool,
}

impl Default for Census {
    fn default() -> Self {
        Self {
            bound: DEFAULT_BRUTE_FORCE_BOUND,
            parallel: true,
        }
    }
}

impl Census {
    pub fn with_bound(bound: usize) -> Self {
        Self {
            bound,
            ..Self::default()
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(CountError::OutOfDomain { what: "census", n });
        }
        if n > self.bound {
            return Err(CountError::BoundExceeded {
                n,
                bound: self.bound,
            });
        }
        Ok(())
    }

    fn map_reduce<T, M, R>(&self, n: usize, map: M, identity: fn() -> T, reduce: R) -> T
    where
        T: Send,
        M: Fn(&[Vec<usize>]) -> T + Sync,
        R: Fn(T, T) -> T + Sync,
    {
        let partitions = set_partitions(n);
        if self.parallel {
            partitions
                .par_iter()
                .map(|p| map(p))
                .reduce(identity, &reduce)
        } else {
            partitions.iter().map(|p| map(p)).fold(identity(), &reduce)
        }
    }

    /// Number of labeled types, counted by generation.
    pub fn labeled_count(&self, n: usize) -> Result<u64> {
        self.check(n)?;
        Ok(self.map_reduce(
            n,
            |p| {
                let mut c = 0u64;
                for_each_ordering(n, p, |_| c += 1);
                c
            },
            || 0,
            |a, b| a + b,
        ))
    }

    /// Labeled types fixed by rotation through `d` positions.
    pub fn fixed_count(&self, n: usize, d: usize) -> Result<u64> {
        self.check(n)?;
        Ok(self.map_reduce(
            n,
            |p| {
                let mut c = 0u64;
                for_each_ordering(n, p, |t| {
                    if t.rotate(d) == t {
                        c += 1
                    }
                });
                c
            },
            || 0,
            |a, b| a + b,
        ))
    }

    /// One canonical representative per orbit, ordered by encoding.
    pub fn enumerate_types(&self, n: usize, include_reflection: bool) -> Result<Vec<CrossingType>> {
        self.check(n)?;
        let reps = self.map_reduce(
            n,
            |p| {
                let mut local = BTreeMap::new();
                for_each_ordering(n, p, |t| {
                    let c = t.canonical(include_reflection);
                    local.entry(c.encoding()).or_insert(c);
                });
                local
            },
            BTreeMap::new,
            |mut a, b| {
                a.extend(b);
                a
            },
        );
        Ok(reps.into_values().collect())
    }
}

/// Counts the classical/virtual patterns on `n` labeled arcs that pass the
/// validity check, over all `2^C(n,2)` pair subsets. Below two arcs the
/// only pattern is the empty one.
pub fn valid_pair_pattern_count(n: usize) -> u64 {
    if n < 2 {
        return 1;
    }
    let pairs: Vec<(usize, usize)> = all_pairs(n).collect();
    assert!(pairs.len() < 64, "too many pairs for a bitmask");
    let heights: Vec<usize> = (1..=n).collect();
    (0u64..1 << pairs.len())
        .into_par_iter()
        .filter(|mask| {
            let classical = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &p)| p);
            MulticrossingSpec::new(heights.clone(), classical)
                .expect("well-formed by construction")
                .validate()
                .is_valid()
        })
        .count() as u64
}
