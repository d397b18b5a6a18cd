//! Exact counts of visible and relatively s-prime ideal tuples, their error
//! terms against the main term `(cx)^m / zeta_K(ms)`, and brute-force
//! oracles over explicitly enumerated ideals.
//!
//! The production route is the Moebius-weighted power sum
//! `sum_{n^s <= x} b[n] * j_K(floor(x / n^s))^m`, evaluated in exact
//! arbitrary-size integers (the cumulative counter cubed overflows 64 bits
//! well inside table range). The oracle route enumerates every ideal of norm
//! up to the limit as a prime-ideal exponent vector and counts qualifying
//! ordered m-tuples directly; the two must agree exactly wherever both run.

pub use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{splitting_type, FieldSpec, SplittingType};
use crate::sieve::{CoefficientTable, MoebiusTable};
use crate::zeta::zeta_k_at;

/// Largest norm bound accepted by the ideal enumerator.
pub const ORACLE_NORM_CAP: u64 = 10_000;

/// Budget on the number of ordered tuples a brute-force count may visit.
pub const ORACLE_TUPLE_BUDGET: u128 = 100_000_000;

/// Upper bound on prime-ideal exponents at oracle scale (2^16 > norm cap).
const MAX_GCD_DEPTH: usize = 16;

/// One prime ideal, identified by its rational prime and an index
/// (split primes carry two labels, index 0 and 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeIdeal {
    pub p: u64,
    pub index: u8,
    /// Residue degree: 2 for inert labels, 1 otherwise.
    pub residue_degree: u8,
    /// Norm of the prime ideal, `p^residue_degree`.
    pub norm: u64,
}

/// An ideal as a prime-ideal exponent vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    pub norm: u64,
    /// Pairs `(index into IdealList::labels, exponent)`, ascending by label.
    pub factors: Vec<(u32, u32)>,
}

/// Every ideal of norm at most `limit`, with the label table they reference.
#[derive(Debug, Clone)]
pub struct IdealList {
    pub field: FieldSpec,
    pub limit: u64,
    pub labels: Vec<PrimeIdeal>,
    pub ideals: Vec<Ideal>,
}

/// A count series over a geometric grid of evaluation points.
#[derive(Debug, Clone)]
pub struct CountSeries {
    pub field: FieldSpec,
    pub m: u32,
    pub s: u32,
    pub xs: Vec<f64>,
    /// Exact tuple counts per grid point.
    pub counts: Vec<BigInt>,
    /// `(cx)^m / zeta_K(ms)`; NaN when `m*s < 2` (no convergent main term).
    pub main_terms: Vec<f64>,
    /// `count - main_term`, as a double.
    pub errors: Vec<f64>,
}

/// Number of visible ordered m-tuples of ideals with all norms at most `x`:
/// `sum_{n <= x} b[n] * j_K(floor(x/n))^m`, exactly.
pub fn visible_count(
    coef: &CoefficientTable,
    moeb: &MoebiusTable,
    m: u32,
    x: f64,
) -> Result<BigInt> {
    moebius_power_sum(coef, moeb, m, 1, x)
}

/// Number of relatively s-prime ordered m-tuples:
/// `sum_{n^s <= x} b[n] * j_K(floor(x/n^s))^m`, exactly.
/// `s = 1` coincides with [`visible_count`].
pub fn sprime_count(
    coef: &CoefficientTable,
    moeb: &MoebiusTable,
    m: u32,
    s: u32,
    x: f64,
) -> Result<BigInt> {
    moebius_power_sum(coef, moeb, m, s, x)
}

fn moebius_power_sum(
    coef: &CoefficientTable,
    moeb: &MoebiusTable,
    m: u32,
    s: u32,
    x: f64,
) -> Result<BigInt> {
    if m == 0 {
        return Err(Error::InvalidArgument("tuple length m must be >= 1".into()));
    }
    if s == 0 {
        return Err(Error::InvalidArgument(
            "primality order s must be >= 1".into(),
        ));
    }
    if coef.field.d != moeb.field.d {
        return Err(Error::InvalidArgument(
            "coefficient and Moebius tables belong to different fields".into(),
        ));
    }
    if x.is_nan() {
        return Err(Error::InvalidArgument("x must not be NaN".into()));
    }
    let limit = coef.limit().min(moeb.limit());
    if x > limit as f64 {
        return Err(Error::OutOfRange {
            what: "x",
            value: x,
            limit: limit as f64,
        });
    }
    if x < 1.0 {
        return Ok(BigInt::zero());
    }
    let xi = x.floor() as u64;
    let mut total = BigInt::zero();
    let mut n = 1u64;
    loop {
        let ns = match checked_pow_u128(n, s) {
            Some(v) if v <= xi as u128 => v as u64,
            _ => break,
        };
        let b = moeb.b(n);
        if b != 0 {
            total += power_to_bigint(coef.j_at(xi / ns), m) * b;
        }
        n += 1;
    }
    Ok(total)
}

fn checked_pow_u128(n: u64, s: u32) -> Option<u128> {
    let mut v: u128 = 1;
    for _ in 0..s {
        v = v.checked_mul(n as u128)?;
    }
    Some(v)
}

/// `j^m` as a big integer; stays in machine words whenever the result fits.
fn power_to_bigint(j: u64, m: u32) -> BigInt {
    let bits = 64 - j.leading_zeros() as u64;
    if bits * m as u64 <= 126 {
        let mut v: u128 = 1;
        for _ in 0..m {
            v *= j as u128;
        }
        BigInt::from(v)
    } else {
        BigInt::from(j).pow(m)
    }
}

/// Error term `E = count - (cx)^m / zeta_K(ms)`.
///
/// The count stays exact; the main term mixes transcendental constants, so
/// the difference is reported as a double. Requires `m*s >= 2`.
pub fn error_term(field: &FieldSpec, m: u32, s: u32, x: f64, count: &BigInt) -> Result<f64> {
    let ms = m.saturating_mul(s);
    if ms < 2 {
        return Err(Error::UndefinedMainTerm { ms });
    }
    let zk = zeta_k_at(field, ms as f64, 1e-10)?;
    let main = (field.residue_c * x).powi(m as i32) / zk.value;
    let c = count
        .to_f64()
        .ok_or_else(|| Error::InvalidArgument("count not representable".into()))?;
    Ok(c - main)
}

/// Evaluate a whole series on the geometric grid `x_min * ratio^k <= x_max`.
///
/// Grid points are independent and evaluated in parallel; output order is by
/// grid index, so results do not depend on the worker count.
pub fn count_series(
    coef: &CoefficientTable,
    moeb: &MoebiusTable,
    m: u32,
    s: u32,
    x_min: f64,
    x_max: f64,
    ratio: f64,
) -> Result<CountSeries> {
    if ratio.is_nan() || ratio <= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "grid ratio must exceed 1, got {ratio}"
        )));
    }
    if x_min.is_nan() || x_max.is_nan() || x_min < 1.0 || x_max < x_min {
        return Err(Error::InvalidArgument(
            "need 1 <= x_min <= x_max for a count grid".into(),
        ));
    }
    let mut xs = Vec::new();
    let mut k = 0i32;
    loop {
        let x = x_min * ratio.powi(k);
        if x > x_max * (1.0 + 1e-12) {
            break;
        }
        xs.push(x);
        k += 1;
    }
    let counts: Vec<BigInt> = xs
        .par_iter()
        .map(|&x| moebius_power_sum(coef, moeb, m, s, x))
        .collect::<Result<_>>()?;

    let ms = m.saturating_mul(s);
    let (main_terms, errors) = if ms >= 2 {
        let zk = zeta_k_at(&coef.field, ms as f64, 1e-10)?;
        let c = coef.field.residue_c;
        let mains: Vec<f64> = xs
            .iter()
            .map(|&x| (c * x).powi(m as i32) / zk.value)
            .collect();
        let errs = counts
            .iter()
            .zip(&mains)
            .map(|(v, &mt)| v.to_f64().unwrap_or(f64::INFINITY) - mt)
            .collect();
        (mains, errs)
    } else {
        (vec![f64::NAN; xs.len()], vec![f64::NAN; xs.len()])
    };

    Ok(CountSeries {
        field: coef.field,
        m,
        s,
        xs,
        counts,
        main_terms,
        errors,
    })
}

/// Enumerate every ideal of norm at most `limit` as an exponent vector over
/// prime-ideal labels. Oracle-scale only (`limit <= 10^4`).
pub fn enumerate_ideals(field: &FieldSpec, limit: u64) -> Result<IdealList> {
    if limit < 1 {
        return Err(Error::InvalidArgument("limit must be >= 1".into()));
    }
    if limit > ORACLE_NORM_CAP {
        return Err(Error::Capacity {
            what: "ideal enumeration",
            requested: limit,
            budget: ORACLE_NORM_CAP,
        });
    }

    let mut labels = Vec::new();
    for p in small_primes(limit) {
        if field.is_rational() {
            labels.push(PrimeIdeal {
                p,
                index: 0,
                residue_degree: 1,
                norm: p,
            });
            continue;
        }
        match splitting_type(field, p)? {
            SplittingType::Split => {
                for index in 0..2u8 {
                    labels.push(PrimeIdeal {
                        p,
                        index,
                        residue_degree: 1,
                        norm: p,
                    });
                }
            }
            SplittingType::Inert => {
                if p * p <= limit {
                    labels.push(PrimeIdeal {
                        p,
                        index: 0,
                        residue_degree: 2,
                        norm: p * p,
                    });
                }
            }
            SplittingType::Ramified => {
                labels.push(PrimeIdeal {
                    p,
                    index: 0,
                    residue_degree: 1,
                    norm: p,
                });
            }
        }
    }
    labels.sort_by_key(|l| (l.norm, l.p, l.index));

    let mut ideals = Vec::new();
    let mut factors = Vec::new();
    assemble(&labels, 0, 1, &mut factors, limit, &mut ideals);
    ideals.sort_by(|a, b| a.norm.cmp(&b.norm).then_with(|| a.factors.cmp(&b.factors)));

    Ok(IdealList {
        field: *field,
        limit,
        labels,
        ideals,
    })
}

fn small_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut is_comp = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !is_comp[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= n {
                is_comp[m] = true;
                m += p;
            }
        }
    }
    primes
}

fn assemble(
    labels: &[PrimeIdeal],
    start: usize,
    norm: u64,
    factors: &mut Vec<(u32, u32)>,
    limit: u64,
    out: &mut Vec<Ideal>,
) {
    out.push(Ideal {
        norm,
        factors: factors.clone(),
    });
    for i in start..labels.len() {
        let ln = labels[i].norm;
        if norm > limit / ln {
            break; // labels ascend by norm, nothing further fits
        }
        let mut nn = norm;
        let mut e = 0u32;
        loop {
            match nn.checked_mul(ln) {
                Some(v) if v <= limit => {
                    nn = v;
                    e += 1;
                }
                _ => break,
            }
            factors.push((i as u32, e));
            assemble(labels, i + 1, nn, factors, limit, out);
            factors.pop();
        }
    }
}

/// Histogram of ordered m-tuples of ideals by (max norm, gcd depth), where
/// the gcd depth is the largest exponent in the per-label minimum of the
/// tuple's factorizations. A tuple is relatively s-prime iff its depth < s.
#[derive(Debug, Clone)]
pub struct TupleProfile {
    pub limit: u64,
    pub m: u32,
    hist: Vec<[u64; MAX_GCD_DEPTH]>,
}

impl TupleProfile {
    /// Count tuples with every norm at most `x` that are relatively s-prime.
    pub fn count(&self, s: u32, x: u64) -> u64 {
        let top = (x.min(self.limit)) as usize;
        let depth = (s as usize).min(MAX_GCD_DEPTH);
        self.hist[..=top]
            .iter()
            .map(|row| row[..depth].iter().sum::<u64>())
            .sum()
    }
}

/// Enumerate all ordered m-tuples from the list and histogram them.
pub fn tuple_profile(list: &IdealList, m: u32) -> Result<TupleProfile> {
    if m == 0 {
        return Err(Error::InvalidArgument("tuple length m must be >= 1".into()));
    }
    let tuples = (list.ideals.len() as u128).pow(m);
    if tuples > ORACLE_TUPLE_BUDGET {
        return Err(Error::Capacity {
            what: "tuple enumeration",
            requested: tuples.min(u64::MAX as u128) as u64,
            budget: ORACLE_TUPLE_BUDGET as u64,
        });
    }
    let mut hist = vec![[0u64; MAX_GCD_DEPTH]; list.limit as usize + 1];
    for first in &list.ideals {
        profile_rec(&list.ideals, m - 1, &first.factors, first.norm, &mut hist);
    }
    Ok(TupleProfile {
        limit: list.limit,
        m,
        hist,
    })
}

fn profile_rec(
    ideals: &[Ideal],
    remaining: u32,
    gcd: &[(u32, u32)],
    max_norm: u64,
    hist: &mut [[u64; MAX_GCD_DEPTH]],
) {
    if remaining == 0 {
        let depth = gcd.iter().map(|&(_, e)| e).max().unwrap_or(0) as usize;
        hist[max_norm as usize][depth.min(MAX_GCD_DEPTH - 1)] += 1;
        return;
    }
    if gcd.is_empty() {
        // Coprime already; only the running max norm can change.
        for id in ideals {
            profile_rec(ideals, remaining - 1, gcd, max_norm.max(id.norm), hist);
        }
        return;
    }
    for id in ideals {
        let meet = intersect_factors(gcd, &id.factors);
        profile_rec(ideals, remaining - 1, &meet, max_norm.max(id.norm), hist);
    }
}

fn intersect_factors(a: &[(u32, u32)], b: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1.min(b[j].1)));
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Direct enumerative count of relatively s-prime ordered m-tuples with all
/// norms at most `limit`. This is the oracle the formula route is checked
/// against; it never touches the Moebius machinery.
pub fn brute_force_count(field: &FieldSpec, m: u32, s: u32, limit: u64) -> Result<u64> {
    if s == 0 {
        return Err(Error::InvalidArgument(
            "primality order s must be >= 1".into(),
        ));
    }
    let list = enumerate_ideals(field, limit)?;
    let profile = tuple_profile(&list, m)?;
    Ok(profile.count(s, limit))
}
