//! Dense coefficient tables: `a[n]` = number of ideals of norm `n`, the
//! cumulative counter `j_K`, and the Dirichlet inverse `b[n]`.
//!
//! For a quadratic field, `a[n] = sum_{e|n} chi(e)` with `chi` the Kronecker
//! character of the discriminant, so the table is built by a divisor-style
//! sieve in `O(X log X)` additions. Above [`SEGMENT_THRESHOLD`] the index
//! range is processed in fixed-size segments to bound the working set;
//! segments are independent, so the result is bit-identical for any worker
//! count. `b` is obtained by Dirichlet inversion of `a`; an independent
//! construction from local Euler factors is kept alongside it as a
//! cross-check (the two must agree exactly).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{kronecker, splitting_type, FieldSpec, SplittingType};

/// Segment length for the divisor sieve.
pub const SEGMENT_THRESHOLD: u64 = 1 << 22;

/// Hard cap on table size (memory budget: ~16 bytes per entry across a/j/b).
pub const TABLE_CAPACITY: u64 = 100_000_000;

/// `a[n]` and its cumulative sum for one field, indexed 1..=limit.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    pub field: FieldSpec,
    a: Vec<u32>,
    j_cum: Vec<u64>,
}

/// Norm-aggregated Moebius coefficients `b[n]`, indexed 1..=limit.
#[derive(Debug, Clone)]
pub struct MoebiusTable {
    pub field: FieldSpec,
    b: Vec<i32>,
}

impl CoefficientTable {
    pub fn limit(&self) -> u64 {
        (self.a.len() - 1) as u64
    }

    /// Number of ideals of norm exactly `n` (1 <= n <= limit).
    pub fn a(&self, n: u64) -> u32 {
        self.a[n as usize]
    }

    /// Full coefficient row; entry 0 is a placeholder.
    pub fn a_row(&self) -> &[u32] {
        &self.a
    }

    /// Number of ideals of norm at most `x`.
    ///
    /// Constant on `[n, n+1)`; zero below 1. Errors if `x` exceeds the limit.
    pub fn j(&self, x: f64) -> Result<u64> {
        if x.is_nan() {
            return Err(Error::InvalidArgument("j_K of NaN".into()));
        }
        if x > self.limit() as f64 {
            return Err(Error::OutOfRange {
                what: "x",
                value: x,
                limit: self.limit() as f64,
            });
        }
        if x < 1.0 {
            return Ok(0);
        }
        Ok(self.j_cum[x.floor() as usize])
    }

    /// Integer-indexed counter, `n <= limit`.
    pub fn j_at(&self, n: u64) -> u64 {
        self.j_cum[n as usize]
    }
}

impl MoebiusTable {
    pub fn limit(&self) -> u64 {
        (self.b.len() - 1) as u64
    }

    pub fn b(&self, n: u64) -> i32 {
        self.b[n as usize]
    }

    pub fn b_row(&self) -> &[i32] {
        &self.b
    }
}

fn check_limit(limit: u64) -> Result<()> {
    if limit < 1 {
        return Err(Error::InvalidArgument(
            "table limit must be at least 1".into(),
        ));
    }
    if limit > TABLE_CAPACITY {
        return Err(Error::Capacity {
            what: "coefficient table",
            requested: limit,
            budget: TABLE_CAPACITY,
        });
    }
    Ok(())
}

/// Build `a[n]` for `1 <= n <= limit` together with its cumulative sum.
pub fn build_coefficients(field: &FieldSpec, limit: u64) -> Result<CoefficientTable> {
    build_coefficients_seg(field, limit, SEGMENT_THRESHOLD)
}

pub(crate) fn build_coefficients_seg(
    field: &FieldSpec,
    limit: u64,
    seg_len: u64,
) -> Result<CoefficientTable> {
    check_limit(limit)?;
    let x = limit as usize;
    let mut a = vec![0u32; x + 1];

    if field.is_rational() {
        for entry in a.iter_mut().skip(1) {
            *entry = 1;
        }
    } else {
        let disc = field.disc;
        let q = disc.unsigned_abs();
        // chi(e) by residue table when the period is small, direct otherwise.
        let chi_table: Option<Vec<i32>> = if q <= 2_000_000 {
            Some(
                (0..q)
                    .map(|r| if r == 0 { 0 } else { kronecker(disc, r) })
                    .collect(),
            )
        } else {
            None
        };
        let chi = |e: u64| -> i32 {
            match &chi_table {
                Some(t) => t[(e % q) as usize],
                None => kronecker(disc, e),
            }
        };

        let seg = seg_len.max(1) as usize;
        a[1..].par_chunks_mut(seg).enumerate().for_each(|(k, out)| {
            let lo = (k * seg + 1) as u64; // value of n at out[0]
            let hi = lo + out.len() as u64 - 1;
            let mut acc = vec![0i32; out.len()];
            for e in 1..=hi {
                let c = chi(e);
                if c == 0 {
                    continue;
                }
                let mut n = lo.div_ceil(e) * e;
                while n <= hi {
                    acc[(n - lo) as usize] += c;
                    n += e;
                }
            }
            for (dst, &v) in out.iter_mut().zip(acc.iter()) {
                debug_assert!(v >= 0, "ideal count must be non-negative");
                *dst = v as u32;
            }
        });
    }

    let mut j_cum = vec![0u64; x + 1];
    for n in 1..=x {
        j_cum[n] = j_cum[n - 1] + a[n] as u64;
    }
    Ok(CoefficientTable {
        field: *field,
        a,
        j_cum,
    })
}

/// Dirichlet inverse of the coefficient row: `b[1] = 1`,
/// `b[n] = -sum_{d|n, d<n} b[d] a[n/d]`.
pub fn build_moebius(coef: &CoefficientTable) -> MoebiusTable {
    let x = coef.limit() as usize;
    let a = &coef.a;
    let mut b = vec![0i32; x + 1];
    b[1] = 1;
    // Forward elimination: once b[d] is final, push its contribution to all
    // proper multiples. Products stay far below i32 range (divisor-bounded).
    for d in 1..=x {
        let bd = b[d];
        if bd == 0 {
            continue;
        }
        let mut m = 2 * d;
        while m <= x {
            b[m] -= bd * a[m / d] as i32;
            m += d;
        }
    }
    MoebiusTable {
        field: coef.field,
        b,
    }
}

/// `b[p^k]` read off the local Euler factor of `1/zeta_K` at `p`
/// (split: `(1-u)^2`, inert: `(1-u^2)`, ramified and rational: `(1-u)`,
/// with `u` marking norm `p`).
fn local_moebius(field: &FieldSpec, p: u64, k: u32) -> i32 {
    if field.is_rational() {
        return if k == 1 { -1 } else { 0 };
    }
    match splitting_type(field, p).expect("quadratic field") {
        SplittingType::Split => match k {
            1 => -2,
            2 => 1,
            _ => 0,
        },
        SplittingType::Inert => match k {
            2 => -1,
            _ => 0,
        },
        SplittingType::Ramified => match k {
            1 => -1,
            _ => 0,
        },
    }
}

/// Independent construction of `b` by multiplicative assembly over rational
/// primes. Must agree with [`build_moebius`] entry for entry; kept as the
/// second route for catching sieve bugs.
pub fn build_moebius_by_factorization(field: &FieldSpec, limit: u64) -> Result<MoebiusTable> {
    check_limit(limit)?;
    let x = limit as usize;

    // Smallest prime factor sieve.
    let mut spf = vec![0u32; x + 1];
    for i in 2..=x {
        if spf[i] == 0 {
            let mut m = i;
            while m <= x {
                if spf[m] == 0 {
                    spf[m] = i as u32;
                }
                m += i;
            }
        }
    }

    let mut b = vec![0i32; x + 1];
    if x >= 1 {
        b[1] = 1;
    }
    for n in 2..=x {
        let p = spf[n] as u64;
        let mut rest = n as u64;
        let mut k = 0u32;
        while rest.is_multiple_of(p) {
            rest /= p;
            k += 1;
        }
        b[n] = local_moebius(field, p, k) * b[rest as usize];
    }
    Ok(MoebiusTable { field: *field, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;

    fn tables(d: i64, x: u64) -> (CoefficientTable, MoebiusTable) {
        let f = make_field(d).unwrap();
        let coef = build_coefficients(&f, x).unwrap();
        let moeb = build_moebius(&coef);
        (coef, moeb)
    }

    #[test]
    fn rational_coefficients_are_all_ones() {
        let (coef, _) = tables(0, 10);
        assert_eq!(&coef.a_row()[1..], &[1u32; 10]);
    }

    #[test]
    fn gaussian_coefficient_row() {
        let (coef, _) = tables(-1, 25);
        assert_eq!(&coef.a_row()[1..11], &[1, 1, 0, 1, 2, 0, 0, 1, 1, 2],);
        assert_eq!(coef.a(25), 3); // (2+i)^2, (2-i)^2, (5)
    }

    #[test]
    fn coefficients_multiplicative_on_coprime_parts() {
        for d in [0i64, -1, -3, 2] {
            let (coef, _) = tables(d, 10_000);
            for u in 1..=100u64 {
                for v in 1..=(10_000 / u) {
                    if gcd(u, v) == 1 {
                        assert_eq!(coef.a(u * v), coef.a(u) * coef.a(v), "d={d} u={u} v={v}");
                    }
                }
            }
        }
    }

    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let t = b;
            b = a % b;
            a = t;
        }
        a
    }

    #[test]
    fn eisenstein_coefficients_match_norm_form_counts() {
        // x^2 + xy + y^2 represents n exactly 6 a[n] times (unit group
        // order 6, class number 1), independently of the character sieve.
        let (coef, _) = tables(-3, 10_000);
        let mut reps = vec![0u32; 10_001];
        // x^2 + xy + y^2 = (x + y/2)^2 + 3y^2/4, so |x|, |y| <= sqrt(4N/3).
        let range = 120i64;
        for x in -range..=range {
            for y in -range..=range {
                let n = x * x + x * y + y * y;
                if (1..=10_000).contains(&n) {
                    reps[n as usize] += 1;
                }
            }
        }
        for n in 1..=10_000u64 {
            assert_eq!(
                u64::from(reps[n as usize]),
                6 * u64::from(coef.a(n)),
                "n={n}"
            );
        }
    }

    #[test]
    fn j_counter_examples() {
        let (coef, _) = tables(-1, 25);
        assert_eq!(coef.j(10.0).unwrap(), 9);
        assert_eq!(coef.j(0.5).unwrap(), 0);
        let (coef_q, _) = tables(0, 10);
        assert_eq!(coef_q.j(7.9).unwrap(), 7);
        assert!(coef_q.j(11.0).is_err());
    }

    #[test]
    fn j_is_a_step_function() {
        let (coef, _) = tables(-3, 100);
        for n in 1..100u64 {
            let at_n = coef.j(n as f64).unwrap();
            assert_eq!(coef.j(n as f64 + 0.25).unwrap(), at_n);
            assert_eq!(coef.j(n as f64 + 0.999).unwrap(), at_n);
        }
    }

    #[test]
    fn cumulative_close_to_linear() {
        for d in [0i64, -1, -3, 2] {
            let (coef, _) = tables(d, 100_000);
            let c = coef.field.residue_c;
            for x in [1_000u64, 10_000, 100_000] {
                let j = coef.j_at(x) as f64;
                assert!(j <= c * x as f64 * 1.1, "d={d} x={x}: j={j}");
                assert!(j >= c * x as f64 * 0.9, "d={d} x={x}: j={j}");
            }
        }
    }

    #[test]
    fn classical_moebius_for_rationals() {
        let (_, moeb) = tables(0, 6);
        assert_eq!(&moeb.b_row()[1..], &[1, -1, -1, 0, -1, 1]);
    }

    #[test]
    fn gaussian_moebius_values() {
        let (_, moeb) = tables(-1, 10);
        let b = moeb.b_row();
        assert_eq!(b[2], -1);
        assert_eq!(b[5], -2);
        assert_eq!(b[9], -1);
        assert_eq!(b[10], 2);
        for n in [3usize, 4, 6, 7, 8] {
            assert_eq!(b[n], 0, "b[{n}]");
        }
    }

    #[test]
    fn dirichlet_inverse_identity_small() {
        for d in [0i64, -1, -3, 2] {
            let (coef, moeb) = tables(d, 10_000);
            for n in 1..=10_000u64 {
                let mut s = 0i64;
                let mut e = 1u64;
                while e * e <= n {
                    if n % e == 0 {
                        s += moeb.b(e) as i64 * coef.a(n / e) as i64;
                        if e != n / e {
                            s += moeb.b(n / e) as i64 * coef.a(e) as i64;
                        }
                    }
                    e += 1;
                }
                assert_eq!(s, i64::from(n == 1), "d={d} n={n}");
            }
        }
    }

    #[test]
    fn identity_expansion_at_25_for_gaussians() {
        let (coef, moeb) = tables(-1, 25);
        let s = moeb.b(1) as i64 * coef.a(25) as i64
            + moeb.b(5) as i64 * coef.a(5) as i64
            + moeb.b(25) as i64 * coef.a(1) as i64;
        assert_eq!(coef.a(25), 3);
        assert_eq!(moeb.b(5), -2);
        assert_eq!(moeb.b(25), 1);
        assert_eq!(s, 0);
    }

    #[test]
    fn factorization_route_local_expansions() {
        let f = make_field(-1).unwrap();
        let m = build_moebius_by_factorization(&f, 125).unwrap();
        assert_eq!((m.b(5), m.b(25), m.b(125)), (-2, 1, 0));
        assert_eq!((m.b(3), m.b(9)), (0, -1));
        assert_eq!((m.b(2), m.b(4)), (-1, 0));
    }

    #[test]
    fn moebius_routes_agree_to_a_million() {
        for d in [0i64, -1, -3, 2] {
            let (_, inv) = tables(d, 1_000_000);
            let f = make_field(d).unwrap();
            let fac = build_moebius_by_factorization(&f, 1_000_000).unwrap();
            assert_eq!(inv.b_row(), fac.b_row(), "d={d}");
        }
    }

    #[test]
    fn moebius_bounded_by_divisor_count_squared() {
        let (_, moeb) = tables(-1, 10_000);
        let x = 10_000usize;
        let mut divs = vec![0u32; x + 1];
        for e in 1..=x {
            let mut m = e;
            while m <= x {
                divs[m] += 1;
                m += e;
            }
        }
        for (n, &dn) in divs.iter().enumerate().skip(1) {
            assert!(
                (moeb.b(n as u64).unsigned_abs() as u64) <= (dn as u64).pow(2),
                "n={n}"
            );
        }
    }

    #[test]
    fn segment_length_does_not_change_results() {
        let f = make_field(-3).unwrap();
        let coarse = build_coefficients_seg(&f, 50_000, 1 << 22).unwrap();
        let fine = build_coefficients_seg(&f, 50_000, 997).unwrap();
        assert_eq!(coarse.a_row(), fine.a_row());
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let f = make_field(2).unwrap();
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| build_coefficients_seg(&f, 200_000, 4096).unwrap())
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one.a_row(), four.a_row());
        assert_eq!(one.j_at(200_000), four.j_at(200_000));
    }

    #[test]
    fn telescoping_partial_sums_are_one() {
        // sum_{n<=X} b[n] * j(X/n) counts only the unit ideal, for every X.
        for d in [0i64, -1, -3, 2] {
            let (coef, moeb) = tables(d, 2_000);
            for x in 1..=2_000u64 {
                let mut s: i64 = 0;
                for n in 1..=x {
                    s += moeb.b(n) as i64 * coef.j_at(x / n) as i64;
                }
                assert_eq!(s, 1, "d={d} X={x}");
            }
        }
    }

    #[test]
    fn capacity_and_argument_errors() {
        let f = make_field(0).unwrap();
        assert!(matches!(
            build_coefficients(&f, TABLE_CAPACITY + 1),
            Err(Error::Capacity { .. })
        ));
        assert!(build_coefficients(&f, 0).is_err());
    }
}
