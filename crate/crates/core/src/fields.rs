//! Number fields of degree at most 2: invariants, the quadratic character,
//! and the residue of the field zeta function at s = 1.
//!
//! A field is selected by a squarefree integer `d` (`0` is the sentinel for
//! the rational field). Discriminants are always derived, never input. The
//! residue constant `c` is computed as `L(1, chi_D)` by summing the character
//! series in blocks of one full period: each block's character values sum to
//! zero, so the block tail admits a second-order expansion with an explicit
//! remainder, which is what terminates the sum at a rigorous error bound
//! instead of a heuristic one.

use serde::Serialize;

use crate::error::{Error, Result};

/// Default tolerance for constants that feed main terms.
pub const RESIDUE_TOL: f64 = 1e-10;

/// Term budget for the residue computation before giving up.
const RESIDUE_TERM_BUDGET: u64 = 200_000_000;

/// A number field of degree 1 or 2 with its arithmetic invariants.
///
/// Immutable after construction; all operations on it are pure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSpec {
    /// Squarefree selector; 0 means the rational field.
    pub d: i64,
    /// Fundamental discriminant (1 for the rational field).
    pub disc: i64,
    /// Field degree over the rationals.
    pub degree: u32,
    /// Number of real embeddings.
    pub r1: u32,
    /// Number of complex-conjugate embedding pairs.
    pub r2: u32,
    /// Number of roots of unity in the unit group.
    pub w: u32,
    /// Residue of the field zeta function at s = 1.
    pub residue_c: f64,
}

impl FieldSpec {
    pub fn is_rational(&self) -> bool {
        self.degree == 1
    }
}

/// How a rational prime decomposes in a quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplittingType {
    /// Two distinct prime ideals of norm p.
    Split,
    /// One prime ideal of norm p^2.
    Inert,
    /// One prime ideal of norm p, whose square is (p).
    Ramified,
}

/// Build the field selected by squarefree `d` (0 for the rationals).
///
/// The residue constant is computed to within [`RESIDUE_TOL`].
pub fn make_field(d: i64) -> Result<FieldSpec> {
    if d == 0 {
        return Ok(FieldSpec {
            d: 0,
            disc: 1,
            degree: 1,
            r1: 1,
            r2: 0,
            w: 2,
            residue_c: 1.0,
        });
    }
    if d == 1 {
        return Err(Error::InvalidField {
            d,
            reason: "d = 1 does not define a quadratic field",
        });
    }
    if !is_squarefree(d) {
        return Err(Error::InvalidField {
            d,
            reason: "d must be squarefree",
        });
    }
    let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
    let (r1, r2) = if d < 0 { (0, 1) } else { (2, 0) };
    let w = match d {
        -1 => 4,
        -3 => 6,
        _ => 2,
    };
    let residue_c = residue_c_for_disc(disc, RESIDUE_TOL)?.0;
    Ok(FieldSpec {
        d,
        disc,
        degree: 2,
        r1,
        r2,
        w,
        residue_c,
    })
}

fn is_squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Kronecker symbol `(disc / n)` for a fundamental discriminant `disc`
/// (or 1 for the rational field) and `n >= 1`.
///
/// Completely multiplicative in `n`, and periodic with period `|disc|`.
pub fn kronecker(disc: i64, n: u64) -> i32 {
    debug_assert!(n >= 1);
    let v2 = n.trailing_zeros();
    let odd = n >> v2;
    let mut sign = 1i32;
    if v2 > 0 {
        // (disc/2): 0 for even disc, +1 for disc = +-1 mod 8, -1 for +-3 mod 8
        let at_two = match disc.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => return 0,
        };
        if v2 % 2 == 1 {
            sign = at_two;
        }
    }
    sign * jacobi_top(disc, odd)
}

/// Jacobi symbol `(a / m)` for odd `m >= 1`; `a` is reduced mod `m` first.
fn jacobi_top(a: i64, m: u64) -> i32 {
    debug_assert!(m % 2 == 1);
    if m == 1 {
        return 1;
    }
    let mut a = a.rem_euclid(m as i64) as u64;
    let mut m = m;
    let mut t = 1i32;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            t = -t;
        }
        a %= m;
    }
    if m == 1 {
        t
    } else {
        0
    }
}

/// Decomposition of the rational prime `p` in a quadratic field.
///
/// `p` is assumed prime; this is not re-verified.
pub fn splitting_type(field: &FieldSpec, p: u64) -> Result<SplittingType> {
    if field.degree != 2 {
        return Err(Error::Unsupported(
            "splitting type is defined only for quadratic fields",
        ));
    }
    Ok(match kronecker(field.disc, p) {
        1 => SplittingType::Split,
        -1 => SplittingType::Inert,
        _ => SplittingType::Ramified,
    })
}

/// Residue of the field zeta function at s = 1, to within `tol`.
///
/// For quadratic fields this equals `L(1, chi_disc)`; for the rationals it
/// is exactly 1.
pub fn residue_c(field: &FieldSpec, tol: f64) -> Result<f64> {
    if tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if field.is_rational() {
        return Ok(1.0);
    }
    residue_c_for_disc(field.disc, tol).map(|(v, _)| v)
}

/// `L(1, chi_disc)` with a rigorous error bound. Returns `(value, bound)`.
///
/// Sums `J` full periods directly, then corrects with the first two moments
/// of the character: over block `j` the term `1/(jq+r)` expands as
/// `1/(jq) - r/(jq)^2 + r^2/(jq)^3 - r^3/((jq)^3 (jq+r))`, and the leading
/// `1/(jq)` piece dies against the zero block sum. The remainder per block is
/// at most `1/j^4`, so `J` is chosen from `tol` directly.
fn residue_c_for_disc(disc: i64, tol: f64) -> Result<(f64, f64)> {
    let q = disc.unsigned_abs();
    debug_assert!(q > 1);
    let chi: Vec<i32> = (0..q)
        .map(|r| if r == 0 { 0 } else { kronecker(disc, r) })
        .collect();

    // First and second moments over one period.
    let mut a1 = 0.0f64;
    let mut a2 = 0.0f64;
    for r in 1..=q {
        let c = chi[(r % q) as usize] as f64;
        a1 += c * r as f64;
        a2 += c * (r as f64) * (r as f64);
    }

    // Truncation: sum of |rho_j| for j >= J is at most (J-1)^{-3}/3.
    let j_target = ((2.0 / (3.0 * tol)).cbrt().ceil() as u64 + 2).max(8);
    let j_blocks = j_target.min(RESIDUE_TERM_BUDGET / q.max(1));
    let n_terms = j_blocks * q;

    // Direct part, compensated.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for n in 1..=n_terms {
        let c = chi[(n % q) as usize];
        if c != 0 {
            let term = c as f64 / n as f64;
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }

    let jf = j_blocks as f64;
    let qf = q as f64;
    // Euler-Maclaurin tails of sum_{j>=J} j^{-2} and j^{-3}; remainders are
    // bounded by the first omitted term.
    let s2 =
        1.0 / jf + 1.0 / (2.0 * jf * jf) + 1.0 / (6.0 * jf.powi(3)) - 1.0 / (30.0 * jf.powi(5));
    let s2_rem = 1.0 / (42.0 * jf.powi(7));
    let s3 = 1.0 / (2.0 * jf * jf) + 1.0 / (2.0 * jf.powi(3)) + 1.0 / (4.0 * jf.powi(4))
        - 1.0 / (12.0 * jf.powi(6));
    let s3_rem = 1.0 / (12.0 * jf.powi(8));

    let value = sum - (a1 / (qf * qf)) * s2 + (a2 / qf.powi(3)) * s3;
    let bound = 1.0 / (3.0 * (jf - 1.0).powi(3))
        + (a1.abs() / (qf * qf)) * s2_rem
        + (a2.abs() / qf.powi(3)) * s3_rem
        + 1e-14;

    if bound > tol {
        return Err(Error::NumericFailure {
            what: "L(1, chi) block summation",
            partial: value,
            achieved: bound,
            target: tol,
        });
    }
    Ok((value, bound))
}

/// Closed-form residue constants from the class number formula,
/// `c = 2^r1 (2 pi)^r2 h R / (w sqrt(|disc|))`, for the four fields with
/// known class number and regulator. Kept as an independent cross-check of
/// the character-sum route.
pub fn class_number_formula_c(d: i64) -> Option<f64> {
    use std::f64::consts::PI;
    // (d, h, R, w, |disc|)
    let (h, reg, w, abs_disc, r1, r2): (f64, f64, f64, f64, u32, u32) = match d {
        0 => return Some(1.0),
        -1 => (1.0, 1.0, 4.0, 4.0, 0u32, 1u32),
        -3 => (1.0, 1.0, 6.0, 3.0, 0, 1),
        2 => (1.0, (1.0 + 2.0f64.sqrt()).ln(), 2.0, 8.0, 2, 0),
        _ => return None,
    };
    let num = 2.0f64.powi(r1 as i32) * (2.0 * PI).powi(r2 as i32) * h * reg;
    Some(num / (w * abs_disc.sqrt()))
}
