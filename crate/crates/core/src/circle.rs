//! Exact lattice point counts inside circles and the identity tying them to
//! the Gaussian ideal counter.
//!
//! `N(r)` counts integer pairs with `x^2 + y^2 <= r`. Square roots are taken
//! with exact integer arithmetic throughout, so every count is exact. Since
//! the norm form of `Z[i]` is `x^2 + y^2` and the unit group has order 4,
//! `N(r) = 4 j(r) + 1` for integer `r`; the `+1` is the origin, which the
//! point set contains but the ideal count does not.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sieve::CoefficientTable;

/// Scan of circle counts and residuals `N(r) - pi*r` on a stride grid.
#[derive(Debug, Clone)]
pub struct CircleScan {
    pub r_values: Vec<f64>,
    pub counts: Vec<u64>,
    pub residuals: Vec<f64>,
}

/// Outcome of a full identity sweep `N(r) = 4 j(r) + 1` for `r <= r_max`.
#[derive(Debug, Clone, Copy)]
pub struct CircleIdentityReport {
    pub r_max: u64,
    pub radii_checked: u64,
}

/// Number of integer points with `x^2 + y^2 <= r`.
///
/// Only the integer part of `r` matters: `N(r) = N(floor(r))`.
pub fn circle_count(r: f64) -> Result<u64> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "circle radius-squared must be a non-negative finite real, got {r}"
        )));
    }
    if r >= 9.0e15 {
        return Err(Error::OutOfRange {
            what: "r",
            value: r,
            limit: 9.0e15,
        });
    }
    Ok(circle_count_int(r.floor() as u64))
}

fn circle_count_int(r: u64) -> u64 {
    let s = r.isqrt();
    // Column x = 0 once, columns +-x folded together.
    let mut total = 2 * s + 1;
    for x in 1..=s {
        total += 2 * (2 * (r - x * x).isqrt() + 1);
    }
    total
}

/// `#{(x, y) in Z^2 : x^2 + y^2 = n}` for every `n <= limit`, by direct
/// lattice enumeration. Entry 0 counts the origin.
pub fn representation_counts(limit: u64) -> Vec<u32> {
    let mut counts = vec![0u32; limit as usize + 1];
    let s = limit.isqrt();
    for x in 0..=s {
        let x2 = x * x;
        let y_max = (limit - x2).isqrt();
        for y in 0..=y_max {
            let mult = if x > 0 { 2 } else { 1 } * if y > 0 { 2 } else { 1 };
            counts[(x2 + y * y) as usize] += mult;
        }
    }
    counts
}

/// Verify `N(r) = 4 j(r) + 1` for all integer `1 <= r <= r_max` against a
/// coefficient table for the Gaussian field. Fails on the first mismatch.
pub fn check_circle_ideal_identity(
    table: &CoefficientTable,
    r_max: u64,
) -> Result<CircleIdentityReport> {
    if table.field.d != -1 {
        return Err(Error::InvalidArgument(
            "circle identity requires tables for d = -1".into(),
        ));
    }
    if r_max > table.limit() {
        return Err(Error::OutOfRange {
            what: "r_max",
            value: r_max as f64,
            limit: table.limit() as f64,
        });
    }
    let reps = representation_counts(r_max);
    let mut n_r = 0u64;
    for r in 1..=r_max {
        n_r += reps[r as usize] as u64;
        let lhs = n_r + 1; // origin
        let rhs = 4 * table.j_at(r) + 1;
        if lhs != rhs {
            return Err(Error::IdentityViolation { r, lhs, rhs });
        }
    }
    Ok(CircleIdentityReport {
        r_max,
        radii_checked: r_max,
    })
}

/// Circle counts and residuals at `r = stride, 2*stride, ..., <= r_max`.
pub fn residual_scan(r_max: u64, stride: u64) -> Result<CircleScan> {
    if r_max < 1 || stride < 1 {
        return Err(Error::InvalidArgument(
            "r_max and stride must be positive".into(),
        ));
    }
    let radii: Vec<u64> = (1..=r_max / stride).map(|k| k * stride).collect();
    let counts: Vec<u64> = radii.par_iter().map(|&r| circle_count_int(r)).collect();
    let residuals = radii
        .iter()
        .zip(&counts)
        .map(|(&r, &n)| n as f64 - std::f64::consts::PI * r as f64)
        .collect();
    Ok(CircleScan {
        r_values: radii.iter().map(|&r| r as f64).collect(),
        counts,
        residuals,
    })
}
