//! Log-log exponent fitting of error-term series, and report assembly that
//! attaches the applicable theoretical slope bounds.

use serde::Serialize;

use crate::circle::CircleScan;
use crate::counts::CountSeries;
use crate::error::{Error, Result};
use crate::fields::FieldSpec;

/// Best known exponent for the circle residual, 131/416.
pub const HUXLEY_EXPONENT: f64 = 131.0 / 416.0;

/// Lower edge of the circle exponent window.
pub const CIRCLE_LOWER_EXPONENT: f64 = 0.25;

/// Ordinary least squares fit of `log |v|` against `log x`.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentFit {
    /// Fitted growth exponent.
    pub slope: f64,
    /// Intercept in natural-log coordinates.
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: u32,
    /// Points discarded because `v = 0` (log undefined there).
    pub dropped_zeros: u32,
}

/// Slope bounds applicable to a fitted series.
#[derive(Debug, Clone, Serialize)]
pub struct BoundSet {
    /// Conditional exponent (m - 1/2 shape; 3/4 for the m=1, s=2 case).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditional: Option<f64>,
    /// Unconditional exponent m - 1/n (n the field degree), m >= 2.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sittinger: Option<f64>,
    /// Exponent window tied to the circle problem (Gaussian field only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<(f64, f64)>,
}

/// Report document emitted as JSON.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    pub n_points: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub fit: ExponentFit,
    pub bounds: BoundSet,
}

/// What a report describes.
pub enum ReportSource<'a> {
    Counts(&'a CountSeries),
    Circle(&'a CircleScan),
}

/// Least-squares slope of `log |v|` vs `log x`.
///
/// Zero values are dropped (and counted); at least 8 surviving points are
/// required. The xs must be strictly increasing and positive.
pub fn fit_exponent(series: &[(f64, f64)]) -> Result<ExponentFit> {
    if series.iter().any(|&(x, v)| x.is_nan() || v.is_nan()) {
        return Err(Error::InvalidArgument("series contains NaN".into()));
    }
    for pair in series.windows(2) {
        if pair[1].0 <= pair[0].0 {
            return Err(Error::InvalidArgument(
                "series xs must be strictly increasing".into(),
            ));
        }
    }
    if series.first().is_some_and(|&(x, _)| x <= 0.0) {
        return Err(Error::InvalidArgument(
            "series xs must be positive for a log-log fit".into(),
        ));
    }
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|&&(_, v)| v != 0.0)
        .map(|&(x, v)| (x.ln(), v.abs().ln()))
        .collect();
    let dropped_zeros = (series.len() - pts.len()) as u32;
    let n = pts.len();
    if n < 8 {
        return Err(Error::FitRefused(format!(
            "{n} usable points after dropping {dropped_zeros} zeros; need at least 8"
        )));
    }

    let nf = n as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in &pts {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res = syy - slope * sxy;
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(ExponentFit {
        slope,
        intercept,
        r_squared,
        n_points: n as u32,
        dropped_zeros,
    })
}

/// Assemble the JSON report for a fitted series, attaching the bounds that
/// apply to its field and parameters.
pub fn make_report(source: &ReportSource<'_>, fit: &ExponentFit) -> Report {
    match source {
        ReportSource::Counts(series) => Report {
            kind: if series.s == 1 { "visible" } else { "sprime" }.to_string(),
            d: Some(series.field.d),
            m: Some(series.m),
            s: Some(series.s),
            n_points: series.xs.len(),
            x_min: series.xs.first().copied().unwrap_or(f64::NAN),
            x_max: series.xs.last().copied().unwrap_or(f64::NAN),
            fit: fit.clone(),
            bounds: count_bounds(&series.field, series.m, series.s),
        },
        ReportSource::Circle(scan) => Report {
            kind: "circle".to_string(),
            d: None,
            m: None,
            s: None,
            n_points: scan.r_values.len(),
            x_min: scan.r_values.first().copied().unwrap_or(f64::NAN),
            x_max: scan.r_values.last().copied().unwrap_or(f64::NAN),
            fit: fit.clone(),
            bounds: BoundSet {
                conditional: None,
                sittinger: None,
                window: Some((CIRCLE_LOWER_EXPONENT, HUXLEY_EXPONENT)),
            },
        },
    }
}

fn count_bounds(field: &FieldSpec, m: u32, s: u32) -> BoundSet {
    let mf = m as f64;
    let conditional = if m.saturating_mul(s) >= 2 {
        Some(if m == 1 && s == 2 { 0.75 } else { mf - 0.5 })
    } else {
        None
    };
    let sittinger = if s == 1 && m >= 2 {
        Some(mf - 1.0 / field.degree as f64)
    } else {
        None
    };
    let window = if field.d == -1 {
        if m >= 2 {
            Some((mf - 1.0 + CIRCLE_LOWER_EXPONENT, mf - 1.0 + HUXLEY_EXPONENT))
        } else if s >= 5 {
            Some((CIRCLE_LOWER_EXPONENT, HUXLEY_EXPONENT))
        } else {
            // m = 1 with s in {2, 3, 4}: the stated bound carries an
            // unresolved parameter, so no window is asserted.
            None
        }
    } else {
        None
    };
    BoundSet {
        conditional,
        sittinger,
        window,
    }
}
