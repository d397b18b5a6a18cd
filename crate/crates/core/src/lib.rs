//! Counting machinery for visible (and relatively s-prime) lattice points
//! over the rationals and quadratic number fields.
//!
//! The toolkit is organized around two dense coefficient tables per field:
//! `a[n]`, the number of ideals of norm exactly `n`, and its Dirichlet
//! inverse `b[n]`. Exact tuple counts `V_m^s(x)`, their error terms against
//! `(cx)^m / zeta_K(ms)`, the Gauss circle identity for `Q(i)`, truncated
//! Perron reconstructions of the ideal counter `j_K`, and log-log exponent
//! fits of error magnitudes are all built on top of those tables plus a
//! small set of rigorously tail-bounded numeric routines (`L(s, chi)`,
//! `zeta_K(s)`).
//!
//! Counts are exact big integers throughout; floating point only enters
//! where a transcendental constant does.

pub mod analysis;
pub mod circle;
pub mod counts;
pub mod error;
pub mod fields;
pub mod perron;
pub mod sieve;
pub mod zeta;

pub use error::{Error, Result};
pub use fields::FieldSpec;
