//! Numerical toolkit around the transfer function `G(s) = 1/((s-1) zeta(s))`.
//!
//! The crate evaluates `G` two independent ways and lets them be compared:
//!
//! * **Frequency domain** ([`zeta`]): direct evaluation of `zeta(s)` and of the
//!   geometric-like expansion `G(s) = sum_k (1/s) Q(s)^k` with
//!   `Q(s) = 1 - ((s-1)/s) zeta(s)`, which converges on the region
//!   `A = { |Q(s)| < 1 }`.
//! * **Time domain** ([`impulse`]): partial sums of the impulse response
//!   `g(t)` assembled from Piltz divisor numbers ([`divisor`]) and Laguerre
//!   polynomials ([`laguerre`]), valid on `0 < t < ln(N+1)`.
//!
//! The [`explicit`] module provides the classical reference objects (Chebyshev
//! psi by sieve, critical-line zeros, the von Mangoldt explicit formula), and
//! [`growth`] measures `|g(t)| / (t^k e^{t/2})` growth ratios and runs a
//! numerical Laplace-transform consistency probe.
//!
//! All real/complex arithmetic is multiprecision (MPFR via `rug`) under a
//! shared [`numerics::PrecisionContext`]; scans are data-parallel with `rayon`
//! when the default `parallel` feature is enabled, and every parallel path has
//! a sequential twin that produces bit-identical output.

pub mod divisor;
pub(crate) mod exec;
pub mod explicit;
pub mod growth;
pub mod impulse;
pub mod laguerre;
pub mod numerics;
pub mod zeta;

pub use numerics::PrecisionContext;
