//! The classical reference side: Chebyshev `psi` from a prime sieve,
//! critical-line zero ordinates from sign changes of the Hardy Z function,
//! the von Mangoldt explicit formula, and the `psi(e^t) - e^t` growth probe.

use crate::exec;
use crate::numerics::{CompensatedSum, PrecisionContext};
use crate::zeta::{self, ZetaError};
use rug::ops::CompleteRound;
use rug::{Complex, Float};
use thiserror::Error;

/// Largest sieve limit (desk scale).
pub const SIEVE_MAX: u64 = 10_000_000;
/// Largest zero count served by [`find_zeros`].
pub const ZERO_COUNT_MAX: usize = 200;
/// Bracket width each zero is refined to.
pub const ZERO_BRACKET_TOL: f64 = 1e-6;
/// `psi_explicit` rejects x this close to a prime power (jump ambiguity).
pub const JUMP_GUARD: f64 = 1e-6;

const SCAN_START: f64 = 10.0;
const SCAN_STEP: f64 = 0.05;

#[derive(Debug, Error)]
pub enum ExplicitError {
    #[error("x must exceed 1, got {0}")]
    DomainX(f64),
    #[error("sieve limit {limit} exceeds the desk-scale cap {SIEVE_MAX}")]
    SieveScale { limit: u64 },
    #[error("x = {x} exceeds the sieve limit {limit}")]
    BeyondSieve { x: f64, limit: u64 },
    #[error("zero count {count} exceeds the desk-scale cap {ZERO_COUNT_MAX}")]
    ZeroCountScale { count: usize },
    #[error("zero count must be positive")]
    ZeroCountZero,
    #[error("failed to re-verify a Z sign change on [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },
    #[error("x = {0} is within {JUMP_GUARD} of the prime power {1}: psi jumps there")]
    JumpProximity(f64, u64),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
}

/// Which prime powers `psi(x)` counts.
///
/// `Inclusive` (`p^n <= x`) is the classical Chebyshev function, the one the
/// explicit formula reproduces away from jumps; `Strict` (`p^n < x`) differs
/// only at the jump points themselves and is kept for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PsiConvention {
    #[default]
    Inclusive,
    Strict,
}

/// Primes up to a fixed limit, built once and then read-only.
#[derive(Debug, Clone)]
pub struct PrimeSieve {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeSieve {
    pub fn new(limit: u64) -> Result<Self, ExplicitError> {
        if limit > SIEVE_MAX {
            return Err(ExplicitError::SieveScale { limit });
        }
        let n = limit as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for p in 2..=n {
            if !composite[p] {
                primes.push(p as u64);
                let mut q = p * p;
                while q <= n {
                    composite[q] = true;
                    q += p;
                }
            }
        }
        Ok(Self { limit, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `psi(x) = sum of ln p over prime powers up to x` under the chosen
    /// convention. Deterministic: primes ascending, compensated summation.
    pub fn psi(
        &self,
        x: f64,
        convention: PsiConvention,
        ctx: PrecisionContext,
    ) -> Result<Float, ExplicitError> {
        if !(x > 1.0) {
            return Err(ExplicitError::DomainX(x));
        }
        // integer cutoff: p^n <= x reduces to p^n <= floor(x), except that
        // the strict convention excludes x itself when x is an integer
        let mut cutoff = x.floor() as u64;
        if convention == PsiConvention::Strict && x.fract() == 0.0 {
            cutoff -= 1;
        }
        if cutoff > self.limit {
            return Err(ExplicitError::BeyondSieve {
                x,
                limit: self.limit,
            });
        }
        let w = ctx.work_bits();
        let mut acc = CompensatedSum::new(ctx);
        for &p in &self.primes {
            if p > cutoff {
                break;
            }
            let mut power = p;
            let mut multiplicity = 0u32;
            while power <= cutoff {
                multiplicity += 1;
                match power.checked_mul(p) {
                    Some(next) => power = next,
                    None => break,
                }
            }
            let term = Float::with_val(w, p).ln() * multiplicity;
            acc.add(&term);
        }
        Ok(acc.value())
    }
}

/// One-shot `psi(x)` under the inclusive convention, building a sieve of
/// exactly the needed size.
pub fn psi_sieve(x: f64, ctx: PrecisionContext) -> Result<Float, ExplicitError> {
    if !(x > 1.0) {
        return Err(ExplicitError::DomainX(x));
    }
    if x > SIEVE_MAX as f64 {
        return Err(ExplicitError::SieveScale { limit: x as u64 });
    }
    PrimeSieve::new(x.floor() as u64)?.psi(x, PsiConvention::Inclusive, ctx)
}

// ---------------------------------------------------------------------------
// Hardy Z and zero finding
// ---------------------------------------------------------------------------

/// Riemann-Siegel theta by its standard asymptotic expansion
/// `t/2 ln(t/2pi) - t/2 - pi/8 + 1/(48t)`; adequate below the 200th zero.
pub fn riemann_siegel_theta(t: f64, ctx: PrecisionContext) -> Float {
    let w = ctx.work_bits();
    let tf = Float::with_val(w, t);
    let two_pi = Float::with_val(w, rug::float::Constant::Pi) * 2u32;
    let half_t = Float::with_val(w, &tf / 2u32);
    let theta = half_t.clone() * (tf.clone() / two_pi).ln()
        - &half_t
        - Float::with_val(w, rug::float::Constant::Pi) / 8u32
        + Float::with_val(w, 48).recip() / tf;
    ctx.round(&theta)
}

/// Hardy's real-valued `Z(t) = e^(i theta(t)) zeta(1/2 + it)`, evaluated as
/// the real part of the rotated zeta value. The asymptotic theta leaves a
/// residual rotation of order 1e-6 at t >= 10, which cannot flip the sign
/// anywhere a bisection bracket lives.
pub fn hardy_z(t: f64, ctx: PrecisionContext) -> Result<Float, ExplicitError> {
    let w = ctx.work_bits();
    let s = Complex::with_val(w, (0.5, t));
    let z = zeta::zeta_at(&s, w)?;
    let theta = Float::with_val(w, riemann_siegel_theta(t, ctx));
    let (sin, cos) = theta.sin_cos(Float::new(w));
    let rotation = Complex::with_val(w, (cos, sin));
    let product = rotation * z;
    Ok(ctx.round(product.real()))
}

/// Riemann-von Mangoldt estimate of the zero count up to height `t`.
fn zero_count_estimate(t: f64) -> f64 {
    use std::f64::consts::{E, TAU};
    if t <= 2.0 * std::f64::consts::PI * E {
        return 0.0;
    }
    t / TAU * (t / (TAU * E)).ln() + 7.0 / 8.0
}

/// Ordinates of the first critical-line zeros, each refined by bisection to
/// a verified sign-change bracket narrower than [`ZERO_BRACKET_TOL`].
#[derive(Debug, Clone)]
pub struct ZeroList {
    gammas: Vec<Float>,
    brackets: Vec<(f64, f64)>,
    tolerance: f64,
    warning: Option<String>,
}

impl ZeroList {
    pub fn gammas(&self) -> &[Float] {
        &self.gammas
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    /// Verified sign-change bracket of each ordinate.
    pub fn brackets(&self) -> &[(f64, f64)] {
        &self.brackets
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Set when the sign-change count disagrees with the Riemann-von
    /// Mangoldt estimate over the scanned range; detection only, no
    /// rigorous verification is attempted.
    pub fn warning(&self) -> Option<&str> {
        self.warning.as_deref()
    }

    /// An empty list: the explicit formula then reduces to its smooth part.
    pub fn empty() -> Self {
        Self {
            gammas: Vec::new(),
            brackets: Vec::new(),
            tolerance: ZERO_BRACKET_TOL,
            warning: None,
        }
    }

    /// Keep only the first `count` ordinates.
    pub fn truncated(&self, count: usize) -> Self {
        let count = count.min(self.gammas.len());
        Self {
            gammas: self.gammas[..count].to_vec(),
            brackets: self.brackets[..count].to_vec(),
            tolerance: self.tolerance,
            warning: self.warning.clone(),
        }
    }
}

fn signs_opposite(a: &Float, b: &Float) -> bool {
    // an exact zero counts as a sign boundary
    (a.is_sign_negative() || a.is_zero()) != (b.is_sign_negative() || b.is_zero())
}

fn bisect_bracket(
    mut lo: f64,
    mut hi: f64,
    mut z_lo: Float,
    ctx: PrecisionContext,
) -> Result<(f64, f64), ExplicitError> {
    while hi - lo > ZERO_BRACKET_TOL {
        let mid = 0.5 * (lo + hi);
        let z_mid = hardy_z(mid, ctx)?;
        if signs_opposite(&z_lo, &z_mid) {
            hi = mid;
        } else {
            lo = mid;
            z_lo = z_mid;
        }
    }
    // re-verify the refined bracket
    let z_lo = hardy_z(lo, ctx)?;
    let z_hi = hardy_z(hi, ctx)?;
    if !signs_opposite(&z_lo, &z_hi) {
        return Err(ExplicitError::BracketFailure { lo, hi });
    }
    Ok((lo, hi))
}

fn find_zeros_impl(
    count: usize,
    ctx: PrecisionContext,
    sequential: bool,
) -> Result<ZeroList, ExplicitError> {
    if count == 0 {
        return Err(ExplicitError::ZeroCountZero);
    }
    if count > ZERO_COUNT_MAX {
        return Err(ExplicitError::ZeroCountScale { count });
    }

    // initial scan height from the zero-count estimate, then extend on demand
    let mut upper = 20.0f64;
    while zero_count_estimate(upper) < count as f64 + 3.0 {
        upper += 5.0;
    }

    let mut brackets: Vec<(f64, f64, Float)> = Vec::new();
    loop {
        let steps = ((upper - SCAN_START) / SCAN_STEP).ceil() as usize + 1;
        let grid: Vec<f64> = (0..steps)
            .map(|i| SCAN_START + SCAN_STEP * i as f64)
            .collect();
        let values: Vec<Result<Float, ExplicitError>> = if sequential {
            exec::map_indexed_seq(grid.len(), |i| hardy_z(grid[i], ctx))
        } else {
            exec::map_indexed(grid.len(), |i| hardy_z(grid[i], ctx))
        };
        let mut zs = Vec::with_capacity(values.len());
        for v in values {
            zs.push(v?);
        }
        brackets.clear();
        for i in 1..zs.len() {
            if signs_opposite(&zs[i - 1], &zs[i]) {
                brackets.push((grid[i - 1], grid[i], zs[i - 1].clone()));
            }
        }
        if brackets.len() >= count {
            let scanned_top = *grid.last().unwrap();
            let estimate = zero_count_estimate(scanned_top) - zero_count_estimate(SCAN_START);
            let found = brackets.len() as f64;
            let warning = if (estimate - found).abs() > 2.0 {
                Some(format!(
                    "sign-change count {found} differs from the zero-count estimate {estimate:.2} \
                     on [{SCAN_START}, {scanned_top:.2}]; a zero pair may have been missed"
                ))
            } else {
                None
            };
            brackets.truncate(count);

            let refined: Vec<Result<(f64, f64), ExplicitError>> = if sequential {
                exec::map_indexed_seq(brackets.len(), |i| {
                    let (lo, hi, ref z_lo) = brackets[i];
                    bisect_bracket(lo, hi, z_lo.clone(), ctx)
                })
            } else {
                exec::map_indexed(brackets.len(), |i| {
                    let (lo, hi, ref z_lo) = brackets[i];
                    bisect_bracket(lo, hi, z_lo.clone(), ctx)
                })
            };
            let mut final_brackets = Vec::with_capacity(count);
            let mut gammas = Vec::with_capacity(count);
            for r in refined {
                let (lo, hi) = r?;
                gammas.push(ctx.float(0.5 * (lo + hi)));
                final_brackets.push((lo, hi));
            }
            return Ok(ZeroList {
                gammas,
                brackets: final_brackets,
                tolerance: ZERO_BRACKET_TOL,
                warning,
            });
        }
        upper += 20.0;
    }
}

/// Locate the first `count` zero ordinates (count <= 200, desk scale).
pub fn find_zeros(count: usize, ctx: PrecisionContext) -> Result<ZeroList, ExplicitError> {
    find_zeros_impl(count, ctx, false)
}

/// Sequential reference path; bit-identical to [`find_zeros`].
pub fn find_zeros_sequential(
    count: usize,
    ctx: PrecisionContext,
) -> Result<ZeroList, ExplicitError> {
    find_zeros_impl(count, ctx, true)
}

// ---------------------------------------------------------------------------
// explicit formula
// ---------------------------------------------------------------------------

fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

fn is_prime_power(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let p = smallest_prime_factor(n);
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

/// Truncated von Mangoldt formula
/// `psi(x) ~ x - sum_gamma 2 Re(x^rho / rho) - ln(1 - x^-2)/2 - ln 2pi`
/// with `rho = 1/2 + i gamma`; conjugate pairs enter through the doubled
/// real part. An empty zero list yields the smooth part alone.
pub fn psi_explicit(
    x: f64,
    zeros: &ZeroList,
    ctx: PrecisionContext,
) -> Result<Float, ExplicitError> {
    if !(x > 1.0) {
        return Err(ExplicitError::DomainX(x));
    }
    let nearest = x.round();
    if (x - nearest).abs() < JUMP_GUARD && nearest >= 2.0 && is_prime_power(nearest as u64) {
        return Err(ExplicitError::JumpProximity(x, nearest as u64));
    }
    let w = ctx.work_bits();
    let xf = Float::with_val(w, x);
    let ln_x = xf.clone().ln();

    let mut oscillation = CompensatedSum::new(ctx);
    for gamma in zeros.gammas() {
        let rho = Complex::with_val(w, (&Float::with_val(w, 0.5), gamma));
        let x_pow = Complex::with_val(w, (&rho * &ln_x).complete((w, w))).exp();
        let term = x_pow / rho;
        oscillation.add(&(term.real() * &Float::with_val(w, 2)).complete(w));
    }

    let x_sq_inv = xf.clone().square().recip();
    let smooth_log = (Float::with_val(w, 1) - x_sq_inv).ln() / 2u32;
    let two_pi = Float::with_val(w, rug::float::Constant::Pi) * 2u32;
    let psi = xf - oscillation.value_work() - smooth_log - two_pi.ln();
    Ok(ctx.round(&psi))
}

/// One `x` sample of the sieve-vs-explicit-formula comparison.
#[derive(Debug, Clone)]
pub struct PsiSample {
    pub x: f64,
    pub psi_sieve: Float,
    pub psi_explicit: Float,
    pub zeros_used: usize,
    pub abs_diff: Float,
}

/// Compare `psi` by sieve and by truncated explicit formula across a grid;
/// parallel across samples.
pub fn psi_compare_scan(
    x_grid: &[f64],
    zeros: &ZeroList,
    sieve: &PrimeSieve,
    ctx: PrecisionContext,
) -> Result<Vec<PsiSample>, ExplicitError> {
    // validate up front so per-point evaluation cannot fail mid-scan
    for &x in x_grid {
        if !(x > 1.0) {
            return Err(ExplicitError::DomainX(x));
        }
        if x.floor() as u64 > sieve.limit() {
            return Err(ExplicitError::BeyondSieve {
                x,
                limit: sieve.limit(),
            });
        }
        let nearest = x.round();
        if (x - nearest).abs() < JUMP_GUARD && nearest >= 2.0 && is_prime_power(nearest as u64) {
            return Err(ExplicitError::JumpProximity(x, nearest as u64));
        }
    }
    let samples = exec::map_indexed(x_grid.len(), |i| {
        let x = x_grid[i];
        let by_sieve = sieve
            .psi(x, PsiConvention::Inclusive, ctx)
            .expect("pre-validated");
        let by_formula = psi_explicit(x, zeros, ctx).expect("pre-validated");
        let w = ctx.work_bits();
        let abs_diff = ctx.round(&(Float::with_val(w, &by_sieve) - &by_formula).abs());
        PsiSample {
            x,
            psi_sieve: by_sieve,
            psi_explicit: by_formula,
            zeros_used: zeros.len(),
            abs_diff,
        }
    });
    Ok(samples)
}

// ---------------------------------------------------------------------------
// Eq: psi(e^t) - e^t growth probe
// ---------------------------------------------------------------------------

/// One point of the growth probe: `|psi(e^t) - e^t| / (t^2 e^(t/2))`.
#[derive(Debug, Clone)]
pub struct RatioSample {
    pub t: f64,
    pub ratio: Float,
}

/// Evaluate the probe over a `t` grid using the sieve-based `psi`. The
/// observed maximum is a finite-window measurement, never an asymptotic
/// claim.
pub fn check_eq2(
    t_grid: &[f64],
    sieve: &PrimeSieve,
    ctx: PrecisionContext,
) -> Result<Vec<RatioSample>, ExplicitError> {
    for &t in t_grid {
        let x = t.exp();
        if !(x > 1.0) {
            return Err(ExplicitError::DomainX(x));
        }
        if x.floor() as u64 > sieve.limit() {
            return Err(ExplicitError::BeyondSieve {
                x,
                limit: sieve.limit(),
            });
        }
    }
    let samples = exec::map_indexed(t_grid.len(), |i| {
        let t = t_grid[i];
        let w = ctx.work_bits();
        let psi = sieve
            .psi(t.exp(), PsiConvention::Inclusive, ctx)
            .expect("pre-validated");
        let tf = Float::with_val(w, t);
        let e_t = tf.clone().exp();
        let numer = (Float::with_val(w, &psi) - &e_t).abs();
        let denom = tf.clone().square() * Float::with_val(w, &tf / 2u32).exp();
        RatioSample {
            t,
            ratio: ctx.round(&(numer / denom)),
        }
    });
    Ok(samples)
}
