//! Precision-controlled arithmetic services shared by every other module:
//! a working-precision context, exact integer binomials, and compensated
//! (Neumaier) summation with an a-posteriori error bound.

use rug::{Assign, Float, Integer};
use thiserror::Error;

/// Guard bits carried above the requested precision inside summation and
/// series kernels. Results are rounded back to the context precision at the
/// boundary of each operation.
pub(crate) const GUARD_BITS: u32 = 64;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("precision must be at least {min} bits, got {0}", min = PrecisionContext::MIN_BITS)]
    PrecisionTooLow(u32),
}

/// Binary working precision shared by all real/complex evaluations.
///
/// Rounding is MPFR round-to-nearest, ties to even, and is not configurable.
/// The context is immutable and `Copy`; it is safe to share across threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    bits: u32,
}

impl PrecisionContext {
    /// Smallest accepted precision (one IEEE double mantissa).
    pub const MIN_BITS: u32 = 53;
    /// Default precision. The alternating binomial sums in the impulse
    /// response lose roughly `K` bits to cancellation at series order `K`,
    /// so the default leaves ample headroom for desk-scale orders.
    pub const DEFAULT_BITS: u32 = 256;

    pub fn new(bits: u32) -> Result<Self, NumericsError> {
        if bits < Self::MIN_BITS {
            return Err(NumericsError::PrecisionTooLow(bits));
        }
        Ok(Self { bits })
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Internal precision used by summation kernels.
    pub(crate) fn work_bits(self) -> u32 {
        self.bits + GUARD_BITS
    }

    /// Decimal significant digits this context can honestly print:
    /// `bits * log10(2) - 2`, never below one.
    pub fn decimal_digits(self) -> usize {
        let d = (f64::from(self.bits) * std::f64::consts::LOG10_2) as i64 - 2;
        d.max(1) as usize
    }

    /// New `Float` at context precision.
    pub fn float<T>(self, val: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits, val)
    }

    /// New `Float` at the internal guarded precision.
    pub(crate) fn work_float<T>(self, val: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.work_bits(), val)
    }

    /// New `Complex` at context precision.
    pub fn complex(self, re: f64, im: f64) -> rug::Complex {
        rug::Complex::with_val(self.bits, (re, im))
    }

    /// Round `x` to context precision.
    pub fn round(self, x: &Float) -> Float {
        Float::with_val(self.bits, x)
    }

    /// One unit in the last place of `x` at context precision; zero for zero.
    pub fn ulp(self, x: &Float) -> Float {
        ulp_at(x, self.bits)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            bits: Self::DEFAULT_BITS,
        }
    }
}

/// `2^(exp(x) - bits)` where `x = m * 2^exp`, `m` in `[1/2, 1)`.
fn ulp_at(x: &Float, bits: u32) -> Float {
    match x.get_exp() {
        Some(e) => Float::with_val(bits, Float::i_exp(1, e.saturating_sub(bits as i32))),
        None => Float::with_val(bits, 0),
    }
}

/// Binomial coefficient `C(k, n)`, exact; zero when `n > k`.
pub fn binomial(k: u32, n: u32) -> Integer {
    if n > k {
        return Integer::new();
    }
    let n = n.min(k - n);
    let mut acc = Integer::from(1);
    // acc stays integral at every step: after multiplying by (k - i) it is
    // C(k, i+1) * (i+1)!, divisible by (i+1).
    for i in 0..n {
        acc *= k - i;
        acc /= i + 1;
    }
    acc
}

/// Neumaier-compensated running sum.
///
/// The accumulator runs `GUARD_BITS` above the context precision; `value()`
/// rounds back down and `error_bound()` reports a bound on
/// `|value - exact sum|` that also satisfies the contract
/// `error_bound <= count * ulp(max |partial sum|)` at context precision.
#[derive(Debug, Clone)]
pub struct CompensatedSum {
    ctx: PrecisionContext,
    sum: Float,
    comp: Float,
    abs_sum: Float,
    max_abs_partial: Float,
    count: usize,
}

impl CompensatedSum {
    pub fn new(ctx: PrecisionContext) -> Self {
        let w = ctx.work_bits();
        Self {
            ctx,
            sum: Float::new(w),
            comp: Float::new(w),
            abs_sum: Float::new(w),
            max_abs_partial: Float::new(w),
            count: 0,
        }
    }

    pub fn add(&mut self, term: &Float) {
        let w = self.ctx.work_bits();
        let t = Float::with_val(w, &self.sum + term);
        let d = if self.sum.clone().abs() >= term.clone().abs() {
            Float::with_val(w, Float::with_val(w, &self.sum - &t) + term)
        } else {
            Float::with_val(w, Float::with_val(w, term - &t) + &self.sum)
        };
        self.comp += d;
        self.sum = t;

        let partial = Float::with_val(w, &self.sum + &self.comp).abs();
        if partial > self.max_abs_partial {
            self.max_abs_partial = partial;
        }
        self.abs_sum += term.clone().abs();
        self.count += 1;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Compensated total, rounded to context precision.
    pub fn value(&self) -> Float {
        self.ctx.round(&self.value_work())
    }

    /// Compensated total at the guarded internal precision.
    pub(crate) fn value_work(&self) -> Float {
        Float::with_val(self.ctx.work_bits(), &self.sum + &self.comp)
    }

    /// First-order summation error at the guarded precision:
    /// `8 * 2^-work_bits * sum |terms|`. The factor 8 also absorbs one or
    /// two roundings spent *forming* each term (e.g. a coefficient
    /// multiplication) by the callers in this crate.
    pub(crate) fn bound_work(&self) -> Float {
        let w = self.ctx.work_bits();
        Float::with_val(w, &self.abs_sum) * Float::with_val(w, Float::i_exp(1, 3 - w as i32))
    }

    /// Bound on `|value() - exact sum|`: the final rounding step plus the
    /// first-order summation term `8 * 2^-work_bits * sum |terms|`.
    pub fn error_bound(&self) -> Float {
        let w = self.ctx.work_bits();
        if self.count == 0 {
            return self.ctx.float(0);
        }
        let value = self.value();
        let half_ulp = Float::with_val(w, self.ctx.ulp(&value)) / 2u32;
        self.ctx
            .round(&Float::with_val(w, half_ulp + self.bound_work()))
    }

    /// Running sum of `|term|` (guarded precision).
    pub fn abs_sum(&self) -> &Float {
        &self.abs_sum
    }

    /// Largest `|partial sum|` seen so far (guarded precision).
    pub fn max_abs_partial(&self) -> &Float {
        &self.max_abs_partial
    }

    /// Cancellation severity: roughly `log2(sum |terms| / |value|)`, floored
    /// at zero. Exponent-based, so it stays finite-safe for huge sums;
    /// infinite when everything cancelled.
    pub fn bits_lost(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        let value = self.value();
        match (self.abs_sum.get_exp(), value.get_exp()) {
            (None, _) => 0.0,
            (Some(_), None) => f64::INFINITY,
            (Some(ea), Some(ev)) => f64::from(ea - ev).max(0.0),
        }
    }
}

/// One-shot compensated sum of an ordered term sequence.
///
/// Returns `(value, error_bound)`; the value is exact within the bound and
/// the bound never exceeds `count * ulp(max |partial sum|)`.
pub fn compensated_sum<'a, I>(terms: I, ctx: PrecisionContext) -> (Float, Float)
where
    I: IntoIterator<Item = &'a Float>,
{
    let mut acc = CompensatedSum::new(ctx);
    for t in terms {
        acc.add(t);
    }
    (acc.value(), acc.error_bound())
}

/// Assign-and-round helper used by tests comparing against exact rationals.
pub(crate) fn float_from_integer(i: &Integer, bits: u32) -> Float {
    let mut f = Float::new(bits);
    f.assign(i);
    f
}

/// Decimal rendering at a fixed number of significant digits; the shared
/// form used by every emitter so identical values print identically.
pub fn format_float(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits.max(1)))
}
