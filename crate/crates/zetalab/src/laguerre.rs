//! Laguerre polynomials `L_n`, the inverse Laplace transforms of
//! `(s-1)^n / s^(n+1)`. The production path is the three-term recurrence
//! `(k+1) L_{k+1}(t) = (2k+1-t) L_k(t) - k L_{k-1}(t)`, which is stable for
//! `t >= 0`; the explicit binomial sum is kept only as a test oracle because
//! it cancels catastrophically at large `n`.

use crate::numerics::{self, CompensatedSum, PrecisionContext};
use rug::Float;
use thiserror::Error;

/// Largest `n` the direct-sum oracle accepts.
pub const DIRECT_SUM_MAX_N: u32 = 100;

#[derive(Debug, Error)]
pub enum LaguerreError {
    /// Negative arguments are rejected rather than extrapolated; the series
    /// only ever evaluates at `t - ln m >= 0` after step gating.
    #[error("Laguerre argument must be nonnegative, got {0}")]
    NegativeArgument(f64),
    #[error("direct-sum oracle limited to n <= {DIRECT_SUM_MAX_N}, got {0}")]
    OracleScale(u32),
}

/// `L_0(t) .. L_{n_max}(t)` from a single recurrence pass.
#[derive(Debug, Clone)]
pub struct LaguerreRow {
    t: Float,
    values: Vec<Float>,
}

impl LaguerreRow {
    pub fn t(&self) -> &Float {
        &self.t
    }

    pub fn values(&self) -> &[Float] {
        &self.values
    }

    pub fn value(&self, n: u32) -> &Float {
        &self.values[n as usize]
    }
}

fn check_nonnegative(t: &Float) -> Result<(), LaguerreError> {
    if t.is_sign_negative() && !t.is_zero() {
        return Err(LaguerreError::NegativeArgument(t.to_f64()));
    }
    Ok(())
}

/// Recurrence pass at explicit precision, no validation. `impulse` feeds this
/// directly with guarded-precision shifted arguments.
pub(crate) fn row_raw(n_max: u32, t: &Float, bits: u32) -> Vec<Float> {
    let mut values = Vec::with_capacity(n_max as usize + 1);
    values.push(Float::with_val(bits, 1));
    if n_max == 0 {
        return values;
    }
    values.push(Float::with_val(bits, 1) - Float::with_val(bits, t));
    for k in 1..n_max {
        let a = Float::with_val(bits, 2 * k + 1) - Float::with_val(bits, t);
        let next = (a * &values[k as usize] - Float::with_val(bits, &values[k as usize - 1] * k))
            / (k + 1);
        values.push(Float::with_val(bits, next));
    }
    values
}

/// Evaluate `L_0(t) .. L_{n_max}(t)` in one pass.
pub fn laguerre_row(
    n_max: u32,
    t: &Float,
    ctx: PrecisionContext,
) -> Result<LaguerreRow, LaguerreError> {
    check_nonnegative(t)?;
    let t_work = ctx.work_float(t);
    let values = row_raw(n_max, &t_work, ctx.work_bits())
        .iter()
        .map(|v| ctx.round(v))
        .collect();
    Ok(LaguerreRow {
        t: ctx.float(t),
        values,
    })
}

/// Evaluate `L_n(t)`. Bit-for-bit identical to `laguerre_row(n, t)[n]`.
pub fn laguerre_eval(n: u32, t: &Float, ctx: PrecisionContext) -> Result<Float, LaguerreError> {
    let row = laguerre_row(n, t, ctx)?;
    Ok(row.values.into_iter().next_back().expect("nonempty row"))
}

/// Explicit binomial sum `sum_nu C(n,nu) (-t)^nu / nu!` with exact integer
/// binomials. Test oracle only; see the module docs for why.
pub fn laguerre_direct(n: u32, t: &Float, ctx: PrecisionContext) -> Result<Float, LaguerreError> {
    check_nonnegative(t)?;
    if n > DIRECT_SUM_MAX_N {
        return Err(LaguerreError::OracleScale(n));
    }
    let w = ctx.work_bits();
    let neg_t = -ctx.work_float(t);
    let mut power = Float::with_val(w, 1); // (-t)^nu / nu!
    let mut acc = CompensatedSum::new(ctx);
    for nu in 0..=n {
        if nu > 0 {
            power = Float::with_val(w, &power * &neg_t) / nu;
        }
        let coeff = numerics::float_from_integer(&numerics::binomial(n, nu), w);
        acc.add(&Float::with_val(w, &coeff * &power));
    }
    Ok(acc.value())
}
