//! Growth-conjecture probes.
//!
//! [`growth_ratio`] measures `|g(t)| / (t^k e^(t/2))` over a finite sample
//! window for `k` in `{0, 1, 2}` and reports the observed supremum. The
//! contract is measurement, not proof: nothing here asserts the conjecture,
//! and the reported suprema are window-bound observations.
//!
//! [`laplace_check`] ties the time domain back to the frequency domain: a
//! jump-aware trapezoid approximation of `integral_0^T e^(-sigma t) g(t) dt`
//! next to the closed-form `G(sigma)`, with a conjecture-conditional
//! estimate of the truncated tail.

use crate::impulse::ImpulseSample;
use crate::numerics::{format_float, CompensatedSum, PrecisionContext};
use crate::zeta::{self, ZetaError};
use rug::ops::CompleteRound;
use rug::{Complex, Float};
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GrowthError {
    #[error("growth exponent must be 0, 1, or 2, got {0}")]
    InvalidExponent(u8),
    #[error("growth ratios require strictly positive sample times")]
    NonpositiveTime,
    #[error("samples must be ordered by nondecreasing t")]
    UnorderedSamples,
    #[error("the Laplace probe requires sigma > 1, got {0}")]
    SigmaOutOfRange(f64),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One `(t, ratio)` measurement.
#[derive(Debug, Clone)]
pub struct GrowthSample {
    pub t: Float,
    pub ratio: Float,
}

/// Window measurement of `|value| / (t^k e^(t/2))`.
#[derive(Debug, Clone)]
pub struct GrowthReport {
    pub exponent: u8,
    pub samples: Vec<GrowthSample>,
    pub sup_ratio: Float,
    /// Location of the supremum; `None` for an empty window.
    pub argmax_t: Option<Float>,
    /// Free-form key/value run parameters, persisted in the JSON summary.
    pub params: Vec<(String, String)>,
}

/// Compute the ratio report for one exponent.
pub fn growth_ratio(
    samples: &[ImpulseSample],
    exponent: u8,
    ctx: PrecisionContext,
) -> Result<GrowthReport, GrowthError> {
    if exponent > 2 {
        return Err(GrowthError::InvalidExponent(exponent));
    }
    let w = ctx.work_bits();
    let mut out = Vec::with_capacity(samples.len());
    let mut sup_ratio = ctx.float(0);
    let mut argmax_t: Option<Float> = None;
    for s in samples {
        if s.t.is_sign_negative() || s.t.is_zero() {
            return Err(GrowthError::NonpositiveTime);
        }
        let t_w = Float::with_val(w, &s.t);
        let mut envelope = Float::with_val(w, &t_w / 2u32).exp();
        for _ in 0..exponent {
            envelope *= &t_w;
        }
        let ratio = ctx.round(&(Float::with_val(w, &s.value).abs() / envelope));
        if ratio > sup_ratio {
            sup_ratio = ratio.clone();
            argmax_t = Some(ctx.float(&s.t));
        }
        out.push(GrowthSample {
            t: ctx.float(&s.t),
            ratio,
        });
    }
    Ok(GrowthReport {
        exponent,
        samples: out,
        sup_ratio,
        argmax_t,
        params: Vec::new(),
    })
}

/// Result of the numerical Laplace-transform probe.
#[derive(Debug, Clone)]
pub struct LaplaceCheck {
    /// Trapezoid approximation of `integral_0^T e^(-sigma t) g(t) dt`.
    pub numeric: Float,
    /// Closed-form `G(sigma)` for comparison (meaningful when the samples
    /// are an impulse-response window).
    pub closed: Float,
    /// Conjecture-conditional tail estimate
    /// `sup_hat * integral_T^inf e^(-sigma t) t^2 e^(t/2) dt`.
    pub truncation_estimate: Float,
    /// Set when adjacent samples vary so much that the trapezoid panels are
    /// probably under-resolved.
    pub grid_coarse_warning: bool,
}

/// Trapezoid quadrature of `e^(-sigma t) g(t)` over the sample nodes, with
/// an initial panel down to `t = 0` closed by `value_at_zero`.
///
/// Node placement is the caller's concern: for impulse-response windows the
/// grid should include the jump points `ln m` (see [`breakpoint_grid`]), so
/// that every panel sees a smooth integrand. `sup_hat` is an observed
/// `k = 2` growth supremum used for the tail estimate; pass zero to skip it.
pub fn laplace_check(
    samples: &[ImpulseSample],
    sigma: f64,
    value_at_zero: &Float,
    sup_hat: &Float,
    ctx: PrecisionContext,
) -> Result<LaplaceCheck, GrowthError> {
    if !(sigma > 1.0) {
        return Err(GrowthError::SigmaOutOfRange(sigma));
    }
    for pair in samples.windows(2) {
        if pair[1].t < pair[0].t {
            return Err(GrowthError::UnorderedSamples);
        }
    }
    let w = ctx.work_bits();
    let sigma_f = Float::with_val(w, sigma);

    let integrand = |t: &Float, v: &Float| -> Float {
        let decay = Float::with_val(w, -(&sigma_f * t).complete(w)).exp();
        decay * v
    };

    let mut acc = CompensatedSum::new(ctx);
    let mut coarse = false;
    if let Some(first) = samples.first() {
        let t0 = Float::with_val(w, &first.t);
        let f_zero = Float::with_val(w, value_at_zero);
        let f_first = integrand(&t0, &Float::with_val(w, &first.value));
        acc.add(&(t0 * (f_zero + f_first) / 2u32));
    }
    for pair in samples.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let ta = Float::with_val(w, &a.t);
        let tb = Float::with_val(w, &b.t);
        let va = Float::with_val(w, &a.value);
        let vb = Float::with_val(w, &b.value);
        let variation = (&vb - &va).complete(w).abs();
        let scale = Float::with_val(w, 1) + va.clone().abs().max(&vb.clone().abs());
        // the impulse response legitimately jumps by O(1) at t = ln m, so
        // only flag variation well beyond that
        if variation > scale * 2u32 {
            coarse = true;
        }
        let panel = (tb.clone() - &ta) * (integrand(&ta, &va) + integrand(&tb, &vb)) / 2u32;
        acc.add(&panel);
    }

    let closed = if samples.is_empty() {
        ctx.float(0)
    } else {
        let g = zeta::g_closed(&Complex::with_val(w, (sigma, 0.0)), ctx)?;
        ctx.float(g.real())
    };

    // sup_hat * e^(-cT) (T^2/c + 2T/c^2 + 2/c^3), c = sigma - 1/2
    let truncation_estimate = match samples.last() {
        None => ctx.float(0),
        Some(last) => {
            let t_end = Float::with_val(w, &last.t);
            let c = Float::with_val(w, &sigma_f - &Float::with_val(w, 0.5));
            let c2 = c.clone().square();
            let c3 = Float::with_val(w, &c2 * &c);
            let poly = t_end.clone().square() / &c
                + Float::with_val(w, 2) * &t_end / c2
                + Float::with_val(w, 2) / c3;
            let decay = Float::with_val(w, -(&c * &t_end).complete(w)).exp();
            ctx.round(&(Float::with_val(w, sup_hat) * decay * poly))
        }
    };

    Ok(LaplaceCheck {
        numeric: acc.value(),
        closed,
        truncation_estimate,
        grid_coarse_warning: coarse,
    })
}

/// Uniform quadrature grid on `(0, T]` with `T = steps * ln(N+1)/(steps+1)`,
/// augmented with every jump point `ln m <= T` so trapezoid panels never
/// straddle a discontinuity.
pub fn breakpoint_grid(m_cutoff: u64, steps: usize) -> Vec<f64> {
    if steps == 0 {
        return Vec::new();
    }
    let h = ((m_cutoff + 1) as f64).ln() / (steps as f64 + 1.0);
    let mut grid: Vec<f64> = (1..=steps).map(|i| h * i as f64).collect();
    let t_end = grid[steps - 1];
    for m in 2..=m_cutoff {
        let jump = (m as f64).ln();
        if jump < t_end {
            grid.push(jump);
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();
    grid
}

fn json_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Persist a report: CSV `t,ratio` rows and a JSON summary
/// `{k, sup_ratio, argmax_t, params}`.
pub fn growth_report_emit(
    report: &GrowthReport,
    csv_path: &Path,
    json_path: &Path,
    ctx: PrecisionContext,
) -> Result<(), GrowthError> {
    let digits = ctx.decimal_digits();
    let mut csv = std::fs::File::create(csv_path)?;
    writeln!(csv, "t,ratio")?;
    for s in &report.samples {
        writeln!(
            csv,
            "{},{}",
            format_float(&s.t, digits),
            format_float(&s.ratio, digits)
        )?;
    }

    let mut json = std::fs::File::create(json_path)?;
    let argmax = match &report.argmax_t {
        Some(t) => format_float(t, digits),
        None => "null".to_string(),
    };
    let params = report
        .params
        .iter()
        .map(|(k, v)| format!("\"{}\": \"{}\"", json_escape(k), json_escape(v)))
        .collect::<Vec<_>>()
        .join(", ");
    writeln!(
        json,
        "{{\"k\": {}, \"sup_ratio\": {}, \"argmax_t\": {}, \"params\": {{{}}}}}",
        report.exponent,
        format_float(&report.sup_ratio, digits),
        argmax,
        params
    )?;
    Ok(())
}
