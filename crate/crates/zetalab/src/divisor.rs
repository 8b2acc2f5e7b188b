//! Piltz divisor numbers `d_n(m)`: how many ordered n-tuples of positive
//! integers multiply to `m`. They are the Dirichlet coefficients of
//! `zeta(s)^n` and supply the weights of the impulse-response series.

use crate::numerics::{CompensatedSum, PrecisionContext};
use crate::zeta;
use rug::ops::Pow;
use rug::Float;
use thiserror::Error;

/// Enumeration guards for [`brute_force_divisor`]; it exists as an oracle,
/// not a production path.
pub const BRUTE_FORCE_MAX_N: u32 = 8;
pub const BRUTE_FORCE_MAX_M: u64 = 10_000;

/// Default cap on `(n_max + 1) * m_max` table cells.
pub const DEFAULT_CELL_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error)]
pub enum DivisorError {
    #[error("table of {cells} cells exceeds the budget of {budget}")]
    CellBudget { cells: u64, budget: u64 },
    #[error("m must satisfy 1 <= m <= {m_max}, got {m}")]
    MOutOfRange { m: u64, m_max: u64 },
    #[error("n must satisfy n <= {n_max}, got {n}")]
    NOutOfRange { n: u32, n_max: u32 },
    #[error("d_{n}({m}) overflows the table cell type")]
    CellOverflow { n: u32, m: u64 },
    #[error("brute-force oracle limited to n <= {BRUTE_FORCE_MAX_N}, m <= {BRUTE_FORCE_MAX_M} (got n={n}, m={m})")]
    OracleScale { n: u32, m: u64 },
    #[error("Dirichlet series check requires sigma > 1, got {0}")]
    SigmaOutOfRange(f64),
    #[error(transparent)]
    Zeta(#[from] zeta::ZetaError),
}

/// Convention for the artificial row `n = 0`.
///
/// `Unit` is the Dirichlet-convolution identity (1 at m = 1, else 0), the
/// choice forced by `zeta(s)^0 = 1`. `AllOnes` sets the whole row to 1 and is
/// offered purely as a diagnostic for comparison; rows `n >= 1` are the
/// standard Piltz functions either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum D0Convention {
    #[default]
    Unit,
    AllOnes,
}

/// Precomputed `d_n(m)` for `1 <= m <= m_max`, `0 <= n <= n_max`.
///
/// Row `n` is the Dirichlet convolution of row `n - 1` with the constant-one
/// sequence; the chain always starts from the convolution unit regardless of
/// the row-0 convention, so rows `n >= 1` are convention-independent.
#[derive(Debug, Clone)]
pub struct DivisorTable {
    m_max: u64,
    n_max: u32,
    convention: D0Convention,
    rows: Vec<Vec<u128>>,
}

impl DivisorTable {
    pub fn build(m_max: u64, n_max: u32) -> Result<Self, DivisorError> {
        Self::build_with(m_max, n_max, D0Convention::Unit, DEFAULT_CELL_BUDGET)
    }

    pub fn build_with(
        m_max: u64,
        n_max: u32,
        convention: D0Convention,
        cell_budget: u64,
    ) -> Result<Self, DivisorError> {
        if m_max == 0 {
            return Err(DivisorError::MOutOfRange { m: 0, m_max });
        }
        let cells = m_max.saturating_mul(u64::from(n_max) + 1);
        if cells > cell_budget {
            return Err(DivisorError::CellBudget {
                cells,
                budget: cell_budget,
            });
        }
        let len = m_max as usize;
        let mut unit = vec![0u128; len];
        unit[0] = 1;

        let mut rows = Vec::with_capacity(n_max as usize + 1);
        rows.push(unit);
        for n in 1..=n_max {
            let prev = &rows[n as usize - 1];
            let mut next = vec![0u128; len];
            for d in 1..=m_max {
                let v = prev[d as usize - 1];
                if v == 0 {
                    continue;
                }
                let mut multiple = d;
                while multiple <= m_max {
                    let cell = &mut next[multiple as usize - 1];
                    *cell = cell
                        .checked_add(v)
                        .ok_or(DivisorError::CellOverflow { n, m: multiple })?;
                    multiple += d;
                }
            }
            rows.push(next);
        }
        if convention == D0Convention::AllOnes {
            rows[0] = vec![1u128; len];
        }
        Ok(Self {
            m_max,
            n_max,
            convention,
            rows,
        })
    }

    pub fn m_max(&self) -> u64 {
        self.m_max
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn convention(&self) -> D0Convention {
        self.convention
    }

    /// Table lookup `d_n(m)`.
    pub fn value(&self, n: u32, m: u64) -> Result<u128, DivisorError> {
        if n > self.n_max {
            return Err(DivisorError::NOutOfRange {
                n,
                n_max: self.n_max,
            });
        }
        if m == 0 || m > self.m_max {
            return Err(DivisorError::MOutOfRange {
                m,
                m_max: self.m_max,
            });
        }
        Ok(self.rows[n as usize][m as usize - 1])
    }

    /// Row slice `d_n(1..=m_max)`, for streaming consumers.
    pub(crate) fn row(&self, n: u32) -> &[u128] {
        &self.rows[n as usize]
    }
}

/// Ordered-factorization count by direct recursive enumeration. Exact, and
/// deliberately independent of the sieve so it can act as its oracle.
pub fn brute_force_divisor(n: u32, m: u64) -> Result<u128, DivisorError> {
    if n > BRUTE_FORCE_MAX_N || m == 0 || m > BRUTE_FORCE_MAX_M {
        return Err(DivisorError::OracleScale { n, m });
    }
    Ok(count_ordered_factorizations(n, m))
}

fn count_ordered_factorizations(n: u32, m: u64) -> u128 {
    if n == 0 {
        return u128::from(m == 1);
    }
    if m == 1 {
        return 1;
    }
    let mut total = 0u128;
    let mut d = 1;
    while d * d <= m {
        if m % d == 0 {
            total += count_ordered_factorizations(n - 1, m / d);
            if d != m / d {
                total += count_ordered_factorizations(n - 1, d);
            }
        }
        d += 1;
    }
    total
}

/// Outcome of a truncated-Dirichlet-series comparison against `zeta(sigma)^n`.
#[derive(Debug, Clone)]
pub struct DirichletCheck {
    pub partial_sum: Float,
    pub reference: Float,
    pub gap: Float,
}

/// Compare `sum_{m<=cutoff} d_n(m) m^-sigma` with `zeta(sigma)^n`.
pub fn dirichlet_series_check(
    table: &DivisorTable,
    n: u32,
    sigma: f64,
    cutoff: u64,
    ctx: PrecisionContext,
) -> Result<DirichletCheck, DivisorError> {
    if !(sigma > 1.0) {
        return Err(DivisorError::SigmaOutOfRange(sigma));
    }
    if n > table.n_max() {
        return Err(DivisorError::NOutOfRange {
            n,
            n_max: table.n_max(),
        });
    }
    let cutoff = cutoff.min(table.m_max());
    let s = ctx.work_float(-sigma);
    let mut acc = CompensatedSum::new(ctx);
    for (i, &d) in table.row(n).iter().take(cutoff as usize).enumerate() {
        if d == 0 {
            continue;
        }
        let m = i as u64 + 1;
        let term = ctx.work_float(m).pow(&s) * ctx.work_float(d);
        acc.add(&term);
    }
    let partial_sum = acc.value();
    let z = zeta::zeta_real(sigma, ctx)?;
    let reference = ctx.float(z.pow(n));
    let gap = ctx.float(Float::with_val(ctx.work_bits(), &partial_sum - &reference).abs());
    Ok(DirichletCheck {
        partial_sum,
        reference,
        gap,
    })
}
