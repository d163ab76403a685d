//! Stage polynomials and the spectral data built from them.
//!
//! Stage `k` of a schedule contributes the polynomial
//!
//! ```text
//! Theta_k(z) = sum_{p=0}^{m_k - 1} z^{p h_{k-1} + sum_{i<p} a_k^i},
//! ```
//!
//! whose exponents are exactly the ordinal offsets of the level-`k` children
//! of a level-`(k-1)` ball (the refinement tests pin this). Its normalized
//! squared modulus on the circle, `T_k = Theta_k(z) Theta_k(1/z) / m_k`, has
//! constant term 1 and mean 1; the partial products `P_n = T_1 ... T_n` carry
//! the spectral measure of the system at stage `n`: their coefficients
//! `u_alpha^{(n)}` are nonnegative, nondecreasing in `n`, bounded by 1, and
//! vanish on the gap `0 < |alpha| < h_l` for products starting after stage `l`.
//!
//! The submodules expose the partial products and Fourier data ([`riesz`]),
//! the Gram data of the ball-indicator isometry ([`gram`]), and the
//! floating-point sampling surfaces ([`sampling`]).

mod gram;
mod riesz;
mod sampling;

pub use gram::{gram, inner_product, refinement_invariance, GramReport, GramWitness, Indicator, RefinementReport};
pub use riesz::{check_gap, fourier_sequence, riesz_partial, GapReport, RieszPartial};
pub use sampling::{
    density_samples, zero_certificate, DensitySample, ZeroCertificate, DEFAULT_GRID,
    REFINEMENT_CAP,
};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::laurent::LaurentPolynomial;
use crate::system::{heights, CutSpacerSchedule, HeightTable};

/// Resource budgets for spectral computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of stored coefficients in any polynomial support.
    pub support: usize,
    /// Maximum Gram dimension `h_k` (also bounds indicator refinements).
    pub matrix: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            support: 20_000_000,
            matrix: 8192,
        }
    }
}

/// A schedule together with its heights and cached stage polynomials up to a
/// fixed depth. All spectral operations read from an immutable family, so
/// they are pure and freely shareable across threads.
#[derive(Debug, Clone)]
pub struct ThetaFamily {
    schedule: CutSpacerSchedule,
    depth: usize,
    heights: HeightTable,
    /// `theta_exps[k-1]` is the sorted exponent list of `Theta_k`.
    theta_exps: Vec<Vec<i64>>,
    thetas: Vec<LaurentPolynomial>,
    caps: Caps,
}

impl ThetaFamily {
    /// Build the family to the given depth with default caps.
    pub fn new(schedule: CutSpacerSchedule, depth: usize) -> Result<Self> {
        Self::with_caps(schedule, depth, Caps::default())
    }

    /// Build the family to the given depth with explicit caps.
    ///
    /// Requires every `h_k` for `k <= depth` to fit the exponent range; the
    /// per-operation caps are enforced lazily by the operations themselves.
    pub fn with_caps(schedule: CutSpacerSchedule, depth: usize, caps: Caps) -> Result<Self> {
        let table = heights(&schedule, depth)?;
        if table.h(depth).to_i64().is_none() {
            return Err(Error::CapExceeded {
                what: "polynomial exponent range",
                needed: table.h(depth).to_string(),
                cap: i64::MAX.to_string(),
            });
        }
        let mut theta_exps = Vec::with_capacity(depth);
        let mut thetas = Vec::with_capacity(depth);
        for k in 1..=depth {
            let h_prev = table.h(k - 1).to_i64().expect("below h_depth");
            let m = schedule.cuts(k)?;
            let mut exps = Vec::with_capacity(m as usize);
            for p in 0..m {
                let prefix = schedule.spacer_prefix(k, p as usize)?;
                exps.push(p as i64 * h_prev + i64::try_from(prefix).map_err(|_| Error::CapExceeded {
                    what: "polynomial exponent range",
                    needed: prefix.to_string(),
                    cap: i64::MAX.to_string(),
                })?);
            }
            thetas.push(LaurentPolynomial::from_exponents(&exps));
            theta_exps.push(exps);
        }
        Ok(Self {
            schedule,
            depth,
            heights: table,
            theta_exps,
            thetas,
            caps,
        })
    }

    pub fn schedule(&self) -> &CutSpacerSchedule {
        &self.schedule
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn heights(&self) -> &HeightTable {
        &self.heights
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub(crate) fn ensure_stage(&self, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::InvalidLevel {
                level: 0,
                need: "a stage index k >= 1",
            });
        }
        if k > self.depth {
            return Err(Error::DepthExceeded {
                requested: k,
                max: self.depth,
            });
        }
        Ok(())
    }

    /// `h_k` as an exponent-sized integer, `k <= depth`.
    pub(crate) fn height_i64(&self, k: usize) -> i64 {
        self.heights.h(k).to_i64().expect("checked at construction")
    }

    /// The stage polynomial `Theta_k`, `1 <= k <= depth`.
    ///
    /// Unit coefficients, `m_k` terms, constant term 1, top exponent
    /// `h_k - h_{k-1}`.
    pub fn theta(&self, k: usize) -> Result<&LaurentPolynomial> {
        self.ensure_stage(k)?;
        Ok(&self.thetas[k - 1])
    }

    /// Sorted exponents of `Theta_k`.
    pub fn theta_exponents(&self, k: usize) -> Result<&[i64]> {
        self.ensure_stage(k)?;
        Ok(&self.theta_exps[k - 1])
    }

    /// The circle factor `T_k = Theta_k(z) Theta_k(1/z) / m_k`.
    ///
    /// Palindromic, constant term 1, support `[-(h_k - h_{k-1}), h_k - h_{k-1}]`,
    /// minimal positive exponent `h_{k-1} + a_k^0`.
    pub fn t_factor(&self, k: usize) -> Result<LaurentPolynomial> {
        let theta = self.theta(k)?;
        let m = BigUint::from(self.schedule.cuts(k)?);
        Ok(theta
            .multiply(&theta.reflect())
            .scale(&num_rational::BigRational::new(
                1.into(),
                num_bigint::BigInt::from(m),
            )))
    }
}
