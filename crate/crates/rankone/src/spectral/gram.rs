//! Gram data of the ball-indicator isometry.
//!
//! Pairings of indicator functions under the stage-`n` spectral form. A ball
//! indicator at level `k` maps to the frequency `z^{Upsilon(ball)}`, the
//! canonical unit-measure region (every point with floor digit 0) maps to the
//! full exponent sum `prod_{j<=k} Theta_j` when refined to level `k`, and the
//! pairing of two level-`k` frequencies `s, t` is
//!
//! ```text
//! <s, t>_n = (m_1 ... m_k)^{-1} * coeff(prod_{j=k+1}^{n} T_j, t - s),
//! ```
//!
//! so the level-`k` Gram matrix is Toeplitz by construction, and the gap in
//! the product's spectrum makes it exactly `(m_1 ... m_k)^{-1} I` for every
//! `n >= k`. These pairings reproduce set-theoretic overlap measures of the
//! underlying regions, which is what the refinement checks pin down.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::odometer::{level_measure, subdivide, upsilon, BallAddress};

use super::riesz::TProduct;
use super::ThetaFamily;

/// An indicator function that the spectral isometry can pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Indicator {
    /// The canonical unit-measure region: all points whose floor digit is 0.
    /// Refines at level `k` into every floor-0 ball plus the top remainder.
    Cyclic,
    /// A single ball.
    Ball(BallAddress),
}

impl Indicator {
    /// The level at which the indicator is natively expressed (0 for the
    /// canonical region).
    pub fn level(&self) -> usize {
        match self {
            Indicator::Cyclic => 0,
            Indicator::Ball(ball) => ball.level(),
        }
    }
}

/// Frequencies of an indicator refined down to level `k`: its ordinal plus
/// every sum of one stage exponent per stage between its own level and `k`.
///
/// For a ball the list enumerates the ordinals of its level-`k` descendants.
/// For the canonical region the list enumerates every floor-0 ordinal plus
/// `h_k` for the remainder above the last ball; that remainder pairs to zero
/// against every ball (the product spectrum is empty on `[1, h_k]`) and to
/// `(m_1 ... m_k)^{-1}` against itself, which is exactly its measure.
fn refined_exponents(family: &ThetaFamily, indicator: &Indicator, k: usize) -> Result<Vec<i64>> {
    let base = match indicator {
        Indicator::Cyclic => 0i64,
        Indicator::Ball(ball) => upsilon(family.schedule(), ball)?
            .to_i64()
            .expect("ordinal fits the exponent range checked at construction"),
    };
    let mut exps = vec![base];
    for stage in indicator.level() + 1..=k {
        let stage_exps = family.theta_exponents(stage)?;
        let needed = exps.len() * stage_exps.len();
        if needed > family.caps().matrix {
            return Err(Error::CapExceeded {
                what: "indicator refinement count",
                needed: needed.to_string(),
                cap: family.caps().matrix.to_string(),
            });
        }
        exps = exps
            .iter()
            .flat_map(|&e| stage_exps.iter().map(move |&t| e + t))
            .collect();
    }
    Ok(exps)
}

/// `(m_1 ... m_k)^{-1} * sum over exponent pairs of coeff(prod T_j, right - left)`
/// with the product running over stages `k+1 ..= n`.
fn pairing(
    family: &ThetaFamily,
    left_exps: &[i64],
    right_exps: &[i64],
    k: usize,
    n: usize,
) -> Result<BigRational> {
    let mut acc = TProduct::identity(k);
    acc.extend_to(family, n)?;
    let mut sum = BigUint::zero();
    for &left in left_exps {
        for &right in right_exps {
            sum += acc.coeff_numerator(right - left);
        }
    }
    let value = BigRational::new(sum.into(), BigInt::from(acc.denominator().clone()));
    Ok(level_measure(family.schedule(), k)? * value)
}

/// The stage-`n` pairing of two indicators, computed exactly.
///
/// The shallower indicator is refined to the deeper one's level `k`; the
/// result is independent of `n` for `n >= k` and equals the measure of the
/// overlap of the two regions.
pub fn inner_product(
    family: &ThetaFamily,
    left: &Indicator,
    right: &Indicator,
    n: usize,
) -> Result<BigRational> {
    if n > family.depth() {
        return Err(Error::DepthExceeded {
            requested: n,
            max: family.depth(),
        });
    }
    for indicator in [left, right] {
        if let Indicator::Ball(ball) = indicator {
            ball.validate(family.schedule())?;
        }
    }
    let k = left.level().max(right.level());
    if n < k {
        return Err(Error::InvalidLevel {
            level: n,
            need: "a stage at least the deeper indicator level",
        });
    }
    let left_exps = refined_exponents(family, left, k)?;
    let right_exps = refined_exponents(family, right, k)?;
    pairing(family, &left_exps, &right_exps, k, n)
}

/// One off-identity entry found in a Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramWitness {
    pub row: usize,
    pub col: usize,
    pub value: BigRational,
    pub expected: BigRational,
}

/// The level-`k` Gram matrix of all ball indicators under the stage-`n`
/// pairing, in Toeplitz form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramReport {
    /// Level of the balls indexing rows and columns (in ordinal order).
    pub level: usize,
    /// Stage of the pairing.
    pub n: usize,
    /// Matrix dimension `h_k`.
    pub dim: usize,
    /// `(m_1 ... m_k)^{-1}`, the expected common diagonal value.
    pub scale: BigRational,
    /// Whether the matrix equals `scale` times the identity.
    pub pass: bool,
    /// First entry violating the identity form, if any.
    pub witness: Option<GramWitness>,
    /// `diagonals[d]` is the value on the diagonal `col - row = d - (dim - 1)`.
    diagonals: Vec<BigRational>,
}

impl GramReport {
    /// Entry at `(row, col)`, both in `0..dim`.
    pub fn entry(&self, row: usize, col: usize) -> &BigRational {
        assert!(row < self.dim && col < self.dim, "index outside the matrix");
        self.delta_value(col as i64 - row as i64)
    }

    /// Common value of the diagonal `col - row = delta`, `|delta| < dim`.
    pub fn delta_value(&self, delta: i64) -> &BigRational {
        let index = delta + self.dim as i64 - 1;
        assert!(
            (0..self.diagonals.len() as i64).contains(&index),
            "delta outside the matrix"
        );
        &self.diagonals[index as usize]
    }
}

/// Compute the level-`k` Gram matrix under the stage-`n` pairing, `1 <= k <= n`.
///
/// Entry `(s, t)` is the pairing of the balls with ordinals `s` and `t`,
/// which depends only on `t - s`; the report stores one value per diagonal.
pub fn gram(family: &ThetaFamily, k: usize, n: usize) -> Result<GramReport> {
    family.ensure_stage(k)?;
    if n < k {
        return Err(Error::InvalidLevel {
            level: n,
            need: "a stage n >= k",
        });
    }
    if n > family.depth() {
        return Err(Error::DepthExceeded {
            requested: n,
            max: family.depth(),
        });
    }
    let dim_exact = family.heights().h(k);
    let dim = dim_exact
        .to_usize()
        .filter(|&d| d <= family.caps().matrix)
        .ok_or_else(|| Error::CapExceeded {
            what: "matrix dimension",
            needed: dim_exact.to_string(),
            cap: family.caps().matrix.to_string(),
        })?;
    let mut acc = TProduct::identity(k);
    acc.extend_to(family, n)?;
    let scale = level_measure(family.schedule(), k)?;
    let diagonals: Vec<BigRational> = (-(dim as i64 - 1)..=dim as i64 - 1)
        .map(|delta| &scale * acc.coeff(delta))
        .collect();

    let zero = BigRational::zero();
    let mut witness = None;
    for (index, value) in diagonals.iter().enumerate() {
        let delta = index as i64 - (dim as i64 - 1);
        let expected = if delta == 0 { &scale } else { &zero };
        if value != expected {
            let (row, col) = if delta >= 0 {
                (0, delta as usize)
            } else {
                ((-delta) as usize, 0)
            };
            witness = Some(GramWitness {
                row,
                col,
                value: value.clone(),
                expected: expected.clone(),
            });
            break;
        }
    }
    Ok(GramReport {
        level: k,
        n,
        dim,
        scale,
        pass: witness.is_none(),
        witness,
        diagonals,
    })
}

/// Result of checking that subdividing a ball preserves its spectral data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementReport {
    /// Level of the subdivided ball.
    pub level: usize,
    /// Stage of the pairing used for the norm comparison.
    pub n: usize,
    /// Ordinal offsets of the children relative to the parent.
    pub child_offsets: Vec<i64>,
    /// Exponents of the stage polynomial `Theta_{level+1}`.
    pub stage_exponents: Vec<i64>,
    /// Whether the child offsets are exactly the stage exponents.
    pub offsets_match: bool,
    /// Squared norm of the ball paired at its own level.
    pub norm_direct: BigRational,
    /// The same norm paired through the level-`(level+1)` children.
    pub norm_refined: BigRational,
    pub norms_match: bool,
    pub pass: bool,
}

/// Check that a ball's children sit at the stage-polynomial offsets and that
/// the stage-`n` pairing gives the same squared norm through either level.
///
/// Requires `level + 1 <= n <= depth` so the children exist and can be paired.
pub fn refinement_invariance(
    family: &ThetaFamily,
    ball: &BallAddress,
    n: usize,
) -> Result<RefinementReport> {
    ball.validate(family.schedule())?;
    let k = ball.level();
    family.ensure_stage(k + 1)?;
    if n < k + 1 {
        return Err(Error::InvalidLevel {
            level: n,
            need: "a stage past the ball's level",
        });
    }
    if n > family.depth() {
        return Err(Error::DepthExceeded {
            requested: n,
            max: family.depth(),
        });
    }

    let parent = BigInt::from(upsilon(family.schedule(), ball)?);
    let children = subdivide(family.schedule(), ball)?;
    let mut child_offsets = Vec::with_capacity(children.len());
    let mut child_exps = Vec::with_capacity(children.len());
    for child in &children {
        let ordinal = BigInt::from(upsilon(family.schedule(), child)?);
        child_exps.push(ordinal.to_i64().expect("ordinal fits the exponent range"));
        child_offsets.push(
            (ordinal - &parent)
                .to_i64()
                .expect("offset fits the exponent range"),
        );
    }
    let stage_exponents = family.theta_exponents(k + 1)?.to_vec();
    let offsets_match = child_offsets == stage_exponents;

    let parent_exp = parent.to_i64().expect("ordinal fits the exponent range");
    let norm_direct = pairing(family, &[parent_exp], &[parent_exp], k, n)?;
    let norm_refined = pairing(family, &child_exps, &child_exps, k + 1, n)?;
    let norms_match = norm_direct == norm_refined;

    Ok(RefinementReport {
        level: k,
        n,
        child_offsets,
        stage_exponents,
        offsets_match,
        norm_direct,
        norm_refined,
        norms_match,
        pass: offsets_match && norms_match,
    })
}
