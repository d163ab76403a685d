//! Partial Riesz products and their Fourier coefficients.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::laurent::{DenseIntLaurent, LaurentPolynomial};

use super::ThetaFamily;

/// Running product `prod_{j=start+1}^{end} T_j`, carried as an integer
/// numerator (the product of the `Theta_j(z) Theta_j(1/z)`) over the single
/// denominator `prod m_j`. One reduction per coefficient happens only when
/// rationals are extracted.
pub(crate) struct TProduct {
    end: usize,
    numerator: DenseIntLaurent,
    denominator: BigUint,
}

impl TProduct {
    /// The empty product over `(start, start]`, i.e. the constant 1.
    pub(crate) fn identity(start: usize) -> Self {
        Self {
            end: start,
            numerator: DenseIntLaurent::one(),
            denominator: BigUint::one(),
        }
    }

    /// Multiply in the next factor `T_{end+1}`.
    pub(crate) fn extend(&mut self, family: &ThetaFamily) -> Result<()> {
        let k = self.end + 1;
        family.ensure_stage(k)?;
        let exps = family.theta_exponents(k)?;
        let reflected: Vec<i64> = exps.iter().map(|&e| -e).collect();
        // Two sparse passes double the spread; check the cap on the result.
        let needed = self
            .numerator
            .support_len_after(exps)
            .saturating_add(exps[exps.len() - 1] as usize - exps[0] as usize);
        if needed > family.caps().support {
            return Err(Error::CapExceeded {
                what: "polynomial support",
                needed: needed.to_string(),
                cap: family.caps().support.to_string(),
            });
        }
        self.numerator = self.numerator.mul_exponents(exps).mul_exponents(&reflected);
        self.denominator *= BigUint::from(family.schedule().cuts(k)?);
        self.end = k;
        Ok(())
    }

    /// Extend until the product covers `(start, n]`.
    pub(crate) fn extend_to(&mut self, family: &ThetaFamily, n: usize) -> Result<()> {
        while self.end < n {
            self.extend(family)?;
        }
        Ok(())
    }

    /// Exact coefficient of `z^alpha`.
    pub(crate) fn coeff(&self, alpha: i64) -> BigRational {
        BigRational::new(
            self.numerator.coeff(alpha).into(),
            num_bigint::BigInt::from(self.denominator.clone()),
        )
    }

    /// Integer numerator of `coeff(alpha)` over [`Self::denominator`].
    pub(crate) fn coeff_numerator(&self, alpha: i64) -> BigUint {
        self.numerator.coeff(alpha)
    }

    pub(crate) fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    /// Nonzero support exponents with their numerators.
    pub(crate) fn numerator_terms(&self) -> impl Iterator<Item = (i64, &BigUint)> {
        self.numerator.terms()
    }

    pub(crate) fn to_laurent(&self) -> LaurentPolynomial {
        self.numerator.to_rational(&self.denominator)
    }
}

/// The partial Riesz product `P_n = T_1 T_2 ... T_n` in expanded form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RieszPartial {
    n: usize,
    poly: LaurentPolynomial,
}

impl RieszPartial {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The expanded polynomial: palindromic, support `[-h_n, h_n]`, constant
    /// term 1, value `m_1 ... m_n` at `z = 1`, all coefficients in `[0, 1]`.
    pub fn polynomial(&self) -> &LaurentPolynomial {
        &self.poly
    }

    pub fn into_polynomial(self) -> LaurentPolynomial {
        self.poly
    }

    /// Fourier coefficient `u_alpha^{(n)}`.
    pub fn coeff(&self, alpha: i64) -> BigRational {
        self.poly.coeff(alpha)
    }
}

/// Compute `P_n` exactly. `n = 0` is the empty product 1.
pub fn riesz_partial(family: &ThetaFamily, n: usize) -> Result<RieszPartial> {
    if n > family.depth() {
        return Err(Error::DepthExceeded {
            requested: n,
            max: family.depth(),
        });
    }
    let mut acc = TProduct::identity(0);
    acc.extend_to(family, n)?;
    Ok(RieszPartial {
        n,
        poly: acc.to_laurent(),
    })
}

/// The sequence `u_alpha^{(1)}, ..., u_alpha^{(n_max)}` of Fourier
/// coefficients of the partial products at a fixed frequency `alpha`.
///
/// Computed incrementally off one running product, so the cost matches a
/// single `riesz_partial(n_max)` call. The values are nonnegative,
/// nondecreasing, and bounded by 1.
pub fn fourier_sequence(family: &ThetaFamily, alpha: i64, n_max: usize) -> Result<Vec<BigRational>> {
    if n_max > family.depth() {
        return Err(Error::DepthExceeded {
            requested: n_max,
            max: family.depth(),
        });
    }
    let mut acc = TProduct::identity(0);
    let mut out = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        acc.extend(family)?;
        out.push(acc.coeff(alpha));
    }
    Ok(out)
}

/// Result of checking the spectral gap of a product `prod_{j=l+1}^{k} T_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub l: usize,
    pub k: usize,
    /// Width of the gap that must be empty: coefficients vanish for
    /// `0 < |alpha| < h_l`.
    pub h_l: BigUint,
    /// Smallest positive exponent actually present (None when the product has
    /// no positive frequencies, which cannot happen for `l < k`).
    pub min_positive_exponent: Option<i64>,
    /// First nonzero coefficient found inside the gap, if any.
    pub witness: Option<(i64, BigRational)>,
    pub pass: bool,
}

/// Verify that `prod_{j=l+1}^{k} T_j` has no frequencies in `0 < |alpha| < h_l`.
///
/// Every exponent of the product is a signed sum of `Theta_j` exponents with
/// at most one contribution per stage `j > l`, and any nonempty such sum has
/// magnitude at least `h_l`; the report records the observed minimum.
pub fn check_gap(family: &ThetaFamily, l: usize, k: usize) -> Result<GapReport> {
    if l >= k {
        return Err(Error::InvalidLevel {
            level: k,
            need: "k > l",
        });
    }
    family.ensure_stage(k)?;
    let mut acc = TProduct::identity(l);
    acc.extend_to(family, k)?;
    let h_l = family.heights().h(l).clone();
    let h_l_i64 = family.height_i64(l);
    let mut witness = None;
    let mut min_positive = None;
    for (e, c) in acc.numerator_terms() {
        if e > 0 && min_positive.is_none() {
            min_positive = Some(e);
        }
        if e != 0 && e.abs() < h_l_i64 && witness.is_none() {
            witness = Some((
                e,
                BigRational::new(
                    c.clone().into(),
                    num_bigint::BigInt::from(acc.denominator().clone()),
                ),
            ));
        }
    }
    let pass = witness.is_none() && min_positive.map(|e| e >= h_l_i64).unwrap_or(false);
    Ok(GapReport {
        l,
        k,
        h_l,
        min_positive_exponent: min_positive,
        witness,
        pass,
    })
}
