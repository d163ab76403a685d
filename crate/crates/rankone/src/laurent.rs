//! Exact Laurent polynomials over the rationals.
//!
//! The carrier type for all spectral data: a polynomial in `z` and `z^{-1}`
//! with `BigRational` coefficients, stored densely over its support interval
//! `[lo, hi]`. The representation is canonical — both end coefficients are
//! nonzero and the zero polynomial is the empty interval — so `==` is
//! structural equality of values.
//!
//! Multiplication is exact convolution. The loop iterates over the nonzero
//! terms of the sparser operand and streams over the denser one, so the cost
//! of multiplying by a stage polynomial with `m` terms is `O(m * support)`,
//! which is what keeps partial Riesz products cheap: their supports grow like
//! the tower heights while the factors stay tiny.
//!
//! [`DenseIntLaurent`] is an internal companion used by the spectral module to
//! carry products of stage factors as integer coefficient arrays over a single
//! running denominator `m_1 ... m_n`, deferring every GCD to the final
//! per-coefficient reduction.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// A Laurent polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPolynomial {
    /// Exponent of `coeffs[0]`; meaningless when `coeffs` is empty.
    lo: i64,
    /// Dense coefficients for exponents `lo ..= lo + coeffs.len() - 1`,
    /// trimmed so that both ends are nonzero. Empty means zero.
    coeffs: Vec<BigRational>,
}

impl LaurentPolynomial {
    fn normalized(lo: i64, mut coeffs: Vec<BigRational>) -> Self {
        let leading_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if leading_zeros == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..leading_zeros);
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Self {
            lo: lo + leading_zeros as i64,
            coeffs,
        }
    }

    /// The zero polynomial (empty support).
    pub fn zero() -> Self {
        Self {
            lo: 0,
            coeffs: Vec::new(),
        }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self::monomial(0, BigRational::one())
    }

    /// `c * z^exp`.
    pub fn monomial(exp: i64, c: BigRational) -> Self {
        Self::normalized(exp, vec![c])
    }

    /// Sum of unit monomials `z^e` over the listed exponents; repeats add up.
    pub fn from_exponents(exps: &[i64]) -> Self {
        Self::from_terms(exps.iter().map(|&e| (e, BigRational::one())))
    }

    /// Build from `(exponent, coefficient)` terms; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(terms: I) -> Self {
        let terms: Vec<(i64, BigRational)> = terms.into_iter().collect();
        let Some(lo) = terms.iter().map(|&(e, _)| e).min() else {
            return Self::zero();
        };
        let hi = terms.iter().map(|&(e, _)| e).max().expect("nonempty");
        let mut coeffs = vec![BigRational::zero(); (hi - lo) as usize + 1];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::normalized(lo, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent of the support, `None` for the zero polynomial.
    pub fn lo(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.lo)
    }

    /// Highest exponent of the support, `None` for the zero polynomial.
    pub fn hi(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.lo + self.coeffs.len() as i64 - 1)
    }

    /// Width of the stored support interval (0 for the zero polynomial).
    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Coefficient of `z^alpha` (zero off the support).
    pub fn coeff(&self, alpha: i64) -> BigRational {
        self.coeff_ref(alpha).cloned().unwrap_or_else(BigRational::zero)
    }

    fn coeff_ref(&self, alpha: i64) -> Option<&BigRational> {
        if self.is_zero() {
            return None;
        }
        let index = alpha.checked_sub(self.lo)?;
        if index < 0 {
            return None;
        }
        self.coeffs.get(index as usize)
    }

    /// Iterate `(exponent, coefficient)` over the nonzero terms in order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.lo + i as i64, c))
    }

    /// Exact sum `p + q`.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().unwrap().max(other.hi().unwrap());
        let mut coeffs = vec![BigRational::zero(); (hi - lo) as usize + 1];
        for (e, c) in self.terms() {
            coeffs[(e - lo) as usize] += c;
        }
        for (e, c) in other.terms() {
            coeffs[(e - lo) as usize] += c;
        }
        Self::normalized(lo, coeffs)
    }

    /// Exact product `p * q` by convolution.
    ///
    /// Iterates the nonzero terms of the operand with fewer of them and
    /// streams over the dense coefficients of the other, so sparse-by-dense
    /// products cost `O(terms_sparse * support_dense)`.
    pub fn multiply(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (sparse, dense) = if self.term_count() <= other.term_count() {
            (self, other)
        } else {
            (other, self)
        };
        let lo = sparse.lo + dense.lo;
        let len = sparse.coeffs.len() + dense.coeffs.len() - 1;
        let mut out = vec![BigRational::zero(); len];
        for (i, c) in sparse.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, d) in dense.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    out[i + j] += c * d;
                }
            }
        }
        Self::normalized(lo, out)
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// `p(1/z)`: reverse the coefficients around exponent 0.
    pub fn reflect(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self {
            lo: -self.hi().unwrap(),
            coeffs,
        }
    }

    /// Whether `coeff(alpha) == coeff(-alpha)` for every exponent.
    pub fn is_palindromic(&self) -> bool {
        *self == self.reflect()
    }

    /// Exact value at `z = 1`, i.e. the coefficient sum.
    pub fn value_at_one(&self) -> BigRational {
        self.coeffs.iter().sum()
    }

    /// Value at `z = e^{i theta}`, the crate's only floating-point surface
    /// on exact data.
    ///
    /// Each term contributes `c * e^{i alpha theta}` in `f64`; the absolute
    /// error is bounded by a few ulps of `sum |c_alpha|` plus the sin/cos
    /// argument error, which grows with `|alpha| * theta`.
    pub fn eval_unit_circle(&self, theta: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in self.terms() {
            let c = c.to_f64().expect("rational fits f64 range");
            let (s, co) = (e as f64 * theta).sin_cos();
            acc += Complex64::new(c * co, c * s);
        }
        acc
    }
}

impl std::ops::Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        LaurentPolynomial::add(self, rhs)
    }
}

impl std::ops::Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.multiply(rhs)
    }
}

impl std::fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (count, (e, c)) in self.terms().enumerate() {
            if count > 0 {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{e}")?,
            }
        }
        Ok(())
    }
}

/// Dense nonnegative-integer Laurent polynomial: the internal carrier for
/// numerators of stage-factor products (coefficients of `prod Theta_j(z) *
/// Theta_j(1/z)` are nonnegative integers).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct DenseIntLaurent {
    lo: i64,
    coeffs: Vec<BigUint>,
}

impl DenseIntLaurent {
    pub(crate) fn one() -> Self {
        Self {
            lo: 0,
            coeffs: vec![BigUint::one()],
        }
    }

    /// Support length after multiplying by a polynomial with the given
    /// exponent spread, for cap checks before allocating.
    pub(crate) fn support_len_after(&self, exps: &[i64]) -> usize {
        let emin = exps.iter().copied().min().unwrap_or(0);
        let emax = exps.iter().copied().max().unwrap_or(0);
        self.coeffs.len() + (emax - emin) as usize
    }

    /// Multiply by `sum_e z^e` over the listed (distinct) exponents: one
    /// shifted add per exponent.
    pub(crate) fn mul_exponents(&self, exps: &[i64]) -> Self {
        let emin = exps.iter().copied().min().expect("nonempty exponent list");
        let emax = exps.iter().copied().max().expect("nonempty exponent list");
        let lo = self.lo + emin;
        let mut out = vec![BigUint::zero(); self.coeffs.len() + (emax - emin) as usize];
        for &e in exps {
            let shift = (e - emin) as usize;
            for (i, c) in self.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    out[i + shift] += c;
                }
            }
        }
        Self { lo, coeffs: out }
    }

    /// Coefficient of `z^alpha` (zero off the support).
    pub(crate) fn coeff(&self, alpha: i64) -> BigUint {
        let Some(index) = alpha.checked_sub(self.lo) else {
            return BigUint::zero();
        };
        if index < 0 {
            return BigUint::zero();
        }
        self.coeffs
            .get(index as usize)
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }

    /// Nonzero `(exponent, coefficient)` pairs in exponent order.
    pub(crate) fn terms(&self) -> impl Iterator<Item = (i64, &BigUint)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.lo + i as i64, c))
    }

    /// Reduce every coefficient over the common denominator.
    pub(crate) fn to_rational(&self, denominator: &BigUint) -> LaurentPolynomial {
        let d = num_bigint::BigInt::from(denominator.clone());
        LaurentPolynomial::normalized(
            self.lo,
            self.coeffs
                .iter()
                .map(|c| BigRational::new(c.clone().into(), d.clone()))
                .collect(),
        )
    }
}
