//! Floating-point sampling of stage polynomials on the unit circle.
//!
//! Everything else in the crate is exact; this module hosts the two numeric
//! surfaces. Both work from the integer exponent lists of the stage
//! polynomials (whose coefficients are all 1), so the only float error is in
//! `sin`/`cos` and the final sums.
//!
//! [`zero_certificate`] decides zero-freeness of `Theta_k` on the circle with
//! an interval argument: if the minimum of `|Theta_k|` over an `N`-point
//! equispaced grid exceeds `pi * L / N`, where `L` (the sum of the exponents)
//! bounds the derivative, then `|Theta_k|` is positive everywhere. Grids
//! double until the margin certifies or [`REFINEMENT_CAP`] is reached; a grid
//! minimum near zero is reported as a witness, not as a disproof, since a
//! small modulus on the grid decides nothing by itself.

use crate::error::Result;

use super::ThetaFamily;

/// Default number of equispaced circle samples.
pub const DEFAULT_GRID: usize = 1 << 14;

/// Largest grid the certificate search will refine to.
pub const REFINEMENT_CAP: usize = 1 << 20;

/// Outcome of the zero-freeness test for one stage polynomial.
#[derive(Debug, Clone, PartialEq)]
pub enum ZeroCertificate {
    /// `|Theta_k| > 0` everywhere on the circle, proven by a grid minimum
    /// exceeding the Lipschitz slack `pi * lipschitz / grid`.
    Certified {
        grid: usize,
        min_modulus: f64,
        lipschitz: f64,
        /// `min_modulus - pi * lipschitz / grid`, positive.
        margin: f64,
    },
    /// No grid up to the refinement cap certified positivity; the smallest
    /// modulus seen on the final grid is reported as a near-zero witness.
    NotCertified {
        grid: usize,
        witness_theta: f64,
        witness_modulus: f64,
        lipschitz: f64,
    },
}

impl ZeroCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, ZeroCertificate::Certified { .. })
    }
}

/// `|sum_e exp(i e theta)|` over the given exponents.
fn modulus_at(exponents: &[f64], theta: f64) -> f64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for &e in exponents {
        let (s, c) = (e * theta).sin_cos();
        re += c;
        im += s;
    }
    re.hypot(im)
}

/// Decide whether `Theta_k` is zero-free on the unit circle, starting from
/// the given grid size (raised to at least 2) and doubling up to
/// [`REFINEMENT_CAP`].
pub fn zero_certificate(family: &ThetaFamily, k: usize, grid: usize) -> Result<ZeroCertificate> {
    let exponents: Vec<f64> = family
        .theta_exponents(k)?
        .iter()
        .map(|&e| e as f64)
        .collect();
    let lipschitz: f64 = exponents.iter().sum();
    let mut n_points = grid.max(2);
    loop {
        let mut min_modulus = f64::INFINITY;
        let mut witness_theta = 0.0;
        for j in 0..n_points {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n_points as f64;
            let modulus = modulus_at(&exponents, theta);
            if modulus < min_modulus {
                min_modulus = modulus;
                witness_theta = theta;
            }
        }
        let slack = std::f64::consts::PI * lipschitz / n_points as f64;
        if min_modulus > slack {
            return Ok(ZeroCertificate::Certified {
                grid: n_points,
                min_modulus,
                lipschitz,
                margin: min_modulus - slack,
            });
        }
        if n_points >= REFINEMENT_CAP {
            return Ok(ZeroCertificate::NotCertified {
                grid: n_points,
                witness_theta,
                witness_modulus: min_modulus,
                lipschitz,
            });
        }
        n_points *= 2;
    }
}

/// One sample of the stage-`n` product density on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySample {
    pub theta: f64,
    pub density: f64,
}

/// Sample `P_n(theta) = prod_{k<=n} |Theta_k(e^{i theta})|^2 / m_k` on an
/// equispaced grid over `[0, 2 pi)`.
///
/// The product is evaluated in factored form — one small modulus per stage —
/// rather than from the expanded coefficients, so the work per sample is the
/// number of stage terms rather than the support of `P_n`, and the float
/// error stays at a few ulps per stage.
pub fn density_samples(family: &ThetaFamily, n: usize, grid: usize) -> Result<Vec<DensitySample>> {
    let mut stages = Vec::with_capacity(n);
    for k in 1..=n {
        let exponents: Vec<f64> = family
            .theta_exponents(k)?
            .iter()
            .map(|&e| e as f64)
            .collect();
        let m = f64::from(family.schedule().cuts(k)?);
        stages.push((exponents, m));
    }
    let grid = grid.max(1);
    let mut samples = Vec::with_capacity(grid);
    for j in 0..grid {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / grid as f64;
        let mut density = 1.0;
        for (exponents, m) in &stages {
            let modulus = modulus_at(exponents, theta);
            density *= modulus * modulus / m;
        }
        samples.push(DensitySample { theta, density });
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{s1, s2};
    use super::*;
    use crate::spectral::riesz_partial;

    #[test]
    fn doubled_stage_certifies_nothing() {
        // Theta_1 = 1 + z vanishes at theta = pi, which every even grid hits.
        let f = ThetaFamily::new(s1(), 1).unwrap();
        let cert = zero_certificate(&f, 1, 64).unwrap();
        let ZeroCertificate::NotCertified {
            grid,
            witness_theta,
            witness_modulus,
            lipschitz,
        } = cert
        else {
            panic!("expected a near-zero witness, got {cert:?}");
        };
        assert_eq!(grid, REFINEMENT_CAP);
        assert!((witness_theta - std::f64::consts::PI).abs() < 1e-9);
        assert!(witness_modulus < 1e-9);
        assert_eq!(lipschitz, 1.0);
    }

    #[test]
    fn spaced_stage_is_certified_zero_free() {
        // Theta_1 = 1 + z + z^3 has no zeros on the circle; the minimum
        // modulus is about 1, far above the grid slack.
        let f = ThetaFamily::new(s2(), 2).unwrap();
        let cert = zero_certificate(&f, 1, 256).unwrap();
        let ZeroCertificate::Certified {
            grid,
            min_modulus,
            lipschitz,
            margin,
        } = cert
        else {
            panic!("expected a certificate, got {cert:?}");
        };
        assert_eq!(grid, 256); // no refinement needed
        assert_eq!(lipschitz, 4.0);
        assert!(margin > 0.0 && min_modulus > margin);
        assert!(zero_certificate(&f, 2, 256).unwrap().is_certified());
    }

    #[test]
    fn density_matches_closed_form_values() {
        // At theta = 0 every stage contributes m_k, so P_n(0) = m_1 ... m_n.
        let f = ThetaFamily::new(s1(), 3).unwrap();
        let samples = density_samples(&f, 3, 8).unwrap();
        assert_eq!(samples.len(), 8);
        assert_eq!(samples[0].theta, 0.0);
        assert!((samples[0].density - 8.0).abs() < 1e-9);
        // Theta_1(e^{i pi}) = 0 kills the product at theta = pi.
        let samples = density_samples(&f, 2, 2).unwrap();
        assert!(samples[1].density < 1e-15);
    }

    #[test]
    fn factored_sampling_matches_the_expanded_polynomial() {
        let f = ThetaFamily::new(s2(), 3).unwrap();
        let expanded = riesz_partial(&f, 3).unwrap().into_polynomial();
        for sample in density_samples(&f, 3, 64).unwrap() {
            let direct = expanded.eval_unit_circle(sample.theta);
            assert!(direct.im.abs() < 1e-9);
            assert!((direct.re - sample.density).abs() < 1e-9, "at {}", sample.theta);
        }
    }

    #[test]
    fn grid_mean_recovers_the_constant_coefficient() {
        // An equispaced mean on more than 2 h_n points integrates the density
        // exactly, and the constant coefficient of P_n is 1.
        let f = ThetaFamily::new(s1(), 2).unwrap();
        let samples = density_samples(&f, 2, 16).unwrap();
        let mean: f64 = samples.iter().map(|s| s.density).sum::<f64>() / 16.0;
        assert!((mean - 1.0).abs() < 1e-12);
        assert!(samples.iter().all(|s| s.density >= -1e-12));
    }
}
