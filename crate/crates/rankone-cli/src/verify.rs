//! The `verify` subcommand: one machine-readable report running every model
//! invariant at a configured desk scale.
//!
//! Each check names the module it exercises and the invariant it asserts, and
//! carries the parameters it ran with; a failing check carries one minimal
//! witness. Zero-freeness certificates are reported as `info` — they test a
//! hypothesis about the schedule, not an invariant of the construction — so
//! they never affect the overall verdict.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use rankone::odometer::{
    ball_from_ordinal, ball_measure, ball_successor, enumerate_balls, exceptional_ball, subdivide,
    top_split, upsilon,
};
use rankone::spectral::{
    check_gap, gram, inner_product, refinement_invariance, riesz_partial, zero_certificate,
    Indicator, ThetaFamily, ZeroCertificate, DEFAULT_GRID,
};
use rankone::{heights, BallAddress, CutSpacerSchedule, Result, SuccessorResult};

use crate::config::{CapsConfig, ScheduleConfig};
use crate::output::CONVENTION_NOTES;

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub system: ScheduleConfig,
    pub convention_notes: [&'static str; 2],
    #[serde(rename = "K_test")]
    pub k_test: usize,
    pub n_test: usize,
    pub all_pass: bool,
    pub checks: Vec<Check>,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub params: Value,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Check {
    fn from_witness(name: &'static str, params: Value, witness: Option<Value>) -> Self {
        Self {
            name,
            params,
            status: if witness.is_none() { "pass" } else { "fail" },
            witness,
        }
    }

    fn info(name: &'static str, params: Value, witness: Value) -> Self {
        Self {
            name,
            params,
            status: "info",
            witness: Some(witness),
        }
    }
}

/// Run the whole suite. Ranges are clamped to the depth of an explicit
/// schedule; resource errors (caps, missing stages) abort the report.
pub fn verify(
    system: &ScheduleConfig,
    schedule: &CutSpacerSchedule,
    k_test: usize,
    n_test: usize,
    caps: &CapsConfig,
) -> Result<VerifyReport> {
    let depth = schedule.depth();
    let clamp = |requested: usize| depth.map_or(requested, |d| requested.min(d));
    let k_max = clamp(k_test);
    let n_max = clamp(n_test);

    let mut checks = vec![
        heights_vs_enumeration(schedule, k_max, caps.enumeration)?,
        successor_orbit(schedule, k_max)?,
        ordinal_roundtrip(schedule, k_max)?,
        subdivision_measure(schedule, clamp(k_max + 1).saturating_sub(1))?,
        top_split_measure(schedule, k_max, depth)?,
    ];

    let family = ThetaFamily::with_caps(schedule.clone(), n_max, caps.spectral())?;
    checks.extend(partial_product_laws(&family, n_max)?);
    checks.push(spectral_gap(&family, n_max)?);
    checks.push(gram_identity(&family, k_max.min(n_max), n_max)?);
    checks.push(cyclic_pairings(schedule, &family, k_max.min(n_max).min(2), n_max)?);
    checks.push(refinement(schedule, &family, k_max.min(n_max.saturating_sub(1)), n_max)?);
    for k in 1..=n_max {
        checks.push(zero_freeness(&family, k)?);
    }

    let all_pass = checks.iter().all(|check| check.status != "fail");
    Ok(VerifyReport {
        command: "verify",
        system: system.clone(),
        convention_notes: CONVENTION_NOTES,
        k_test,
        n_test,
        all_pass,
        checks,
    })
}

fn heights_vs_enumeration(
    schedule: &CutSpacerSchedule,
    k_max: usize,
    cap: usize,
) -> Result<Check> {
    let table = heights(schedule, k_max)?;
    let mut witness = None;
    for k in 0..=k_max {
        let balls = enumerate_balls(schedule, k, cap)?;
        if BigUint::from(balls.len()) != *table.h(k) {
            witness = Some(json!({
                "k": k,
                "height": table.h(k).to_string(),
                "enumerated": balls.len(),
            }));
            break;
        }
    }
    Ok(Check::from_witness(
        "system/heights_vs_enumeration",
        json!({ "K": k_max, "cap": cap }),
        witness,
    ))
}

fn successor_orbit(schedule: &CutSpacerSchedule, k_max: usize) -> Result<Check> {
    let mut witness = None;
    'levels: for k in 1..=k_max {
        let expected = heights(schedule, k)?.h(k).clone();
        let mut current = BallAddress::base(schedule, k)?;
        let mut count = BigUint::zero();
        loop {
            if upsilon(schedule, &current)? != count {
                witness = Some(json!({
                    "k": k,
                    "step": count.to_string(),
                    "ball": current.to_string(),
                    "ordinal": upsilon(schedule, &current)?.to_string(),
                }));
                break 'levels;
            }
            count += 1u32;
            match ball_successor(schedule, &current)? {
                SuccessorResult::Next(next) => current = next,
                SuccessorResult::Top => break,
            }
        }
        if count != expected {
            witness = Some(json!({
                "k": k,
                "visited": count.to_string(),
                "height": expected.to_string(),
            }));
            break;
        }
    }
    Ok(Check::from_witness(
        "odometer/successor_orbit",
        json!({ "K": k_max }),
        witness,
    ))
}

fn ordinal_roundtrip(schedule: &CutSpacerSchedule, k_max: usize) -> Result<Check> {
    let mut witness = None;
    'levels: for k in 1..=k_max {
        let height = heights(schedule, k)?.h(k).clone();
        let mut ordinal = BigUint::zero();
        while ordinal < height {
            let ball = ball_from_ordinal(schedule, k, &ordinal)?;
            if upsilon(schedule, &ball)? != ordinal {
                witness = Some(json!({
                    "k": k,
                    "ordinal": ordinal.to_string(),
                    "ball": ball.to_string(),
                }));
                break 'levels;
            }
            ordinal += 1u32;
        }
    }
    Ok(Check::from_witness(
        "odometer/ordinal_roundtrip",
        json!({ "K": k_max }),
        witness,
    ))
}

fn subdivision_measure(schedule: &CutSpacerSchedule, k_max: usize) -> Result<Check> {
    let mut witness = None;
    'levels: for k in 1..=k_max {
        for ball in enumerate_balls(schedule, k, usize::MAX)? {
            let whole = ball_measure(schedule, &ball)?;
            let mut parts = BigRational::zero();
            for child in subdivide(schedule, &ball)? {
                parts += ball_measure(schedule, &child)?;
            }
            if whole != parts {
                witness = Some(json!({
                    "ball": ball.to_string(),
                    "measure": crate::output::rational(&whole),
                    "children_total": crate::output::rational(&parts),
                }));
                break 'levels;
            }
        }
    }
    Ok(Check::from_witness(
        "odometer/subdivision_measure",
        json!({ "K": k_max }),
        witness,
    ))
}

fn top_split_measure(
    schedule: &CutSpacerSchedule,
    k_max: usize,
    depth: Option<usize>,
) -> Result<Check> {
    let mut witness = None;
    for k in 1..=k_max {
        let max_level = depth.map_or(k + 6, |d| (k + 6).min(d));
        if max_level <= k {
            continue;
        }
        let split = top_split(schedule, k, max_level)?;
        let mut total = split.residual_measure.clone();
        for piece in &split.pieces {
            total += ball_measure(schedule, piece)?;
        }
        let top = exceptional_ball(schedule, k)?;
        let expected = ball_measure(schedule, &top)?;
        if total != expected {
            witness = Some(json!({
                "k": k,
                "max_level": max_level,
                "total": crate::output::rational(&total),
                "expected": crate::output::rational(&expected),
            }));
            break;
        }
    }
    Ok(Check::from_witness(
        "odometer/top_split_measure",
        json!({ "K": k_max, "extra_levels": 6 }),
        witness,
    ))
}

fn partial_product_laws(family: &ThetaFamily, n_max: usize) -> Result<Vec<Check>> {
    let one = BigRational::one();
    let mut constant_term = None;
    let mut palindromic = None;
    let mut unit_interval = None;
    let mut monotone = None;
    let mut mass = None;
    let mut previous = riesz_partial(family, 0)?.into_polynomial();
    let mut radix_product = BigRational::one();
    for n in 1..=n_max {
        let current = riesz_partial(family, n)?.into_polynomial();
        radix_product *= BigRational::from_integer(family.schedule().cuts(n)?.into());
        if constant_term.is_none() && current.coeff(0) != one {
            constant_term = Some(json!({
                "n": n,
                "value": crate::output::rational(&current.coeff(0)),
            }));
        }
        if palindromic.is_none() && !current.is_palindromic() {
            palindromic = Some(json!({ "n": n }));
        }
        if mass.is_none() && current.value_at_one() != radix_product {
            mass = Some(json!({
                "n": n,
                "value": crate::output::rational(&current.value_at_one()),
                "expected": crate::output::rational(&radix_product),
            }));
        }
        for (alpha, coeff) in current.terms() {
            if unit_interval.is_none() && (coeff < &BigRational::zero() || coeff > &one) {
                unit_interval = Some(json!({
                    "n": n,
                    "alpha": alpha,
                    "value": crate::output::rational(coeff),
                }));
            }
            if monotone.is_none() && previous.coeff(alpha) > *coeff {
                monotone = Some(json!({
                    "n": n,
                    "alpha": alpha,
                    "value": crate::output::rational(coeff),
                    "previous": crate::output::rational(&previous.coeff(alpha)),
                }));
            }
        }
        previous = current;
    }
    let params = json!({ "n": n_max });
    Ok(vec![
        Check::from_witness("spectral/constant_term", params.clone(), constant_term),
        Check::from_witness("spectral/palindromic", params.clone(), palindromic),
        Check::from_witness("spectral/unit_interval", params.clone(), unit_interval),
        Check::from_witness("spectral/monotone_coefficients", params.clone(), monotone),
        Check::from_witness("spectral/mass_at_one", params, mass),
    ])
}

fn spectral_gap(family: &ThetaFamily, n_max: usize) -> Result<Check> {
    let mut witness = None;
    'ranges: for l in 1..n_max {
        for k in l + 1..=n_max {
            let report = check_gap(family, l, k)?;
            if !report.pass {
                witness = Some(json!({
                    "l": l,
                    "k": k,
                    "h_l": report.h_l.to_string(),
                    "min_positive_exponent": report.min_positive_exponent,
                }));
                break 'ranges;
            }
        }
    }
    Ok(Check::from_witness(
        "spectral/gap",
        json!({ "n": n_max }),
        witness,
    ))
}

fn gram_identity(family: &ThetaFamily, k_max: usize, n_max: usize) -> Result<Check> {
    let mut witness = None;
    'levels: for k in 1..=k_max {
        for n in k..=n_max {
            let report = gram(family, k, n)?;
            if !report.pass {
                let bad = report.witness.expect("failing gram reports carry a witness");
                witness = Some(json!({
                    "k": k,
                    "n": n,
                    "row": bad.row,
                    "col": bad.col,
                    "value": crate::output::rational(&bad.value),
                    "expected": crate::output::rational(&bad.expected),
                }));
                break 'levels;
            }
        }
    }
    Ok(Check::from_witness(
        "spectral/gram_identity",
        json!({ "K": k_max, "n": n_max }),
        witness,
    ))
}

fn cyclic_pairings(
    schedule: &CutSpacerSchedule,
    family: &ThetaFamily,
    k_max: usize,
    n: usize,
) -> Result<Check> {
    let mut witness = None;
    'levels: for k in 1..=k_max {
        for ball in enumerate_balls(schedule, k, usize::MAX)? {
            let expected = if ball.floor() == 0 {
                ball_measure(schedule, &ball)?
            } else {
                BigRational::zero()
            };
            let got = inner_product(family, &Indicator::Cyclic, &Indicator::Ball(ball.clone()), n)?;
            if got != expected {
                witness = Some(json!({
                    "ball": ball.to_string(),
                    "pairing": crate::output::rational(&got),
                    "expected": crate::output::rational(&expected),
                }));
                break 'levels;
            }
        }
    }
    Ok(Check::from_witness(
        "spectral/cyclic_pairings",
        json!({ "K": k_max, "n": n }),
        witness,
    ))
}

fn refinement(
    schedule: &CutSpacerSchedule,
    family: &ThetaFamily,
    k_max: usize,
    n: usize,
) -> Result<Check> {
    let mut witness = None;
    for k in 1..=k_max {
        let base = BallAddress::base(schedule, k)?;
        let report = refinement_invariance(family, &base, n)?;
        if !report.pass {
            witness = Some(json!({
                "k": k,
                "child_offsets": report.child_offsets,
                "stage_exponents": report.stage_exponents,
                "norm_direct": crate::output::rational(&report.norm_direct),
                "norm_refined": crate::output::rational(&report.norm_refined),
            }));
            break;
        }
    }
    Ok(Check::from_witness(
        "spectral/refinement",
        json!({ "K": k_max, "n": n }),
        witness,
    ))
}

fn zero_freeness(family: &ThetaFamily, k: usize) -> Result<Check> {
    let witness = match zero_certificate(family, k, DEFAULT_GRID)? {
        ZeroCertificate::Certified {
            grid,
            min_modulus,
            lipschitz,
            margin,
        } => json!({
            "certified": true,
            "grid": grid,
            "min_modulus": min_modulus,
            "lipschitz": lipschitz,
            "margin": margin,
        }),
        ZeroCertificate::NotCertified {
            grid,
            witness_theta,
            witness_modulus,
            lipschitz,
        } => json!({
            "certified": false,
            "grid": grid,
            "witness_theta": witness_theta,
            "witness_modulus": witness_modulus,
            "lipschitz": lipschitz,
        }),
    };
    Ok(Check::info(
        "spectral/zero_certificate",
        json!({ "k": k, "grid": DEFAULT_GRID }),
        witness,
    ))
}
