//! Acceptance gate: each test is one numbered end-to-end criterion and prints
//! a single `acceptance N (...): PASS|FAIL` line. Exact checks use rational
//! arithmetic and independent oracles written against the digit model, not
//! against the library internals they exercise.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rankone::odometer::{
    ball_from_ordinal, ball_measure, ball_successor, enumerate_balls, exceptional_ball, subdivide,
    top_split, upsilon,
};
use rankone::spectral::{
    check_gap, density_samples, gram, inner_product, refinement_invariance, riesz_partial,
    zero_certificate, Indicator, ThetaFamily, ZeroCertificate,
};
use rankone::{heights, BallAddress, CutSpacerSchedule, SuccessorResult};

fn s1() -> CutSpacerSchedule {
    CutSpacerSchedule::periodic(vec![2], vec![vec![1]]).unwrap()
}

fn s2() -> CutSpacerSchedule {
    CutSpacerSchedule::periodic(vec![3], vec![vec![1, 2]]).unwrap()
}

/// The two reference systems plus five seeded pseudo-random eventually
/// periodic schedules with cuts in 2..=5 and spacers in 1..=4.
fn test_systems() -> Vec<(String, CutSpacerSchedule)> {
    let mut systems = vec![("S1".to_string(), s1()), ("S2".to_string(), s2())];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_CA5E);
    let stage = |rng: &mut ChaCha8Rng| {
        let m: u32 = rng.random_range(2..=5);
        let a: Vec<u64> = (0..m - 1).map(|_| rng.random_range(1..=4)).collect();
        (m, a)
    };
    for index in 0..5 {
        let preamble_len = rng.random_range(0..=2);
        let period_len = rng.random_range(1..=3);
        let mut preamble_m = Vec::new();
        let mut preamble_a = Vec::new();
        for _ in 0..preamble_len {
            let (m, a) = stage(&mut rng);
            preamble_m.push(m);
            preamble_a.push(a);
        }
        let mut period_m = Vec::new();
        let mut period_a = Vec::new();
        for _ in 0..period_len {
            let (m, a) = stage(&mut rng);
            period_m.push(m);
            period_a.push(a);
        }
        let schedule =
            CutSpacerSchedule::eventually_periodic(preamble_m, preamble_a, period_m, period_a)
                .expect("generated stages satisfy the schedule bounds");
        systems.push((format!("R{index}"), schedule));
    }
    systems
}

fn conclude(criterion: u32, label: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("acceptance {criterion} ({label}): PASS");
    } else {
        println!("acceptance {criterion} ({label}): FAIL");
        panic!(
            "acceptance {criterion} ({label}) failed with {} problem(s):\n{}",
            failures.len(),
            failures.join("\n")
        );
    }
}

fn check_runtime(failures: &mut Vec<String>, start: Instant, bound: Duration, label: &str) {
    let elapsed = start.elapsed();
    if elapsed > bound {
        failures.push(format!("{label} took {elapsed:?}, over the {bound:?} budget"));
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn criterion_1_heights_match_enumeration() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (name, schedule) in test_systems() {
        let table = heights(&schedule, 7).unwrap();
        for k in 0..=7 {
            match enumerate_balls(&schedule, k, 1_000_000) {
                Ok(balls) => {
                    if BigUint::from(balls.len()) != *table.h(k) {
                        failures.push(format!(
                            "{name}: h_{k} = {} but enumeration found {} balls",
                            table.h(k),
                            balls.len()
                        ));
                    }
                }
                Err(e) => failures.push(format!("{name}: enumeration failed at level {k}: {e}")),
            }
        }
    }
    check_runtime(&mut failures, start, Duration::from_secs(10), "criterion 1");
    conclude(1, "heights vs enumeration", failures);
}

#[test]
fn criterion_2_successor_orbit_realizes_the_ordinal_order() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (name, schedule) in test_systems() {
        for k in 1..=6usize {
            let expected = heights(&schedule, k).unwrap().h(k).clone();
            let mut current = BallAddress::base(&schedule, k).unwrap();
            let mut count = BigUint::zero();
            loop {
                match upsilon(&schedule, &current) {
                    Ok(ordinal) if ordinal == count => {}
                    Ok(ordinal) => {
                        failures.push(format!(
                            "{name}: ball {current} visited at step {count} has ordinal {ordinal}"
                        ));
                        break;
                    }
                    Err(e) => {
                        failures.push(format!("{name}: ordinal of {current} failed: {e}"));
                        break;
                    }
                }
                match ball_from_ordinal(&schedule, k, &count) {
                    Ok(ball) if ball == current => {}
                    Ok(ball) => {
                        failures.push(format!(
                            "{name}: ordinal {count} at level {k} decodes to {ball}, not {current}"
                        ));
                        break;
                    }
                    Err(e) => {
                        failures.push(format!("{name}: decoding ordinal {count} failed: {e}"));
                        break;
                    }
                }
                count += 1u32;
                match ball_successor(&schedule, &current).unwrap() {
                    SuccessorResult::Next(next) => current = next,
                    SuccessorResult::Top => break,
                }
            }
            if count != expected {
                failures.push(format!(
                    "{name}: level {k} orbit visited {count} balls, expected h_{k} = {expected}"
                ));
            }
        }
    }
    check_runtime(&mut failures, start, Duration::from_secs(30), "criterion 2");
    conclude(2, "successor orbit and ordinal inversion", failures);
}

#[test]
fn criterion_3_measure_is_conserved_by_subdivision_and_top_split() {
    let mut failures = Vec::new();
    for (name, schedule) in test_systems() {
        for k in 1..=5usize {
            for ball in enumerate_balls(&schedule, k, 1_000_000).unwrap() {
                let whole = ball_measure(&schedule, &ball).unwrap();
                let parts: BigRational = subdivide(&schedule, &ball)
                    .unwrap()
                    .iter()
                    .map(|child| ball_measure(&schedule, child).unwrap())
                    .sum();
                if whole != parts {
                    failures.push(format!(
                        "{name}: subdividing {ball} gives total measure {parts}, not {whole}"
                    ));
                }
            }

            let split = top_split(&schedule, k, k + 6).unwrap();
            let mut total = split.residual_measure.clone();
            for piece in &split.pieces {
                total += ball_measure(&schedule, piece).unwrap();
            }
            let top = exceptional_ball(&schedule, k).unwrap();
            let expected = ball_measure(&schedule, &top).unwrap();
            if total != expected {
                failures.push(format!(
                    "{name}: image of {top} splits into total measure {total}, not {expected}"
                ));
            }
        }
    }
    conclude(3, "measure conservation", failures);
}

#[test]
fn criterion_4_partial_product_coefficient_laws_and_gap() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let one = BigRational::one();
    for (name, schedule) in test_systems() {
        let family = ThetaFamily::new(schedule.clone(), 6).unwrap();
        let mut previous = riesz_partial(&family, 0).unwrap().into_polynomial();
        let mut radix_product = BigRational::one();
        for n in 1..=6usize {
            let current = riesz_partial(&family, n).unwrap().into_polynomial();
            radix_product *= rat(i64::from(schedule.cuts(n).unwrap()), 1);
            if current.coeff(0) != one {
                failures.push(format!("{name}: P_{n} has constant term {}", current.coeff(0)));
            }
            if !current.is_palindromic() {
                failures.push(format!("{name}: P_{n} is not palindromic"));
            }
            if current.value_at_one() != radix_product {
                failures.push(format!(
                    "{name}: P_{n}(1) = {}, expected {radix_product}",
                    current.value_at_one()
                ));
            }
            for (alpha, coeff) in current.terms() {
                if coeff < &BigRational::zero() || coeff > &one {
                    failures.push(format!(
                        "{name}: coeff(P_{n}, {alpha}) = {coeff} is outside [0, 1]"
                    ));
                    break;
                }
                if previous.coeff(alpha) > *coeff {
                    failures.push(format!(
                        "{name}: coeff(P_{n}, {alpha}) = {coeff} dropped below the stage-{} value {}",
                        n - 1,
                        previous.coeff(alpha)
                    ));
                    break;
                }
            }
            previous = current;
        }
        for l in 1..6usize {
            for k in l + 1..=6 {
                let report = check_gap(&family, l, k).unwrap();
                if !report.pass {
                    failures.push(format!(
                        "{name}: gap check failed for stages {l} < j <= {k}: witness {:?}, \
                         minimal positive exponent {:?} vs h_{l} = {}",
                        report.witness, report.min_positive_exponent, report.h_l
                    ));
                }
            }
        }
    }
    check_runtime(&mut failures, start, Duration::from_secs(60), "criterion 4");
    conclude(4, "partial product laws and spectral gap", failures);
}

#[test]
fn criterion_5_doubling_system_matches_the_fejer_kernel() {
    // With m = 2 and a single spacer of 1, P_n is the Fejer kernel of order
    // 2^n: coeff(P_n, alpha) = (2^n - |alpha|) / 2^n. This closed form checks
    // the entire convolution pipeline against an independent analytic oracle.
    let mut failures = Vec::new();
    for n in 1..=10usize {
        let family = ThetaFamily::new(s1(), n).unwrap();
        let poly = riesz_partial(&family, n).unwrap().into_polynomial();
        let order = 1i64 << n;
        for alpha in -order..=order {
            let expected = rat((order - alpha.abs()).max(0), order);
            if poly.coeff(alpha) != expected {
                failures.push(format!(
                    "coeff(P_{n}, {alpha}) = {}, expected {expected}",
                    poly.coeff(alpha)
                ));
            }
        }
        if poly.hi() != Some(order - 1) {
            failures.push(format!("P_{n} support ends at {:?}, expected {}", poly.hi(), order - 1));
        }
    }
    conclude(5, "Fejer closed form", failures);
}

/// Overlap measure of two balls straight from the set definitions: the deeper
/// ball lies inside the shallower one exactly when their floors agree and
/// their digits agree across the shallower level; otherwise they are disjoint.
fn overlap_oracle(
    schedule: &CutSpacerSchedule,
    a: &BallAddress,
    b: &BallAddress,
) -> BigRational {
    let (shallow, deep) = if a.level() <= b.level() { (a, b) } else { (b, a) };
    let digits_agree =
        (1..=shallow.level()).all(|p| shallow.digits().digit(p) == deep.digits().digit(p));
    if !digits_agree || shallow.floor() != deep.floor() {
        return BigRational::zero();
    }
    let mut denominator = BigUint::one();
    for position in 1..=deep.level() {
        denominator *= BigUint::from(schedule.cuts(position).unwrap());
    }
    BigRational::new(1.into(), denominator.into())
}

#[test]
fn criterion_6_gram_identity_and_overlap_oracle() {
    let mut failures = Vec::new();
    let systems: Vec<(String, CutSpacerSchedule)> = test_systems()
        .into_iter()
        .filter(|(name, _)| name != "S1")
        .collect();

    for (name, schedule) in &systems {
        let family = ThetaFamily::new(schedule.clone(), 6).unwrap();
        for k in 1..=4usize {
            for n in k..=6 {
                let report = gram(&family, k, n).unwrap();
                if !report.pass {
                    failures.push(format!(
                        "{name}: gram({k}, {n}) is not the scaled identity; witness {:?}",
                        report.witness
                    ));
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xBA11_BA11);
    for pair_index in 0..200 {
        let (name, schedule) = &systems[rng.random_range(0..systems.len())];
        let family = ThetaFamily::new(schedule.clone(), 6).unwrap();
        let table = heights(schedule, 4).unwrap();
        let draw = |rng: &mut ChaCha8Rng| {
            let level = rng.random_range(1..=4usize);
            let count = table.h(level).to_u64().expect("desk-scale height");
            let ordinal = BigUint::from(rng.random_range(0..count));
            ball_from_ordinal(schedule, level, &ordinal).unwrap()
        };
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        let n = rng.random_range(a.level().max(b.level())..=6);
        let expected = overlap_oracle(schedule, &a, &b);
        let got = inner_product(
            &family,
            &Indicator::Ball(a.clone()),
            &Indicator::Ball(b.clone()),
            n,
        )
        .unwrap();
        if got != expected {
            failures.push(format!(
                "{name}: pair {pair_index}: <{a}, {b}> at stage {n} = {got}, oracle says {expected}"
            ));
        }
    }
    conclude(6, "Gram identity and overlap oracle", failures);
}

#[test]
fn criterion_7_refinement_offsets_are_the_stage_exponents() {
    let mut failures = Vec::new();
    for (name, schedule) in test_systems() {
        let family = ThetaFamily::new(schedule.clone(), 6).unwrap();
        for k in 1..=5usize {
            let base = BallAddress::base(&schedule, k).unwrap();
            let child_ordinals: Vec<i64> = subdivide(&schedule, &base)
                .unwrap()
                .iter()
                .map(|child| {
                    upsilon(&schedule, child)
                        .unwrap()
                        .to_i64()
                        .expect("desk-scale ordinal")
                })
                .collect();
            let stage_exponents = family.theta_exponents(k + 1).unwrap();
            if child_ordinals != stage_exponents {
                failures.push(format!(
                    "{name}: level-{k} base ball children sit at {child_ordinals:?}, \
                     stage exponents are {stage_exponents:?}"
                ));
            }
            let report = refinement_invariance(&family, &base, 6).unwrap();
            if !report.pass {
                failures.push(format!(
                    "{name}: refinement report failed at level {k}: offsets {:?} vs {:?}, \
                     norms {} vs {}",
                    report.child_offsets,
                    report.stage_exponents,
                    report.norm_direct,
                    report.norm_refined
                ));
            }
        }
    }

    // Frozen examples for the two reference systems.
    let family = ThetaFamily::new(s1(), 3).unwrap();
    if family.theta_exponents(3).unwrap() != [0, 4] {
        failures.push("S1 level 2 -> 3 exponents are not (0, 4)".to_string());
    }
    let family = ThetaFamily::new(s2(), 2).unwrap();
    if family.theta_exponents(2).unwrap() != [0, 4, 9] {
        failures.push("S2 level 1 -> 2 exponents are not (0, 4, 9)".to_string());
    }
    conclude(7, "refinement invariance", failures);
}

#[test]
fn criterion_8_zero_certificates() {
    let mut failures = Vec::new();

    let family = ThetaFamily::new(s1(), 1).unwrap();
    match zero_certificate(&family, 1, 1 << 14).unwrap() {
        ZeroCertificate::NotCertified {
            witness_theta,
            witness_modulus,
            ..
        } => {
            if (witness_theta - std::f64::consts::PI).abs() >= 1e-3 {
                failures.push(format!("S1 witness angle {witness_theta} is not near pi"));
            }
            if witness_modulus >= 1e-3 {
                failures.push(format!("S1 witness modulus {witness_modulus} is not near zero"));
            }
        }
        certificate => {
            failures.push(format!("S1 stage 1 unexpectedly certified: {certificate:?}"));
        }
    }

    let family = ThetaFamily::new(s2(), 4).unwrap();
    for k in 1..=4usize {
        match zero_certificate(&family, k, 1 << 14).unwrap() {
            ZeroCertificate::Certified { grid, margin, .. } => {
                if grid != 1 << 14 {
                    failures.push(format!("S2 stage {k} needed refinement to grid {grid}"));
                }
                if margin <= 0.0 {
                    failures.push(format!("S2 stage {k} margin {margin} is not positive"));
                }
            }
            certificate => {
                failures.push(format!("S2 stage {k} not certified: {certificate:?}"));
            }
        }
    }
    conclude(8, "zero certificates", failures);
}

#[test]
fn criterion_9_density_sampling_sanity() {
    let mut failures = Vec::new();
    let family = ThetaFamily::new(s2(), 4).unwrap();
    let samples = density_samples(&family, 4, 1 << 12).unwrap();
    let mean = samples.iter().map(|s| s.density).sum::<f64>() / samples.len() as f64;
    if (mean - 1.0).abs() >= 1e-6 {
        failures.push(format!("grid mean {mean} is not within 1e-6 of 1"));
    }
    let min = samples.iter().map(|s| s.density).fold(f64::INFINITY, f64::min);
    if min < -1e-9 {
        failures.push(format!("minimum sample {min} is below -1e-9"));
    }
    if (samples[0].density - 81.0).abs() >= 1e-6 {
        failures.push(format!(
            "density at 0 is {}, expected m_1 m_2 m_3 m_4 = 81",
            samples[0].density
        ));
    }
    conclude(9, "density sampling sanity", failures);
}
