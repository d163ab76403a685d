//! Dispatch a parsed configuration to the library and render one artifact.
//!
//! Every JSON artifact carries the same envelope — the command name, the
//! schedule it ran on, and the model conventions — so results stay
//! self-describing when saved to disk. Exit codes: 0 success, 1 bad
//! configuration or input, 2 a verified property failed, 3 a depth or
//! resource cap was exceeded.

use std::path::PathBuf;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use rankone::odometer::{ball_from_ordinal, ball_successor, enumerate_balls};
use rankone::spectral::{
    check_gap, density_samples, fourier_sequence, gram, riesz_partial, zero_certificate,
    ThetaFamily, ZeroCertificate,
};
use rankone::{
    heights, total_measure, BallAddress, CutSpacerSchedule, Error, MeasureClass, SuccessorResult,
};

use crate::config::{parse_config, Command, OutputFormat, RunConfig, ScheduleConfig};
use crate::output::{csv_body, integer, json_body, rational, CONVENTION_NOTES};
use crate::verify;

/// What a run produced: either an artifact to emit (possibly with a failing
/// exit code, e.g. a Gram report that is not the identity) or a failure
/// message for standard error.
#[derive(Debug)]
pub enum Outcome {
    Artifact {
        body: String,
        out: Option<PathBuf>,
        exit: i32,
    },
    Failure {
        message: String,
        exit: i32,
    },
}

impl Outcome {
    pub fn exit(&self) -> i32 {
        match self {
            Outcome::Artifact { exit, .. } | Outcome::Failure { exit, .. } => *exit,
        }
    }

    /// The artifact body, if the run produced one.
    pub fn body(&self) -> Option<&str> {
        match self {
            Outcome::Artifact { body, .. } => Some(body),
            Outcome::Failure { .. } => None,
        }
    }
}

/// Parse a configuration document and run it.
pub fn run_document(document: &str) -> Outcome {
    match parse_config(document) {
        Ok(config) => run(&config),
        Err(message) => Outcome::Failure { message, exit: 1 },
    }
}

/// Run an already-parsed configuration.
pub fn run(config: &RunConfig) -> Outcome {
    let schedule = match config.schedule.build() {
        Ok(schedule) => schedule,
        Err(violations) => {
            let details: Vec<String> = violations.iter().map(ToString::to_string).collect();
            return Outcome::Failure {
                message: format!("config error: invalid schedule: {}", details.join("; ")),
                exit: 1,
            };
        }
    };
    if config.format == OutputFormat::Csv && !supports_csv(&config.command) {
        return Outcome::Failure {
            message: format!(
                "config error at `format`: csv output is not available for `{}`; use json",
                config.command.name()
            ),
            exit: 1,
        };
    }
    match execute(config, &schedule) {
        Ok((body, exit)) => Outcome::Artifact {
            body,
            out: config.out.clone(),
            exit,
        },
        Err(error) => Outcome::Failure {
            exit: match error {
                Error::DepthExceeded { .. } | Error::CapExceeded { .. } => 3,
                _ => 1,
            },
            message: error.to_string(),
        },
    }
}

fn supports_csv(command: &Command) -> bool {
    !matches!(
        command,
        Command::Gap { .. } | Command::Zerocheck { .. } | Command::Measure { .. } | Command::Verify { .. }
    )
}

fn execute(config: &RunConfig, schedule: &CutSpacerSchedule) -> rankone::Result<(String, i32)> {
    let system = &config.schedule;
    let csv = config.format == OutputFormat::Csv;
    let family = |depth: usize| {
        ThetaFamily::with_caps(schedule.clone(), depth, config.caps.spectral())
    };
    match &config.command {
        Command::Heights { k } => {
            let table = heights(schedule, *k)?;
            let body = if csv {
                csv_body(
                    "k,height",
                    table
                        .as_slice()
                        .iter()
                        .enumerate()
                        .map(|(k, h)| format!("{k},{h}")),
                )
            } else {
                json_body(&HeightsArtifact {
                    command: "heights",
                    system: system.clone(),
                    convention_notes: CONVENTION_NOTES,
                    k: *k,
                    heights: table.as_slice().iter().map(BigUint::to_string).collect(),
                })
            };
            Ok((body, 0))
        }
        Command::Balls { k } => {
            let balls = enumerate_balls(schedule, *k, config.caps.enumeration)?;
            let rows: Vec<BallRow> = balls
                .iter()
                .enumerate()
                .map(|(ordinal, ball)| BallRow::new(ordinal.to_string(), ball))
                .collect();
            let body = if csv {
                csv_body("ordinal,digits,floor", rows.iter().map(BallRow::csv))
            } else {
                json_body(&BallsArtifact {
                    command: "balls",
                    system: system.clone(),
                    convention_notes: CONVENTION_NOTES,
                    k: *k,
                    count: rows.len(),
                    balls: rows,
                })
            };
            Ok((body, 0))
        }
        Command::Orbit { k, start, count } => {
            let table = heights(schedule, *k)?;
            let start_ordinal = BigUint::from(*start);
            let mut current = ball_from_ordinal(schedule, *k, &start_ordinal)?;
            let remaining = table.h(*k) - &start_ordinal;
            let requested = match count {
                Some(c) => remaining.clone().min(BigUint::from(*c)),
                None => remaining,
            };
            if requested > BigUint::from(config.caps.enumeration) {
                return Err(Error::CapExceeded {
                    what: "orbit length",
                    needed: requested.to_string(),
                    cap: config.caps.enumeration.to_string(),
                });
            }
            let requested = requested.to_usize().expect("within the enumeration cap");
            let mut rows = Vec::with_capacity(requested);
            let mut ordinal = start_ordinal;
            let mut reached_top = false;
            for _ in 0..requested {
                rows.push(BallRow::new(ordinal.to_string(), &current));
                ordinal += 1u32;
                match ball_successor(schedule, &current)? {
                    SuccessorResult::Next(next) => current = next,
                    SuccessorResult::Top => {
                        reached_top = true;
                        break;
                    }
                }
            }
            let body = if csv {
                csv_body("ordinal,digits,floor", rows.iter().map(BallRow::csv))
            } else {
                json_body(&OrbitArtifact {
                    command: "orbit",
                    system: system.clone(),
                    convention_notes: CONVENTION_NOTES,
                    k: *k,
                    start: *start,
                    emitted: rows.len(),
                    reached_top,
                    balls: rows,
                })
            };
            Ok((body, 0))
        }
        Command::Theta { k } => {
            let family = family(*k)?;
            let exponents = family.theta_exponents(*k)?.to_vec();
            let body = if csv {
                csv_body(
                    "exponent,value",
                    exponents.iter().map(|e| format!("{e},1/1")),
                )
            } else {
                json_body(&ThetaArtifact {
                    command: "theta",
                    system: system.clone(),
                    convention_notes: CONVENTION_NOTES,
                    k: *k,
                    m: schedule.cuts(*k)?,
                    exponents,
                })
            };
            Ok((body, 0))
        }
        Command::Riesz { n } => {
            let family = family(*n)?;
            let partial = riesz_partial(&family, *n)?;
            let poly = partial.polynomial();
            let lo = poly.lo().expect("partial products are nonzero");
            let hi = poly.hi().expect("partial products are nonzero");
            let coefficients: Vec<CoefficientRow> = (lo..=hi)
                .map(|alpha| CoefficientRow {
                    alpha,
                    value: rational(&poly.coeff(alpha)),
                })
                .collect();
            let body = if csv {
                csv_body(
                    "exponent,value",
                    coefficients.iter().map(|row| format!("{},{}", row.alpha, row.value)),
                )
            } else {
                json_body(&RieszArtifact {
                    command: "riesz",
                    system: system.clone(),
                    convention_notes: CONVENTION_NOTES,
                    n: *n,
                    lo,
                    hi,
                    mass_at_one: rational(&poly.value_at_one()),
                    coefficients,
                })
            };
            Ok((body, 0))
        }
        Command::Fourier { alpha, n } => {
            let family = family(*n)?;
            let values: Vec<FourierRow> = fourier_sequence(&family, *alpha, *n)?
                .iter()
                .enumerate()
                .map(|(i, value)| FourierRow {
                    n: i + 1,
                    value: rational(value),
                })
                .collect();
            let body = if csv {
                csv_body(
                    "n,value",
                    values.iter().map(|row| format!("{},{}", row.n, row.value)),
                )
            } else {
                json_body(&FourierArtifact {
                    command: "fourier",
                    system: system.clone(),
                    convention_notes: CONVENTION_NOTES,
                    alpha: *alpha,
                    n: *n,
                    values,
                })
            };
            Ok((body, 0))
        }
        Command::Gram { k, n } => {
            let family = family(*n)?;
            let report = gram(&family, *k, *n)?;
            let exit = if report.pass { 0 } else { 2 };
            let dim = report.dim as i64;
            let body = if csv {
                csv_body(
                    "delta,value",
                    (1 - dim..dim).map(|delta| format!("{delta},{}", rational(report.delta_value(delta)))),
                )
            } else {
                json_body(&GramArtifact {
                    command: "gram",
                    system: system.clone(),
                    convention_notes: CONVENTION_NOTES,
                    k: *k,
                    n: *n,
                    dim: report.dim,
                    scale: rational(&report.scale),
                    pass: report.pass,
                    witness: report.witness.as_ref().map(|w| GramWitnessRow {
                        row: w.row,
                        col: w.col,
                        value: rational(&w.value),
                        expected: rational(&w.expected),
                    }),
                    diagonals: (1 - dim..dim)
                        .map(|delta| DiagonalRow {
                            delta,
                            value: rational(report.delta_value(delta)),
                        })
                        .collect(),
                })
            };
            Ok((body, exit))
        }
        Command::Gap { l, k } => {
            let family = family(*k)?;
            let report = check_gap(&family, *l, *k)?;
            let body = json_body(&GapArtifact {
                command: "gap",
                system: system.clone(),
                convention_notes: CONVENTION_NOTES,
                l: *l,
                k: *k,
                h_l: integer(&report.h_l),
                min_positive_exponent: report.min_positive_exponent,
                pass: report.pass,
                witness: report.witness.as_ref().map(|(alpha, value)| GapWitnessRow {
                    alpha: *alpha,
                    value: rational(value),
                }),
            });
            Ok((body, if report.pass { 0 } else { 2 }))
        }
        Command::Zerocheck { k, grid } => {
            let family = family(*k)?;
            let artifact = match zero_certificate(&family, *k, *grid)? {
                ZeroCertificate::Certified {
                    grid,
                    min_modulus,
                    lipschitz,
                    margin,
                } => ZerocheckArtifact {
                    command: "zerocheck",
                    system: system.clone(),
                    convention_notes: CONVENTION_NOTES,
                    k: *k,
                    status: "certified",
                    grid,
                    lipschitz,
                    min_modulus: Some(min_modulus),
                    margin: Some(margin),
                    witness_theta: None,
                    witness_modulus: None,
                },
                ZeroCertificate::NotCertified {
                    grid,
                    witness_theta,
                    witness_modulus,
                    lipschitz,
                } => ZerocheckArtifact {
                    command: "zerocheck",
                    system: system.clone(),
                    convention_notes: CONVENTION_NOTES,
                    k: *k,
                    status: "not_certified",
                    grid,
                    lipschitz,
                    min_modulus: None,
                    margin: None,
                    witness_theta: Some(witness_theta),
                    witness_modulus: Some(witness_modulus),
                },
            };
            Ok((json_body(&artifact), 0))
        }
        Command::Density { n, grid } => {
            let family = family(*n)?;
            let samples = density_samples(&family, *n, *grid)?;
            let body = if csv {
                csv_body(
                    "theta_radians,density",
                    samples.iter().map(|s| format!("{},{}", s.theta, s.density)),
                )
            } else {
                json_body(&DensityArtifact {
                    command: "density",
                    system: system.clone(),
                    convention_notes: CONVENTION_NOTES,
                    n: *n,
                    grid: samples.len(),
                    samples: samples
                        .iter()
                        .map(|s| DensityRow {
                            theta: s.theta,
                            density: s.density,
                        })
                        .collect(),
                })
            };
            Ok((body, 0))
        }
        Command::Measure { depth } => {
            let measure = total_measure(schedule, *depth)?;
            let (class, limit) = match &measure.class {
                MeasureClass::Finite(limit) => ("finite", Some(rational(limit))),
                MeasureClass::Undetermined => ("undetermined", None),
            };
            let body = json_body(&MeasureArtifact {
                command: "measure",
                system: system.clone(),
                convention_notes: CONVENTION_NOTES,
                depth: *depth,
                partial: rational(&measure.partial),
                class,
                limit,
            });
            Ok((body, 0))
        }
        Command::Verify { k_test, n_test } => {
            let report = verify::verify(system, schedule, *k_test, *n_test, &config.caps)?;
            let exit = if report.all_pass { 0 } else { 2 };
            Ok((json_body(&report), exit))
        }
    }
}

#[derive(Serialize)]
struct HeightsArtifact {
    command: &'static str,
    system: ScheduleConfig,
    convention_notes: [&'static str; 2],
    #[serde(rename = "K")]
    k: usize,
    heights: Vec<String>,
}

#[derive(Serialize)]
struct BallRow {
    ordinal: String,
    digits: String,
    floor: u64,
    address: String,
}

impl BallRow {
    fn new(ordinal: String, ball: &BallAddress) -> Self {
        Self {
            ordinal,
            digits: ball.digits().to_string(),
            floor: ball.floor(),
            address: ball.to_string(),
        }
    }

    fn csv(&self) -> String {
        format!("{},{},{}", self.ordinal, self.digits, self.floor)
    }
}

#[derive(Serialize)]
struct BallsArtifact {
    command: &'static str,
    system: ScheduleConfig,
    convention_notes: [&'static str; 2],
    k: usize,
    count: usize,
    balls: Vec<BallRow>,
}

#[derive(Serialize)]
struct OrbitArtifact {
    command: &'static str,
    system: ScheduleConfig,
    convention_notes: [&'static str; 2],
    k: usize,
    start: u64,
    emitted: usize,
    reached_top: bool,
    balls: Vec<BallRow>,
}

#[derive(Serialize)]
struct ThetaArtifact {
    command: &'static str,
    system: ScheduleConfig,
    convention_notes: [&'static str; 2],
    k: usize,
    m: u32,
    exponents: Vec<i64>,
}

#[derive(Serialize)]
struct CoefficientRow {
    alpha: i64,
    value: String,
}

#[derive(Serialize)]
struct RieszArtifact {
    command: &'static str,
    system: ScheduleConfig,
    convention_notes: [&'static str; 2],
    n: usize,
    lo: i64,
    hi: i64,
    mass_at_one: String,
    coefficients: Vec<CoefficientRow>,
}

#[derive(Serialize)]
struct FourierRow {
    n: usize,
    value: String,
}

#[derive(Serialize)]
struct FourierArtifact {
    command: &'static str,
    system: ScheduleConfig,
    convention_notes: [&'static str; 2],
    alpha: i64,
    n: usize,
    values: Vec<FourierRow>,
}

#[derive(Serialize)]
struct GramWitnessRow {
    row: usize,
    col: usize,
    value: String,
    expected: String,
}

#[derive(Serialize)]
struct DiagonalRow {
    delta: i64,
    value: String,
}

#[derive(Serialize)]
struct GramArtifact {
    command: &'static str,
    system: ScheduleConfig,
    convention_notes: [&'static str; 2],
    k: usize,
    n: usize,
    dim: usize,
    scale: String,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<GramWitnessRow>,
    diagonals: Vec<DiagonalRow>,
}

#[derive(Serialize)]
struct GapWitnessRow {
    alpha: i64,
    value: String,
}

#[derive(Serialize)]
struct GapArtifact {
    command: &'static str,
    system: ScheduleConfig,
    convention_notes: [&'static str; 2],
    l: usize,
    k: usize,
    h_l: String,
    min_positive_exponent: Option<i64>,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<GapWitnessRow>,
}

#[derive(Serialize)]
struct ZerocheckArtifact {
    command: &'static str,
    system: ScheduleConfig,
    convention_notes: [&'static str; 2],
    k: usize,
    status: &'static str,
    grid: usize,
    lipschitz: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_modulus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_modulus: Option<f64>,
}

#[derive(Serialize)]
struct DensityRow {
    theta: f64,
    density: f64,
}

#[derive(Serialize)]
struct DensityArtifact {
    command: &'static str,
    system: ScheduleConfig,
    convention_notes: [&'static str; 2],
    n: usize,
    grid: usize,
    samples: Vec<DensityRow>,
}

#[derive(Serialize)]
struct MeasureArtifact {
    command: &'static str,
    system: ScheduleConfig,
    convention_notes: [&'static str; 2],
    depth: usize,
    partial: String,
    class: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit: Option<String>,
}
