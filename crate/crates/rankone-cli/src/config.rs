//! JSON run configuration: schedule description, command selection, and caps.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use rankone::spectral::{Caps, DEFAULT_GRID};
use rankone::{CutSpacerSchedule, ScheduleViolation};

pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;
pub const DEFAULT_TEST_DEPTH: usize = 6;

/// One fully validated run: a schedule, a command, and output routing.
#[derive(Debug, Clone, Deserialize)]
pub struct RunConfig {
    pub schedule: ScheduleConfig,
    #[serde(flatten)]
    pub command: Command,
    /// Output file; standard output when absent.
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub caps: CapsConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Schedule description as given in the config; echoed verbatim into every
/// JSON artifact.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleConfig {
    /// Preamble stages once (optional), then the period stages forever.
    Periodic(PeriodicStages),
    /// Exactly the listed stages; depth is their count.
    Explicit(StageRows),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeriodicStages {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preamble: Option<StageRows>,
    pub m: Vec<u32>,
    pub a: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageRows {
    pub m: Vec<u32>,
    pub a: Vec<Vec<u64>>,
}

impl ScheduleConfig {
    pub fn build(&self) -> Result<CutSpacerSchedule, Vec<ScheduleViolation>> {
        match self {
            ScheduleConfig::Periodic(stages) => {
                let (preamble_m, preamble_a) = match &stages.preamble {
                    Some(rows) => (rows.m.clone(), rows.a.clone()),
                    None => (Vec::new(), Vec::new()),
                };
                CutSpacerSchedule::eventually_periodic(
                    preamble_m,
                    preamble_a,
                    stages.m.clone(),
                    stages.a.clone(),
                )
            }
            ScheduleConfig::Explicit(rows) => {
                CutSpacerSchedule::explicit(rows.m.clone(), rows.a.clone())
            }
        }
    }
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

fn default_test_depth() -> usize {
    DEFAULT_TEST_DEPTH
}

/// The selected subcommand with its parameters, tagged by the `cmd` field.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "cmd", rename_all = "lowercase")]
pub enum Command {
    /// Height table `h_0 ..= h_K`.
    Heights {
        #[serde(rename = "K")]
        k: usize,
    },
    /// All level-`k` balls in ordinal order.
    Balls { k: usize },
    /// Successor chain at level `k` from the given ordinal.
    Orbit {
        k: usize,
        #[serde(default)]
        start: u64,
        /// Maximum number of balls to emit; to the top when absent.
        #[serde(default)]
        count: Option<u64>,
    },
    /// Exponents of the stage polynomial `Theta_k`.
    Theta { k: usize },
    /// Coefficient table of the partial product `P_n`.
    Riesz { n: usize },
    /// The sequence `u_alpha^{(1..n)}` at a fixed frequency.
    Fourier { alpha: i64, n: usize },
    /// Level-`k` Gram matrix under the stage-`n` pairing.
    Gram { k: usize, n: usize },
    /// Spectral gap of the product over stages `l+1 ..= k`.
    Gap { l: usize, k: usize },
    /// Zero-freeness certificate for `Theta_k` on the circle.
    Zerocheck {
        k: usize,
        #[serde(default = "default_grid")]
        grid: usize,
    },
    /// Circle samples of the stage-`n` product density.
    Density {
        n: usize,
        #[serde(default = "default_grid")]
        grid: usize,
    },
    /// Partial and limit measure of the space.
    Measure { depth: usize },
    /// The full invariant suite, reported as machine-readable checks.
    Verify {
        #[serde(rename = "K_test", default = "default_test_depth")]
        k_test: usize,
        #[serde(rename = "n_test", default = "default_test_depth")]
        n_test: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Heights { .. } => "heights",
            Command::Balls { .. } => "balls",
            Command::Orbit { .. } => "orbit",
            Command::Theta { .. } => "theta",
            Command::Riesz { .. } => "riesz",
            Command::Fourier { .. } => "fourier",
            Command::Gram { .. } => "gram",
            Command::Gap { .. } => "gap",
            Command::Zerocheck { .. } => "zerocheck",
            Command::Density { .. } => "density",
            Command::Measure { .. } => "measure",
            Command::Verify { .. } => "verify",
        }
    }
}

/// Resource budgets; every field defaults independently.
#[derive(Debug, Clone, Deserialize)]
pub struct CapsConfig {
    #[serde(default = "default_support_cap")]
    pub support: usize,
    #[serde(default = "default_matrix_cap")]
    pub matrix: usize,
    #[serde(default = "default_enumeration_cap")]
    pub enumeration: usize,
}

fn default_support_cap() -> usize {
    Caps::default().support
}

fn default_matrix_cap() -> usize {
    Caps::default().matrix
}

fn default_enumeration_cap() -> usize {
    DEFAULT_ENUMERATION_CAP
}

impl Default for CapsConfig {
    fn default() -> Self {
        Self {
            support: default_support_cap(),
            matrix: default_matrix_cap(),
            enumeration: default_enumeration_cap(),
        }
    }
}

impl CapsConfig {
    pub fn spectral(&self) -> Caps {
        Caps {
            support: self.support,
            matrix: self.matrix,
        }
    }
}

/// Parse and validate a config document, reporting the JSON path of the
/// offending field on error.
pub fn parse_config(document: &str) -> Result<RunConfig, String> {
    let deserializer = &mut serde_json::Deserializer::from_str(document);
    let config: RunConfig = serde_path_to_error::deserialize(deserializer)
        .map_err(|e| format!("config error at `{}`: {}", e.path(), e.inner()))?;
    for (name, value) in [
        ("support", config.caps.support),
        ("matrix", config.caps.matrix),
        ("enumeration", config.caps.enumeration),
    ] {
        if value == 0 {
            return Err(format!("config error at `caps.{name}`: cap must be positive"));
        }
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_reference_documents() {
        let config =
            parse_config(r#"{"schedule":{"periodic":{"m":[2],"a":[[1]]}},"cmd":"heights","K":4}"#)
                .unwrap();
        assert!(matches!(config.command, Command::Heights { k: 4 }));
        assert_eq!(config.format, OutputFormat::Json);
        assert!(config.out.is_none());
        let schedule = config.schedule.build().unwrap();
        assert!(schedule.is_periodic());
        assert_eq!(schedule.cuts(10).unwrap(), 2);

        let config = parse_config(
            r#"{"schedule":{"explicit":{"m":[3,3],"a":[[1,2],[1,2]]}},"cmd":"gram","k":1,"n":2}"#,
        )
        .unwrap();
        assert!(matches!(config.command, Command::Gram { k: 1, n: 2 }));
        assert_eq!(config.schedule.build().unwrap().depth(), Some(2));
    }

    #[test]
    fn missing_fields_report_their_path() {
        let err = parse_config(r#"{"schedule":{"periodic":{"m":[2]}},"cmd":"heights","K":4}"#)
            .unwrap_err();
        assert!(err.contains("schedule.periodic"), "{err}");
        assert!(err.contains("missing field `a`"), "{err}");

        let err = parse_config(r#"{"schedule":{"periodic":{"m":[2],"a":[[1]]}}}"#).unwrap_err();
        assert!(err.contains("missing field `cmd`") || err.contains("cmd"), "{err}");
    }

    #[test]
    fn defaults_apply_per_field() {
        let config = parse_config(
            r#"{"schedule":{"periodic":{"m":[2],"a":[[1]]}},"cmd":"zerocheck","k":1,
                "caps":{"matrix":64}}"#,
        )
        .unwrap();
        assert!(matches!(config.command, Command::Zerocheck { k: 1, grid } if grid == 1 << 14));
        assert_eq!(config.caps.matrix, 64);
        assert_eq!(config.caps.support, Caps::default().support);
        assert_eq!(config.caps.enumeration, DEFAULT_ENUMERATION_CAP);

        let config = parse_config(
            r#"{"schedule":{"periodic":{"m":[2],"a":[[1]]}},"cmd":"verify","format":"csv"}"#,
        )
        .unwrap();
        assert!(matches!(
            config.command,
            Command::Verify { k_test: 6, n_test: 6 }
        ));
        assert_eq!(config.format, OutputFormat::Csv);
    }

    #[test]
    fn invalid_documents_are_rejected() {
        assert!(parse_config("not json").is_err());
        let err = parse_config(r#"{"schedule":{"periodic":{"m":[2],"a":[[1]]}},"cmd":"fly"}"#)
            .unwrap_err();
        assert!(err.contains("fly") || err.contains("unknown variant"), "{err}");
        let err = parse_config(
            r#"{"schedule":{"periodic":{"m":[2],"a":[[1]]}},"cmd":"heights","K":2,
                "caps":{"support":0}}"#,
        )
        .unwrap_err();
        assert!(err.contains("caps.support"), "{err}");
    }

    #[test]
    fn schedule_violations_surface_from_build() {
        let config = parse_config(
            r#"{"schedule":{"periodic":{"m":[1],"a":[[]]}},"cmd":"heights","K":2}"#,
        )
        .unwrap();
        let violations = config.schedule.build().unwrap_err();
        assert!(!violations.is_empty());
    }

    #[test]
    fn preamble_rows_are_honored() {
        let config = parse_config(
            r#"{"schedule":{"periodic":{"preamble":{"m":[4],"a":[[2,1,3]]},"m":[2],"a":[[1]]}},
                "cmd":"heights","K":3}"#,
        )
        .unwrap();
        let schedule = config.schedule.build().unwrap();
        assert_eq!(schedule.cuts(1).unwrap(), 4);
        assert_eq!(schedule.cuts(2).unwrap(), 2);
        assert_eq!(schedule.cuts(3).unwrap(), 2);
    }
}
