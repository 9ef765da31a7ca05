//! Run and sweep configuration, problem loading and the shipped presets.

use std::fs;
use std::path::{Path, PathBuf};

use qanneal_core::ilp::{build_encoding, introduce_slacks, BitLabel};
use qanneal_core::ising::{qubo_to_ising, IsingModel};
use qanneal_core::mds::{mds_encoding, mds_to_ilp, linear_graph, Graph};
use qanneal_core::qubo::{compile_to_qubo, penalty_floor, QuboProblem};
use qanneal_core::schedule::{ScheduleTable, DEFAULT_AMPLITUDE};
use qanneal_core::sim::{preset, DecoherenceConfig, InitialState, LocalField, DEFAULT_RELATIVE_TOLERANCE};
use qanneal_core::Rational;
use serde::{Deserialize, Serialize};

use crate::csvio::{read_schedule, GroundMeasure};
use crate::error::CliError;
use crate::formats::{parse_json, sniff, DocumentKind, Exact, GraphFile, IlpFile, IsingFile, QuboFile, FORMAT_VERSION};

/// The campaign at the published operating point.
pub const PAPER_PRESET: &str = include_str!("../presets/paper.json");
/// The same campaign on the 10%-extended schedule.
pub const PAPER_EXTENDED_PRESET: &str = include_str!("../presets/paper-extended.json");

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Where the problem of a run comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSource {
    /// Minimum dominating set of the path graph on `n` vertices.
    Linear {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        penalty: Option<Exact>,
    },
    /// Any ILP, graph, QUBO or Ising document.
    File {
        path: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        penalty: Option<Exact>,
    },
}

/// A problem compiled down to QUBO and Ising form.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub qubo: QuboProblem,
    pub ising: IsingModel<Rational>,
    pub labels: Vec<BitLabel>,
}

fn compile_graph(g: &Graph, penalty: Option<Rational>) -> Result<Compiled, CliError> {
    let ilp = mds_to_ilp(g);
    let p = penalty.unwrap_or_else(|| penalty_floor(&ilp));
    let qubo = compile_to_qubo(&ilp, &mds_encoding(g), p)?;
    Ok(finish(qubo))
}

fn finish(qubo: QuboProblem) -> Compiled {
    Compiled { ising: qubo_to_ising(&qubo), labels: qubo.labels().to_vec(), qubo }
}

/// Compiles a JSON document of any supported kind.
pub fn compile_document(text: &str, what: &str, penalty: Option<Rational>) -> Result<Compiled, CliError> {
    match sniff(text, what)? {
        DocumentKind::Graph => compile_graph(&parse_json::<GraphFile>(text, what)?.to_graph()?, penalty),
        DocumentKind::Ilp => {
            let file: IlpFile = parse_json(text, what)?;
            let ilp = file.to_program()?;
            let slacks = match file.slack_override()? {
                Some(s) => s,
                None => introduce_slacks(&ilp)?,
            };
            let enc = build_encoding(&ilp, &slacks)?;
            let p = penalty.unwrap_or_else(|| penalty_floor(&ilp));
            Ok(finish(compile_to_qubo(&ilp, &enc, p)?))
        }
        DocumentKind::Qubo => Ok(finish(parse_json::<QuboFile>(text, what)?.to_qubo()?)),
        DocumentKind::Ising => {
            let file: IsingFile = parse_json(text, what)?;
            let ising = file.to_model()?;
            let qubo = qanneal_core::ising_to_qubo(&ising);
            Ok(Compiled { labels: qubo.labels().to_vec(), qubo, ising })
        }
    }
}

impl ProblemSource {
    /// Loads and compiles; relative paths are taken from `base`.
    pub fn load(&self, base: &Path) -> Result<Compiled, CliError> {
        match self {
            ProblemSource::Linear { n, penalty } => {
                if *n == 0 {
                    return Err(CliError::Input("linear graph needs at least one vertex".into()));
                }
                compile_graph(&linear_graph(*n), penalty.map(|p| p.0))
            }
            ProblemSource::File { path, penalty } => {
                let path = base.join(path);
                compile_document(&read_text(&path)?, &path.display().to_string(), penalty.map(|p| p.0))
            }
        }
    }

    /// Paths this source reads, for the manifest.
    pub fn inputs(&self, base: &Path) -> Vec<PathBuf> {
        match self {
            ProblemSource::Linear { .. } => Vec::new(),
            ProblemSource::File { path, .. } => vec![base.join(path)],
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialName {
    #[default]
    Gibbs,
    Ground,
}

impl InitialName {
    pub fn state(self) -> InitialState {
        match self {
            InitialName::Gibbs => InitialState::Gibbs,
            InitialName::Ground => InitialState::Ground,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalFieldName {
    #[default]
    Bare,
    Scheduled,
}

fn yes() -> bool {
    true
}

/// Decoherence as written in a config; unset values come from the preset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoherenceSpec {
    /// `"paper"` or `"custom"`; custom requires a temperature or `beta`.
    #[serde(default = "paper")]
    pub preset: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature_mk: Option<f64>,
    /// Inverse temperature in ns, overriding `temperature_mk`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_fc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_loc: Option<f64>,
    #[serde(default = "yes")]
    pub fc: bool,
    #[serde(default = "yes")]
    pub loc: bool,
    #[serde(default)]
    pub local_field: LocalFieldName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

fn paper() -> String {
    "paper".into()
}

impl Default for DecoherenceSpec {
    fn default() -> Self {
        Self {
            preset: paper(),
            temperature_mk: None,
            beta: None,
            t_fc: None,
            t_loc: None,
            fc: true,
            loc: true,
            local_field: LocalFieldName::Bare,
            tolerance: None,
        }
    }
}

impl DecoherenceSpec {
    pub fn resolve(&self) -> Result<DecoherenceConfig, CliError> {
        match self.preset.as_str() {
            "paper" => {}
            "custom" if self.temperature_mk.is_some() || self.beta.is_some() => {}
            "custom" => return Err(CliError::Input("custom decoherence needs temperature_mk or beta".into())),
            other => return Err(CliError::Input(format!("unknown temperature preset {other:?}"))),
        }
        let temperature = self.temperature_mk.unwrap_or(preset::TEMPERATURE_MK);
        let mut cfg = DecoherenceConfig::from_temperature(
            temperature,
            self.t_fc.unwrap_or(preset::FC_TIME),
            self.t_loc.unwrap_or(preset::LOCAL_TIME),
        );
        if let Some(beta) = self.beta {
            cfg.beta = beta;
        }
        cfg.fc_enabled = self.fc;
        cfg.local_enabled = self.loc;
        cfg.local_field = match self.local_field {
            LocalFieldName::Bare => LocalField::Bare,
            LocalFieldName::Scheduled => LocalField::Scheduled,
        };
        cfg.relative_tolerance = self.tolerance.unwrap_or(DEFAULT_RELATIVE_TOLERANCE);
        if !(temperature > 0.0) || !self.t_fc.is_none_or(|t| t > 0.0) || !self.t_loc.is_none_or(|t| t > 0.0) {
            return Err(CliError::Bound("temperature and coherence times must be positive".into()));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn default_schedule() -> String {
    "linear".into()
}

fn default_amplitude() -> f64 {
    DEFAULT_AMPLITUDE
}

fn default_anneal_time() -> f64 {
    preset::ANNEAL_TIME
}

fn default_time_step() -> f64 {
    DEFAULT_TIME_STEP
}

/// Largest stable RK4 step for the default amplitudes, in ns.
pub const DEFAULT_TIME_STEP: f64 = 0.02;

/// Everything about a run except the problem and its offsets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSpec {
    /// `"linear"` or the path of an `s,A,B` CSV file.
    #[serde(default = "default_schedule")]
    pub schedule: String,
    /// Peak `A` and `B` of the linear schedule, rad/ns.
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    /// ns
    #[serde(default = "default_anneal_time")]
    pub anneal_time: f64,
    /// Pad the schedule by this fraction at both ends.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<f64>,
    /// ns; ignored when `steps` is set.
    #[serde(default = "default_time_step")]
    pub time_step: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default)]
    pub initial: InitialName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_every: Option<usize>,
    #[serde(default)]
    pub decoherence: DecoherenceSpec,
}

impl Default for SimulationSpec {
    fn default() -> Self {
        parse_json("{}", "default simulation").expect("defaults deserialize")
    }
}

impl SimulationSpec {
    pub fn schedule_table(&self, base: &Path) -> Result<ScheduleTable, CliError> {
        let table = if self.schedule == "linear" {
            ScheduleTable::linear(self.amplitude, self.amplitude)?
        } else {
            read_schedule(&read_text(&base.join(&self.schedule))?)?
        };
        Ok(match self.extension {
            Some(f) => table.extend(f)?,
            None => table,
        })
    }

    pub fn inputs(&self, base: &Path) -> Vec<PathBuf> {
        if self.schedule == "linear" {
            Vec::new()
        } else {
            vec![base.join(&self.schedule)]
        }
    }

    pub fn check(&self) -> Result<(), CliError> {
        if !(self.anneal_time > 0.0 && self.anneal_time.is_finite()) {
            return Err(CliError::Bound("anneal time must be positive".into()));
        }
        if !(self.time_step > 0.0) || self.steps == Some(0) {
            return Err(CliError::Bound("time step must be positive".into()));
        }
        Ok(())
    }
}

/// Offsets are delays: the sign of a configured magnitude is ignored.
pub fn delay(magnitude: f64) -> f64 {
    -magnitude.abs()
}

fn default_modes() -> Vec<String> {
    vec!["s".into(), "w".into()]
}

fn default_threshold() -> f64 {
    1e-3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub format_version: u32,
    pub problem: ProblemSource,
    #[serde(default)]
    pub simulation: SimulationSpec,
    /// Offset sizes; each becomes a delay `−|m|`.
    #[serde(default)]
    pub magnitudes: Vec<f64>,
    #[serde(default = "default_modes")]
    pub modes: Vec<String>,
    #[serde(default)]
    pub ground_measure: GroundMeasure,
    /// Basis states above this population in some row get a column.
    #[serde(default = "default_threshold")]
    pub state_threshold: f64,
}

impl SweepConfig {
    pub fn parse(text: &str, what: &str) -> Result<Self, CliError> {
        let cfg: Self = parse_json(text, what)?;
        if cfg.format_version != FORMAT_VERSION {
            return Err(CliError::Input(format!("{what}: unsupported format_version {}", cfg.format_version)));
        }
        Ok(cfg)
    }

    pub fn paper() -> Self {
        Self::parse(PAPER_PRESET, "paper preset").expect("shipped preset parses")
    }

    pub fn paper_extended() -> Self {
        Self::parse(PAPER_EXTENDED_PRESET, "paper-extended preset").expect("shipped preset parses")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_resolve_to_the_operating_point() {
        let cfg = SweepConfig::paper();
        let deco = cfg.simulation.decoherence.resolve().unwrap();
        assert_eq!(deco, DecoherenceConfig::paper_preset());
        assert_eq!(cfg.simulation.anneal_time, 1000.0);
        assert_eq!(cfg.magnitudes.len(), 5);
        assert_eq!(cfg.simulation.extension, None);
        assert_eq!(SweepConfig::paper_extended().simulation.extension, Some(0.1));
    }

    #[test]
    fn custom_decoherence_needs_a_temperature() {
        let spec = DecoherenceSpec { preset: "custom".into(), ..Default::default() };
        assert!(spec.resolve().is_err());
        let spec = DecoherenceSpec { preset: "custom".into(), beta: Some(2.0), fc: false, ..Default::default() };
        let cfg = spec.resolve().unwrap();
        assert_eq!(cfg.beta, 2.0);
        assert!(!cfg.fc_enabled);
        let spec = DecoherenceSpec { t_fc: Some(-1.0), ..Default::default() };
        assert_eq!(spec.resolve().unwrap_err().exit_code(), 4);
    }

    #[test]
    fn linear_source_compiles_g2() {
        let c = ProblemSource::Linear { n: 2, penalty: None }.load(Path::new(".")).unwrap();
        assert_eq!(c.qubo.num_bits(), 4);
        assert_eq!(c.qubo.penalty(), Some(Rational::from_integer(2)));
    }

    #[test]
    fn delays_are_negative() {
        assert_eq!(delay(0.05), -0.05);
        assert_eq!(delay(-0.05), -0.05);
    }
}
