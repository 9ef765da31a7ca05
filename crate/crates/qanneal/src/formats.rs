//! Versioned JSON documents.
//!
//! Exact quantities are written as JSON numbers when they have a finite
//! decimal expansion and as `"p/q"` strings otherwise; both forms are
//! accepted on input. Basis states are written as bit strings with qubit 0
//! first.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use qanneal_core::ilp::{BitLabel, BitRole, IntegerLinearProgram, SlackSpec};
use qanneal_core::ising::IsingModel;
use qanneal_core::mds::Graph;
use qanneal_core::oracle::SpectrumReport;
use qanneal_core::qubo::QuboProblem;
use qanneal_core::scalar::{is_finite_decimal, parse_rational};
use qanneal_core::schedule::{GroupLabel, OffsetAssignment};
use qanneal_core::sim::RunReport;
use qanneal_core::Rational;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

/// A rational that survives a JSON round trip unchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl Exact {
    pub fn int(v: i128) -> Self {
        Exact(Rational::from_integer(v))
    }
}

impl From<Rational> for Exact {
    fn from(r: Rational) -> Self {
        Exact(r)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match decimal_string(&self.0) {
            Some(s) => f.write_str(&s),
            None => write!(f, "{}/{}", self.0.numer(), self.0.denom()),
        }
    }
}

/// Exact decimal expansion, when it terminates.
pub fn decimal_string(r: &Rational) -> Option<String> {
    if !is_finite_decimal(r) {
        return None;
    }
    let denom = r.denom().unsigned_abs();
    let (mut twos, mut fives, mut rest) = (0u32, 0u32, denom);
    while rest % 2 == 0 {
        rest /= 2;
        twos += 1;
    }
    while rest % 5 == 0 {
        rest /= 5;
        fives += 1;
    }
    let places = twos.max(fives) as usize;
    let digits = r.numer().unsigned_abs().checked_mul(10u128.checked_pow(places as u32)? / denom)?.to_string();
    let sign = if *r.numer() < 0 { "-" } else { "" };
    if places == 0 {
        return Some(format!("{sign}{digits}"));
    }
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = padded.split_at(padded.len() - places);
    Some(format!("{sign}{int}.{frac}"))
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match decimal_string(&self.0) {
            Some(s) => serde_json::Number::from_str(&s).map_err(serde::ser::Error::custom)?.serialize(serializer),
            None => serializer.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom())),
        }
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(serde_json::Number),
            Text(String),
        }
        let text = match Raw::deserialize(deserializer)? {
            Raw::Number(n) => n.to_string(),
            Raw::Text(s) => s,
        };
        parse_rational(&text)
            .map(Exact)
            .ok_or_else(|| de::Error::custom(format!("not an exact number: {text:?}")))
    }
}

fn exact_vec(values: &[Exact]) -> Vec<Rational> {
    values.iter().map(|e| e.0).collect()
}

fn check_version(found: u32) -> Result<(), CliError> {
    if found != FORMAT_VERSION {
        return Err(CliError::Input(format!("unsupported format_version {found}, expected {FORMAT_VERSION}")));
    }
    Ok(())
}

fn version() -> u32 {
    FORMAT_VERSION
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IlpFile {
    #[serde(default = "version")]
    pub format_version: u32,
    pub c: Vec<Exact>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Exact>>,
    pub b: Vec<Exact>,
    pub bits: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<Vec<Exact>>>,
    /// Overrides the minimal slack widths.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack_bits: Option<Vec<u32>>,
}

impl IlpFile {
    pub fn to_program(&self) -> Result<IntegerLinearProgram, CliError> {
        check_version(self.format_version)?;
        let rows = self.a.iter().map(|r| exact_vec(r)).collect();
        let mut ilp = IntegerLinearProgram::new(exact_vec(&self.c), rows, exact_vec(&self.b), self.bits.clone())?;
        if let Some(d) = &self.d {
            ilp = ilp.with_quadratic(d.iter().map(|r| exact_vec(r)).collect())?;
        }
        Ok(ilp)
    }

    pub fn slack_override(&self) -> Result<Option<SlackSpec>, CliError> {
        Ok(match &self.slack_bits {
            Some(w) => Some(SlackSpec::with_widths(w.clone())?),
            None => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    #[serde(default = "version")]
    pub format_version: u32,
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphFile {
    pub fn to_graph(&self) -> Result<Graph, CliError> {
        check_version(self.format_version)?;
        Graph::new(self.n, &self.edges).map_err(|e| CliError::Input(e.to_string()))
    }
}

pub fn label_string(label: &BitLabel) -> String {
    match label.role {
        BitRole::Decision => format!("x{}[{}]", label.owner, label.position),
        BitRole::Slack => format!("s{}[{}]", label.owner, label.position),
        BitRole::Free => format!("q{}", label.owner),
    }
}

pub fn parse_label(text: &str) -> Option<BitLabel> {
    let (role, rest) = match text.split_at_checked(1)? {
        ("x", rest) => (BitRole::Decision, rest),
        ("s", rest) => (BitRole::Slack, rest),
        ("q", rest) => return Some(BitLabel { role: BitRole::Free, owner: rest.parse().ok()?, position: 0 }),
        _ => return None,
    };
    let (owner, position) = rest.strip_suffix(']')?.split_once('[')?;
    Some(BitLabel { role, owner: owner.parse().ok()?, position: position.parse().ok()? })
}

fn parse_labels(labels: &[String], n: usize) -> Result<Option<Vec<BitLabel>>, CliError> {
    if labels.is_empty() {
        return Ok(None);
    }
    if labels.len() != n {
        return Err(CliError::Input(format!("{} labels for {n} bits", labels.len())));
    }
    labels
        .iter()
        .map(|l| parse_label(l).ok_or_else(|| CliError::Input(format!("bad bit label {l:?}"))))
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

/// `Ψᵀ Q Ψ + C` as upper-triangular terms `(i, j, Q'_ij)` with `i ≤ j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuboFile {
    #[serde(default = "version")]
    pub format_version: u32,
    pub num_bits: usize,
    pub constant: Exact,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalty: Option<Exact>,
    pub terms: Vec<(usize, usize, Exact)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl QuboFile {
    pub fn from_qubo(q: &QuboProblem) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            num_bits: q.num_bits(),
            constant: q.constant().into(),
            penalty: q.penalty().map(Exact),
            terms: q.upper_triangular_terms().into_iter().map(|(i, j, v)| (i, j, Exact(v))).collect(),
            labels: q.labels().iter().map(label_string).collect(),
        }
    }

    pub fn to_qubo(&self) -> Result<QuboProblem, CliError> {
        check_version(self.format_version)?;
        let terms: Vec<_> = self.terms.iter().map(|&(i, j, v)| (i, j, v.0)).collect();
        let q = QuboProblem::from_upper_triangular(self.num_bits, &terms, self.constant.0)?;
        Ok(match parse_labels(&self.labels, self.num_bits)? {
            Some(labels) => q.with_labels(labels)?,
            None => q,
        })
    }
}

/// `Σ h_i σ_i + Σ_{i<j} J_ij σ_i σ_j + const`, with `σ = +1` for bit 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsingFile {
    #[serde(default = "version")]
    pub format_version: u32,
    pub num_spins: usize,
    pub fields: Vec<Exact>,
    pub couplers: Vec<(usize, usize, Exact)>,
    pub constant: Exact,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl IsingFile {
    pub fn from_model(model: &IsingModel<Rational>, labels: &[BitLabel]) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            num_spins: model.num_spins(),
            fields: model.fields().iter().map(|&h| Exact(h)).collect(),
            couplers: model.coupler_list().into_iter().map(|(i, j, v)| (i, j, Exact(v))).collect(),
            constant: model.constant().into(),
            labels: labels.iter().map(label_string).collect(),
        }
    }

    pub fn to_model(&self) -> Result<IsingModel<Rational>, CliError> {
        check_version(self.format_version)?;
        if self.fields.len() != self.num_spins {
            return Err(CliError::Input(format!("{} fields for {} spins", self.fields.len(), self.num_spins)));
        }
        let couplers: Vec<_> = self.couplers.iter().map(|&(i, j, v)| (i, j, v.0)).collect();
        Ok(IsingModel::new(exact_vec(&self.fields), &couplers, self.constant.0)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelEntry {
    pub energy: Exact,
    pub degeneracy: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub format_version: u32,
    pub num_bits: usize,
    pub ground_energy: Exact,
    pub ground_degeneracy: u64,
    pub gap: Option<Exact>,
    pub levels: Vec<LevelEntry>,
    pub ground_states: Vec<String>,
    /// Decision-variable values of the ground states, when bit labels allow.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoded: Option<Vec<Vec<i128>>>,
}

impl SpectrumFile {
    pub fn from_report(report: &SpectrumReport<Rational>, decoded: Option<Vec<Vec<i128>>>) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            num_bits: report.num_bits,
            ground_energy: report.ground_energy().into(),
            ground_degeneracy: report.ground_degeneracy(),
            gap: report.gap().map(Exact),
            levels: report
                .levels
                .iter()
                .map(|l| LevelEntry { energy: l.energy.into(), degeneracy: l.degeneracy })
                .collect(),
            ground_states: report.ground_configs.iter().map(|&m| bit_string(m as usize, report.num_bits)).collect(),
            decoded,
        }
    }
}

/// Qubit 0 first.
pub fn bit_string(mask: usize, n: usize) -> String {
    (0..n).map(|i| if (mask >> i) & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn parse_bit_string(text: &str) -> Option<usize> {
    text.chars().rev().try_fold(0usize, |acc, c| match c {
        '0' => Some(acc << 1),
        '1' => Some((acc << 1) | 1),
        _ => None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OffsetsFile {
    pub format_version: u32,
    pub deltas: Vec<f64>,
    pub groups: Vec<String>,
}

impl OffsetsFile {
    pub fn from_assignment(offsets: &OffsetAssignment) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            deltas: offsets.deltas().to_vec(),
            groups: offsets
                .groups()
                .iter()
                .map(|g| match g {
                    GroupLabel::Strong => "strong",
                    GroupLabel::Weak => "weak",
                    GroupLabel::None => "none",
                })
                .map(String::from)
                .collect(),
        }
    }
}

/// Final populations above a print threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinalDistribution {
    pub format_version: u32,
    pub threshold: f64,
    pub p_ground: f64,
    pub ground_rank: usize,
    pub p_solution: f64,
    pub solution_states: Vec<String>,
    pub states: BTreeMap<String, f64>,
}

impl FinalDistribution {
    pub fn from_report(report: &RunReport, n: usize, threshold: f64) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            threshold,
            p_ground: report.p_ground,
            ground_rank: report.ground_rank,
            p_solution: report.p_solution,
            solution_states: report.solution_states.iter().map(|&k| bit_string(k, n)).collect(),
            states: report
                .populations
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > threshold)
                .map(|(k, &p)| (bit_string(k, n), p))
                .collect(),
        }
    }
}

/// Parses `text` as `T`, reporting the line and column of any error.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable document");
    s.push('\n');
    s
}

/// What kind of document a JSON file holds, judged by its keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocumentKind {
    Ilp,
    Graph,
    Qubo,
    Ising,
}

pub fn sniff(text: &str, what: &str) -> Result<DocumentKind, CliError> {
    let value: serde_json::Value = parse_json(text, what)?;
    let obj = value.as_object().ok_or_else(|| CliError::Input(format!("{what}: expected a JSON object")))?;
    let kind = if obj.contains_key("A") {
        DocumentKind::Ilp
    } else if obj.contains_key("edges") {
        DocumentKind::Graph
    } else if obj.contains_key("terms") {
        DocumentKind::Qubo
    } else if obj.contains_key("fields") {
        DocumentKind::Ising
    } else {
        return Err(CliError::Input(format!("{what}: not an ILP, graph, QUBO or Ising document")));
    };
    Ok(kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal_string(&r(1, 4)).unwrap(), "0.25");
        assert_eq!(decimal_string(&r(-3, 8)).unwrap(), "-0.375");
        assert_eq!(decimal_string(&r(7, 1)).unwrap(), "7");
        assert_eq!(decimal_string(&r(1, 20)).unwrap(), "0.05");
        assert_eq!(decimal_string(&r(123, 1000)).unwrap(), "0.123");
        assert_eq!(decimal_string(&r(1, 3)), None);
    }

    #[test]
    fn exact_round_trip() {
        for v in [r(1, 3), r(-5, 2), r(0, 1), r(1, 1 << 40), r(i64::MAX as i128, 1)] {
            let json = serde_json::to_string(&Exact(v)).unwrap();
            let back: Exact = serde_json::from_str(&json).unwrap();
            assert_eq!(back.0, v, "{json}");
        }
        assert_eq!(serde_json::to_string(&Exact(r(1, 3))).unwrap(), "\"1/3\"");
        assert_eq!(serde_json::to_string(&Exact(r(-1, 4))).unwrap(), "-0.25");
        let e: Exact = serde_json::from_str("0.1").unwrap();
        assert_eq!(e.0, r(1, 10));
    }

    #[test]
    fn labels_round_trip() {
        for l in ["x0[1]", "s12[0]", "q3"] {
            assert_eq!(label_string(&parse_label(l).unwrap()), l);
        }
        assert!(parse_label("y1").is_none());
        assert!(parse_label("x1[").is_none());
    }

    #[test]
    fn bit_strings_put_qubit_zero_first() {
        assert_eq!(bit_string(0b0001, 4), "1000");
        assert_eq!(bit_string(0b101, 3), "101");
        assert_eq!(parse_bit_string("1000"), Some(1));
        assert_eq!(parse_bit_string("10a"), None);
    }

    #[test]
    fn sniffing() {
        assert_eq!(sniff(r#"{"n": 2, "edges": [[0, 1]]}"#, "t").unwrap(), DocumentKind::Graph);
        assert_eq!(sniff(r#"{"c": [1], "A": [[1]], "b": [0], "bits": [1]}"#, "t").unwrap(), DocumentKind::Ilp);
        assert!(sniff("[1, 2]", "t").is_err());
        let err = sniff("{\n  \"n\": 2,\n  oops\n}", "graph.json").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }
}
