//! Scenario file schema (TOML) and scan-grid expansion.
//!
//! See `SCENARIOS.md` next to this crate's manifest for the field reference.

use serde::Deserialize;
use toml::Value;

use crate::error::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub id: String,
    pub state: StateSpec,
    #[serde(rename = "witness", default)]
    pub witnesses: Vec<WitnessSpec>,
    #[serde(default)]
    pub oracle: OracleSpec,
    pub scan: Option<ScanSpec>,
    pub format: Option<Format>,
    pub tolerance: Option<f64>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    Noon,
    PaperPsi,
    FixedExcitation,
    BellLike,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub builtin: Option<Builtin>,
    /// Mode count for `noon` and `paper_psi`.
    pub n: Option<usize>,
    /// Photon number `N` of `noon`.
    pub photons: Option<u32>,
    pub c0: Option<[f64; 2]>,
    pub c1: Option<[f64; 2]>,
    /// `|c0|²`; real amplitudes `(√w, √(1−w))`.
    pub weight: Option<f64>,
    pub i: Option<u32>,
    pub j: Option<u32>,
    /// `[m, n]` of `fixed_excitation`.
    pub orders: Option<[u32; 2]>,
    /// Local phase `φ_k` applied as `e^{iφ_k n_k}` after construction.
    pub phases: Option<Vec<f64>>,
    pub modes: Option<usize>,
    pub kets: Option<Vec<KetSpec>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KetSpec {
    pub occ: Vec<u32>,
    pub amp: [f64; 2],
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum WitnessName {
    DuanEpr,
    HzKvariance,
    Su2Hur,
    Jykz,
    LhHur,
    Nplus,
    GeneralMultimode,
    Cfrd,
    SepSum,
    SepProduct,
    SepSrur,
}

impl WitnessName {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessName::DuanEpr => "duan_epr",
            WitnessName::HzKvariance => "hz_kvariance",
            WitnessName::Su2Hur => "su2_hur",
            WitnessName::Jykz => "jykz",
            WitnessName::LhHur => "lh_hur",
            WitnessName::Nplus => "nplus",
            WitnessName::GeneralMultimode => "general_multimode",
            WitnessName::Cfrd => "cfrd",
            WitnessName::SepSum => "sep_sum",
            WitnessName::SepProduct => "sep_product",
            WitnessName::SepSrur => "sep_srur",
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum AxisName {
    X,
    Y,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum PartitionSpec {
    Named(String),
    Antinormal(Vec<usize>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessSpec {
    pub name: WitnessName,
    pub r: Option<f64>,
    pub axis: Option<AxisName>,
    pub m: Option<u32>,
    pub n: Option<u32>,
    /// `[dag, ann]` per mode.
    pub word: Option<Vec<[u32; 2]>>,
    pub transposed: Option<Vec<usize>>,
    pub power: Option<u32>,
    pub lead_power: Option<u32>,
    pub powers: Option<Vec<u32>>,
    pub annihilating: Option<usize>,
    pub theta: Option<Vec<f64>>,
    pub partition: Option<PartitionSpec>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    #[serde(default)]
    pub enabled: bool,
    pub cutoffs: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Records,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: String,
    pub values: Option<Vec<Value>>,
    pub start: Option<Value>,
    pub stop: Option<Value>,
    pub step: Option<Value>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    pub param: String,
    pub values: Option<Vec<Value>>,
    pub start: Option<Value>,
    pub stop: Option<Value>,
    pub step: Option<Value>,
    /// Secondary parameter minimized over at every grid point.
    pub inner: Option<Axis>,
}

impl ScanSpec {
    pub fn outer(&self) -> Axis {
        Axis {
            param: self.param.clone(),
            values: self.values.clone(),
            start: self.start.clone(),
            stop: self.stop.clone(),
            step: self.step.clone(),
        }
    }
}

/// Parsed scenario plus the raw document, which scans patch per grid point.
#[derive(Clone, Debug)]
pub struct Document {
    pub scenario: Scenario,
    pub raw: Value,
}

pub fn parse(text: &str) -> Result<Document, CliError> {
    let scenario: Scenario = toml::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
    let raw: Value = toml::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
    validate(&scenario)?;
    Ok(Document { scenario, raw })
}

fn validate(s: &Scenario) -> Result<(), CliError> {
    let schema = |msg: String| Err(CliError::Schema(msg));
    match (&s.state.builtin, &s.state.kets) {
        (Some(_), Some(_)) => return schema("state: give either `builtin` or `kets`, not both".into()),
        (None, None) => return schema("state: one of `builtin` or `kets` is required".into()),
        _ => {}
    }
    if s.witnesses.is_empty() {
        return schema("witness: at least one [[witness]] entry is required".into());
    }
    if let Some(t) = s.tolerance {
        if !(t >= 0.0 && t.is_finite()) {
            return schema(format!("tolerance: must be a finite value >= 0, got {t}"));
        }
    }
    if let Some(scan) = &s.scan {
        axis_values(&scan.outer(), "scan")?;
        if let Some(inner) = &scan.inner {
            axis_values(inner, "scan.inner")?;
        }
    }
    Ok(())
}

fn as_f64(v: &Value, field: &str) -> Result<f64, CliError> {
    match v {
        Value::Integer(i) => Ok(*i as f64),
        Value::Float(f) => Ok(*f),
        other => Err(CliError::Schema(format!("{field}: expected a number, got {other}"))),
    }
}

/// Grid of an axis, sorted ascending by numeric value.
pub fn axis_values(axis: &Axis, field: &str) -> Result<Vec<Value>, CliError> {
    let mut out = match (&axis.values, &axis.start, &axis.stop, &axis.step) {
        (Some(v), None, None, None) => v.clone(),
        (None, Some(a), Some(b), Some(h)) => {
            let (lo, hi, step) = (
                as_f64(a, &format!("{field}.start"))?,
                as_f64(b, &format!("{field}.stop"))?,
                as_f64(h, &format!("{field}.step"))?,
            );
            if !(step > 0.0) || hi < lo {
                return Err(CliError::Schema(format!(
                    "{field}: need step > 0 and stop >= start, got {lo}..{hi} by {step}"
                )));
            }
            let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            let ints = [a, b, h].iter().all(|v| v.is_integer());
            (0..count)
                .map(|k| {
                    if ints {
                        Value::Integer((lo + k as f64 * step).round() as i64)
                    } else {
                        let x = lo + k as f64 * step;
                        Value::Float(format!("{x:.12e}").parse().expect("formatted float"))
                    }
                })
                .collect()
        }
        _ => {
            return Err(CliError::Schema(format!(
                "{field}: give either `values` or all of `start`, `stop`, `step`"
            )))
        }
    };
    if out.is_empty() {
        return Err(CliError::Schema(format!("{field}: scan range is empty")));
    }
    let mut keyed = Vec::with_capacity(out.len());
    for v in out.drain(..) {
        keyed.push((as_f64(&v, &format!("{field}.values"))?, v));
    }
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, v)| v).collect())
}

/// Replaces the value at a dotted path (`state.n`, `witness.0.theta.1`).
/// A `*` segment applies the rest of the path to every array element;
/// missing keys of an existing table are created.
pub fn set_path(doc: &mut Value, path: &str, value: Value) -> Result<(), CliError> {
    let parts: Vec<&str> = path.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Schema(format!("scan param `{path}`: empty path segment")));
    }
    set_parts(doc, &parts, &value).map_err(|m| CliError::Schema(format!("scan param `{path}`: {m}")))
}

fn set_parts(cur: &mut Value, parts: &[&str], value: &Value) -> Result<(), String> {
    let (part, rest) = parts.split_first().expect("non-empty path");
    match cur {
        Value::Table(t) if rest.is_empty() => {
            t.insert(part.to_string(), value.clone());
            Ok(())
        }
        Value::Table(t) => {
            let next = t.get_mut(*part).ok_or_else(|| format!("no field `{part}`"))?;
            set_parts(next, rest, value)
        }
        Value::Array(a) if *part == "*" => {
            if a.is_empty() {
                return Err("`*` over an empty list".into());
            }
            for slot in a.iter_mut() {
                if rest.is_empty() {
                    *slot = value.clone();
                } else {
                    set_parts(slot, rest, value)?;
                }
            }
            Ok(())
        }
        Value::Array(a) => {
            let idx: usize = part.parse().map_err(|_| format!("`{part}` is not an index"))?;
            let len = a.len();
            let slot = a.get_mut(idx).ok_or_else(|| format!("index {idx} out of {len}"))?;
            if rest.is_empty() {
                *slot = value.clone();
                Ok(())
            } else {
                set_parts(slot, rest, value)
            }
        }
        _ => Err(format!("`{part}` is below a scalar")),
    }
}

/// Re-validates a patched document.
pub fn reparse(raw: &Value) -> Result<Scenario, CliError> {
    let scenario: Scenario = raw.clone().try_into().map_err(|e: toml::de::Error| CliError::Schema(e.to_string()))?;
    validate(&scenario)?;
    Ok(scenario)
}

pub fn render_value(v: &Value) -> String {
    match v {
        Value::Float(f) => crate::output::number(*f),
        other => other.to_string(),
    }
}
