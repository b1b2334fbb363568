use std::io::Write;

use serde_json::{Map, Value};

use crate::error::CliError;
use crate::scenario::Format;

pub const COLUMNS: [&str; 9] =
    ["scenario_id", "state", "witness", "params", "lhs", "rhs", "margin", "violated", "oracle_min_eig"];

/// Twelve significant digits in scientific notation.
pub fn number(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub scenario_id: String,
    pub state: String,
    pub witness: String,
    pub params: Vec<(String, String)>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub margin: Option<f64>,
    pub violated: Option<bool>,
    pub oracle_min_eig: Option<f64>,
}

impl Row {
    fn params_text(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }

    fn cells(&self) -> [String; 9] {
        let num = |x: Option<f64>| x.map(number).unwrap_or_default();
        [
            self.scenario_id.clone(),
            self.state.clone(),
            self.witness.clone(),
            self.params_text(),
            num(self.lhs),
            num(self.rhs),
            num(self.margin),
            self.violated.map(|v| v.to_string()).unwrap_or_default(),
            num(self.oracle_min_eig),
        ]
    }

    fn record(&self) -> Value {
        // values pass through the 12-digit text so both formats agree
        let num = |x: Option<f64>| match x {
            Some(v) => number(v).parse::<f64>().ok().and_then(serde_json::Number::from_f64).map_or(Value::Null, Value::Number),
            None => Value::Null,
        };
        let params: Map<String, Value> =
            self.params.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let mut m = Map::new();
        m.insert("scenario_id".into(), Value::String(self.scenario_id.clone()));
        m.insert("state".into(), Value::String(self.state.clone()));
        m.insert("witness".into(), Value::String(self.witness.clone()));
        m.insert("params".into(), Value::Object(params));
        m.insert("lhs".into(), num(self.lhs));
        m.insert("rhs".into(), num(self.rhs));
        m.insert("margin".into(), num(self.margin));
        m.insert("violated".into(), self.violated.map_or(Value::Null, Value::Bool));
        m.insert("oracle_min_eig".into(), num(self.oracle_min_eig));
        Value::Object(m)
    }
}

pub fn write_rows(out: &mut dyn Write, rows: &[Row], format: Format) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Internal(format!("writing output: {e}"));
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let fail = |e: csv::Error| CliError::Internal(format!("writing output: {e}"));
            w.write_record(COLUMNS).map_err(fail)?;
            for row in rows {
                w.write_record(row.cells()).map_err(fail)?;
            }
            w.flush().map_err(io)?;
        }
        Format::Records => {
            for row in rows {
                let line = serde_json::to_string(&row.record())
                    .map_err(|e| CliError::Internal(format!("encoding record: {e}")))?;
                writeln!(out, "{line}").map_err(io)?;
            }
            out.flush().map_err(io)?;
        }
    }
    Ok(())
}
