use ptwitness_core::exec::map_slice;
use ptwitness_core::Execution;
use toml::Value;

use crate::error::CliError;
use crate::eval::{evaluate, Evaluation, Overrides};
use crate::output::Row;
use crate::scenario::{axis_values, render_value, reparse, set_path, Document, Scenario};

struct Candidate {
    inner: Option<(String, Value)>,
    scenario: Scenario,
}

struct Point {
    outer: (String, Value),
    candidates: Vec<Candidate>,
}

fn row(scenario_id: &str, e: Evaluation, scan: &[(String, Value)]) -> Row {
    let mut params: Vec<(String, String)> =
        scan.iter().map(|(k, v)| (format!("scan.{k}"), render_value(v))).collect();
    params.extend(e.params);
    Row {
        scenario_id: scenario_id.to_string(),
        state: e.state,
        witness: e.report.witness.clone(),
        params,
        lhs: Some(e.report.lhs),
        rhs: Some(e.report.rhs),
        margin: Some(e.report.margin),
        violated: Some(e.report.violated),
        oracle_min_eig: e.oracle_min_eig,
    }
}

fn collect<T>(results: Vec<Result<T, CliError>>) -> Result<Vec<T>, CliError> {
    results.into_iter().collect()
}

fn expand(doc: &Document) -> Result<Vec<Point>, CliError> {
    let scan = doc.scenario.scan.as_ref().expect("caller checked scan");
    let outer = axis_values(&scan.outer(), "scan")?;
    let inner = match &scan.inner {
        Some(axis) => Some((axis.param.clone(), axis_values(axis, "scan.inner")?)),
        None => None,
    };
    let mut points = Vec::with_capacity(outer.len());
    for v in outer {
        let mut raw = doc.raw.clone();
        if let Value::Table(t) = &mut raw {
            t.remove("scan");
        }
        set_path(&mut raw, &scan.param, v.clone())?;
        let candidates = match &inner {
            None => vec![Candidate { inner: None, scenario: reparse(&raw)? }],
            Some((param, values)) => values
                .iter()
                .map(|iv| {
                    let mut patched = raw.clone();
                    set_path(&mut patched, param, iv.clone())?;
                    Ok(Candidate { inner: Some((param.clone(), iv.clone())), scenario: reparse(&patched)? })
                })
                .collect::<Result<_, CliError>>()?,
        };
        points.push(Point { outer: (scan.param.clone(), v), candidates });
    }
    Ok(points)
}

/// Best candidate at one grid point: any violation first, then the
/// smallest margin; ties keep the smaller inner value.
fn best_at(point: &Point, index: usize, ov: &Overrides) -> Result<(Evaluation, Option<(String, Value)>), CliError> {
    let mut best: Option<(Evaluation, Option<(String, Value)>)> = None;
    for c in &point.candidates {
        let at = format!("scan point {}={}", point.outer.0, render_value(&point.outer.1));
        let e = evaluate(&c.scenario, index, ov).map_err(|e| e.context(&at))?;
        let better = match &best {
            None => true,
            Some((b, _)) => {
                (e.report.violated && !b.report.violated)
                    || (e.report.violated == b.report.violated && e.report.margin < b.report.margin)
            }
        };
        if better {
            best = Some((e, c.inner.clone()));
        }
    }
    Ok(best.expect("at least one candidate per point"))
}

pub fn run(doc: &Document, ov: &Overrides, exec: Execution) -> Result<Vec<Row>, CliError> {
    let s = &doc.scenario;
    let indices: Vec<usize> = (0..s.witnesses.len()).collect();
    if s.scan.is_none() {
        let evals = collect(map_slice(exec, &indices, |&i| evaluate(s, i, ov)))?;
        return Ok(evals.into_iter().map(|e| row(&s.id, e, &[])).collect());
    }
    let points = expand(doc)?;
    let mut rows = Vec::new();
    for &i in &indices {
        let best = collect(map_slice(exec, &points, |p| best_at(p, i, ov)))?;
        let mut threshold = None;
        let mut witness = s.witnesses[i].name.as_str().to_string();
        for (p, (e, inner)) in points.iter().zip(best) {
            if threshold.is_none() && e.report.violated {
                threshold = Some(render_value(&p.outer.1));
            }
            witness = e.report.witness.clone();
            let mut scan = vec![p.outer.clone()];
            scan.extend(inner);
            rows.push(row(&s.id, e, &scan));
        }
        let param = &s.scan.as_ref().expect("scan present").param;
        rows.push(Row {
            scenario_id: s.id.clone(),
            state: "scan-summary".into(),
            witness,
            params: vec![
                ("scan.param".into(), param.clone()),
                ("threshold".into(), threshold.unwrap_or_else(|| "none".into())),
            ],
            lhs: None,
            rhs: None,
            margin: None,
            violated: None,
            oracle_min_eig: None,
        });
    }
    Ok(rows)
}
