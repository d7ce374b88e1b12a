//! Text serialization of atom tables and lattices. Numbers are printed with
//! 12 significant digits.

use std::fmt::Write;

use serde_json::{json, Value};

use crate::decomposition::{AtomTable, DecompositionResult};
use crate::lattice::{LabelView, Lattice};
use crate::probability::Realization;

/// `%.12g`-style formatting.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-5..12).contains(&exp) {
        format!(
            "{}e{}{:02}",
            trim(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (11 - exp).max(0) as usize;
        let s = trim(&format!("{:.*}", decimals, x));
        if s == "-0" {
            "0".to_string()
        } else {
            s
        }
    }
}

fn num_json(x: f64) -> Value {
    // round-trip through the 12-digit text so JSON and CSV agree
    let v: f64 = fmt_num(x).parse().unwrap_or(x);
    json!(v)
}

/// `(node, atom, atom_plus, atom_minus, measure_value)`.
pub type AtomRow = (String, f64, Option<f64>, Option<f64>, f64);

/// Averaged atom table rows in canonical node order.
pub fn atom_rows(result: &DecompositionResult) -> Vec<AtomRow> {
    let lattice = &result.lattice;
    (0..lattice.len())
        .map(|i| {
            (
                lattice.node(i).to_antichain().to_string(),
                result.averaged.get(i),
                result.averaged_split.as_ref().map(|(p, _)| p.get(i)),
                result.averaged_split.as_ref().map(|(_, m)| m.get(i)),
                result.measure_values.get(i),
            )
        })
        .collect()
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// CSV with columns `node,atom,measure_value`, plus `atom_plus,atom_minus`
/// when the result carries the informative/misinformative split. Node labels
/// contain commas and are quoted.
pub fn atoms_csv(result: &DecompositionResult) -> String {
    let header: &[&str] = if result.averaged_split.is_some() {
        &["node", "atom", "atom_plus", "atom_minus", "measure_value"]
    } else {
        &["node", "atom", "measure_value"]
    };
    let rows = atom_rows(result)
        .into_iter()
        .map(|(node, atom, plus, minus, value)| {
            let mut row = vec![node, fmt_num(atom)];
            if let (Some(p), Some(m)) = (plus, minus) {
                row.push(fmt_num(p));
                row.push(fmt_num(m));
            }
            row.push(fmt_num(value));
            row
        });
    csv_text(header, rows)
}

/// Source and target labels of a realization.
pub type RealizationLabels<'a> = &'a dyn Fn(&Realization) -> (Vec<String>, String);

/// CSV of every pointwise table, one row per (realization, node).
pub fn pointwise_csv(result: &DecompositionResult, labels: RealizationLabels<'_>) -> String {
    let split = result.pointwise.iter().any(|p| p.split.is_some());
    let header: &[&str] = if split {
        &[
            "realization",
            "mass",
            "node",
            "atom",
            "atom_plus",
            "atom_minus",
            "measure_value",
        ]
    } else {
        &["realization", "mass", "node", "atom", "measure_value"]
    };
    let mut rows = Vec::new();
    for p in &result.pointwise {
        let (s, t) = labels(&p.realization);
        let key = format!("s={};t={}", s.join(" "), t);
        for i in 0..result.lattice.len() {
            let mut row = vec![
                key.clone(),
                fmt_num(p.mass),
                result.lattice.node(i).to_antichain().to_string(),
                fmt_num(p.atoms.get(i)),
            ];
            if let Some((a, b)) = &p.split {
                row.push(fmt_num(a.get(i)));
                row.push(fmt_num(b.get(i)));
            }
            row.push(fmt_num(p.measure.get(i)));
            rows.push(row);
        }
    }
    csv_text(header, rows)
}

pub fn atoms_json(result: &DecompositionResult, pointwise: Option<RealizationLabels<'_>>) -> Value {
    let nodes: Vec<Value> = atom_rows(result)
        .into_iter()
        .map(|(node, atom, plus, minus, value)| {
            let mut row = json!({
                "node": node,
                "atom": num_json(atom),
                "measure_value": num_json(value),
            });
            if let (Some(p), Some(m)) = (plus, minus) {
                row["atom_plus"] = num_json(p);
                row["atom_minus"] = num_json(m);
            }
            row
        })
        .collect();
    let mut doc = json!({
        "measure": result.measure.name(),
        "n": result.lattice.n(),
        "atoms": nodes,
        "consistency": {
            "max_abs_residual": num_json(result.diagnostics.max_abs_residual),
            "worst_collection": result.diagnostics.worst.map(|c| c.to_string()),
            "tolerance": result.diagnostics.tolerance,
            "pass": result.diagnostics.passed(),
        },
    });
    if let Some(err) = result.round_trip_error {
        doc["round_trip_error"] = num_json(err);
    }
    if let Some(labels) = pointwise {
        let tables: Vec<Value> = result
            .pointwise
            .iter()
            .map(|p| {
                let (s, t) = labels(&p.realization);
                let rows: Vec<Value> = (0..result.lattice.len())
                    .map(|i| {
                        let mut row = json!({
                            "node": result.lattice.node(i).to_antichain().to_string(),
                            "atom": num_json(p.atoms.get(i)),
                            "measure_value": num_json(p.measure.get(i)),
                        });
                        if let Some((a, b)) = &p.split {
                            row["atom_plus"] = num_json(a.get(i));
                            row["atom_minus"] = num_json(b.get(i));
                        }
                        row
                    })
                    .collect();
                json!({ "s": s, "t": t, "mass": num_json(p.mass), "atoms": rows })
            })
            .collect();
        doc["pointwise"] = Value::Array(tables);
    }
    doc
}

/// Plain listing of a table keyed by antichain text.
pub fn table_listing(table: &AtomTable) -> String {
    let lattice = table.lattice();
    let mut out = String::new();
    for i in 0..lattice.len() {
        writeln!(
            out,
            "{}\t{}",
            lattice.node(i).to_antichain(),
            fmt_num(table.get(i))
        )
        .unwrap();
    }
    out
}

/// Nodes and cover edges as JSON.
pub fn lattice_json(lattice: &Lattice, view: LabelView) -> Value {
    let nodes: Vec<Value> = (0..lattice.len())
        .map(|i| {
            let f = lattice.node(i);
            json!({
                "id": i,
                "label": view.label(lattice, i),
                "antichain": f.to_antichain().to_string(),
                "bits": f.bitstring(),
                "statement": f.to_statement().to_string(),
            })
        })
        .collect();
    let edges: Vec<Value> = lattice
        .cover_edges()
        .into_iter()
        .map(|(lo, hi)| json!([lo, hi]))
        .collect();
    json!({ "n": lattice.n(), "nodes": nodes, "edges": edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num((2.0f64 / 3.0).log2()), "-0.584962500721");
        assert_eq!(fmt_num(0.415037499278844), "0.415037499279");
        assert_eq!(fmt_num(1e-13), "1e-13");
        assert_eq!(fmt_num(123456.0), "123456");
        assert_eq!(fmt_num(1.5e15), "1.5e+15");
        assert_eq!(fmt_num(-2.5e-7), "-2.5e-07");
        assert_eq!(fmt_num(0.999999999999999), "1");
    }
}
