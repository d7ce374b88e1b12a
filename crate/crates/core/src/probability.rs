//! Exact discrete joint distributions over `(S_1, ..., S_n, T)` and the
//! classical (pointwise and averaged) information quantities, in bits.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write;

use serde::Deserialize;

use crate::collection::{Collection, MAX_SOURCES};
use crate::error::{PidError, Result};

/// Tolerance on the total probability mass.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// One joint outcome. Values are indices into the per-variable alphabets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Realization {
    pub sources: Vec<u32>,
    pub target: u32,
}

impl Realization {
    pub fn new(sources: Vec<u32>, target: u32) -> Self {
        Realization { sources, target }
    }

    /// Whether `other` agrees with `self` on every source in `collection`.
    pub fn agrees_on(&self, other: &Realization, collection: Collection) -> bool {
        collection
            .indices()
            .all(|i| self.sources[i - 1] == other.sources[i - 1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub realization: Realization,
    pub mass: f64,
}

impl Row {
    pub fn is_zero(&self) -> bool {
        self.mass == 0.0
    }
}

/// Validated probability table. Rows are sorted by realization and unique.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    n: usize,
    source_alphabets: Vec<Vec<String>>,
    target_alphabet: Vec<String>,
    rows: Vec<Row>,
}

/// Parses `0.25`, `1/4` or `1e-3` into a probability.
pub fn parse_mass(text: &str) -> std::result::Result<f64, String> {
    let text = text.trim();
    let value = if let Some((num, den)) = text.split_once('/') {
        let num: f64 = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in `{text}`"))?;
        let den: f64 = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in `{text}`"))?;
        if den == 0.0 {
            return Err(format!("zero denominator in `{text}`"));
        }
        num / den
    } else {
        text.parse::<f64>()
            .map_err(|_| format!("`{text}` is not a probability"))?
    };
    if !value.is_finite() {
        return Err(format!("`{text}` is not finite"));
    }
    Ok(value)
}

fn sort_alphabet(values: &HashSet<String>) -> Vec<String> {
    let mut v: Vec<String> = values.iter().cloned().collect();
    if v.iter().all(|s| s.parse::<i64>().is_ok()) {
        v.sort_by_key(|s| s.parse::<i64>().unwrap());
    } else {
        v.sort();
    }
    v
}

/// A row before alphabet indexing: raw values plus its position for diagnostics.
struct RawRow {
    line: usize,
    sources: Vec<String>,
    target: String,
    mass: f64,
}

impl JointDistribution {
    /// Builds a distribution from labelled outcomes `(source values, target value, mass)`.
    pub fn from_outcomes<S: ToString, T: ToString>(
        outcomes: impl IntoIterator<Item = (Vec<S>, T, f64)>,
    ) -> Result<Self> {
        let raw: Vec<RawRow> = outcomes
            .into_iter()
            .enumerate()
            .map(|(k, (s, t, p))| RawRow {
                line: k + 1,
                sources: s.iter().map(|v| v.to_string()).collect(),
                target: t.to_string(),
                mass: p,
            })
            .collect();
        let n = raw.first().map(|r| r.sources.len()).unwrap_or(0);
        Self::from_raw(n, raw)
    }

    fn from_raw(n: usize, raw: Vec<RawRow>) -> Result<Self> {
        if n == 0 || n > MAX_SOURCES {
            return Err(PidError::Distribution(format!(
                "source count {n} outside 1..={MAX_SOURCES}"
            )));
        }
        if raw.is_empty() {
            return Err(PidError::Distribution("no rows".into()));
        }
        let mut source_sets = vec![HashSet::new(); n];
        let mut target_set = HashSet::new();
        for r in &raw {
            if r.sources.len() != n {
                return Err(PidError::parse(
                    r.line,
                    1,
                    format!("expected {n} source values, found {}", r.sources.len()),
                ));
            }
            if r.mass < 0.0 {
                return Err(PidError::Distribution(format!(
                    "negative mass {} on line {}",
                    r.mass, r.line
                )));
            }
            for (set, v) in source_sets.iter_mut().zip(&r.sources) {
                set.insert(v.clone());
            }
            target_set.insert(r.target.clone());
        }
        let source_alphabets: Vec<Vec<String>> = source_sets.iter().map(sort_alphabet).collect();
        let target_alphabet = sort_alphabet(&target_set);
        let lookup =
            |alphabet: &[String], v: &str| alphabet.iter().position(|a| a == v).unwrap() as u32;

        let mut by_key: BTreeMap<Realization, (usize, f64)> = BTreeMap::new();
        for r in &raw {
            let key = Realization {
                sources: r
                    .sources
                    .iter()
                    .zip(&source_alphabets)
                    .map(|(v, a)| lookup(a, v))
                    .collect(),
                target: lookup(&target_alphabet, &r.target),
            };
            if let Some((first, _)) = by_key.insert(key, (r.line, r.mass)) {
                return Err(PidError::parse(
                    r.line,
                    1,
                    format!("duplicate realization (first seen on line {first})"),
                ));
            }
        }
        let total: f64 = raw.iter().map(|r| r.mass).sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(PidError::Distribution(format!(
                "masses sum to {total}, not 1 (tolerance {NORMALIZATION_TOLERANCE:e})"
            )));
        }
        let rows = by_key
            .into_iter()
            .map(|(realization, (_, mass))| Row { realization, mass })
            .collect();
        Ok(JointDistribution {
            n,
            source_alphabets,
            target_alphabet,
            rows,
        })
    }

    /// Reads the CSV schema: header `s1,...,sn,t,p`, one row per realization.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header = reader
            .headers()
            .map_err(|e| PidError::parse(1, 1, e.to_string()))?
            .clone();
        let width = header.len();
        if width < 3 {
            return Err(PidError::parse(1, 1, "header must be s1,...,sn,t,p"));
        }
        let n = width - 2;
        for (k, name) in header.iter().enumerate() {
            let expected = if k < n {
                format!("s{}", k + 1)
            } else if k == n {
                "t".to_string()
            } else {
                "p".to_string()
            };
            if name != expected {
                return Err(PidError::parse(
                    1,
                    k + 1,
                    format!("unknown column `{name}` (expected `{expected}`)"),
                ));
            }
        }
        let mut raw = Vec::new();
        for (k, record) in reader.records().enumerate() {
            let line = k + 2;
            let record = record.map_err(|e| PidError::parse(line, 1, e.to_string()))?;
            if record.len() != width {
                return Err(PidError::parse(
                    line,
                    record.len().min(width) + 1,
                    format!("ragged row: {} fields, header has {width}", record.len()),
                ));
            }
            let mass =
                parse_mass(&record[width - 1]).map_err(|m| PidError::parse(line, width, m))?;
            raw.push(RawRow {
                line,
                sources: (0..n).map(|i| record[i].to_string()).collect(),
                target: record[n].to_string(),
                mass,
            });
        }
        Self::from_raw(n, raw)
    }

    /// Reads the JSON schema `{ "n": int, "rows": [{"s": [...], "t": ..., "p": ...}] }`.
    /// Values may be numbers or strings; `p` may be a number or a `"num/den"` string.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            n: usize,
            rows: Vec<JsonRow>,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct JsonRow {
            s: Vec<serde_json::Value>,
            t: serde_json::Value,
            p: serde_json::Value,
        }
        let scalar = |v: &serde_json::Value| match v {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let doc: Doc = serde_json::from_str(text)
            .map_err(|e| PidError::parse(e.line(), e.column(), e.to_string()))?;
        let mut raw = Vec::with_capacity(doc.rows.len());
        for (k, r) in doc.rows.iter().enumerate() {
            let line = k + 1;
            if r.s.len() != doc.n {
                return Err(PidError::parse(
                    line,
                    1,
                    format!(
                        "row {line}: expected {} source values, found {}",
                        doc.n,
                        r.s.len()
                    ),
                ));
            }
            let mass = match &r.p {
                serde_json::Value::Number(x) => x.as_f64().unwrap_or(f64::NAN),
                serde_json::Value::String(s) => parse_mass(s)
                    .map_err(|m| PidError::parse(line, 1, format!("row {line}: {m}")))?,
                other => {
                    return Err(PidError::parse(
                        line,
                        1,
                        format!("row {line}: bad mass {other}"),
                    ))
                }
            };
            raw.push(RawRow {
                line,
                sources: r.s.iter().map(scalar).collect(),
                target: scalar(&r.t),
                mass,
            });
        }
        Self::from_raw(doc.n, raw)
    }

    /// Dispatches on the first non-blank character: `{` means JSON, else CSV.
    pub fn load(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_csv(text)
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Rows with positive mass, in ascending realization order.
    pub fn support(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.mass > 0.0)
    }

    /// Number of stored zero-mass rows.
    pub fn zero_mass_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.is_zero()).count()
    }

    pub fn source_alphabet(&self, i: usize) -> &[String] {
        &self.source_alphabets[i - 1]
    }

    pub fn target_alphabet(&self) -> &[String] {
        &self.target_alphabet
    }

    /// Human-readable values of a realization.
    pub fn labels(&self, r: &Realization) -> (Vec<&str>, &str) {
        let s = r
            .sources
            .iter()
            .zip(&self.source_alphabets)
            .map(|(&v, a)| a[v as usize].as_str())
            .collect();
        (s, self.target_alphabet[r.target as usize].as_str())
    }

    /// Mass of a realization, 0 when absent.
    pub fn mass_of(&self, r: &Realization) -> f64 {
        self.rows
            .binary_search_by(|row| row.realization.cmp(r))
            .map(|k| self.rows[k].mass)
            .unwrap_or(0.0)
    }

    /// `Σ mass` over realizations satisfying `event`.
    pub fn probability_of_event(&self, event: impl Fn(&Realization) -> bool) -> f64 {
        self.rows
            .iter()
            .filter(|r| event(&r.realization))
            .map(|r| r.mass)
            .sum()
    }

    /// `log2 P(t | s_a) / P(t)` for the sources in `collection`, evaluated at
    /// the given realization. May be negative.
    pub fn pointwise_mi(&self, realization: &Realization, collection: Collection) -> Result<f64> {
        self.check_collection(collection)?;
        let t = realization.target;
        let p_t = self.probability_of_event(|r| r.target == t);
        if p_t <= 0.0 {
            return Err(PidError::Domain(format!("P(T = t) = 0 at {realization:?}")));
        }
        if collection.is_empty() {
            return Ok(0.0);
        }
        let p_s = self.probability_of_event(|r| realization.agrees_on(r, collection));
        if p_s <= 0.0 {
            return Err(PidError::Domain(format!(
                "conditioning on sources {collection} with zero probability"
            )));
        }
        let p_ts =
            self.probability_of_event(|r| r.target == t && realization.agrees_on(r, collection));
        Ok((p_ts / (p_s * p_t)).log2())
    }

    /// `I(T : S_a)`, the mass-weighted average of [`Self::pointwise_mi`].
    pub fn mutual_information(&self, collection: Collection) -> Result<f64> {
        self.check_collection(collection)?;
        let mut total = 0.0;
        for row in self.support() {
            total += row.mass * self.pointwise_mi(&row.realization, collection)?;
        }
        Ok(total)
    }

    /// `I(T : S_a | S_given) = I(T : S_{a ∪ given}) − I(T : S_given)`.
    pub fn conditional_mi(&self, collection: Collection, given: Collection) -> Result<f64> {
        if collection.is_empty() {
            self.check_collection(given)?;
            return Ok(0.0);
        }
        Ok(self.mutual_information(collection.union(given))? - self.mutual_information(given)?)
    }

    fn check_collection(&self, c: Collection) -> Result<()> {
        if c.max_index() > self.n {
            return Err(PidError::Usage(format!(
                "collection {c} refers to a source beyond n = {}",
                self.n
            )));
        }
        Ok(())
    }

    /// CSV echo of the parsed table with masses in shortest round-trip form,
    /// so the parsed doubles can be reproduced bit for bit.
    pub fn echo_csv(&self) -> String {
        let mut out = String::new();
        for i in 1..=self.n {
            write!(out, "s{i},").unwrap();
        }
        out.push_str("t,p\n");
        for row in &self.rows {
            let (s, t) = self.labels(&row.realization);
            writeln!(out, "{},{t},{:?}", s.join(","), row.mass).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const XOR_CSV: &str = "s1,s2,t,p\n0,0,0,1/4\n0,1,1,1/4\n1,0,1,1/4\n1,1,0,1/4\n";

    fn xor() -> JointDistribution {
        JointDistribution::from_csv(XOR_CSV).unwrap()
    }

    fn c(v: &[usize]) -> Collection {
        Collection::from_indices(v.iter().copied()).unwrap()
    }

    #[test]
    fn xor_loads() {
        let d = xor();
        assert_eq!(d.n(), 2);
        assert_eq!(d.rows().len(), 4);
        assert_eq!(d.rows()[0].mass, 0.25);
    }

    #[test]
    fn degenerate_single_row() {
        let d = JointDistribution::from_csv("s1,t,p\na,b,1\n").unwrap();
        assert_eq!(d.n(), 1);
        assert_eq!(d.mutual_information(c(&[1])).unwrap(), 0.0);
    }

    #[test]
    fn normalization_violation() {
        let err = JointDistribution::from_csv("s1,t,p\n0,0,0.5\n1,1,0.4\n").unwrap_err();
        assert!(matches!(err, PidError::Distribution(_)));
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(
            JointDistribution::from_csv("s1,x,p\n0,0,1\n"),
            Err(PidError::Parse {
                line: 1,
                column: 2,
                ..
            })
        ));
        assert!(matches!(
            JointDistribution::from_csv("s1,s2,t,p\n0,0,1\n"),
            Err(PidError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            JointDistribution::from_csv("s1,t,p\n0,0,-0.5\n1,1,1.5\n"),
            Err(PidError::Distribution(_))
        ));
        assert!(matches!(
            JointDistribution::from_csv("s1,t,p\n0,0,0.5\n0,0,0.5\n"),
            Err(PidError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            JointDistribution::from_csv("s1,t,p\n0,0,abc\n"),
            Err(PidError::Parse {
                line: 2,
                column: 3,
                ..
            })
        ));
    }

    #[test]
    fn json_schema() {
        let json = r#"{"n": 2, "rows": [
            {"s": [0, 0], "t": 0, "p": "1/4"},
            {"s": [0, 1], "t": 1, "p": 0.25},
            {"s": [1, 0], "t": 1, "p": 0.25},
            {"s": [1, 1], "t": 0, "p": "0.25"}]}"#;
        assert_eq!(JointDistribution::load(json).unwrap(), xor());
        assert!(JointDistribution::from_json(r#"{"n": 1, "rows": [], "x": 1}"#).is_err());
    }

    #[test]
    fn zero_mass_rows_flagged() {
        let d = JointDistribution::from_csv("s1,t,p\n0,0,1\n1,1,0\n").unwrap();
        assert_eq!(d.zero_mass_rows(), 1);
        assert_eq!(d.support().count(), 1);
    }

    #[test]
    fn events() {
        let d = xor();
        assert_eq!(
            d.probability_of_event(|r| r.sources[0] == 0 || r.sources[1] == 0),
            0.75
        );
        assert_eq!(d.probability_of_event(|_| true), 1.0);
        assert_eq!(d.probability_of_event(|_| false), 0.0);
    }

    #[test]
    fn xor_information() {
        let d = xor();
        let r00 = Realization::new(vec![0, 0], 0);
        assert_eq!(d.pointwise_mi(&r00, c(&[1])).unwrap(), 0.0);
        assert_eq!(d.pointwise_mi(&r00, c(&[1, 2])).unwrap(), 1.0);
        assert_eq!(d.pointwise_mi(&r00, Collection::EMPTY).unwrap(), 0.0);
        assert_eq!(d.mutual_information(c(&[1])).unwrap(), 0.0);
        assert_eq!(d.mutual_information(c(&[1, 2])).unwrap(), 1.0);
        assert_eq!(d.conditional_mi(c(&[1]), c(&[2])).unwrap(), 1.0);
        assert_eq!(d.conditional_mi(Collection::EMPTY, c(&[2])).unwrap(), 0.0);
        assert_eq!(
            d.conditional_mi(c(&[1, 2]), Collection::EMPTY).unwrap(),
            d.mutual_information(c(&[1, 2])).unwrap()
        );
    }

    #[test]
    fn zero_conditioning_event_is_domain_error() {
        let d = JointDistribution::from_csv("s1,t,p\n0,0,1\n1,1,0\n").unwrap();
        let r = Realization::new(vec![1], 0);
        assert!(matches!(
            d.pointwise_mi(&r, c(&[1])),
            Err(PidError::Domain(_))
        ));
    }

    #[test]
    fn and_gate_has_negative_pointwise_mi() {
        let d =
            JointDistribution::from_csv("s1,s2,t,p\n0,0,0,1/4\n0,1,0,1/4\n1,0,0,1/4\n1,1,1,1/4\n")
                .unwrap();
        // t = 0 observed together with s1 = 1: P(t=0|s1=1) = 1/2 < P(t=0) = 3/4
        let r = Realization::new(vec![1, 0], 0);
        assert!(d.pointwise_mi(&r, c(&[1])).unwrap() < 0.0);
    }

    #[test]
    fn echo_is_bit_exact() {
        let d = JointDistribution::from_csv("s1,t,p\n0,0,1/3\n1,1,2/3\n").unwrap();
        let again = JointDistribution::from_csv(&d.echo_csv()).unwrap();
        assert_eq!(d, again);
    }

    #[test]
    fn string_alphabets() {
        let d = JointDistribution::from_csv("s1,t,p\nheads,win,0.5\ntails,lose,0.5\n").unwrap();
        assert_eq!(
            d.source_alphabet(1),
            &["heads".to_string(), "tails".to_string()]
        );
        assert!((d.mutual_information(c(&[1])).unwrap() - 1.0).abs() < 1e-15);
    }
}
