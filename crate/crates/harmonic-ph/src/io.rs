//! Filtration text files, barcode JSON and SVG, and distance CSV tables.
//!
//! A filtration file has one record per line, `<value> <v0> <v1> ... <vk>`,
//! with `#` starting a comment. If every value is an integer the values are
//! used directly as filtration indices; otherwise they are real function
//! values and the indices are their ranks.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::essential::EssentialReport;
use crate::persistence::{AdmissibleFunction, Death, Filtration, HarmonicBar};
use crate::stability::Contribution;

/// Gap used for closure repair when the file has a single distinct value.
pub const LONE_VALUE_STEP: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueKind {
    Index,
    Real,
}

/// A filtration read from text, with the values as (possibly repaired and
/// rescaled) and the simplices in file order followed by inserted faces.
#[derive(Clone, Debug)]
pub struct ParsedFiltration {
    pub kind: ValueKind,
    pub records: Vec<(Simplex, f64)>,
    pub filtration: Filtration,
    pub warnings: Vec<String>,
}

impl ParsedFiltration {
    pub fn complex(&self) -> &SimplicialComplex {
        self.filtration.complex()
    }

    /// The real function behind the filtration: file values for real input,
    /// `index / N` for index input.
    pub fn function(&self) -> Result<AdmissibleFunction<f64>> {
        match self.kind {
            ValueKind::Real => AdmissibleFunction::from_pairs(self.complex().clone(), &self.records),
            ValueKind::Index => Ok(self.filtration.normalized_function()),
        }
    }
}

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse { line, reason: reason.into() }
}

pub fn parse_filtration(text: &str) -> Result<ParsedFiltration> {
    let mut raw: Vec<(usize, &str, Simplex)> = Vec::new();
    let mut line_of: HashMap<Simplex, usize> = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut tokens = body.split_whitespace();
        let value = tokens.next().expect("non-empty line");
        let vertices = tokens
            .map(|t| t.parse::<usize>().map_err(|_| parse_err(ln, format!("bad vertex '{t}'"))))
            .collect::<Result<Vec<_>>>()?;
        if vertices.is_empty() {
            return Err(parse_err(ln, "record has no vertices"));
        }
        let s = Simplex::new(vertices).map_err(|_| parse_err(ln, "vertices must be strictly increasing"))?;
        if line_of.contains_key(&s) {
            return Err(Error::DuplicateSimplex { line: ln, simplex: s });
        }
        line_of.insert(s.clone(), ln);
        raw.push((ln, value, s));
    }
    let kind = if raw.iter().all(|(_, v, _)| v.parse::<u64>().is_ok()) { ValueKind::Index } else { ValueKind::Real };
    let mut records: Vec<(Simplex, f64)> = Vec::with_capacity(raw.len());
    for (ln, v, s) in &raw {
        let x: f64 = v.parse().map_err(|_| parse_err(*ln, format!("bad value '{v}'")))?;
        if !x.is_finite() {
            return Err(parse_err(*ln, format!("value '{v}' is not finite")));
        }
        records.push((s.clone(), x));
    }
    let mut warnings = Vec::new();
    repair_closure(&mut records, kind, &mut line_of, &mut warnings);
    let value_of: HashMap<Simplex, f64> = records.iter().cloned().collect();
    for (s, v) in &records {
        for (_, f) in s.facets() {
            if value_of[&f] > *v {
                return Err(Error::NonMonotone { line: line_of[s], simplex: s.clone(), face: f });
            }
        }
    }
    if kind == ValueKind::Real {
        rescale(&mut records, &mut warnings);
    }
    let complex = SimplicialComplex::build(records.iter().map(|(s, _)| s.clone()));
    let filtration = match kind {
        ValueKind::Index => {
            let entries: Vec<(Simplex, usize)> = records.iter().map(|(s, v)| (s.clone(), *v as usize)).collect();
            Filtration::new(complex, &entries)?
        }
        ValueKind::Real => {
            let mut distinct: Vec<f64> = records.iter().map(|r| r.1).collect();
            distinct.sort_by(f64::total_cmp);
            distinct.dedup();
            let entries: Vec<(Simplex, usize)> = records
                .iter()
                .map(|(s, v)| (s.clone(), distinct.partition_point(|x| x < v)))
                .collect();
            Filtration::new(complex, &entries)?.with_values(distinct)?
        }
    };
    Ok(ParsedFiltration { kind, records, filtration, warnings })
}

/// Adds missing faces just below their lowest coface. A face of a coface at
/// depth `d` (file simplices have depth 0) goes `step / 2^d` below it, so
/// inserted values never reach the next lower file value. Inserted faces
/// inherit the line number of the first coface that required them.
fn repair_closure(
    records: &mut Vec<(Simplex, f64)>,
    kind: ValueKind,
    line_of: &mut HashMap<Simplex, usize>,
    warnings: &mut Vec<String>,
) {
    let step = match kind {
        ValueKind::Index => 0.0,
        ValueKind::Real => {
            let mut vals: Vec<f64> = records.iter().map(|r| r.1).collect();
            vals.sort_by(f64::total_cmp);
            vals.dedup();
            let gap = vals.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
            if gap.is_finite() { gap / 2.0 } else { LONE_VALUE_STEP }
        }
    };
    let mut known: HashMap<Simplex, (f64, u32)> = records.iter().map(|(s, v)| (s.clone(), (*v, 0))).collect();
    let top = records.iter().map(|r| r.0.dim()).max().unwrap_or(0);
    let mut inserted: Vec<Simplex> = Vec::new();
    for p in (1..=top).rev() {
        let mut cofaces: Vec<Simplex> = known.keys().filter(|s| s.dim() == p).cloned().collect();
        cofaces.sort();
        let mut pending: HashMap<Simplex, (f64, u32)> = HashMap::new();
        for c in &cofaces {
            let (cv, depth) = known[c];
            let below = cv - step / f64::powi(2.0, depth as i32);
            for (_, f) in c.facets() {
                if known.contains_key(&f) {
                    continue;
                }
                let e = pending.entry(f.clone()).or_insert((below, depth + 1));
                e.0 = e.0.min(below);
                e.1 = e.1.max(depth + 1);
                let ln = line_of[c];
                line_of.entry(f).or_insert(ln);
            }
        }
        let mut new: Vec<(Simplex, (f64, u32))> = pending.into_iter().collect();
        new.sort_by(|a, b| a.0.cmp(&b.0));
        for (f, vd) in new {
            known.insert(f.clone(), vd);
            records.push((f.clone(), vd.0));
            inserted.push(f);
        }
    }
    if !inserted.is_empty() {
        let list: Vec<String> = inserted
            .iter()
            .map(|s| format!("{}@{}", s, known[s].0))
            .collect();
        warnings.push(format!("inserted {} missing faces: {}", inserted.len(), list.join(" ")));
    }
}

fn rescale(records: &mut [(Simplex, f64)], warnings: &mut Vec<String>) {
    let lo = records.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let hi = records.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    if records.is_empty() || (lo >= 0.0 && hi <= 1.0) {
        return;
    }
    let width = hi - lo;
    for r in records.iter_mut() {
        r.1 = if width > 0.0 { (r.1 - lo) / width } else { 0.0 };
    }
    warnings.push(format!("values rescaled from [{lo}, {hi}] to [0, 1]"));
}

/// Writes records back in the same order; re-parsing gives the same values.
pub fn emit_filtration(parsed: &ParsedFiltration) -> String {
    let mut out = String::new();
    for (s, v) in &parsed.records {
        let verts: Vec<String> = s.vertices().iter().map(usize::to_string).collect();
        match parsed.kind {
            ValueKind::Index => writeln!(out, "{} {}", *v as u64, verts.join(" ")),
            ValueKind::Real => writeln!(out, "{:?} {}", v, verts.join(" ")),
        }
        .expect("writing to a String");
    }
    out
}

/// Rounds to 12 significant digits; `-0` becomes `0`.
pub fn round12(x: f64) -> f64 {
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// `t` written as an integer or the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeathField(pub Death);

impl Serialize for DeathField {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Death::Finite(t) => ser.serialize_u64(t as u64),
            Death::Infinite => ser.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for DeathField {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Str(String),
        }
        match Raw::deserialize(de)? {
            Raw::Int(t) => Ok(DeathField(Death::Finite(t as usize))),
            Raw::Str(s) if s == "inf" => Ok(DeathField(Death::Infinite)),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad death time '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub simplex: Simplex,
    pub coefficient: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarRecord {
    pub p: usize,
    pub s: usize,
    pub t: DeathField,
    pub multiplicity: usize,
    pub initial_basis: Vec<Vec<Term>>,
    pub terminal_basis: Option<Vec<Vec<Term>>>,
    pub essential: Option<Vec<Simplex>>,
    pub content: Option<f64>,
}

/// Sparse rounded form of a unit vector, sign fixed so that the first
/// coefficient is positive.
pub fn terms(k: &SimplicialComplex, p: usize, v: &[f64], tol: f64) -> Vec<Term> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let thr = tol * norm;
    let sign = match v.iter().find(|x| x.abs() > thr) {
        Some(&x) if x < 0.0 => -1.0,
        _ => 1.0,
    };
    v.iter()
        .enumerate()
        .filter(|(_, x)| x.abs() > thr)
        .map(|(i, &x)| Term { simplex: k.simplices(p)[i].clone(), coefficient: round12(sign * x) })
        .collect()
}

impl BarRecord {
    pub fn new(k: &SimplicialComplex, bar: &HarmonicBar<f64>, report: Option<&EssentialReport<f64>>, tol: f64) -> Self {
        let basis = |s: &crate::subspace::Subspace<f64>| s.vectors().iter().map(|v| terms(k, bar.p, v, tol)).collect();
        BarRecord {
            p: bar.p,
            s: bar.bar.s,
            t: DeathField(bar.bar.t),
            multiplicity: bar.bar.multiplicity,
            initial_basis: basis(&bar.initial),
            terminal_basis: bar.terminal.as_ref().map(basis),
            essential: report.map(|r| r.essential.clone()),
            content: report.map(|r| round12(r.content)),
        }
    }
}

pub fn emit_barcode_json(records: &[BarRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

pub fn parse_barcode_json(text: &str) -> Result<Vec<BarRecord>> {
    serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))
}

#[derive(Clone, Debug)]
pub struct SvgOptions {
    pub width: f64,
    pub row_height: f64,
    pub margin: f64,
    /// Largest index on the axis; defaults to the largest finite endpoint.
    pub last_index: Option<usize>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { width: 640.0, row_height: 18.0, margin: 40.0, last_index: None }
    }
}

const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Horizontal bar plot, one row per record in the given order.
pub fn emit_barcode_svg(records: &[BarRecord], opts: &SvgOptions) -> String {
    let last = opts.last_index.unwrap_or_else(|| {
        records
            .iter()
            .flat_map(|r| [Some(r.s), r.t.0.finite()])
            .flatten()
            .max()
            .unwrap_or(1)
            .max(1)
    });
    let m = opts.margin;
    let plot_w = opts.width - 2.0 * m;
    let arrow_room = 12.0;
    let x_of = |i: usize| m + plot_w * i as f64 / last as f64;
    let height = 2.0 * m + opts.row_height * records.len() as f64;
    let axis_y = height - m + 4.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.1}" height="{:.1}" viewBox="0 0 {:.1} {:.1}">"#,
        opts.width + arrow_room,
        height + 16.0,
        opts.width + arrow_room,
        height + 16.0
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<line x1="{:.1}" y1="{axis_y:.1}" x2="{:.1}" y2="{axis_y:.1}" stroke="black"/>"#,
        m,
        opts.width - m + arrow_room
    );
    for i in 0..=last {
        let x = x_of(i);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.1}" y1="{axis_y:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/><text x="{x:.1}" y="{:.1}" font-size="10" text-anchor="middle">{i}</text>"#,
            axis_y + 4.0,
            axis_y + 15.0
        );
    }
    for (row, r) in records.iter().enumerate() {
        let y = m + opts.row_height * (row as f64 + 0.5);
        let color = COLORS[r.p % COLORS.len()];
        let x0 = x_of(r.s);
        let x1 = match r.t.0 {
            Death::Finite(t) => x_of(t),
            Death::Infinite => opts.width - m,
        };
        let _ = writeln!(
            out,
            r#"<line x1="{x0:.1}" y1="{y:.1}" x2="{x1:.1}" y2="{y:.1}" stroke="{color}" stroke-width="4"/>"#
        );
        if r.t.0 == Death::Infinite {
            let _ = writeln!(
                out,
                r#"<polygon points="{x1:.1},{:.1} {:.1},{y:.1} {x1:.1},{:.1}" fill="{color}"/>"#,
                y - 5.0,
                x1 + arrow_room,
                y + 5.0
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">H{} x{}</text>"#,
            m - 4.0,
            y + 3.5,
            r.p,
            r.multiplicity
        );
    }
    out.push_str("</svg>\n");
    out
}

/// One row per contribution: `s_start,s_end,t_start,t_end,weight,distance`.
pub fn distance_csv(detail: &[Contribution]) -> String {
    let mut out = String::from("s_start,s_end,t_start,t_end,weight,distance\n");
    for c in detail {
        let (t0, t1) = c.t.map_or((String::new(), String::new()), |t| (t[0].to_string(), t[1].to_string()));
        let _ = writeln!(out, "{},{},{t0},{t1},{},{}", c.s[0], c.s[1], c.weight, round12(c.distance));
    }
    out
}
