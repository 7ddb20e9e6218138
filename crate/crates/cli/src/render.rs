//! Aligned plain-text tables for `--format text`.

use serde::Serialize;

use polynorm::cohomology::CohomologyTable;
use polynorm::harness::{AnalysisRecord, BatchReport, VerificationEntry};
use polynorm::normality::Witness;
use polynorm::syzygy::ProbeReport;
use polynorm::{LatticePoint, Polytope};

#[derive(Serialize)]
pub struct CorpusItem {
    pub id: String,
    pub n: usize,
    pub vertices: Vec<LatticePoint>,
}

impl CorpusItem {
    pub fn new(p: &Polytope) -> Self {
        CorpusItem {
            id: p.id(),
            n: p.dim(),
            vertices: p.vertices().to_vec(),
        }
    }
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn render(&self) -> String {
        let mut width: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&width)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.header);
        let rule: Vec<String> = width.iter().map(|&w| "-".repeat(w)).collect();
        out += &line(&rule);
        for r in &self.rows {
            out += &line(r);
        }
        out
    }
}

fn pairs(items: &[(&str, String)]) -> String {
    let mut t = Table::new(&["field", "value"]);
    for (k, v) in items {
        t.row(vec![k.to_string(), v.clone()]);
    }
    t.render()
}

/// The serde label of a unit enum variant.
fn label<T: Serialize>(value: &T) -> String {
    match serde_json::to_value(value) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => "?".into(),
    }
}

fn witness(w: &Option<Witness>) -> String {
    w.as_ref().map_or_else(
        || "-".into(),
        |w| format!("{} at level {}", w.point, w.level),
    )
}

fn vertices(v: &[LatticePoint]) -> String {
    v.iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn yes(b: bool) -> String {
    if b { "pass" } else { "FAIL" }.into()
}

pub fn analysis(r: &AnalysisRecord) -> String {
    let np = r
        .bounds
        .np_bounds
        .iter()
        .map(|b| b.to_string())
        .collect::<Vec<_>>();
    pairs(&[
        ("id", r.polytope_id.clone()),
        ("vertices", vertices(&r.vertices)),
        ("n", r.n.to_string()),
        ("ehrhart", r.ehrhart.coeff_strings().join(" ")),
        ("d", r.d.to_string()),
        ("codegree", r.codegree.to_string()),
        ("corollary_bound", r.corollary_bound.to_string()),
        ("autoregularity", r.autoregularity.to_string()),
        ("np_bounds p=0..", np.join(" ")),
        ("verdict", label(&r.normality.verdict)),
        ("witness", witness(&r.normality.witness)),
        ("cap", r.normality.cap_used.to_string()),
        ("consistency", yes(r.checks.all())),
    ])
}

pub fn verification(e: &VerificationEntry) -> String {
    let mut out = analysis(&e.analysis);
    out.push('\n');
    let mut t = Table::new(&["ell", "verdict", "witness", "cap"]);
    for lv in &e.corollary.levels {
        t.row(vec![
            lv.ell.to_string(),
            label(&lv.verdict),
            witness(&lv.witness),
            lv.cap_used.to_string(),
        ]);
    }
    out += &t.render();
    out.push('\n');
    let probe = e
        .n1_probe
        .as_ref()
        .map_or("-".into(), |p| label(&p.verdict));
    out += &pairs(&[
        ("corollary", yes(e.corollary.passed())),
        ("reciprocity", yes(e.reciprocity)),
        ("extrapolation", yes(e.extrapolation)),
        ("autoregularity_minimal", yes(e.autoregularity_minimal)),
        ("n1_probe", probe),
    ]);
    for v in e.violations() {
        out += &format!("violation: {v}\n");
    }
    out
}

pub fn cohomology(c: &CohomologyTable) -> String {
    let n = c.rows.first().map_or(0, |r| r.h.len());
    let mut header = vec!["k".to_string()];
    header.extend((0..n).map(|i| format!("h{i}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut t = Table::new(&header);
    for r in &c.rows {
        let mut cells = vec![r.k.to_string()];
        cells.extend(r.h.iter().map(|h| h.to_string()));
        t.row(cells);
    }
    format!("polytope {}\n", c.polytope_id) + &t.render()
}

pub fn probe(p: &ProbeReport) -> String {
    let mut out = pairs(&[
        ("ell", p.ell.to_string()),
        ("cap", p.cap.to_string()),
        ("verdict", label(&p.verdict)),
        (
            "witness_fiber",
            p.witness_fiber
                .as_ref()
                .map_or("-".into(), |w| w.to_string()),
        ),
    ]);
    out.push('\n');
    let mut t = Table::new(&["degree", "fibers", "disconnected"]);
    for d in &p.degrees {
        t.row(vec![
            d.degree.to_string(),
            d.fibers.to_string(),
            d.disconnected
                .as_ref()
                .map_or("-".into(), |w| w.to_string()),
        ]);
    }
    out + &t.render()
}

pub fn corpus(items: &[CorpusItem]) -> String {
    let mut t = Table::new(&["#", "id", "n", "vertices"]);
    for (i, c) in items.iter().enumerate() {
        t.row(vec![
            i.to_string(),
            c.id.clone(),
            c.n.to_string(),
            vertices(&c.vertices),
        ]);
    }
    t.render()
}

pub fn batch(b: &BatchReport) -> String {
    let s = &b.summary;
    let of = |k: usize| format!("{k}/{}", s.polytopes);
    let mut out = pairs(&[
        ("polytopes", s.polytopes.to_string()),
        ("corollary", of(s.corollary_passes)),
        ("reciprocity", of(s.reciprocity_passes)),
        ("extrapolation", of(s.extrapolation_passes)),
        ("autoregularity", of(s.autoregularity_passes)),
        ("consistency", of(s.consistency_passes)),
        (
            "n1 connected",
            format!("{}/{}", s.n1_connected, s.n1_probes),
        ),
        ("non-normal", s.non_normal.to_string()),
        ("np bound above n-1+p", s.np_bound_not_dominated.to_string()),
        ("violations", b.violations.len().to_string()),
    ]);
    out.push('\n');
    let mut t = Table::new(&[
        "source",
        "id",
        "n",
        "d",
        "verdict",
        "witness",
        "corollary",
        "probe",
    ]);
    for e in &b.entries {
        let a = &e.analysis;
        t.row(vec![
            e.source.clone(),
            a.polytope_id.clone(),
            a.n.to_string(),
            a.d.to_string(),
            label(&a.normality.verdict),
            witness(&a.normality.witness),
            yes(e.corollary.passed()),
            e.n1_probe
                .as_ref()
                .map_or("-".into(), |p| label(&p.verdict)),
        ]);
    }
    out += &t.render();
    for v in &b.violations {
        out += &format!(
            "violation {} ({}): {}\n",
            v.polytope_id,
            v.source,
            v.failures.join("; ")
        );
    }
    out
}
