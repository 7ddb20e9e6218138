//! Seeded polytope corpora and batch verification runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::{autoregularity_from_definition, is_autoregular, np_bound_from_regularity};
use crate::counting::{d_of_p, ehrhart, extrapolation_check, reciprocity_check, EhrhartPolynomial};
use crate::error::{Error, Result};
use crate::geometry::{affine_dim, reeve_simplex, LatticePoint, Polytope};
use crate::normality::{
    is_normal, np_bound, verify_corollary, verify_witness, BoundReport, CorollaryVerification,
    NormalityReport,
};
use crate::syzygy::{n1_probe, ProbeReport};

const MAX_TRIES: usize = 1000;

/// Reeve simplices inserted into every corpus that contains dimension 3.
pub const REEVE_FIXTURES: [i64; 4] = [2, 3, 4, 5];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub coord_bound: i64,
    pub count_per_dim: usize,
    /// Points sampled per polytope before taking the hull.
    pub vertex_candidates: usize,
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        if let Some(&n) = self.dims.iter().find(|&&n| !(1..=4).contains(&n)) {
            return Err(Error::invalid(format!(
                "corpus dimension {n} outside 1..=4"
            )));
        }
        if !(1..=8).contains(&self.coord_bound) {
            return Err(Error::invalid(format!(
                "coordinate bound {} outside 1..=8",
                self.coord_bound
            )));
        }
        if let Some(&n) = self.dims.iter().find(|&&n| self.vertex_candidates < n + 1) {
            return Err(Error::invalid(format!(
                "{} vertex candidates cannot span dimension {n}",
                self.vertex_candidates
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: CorpusSpec = serde_json::from_str(text)
            .map_err(|e| Error::invalid(format!("malformed corpus spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }
}

/// Sample the corpus described by `spec`. Identical specs give identical
/// sequences.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<Polytope>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.dims.len() * spec.count_per_dim);
    for &n in &spec.dims {
        for index in 0..spec.count_per_dim {
            let polytope = (0..MAX_TRIES)
                .find_map(|_| {
                    let pts: Vec<LatticePoint> = (0..spec.vertex_candidates)
                        .map(|_| {
                            LatticePoint::new(
                                (0..n).map(|_| rng.random_range(0..=spec.coord_bound)).collect(),
                            )
                        })
                        .collect();
                    match affine_dim(&pts) {
                        Ok(d) if d == n => Some(Polytope::from_points(&pts)),
                        _ => None,
                    }
                })
                .ok_or_else(|| {
                    Error::Generation(format!(
                        "no full-dimensional sample for dimension {n} (polytope {index}) after {MAX_TRIES} tries"
                    ))
                })??;
            out.push(polytope);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyFlags {
    pub codegree: bool,
    pub autoregularity: bool,
    pub corollary_bound: bool,
    pub ehrhart_leading_positive: bool,
    pub ehrhart_constant_one: bool,
    pub witness_verified: bool,
}

impl ConsistencyFlags {
    pub fn all(&self) -> bool {
        self.codegree
            && self.autoregularity
            && self.corollary_bound
            && self.ehrhart_leading_positive
            && self.ehrhart_constant_one
            && self.witness_verified
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisRecord {
    pub polytope_id: String,
    pub vertices: Vec<LatticePoint>,
    pub n: u32,
    pub ehrhart: EhrhartPolynomial,
    pub d: u32,
    pub codegree: u32,
    pub corollary_bound: u32,
    pub autoregularity: i64,
    pub bounds: BoundReport,
    pub normality: NormalityReport,
    pub checks: ConsistencyFlags,
}

pub fn analyze(p: &Polytope, cap: Option<u32>) -> Result<AnalysisRecord> {
    let n = p.dim() as u32;
    let poly = ehrhart(p)?;
    let profile = d_of_p(p)?;
    let bounds = BoundReport::new(n, profile.d);
    let autoregularity = autoregularity_from_definition(p)?;
    let normality = is_normal(p, cap)?;
    let witness_verified = match &normality.witness {
        Some(w) => verify_witness(p, w)?,
        None => true,
    };
    let checks = ConsistencyFlags {
        codegree: profile.codegree == profile.d + 1,
        autoregularity: autoregularity == i64::from(n) - 1 - i64::from(profile.d),
        corollary_bound: i64::from(bounds.corollary_bound)
            == (i64::from(n) - i64::from(profile.d)).max(1),
        ehrhart_leading_positive: crate::counting::leading_positive(&poly),
        ehrhart_constant_one: poly.eval(0) == num_rational::BigRational::from_integer(1.into()),
        witness_verified,
    };
    Ok(AnalysisRecord {
        polytope_id: p.id(),
        vertices: p.vertices().to_vec(),
        n,
        ehrhart: poly,
        d: profile.d,
        codegree: profile.codegree,
        corollary_bound: bounds.corollary_bound,
        autoregularity,
        bounds,
        normality,
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationEntry {
    pub source: String,
    pub analysis: AnalysisRecord,
    pub corollary: CorollaryVerification,
    /// `L_P(-t) = (-1)^n #relint(tP)` for `t = 1..=n+1`.
    pub reciprocity: bool,
    /// `L_P(k)` matches a direct count at `k = n+1, n+2`.
    pub extrapolation: bool,
    /// The definitional autoregularity fails one step below its value.
    pub autoregularity_minimal: bool,
    /// `np_bound_from_regularity(P, p) <= n - 1 + p` for `p = 0..=3`.
    pub np_bound_dominated: Vec<bool>,
    /// Probe at `ℓ = n` (run for `n <= 3`).
    pub n1_probe: Option<ProbeReport>,
}

impl VerificationEntry {
    /// Failures that contradict a theorem or an internal invariant.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !self.corollary.passed() {
            v.push(format!(
                "normality corollary violated at ell = {:?}",
                self.corollary.violations
            ));
        }
        if !self.analysis.checks.all() {
            v.push("analysis consistency check failed".into());
        }
        if !self.reciprocity {
            v.push("Ehrhart reciprocity failed".into());
        }
        if !self.extrapolation {
            v.push("Ehrhart extrapolation failed".into());
        }
        if !self.autoregularity_minimal {
            v.push("autoregularity not minimal".into());
        }
        if let Some(probe) = self.n1_probe.as_ref().filter(|p| !p.is_connected()) {
            v.push(format!(
                "quadratic fiber connectivity failed at ell = {} (fiber {:?})",
                probe.ell, probe.witness_fiber
            ));
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub polytope_id: String,
    pub source: String,
    pub failures: Vec<String>,
    pub entry: VerificationEntry,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BatchSummary {
    pub polytopes: usize,
    pub corollary_passes: usize,
    pub reciprocity_passes: usize,
    pub extrapolation_passes: usize,
    pub autoregularity_passes: usize,
    pub consistency_passes: usize,
    pub n1_probes: usize,
    pub n1_connected: usize,
    pub non_normal: usize,
    /// Polytopes where the regularity-based `N_p` bound exceeds `n - 1 + p`
    /// for some `p`. Informational: this happens when `d(P) = 0` and `p = 0`.
    pub np_bound_not_dominated: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BatchReport {
    pub spec: CorpusSpec,
    pub extra_levels: u32,
    pub n1_cap: u32,
    pub normality_cap: Option<u32>,
    pub summary: BatchSummary,
    pub violations: Vec<Violation>,
    pub entries: Vec<VerificationEntry>,
}

impl BatchReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The random corpus followed by the Reeve fixtures (when dimension 3 is
/// requested), each tagged with its source.
pub fn corpus_with_fixtures(spec: &CorpusSpec) -> Result<Vec<(String, Polytope)>> {
    let mut out: Vec<(String, Polytope)> = generate_corpus(spec)?
        .into_iter()
        .enumerate()
        .map(|(i, p)| (format!("random-{i}"), p))
        .collect();
    if spec.dims.contains(&3) {
        out.extend(
            REEVE_FIXTURES
                .iter()
                .map(|&q| (format!("reeve-{q}"), reeve_simplex(q))),
        );
    }
    Ok(out)
}

pub fn verify_polytope(
    source: String,
    p: &Polytope,
    extra_levels: u32,
    n1_cap: u32,
    cap: Option<u32>,
) -> Result<VerificationEntry> {
    let n = p.dim();
    let analysis = analyze(p, cap)?;
    let corollary = verify_corollary(p, extra_levels, cap)?;
    let reciprocity = reciprocity_check(p, n as i64 + 1)?;
    let poly = ehrhart(p)?;
    let extrapolation = extrapolation_check(p, &poly, &[n as i64 + 1, n as i64 + 2])?;
    let autoregularity_minimal = !is_autoregular(p, analysis.autoregularity - 1)?;
    let np_bound_dominated = (0..=3u32)
        .map(|np| Ok(np_bound_from_regularity(p, i64::from(np))? <= np_bound(n as u32, np)))
        .collect::<Result<Vec<_>>>()?;
    let n1_probe = if n <= 3 {
        Some(n1_probe(p, n as i64, n1_cap)?)
    } else {
        None
    };
    Ok(VerificationEntry {
        source,
        analysis,
        corollary,
        reciprocity,
        extrapolation,
        autoregularity_minimal,
        np_bound_dominated,
        n1_probe,
    })
}

pub fn run_verification(
    spec: &CorpusSpec,
    extra_levels: u32,
    n1_cap: u32,
    cap: Option<u32>,
) -> Result<BatchReport> {
    let corpus = corpus_with_fixtures(spec)?;
    let entries = corpus
        .into_par_iter()
        .map(|(source, p)| verify_polytope(source, &p, extra_levels, n1_cap, cap))
        .collect::<Result<Vec<_>>>()?;

    let mut summary = BatchSummary {
        polytopes: entries.len(),
        ..BatchSummary::default()
    };
    let mut violations = Vec::new();
    for e in &entries {
        summary.corollary_passes += usize::from(e.corollary.passed());
        summary.reciprocity_passes += usize::from(e.reciprocity);
        summary.extrapolation_passes += usize::from(e.extrapolation);
        summary.autoregularity_passes +=
            usize::from(e.analysis.checks.autoregularity && e.autoregularity_minimal);
        summary.consistency_passes += usize::from(e.analysis.checks.all());
        summary.non_normal += usize::from(!e.analysis.normality.is_normal());
        summary.np_bound_not_dominated += usize::from(e.np_bound_dominated.contains(&false));
        if let Some(probe) = &e.n1_probe {
            summary.n1_probes += 1;
            summary.n1_connected += usize::from(probe.is_connected());
        }
        let failures = e.violations();
        if !failures.is_empty() {
            violations.push(Violation {
                polytope_id: e.analysis.polytope_id.clone(),
                source: e.source.clone(),
                failures,
                entry: e.clone(),
            });
        }
    }
    Ok(BatchReport {
        spec: spec.clone(),
        extra_levels,
        n1_cap,
        normality_cap: cap,
        summary,
        violations,
        entries,
    })
}
