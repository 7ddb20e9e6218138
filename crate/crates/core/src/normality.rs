//! Normality of lattice polytopes and the associated dilation bounds.
//!
//! `P` is normal when every lattice point of `mP` is a sum of `m` lattice
//! points of `P`. Writing `S_m` for the `m`-fold sumset of `P ∩ Z^n`, we
//! always have `S_m ⊆ mP`, and `z ∈ S_m` iff `z - p ∈ S_{m-1}` for some
//! lattice point `p` of `P`. The level checks below walk `mP` once per level
//! and keep `S_m` as "`mP` minus an explicit list of missing points", which
//! stays small in practice (empty for normal levels).

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::d_of_p;
use crate::error::{Error, Result};
use crate::geometry::{scan_system, Containment, LatticePoint, Polytope};

/// The `m`-fold sumset `{p_1 + ... + p_m : p_i ∈ points}`.
pub fn sumset_levels(points: &BTreeSet<LatticePoint>, m: u32) -> Result<BTreeSet<LatticePoint>> {
    if m == 0 {
        return Err(Error::invalid("sumset level must be at least 1"));
    }
    if points.is_empty() {
        return Err(Error::invalid("sumset of an empty point set"));
    }
    let mut current = points.clone();
    for _ in 1..m {
        current = current
            .iter()
            .flat_map(|s| points.iter().map(move |p| s.add(p)))
            .collect();
    }
    Ok(current)
}

/// Rings around `z/m` searched before the exhaustive summand scan.
const NEAR_RINGS: usize = 2;

/// Incremental computation of `S_k` for `k = 1, 2, ...`.
struct LevelScan<'a> {
    base: &'a Polytope,
    level: u32,
    /// `k P` for the current level `k`.
    dilate: Polytope,
    /// Lattice points of `kP` that are not in `S_k`.
    missing: HashSet<Vec<i64>>,
}

impl<'a> LevelScan<'a> {
    fn new(base: &'a Polytope) -> Self {
        LevelScan {
            base,
            level: 1,
            dilate: base.clone(),
            missing: HashSet::new(),
        }
    }

    /// Move to the next level; returns the lexicographically smallest point
    /// of the new level's dilate that is not in the sumset, if any.
    fn advance(&mut self) -> Result<Option<LatticePoint>> {
        let m = i64::from(self.level) + 1;
        let next = self.base.dilate(m)?;
        let base = self.base;
        let prev = &self.dilate;
        let prev_missing = &self.missing;
        let n = base.dim();

        // Summands p for z are the lattice points of P ∩ (z - prev); that
        // system is P's facets plus the negated facets of prev.
        let (base_lo, base_hi) = base.bounding_box();
        let (prev_lo, prev_hi) = prev.bounding_box();
        let normals: Vec<Vec<i64>> = base
            .facets()
            .iter()
            .map(|h| h.normal.clone())
            .chain(
                prev.facets()
                    .iter()
                    .map(|h| h.normal.iter().map(|a| -a).collect()),
            )
            .collect();
        let normals: Vec<&[i64]> = normals.iter().map(Vec::as_slice).collect();
        let mut offsets: Vec<i128> = base
            .facets()
            .iter()
            .chain(prev.facets())
            .map(|h| h.offset as i128)
            .collect();
        let split = base.facets().len();
        let (mut lo, mut hi) = (vec![0i64; n], vec![0i64; n]);
        let mut diff = vec![0i64; n];
        let mut cand = vec![0i64; n];
        let mut floor = vec![0i64; n];
        let mut missing = Vec::new();

        let in_prev_sumset = |z: &[i64], p: &[i64], diff: &mut Vec<i64>| {
            for ((d, a), b) in diff.iter_mut().zip(z).zip(p) {
                *d = a - b;
            }
            prev.contains_coords(diff, Containment::Closed)
                && (prev_missing.is_empty() || !prev_missing.contains(diff.as_slice()))
        };

        next.for_each_lattice_point(Containment::Closed, |z| {
            // z/m lies in P, and nearly always some summand sits within a
            // ring or two of it: search rings around floor(z/m) first.
            for (i, c) in floor.iter_mut().enumerate() {
                *c = z[i].div_euclid(m);
            }
            for ring in 0..=NEAR_RINGS {
                let width = 2 + 2 * ring;
                for code in 0..width.pow(n as u32) {
                    let mut rest = code;
                    let mut on_ring = false;
                    for i in 0..n {
                        let off = (rest % width) as i64 - ring as i64;
                        rest /= width;
                        on_ring |= off == -(ring as i64) || off == 1 + ring as i64;
                        cand[i] = floor[i] + off;
                    }
                    if (on_ring || ring == 0)
                        && base.contains_coords(&cand, Containment::Closed)
                        && in_prev_sumset(z, &cand, &mut diff)
                    {
                        return;
                    }
                }
            }
            for (j, h) in prev.facets().iter().enumerate() {
                let dot: i128 = h
                    .normal
                    .iter()
                    .zip(z)
                    .map(|(&a, &x)| a as i128 * x as i128)
                    .sum();
                offsets[split + j] = h.offset as i128 - dot;
            }
            for i in 0..n {
                lo[i] = base_lo[i].max(z[i] - prev_hi[i]);
                hi[i] = base_hi[i].min(z[i] - prev_lo[i]);
            }
            let found = !scan_system(&normals, &offsets, &lo, &hi, false, |prefix, a, b| {
                cand[..n - 1].copy_from_slice(prefix);
                (a..=b).all(|t| {
                    cand[n - 1] = t;
                    !in_prev_sumset(z, &cand, &mut diff)
                })
            });
            if !found {
                missing.push(z.to_vec());
            }
        });

        let witness = missing.first().cloned().map(LatticePoint::new);
        self.level += 1;
        self.dilate = next;
        self.missing = missing.into_iter().collect();
        Ok(witness)
    }
}

/// Result of checking a single level `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelCheck {
    pub level: u32,
    pub normal: bool,
    pub witness: Option<LatticePoint>,
}

/// Whether every lattice point of `mP` is a sum of `m` lattice points of `P`.
/// On failure the witness is the lexicographically smallest missing point.
pub fn is_normal_at_level(p: &Polytope, m: u32) -> Result<LevelCheck> {
    if m == 0 {
        return Err(Error::invalid("normality level must be at least 1"));
    }
    let mut scan = LevelScan::new(p);
    let mut witness = None;
    while scan.level < m {
        witness = scan.advance()?;
    }
    Ok(LevelCheck {
        level: m,
        normal: witness.is_none(),
        witness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalityVerdict {
    NormalUpToCap,
    NonNormal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub level: u32,
    pub point: LatticePoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub polytope_id: String,
    #[serde(rename = "levels")]
    pub levels_checked: Vec<u32>,
    pub verdict: NormalityVerdict,
    pub witness: Option<Witness>,
    pub cap_used: u32,
}

impl NormalityReport {
    pub fn is_normal(&self) -> bool {
        self.verdict == NormalityVerdict::NormalUpToCap
    }
}

/// Default level cap: `max(n - 1, 2)`.
pub fn default_cap(n: usize) -> u32 {
    (n.saturating_sub(1) as u32).max(2)
}

/// Check levels `2..=cap`, stopping at the first failure.
pub fn is_normal(p: &Polytope, cap: Option<u32>) -> Result<NormalityReport> {
    let cap = cap.unwrap_or_else(|| default_cap(p.dim()));
    if cap < 2 {
        return Err(Error::invalid(format!(
            "normality cap must be at least 2, got {cap}"
        )));
    }
    let mut scan = LevelScan::new(p);
    let mut levels_checked = Vec::new();
    let mut witness = None;
    while scan.level < cap {
        let missing = scan.advance()?;
        levels_checked.push(scan.level);
        if let Some(point) = missing {
            witness = Some(Witness {
                level: scan.level,
                point,
            });
            break;
        }
    }
    Ok(NormalityReport {
        polytope_id: p.id(),
        levels_checked,
        verdict: if witness.is_some() {
            NormalityVerdict::NonNormal
        } else {
            NormalityVerdict::NormalUpToCap
        },
        witness,
        cap_used: cap,
    })
}

/// Independent re-check of a non-normality witness: the point lies in
/// `level * P` and is absent from the explicitly enumerated sumset.
pub fn verify_witness(p: &Polytope, w: &Witness) -> Result<bool> {
    if w.level < 2 {
        return Ok(false);
    }
    let in_dilate = p
        .dilate(i64::from(w.level))?
        .contains(&w.point, Containment::Closed)?;
    let points: BTreeSet<LatticePoint> =
        p.lattice_points(Containment::Closed).into_iter().collect();
    let sums = sumset_levels(&points, w.level)?;
    Ok(in_dilate && !sums.contains(&w.point))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u32,
    pub d: u32,
    /// `max(n - d, 1)`: every `ℓ >= corollary_bound` gives a normal `ℓP`.
    pub corollary_bound: u32,
    pub classical_n0_bound: u32,
    /// `np_bound(p)` for `p = 0..=3`.
    pub np_bounds: Vec<i64>,
}

impl BoundReport {
    pub fn new(n: u32, d: u32) -> Self {
        BoundReport {
            n,
            d,
            corollary_bound: (i64::from(n) - i64::from(d)).max(1) as u32,
            classical_n0_bound: if n >= 2 { n - 1 } else { 1 },
            np_bounds: (0..=3).map(|p| np_bound(n, p)).collect(),
        }
    }
}

/// `n - 1 + p`: dilation factor from which property `N_p` holds for any
/// ample line bundle on an `n`-dimensional toric variety.
pub fn np_bound(n: u32, p: u32) -> i64 {
    i64::from(n) - 1 + i64::from(p)
}

pub fn normality_bound(p: &Polytope) -> Result<BoundReport> {
    let profile = d_of_p(p)?;
    Ok(BoundReport::new(p.dim() as u32, profile.d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DilateVerdict {
    pub ell: u32,
    pub verdict: NormalityVerdict,
    pub witness: Option<Witness>,
    pub cap_used: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryVerification {
    pub polytope_id: String,
    pub n: u32,
    pub d: u32,
    pub corollary_bound: u32,
    pub levels: Vec<DilateVerdict>,
    /// Dilation factors at or above the bound whose dilate was found non-normal.
    pub violations: Vec<u32>,
}

impl CorollaryVerification {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check normality of `ℓP` for `ℓ = bound ..= bound + extra_levels`.
pub fn verify_corollary(
    p: &Polytope,
    extra_levels: u32,
    cap: Option<u32>,
) -> Result<CorollaryVerification> {
    let bounds = normality_bound(p)?;
    let first = bounds.corollary_bound;
    let levels = (first..=first + extra_levels)
        .into_par_iter()
        .map(|ell| {
            let report = is_normal(&p.dilate(i64::from(ell))?, cap)?;
            Ok(DilateVerdict {
                ell,
                verdict: report.verdict,
                witness: report.witness,
                cap_used: report.cap_used,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = levels
        .iter()
        .filter(|l| l.verdict == NormalityVerdict::NonNormal)
        .map(|l| l.ell)
        .collect();
    Ok(CorollaryVerification {
        polytope_id: p.id(),
        n: bounds.n,
        d: bounds.d,
        corollary_bound: first,
        levels,
        violations,
    })
}

/// Autoregularity of the ample line bundle with polytope `P`: `n - 1 - d(P)`.
/// Negative values are returned as is.
pub fn autoregularity_formula(p: &Polytope) -> Result<i64> {
    let profile = d_of_p(p)?;
    Ok(p.dim() as i64 - 1 - i64::from(profile.d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{reeve_simplex, standard_simplex, unit_cube};

    fn set(v: &[&[i64]]) -> BTreeSet<LatticePoint> {
        v.iter().map(|c| LatticePoint::new(c.to_vec())).collect()
    }

    /// Brute-force oracle: all m-fold sums by explicit multiset recursion.
    fn brute_sums(points: &[LatticePoint], m: usize) -> BTreeSet<LatticePoint> {
        fn rec(
            points: &[LatticePoint],
            start: usize,
            left: usize,
            acc: LatticePoint,
            out: &mut BTreeSet<LatticePoint>,
        ) {
            if left == 0 {
                out.insert(acc);
                return;
            }
            for i in start..points.len() {
                rec(points, i, left - 1, acc.add(&points[i]), out);
            }
        }
        let mut out = BTreeSet::new();
        rec(
            points,
            0,
            m,
            LatticePoint::origin(points[0].dim()),
            &mut out,
        );
        out
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(
            sumset_levels(&set(&[&[0, 0], &[1, 0]]), 2).unwrap(),
            set(&[&[0, 0], &[1, 0], &[2, 0]])
        );
        let sq: BTreeSet<_> = unit_cube(2)
            .lattice_points(Containment::Closed)
            .into_iter()
            .collect();
        let s2 = sumset_levels(&sq, 2).unwrap();
        assert_eq!(s2.len(), 9);
        assert_eq!(s2, brute_sums(&sq.iter().cloned().collect::<Vec<_>>(), 2));

        let t2: Vec<_> = reeve_simplex(2).vertices().to_vec();
        let s = sumset_levels(&t2.iter().cloned().collect(), 2).unwrap();
        assert_eq!(s, brute_sums(&t2, 2));
        assert_eq!(s.len(), 10);
        assert!(!s.contains(&LatticePoint::new(vec![1, 1, 1])));

        assert!(sumset_levels(&sq, 0).is_err());
        assert!(sumset_levels(&BTreeSet::new(), 2).is_err());
    }

    #[test]
    fn level_checks() {
        let sq = is_normal_at_level(&unit_cube(2), 2).unwrap();
        assert!(sq.normal && sq.witness.is_none());
        let t2 = is_normal_at_level(&reeve_simplex(2), 2).unwrap();
        assert!(!t2.normal);
        assert_eq!(t2.witness, Some(LatticePoint::new(vec![1, 1, 1])));
        assert!(is_normal_at_level(&reeve_simplex(2), 1).unwrap().normal);
        assert!(is_normal_at_level(&reeve_simplex(2), 0).is_err());
    }

    #[test]
    fn level_scan_matches_sumset_past_failure() {
        // Past the first failing level the scan must track the true sumset.
        let t3 = reeve_simplex(3);
        let pts: BTreeSet<_> = t3.lattice_points(Containment::Closed).into_iter().collect();
        for m in 2..=4u32 {
            let sums = sumset_levels(&pts, m).unwrap();
            let expected = t3
                .dilate(i64::from(m))
                .unwrap()
                .lattice_points(Containment::Closed)
                .into_iter()
                .find(|z| !sums.contains(z));
            assert_eq!(
                is_normal_at_level(&t3, m).unwrap().witness,
                expected,
                "level {m}"
            );
        }
    }

    #[test]
    fn is_normal_examples() {
        let sq = is_normal(&unit_cube(2), None).unwrap();
        assert_eq!(sq.verdict, NormalityVerdict::NormalUpToCap);
        assert_eq!(sq.cap_used, 2);

        let t2 = reeve_simplex(2);
        let rep = is_normal(&t2, None).unwrap();
        assert_eq!(rep.verdict, NormalityVerdict::NonNormal);
        let w = rep.witness.clone().unwrap();
        assert_eq!(
            (w.level, w.point.clone()),
            (2, LatticePoint::new(vec![1, 1, 1]))
        );
        assert!(verify_witness(&t2, &w).unwrap());

        assert!(is_normal(&t2.dilate(2).unwrap(), None).unwrap().is_normal());
        assert!(is_normal(&t2, Some(1)).is_err());
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["verdict"], "non-normal");
        assert_eq!(json["levels"], serde_json::json!([2]));
    }

    #[test]
    fn bound_examples() {
        for n in 2..=4 {
            assert_eq!(
                normality_bound(&standard_simplex(n))
                    .unwrap()
                    .corollary_bound,
                1
            );
        }
        assert_eq!(
            normality_bound(&reeve_simplex(2)).unwrap().corollary_bound,
            2
        );
        let sq = normality_bound(&unit_cube(2)).unwrap();
        assert_eq!(sq.corollary_bound, 1);
        assert_eq!(sq.np_bounds[1], 2);
        assert_eq!(sq.np_bounds[0], i64::from(sq.classical_n0_bound));
    }

    #[test]
    fn corollary_examples() {
        let t2 = verify_corollary(&reeve_simplex(2), 1, None).unwrap();
        assert_eq!(
            t2.levels.iter().map(|l| l.ell).collect::<Vec<_>>(),
            vec![2, 3]
        );
        assert!(t2.passed());
        let d3 = verify_corollary(&standard_simplex(3), 2, None).unwrap();
        assert_eq!(d3.levels.len(), 3);
        assert!(d3.passed());
        let sq = verify_corollary(&unit_cube(2), 0, None).unwrap();
        assert_eq!(sq.levels[0].ell, 1);
        assert!(sq.passed());
    }

    #[test]
    fn autoregularity_examples() {
        assert_eq!(autoregularity_formula(&unit_cube(2)).unwrap(), 0);
        assert_eq!(autoregularity_formula(&reeve_simplex(2)).unwrap(), 1);
        assert_eq!(autoregularity_formula(&standard_simplex(3)).unwrap(), -1);
    }
}
