//! Full-dimensional lattice polytopes in `Z^n`.
//!
//! A [`Polytope`] is stored as its lexicographically sorted vertex list plus
//! the facet inequalities `<normal, x> >= offset` with inward primitive
//! normals. Facets are found by trying every hyperplane through `n` input
//! points, which is plenty for the small dimensions this crate targets.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg;

/// A point of the integer lattice. Ordering is lexicographic on coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn origin(dim: usize) -> Self {
        LatticePoint(vec![0; dim])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| a * k).collect())
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// The closed halfspace `{x : <normal, x> >= offset}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl HalfSpace {
    /// `<normal, x> - offset`; nonnegative exactly on the halfspace.
    #[inline]
    pub fn slack(&self, x: &[i64]) -> i128 {
        let dot: i128 = self
            .normal
            .iter()
            .zip(x)
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum();
        dot - self.offset as i128
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Closed,
    /// Strict inequalities on every facet. For full-dimensional polytopes
    /// this is the relative interior.
    RelativeInterior,
}

/// A full-dimensional lattice polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    vertices: Vec<LatticePoint>,
    facets: Vec<HalfSpace>,
    dim: usize,
}

/// Dimension of the affine span of `points`, computed over the rationals.
pub fn affine_dim(points: &[LatticePoint]) -> Result<usize> {
    let first = points
        .first()
        .ok_or_else(|| Error::invalid("empty point list"))?;
    let n = first.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != n) {
        return Err(Error::invalid(format!(
            "mixed coordinate lengths: {} and {}",
            n,
            p.dim()
        )));
    }
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.sub(first).into_coords())
        .collect();
    if diffs.is_empty() || n == 0 {
        return Ok(0);
    }
    Ok(linalg::integer_rank(&diffs))
}

impl Polytope {
    /// Convex hull of `points`, which must affinely span their ambient space.
    pub fn from_points(points: &[LatticePoint]) -> Result<Polytope> {
        let adim = affine_dim(points)?;
        let n = points[0].dim();
        if n == 0 {
            return Err(Error::invalid("ambient dimension must be at least 1"));
        }
        if adim != n {
            return Err(Error::NotFullDimensional {
                ambient: n,
                actual: adim,
            });
        }
        let points: Vec<LatticePoint> = points
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();

        let mut facets = BTreeSet::new();
        for subset in (0..points.len()).combinations(n) {
            let base = &points[subset[0]];
            let rows: Vec<Vec<i64>> = subset[1..]
                .iter()
                .map(|&i| points[i].sub(base).into_coords())
                .collect();
            let Some(normal) = linalg::primitive_normal(&rows, n)? else {
                continue;
            };
            let mut h = HalfSpace {
                offset: dot(&normal, base.coords()),
                normal,
            };
            let (mut pos, mut neg) = (false, false);
            for p in &points {
                match h.slack(p.coords()).signum() {
                    1 => pos = true,
                    -1 => neg = true,
                    _ => {}
                }
                if pos && neg {
                    break;
                }
            }
            if pos && neg {
                continue;
            }
            if neg {
                h.normal.iter_mut().for_each(|a| *a = -*a);
                h.offset = -h.offset;
            }
            facets.insert(h);
        }
        let facets: Vec<HalfSpace> = facets.into_iter().collect();

        // A boundary point is a vertex iff the normals of its tight facets
        // span the whole space.
        let vertices: Vec<LatticePoint> = points
            .into_iter()
            .filter(|p| {
                let tight: Vec<Vec<i64>> = facets
                    .iter()
                    .filter(|h| h.slack(p.coords()) == 0)
                    .map(|h| h.normal.clone())
                    .collect();
                tight.len() >= n && linalg::integer_rank(&tight) == n
            })
            .collect();

        Ok(Polytope {
            vertices,
            facets,
            dim: n,
        })
    }

    pub fn from_coords(points: &[Vec<i64>]) -> Result<Polytope> {
        let pts: Vec<LatticePoint> = points.iter().cloned().map(LatticePoint).collect();
        Polytope::from_points(&pts)
    }

    /// Parse the vertex-list JSON format: one array of equal-length integer arrays.
    pub fn from_json(text: &str) -> Result<Polytope> {
        let coords: Vec<Vec<i64>> = serde_json::from_str(text)
            .map_err(|e| Error::invalid(format!("malformed vertex list: {e}")))?;
        Polytope::from_coords(&coords)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.vertices).expect("vertex list serializes")
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn facets(&self) -> &[HalfSpace] {
        &self.facets
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Short stable identifier: truncated SHA-256 of the canonical vertex list.
    pub fn id(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        hex::encode(&digest[..8])
    }

    pub fn contains(&self, x: &LatticePoint, mode: Containment) -> Result<bool> {
        if x.dim() != self.dim {
            return Err(Error::invalid(format!(
                "point {} has dimension {}, polytope has {}",
                x,
                x.dim(),
                self.dim
            )));
        }
        Ok(self.contains_coords(x.coords(), mode))
    }

    #[inline]
    pub(crate) fn contains_coords(&self, x: &[i64], mode: Containment) -> bool {
        match mode {
            Containment::Closed => self.facets.iter().all(|h| h.slack(x) >= 0),
            Containment::RelativeInterior => self.facets.iter().all(|h| h.slack(x) > 0),
        }
    }

    /// `k * P`. Facet normals are unchanged and offsets scale by `k`.
    pub fn dilate(&self, k: i64) -> Result<Polytope> {
        if k <= 0 {
            return Err(Error::invalid(format!(
                "dilation factor must be positive, got {k}"
            )));
        }
        let overflow = || Error::Overflow(format!("dilation by {k}"));
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                v.coords()
                    .iter()
                    .map(|c| c.checked_mul(k).ok_or_else(overflow))
                    .collect::<Result<Vec<_>>>()
                    .map(LatticePoint)
            })
            .collect::<Result<Vec<_>>>()?;
        let facets = self
            .facets
            .iter()
            .map(|h| {
                Ok(HalfSpace {
                    normal: h.normal.clone(),
                    offset: h.offset.checked_mul(k).ok_or_else(overflow)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Polytope {
            vertices,
            facets,
            dim: self.dim,
        })
    }

    /// Integer bounding box `[lo, hi]` of the vertices.
    pub fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = self.vertices[0].coords().to_vec();
        let mut hi = lo.clone();
        for v in &self.vertices[1..] {
            for (i, &c) in v.coords().iter().enumerate() {
                lo[i] = lo[i].min(c);
                hi[i] = hi[i].max(c);
            }
        }
        (lo, hi)
    }

    /// All lattice points in `P` (or its interior), in lexicographic order.
    pub fn lattice_points(&self, mode: Containment) -> Vec<LatticePoint> {
        let mut out = Vec::new();
        self.for_each_lattice_point(mode, |x| out.push(LatticePoint(x.to_vec())));
        out
    }

    pub fn count_lattice_points(&self, mode: Containment) -> u64 {
        let mut count = 0u64;
        self.scan_columns(mode, |_, lo, hi| count += (hi - lo + 1) as u64);
        count
    }

    /// Visit every lattice point in lexicographic order.
    pub fn for_each_lattice_point<F: FnMut(&[i64])>(&self, mode: Containment, mut visit: F) {
        let mut buf = vec![0i64; self.dim];
        self.scan_columns(mode, |prefix, lo, hi| {
            buf[..prefix.len()].copy_from_slice(prefix);
            for t in lo..=hi {
                buf[prefix.len()] = t;
                debug_assert!(self.contains_coords(&buf, mode));
                visit(&buf);
            }
        });
    }

    fn scan_columns<F: FnMut(&[i64], i64, i64)>(&self, mode: Containment, mut visit: F) {
        let (lo, hi) = self.bounding_box();
        let normals: Vec<&[i64]> = self.facets.iter().map(|h| h.normal.as_slice()).collect();
        let offsets: Vec<i128> = self.facets.iter().map(|h| h.offset as i128).collect();
        let strict = mode == Containment::RelativeInterior;
        scan_system(&normals, &offsets, &lo, &hi, strict, |prefix, a, b| {
            visit(prefix, a, b);
            true
        });
    }

    /// Express `x` as a convex combination of `n + 1` vertices, if possible.
    ///
    /// Returns the chosen vertex indices and barycentric weights. Used as an
    /// independent certificate that `x` lies in the hull of the vertices.
    pub fn convex_combination(
        &self,
        x: &LatticePoint,
    ) -> Option<(Vec<usize>, Vec<num_rational::BigRational>)> {
        (0..self.vertices.len())
            .combinations(self.dim + 1)
            .find_map(|idx| {
                let simplex: Vec<&[i64]> = idx.iter().map(|&i| self.vertices[i].coords()).collect();
                let w = linalg::barycentric(&simplex, x.coords())?;
                linalg::is_nonnegative(&w).then_some((idx, w))
            })
    }
}

/// Lattice points of `{x ∈ [lo, hi] : <normals[j], x> >= offsets[j]}` (strict
/// inequalities when `strict`), visited column by column in lexicographic
/// order.
///
/// The box is scanned over the first `n - 1` coordinates; along the last
/// coordinate the inequalities are solved directly, and `visit(prefix, a, b)`
/// receives each nonempty column `a..=b`. Returning `false` from `visit` stops
/// the scan, in which case this function returns `false`.
pub(crate) fn scan_system<F: FnMut(&[i64], i64, i64) -> bool>(
    normals: &[&[i64]],
    offsets: &[i128],
    lo: &[i64],
    hi: &[i64],
    strict: bool,
    mut visit: F,
) -> bool {
    let n = lo.len();
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return true;
    }
    let mut prefix: Vec<i64> = lo[..n - 1].to_vec();
    loop {
        let mut col_lo = lo[n - 1];
        let mut col_hi = hi[n - 1];
        for (normal, &offset) in normals.iter().zip(offsets) {
            let partial: i128 = normal[..n - 1]
                .iter()
                .zip(&prefix)
                .map(|(&a, &x)| a as i128 * x as i128)
                .sum();
            // Need a * t >= rhs (closed) or a * t >= rhs + 1 (strict).
            let rhs = offset - partial + i128::from(strict);
            let a = normal[n - 1] as i128;
            match a.signum() {
                1 => col_lo = col_lo.max(Integer::div_ceil(&rhs, &a) as i64),
                -1 => col_hi = col_hi.min(Integer::div_floor(&rhs, &a) as i64),
                _ => {
                    if rhs > 0 {
                        col_hi = col_lo - 1;
                    }
                }
            }
            if col_lo > col_hi {
                break;
            }
        }
        if col_lo <= col_hi && !visit(&prefix, col_lo, col_hi) {
            return false;
        }
        // Advance the odometer over the first n-1 coordinates.
        let mut i = n - 1;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if prefix[i] < hi[i] {
                prefix[i] += 1;
                break;
            }
            prefix[i] = lo[i];
        }
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Standard simplex `conv{0, e_1, ..., e_n}`.
pub fn standard_simplex(n: usize) -> Polytope {
    let mut pts = vec![vec![0; n]];
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        pts.push(e);
    }
    Polytope::from_coords(&pts).expect("standard simplex is full-dimensional")
}

/// Unit cube `[0, 1]^n`.
pub fn unit_cube(n: usize) -> Polytope {
    let pts: Vec<Vec<i64>> = (0..1u32 << n)
        .map(|mask| (0..n).map(|i| i64::from((mask >> i) & 1)).collect())
        .collect();
    Polytope::from_coords(&pts).expect("cube is full-dimensional")
}

/// Reeve tetrahedron `T_q = conv{0, e_1, e_2, e_1 + e_2 + q e_3}`.
pub fn reeve_simplex(q: i64) -> Polytope {
    Polytope::from_coords(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, q]])
        .expect("Reeve simplex is full-dimensional for q >= 1")
}
