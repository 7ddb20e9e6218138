//! Degree-capped probe of quadratic generation for the toric ideal of the
//! lattice points of `ℓP`.
//!
//! The points `(1, u)`, `u ∈ ℓP ∩ Z^n`, form a configuration. For a target
//! `b` whose first coordinate is `d`, the fiber of `b` is the set of size-`d`
//! multisets of configuration points summing to `b`. The toric ideal is
//! generated by quadrics up to degree `d` exactly when every fiber of degree
//! at most `d` is connected under quadratic exchanges
//! `{u, v} -> {u', v'}` with `u + v = u' + v'`.
//!
//! [`n1_probe`] does not materialize fibers. For `d >= 3`, any two elements
//! joined by a move share a point, so once all fibers of degree `d - 1` are
//! known to be connected, the fiber of `b` is connected iff the graph on
//! points `u` with `b - u` reachable in degree `d - 1`, where `u ~ v` when
//! `b - u - v` is reachable in degree `d - 2`, is connected.
//! [`n1_probe_exhaustive`] builds the fiber graphs explicitly and serves as
//! a cross-check on small inputs.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Containment, LatticePoint, Polytope};

/// Homogenized lattice points `(1, u)` of `ℓP`, lexicographically ordered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfiguration {
    points: Vec<LatticePoint>,
    n_plus_1: usize,
}

impl PointConfiguration {
    /// Configuration from explicit homogenized points (first coordinate 1).
    pub fn new(points: Vec<LatticePoint>) -> Result<Self> {
        let points: Vec<LatticePoint> = points
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let n_plus_1 = points
            .first()
            .map(LatticePoint::dim)
            .ok_or_else(|| Error::invalid("empty configuration"))?;
        if let Some(bad) = points
            .iter()
            .find(|p| p.dim() != n_plus_1 || p.coords()[0] != 1)
        {
            return Err(Error::invalid(format!(
                "configuration point {bad} is not of the form (1, u)"
            )));
        }
        Ok(PointConfiguration { points, n_plus_1 })
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn ambient_dim(&self) -> usize {
        self.n_plus_1
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// All achievable sums of `d` points, in lexicographic order.
    pub fn degree_sums(&self, d: u32) -> BTreeSet<LatticePoint> {
        let base: BTreeSet<LatticePoint> = self.points.iter().cloned().collect();
        let mut current = base.clone();
        for _ in 1..d {
            current = current
                .iter()
                .flat_map(|s| base.iter().map(move |p| s.add(p)))
                .collect();
        }
        current
    }
}

pub fn build_configuration(p: &Polytope, ell: i64) -> Result<PointConfiguration> {
    let points = p
        .dilate(ell)?
        .lattice_points(Containment::Closed)
        .into_iter()
        .map(|u| {
            let mut c = Vec::with_capacity(u.dim() + 1);
            c.push(1);
            c.extend_from_slice(u.coords());
            LatticePoint::new(c)
        })
        .collect();
    Ok(PointConfiguration {
        points,
        n_plus_1: p.dim() + 1,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fiber {
    pub target: LatticePoint,
    /// Each element is a multiset, listed in nondecreasing point order.
    pub elements: Vec<Vec<LatticePoint>>,
}

/// Every size-`d` multiset of configuration points summing to `b`, where `d`
/// is the first coordinate of `b`.
pub fn enumerate_fiber(c: &PointConfiguration, b: &LatticePoint) -> Result<Fiber> {
    if b.dim() != c.n_plus_1 {
        return Err(Error::invalid(format!(
            "target {} has dimension {}, configuration has {}",
            b,
            b.dim(),
            c.n_plus_1
        )));
    }
    let d = b.coords()[0];
    if d < 2 {
        return Err(Error::invalid(format!(
            "fiber degree must be at least 2, got {d}"
        )));
    }
    let elements = fiber_indices(c, b.coords(), d as usize)
        .into_iter()
        .map(|idx| idx.into_iter().map(|i| c.points[i].clone()).collect())
        .collect();
    Ok(Fiber {
        target: b.clone(),
        elements,
    })
}

fn fiber_indices(c: &PointConfiguration, target: &[i64], d: usize) -> Vec<Vec<usize>> {
    let dim = c.n_plus_1;
    let mut lo = vec![i64::MAX; dim];
    let mut hi = vec![i64::MIN; dim];
    for p in &c.points {
        for (i, &x) in p.coords().iter().enumerate() {
            lo[i] = lo[i].min(x);
            hi[i] = hi[i].max(x);
        }
    }

    struct Search<'a> {
        points: &'a [LatticePoint],
        lo: Vec<i64>,
        hi: Vec<i64>,
        out: Vec<Vec<usize>>,
        stack: Vec<usize>,
    }

    impl Search<'_> {
        fn go(&mut self, start: usize, left: usize, residual: &mut [i64]) {
            if left == 0 {
                if residual.iter().all(|&r| r == 0) {
                    self.out.push(self.stack.clone());
                }
                return;
            }
            let l = left as i64;
            let feasible = residual
                .iter()
                .enumerate()
                .all(|(i, &r)| r >= l * self.lo[i] && r <= l * self.hi[i]);
            if !feasible {
                return;
            }
            for i in start..self.points.len() {
                let p = self.points[i].coords();
                residual.iter_mut().zip(p).for_each(|(r, x)| *r -= x);
                self.stack.push(i);
                self.go(i, left - 1, residual);
                self.stack.pop();
                residual.iter_mut().zip(p).for_each(|(r, x)| *r += x);
            }
        }
    }

    let mut search = Search {
        points: &c.points,
        lo,
        hi,
        out: Vec::new(),
        stack: Vec::with_capacity(d),
    };
    let mut residual = target.to_vec();
    search.go(0, d, &mut residual);
    search.out
}

/// Two equal-sum multisets (sorted index lists) are one quadratic move apart
/// iff, after cancelling common entries, exactly two remain on each side.
fn one_move_apart(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    a.len() - common == 2
}

/// Connectivity of an explicit fiber graph under quadratic moves.
pub fn fiber_is_connected(f: &Fiber) -> bool {
    let elems = &f.elements;
    if elems.len() <= 1 {
        return true;
    }
    let mut seen = vec![false; elems.len()];
    let mut queue = vec![0];
    seen[0] = true;
    while let Some(i) = queue.pop() {
        for j in 0..elems.len() {
            if !seen[j] && multiset_one_move_apart(&elems[i], &elems[j]) {
                seen[j] = true;
                queue.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub(crate) fn multiset_one_move_apart(a: &[LatticePoint], b: &[LatticePoint]) -> bool {
    // Elements are sorted, so rank by position in the merged order.
    let mut all: Vec<&LatticePoint> = a.iter().chain(b).collect();
    all.sort();
    all.dedup();
    let idx = |x: &LatticePoint| all.binary_search(&x).unwrap();
    let ia: Vec<usize> = a.iter().map(idx).collect();
    let ib: Vec<usize> = b.iter().map(idx).collect();
    one_move_apart(&ia, &ib)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeVerdict {
    ConnectedUpToCap,
    Disconnected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub degree: u32,
    pub fibers: usize,
    pub disconnected: Option<LatticePoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub ell: i64,
    pub cap: u32,
    pub verdict: ProbeVerdict,
    pub witness_fiber: Option<LatticePoint>,
    #[serde(skip)]
    pub degrees: Vec<DegreeSummary>,
}

impl ProbeReport {
    pub fn is_connected(&self) -> bool {
        self.verdict == ProbeVerdict::ConnectedUpToCap
    }

    fn from_degrees(ell: i64, cap: u32, degrees: Vec<DegreeSummary>) -> Self {
        let witness_fiber = degrees.iter().find_map(|s| s.disconnected.clone());
        ProbeReport {
            ell,
            cap,
            verdict: if witness_fiber.is_some() {
                ProbeVerdict::Disconnected
            } else {
                ProbeVerdict::ConnectedUpToCap
            },
            witness_fiber,
            degrees,
        }
    }
}

fn check_probe_args(ell: i64, cap: u32) -> Result<()> {
    if ell < 1 {
        return Err(Error::invalid(format!("ell must be positive, got {ell}")));
    }
    if cap < 2 {
        return Err(Error::invalid(format!(
            "degree cap must be at least 2, got {cap}"
        )));
    }
    Ok(())
}

/// Probe fiber connectivity for degrees `2..=degree_cap`, stopping at the
/// first degree with a disconnected fiber (lexicographically smallest target).
pub fn n1_probe(p: &Polytope, ell: i64, degree_cap: u32) -> Result<ProbeReport> {
    check_probe_args(ell, degree_cap)?;
    let config = build_configuration(p, ell)?;
    Ok(ProbeReport::from_degrees(
        ell,
        degree_cap,
        probe_configuration(&config, degree_cap),
    ))
}

/// Lattice points inside a fixed box: a bitmap when the box is small
/// enough, a hash set otherwise.
enum PointSet {
    Dense {
        lo: Vec<i64>,
        extent: Vec<i64>,
        bits: Vec<u64>,
    },
    Sparse(HashSet<Vec<i64>>),
}

const DENSE_LIMIT: i64 = 1 << 27;

impl PointSet {
    fn for_box(lo: Vec<i64>, hi: &[i64]) -> Self {
        let extent: Vec<i64> = lo.iter().zip(hi).map(|(l, h)| h - l + 1).collect();
        let cells = extent.iter().try_fold(1i64, |acc, &e| {
            acc.checked_mul(e).filter(|&c| c <= DENSE_LIMIT)
        });
        match cells {
            Some(cells) => PointSet::Dense {
                lo,
                extent,
                bits: vec![0; (cells as usize).div_ceil(64)],
            },
            None => PointSet::Sparse(HashSet::new()),
        }
    }

    /// Row-major index, so index order is lexicographic order.
    #[inline]
    fn index(lo: &[i64], extent: &[i64], x: &[i64]) -> Option<usize> {
        let mut idx = 0i64;
        for ((&l, &e), &c) in lo.iter().zip(extent).zip(x) {
            let off = c - l;
            if off < 0 || off >= e {
                return None;
            }
            idx = idx * e + off;
        }
        Some(idx as usize)
    }

    #[inline]
    fn contains(&self, x: &[i64]) -> bool {
        match self {
            PointSet::Dense { lo, extent, bits } => {
                Self::index(lo, extent, x).is_some_and(|i| bits[i / 64] >> (i % 64) & 1 == 1)
            }
            PointSet::Sparse(set) => set.contains(x),
        }
    }

    fn insert(&mut self, x: &[i64]) {
        match self {
            PointSet::Dense { lo, extent, bits } => {
                let i = Self::index(lo, extent, x).expect("point inside its degree box");
                bits[i / 64] |= 1 << (i % 64);
            }
            PointSet::Sparse(set) => {
                set.insert(x.to_vec());
            }
        }
    }

    /// Members in lexicographic order.
    fn sorted(&self) -> Vec<Vec<i64>> {
        match self {
            PointSet::Dense { lo, extent, bits } => {
                let mut out = Vec::new();
                for (w, &word) in bits.iter().enumerate() {
                    let mut word = word;
                    while word != 0 {
                        let mut i = (w * 64 + word.trailing_zeros() as usize) as i64;
                        word &= word - 1;
                        let mut x = vec![0; lo.len()];
                        for k in (0..lo.len()).rev() {
                            x[k] = lo[k] + i % extent[k];
                            i /= extent[k];
                        }
                        out.push(x);
                    }
                }
                out
            }
            PointSet::Sparse(set) => {
                let mut out: Vec<Vec<i64>> = set.iter().cloned().collect();
                out.sort();
                out
            }
        }
    }
}

/// Per-degree connectivity summaries for `config`, up to the first failure.
pub fn probe_configuration(config: &PointConfiguration, degree_cap: u32) -> Vec<DegreeSummary> {
    let pts: Vec<&[i64]> = config.points.iter().map(|x| x.coords()).collect();
    let dim = config.n_plus_1;
    let mut lo = vec![i64::MAX; dim];
    let mut hi = vec![i64::MIN; dim];
    for p in &pts {
        for i in 0..dim {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let scaled = |v: &[i64], k: i64| -> Vec<i64> { v.iter().map(|x| x * k).collect() };

    // sums[k] holds the achievable sums of k points (sums[0] unused).
    let mut sums: Vec<PointSet> = vec![PointSet::Sparse(HashSet::new())];
    let mut first = PointSet::for_box(lo.clone(), &hi);
    pts.iter().for_each(|p| first.insert(p));
    sums.push(first);

    let mut degrees = Vec::new();
    let mut buf = vec![0i64; dim];
    for d in 2..=degree_cap {
        let k = i64::from(d);
        let mut next = PointSet::for_box(scaled(&lo, k), &scaled(&hi, k));
        for s in sums[d as usize - 1].sorted() {
            for p in &pts {
                buf.iter_mut()
                    .zip(&s)
                    .zip(*p)
                    .for_each(|((b, x), y)| *b = x + y);
                next.insert(&buf);
            }
        }
        sums.push(next);
        let targets = sums[d as usize].sorted();
        if d == 2 {
            // Any two elements of a degree-2 fiber differ by one move.
            degrees.push(DegreeSummary {
                degree: d,
                fibers: targets.len(),
                disconnected: None,
            });
            continue;
        }
        let lower = &sums[d as usize - 1];
        let lower2 = &sums[d as usize - 2];
        let bad = targets
            .par_iter()
            .position_first(|b| !block_graph_connected(&pts, b, lower, lower2));
        let disconnected = bad.map(|i| LatticePoint::new(targets[i].clone()));
        let stop = disconnected.is_some();
        degrees.push(DegreeSummary {
            degree: d,
            fibers: targets.len(),
            disconnected,
        });
        if stop {
            break;
        }
    }
    degrees
}

fn block_graph_connected(pts: &[&[i64]], b: &[i64], lower: &PointSet, lower2: &PointSet) -> bool {
    let mut scratch = vec![0i64; b.len()];
    let nodes: Vec<usize> = (0..pts.len())
        .filter(|&u| {
            scratch
                .iter_mut()
                .zip(b)
                .zip(pts[u])
                .for_each(|((s, x), y)| *s = x - y);
            lower.contains(&scratch)
        })
        .collect();
    if nodes.len() <= 1 {
        return true;
    }
    let mut unvisited: Vec<usize> = nodes[1..].to_vec();
    let mut queue = vec![nodes[0]];
    while let Some(u) = queue.pop() {
        unvisited.retain(|&v| {
            scratch
                .iter_mut()
                .zip(b)
                .zip(pts[u].iter().zip(pts[v]))
                .for_each(|((s, x), (y, z))| *s = x - y - z);
            if lower2.contains(&scratch) {
                queue.push(v);
                false
            } else {
                true
            }
        });
        if unvisited.is_empty() {
            return true;
        }
    }
    false
}

/// Same report as [`n1_probe`], computed by enumerating every fiber and
/// searching its move graph directly. Exponential; for small inputs only.
pub fn n1_probe_exhaustive(p: &Polytope, ell: i64, degree_cap: u32) -> Result<ProbeReport> {
    check_probe_args(ell, degree_cap)?;
    let config = build_configuration(p, ell)?;
    Ok(ProbeReport::from_degrees(
        ell,
        degree_cap,
        probe_configuration_exhaustive(&config, degree_cap)?,
    ))
}

pub fn probe_configuration_exhaustive(
    config: &PointConfiguration,
    degree_cap: u32,
) -> Result<Vec<DegreeSummary>> {
    let mut degrees = Vec::new();
    for d in 2..=degree_cap {
        let targets = config.degree_sums(d);
        let mut disconnected = None;
        for b in &targets {
            let fiber = enumerate_fiber(config, b)?;
            if !fiber_is_connected(&fiber) {
                disconnected = Some(b.clone());
                break;
            }
        }
        let stop = disconnected.is_some();
        degrees.push(DegreeSummary {
            degree: d,
            fibers: targets.len(),
            disconnected,
        });
        if stop {
            break;
        }
    }
    Ok(degrees)
}
