//! Ehrhart polynomials, interior counts of dilates, and the codegree.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{Containment, Polytope};

/// `L_P(t) = sum_i coeffs[i] t^i`, with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartPolynomial {
    coeffs: Vec<BigRational>,
    dim: usize,
}

impl EhrhartPolynomial {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, t: i64) -> BigRational {
        let t = BigRational::from_integer(BigInt::from(t));
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &t + c)
    }

    /// Coefficients rendered as `"p/q"` (or `"p"`) strings, constant term first.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl Serialize for EhrhartPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeff_strings().serialize(s)
    }
}

/// Number of lattice points of `kP` (with `0P` the origin).
pub fn dilate_count(p: &Polytope, k: i64, mode: Containment) -> Result<u64> {
    match k {
        0 => Ok(u64::from(mode == Containment::Closed)),
        _ => Ok(p.dilate(k)?.count_lattice_points(mode)),
    }
}

/// Interpolate `L_P` through `(k, #kP ∩ Z^n)` for `k = 0..=n`.
pub fn ehrhart(p: &Polytope) -> Result<EhrhartPolynomial> {
    let n = p.dim();
    let values = (0..=n as i64)
        .map(|k| dilate_count(p, k, Containment::Closed))
        .collect::<Result<Vec<_>>>()?;
    Ok(EhrhartPolynomial {
        coeffs: interpolate(&values),
        dim: n,
    })
}

/// Lagrange interpolation through `(k, values[k])`, `k = 0..values.len()`.
fn interpolate(values: &[u64]) -> Vec<BigRational> {
    let nodes = values.len();
    let mut coeffs = vec![BigRational::zero(); nodes];
    for (j, &y) in values.iter().enumerate() {
        // basis_j(t) = prod_{m != j} (t - m) / (j - m)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigInt::one();
        for m in (0..nodes).filter(|&m| m != j) {
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            let shift = BigRational::from_integer(BigInt::from(m));
            for (i, c) in basis.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * &shift;
            }
            basis = next;
            denom *= BigInt::from(j as i64 - m as i64);
        }
        let scale = BigRational::new(BigInt::from(y), denom);
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c += b * &scale;
        }
    }
    coeffs
}

/// Interior counts of dilates and the resulting `d(P)` and codegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DilationProfile {
    pub d: u32,
    pub codegree: u32,
    /// `(k, #relint(kP) ∩ Z^n)` for `k = 1..=n+1`.
    pub interior_counts: Vec<(u32, u64)>,
}

/// `d(P)`: the largest `d >= 0` such that `dP` has no interior lattice point.
///
/// `d(P) = 0` when `P` itself has an interior lattice point.
pub fn d_of_p(p: &Polytope) -> Result<DilationProfile> {
    let n = p.dim() as u32;
    let interior_counts = (1..=n + 1)
        .map(|k| {
            Ok((
                k,
                dilate_count(p, i64::from(k), Containment::RelativeInterior)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let first = interior_counts
        .iter()
        .find(|&&(_, c)| c > 0)
        .map(|&(k, _)| k)
        .ok_or_else(|| {
            Error::Internal(format!(
                "no interior lattice point in kP for k <= {}; Ehrhart root bound violated",
                n + 1
            ))
        })?;
    Ok(DilationProfile {
        d: first - 1,
        codegree: first,
        interior_counts,
    })
}

/// Ehrhart reciprocity: `L_P(-t) = (-1)^n #relint(tP)` for `t = 1..=t_max`.
pub fn reciprocity_check(p: &Polytope, t_max: i64) -> Result<bool> {
    if t_max < 1 {
        return Err(Error::invalid(format!(
            "t_max must be at least 1, got {t_max}"
        )));
    }
    let poly = ehrhart(p)?;
    let sign = if p.dim().is_multiple_of(2) { 1 } else { -1 };
    for t in 1..=t_max {
        let interior = dilate_count(p, t, Containment::RelativeInterior)?;
        let expected = BigRational::from_integer(BigInt::from(interior) * sign);
        if poly.eval(-t) != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Compare `L_P(k)` with a direct count of `kP`, for `k` beyond the nodes.
pub fn extrapolation_check(p: &Polytope, poly: &EhrhartPolynomial, ks: &[i64]) -> Result<bool> {
    for &k in ks {
        let count = dilate_count(p, k, Containment::Closed)?;
        if poly.eval(k) != BigRational::from_integer(BigInt::from(count)) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn leading_positive(poly: &EhrhartPolynomial) -> bool {
    poly.coeffs.last().is_some_and(|c| c.is_positive())
}
