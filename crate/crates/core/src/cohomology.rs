//! Cohomology dimensions of `O_X(kD)` for an ample divisor `D` on a
//! projective toric variety, computed purely from the polytope `P = P_D`.
//!
//! For `k >= 0` the bundle is globally generated, so only `h^0` survives and
//! it counts the lattice points of `kP`. For `k < 0` the only nonzero group
//! sits in degree `n` and counts the interior lattice points of `|k| P`.
//! The variety itself is never constructed.

use serde::{Deserialize, Serialize};

use crate::counting::dilate_count;
use crate::error::{Error, Result};
use crate::geometry::{Containment, Polytope};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyRow {
    pub k: i64,
    /// `h^0 ..= h^n`.
    pub h: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    #[serde(rename = "polytope")]
    pub polytope_id: String,
    pub rows: Vec<CohomologyRow>,
}

/// `h^i(X, O_X(kD))` for `i = 0..=n`.
pub fn cohomology_row(p: &Polytope, k: i64) -> Result<CohomologyRow> {
    let n = p.dim();
    let mut h = vec![0u64; n + 1];
    if k >= 0 {
        h[0] = dilate_count(p, k, Containment::Closed)?;
    } else {
        h[n] = dilate_count(p, -k, Containment::RelativeInterior)?;
    }
    Ok(CohomologyRow { k, h })
}

pub fn h_table(p: &Polytope, k_min: i64, k_max: i64) -> Result<CohomologyTable> {
    if k_min > k_max {
        return Err(Error::invalid(format!(
            "empty twist range {k_min}..={k_max}"
        )));
    }
    let rows = (k_min..=k_max)
        .map(|k| cohomology_row(p, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(CohomologyTable {
        polytope_id: p.id(),
        rows,
    })
}

/// `m`-autoregularity: `h^i(A^{m+1-i}) = 0` for `1 <= i <= n`.
pub fn is_autoregular(p: &Polytope, m: i64) -> Result<bool> {
    for i in 1..=p.dim() {
        let row = cohomology_row(p, m + 1 - i as i64)?;
        if row.h[i] != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest `m` for which `P`'s line bundle is `m`-autoregular, found by
/// walking down from `n - 1` (where it always holds) to the first failure.
pub fn autoregularity_from_definition(p: &Polytope) -> Result<i64> {
    let n = p.dim() as i64;
    let mut m = n - 1;
    if !is_autoregular(p, m)? {
        return Err(Error::Internal(format!(
            "ample line bundle is not ({})-autoregular",
            n - 1
        )));
    }
    // (n - 1 - m)P acquires an interior point by n + 1, so m >= -2 always fails.
    while m > -2 {
        if !is_autoregular(p, m - 1)? {
            return Ok(m);
        }
        m -= 1;
    }
    Err(Error::Internal(format!(
        "autoregularity search passed m = {m} without failing"
    )))
}

/// Dilation factor from which `O_X(ℓD)` has property `N_p`:
/// `max(m + p, 1)` for `p >= 1` and `max(m + 1, 1)` for `p = 0`.
pub fn np_bound_from_regularity(p: &Polytope, np: i64) -> Result<i64> {
    if np < 0 {
        return Err(Error::invalid(format!(
            "property N_p needs p >= 0, got {np}"
        )));
    }
    let m = autoregularity_from_definition(p)?;
    Ok((m + np.max(1)).max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{reeve_simplex, standard_simplex, unit_cube};

    #[test]
    fn square_table() {
        let t = h_table(&unit_cube(2), -2, 1).unwrap();
        let rows: Vec<(i64, Vec<u64>)> = t.rows.iter().map(|r| (r.k, r.h.clone())).collect();
        assert_eq!(
            rows,
            vec![
                (-2, vec![0, 0, 1]),
                (-1, vec![0, 0, 0]),
                (0, vec![1, 0, 0]),
                (1, vec![4, 0, 0]),
            ]
        );
        let json = serde_json::to_value(&t).unwrap();
        assert_eq!(json["polytope"], unit_cube(2).id());
        assert_eq!(
            json["rows"][0],
            serde_json::json!({"k": -2, "h": [0, 0, 1]})
        );
    }

    #[test]
    fn reeve_negative_twists() {
        let t2 = reeve_simplex(2);
        assert_eq!(cohomology_row(&t2, -1).unwrap().h, vec![0, 0, 0, 0]);
        assert_eq!(cohomology_row(&t2, -2).unwrap().h, vec![0, 0, 0, 1]);
        assert!(h_table(&t2, 1, 0).is_err());
    }

    #[test]
    fn autoregularity_examples() {
        assert_eq!(autoregularity_from_definition(&unit_cube(2)).unwrap(), 0);
        assert_eq!(
            autoregularity_from_definition(&standard_simplex(3)).unwrap(),
            -1
        );
        assert_eq!(
            autoregularity_from_definition(&reeve_simplex(2)).unwrap(),
            1
        );
        assert!(!is_autoregular(&unit_cube(2), -1).unwrap());
        assert!(is_autoregular(&unit_cube(2), 5).unwrap());
    }

    #[test]
    fn np_bound_examples() {
        assert_eq!(np_bound_from_regularity(&reeve_simplex(2), 1).unwrap(), 2);
        assert_eq!(
            np_bound_from_regularity(&standard_simplex(3), 2).unwrap(),
            1
        );
        assert_eq!(np_bound_from_regularity(&unit_cube(2), 0).unwrap(), 1);
        assert!(np_bound_from_regularity(&unit_cube(2), -1).is_err());
    }
}
