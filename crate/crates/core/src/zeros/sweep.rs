//! Zero scans over exponent tuples of diagonal domains `Σ_j |z_j|^{2/p_j} < 1`.
//!
//! The kernel restricted to the `j`-th coordinate axis depends only on
//! `p_j` and the sum of the remaining exponents. It is available on jets
//! when `p_j` is an integer (by folding) or when the remaining exponents sum
//! to 2 (the `x = 0` slice of the two-variable slice kernel).

use serde::Serialize;

use super::scan::{classify_slice, Verdict};
use super::{SliceFunction, FAMILY_RADIUS};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisVerdict {
    pub axis: usize,
    pub exponent: f64,
    pub rest: f64,
    /// `None` when no jet formula reaches this slice.
    pub verdict: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub exponents: Vec<f64>,
    pub axes: Vec<AxisVerdict>,
    /// Zeroed if some axis slice has zeros, zero-free if every axis slice was
    /// scanned and has none, unknown otherwise.
    pub verdict: Verdict,
}

/// The jet formula for the axis with exponent `q` among exponents summing to `q + rest`.
pub fn axis_slice_function(q: f64, rest: f64) -> Result<Option<SliceFunction>> {
    if q.fract() == 0.0 && q >= 1.0 {
        return SliceFunction::coordinate_axis(q as u32, rest).map(Some);
    }
    if rest == 2.0 {
        return Ok(Some(SliceFunction::axis2_quadratic(q)));
    }
    Ok(None)
}

/// Classifies every coordinate-axis slice of the diagonal domain with `exponents`.
pub fn sweep_exponents(exponents: &[f64], resolution: usize, tol: f64) -> Result<SweepRow> {
    if exponents.len() < 2 {
        return Err(Error::Value {
            path: "exponents".into(),
            message: format!("need at least two exponents, got {}", exponents.len()),
        });
    }
    if let Some(bad) = exponents.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
        return Err(Error::Value { path: "exponents".into(), message: format!("exponent {bad} is not positive") });
    }
    let total: f64 = exponents.iter().sum();
    let mut axes = Vec::with_capacity(exponents.len());
    for (axis, &q) in exponents.iter().enumerate() {
        let rest = total - q;
        let verdict = match axis_slice_function(q, rest)? {
            Some(f) => Some(classify_slice(&f, FAMILY_RADIUS, resolution, tol)?),
            None => None,
        };
        axes.push(AxisVerdict { axis, exponent: q, rest, verdict });
    }
    let verdict = if axes.iter().any(|a| a.verdict == Some(Verdict::Zeroed)) {
        Verdict::Zeroed
    } else if axes.iter().all(|a| a.verdict == Some(Verdict::ZeroFree)) {
        Verdict::ZeroFree
    } else {
        Verdict::Unknown
    };
    Ok(SweepRow { exponents: exponents.to_vec(), axes, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::{count_zeros_winding, newton_refine, CERT_TOL};
    use num_complex::Complex64;

    #[test]
    fn two_fold_axis_matches_the_bracket() {
        // same zero set as ((1+x)^{p+2} − (1−x)^{p+2})/x
        for p in [1.0, 2.0, 3.5, 4.0, 6.0] {
            let f = SliceFunction::coordinate_axis(2, p).unwrap();
            let g = SliceFunction::axis1_bracket(p);
            assert_eq!(
                count_zeros_winding(&f, FAMILY_RADIUS).unwrap(),
                count_zeros_winding(&g, FAMILY_RADIUS).unwrap(),
                "p = {p}"
            );
        }
        let f = SliceFunction::coordinate_axis(2, 4.0).unwrap();
        let z = newton_refine(&f, Complex64::new(0.05, 0.6), CERT_TOL).unwrap();
        assert!((z - Complex64::new(0.0, 1.0 / 3f64.sqrt())).norm() < 1e-10, "{z}");
    }

    #[test]
    fn series_and_direct_branches_agree() {
        for (q, rest) in [(1, 1.0), (2, 3.0), (3, 2.5), (5, 4.0)] {
            let f = SliceFunction::coordinate_axis(q, rest).unwrap();
            for angle in [0.3, 1.9, 4.0] {
                let below = Complex64::from_polar(0.0999999, angle);
                let above = Complex64::from_polar(0.1000001, angle);
                let (a, b) = (f.eval(below).unwrap(), f.eval(above).unwrap());
                assert!((a - b).norm() < 1e-5 * a.norm(), "q={q}, rest={rest}: {a} vs {b}");
                let (_, da) = f.eval_d1(below).unwrap();
                let (_, db) = f.eval_d1(above).unwrap();
                assert!((da - db).norm() < 1e-4 * (da.norm() + a.norm()), "q={q}, rest={rest}: {da} vs {db}");
            }
        }
    }

    #[test]
    fn omega_p_is_zeroed_iff_p_exceeds_two() {
        for p in [1.0, 2.0, 3.0, 4.0, 2.5] {
            let row = sweep_exponents(&[2.0, p], 32, CERT_TOL).unwrap();
            let expected = if p > 2.0 { Verdict::Zeroed } else { Verdict::ZeroFree };
            assert_eq!(row.verdict, expected, "p = {p}: {row:?}");
        }
    }

    #[test]
    fn unreachable_axes_are_unknown() {
        let row = sweep_exponents(&[0.5, 1.5], 16, CERT_TOL).unwrap();
        assert!(row.axes.iter().all(|a| a.verdict.is_none()));
        assert_eq!(row.verdict, Verdict::Unknown);
    }

    #[test]
    fn rejects_bad_tuples() {
        assert!(sweep_exponents(&[2.0], 16, CERT_TOL).is_err());
        assert!(sweep_exponents(&[2.0, -1.0], 16, CERT_TOL).is_err());
    }
}
