//! Zero sets of the slice families, from their closed forms.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{axis2_coefficients, count_zeros_winding, newton_refine, sort_and_merge, Method, SliceFunction, Zero, ZeroReport};
use crate::error::{Error, Result};
use crate::kernels::{
    general_folded_kernel, k2_closed_form, mixed_family_folded, simplex_restricted_kernel, slice_kernel_kp,
    slice_kernel_kp_folded, KernelValue,
};

type C64 = Complex64;

/// Radius used for winding counts of the slice families.
pub const FAMILY_RADIUS: f64 = 0.999;

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Value { path: "p".into(), message: format!("exponent must be positive, got {p}") });
    }
    Ok(())
}

/// `τ ∈ (0, 1)` with `(p+2)·arctan τ = πk`, by bisection.
fn arctan_root(p: f64, k: usize) -> f64 {
    let target = PI * k as f64 / (p + 2.0);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid.atan() < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Zeros of `K_p(x, 0)` in the folded variable `x`: `±i·tan(πk/(p+2))` for
/// `1 ≤ k < (p+2)/4`. Empty iff `p ≤ 2`.
pub fn axis1_zero_locus(p: f64) -> Result<ZeroReport> {
    check_p(p)?;
    let integer = p.fract() == 0.0;
    let bracket = SliceFunction::axis1_bracket(p);
    let mut zeros = Vec::new();
    let mut k = 1;
    while 4.0 * (k as f64) < p + 2.0 {
        let tau = if integer {
            (PI * k as f64 / (p + 2.0)).tan()
        } else {
            let seed = C64::new(0.0, arctan_root(p, k));
            newton_refine(&bracket, seed, 1e-12)?.im
        };
        for x in [C64::new(0.0, tau), C64::new(0.0, -tau)] {
            zeros.push(Zero::new(x, slice_kernel_kp_folded(p, x, C64::new(0.0, 0.0))?.value.norm()));
        }
        k += 1;
    }
    Ok(ZeroReport {
        zeros: sort_and_merge(zeros, 1e-8),
        count_by_winding: count_zeros_winding(&bracket, FAMILY_RADIUS)?,
        search_radius: FAMILY_RADIUS,
        method: if integer { Method::ClosedForm } else { Method::Newton },
    })
}

/// Zeros of `K_p(0, y)`: roots of `y²(p²−3p+2) + 4y(p²−1) + (p²+3p+2)` in `|y| < 1`.
pub fn axis2_zero_locus(p: f64) -> Result<ZeroReport> {
    check_p(p)?;
    let (a, b, c) = axis2_coefficients(p);
    let scale = a.abs().max(b.abs()).max(c.abs());
    let roots: Vec<C64> = if a.abs() <= 1e-14 * scale {
        if b.abs() <= 1e-14 * scale {
            Vec::new()
        } else {
            vec![C64::new(-c / b, 0.0)]
        }
    } else {
        // q = −(b + sgn(b)√D)/2 avoids cancellation
        let sqrt_d = C64::new(b * b - 4.0 * a * c, 0.0).sqrt();
        let sign = if b >= 0.0 { 1.0 } else { -1.0 };
        let q = -(C64::new(b, 0.0) + sqrt_d * sign) / 2.0;
        if q.norm() == 0.0 {
            vec![C64::new(0.0, 0.0)]
        } else {
            vec![q / a, C64::new(c, 0.0) / q]
        }
    };
    let mut zeros = Vec::new();
    for y in roots.into_iter().filter(|y| y.norm() < 1.0) {
        zeros.push(Zero::new(y, slice_kernel_kp(p, C64::new(0.0, 0.0), y)?.value.norm()));
    }
    Ok(ZeroReport {
        zeros: sort_and_merge(zeros, 1e-8),
        count_by_winding: count_zeros_winding(&SliceFunction::axis2_quadratic(p), FAMILY_RADIUS)?,
        search_radius: FAMILY_RADIUS,
        method: Method::ClosedForm,
    })
}

/// One-variable slices whose zero sets are known in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SliceFamily {
    /// `K_p(x, 0)` on `{|z₁| + |z₂|^{2/p} < 1}`, folded variable `x`.
    Axis1 { p: f64 },
    /// `K_p(0, y)` on the same domain.
    Axis2 { p: f64 },
    /// `{|z₁| + ⋯ + |z_n| < 1}` restricted to `z₂ = ⋯ = 0`, folded variable.
    Simplex { n: usize },
    /// `{|z₁| + |z₂|² + ⋯ + |z_n|² < 1}` restricted to `z₂ = ⋯ = 0`, folded variable.
    Mixed { n: usize },
    /// `K₂(X, 0)` in the domain pairing `X`.
    K2,
}

/// Domain points `(a, b)` with `a b̄ = X` and `|a| = |b| = √|X|`.
fn split_pairing(big_x: C64) -> (C64, C64) {
    let r = big_x.norm().sqrt();
    if r == 0.0 {
        (C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    } else {
        (big_x / r, C64::new(r, 0.0))
    }
}

fn padded(first: C64, slot: usize, dim: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[slot] = first;
    v
}

impl SliceFamily {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Axis1 { .. } => "axis1",
            Self::Axis2 { .. } => "axis2",
            Self::Simplex { .. } => "simplex",
            Self::Mixed { .. } => "mixed",
            Self::K2 => "k2",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Self::Axis1 { p } | Self::Axis2 { p } => check_p(p),
            Self::Simplex { n } | Self::Mixed { n } if n < 2 => {
                Err(Error::InvalidOrder(format!("{} family needs n >= 2, got {n}", self.name())))
            }
            _ => Ok(()),
        }
    }

    /// Whether the family has interior zeros: `p > 2`, `n ≥ 3`, `n ≥ 4`, never for `K₂`.
    pub fn predicts_zeros(&self) -> bool {
        match *self {
            Self::Axis1 { p } | Self::Axis2 { p } => p > 2.0,
            Self::Simplex { n } => n >= 3,
            Self::Mixed { n } => n >= 4,
            Self::K2 => false,
        }
    }

    /// A function with the same zeros as the slice in the unit disc.
    pub fn search_function(&self) -> Result<SliceFunction> {
        self.validate()?;
        Ok(match *self {
            Self::Axis1 { p } => SliceFunction::axis1_bracket(p),
            Self::Axis2 { p } => SliceFunction::axis2_quadratic(p),
            Self::Simplex { n } => SliceFunction::axis1_bracket(2.0 * n as f64 - 2.0),
            Self::Mixed { n } => SliceFunction::mixed_bracket(n),
            Self::K2 => SliceFunction::k2_axis(),
        })
    }

    /// The kernel on the slice through its closed form.
    pub fn kernel_value(&self, t: C64) -> Result<KernelValue> {
        self.validate()?;
        let zero = C64::new(0.0, 0.0);
        match *self {
            Self::Axis1 { p } => slice_kernel_kp_folded(p, t, zero),
            Self::Axis2 { p } => slice_kernel_kp(p, zero, t),
            Self::Simplex { n } => simplex_restricted_kernel(n, t),
            Self::Mixed { n } => mixed_family_folded(n, t, zero),
            Self::K2 => k2_closed_form(t, zero),
        }
    }

    /// The kernel on the slice through the general folding formula at
    /// explicit domain points, independent of [`Self::kernel_value`].
    pub fn independent_value(&self, t: C64) -> Result<C64> {
        self.validate()?;
        let v = match *self {
            Self::Axis1 { p } => {
                let (a, b) = split_pairing(t * t);
                general_folded_kernel(&[2], p, &padded(a, 0, 2), &padded(b, 0, 2))?
            }
            Self::Axis2 { p } => {
                let (a, b) = split_pairing(t);
                general_folded_kernel(&[2], p, &padded(a, 1, 2), &padded(b, 1, 2))?
            }
            Self::Simplex { n } => {
                let (a, b) = split_pairing(t * t);
                general_folded_kernel(&vec![2; n - 1], 2.0, &padded(a, 0, n), &padded(b, 0, n))?
            }
            Self::Mixed { n } => {
                let (a, b) = split_pairing(t * t);
                let mut ps = vec![1; n - 1];
                ps[0] = 2;
                general_folded_kernel(&ps, 1.0, &padded(a, 0, n), &padded(b, 0, n))?
            }
            Self::K2 => slice_kernel_kp(2.0, t, C64::new(0.0, 0.0))?,
        };
        Ok(v.value)
    }
}

/// Closed-form zero set of a slice family with winding-number count.
pub fn family_zero_report(family: SliceFamily) -> Result<ZeroReport> {
    family.validate()?;
    let f = family.search_function()?;
    let (locations, method) = match family {
        SliceFamily::Axis1 { p } => return axis1_zero_locus(p),
        SliceFamily::Axis2 { p } => return axis2_zero_locus(p),
        SliceFamily::Simplex { n } => (axis1_zero_locus(2.0 * n as f64 - 2.0)?.locations(), Method::ClosedForm),
        SliceFamily::Mixed { n } => {
            let mut locs = Vec::new();
            let mut k = 1;
            while 4 * k < n + 1 {
                let tau = (PI * k as f64 / (n as f64 + 1.0)).tan();
                locs.extend([C64::new(0.0, tau), C64::new(0.0, -tau)]);
                k += 1;
            }
            (locs, Method::ClosedForm)
        }
        SliceFamily::K2 => (Vec::new(), Method::Winding),
    };
    let mut zeros = Vec::with_capacity(locations.len());
    for x in locations {
        zeros.push(Zero::new(x, family.kernel_value(x)?.value.norm()));
    }
    Ok(ZeroReport {
        zeros: sort_and_merge(zeros, 1e-8),
        count_by_winding: count_zeros_winding(&f, FAMILY_RADIUS)?,
        search_radius: FAMILY_RADIUS,
        method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::CERT_TOL;

    fn ims(report: &ZeroReport) -> Vec<f64> {
        report.zeros.iter().map(|z| z.im).collect()
    }

    #[test]
    fn axis1_examples() {
        for p in [1.0, 2.0, 0.5, 1.99] {
            let r = axis1_zero_locus(p).unwrap();
            assert!(r.zeros.is_empty(), "p={p}");
            assert_eq!(r.count_by_winding, 0);
        }
        let r = axis1_zero_locus(4.0).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert_eq!(ims(&r).len(), 2);
        assert!(ims(&r).iter().any(|&v| (v - s).abs() < 1e-15));
        assert!(ims(&r).iter().any(|&v| (v + s).abs() < 1e-15));
        assert_eq!(r.count_by_winding, 2);
        let r = axis1_zero_locus(10.0).unwrap();
        let mut got: Vec<f64> = ims(&r).iter().map(|v| v.abs()).collect();
        got.sort_by(f64::total_cmp);
        let want = [0.267_949_192_431_122_7, 0.267_949_192_431_122_7, s, s];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-14);
        }
        assert_eq!(r.count_by_winding, 4);
        assert!(r.max_residual() < CERT_TOL);
    }

    #[test]
    fn axis1_non_integer_matches_tangent_formula() {
        for p in [2.5, 3.7, 7.3] {
            let r = axis1_zero_locus(p).unwrap();
            assert_eq!(r.method, Method::Newton);
            let kmax = ((p + 2.0) / 4.0).ceil() as usize - 1;
            assert_eq!(r.zeros.len(), 2 * kmax);
            assert_eq!(r.count_by_winding, 2 * kmax);
            for z in &r.zeros {
                assert!(z.re == 0.0);
                let k = (z.im.abs().atan() * (p + 2.0) / PI).round();
                assert!((z.im.abs() - (PI * k / (p + 2.0)).tan()).abs() < 1e-12);
                assert!(z.residual < CERT_TOL);
            }
        }
    }

    #[test]
    fn axis2_examples() {
        let r = axis2_zero_locus(4.0).unwrap();
        assert_eq!(r.zeros.len(), 1);
        assert!((r.zeros[0].re - (-5.0 + 2.0 * 5f64.sqrt())).abs() < 1e-15);
        assert_eq!(r.count_by_winding, 1);
        let r = axis2_zero_locus(3.0).unwrap();
        assert!((r.zeros[0].re - (-8.0 + 3.0 * 6f64.sqrt())).abs() < 1e-14);
        assert!(axis2_zero_locus(2.0).unwrap().zeros.is_empty());
        assert!(axis2_zero_locus(1.0).unwrap().zeros.is_empty());
        assert!(axis2_zero_locus(0.5).unwrap().zeros.is_empty());
        assert_eq!(axis2_zero_locus(2.0).unwrap().count_by_winding, 0);
        for p in [2.1, 3.0, 5.5, 12.0] {
            let r = axis2_zero_locus(p).unwrap();
            assert_eq!(r.zeros.len(), 1, "p={p}");
            assert!(r.zeros[0].re < 0.0 && r.zeros[0].im == 0.0);
            assert!(r.max_residual() < CERT_TOL);
        }
    }

    #[test]
    fn families_match_predictions() {
        let cases = [
            (SliceFamily::Simplex { n: 2 }, 0),
            (SliceFamily::Simplex { n: 3 }, 2),
            (SliceFamily::Simplex { n: 4 }, 2),
            (SliceFamily::Simplex { n: 5 }, 4),
            (SliceFamily::Mixed { n: 2 }, 0),
            (SliceFamily::Mixed { n: 3 }, 0),
            (SliceFamily::Mixed { n: 4 }, 2),
            (SliceFamily::Mixed { n: 5 }, 2),
            (SliceFamily::K2, 0),
        ];
        for (family, count) in cases {
            let r = family_zero_report(family).unwrap();
            assert_eq!(r.zeros.len(), count, "{family:?}");
            assert_eq!(r.count_by_winding, count, "{family:?}");
            assert_eq!(family.predicts_zeros(), count > 0);
            for z in &r.zeros {
                assert!(z.residual < CERT_TOL, "{family:?}");
                assert!(family.independent_value(z.location()).unwrap().norm() < CERT_TOL, "{family:?}");
            }
        }
    }

    #[test]
    fn independent_path_agrees_off_zeros() {
        let t = C64::new(0.31, -0.22);
        for family in [
            SliceFamily::Axis1 { p: 3.0 },
            SliceFamily::Axis1 { p: 2.6 },
            SliceFamily::Axis2 { p: 3.0 },
            SliceFamily::Simplex { n: 4 },
            SliceFamily::Mixed { n: 4 },
            SliceFamily::K2,
        ] {
            let a = family.kernel_value(t).unwrap().value;
            let b = family.independent_value(t).unwrap();
            assert!((a - b).norm() < 1e-11 * a.norm(), "{family:?}: {a} vs {b}");
        }
    }

    #[test]
    fn mixed_n4_zero_location() {
        let r = family_zero_report(SliceFamily::Mixed { n: 4 }).unwrap();
        let t = (PI / 5.0).tan();
        assert!(r.zeros.iter().all(|z| (z.im.abs() - t).abs() < 1e-15));
        assert!((t - 0.726_542_528_005_361).abs() < 1e-14);
    }

    #[test]
    fn invalid_inputs() {
        assert!(axis1_zero_locus(0.0).is_err());
        assert!(axis2_zero_locus(-1.0).is_err());
        assert!(family_zero_report(SliceFamily::Mixed { n: 1 }).is_err());
    }
}
