//! Two-variable slice kernels and the families whose zeroes are studied.
//!
//! `x` denotes a folded pairing `z₁w̄₁` where the domain coordinate is `z₁²`;
//! `X = x²` is the corresponding pairing of domain coordinates. Functions that
//! take domain-coordinate pairings say so.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::deflation::simplex_accumulated_constant;
use super::{ensure_inside, pairing, pi_pow, Formula, KernelEvaluator, KernelValue, EPS_SWITCH};
use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::jets::Jet1;

type C64 = Complex64;

// order of the odd expansion used below the switch threshold
const ODD_ORDER: usize = 5;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// `g(x)/x` for an odd function `g` given as a jet at 0.
fn odd_over_x(g: &Jet1, x: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    let mut power = one();
    for k in (1..=g.order()).step_by(2) {
        acc += g.coeff(k) * power;
        power *= x * x;
    }
    acc
}

/// `∂²/∂x² [((1−x)^p − y)^{−1} − ((1+x)^p − y)^{−1}]` as a jet at `center`.
fn slice_bracket(p: f64, y: C64, center: C64, order: usize) -> Result<Jet1> {
    let t = Jet1::variable(center, order + 2);
    let minus = (-&t).add_scalar(one()).rpow(p)?.add_scalar(-y).recip()?;
    let plus = t.add_scalar(one()).rpow(p)?.add_scalar(-y).recip()?;
    Ok(minus.sub(&plus)?.differentiate(2)?)
}

fn slice_value(p: f64, x: C64, y: C64) -> Result<KernelValue> {
    let scale = 1.0 / (4.0 * p * PI * PI);
    let (value, limit) = if x.norm() >= EPS_SWITCH {
        let b = slice_bracket(p, y, x, 0)?;
        (b.value() * scale / x, false)
    } else {
        let b = slice_bracket(p, y, C64::new(0.0, 0.0), ODD_ORDER)?;
        (odd_over_x(&b, x) * scale, true)
    };
    Ok(KernelValue::new(value, Formula::SliceKp).with_limit(limit))
}

/// `K_p(0, y)` in closed form,
/// `[y²(p²−3p+2) + 4y(p²−1) + (p²+3p+2)] / (2π²(1−y)⁴)`; this is also the
/// analytic continuation to every `y ≠ 1`.
pub fn slice_axis_value(p: f64, y: C64) -> C64 {
    (y * y * (p * p - 3.0 * p + 2.0) + y * 4.0 * (p * p - 1.0) + (p * p + 3.0 * p + 2.0))
        / ((one() - y).powi(4) * 2.0 * PI * PI)
}

/// The slice kernel formula without the domain check, for analytic continuation.
pub(crate) fn slice_kernel_continued(p: f64, x: C64, y: C64) -> Result<KernelValue> {
    slice_value(p, x, y)
}

/// Kernel of `{|z₁| + |z₂|^{2/p} < 1}` at domain-coordinate pairings
/// `X = z₁w̄₁`, `y = z₂w̄₂`.
pub fn slice_kernel_kp(p: f64, big_x: C64, y: C64) -> Result<KernelValue> {
    let reach = big_x.norm().sqrt() + y.norm().powf(1.0 / p);
    if !(reach < 1.0) {
        return Err(Error::OutsideDomain(format!("√|X| + |y|^(1/p) = {reach}")));
    }
    slice_value(p, big_x.sqrt(), y)
}

/// The same kernel in the folded variable `x` (with `X = x²`).
pub fn slice_kernel_kp_folded(p: f64, x: C64, y: C64) -> Result<KernelValue> {
    let reach = x.norm() + y.norm().powf(1.0 / p);
    if !(reach < 1.0) {
        return Err(Error::OutsideDomain(format!("|x| + |y|^(1/p) = {reach}")));
    }
    slice_value(p, x, y)
}

/// Closed form of the kernel of `{|z₁| + |z₂| < 1}` at domain-coordinate
/// pairings; the closed boundary is allowed.
pub fn k2_closed_form(x: C64, y: C64) -> Result<KernelValue> {
    let reach = x.norm().sqrt() + y.norm().sqrt();
    if reach > 1.0 + 1e-12 {
        return Err(Error::OutsideDomain(format!("√|x| + √|y| = {reach}")));
    }
    let s = one() - x - y;
    let den = s * s - 4.0 * x * y;
    if den.norm() < 1e-14 {
        return Err(Error::PoleHit(den.norm()));
    }
    let d = x - y;
    let num = 3.0 * s * (one() - d * d) + 8.0 * x * y;
    let value = num * 2.0 / (PI * PI * den * den * den);
    Ok(KernelValue::new(value, Formula::K2Closed))
}

/// `K₂` numerator `3(1−x−y)(1−(x−y)²) + 8xy`.
pub fn k2_numerator(x: C64, y: C64) -> C64 {
    let d = x - y;
    3.0 * (one() - x - y) * (one() - d * d) + 8.0 * x * y
}

/// Restriction of the kernel of `{|z₁| + ⋯ + |z_n| < 1}` to `z₂ = ⋯ = z_n = 0`,
/// in the folded variable `x` of the first coordinate.
pub fn simplex_restricted_kernel(n: usize, x: C64) -> Result<KernelValue> {
    if n < 2 {
        return Err(Error::InvalidOrder(format!("simplex family needs n >= 2, got {n}")));
    }
    if !(x.norm() < 1.0) {
        return Err(Error::OutsideDomain(format!("|x| = {} is not below 1", x.norm())));
    }
    let c = simplex_accumulated_constant(n);
    let v = slice_kernel_kp_folded(2.0 * n as f64 - 2.0, x, C64::new(0.0, 0.0))?;
    Ok(KernelValue::new(v.value * c, Formula::SimplexRestricted).with_limit(v.near_singular_limit))
}

/// Kernel of `{|z₁| + |z₂|² + ⋯ + |z_n|² < 1}` in folded form: `x₁ = z₁w̄₁`
/// (domain coordinate `z₁²`) and `r = Σ_{k≥2} z_k w̄_k`.
///
/// Folding the ball kernel of `ℂⁿ` in its first coordinate gives
/// `(n!/πⁿ)/(4x₁) · [(1 − r − x₁)^{−(n+1)} − (1 − r + x₁)^{−(n+1)}]`.
pub fn mixed_family_folded(n: usize, x1: C64, r: C64) -> Result<KernelValue> {
    if n < 2 {
        return Err(Error::InvalidOrder(format!("mixed family needs n >= 2, got {n}")));
    }
    let scale: f64 = (1..=n).map(|k| k as f64).product::<f64>() / (4.0 * pi_pow(n));
    let e = n as u32 + 1;
    let base = one() - r;
    let (value, limit) = if x1.norm() >= EPS_SWITCH {
        let a = (base - x1).powi(-(e as i32));
        let b = (base + x1).powi(-(e as i32));
        ((a - b) * scale / x1, false)
    } else {
        let t = Jet1::variable(C64::new(0.0, 0.0), ODD_ORDER);
        let a = (-&t).add_scalar(base).powi(e).recip()?;
        let b = t.add_scalar(base).powi(e).recip()?;
        (odd_over_x(&a.sub(&b)?, x1) * scale, true)
    };
    Ok(KernelValue::new(value, Formula::MixedFamily).with_limit(limit))
}

/// Kernel of `{|a₁| + |a₂|² + ⋯ + |a_n|² < 1}` at domain coordinates.
pub fn mixed_family_kernel(n: usize, a: &[C64], b: &[C64]) -> Result<KernelValue> {
    MixedFamilyKernel::new(n)?.eval(a, b)
}

/// [`slice_kernel_kp`] as an evaluator on `{|z₁| + |z₂|^{2/p} < 1}`.
#[derive(Debug, Clone)]
pub struct SliceKernel {
    p: f64,
    domain: DomainSpec,
}

impl SliceKernel {
    pub fn new(p: f64) -> Result<Self> {
        Ok(Self { p, domain: DomainSpec::diagonal(&[2.0, p])? })
    }
}

impl KernelEvaluator for SliceKernel {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, z: &[C64], w: &[C64]) -> Result<KernelValue> {
        ensure_inside(&self.domain, z, w)?;
        slice_value(self.p, z[0].sqrt() * w[0].sqrt().conj(), z[1] * w[1].conj())
    }
}

/// [`k2_closed_form`] as an evaluator on `{|z₁| + |z₂| < 1}`.
#[derive(Debug, Clone)]
pub struct K2Kernel {
    domain: DomainSpec,
}

impl K2Kernel {
    pub fn new() -> Self {
        Self { domain: DomainSpec::diagonal(&[2.0, 2.0]).expect("valid exponents") }
    }
}

impl Default for K2Kernel {
    fn default() -> Self {
        Self::new()
    }
}

impl KernelEvaluator for K2Kernel {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, z: &[C64], w: &[C64]) -> Result<KernelValue> {
        ensure_inside(&self.domain, z, w)?;
        k2_closed_form(z[0] * w[0].conj(), z[1] * w[1].conj())
    }
}

#[derive(Debug, Clone)]
pub struct MixedFamilyKernel {
    n: usize,
    domain: DomainSpec,
}

impl MixedFamilyKernel {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidOrder(format!("mixed family needs n >= 2, got {n}")));
        }
        let mut ps = vec![1.0; n];
        ps[0] = 2.0;
        Ok(Self { n, domain: DomainSpec::diagonal(&ps)? })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }
}

impl KernelEvaluator for MixedFamilyKernel {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, z: &[C64], w: &[C64]) -> Result<KernelValue> {
        ensure_inside(&self.domain, z, w)?;
        let x1 = z[0].sqrt() * w[0].sqrt().conj();
        mixed_family_folded(self.n, x1, pairing(&z[1..], &w[1..]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::folded::general_folded_kernel;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn axis_limit_formula() {
        for p in [1.0, 2.0, 3.0, 4.5] {
            for y in [c(0.0, 0.0), c(0.3, 0.0), c(-0.5, 0.2)] {
                let v = slice_kernel_kp(p, c(0.0, 0.0), y).unwrap();
                assert!(v.near_singular_limit);
                assert!(rel(v.value, slice_axis_value(p, y)) < 1e-13, "p={p}, y={y}");
            }
        }
    }

    #[test]
    fn continuation_to_y_minus_one() {
        for p in [2.5, 3.0, 4.0] {
            let v = slice_axis_value(p, c(-1.0, 0.0));
            assert!((v.re + (p * p - 4.0) / (16.0 * PI * PI)).abs() < 1e-14);
        }
    }

    #[test]
    fn k2_examples() {
        let v = k2_closed_form(c(0.0, 0.0), c(0.0, 0.0)).unwrap().value;
        assert!((v.re - 6.0 / (PI * PI)).abs() < 1e-15);
        assert_eq!(k2_closed_form(c(-1.0, 0.0), c(0.0, 0.0)).unwrap().value, c(0.0, 0.0));
        let a = k2_closed_form(c(0.3, 0.0), c(0.1, 0.0)).unwrap().value;
        let b = slice_kernel_kp(2.0, c(0.3, 0.0), c(0.1, 0.0)).unwrap().value;
        assert!(rel(a, b) < 1e-12);
        assert!(matches!(k2_closed_form(c(0.5, 0.0), c(0.5, 0.0)), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn slice_rejects_unreachable_pairings() {
        assert!(matches!(slice_kernel_kp(4.0, c(0.81, 0.0), c(0.1, 0.0)), Err(Error::OutsideDomain(_))));
        assert!(slice_kernel_kp(4.0, c(0.25, 0.0), c(0.01, 0.0)).is_ok());
    }

    #[test]
    fn slice_matches_general_folded() {
        for p in [1.5, 2.0, 4.0] {
            let a = [c(0.3, 0.2), c(0.1, -0.2)];
            let b = [c(-0.2, 0.1), c(0.2, 0.1)];
            let v = SliceKernel::new(p).unwrap().eval(&a, &b).unwrap().value;
            let g = general_folded_kernel(&[2], p, &a, &b).unwrap().value;
            assert!(rel(v, g) < 1e-12);
        }
    }

    #[test]
    fn simplex_examples() {
        let v = simplex_restricted_kernel(3, c(0.0, 0.0)).unwrap().value;
        assert!((v.re - 90.0 / PI.powi(3)).abs() < 1e-13);
        let x = c(0.0, 1.0 / 3f64.sqrt());
        assert!(simplex_restricted_kernel(3, x).unwrap().value.norm() < 1e-14);
        assert!(simplex_restricted_kernel(1, x).is_err());
        assert!(simplex_restricted_kernel(3, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn mixed_family_origin_and_zero() {
        let v = mixed_family_kernel(2, &[c(0.0, 0.0); 2], &[c(0.0, 0.0); 2]).unwrap();
        assert!((v.value.re - 3.0 / (PI * PI)).abs() < 1e-15);
        let t = (PI / 5.0).tan();
        let v = mixed_family_folded(4, c(0.0, t), c(0.0, 0.0)).unwrap().value;
        assert!(v.norm() < 1e-13);
    }

    #[test]
    fn mixed_family_matches_general_folded_off_axis() {
        let a = [c(0.2, 0.1), c(0.3, -0.1), c(0.1, 0.2)];
        let b = [c(-0.1, 0.25), c(0.2, 0.2), c(0.3, 0.0)];
        let v = mixed_family_kernel(3, &a, &b).unwrap().value;
        let g = general_folded_kernel(&[2, 1], 1.0, &a, &b).unwrap().value;
        assert!(rel(v, g) < 1e-12, "{v} vs {g}");
    }

    #[test]
    fn mixed_limit_branch_agrees() {
        let r = c(0.2, 0.1);
        let x = c(0.0, 0.99e-3);
        let a = mixed_family_folded(3, x, r).unwrap();
        assert!(a.near_singular_limit);
        let direct = ((one() - r - x).powi(-4) - (one() - r + x).powi(-4)) * 6.0 / (4.0 * PI.powi(3) * x);
        assert!(rel(a.value, direct) < 1e-9);
        assert!(!mixed_family_folded(3, c(0.0, 1.01e-3), r).unwrap().near_singular_limit);
    }
}
