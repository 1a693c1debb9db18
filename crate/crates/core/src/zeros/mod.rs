//! Locating, counting and certifying zeros of one-variable kernel slices.

mod locus;
mod scan;
mod sweep;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::Jet1;
use crate::kernels::EPS_SWITCH;

pub use locus::{FAMILY_RADIUS, axis1_zero_locus, axis2_zero_locus, family_zero_report, SliceFamily};
pub use scan::{
    classify_slice, grid_zero_scan, k2_grid_scan, k2_slice_x, k2_slice_y, k2_interior_positivity, PositivityCertificate, ScanOutcome,
    Verdict,
};
pub use sweep::{axis_slice_function, sweep_exponents, AxisVerdict, SweepRow};

type C64 = Complex64;

/// Tolerance for zeros certified through closed-form paths.
pub const CERT_TOL: f64 = 1e-9;
/// Tolerance for zeros certified through the series oracle.
pub const CERT_TOL_SERIES: f64 = 1e-4;

const NEWTON_STEPS: usize = 50;
const WINDING_START: usize = 64;
const WINDING_MAX: usize = 1 << 21;
const WINDING_ATTEMPTS: usize = 5;
/// Below this `|x|` the coordinate-axis slice is summed as a power series.
const AXIS_SERIES_SWITCH: f64 = 0.1;
/// Degree in `x` at which that series is truncated; `0.1^60` is far below rounding.
const AXIS_SERIES_DEGREE: usize = 60;

type JetFn = dyn Fn(&Jet1) -> Result<Jet1> + Send + Sync;

/// A holomorphic function on the unit disc that can be evaluated on jets.
#[derive(Clone)]
pub struct SliceFunction {
    eval: Arc<JetFn>,
    description: String,
}

impl fmt::Debug for SliceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SliceFunction").field("description", &self.description).finish()
    }
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Jet of `g(t)/t` for `g` vanishing at 0. Near the origin the quotient is
/// taken on the Taylor series of `g` at 0 and re-expanded at `t`.
fn over_t(g: impl Fn(&Jet1) -> Result<Jet1>, t: &Jet1) -> Result<Jet1> {
    let c = t.center();
    if c.norm() >= EPS_SWITCH {
        return Ok(g(t)?.div(t)?);
    }
    let terms = t.order() + 24;
    let at_zero = g(&Jet1::variable(C64::new(0.0, 0.0), terms))?;
    let mut acc = Jet1::constant(c, C64::new(0.0, 0.0), t.order());
    for k in (0..terms).rev() {
        acc = acc.mul(t)?.add_scalar(at_zero.coeff(k + 1));
    }
    Ok(acc)
}

impl SliceFunction {
    pub fn new(
        description: impl Into<String>,
        f: impl Fn(&Jet1) -> Result<Jet1> + Send + Sync + 'static,
    ) -> Self {
        Self { eval: Arc::new(f), description: description.into() }
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn eval_jet(&self, t: &Jet1) -> Result<Jet1> {
        (self.eval)(t)
    }

    pub fn eval(&self, t: C64) -> Result<C64> {
        Ok(self.eval_jet(&Jet1::variable(t, 0))?.value())
    }

    /// Value and first derivative.
    pub fn eval_d1(&self, t: C64) -> Result<(C64, C64)> {
        let j = self.eval_jet(&Jet1::variable(t, 1))?;
        Ok((j.coeff(0), j.coeff(1)))
    }

    /// `((1+x)^{p+2} − (1−x)^{p+2})/x`; its zeros in the disc are the zeros
    /// of the slice kernel `K_p(x, 0)` in the folded variable.
    pub fn axis1_bracket(p: f64) -> Self {
        let e = p + 2.0;
        Self::new(format!("((1+x)^{e} - (1-x)^{e})/x"), move |t| {
            over_t(
                |t: &Jet1| Ok(t.add_scalar(one()).rpow(e)?.sub(&(-t).add_scalar(one()).rpow(e)?)?),
                t,
            )
        })
    }

    /// `((1+t)^{n+1} − (1−t)^{n+1})/t`, the mixed-family slice up to a zero-free factor.
    pub fn mixed_bracket(n: usize) -> Self {
        let e = n as u32 + 1;
        Self::new(format!("((1+t)^{e} - (1-t)^{e})/t"), move |t| {
            over_t(|t: &Jet1| Ok(t.add_scalar(one()).powi(e).sub(&(-t).add_scalar(one()).powi(e))?), t)
        })
    }

    /// `y²(p²−3p+2) + 4y(p²−1) + (p²+3p+2)`, the slice kernel on `x = 0` up to
    /// the zero-free factor `(1−y)^{−4}/(2π²)`.
    pub fn axis2_quadratic(p: f64) -> Self {
        let (a, b, c) = axis2_coefficients(p);
        Self::new(format!("{a}y^2 + {b}y + {c}"), move |y| {
            Ok(y.mul(y)?.scale(C64::new(a, 0.0)).add(&y.scale(C64::new(b, 0.0)))?.add_scalar(C64::new(c, 0.0)))
        })
    }

    /// `K₂` restricted to one coordinate axis, in domain pairings.
    pub fn k2_axis() -> Self {
        Self::new("K2(X, 0)", |x| {
            let num = k2_axis_numerator_jet(x)?;
            let den = (-x).add_scalar(one()).powi(6);
            Ok(num.div(&den)?.scale(C64::new(2.0 / (PI * PI), 0.0)))
        })
    }

    /// Kernel of a diagonal domain restricted to a coordinate axis whose
    /// exponent is the integer `fold`, the other exponents summing to `rest`.
    /// In the folded variable `x` this is, up to a positive constant,
    /// `x^{1−q} Σ_j ω̄^j (1 − x ω̄^j)^{−(rest+2)}` with `q = fold`, `ω = e^{2πi/q}`.
    pub fn coordinate_axis(fold: u32, rest: f64) -> Result<Self> {
        if fold == 0 {
            return Err(Error::NonIntegerFold(0.0));
        }
        if !(rest.is_finite() && rest > 0.0) {
            return Err(Error::Value { path: "rest".into(), message: format!("need a positive exponent sum, got {rest}") });
        }
        let q = fold as usize;
        let m = rest + 2.0;
        // coefficients of the same function as a series in x^q
        let terms = AXIS_SERIES_DEGREE.div_ceil(q) + 1;
        let mut binom = Vec::with_capacity(terms * q);
        let mut a = 1.0;
        for k in 0..terms * q {
            if k > 0 {
                a *= (m + k as f64 - 1.0) / k as f64;
            }
            binom.push(a);
        }
        let series: Vec<f64> = (0..terms).map(|i| q as f64 * binom[(i + 1) * q - 1]).collect();
        let roots: Vec<C64> = (0..q).map(|j| C64::from_polar(1.0, -2.0 * PI * j as f64 / q as f64)).collect();
        Ok(Self::new(format!("x^{} Σ_j ω̄^j (1 - x ω̄^j)^-{m}", 1 - fold as i64), move |x| {
            if x.center().norm() < AXIS_SERIES_SWITCH {
                let y = x.powi(fold);
                let mut acc = Jet1::constant(x.center(), C64::new(0.0, 0.0), x.order());
                for &c in series.iter().rev() {
                    acc = acc.mul(&y)?.add_scalar(C64::new(c, 0.0));
                }
                return Ok(acc);
            }
            let mut sum = Jet1::constant(x.center(), C64::new(0.0, 0.0), x.order());
            for &w in &roots {
                sum = sum.add(&(-&x.scale(w)).add_scalar(one()).rpow(-m)?.scale(w))?;
            }
            Ok(sum.div(&x.powi(fold - 1))?)
        }))
    }

    /// Numerator of `K₂` on a coordinate axis: `3(1−X)(1−X²)`.
    pub fn k2_axis_numerator() -> Self {
        Self::new("3(1-X)(1-X^2)", k2_axis_numerator_jet)
    }
}

fn k2_axis_numerator_jet(x: &Jet1) -> Result<Jet1> {
    let a = (-x).add_scalar(one());
    let b = (-&x.mul(x)?).add_scalar(one());
    Ok(a.mul(&b)?.scale(C64::new(3.0, 0.0)))
}

pub(crate) fn axis2_coefficients(p: f64) -> (f64, f64, f64) {
    (p * p - 3.0 * p + 2.0, 4.0 * (p * p - 1.0), p * p + 3.0 * p + 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Newton,
    Winding,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub re: f64,
    pub im: f64,
    pub residual: f64,
}

impl Zero {
    pub fn new(location: C64, residual: f64) -> Self {
        Self { re: location.re, im: location.im, residual }
    }

    pub fn location(&self) -> C64 {
        C64::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroReport {
    pub zeros: Vec<Zero>,
    #[serde(rename = "winding_count")]
    pub count_by_winding: usize,
    #[serde(rename = "radius")]
    pub search_radius: f64,
    pub method: Method,
}

impl ZeroReport {
    pub fn locations(&self) -> Vec<C64> {
        self.zeros.iter().map(Zero::location).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.zeros.iter().map(|z| z.residual).fold(0.0, f64::max)
    }
}

/// Sorts by `(Re, Im)` and merges locations closer than `merge_tol`.
pub(crate) fn sort_and_merge(mut zeros: Vec<Zero>, merge_tol: f64) -> Vec<Zero> {
    zeros.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out: Vec<Zero> = Vec::with_capacity(zeros.len());
    for z in zeros {
        if !out.iter().any(|o| (o.location() - z.location()).norm() < merge_tol) {
            out.push(z);
        }
    }
    out
}

/// Newton iteration with jet derivatives, stopped once the step is at
/// rounding level or `|f| < tol` cannot be improved further.
pub fn newton_refine(f: &SliceFunction, seed: C64, tol: f64) -> Result<C64> {
    if !(seed.norm() < 1.0) {
        return Err(Error::PreconditionViolated(format!("Newton seed {seed} is not in the unit disc")));
    }
    let mut t = seed;
    for _ in 0..NEWTON_STEPS {
        let (v, d) = f.eval_d1(t)?;
        if v.norm() == 0.0 {
            return Ok(t);
        }
        if d.norm() == 0.0 || !d.is_finite() {
            break;
        }
        let step = v / d;
        t -= step;
        if !t.is_finite() || t.norm() >= 1.0 {
            break;
        }
        if step.norm() <= 4.0 * f64::EPSILON * t.norm().max(1e-3) {
            break;
        }
    }
    if t.is_finite() && t.norm() < 1.0 {
        let v = f.eval(t)?;
        if v.norm() < tol {
            return Ok(t);
        }
    }
    Err(Error::NoConvergence(format!("Newton from {seed} did not reach |f| < {tol} in {}", f.description)))
}

/// `(1/N) Σ t_k f'(t_k)/f(t_k)` over the points `t_k = r e^{2πik/N}`
/// with odd `k` when `odd_only` is set.
fn winding_terms(f: &SliceFunction, radius: f64, n: usize, odd_only: bool) -> Result<C64> {
    let step = if odd_only { 2 } else { 1 };
    let mut acc = C64::new(0.0, 0.0);
    let mut k = usize::from(odd_only);
    while k < n {
        let t = C64::from_polar(radius, 2.0 * PI * k as f64 / n as f64);
        let (v, d) = f.eval_d1(t)?;
        if v.norm() == 0.0 {
            return Err(Error::PoleHit(0.0));
        }
        acc += t * d / v;
        k += step;
    }
    Ok(acc)
}

fn winding_at(f: &SliceFunction, radius: f64) -> Result<Option<usize>> {
    let mut n = WINDING_START;
    let mut sum = winding_terms(f, radius, n, false)?;
    let mut previous: Option<i64> = None;
    while n <= WINDING_MAX {
        let w = sum / n as f64;
        let rounded = w.re.round();
        if (w.re - rounded).abs() < 1e-3 && w.im.abs() < 1e-3 {
            if previous == Some(rounded as i64) {
                return Ok((rounded >= 0.0).then_some(rounded as usize));
            }
            previous = Some(rounded as i64);
        } else {
            previous = None;
        }
        sum += winding_terms(f, radius, 2 * n, true)?;
        n *= 2;
    }
    Ok(None)
}

/// Number of zeros of `f` in `|t| < radius`, counted with multiplicity,
/// by the argument principle. A contour that passes too close to a zero
/// shows up as a trapezoid sum that does not settle on an integer; the
/// radius is then shrunk slightly and the count retried.
pub fn count_zeros_winding(f: &SliceFunction, radius: f64) -> Result<usize> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Value { path: "radius".into(), message: format!("need 0 < radius < 1, got {radius}") });
    }
    for attempt in 0..=WINDING_ATTEMPTS {
        let r = radius * (1.0 - 1e-4 * attempt as f64);
        if let Ok(Some(count)) = winding_at(f, r) {
            return Ok(count);
        }
    }
    Err(Error::ContourThroughZero { attempts: WINDING_ATTEMPTS })
}
