//! Kernels of complete Hartogs domains `{|ζ|² < φ(z)}` written as profiles.
//!
//! Circular symmetry in the fiber variable means the kernel has the form
//! `K(z, ζ, w, η) = L(z, w, ζη̄)`. Folding (`ζ ↦ ζ^p`) and inflation
//! (`ζ ∈ ℂ ↦ Z ∈ ℂ^m`) act on `L` as a function of its last argument, so
//! profiles are evaluated on jets in that argument.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::{pairing, pi_pow, Formula, KernelEvaluator, KernelValue, EPS_SWITCH};
use crate::error::{Error, Result};
use crate::jets::Jet1;

type C64 = Complex64;

// truncation of the folded power series used near the fiber axis
const FOLD_SERIES_EXTRA: usize = 10;

/// The profile `L(z, w, t)` of a complete Hartogs domain kernel.
pub trait CircularProfile: Send + Sync {
    /// Dimension of the base variable `z`.
    fn base_dim(&self) -> usize;

    /// `φ(z)` in `|ζ|² < φ(z)`; non-positive when `z` is outside the base.
    fn fiber_bound(&self, z: &[C64]) -> f64;

    /// `L(z, w, t(s))` as a jet in the variable of `t`.
    fn eval_jet(&self, z: &[C64], w: &[C64], t: &Jet1) -> Result<Jet1>;

    /// Whether evaluation at `t` goes through a removable-singularity branch.
    fn uses_limit(&self, _t: C64) -> bool {
        false
    }
}

/// `π⁻¹(1 − t)⁻²`, the unit disc.
#[derive(Debug, Clone, Copy, Default)]
pub struct DiscProfile;

impl CircularProfile for DiscProfile {
    fn base_dim(&self) -> usize {
        0
    }

    fn fiber_bound(&self, _z: &[C64]) -> f64 {
        1.0
    }

    fn eval_jet(&self, _z: &[C64], _w: &[C64], t: &Jet1) -> Result<Jet1> {
        let one_minus = (-t).add_scalar(C64::new(1.0, 0.0));
        Ok(one_minus.powi(2).recip()?.scale(C64::new(1.0 / PI, 0.0)))
    }
}

/// The unit ball of `ℂ^{n+1}` seen as `{|ζ|² < 1 − ‖z‖²}` over the ball of `ℂⁿ`.
#[derive(Debug, Clone, Copy)]
pub struct BallProfile {
    pub base_dim: usize,
}

impl CircularProfile for BallProfile {
    fn base_dim(&self) -> usize {
        self.base_dim
    }

    fn fiber_bound(&self, z: &[C64]) -> f64 {
        1.0 - z.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    fn eval_jet(&self, z: &[C64], w: &[C64], t: &Jet1) -> Result<Jet1> {
        let n = self.base_dim + 1;
        let base = C64::new(1.0, 0.0) - pairing(z, w);
        let d = (-t).add_scalar(base);
        let scale = crate::jets::factorial(n) / pi_pow(n);
        Ok(d.powi(n as u32 + 1).recip()?.scale(C64::new(scale, 0.0)))
    }
}

/// Bergman's kernel of `{|z|² + |ζ|^{2/p} < 1}` in `ℂ²`:
/// `(1/(pπ²)) ∂²/∂t² [1/((1−t)^p − τ)]` at `t = z w̄`, as a function of `τ = ζη̄`.
#[derive(Debug, Clone, Copy)]
pub struct Hartogs2Profile {
    pub p: f64,
}

impl CircularProfile for Hartogs2Profile {
    fn base_dim(&self) -> usize {
        1
    }

    fn fiber_bound(&self, z: &[C64]) -> f64 {
        let r = 1.0 - z[0].norm_sqr();
        if r <= 0.0 {
            r
        } else {
            r.powf(self.p)
        }
    }

    fn eval_jet(&self, z: &[C64], w: &[C64], tau: &Jet1) -> Result<Jet1> {
        let p = self.p;
        let t0 = z[0] * w[0].conj();
        let one_minus = C64::new(1.0, 0.0) - t0;
        if one_minus.re <= 0.0 {
            return Err(Error::OutsideDomain(format!("1 - zw̄ = {one_minus} is not in the right half-plane")));
        }
        // A(t) = (1-t)^p and its first two derivatives at t0
        let a = one_minus.powf(p);
        let a1 = -p * one_minus.powf(p - 1.0);
        let a2 = p * (p - 1.0) * one_minus.powf(p - 2.0);
        // ∂²/∂t² 1/(A − τ) = −A''/(A − τ)² + 2A'²/(A − τ)³
        let inv = (-tau).add_scalar(a).recip()?;
        let inv2 = inv.mul(&inv)?;
        let inv3 = inv2.mul(&inv)?;
        let d2 = inv2.scale(-a2).add(&inv3.scale(2.0 * a1 * a1))?;
        Ok(d2.scale(C64::new(1.0 / (p * PI * PI), 0.0)))
    }
}

/// Profile of `{|ζ|^{2/p} < φ(z)}` obtained from the profile of `{|ζ|² < φ(z)}`
/// through the proper map `ζ ↦ ζ^p`.
#[derive(Clone)]
pub struct FoldedProfile {
    inner: Arc<dyn CircularProfile>,
    p: u32,
}

/// Folds `profile` by the positive integer `p`.
pub fn fold(profile: Arc<dyn CircularProfile>, p: f64) -> Result<FoldedProfile> {
    if !(p >= 1.0 && p.fract() == 0.0 && p.is_finite()) {
        return Err(Error::NonIntegerFold(p));
    }
    Ok(FoldedProfile { inner: profile, p: p as u32 })
}

impl FoldedProfile {
    pub fn p(&self) -> u32 {
        self.p
    }

    /// `Σ_j ω̄^j L(s ω̄^j) / (p² s^{p−1})` with `s` a p-th root of `t`.
    fn direct(&self, z: &[C64], w: &[C64], t: &Jet1) -> Result<Jet1> {
        let p = self.p as usize;
        let s = t.rpow(1.0 / p as f64)?;
        let order = t.order();
        let mut sum = Jet1::constant(t.center(), C64::new(0.0, 0.0), order);
        for j in 0..p {
            let wbar = C64::from_polar(1.0, -2.0 * PI * j as f64 / p as f64);
            let term = self.inner.eval_jet(z, w, &s.scale(wbar))?;
            sum = sum.add(&term.scale(wbar))?;
        }
        let denom = s.powi(self.p - 1).scale(C64::new((p * p) as f64, 0.0));
        Ok(sum.div(&denom)?)
    }

    /// Near `t = 0`: if `L(τ) = Σ a_k τ^k` then the folded profile is
    /// `(1/p) Σ_ℓ a_{pℓ+p−1} t^ℓ`.
    fn near_axis(&self, z: &[C64], w: &[C64], t: &Jet1) -> Result<Jet1> {
        let p = self.p as usize;
        let terms = t.order() + FOLD_SERIES_EXTRA;
        let inner_order = p * (terms + 1) - 1;
        let origin = C64::new(0.0, 0.0);
        let inner = self.inner.eval_jet(z, w, &Jet1::variable(origin, inner_order))?;
        let b: Vec<C64> = (0..=terms)
            .map(|l| inner.coeff(p * l + p - 1) / p as f64)
            .collect();
        // re-expand about the value of t
        let t0 = t.value();
        let shifted: Vec<C64> = (0..=t.order())
            .map(|i| {
                let mut acc = C64::new(0.0, 0.0);
                let mut binom = 1.0;
                let mut power = C64::new(1.0, 0.0);
                for (l, &bl) in b.iter().enumerate().take(terms + 1).skip(i) {
                    if l > i {
                        binom = binom * l as f64 / (l - i) as f64;
                        power *= t0;
                    }
                    acc += bl * binom * power;
                }
                acc
            })
            .collect();
        Ok(t.compose_series(&shifted))
    }
}

impl CircularProfile for FoldedProfile {
    fn base_dim(&self) -> usize {
        self.inner.base_dim()
    }

    fn fiber_bound(&self, z: &[C64]) -> f64 {
        let phi = self.inner.fiber_bound(z);
        if phi <= 0.0 {
            phi
        } else {
            phi.powi(self.p as i32)
        }
    }

    fn eval_jet(&self, z: &[C64], w: &[C64], t: &Jet1) -> Result<Jet1> {
        if self.p == 1 {
            return self.inner.eval_jet(z, w, t);
        }
        if t.value().norm() < EPS_SWITCH {
            self.near_axis(z, w, t)
        } else {
            self.direct(z, w, t)
        }
    }

    fn uses_limit(&self, t: C64) -> bool {
        self.p > 1 && t.norm() < EPS_SWITCH || self.inner.uses_limit(t.powf(1.0 / self.p as f64))
    }
}

/// Kernel on `{‖Z‖² < φ(z)} ⊂ ℂ^{n+m}`:
/// `π^{−(m−1)} ∂^{m−1}/∂t^{m−1} L(z, w, t)` at `t = ⟨Z, W⟩`.
#[derive(Clone)]
pub struct InflatedKernel {
    profile: Arc<dyn CircularProfile>,
    m: usize,
    formula: Formula,
}

/// Inflates the fiber variable of `profile` to dimension `m`.
pub fn inflate(profile: Arc<dyn CircularProfile>, m: usize) -> Result<InflatedKernel> {
    if m == 0 {
        return Err(Error::InvalidOrder("inflation dimension must be at least 1".into()));
    }
    Ok(InflatedKernel { profile, m, formula: Formula::Inflated })
}

impl InflatedKernel {
    pub(crate) fn with_formula(mut self, formula: Formula) -> Self {
        self.formula = formula;
        self
    }

    pub fn fiber_dim(&self) -> usize {
        self.m
    }

    fn check(&self, z: &[C64], w: &[C64]) -> Result<()> {
        let dim = self.dim();
        for (name, pt) in [("z", z), ("w", w)] {
            if pt.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: pt.len() });
            }
            let (base, fiber) = pt.split_at(self.profile.base_dim());
            let bound = self.profile.fiber_bound(base);
            let r: f64 = fiber.iter().map(|c| c.norm_sqr()).sum();
            if !(bound > 0.0 && r < bound) {
                return Err(Error::OutsideDomain(format!(
                    "{name}: fiber norm² {r} is not below φ = {bound}"
                )));
            }
        }
        Ok(())
    }
}

impl KernelEvaluator for InflatedKernel {
    fn dim(&self) -> usize {
        self.profile.base_dim() + self.m
    }

    fn eval(&self, z: &[C64], w: &[C64]) -> Result<KernelValue> {
        self.check(z, w)?;
        let n = self.profile.base_dim();
        let t0 = pairing(&z[n..], &w[n..]);
        let jet = self.profile.eval_jet(&z[..n], &w[..n], &Jet1::variable(t0, self.m - 1))?;
        let value = jet.derivative(self.m - 1)? / pi_pow(self.m - 1);
        Ok(KernelValue::new(value, self.formula).with_limit(self.profile.uses_limit(t0)))
    }
}

/// Kernel of the Hartogs domain itself, `K(z, ζ, w, η) = L(z, w, ζη̄)`.
pub fn hartogs_kernel(profile: Arc<dyn CircularProfile>) -> InflatedKernel {
    InflatedKernel { profile, m: 1, formula: Formula::Inflated }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn disc_value(t: C64) -> C64 {
        (C64::new(1.0, 0.0) - t).powi(-2) / PI
    }

    #[test]
    fn folding_the_disc_is_the_identity() {
        let disc: Arc<dyn CircularProfile> = Arc::new(DiscProfile);
        for p in [1.0, 2.0, 3.0, 5.0] {
            let folded: Arc<dyn CircularProfile> = Arc::new(fold(disc.clone(), p).unwrap());
            let k = hartogs_kernel(folded);
            for &(a, b) in &[(c(0.3, 0.4), c(-0.5, 0.2)), (c(0.0, 0.0), c(0.7, 0.0)), (c(1e-4, 0.0), c(0.0, 2e-4))] {
                let v = k.eval(&[a], &[b]).unwrap().value;
                let expected = disc_value(a * b.conj());
                assert!((v - expected).norm() < 1e-12 * expected.norm(), "p={p}: {v} vs {expected}");
            }
        }
    }

    #[test]
    fn fold_rejects_non_integer() {
        let disc: Arc<dyn CircularProfile> = Arc::new(DiscProfile);
        assert_eq!(fold(disc.clone(), 2.5).err(), Some(Error::NonIntegerFold(2.5)));
        assert_eq!(fold(disc, 0.0).err(), Some(Error::NonIntegerFold(0.0)));
    }

    #[test]
    fn roots_of_unity_sum_identity() {
        // Σ_{ν^p=1} ν/(1−uν)² = p² u^{p−1}/(1−u^p)², both sides as series in u through degree 3p
        for p in 1..=5usize {
            let order = 3 * p;
            let u = Jet1::variable(c(0.0, 0.0), order);
            let mut lhs = Jet1::constant(c(0.0, 0.0), c(0.0, 0.0), order);
            for j in 0..p {
                let nu = C64::from_polar(1.0, 2.0 * PI * j as f64 / p as f64);
                let term = (-&u.scale(nu)).add_scalar(c(1.0, 0.0)).powi(2).recip().unwrap().scale(nu);
                lhs = lhs.add(&term).unwrap();
            }
            let up = u.powi(p as u32);
            let rhs = u
                .powi(p as u32 - 1)
                .scale(c((p * p) as f64, 0.0))
                .div(&(-&up).add_scalar(c(1.0, 0.0)).powi(2))
                .unwrap();
            for k in 0..=order {
                assert!((lhs.coeff(k) - rhs.coeff(k)).norm() < 1e-12, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn inflating_by_one_is_the_hartogs_kernel() {
        let prof: Arc<dyn CircularProfile> = Arc::new(Hartogs2Profile { p: 1.7 });
        let a = inflate(prof.clone(), 1).unwrap();
        let b = hartogs_kernel(prof);
        let z = [c(0.3, 0.1), c(0.2, -0.2)];
        let w = [c(-0.1, 0.2), c(0.1, 0.3)];
        assert_eq!(a.eval(&z, &w).unwrap().value, b.eval(&z, &w).unwrap().value);
    }

    #[test]
    fn inflation_checks_membership() {
        let k = inflate(Arc::new(DiscProfile), 2).unwrap();
        let err = k.eval(&[c(0.8, 0.0), c(0.7, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::OutsideDomain(_)));
        assert!(inflate(Arc::new(DiscProfile), 0).is_err());
    }

    #[test]
    fn ball_profile_matches_inflated_disc() {
        // ball of ℂ³ as a Hartogs domain over the ball of ℂ²
        let hart = hartogs_kernel(Arc::new(BallProfile { base_dim: 2 }));
        let infl = inflate(Arc::new(DiscProfile), 3).unwrap();
        let z = [c(0.3, 0.1), c(0.2, -0.2), c(0.1, 0.4)];
        let w = [c(-0.1, 0.2), c(0.1, 0.3), c(0.5, 0.0)];
        let a = hart.eval(&z, &w).unwrap().value;
        let b = infl.eval(&z, &w).unwrap().value;
        assert!((a - b).norm() < 1e-13 * a.norm());
    }

    #[test]
    fn near_axis_branch_is_flagged() {
        let folded: Arc<dyn CircularProfile> =
            Arc::new(fold(Arc::new(BallProfile { base_dim: 1 }), 2.0).unwrap());
        let k = hartogs_kernel(folded);
        let v = k.eval(&[c(0.2, 0.0), c(1e-5, 0.0)], &[c(0.1, 0.0), c(1e-5, 0.0)]).unwrap();
        assert!(v.near_singular_limit);
        let v = k.eval(&[c(0.2, 0.0), c(0.3, 0.0)], &[c(0.1, 0.0), c(0.2, 0.0)]).unwrap();
        assert!(!v.near_singular_limit);
    }
}
