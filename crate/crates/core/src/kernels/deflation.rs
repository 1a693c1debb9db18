//! Transfer of kernels between `{φ + |ζ₁|^{2/p} + |ζ₂|^{2/q} < 1}` and
//! `{φ + |ζ|^{2/(p+q)} < 1}` on the slice where the fiber variables vanish:
//!
//! `π K₂(z, 0, w, 0) = [π² Γ(p+1) Γ(q+1) / Γ(p+q+1)] · K₁(z, 0, 0, w, 0, 0)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::KernelEvaluator;
use crate::domains::{gamma, Block, DomainSpec};
use crate::error::{Error, Result};

type C64 = Complex64;

/// `π² Γ(p+1) Γ(q+1) / Γ(p+q+1)`, the volume of `{|ζ₁|^{2/p} + |ζ₂|^{2/q} < 1}`.
pub fn deflation_constant(p: f64, q: f64) -> f64 {
    PI * PI * gamma(p + 1.0) * gamma(q + 1.0) / gamma(p + q + 1.0)
}

/// Factor `c_n` with `K_simplex(z₁, 0, …, w₁, 0, …) = c_n · K_{2n−2}(z₁, 0, w₁, 0)`.
///
/// Merges the last two scalar fibers first: `(|z_{n−1}|, |z_n|)` into
/// `|ζ|^{2/4}`, then `|z_{n−2}|` into `|ζ|^{2/6}`, and so on; each step
/// contributes `π / deflation_constant(2, 2k)`.
pub fn simplex_accumulated_constant(n: usize) -> f64 {
    (1..=n.saturating_sub(2))
        .map(|k| PI / deflation_constant(2.0, 2.0 * k as f64))
        .product()
}

/// The two domains related by deflation and the constant between them.
#[derive(Debug, Clone)]
pub struct DeflationPair {
    pub base: DomainSpec,
    pub p: f64,
    pub q: f64,
    pub constant: f64,
    /// `φ + |ζ|^{2/(p+q)} < 1`, dimension `n + 1`.
    pub lower: DomainSpec,
    /// `φ + |ζ₁|^{2/p} + |ζ₂|^{2/q} < 1`, dimension `n + 2`.
    pub upper: DomainSpec,
}

pub fn deflation_pair(base: &DomainSpec, p: f64, q: f64) -> Result<DeflationPair> {
    if !(p > 0.0 && q > 0.0) {
        return Err(Error::Value {
            path: "p,q".into(),
            message: format!("deflation exponents must be positive, got ({p}, {q})"),
        });
    }
    let mut lower = base.blocks.clone();
    lower.push(Block::new(1, p + q));
    let mut upper = base.blocks.clone();
    upper.push(Block::new(1, p));
    upper.push(Block::new(1, q));
    Ok(DeflationPair {
        base: base.clone(),
        p,
        q,
        constant: deflation_constant(p, q),
        lower: DomainSpec::new(lower)?,
        upper: DomainSpec::new(upper)?,
    })
}

impl DeflationPair {
    /// `π K₂(z, 0, w, 0)` with `lower` the kernel of [`Self::lower`].
    pub fn lhs(&self, lower: &dyn KernelEvaluator, z: &[C64], w: &[C64]) -> Result<C64> {
        let pad = |v: &[C64]| v.iter().copied().chain([C64::new(0.0, 0.0)]).collect::<Vec<_>>();
        Ok(lower.eval(&pad(z), &pad(w))?.value * PI)
    }

    /// `c · K₁(z, 0, 0, w, 0, 0)` with `upper` the kernel of [`Self::upper`].
    pub fn rhs(&self, upper: &dyn KernelEvaluator, z: &[C64], w: &[C64]) -> Result<C64> {
        let pad = |v: &[C64]| {
            v.iter().copied().chain([C64::new(0.0, 0.0); 2]).collect::<Vec<_>>()
        };
        Ok(upper.eval(&pad(z), &pad(w))?.value * self.constant)
    }
}
