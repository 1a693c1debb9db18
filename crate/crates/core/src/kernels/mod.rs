//! Explicit Bergman kernels and the operators that build new kernels from old ones.
//!
//! Every evaluator takes points in the coordinates of its own domain
//! `Σ_j ‖z_j‖^{2/p_j} < 1`. Formulas that are naturally written in
//! "folded" coordinates (where a block with exponent `p_k` is reached through
//! `z_k ↦ z_k^{p_k}`) pick principal roots internally; the results do not
//! depend on that choice.

pub mod closed;
pub mod deflation;
pub mod folded;
pub mod profile;
pub mod slice;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domains::DomainSpec;
use crate::error::{Error, Result};

pub use closed::{ball_kernel, hartogs2_kernel, pflate_kernel, BallKernel, Hartogs2Kernel, PflateKernel};
pub use deflation::{deflation_constant, deflation_pair, simplex_accumulated_constant, DeflationPair};
pub use folded::{general_folded_kernel, GeneralFoldedKernel};
pub use profile::{
    fold, inflate, BallProfile, CircularProfile, DiscProfile, FoldedProfile, Hartogs2Profile,
    InflatedKernel,
};
pub use slice::{
    k2_closed_form, k2_numerator, mixed_family_folded, mixed_family_kernel, simplex_restricted_kernel, slice_axis_value, slice_kernel_kp,
    slice_kernel_kp_folded, K2Kernel, MixedFamilyKernel, SliceKernel,
};

type C64 = Complex64;

/// Below this modulus a removable singularity is resolved by series expansion.
pub const EPS_SWITCH: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    Ball,
    Hartogs2,
    Pflate,
    Folded,
    SliceKp,
    K2Closed,
    SimplexRestricted,
    MixedFamily,
    Deflated,
    Inflated,
    SeriesOracle,
}

impl Formula {
    pub fn name(&self) -> &'static str {
        match self {
            Formula::Ball => "ball",
            Formula::Hartogs2 => "hartogs2",
            Formula::Pflate => "pflate",
            Formula::Folded => "folded",
            Formula::SliceKp => "slice_kp",
            Formula::K2Closed => "k2_closed",
            Formula::SimplexRestricted => "simplex_restricted",
            Formula::MixedFamily => "mixed_family",
            Formula::Deflated => "deflated",
            Formula::Inflated => "inflated",
            Formula::SeriesOracle => "series_oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: C64,
    pub formula: Formula,
    pub near_singular_limit: bool,
}

impl KernelValue {
    pub fn new(value: C64, formula: Formula) -> Self {
        Self { value, formula, near_singular_limit: false }
    }

    pub fn with_limit(mut self, limit: bool) -> Self {
        self.near_singular_limit = limit;
        self
    }
}

/// A Bergman kernel `K(z, w)` on a fixed domain.
pub trait KernelEvaluator: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, z: &[C64], w: &[C64]) -> Result<KernelValue>;
}

impl<T: KernelEvaluator + ?Sized> KernelEvaluator for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, z: &[C64], w: &[C64]) -> Result<KernelValue> {
        (**self).eval(z, w)
    }
}

/// `⟨z, w⟩ = Σ z_k w̄_k`.
pub fn pairing(z: &[C64], w: &[C64]) -> C64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

pub(crate) fn pi_pow(k: usize) -> f64 {
    PI.powi(k as i32)
}

pub(crate) fn ensure_inside(domain: &DomainSpec, z: &[C64], w: &[C64]) -> Result<()> {
    domain.check_len(z.len())?;
    domain.check_len(w.len())?;
    for (name, pt) in [("z", z), ("w", w)] {
        let phi = domain.phi(pt)?;
        if !(phi < 1.0) {
            return Err(Error::OutsideDomain(format!("{name} has defining function {phi}")));
        }
    }
    Ok(())
}

/// Evaluates `inner` after moving coordinates into the order it expects:
/// `inner` coordinate `i` is user coordinate `order[i]`.
pub struct Reordered<K> {
    inner: K,
    order: Vec<usize>,
}

impl<K: KernelEvaluator> Reordered<K> {
    pub fn new(inner: K, order: Vec<usize>) -> Self {
        Self { inner, order }
    }
}

impl<K: KernelEvaluator> KernelEvaluator for Reordered<K> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, z: &[C64], w: &[C64]) -> Result<KernelValue> {
        for pt in [z, w] {
            if pt.len() != self.order.len() {
                return Err(Error::DimensionMismatch { expected: self.order.len(), actual: pt.len() });
            }
        }
        let zz: Vec<C64> = self.order.iter().map(|&i| z[i]).collect();
        let ww: Vec<C64> = self.order.iter().map(|&i| w[i]).collect();
        self.inner.eval(&zz, &ww)
    }
}

/// Picks the closed-form evaluator that covers `domain`.
///
/// Supported shapes: a single block (always a ball); Euclidean blocks
/// followed by one arbitrary block (the inflated Hartogs kernel); and
/// scalar blocks with integer exponents plus at most one block with a
/// non-integer exponent or vector dimension (the folded kernel, inflated
/// in its last slot). Coordinates are permuted internally as needed.
pub fn kernel_for_domain(domain: &DomainSpec) -> Result<Box<dyn KernelEvaluator>> {
    let blocks = &domain.blocks;
    if blocks.len() == 1 {
        return Ok(Box::new(BallKernel::new(blocks[0].dim)?));
    }

    // coordinate offsets of each block in user order
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut acc = 0;
    for b in blocks {
        offsets.push(acc);
        acc += b.dim;
    }

    let foldable = |b: &crate::domains::Block| b.p == 1.0 || (b.dim == 1 && b.has_integer_exponent());
    let special: Vec<usize> = (0..blocks.len()).filter(|&i| !foldable(&blocks[i])).collect();
    let last = match special.as_slice() {
        [] => blocks.len() - 1,
        [i] => *i,
        _ => {
            return Err(Error::UnsupportedDomain(
                "no closed form for more than one block with a non-integer exponent or a vector \
                 block with p != 1"
                    .into(),
            ))
        }
    };

    let mut order = Vec::with_capacity(domain.dim());
    let mut p_list = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        if i == last {
            continue;
        }
        for k in 0..b.dim {
            order.push(offsets[i] + k);
            // p = 1 vector blocks split into scalar blocks
            p_list.push(if b.p == 1.0 { 1 } else { b.p as u32 });
        }
    }
    let last_block = blocks[last];
    for k in 0..last_block.dim {
        order.push(offsets[last] + k);
    }

    let identity = order.iter().enumerate().all(|(i, &j)| i == j);
    let inner: Box<dyn KernelEvaluator> = if p_list.iter().all(|&p| p == 1) {
        Box::new(PflateKernel::new(p_list.len(), last_block.dim, last_block.p)?)
    } else {
        Box::new(GeneralFoldedKernel::new(p_list, last_block.p, last_block.dim)?)
    };
    if identity {
        Ok(inner)
    } else {
        Ok(Box::new(Reordered::new(inner, order)))
    }
}
