//! Kernel of `|z₁|^{2/p₁} + ⋯ + |z_n|^{2/p_n} + ‖Z‖^{2/p} < 1` by repeated folding.
//!
//! With integer `p_k`, folding Bergman's Hartogs kernel in each of the first
//! `n` coordinates gives, in folded coordinates `z_k` (so the domain point
//! is `z_k^{p_k}`) and `x_k = z_k w̄_k`,
//!
//! ```text
//! K = 1/(p π^{n+m}) ∏_k 1/(p_k² x_k^{p_k−1})
//!     Σ_{j} ω̄^{j} ∂_t^{n+1} ∂_u^{m−1} [1/((1−t)^p − u)]  at t = Σ_k x_k ω̄_k^{j_k}, u = ⟨Z, W⟩
//! ```
//!
//! The last slot may carry a vector block `Z ∈ ℂ^m` and a real exponent.
//! Coordinates with `|x_k|` below the switch threshold are folded through
//! their power series instead, which removes the `x_k^{1−p_k}` singularity.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{ensure_inside, pairing, pi_pow, Formula, KernelEvaluator, KernelValue, EPS_SWITCH};
use crate::domains::{Block, DomainSpec};
use crate::error::{Error, Result};
use crate::jets::Jet1;

type C64 = Complex64;

const SERIES_TERMS: usize = 8;

#[derive(Debug, Clone)]
pub struct GeneralFoldedKernel {
    p_list: Vec<u32>,
    p: f64,
    last_dim: usize,
    domain: DomainSpec,
}

impl GeneralFoldedKernel {
    pub fn new(p_list: Vec<u32>, p: f64, last_dim: usize) -> Result<Self> {
        if let Some(&bad) = p_list.iter().find(|&&q| q == 0) {
            return Err(Error::NonIntegerFold(bad as f64));
        }
        if last_dim == 0 {
            return Err(Error::InvalidOrder("last block needs dimension >= 1".into()));
        }
        let mut blocks: Vec<Block> = p_list.iter().map(|&q| Block::new(1, q as f64)).collect();
        blocks.push(Block::new(last_dim, p));
        let domain = DomainSpec::new(blocks)?;
        Ok(Self { p_list, p, last_dim, domain })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    /// Evaluates from folded pairings `x_k = z_k w̄_k` (any choice of
    /// `p_k`-th roots) and the last-block pairing `u = ⟨Z, W⟩`.
    pub fn eval_folded(&self, x: &[C64], u: C64) -> Result<KernelValue> {
        self.eval_folded_with_switch(x, u, EPS_SWITCH)
    }

    fn eval_folded_with_switch(&self, x: &[C64], u: C64, switch: f64) -> Result<KernelValue> {
        let n = self.p_list.len();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: x.len() });
        }
        let m = self.last_dim;
        let (small, large): (Vec<usize>, Vec<usize>) =
            (0..n).partition(|&k| self.p_list[k] > 1 && x[k].norm() < switch);

        let series_order: usize = small
            .iter()
            .map(|&k| self.p_list[k] as usize * (SERIES_TERMS + 1) - 1)
            .sum();
        let big_x: Vec<C64> = small.iter().map(|&k| x[k].powu(self.p_list[k])).collect();
        let small_p: Vec<usize> = small.iter().map(|&k| self.p_list[k] as usize).collect();

        let mut total = C64::new(0.0, 0.0);
        let mut roots = vec![0u32; large.len()];
        loop {
            let mut c = C64::new(0.0, 0.0);
            let mut weight = C64::new(1.0, 0.0);
            for (slot, &k) in large.iter().enumerate() {
                let wbar = C64::from_polar(1.0, -2.0 * PI * roots[slot] as f64 / self.p_list[k] as f64);
                c += x[k] * wbar;
                weight *= wbar;
            }
            let d = self.derivative_jet(c, u, series_order)?;
            let folded = if small.is_empty() {
                d.value()
            } else {
                fold_series(&d, &small_p, &big_x)
            };
            total += weight * folded;
            if !advance(&mut roots, large.iter().map(|&k| self.p_list[k])) {
                break;
            }
        }

        let mut prefactor = C64::new(1.0 / (self.p * pi_pow(n + m)), 0.0);
        for &k in &large {
            let pk = self.p_list[k];
            if pk > 1 {
                prefactor /= x[k].powu(pk - 1) * (pk * pk) as f64;
            }
        }
        Ok(KernelValue::new(total * prefactor, Formula::Folded).with_limit(!small.is_empty()))
    }

    /// Jet of `∂_t^{n+1} ∂_u^{m−1} [1/((1−t)^p − u)]` at `t = c`, of the given order.
    ///
    /// The `u`-derivatives are taken in closed form:
    /// `∂_u^{m−1} 1/(A − u) = (m−1)!/(A − u)^m`.
    fn derivative_jet(&self, c: C64, u: C64, order: usize) -> Result<Jet1> {
        let n = self.p_list.len();
        let m = self.last_dim;
        let one_minus_c = C64::new(1.0, 0.0) - c;
        if one_minus_c.re <= 0.0 {
            return Err(Error::OutsideDomain(format!("1 - t = {one_minus_c} is not in the right half-plane")));
        }
        let t = Jet1::variable(c, n + 1 + order);
        let a = (-&t).add_scalar(C64::new(1.0, 0.0)).rpow(self.p)?;
        let fact: f64 = (1..m).map(|k| k as f64).product();
        let f = a.add_scalar(-u).recip()?.powi(m as u32).scale(C64::new(fact, 0.0));
        Ok(f.differentiate(n + 1)?)
    }
}

/// Folds the power series `Σ_j d_j (Σ_k τ_k)^j` in each `τ_k` by `p_k`:
/// only exponents `e_k = p_k ℓ_k + p_k − 1` survive, each contributing
/// `X_k^{ℓ_k}/p_k` with `X_k = τ_k^{p_k}`.
fn fold_series(d: &Jet1, ps: &[usize], big_x: &[C64]) -> C64 {
    let mut total = C64::new(0.0, 0.0);
    let mut ell = vec![0u32; ps.len()];
    loop {
        let exps: Vec<usize> = ps.iter().zip(&ell).map(|(&p, &l)| p * l as usize + p - 1).collect();
        let e_total: usize = exps.iter().sum();
        let mut term = d.coeff(e_total) * multinomial(&exps);
        for ((&p, &l), &x) in ps.iter().zip(&ell).zip(big_x) {
            term *= x.powu(l) / p as f64;
        }
        total += term;
        if !advance(&mut ell, std::iter::repeat_n(SERIES_TERMS as u32 + 1, ps.len())) {
            break;
        }
    }
    total
}

fn multinomial(parts: &[usize]) -> f64 {
    let mut acc = 1.0;
    let mut running = 0usize;
    for &k in parts {
        for i in 1..=k {
            running += 1;
            acc = acc * running as f64 / i as f64;
        }
    }
    acc
}

/// Odometer increment over `[0, radix_i)`; false once every digit wrapped.
fn advance(digits: &mut [u32], radices: impl Iterator<Item = u32>) -> bool {
    for (d, r) in digits.iter_mut().zip(radices) {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

impl KernelEvaluator for GeneralFoldedKernel {
    fn dim(&self) -> usize {
        self.p_list.len() + self.last_dim
    }

    fn eval(&self, a: &[C64], b: &[C64]) -> Result<KernelValue> {
        ensure_inside(&self.domain, a, b)?;
        let n = self.p_list.len();
        let x: Vec<C64> = (0..n)
            .map(|k| {
                let r = 1.0 / self.p_list[k] as f64;
                a[k].powf(r) * b[k].powf(r).conj()
            })
            .collect();
        self.eval_folded(&x, pairing(&a[n..], &b[n..]))
    }
}

/// Kernel of `|a₁|^{2/p₁} + ⋯ + |a_n|^{2/p_n} + |a_{n+1}|^{2/p} < 1` at user
/// coordinates `a`, `b`.
pub fn general_folded_kernel(p_list: &[u32], p: f64, a: &[C64], b: &[C64]) -> Result<KernelValue> {
    GeneralFoldedKernel::new(p_list.to_vec(), p, 1)?.eval(a, b)
}
