//! Monte-Carlo integration over a domain by rejection from the unit polydisc.
//!
//! Samples are drawn in fixed-size blocks, each from its own ChaCha stream,
//! and block results are merged in block order, so estimates depend only on
//! `(samples, seed)` and not on the number of worker threads.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::kernels::KernelEvaluator;

type C64 = Complex64;

const BLOCK: usize = 1 << 15;
pub const MIN_SAMPLES: usize = 10_000;

/// Holomorphic polynomial `Σ c_α w^α`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub terms: Vec<(C64, Vec<u32>)>,
}

impl Polynomial {
    pub fn new(terms: Vec<(C64, Vec<u32>)>) -> Self {
        Self { terms }
    }

    pub fn monomial(exponents: Vec<u32>) -> Self {
        Self { terms: vec![(C64::new(1.0, 0.0), exponents)] }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, e)| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn eval(&self, w: &[C64]) -> C64 {
        self.terms
            .iter()
            .map(|(c, e)| e.iter().zip(w).fold(*c, |acc, (&k, &x)| acc * x.powu(k)))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReproducingOutcome {
    /// Monte-Carlo estimate of `∫_D h(w) K(z, w) dV(w)`.
    pub estimate: C64,
    /// `h(z)`.
    pub target: C64,
    pub residual: f64,
    pub stderr: f64,
}

#[derive(Default, Clone, Copy)]
struct Accum {
    count: usize,
    sum: C64,
    sum_sq: f64,
}

impl Accum {
    fn merge(self, other: Self) -> Self {
        Self { count: self.count + other.count, sum: self.sum + other.sum, sum_sq: self.sum_sq + other.sum_sq }
    }
}

fn sample_disc(rng: &mut ChaCha8Rng) -> C64 {
    let r = rng.random::<f64>().sqrt();
    let theta = 2.0 * PI * rng.random::<f64>();
    C64::from_polar(r, theta)
}

/// Averages `g` over uniform samples of the polydisc `{|w_j| < 1}^n`.
/// `g` returns `None` for points outside the domain; those contribute zero.
fn polydisc_average<G>(n: usize, samples: usize, seed: u64, g: G) -> Result<Accum>
where
    G: Fn(&[C64]) -> Result<Option<C64>> + Sync,
{
    if samples < MIN_SAMPLES {
        return Err(Error::PreconditionViolated(format!(
            "Monte-Carlo needs at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let blocks = samples.div_ceil(BLOCK);
    let partials: Vec<Result<Accum>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let len = BLOCK.min(samples - b * BLOCK);
            let mut acc = Accum::default();
            let mut w = vec![C64::new(0.0, 0.0); n];
            for _ in 0..len {
                w.iter_mut().for_each(|x| *x = sample_disc(&mut rng));
                let v = g(&w)?.unwrap_or(C64::new(0.0, 0.0));
                acc.sum += v;
                acc.sum_sq += v.norm_sqr();
            }
            acc.count = len;
            Ok(acc)
        })
        .collect();
    partials.into_iter().try_fold(Accum::default(), |a, b| Ok(a.merge(b?)))
}

fn mean_and_stderr(acc: Accum, scale: f64) -> (C64, f64) {
    let n = acc.count as f64;
    let mean = acc.sum / n;
    let var = ((acc.sum_sq - n * mean.norm_sqr()) / (n - 1.0)).max(0.0);
    (mean * scale, scale * (var / n).sqrt())
}

/// Volume estimate and its standard error.
pub fn mc_volume(domain: &DomainSpec, samples: usize, seed: u64) -> Result<(f64, f64)> {
    let n = domain.dim();
    let acc = polydisc_average(n, samples, seed, |w| {
        Ok((domain.phi(w)? < 1.0).then_some(C64::new(1.0, 0.0)))
    })?;
    let (mean, stderr) = mean_and_stderr(acc, PI.powi(n as i32));
    Ok((mean.re, stderr))
}

/// Checks `h(z) = ∫_D h(w) K(z, w) dV(w)` by Monte-Carlo.
pub fn reproducing_check(
    domain: &DomainSpec,
    kernel: &dyn KernelEvaluator,
    h: &Polynomial,
    z: &[C64],
    samples: usize,
    seed: u64,
) -> Result<ReproducingOutcome> {
    domain.check_len(z.len())?;
    if kernel.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), actual: kernel.dim() });
    }
    if h.degree() > 4 {
        return Err(Error::PreconditionViolated(format!("test polynomial degree {} exceeds 4", h.degree())));
    }
    let phi = domain.phi(z)?;
    if phi > 0.5 {
        return Err(Error::PreconditionViolated(format!("reproducing check needs φ(z) <= 0.5, got {phi}")));
    }
    let n = domain.dim();
    let acc = polydisc_average(n, samples, seed, |w| {
        if domain.phi(w)? >= 1.0 {
            return Ok(None);
        }
        Ok(Some(h.eval(w) * kernel.eval(z, w)?.value))
    })?;
    let (estimate, stderr) = mean_and_stderr(acc, PI.powi(n as i32));
    let target = h.eval(z);
    Ok(ReproducingOutcome { estimate, target, residual: (estimate - target).norm(), stderr })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::kernel_for_domain;

    #[test]
    fn volume_within_three_sigma() {
        for ps in [vec![1.0], vec![2.0, 2.0], vec![1.0, 2.0]] {
            let d = DomainSpec::diagonal(&ps).unwrap();
            let exact = d.volume().unwrap();
            let (est, se) = mc_volume(&d, 200_000, 7).unwrap();
            assert!((est - exact).abs() <= 3.0 * se + 1e-12 * exact, "{ps:?}: {est} ± {se} vs {exact}");
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let d = DomainSpec::diagonal(&[2.0, 2.0]).unwrap();
        let a = mc_volume(&d, 100_000, 42).unwrap();
        let b = mc_volume(&d, 100_000, 42).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| mc_volume(&d, 100_000, 42).unwrap());
        assert_eq!(a, c);
        assert_ne!(a, mc_volume(&d, 100_000, 43).unwrap());
    }

    #[test]
    fn too_few_samples() {
        let d = DomainSpec::diagonal(&[1.0]).unwrap();
        assert!(matches!(mc_volume(&d, 100, 1), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn reproduces_constant_on_disc() {
        let d = DomainSpec::diagonal(&[1.0]).unwrap();
        let k = kernel_for_domain(&d).unwrap();
        let h = Polynomial::monomial(vec![1]);
        let z = [C64::new(0.2, 0.1)];
        let out = reproducing_check(&d, k.as_ref(), &h, &z, 200_000, 3).unwrap();
        assert!(out.residual < 4.0 * out.stderr + 1e-12, "{out:?}");
    }

    #[test]
    fn polynomial_eval() {
        let h = Polynomial::new(vec![(C64::new(2.0, 0.0), vec![1, 2]), (C64::new(0.0, 1.0), vec![0, 0])]);
        assert_eq!(h.degree(), 3);
        let v = h.eval(&[C64::new(2.0, 0.0), C64::new(0.0, 1.0)]);
        assert!((v - C64::new(-4.0, 1.0)).norm() < 1e-15);
    }
}
