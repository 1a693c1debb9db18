use num_complex::Complex64;

use crate::domains::{ln_gamma, DomainSpec};
use crate::error::{Error, Result};
use crate::kernels::{Formula, KernelEvaluator, KernelValue};

type C64 = Complex64;

/// Truncation control for the monomial series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    pub max_degree: usize,
    /// Stop once two consecutive total degrees change the sum by less than
    /// `stop_rel` times the largest partial-sum modulus seen.
    pub stop_rel: f64,
    pub hard_cap: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self { max_degree: 200, stop_rel: 1e-9, hard_cap: 200 }
    }
}

impl SeriesConfig {
    pub fn with_cap(cap: usize) -> Self {
        Self { max_degree: cap, hard_cap: cap, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.stop_rel > 0.0 && self.stop_rel < 1.0) || self.max_degree > self.hard_cap {
            return Err(Error::Value {
                path: "series_config".into(),
                message: format!("need 0 < stop_rel < 1 and max_degree <= hard_cap, got {self:?}"),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOutcome {
    pub value: C64,
    /// Highest total degree included.
    pub degree: usize,
}

/// Largest defining-function value at which the series is trusted.
pub const SERIES_PHI_LIMIT: f64 = 0.7;

/// Degree-homogeneous parts of the monomial series at a fixed point pair.
struct DegreeTerms {
    active_p: Vec<f64>,
    ln_x: Vec<C64>,
    ln_gamma_tables: Vec<Vec<f64>>,
    ln_const: f64,
    shape_base: f64,
}

impl DegreeTerms {
    fn new(domain: &DomainSpec, z: &[C64], w: &[C64], cap: usize) -> Result<Self> {
        let domain = domain.split_euclidean_blocks();
        let ps = domain.exponents()?;
        domain.check_len(z.len())?;
        domain.check_len(w.len())?;
        for (name, pt) in [("z", z), ("w", w)] {
            let phi = domain.phi(pt)?;
            if phi > SERIES_PHI_LIMIT {
                return Err(Error::PreconditionViolated(format!(
                    "series oracle needs φ({name}) <= {SERIES_PHI_LIMIT}, got {phi}"
                )));
            }
        }

        let n = ps.len();
        let pairings: Vec<C64> = z.iter().zip(w).map(|(a, b)| a * b.conj()).collect();
        let active: Vec<usize> = (0..n).filter(|&j| pairings[j] != C64::new(0.0, 0.0)).collect();
        let ln_x = active.iter().map(|&j| pairings[j].ln()).collect();
        let active_p: Vec<f64> = active.iter().map(|&j| ps[j]).collect();
        let ln_gamma_tables = active_p
            .iter()
            .map(|&p| (0..=cap).map(|k| ln_gamma(p * (k as f64 + 1.0))).collect())
            .collect();

        // ln of the norm factors that do not depend on α
        let mut ln_const = n as f64 * std::f64::consts::PI.ln();
        let mut shape_base = 0.0;
        for (j, &p) in ps.iter().enumerate() {
            ln_const += p.ln();
            shape_base += p;
            if !active.contains(&j) {
                ln_const += ln_gamma(p);
            }
        }
        Ok(Self { active_p, ln_x, ln_gamma_tables, ln_const, shape_base })
    }

    /// True when only the constant term is nonzero.
    fn is_constant(&self) -> bool {
        self.active_p.is_empty()
    }

    fn term(&self, degree: usize) -> C64 {
        let mut alpha = vec![0usize; self.active_p.len()];
        let mut term = C64::new(0.0, 0.0);
        for_each_composition(degree, &mut alpha, 0, &mut |alpha| {
            let mut exponent = C64::new(-self.ln_const, 0.0);
            let mut shape = self.shape_base;
            for (slot, &a) in alpha.iter().enumerate() {
                exponent += self.ln_x[slot] * a as f64;
                exponent -= self.ln_gamma_tables[slot][a];
                shape += self.active_p[slot] * a as f64;
            }
            exponent += ln_gamma(1.0 + shape);
            term += exponent.exp();
        });
        term
    }
}

/// `K(z, w) = Σ_α z^α w̄^α / ‖z^α‖²`, summed by total degree.
pub fn series_kernel_detailed(
    domain: &DomainSpec,
    z: &[C64],
    w: &[C64],
    cfg: &SeriesConfig,
) -> Result<SeriesOutcome> {
    cfg.validate()?;
    let cap = cfg.max_degree.min(cfg.hard_cap);
    let terms = DegreeTerms::new(domain, z, w, cap)?;

    let mut sum = C64::new(0.0, 0.0);
    let mut max_modulus: f64 = 0.0;
    let mut previous_term = f64::INFINITY;
    for degree in 0..=cap {
        let term = terms.term(degree);
        sum += term;
        max_modulus = max_modulus.max(sum.norm());
        if degree >= 1 && term.norm() + previous_term < cfg.stop_rel * max_modulus {
            return Ok(SeriesOutcome { value: sum, degree });
        }
        if terms.is_constant() {
            return Ok(SeriesOutcome { value: sum, degree });
        }
        previous_term = term.norm();
    }
    Err(Error::NoConvergence(format!(
        "series oracle did not settle by degree {cap} (points too close to the boundary?)"
    )))
}

/// Partial sums `S_0, …, S_max_degree` of the series, without a stopping rule.
pub fn series_partial_sums(domain: &DomainSpec, z: &[C64], w: &[C64], max_degree: usize) -> Result<Vec<C64>> {
    let terms = DegreeTerms::new(domain, z, w, max_degree)?;
    let mut sum = C64::new(0.0, 0.0);
    Ok((0..=max_degree)
        .map(|d| {
            sum += terms.term(d);
            sum
        })
        .collect())
}

pub fn series_kernel(domain: &DomainSpec, z: &[C64], w: &[C64], cfg: &SeriesConfig) -> Result<KernelValue> {
    let out = series_kernel_detailed(domain, z, w, cfg)?;
    Ok(KernelValue::new(out.value, Formula::SeriesOracle))
}

/// Calls `f` on every composition of `remaining` into `alpha[slot..]`.
fn for_each_composition(remaining: usize, alpha: &mut [usize], slot: usize, f: &mut impl FnMut(&[usize])) {
    if alpha.is_empty() {
        if remaining == 0 {
            f(alpha);
        }
        return;
    }
    if slot == alpha.len() - 1 {
        alpha[slot] = remaining;
        f(alpha);
        return;
    }
    for k in 0..=remaining {
        alpha[slot] = k;
        for_each_composition(remaining - k, alpha, slot + 1, f);
    }
}

/// The series oracle as a kernel evaluator.
#[derive(Debug, Clone)]
pub struct SeriesKernel {
    domain: DomainSpec,
    cfg: SeriesConfig,
}

impl SeriesKernel {
    pub fn new(domain: DomainSpec, cfg: SeriesConfig) -> Self {
        Self { domain, cfg }
    }
}

impl KernelEvaluator for SeriesKernel {
    fn dim(&self) -> usize {
        self.domain.dim()
    }

    fn eval(&self, z: &[C64], w: &[C64]) -> Result<KernelValue> {
        series_kernel(&self.domain, z, w, &self.cfg)
    }
}
