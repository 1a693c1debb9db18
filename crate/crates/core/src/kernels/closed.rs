//! Ball, Bergman's two-dimensional Hartogs kernel, and its inflation in both variables.

use std::sync::Arc;

use num_complex::Complex64;

use super::profile::{inflate, DiscProfile, InflatedKernel};
use super::{ensure_inside, pairing, pi_pow, Formula, KernelEvaluator, KernelValue};
use crate::domains::{Block, DomainSpec};
use crate::error::{Error, Result};
use crate::jets::{Jet1, Jet2};

type C64 = Complex64;

/// Kernel of the unit ball of `ℂ^m`, built by inflating the disc profile.
#[derive(Clone)]
pub struct BallKernel {
    inner: InflatedKernel,
}

impl BallKernel {
    pub fn new(m: usize) -> Result<Self> {
        let inner = inflate(Arc::new(DiscProfile), m)?.with_formula(Formula::Ball);
        Ok(Self { inner })
    }
}

impl KernelEvaluator for BallKernel {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, z: &[C64], w: &[C64]) -> Result<KernelValue> {
        self.inner.eval(z, w)
    }
}

pub fn ball_kernel(m: usize, z: &[C64], w: &[C64]) -> Result<KernelValue> {
    BallKernel::new(m)?.eval(z, w)
}

/// Kernel of `{|z|² + |ζ|^{2/p} < 1} ⊂ ℂ²`, coordinates `(z, ζ)`.
#[derive(Debug, Clone)]
pub struct Hartogs2Kernel {
    p: f64,
    domain: DomainSpec,
}

impl Hartogs2Kernel {
    pub fn new(p: f64) -> Result<Self> {
        let domain = DomainSpec::new(vec![Block::new(1, 1.0), Block::new(1, p)])?;
        Ok(Self { p, domain })
    }
}

impl KernelEvaluator for Hartogs2Kernel {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, z: &[C64], w: &[C64]) -> Result<KernelValue> {
        ensure_inside(&self.domain, z, w)?;
        let p = self.p;
        let t = Jet1::variable(z[0] * w[0].conj(), 2);
        let base = (-&t).add_scalar(C64::new(1.0, 0.0)).rpow(p)?;
        let g = base.add_scalar(-(z[1] * w[1].conj())).recip()?;
        let value = g.derivative(2)? / (p * pi_pow(2));
        Ok(KernelValue::new(value, Formula::Hartogs2))
    }
}

pub fn hartogs2_kernel(p: f64, z: C64, zeta: C64, w: C64, eta: C64) -> Result<KernelValue> {
    Hartogs2Kernel::new(p)?.eval(&[z, zeta], &[w, eta])
}

/// Kernel of `{‖z‖² + ‖Z‖^{2/p} < 1} ⊂ ℂ^{n+m}`:
/// `(1/(pπ^{n+m})) ∂^{n+m}/∂t^{n+1}∂u^{m−1} [1/((1−t)^p − u)]` at
/// `t = ⟨z, w⟩`, `u = ⟨Z, W⟩`.
#[derive(Debug, Clone)]
pub struct PflateKernel {
    n: usize,
    m: usize,
    p: f64,
    domain: DomainSpec,
}

impl PflateKernel {
    pub fn new(n: usize, m: usize, p: f64) -> Result<Self> {
        if n < 1 || m < 1 {
            return Err(Error::InvalidOrder(format!("need n >= 1 and m >= 1, got n={n}, m={m}")));
        }
        let domain = DomainSpec::new(vec![Block::new(n, 1.0), Block::new(m, p)])?;
        Ok(Self { n, m, p, domain })
    }
}

impl KernelEvaluator for PflateKernel {
    fn dim(&self) -> usize {
        self.n + self.m
    }

    fn eval(&self, z: &[C64], w: &[C64]) -> Result<KernelValue> {
        ensure_inside(&self.domain, z, w)?;
        let (n, m) = (self.n, self.m);
        let t0 = pairing(&z[..n], &w[..n]);
        let u0 = pairing(&z[n..], &w[n..]);
        let orders = (n + 1, m - 1);
        let center = (t0, u0);
        let one_minus = (-&Jet1::variable(t0, n + 1)).add_scalar(C64::new(1.0, 0.0));
        let a = Jet2::lift_t(&one_minus.rpow(self.p)?, u0, orders);
        let g = Jet2::constant(center, C64::new(1.0, 0.0), orders)
            .div(&a.sub(&Jet2::variable_u(center, orders))?)?;
        let value = g.partial(n + 1, m - 1)? / (self.p * pi_pow(n + m));
        Ok(KernelValue::new(value, Formula::Pflate))
    }
}

#[allow(clippy::too_many_arguments)]
pub fn pflate_kernel(
    n: usize,
    m: usize,
    p: f64,
    z: &[C64],
    big_z: &[C64],
    w: &[C64],
    big_w: &[C64],
) -> Result<KernelValue> {
    let k = PflateKernel::new(n, m, p)?;
    let zz: Vec<C64> = z.iter().chain(big_z).copied().collect();
    let ww: Vec<C64> = w.iter().chain(big_w).copied().collect();
    k.eval(&zz, &ww)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::profile::{hartogs_kernel, CircularProfile, Hartogs2Profile};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    fn ball_closed(m: usize, t: C64) -> C64 {
        let fact: f64 = (1..=m).map(|k| k as f64).product();
        (C64::new(1.0, 0.0) - t).powi(-(m as i32 + 1)) * fact / PI.powi(m as i32)
    }

    #[test]
    fn ball_examples() {
        let v = ball_kernel(1, &[c(0.0, 0.0)], &[c(0.0, 0.0)]).unwrap();
        assert!((v.value.re - 1.0 / PI).abs() < 1e-16);
        assert_eq!(v.formula, Formula::Ball);
        let v = ball_kernel(2, &[c(0.5, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!((v.value.re - 2.0 / (PI * PI)).abs() < 1e-15);
        let v = ball_kernel(1, &[c(0.5, 0.0)], &[c(0.5, 0.0)]).unwrap();
        assert!((v.value.re - 16.0 / (9.0 * PI)).abs() < 1e-15);
        assert!((v.value.re - 0.565_88).abs() < 1e-5);
    }

    #[test]
    fn ball_matches_closed_form() {
        let z = [c(0.1, 0.2), c(-0.3, 0.1), c(0.2, 0.2), c(0.0, -0.4)];
        let w = [c(0.3, -0.1), c(0.2, 0.2), c(-0.1, 0.3), c(0.1, 0.1)];
        for m in 1..=4 {
            let v = ball_kernel(m, &z[..m], &w[..m]).unwrap().value;
            assert!(rel(v, ball_closed(m, pairing(&z[..m], &w[..m]))) < 1e-13);
        }
        assert!(matches!(
            ball_kernel(2, &[c(0.8, 0.0), c(0.8, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]),
            Err(Error::OutsideDomain(_))
        ));
    }

    #[test]
    fn hartogs2_origin_values() {
        let zero = c(0.0, 0.0);
        let v = hartogs2_kernel(1.0, zero, zero, zero, zero).unwrap().value;
        assert!((v.re - 2.0 / (PI * PI)).abs() < 1e-15);
        let v = hartogs2_kernel(2.0, zero, zero, zero, zero).unwrap().value;
        assert!((v.re - 3.0 / (PI * PI)).abs() < 1e-15);
        for p in [0.5, 1.5, 3.0, 7.25] {
            let v = hartogs2_kernel(p, zero, zero, zero, zero).unwrap().value;
            assert!((v.re - (p + 1.0) / (PI * PI)).abs() < 1e-14);
        }
    }

    #[test]
    fn hartogs2_p1_is_ball() {
        let (z, zeta, w, eta) = (c(0.3, 0.2), c(-0.1, 0.4), c(0.2, -0.3), c(0.5, 0.1));
        let v = hartogs2_kernel(1.0, z, zeta, w, eta).unwrap().value;
        let b = ball_kernel(2, &[z, zeta], &[w, eta]).unwrap().value;
        assert!(rel(v, b) < 1e-13);
    }

    #[test]
    fn hartogs2_matches_its_profile() {
        let p = 2.6;
        let k = hartogs_kernel(Arc::new(Hartogs2Profile { p }) as Arc<dyn CircularProfile>);
        let z = [c(0.3, 0.2), c(-0.1, 0.2)];
        let w = [c(0.2, -0.3), c(0.3, 0.1)];
        let a = k.eval(&z, &w).unwrap().value;
        let b = Hartogs2Kernel::new(p).unwrap().eval(&z, &w).unwrap().value;
        assert!(rel(a, b) < 1e-13);
    }

    #[test]
    fn pflate_reduces_to_hartogs2() {
        for p in [0.7, 1.0, 2.0, 3.3] {
            let z = [c(0.3, 0.2), c(-0.1, 0.2)];
            let w = [c(0.2, -0.3), c(0.3, 0.1)];
            let a = PflateKernel::new(1, 1, p).unwrap().eval(&z, &w).unwrap().value;
            let b = Hartogs2Kernel::new(p).unwrap().eval(&z, &w).unwrap().value;
            assert!(rel(a, b) < 1e-13, "p={p}");
        }
        let zero = [c(0.0, 0.0); 2];
        let v = PflateKernel::new(1, 1, 1.0).unwrap().eval(&zero, &zero).unwrap().value;
        assert!((v.re - 2.0 / (PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn pflate_jet2_matches_one_variable_route() {
        // ∂_u^{m−1} 1/(A − u) = (m−1)!/(A − u)^m
        let (n, m, p) = (2, 3, 1.6);
        let z = [c(0.2, 0.1), c(-0.1, 0.2), c(0.1, 0.1), c(0.05, -0.1), c(0.1, 0.0)];
        let w = [c(0.1, -0.2), c(0.2, 0.1), c(0.0, 0.1), c(0.1, 0.1), c(-0.1, 0.05)];
        let v = PflateKernel::new(n, m, p).unwrap().eval(&z, &w).unwrap().value;
        let t0 = pairing(&z[..n], &w[..n]);
        let u0 = pairing(&z[n..], &w[n..]);
        let t = Jet1::variable(t0, n + 1);
        let a = (-&t).add_scalar(c(1.0, 0.0)).rpow(p).unwrap();
        let h = a.add_scalar(-u0).rpow(-(m as f64)).unwrap().scale(c(2.0, 0.0));
        let expected = h.derivative(n + 1).unwrap() / (p * PI.powi((n + m) as i32));
        assert!(rel(v, expected) < 1e-13);
    }

    #[test]
    fn pflate_invalid_orders() {
        assert!(matches!(PflateKernel::new(0, 1, 1.0), Err(Error::InvalidOrder(_))));
        assert!(matches!(PflateKernel::new(1, 0, 1.0), Err(Error::InvalidOrder(_))));
    }

    #[test]
    fn pflate_origin_is_reciprocal_volume() {
        // {‖z‖² + |Z| < 1} in ℂ³ = diagonal exponents (1, 1, 2)
        let v = PflateKernel::new(2, 1, 2.0).unwrap().eval(&[c(0.0, 0.0); 3], &[c(0.0, 0.0); 3]).unwrap();
        let vol = DomainSpec::diagonal(&[1.0, 1.0, 2.0]).unwrap().volume().unwrap();
        assert!((v.value.re * vol - 1.0).abs() < 1e-13);
    }
}
