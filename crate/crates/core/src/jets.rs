//! Truncated complex Taylor arithmetic in one and two variables.
//!
//! A [`Jet1`] holds the Taylor coefficients `c_0..c_N` of a holomorphic
//! function of one variable `t` about a fixed center `t_0`. Arithmetic on
//! jets is exact truncated-series arithmetic, so the derivative of any
//! finite expression built from jets is available to rounding error via
//! [`Jet1::derivative`]. [`Jet2`] does the same on a rectangular
//! `(N_t + 1) x (N_u + 1)` coefficient grid in two variables `(t, u)`.
//!
//! The center of a jet is the expansion point of the *independent*
//! variable, not the value of the represented function; composing a
//! function with a jet therefore keeps the center unchanged.

use num_complex::Complex64;
use thiserror::Error;

type C64 = Complex64;

const TINY: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("division by a jet whose constant term has modulus {0:e}")]
    DivisionByZero(f64),
    #[error("jets expanded about different centers or to different orders")]
    CenterMismatch,
    #[error("real power of a jet whose constant term has modulus {0:e}")]
    BranchPoint(f64),
    #[error("derivative of order {requested} requested from a jet of order {stored}")]
    OrderExceeded { requested: usize, stored: usize },
}

/// Truncated Taylor expansion of a holomorphic function of one variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet1 {
    center: C64,
    coeffs: Vec<C64>,
}

impl Jet1 {
    pub fn from_coeffs(center: C64, coeffs: Vec<C64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least the constant term");
        Self { center, coeffs }
    }

    pub fn constant(center: C64, value: C64, order: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); order + 1];
        coeffs[0] = value;
        Self { center, coeffs }
    }

    /// The identity function `t` expanded about `center`.
    pub fn variable(center: C64, order: usize) -> Self {
        let mut jet = Self::constant(center, center, order);
        if order >= 1 {
            jet.coeffs[1] = C64::new(1.0, 0.0);
        }
        jet
    }

    pub fn center(&self) -> C64 {
        self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs[k]
    }

    pub fn value(&self) -> C64 {
        self.coeffs[0]
    }

    /// `k!·c_k`, the k-th derivative at the center.
    pub fn derivative(&self, k: usize) -> Result<C64, JetError> {
        if k > self.order() {
            return Err(JetError::OrderExceeded {
                requested: k,
                stored: self.order(),
            });
        }
        Ok(self.coeffs[k] * factorial(k))
    }

    /// Jet of the k-th derivative, of order `N - k`.
    pub fn differentiate(&self, k: usize) -> Result<Jet1, JetError> {
        if k > self.order() {
            return Err(JetError::OrderExceeded {
                requested: k,
                stored: self.order(),
            });
        }
        let coeffs = (k..=self.order())
            .map(|j| self.coeffs[j] * falling(j, k))
            .collect();
        Ok(Jet1::from_coeffs(self.center, coeffs))
    }

    /// Evaluates the stored polynomial at `center + h`.
    pub fn eval_offset(&self, h: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * h + c)
    }

    fn check(&self, other: &Jet1) -> Result<(), JetError> {
        if self.center != other.center || self.coeffs.len() != other.coeffs.len() {
            return Err(JetError::CenterMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Jet1) -> Result<Jet1, JetError> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Jet1::from_coeffs(self.center, coeffs))
    }

    pub fn sub(&self, other: &Jet1) -> Result<Jet1, JetError> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Jet1::from_coeffs(self.center, coeffs))
    }

    pub fn mul(&self, other: &Jet1) -> Result<Jet1, JetError> {
        self.check(other)?;
        let n = self.coeffs.len();
        let coeffs = (0..n)
            .map(|k| (0..=k).map(|i| self.coeffs[i] * other.coeffs[k - i]).sum())
            .collect();
        Ok(Jet1::from_coeffs(self.center, coeffs))
    }

    pub fn div(&self, other: &Jet1) -> Result<Jet1, JetError> {
        self.check(other)?;
        let b0 = other.coeffs[0];
        if b0.norm() < TINY {
            return Err(JetError::DivisionByZero(b0.norm()));
        }
        let n = self.coeffs.len();
        let mut q: Vec<C64> = Vec::with_capacity(n);
        for k in 0..n {
            let acc: C64 = (1..=k).map(|i| other.coeffs[i] * q[k - i]).sum();
            q.push((self.coeffs[k] - acc) / b0);
        }
        Ok(Jet1::from_coeffs(self.center, q))
    }

    pub fn recip(&self) -> Result<Jet1, JetError> {
        Jet1::constant(self.center, C64::new(1.0, 0.0), self.order()).div(self)
    }

    pub fn scale(&self, s: C64) -> Jet1 {
        Jet1::from_coeffs(self.center, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add_scalar(&self, s: C64) -> Jet1 {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    /// Principal-branch real power, by the recurrence
    /// `k·a_0·b_k = Σ_{j=1}^{k} (j(r+1) − k)·a_j·b_{k−j}`.
    pub fn rpow(&self, r: f64) -> Result<Jet1, JetError> {
        let a0 = self.coeffs[0];
        if a0.norm() < TINY {
            return Err(JetError::BranchPoint(a0.norm()));
        }
        let n = self.coeffs.len();
        let mut b: Vec<C64> = Vec::with_capacity(n);
        b.push(a0.powf(r));
        for k in 1..n {
            let kf = k as f64;
            let acc: C64 = (1..=k)
                .map(|j| self.coeffs[j] * b[k - j] * ((j as f64) * (r + 1.0) - kf))
                .sum();
            b.push(acc / (a0 * kf));
        }
        Ok(Jet1::from_coeffs(self.center, b))
    }

    /// Non-negative integer power by repeated squaring.
    pub fn powi(&self, e: u32) -> Jet1 {
        let mut result = Jet1::constant(self.center, C64::new(1.0, 0.0), self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same center");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same center");
            }
        }
        result
    }

    /// Composes the power series `Σ c_i h^i` with `self − value(self)`.
    ///
    /// `series` is the Taylor expansion of some outer function about
    /// `self.value()`; the result is the jet of the composition.
    pub fn compose_series(&self, series: &[C64]) -> Jet1 {
        let mut h = self.clone();
        h.coeffs[0] = C64::new(0.0, 0.0);
        let zero = Jet1::constant(self.center, C64::new(0.0, 0.0), self.order());
        series.iter().rev().fold(zero, |acc, &c| {
            acc.mul(&h).expect("same center").add_scalar(c)
        })
    }
}

impl std::ops::Neg for &Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        self.scale(C64::new(-1.0, 0.0))
    }
}

/// Truncated Taylor expansion in two variables on a rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    center: (C64, C64),
    orders: (usize, usize),
    coeffs: Vec<C64>,
}

impl Jet2 {
    pub fn constant(center: (C64, C64), value: C64, orders: (usize, usize)) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); (orders.0 + 1) * (orders.1 + 1)];
        coeffs[0] = value;
        Self { center, orders, coeffs }
    }

    pub fn variable_t(center: (C64, C64), orders: (usize, usize)) -> Self {
        let mut jet = Self::constant(center, center.0, orders);
        if orders.0 >= 1 {
            jet.set(1, 0, C64::new(1.0, 0.0));
        }
        jet
    }

    pub fn variable_u(center: (C64, C64), orders: (usize, usize)) -> Self {
        let mut jet = Self::constant(center, center.1, orders);
        if orders.1 >= 1 {
            jet.set(0, 1, C64::new(1.0, 0.0));
        }
        jet
    }

    /// Embeds a jet in `t` alone, truncated or zero-padded to `orders.0`.
    pub fn lift_t(jet: &Jet1, u_center: C64, orders: (usize, usize)) -> Self {
        let mut out = Self::constant((jet.center(), u_center), C64::new(0.0, 0.0), orders);
        for k in 0..=orders.0.min(jet.order()) {
            out.set(k, 0, jet.coeff(k));
        }
        out
    }

    pub fn center(&self) -> (C64, C64) {
        self.center
    }

    pub fn orders(&self) -> (usize, usize) {
        self.orders
    }

    fn idx(&self, k: usize, l: usize) -> usize {
        k * (self.orders.1 + 1) + l
    }

    pub fn coeff(&self, k: usize, l: usize) -> C64 {
        self.coeffs[self.idx(k, l)]
    }

    fn set(&mut self, k: usize, l: usize, v: C64) {
        let i = self.idx(k, l);
        self.coeffs[i] = v;
    }

    pub fn value(&self) -> C64 {
        self.coeffs[0]
    }

    /// `k!·l!·c_{k,l}`, the mixed partial derivative at the center.
    pub fn partial(&self, k: usize, l: usize) -> Result<C64, JetError> {
        if k > self.orders.0 || l > self.orders.1 {
            return Err(JetError::OrderExceeded {
                requested: k.max(l),
                stored: if k > self.orders.0 { self.orders.0 } else { self.orders.1 },
            });
        }
        Ok(self.coeff(k, l) * factorial(k) * factorial(l))
    }

    fn check(&self, other: &Jet2) -> Result<(), JetError> {
        if self.center != other.center || self.orders != other.orders {
            return Err(JetError::CenterMismatch);
        }
        Ok(())
    }

    fn map2(&self, other: &Jet2, f: impl Fn(C64, C64) -> C64) -> Result<Jet2, JetError> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect();
        Ok(Jet2 { center: self.center, orders: self.orders, coeffs })
    }

    pub fn add(&self, other: &Jet2) -> Result<Jet2, JetError> {
        self.map2(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Jet2) -> Result<Jet2, JetError> {
        self.map2(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Jet2) -> Result<Jet2, JetError> {
        self.check(other)?;
        let (nt, nu) = self.orders;
        let mut out = Jet2::constant(self.center, C64::new(0.0, 0.0), self.orders);
        for k in 0..=nt {
            for l in 0..=nu {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..=k {
                    for j in 0..=l {
                        acc += self.coeff(i, j) * other.coeff(k - i, l - j);
                    }
                }
                out.set(k, l, acc);
            }
        }
        Ok(out)
    }

    pub fn div(&self, other: &Jet2) -> Result<Jet2, JetError> {
        self.check(other)?;
        let b0 = other.coeffs[0];
        if b0.norm() < TINY {
            return Err(JetError::DivisionByZero(b0.norm()));
        }
        let (nt, nu) = self.orders;
        let mut q = Jet2::constant(self.center, C64::new(0.0, 0.0), self.orders);
        for k in 0..=nt {
            for l in 0..=nu {
                let mut acc = self.coeff(k, l);
                for i in 0..=k {
                    for j in 0..=l {
                        if i == 0 && j == 0 {
                            continue;
                        }
                        acc -= other.coeff(i, j) * q.coeff(k - i, l - j);
                    }
                }
                q.set(k, l, acc / b0);
            }
        }
        Ok(q)
    }

    pub fn scale(&self, s: C64) -> Jet2 {
        Jet2 {
            center: self.center,
            orders: self.orders,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: C64) -> Jet2 {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    /// Principal-branch real power via the binomial series of
    /// `a_0^r (1 + h)^r`, where `h = a/a_0 − 1` is nilpotent on the grid.
    pub fn rpow(&self, r: f64) -> Result<Jet2, JetError> {
        let a0 = self.coeffs[0];
        if a0.norm() < TINY {
            return Err(JetError::BranchPoint(a0.norm()));
        }
        let mut h = self.scale(a0.inv());
        h.coeffs[0] = C64::new(0.0, 0.0);
        let terms = self.orders.0 + self.orders.1;
        let one = C64::new(1.0, 0.0);
        let mut sum = Jet2::constant(self.center, one, self.orders);
        let mut power = sum.clone();
        let mut binom = 1.0;
        for k in 1..=terms {
            binom *= (r - (k as f64 - 1.0)) / k as f64;
            power = power.mul(&h)?;
            sum = sum.add(&power.scale(C64::new(binom, 0.0)))?;
        }
        Ok(sum.scale(a0.powf(r)))
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

fn falling(j: usize, k: usize) -> f64 {
    ((j - k + 1)..=j).fold(1.0, |acc, i| acc * i as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn jet(cs: &[f64]) -> Jet1 {
        Jet1::from_coeffs(c(0.0), cs.iter().map(|&x| c(x)).collect())
    }

    fn close(a: &[C64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, &y)| (x - c(y)).norm() <= tol)
    }

    #[test]
    fn identity_divisor() {
        let q = jet(&[1.0, 1.0, 1.0]).div(&jet(&[1.0, 0.0, 0.0])).unwrap();
        assert!(close(q.coeffs(), &[1.0, 1.0, 1.0], 0.0));
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let p = jet(&[1.0, 1.0, 1.0, 1.0]).mul(&jet(&[1.0, -1.0, 0.0, 0.0])).unwrap();
        assert!(close(p.coeffs(), &[1.0, 0.0, 0.0, 0.0], 0.0));
    }

    #[test]
    fn long_division_matches_geometric_series() {
        let q = jet(&[1.0, 0.0, 0.0]).div(&jet(&[1.0, -1.0, 0.0])).unwrap();
        assert!(close(q.coeffs(), &[1.0, 1.0, 1.0], 0.0));
    }

    #[test]
    fn division_by_zero_constant_term() {
        let err = jet(&[1.0, 0.0]).div(&jet(&[0.0, 1.0])).unwrap_err();
        assert!(matches!(err, JetError::DivisionByZero(_)));
    }

    #[test]
    fn center_mismatch() {
        let a = Jet1::variable(c(0.0), 2);
        let b = Jet1::variable(c(0.1), 2);
        assert_eq!(a.add(&b).unwrap_err(), JetError::CenterMismatch);
        let d = Jet1::variable(c(0.0), 3);
        assert_eq!(a.mul(&d).unwrap_err(), JetError::CenterMismatch);
    }

    #[test]
    fn rpow_square() {
        let r = jet(&[1.0, -1.0, 0.0, 0.0]).rpow(2.0).unwrap();
        assert!(close(r.coeffs(), &[1.0, -2.0, 1.0, 0.0], 1e-15));
    }

    #[test]
    fn rpow_square_root_matches_binomial_series() {
        // binomial coefficients C(1/2, k)(-1)^k computed independently
        let n = 8;
        let mut expected = vec![1.0];
        for k in 1..n {
            let prev: f64 = expected[k - 1];
            expected.push(-prev * (0.5 - (k as f64 - 1.0)) / k as f64);
        }
        let mut input = vec![0.0; n];
        input[0] = 1.0;
        input[1] = -1.0;
        let r = jet(&input).rpow(0.5).unwrap();
        assert!(close(r.coeffs(), &expected, 1e-15));
        assert!((expected[1] + 0.5).abs() < 1e-15 && (expected[2] + 0.125).abs() < 1e-15);
    }

    #[test]
    fn rpow_of_one_is_one() {
        for r in [-3.5, 0.0, 0.25, 7.0] {
            let out = jet(&[1.0, 0.0, 0.0, 0.0]).rpow(r).unwrap();
            assert!(close(out.coeffs(), &[1.0, 0.0, 0.0, 0.0], 0.0));
        }
    }

    #[test]
    fn rpow_branch_point() {
        let err = jet(&[0.0, 1.0]).rpow(0.5).unwrap_err();
        assert!(matches!(err, JetError::BranchPoint(_)));
    }

    #[test]
    fn derivative_of_geometric_series() {
        let a = jet(&[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(a.derivative(3).unwrap(), c(6.0));
        assert_eq!(
            a.derivative(4).unwrap_err(),
            JetError::OrderExceeded { requested: 4, stored: 3 }
        );
    }

    #[test]
    fn derivative_of_disc_profile() {
        let t = Jet1::variable(c(0.0), 1);
        let one_minus = (-&t).add_scalar(c(1.0));
        let f = one_minus.rpow(-2.0).unwrap();
        assert!((f.derivative(1).unwrap() - c(2.0)).norm() < 1e-15);
    }

    #[test]
    fn jet2_second_t_derivative() {
        // 1/((1-t)^2 - u) = 1 + 2t + u + 3t^2 + ...
        let center = (c(0.0), c(0.0));
        let orders = (2, 1);
        let t = Jet2::variable_t(center, orders);
        let u = Jet2::variable_u(center, orders);
        let base = t.scale(c(-1.0)).add_scalar(c(1.0)).rpow(2.0).unwrap();
        let f = Jet2::constant(center, c(1.0), orders).div(&base.sub(&u).unwrap()).unwrap();
        assert!((f.partial(2, 0).unwrap() - c(6.0)).norm() < 1e-14);
        assert!((f.partial(0, 1).unwrap() - c(1.0)).norm() < 1e-14);
        assert!(f.partial(3, 0).is_err());
    }

    #[test]
    fn compose_series_shifts_expansion() {
        // exp-like series composed with t at center 0.2: just re-expansion of a polynomial
        let t = Jet1::variable(c(0.2), 3);
        // g(h) = 1 + 2h + 3h^2 around value 0.2, i.e. g(t) = 1 + 2(t-0.2) + 3(t-0.2)^2
        let g = t.compose_series(&[c(1.0), c(2.0), c(3.0)]);
        assert!(close(g.coeffs(), &[1.0, 2.0, 3.0, 0.0], 1e-15));
    }

    #[test]
    fn differentiate_shifts_coefficients() {
        let a = jet(&[1.0, 1.0, 1.0, 1.0]);
        let d = a.differentiate(2).unwrap();
        assert!(close(d.coeffs(), &[2.0, 6.0], 0.0));
    }
}
