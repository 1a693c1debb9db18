//! Generalized complex ellipsoids `Σ_j ‖z_j‖^{2/p_j} < 1`.

pub mod gamma;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
pub use gamma::{gamma, ln_gamma};

/// One vector block `z_j ∈ ℂ^{m_j}` entering the defining function as `‖z_j‖^{2/p_j}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub dim: usize,
    pub p: f64,
}

impl Block {
    pub fn new(dim: usize, p: f64) -> Self {
        Self { dim, p }
    }

    /// Whether `p` is a positive integer, as folding requires.
    pub fn has_integer_exponent(&self) -> bool {
        self.p.fract() == 0.0 && self.p >= 1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub blocks: Vec<Block>,
}

/// Exponents of a monomial `z^α`, one per complex coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl DomainSpec {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        let spec = Self { blocks };
        spec.validate()?;
        Ok(spec)
    }

    /// One-dimensional blocks with the given exponents.
    pub fn diagonal(ps: &[f64]) -> Result<Self> {
        Self::new(ps.iter().map(|&p| Block::new(1, p)).collect())
    }

    fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::Value {
                path: "blocks".into(),
                message: "at least one block is required".into(),
            });
        }
        for (i, b) in self.blocks.iter().enumerate() {
            if b.dim == 0 {
                return Err(Error::Value {
                    path: format!("blocks[{i}].dim"),
                    message: "dim must be a positive integer".into(),
                });
            }
            if !(b.p.is_finite() && b.p > 0.0) {
                return Err(Error::Value {
                    path: format!("blocks[{i}].p"),
                    message: format!("p must be a positive real number, got {}", b.p),
                });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }

    pub fn is_diagonal(&self) -> bool {
        self.blocks.iter().all(|b| b.dim == 1)
    }

    /// Exponents of a diagonal domain, one per coordinate.
    pub fn exponents(&self) -> Result<Vec<f64>> {
        if !self.is_diagonal() {
            return Err(Error::UnsupportedDomain(
                "monomial norms are only available for one-dimensional blocks".into(),
            ));
        }
        Ok(self.blocks.iter().map(|b| b.p).collect())
    }

    /// The same domain with every `p = 1` vector block split into scalar
    /// blocks, since `‖z‖² = Σ|z_k|²`.
    pub fn split_euclidean_blocks(&self) -> DomainSpec {
        let blocks = self
            .blocks
            .iter()
            .flat_map(|b| {
                if b.p == 1.0 {
                    vec![Block::new(1, 1.0); b.dim]
                } else {
                    vec![*b]
                }
            })
            .collect();
        DomainSpec { blocks }
    }

    /// The defining function `φ(z) = Σ_j ‖z_j‖^{2/p_j}`.
    pub fn phi(&self, z: &[Complex64]) -> Result<f64> {
        self.check_len(z.len())?;
        let mut offset = 0;
        let mut total = 0.0;
        for b in &self.blocks {
            let norm_sq: f64 = z[offset..offset + b.dim].iter().map(|c| c.norm_sqr()).sum();
            total += norm_sq.powf(1.0 / b.p);
            offset += b.dim;
        }
        Ok(total)
    }

    pub fn contains(&self, z: &[Complex64], margin: f64) -> Result<bool> {
        Ok(self.phi(z)? < 1.0 - margin)
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: len });
        }
        Ok(())
    }

    /// `ln ∫_D |z^α|² dV` for a diagonal domain.
    ///
    /// In polar coordinates with `s_j = |z_j|^{2/p_j}` the integral becomes a
    /// Dirichlet integral over the simplex, giving
    /// `πⁿ ∏ p_j ∏ Γ(p_j(α_j+1)) / Γ(1 + Σ p_j(α_j+1))`.
    pub fn ln_monomial_norm_sq(&self, alpha: &MultiIndex) -> Result<f64> {
        let ps = self.exponents()?;
        self.check_len(alpha.0.len())?;
        let mut ln = ps.len() as f64 * PI.ln();
        let mut shape_sum = 0.0;
        for (&p, &a) in ps.iter().zip(&alpha.0) {
            let shape = p * (a as f64 + 1.0);
            ln += p.ln() + ln_gamma(shape);
            shape_sum += shape;
        }
        Ok(ln - ln_gamma(1.0 + shape_sum))
    }

    pub fn monomial_norm_sq(&self, alpha: &MultiIndex) -> Result<f64> {
        self.ln_monomial_norm_sq(alpha).map(f64::exp)
    }

    /// Euclidean vector blocks are split into scalar ones first; other
    /// vector blocks are unsupported.
    pub fn volume(&self) -> Result<f64> {
        let ps = self.split_euclidean_blocks().exponents()?;
        // direct product form keeps integer cases exact
        let num: f64 = ps.iter().map(|&p| gamma(p + 1.0)).product();
        let total: f64 = ps.iter().sum();
        Ok(PI.powi(ps.len() as i32) * num / gamma(total + 1.0))
    }
}

/// Parses `{"blocks":[{"dim":int,"p":number},...]}`.
pub fn parse_domain_spec(text: &str) -> Result<DomainSpec> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Schema {
        path: "$".into(),
        message: e.to_string(),
    })?;
    let schema = |path: String, message: &str| Error::Schema { path, message: message.into() };
    let blocks = doc
        .get("blocks")
        .ok_or_else(|| schema("blocks".into(), "missing field"))?
        .as_array()
        .ok_or_else(|| schema("blocks".into(), "expected an array"))?;
    let mut parsed = Vec::with_capacity(blocks.len());
    for (i, b) in blocks.iter().enumerate() {
        let obj = b
            .as_object()
            .ok_or_else(|| schema(format!("blocks[{i}]"), "expected an object"))?;
        let dim = obj
            .get("dim")
            .ok_or_else(|| schema(format!("blocks[{i}].dim"), "missing field"))?
            .as_i64()
            .ok_or_else(|| schema(format!("blocks[{i}].dim"), "expected an integer"))?;
        let p = obj
            .get("p")
            .ok_or_else(|| schema(format!("blocks[{i}].p"), "missing field"))?
            .as_f64()
            .ok_or_else(|| schema(format!("blocks[{i}].p"), "expected a number"))?;
        if dim <= 0 {
            return Err(Error::Value {
                path: format!("blocks[{i}].dim"),
                message: format!("dim must be positive, got {dim}"),
            });
        }
        parsed.push(Block::new(dim as usize, p));
    }
    DomainSpec::new(parsed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn parses_simplex_norm_domain() {
        let d = parse_domain_spec(r#"{"blocks":[{"dim":1,"p":2},{"dim":1,"p":2},{"dim":1,"p":2}]}"#)
            .unwrap();
        assert_eq!(d, DomainSpec::diagonal(&[2.0, 2.0, 2.0]).unwrap());
        assert_eq!(d.dim(), 3);
    }

    #[test]
    fn parses_ball() {
        let d = parse_domain_spec(r#"{"blocks":[{"dim":3,"p":1}]}"#).unwrap();
        assert_eq!(d.blocks, vec![Block::new(3, 1.0)]);
        assert!(d.contains(&[c(0.5, 0.0), c(0.0, 0.5), c(0.5, 0.0)], 0.0).unwrap());
        assert!(!d.contains(&[c(0.6, 0.0), c(0.0, 0.6), c(0.6, 0.0)], 0.0).unwrap());
    }

    #[test]
    fn parse_errors_carry_paths() {
        let err = parse_domain_spec(r#"{"blocks":[{"dim":1,"p":2},{"dim":1}]}"#).unwrap_err();
        assert_eq!(err, Error::Schema { path: "blocks[1].p".into(), message: "missing field".into() });
        let err = parse_domain_spec(r#"{"blocks":[{"dim":1,"p":-2}]}"#).unwrap_err();
        assert!(matches!(err, Error::Value { ref path, .. } if path == "blocks[0].p"));
        let err = parse_domain_spec(r#"{"blocks":[{"dim":0,"p":2}]}"#).unwrap_err();
        assert!(matches!(err, Error::Value { ref path, .. } if path == "blocks[0].dim"));
        let err = parse_domain_spec(r#"{"blocks":[{"dim":1.5,"p":2}]}"#).unwrap_err();
        assert!(matches!(err, Error::Schema { .. }));
        assert!(matches!(parse_domain_spec("[1,2]").unwrap_err(), Error::Schema { .. }));
        assert!(matches!(parse_domain_spec("{").unwrap_err(), Error::Schema { .. }));
    }

    #[test]
    fn membership() {
        let simplex = DomainSpec::diagonal(&[2.0, 2.0, 2.0]).unwrap();
        let zero = [c(0.0, 0.0); 3];
        assert!(simplex.contains(&zero, 0.0).unwrap());
        assert!(!simplex.contains(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], 0.0).unwrap());
        let folded = DomainSpec::diagonal(&[2.0, 4.0]).unwrap();
        assert!(folded.contains(&[c(0.5, 0.0), c(0.2, 0.0)], 0.0).unwrap());
        assert!(!folded.contains(&[c(0.5, 0.0), c(0.2, 0.0)], 0.06).unwrap());
        assert_eq!(
            simplex.contains(&zero[..2], 0.0).unwrap_err(),
            Error::DimensionMismatch { expected: 3, actual: 2 }
        );
    }

    #[test]
    fn volumes() {
        let pi = PI;
        assert!(rel(DomainSpec::diagonal(&[2.0, 2.0]).unwrap().volume().unwrap(), pi * pi / 6.0) < 1e-15);
        assert!(rel(DomainSpec::diagonal(&[1.0]).unwrap().volume().unwrap(), pi) < 1e-15);
        assert!(rel(DomainSpec::diagonal(&[1.0, 2.0]).unwrap().volume().unwrap(), pi * pi / 3.0) < 1e-15);
        assert!(
            rel(DomainSpec::diagonal(&[2.0, 2.0, 2.0]).unwrap().volume().unwrap(), pi.powi(3) / 90.0)
                < 1e-15
        );
        let ball = DomainSpec::new(vec![Block::new(2, 1.0)]).unwrap();
        assert!(rel(ball.volume().unwrap(), pi * pi / 2.0) < 1e-15);
        let vector = DomainSpec::new(vec![Block::new(2, 2.0)]).unwrap();
        assert!(matches!(vector.volume(), Err(Error::UnsupportedDomain(_))));
    }

    #[test]
    fn monomial_norms() {
        let disc = DomainSpec::diagonal(&[1.0]).unwrap();
        for k in 0..6 {
            let n = disc.monomial_norm_sq(&MultiIndex(vec![k])).unwrap();
            assert!(rel(n, PI / (k as f64 + 1.0)) < 1e-13);
        }
        let (p, q) = (1.3, 0.7);
        let d = DomainSpec::diagonal(&[p, q]).unwrap();
        let expected = PI * PI * gamma(p + 1.0) * gamma(q + 1.0) / gamma(p + q + 1.0);
        assert!(rel(d.monomial_norm_sq(&MultiIndex(vec![0, 0])).unwrap(), expected) < 1e-13);
        let simplex = DomainSpec::diagonal(&[2.0, 2.0, 2.0]).unwrap();
        let v = simplex.monomial_norm_sq(&MultiIndex(vec![0, 0, 0])).unwrap();
        assert!(rel(v, PI.powi(3) / 90.0) < 1e-13);
    }

    #[test]
    fn euclidean_blocks_split() {
        let d = DomainSpec::new(vec![Block::new(2, 1.0), Block::new(1, 3.0)]).unwrap();
        assert_eq!(d.split_euclidean_blocks(), DomainSpec::diagonal(&[1.0, 1.0, 3.0]).unwrap());
    }
}
