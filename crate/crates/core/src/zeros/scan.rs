//! Grid scans for zeros and the positivity certificate for `K₂`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{count_zeros_winding, newton_refine, one, sort_and_merge, Method, SliceFunction, Zero, ZeroReport};
use crate::error::{Error, Result};
use crate::jets::Jet1;
use crate::kernels::{k2_closed_form, k2_numerator};

type C64 = Complex64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanOutcome {
    pub report: ZeroReport,
    /// Smallest `|f|` over the grid.
    pub min_modulus: f64,
    pub samples: usize,
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < 8 {
        return Err(Error::Value {
            path: "resolution".into(),
            message: format!("grid resolution must be at least 8, got {resolution}"),
        });
    }
    Ok(())
}

/// Scans `|t| ≤ radius` on a polar grid with `resolution` rings of
/// `4·resolution` points, starts Newton from every local minimum of `|f|`,
/// and keeps the roots with `|t| < radius` and `|f| < tol`.
pub fn grid_zero_scan(f: &SliceFunction, radius: f64, resolution: usize, tol: f64) -> Result<ScanOutcome> {
    check_resolution(resolution)?;
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Value { path: "radius".into(), message: format!("need 0 < radius < 1, got {radius}") });
    }
    let rings = resolution;
    let spokes = 4 * resolution;
    let point = |i: usize, j: usize| {
        let r = radius * (i + 1) as f64 / rings as f64;
        let shift = if i.is_multiple_of(2) { 0.0 } else { 0.5 };
        C64::from_polar(r, 2.0 * PI * (j as f64 + shift) / spokes as f64)
    };
    let moduli: Vec<f64> = (0..rings * spokes)
        .into_par_iter()
        .map(|idx| f.eval(point(idx / spokes, idx % spokes)).map(|v| v.norm()))
        .collect::<Result<_>>()?;
    let at = |i: usize, j: usize| moduli[i * spokes + j];

    let mut seeds = Vec::new();
    for i in 0..rings {
        for j in 0..spokes {
            let v = at(i, j);
            let mut is_min = true;
            for di in [-1i64, 0, 1] {
                let ii = i as i64 + di;
                if ii < 0 || ii >= rings as i64 {
                    continue;
                }
                for dj in [-1i64, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let jj = (j as i64 + dj).rem_euclid(spokes as i64) as usize;
                    if at(ii as usize, jj) < v {
                        is_min = false;
                    }
                }
            }
            if is_min {
                seeds.push(point(i, j));
            }
        }
    }
    seeds.push(C64::new(0.0, 0.0));

    let found: Vec<Option<Zero>> = seeds
        .par_iter()
        .map(|&seed| {
            let root = newton_refine(f, seed, tol).ok()?;
            (root.norm() < radius).then(|| Zero::new(root, f.eval(root).map(|v| v.norm()).unwrap_or(f64::NAN)))
        })
        .collect();
    let zeros = sort_and_merge(found.into_iter().flatten().collect(), 1e-8);
    let min_modulus = moduli.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ScanOutcome {
        report: ZeroReport {
            zeros,
            count_by_winding: count_zeros_winding(f, radius)?,
            search_radius: radius,
            method: Method::Newton,
        },
        min_modulus,
        samples: moduli.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ZeroFree,
    Zeroed,
    /// The grid scan and the winding count disagree.
    Unknown,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ZeroFree => "zero-free",
            Self::Zeroed => "zeroed",
            Self::Unknown => "unknown",
        }
    }
}

/// Zero-freeness needs both a zero winding count and no grid zeros;
/// zeroed needs the two counts to agree.
pub fn classify_slice(f: &SliceFunction, radius: f64, resolution: usize, tol: f64) -> Result<Verdict> {
    Ok(grid_zero_scan(f, radius, resolution, tol)?.verdict())
}

impl ScanOutcome {
    /// See [`classify_slice`].
    pub fn verdict(&self) -> Verdict {
        match (self.report.zeros.len(), self.report.count_by_winding) {
            (0, 0) => Verdict::ZeroFree,
            (a, b) if a == b => Verdict::Zeroed,
            _ => Verdict::Unknown,
        }
    }
}

fn k2_jet(x: &Jet1, y: &Jet1) -> Result<Jet1> {
    let s = (-&x.add(y)?).add_scalar(one());
    let d = x.sub(y)?;
    let num = s
        .mul(&(-&d.mul(&d)?).add_scalar(one()))?
        .scale(C64::new(3.0, 0.0))
        .add(&x.mul(y)?.scale(C64::new(8.0, 0.0)))?;
    let den = s.mul(&s)?.sub(&x.mul(y)?.scale(C64::new(4.0, 0.0)))?;
    let den3 = den.mul(&den)?.mul(&den)?;
    Ok(num.div(&den3)?.scale(C64::new(2.0 / (PI * PI), 0.0)))
}

/// `K₂(·, y)` with `y` fixed, in domain pairings.
pub fn k2_slice_x(y: C64) -> SliceFunction {
    SliceFunction::new(format!("K2(X, {y})"), move |x| {
        k2_jet(x, &Jet1::constant(x.center(), y, x.order()))
    })
}

/// `K₂(x, ·)` with `x` fixed, in domain pairings.
pub fn k2_slice_y(x: C64) -> SliceFunction {
    SliceFunction::new(format!("K2({x}, Y)"), move |y| {
        k2_jet(&Jet1::constant(y.center(), x, y.order()), y)
    })
}

/// Scans `K₂(X, Y)` over `√|X| + √|Y| ≤ rho` on a polar grid: moduli
/// `(ρ i/res)²`, `(ρ j/res)²` with `i + j ≤ res`, and `res` angles each.
/// Cells with `|K₂| < tol` are refined by Newton in `X`.
pub fn k2_grid_scan(resolution: usize, rho: f64, tol: f64) -> Result<ScanOutcome> {
    check_resolution(resolution)?;
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::Value { path: "rho".into(), message: format!("need 0 < rho < 1, got {rho}") });
    }
    let res = resolution;
    let mut radii = Vec::new();
    for i in 0..=res {
        for j in 0..=(res - i) {
            let a = rho * i as f64 / res as f64;
            let b = rho * j as f64 / res as f64;
            radii.push((a * a, b * b));
        }
    }
    let angle = |k: usize| 2.0 * PI * k as f64 / res as f64;
    let cells: Vec<(f64, Option<(C64, C64)>)> = radii
        .par_iter()
        .map(|&(rx, ry)| {
            let mut best = (f64::INFINITY, None);
            for kx in 0..res {
                for ky in 0..res {
                    let x = C64::from_polar(rx, angle(kx));
                    let y = C64::from_polar(ry, angle(ky));
                    let v = k2_closed_form(x, y)?.value.norm();
                    if v < best.0 {
                        best.0 = v;
                    }
                    if v < tol && best.1.is_none() {
                        best.1 = Some((x, y));
                    }
                }
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;
    let min_modulus = cells.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let zeros: Vec<Zero> = cells
        .iter()
        .filter_map(|c| c.1)
        .filter_map(|(x, y)| {
            let root = newton_refine(&k2_slice_x(y), x, tol).ok()?;
            let inside = root.norm().sqrt() + y.norm().sqrt() < 1.0;
            inside.then(|| Zero::new(root, k2_closed_form(root, y).map(|v| v.value.norm()).unwrap_or(f64::NAN)))
        })
        .collect();
    let axis = SliceFunction::k2_axis();
    Ok(ScanOutcome {
        report: ZeroReport {
            zeros: sort_and_merge(zeros, 1e-8),
            count_by_winding: count_zeros_winding(&axis, super::locus::FAMILY_RADIUS)?,
            search_radius: rho,
            method: Method::Newton,
        },
        min_modulus,
        samples: radii.len() * res * res,
    })
}

/// The chain of inequalities showing `K₂(x, y) ≠ 0`, with `s = |x| + |y|`:
///
/// ```text
/// |N| ≥ 3|1−x−y||1−(x−y)²| − 8|x||y|
///     ≥ 3(1−s)(1−|x−y|²) − 2(1−s)²          since 4|x||y| ≤ (1−s)²
///     ≥ 3(1−s)²(1+|x−y|) − 2(1−s)²          since |x−y| ≤ s
///     ≥ (1−s)² > 0
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositivityCertificate {
    pub numerator: f64,
    pub triangle: f64,
    pub first: f64,
    pub second: f64,
    pub floor: f64,
    /// `4|x||y|` and `(1−s)²`.
    pub product: f64,
    pub gap: f64,
}

impl PositivityCertificate {
    pub fn holds(&self) -> bool {
        let ge = |a: f64, b: f64| a >= b - 1e-12 * a.abs().max(b.abs()).max(1.0);
        self.product <= self.gap * (1.0 + 1e-12)
            && ge(self.numerator, self.triangle)
            && ge(self.triangle, self.first)
            && ge(self.first, self.second)
            && ge(self.second, self.floor)
            && self.floor > 0.0
    }

    /// Whether every link of the chain is a strict inequality.
    pub fn strict(&self) -> bool {
        self.holds() && self.product < self.gap && self.triangle > self.first && self.second > self.floor
    }
}

/// Re-derives the positivity chain at `(x, y)`. Requires
/// `√|x| + √|y| ≤ 1` and `|x| + |y| < 1`; the latter fails exactly at the
/// boundary points where the bound degenerates, such as `(−1, 0)`.
pub fn k2_interior_positivity(x: C64, y: C64) -> Result<PositivityCertificate> {
    let (ax, ay) = (x.norm(), y.norm());
    let reach = ax.sqrt() + ay.sqrt();
    let s = ax + ay;
    if reach > 1.0 + 1e-12 || !(s < 1.0) {
        return Err(Error::PreconditionViolated(format!(
            "positivity chain needs √|x| + √|y| <= 1 and |x| + |y| < 1, got {reach} and {s}"
        )));
    }
    let g = 1.0 - s;
    let d = (x - y).norm();
    let cert = PositivityCertificate {
        numerator: k2_numerator(x, y).norm(),
        triangle: 3.0 * (one() - x - y).norm() * (one() - (x - y) * (x - y)).norm() - 8.0 * ax * ay,
        first: 3.0 * g * (1.0 - d * d) - 2.0 * g * g,
        second: 3.0 * g * g * (1.0 + d) - 2.0 * g * g,
        floor: g * g,
        product: 4.0 * ax * ay,
        gap: g * g,
    };
    if !cert.holds() {
        return Err(Error::PreconditionViolated(format!("positivity chain broke at x={x}, y={y}: {cert:?}")));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::SliceFamily;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn certificate_examples() {
        let cert = k2_interior_positivity(c(0.2, 0.0), c(0.1, 0.0)).unwrap();
        assert!(cert.holds() && cert.strict());
        for k in 0..16 {
            let th = 2.0 * PI * k as f64 / 16.0;
            let cert = k2_interior_positivity(C64::from_polar(0.25, th), C64::from_polar(0.25, -th)).unwrap();
            assert!(cert.holds());
        }
        assert!(matches!(k2_interior_positivity(c(-1.0, 0.0), c(0.0, 0.0)), Err(Error::PreconditionViolated(_))));
        assert!(k2_interior_positivity(c(0.5, 0.0), c(0.5, 0.0)).is_err());
    }

    #[test]
    fn k2_slices_match_closed_form() {
        let y = c(0.1, -0.05);
        let f = k2_slice_x(y);
        let x = c(-0.2, 0.3);
        let v = f.eval(x).unwrap();
        let w = k2_closed_form(x, y).unwrap().value;
        assert!((v - w).norm() < 1e-13 * w.norm());
        let u = k2_slice_y(x).eval(y).unwrap();
        assert!((u - w).norm() < 1e-13 * w.norm());
    }

    #[test]
    fn k2_scan_is_zero_free() {
        let out = k2_grid_scan(24, 0.9, 1e-8).unwrap();
        assert!(out.report.zeros.is_empty());
        assert_eq!(out.report.count_by_winding, 0);
        assert!(out.min_modulus > 0.01, "{}", out.min_modulus);
    }

    #[test]
    fn scan_finds_k4_axis_zeros() {
        let f = SliceFamily::Axis1 { p: 4.0 }.search_function().unwrap();
        let out = grid_zero_scan(&f, 0.999, 50, 1e-10).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert_eq!(out.report.zeros.len(), 2);
        assert!((out.report.zeros[0].location() - c(0.0, -s)).norm() < 1e-12);
        assert!((out.report.zeros[1].location() - c(0.0, s)).norm() < 1e-12);
        assert_eq!(out.report.count_by_winding, 2);
    }

    #[test]
    fn scan_mixed_three_is_empty() {
        let f = SliceFamily::Mixed { n: 3 }.search_function().unwrap();
        let out = grid_zero_scan(&f, 0.999, 50, 1e-10).unwrap();
        assert!(out.report.zeros.is_empty());
        assert_eq!(classify_slice(&f, 0.999, 50, 1e-10).unwrap(), Verdict::ZeroFree);
        let g = SliceFamily::Mixed { n: 4 }.search_function().unwrap();
        assert_eq!(classify_slice(&g, 0.999, 50, 1e-10).unwrap(), Verdict::Zeroed);
    }

    #[test]
    fn scan_is_deterministic() {
        let f = SliceFamily::Axis1 { p: 10.0 }.search_function().unwrap();
        let a = grid_zero_scan(&f, 0.999, 16, 1e-10).unwrap();
        let b = grid_zero_scan(&f, 0.999, 16, 1e-10).unwrap();
        assert_eq!(a, b);
        assert!(grid_zero_scan(&f, 0.999, 4, 1e-10).is_err());
    }
}
