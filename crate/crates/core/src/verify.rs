//! End-to-end checks of the kernel formulas against each other and against
//! the independent oracles. Each check reports its worst observed error.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::domains::{Block, DomainSpec};
use crate::error::{Error, Result};
use crate::jets::{Jet1, Jet2};
use crate::kernels::profile::hartogs_kernel;
use crate::kernels::slice::slice_kernel_continued;
use crate::kernels::{
    deflation_constant, deflation_pair, fold, inflate, k2_closed_form, kernel_for_domain, pairing,
    slice_axis_value, slice_kernel_kp, slice_kernel_kp_folded, CircularProfile, DiscProfile, K2Kernel, KernelEvaluator,
};
use crate::oracle::{mc_volume, reproducing_check, series_kernel, Polynomial, SeriesConfig};
use crate::zeros::{
    axis1_zero_locus, classify_slice, count_zeros_winding, family_zero_report, k2_grid_scan, k2_interior_positivity,
    k2_slice_x, k2_slice_y, SliceFamily, Verdict, CERT_TOL, FAMILY_RADIUS,
};

type C64 = Complex64;

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {:>2} {:<22} {}", self.id, self.name, self.detail)
    }
}

/// Named groups of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Deflation,
    Inflation,
    FoldDisc,
    Slice,
    AxisLimit,
    Zeros2d,
    C3Zero,
    K2,
    Mixed,
    OriginValues,
    Reproducing,
    Jets,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 13] = [
        "deflation",
        "inflation",
        "fold-disc",
        "slice",
        "axis-limit",
        "zeros-2d",
        "c3-zero",
        "k2",
        "mixed",
        "origin-values",
        "reproducing",
        "jets",
        "all",
    ];

    pub fn parse(name: &str) -> Option<Self> {
        let all = [
            Self::Deflation,
            Self::Inflation,
            Self::FoldDisc,
            Self::Slice,
            Self::AxisLimit,
            Self::Zeros2d,
            Self::C3Zero,
            Self::K2,
            Self::Mixed,
            Self::OriginValues,
            Self::Reproducing,
            Self::Jets,
            Self::All,
        ];
        Self::NAMES.iter().position(|&n| n == name).map(|i| all[i])
    }

    fn ids(self) -> Vec<usize> {
        match self {
            Self::All => (1..=12).collect(),
            other => vec![other as usize + 1],
        }
    }
}

/// Runs the checks of a suite in order.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<CheckResult> {
    suite.ids().into_iter().map(|id| run_check(id, seed)).collect()
}

pub fn run_check(id: usize, seed: u64) -> CheckResult {
    let (name, outcome) = match id {
        1 => ("deflation", check_deflation(seed)),
        2 => ("inflation", check_inflation(seed)),
        3 => ("fold-disc", check_fold_disc(seed)),
        4 => ("slice-vs-k2", check_slice_k2()),
        5 => ("axis-limit", check_axis_limit()),
        6 => ("zeros-2d", check_zeros_2d()),
        7 => ("c3-zero", check_c3_zero()),
        8 => ("k2-zero-free", check_k2(seed)),
        9 => ("mixed-family", check_mixed()),
        10 => ("origin-values", check_origin_values(seed)),
        11 => ("reproducing", check_reproducing(seed)),
        12 => ("jets", check_jets(seed)),
        _ => ("unknown", Err(Error::Value { path: "id".into(), message: format!("no check {id}") })),
    };
    match outcome {
        Ok((passed, detail)) => CheckResult { id, name, passed, detail },
        Err(e) => CheckResult { id, name, passed: false, detail: format!("error: {e}") },
    }
}

type Outcome = Result<(bool, String)>;

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn random_disc(r: &mut ChaCha8Rng, radius: f64) -> C64 {
    C64::from_polar(radius * r.random::<f64>().sqrt(), 2.0 * PI * r.random::<f64>())
}

/// Uniform point of the ball of `ℂ^m` scaled by `radius`.
fn random_ball(r: &mut ChaCha8Rng, m: usize, radius: f64) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..m).map(|_| random_disc(r, 1.0)).collect();
        let n2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if n2 < 1.0 {
            return v.into_iter().map(|c| c * radius).collect();
        }
    }
}

fn check_deflation(seed: u64) -> Outcome {
    let base = DomainSpec::diagonal(&[2.0])?;
    let cfg = SeriesConfig::default();
    let mut r = rng(seed, 1);
    let mut worst: f64 = 0.0;
    for (p, q) in [(2.0, 2.0), (1.0, 3.0)] {
        let pair = deflation_pair(&base, p, q)?;
        let lower = |z: &[C64], w: &[C64]| series_kernel(&pair.lower, z, w, &cfg);
        let upper = |z: &[C64], w: &[C64]| series_kernel(&pair.upper, z, w, &cfg);
        for _ in 0..20 {
            let (z1, w1) = (random_disc(&mut r, 0.65), random_disc(&mut r, 0.65));
            let zero = C64::new(0.0, 0.0);
            let lhs = lower(&[z1, zero], &[w1, zero])?.value * PI;
            let rhs = upper(&[z1, zero, zero], &[w1, zero, zero])?.value * pair.constant;
            worst = worst.max(rel(lhs, rhs));
        }
    }
    let c = deflation_constant(2.0, 2.0);
    let exact = PI * PI / 6.0;
    let const_ok = (c - exact).abs() <= 2.0 * f64::EPSILON * exact;
    Ok((
        worst < 1e-6 && const_ok,
        format!("max rel err {worst:.2e} (tol 1e-6); C(2,2) - π²/6 = {:.1e}", c - exact),
    ))
}

fn check_inflation(seed: u64) -> Outcome {
    let mut r = rng(seed, 2);
    let mut worst: f64 = 0.0;
    for m in 1..=4 {
        let k = inflate(Arc::new(DiscProfile), m)?;
        let fact: f64 = (1..=m).map(|i| i as f64).product();
        for _ in 0..20 {
            let z = random_ball(&mut r, m, 0.97);
            let w = random_ball(&mut r, m, 0.97);
            let expected = (C64::new(1.0, 0.0) - pairing(&z, &w)).powi(-(m as i32 + 1)) * fact / PI.powi(m as i32);
            worst = worst.max(rel(k.eval(&z, &w)?.value, expected));
        }
    }
    Ok((worst < 1e-12, format!("max rel err {worst:.2e} over m = 1..4 (tol 1e-12)")))
}

fn check_fold_disc(seed: u64) -> Outcome {
    let mut r = rng(seed, 3);
    let mut worst: f64 = 0.0;
    for p in [2.0, 3.0, 5.0] {
        let folded: Arc<dyn CircularProfile> = Arc::new(fold(Arc::new(DiscProfile), p)?);
        let k = hartogs_kernel(folded);
        for i in 0..20 {
            // a few points straddle the series switch near the origin
            let radius = if i < 4 { 0.03 } else { 0.97 };
            let (a, b) = (random_disc(&mut r, radius), random_disc(&mut r, radius));
            let expected = (C64::new(1.0, 0.0) - a * b.conj()).powi(-2) / PI;
            worst = worst.max(rel(k.eval(&[a], &[b])?.value, expected));
        }
    }
    Ok((worst < 1e-10, format!("max rel err {worst:.2e} for p in {{2,3,5}} (tol 1e-10)")))
}

/// Points `(X, Y)` with `√|X| + √|Y| < 1` on a 40 × 40 grid.
fn admissible_grid(n: usize) -> Vec<(C64, C64)> {
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let a = 0.98 * (i as f64 + 0.5) / n as f64;
        for j in 0..n {
            let b = (0.98 - a) * (j as f64 + 0.5) / n as f64;
            let x = C64::from_polar(a * a, 2.0 * PI * (i as f64 * golden).fract());
            let y = C64::from_polar(b * b, 2.0 * PI * (j as f64 * 2f64.sqrt()).fract());
            out.push((x, y));
        }
    }
    out
}

fn check_slice_k2() -> Outcome {
    let mut worst: f64 = 0.0;
    let grid = admissible_grid(40);
    for &(x, y) in &grid {
        let a = slice_kernel_kp(2.0, x, y)?.value;
        let b = k2_closed_form(x, y)?.value;
        worst = worst.max(rel(a, b));
    }
    Ok((worst < 1e-10, format!("max rel err {worst:.2e} on {} points (tol 1e-10)", grid.len())))
}

fn check_axis_limit() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in [2.0, 3.0, 4.0] {
        for k in 0..8 {
            let x = C64::from_polar(1e-6, 2.0 * PI * k as f64 / 8.0);
            for y in [0.0, 0.3, -0.5] {
                let y = C64::new(y, 0.0);
                worst = worst.max(rel(slice_kernel_kp_folded(p, x, y)?.value, slice_axis_value(p, y)));
            }
        }
    }
    // y = −1: the closed axis formula and the jet route continued past the domain
    let mut cont: f64 = 0.0;
    for p in [2.5, 3.0, 4.0, 6.0] {
        let target = -(p * p - 4.0) / (16.0 * PI * PI);
        let y = C64::new(-1.0, 0.0);
        cont = cont.max((slice_axis_value(p, y).re - target).abs());
        cont = cont.max((slice_kernel_continued(p, C64::new(0.0, 0.0), y)?.value - target).norm());
    }
    Ok((
        worst < 1e-6 && cont < 1e-9,
        format!("max rel err {worst:.2e} (tol 1e-6); |K(0,-1) + (p²-4)/(16π²)| <= {cont:.1e} (tol 1e-9)"),
    ))
}

fn check_zeros_2d() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for p in [1.0, 2.0, 3.0, 4.0, 6.0, 10.0] {
        let report = axis1_zero_locus(p)?;
        let expected = 2 * (1..).take_while(|&k: &usize| ((4 * k) as f64) < p + 2.0).count();
        let family = SliceFamily::Axis1 { p };
        let mut cert: f64 = 0.0;
        for z in &report.zeros {
            cert = cert.max(z.residual).max(family.independent_value(z.location())?.norm());
        }
        let good = report.zeros.len() == expected && report.count_by_winding == expected && cert < CERT_TOL;
        ok &= good;
        parts.push(format!("p={p}: {}/{} zeros, winding {}, |K| <= {cert:.0e}", report.zeros.len(), expected, report.count_by_winding));
    }
    Ok((ok, parts.join("; ")))
}

fn check_c3_zero() -> Outcome {
    let d = DomainSpec::diagonal(&[2.0, 2.0, 2.0])?;
    let s = 1.0 / 3f64.sqrt();
    let zero = C64::new(0.0, 0.0);
    let z = [C64::new(s, 0.0), zero, zero];
    let w = [C64::new(-s, 0.0), zero, zero];
    let cfg = SeriesConfig::with_cap(120);
    let at_zero = series_kernel(&d, &z, &w, &cfg)?.value.norm();
    let diag = series_kernel(&d, &z, &z, &cfg)?.value;
    Ok((
        at_zero < 1e-4 && diag.re > 0.1,
        format!("|K(z,w)| = {at_zero:.2e} (tol 1e-4); K(z,z) = {:.4} (> 0.1)", diag.re),
    ))
}

fn check_k2(seed: u64) -> Outcome {
    let zero = C64::new(0.0, 0.0);
    let w1 = count_zeros_winding(&k2_slice_x(zero), FAMILY_RADIUS)?;
    let w2 = count_zeros_winding(&k2_slice_y(zero), FAMILY_RADIUS)?;
    let scan = k2_grid_scan(64, 0.9, 1e-8)?;
    let mut r = rng(seed, 8);
    let mut certified = 0;
    let trials = 10_000;
    for _ in 0..trials {
        let a: f64 = r.random::<f64>() * 0.999;
        let b: f64 = r.random::<f64>() * (0.999 - a);
        let x = C64::from_polar(a * a, 2.0 * PI * r.random::<f64>());
        let y = C64::from_polar(b * b, 2.0 * PI * r.random::<f64>());
        if k2_interior_positivity(x, y).is_ok_and(|c| c.holds()) {
            certified += 1;
        }
    }
    let boundary = k2_closed_form(C64::new(-1.0, 0.0), zero)?.value;
    let ok = w1 == 0 && w2 == 0 && scan.min_modulus > 1e-2 && scan.report.zeros.is_empty() && certified == trials && boundary == zero;
    Ok((
        ok,
        format!(
            "winding {w1}/{w2}; grid min |K2| = {:.4} over {} samples; certificate {certified}/{trials}; K2(-1,0) = {boundary}",
            scan.min_modulus, scan.samples
        ),
    ))
}

fn check_mixed() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 2..=5 {
        let family = SliceFamily::Mixed { n };
        let report = family_zero_report(family)?;
        let verdict = classify_slice(&family.search_function()?, FAMILY_RADIUS, 50, 1e-10)?;
        let expected = if n >= 4 { Verdict::Zeroed } else { Verdict::ZeroFree };
        ok &= verdict == expected && (report.zeros.is_empty() != (n >= 4));
        parts.push(format!("n={n}: {}", verdict.name()));
    }
    let t = C64::new(0.0, (PI / 5.0).tan());
    let family = SliceFamily::Mixed { n: 4 };
    let primary = family.kernel_value(t)?.value.norm();
    let independent = family.independent_value(t)?.norm();
    ok &= primary < CERT_TOL && independent < CERT_TOL;
    parts.push(format!("|K| at i·tan(π/5): {primary:.0e} / {independent:.0e}"));
    Ok((ok, parts.join("; ")))
}

/// Domains whose origin value and volume are compared.
pub fn origin_catalog() -> Result<Vec<(&'static str, DomainSpec)>> {
    Ok(vec![
        ("disc", DomainSpec::diagonal(&[1.0])?),
        ("ball C2", DomainSpec::new(vec![Block::new(2, 1.0)])?),
        ("(1,2)", DomainSpec::diagonal(&[1.0, 2.0])?),
        ("(2,2)", DomainSpec::diagonal(&[2.0, 2.0])?),
        ("(2,4)", DomainSpec::diagonal(&[2.0, 4.0])?),
        ("(2,2,2)", DomainSpec::diagonal(&[2.0, 2.0, 2.0])?),
    ])
}

fn check_origin_values(seed: u64) -> Outcome {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut worst_sigma: f64 = 0.0;
    for (i, (_, d)) in origin_catalog()?.into_iter().enumerate() {
        let zero = vec![C64::new(0.0, 0.0); d.dim()];
        let k0 = kernel_for_domain(&d)?.eval(&zero, &zero)?.value;
        let vol = d.volume()?;
        let err = (k0 * vol - 1.0).norm();
        worst = worst.max(err);
        let (est, se) = mc_volume(&d, 1_000_000, seed.wrapping_add(i as u64))?;
        let sigmas = if se > 0.0 { (est - vol).abs() / se } else if est == vol { 0.0 } else { f64::INFINITY };
        worst_sigma = worst_sigma.max(sigmas);
        ok &= err < 1e-9 && sigmas < 3.0;
    }
    Ok((ok, format!("max |K(0,0)·vol - 1| = {worst:.1e} (tol 1e-9); worst MC deviation {worst_sigma:.2} σ (< 3)")))
}

/// Label, domain, kernel, test function and evaluation point.
type ReproducingCase = (&'static str, DomainSpec, Box<dyn KernelEvaluator>, Polynomial, Vec<C64>);

fn check_reproducing(seed: u64) -> Outcome {
    let disc = DomainSpec::diagonal(&[1.0])?;
    let simplex = DomainSpec::diagonal(&[2.0, 2.0])?;
    let mixed = DomainSpec::diagonal(&[2.0, 4.0])?;
    let cases: Vec<ReproducingCase> = vec![
        ("1 on disc", disc.clone(), kernel_for_domain(&disc)?, Polynomial::monomial(vec![0]), vec![C64::new(0.0, 0.0)]),
        (
            "w1 on (2,2)",
            simplex,
            Box::new(K2Kernel::new()),
            Polynomial::monomial(vec![1, 0]),
            vec![C64::new(0.2, 0.0), C64::new(0.1, 0.0)],
        ),
        (
            "w1 w2 on (2,4)",
            mixed.clone(),
            kernel_for_domain(&mixed)?,
            Polynomial::monomial(vec![1, 1]),
            vec![C64::new(0.15, 0.05), C64::new(0.03, -0.03)],
        ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (i, (label, d, k, h, z)) in cases.into_iter().enumerate() {
        let out = reproducing_check(&d, k.as_ref(), &h, &z, 1_000_000, seed.wrapping_add(100 + i as u64))?;
        ok &= out.residual < 5e-3;
        parts.push(format!("{label}: residual {:.1e} (σ {:.1e})", out.residual, out.stderr));
    }
    Ok((ok, parts.join("; ")))
}

/// `∂_t^k ∂_u^l f(t0, u0)` by the Cauchy integral on a torus of radii `(r, s)`.
fn cauchy_partial(f: impl Fn(C64, C64) -> C64, t0: C64, u0: C64, k: usize, l: usize, r: f64, s: f64) -> C64 {
    let n = 32;
    let mut acc = C64::new(0.0, 0.0);
    for a in 0..n {
        let ea = C64::from_polar(1.0, 2.0 * PI * a as f64 / n as f64);
        for b in 0..n {
            let eb = C64::from_polar(1.0, 2.0 * PI * b as f64 / n as f64);
            acc += f(t0 + ea * r, u0 + eb * s) * ea.powi(-(k as i32)) * eb.powi(-(l as i32));
        }
    }
    let fact = |m: usize| (1..=m).map(|i| i as f64).product::<f64>();
    acc * fact(k) * fact(l) / ((n * n) as f64 * r.powi(k as i32) * s.powi(l as i32))
}

fn check_jets(seed: u64) -> Outcome {
    let mut r = rng(seed, 12);
    let mut worst: f64 = 0.0;
    let mut centers = 0;
    while centers < 100 {
        let p = 0.5 + 1.5 * r.random::<f64>();
        let t0 = random_disc(&mut r, 0.5);
        let u0 = random_disc(&mut r, 0.5);
        let one = C64::new(1.0, 0.0);
        if ((one - t0).powf(p) - u0).norm() < 0.3 {
            continue;
        }
        centers += 1;
        let orders = (3, 2);
        let a = Jet2::lift_t(&(-&Jet1::variable(t0, 3)).add_scalar(one).rpow(p)?, u0, orders);
        let g = Jet2::constant((t0, u0), one, orders).div(&a.sub(&Jet2::variable_u((t0, u0), orders))?)?;
        let f = |t: C64, u: C64| ((one - t).powf(p) - u).inv();
        for k in 0..=3 {
            for l in 0..=2 {
                let oracle = cauchy_partial(f, t0, u0, k, l, 0.05, 0.05);
                worst = worst.max(rel(g.partial(k, l)?, oracle));
            }
        }
    }
    Ok((worst < 1e-6, format!("max rel err {worst:.2e} through order (3,2) at 100 centers (tol 1e-6)")))
}
