use bergman::domains::DomainSpec;
use bergman::kernels::{k2_closed_form, kernel_for_domain, KernelValue};
use bergman::oracle::{series_kernel, SeriesConfig};
use bergman::verify::{run_suite, Suite};
use bergman::zeros::{
    family_zero_report, grid_zero_scan, sweep_exponents, SliceFamily, Verdict, FAMILY_RADIUS,
};
use bergman::Error;
use clap::ValueEnum;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::args::{EvalArgs, FamilyArgs, FamilyName, LocusArgs, SweepArgs, VerifyArgs, ZerosArgs};
use crate::error::CliError;
use crate::input::{parse_complex, parse_point, parse_range, read_domain};
use crate::output::{to_json, Cell, Document, Table};

type C64 = Complex64;

/// A complete document plus an optional failure that sets the exit code after it is written.
pub struct Outcome {
    pub doc: Document,
    pub failure: Option<CliError>,
}

impl From<Document> for Outcome {
    fn from(doc: Document) -> Self {
        Self { doc, failure: None }
    }
}

/// Largest `√|x| + √|y|` sampled by the `K₂` locus; the boundary zero sits at 1.
const K2_LOCUS_REACH: f64 = 0.9;

fn pair(c: C64) -> serde_json::Value {
    json!({ "re": c.re, "im": c.im })
}

fn points(z: &[C64]) -> serde_json::Value {
    z.iter().map(|c| pair(*c)).collect()
}

fn ensure_interior(domain: &DomainSpec, name: &str, z: &[C64]) -> Result<(), CliError> {
    domain.check_len(z.len())?;
    let phi = domain.phi(z)?;
    if !(phi < 1.0) {
        return Err(Error::OutsideDomain(format!("φ({name}) = {phi}")).into());
    }
    Ok(())
}

pub fn eval(a: &EvalArgs) -> Result<Outcome, CliError> {
    if !(a.tol >= 0.0) {
        return Err(CliError::Parse(format!("--tol must be non-negative, got {}", a.tol)));
    }
    let domain = read_domain(&a.domain)?;
    let z = parse_point(&a.z)?;
    let w = match &a.w {
        Some(s) => parse_point(s)?,
        None => z.clone(),
    };
    ensure_interior(&domain, "z", &z)?;
    ensure_interior(&domain, "w", &w)?;

    let kv: KernelValue = match kernel_for_domain(&domain) {
        Ok(k) => k.eval(&z, &w)?,
        Err(Error::UnsupportedDomain(_)) => series_kernel(&domain, &z, &w, &SeriesConfig::default())?,
        Err(e) => return Err(e.into()),
    };
    let zero = kv.value.norm() < a.tol;

    let mut json = json!({
        "domain": to_json(&domain),
        "z": points(&z),
        "w": points(&w),
        "value": pair(kv.value),
        "abs": kv.value.norm(),
        "formula": kv.formula.name(),
        "near_singular_limit": kv.near_singular_limit,
        "zero": zero,
    });
    let mut header = vec!["re(K)", "im(K)", "abs(K)", "formula", "zero"];
    let mut row = vec![
        Cell::Num(kv.value.re),
        Cell::Num(kv.value.im),
        Cell::Num(kv.value.norm()),
        Cell::Text(kv.formula.name().into()),
        Cell::Bool(zero),
    ];
    if a.check_oracle {
        let oracle = series_kernel(&domain, &z, &w, &SeriesConfig::default())?.value;
        let diff = (kv.value - oracle).norm() / oracle.norm().max(kv.value.norm());
        json["oracle"] = json!({ "value": pair(oracle), "rel_diff": diff });
        header.extend(["re(oracle)", "im(oracle)", "rel_diff"]);
        row.extend([Cell::Num(oracle.re), Cell::Num(oracle.im), Cell::Num(diff)]);
    }
    let mut table = Table::new(&header);
    table.rows.push(row);
    Ok(Document { json, table }.into())
}

fn family(args: &FamilyArgs) -> Result<SliceFamily, CliError> {
    let name = args.family.to_possible_value().expect("no skipped variants");
    let name = name.get_name();
    let need_p = || args.p.ok_or_else(|| CliError::Parse(format!("--family {name} needs --p")));
    let need_n = || args.n.ok_or_else(|| CliError::Parse(format!("--family {name} needs --n")));
    let fam = match args.family {
        FamilyName::Axis1 => SliceFamily::Axis1 { p: need_p()? },
        FamilyName::Axis2 => SliceFamily::Axis2 { p: need_p()? },
        FamilyName::Simplex => SliceFamily::Simplex { n: need_n()? },
        FamilyName::Mixed => SliceFamily::Mixed { n: need_n()? },
        FamilyName::K2 => SliceFamily::K2,
    };
    // parameter validation happens on first use; surface it as a parse error
    fam.search_function().map_err(|e| CliError::Parse(e.to_string()))?;
    Ok(fam)
}

fn family_params(fam: &SliceFamily) -> serde_json::Value {
    match *fam {
        SliceFamily::Axis1 { p } | SliceFamily::Axis2 { p } => json!({ "p": p }),
        SliceFamily::Simplex { n } | SliceFamily::Mixed { n } => json!({ "n": n }),
        SliceFamily::K2 => json!({}),
    }
}

fn check_res(res: usize, lo: usize) -> Result<(), CliError> {
    if res < lo || res > 4096 {
        return Err(CliError::Parse(format!("--res must be in {lo}..=4096, got {res}")));
    }
    Ok(())
}

pub fn zeros(a: &ZerosArgs) -> Result<Outcome, CliError> {
    check_res(a.res, 8)?;
    let fam = family(&a.family)?;
    let report = family_zero_report(fam)?;
    let scan = grid_zero_scan(&fam.search_function()?, FAMILY_RADIUS, a.res, a.tol)?;

    let predicted = fam.predicts_zeros();
    let found = !report.zeros.is_empty();
    let counts_agree = report.zeros.len() == report.count_by_winding && scan.report.zeros.len() == report.count_by_winding;

    let mut json = to_json(&report);
    json["family"] = json!(fam.name());
    json["params"] = family_params(&fam);
    json["predicted_zeros"] = json!(predicted);
    json["grid"] = json!({
        "zeros": scan.report.zeros.len(),
        "min_modulus": scan.min_modulus,
        "samples": scan.samples,
        "verdict": scan.verdict().name(),
    });
    let mut table = Table::new(&["re", "im", "residual"]);
    for z in &report.zeros {
        table.rows.push(vec![Cell::Num(z.re), Cell::Num(z.im), Cell::Num(z.residual)]);
    }

    let failure = if predicted != found || !counts_agree {
        Some(CliError::Mismatch(format!(
            "{}: predicted zeros {predicted}, closed form {}, winding {}, grid {}",
            fam.name(),
            report.zeros.len(),
            report.count_by_winding,
            scan.report.zeros.len()
        )))
    } else {
        None
    };
    Ok(Outcome { doc: Document { json, table }, failure })
}

/// Kernel on the slice at grid variable `t`, or NaN outside the domain.
fn locus_value(fam: &SliceFamily, t: C64, y: C64) -> Result<C64, CliError> {
    let v = match fam {
        SliceFamily::K2 => k2_closed_form(t, y),
        _ => fam.kernel_value(t),
    };
    match v {
        Ok(kv) => Ok(kv.value),
        Err(Error::OutsideDomain(_)) => Ok(C64::new(f64::NAN, f64::NAN)),
        Err(e) => Err(e.into()),
    }
}

pub fn locus(a: &LocusArgs) -> Result<Outcome, CliError> {
    check_res(a.res, 2)?;
    let fam = family(&a.family)?;
    let y_fixed = parse_complex(&a.y)?;
    if fam != SliceFamily::K2 && y_fixed != C64::new(0.0, 0.0) {
        return Err(CliError::Parse("--y only applies to the k2 family".into()));
    }
    let radius = match (a.radius, fam) {
        (Some(r), _) => r,
        (None, SliceFamily::K2) => (K2_LOCUS_REACH - y_fixed.norm().sqrt()).powi(2),
        (None, _) => FAMILY_RADIUS,
    };
    if !(radius > 0.0 && radius < 1.0) {
        return Err(CliError::Parse(format!("locus radius must be in (0, 1), got {radius}")));
    }

    let axis = |k: usize| -radius + 2.0 * radius * (k as f64 + 0.5) / a.res as f64;
    let grid: Vec<C64> = if a.real {
        (0..a.res).map(|k| C64::new(axis(k), 0.0)).collect()
    } else {
        (0..a.res * a.res).map(|idx| C64::new(axis(idx % a.res), axis(idx / a.res))).collect()
    };
    let values: Vec<C64> = grid
        .par_iter()
        .map(|&t| {
            if t.norm() > radius {
                Ok(C64::new(f64::NAN, f64::NAN))
            } else {
                locus_value(&fam, t, y_fixed)
            }
        })
        .collect::<Result<_, CliError>>()?;

    let columns = ["re(x)", "im(x)", "re(y)", "im(y)", "re(K)", "im(K)", "abs(K)"];
    let mut table = Table::new(&columns);
    let mut rows = Vec::with_capacity(grid.len());
    for (&t, &k) in grid.iter().zip(&values) {
        let (x, y) = match fam {
            SliceFamily::Axis2 { .. } => (C64::new(0.0, 0.0), t),
            SliceFamily::K2 => (t, y_fixed),
            _ => (t, C64::new(0.0, 0.0)),
        };
        let row = [x.re, x.im, y.re, y.im, k.re, k.im, k.norm()];
        table.rows.push(row.iter().map(|&v| Cell::Num(v)).collect());
        rows.push(row.to_vec());
    }
    let json = json!({
        "family": fam.name(),
        "params": family_params(&fam),
        "radius": radius,
        "columns": columns,
        "rows": rows,
    });
    Ok(Document { json, table }.into())
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let suite = Suite::parse(&a.suite).ok_or_else(|| CliError::Parse(format!("unknown suite `{}`", a.suite)))?;
    let results = run_suite(suite, a.seed);
    for r in &results {
        eprintln!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let mut table = Table::new(&["id", "name", "passed", "detail"]);
    for r in &results {
        table.rows.push(vec![
            Cell::Int(r.id as i64),
            Cell::Text(r.name.into()),
            Cell::Bool(r.passed),
            Cell::Text(r.detail.clone()),
        ]);
    }
    let json = json!({
        "suite": a.suite,
        "seed": a.seed,
        "passed": failed == 0,
        "results": to_json(&results),
    });
    let failure = (failed > 0).then_some(CliError::VerifyFailed(failed));
    Ok(Outcome { doc: Document { json, table }, failure })
}

fn family_with_param(name: FamilyName, v: f64) -> Result<SliceFamily, CliError> {
    let as_n = || {
        if v.fract() == 0.0 && v >= 2.0 {
            Ok(v as usize)
        } else {
            Err(CliError::Parse(format!("dimension must be an integer >= 2, got {v}")))
        }
    };
    Ok(match name {
        FamilyName::Axis1 => SliceFamily::Axis1 { p: v },
        FamilyName::Axis2 => SliceFamily::Axis2 { p: v },
        FamilyName::Simplex => SliceFamily::Simplex { n: as_n()? },
        FamilyName::Mixed => SliceFamily::Mixed { n: as_n()? },
        FamilyName::K2 => return Err(CliError::Parse("k2 has no parameter to sweep".into())),
    })
}

pub fn sweep(a: &SweepArgs) -> Result<Outcome, CliError> {
    check_res(a.res, 8)?;
    match (a.family, a.n) {
        (Some(name), None) => {
            let range = a.range.as_deref().ok_or_else(|| CliError::Parse("--family needs --range".into()))?;
            let fams = parse_range(range)?
                .into_iter()
                .map(|v| family_with_param(name, v).map(|f| (v, f)))
                .collect::<Result<Vec<_>, _>>()?;
            for (_, f) in &fams {
                f.search_function().map_err(|e| CliError::Parse(e.to_string()))?;
            }
            sweep_families(&fams, a.res, a.tol)
        }
        (None, Some(n)) => sweep_grid(a, n),
        _ => Err(CliError::Parse("give either --family with --range, or --n with --p1 .. --pN".into())),
    }
}

fn sweep_families(fams: &[(f64, SliceFamily)], res: usize, tol: f64) -> Result<Outcome, CliError> {
    let scans = fams
        .par_iter()
        .map(|(_, f)| Ok(grid_zero_scan(&f.search_function()?, FAMILY_RADIUS, res, tol)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut table =
        Table::new(&["family", "param", "verdict", "zeros", "winding", "min_modulus", "predicted"]);
    let mut rows = Vec::new();
    for ((v, f), scan) in fams.iter().zip(&scans) {
        let predicted = if f.predicts_zeros() { Verdict::Zeroed } else { Verdict::ZeroFree };
        table.rows.push(vec![
            Cell::Text(f.name().into()),
            Cell::Num(*v),
            Cell::Text(scan.verdict().name().into()),
            Cell::Int(scan.report.zeros.len() as i64),
            Cell::Int(scan.report.count_by_winding as i64),
            Cell::Num(scan.min_modulus),
            Cell::Text(predicted.name().into()),
        ]);
        rows.push(json!({
            "family": f.name(),
            "param": v,
            "verdict": scan.verdict(),
            "zeros": scan.report.zeros.len(),
            "winding": scan.report.count_by_winding,
            "min_modulus": scan.min_modulus,
            "predicted": predicted,
        }));
    }
    Ok(Document { json: json!({ "rows": rows }), table }.into())
}

fn sweep_grid(a: &SweepArgs, n: usize) -> Result<Outcome, CliError> {
    if !(2..=4).contains(&n) {
        return Err(CliError::Parse(format!("--n must be in 2..=4, got {n}")));
    }
    let specs = [&a.p1, &a.p2, &a.p3, &a.p4];
    let mut axes = Vec::with_capacity(n);
    for (k, spec) in specs.iter().enumerate().take(n) {
        let spec = spec.as_deref().ok_or_else(|| CliError::Parse(format!("--n {n} needs --p{}", k + 1)))?;
        axes.push(parse_range(spec)?);
    }
    if let Some(k) = specs.iter().skip(n).position(|s| s.is_some()) {
        return Err(CliError::Parse(format!("--p{} given but --n is {n}", n + k + 1)));
    }

    // row-major product, first exponent slowest
    let mut tuples: Vec<Vec<f64>> = vec![Vec::new()];
    for values in &axes {
        tuples = tuples
            .into_iter()
            .flat_map(|t| values.iter().map(move |&v| [t.clone(), vec![v]].concat()))
            .collect();
    }
    if tuples.len() > 10_000 {
        return Err(CliError::Parse(format!("exponent grid has {} points (max 10000)", tuples.len())));
    }
    let sweep = tuples
        .par_iter()
        .map(|t| sweep_exponents(t, a.res, a.tol).map_err(|e| match e {
            Error::Value { .. } => CliError::Parse(e.to_string()),
            e => e.into(),
        }))
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut header: Vec<String> = (1..=n).map(|k| format!("p{k}")).collect();
    header.extend(["verdict".to_string(), "axes".to_string()]);
    let mut table = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    for row in &sweep {
        let mut cells: Vec<Cell> = row.exponents.iter().map(|&p| Cell::Num(p)).collect();
        cells.push(Cell::Text(row.verdict.name().into()));
        let axes: Vec<&str> = row.axes.iter().map(|a| a.verdict.map_or("unreachable", |v| v.name())).collect();
        cells.push(Cell::Text(axes.join(";")));
        table.rows.push(cells);
    }
    Ok(Document { json: json!({ "rows": to_json(&sweep) }), table }.into())
}
