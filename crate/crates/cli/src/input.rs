use bergman::domains::{parse_domain_spec, DomainSpec};
use num_complex::Complex64;

use crate::error::CliError;

/// Inline JSON, or `@path` naming a JSON file.
pub fn read_domain(source: &str) -> Result<DomainSpec, CliError> {
    let text = match source.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {path}: {e}")))?,
        None => source.to_string(),
    };
    Ok(parse_domain_spec(&text)?)
}

pub fn parse_complex(token: &str) -> Result<Complex64, CliError> {
    let t = token.trim();
    t.parse::<Complex64>().map_err(|_| CliError::Parse(format!("not a complex number: `{t}`")))
}

/// Comma-separated complex numbers.
pub fn parse_point(list: &str) -> Result<Vec<Complex64>, CliError> {
    if list.trim().is_empty() {
        return Err(CliError::Parse("empty point".into()));
    }
    list.split(',').map(parse_complex).collect()
}

/// `v`, `a..b` (unit step) or `a..b:step`, inclusive of `b` up to rounding.
pub fn parse_range(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Parse(format!("bad range `{spec}`: {why}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let Some((lo, rest)) = spec.split_once("..") else {
        return Ok(vec![num(spec)?]);
    };
    let (hi, step) = match rest.split_once(':') {
        Some((hi, step)) => (num(hi)?, num(step)?),
        None => (num(rest)?, 1.0),
    };
    let lo = num(lo)?;
    if !(step > 0.0) || !(hi >= lo) {
        return Err(bad("need lo <= hi and a positive step"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > 10_000 {
        return Err(bad("more than 10000 values"));
    }
    Ok((0..count).map(|k| lo + k as f64 * step).collect())
}
