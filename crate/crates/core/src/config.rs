//! Flat `key = value` parameter files (SI units, `#` comments).
//!
//! ```text
//! # silver
//! mass_kg = 1.79e-25
//! force_N = 9.27e-22
//! sigma_m = 1e-6
//! ```
//!
//! When `force_N` is absent it is derived from `g`, `mu_B` and `B0`.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{PhysicalParams, ZeemanCoupling};

pub const KEYS: [&str; 10] =
    ["mass_kg", "force_N", "sigma_m", "c_plus_re", "c_plus_im", "c_minus_re", "c_minus_im", "g", "mu_B", "B0"];

/// Parse `key = value` lines into a map, rejecting unknown keys and duplicates.
pub fn parse_pairs(text: &str, allowed: &[&str]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(Error::Config { line, msg: format!("expected `key = value`, got `{content}`") });
        };
        let (k, v) = (k.trim(), v.trim());
        if !allowed.contains(&k) {
            return Err(Error::Config { line, msg: format!("unknown key `{k}`") });
        }
        let value: f64 = v.parse().map_err(|_| Error::Config { line, msg: format!("`{v}` is not a number") })?;
        if out.insert(k.to_string(), value).is_some() {
            return Err(Error::Config { line, msg: format!("duplicate key `{k}`") });
        }
    }
    Ok(out)
}

pub fn params_from_str(text: &str) -> Result<PhysicalParams> {
    params_from_map(&parse_pairs(text, &KEYS)?)
}

pub fn params_from_file(path: impl AsRef<Path>) -> Result<PhysicalParams> {
    params_from_str(&std::fs::read_to_string(path)?)
}

pub fn params_from_map(map: &BTreeMap<String, f64>) -> Result<PhysicalParams> {
    let get = |k: &str| map.get(k).copied();
    let missing = |k: &'static str| Error::Config { line: 0, msg: format!("missing key `{k}`") };

    let mass = get("mass_kg").ok_or_else(|| missing("mass_kg"))?;
    let sigma = get("sigma_m").ok_or_else(|| missing("sigma_m"))?;

    let zeeman = match (get("g"), get("mu_B"), get("B0")) {
        (Some(g), Some(mu_b), Some(b0)) => Some(ZeemanCoupling { g, mu_b, b0 }),
        (None, None, None) => None,
        _ => return Err(Error::Config { line: 0, msg: "g, mu_B and B0 must be given together".into() }),
    };

    let mut params = match (get("force_N"), zeeman) {
        (Some(f), z) => {
            let mut p = PhysicalParams::new(mass, f, sigma)?;
            p.zeeman = z;
            p
        }
        (None, Some(z)) => PhysicalParams::from_zeeman(mass, sigma, z)?,
        (None, None) => return Err(missing("force_N")),
    };

    let amp = |re: &str, im: &str| -> Option<Complex64> {
        match (get(re), get(im)) {
            (None, None) => None,
            (r, i) => Some(Complex64::new(r.unwrap_or(0.0), i.unwrap_or(0.0))),
        }
    };
    match (amp("c_plus_re", "c_plus_im"), amp("c_minus_re", "c_minus_im")) {
        (None, None) => {}
        (Some(cp), Some(cm)) => params = params.with_amplitudes(cp, cm)?,
        _ => return Err(Error::Config { line: 0, msg: "give both c_plus and c_minus, or neither".into() }),
    }
    params.validate()?;
    Ok(params)
}

/// Inverse of [`params_from_str`]; floats use shortest round-trip formatting.
pub fn params_to_pairs(p: &PhysicalParams) -> Vec<(&'static str, f64)> {
    let mut v = vec![
        ("mass_kg", p.mass),
        ("force_N", p.force),
        ("sigma_m", p.sigma),
        ("c_plus_re", p.c_plus.re),
        ("c_plus_im", p.c_plus.im),
        ("c_minus_re", p.c_minus.re),
        ("c_minus_im", p.c_minus.im),
    ];
    if let Some(z) = p.zeeman {
        v.extend([("g", z.g), ("mu_B", z.mu_b), ("B0", z.b0)]);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_reference_file() {
        let p =
            params_from_str("# silver atoms\nmass_kg = 1.79e-25\nforce_N = 9.27e-22  # N\n\nsigma_m=1e-6\n").unwrap();
        assert_eq!(p, PhysicalParams::silver());
    }

    #[test]
    fn derives_force_from_zeeman() {
        let p =
            params_from_str("mass_kg = 1.79e-25\nsigma_m = 1e-6\ng = 2\nmu_B = 9.2740100783e-24\nB0 = -100\n").unwrap();
        assert!((p.force - 9.2740100783e-22).abs() < 1e-12 * 9.3e-22);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = params_from_str("mass_kg = 1\nbogus = 2\n").unwrap_err();
        assert!(matches!(e, Error::Config { line: 2, .. }), "{e}");
        let e = params_from_str("mass_kg = x\n").unwrap_err();
        assert!(matches!(e, Error::Config { line: 1, .. }));
        let e = params_from_str("mass_kg = 1\nmass_kg = 2\n").unwrap_err();
        assert!(matches!(e, Error::Config { line: 2, .. }));
        assert!(params_from_str("mass_kg = 1\nsigma_m = 1\n").is_err());
    }

    #[test]
    fn amplitudes_round_trip() {
        let p = PhysicalParams::silver().with_amplitudes(Complex64::new(0.6, 0.0), Complex64::new(0.0, -0.8)).unwrap();
        let text: String = params_to_pairs(&p).into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        assert_eq!(params_from_str(&text).unwrap(), p);
        assert!(matches!(
            params_from_str("mass_kg=1\nforce_N=1\nsigma_m=1\nc_plus_re=1\nc_minus_re=1\n"),
            Err(Error::NotNormalized { .. })
        ));
    }
}
