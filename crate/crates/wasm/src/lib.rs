//! Browser bindings for the demo page in `www/`.
//!
//! Each operation has a plain Rust form returning a JSON string (tested natively)
//! and a `#[wasm_bindgen]` wrapper that turns errors into JavaScript exceptions.

use haarnet::formulas::{l2sq_pa, l2sq_pc, l2sq_sym_pa};
use haarnet::haar::{level_coefficients, level_mass};
use haarnet::netgen::parse_bits;
use haarnet::rational::{to_f64, to_string};
use haarnet::{generate, parseval_l2_squared, warnock_l2_squared, NetSpec, Rational, ShiftVector, TriEntries};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest n the page accepts; Warnock is quadratic in the number of points.
pub const MAX_N: usize = 12;

fn spec(family: &str, n: usize, params: &str, shift: &str, symmetrized: bool) -> Result<NetSpec, String> {
    if n == 0 || n > MAX_N {
        return Err(format!("n must lie in 1..={MAX_N}"));
    }
    let bits = parse_bits(params).map_err(|e| e.to_string())?;
    let shift = if shift.trim().is_empty() {
        ShiftVector::zeros(n)
    } else {
        ShiftVector::parse(shift).map_err(|e| e.to_string())?
    };
    let spec = match family {
        "pa" => NetSpec::pa(bits, shift),
        "pc" => NetSpec::pc(bits, shift),
        "tri" => NetSpec::tri(TriEntries::from_flat(n, &bits).map_err(|e| e.to_string())?, shift),
        other => return Err(format!("unknown family {other:?}")),
    };
    let spec = NetSpec { n, ..spec }.symmetrized(symmetrized);
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

fn exact(q: &Rational) -> Value {
    json!({ "exact": to_string(q), "approx": to_f64(q) })
}

/// Points of the net as `{"side": 2^n, "points": [[x, y], ...]}`.
pub fn points_json(family: &str, n: usize, params: &str, shift: &str, symmetrized: bool) -> Result<String, String> {
    let p = generate(&spec(family, n, params, shift, symmetrized)?).map_err(|e| e.to_string())?;
    Ok(json!({ "side": p.side(), "points": p.points() }).to_string())
}

/// `(N L2)^2` by the closed form (when one exists), Parseval and Warnock.
pub fn l2_json(family: &str, n: usize, params: &str, shift: &str, symmetrized: bool) -> Result<String, String> {
    let s = spec(family, n, params, shift, symmetrized)?;
    let p = generate(&s).map_err(|e| e.to_string())?;
    let err = |e: haarnet::Error| e.to_string();
    let formula = match (family, symmetrized) {
        ("pa", false) => Some(l2sq_pa(n, &parse_bits(params).map_err(err)?, &s.shift).map_err(err)?),
        ("pa", true) => Some(l2sq_sym_pa(n, &parse_bits(params).map_err(err)?, &s.shift).map_err(err)?),
        ("pc", false) => Some(l2sq_pc(n, &parse_bits(params).map_err(err)?, &s.shift).map_err(err)?),
        _ => None,
    };
    let count = Rational::from_integer(p.len().into());
    let parseval = parseval_l2_squared(&p, n as u32).map_err(err)? * &count * &count;
    let warnock = warnock_l2_squared(&p).map_err(err)?;
    let agree = formula.as_ref().is_none_or(|f| *f == warnock) && parseval == warnock;
    Ok(json!({
        "points": p.len(),
        "formula": formula.as_ref().map(exact),
        "parseval": exact(&parseval),
        "warnock": exact(&warnock),
        "agree": agree,
    })
    .to_string())
}

/// Haar coefficients of one level as a grid indexed `[m2][m1]`.
pub fn haar_level_json(
    family: &str,
    n: usize,
    params: &str,
    shift: &str,
    symmetrized: bool,
    j1: i32,
    j2: i32,
) -> Result<String, String> {
    if j1 < -1 || j2 < -1 || j1 > n as i32 + 1 || j2 > n as i32 + 1 {
        return Err(format!("levels must lie in -1..={}", n + 1));
    }
    let p = generate(&spec(family, n, params, shift, symmetrized)?).map_err(|e| e.to_string())?;
    let coeffs = level_coefficients(&p, j1, j2).map_err(|e| e.to_string())?;
    let width = 1usize << j1.max(0);
    let height = 1usize << j2.max(0);
    let mut grid = vec![vec![0.0f64; width]; height];
    let mut max_abs = 0.0f64;
    for (idx, v) in &coeffs {
        let f = to_f64(v);
        grid[idx.m2 as usize][idx.m1 as usize] = f;
        max_abs = max_abs.max(f.abs());
    }
    let mass = level_mass(&p, j1, j2).map_err(|e| e.to_string())?;
    Ok(json!({ "width": width, "height": height, "grid": grid, "max_abs": max_abs, "mass": exact(&mass) }).to_string())
}

#[wasm_bindgen]
pub fn points(family: &str, n: usize, params: &str, shift: &str, symmetrized: bool) -> Result<String, JsError> {
    points_json(family, n, params, shift, symmetrized).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn l2(family: &str, n: usize, params: &str, shift: &str, symmetrized: bool) -> Result<String, JsError> {
    l2_json(family, n, params, shift, symmetrized).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn haar_level(
    family: &str,
    n: usize,
    params: &str,
    shift: &str,
    symmetrized: bool,
    j1: i32,
    j2: i32,
) -> Result<String, JsError> {
    haar_level_json(family, n, params, shift, symmetrized, j1, j2).map_err(|e| JsError::new(&e))
}
