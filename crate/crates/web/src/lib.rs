//! Browser bindings. Every export returns a JSON string; the page in `www/`
//! renders it. The `*_json` functions hold the logic so they can be tested
//! natively.

use drinfeld::braid::check_associator;
use drinfeld::kz::kz_mu_squared;
use drinfeld::mzv::{self, MzvCache};
use drinfeld::relations::{lhs, rhs_sums, verify, CConvention, Relation};
use drinfeld::solver::{mu_from_phi, solve_generic, Parameters, SolveOptions};
use drinfeld::{BigFloat, Index, Rational, Scalar};
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Browser work is single-threaded, so keep requests small.
const MAX_DIGITS: u32 = 400;
const MAX_RELATION_WEIGHT: usize = 10;
const MAX_SOLVER_WEIGHT: usize = 6;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn mzv_eval_json(index: &str, digits: u32) -> Result<String, String> {
    if !(1..=MAX_DIGITS).contains(&digits) {
        return Err(format!("digits must be between 1 and {MAX_DIGITS}"));
    }
    let k: Index = index.parse().map_err(err)?;
    let r = mzv::eval(&k, digits).map_err(err)?;
    let out = json!({
        "index": k.to_string(),
        "weight": k.wt(),
        "depth": k.dp(),
        "digits": digits,
        "value": r.value.to_decimal(digits as usize),
        "method": r.method.tag(),
    });
    Ok(out.to_string())
}

#[derive(Serialize)]
struct CurvePoint {
    degree: usize,
    lhs: f64,
    rhs: f64,
    residual: f64,
}

#[derive(Serialize)]
struct Curve {
    n: i64,
    points: Vec<CurvePoint>,
}

/// Left side, assembled right side and residual per power of `h` for KZ,
/// one curve per `N`.
pub fn relation_curves_json(which: &str, n_min: i64, n_max: i64, max_weight: usize, digits: u32) -> Result<String, String> {
    let rel = Relation::parse(which).map_err(err)?;
    if !(2..=MAX_RELATION_WEIGHT).contains(&max_weight) {
        return Err(format!("weight must be between 2 and {MAX_RELATION_WEIGHT}"));
    }
    if !(30..=MAX_DIGITS).contains(&digits) {
        return Err(format!("digits must be between 30 and {MAX_DIGITS}"));
    }
    if n_min > n_max || n_max - n_min > 20 {
        return Err("choose at most 20 values of N, smallest first".into());
    }
    let z = mzv::zeta_map(max_weight, digits, &MzvCache::in_memory()).map_err(err)?;
    let mu2 = kz_mu_squared(digits);
    let inv = mu2.inverse().ok_or("mu^2 vanished")?;
    let ns: Vec<i64> = if rel.uses_n() { (n_min..=n_max).collect() } else { vec![1] };
    let mut curves = Vec::new();
    for n in ns {
        let nq = Rational::from_int(n);
        let left = lhs(rel, &nq, max_weight).map_err(err)?;
        let sums = rhs_sums(rel, &z, &mu2, &nq, max_weight, CConvention::default()).map_err(err)?;
        let res = verify(rel, &z, &mu2, &nq, max_weight, CConvention::default()).map_err(err)?;
        let mut scale = BigFloat::from_int_with(1, digits);
        let mut points = Vec::new();
        for (w, s) in sums.iter().enumerate() {
            let rhs = if w % 2 == 0 { (s.clone() * &scale).to_f64() } else { s.to_f64() };
            if w % 2 == 0 {
                scale *= &inv;
            }
            points.push(CurvePoint { degree: w, lhs: left.coeff(w).to_f64(), rhs, residual: res.values[w].magnitude() });
        }
        curves.push(Curve { n, points });
    }
    let out = json!({ "relation": rel.name(), "max_weight": max_weight, "digits": digits, "curves": curves });
    Ok(out.to_string())
}

/// Solves exactly, then checks every associator identity and the relations.
pub fn solve_json(max_weight: usize, seed: u64) -> Result<String, String> {
    if !(2..=MAX_SOLVER_WEIGHT).contains(&max_weight) {
        return Err(format!("weight must be between 2 and {MAX_SOLVER_WEIGHT}"));
    }
    let sol = solve_generic(max_weight, &Parameters::Seed(seed), &SolveOptions::default()).map_err(err)?;
    let mu2 = mu_from_phi(&sol.phi).map_err(err)?;
    let check = check_associator(&sol.phi, &mu2, 0.0).map_err(err)?;
    let mut relations = Vec::new();
    for rel in Relation::ALL {
        let n = Rational::from_int(3);
        let r = verify(rel, &sol.phi, &mu2, &n, max_weight, CConvention::default()).map_err(err)?;
        let failing: Vec<usize> = r.values.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, _)| i).collect();
        relations.push(json!({ "relation": rel.name(), "N": 3, "failing_degrees": failing }));
    }
    let coefficients: Vec<_> = sol
        .phi
        .iter()
        .filter(|(w, _)| w.len() <= 4)
        .map(|(w, c)| json!({ "word": w.to_string(), "value": c.to_string() }))
        .collect();
    let out = json!({
        "max_weight": max_weight,
        "seed": seed,
        "mu_squared": mu2.to_string(),
        "degrees": sol.degrees,
        "check": check,
        "relations": relations,
        "coefficients": coefficients,
    });
    Ok(out.to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn mzv_eval(index: &str, digits: u32) -> Result<String, JsError> {
    js(mzv_eval_json(index, digits))
}

#[wasm_bindgen]
pub fn relation_curves(which: &str, n_min: i32, n_max: i32, max_weight: u32, digits: u32) -> Result<String, JsError> {
    js(relation_curves_json(which, n_min as i64, n_max as i64, max_weight as usize, digits))
}

#[wasm_bindgen]
pub fn solve(max_weight: u32, seed: u32) -> Result<String, JsError> {
    js(solve_json(max_weight as usize, seed as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn zeta_three() {
        let v: Value = serde_json::from_str(&mzv_eval_json("3", 20).unwrap()).unwrap();
        assert_eq!(v["value"], "1.20205690315959428540");
        assert!(mzv_eval_json("2,1", 20).unwrap_err().contains("not admissible"));
        assert!(mzv_eval_json("2", 0).is_err());
    }

    #[test]
    fn curves_for_a() {
        let v: Value = serde_json::from_str(&relation_curves_json("A", 2, 3, 6, 40).unwrap()).unwrap();
        let curves = v["curves"].as_array().unwrap();
        assert_eq!(curves.len(), 2);
        for c in curves {
            let pts = c["points"].as_array().unwrap();
            assert_eq!(pts.len(), 7);
            assert!(pts.iter().all(|p| p["residual"].as_f64().unwrap() < 1e-30));
        }
        // (1 - N^2)/6 at N = 2
        assert!((curves[0]["points"][2]["lhs"].as_f64().unwrap() + 0.5).abs() < 1e-12);
        let d: Value = serde_json::from_str(&relation_curves_json("D", 2, 9, 4, 40).unwrap()).unwrap();
        assert_eq!(d["curves"].as_array().unwrap().len(), 1);
        assert!(relation_curves_json("A", 2, 3, 12, 40).is_err());
    }

    #[test]
    fn solver_round_trip() {
        let v: Value = serde_json::from_str(&solve_json(4, 1).unwrap()).unwrap();
        assert_eq!(v["mu_squared"], "-672/1");
        assert_eq!(v["check"]["pass"], true);
        let rel = v["relations"].as_array().unwrap();
        assert!(rel.iter().all(|r| r["failing_degrees"].as_array().unwrap().is_empty()));
        assert!(solve_json(9, 1).is_err());
    }
}
