use std::fs;
use std::path::{Path, PathBuf};

use drinfeld::braid::check_associator;
use drinfeld::kz::{build_kz, check_kz, kz_mu_squared};
use drinfeld::mzv::{self, MzvCache};
use drinfeld::ncseries::ZetaProvider;
use drinfeld::relations::{verify_report, CConvention, Provenance, Relation, RelationReport};
use drinfeld::solver::{mu_from_phi, solve_generic, Parameters, SolveOptions};
use drinfeld::{BigFloat, Error, Index, NCSeries, Rational, Result, Scalar};
use serde::Serialize;

use crate::VerifyArgs;

fn open_cache(path: Option<&Path>) -> Result<MzvCache> {
    match path {
        Some(p) => MzvCache::open(p),
        None => Ok(MzvCache::in_memory()),
    }
}

fn check_numeric(max_weight: usize, digits: u32, tol_exp: Option<u32>) -> Result<()> {
    if max_weight < 2 {
        return Err(Error::Invalid(format!("--max-weight must be at least 2, got {max_weight}")));
    }
    if digits < 30 {
        return Err(Error::Invalid(format!("numeric runs need --digits >= 30, got {digits}")));
    }
    if let Some(e) = tol_exp {
        if e + 10 > digits {
            return Err(Error::Invalid(format!("--tol-exp {e} exceeds digits - 10 = {}", digits as i64 - 10)));
        }
    }
    Ok(())
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

pub fn mzv_eval(index: &str, digits: u32, cache: Option<&Path>) -> Result<bool> {
    let k: Index = index.parse()?;
    if !k.is_admissible() {
        return Err(Error::NotAdmissible(k.to_string()));
    }
    let cache = open_cache(cache)?;
    let value = match cache.get(&k, digits) {
        Some(v) => v,
        None => {
            let r = mzv::eval(&k, digits)?;
            cache.insert_all(std::slice::from_ref(&r))?;
            r.value
        }
    };
    println!("{}", value.to_decimal(digits as usize));
    Ok(true)
}

pub fn mzv_table(max_weight: usize, digits: u32, cache_path: &Path) -> Result<bool> {
    let cache = MzvCache::open(cache_path)?;
    let values = mzv::table(max_weight, digits, &cache)?;
    println!("{} values through weight {max_weight} at {digits} digits; cache {} holds {} records", values.len(), cache_path.display(), cache.len());
    println!("digest {}", cache.digest());
    Ok(true)
}

pub fn kz_build(max_weight: usize, digits: u32, cache: Option<&Path>, out: &Path) -> Result<bool> {
    check_numeric(max_weight, digits, None)?;
    let t = build_kz(max_weight, digits, &open_cache(cache)?)?;
    t.phi.write_file(out)?;
    eprintln!("wrote {} terms through weight {max_weight} to {}", t.phi.num_terms(), out.display());
    Ok(true)
}

pub fn kz_check(max_weight: usize, digits: u32, cache: Option<&Path>, tol_exp: u32) -> Result<bool> {
    check_numeric(max_weight, digits, Some(tol_exp))?;
    let t = build_kz(max_weight, digits, &open_cache(cache)?)?;
    let report = check_kz(&t, 10f64.powi(-(tol_exp as i32)))?;
    print_json(&report)?;
    Ok(report.pass)
}

#[derive(Serialize)]
struct SolveSidecar<'a> {
    max_weight: usize,
    seed: u64,
    hexagon_mu2: Option<String>,
    shuffle: bool,
    mu_squared: String,
    degrees: &'a [drinfeld::solver::DegreeReport],
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".dims.json");
    PathBuf::from(s)
}

pub fn assoc_solve(max_weight: usize, seed: u64, hexagon_mu2: Option<&str>, no_shuffle: bool, out: &Path) -> Result<bool> {
    let hexagon_mu_squared = hexagon_mu2.map(str::parse::<Rational>).transpose()?;
    let opts = SolveOptions { shuffle_off: no_shuffle, hexagon_mu_squared: hexagon_mu_squared.clone() };
    let sol = solve_generic(max_weight, &Parameters::Seed(seed), &opts)?;
    sol.phi.write_file(out)?;
    let side = SolveSidecar {
        max_weight,
        seed,
        hexagon_mu2: hexagon_mu_squared.map(|q| q.to_string()),
        shuffle: !no_shuffle,
        mu_squared: mu_from_phi(&sol.phi)?.to_string(),
        degrees: &sol.degrees,
    };
    fs::write(sidecar_path(out), serde_json::to_string_pretty(&side)? + "\n")?;
    for d in &sol.degrees {
        eprintln!("degree {}: {} unknowns, rank {}, dimension {}", d.degree, d.unknowns, d.rank, d.dimension);
    }
    eprintln!("wrote {} and {}", out.display(), sidecar_path(out).display());
    Ok(true)
}

enum Loaded {
    Exact(NCSeries<Rational>),
    Numeric(NCSeries<BigFloat>),
}

fn load_series(path: &Path) -> Result<Loaded> {
    let text = fs::read_to_string(path)?;
    let header = text.lines().next().unwrap_or("");
    if header.split_whitespace().any(|f| f == "scalar=bigfloat") {
        Ok(Loaded::Numeric(NCSeries::from_text(&text)?))
    } else {
        Ok(Loaded::Exact(NCSeries::from_text(&text)?))
    }
}

pub fn assoc_check(file: &Path, tol_exp: u32) -> Result<bool> {
    let tol = 10f64.powi(-(tol_exp as i32));
    let report = match load_series(file)? {
        Loaded::Exact(phi) => check_associator(&phi, &mu_from_phi(&phi)?, tol)?,
        Loaded::Numeric(phi) => check_associator(&phi, &mu_from_phi(&phi)?, tol)?,
    };
    print_json(&report)?;
    eprintln!("degenerate associator: {}", report.degenerate);
    Ok(report.pass)
}

/// Everything that determines a relations run, echoed into its report.
#[derive(Clone, Debug, Serialize)]
struct RunConfig {
    relations: Vec<Relation>,
    phi: String,
    max_weight: usize,
    max_weight_c: Option<usize>,
    #[serde(rename = "N")]
    n: Vec<String>,
    digits: Option<u32>,
    seed: Option<u64>,
    tolerance_exponent: Option<u32>,
    convention: String,
    cache: Option<String>,
}

#[derive(Serialize)]
struct RunReport {
    config: RunConfig,
    cache_digest: Option<String>,
    pass: bool,
    reports: Vec<RelationReport>,
}

fn parse_which(s: &str) -> Result<Vec<Relation>> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Relation::ALL.to_vec());
    }
    let mut out: Vec<Relation> = s.split(',').map(Relation::parse).collect::<Result<_>>()?;
    out.dedup();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn run_all<S: Scalar>(
    rels: &[Relation],
    z: &dyn ZetaProvider<S>,
    mu2: &S,
    ns: &[Rational],
    cfg: &RunConfig,
    conv: CConvention,
    tol: f64,
    prov: &Provenance,
) -> Result<Vec<RelationReport>> {
    rels.iter()
        .map(|&rel| {
            let order = match (rel, cfg.max_weight_c) {
                (Relation::C, Some(wc)) => wc.min(cfg.max_weight),
                _ => cfg.max_weight,
            };
            let r = verify_report(rel, z, mu2, ns, order, conv, tol, prov)?;
            eprintln!("relation {} through h^{order}: {}", rel.name(), if r.pass { "pass" } else { "FAIL" });
            Ok(r)
        })
        .collect()
}

pub fn relations_verify(a: &VerifyArgs) -> Result<bool> {
    let rels = parse_which(&a.which)?;
    let conv = CConvention::parse(&a.convention)?;
    let ns: Vec<Rational> = a.n.iter().map(|s| s.trim().parse()).collect::<Result<_>>()?;
    if a.max_weight < 2 {
        return Err(Error::Invalid(format!("--max-weight must be at least 2, got {}", a.max_weight)));
    }
    let tol = 10f64.powi(-(a.tol_exp as i32));
    let mut cfg = RunConfig {
        relations: rels.clone(),
        phi: a.phi.clone(),
        max_weight: a.max_weight,
        max_weight_c: a.max_weight_c,
        n: ns.iter().map(Rational::to_string).collect(),
        digits: None,
        seed: None,
        tolerance_exponent: None,
        convention: conv.name().to_string(),
        cache: None,
    };
    let mut cache_digest = None;
    let reports = match a.phi.as_str() {
        "kz" => {
            check_numeric(a.max_weight, a.digits, Some(a.tol_exp))?;
            cfg.digits = Some(a.digits);
            cfg.tolerance_exponent = Some(a.tol_exp);
            cfg.cache = a.cache.as_ref().map(|p| p.display().to_string());
            let cache = open_cache(a.cache.as_deref())?;
            let z = mzv::zeta_map(a.max_weight, a.digits, &cache)?;
            cache_digest = Some(cache.digest());
            let prov = Provenance {
                phi_source: format!("KZ associator from MZVs at {} digits", a.digits),
                mu: "2 pi i (mu^2 = -4 pi^2)".into(),
            };
            run_all(&rels, &z, &kz_mu_squared(a.digits), &ns, &cfg, conv, tol, &prov)?
        }
        "generic" => {
            cfg.seed = Some(a.seed);
            let sol = solve_generic(a.max_weight, &Parameters::Seed(a.seed), &SolveOptions::default())?;
            let mu2 = mu_from_phi(&sol.phi)?;
            let prov = Provenance {
                phi_source: format!("solver output, seed {}, weight {}", a.seed, a.max_weight),
                mu: format!("mu^2 = -24 zeta_phi(2) = {mu2}"),
            };
            run_all(&rels, &sol.phi, &mu2, &ns, &cfg, conv, tol, &prov)?
        }
        path => match load_series(Path::new(path))? {
            Loaded::Exact(phi) => {
                let mu2 = mu_from_phi(&phi)?;
                let prov = Provenance { phi_source: format!("file {path}"), mu: format!("mu^2 = -24 zeta_phi(2) = {mu2}") };
                run_all(&rels, &phi, &mu2, &ns, &cfg, conv, tol, &prov)?
            }
            Loaded::Numeric(phi) => {
                cfg.tolerance_exponent = Some(a.tol_exp);
                let mu2 = mu_from_phi(&phi)?;
                let prov = Provenance {
                    phi_source: format!("file {path}"),
                    mu: format!("mu^2 = -24 zeta_phi(2) = {}", mu2.to_decimal(20)),
                };
                run_all(&rels, &phi, &mu2, &ns, &cfg, conv, tol, &prov)?
            }
        },
    };
    let pass = reports.iter().all(|r| r.pass);
    let doc = RunReport { config: cfg, cache_digest, pass, reports };
    let text = serde_json::to_string_pretty(&doc)? + "\n";
    match &a.report {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(pass)
}
