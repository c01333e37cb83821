use nalgebra::DMatrix;
use serde_json::{json, Value};

use super::output::{csv_text, matrix};
use super::{Failure, Outcome, RunConfig, DEFAULT_KM_STEPS, DEFAULT_SIM_STEPS, Z_LIMIT};
use crate::chain::{self, site_of, Site, SpiderParams, StateIndex, ValidatedChain};
use crate::error::Error;
use crate::factorization::{
    beta_feasible, darboux as darboux_chain, thresholds, ul_factorize, verify_product, BetaVector,
};
use crate::oracle::{compare, exact_levels, exact_row, power_block, simulate as simulate_paths};
use crate::quadrature::QuadratureRule;
use crate::spectral::{gram_table, km_block};
use crate::spider_rw::{
    rw_atoms, rw_classify, rw_density, rw_m_minus1, rw_thresholds, rw_weight, support, weight_for, RWParams,
};
use crate::stieltjes::{cf_limit, convergents, CF_TOL};

/// Convergents listed per leg in general-chain reports.
const LISTED_CONVERGENTS: usize = 12;

fn rule(config: &RunConfig, kind: crate::quadrature::RuleKind) -> Result<QuadratureRule, Failure> {
    if config.nodes == 0 {
        return Err(Error::InvalidSpec("--nodes must be positive".into()).into());
    }
    Ok(QuadratureRule::new(kind, config.nodes))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn result_json<T: serde::Serialize>(r: crate::error::Result<T>) -> Value {
    match r {
        Ok(v) => to_json(&v),
        Err(e) => json!({ "error": e.kind(), "message": e.to_string() }),
    }
}

pub fn validate(spec: SpiderParams, _config: &RunConfig) -> Result<Outcome, Failure> {
    let chain = validate_chain(spec)?;
    let normalized = chain.params().to_json_string();
    Ok(Outcome {
        passed: true,
        result: json!({
            "valid": true,
            "n_legs": chain.n_legs,
            "constant": chain.constant_rates().is_some(),
            "chain_file": "chain.json",
        }),
        files: vec![("chain.json".into(), normalized)],
    })
}

fn validate_chain(spec: SpiderParams) -> Result<ValidatedChain, Failure> {
    Ok(chain::validate(spec)?)
}

/// `H_m` from the closed form for constant chains, else from convergents.
fn threshold_values(chain: &ValidatedChain) -> crate::error::Result<Vec<f64>> {
    match RWParams::from_chain(chain) {
        Ok(p) => Ok(rw_thresholds(&p)?.h),
        Err(_) => Ok(thresholds(chain.params(), CF_TOL)?.h),
    }
}

fn parse_beta(config: &RunConfig, chain: &ValidatedChain) -> Result<BetaVector, Failure> {
    let free: Vec<f64> = match config.beta.as_slice() {
        [] => return Err(Error::InvalidBeta("--beta is required".into()).into()),
        [word] if word == "thresholds" => threshold_values(chain)?,
        items => items
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidBeta(format!("cannot parse {s:?}")))
            })
            .collect::<crate::error::Result<_>>()?,
    };
    if free.len() != chain.n_legs {
        return Err(Error::InvalidBeta(format!("{} values given for {} legs", free.len(), chain.n_legs)).into());
    }
    Ok(BetaVector::new(&free)?)
}

pub fn analyze(spec: SpiderParams, config: &RunConfig) -> Result<Outcome, Failure> {
    let chain = validate_chain(spec)?;
    match RWParams::from_chain(&chain) {
        Ok(p) => analyze_constant(&chain, &p, config),
        Err(_) => analyze_general(&chain),
    }
}

fn analyze_constant(chain: &ValidatedChain, p: &RWParams, config: &RunConfig) -> Result<Outcome, Failure> {
    let sup = support(p);
    let n = p.n_legs;
    let samples = config.nodes.max(1);
    let mut rows = Vec::with_capacity(samples);
    for k in 0..samples {
        let x = sup.lo + (sup.hi - sup.lo) * (k as f64 + 0.5) / samples as f64;
        let w = rw_density(p, x)?;
        let mut row = vec![x.to_string()];
        row.extend(w.transpose().iter().map(|v| v.to_string()));
        rows.push(row);
    }
    let mut header = vec!["x".to_string()];
    for i in 0..n {
        for j in 0..n {
            header.push(format!("w_{i}_{j}"));
        }
    }
    let result = json!({
        "kind": "constant",
        "rates": { "a": p.a, "b": p.b, "c": p.c },
        "alpha": p.alpha,
        "support": sup,
        "atoms": to_json(&rw_atoms(p)?),
        "classification": rw_classify(p),
        "thresholds": {
            "closed_form": result_json(rw_thresholds(p)),
            "convergents": result_json(thresholds(chain.params(), CF_TOL)),
        },
        "pi0": matrix(&chain.potential(0).matrix()),
        "m_minus1": match rw_m_minus1(p) {
            Ok(m) => matrix(&m),
            Err(e) => json!({ "error": e.kind() }),
        },
        "density_file": "density.csv",
    });
    Ok(Outcome {
        passed: true,
        result,
        files: vec![("density.csv".into(), csv_text(&header, rows))],
    })
}

fn analyze_general(chain: &ValidatedChain) -> Result<Outcome, Failure> {
    let last = chain.legs.iter().map(|l| l.tail_start()).max().unwrap_or(1);
    let blocks: Vec<Value> = (0..=last)
        .map(|level| {
            let t = chain.blocks(level);
            json!({
                "level": level,
                "A": matrix(&t.a),
                "B": matrix(&t.b),
                "C": t.c.as_ref().map(matrix),
            })
        })
        .collect();
    let potentials: Vec<Vec<f64>> = (0..=last)
        .map(|level| chain.potential(level).diagonal.iter().copied().collect())
        .collect();
    let legs: Vec<Value> = (1..=chain.n_legs)
        .map(|leg| {
            let state = convergents(chain.params(), leg, LISTED_CONVERGENTS);
            json!({
                "leg": leg,
                "convergents": state.convergents,
                "hypothesis_holds": state.hypothesis_holds,
                "strictly_increasing": state.strictly_increasing,
                "limit": result_json(cf_limit(chain.params(), leg, CF_TOL)),
            })
        })
        .collect();
    Ok(Outcome {
        passed: true,
        result: json!({
            "kind": "general",
            "blocks": blocks,
            "potentials": potentials,
            "legs": legs,
            "thresholds": result_json(thresholds(chain.params(), CF_TOL)),
        }),
        files: Vec::new(),
    })
}

pub fn km_check(spec: SpiderParams, config: &RunConfig, tol: f64) -> Result<Outcome, Failure> {
    let chain = validate_chain(spec)?;
    let weight = weight_for(&chain)?;
    let rule = rule(config, weight.rule_kind)?;
    let steps = config.steps.unwrap_or(DEFAULT_KM_STEPS);
    let g = config.grid_levels;
    let mut rows = Vec::new();
    let mut max_error = 0.0f64;
    for i in 0..=g {
        for j in 0..=g {
            for n in 0..=steps {
                let km = km_block(&chain, &weight, i, j, n, &rule)?;
                let exact = power_block(&chain, exact_levels(i, j, n), n, i, j)?;
                let err = (km - exact).amax();
                max_error = max_error.max(err);
                rows.push((i, j, n, err));
            }
        }
    }
    let passed = max_error < tol;
    let table: Vec<Value> = rows
        .iter()
        .map(|&(i, j, n, e)| json!({ "i": i, "j": j, "n": n, "error": e }))
        .collect();
    let csv = csv_text(
        &["i", "j", "n", "error"].map(String::from),
        rows.iter()
            .map(|&(i, j, n, e)| vec![i.to_string(), j.to_string(), n.to_string(), e.to_string()]),
    );
    Ok(Outcome {
        passed,
        result: json!({
            "max_error": max_error,
            "tol": tol,
            "nodes": config.nodes,
            "grid_levels": g,
            "steps": steps,
            "table": table,
        }),
        files: vec![("km_check.csv".into(), csv)],
    })
}

pub fn factorize(spec: SpiderParams, config: &RunConfig, tol: f64) -> Result<Outcome, Failure> {
    let chain = validate_chain(spec)?;
    let beta = parse_beta(config, &chain)?;
    let h = threshold_values(&chain);
    let pair = ul_factorize(&chain, &beta, config.levels)?;
    let residual = verify_product(&chain, &pair, config.levels)?;
    let mut rows = Vec::new();
    for (li, leg) in pair.legs.iter().enumerate() {
        for d in 0..leg.x.len() {
            rows.push(vec![
                (li + 1).to_string(),
                (d + 1).to_string(),
                leg.x[d].to_string(),
                leg.y[d].to_string(),
                leg.r[d].to_string(),
                leg.s[d].to_string(),
            ]);
        }
    }
    let legs: Vec<Value> = pair
        .legs
        .iter()
        .enumerate()
        .map(|(li, leg)| {
            let k = leg.x.len().min(10);
            json!({
                "leg": li + 1,
                "x": &leg.x[..k],
                "y": &leg.y[..k],
                "r": &leg.r[..k],
                "s": &leg.s[..k],
                "locked_from": leg.locked_from,
            })
        })
        .collect();
    let feasible = h.as_ref().ok().map(|h| {
        let th = crate::factorization::Thresholds {
            h: h.clone(),
            sum: h.iter().sum(),
            feasible: h.iter().sum::<f64>() < 1.0,
        };
        beta_feasible(&th, &beta)
    });
    Ok(Outcome {
        passed: residual < tol,
        result: json!({
            "beta": beta.as_slice(),
            "thresholds": result_json(h),
            "beta_above_thresholds": feasible,
            "levels": config.levels,
            "residual": residual,
            "tol": tol,
            "legs": legs,
            "factors_file": "factors.csv",
        }),
        files: vec![(
            "factors.csv".into(),
            csv_text(&["leg", "depth", "x", "y", "r", "s"].map(String::from), rows),
        )],
    })
}

fn row_sum_deviation(t: &crate::chain::BlockTriple) -> f64 {
    t.row_sums().iter().fold(0.0f64, |m, s| m.max((s - 1.0).abs()))
}

pub fn darboux(spec: SpiderParams, config: &RunConfig, tol: f64) -> Result<Outcome, Failure> {
    let chain = validate_chain(spec)?;
    let beta = parse_beta(config, &chain)?;
    let levels = config.levels.max(config.gram_degree + 2);
    let pair = ul_factorize(&chain, &beta, levels)?;
    let d = darboux_chain(&chain, &pair);
    let n = chain.n_legs;
    let mut row_dev = 0.0f64;
    for level in 0..=levels.min(50) {
        row_dev = row_dev.max(row_sum_deviation(&d.blocks(level)?));
    }
    let b0 = d.blocks(0)?;
    let pi0 = crate::factorization::darboux_potential(&chain, &pair, 0)?;
    let mut passed = row_dev < 1e-12;
    let spectral = match RWParams::from_chain(&chain) {
        Ok(p) => {
            let w = rw_weight(&p)?;
            let m1 = rw_m_minus1(&p)?;
            let d = d.clone().with_geronimus(&w, &m1)?;
            let gw = d.weight.clone().expect("weight attached");
            let atom0 = gw
                .atoms
                .iter()
                .find(|a| a.location == 0.0)
                .map(|a| a.mass.clone())
                .unwrap_or_else(|| DMatrix::zeros(n, n));
            let table = gram_table(&d, &gw, config.gram_degree, &rule(config, gw.rule_kind)?)?;
            let (mut off, mut diag) = (0.0f64, 0.0f64);
            for (i, row) in table.iter().enumerate() {
                for (j, g) in row.iter().enumerate() {
                    if i == j {
                        let pi = crate::factorization::darboux_potential(&chain, &pair, i)?;
                        diag = diag.max((g * pi - DMatrix::identity(n, n)).amax());
                    } else {
                        off = off.max(g.amax());
                    }
                }
            }
            let gram_pass = off < tol && diag < tol;
            passed &= gram_pass;
            json!({
                "geronimus_atom_at_zero": matrix(&atom0),
                "m_minus1": matrix(&m1),
                "gram_check": {
                    "max_degree": config.gram_degree,
                    "max_off_diagonal": off,
                    "max_norm_deviation": diag,
                    "tol": tol,
                    "pass": gram_pass,
                },
            })
        }
        Err(_) => json!({ "skipped": "no closed-form weight for a chain with varying rates" }),
    };
    Ok(Outcome {
        passed,
        result: json!({
            "beta": beta.as_slice(),
            "alpha_tilde": d.alpha_tilde(),
            "B0": matrix(&b0.b),
            "A0": matrix(&b0.a),
            "extra_transitions": matrix(&d.extra_transitions()?),
            "pi0": matrix(&pi0),
            "max_row_sum_deviation": row_dev,
            "spectral": spectral,
        }),
        files: Vec::new(),
    })
}

pub fn simulate(spec: SpiderParams, config: &RunConfig, tol: f64) -> Result<Outcome, Failure> {
    let chain = validate_chain(spec)?;
    let start = StateIndex::new(config.start_level, config.start_phase);
    let steps = config.steps.unwrap_or(DEFAULT_SIM_STEPS);
    let emp = simulate_paths(&chain, start, steps, config.paths, config.seed)?;
    let exact = exact_row(&chain, start, steps)?;
    let cmp = compare(&emp, &exact)?;
    let n = chain.n_legs;
    let rows = emp.counts.iter().enumerate().map(|(f, &count)| {
        let (level, phase) = (f / n, f % n);
        let (leg, depth) = match site_of(n, StateIndex::new(level, phase)) {
            Site::Body => (0, 0),
            Site::Leg { leg, depth } => (leg, depth),
        };
        vec![
            level.to_string(),
            phase.to_string(),
            leg.to_string(),
            depth.to_string(),
            count.to_string(),
            (count as f64 / emp.paths as f64).to_string(),
            exact[f].to_string(),
            cmp.z_scores[f].to_string(),
        ]
    });
    let csv = csv_text(
        &["level", "phase", "leg", "depth", "count", "empirical", "exact", "z"].map(String::from),
        rows,
    );
    Ok(Outcome {
        passed: cmp.passes(tol, Z_LIMIT),
        result: json!({
            "start": start,
            "steps": steps,
            "paths": emp.paths,
            "seed": emp.seed,
            "total_variation": cmp.total_variation,
            "max_deviation": cmp.max_deviation,
            "max_abs_z": cmp.max_abs_z,
            "tol": tol,
            "z_limit": Z_LIMIT,
            "distribution_file": "empirical.csv",
        }),
        files: vec![("empirical.csv".into(), csv)],
    })
}
