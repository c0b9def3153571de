use anyhow::Result;
use ctxgame::classical::optimize_classical;
use ctxgame::classicality::{
    aligned_ensemble, witness_ensemble, guessing_report, incompatibility_witness, is_free_in_any_basis, is_free_povm,
    joint_measurability_check, noise_threshold, pairwise_incompatibility, Compatibility,
};
use ctxgame::nc_bound::{nc_curve, nc_value};
use ctxgame::quantum_opt::{
    analytic_optimal_strategy, optimize_quantum, quantum_ceiling, quantum_curve, AlphaTriple, OptimizerConfig,
};
use ctxgame::qubit::{trine_povm, Povm, Vec3};
use ctxgame::simulation::{equatorial_povm, is_extremal_rank_one, simulator_set, verify_simulation};
use serde_json::{json, Value};
use std::f64::consts::PI;

use crate::report::{fixed6, Check, Report};

const SEVEN_TWELFTHS: f64 = 7.0 / 12.0;

fn is_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9
}

pub struct CurveRow {
    pub alpha0: f64,
    pub p_q: f64,
    pub p_nc: f64,
}

pub fn curve(grid: &[f64], restarts: usize, seed: u64) -> Result<Vec<CurveRow>> {
    let q = quantum_curve(grid, restarts, seed)?;
    let nc = nc_curve(grid)?;
    Ok(q.into_iter()
        .zip(nc)
        .map(|((alpha0, p_q), (_, p_nc))| CurveRow { alpha0, p_q, p_nc })
        .collect())
}

pub fn curve_csv(rows: &[CurveRow], classical: bool) -> String {
    let mut out = String::from(if classical { "alpha0,p_q,p_nc,p_c\n" } else { "alpha0,p_q,p_nc\n" });
    for r in rows {
        out.push_str(&format!("{},{},{}", fixed6(r.alpha0), fixed6(r.p_q), fixed6(r.p_nc)));
        if classical {
            out.push_str(&format!(",{}", fixed6(SEVEN_TWELFTHS)));
        }
        out.push('\n');
    }
    out
}

pub fn curve_json(rows: &[CurveRow], classical: bool) -> String {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut row = json!({ "alpha0": r.alpha0, "p_q": r.p_q, "p_nc": r.p_nc });
            if classical {
                row["p_c"] = json!(SEVEN_TWELFTHS);
            }
            row
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&json!({ "rows": rows })).expect("rows serialize");
    text.push('\n');
    text
}

pub fn bounds(alpha0: f64, restarts: usize, seed: u64, tol: Option<f64>) -> Result<Report> {
    let alpha = AlphaTriple::from_alpha0(alpha0)?;
    let mut config = OptimizerConfig { restarts, seed, ..OptimizerConfig::default() };
    if let Some(t) = tol {
        config.tol = t;
    }
    let quantum = optimize_quantum(&alpha, &config)?;
    let p_nc = nc_value(&alpha)?;
    let p_c = optimize_classical::<f64>()?.value;
    let ceiling = quantum_ceiling::<f64>();
    let analytic = analytic_optimal_strategy::<f64>().success_probability();
    let p_q = quantum.value;
    let gap = p_q - p_nc;
    let trine = is_close(alpha0, 2.0 / 3.0);
    let extreme = is_close(alpha0, 0.0) || is_close(alpha0, 1.0);

    let mut checks = vec![Check::info("alpha", json!(alpha.values()))];
    checks.push(if trine {
        Check::near("p_q", p_q, ceiling, 1e-4)
    } else if extreme {
        Check::near("p_q", p_q, SEVEN_TWELFTHS, 1e-4)
    } else {
        Check::custom("p_q", p_q, None, p_q <= ceiling + 1e-6)
    });
    checks.push(if trine {
        Check::near("p_nc", p_nc, 0.5, 1e-9)
    } else if extreme {
        Check::near("p_nc", p_nc, SEVEN_TWELFTHS, 1e-9)
    } else {
        Check::custom("p_nc", p_nc, None, p_nc <= p_q + 1e-4)
    });
    checks.push(Check::near("p_c", p_c, SEVEN_TWELFTHS, 1e-9));
    checks.push(if trine {
        Check::custom("gap_q_minus_nc", gap, Some(json!(0.122)), gap >= 0.122 - 1e-3)
    } else if extreme {
        Check::custom("gap_q_minus_nc", gap, Some(json!(0.0)), gap.abs() <= 2e-4)
    } else {
        Check::info("gap_q_minus_nc", gap)
    });
    checks.push(Check::near("p_q_max", analytic, ceiling, 1e-12));
    checks.push(Check::custom("supremacy_q_minus_c", analytic - p_c, Some(json!(0.0386)), analytic - p_c >= 0.0386));
    checks.push(Check::info("optimizer_converged", quantum.converged));
    checks.push(Check::info("optimizer_restart_spread", quantum.best_gap));
    checks.push(Check::info(
        "povm_axis_norms",
        json!(quantum.povm_axes.iter().map(|v| v.norm()).collect::<Vec<_>>()),
    ));
    Ok(Report::new("bounds", checks))
}

pub fn simulate(n: usize, tol: Option<f64>) -> Result<Report> {
    let tol = tol.unwrap_or(1e-12);
    let report = verify_simulation::<f64>(n, tol)?;
    let set = simulator_set::<f64>(n)?;
    let target = is_extremal_rank_one(equatorial_povm::<f64>(n)?.povm(), 1e-9)?;
    let members: Vec<bool> = set
        .members
        .iter()
        .map(|m| is_extremal_rank_one(&m.povm, 1e-9).map(|c| c.extremal))
        .collect::<Result<_, _>>()?;
    let five = n == 5;
    let reference = |v: f64| five.then(|| json!(v));
    let checks = vec![
        Check::custom("element_residual", report.element_residual, Some(json!(0.0)), report.element_residual <= tol),
        Check::custom(
            "distribution_residual",
            report.distribution_residual,
            Some(json!(0.0)),
            report.distribution_residual <= tol,
        ),
        Check::custom("simulators_valid", report.simulators_valid, None, report.simulators_valid),
        Check::custom("h0", set.h0, reference(0.894427), !five || (set.h0 - 0.894427).abs() <= 1e-6),
        Check::custom("h1", set.h1, reference(0.552786), !five || (set.h1 - 0.552786).abs() <= 1e-6),
        Check::custom("extremal_target", target.extremal, Some(json!(n == 3)), target.extremal == (n == 3)),
        Check::custom("target_rank", target.rank, None, true),
        Check::custom("extremal_simulators", json!(members), Some(json!(vec![true; n])), members.iter().all(|&e| e)),
    ];
    Ok(Report::new("simulate", checks))
}

pub fn incompat(polygon_k: usize, tol: Option<f64>) -> Result<Report> {
    let set = simulator_set::<f64>(5)?;
    let (m0, m1) = (&set.members[0].povm, &set.members[1].povm);
    let guess = guessing_report(&witness_ensemble(), m0, m1)?;
    let pairs = pairwise_incompatibility(&set, polygon_k)?;
    let flagged = pairs.iter().filter(|p| p.verdict == Compatibility::Incompatible).count();
    let mut pair_margin = f64::INFINITY;
    for p in &pairs {
        let (a, b) = (&set.members[p.first].povm, &set.members[p.second].povm);
        pair_margin = pair_margin.min(incompatibility_witness(a, b, &aligned_ensemble(a, b)?)?);
    }
    let self_check = joint_measurability_check(m0, m0, polygon_k)?;
    let threshold = noise_threshold(m0, m1, polygon_k, tol.unwrap_or(1e-4))?;
    let verdict = |c: Compatibility| format!("{c:?}").to_lowercase();
    let checks = vec![
        Check::near("p_prior", guess.p_prior, 2.0 / 3.0, 1e-12),
        Check::custom("p_post_upper", guess.p_post_upper, Some(json!(0.629)), guess.p_post_upper < 0.64),
        Check::info("p_post_lower", guess.p_post_lower),
        Check::custom(
            "dual_min_eigenvalue",
            guess.dual_min_eigenvalue,
            Some(json!(0.0)),
            guess.dual_min_eigenvalue >= -1e-10,
        ),
        Check::custom("witness_margin", guess.witness_margin, Some(json!(0.037)), guess.witness_margin > 0.02),
        Check::custom("pairs_incompatible", flagged, Some(json!(10)), flagged == pairs.len()),
        Check::custom("smallest_pair_witness_margin", pair_margin, None, pair_margin > 0.0),
        Check::custom(
            "self_compatibility",
            verdict(self_check.verdict),
            None,
            self_check.verdict == Compatibility::Compatible,
        ),
        Check::info("noise_compatible_up_to", threshold.compatible_up_to),
        Check::info("noise_incompatible_from", threshold.incompatible_from),
    ];
    Ok(Report::new("incompat", checks))
}

pub fn coherence(tol: Option<f64>) -> Result<Report> {
    let tol = tol.unwrap_or(1e-9);
    let z = Vec3::new(0.0, 0.0, 1.0);
    let trine = trine_povm([0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]);
    let in_basis = is_free_povm(&trine, z, tol)?;
    let any = is_free_in_any_basis(&trine, tol)?;
    let optimal = is_free_in_any_basis(analytic_optimal_strategy::<f64>().povm(), tol)?;
    let one = Povm::from_weighted_axes(&[1.0, 0.5, 0.5], &[z, -z, -z]);
    let zero = Povm::from_weighted_axes(&[0.0, 1.0, 1.0], &[z, z, -z]);
    let free_one = is_free_in_any_basis(&one, tol)?;
    let free_zero = is_free_in_any_basis(&zero, tol)?;
    let expected_off_axis = (2.0 / 3.0) * (3f64.sqrt() / 2.0) / 2.0;
    let agree = |r: &ctxgame::classicality::AnyBasisReport<f64>| r.collinear == r.commuting && r.commuting == r.diagonal;
    let checks = vec![
        Check::custom("trine_free_in_z_basis", in_basis.free, Some(json!(false)), !in_basis.free),
        Check::near("trine_max_off_axis", in_basis.max_off_axis, expected_off_axis, 1e-9),
        Check::custom("trine_free_in_any_basis", any.free, Some(json!(false)), !any.free),
        Check::custom("optimal_povm_free_in_any_basis", optimal.free, Some(json!(false)), !optimal.free),
        Check::custom("alpha0_1_povm_free", free_one.free, Some(json!(true)), free_one.free),
        Check::custom("alpha0_0_povm_free", free_zero.free, Some(json!(true)), free_zero.free),
        Check::custom(
            "formulations_agree",
            [&any, &optimal, &free_one, &free_zero].iter().all(|r| agree(r)),
            None,
            [&any, &optimal, &free_one, &free_zero].iter().all(|r| agree(r)),
        ),
    ];
    Ok(Report::new("coherence", checks))
}
