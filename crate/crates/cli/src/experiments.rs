//! The `norm`, `group`, `uhf` and `metric` experiments.

use std::fs;
use std::path::Path;

use lpst_core::group::{
    ball, commutator_bound, commutator_series, resolvent_approx, GroupModel, LengthFn,
    ResolventMode,
};
use lpst_core::io::{self, AlphaChoice, StateSpec};
use lpst_core::linalg::{random_complex_vector, stream_rng};
use lpst_core::pspace::{op_norm, oracle_norm, PExponent, PVector, ORACLE_MAX_DIM};
use lpst_core::qmetric::{
    alpha_auto, cn_constants, degeneracy_probe, key_estimate, mk_lower, mk_upper, CnTable,
};
use lpst_core::uhf::{
    build_tower, eigenvalue_multiset, dirac, resolvent_inverse, AlphaSeq, UhfSpec, UhfTower,
};
use rayon::prelude::*;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{num, Report, Series, Table};

/// A finished report, possibly with an error to surface after the report
/// has been written (degenerate data is reported, then flagged).
pub struct Outcome {
    pub report: Report,
    pub deferred: Option<CliError>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome {
            report,
            deferred: None,
        }
    }
}

pub(crate) fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn in_file(path: &Path) -> impl FnOnce(lpst_core::Error) -> CliError + '_ {
    move |source| CliError::InFile {
        file: path.to_path_buf(),
        source,
    }
}

fn p_tag(p: PExponent) -> String {
    format!("p{}", p.value())
}

pub fn norm(cfg: &RunConfig, matrix: &Path) -> Result<Outcome, CliError> {
    let a = io::parse_matrix(&read_input(matrix)?).map_err(in_file(matrix))?;
    let budget = cfg.budget();
    let ps = cfg.exponents()?;
    let use_oracle = a.domain().len() <= ORACLE_MAX_DIM;
    let rows = ps
        .par_iter()
        .map(|&p| {
            let est = op_norm(&a, p, &budget)?;
            let oracle = if use_oracle {
                num(oracle_norm(&a, p, cfg.seed)?)
            } else {
                String::new()
            };
            Ok(vec![
                num(p.value()),
                num(est.lower),
                num(est.upper),
                est.method.label(),
                oracle,
            ])
        })
        .collect::<lpst_core::Result<Vec<_>>>()?;
    let mut table = Table::new("norm.csv", &["p", "lower", "upper", "method", "oracle"]);
    rows.into_iter().for_each(|r| table.push(r));
    let mut report = Report::new("norm");
    report.diagnostics = json!({
        "matrix": matrix,
        "rows": a.codomain().len(),
        "cols": a.domain().len(),
        "starts": budget.starts,
        "iterations": budget.iterations,
    });
    report.tables.push(table);
    Ok(report.into())
}

pub fn group(cfg: &RunConfig, group: &str, radius: f64, coeffs: &Path) -> Result<Outcome, CliError> {
    let model: GroupModel = group.parse()?;
    let a = io::parse_group_element(&read_input(coeffs)?, &model).map_err(in_file(coeffs))?;
    if a.is_zero() {
        return Err(CliError::Config(format!("{}: element is zero", coeffs.display())));
    }
    let length = LengthFn::standard(model);
    let start = a.max_length(&length).ceil().max(1.0);
    if radius < start {
        return Err(CliError::Config(format!(
            "radius {radius} does not contain the support (needs >= {start})"
        )));
    }
    let radii: Vec<f64> = (0..)
        .map(|k| start + k as f64)
        .take_while(|r| *r <= radius)
        .collect();
    let balls: Vec<(usize, f64)> = radii
        .iter()
        .map(|&r| {
            let t = ball(model, length, r, cfg.ball_cap)?;
            let (_, residual) = resolvent_approx(&t, ResolventMode::Squared)?;
            Ok((t.len(), residual))
        })
        .collect::<lpst_core::Result<_>>()?;

    let budget = cfg.budget();
    let ps = cfg.exponents()?;
    let series = ps
        .par_iter()
        .map(|&p| commutator_series(&a, model, &radii, p, &budget, cfg.ball_cap))
        .collect::<lpst_core::Result<Vec<_>>>()?;

    let mut table = Table::new(
        "group.csv",
        &[
            "p",
            "radius",
            "ball_size",
            "lower",
            "upper",
            "analytic_bound",
            "resolvent_residual",
        ],
    );
    let mut report = Report::new("group");
    for (&p, s) in ps.iter().zip(&series) {
        let bound = commutator_bound(&a, &length, p);
        for ((r, est), (size, residual)) in s.iter().zip(&balls) {
            table.push(vec![
                num(p.value()),
                num(*r),
                size.to_string(),
                num(est.lower),
                num(est.upper),
                num(bound),
                num(*residual),
            ]);
        }
        report.series.push(Series {
            name: format!("group_commutator_lower_{}", p_tag(p)),
            x_label: "radius".into(),
            y_label: "commutator_lower".into(),
            points: s.iter().map(|(r, e)| (*r, e.lower)).collect(),
        });
    }
    report.series.push(Series {
        name: "group_resolvent_residual".into(),
        x_label: "radius".into(),
        y_label: "residual".into(),
        points: radii.iter().zip(&balls).map(|(r, b)| (*r, b.1)).collect(),
    });
    report.tables.push(table);
    report.diagnostics = json!({
        "group": model.to_string(),
        "support": a.support().len(),
        "l1_norm": a.l1_norm(),
        "radii": radii,
    });
    Ok(report.into())
}

fn tower_for(cfg: &RunConfig, dims: &[usize]) -> Result<UhfTower, CliError> {
    Ok(build_tower(&UhfSpec::new(dims.to_vec())?, cfg.tower_cap)?)
}

fn cn_table(cn: &CnTable, p: PExponent, table: &mut Table) {
    for l in cn.levels() {
        table.push(vec![
            num(p.value()),
            l.level.to_string(),
            l.kernel_flag.to_string(),
            num(l.c),
            num(l.c_lower),
            l.dimension.to_string(),
        ]);
    }
}

const CN_HEADER: [&str; 6] = ["p", "level", "kernel_flag", "c", "c_lower", "dimension"];

/// Explicit alpha, or `alpha_auto` of the c_n table at the first exponent.
fn resolve_alpha(
    tower: &UhfTower,
    choice: &AlphaChoice,
    tables: &[(PExponent, CnTable)],
) -> lpst_core::Result<AlphaSeq> {
    match choice {
        AlphaChoice::Explicit(v) => {
            let a = AlphaSeq::new(v.clone())?;
            if a.levels() != tower.levels() {
                return Err(lpst_core::Error::ShapeMismatch(format!(
                    "alpha has {} entries, dims has {}",
                    v.len(),
                    tower.levels() + 1
                )));
            }
            Ok(a)
        }
        AlphaChoice::Auto {} => alpha_auto(&tables[0].1),
    }
}

pub fn uhf(cfg: &RunConfig, dims: &[usize], alpha: &AlphaChoice) -> Result<Outcome, CliError> {
    let tower = tower_for(cfg, dims)?;
    let ps = cfg.exponents()?;
    let budget = cfg.budget();
    let cns: Vec<(PExponent, CnTable)> = ps
        .iter()
        .map(|&p| Ok((p, cn_constants(&tower, p, &budget)?)))
        .collect::<lpst_core::Result<_>>()?;
    let mut cn_csv = Table::new("uhf_cn.csv", &CN_HEADER);
    for (p, cn) in &cns {
        cn_table(cn, *p, &mut cn_csv);
    }
    let mut report = Report::new("uhf");
    let alpha = match resolve_alpha(&tower, alpha, &cns) {
        Ok(a) => a,
        Err(e) => {
            report.tables.push(cn_csv);
            return Ok(Outcome {
                report,
                deferred: Some(e.into()),
            });
        }
    };

    let d = dirac(&tower, &alpha)?;
    let r = resolvent_inverse(&tower, &alpha)?;
    let mut spectrum = Table::new(
        "uhf_spectrum.csv",
        &["index", "dirac_eigenvalue", "resolvent_eigenvalue"],
    );
    let ev = eigenvalue_multiset(&d);
    let rev = eigenvalue_multiset(&r);
    for (i, (x, y)) in ev.iter().zip(&rev).enumerate() {
        spectrum.push(vec![i.to_string(), num(clean(*x)), num(clean(*y))]);
    }

    let mut rng = stream_rng(cfg.seed, 0);
    let eta = PVector::new(
        tower.full_space().clone(),
        random_complex_vector(&mut rng, tower.dim()),
    )?;
    let a_top = tower.random_level_operator(tower.levels(), &mut rng)?;
    let ranks = tower.q_ranks();
    let mut levels = Table::new(
        "uhf_levels.csv",
        &[
            "p",
            "level",
            "level_dim",
            "q_rank",
            "alpha",
            "pi_lower",
            "pi_upper",
            "iota_lower",
            "iota_upper",
            "strong_convergence",
            "key_lhs",
            "key_rhs",
        ],
    );
    let per_p = ps
        .par_iter()
        .map(|&p| {
            let profile = tower.strong_convergence_profile(&eta, p)?;
            let rows = (0..=tower.levels())
                .map(|n| {
                    let pi = op_norm(tower.pi(n), p, &budget)?;
                    let iota = op_norm(tower.iota(n), p, &budget)?;
                    let (kl, kr) = if n == 0 {
                        (String::new(), String::new())
                    } else {
                        let (l, r) = key_estimate(&tower, &alpha, &a_top, n, p)?;
                        (num(l), num(r))
                    };
                    Ok(vec![
                        num(p.value()),
                        n.to_string(),
                        tower.spec().level_dim(n).to_string(),
                        ranks[n].to_string(),
                        num(alpha.values()[n]),
                        num(pi.lower),
                        num(pi.upper),
                        num(iota.lower),
                        num(iota.upper),
                        num(profile[n]),
                        kl,
                        kr,
                    ])
                })
                .collect::<lpst_core::Result<Vec<_>>>()?;
            Ok((profile, rows))
        })
        .collect::<lpst_core::Result<Vec<_>>>()?;
    for (&p, (profile, rows)) in ps.iter().zip(per_p) {
        rows.into_iter().for_each(|r| levels.push(r));
        report.series.push(Series {
            name: format!("uhf_strong_convergence_{}", p_tag(p)),
            x_label: "level".into(),
            y_label: "norm_Pn_eta_minus_eta".into(),
            points: profile.iter().enumerate().map(|(n, v)| (n as f64, *v)).collect(),
        });
    }

    let degeneracy: Vec<serde_json::Value> = ps
        .iter()
        .map(|&p| {
            let r = degeneracy_probe(&tower, &alpha, p)?;
            Ok(json!({
                "p": p.value(),
                "dimension": r.dimension,
                "algebra_dimension": r.algebra_dimension,
                "witnesses": r.witnesses.len(),
            }))
        })
        .collect::<lpst_core::Result<_>>()?;
    report.tables.extend([spectrum, levels, cn_csv]);
    report.diagnostics = json!({
        "dims": dims,
        "alpha": alpha.values(),
        "dimension": tower.dim(),
        "degeneracy": degeneracy,
    });
    Ok(report.into())
}

/// Rounds eigenvalues that are zero up to rounding to exactly zero, so
/// reports do not print `-1e-17`.
fn clean(x: f64) -> f64 {
    if x.abs() < 1e-13 {
        0.0
    } else {
        x
    }
}

fn states_from_files(paths: &[std::path::PathBuf]) -> Result<Vec<StateSpec>, CliError> {
    paths
        .iter()
        .map(|p| io::parse_state(&read_input(p)?).map_err(in_file(p)))
        .collect()
}

pub fn metric(
    cfg: &RunConfig,
    dims: &[usize],
    alpha: &AlphaChoice,
    state_files: &[std::path::PathBuf],
) -> Result<Outcome, CliError> {
    let tower = tower_for(cfg, dims)?;
    let specs = states_from_files(state_files)?;
    let states = specs
        .iter()
        .zip(state_files)
        .map(|(s, f)| s.realize(&tower).map_err(in_file(f)))
        .collect::<Result<Vec<_>, _>>()?;
    let ps = cfg.exponents()?;
    let budget = cfg.budget();
    let cns: Vec<(PExponent, CnTable)> = ps
        .iter()
        .map(|&p| Ok((p, cn_constants(&tower, p, &budget)?)))
        .collect::<lpst_core::Result<_>>()?;
    let mut cn_csv = Table::new("metric_cn.csv", &CN_HEADER);
    for (p, cn) in &cns {
        cn_table(cn, *p, &mut cn_csv);
    }
    let mut report = Report::new("metric");
    let alpha = match resolve_alpha(&tower, alpha, &cns) {
        Ok(a) => a,
        Err(e) => {
            report.tables.push(cn_csv);
            return Ok(Outcome {
                report,
                deferred: Some(e.into()),
            });
        }
    };

    let pairs: Vec<(usize, usize)> = (0..states.len())
        .flat_map(|i| (i + 1..states.len()).map(move |j| (i, j)))
        .collect();
    let cells: Vec<(PExponent, f64, usize, usize)> = cns
        .iter()
        .map(|(p, cn)| Ok((*p, mk_upper(&alpha, cn)?)))
        .collect::<lpst_core::Result<Vec<_>>>()?
        .into_iter()
        .flat_map(|(p, up)| pairs.iter().map(move |&(i, j)| (p, up, i, j)))
        .collect();
    let results = cells
        .par_iter()
        .enumerate()
        .map(|(k, &(p, _, i, j))| {
            let b = lpst_core::pspace::Budget {
                seed: budget.seed.wrapping_add(k as u64),
                ..budget
            };
            mk_lower(&tower, &alpha, &states[i], &states[j], p, &b)
        })
        .collect::<lpst_core::Result<Vec<_>>>()?;

    let mut table = Table::new(
        "metric.csv",
        &["omega", "psi", "p", "lower", "upper", "witness_file"],
    );
    for (&(p, up, i, j), est) in cells.iter().zip(&results) {
        let witness_file = match &est.witness {
            Some(w) => {
                let name = format!("witnesses/mk_{i}_{j}_{}.txt", p_tag(p));
                let op = lpst_core::pspace::OperatorMatrix::square(tower.full_space().clone(), w.clone())?;
                report.attachments.push((name.clone(), io::write_matrix(&op)));
                name
            }
            None => String::new(),
        };
        table.push(vec![
            state_name(&specs[i], state_files, i),
            state_name(&specs[j], state_files, j),
            num(p.value()),
            num(est.lower),
            num(if est.lower.is_infinite() { f64::INFINITY } else { up }),
            witness_file,
        ]);
    }

    // bounds for the first pair on every truncation of the tower
    let mut level_series = Vec::new();
    if let Some(&(i, j)) = pairs.first() {
        for &p in &ps {
            let mut lower_pts = Vec::new();
            let mut upper_pts = Vec::new();
            for m in 1..=tower.levels() {
                let sub = tower_for(cfg, &dims[..=m])?;
                let (Ok(w), Ok(s)) = (specs[i].realize(&sub), specs[j].realize(&sub)) else {
                    continue;
                };
                let sub_alpha = AlphaSeq::new(alpha.values()[..=m].to_vec())?;
                let est = mk_lower(&sub, &sub_alpha, &w, &s, p, &budget)?;
                let cn = cn_constants(&sub, p, &budget)?;
                lower_pts.push((m as f64, est.lower));
                let up = mk_upper(&sub_alpha, &cn)?;
                upper_pts.push((m as f64, if est.lower.is_infinite() { f64::INFINITY } else { up }));
            }
            level_series.push(Series {
                name: format!("metric_lower_vs_level_{}", p_tag(p)),
                x_label: "level".into(),
                y_label: "mk_lower".into(),
                points: lower_pts,
            });
            level_series.push(Series {
                name: format!("metric_upper_vs_level_{}", p_tag(p)),
                x_label: "level".into(),
                y_label: "mk_upper".into(),
                points: upper_pts,
            });
        }
    }
    report.series = level_series;

    let mut degeneracy = Table::new(
        "metric_degeneracy.csv",
        &["p", "dimension", "algebra_dimension", "witnesses"],
    );
    for &p in &ps {
        let r = degeneracy_probe(&tower, &alpha, p)?;
        degeneracy.push(vec![
            num(p.value()),
            r.dimension.to_string(),
            r.algebra_dimension.to_string(),
            r.witnesses.len().to_string(),
        ]);
    }
    report.tables.extend([table, cn_csv, degeneracy]);
    report.diagnostics = json!({
        "dims": dims,
        "alpha": alpha.values(),
        "states": state_files,
        "starts": budget.starts,
        "iterations": budget.iterations,
    });
    Ok(report.into())
}

fn state_name(spec: &StateSpec, files: &[std::path::PathBuf], i: usize) -> String {
    let stem = files[i]
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    format!("{stem}:{}", spec.label())
}
