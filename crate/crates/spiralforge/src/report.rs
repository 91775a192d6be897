//! The run record: resolved config, curve data, solve results and histories.

use serde::Serialize;
use spiralforge_core::solver::{gate_value, SolvedSurface};
use spiralforge_core::tube::alpha_bound;
use spiralforge_core::SpiralSpec;

use crate::config::RunConfig;

#[derive(Serialize)]
pub struct CurveRecord {
    pub kappa0: f64,
    pub tau0: f64,
    pub rho0: f64,
    pub xi: f64,
    pub delta: f64,
    pub generator: [[f64; 3]; 3],
    pub spiral_abc: [f64; 3],
    pub gate: f64,
    pub alpha_bound: f64,
}

impl CurveRecord {
    pub fn new(spec: &SpiralSpec, ell: f64) -> Self {
        Self {
            kappa0: spec.kappa0,
            tau0: spec.tau0,
            rho0: spec.rho0,
            xi: spec.xi,
            delta: spec.delta,
            generator: spec.r.0.map(|row| row.map(|x| x + 0.0)),
            spiral_abc: [spec.abc.a, spec.abc.b, spec.abc.c],
            gate: gate_value(spec, ell),
            alpha_bound: alpha_bound(spec),
        }
    }
}

#[derive(Serialize)]
pub struct ResultRecord {
    pub converged: bool,
    pub iterations: usize,
    pub final_interior_residual: f64,
    pub b_x: f64,
    pub b_y: f64,
    pub norm_v: f64,
    pub sup_v: f64,
    pub zeta: f64,
    pub u0_c_hat: f64,
    pub u0_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_embed_ell: Option<f64>,
    pub embed_verdict: &'static str,
    pub embed_min_ratio: f64,
    pub self_similarity_defect: f64,
}

#[derive(Serialize)]
pub struct HistoryRecord {
    pub residual: Vec<f64>,
    pub update: Vec<f64>,
    pub damping: Vec<f64>,
}

/// Everything but wall-clock time, so repeated runs compare byte for byte.
#[derive(Serialize)]
pub struct ReportFile<'a> {
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    pub warnings: &'a [String],
    pub config: &'a RunConfig,
    pub curve: CurveRecord,
    pub result: ResultRecord,
    pub history: HistoryRecord,
}

pub fn render(config: &RunConfig, warnings: &[String], spec: &SpiralSpec, solved: &SolvedSurface) -> String {
    let r = &solved.report;
    let file = ReportFile {
        warnings,
        config,
        curve: CurveRecord::new(spec, config.grid.ell),
        result: ResultRecord {
            converged: r.converged,
            iterations: r.iterations,
            final_interior_residual: r.final_interior_residual,
            b_x: r.b_x,
            b_y: r.b_y,
            norm_v: r.norm_v,
            sup_v: r.sup_v,
            zeta: r.zeta,
            u0_c_hat: r.u0_c_hat,
            u0_residual: r.u0_residual,
            max_embed_ell: r.max_embed_ell,
            embed_verdict: r.embed_verdict.as_str(),
            embed_min_ratio: r.embed_min_ratio,
            self_similarity_defect: r.self_similarity_defect,
        },
        history: HistoryRecord {
            residual: r.residual_history.clone(),
            update: r.update_history.clone(),
            damping: r.damping_history.clone(),
        },
    };
    toml::to_string(&file).expect("report serializes")
}
