//! Run configuration: a TOML file with sections, overridden by flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spiralforge_core::solver::{IterationConfig, SolveConfig};
use spiralforge_core::spiral::{frenet_generator, matrix_invariants};
use spiralforge_core::{Mat3, SpiralSpec};

use crate::RunError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurveConfig {
    pub kappa0: f64,
    pub tau0: f64,
    pub xi: f64,
    pub delta: f64,
    /// Explicit generator as its off-diagonal entries `[r12, r13, r23]`.
    /// When absent the Frenet-aligned generator of `(kappa0, tau0)` is used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<[f64; 3]>,
}

impl Default for CurveConfig {
    fn default() -> Self {
        Self { kappa0: 1.0, tau0: 0.0, xi: 1.0, delta: 1e-3, r: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub ell: f64,
    pub n_s: usize,
    pub n_theta: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { ell: 32.0, n_s: 1024, n_theta: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub tol: f64,
    pub residual_tol: f64,
    pub max_iter: usize,
    pub damping: f64,
    /// Upper limit of `δ(1 + |𝕽| + |ξ|)ℓ`.
    pub eps1: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let it = IterationConfig::default();
        Self { tol: it.tol, residual_tol: it.residual_tol, max_iter: it.max_iter, damping: it.damping, eps1: 0.1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub seed: u64,
    pub embed_pairs: usize,
    pub embed_periods: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 0, embed_pairs: 10_000, embed_periods: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExportConfig {
    pub res_s: usize,
    pub res_theta: usize,
    pub first_period: i32,
    pub periods: usize,
}

impl Default for ExportConfig {
    fn default() -> Self {
        Self { res_s: 257, res_theta: 65, first_period: 0, periods: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out") }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub curve: CurveConfig,
    pub grid: GridConfig,
    pub solver: SolverConfig,
    pub verify: VerifyConfig,
    pub export: ExportConfig,
    pub output: OutputConfig,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub kappa0: Option<f64>,
    pub tau0: Option<f64>,
    pub xi: Option<f64>,
    pub delta: Option<f64>,
    pub ell: Option<f64>,
    pub n_s: Option<usize>,
    pub n_theta: Option<usize>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

/// A validated configuration with its curve.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub config: RunConfig,
    pub spec: SpiralSpec,
    pub warnings: Vec<String>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, RunError> {
        toml::from_str(text).map_err(|e| RunError::Rejected(format!("config: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn apply(&mut self, o: &Overrides) {
        let set = |dst: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *dst = v;
            }
        };
        set(&mut self.curve.kappa0, o.kappa0);
        set(&mut self.curve.tau0, o.tau0);
        set(&mut self.curve.xi, o.xi);
        set(&mut self.curve.delta, o.delta);
        set(&mut self.grid.ell, o.ell);
        set(&mut self.solver.tol, o.tol);
        if let Some(v) = o.n_s {
            self.grid.n_s = v;
        }
        if let Some(v) = o.n_theta {
            self.grid.n_theta = v;
        }
        if let Some(v) = o.max_iter {
            self.solver.max_iter = v;
        }
        if let Some(v) = o.seed {
            self.verify.seed = v;
        }
        if let Some(v) = &o.out {
            self.output.dir = v.clone();
        }
    }

    /// Check the hypotheses of the construction and build the curve.
    pub fn resolve(self) -> Result<Resolved, RunError> {
        let (c, g) = (&self.curve, &self.grid);
        let reject = |m: &str| Err(RunError::Rejected(m.to_string()));
        if !(c.kappa0 > 0.0) {
            return reject("kappa0 must be positive: the axis must curve (kappa0 > 0)");
        }
        if !(c.delta > 0.0) {
            return reject("delta must be positive (0 < delta < delta0/|xi|)");
        }
        if !(g.ell > 16.0) {
            return reject(&format!("ell = {} violates the hypothesis ell > 16", g.ell));
        }
        if !g.n_theta.is_power_of_two() || g.n_theta < 4 {
            return reject(&format!("n_theta = {} must be a power of two, at least 4", g.n_theta));
        }
        if g.n_s < 8 || g.n_s % 2 != 0 {
            return reject(&format!("n_s = {} must be even and at least 8", g.n_s));
        }
        if !(self.solver.damping > 0.0 && self.solver.damping <= 1.0) {
            return reject("damping must lie in (0, 1]");
        }
        if self.export.res_s < 2 || self.export.res_theta < 2 || self.export.periods == 0 {
            return reject("export resolution must be at least 2 x 2 with one period");
        }
        let mut warnings = vec![];
        let r = match c.r {
            None => frenet_generator(c.kappa0, c.tau0),
            Some([r12, r13, r23]) => {
                let r = Mat3([[0.0, r12, r13], [-r12, 0.0, r23], [-r13, -r23, 0.0]]);
                let (k, t) = matrix_invariants(&r).map_err(|e| RunError::Rejected(e.to_string()))?;
                let scale = c.kappa0.hypot(c.tau0);
                if (k - c.kappa0).abs() > 1e-12 * scale || (t - c.tau0).abs() > 1e-12 * scale {
                    warnings.push(format!(
                        "explicit generator has (kappa0, tau0) = ({k}, {t}), declared ({}, {}); the generator is used",
                        c.kappa0, c.tau0
                    ));
                }
                r
            }
        };
        let spec = SpiralSpec::new(r, c.delta, c.xi).map_err(|e| RunError::Rejected(e.to_string()))?;
        Ok(Resolved { config: self, spec, warnings })
    }
}

impl Resolved {
    pub fn solve_config(&self) -> SolveConfig {
        let (g, s, v) = (&self.config.grid, &self.config.solver, &self.config.verify);
        SolveConfig {
            ell: g.ell,
            n_s: g.n_s,
            n_theta: g.n_theta,
            iteration: IterationConfig {
                tol: s.tol,
                residual_tol: s.residual_tol,
                max_iter: s.max_iter,
                damping: s.damping,
            },
            eps1: s.eps1,
            embed_pairs: v.embed_pairs,
            embed_periods: v.embed_periods,
            embed_seed: v.seed,
        }
    }
}

/// `SPIRALFORGE_THREADS`, if set, must be a positive integer.
pub fn thread_cap(value: Option<&str>) -> Result<Option<usize>, RunError> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(RunError::Rejected(format!("SPIRALFORGE_THREADS = {v:?} is not a positive integer"))),
        },
    }
}
