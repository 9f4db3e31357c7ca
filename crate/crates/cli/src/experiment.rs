use rayon::prelude::*;

use crate::config::{ExperimentConfig, GradingKind};
use crate::CliError;
use fracfem::analysis::{
    error_norms, exact_q0, reference_solution, Approximation, ErrorContext, ExactSolution, WhichField,
};
use fracfem::assembly::assemble_system;
use fracfem::mesh::build_mesh;
use fracfem::solver::{solve_reconstruction, solve_standard};
use fracfem::{ConvergenceReport, ExpectedRates, FracOrder, Grading, LevelRow, Mesh, Method, ProblemSpec};

/// Largest uniform fine mesh used for error norms (applied by FFT).
const FINE_UNIFORM_MAX: usize = 1 << 16;
/// Largest graded fine mesh (dense lead matrix).
const FINE_GRADED_MAX: usize = 1 << 12;

/// Outcome of one α of a study.
#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub alpha: f64,
    pub outcome: Result<ConvergenceReport, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub cells: Vec<CellReport>,
}

impl StudyReport {
    pub fn any_failed(&self) -> bool {
        self.cells.iter().any(|c| c.outcome.is_err())
    }

    /// The report for `alpha`, if that cell succeeded.
    pub fn get(&self, alpha: f64) -> Option<&ConvergenceReport> {
        self.cells.iter().find(|c| c.alpha == alpha).and_then(|c| c.outcome.as_ref().ok())
    }
}

/// Runs every α of the study. Invalid configurations are rejected up front;
/// numerical failures are confined to their own cell.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<StudyReport, CliError> {
    cfg.validate()?;
    let cells = cfg
        .alpha_list
        .par_iter()
        .map(|&alpha| CellReport { alpha, outcome: run_cell(cfg, alpha).map_err(|e| e.to_string()) })
        .collect();
    Ok(StudyReport { cells })
}

fn fine_mesh(cfg: &ExperimentConfig) -> fracfem::Result<Mesh> {
    let m_max = 1usize << cfg.k_max;
    match cfg.grading_spec() {
        Grading::Uniform => Mesh::uniform(cfg.reference_m.max(16 * m_max).min(FINE_UNIFORM_MAX).max(m_max)),
        Grading::Graded { delta } => Mesh::graded((8 * m_max).min(FINE_GRADED_MAX).max(m_max), delta),
    }
}

fn run_cell(cfg: &ExperimentConfig, alpha: f64) -> Result<ConvergenceReport, CliError> {
    let order = FracOrder::new(alpha)?;
    let spec = ProblemSpec::new(order, cfg.potential()?, cfg.source()?, cfg.bc())?;
    let exact = if cfg.needs_reference() {
        reference_solution(&spec, cfg.reference_m)?
    } else {
        exact_q0(&spec)?
    };
    let ctx = ErrorContext::new(fine_mesh(cfg)?, order);
    let rows = (cfg.k_min..=cfg.k_max)
        .into_par_iter()
        .map(|k| level(cfg, &spec, &exact, &ctx, k))
        .collect::<fracfem::Result<Vec<_>>>()?;
    let expected = match (cfg.grading, cfg.catalog_example()) {
        (GradingKind::Uniform, Some(ex)) => {
            Some(ExpectedRates::for_method(cfg.method(), alpha, ex.smoothness(), cfg.bc()))
        }
        _ => None,
    };
    Ok(ConvergenceReport { alpha, rows, expected })
}

fn level(
    cfg: &ExperimentConfig,
    spec: &ProblemSpec,
    exact: &ExactSolution,
    ctx: &ErrorContext,
    k: u32,
) -> fracfem::Result<LevelRow> {
    let m = 1usize << k;
    let mesh = build_mesh(m, cfg.grading_spec())?;
    let (norms, err_mu) = match cfg.method() {
        Method::Standard => {
            let sol = solve_standard(&assemble_system(spec, &mesh, Method::Standard)?)?;
            (error_norms(Approximation::Standard(&sol), exact, WhichField::FullU, ctx)?, None)
        }
        Method::Reconstruction => {
            let sol = solve_reconstruction(spec, &mesh)?;
            let norms = error_norms(Approximation::Recon(&sol), exact, WhichField::RegularPart, ctx)?;
            (norms, Some((exact.mu() - sol.mu_h).abs()))
        }
    };
    Ok(LevelRow {
        k,
        h: 1.0 / m as f64,
        err_l2: norms.l2,
        err_energy: norms.energy,
        err_linf: norms.linf,
        err_mu,
    })
}
