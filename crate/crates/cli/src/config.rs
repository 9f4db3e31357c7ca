use serde::{Deserialize, Serialize};

use crate::expr::Expr;
use crate::CliError;
use fracfem::analysis::{potential_x_times_1mx, Example};
use fracfem::{BoundaryCondition, Field, FracOrder, Grading, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExampleKind {
    A,
    B,
    C,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QKind {
    #[default]
    Zero,
    #[serde(rename = "x_times_1mx")]
    XTimes1mx,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    Standard,
    Recon,
    ReconMixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradingKind {
    #[default]
    Uniform,
    Graded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
}

fn default_reference_m() -> usize {
    4096
}

/// One convergence study, as a flat JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub alpha_list: Vec<f64>,
    pub example: ExampleKind,
    #[serde(default)]
    pub q_kind: QKind,
    pub method: MethodKind,
    pub k_min: u32,
    pub k_max: u32,
    #[serde(default)]
    pub grading: GradingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default = "default_reference_m")]
    pub reference_m: usize,
    #[serde(default)]
    pub output: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_expr: Option<String>,
    /// f behaves like x^f_hint at 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_hint: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_expr: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_hint: Option<f64>,
}

impl ExperimentConfig {
    /// Uniform study with default reference size and CSV output.
    pub fn new(alpha_list: Vec<f64>, example: ExampleKind, q_kind: QKind, method: MethodKind, k_min: u32, k_max: u32) -> Self {
        Self {
            alpha_list,
            example,
            q_kind,
            method,
            k_min,
            k_max,
            grading: GradingKind::Uniform,
            delta: None,
            reference_m: default_reference_m(),
            output: OutputFormat::Csv,
            f_expr: None,
            f_hint: None,
            q_expr: None,
            q_hint: None,
        }
    }

    pub fn graded(mut self, delta: f64) -> Self {
        self.grading = GradingKind::Graded;
        self.delta = Some(delta);
        self
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn method(&self) -> Method {
        match self.method {
            MethodKind::Standard => Method::Standard,
            MethodKind::Recon | MethodKind::ReconMixed => Method::Reconstruction,
        }
    }

    pub fn bc(&self) -> BoundaryCondition {
        match self.method {
            MethodKind::ReconMixed => BoundaryCondition::MixedLeftNeumann,
            _ => BoundaryCondition::Dirichlet,
        }
    }

    pub fn grading_spec(&self) -> Grading {
        match (self.grading, self.delta) {
            (GradingKind::Graded, Some(delta)) => Grading::Graded { delta },
            _ => Grading::Uniform,
        }
    }

    pub fn catalog_example(&self) -> Option<Example> {
        match self.example {
            ExampleKind::A => Some(Example::A),
            ExampleKind::B => Some(Example::B),
            ExampleKind::C => Some(Example::C),
            ExampleKind::Custom => None,
        }
    }

    /// Exact solutions are available for q ≡ 0 with a catalog source;
    /// everything else is compared against a fine reference solve.
    pub fn needs_reference(&self) -> bool {
        self.q_kind != QKind::Zero || self.example == ExampleKind::Custom
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.alpha_list.is_empty() {
            return bad("alpha_list is empty".into());
        }
        for &a in &self.alpha_list {
            FracOrder::new(a).map_err(|e| CliError::Config(e.to_string()))?;
            if self.method == MethodKind::ReconMixed && a <= 1.5 {
                return bad(format!("recon_mixed needs every alpha > 3/2, got {a}"));
            }
        }
        if self.k_min > self.k_max {
            return bad(format!("empty level range {}..{}", self.k_min, self.k_max));
        }
        if self.k_min < 1 || self.k_max > 16 {
            return bad(format!("levels must lie in 1..16, got {}..{}", self.k_min, self.k_max));
        }
        if self.reference_m < 2 || !self.reference_m.is_power_of_two() {
            return bad(format!("reference_m must be a power of two, got {}", self.reference_m));
        }
        if self.needs_reference() {
            let log_ref = self.reference_m.trailing_zeros();
            if self.k_max + 3 > log_ref {
                return bad(format!(
                    "k_max = {} needs reference_m >= 2^{} (got {})",
                    self.k_max,
                    self.k_max + 3,
                    self.reference_m
                ));
            }
        }
        match (self.grading, self.delta) {
            (GradingKind::Graded, Some(d)) if d >= 1.0 && d.is_finite() => {}
            (GradingKind::Graded, _) => return bad("graded meshes need delta >= 1".into()),
            (GradingKind::Uniform, Some(_)) => return bad("delta given for a uniform mesh".into()),
            (GradingKind::Uniform, None) => {}
        }
        let custom_f = self.example == ExampleKind::Custom;
        if custom_f != (self.f_expr.is_some() && self.f_hint.is_some()) {
            return bad("f_expr and f_hint are required exactly when example = custom".into());
        }
        let custom_q = self.q_kind == QKind::Custom;
        if custom_q != (self.q_expr.is_some() && self.q_hint.is_some()) {
            return bad("q_expr and q_hint are required exactly when q_kind = custom".into());
        }
        self.source()?;
        self.potential()?;
        Ok(())
    }

    pub fn source(&self) -> Result<Field, CliError> {
        match (self.catalog_example(), &self.f_expr, self.f_hint) {
            (Some(ex), _, _) => Ok(ex.field()),
            (None, Some(text), Some(hint)) => Ok(Expr::parse(text)?.into_field(hint)?),
            _ => Err(CliError::Config("custom example without f_expr/f_hint".into())),
        }
    }

    pub fn potential(&self) -> Result<Field, CliError> {
        match (self.q_kind, &self.q_expr, self.q_hint) {
            (QKind::Zero, _, _) => Ok(Field::zero()),
            (QKind::XTimes1mx, _, _) => Ok(potential_x_times_1mx()),
            (QKind::Custom, Some(text), Some(hint)) => Ok(Expr::parse(text)?.into_field(hint)?),
            _ => Err(CliError::Config("custom potential without q_expr/q_hint".into())),
        }
    }
}
