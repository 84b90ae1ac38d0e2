//! Experiment configuration files.
//!
//! A config is a TOML document. Top-level keys describe the model and the
//! SIR parameters; `[law]`, `[grid]`, `[mc]`, `[quadrature]` and `[compare]`
//! are optional sections. See `experiments/` for one file per kind.

use std::fmt;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use coxnet::analytic::log_grid;
use coxnet::equivalence::{map_parameters, ModelSpec};
use coxnet::montecarlo::{Generator, PLM_B_PER_MU};
use coxnet::{HalfLengthLaw, McConfig, Model, ModelParams, QuadratureSpec};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    TauCheck,
    Nn,
    NeighborStats,
    Success,
    PlmFit,
    Equivalence,
    NearestTransmitter,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = toml::Value::try_from(self).map_err(|_| fmt::Error)?;
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

/// Street model, or a homogeneous PPP on a line (`ppp1`) or in the plane (`ppp2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelName {
    Og,
    Plp,
    Psp,
    Plm,
    Ppp1,
    Ppp2,
}

impl ModelName {
    pub fn street_model(self) -> Option<Model> {
        match self {
            ModelName::Og => Some(Model::Og),
            ModelName::Plp => Some(Model::Plp),
            ModelName::Psp => Some(Model::Psp),
            ModelName::Plm => Some(Model::Plm),
            ModelName::Ppp1 | ModelName::Ppp2 => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ModelName::Og => "OG",
            ModelName::Plp => "PLP",
            ModelName::Psp => "PSP",
            ModelName::Plm => "PLM",
            ModelName::Ppp1 => "PPP1",
            ModelName::Ppp2 => "PPP2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LawSpec {
    Deterministic { h0: f64 },
    Rayleigh { b: f64 },
    Discrete { values: Vec<f64>, weights: Vec<f64> },
    Tabulated { edges: Vec<f64>, density: Vec<f64> },
}

impl LawSpec {
    pub fn build(&self) -> Result<HalfLengthLaw> {
        Ok(match self {
            LawSpec::Deterministic { h0 } => HalfLengthLaw::deterministic(*h0)?,
            LawSpec::Rayleigh { b } => HalfLengthLaw::rayleigh(*b)?,
            LawSpec::Discrete { values, weights } => HalfLengthLaw::discrete(values.clone(), weights.clone())?,
            LawSpec::Tabulated { edges, density } => HalfLengthLaw::tabulated(edges.clone(), density.clone())?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    /// Explicit θ values; overrides the log-spaced range.
    pub theta: Option<Vec<f64>>,
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_points: usize,
    /// Explicit r values; overrides the linear range from 0.
    pub r: Option<Vec<f64>>,
    pub r_max: f64,
    pub r_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            theta: None,
            theta_min: 1e-2,
            theta_max: 1e2,
            theta_points: 40,
            r: None,
            r_max: 10.0,
            r_points: 41,
        }
    }
}

fn check_sorted(name: &str, v: &[f64]) -> Result<()> {
    ensure!(!v.is_empty(), "{name} grid is empty");
    ensure!(v.iter().all(|x| x.is_finite() && *x >= 0.0), "{name} grid has negative or non-finite values");
    ensure!(v.windows(2).all(|w| w[0] < w[1]), "{name} grid is not strictly increasing");
    Ok(())
}

impl GridSpec {
    pub fn theta(&self) -> Result<Vec<f64>> {
        let t = match &self.theta {
            Some(t) => t.clone(),
            None => log_grid(self.theta_min, self.theta_max, self.theta_points)?,
        };
        check_sorted("theta", &t)?;
        Ok(t)
    }

    pub fn r(&self) -> Result<Vec<f64>> {
        let r = match &self.r {
            Some(r) => r.clone(),
            None => {
                ensure!(self.r_points >= 2 && self.r_max > 0.0, "r grid needs r_max > 0 and at least two points");
                let n = self.r_points - 1;
                (0..=n).map(|i| self.r_max * i as f64 / n as f64).collect()
            }
        };
        check_sorted("r", &r)?;
        Ok(r)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McSpec {
    /// Realizations (fields for the PLM); 0 disables Monte Carlo.
    pub n: usize,
    pub seed: u64,
    pub ci_level: f64,
    pub r_int: Option<f64>,
    pub window: Option<f64>,
    /// PLM only: typical points per field and central disk radius.
    pub per_field: Option<usize>,
    pub central: Option<f64>,
    /// tau-check only: radius of the observation disk.
    pub radius: f64,
}

impl Default for McSpec {
    fn default() -> Self {
        Self {
            n: 1000,
            seed: 1,
            ci_level: 0.95,
            r_int: None,
            window: None,
            per_field: None,
            central: None,
            radius: 10.0,
        }
    }
}

impl McSpec {
    pub fn config(&self) -> McConfig {
        let mut mc = McConfig::new(self.n, self.seed);
        mc.ci_level = self.ci_level;
        mc.r_int = self.r_int;
        mc.window = self.window;
        mc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        let q = QuadratureSpec::default();
        Self {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
        }
    }
}

/// Second model for equivalence, comparison plots and Conjecture-style checks.
/// Omitted fields are mapped from the primary model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareSpec {
    pub model: ModelName,
    pub mu: Option<f64>,
    pub order: Option<u8>,
    pub law: Option<LawSpec>,
    /// Stick scale for the PLP to PSP mapping.
    pub c: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub kind: Kind,
    pub model: ModelName,
    #[serde(default = "default_order")]
    pub order: u8,
    #[serde(default)]
    pub mu: f64,
    /// Vehicles per unit length (per unit area for `ppp2`).
    pub lambda: f64,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default = "default_d")]
    pub d: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Add 1-D and 2-D PPP reference columns to success output.
    #[serde(default)]
    pub baselines: bool,
    pub law: Option<LawSpec>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub mc: McSpec,
    #[serde(default)]
    pub quadrature: QuadSpec,
    pub compare: Option<CompareSpec>,
}

fn default_order() -> u8 {
    2
}

fn default_p() -> f64 {
    1.0
}

fn default_d() -> f64 {
    0.25
}

fn default_alpha() -> f64 {
    4.0
}

/// One fully resolved model of an experiment.
#[derive(Clone, Debug)]
pub struct Side {
    pub model: ModelName,
    pub order: u8,
    pub mu: f64,
    pub law: Option<HalfLengthLaw>,
}

impl Side {
    pub fn label(&self) -> String {
        format!("{}-m{}", self.model.label(), self.order)
    }

    /// Rayleigh scale of the PLM approximation: the given law or `1.04·μ`.
    pub fn plm_b(&self) -> Result<f64> {
        match &self.law {
            Some(HalfLengthLaw::Rayleigh { b }) => Ok(*b),
            Some(_) => bail!("PLM half-length law must be Rayleigh"),
            None => Ok(PLM_B_PER_MU * self.mu),
        }
    }

    pub fn generator(&self, mc: &McSpec) -> Result<Generator> {
        let g = match self.model {
            ModelName::Ppp1 => Generator::Ppp { dim: 1 },
            ModelName::Ppp2 => Generator::Ppp { dim: 2 },
            ModelName::Og | ModelName::Plp => Generator::Lines {
                model: self.model.street_model().expect("line model"),
                m: self.order,
                mu: self.mu,
            },
            ModelName::Psp => Generator::Psp {
                m: self.order,
                mu: self.mu,
                law: self.law.clone().context("PSP needs a [law] section")?,
            },
            ModelName::Plm => {
                let Generator::Plm { order, mu, central, per_field } = Generator::plm(self.order, self.mu) else {
                    unreachable!()
                };
                Generator::Plm {
                    order,
                    mu,
                    central: mc.central.unwrap_or(central),
                    per_field: mc.per_field.unwrap_or(per_field),
                }
            }
        };
        g.validate()?;
        Ok(g)
    }

    /// Street length per unit area.
    pub fn tau(&self) -> Result<f64> {
        Ok(match self.model {
            ModelName::Og | ModelName::Plp => self.mu,
            ModelName::Psp => 2.0 * self.mu * self.law.as_ref().context("PSP needs a law")?.mean(),
            ModelName::Plm => 2.0 * self.mu * HalfLengthLaw::rayleigh(self.plm_b()?)?.mean(),
            ModelName::Ppp1 | ModelName::Ppp2 => bail!("a PPP has no streets"),
        })
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).context("invalid experiment config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn params(&self) -> Result<ModelParams> {
        Ok(ModelParams::new(self.lambda, self.p, self.d, self.alpha)?)
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec> {
        Ok(QuadratureSpec::new(self.quadrature.rel_tol, self.quadrature.abs_tol)?)
    }

    pub fn primary(&self) -> Result<Side> {
        Ok(Side {
            model: self.model,
            order: self.order,
            mu: self.mu,
            law: self.law.as_ref().map(LawSpec::build).transpose()?,
        })
    }

    /// The `[compare]` model with missing fields mapped from the primary.
    pub fn secondary(&self) -> Result<Option<Side>> {
        let Some(c) = &self.compare else { return Ok(None) };
        let primary = self.primary()?;
        let mut side = Side {
            model: c.model,
            order: c.order.unwrap_or(self.order),
            mu: c.mu.unwrap_or(self.mu),
            law: c.law.as_ref().map(LawSpec::build).transpose()?,
        };
        if c.model == primary.model && side.law.is_none() {
            side.law = primary.law.clone();
        }
        if let (Some(a), Some(b)) = (primary.model.street_model(), c.model.street_model()) {
            if a != b && (c.mu.is_none() || (b == Model::Psp && side.law.is_none())) {
                let mut src = ModelSpec::new(a, primary.mu);
                src.law = primary.law.clone();
                let mapped = map_parameters(&src, b, c.c)?;
                if c.mu.is_none() {
                    side.mu = mapped.mu;
                }
                if side.law.is_none() {
                    side.law = mapped.law;
                }
            }
        }
        Ok(Some(side))
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(
            !self.name.is_empty() && self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_'),
            "name must be non-empty and use only letters, digits, '-' and '_'"
        );
        self.params()?;
        self.quadrature()?;
        ensure!(self.mu >= 0.0 && self.mu.is_finite(), "mu must be non-negative");
        ensure!(self.mc.ci_level > 0.0 && self.mc.ci_level < 1.0, "mc.ci_level must lie in (0, 1)");
        let primary = self.primary()?;
        let needs_mc = matches!(
            self.kind,
            Kind::TauCheck | Kind::NeighborStats | Kind::PlmFit | Kind::NearestTransmitter
        ) || (self.model == ModelName::Plm && self.kind != Kind::Success);
        ensure!(!needs_mc || self.mc.n > 0, "{} experiments on {} need mc.n > 0", self.kind, self.model.label());
        match self.kind {
            Kind::TauCheck => {
                ensure!(primary.model.street_model().is_some(), "tau-check needs a street model");
                ensure!(self.mc.radius > 0.0, "mc.radius must be positive");
                primary.tau()?;
            }
            Kind::PlmFit => {
                ensure!(self.model == ModelName::Plm, "plm-fit needs model = \"plm\"");
                ensure!(self.mu > 0.0, "plm-fit needs mu > 0");
            }
            Kind::Nn | Kind::NeighborStats => {
                self.grid.r()?;
            }
            Kind::Success | Kind::NearestTransmitter => {
                self.grid.theta()?;
            }
            Kind::Equivalence => {
                self.grid.theta()?;
                ensure!(self.compare.is_some(), "equivalence needs a [compare] section");
            }
        }
        if self.kind != Kind::TauCheck && self.kind != Kind::PlmFit {
            primary.generator(&self.mc)?;
            if let Some(s) = self.secondary()? {
                s.generator(&self.mc)?;
                if self.kind == Kind::Equivalence {
                    if let (Some(a), Some(b)) = (primary.model.street_model(), s.model.street_model()) {
                        let shared = coxnet::equivalence::shared_orders(a, b);
                        ensure!(
                            primary.order == s.order && shared.contains(&primary.order),
                            "equivalence needs the same order in both models, one of {shared:?}"
                        );
                    }
                }
            }
        }
        if self.baselines {
            ensure!(self.kind == Kind::Success, "baselines only apply to success experiments");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "t"
kind = "success"
model = "psp"
mu = 0.1
lambda = 0.3
law = { kind = "deterministic", h0 = 10.0 }
"#;

    #[test]
    fn defaults_fill_in() {
        let c = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(c.order, 2);
        assert_eq!(c.grid.theta().unwrap().len(), 40);
        assert_eq!(c.primary().unwrap().law, Some(HalfLengthLaw::deterministic(10.0).unwrap()));
    }

    #[test]
    fn schema_errors() {
        assert!(ExperimentConfig::from_toml("name = \"x\"").is_err());
        let bad = MINIMAL.replace("mu = 0.1", "mu = 0.1\nbogus = 1");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
        let bad = MINIMAL.replace("model = \"psp\"", "model = \"psp\"\norder = 3");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
        let bad = format!("{MINIMAL}\n[grid]\ntheta = [1.0, 0.5]\n");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
        let bad = MINIMAL.replace("law = { kind = \"deterministic\", h0 = 10.0 }", "");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
    }

    #[test]
    fn compare_maps_plm_to_rayleigh_psp() {
        let text = r#"
name = "e"
kind = "equivalence"
model = "plm"
mu = 1.0
lambda = 0.3
[compare]
model = "psp"
"#;
        let c = ExperimentConfig::from_toml(text).unwrap();
        let s = c.secondary().unwrap().unwrap();
        assert_eq!(s.law, Some(HalfLengthLaw::rayleigh(1.04).unwrap()));
        assert_eq!(s.mu, 1.0);
    }

    #[test]
    fn toml_round_trip() {
        let c = ExperimentConfig::from_toml(MINIMAL).unwrap();
        let again = ExperimentConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(c, again);
    }
}
