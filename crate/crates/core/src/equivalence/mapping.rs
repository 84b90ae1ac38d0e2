use crate::error::{ensure, Error, Result};
use crate::geometry::Model;
use crate::law::HalfLengthLaw;
use crate::montecarlo::PLM_B_PER_MU;

/// A street model with its intensity and, for stick models, half-length law.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub model: Model,
    pub mu: f64,
    pub law: Option<HalfLengthLaw>,
}

impl ModelSpec {
    pub fn new(model: Model, mu: f64) -> Self {
        Self { model, mu, law: None }
    }

    pub fn with_law(mut self, law: HalfLengthLaw) -> Self {
        self.law = Some(law);
        self
    }

    /// Orders a typical vehicle can have in this model.
    pub fn orders(&self) -> &'static [u8] {
        orders_of(self.model)
    }
}

fn orders_of(model: Model) -> &'static [u8] {
    match model {
        Model::Og | Model::Plp | Model::Psp => &[2, 4],
        Model::Plm => &[2, 3],
    }
}

/// Orders both models share; equivalence is only defined on these.
pub fn shared_orders(a: Model, b: Model) -> Vec<u8> {
    orders_of(a).iter().copied().filter(|m| orders_of(b).contains(m)).collect()
}

/// Parameters of `target` equivalent to `source`.
///
/// OG and PLP map with equal μ. PLP to PSP needs a stick scale `c`: the PSP
/// has `μ/(2c)` and half-lengths `c·H₁` with `H₁` the source law (default
/// `H₁ ≡ 1`), which must have mean 1; the reverse uses `c = E[H]`. PLM and
/// PSP share μ, and the PSP takes a Rayleigh law, either the one given with
/// the PLM or the default scale `1.04·μ`.
pub fn map_parameters(source: &ModelSpec, target: Model, c: Option<f64>) -> Result<ModelSpec> {
    ensure(source.mu >= 0.0 && source.mu.is_finite(), || format!("invalid μ {}", source.mu))?;
    let unsupported = || Error::InvalidParameter(format!("no equivalence mapping from {} to {target}", source.model));
    match (source.model, target) {
        (Model::Og, Model::Plp) | (Model::Plp, Model::Og) => Ok(ModelSpec::new(target, source.mu)),
        (Model::Plp, Model::Psp) => {
            let c = c.ok_or_else(|| Error::InvalidParameter("PLP to PSP needs the stick scale c".into()))?;
            ensure(c > 0.0 && c.is_finite(), || format!("stick scale must be positive, got {c}"))?;
            let unit = match &source.law {
                Some(l) => l.clone(),
                None => HalfLengthLaw::deterministic(1.0)?,
            };
            ensure((unit.mean() - 1.0).abs() < 1e-8, || format!("base law must have mean 1, got {}", unit.mean()))?;
            Ok(ModelSpec::new(Model::Psp, source.mu / (2.0 * c)).with_law(unit.scaled(c)?))
        }
        (Model::Psp, Model::Plp) => {
            let law = source.law.as_ref().ok_or_else(|| Error::InvalidParameter("PSP needs a half-length law".into()))?;
            Ok(ModelSpec::new(Model::Plp, 2.0 * law.mean() * source.mu))
        }
        (Model::Plm, Model::Psp) => {
            let law = match &source.law {
                Some(l @ HalfLengthLaw::Rayleigh { .. }) => l.clone(),
                Some(_) => return Err(Error::InvalidParameter("PLM half-lengths map to a Rayleigh law".into())),
                None => HalfLengthLaw::rayleigh(PLM_B_PER_MU * source.mu)?,
            };
            Ok(ModelSpec::new(Model::Psp, source.mu).with_law(law))
        }
        (Model::Psp, Model::Plm) => Ok(ModelSpec::new(Model::Plm, source.mu)),
        _ => Err(unsupported()),
    }
}
