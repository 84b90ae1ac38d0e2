//! Built-in experiments at desk scale.

use anyhow::{anyhow, Result};

use crate::config::ExperimentConfig;

pub const CATALOG: &[(&str, &str)] = &[
    ("fig3b", include_str!("../experiments/fig3b.toml")),
    ("fig4", include_str!("../experiments/fig4.toml")),
    ("fig5", include_str!("../experiments/fig5.toml")),
    ("fig6a", include_str!("../experiments/fig6a.toml")),
    ("fig6b", include_str!("../experiments/fig6b.toml")),
    ("fig6c", include_str!("../experiments/fig6c.toml")),
    ("fig7", include_str!("../experiments/fig7.toml")),
    ("fig8", include_str!("../experiments/fig8.toml")),
    ("fig9", include_str!("../experiments/fig9.toml")),
];

pub fn lookup(name: &str) -> Result<ExperimentConfig> {
    let (_, text) = CATALOG
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| anyhow!("unknown experiment {name:?}; try `coxnet list`"))?;
    ExperimentConfig::from_toml(text)
}

pub fn list_experiments() -> Result<String> {
    let mut out = String::new();
    for (name, text) in CATALOG {
        let cfg = ExperimentConfig::from_toml(text)?;
        out.push_str(&format!("{name:<7} {:<19} {}\n", cfg.kind.to_string(), cfg.description));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Kind, ModelName};
    use coxnet::HalfLengthLaw;

    #[test]
    fn every_entry_validates_and_round_trips() {
        assert!(!CATALOG.is_empty());
        for (name, _) in CATALOG {
            let cfg = lookup(name).unwrap();
            assert_eq!(&cfg.name, name);
            let again = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
            assert_eq!(cfg, again);
        }
        assert_eq!(list_experiments().unwrap().lines().count(), CATALOG.len());
    }

    #[test]
    fn fig6b_is_psp_with_fixed_sticks() {
        let cfg = lookup("fig6b").unwrap();
        assert_eq!(cfg.kind, Kind::Success);
        assert_eq!(cfg.model, ModelName::Psp);
        assert_eq!(cfg.primary().unwrap().law, Some(HalfLengthLaw::deterministic(10.0).unwrap()));
        assert!(lookup("fig99").is_err());
    }
}
