//! Experiment dispatch. Each kind produces a CSV body, optional extra
//! files and manifest entries; nothing touches the disk here.

use std::f64::consts::PI;

use anyhow::{Context, Result};
use coxnet::analytic::{
    line_model_success, nn_cdf_og_plp, nn_cdf_psp, plm_success_general, plm_success_tjunction, ppp_success,
    psp_success,
};
use coxnet::montecarlo::{
    estimate_length_intensity, estimate_nn_cdf, estimate_success, fit_plm_halflength, nearest_transmitter_success,
    neighbor_count_stats, resolve_radii, sample_plm_halflengths, Manifest, PLM_B_PER_MU,
};
use coxnet::{Estimate, EquivalenceReport, QuadratureSpec, SirCurve};

use crate::config::{ExperimentConfig, Kind, ModelName, Side};

pub struct Output {
    pub csv: String,
    /// Additional `(file suffix, contents)` pairs, e.g. a text summary.
    pub extra: Vec<(String, String)>,
    pub manifest: Manifest,
    /// Line printed to stdout after the files are in place.
    pub summary: Option<String>,
}

/// A numeric column with its error or CI column.
struct Column {
    name: String,
    value: Vec<f64>,
    err: Vec<f64>,
    err_suffix: &'static str,
}

fn table(x_name: &str, x: &[f64], cols: &[Column]) -> String {
    let mut out = String::from(x_name);
    for c in cols {
        out.push_str(&format!(",{},{}_{}", c.name, c.name, c.err_suffix));
    }
    out.push('\n');
    for (i, xi) in x.iter().enumerate() {
        out.push_str(&format!("{xi:e}"));
        for c in cols {
            out.push_str(&format!(",{:e},{:e}", c.value[i], c.err[i]));
        }
        out.push('\n');
    }
    out
}

fn prefixed(prefix: &str, name: &str) -> String {
    if prefix.is_empty() {
        name.to_string()
    } else {
        format!("{prefix}_{name}")
    }
}

fn curve_column(prefix: &str, name: &str, c: &SirCurve, err_suffix: &'static str) -> Column {
    Column {
        name: prefixed(prefix, name),
        value: c.value.clone(),
        err: c.err.clone(),
        err_suffix,
    }
}

fn analytic_success(cfg: &ExperimentConfig, side: &Side, theta: &[f64], spec: &QuadratureSpec) -> Result<SirCurve> {
    let lp = cfg.lambda * cfg.p;
    let (m, mu, d, a) = (side.order, side.mu, cfg.d, cfg.alpha);
    let curve = match side.model {
        ModelName::Og | ModelName::Plp => {
            let model = side.model.street_model().expect("line model");
            SirCurve::analytic(theta, |t| line_model_success(model, m, mu, lp, d, a, t, spec))?
        }
        ModelName::Psp => {
            let law = side.law.as_ref().context("PSP needs a law")?;
            SirCurve::analytic(theta, |t| psp_success(m, mu, lp, d, a, t, law, spec))?
        }
        ModelName::Plm => {
            let b = side.plm_b()?;
            if m == 3 {
                SirCurve::analytic(theta, |t| plm_success_tjunction(mu, lp, d, a, t, b, spec))?
            } else {
                SirCurve::analytic(theta, |t| plm_success_general(mu, lp, d, a, t, b, spec))?
            }
        }
        ModelName::Ppp1 => SirCurve::analytic(theta, |t| Ok(Estimate::exact(ppp_success(1, lp, d, a, t)?)))?,
        ModelName::Ppp2 => SirCurve::analytic(theta, |t| Ok(Estimate::exact(ppp_success(2, lp, d, a, t)?)))?,
    };
    Ok(curve)
}

fn analytic_nn(cfg: &ExperimentConfig, side: &Side, r: &[f64], spec: &QuadratureSpec) -> Result<Option<Column>> {
    let lam = cfg.lambda;
    let f = |x: f64| -> Result<Estimate> {
        Ok(match side.model {
            ModelName::Og | ModelName::Plp => nn_cdf_og_plp(x, side.order, side.mu, lam, spec)?,
            ModelName::Psp => nn_cdf_psp(x, side.order, side.mu, lam, side.law.as_ref().context("PSP needs a law")?, spec)?,
            ModelName::Ppp1 => Estimate::exact(-(-2.0 * lam * x).exp_m1()),
            ModelName::Ppp2 => Estimate::exact(-(-PI * lam * x * x).exp_m1()),
            ModelName::Plm => unreachable!(),
        })
    };
    if side.model == ModelName::Plm {
        return Ok(None);
    }
    let est = r.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    Ok(Some(Column {
        name: "analytic".into(),
        value: est.iter().map(|e| e.value).collect(),
        err: est.iter().map(|e| e.abs_error).collect(),
        err_suffix: "err",
    }))
}

fn sides(cfg: &ExperimentConfig) -> Result<Vec<(&'static str, Side)>> {
    let mut v = vec![("", cfg.primary()?)];
    if let Some(s) = cfg.secondary()? {
        v.push(("cmp", s));
    }
    Ok(v)
}

fn base_manifest(cfg: &ExperimentConfig) -> Result<Manifest> {
    let mut m = Manifest::new();
    m.set("name", &cfg.name)
        .set("kind", cfg.kind)
        .set("coxnet_version", env!("CARGO_PKG_VERSION"))
        .set("seed", cfg.mc.seed)
        .set("mc_n", cfg.mc.n)
        .set("ci_level", cfg.mc.ci_level)
        .set("rel_tol", cfg.quadrature.rel_tol)
        .set("abs_tol", cfg.quadrature.abs_tol)
        .set("lambda", cfg.lambda)
        .set("p", cfg.p)
        .set("d", cfg.d)
        .set("alpha", cfg.alpha);
    for (prefix, side) in sides(cfg)? {
        let key = |k: &str| prefixed(prefix, k);
        m.set(&key("model"), side.model.label())
            .set(&key("order"), side.order)
            .set(&key("mu"), side.mu);
        if let Some(law) = &side.law {
            m.set(&key("law"), format!("{law:?}"));
        }
    }
    m.set("config", format!("{}.config.toml", cfg.name));
    Ok(m)
}

pub fn run(cfg: &ExperimentConfig) -> Result<Output> {
    cfg.validate()?;
    let params = cfg.params()?;
    let spec = cfg.quadrature()?;
    let mc = cfg.mc.config();
    let mut manifest = base_manifest(cfg)?;
    let mut extra = Vec::new();
    let mut summary = None;
    let csv = match cfg.kind {
        Kind::TauCheck => {
            let side = cfg.primary()?;
            let est = estimate_length_intensity(&side.generator(&cfg.mc)?, cfg.mc.radius, &mc)?;
            manifest.set("radius", cfg.mc.radius);
            format!(
                "model,mu,tau_expected,tau_empirical,tau_ci,realizations,radius\n{},{:e},{:e},{:e},{:e},{},{:e}\n",
                side.model.label(),
                side.mu,
                side.tau()?,
                est.value,
                est.half_width,
                est.n,
                cfg.mc.radius
            )
        }
        Kind::PlmFit => {
            let sample = sample_plm_halflengths(cfg.mu, None, &mc)?;
            let h = &sample.half_lengths;
            let b = fit_plm_halflength(h)?;
            let n = h.len() as f64;
            let mean = h.iter().sum::<f64>() / n;
            let sd = (h.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0)).sqrt();
            // b = π/(4 mean²): relative error doubles
            let ci = 2.0 * b * mc.z() * sd / (mean * n.sqrt());
            format!(
                "mu,b_hat,b_hat_ci,b_reference,samples,truncated_fraction\n{:e},{:e},{:e},{:e},{},{:e}\n",
                cfg.mu,
                b,
                ci,
                PLM_B_PER_MU * cfg.mu,
                h.len(),
                sample.truncated_fraction()
            )
        }
        Kind::Nn => {
            let r = cfg.grid.r()?;
            let mut cols = Vec::new();
            for (prefix, side) in sides(cfg)? {
                if let Some(mut c) = analytic_nn(cfg, &side, &r, &spec)? {
                    c.name = prefixed(prefix, &c.name);
                    cols.push(c);
                }
                if mc.n > 0 {
                    let e = estimate_nn_cdf(&side.generator(&cfg.mc)?, &params, &r, &mc)?;
                    cols.push(Column {
                        name: prefixed(prefix, "mc"),
                        value: e.value,
                        err: e.half_width,
                        err_suffix: "ci",
                    });
                }
            }
            table("r", &r, &cols)
        }
        Kind::NeighborStats => {
            let r = cfg.grid.r()?;
            let mut out = String::from("model,r,mean,mean_ci,variance,variance_ci\n");
            for (_, side) in sides(cfg)? {
                let s = neighbor_count_stats(&side.generator(&cfg.mc)?, &params, &r, &mc)?;
                for i in 0..r.len() {
                    out.push_str(&format!(
                        "{},{:e},{:e},{:e},{:e},{:e}\n",
                        side.label(),
                        r[i],
                        s.mean[i].value,
                        s.mean[i].half_width,
                        s.variance[i].value,
                        s.variance[i].half_width
                    ));
                }
            }
            out
        }
        Kind::Success => {
            let theta = cfg.grid.theta()?;
            let mut cols = Vec::new();
            for (prefix, side) in sides(cfg)? {
                cols.push(curve_column(prefix, "analytic", &analytic_success(cfg, &side, &theta, &spec)?, "err"));
                if mc.n > 0 {
                    let g = side.generator(&cfg.mc)?;
                    let (r_int, window) = resolve_radii(&g, &params, theta[theta.len() - 1], &mc)?;
                    manifest.set(&prefixed(prefix, "r_int"), r_int).set(&prefixed(prefix, "window"), window);
                    cols.push(curve_column(prefix, "mc", &estimate_success(&g, &params, &theta, &mc)?, "ci"));
                }
            }
            if cfg.baselines {
                let side = cfg.primary()?;
                let lp = cfg.lambda * cfg.p;
                let tau = side.tau()?;
                let one = theta.iter().map(|&t| ppp_success(1, lp, cfg.d, cfg.alpha, t)).collect::<coxnet::Result<Vec<_>>>()?;
                let two = theta.iter().map(|&t| ppp_success(2, tau * lp, cfg.d, cfg.alpha, t)).collect::<coxnet::Result<Vec<_>>>()?;
                for (name, v) in [("ppp1", one), ("ppp2", two)] {
                    cols.push(Column {
                        name: name.into(),
                        err: vec![0.0; v.len()],
                        value: v,
                        err_suffix: "err",
                    });
                }
            }
            table("theta", &theta, &cols)
        }
        Kind::NearestTransmitter => {
            let theta = cfg.grid.theta()?;
            let mut cols = Vec::new();
            for (prefix, side) in sides(cfg)? {
                let g = side.generator(&cfg.mc)?;
                cols.push(curve_column(prefix, "mc", &nearest_transmitter_success(&g, &params, &theta, &mc)?, "ci"));
            }
            table("theta", &theta, &cols)
        }
        Kind::Equivalence => {
            let theta = cfg.grid.theta()?;
            let mut curves = Vec::new();
            for (_, side) in sides(cfg)? {
                let c = if side.model == ModelName::Plm {
                    estimate_success(&side.generator(&cfg.mc)?, &params, &theta, &mc)?
                } else {
                    analytic_success(cfg, &side, &theta, &spec)?
                };
                curves.push((side.label(), c));
            }
            let (lb, b) = curves.pop().expect("two sides");
            let (la, a) = curves.pop().expect("two sides");
            let report = EquivalenceReport::new(&la, a, &lb, b, cfg.order)?;
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            let text = report.summary();
            manifest.set("epsilon", report.distance.epsilon).set("theta_star", report.distance.theta_star);
            extra.push(("summary.txt".to_string(), text.clone()));
            summary = Some(text.trim_end().to_string());
            String::from_utf8(buf)?
        }
    };
    Ok(Output {
        csv,
        extra,
        manifest,
        summary,
    })
}
