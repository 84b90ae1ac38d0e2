//! Acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line to stderr (bypassing capture) before asserting.

use std::io::Write;

use coxnet::analytic::{
    default_theta_grid, high_theta_asymptote, line_model_success, log_grid, low_theta_exponent, nn_cdf_og_plp,
    nn_cdf_psp, og_plp_success, plm_success_general, plm_success_tjunction, ppp_success, psp_success,
};
use coxnet::equivalence::{map_parameters, tv_distance, ModelSpec};
use coxnet::montecarlo::{
    estimate_length_intensity, estimate_nn_cdf, estimate_success, fit_plm_halflength, neighbor_count_stats,
    sample_plm_halflengths,
};
use coxnet::{Generator, HalfLengthLaw, McConfig, Model, ModelParams, QuadratureSpec, SirCurve};

fn report(id: u32, title: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    writeln!(err, "acceptance {id:>2} {verdict} {title}: {detail}").unwrap();
    assert!(pass, "criterion {id} ({title}) failed: {detail}");
}

fn params(lambda: f64) -> ModelParams {
    ModelParams::new(lambda, 1.0, 0.25, 4.0).unwrap()
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn r_grid(r_max: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| r_max * i as f64 / n as f64).collect()
}

#[test]
fn c01_length_intensity() {
    let mc = McConfig::new(1000, 101);
    let started = std::time::Instant::now();
    let cases = [
        ("OG mu=5", Generator::Lines { model: Model::Og, m: 2, mu: 5.0 }, 5.0),
        ("PLP mu=5", Generator::Lines { model: Model::Plp, m: 2, mu: 5.0 }, 5.0),
        (
            "PSP h=10 mu=1",
            Generator::Psp { m: 2, mu: 1.0, law: HalfLengthLaw::deterministic(10.0).unwrap() },
            20.0,
        ),
        (
            "PSP Rayleigh(1.04) mu=1",
            Generator::Psp { m: 2, mu: 1.0, law: HalfLengthLaw::rayleigh(1.04).unwrap() },
            2.0 * HalfLengthLaw::rayleigh(1.04).unwrap().mean(),
        ),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, g, tau) in &cases {
        let e = estimate_length_intensity(g, 10.0, &mc).unwrap();
        let rel = (e.value / tau - 1.0).abs();
        pass &= rel < 0.01;
        detail.push(format!("{name} rel {rel:.4}"));
    }
    let secs = started.elapsed().as_secs_f64();
    pass &= secs < 60.0;
    detail.push(format!("{secs:.1}s"));
    report(1, "length intensity within 1%", pass, &detail.join(", "));
}

#[test]
fn c02_nn_line_models() {
    let r = r_grid(10.0, 200);
    let mut worst: f64 = 0.0;
    let mut detail = Vec::new();
    for model in [Model::Og, Model::Plp] {
        for m in [2u8, 4] {
            let g = Generator::Lines { model, m, mu: 1.0 };
            let e = estimate_nn_cdf(&g, &params(0.3), &r, &McConfig::new(100_000, 202)).unwrap();
            let ks = e.sup_distance(|x| nn_cdf_og_plp(x, m, 1.0, 0.3, &spec()).unwrap().value);
            worst = worst.max(ks);
            detail.push(format!("{model} m={m} KS {ks:.4}"));
        }
    }
    report(2, "line-model NN distance KS < 0.01", worst < 0.01, &detail.join(", "));
}

#[test]
fn c03_nn_psp() {
    let r = r_grid(10.0, 40);
    let mut worst: f64 = 0.0;
    let mut detail = Vec::new();
    for (mu, b) in [(0.01, 0.0103), (1.0, 1.04)] {
        let law = HalfLengthLaw::rayleigh(b).unwrap();
        let g = Generator::Psp { m: 2, mu, law: law.clone() };
        let e = estimate_nn_cdf(&g, &params(0.3), &r, &McConfig::new(40_000, 303)).unwrap();
        let gap = e.sup_distance(|x| nn_cdf_psp(x, 2, mu, 0.3, &law, &spec()).unwrap().value);
        worst = worst.max(gap);
        detail.push(format!("mu={mu} sup gap {gap:.4}"));
    }
    report(3, "PSP NN distance sup gap < 0.02", worst < 0.02, &detail.join(", "));
}

#[test]
fn c04_ppp_baselines() {
    let spot = ppp_success(2, 1.0, 1.0, 4.0, 1.0).unwrap();
    let mut pass = (spot - 0.007192).abs() < 1e-6 && (spot - (-std::f64::consts::PI.powi(2) / 2.0).exp()).abs() < 1e-15;
    let mut detail = vec![format!("spot {spot:.7}")];
    let theta = default_theta_grid();
    for (dim, lambda) in [(1u8, 0.3), (2, 0.1)] {
        let c = estimate_success(&Generator::Ppp { dim }, &params(lambda), &theta, &McConfig::new(100_000, 404)).unwrap();
        let mut outside = 0;
        let mut worst: f64 = 0.0;
        for i in 0..theta.len() {
            let exact = ppp_success(dim, lambda, 0.25, 4.0, theta[i]).unwrap();
            let gap = (c.value[i] - exact).abs();
            worst = worst.max(gap);
            if gap > c.err[i] {
                outside += 1;
            }
        }
        pass &= outside == 0;
        detail.push(format!("d={dim} {outside}/{} outside CI, max gap {worst:.4}", theta.len()));
    }
    report(4, "PPP baselines inside 95% CI", pass, &detail.join(", "));
}

#[test]
fn c05_success_probabilities() {
    let started = std::time::Instant::now();
    let theta = default_theta_grid();
    let p = params(0.3);
    let h10 = HalfLengthLaw::deterministic(10.0).unwrap();
    let mut pass = true;
    let mut detail = Vec::new();
    let mut curves = Vec::new();
    for m in [2u8, 4] {
        let plp = SirCurve::analytic(&theta, |t| og_plp_success(m, 2.0, 0.3, 0.25, 4.0, t, &spec())).unwrap();
        let psp = SirCurve::analytic(&theta, |t| psp_success(m, 0.1, 0.3, 0.25, 4.0, t, &h10, &spec())).unwrap();
        let gens = [
            ("PLP", Generator::Lines { model: Model::Plp, m, mu: 2.0 }, &plp),
            ("PSP", Generator::Psp { m, mu: 0.1, law: h10.clone() }, &psp),
        ];
        for (name, g, analytic) in gens {
            let mc = estimate_success(&g, &p, &theta, &McConfig::new(50_000, 505 + m as u64)).unwrap();
            let gap = tv_distance(analytic, &mc).unwrap().epsilon;
            pass &= gap <= 0.01;
            detail.push(format!("{name} m={m} max gap {gap:.4}"));
        }
        curves.push((plp, psp));
    }
    let general_above = |a: &SirCurve, b: &SirCurve| a.value.iter().zip(&b.value).all(|(x, y)| x >= y);
    let plm2 = SirCurve::analytic(&theta, |t| plm_success_general(0.3, 0.3, 0.25, 4.0, t, 0.312, &spec())).unwrap();
    let plm3 = SirCurve::analytic(&theta, |t| plm_success_tjunction(0.3, 0.3, 0.25, 4.0, t, 0.312, &spec())).unwrap();
    let ordered = general_above(&curves[0].0, &curves[1].0)
        && general_above(&curves[0].1, &curves[1].1)
        && general_above(&plm2, &plm3);
    pass &= ordered;
    let secs = started.elapsed().as_secs_f64();
    pass &= secs < 1800.0;
    detail.push(format!("general >= intersection: {ordered}, {secs:.0}s"));
    report(5, "success probabilities within 0.01 of MC", pass, &detail.join(", "));
}

#[test]
fn c06_plm_approximation() {
    let theta = default_theta_grid();
    let p = params(0.3);
    let mut pass = true;
    let mut detail = Vec::new();
    for (mu, b, reference, fields) in [(0.01, 0.0103, 0.0297, 1000), (1.0, 1.04, 0.0219, 600)] {
        let approx = SirCurve::analytic(&theta, |t| plm_success_general(mu, 0.3, 0.25, 4.0, t, b, &spec())).unwrap();
        let mc = estimate_success(&Generator::plm(2, mu), &p, &theta, &McConfig::new(fields, 606)).unwrap();
        let d = tv_distance(&mc, &approx).unwrap();
        let ok = (d.epsilon - reference).abs() <= 0.015;
        pass &= ok;
        detail.push(format!(
            "mu={mu} eps {:.4} at theta {:.3} (reference {reference}, range [{:.4}, {:.4}])",
            d.epsilon, d.theta_star, d.low, d.high
        ));
    }
    let (mu, b) = (0.3, 0.312);
    let bound = SirCurve::analytic(&theta, |t| plm_success_tjunction(mu, 0.3, 0.25, 4.0, t, b, &spec())).unwrap();
    let mc = estimate_success(&Generator::plm(3, mu), &p, &theta, &McConfig::new(400, 607)).unwrap();
    let over = (0..theta.len())
        .map(|i| bound.value[i] - (mc.value[i] + mc.err[i]))
        .fold(f64::NEG_INFINITY, f64::max);
    let strict = (0..theta.len())
        .map(|i| bound.value[i] - (mc.value[i] - mc.err[i]))
        .fold(f64::NEG_INFINITY, f64::max);
    pass &= over <= 0.005;
    detail.push(format!("T-junction mu=0.3 max excess over MC+CI {over:.4} (over MC-CI {strict:.4})"));
    report(6, "PLM approximation and T-junction bound", pass, &detail.join(", "));
}

fn fitted_b(mu: f64, fields: usize, seed: u64) -> f64 {
    let s = sample_plm_halflengths(mu, None, &McConfig::new(fields, seed)).unwrap();
    fit_plm_halflength(&s.half_lengths).unwrap()
}

#[test]
fn c07_halflength_fit() {
    // independent seeds: with a shared seed the fields are exact rescalings
    let (b1, b01, b001) = (fitted_b(1.0, 50, 707), fitted_b(0.1, 50, 708), fitted_b(0.01, 50, 709));
    let scaling = b1 / b01 / 10.0;
    let pass = (b1 / 1.04 - 1.0).abs() < 0.1 && (b001 / 0.0103 - 1.0).abs() < 0.1 && (scaling - 1.0).abs() < 0.1;
    let detail = format!("b(1)={b1:.4}, b(0.01)={b001:.5}, b(1)/(10 b(0.1))={scaling:.4}");
    report(7, "Rayleigh half-length fit", pass, &detail);
}

#[test]
fn c08_neighbor_counts() {
    let r: Vec<f64> = (1..=10).map(|i| 5.0 * i as f64).collect();
    let p = params(0.3);
    let fields = 300;
    let plm = neighbor_count_stats(&Generator::plm(2, 0.01), &p, &r, &McConfig::new(fields, 808)).unwrap();
    let b = fitted_b(0.01, 200, 810);
    let psp_gen = Generator::Psp { m: 2, mu: 0.01, law: HalfLengthLaw::rayleigh(b).unwrap() };
    let psp = neighbor_count_stats(&psp_gen, &p, &r, &McConfig::new(fields * 64, 809)).unwrap();
    let mut means_agree = true;
    let mut disagree = 0;
    let mut var_below = true;
    let mut compared = 0;
    for i in 0..r.len() {
        let (a, b) = (plm.mean[i], psp.mean[i]);
        if (a.value - b.value).abs() > a.half_width + b.half_width {
            means_agree = false;
            disagree += 1;
        }
        let (va, vb) = (plm.variance[i], psp.variance[i]);
        if va.value > va.half_width && vb.value > vb.half_width {
            compared += 1;
            var_below &= va.value < vb.value;
        }
    }
    let last = r.len() - 1;
    let detail = format!(
        "fitted b {b:.5}, means agree: {means_agree} ({disagree}/{} radii outside CI), PLM variance below at {compared} radii: {var_below}; r={}: mean {:.2}/{:.2}, var {:.2}/{:.2}",
        r.len(),
        r[last], plm.mean[last].value, psp.mean[last].value, plm.variance[last].value, psp.variance[last].value
    );
    report(8, "neighbor-count statistics", means_agree && var_below && compared > 0, &detail);
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn c09_asymptotics() {
    let law = HalfLengthLaw::deterministic(10.0).unwrap();
    let (mu, lp, d, alpha) = (0.1, 0.3, 0.25, 4.0);
    let mut pass = true;
    let mut detail = Vec::new();
    let low = log_grid(1e-4, 1e-2, 9).unwrap();
    for m in [2u8, 4] {
        let outage: Vec<f64> = low
            .iter()
            .map(|&t| (1.0 - psp_success(m, mu, lp, d, alpha, t, &law, &spec()).unwrap().value).ln())
            .collect();
        let logt: Vec<f64> = low.iter().map(|t| t.ln()).collect();
        let fitted = slope(&logt, &outage);
        let want = low_theta_exponent(m, alpha).unwrap();
        let ok = (fitted / want - 1.0).abs() <= 0.1;
        pass &= ok;
        detail.push(format!("slope m={m} {fitted:.4} vs {want}"));
        let t = 1e3;
        let p = psp_success(m, mu, lp, d, alpha, t, &law, &spec()).unwrap().value;
        let a = high_theta_asymptote(t, mu, lp, 1.0, d, alpha, &law).unwrap();
        let ratio = p / a;
        pass &= (ratio - 1.0).abs() <= 0.05;
        detail.push(format!("ratio m={m} at 1e3 {ratio:.3}"));
    }
    report(9, "low- and high-theta asymptotics", pass, &detail.join(", "));
}

#[test]
fn c10_equivalence_identities() {
    let theta = default_theta_grid();
    let mut identical = true;
    for m in [2u8, 4] {
        let og = SirCurve::analytic(&theta, |t| line_model_success(Model::Og, m, 1.0, 0.3, 0.25, 4.0, t, &spec())).unwrap();
        let plp = SirCurve::analytic(&theta, |t| line_model_success(Model::Plp, m, 1.0, 0.3, 0.25, 4.0, t, &spec())).unwrap();
        identical &= og.value.iter().zip(&plp.value).all(|(a, b)| a.to_bits() == b.to_bits());
        identical &= og.err.iter().zip(&plp.err).all(|(a, b)| a.to_bits() == b.to_bits());
    }
    let plp = SirCurve::analytic(&theta, |t| og_plp_success(2, 1.0, 0.3, 0.25, 4.0, t, &spec())).unwrap();
    let mut gaps = Vec::new();
    for c in [10.0, 100.0, 1000.0] {
        let mapped = map_parameters(&ModelSpec::new(Model::Plp, 1.0), Model::Psp, Some(c)).unwrap();
        let law = mapped.law.unwrap();
        let psp = SirCurve::analytic(&theta, |t| psp_success(2, mapped.mu, 0.3, 0.25, 4.0, t, &law, &spec())).unwrap();
        gaps.push(tv_distance(&psp, &plp).unwrap().epsilon);
    }
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
    let pass = identical && monotone && gaps[2] < 0.01;
    let detail = format!("OG == PLP bitwise: {identical}, PSP(c) gaps {:.2e} {:.2e} {:.2e}", gaps[0], gaps[1], gaps[2]);
    report(10, "equivalence identities", pass, &detail);
}

#[test]
fn c11_nn_psp_dominates_plm() {
    let p = params(0.3);
    let mut pass = true;
    let mut detail = Vec::new();
    for (mu, r_max) in [(0.01, 10.0), (1.0, 6.0)] {
        let b = fitted_b(mu, 200, 1110);
        let r = r_grid(r_max, 30);
        let plm = estimate_nn_cdf(&Generator::plm(2, mu), &p, &r, &McConfig::new(300, 1111)).unwrap();
        let psp_gen = Generator::Psp { m: 2, mu, law: HalfLengthLaw::rayleigh(b).unwrap() };
        let psp = estimate_nn_cdf(&psp_gen, &p, &r, &McConfig::new(20_000, 1112)).unwrap();
        let (at, worst) = (0..r.len())
            .map(|i| (r[i], plm.value[i] - psp.value[i] - (plm.half_width[i] + psp.half_width[i])))
            .fold((0.0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        pass &= worst <= 0.0;
        detail.push(format!("mu={mu} b={b:.5} max(PLM - PSP - CI) {worst:.1e} at r={at:.2}"));
    }
    report(11, "PSP NN CDF above PLM within CI", pass, &detail.join(", "));
}

fn success_csv(threads: usize, seed: u64) -> Vec<u8> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| {
        let theta = log_grid(0.1, 10.0, 12).unwrap();
        let mut out = Vec::new();
        let gens = [
            Generator::Psp { m: 2, mu: 0.1, law: HalfLengthLaw::deterministic(10.0).unwrap() },
            Generator::plm(2, 1.0),
        ];
        for (g, n) in gens.iter().zip([2000, 8]) {
            let c = estimate_success(g, &params(0.3), &theta, &McConfig::new(n, seed)).unwrap();
            c.write_csv(&mut out).unwrap();
        }
        let nn = estimate_nn_cdf(&Generator::plm(2, 1.0), &params(0.3), &r_grid(4.0, 8), &McConfig::new(8, seed)).unwrap();
        nn.write_csv(&mut out).unwrap();
        out
    })
}

#[test]
fn c12_determinism() {
    let a = success_csv(1, 1212);
    let b = success_csv(4, 1212);
    let c = success_csv(3, 1212);
    let other = success_csv(2, 1213);
    let pass = a == b && b == c && a != other;
    let detail = format!("{} bytes, identical across 1/3/4 threads: {}", a.len(), a == b && b == c);
    report(12, "byte-identical CSVs for a fixed seed", pass, &detail);
}
