use std::f64::consts::PI;

use coxnet::geometry::{sample_og, sample_plp, total_length_in, Disk};
use coxnet::rng::seeded;
use coxnet::{Point, StreetSystem};

// τ in disjoint disks of radius 10 on a 5×5 lattice inside one realization
fn sub_window_taus(sys: &StreetSystem) -> Vec<f64> {
    let mut out = Vec::new();
    for i in -2..=2 {
        for j in -2..=2 {
            let d = Disk::new(Point::new(25.0 * i as f64, 25.0 * j as f64), 10.0);
            out.push(total_length_in(sys, &d) / d.area());
        }
    }
    out
}

#[test]
fn sub_windows_agree_within_poisson_noise() {
    let (mu, r) = (1.0f64, 10.0f64);
    // lines hitting b(x, r): Poisson(2μr), squared chord mean 8r²/3
    let sigma = (16.0 * mu * r.powi(3) / 3.0).sqrt() / (PI * r * r);
    for (k, sys) in [sample_plp(mu, 100.0, &mut seeded(61)).unwrap(), sample_og(mu, 100.0, &mut seeded(62)).unwrap()]
        .iter()
        .enumerate()
    {
        for tau in sub_window_taus(sys) {
            assert!((tau - mu).abs() < 3.0 * sigma, "system {k}: {tau}");
        }
    }
}
