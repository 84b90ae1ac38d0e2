use rand::Rng;

use crate::error::{ensure, Result};
use crate::geometry::{poisson_count, Point, StreetSystem};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vehicle {
    pub pos: Point,
    /// Index into the street system.
    pub street: usize,
    /// Arc-length coordinate along the street.
    pub offset: f64,
    /// ALOHA mark `B_z`.
    pub active: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VehicleSet {
    pub vehicles: Vec<Vehicle>,
}

impl VehicleSet {
    pub fn len(&self) -> usize {
        self.vehicles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vehicles.is_empty()
    }

    pub fn active(&self) -> impl Iterator<Item = &Vehicle> {
        self.vehicles.iter().filter(|v| v.active)
    }
}

/// One 1-D Poisson process of intensity λ per street, on the part of the
/// street inside `b(center, radius)`. Every vehicle starts active.
pub fn sample_vehicles_in<R: Rng + ?Sized>(
    system: &StreetSystem,
    lambda: f64,
    center: Point,
    radius: f64,
    rng: &mut R,
) -> Result<VehicleSet> {
    ensure(lambda >= 0.0 && lambda.is_finite(), || format!("vehicle intensity must be non-negative, got {lambda}"))?;
    let mut out = VehicleSet::default();
    if lambda == 0.0 {
        return Ok(out);
    }
    for (k, st) in system.streets.iter().enumerate() {
        if let Some((lo, hi)) = st.interval_in_disk(center, radius) {
            let n = poisson_count(lambda * (hi - lo), rng);
            for _ in 0..n {
                let t = rng.gen_range(lo..hi);
                out.vehicles.push(Vehicle {
                    pos: st.point_at(t),
                    street: k,
                    offset: t,
                    active: true,
                });
            }
        }
    }
    Ok(out)
}

/// Vehicles on every street within the system's window.
pub fn sample_vehicles<R: Rng + ?Sized>(system: &StreetSystem, lambda: f64, rng: &mut R) -> Result<VehicleSet> {
    sample_vehicles_in(system, lambda, Point::ORIGIN, system.window, rng)
}

/// Sets each ALOHA mark to an independent Bernoulli(p).
pub fn mark_aloha<R: Rng + ?Sized>(vehicles: &mut VehicleSet, p: f64, rng: &mut R) -> Result<()> {
    ensure((0.0..=1.0).contains(&p), || format!("transmit probability must lie in [0, 1], got {p}"))?;
    for v in &mut vehicles.vehicles {
        v.active = rng.gen::<f64>() < p;
    }
    Ok(())
}

/// Keeps each vehicle independently with probability p.
pub fn thin_aloha<R: Rng + ?Sized>(vehicles: &VehicleSet, p: f64, rng: &mut R) -> Result<VehicleSet> {
    let mut marked = vehicles.clone();
    mark_aloha(&mut marked, p, rng)?;
    marked.vehicles.retain(|v| v.active);
    Ok(marked)
}
