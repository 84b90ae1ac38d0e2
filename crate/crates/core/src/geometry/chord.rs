use super::street::{Line, Point, Stick, StreetSystem};

/// Closed disk `b(center, radius)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point, radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn at_origin(radius: f64) -> Self {
        Self::new(Point::ORIGIN, radius)
    }

    pub fn contains(&self, p: Point) -> bool {
        p.distance(self.center) <= self.radius
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }
}

/// Length of a stick with midpoint at polar distance `gamma`, relative angle
/// `psi = φ_mid − ϕ` and half-length `h` inside `b(o, r)`.
///
/// Points `y + u·u(ϕ)` lie in the disk iff `γ² + u² + 2γu cos ψ ≤ r²`; the
/// chord interval is intersected with `[−h, h]`.
pub fn stick_chord(gamma: f64, psi: f64, h: f64, r: f64) -> f64 {
    let c = gamma * psi.cos();
    let s = gamma * psi.sin();
    let disc = r * r - s * s;
    if disc <= 0.0 {
        return 0.0;
    }
    let sq = disc.sqrt();
    let lo = (-c - sq).max(-h);
    let hi = (-c + sq).min(h);
    (hi - lo).max(0.0)
}

/// `|stick ∩ b(o, r)|₁`.
pub fn disk_chord_length(stick: &Stick, r: f64) -> f64 {
    let (gamma, phi) = stick.polar_mid();
    stick_chord(gamma, phi - stick.angle, stick.half_length, r)
}

/// `|line ∩ b(o, r)|₁`.
pub fn line_disk_chord(line: &Line, r: f64) -> f64 {
    let x = line.offset.abs();
    if x >= r {
        0.0
    } else {
        2.0 * (r * r - x * x).sqrt()
    }
}

/// Total street length inside `disk`.
pub fn total_length_in(system: &StreetSystem, disk: &Disk) -> f64 {
    system
        .streets
        .iter()
        .filter_map(|s| s.interval_in_disk(disk.center, disk.radius))
        .map(|(lo, hi)| hi - lo)
        .sum()
}
