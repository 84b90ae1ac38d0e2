use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Absolute tolerance for point-on-segment tests, in window units.
pub const GEOM_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn polar(r: f64, angle: f64) -> Self {
        Self::new(r * angle.cos(), r * angle.sin())
    }

    /// Unit vector `u(ϕ) = (cos ϕ, sin ϕ)`.
    pub fn unit(angle: f64) -> Self {
        Self::polar(1.0, angle)
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Polar angle in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            a + 2.0 * PI
        } else {
            a
        }
    }

    pub fn distance(self, o: Point) -> f64 {
        (self - o).norm()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, p: Point) -> Point {
        Point::new(self * p.x, self * p.y)
    }
}

/// Wrap an orientation into `[0, π)`.
pub fn normalize_orientation(angle: f64) -> f64 {
    let a = angle.rem_euclid(PI);
    // rem_euclid can round up to exactly π
    if a >= PI {
        0.0
    } else {
        a
    }
}

/// Street model tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    /// Orthogonal grid with exponential spacing.
    Og,
    /// Poisson line process.
    Plp,
    /// Poisson stick process.
    Psp,
    /// Poisson lilypond model.
    Plm,
}

impl Model {
    pub fn is_line_model(self) -> bool {
        matches!(self, Model::Og | Model::Plp)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Og => "OG",
            Model::Plp => "PLP",
            Model::Psp => "PSP",
            Model::Plm => "PLM",
        })
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "OG" => Ok(Model::Og),
            "PLP" => Ok(Model::Plp),
            "PSP" => Ok(Model::Psp),
            "PLM" => Ok(Model::Plm),
            other => Err(Error::InvalidParameter(format!("unknown street model `{other}`"))),
        }
    }
}

/// `{(a, b) : a cos φ + b sin φ = x}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    /// Signed distance of the foot point from the origin.
    pub offset: f64,
    /// Normal angle in `[0, π)`.
    pub angle: f64,
}

impl Line {
    /// Normalizes `angle` into `[0, π)`, flipping the offset sign when the
    /// normal is reversed.
    pub fn new(offset: f64, angle: f64) -> Self {
        let turns = (angle / PI).floor();
        let angle_n = normalize_orientation(angle);
        let offset = if (turns as i64).rem_euclid(2) == 1 { -offset } else { offset };
        Self { offset, angle: angle_n }
    }

    pub fn normal(&self) -> Point {
        Point::unit(self.angle)
    }

    /// Unit vector along the line.
    pub fn direction(&self) -> Point {
        Point::new(-self.angle.sin(), self.angle.cos())
    }

    pub fn foot(&self) -> Point {
        self.offset * self.normal()
    }

    pub fn point_at(&self, t: f64) -> Point {
        self.foot() + t * self.direction()
    }

    pub fn distance_to(&self, p: Point) -> f64 {
        (p.dot(self.normal()) - self.offset).abs()
    }
}

/// `[y − h u(ϕ), y + h u(ϕ)]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stick {
    pub mid: Point,
    /// Orientation in `[0, π)`.
    pub angle: f64,
    pub half_length: f64,
}

impl Stick {
    pub fn new(mid: Point, angle: f64, half_length: f64) -> Result<Self> {
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "stick half-length must be positive, got {half_length}"
            )));
        }
        Ok(Self {
            mid,
            angle: normalize_orientation(angle),
            half_length,
        })
    }

    pub fn direction(&self) -> Point {
        Point::unit(self.angle)
    }

    pub fn point_at(&self, s: f64) -> Point {
        self.mid + s * self.direction()
    }

    pub fn endpoints(&self) -> [Point; 2] {
        [self.point_at(-self.half_length), self.point_at(self.half_length)]
    }

    /// Midpoint in polar form `(γ, φ)` with `φ ∈ [0, 2π)`.
    pub fn polar_mid(&self) -> (f64, f64) {
        (self.mid.norm(), self.mid.angle())
    }

    pub fn distance_to(&self, p: Point) -> f64 {
        let s = (p - self.mid).dot(self.direction()).clamp(-self.half_length, self.half_length);
        p.distance(self.point_at(s))
    }

    pub fn length(&self) -> f64 {
        2.0 * self.half_length
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Street {
    Line(Line),
    Stick(Stick),
}

impl Street {
    /// Point at arc-length coordinate `t` (from the foot point for lines,
    /// from the midpoint for sticks).
    pub fn point_at(&self, t: f64) -> Point {
        match self {
            Street::Line(l) => l.point_at(t),
            Street::Stick(s) => s.point_at(t),
        }
    }

    pub fn distance_to(&self, p: Point) -> f64 {
        match self {
            Street::Line(l) => l.distance_to(p),
            Street::Stick(s) => s.distance_to(p),
        }
    }

    /// Arc-length interval of the street inside the disk `b(center, r)`.
    pub fn interval_in_disk(&self, center: Point, r: f64) -> Option<(f64, f64)> {
        match self {
            Street::Line(l) => {
                let rel = center - l.foot();
                let along = rel.dot(l.direction());
                let perp = rel.dot(l.normal());
                let disc = r * r - perp * perp;
                if disc <= 0.0 {
                    return None;
                }
                let half = disc.sqrt();
                Some((along - half, along + half))
            }
            Street::Stick(s) => {
                let rel = center - s.mid;
                let along = rel.dot(s.direction());
                let perp = rel.cross(s.direction());
                let disc = r * r - perp * perp;
                if disc <= 0.0 {
                    return None;
                }
                let half = disc.sqrt();
                let lo = (along - half).max(-s.half_length);
                let hi = (along + half).min(s.half_length);
                (hi > lo).then_some((lo, hi))
            }
        }
    }

    pub fn translated(&self, by: Point) -> Street {
        match self {
            Street::Line(l) => {
                // shifting by `by` moves the offset by by·n
                Street::Line(Line {
                    offset: l.offset + by.dot(l.normal()),
                    angle: l.angle,
                })
            }
            Street::Stick(s) => Street::Stick(Stick {
                mid: s.mid + by,
                ..*s
            }),
        }
    }

    pub fn angle(&self) -> f64 {
        match self {
            Street::Line(l) => l.angle,
            Street::Stick(s) => s.angle,
        }
    }
}

/// A realization of one street model inside a disk window centered at the
/// origin.
#[derive(Clone, Debug, PartialEq)]
pub struct StreetSystem {
    pub model: Model,
    pub streets: Vec<Street>,
    /// Window radius.
    pub window: f64,
    /// Street intensity the system was drawn with.
    pub mu: f64,
    /// Per-street flag: lilypond growth hit the cap before a collision.
    pub truncated: Vec<bool>,
}

impl StreetSystem {
    pub fn empty(model: Model, window: f64, mu: f64) -> Self {
        Self {
            model,
            streets: Vec::new(),
            window,
            mu,
            truncated: Vec::new(),
        }
    }

    pub fn push(&mut self, street: Street) {
        self.streets.push(street);
        self.truncated.push(false);
    }

    pub fn len(&self) -> usize {
        self.streets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.streets.is_empty()
    }

    pub fn sticks(&self) -> impl Iterator<Item = &Stick> {
        self.streets.iter().filter_map(|s| match s {
            Street::Stick(st) => Some(st),
            Street::Line(_) => None,
        })
    }
}
