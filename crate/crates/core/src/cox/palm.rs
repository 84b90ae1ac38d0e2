use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;

use super::params::ModelParams;
use super::vehicles::{mark_aloha, sample_vehicles, sample_vehicles_in, Vehicle, VehicleSet};
use crate::error::{Error, Result};
use crate::geometry::{
    sample_og, sample_plm, sample_plp, sample_psp, Line, LilypondOutcome, Model, Point, Stick, Street, StreetSystem,
    GEOM_TOL,
};
use crate::law::HalfLengthLaw;

/// Retries before a PLM field without candidate points is reported.
pub const MAX_RESAMPLE: usize = 100;

/// Palm-conditioned realization: the typical vehicle sits at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct TypicalScenario {
    /// 2 for a general vehicle, 3 for a T-junction, 4 for an intersection.
    pub order: u8,
    /// Streets with the typical vehicle's own streets first.
    pub system: StreetSystem,
    /// Number of own streets at the front of `system.streets`.
    pub own: usize,
    /// All vehicles except the typical one.
    pub vehicles: VehicleSet,
    pub params: ModelParams,
}

impl TypicalScenario {
    pub fn own_streets(&self) -> &[Street] {
        &self.system.streets[..self.own]
    }

    pub fn background_streets(&self) -> &[Street] {
        &self.system.streets[self.own..]
    }

    pub fn own_vehicles(&self) -> impl Iterator<Item = &Vehicle> {
        self.vehicles.vehicles.iter().filter(|v| v.street < self.own)
    }

    pub fn background_vehicles(&self) -> impl Iterator<Item = &Vehicle> {
        self.vehicles.vehicles.iter().filter(|v| v.street >= self.own)
    }

    pub fn view(&self) -> PalmView {
        PalmView {
            vehicles: self
                .vehicles
                .vehicles
                .iter()
                .map(|v| ViewVehicle {
                    r2: v.pos.norm_sq(),
                    active: v.active,
                    own: v.street < self.own,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ViewVehicle {
    /// Squared distance to the typical vehicle.
    pub r2: f64,
    pub active: bool,
    /// Lies on one of the typical vehicle's own streets.
    pub own: bool,
}

/// What the typical vehicle sees: distances and marks of all other vehicles.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PalmView {
    pub vehicles: Vec<ViewVehicle>,
}

impl PalmView {
    pub fn nearest(&self) -> Option<f64> {
        self.vehicles.iter().map(|v| v.r2).min_by(f64::total_cmp).map(f64::sqrt)
    }

    pub fn count_within(&self, r: f64) -> usize {
        let r2 = r * r;
        self.vehicles.iter().filter(|v| v.r2 <= r2).count()
    }
}

/// Distance from the origin to the closest vehicle of the scenario.
pub fn nearest_neighbor_distance(scenario: &TypicalScenario) -> Result<f64> {
    scenario
        .vehicles
        .vehicles
        .iter()
        .map(|v| v.pos.norm())
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::DegenerateInput("scenario has no vehicle besides the typical one".into()))
}

fn finish_scenario<R: Rng + ?Sized>(
    order: u8,
    own: Vec<Street>,
    background: StreetSystem,
    params: &ModelParams,
    rng: &mut R,
) -> Result<TypicalScenario> {
    let n_own = own.len();
    let mut system = StreetSystem::empty(background.model, background.window, background.mu);
    for s in own {
        system.push(s);
    }
    system.streets.extend(background.streets);
    system.truncated.extend(background.truncated);
    let mut vehicles = sample_vehicles(&system, params.lambda, rng)?;
    mark_aloha(&mut vehicles, params.p, rng)?;
    Ok(TypicalScenario {
        order,
        system,
        own: n_own,
        vehicles,
        params: *params,
    })
}

/// OG or PLP with `m/2` lines through the origin.
pub fn condition_typical_line_model<R: Rng + ?Sized>(
    model: Model,
    m: u8,
    params: &ModelParams,
    mu: f64,
    window: f64,
    rng: &mut R,
) -> Result<TypicalScenario> {
    params.validate()?;
    if !model.is_line_model() {
        return Err(Error::InvalidParameter(format!("{model} is not a line model")));
    }
    if m != 2 && m != 4 {
        return Err(Error::UnsupportedOrder { model: model.to_string(), order: m });
    }
    let angles: Vec<f64> = match (model, m) {
        (Model::Og, 2) => vec![if rng.gen::<bool>() { 0.0 } else { FRAC_PI_2 }],
        (Model::Og, _) => vec![0.0, FRAC_PI_2],
        (_, 2) => vec![rng.gen_range(0.0..PI)],
        _ => vec![rng.gen_range(0.0..PI), rng.gen_range(0.0..PI)],
    };
    let own = angles.into_iter().map(|a| Street::Line(Line::new(0.0, a))).collect();
    let background = match model {
        Model::Og => sample_og(mu, window, rng)?,
        _ => sample_plp(mu, window, rng)?,
    };
    finish_scenario(m, own, background, params, rng)
}

/// Own stick through the origin: length-biased half-length, uniform
/// orientation, origin at a uniform position along the stick.
pub fn own_stick<R: Rng + ?Sized>(law: &HalfLengthLaw, rng: &mut R) -> Result<Stick> {
    let h = law.sample_biased(rng);
    let angle = rng.gen_range(0.0..PI);
    let w = rng.gen_range(-h..h);
    Stick::new(w * Point::unit(angle), angle, h)
}

/// PSP with `m/2` sticks through the origin.
pub fn condition_typical_psp<R: Rng + ?Sized>(
    m: u8,
    params: &ModelParams,
    mu: f64,
    law: &HalfLengthLaw,
    window: f64,
    rng: &mut R,
) -> Result<TypicalScenario> {
    params.validate()?;
    if m != 2 && m != 4 {
        return Err(Error::UnsupportedOrder { model: Model::Psp.to_string(), order: m });
    }
    let mean = law.mean();
    if !(mean.is_finite() && mean > 0.0) {
        return Err(Error::InvalidParameter(format!("half-length law has mean {mean}")));
    }
    let own = (0..m / 2)
        .map(|_| own_stick(law, rng).map(Street::Stick))
        .collect::<Result<Vec<_>>>()?;
    let background = sample_psp(mu, law, window, rng)?;
    finish_scenario(m, own, background, params, rng)
}

/// Candidate typical point inside a PLM field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TypicalPoint {
    pub pos: Point,
    /// Streets through or ending at the point; the second entry is the
    /// street that ends there (order 3 only).
    pub own: [Option<usize>; 2],
    /// Vehicle index of the typical vehicle itself (order 2).
    pub vehicle: Option<usize>,
}

struct PointGrid {
    lo: Point,
    cell: f64,
    nx: i64,
    ny: i64,
    cells: Vec<Vec<usize>>,
}

impl PointGrid {
    fn new(points: &[Point], extent: f64, cell: f64) -> Self {
        let lo = Point::new(-extent, -extent);
        let n = ((2.0 * extent / cell).ceil() as i64).max(1);
        let mut g = Self {
            lo,
            cell,
            nx: n,
            ny: n,
            cells: vec![Vec::new(); (n * n) as usize],
        };
        for (i, &p) in points.iter().enumerate() {
            let (cx, cy) = g.coords(p);
            let k = (cy * g.nx + cx) as usize;
            g.cells[k].push(i);
        }
        g
    }

    fn coords(&self, p: Point) -> (i64, i64) {
        (
            (((p.x - self.lo.x) / self.cell).floor() as i64).clamp(0, self.nx - 1),
            (((p.y - self.lo.y) / self.cell).floor() as i64).clamp(0, self.ny - 1),
        )
    }

    fn for_each_within(&self, points: &[Point], c: Point, r: f64, mut f: impl FnMut(usize, f64)) {
        let (x0, y0) = self.coords(Point::new(c.x - r, c.y - r));
        let (x1, y1) = self.coords(Point::new(c.x + r, c.y + r));
        let r2 = r * r;
        for y in y0..=y1 {
            for x in x0..=x1 {
                for &i in &self.cells[(y * self.nx + x) as usize] {
                    let d2 = (points[i] - c).norm_sq();
                    if d2 <= r2 {
                        f(i, d2);
                    }
                }
            }
        }
    }
}

/// A PLM realization with vehicles, used for empirical Palm sampling.
pub struct PlmField {
    pub outcome: LilypondOutcome,
    pub vehicles: VehicleSet,
    positions: Vec<Point>,
    grid: PointGrid,
}

impl PlmField {
    /// Grows a field on `b(o, window)` and places vehicles on it.
    pub fn sample<R: Rng + ?Sized>(
        params: &ModelParams,
        mu: f64,
        window: f64,
        t_cap: Option<f64>,
        rng: &mut R,
    ) -> Result<Self> {
        params.validate()?;
        let outcome = sample_plm(mu, window, t_cap, rng)?;
        let mut vehicles = sample_vehicles_in(&outcome.system, params.lambda, Point::ORIGIN, window, rng)?;
        mark_aloha(&mut vehicles, params.p, rng)?;
        Ok(Self::from_parts(outcome, vehicles))
    }

    pub fn from_parts(outcome: LilypondOutcome, vehicles: VehicleSet) -> Self {
        let window = outcome.system.window;
        let positions: Vec<Point> = vehicles.vehicles.iter().map(|v| v.pos).collect();
        let cell = (window / 32.0).max(1e-3);
        let grid = PointGrid::new(&positions, window, cell);
        Self {
            outcome,
            vehicles,
            positions,
            grid,
        }
    }

    /// Vehicles (order 2) or T-junctions (order 3) in `b(o, radius)`.
    pub fn typical_points(&self, order: u8, radius: f64) -> Result<Vec<TypicalPoint>> {
        match order {
            2 => Ok(self
                .vehicles
                .vehicles
                .iter()
                .enumerate()
                .filter(|(_, v)| v.pos.norm() <= radius)
                .map(|(i, v)| TypicalPoint {
                    pos: v.pos,
                    own: [Some(v.street), None],
                    vehicle: Some(i),
                })
                .collect()),
            3 => Ok(self
                .outcome
                .events
                .iter()
                .filter(|e| e.contact.norm() <= radius)
                .map(|e| TypicalPoint {
                    pos: e.contact,
                    own: [Some(e.blocker), Some(e.stopped)],
                    vehicle: None,
                })
                .collect()),
            m => Err(Error::UnsupportedOrder { model: Model::Plm.to_string(), order: m }),
        }
    }

    /// View from `point` over all vehicles within `radius`.
    pub fn view(&self, point: &TypicalPoint, radius: f64) -> PalmView {
        let mut out = Vec::new();
        self.grid.for_each_within(&self.positions, point.pos, radius, |i, d2| {
            if Some(i) == point.vehicle {
                return;
            }
            let v = &self.vehicles.vehicles[i];
            out.push(ViewVehicle {
                r2: d2,
                active: v.active,
                own: point.own.contains(&Some(v.street)),
            });
        });
        PalmView { vehicles: out }
    }

    /// Field translated so that `point` is at the origin, restricted to
    /// `b(o, radius)`.
    pub fn scenario(&self, order: u8, point: &TypicalPoint, radius: f64, params: &ModelParams) -> TypicalScenario {
        let shift = -point.pos;
        let sys = &self.outcome.system;
        let own_ids: Vec<usize> = point.own.iter().flatten().copied().collect();
        let mut index = vec![usize::MAX; sys.len()];
        let mut system = StreetSystem::empty(Model::Plm, radius, sys.mu);
        let mut order_ids = own_ids.clone();
        for k in 0..sys.len() {
            if own_ids.contains(&k) {
                continue;
            }
            let s = sys.streets[k].translated(shift);
            if s.distance_to(Point::ORIGIN) <= radius {
                order_ids.push(k);
            }
        }
        for (new, &k) in order_ids.iter().enumerate() {
            index[k] = new;
            system.streets.push(sys.streets[k].translated(shift));
            system.truncated.push(sys.truncated[k]);
        }
        let mut vehicles = VehicleSet::default();
        for (i, v) in self.vehicles.vehicles.iter().enumerate() {
            if Some(i) == point.vehicle || index[v.street] == usize::MAX {
                continue;
            }
            let pos = v.pos + shift;
            if pos.norm() <= radius {
                let street = index[v.street];
                // offsets are re-expressed on the translated street
                let offset = match system.streets[street] {
                    Street::Line(l) => (pos - l.foot()).dot(l.direction()),
                    Street::Stick(s) => (pos - s.mid).dot(s.direction()),
                };
                vehicles.vehicles.push(Vehicle {
                    pos,
                    street,
                    offset,
                    active: v.active,
                });
            }
        }
        TypicalScenario {
            order,
            system,
            own: own_ids.len(),
            vehicles,
            params: *params,
        }
    }
}

/// Empirical Palm sample of the PLM: a field on `b(o, 2R_w)` is grown, a
/// uniform candidate point in `b(o, R_w)` is picked and the field is
/// translated so the point is at the origin.
pub fn condition_typical_plm<R: Rng + ?Sized>(
    order: u8,
    params: &ModelParams,
    mu: f64,
    window: f64,
    rng: &mut R,
) -> Result<TypicalScenario> {
    if order != 2 && order != 3 {
        return Err(Error::UnsupportedOrder { model: Model::Plm.to_string(), order });
    }
    if order == 2 && params.lambda == 0.0 {
        return Err(Error::InvalidParameter("order-2 Palm sampling needs vehicles".into()));
    }
    for _ in 0..MAX_RESAMPLE {
        let field = PlmField::sample(params, mu, 2.0 * window, None, rng)?;
        let pts = field.typical_points(order, window)?;
        if pts.is_empty() {
            continue;
        }
        let pick = pts[rng.gen_range(0..pts.len())];
        return Ok(field.scenario(order, &pick, window, params));
    }
    Err(Error::ResampleExhausted(MAX_RESAMPLE))
}

/// Own streets contain the origin; background streets do not.
pub fn check_own_streets(s: &TypicalScenario) -> bool {
    s.own_streets().iter().all(|st| st.distance_to(Point::ORIGIN) <= GEOM_TOL)
        && s.background_streets().iter().all(|st| st.distance_to(Point::ORIGIN) > GEOM_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn params() -> ModelParams {
        ModelParams::new(0.3, 0.5, 0.25, 4.0).unwrap()
    }

    #[test]
    fn line_model_own_streets() {
        let mut rng = seeded(1);
        let s = condition_typical_line_model(Model::Plp, 2, &params(), 1.0, 20.0, &mut rng).unwrap();
        assert_eq!(s.own, 1);
        assert!(check_own_streets(&s));
        let s = condition_typical_line_model(Model::Og, 4, &params(), 1.0, 20.0, &mut rng).unwrap();
        assert_eq!(s.own, 2);
        assert_ne!(s.own_streets()[0].angle(), s.own_streets()[1].angle());
        assert!(matches!(
            condition_typical_line_model(Model::Og, 3, &params(), 1.0, 20.0, &mut rng),
            Err(Error::UnsupportedOrder { order: 3, .. })
        ));
        assert!(condition_typical_line_model(Model::Psp, 2, &params(), 1.0, 20.0, &mut rng).is_err());
    }

    #[test]
    fn psp_own_stick_contains_origin() {
        let law = HalfLengthLaw::deterministic(10.0).unwrap();
        let mut rng = seeded(2);
        for _ in 0..50 {
            let s = condition_typical_psp(4, &params(), 0.1, &law, 30.0, &mut rng).unwrap();
            assert_eq!(s.own, 2);
            assert!(check_own_streets(&s));
            for st in s.own_streets() {
                match st {
                    Street::Stick(k) => assert_eq!(k.half_length, 10.0),
                    Street::Line(_) => panic!("line in a stick model"),
                }
            }
        }
        assert!(condition_typical_psp(3, &params(), 0.1, &law, 30.0, &mut rng).is_err());
    }

    #[test]
    fn nearest_neighbor_basic() {
        let mut sys = StreetSystem::empty(Model::Psp, 10.0, 0.1);
        sys.push(Street::Stick(Stick::new(Point::new(3.0, 4.0), 0.0, 1.0).unwrap()));
        let mut s = TypicalScenario {
            order: 2,
            system: sys,
            own: 0,
            vehicles: VehicleSet::default(),
            params: params(),
        };
        assert!(nearest_neighbor_distance(&s).is_err());
        s.vehicles.vehicles.push(Vehicle {
            pos: Point::new(3.0, 4.0),
            street: 0,
            offset: 0.0,
            active: true,
        });
        assert!((nearest_neighbor_distance(&s).unwrap() - 5.0).abs() < 1e-15);
        assert!((s.view().nearest().unwrap() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn plm_orders() {
        let mut rng = seeded(3);
        let s2 = condition_typical_plm(2, &params(), 1.0, 6.0, &mut rng).unwrap();
        assert_eq!(s2.own, 1);
        assert!(check_own_streets(&s2));

        let s3 = condition_typical_plm(3, &params(), 1.0, 6.0, &mut rng).unwrap();
        assert_eq!(s3.own, 2);
        assert!(s3.own_streets().iter().all(|st| st.distance_to(Point::ORIGIN) <= 1e-9));
        match s3.own_streets()[1] {
            Street::Stick(k) => {
                let far = k.endpoints().iter().map(|e| e.norm()).fold(0.0, f64::max);
                assert!((far - 2.0 * k.half_length).abs() < 1e-9);
            }
            Street::Line(_) => panic!("line in the lilypond model"),
        }
        assert!(condition_typical_plm(4, &params(), 1.0, 6.0, &mut rng).is_err());
    }

    #[test]
    fn plm_view_matches_scenario() {
        let mut rng = seeded(4);
        let field = PlmField::sample(&params(), 1.0, 12.0, None, &mut rng).unwrap();
        let pts = field.typical_points(2, 4.0).unwrap();
        let p = pts[0];
        let view = field.view(&p, 5.0);
        let sc = field.scenario(2, &p, 5.0, &params());
        assert_eq!(view.vehicles.len(), sc.vehicles.len());
        let own_view = view.vehicles.iter().filter(|v| v.own).count();
        assert_eq!(own_view, sc.own_vehicles().count());
        for v in &sc.vehicles.vehicles {
            assert!(sc.system.streets[v.street].distance_to(v.pos) < 1e-9);
        }
    }
}
