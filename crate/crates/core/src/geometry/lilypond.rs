use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use rand::Rng;

use super::sample::{poisson_count, uniform_in_disk};
use super::street::{Model, Point, Stick, Street, StreetSystem, GEOM_TOL};
use crate::error::{ensure, Error, Result};

/// Germ of a lilypond stick.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Seed {
    pub pos: Point,
    /// Orientation in `[0, π)`.
    pub angle: f64,
}

impl Seed {
    pub fn new(pos: Point, angle: f64) -> Self {
        Self {
            pos,
            angle: super::street::normalize_orientation(angle),
        }
    }
}

/// State of the stick being hit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extent {
    Growing,
    Frozen(f64),
}

/// Endpoint `y_i + sign·t·u(ϕ_i)` meets the other stick at parameter `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Collision {
    pub time: f64,
    pub s: f64,
}

/// Earliest time the `sign` endpoint of a stick growing from `grower` lies on
/// the current extent of `other`.
pub fn collision_time(grower: &Seed, sign: f64, other: &Seed, extent: Extent) -> Option<Collision> {
    let ui = Point::unit(grower.angle);
    let uj = Point::unit(other.angle);
    let cr = ui.cross(uj);
    if cr.abs() < 1e-14 {
        return None;
    }
    let d = other.pos - grower.pos;
    // Cramer on  sign·t·u_i − s·u_j = d
    let time = d.cross(uj) / (sign * cr);
    let s = d.cross(ui) / cr;
    if time <= 0.0 {
        return None;
    }
    let reach = match extent {
        Extent::Growing => time,
        Extent::Frozen(h) => h,
    };
    (s.abs() <= reach + GEOM_TOL).then_some(Collision { time, s })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthEvent {
    /// Collision time, equal to the stopped stick's half-length.
    pub time: f64,
    pub stopped: usize,
    pub blocker: usize,
    pub contact: Point,
}

#[derive(Clone, Debug)]
pub struct LilypondOutcome {
    pub system: StreetSystem,
    pub events: Vec<GrowthEvent>,
}

impl LilypondOutcome {
    pub fn truncated_count(&self) -> usize {
        self.system.truncated.iter().filter(|&&t| t).count()
    }
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    time: f64,
    other: usize,
    sign: i8,
}

#[derive(Clone, Copy, Debug)]
enum Action {
    Hit(Candidate),
    Expand,
}

#[derive(Clone, Copy, Debug)]
struct Event {
    time: f64,
    stick: usize,
    action: Action,
}

impl Event {
    fn key(&self) -> (f64, usize, i8) {
        let code = match self.action {
            Action::Hit(c) => c.sign,
            Action::Expand => 2,
        };
        (self.time, self.stick, code)
    }
}

impl PartialEq for Event {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Event {}
impl PartialOrd for Event {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Event {
    // reversed so BinaryHeap pops the earliest event
    fn cmp(&self, o: &Self) -> Ordering {
        let (ta, ia, sa) = self.key();
        let (tb, ib, sb) = o.key();
        tb.total_cmp(&ta).then(ib.cmp(&ia)).then(sb.cmp(&sa))
    }
}

struct Grid {
    origin: Point,
    cell: f64,
    nx: i64,
    ny: i64,
    cells: Vec<Vec<usize>>,
}

impl Grid {
    fn new(seeds: &[Seed], cell: f64) -> Self {
        let (mut lo, mut hi) = (seeds[0].pos, seeds[0].pos);
        for s in seeds {
            lo = Point::new(lo.x.min(s.pos.x), lo.y.min(s.pos.y));
            hi = Point::new(hi.x.max(s.pos.x), hi.y.max(s.pos.y));
        }
        let nx = ((hi.x - lo.x) / cell).floor() as i64 + 1;
        let ny = ((hi.y - lo.y) / cell).floor() as i64 + 1;
        let mut cells = vec![Vec::new(); (nx * ny) as usize];
        let mut g = Self { origin: lo, cell, nx, ny, cells: Vec::new() };
        for (i, s) in seeds.iter().enumerate() {
            let (cx, cy) = g.coords(s.pos);
            cells[(cy * nx + cx) as usize].push(i);
        }
        g.cells = cells;
        g
    }

    fn coords(&self, p: Point) -> (i64, i64) {
        let cx = (((p.x - self.origin.x) / self.cell).floor() as i64).clamp(0, self.nx - 1);
        let cy = (((p.y - self.origin.y) / self.cell).floor() as i64).clamp(0, self.ny - 1);
        (cx, cy)
    }

    fn within(&self, seeds: &[Seed], center: Point, radius: f64, out: &mut Vec<usize>) {
        out.clear();
        let k = (radius / self.cell).ceil() as i64;
        let (cx, cy) = self.coords(center);
        for y in (cy - k).max(0)..=(cy + k).min(self.ny - 1) {
            for x in (cx - k).max(0)..=(cx + k).min(self.nx - 1) {
                for &j in &self.cells[(y * self.nx + x) as usize] {
                    if seeds[j].pos.distance(center) <= radius {
                        out.push(j);
                    }
                }
            }
        }
    }
}

/// Exact event-driven lilypond growth.
///
/// Every stick grows at unit rate on both sides and freezes when one of its
/// endpoints touches another stick. Sticks still growing at `t_cap` stop
/// there and are flagged as truncated. Ties are broken by (time, lower stick
/// index, lower endpoint sign).
pub fn grow_lilypond(seeds: &[Seed], t_cap: f64, window: f64, mu: f64) -> Result<LilypondOutcome> {
    ensure(t_cap > 0.0 && t_cap.is_finite(), || format!("growth cap must be positive, got {t_cap}"))?;
    let n = seeds.len();
    let mut system = StreetSystem::empty(Model::Plm, window, mu);
    if n == 0 {
        return Ok(LilypondOutcome { system, events: Vec::new() });
    }

    let (mut lo, mut hi) = (seeds[0].pos, seeds[0].pos);
    for s in seeds {
        lo = Point::new(lo.x.min(s.pos.x), lo.y.min(s.pos.y));
        hi = Point::new(hi.x.max(s.pos.x), hi.y.max(s.pos.y));
    }
    let area = ((hi.x - lo.x) * (hi.y - lo.y)).max(0.0);
    let spacing = if area > 0.0 { (area / n as f64).sqrt() } else { t_cap };
    let cell = spacing.clamp(1e-6 * t_cap.max(1.0), 2.0 * t_cap);
    let grid = Grid::new(seeds, cell);

    let mut buf = Vec::new();
    for (i, s) in seeds.iter().enumerate() {
        grid.within(seeds, s.pos, GEOM_TOL, &mut buf);
        if buf.iter().any(|&j| j != i) {
            return Err(Error::DegenerateInput(format!(
                "duplicate seed location ({}, {})",
                s.pos.x, s.pos.y
            )));
        }
    }

    let rho0 = (3.0 * spacing).min(2.0 * t_cap).max(cell);
    let mut radius = vec![rho0; n];
    let mut cands: Vec<Vec<Candidate>> = vec![Vec::new(); n];
    let mut frozen: Vec<Option<f64>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    let mut events = Vec::new();

    let compute = |i: usize, rho: f64, now: f64, buf: &mut Vec<usize>| -> Vec<Candidate> {
        grid.within(seeds, seeds[i].pos, rho, buf);
        let mut out = Vec::new();
        for &j in buf.iter() {
            if j == i {
                continue;
            }
            for sign in [-1i8, 1] {
                if let Some(c) = collision_time(&seeds[i], sign as f64, &seeds[j], Extent::Growing) {
                    if c.time >= now && c.time <= t_cap {
                        out.push(Candidate { time: c.time, other: j, sign });
                    }
                }
            }
        }
        // descending, so the earliest candidate sits at the end
        out.sort_by(|a, b| {
            b.time
                .total_cmp(&a.time)
                .then(b.other.cmp(&a.other))
                .then(b.sign.cmp(&a.sign))
        });
        out
    };

    let schedule = |i: usize, cands: &[Candidate], rho: f64, heap: &mut BinaryHeap<Event>| {
        let horizon = if rho / 2.0 >= t_cap { f64::INFINITY } else { rho / 2.0 };
        match cands.last() {
            Some(c) if c.time <= horizon => heap.push(Event {
                time: c.time,
                stick: i,
                action: Action::Hit(*c),
            }),
            _ if horizon.is_finite() => heap.push(Event {
                time: horizon,
                stick: i,
                action: Action::Expand,
            }),
            _ => {}
        }
    };

    for i in 0..n {
        cands[i] = compute(i, radius[i], 0.0, &mut buf);
        schedule(i, &cands[i], radius[i], &mut heap);
    }

    while let Some(ev) = heap.pop() {
        let i = ev.stick;
        if frozen[i].is_some() {
            continue;
        }
        match ev.action {
            Action::Expand => {
                radius[i] *= 2.0;
                cands[i] = compute(i, radius[i], ev.time, &mut buf);
            }
            Action::Hit(c) => {
                cands[i].pop();
                let j = c.other;
                let valid = match frozen[j] {
                    None => true,
                    Some(hj) => collision_time(&seeds[i], c.sign as f64, &seeds[j], Extent::Frozen(hj)).is_some(),
                };
                if valid {
                    frozen[i] = Some(c.time);
                    events.push(GrowthEvent {
                        time: c.time,
                        stopped: i,
                        blocker: j,
                        contact: seeds[i].pos + (c.sign as f64 * c.time) * Point::unit(seeds[i].angle),
                    });
                    continue;
                }
            }
        }
        schedule(i, &cands[i], radius[i], &mut heap);
    }

    for (i, s) in seeds.iter().enumerate() {
        let (h, trunc) = match frozen[i] {
            Some(h) => (h, false),
            None => (t_cap, true),
        };
        system.streets.push(Street::Stick(Stick::new(s.pos, s.angle, h)?));
        system.truncated.push(trunc);
    }
    Ok(LilypondOutcome { system, events })
}

/// Default growth cap `10/√μ`.
pub fn default_t_cap(mu: f64) -> f64 {
    10.0 / mu.sqrt()
}

/// Poisson seeds of intensity μ on `b(o, radius)` with uniform orientations.
pub fn sample_seeds<R: Rng + ?Sized>(mu: f64, radius: f64, rng: &mut R) -> Vec<Seed> {
    let n = poisson_count(mu * PI * radius * radius, rng);
    (0..n)
        .map(|_| {
            let pos = uniform_in_disk(radius, rng);
            Seed::new(pos, rng.gen_range(0.0..PI))
        })
        .collect()
}

/// PLM realization for analysis window `b(o, R_w)`; seeds are drawn on a
/// disk padded by `t_cap`.
pub fn sample_plm<R: Rng + ?Sized>(
    mu: f64,
    window: f64,
    t_cap: Option<f64>,
    rng: &mut R,
) -> Result<LilypondOutcome> {
    ensure(mu > 0.0 && mu.is_finite(), || format!("street intensity must be positive, got {mu}"))?;
    ensure(window > 0.0 && window.is_finite(), || format!("window radius must be positive, got {window}"))?;
    let cap = t_cap.unwrap_or_else(|| default_t_cap(mu));
    let seeds = sample_seeds(mu, window + cap, rng);
    grow_lilypond(&seeds, cap, window, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use std::f64::consts::FRAC_PI_2;

    fn first_hit_by_scan(a: &Seed, sign: f64, b: &Seed, ext: Extent, t_max: f64) -> Option<f64> {
        let steps = 200_000;
        let ub = Point::unit(b.angle);
        let ua = Point::unit(a.angle);
        let mut prev: Option<f64> = None;
        for k in 1..=steps {
            let t = t_max * k as f64 / steps as f64;
            let tip = a.pos + (sign * t) * ua;
            let rel = tip - b.pos;
            let side = rel.cross(ub);
            let s = rel.dot(ub);
            let reach = match ext {
                Extent::Growing => t,
                Extent::Frozen(h) => h,
            };
            if let Some(p) = prev {
                if p.signum() != side.signum() && s.abs() <= reach {
                    return Some(t);
                }
            }
            prev = Some(side);
        }
        None
    }

    #[test]
    fn hand_solved_pair() {
        let a = Seed::new(Point::new(0.0, 0.0), 0.0);
        let b = Seed::new(Point::new(1.0, 0.5), FRAC_PI_2);
        let c = collision_time(&a, 1.0, &b, Extent::Growing).unwrap();
        assert!((c.time - 1.0).abs() < 1e-12);
        assert!(collision_time(&b, -1.0, &a, Extent::Growing).is_none());

        let out = grow_lilypond(&[a, b], 5.0, 10.0, 1.0).unwrap();
        assert_eq!(out.events.len(), 1);
        let e = out.events[0];
        assert_eq!((e.stopped, e.blocker), (0, 1));
        assert!((e.time - 1.0).abs() < 1e-12);
        assert!(e.contact.distance(Point::new(1.0, 0.0)) < 1e-12);
        assert_eq!(out.system.truncated, vec![false, true]);
    }

    #[test]
    fn parallel_seeds_run_to_cap() {
        let a = Seed::new(Point::new(0.0, 0.0), 0.3);
        let b = Seed::new(Point::new(0.0, 1.0), 0.3);
        assert!(collision_time(&a, 1.0, &b, Extent::Growing).is_none());
        let out = grow_lilypond(&[a, b], 4.0, 10.0, 1.0).unwrap();
        assert!(out.events.is_empty());
        assert_eq!(out.truncated_count(), 2);
    }

    #[test]
    fn frozen_target_missed() {
        let a = Seed::new(Point::new(0.0, 0.0), 0.0);
        let b = Seed::new(Point::new(2.0, 1.5), FRAC_PI_2);
        assert!(collision_time(&a, 1.0, &b, Extent::Frozen(1.0)).is_none());
        assert!(first_hit_by_scan(&a, 1.0, &b, Extent::Frozen(1.0), 6.0).is_none());
        let c = collision_time(&a, 1.0, &b, Extent::Frozen(2.0)).unwrap();
        let scan = first_hit_by_scan(&a, 1.0, &b, Extent::Frozen(2.0), 6.0).unwrap();
        assert!((c.time - scan).abs() < 1e-4);
    }

    #[test]
    fn matches_scan_on_random_pairs() {
        let mut rng = seeded(17);
        for _ in 0..100 {
            let a = Seed::new(uniform_in_disk(3.0, &mut rng), rng.gen_range(0.0..PI));
            let b = Seed::new(uniform_in_disk(3.0, &mut rng), rng.gen_range(0.0..PI));
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let exact = collision_time(&a, sign, &b, Extent::Growing).map(|c| c.time).filter(|&t| t <= 10.0);
            let scan = first_hit_by_scan(&a, sign, &b, Extent::Growing, 10.0);
            match (exact, scan) {
                (Some(x), Some(y)) => assert!((x - y).abs() < 1e-3),
                (None, None) => {}
                // only grazing hits, within one scan step of the extent edge
                (x, y) => {
                    let loose = collision_time(&a, sign, &b, Extent::Frozen(f64::INFINITY)).unwrap();
                    assert!((loose.s.abs() - loose.time).abs() < 1e-3 || loose.time > 9.99, "{x:?} {y:?}");
                }
            }
        }
    }

    #[test]
    fn duplicate_seeds_rejected() {
        let a = Seed::new(Point::new(1.0, 1.0), 0.1);
        let b = Seed::new(Point::new(1.0, 1.0), 0.7);
        assert!(matches!(grow_lilypond(&[a, b], 1.0, 5.0, 1.0), Err(Error::DegenerateInput(_))));
    }

    fn properly_cross(a: &Stick, b: &Stick) -> bool {
        let (ua, ub) = (a.direction(), b.direction());
        let cr = ua.cross(ub);
        if cr.abs() < 1e-14 {
            return false;
        }
        let d = b.mid - a.mid;
        let s = d.cross(ub) / cr;
        let t = d.cross(ua) / cr;
        s.abs() < a.half_length - 1e-7 && t.abs() < b.half_length - 1e-7
    }

    #[test]
    fn field_invariants() {
        let out = sample_plm(1.0, 8.0, None, &mut seeded(23)).unwrap();
        let sticks: Vec<Stick> = out.system.sticks().copied().collect();
        for i in 0..sticks.len() {
            for j in i + 1..sticks.len() {
                assert!(!properly_cross(&sticks[i], &sticks[j]), "{i} {j}");
            }
        }
        for e in &out.events {
            assert!(sticks[e.blocker].distance_to(e.contact) < 1e-9);
            assert!((sticks[e.stopped].half_length - e.time).abs() < 1e-15);
        }
        assert_eq!(out.events.len() + out.truncated_count(), sticks.len());
    }

    #[test]
    fn seed_order_does_not_change_lengths() {
        let mut rng = seeded(29);
        let seeds = sample_seeds(1.0, 6.0, &mut rng);
        let a = grow_lilypond(&seeds, 10.0, 6.0, 1.0).unwrap();
        let rev: Vec<Seed> = seeds.iter().rev().copied().collect();
        let b = grow_lilypond(&rev, 10.0, 6.0, 1.0).unwrap();
        let n = seeds.len();
        for i in 0..n {
            assert_eq!(a.system.streets[i], b.system.streets[n - 1 - i]);
        }
    }

    #[test]
    fn brute_force_agrees_with_indexed_growth() {
        // quadratic reference: repeatedly freeze the globally earliest valid hit
        let mut rng = seeded(31);
        let seeds = sample_seeds(1.0, 5.0, &mut rng);
        let cap = 10.0;
        let n = seeds.len();
        let mut frozen: Vec<Option<f64>> = vec![None; n];
        loop {
            let mut best: Option<(f64, usize)> = None;
            for i in 0..n {
                if frozen[i].is_some() {
                    continue;
                }
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    for sign in [-1.0, 1.0] {
                        let ext = frozen[j].map_or(Extent::Growing, Extent::Frozen);
                        if let Some(c) = collision_time(&seeds[i], sign, &seeds[j], ext) {
                            let ok = match frozen[j] {
                                Some(h) => c.time >= h,
                                None => true,
                            };
                            if ok && c.time <= cap && best.map_or(true, |(t, _)| c.time < t) {
                                best = Some((c.time, i));
                            }
                        }
                    }
                }
            }
            match best {
                Some((t, i)) => frozen[i] = Some(t),
                None => break,
            }
        }
        let out = grow_lilypond(&seeds, cap, 5.0, 1.0).unwrap();
        for (i, s) in out.system.sticks().enumerate() {
            let want = frozen[i].unwrap_or(cap);
            assert!((s.half_length - want).abs() < 1e-12, "{i}");
        }
    }
}
