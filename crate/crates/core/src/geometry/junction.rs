use super::chord::{total_length_in, Disk};
use super::street::{Point, Street, StreetSystem, GEOM_TOL};

/// Points of order 1, 3 and 4 inside the window, plus the order-2 length.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct JunctionSet {
    pub order1: Vec<Point>,
    pub order3: Vec<Point>,
    pub order4: Vec<Point>,
    pub order2_length: f64,
}

#[derive(Clone, Copy)]
struct Seg {
    a: Point,
    b: Point,
    stick: bool,
}

impl Seg {
    fn dir(&self) -> Point {
        self.b - self.a
    }

    fn distance_to(&self, p: Point) -> f64 {
        let d = self.dir();
        let len2 = d.norm_sq();
        let t = if len2 > 0.0 { ((p - self.a).dot(d) / len2).clamp(0.0, 1.0) } else { 0.0 };
        p.distance(self.a + t * d)
    }

    fn bbox(&self) -> (Point, Point) {
        (
            Point::new(self.a.x.min(self.b.x) - GEOM_TOL, self.a.y.min(self.b.y) - GEOM_TOL),
            Point::new(self.a.x.max(self.b.x) + GEOM_TOL, self.a.y.max(self.b.y) + GEOM_TOL),
        )
    }
}

/// Intersection strictly inside both segments, away from every endpoint.
fn proper_crossing(p: &Seg, q: &Seg) -> Option<Point> {
    let (dp, dq) = (p.dir(), q.dir());
    let cr = dp.cross(dq);
    if cr.abs() < 1e-14 * dp.norm() * dq.norm() {
        return None;
    }
    let d = q.a - p.a;
    let s = d.cross(dq) / cr;
    let t = d.cross(dp) / cr;
    let (ep, eq) = (GEOM_TOL / dp.norm(), GEOM_TOL / dq.norm());
    let inside_p = if p.stick { s > ep && s < 1.0 - ep } else { (0.0..=1.0).contains(&s) };
    let inside_q = if q.stick { t > eq && t < 1.0 - eq } else { (0.0..=1.0).contains(&t) };
    (inside_p && inside_q).then(|| p.a + s * dp)
}

/// Classify the points of a street system by order.
///
/// Free stick endpoints are order 1, endpoints resting on another street
/// are order 3, and transversal crossings are order 4. Lines are clipped to
/// the window, so only points inside `b(o, R_w)` are reported.
pub fn decompose(system: &StreetSystem) -> JunctionSet {
    let window = system.window;
    let mut segs = Vec::with_capacity(system.len());
    for st in &system.streets {
        match st {
            Street::Line(_) => {
                if let Some((lo, hi)) = st.interval_in_disk(Point::ORIGIN, window) {
                    segs.push(Seg { a: st.point_at(lo), b: st.point_at(hi), stick: false });
                }
            }
            Street::Stick(s) => {
                let [a, b] = s.endpoints();
                segs.push(Seg { a, b, stick: true });
            }
        }
    }

    let mut order: Vec<usize> = (0..segs.len()).collect();
    let boxes: Vec<(Point, Point)> = segs.iter().map(Seg::bbox).collect();
    order.sort_by(|&i, &j| boxes[i].0.x.total_cmp(&boxes[j].0.x));

    // per segment: endpoint a / b rests on another street
    let mut rests = vec![[false; 2]; segs.len()];
    let mut order4 = Vec::new();
    let in_window = |p: Point| p.norm() <= window;
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if boxes[j].0.x > boxes[i].1.x {
                break;
            }
            if boxes[j].0.y > boxes[i].1.y || boxes[i].0.y > boxes[j].1.y {
                continue;
            }
            let (p, q) = (&segs[i], &segs[j]);
            for (x, y, idx) in [(p, q, i), (q, p, j)] {
                if x.stick {
                    if y.distance_to(x.a) <= GEOM_TOL {
                        rests[idx][0] = true;
                    }
                    if y.distance_to(x.b) <= GEOM_TOL {
                        rests[idx][1] = true;
                    }
                }
            }
            if let Some(c) = proper_crossing(p, q) {
                if in_window(c) {
                    order4.push(c);
                }
            }
        }
    }

    let mut order1 = Vec::new();
    let mut order3 = Vec::new();
    for (seg, r) in segs.iter().zip(&rests) {
        if !seg.stick {
            continue;
        }
        for (p, on) in [(seg.a, r[0]), (seg.b, r[1])] {
            if in_window(p) {
                if on {
                    order3.push(p);
                } else {
                    order1.push(p);
                }
            }
        }
    }

    JunctionSet {
        order1,
        order3,
        order4,
        order2_length: total_length_in(system, &Disk::at_origin(window)),
    }
}
