//! Scenario dump: the street file, a blank line, then vehicle records.
//!
//! ```text
//! # model=PSP mu=0.1 window=30 seed=3
//! kind,x|y.x,y.y,angle,halflen
//! stick,...
//!
//! # order=2 own=1
//! street_id,offset,active
//! 0,-1.25,1
//! ```

use std::io::{BufRead, Write};

use super::palm::TypicalScenario;
use super::vehicles::{Vehicle, VehicleSet};
use crate::error::{Error, Result};
use crate::geometry::{parse_system, write_system, StreetSystem};

pub const VEHICLE_HEADER: &str = "street_id,offset,active";

pub fn write_scenario<W: Write>(w: &mut W, scenario: &TypicalScenario, seed: Option<u64>) -> Result<()> {
    write_system(w, &scenario.system, seed)?;
    writeln!(w)?;
    writeln!(w, "# order={} own={}", scenario.order, scenario.own)?;
    writeln!(w, "{VEHICLE_HEADER}")?;
    for v in &scenario.vehicles.vehicles {
        writeln!(w, "{},{},{}", v.street, v.offset, u8::from(v.active))?;
    }
    Ok(())
}

/// Streets, vehicles, order and own-street count of a dump. Vehicle
/// positions are recomputed from the street and offset.
pub struct ScenarioDump {
    pub system: StreetSystem,
    pub seed: Option<u64>,
    pub order: u8,
    pub own: usize,
    pub vehicles: VehicleSet,
}

pub fn read_scenario<R: BufRead>(r: R) -> Result<ScenarioDump> {
    let text: Vec<String> = r.lines().collect::<std::io::Result<_>>()?;
    let (system, seed, consumed) = parse_system(text.iter().map(String::as_str))?;
    let err = |line: usize, msg: String| Error::Parse { line, msg };
    let mut rest = text.iter().enumerate().skip(consumed);

    let (i, head) = rest.next().ok_or_else(|| err(consumed + 1, "missing vehicle section".into()))?;
    let head = head
        .strip_prefix('#')
        .ok_or_else(|| err(i + 1, "missing vehicle section header".into()))?;
    let (mut order, mut own) = (None, None);
    for kv in head.split_whitespace() {
        match kv.split_once('=') {
            Some(("order", v)) => order = v.parse::<u8>().ok(),
            Some(("own", v)) => own = v.parse::<usize>().ok(),
            _ => return Err(err(i + 1, format!("bad field `{kv}`"))),
        }
    }
    let order = order.ok_or_else(|| err(i + 1, "missing order".into()))?;
    let own = own.ok_or_else(|| err(i + 1, "missing own".into()))?;
    match rest.next() {
        Some((_, l)) if l.trim() == VEHICLE_HEADER => {}
        Some((j, _)) => return Err(err(j + 1, "missing vehicle column header".into())),
        None => return Err(err(i + 2, "missing vehicle column header".into())),
    }

    let mut vehicles = VehicleSet::default();
    for (j, line) in rest {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 3 {
            return Err(err(j + 1, format!("expected 3 fields, found {}", f.len())));
        }
        let street: usize = f[0].trim().parse().map_err(|_| err(j + 1, format!("bad street id `{}`", f[0])))?;
        let offset: f64 = f[1].trim().parse().map_err(|_| err(j + 1, format!("bad offset `{}`", f[1])))?;
        let active = match f[2].trim() {
            "1" => true,
            "0" => false,
            other => return Err(err(j + 1, format!("bad active flag `{other}`"))),
        };
        let st = system
            .streets
            .get(street)
            .ok_or_else(|| err(j + 1, format!("street {street} does not exist")))?;
        vehicles.vehicles.push(Vehicle {
            pos: st.point_at(offset),
            street,
            offset,
            active,
        });
    }
    Ok(ScenarioDump {
        system,
        seed,
        order,
        own,
        vehicles,
    })
}
