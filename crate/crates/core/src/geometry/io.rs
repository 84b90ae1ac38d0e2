//! Line-oriented text format for street systems.
//!
//! ```text
//! # model=PLM mu=1 window=10 seed=7
//! kind,x|y.x,y.y,angle,halflen
//! line,0.25,,1.5,
//! stick,3,-1.5,0.75,0.5
//! ```
//!
//! Floats are written in shortest round-trip form, so reading back a
//! written file reproduces the system exactly. Truncation flags are not
//! stored.

use std::io::{BufRead, Write};

use super::street::{Line, Model, Point, Stick, Street, StreetSystem};
use crate::error::{Error, Result};

pub const COLUMN_HEADER: &str = "kind,x|y.x,y.y,angle,halflen";

pub fn write_system<W: Write>(w: &mut W, system: &StreetSystem, seed: Option<u64>) -> Result<()> {
    write!(w, "# model={} mu={} window={}", system.model, system.mu, system.window)?;
    if let Some(s) = seed {
        write!(w, " seed={s}")?;
    }
    writeln!(w)?;
    writeln!(w, "{COLUMN_HEADER}")?;
    for st in &system.streets {
        match st {
            Street::Line(l) => writeln!(w, "line,{},,{},", l.offset, l.angle)?,
            Street::Stick(s) => writeln!(w, "stick,{},{},{},{}", s.mid.x, s.mid.y, s.angle, s.half_length)?,
        }
    }
    Ok(())
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn num(field: &str, line: usize, what: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| parse_err(line, format!("bad {what} `{field}`")))
}

/// Parses a street file from `lines`, stopping at the first blank line.
/// Returns the system, the recorded seed and the number of lines consumed.
pub fn parse_system<'a, I>(lines: I) -> Result<(StreetSystem, Option<u64>, usize)>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut it = lines.into_iter().enumerate();
    let (_, head) = it.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let head = head
        .strip_prefix('#')
        .ok_or_else(|| parse_err(1, "missing `#` header"))?;
    let (mut model, mut mu, mut window, mut seed) = (None, None, None, None);
    for kv in head.split_whitespace() {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| parse_err(1, format!("bad header field `{kv}`")))?;
        match k {
            "model" => model = Some(v.parse::<Model>().map_err(|e| parse_err(1, e.to_string()))?),
            "mu" => mu = Some(num(v, 1, "mu")?),
            "window" => window = Some(num(v, 1, "window")?),
            "seed" => seed = Some(v.parse::<u64>().map_err(|_| parse_err(1, format!("bad seed `{v}`")))?),
            _ => return Err(parse_err(1, format!("unknown header key `{k}`"))),
        }
    }
    let model = model.ok_or_else(|| parse_err(1, "header lacks model"))?;
    let mu = mu.ok_or_else(|| parse_err(1, "header lacks mu"))?;
    let window = window.ok_or_else(|| parse_err(1, "header lacks window"))?;

    match it.next() {
        Some((_, l)) if l.trim() == COLUMN_HEADER => {}
        _ => return Err(parse_err(2, "missing column header")),
    }

    let mut sys = StreetSystem::empty(model, window, mu);
    let mut consumed = 2;
    for (i, raw) in it {
        let lineno = i + 1;
        consumed = lineno;
        if raw.trim().is_empty() {
            break;
        }
        let f: Vec<&str> = raw.split(',').collect();
        if f.len() != 5 {
            return Err(parse_err(lineno, format!("expected 5 fields, found {}", f.len())));
        }
        let street = match f[0].trim() {
            "line" => Street::Line(Line::new(num(f[1], lineno, "offset")?, num(f[3], lineno, "angle")?)),
            "stick" => {
                let mid = Point::new(num(f[1], lineno, "y.x")?, num(f[2], lineno, "y.y")?);
                let s = Stick::new(mid, num(f[3], lineno, "angle")?, num(f[4], lineno, "halflen")?)
                    .map_err(|e| parse_err(lineno, e.to_string()))?;
                Street::Stick(s)
            }
            other => return Err(parse_err(lineno, format!("unknown street kind `{other}`"))),
        };
        sys.push(street);
    }
    Ok((sys, seed, consumed))
}

pub fn read_system<R: BufRead>(r: R) -> Result<(StreetSystem, Option<u64>)> {
    let text: Vec<String> = r.lines().collect::<std::io::Result<_>>()?;
    let (sys, seed, _) = parse_system(text.iter().map(String::as_str))?;
    Ok((sys, seed))
}
