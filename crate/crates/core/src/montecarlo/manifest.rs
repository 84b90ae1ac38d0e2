use std::fmt::Display;
use std::io::Write;

use crate::error::{Error, Result};

/// Ordered `key=value` record of everything needed to rerun an output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `key`, replacing an earlier value in place.
    pub fn set(&mut self, key: &str, value: impl Display) -> &mut Self {
        assert!(
            !key.is_empty() && !key.contains(['=', '\n']) && key.trim() == key,
            "invalid manifest key {key:?}"
        );
        let value = value.to_string().replace('\n', " ");
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn write<W: Write>(&self, w: &mut W) -> Result<()> {
        for (k, v) in &self.entries {
            writeln!(w, "{k}={v}")?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut m = Self::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: "expected key=value".into(),
            })?;
            m.entries.push((k.to_string(), v.to_string()));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_replace() {
        let mut m = Manifest::new();
        m.set("seed", 42).set("n", 1000).set("seed", 7).set("note", "a\nb");
        assert_eq!(m.get("seed"), Some("7"));
        let mut buf = Vec::new();
        m.write(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "seed=7\nn=1000\nnote=a b\n");
        assert_eq!(Manifest::parse(std::str::from_utf8(&buf).unwrap()).unwrap(), m);
        assert!(Manifest::parse("nonsense").is_err());
    }
}
