use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::config::ExperimentConfig;
use crate::run::Output;

/// Writes every file of `out` under `dir`. Files are staged as hidden
/// temporaries and renamed only after all of them were written.
pub fn write(dir: &Path, cfg: &ExperimentConfig, out: &Output) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut manifest = Vec::new();
    out.manifest.write(&mut manifest)?;
    let mut files = vec![
        ("csv".to_string(), out.csv.clone().into_bytes()),
        ("manifest".to_string(), manifest),
        ("config.toml".to_string(), cfg.to_toml()?.into_bytes()),
    ];
    files.extend(out.extra.iter().map(|(s, t)| (s.clone(), t.clone().into_bytes())));

    let mut staged = Vec::new();
    for (suffix, bytes) in &files {
        let target = dir.join(format!("{}.{suffix}", cfg.name));
        let tmp = dir.join(format!(".{}.{suffix}.tmp", cfg.name));
        if let Err(e) = fs::write(&tmp, bytes) {
            for (t, _) in &staged {
                let _ = fs::remove_file(t);
            }
            let _ = fs::remove_file(&tmp);
            return Err(e).with_context(|| format!("cannot write {}", tmp.display()));
        }
        staged.push((tmp, target));
    }
    let mut written = Vec::new();
    for (tmp, target) in staged {
        fs::rename(&tmp, &target).with_context(|| format!("cannot move {} into place", target.display()))?;
        written.push(target);
    }
    Ok(written)
}
