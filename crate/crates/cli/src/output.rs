//! Atomic JSON and text output.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

use crate::run::Report;
use crate::RunConfig;

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("temp file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644))?;
    }
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn summary(r: &Report) -> String {
    let c = &r.config;
    let mut s = String::new();
    let _ = writeln!(s, "psu-saxl {} q={} ({}^{}) gram={}", c.command, c.q, c.p, c.m, c.gram.name());
    let _ = writeln!(s, "|Omega| = {}  |M| = {}", r.omega, r.stabilizer);
    if let Some(cen) = &r.census {
        let _ = writeln!(s, "x = {:?}", cen.x);
        let _ = writeln!(s, "k = {:?}", cen.k);
        let _ = writeln!(s, "|Gamma_r| = {} in {} regular suborbits", cen.gamma_r, cen.regular_suborbits);
    }
    if let Some(b) = &r.bounds {
        let e = &b.ell;
        let _ = writeln!(
            s,
            "min |Gamma_nr cap Gamma_nr'| = {} at {}, l = {}",
            e.min_intersection, e.argmin, e.ell
        );
    }
    for a in &r.assertions {
        let status = if a.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{status} {}: {}", a.tag, a.detail);
    }
    for f in &r.flags {
        let _ = writeln!(s, "FLAG {}: {}", f.tag, f.detail);
    }
    s
}

pub fn write(cfg: &RunConfig, r: &Report) -> Result<()> {
    let mut json = serde_json::to_vec_pretty(r)?;
    json.push(b'\n');
    atomic_write(&cfg.out, &json)?;
    let text = summary(r);
    atomic_write(&cfg.out.with_extension("txt"), text.as_bytes())?;
    print!("{text}");
    Ok(())
}
