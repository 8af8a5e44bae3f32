use num_complex::Complex64;
use std::io::{BufRead, Write};

use super::{SampledEnvelope, TimeGrid};
use crate::error::{Error, Result};

/// Writes `t_ps,re,im` rows after a `# grid ...` metadata line.
pub fn write_csv<W: Write>(env: &SampledEnvelope, mut w: W) -> Result<()> {
    let g = &env.grid;
    writeln!(w, "# grid t_start={:e} dt={:e} n_points={} scale={:e}", g.t_start, g.dt, g.n_points, g.scale)?;
    writeln!(w, "t_ps,re,im")?;
    for (k, z) in env.samples.iter().enumerate() {
        writeln!(w, "{:e},{:e},{:e}", g.t(k), z.re, z.im)?;
    }
    Ok(())
}

/// Reads the format produced by [`write_csv`].
pub fn read_csv<R: BufRead>(r: R) -> Result<SampledEnvelope> {
    let mut lines = r.lines();
    let meta = lines.next().ok_or_else(|| Error::Parse("empty input".into()))??;
    let meta = meta.strip_prefix("# grid").ok_or_else(|| Error::Parse("missing grid metadata line".into()))?;
    let (mut t_start, mut dt, mut n, mut scale) = (None, None, None, None);
    for item in meta.split_whitespace() {
        let (key, value) = item.split_once('=').ok_or_else(|| Error::Parse(format!("bad metadata item {item}")))?;
        let bad = |_| Error::Parse(format!("bad value for {key}: {value}"));
        match key {
            "t_start" => t_start = Some(value.parse::<f64>().map_err(bad)?),
            "dt" => dt = Some(value.parse::<f64>().map_err(bad)?),
            "n_points" => n = Some(value.parse::<usize>().map_err(|_| Error::Parse(format!("bad n_points {value}")))?),
            "scale" => scale = Some(value.parse::<f64>().map_err(bad)?),
            _ => return Err(Error::Parse(format!("unknown metadata key {key}"))),
        }
    }
    let missing = |k: &str| Error::Parse(format!("missing metadata key {k}"));
    let grid = TimeGrid::new(
        t_start.ok_or_else(|| missing("t_start"))?,
        dt.ok_or_else(|| missing("dt"))?,
        n.ok_or_else(|| missing("n_points"))?,
        scale.ok_or_else(|| missing("scale"))?,
    )?;
    let header = lines.next().ok_or_else(|| Error::Parse("missing column header".into()))??;
    if header.trim() != "t_ps,re,im" {
        return Err(Error::Parse(format!("unexpected header {header}")));
    }
    let mut samples = Vec::with_capacity(grid.n_points);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(Error::Parse(format!("expected 3 columns, got {}", cols.len())));
        }
        let p = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {s}")));
        samples.push(Complex64::new(p(cols[1])?, p(cols[2])?));
    }
    SampledEnvelope::new(grid, samples)
}
