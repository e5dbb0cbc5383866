//! Columnar text artifacts: the observable trace (diff-friendly, one row
//! per recorded time) and the per-step field log used for open-loop replay.

use crate::error::{QwvError, Result};
use crate::propagator::ObservableTrace;
use std::io::Write;
use std::path::Path;

/// Write the trace: comment header naming columns and units, then
/// whitespace-separated rows with a monotone time column.
pub fn write_trace(path: &Path, trace: &ObservableTrace) -> Result<()> {
    let has_r = trace.records.first().is_some_and(|r| r.mean_r.is_some());
    let mut f = std::fs::File::create(path)?;
    write!(f, "# t_au field_au p_left p_right p_total p_target mean_z_bohr")?;
    if has_r {
        write!(f, " mean_r_bohr")?;
    }
    writeln!(f)?;
    for rec in &trace.records {
        write!(
            f,
            "{:.10e} {:.10e} {:.10e} {:.10e} {:.10e} {:.10e} {:.10e}",
            rec.t, rec.field, rec.p_left, rec.p_right, rec.p_total, rec.p_target, rec.mean_z
        )?;
        if let Some(r) = rec.mean_r {
            write!(f, " {r:.10e}")?;
        }
        writeln!(f)?;
    }
    Ok(())
}

/// Write the per-step field log: `# dt = <dt>` then one value per line.
pub fn write_field_log(path: &Path, dt: f64, values: &[f64]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "# dt = {dt:.17e}")?;
    for v in values {
        writeln!(f, "{v:.17e}")?;
    }
    Ok(())
}

/// Read a field log back as `(dt, values)`.
pub fn read_field_log(path: &Path) -> Result<(f64, Vec<f64>)> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| QwvError::Config(format!("{}: empty field log", path.display())))?;
    let dt = header
        .strip_prefix("# dt = ")
        .and_then(|s| s.trim().parse::<f64>().ok())
        .ok_or_else(|| {
            QwvError::Config(format!("{}: field log header must be '# dt = <value>'", path.display()))
        })?;
    let mut values = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        values.push(line.parse::<f64>().map_err(|e| {
            QwvError::Config(format!("{} line {}: {e}", path.display(), i + 2))
        })?);
    }
    Ok((dt, values))
}
