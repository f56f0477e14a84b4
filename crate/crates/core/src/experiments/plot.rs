use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use super::csv::Table;
use super::svg::{line_chart, Axis, Series};
use crate::Result;

/// Writes gnuplot-compatible `.dat` files and SVG charts for every profile in
/// a run directory, returning the paths written in order. Missing or empty
/// inputs are skipped with a warning.
pub fn emit_plot_data(dir: &Path) -> Result<Vec<PathBuf>> {
    let plots = dir.join("plots");
    std::fs::create_dir_all(&plots)?;
    let mut written = Vec::new();
    convergence_plots(dir, &plots, &mut written)?;
    uniform_plot(dir, &plots, &mut written)?;
    phi_plots(dir, &plots, &mut written)?;
    trace_plots(dir, &plots, &mut written)?;
    Ok(written)
}

fn read(path: &Path) -> Option<Table> {
    match Table::read(path) {
        Ok(t) if !t.rows.is_empty() => Some(t),
        Ok(_) => {
            log::warn!("{} has no rows; skipped", path.display());
            None
        }
        Err(_) => {
            log::warn!("{} is missing; skipped", path.display());
            None
        }
    }
}

fn emit(plots: &Path, stem: &str, dat: &str, svg: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    for (ext, body) in [("dat", dat), ("svg", svg)] {
        let path = plots.join(format!("{stem}.{ext}"));
        std::fs::write(&path, body)?;
        written.push(path);
    }
    Ok(())
}

fn convergence_plots(dir: &Path, plots: &Path, written: &mut Vec<PathBuf>) -> Result<()> {
    let Some(t) = read(&dir.join("convergence.csv")) else {
        return Ok(());
    };
    let eps = t.floats("eps")?;
    for col in t.header.iter().filter(|c| *c != "eps") {
        let ys = t.floats(col)?;
        let c = t.column(col)?;
        let e = t.column("eps")?;
        let mut dat = format!("# eps {col}\n");
        for r in &t.rows {
            let _ = writeln!(dat, "{} {}", r[e], r[c]);
        }
        let series = [Series {
            name: col.clone(),
            points: eps.iter().copied().zip(ys).collect(),
        }];
        let svg = line_chart(&format!("{col} against eps"), &Axis::log("eps"), &Axis::linear(col), &series);
        emit(plots, &format!("{col}_vs_eps"), &dat, &svg, written)?;
    }
    Ok(())
}

fn uniform_plot(dir: &Path, plots: &Path, written: &mut Vec<PathBuf>) -> Result<()> {
    let Some(t) = read(&dir.join("uniform_convergence.csv")) else {
        return Ok(());
    };
    let (s, e, v) = (t.column("set")?, t.column("eps")?, t.column("sup_dist")?);
    let mut groups: Vec<(String, Vec<&Vec<String>>)> = Vec::new();
    for r in &t.rows {
        match groups.iter_mut().find(|g| g.0 == r[s]) {
            Some(g) => g.1.push(r),
            None => groups.push((r[s].clone(), vec![r])),
        }
    }
    let mut dat = String::new();
    let mut series = Vec::new();
    for (name, rows) in &groups {
        let _ = writeln!(dat, "# set {name}\n# eps sup_dist");
        let mut pts = Vec::new();
        for r in rows {
            let _ = writeln!(dat, "{} {}", r[e], r[v]);
            pts.push((r[e].parse().unwrap_or(f64::NAN), r[v].parse().unwrap_or(f64::NAN)));
        }
        dat.push_str("\n\n");
        series.push(Series {
            name: name.clone(),
            points: pts,
        });
    }
    let svg = line_chart("sup |u_eps - u_*| by compact", &Axis::log("eps"), &Axis::linear("sup_dist"), &series);
    emit(plots, "uniform_convergence", &dat, &svg, written)
}

fn phi_plots(dir: &Path, plots: &Path, written: &mut Vec<PathBuf>) -> Result<()> {
    let Some(t) = read(&dir.join("phi_profiles.csv")) else {
        return Ok(());
    };
    let (e, c, r, f) = (t.column("eps")?, t.column("center_id")?, t.column("rho")?, t.column("phi")?);
    // stage order as it appears; centers sorted numerically inside a stage
    let mut stages: Vec<(String, BTreeMap<usize, Vec<&Vec<String>>>)> = Vec::new();
    for row in &t.rows {
        let id: usize = row[c].parse().unwrap_or(usize::MAX);
        match stages.iter_mut().find(|s| s.0 == row[e]) {
            Some(s) => s.1.entry(id).or_default().push(row),
            None => stages.push((row[e].clone(), BTreeMap::from([(id, vec![row])]))),
        }
    }
    for (i, (eps, centers)) in stages.iter().enumerate() {
        let mut dat = format!("# eps {eps}; one block per center, select with `index`\n");
        let mut series = Vec::new();
        for (id, rows) in centers {
            let _ = writeln!(dat, "# center {id}\n# rho phi");
            let mut pts = Vec::new();
            for row in rows {
                let _ = writeln!(dat, "{} {}", row[r], row[f]);
                pts.push((row[r].parse().unwrap_or(f64::NAN), row[f].parse().unwrap_or(f64::NAN)));
            }
            dat.push_str("\n\n");
            series.push(Series {
                name: format!("center {id}"),
                points: pts,
            });
        }
        let svg = line_chart(&format!("phi(rho) at eps = {eps}"), &Axis::log("rho"), &Axis::linear("phi"), &series);
        emit(plots, &format!("phi_stage_{i}"), &dat, &svg, written)?;
    }
    Ok(())
}

fn trace_plots(dir: &Path, plots: &Path, written: &mut Vec<PathBuf>) -> Result<()> {
    for i in 0.. {
        let path = dir.join(format!("trace_stage_{i}.csv"));
        if !path.is_file() {
            break;
        }
        let Some(t) = read(&path) else {
            continue;
        };
        let (it, en, gn) = (t.column("iter")?, t.column("energy")?, t.column("grad_norm")?);
        let mut dat = String::from("# iter energy grad_norm\n");
        for r in &t.rows {
            let _ = writeln!(dat, "{} {} {}", r[it], r[en], r[gn]);
        }
        let series = [Series {
            name: "grad_norm".into(),
            points: t.floats("iter")?.into_iter().zip(t.floats("grad_norm")?).collect(),
        }];
        let svg = line_chart(&format!("residual, stage {i}"), &Axis::linear("iteration"), &Axis::log("grad_norm"), &series);
        emit(plots, &format!("trace_stage_{i}"), &dat, &svg, written)?;
    }
    Ok(())
}
