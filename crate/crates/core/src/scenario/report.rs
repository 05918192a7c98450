//! decay.csv, summary.json and wf_map.svg.

use super::ScenarioReport;
use crate::decay::Classification;
use serde_json::json;
use std::fmt::Write as _;
use std::path::Path;

fn join(v: &[f64]) -> String {
    v.iter().map(|c| format!("{c:e}")).collect::<Vec<_>>().join(";")
}

fn decay_csv(r: &ScenarioReport) -> String {
    let mut s = String::from("estimator,x,xi,family,lambda,magnitude,error\n");
    for smp in &r.samples {
        let Some(f) = &smp.decisive else { continue };
        for (j, (l, m)) in f.fit.lambdas.iter().zip(&f.fit.magnitudes).enumerate() {
            let err = f.errors.get(j).copied().unwrap_or(0.0);
            let _ = writeln!(s, "{},{},{},{},{l:e},{m:e},{err:e}", smp.estimator, join(&smp.x), join(&smp.xi), f.label);
        }
    }
    s
}

fn summary_json(r: &ScenarioReport) -> String {
    let count = |c: Classification| r.samples.iter().filter(|s| s.classification == c).count();
    let samples: Vec<_> = r
        .samples
        .iter()
        .map(|s| {
            json!({
                "estimator": s.estimator,
                "x": s.x,
                "xi": s.xi,
                "classification": s.classification,
                "family": s.decisive.as_ref().map(|f| f.label.as_str()),
                "slope": s.decisive.as_ref().map(|f| f.fit.slope),
                "floor_hit": s.decisive.as_ref().map(|f| f.fit.floor_hit),
            })
        })
        .collect();
    let checks: serde_json::Map<String, serde_json::Value> = r
        .checks
        .iter()
        .map(|c| {
            let status = if !c.applicable { "not applicable" } else if c.pass { "pass" } else { "fail" };
            (c.name.clone(), json!({ "status": status, "details": c.details }))
        })
        .collect();
    let v = json!({
        "name": r.name,
        "target": r.target,
        "kind": r.kind,
        "dimension": r.dim,
        "config_digest": r.config_digest,
        "version": r.version,
        "pass": r.pass(),
        "counts": {
            "regular": count(Classification::Regular),
            "singular": count(Classification::Singular),
            "indeterminate": count(Classification::Indeterminate),
        },
        "checks": checks,
        "samples": samples,
    });
    serde_json::to_string_pretty(&v).expect("summary serializes") + "\n"
}

fn color(c: Classification) -> &'static str {
    match c {
        Classification::Regular => "#dfe8f1",
        Classification::Singular => "#c0392b",
        Classification::Indeterminate => "#f0b429",
    }
}

/// Heat map with positions across and direction angles down. Positions are
/// the coordinate itself in dimension 1 and the lattice index otherwise.
/// Returns `None` above dimension 2.
pub fn svg_map(r: &ScenarioReport) -> Option<String> {
    if r.dim > 2 {
        return None;
    }
    let mut xs: Vec<Vec<f64>> = Vec::new();
    let mut angles: Vec<f64> = Vec::new();
    let angle = |xi: &[f64]| if xi.len() == 1 { if xi[0] > 0.0 { 0.0 } else { 180.0 } } else { xi[1].atan2(xi[0]).to_degrees() };
    let cells: Vec<_> = r.samples.iter().filter(|s| s.estimator == r.samples[0].estimator).collect();
    for s in &cells {
        if !xs.contains(&s.x) {
            xs.push(s.x.clone());
        }
        let a = angle(&s.xi);
        if !angles.iter().any(|b| (a - b).abs() < 1e-9) {
            angles.push(a);
        }
    }
    angles.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
    let (cw, ch, left, top) = (14.0, 18.0, 60.0, 30.0);
    let width = left + cw * xs.len().max(1) as f64 + 20.0;
    let height = top + ch * angles.len().max(1) as f64 + 40.0;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(s, r#"<text x="{left}" y="16">{} ({})</text>"#, escape(&r.target), r.samples.first().map_or("", |c| c.estimator.as_str()));
    for (j, a) in angles.iter().enumerate() {
        let y = top + ch * j as f64 + ch * 0.7;
        let _ = writeln!(s, r#"<text x="4" y="{y}">{a:.0}°</text>"#);
    }
    for c in &cells {
        let i = xs.iter().position(|x| *x == c.x).expect("collected");
        let a = angle(&c.xi);
        let j = angles.iter().position(|b| (a - b).abs() < 1e-9).expect("collected");
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="{cw}" height="{ch}" fill="{}"><title>x={} xi={} {:?}</title></rect>"#,
            left + cw * i as f64,
            top + ch * j as f64,
            color(c.classification),
            join(&c.x),
            join(&c.xi),
            c.classification
        );
    }
    let label_y = top + ch * angles.len() as f64 + 14.0;
    if r.dim == 1 {
        for (i, x) in xs.iter().enumerate().step_by(4) {
            let _ = writeln!(s, r#"<text x="{}" y="{label_y}">{}</text>"#, left + cw * i as f64, x[0]);
        }
    } else {
        let _ = writeln!(s, r#"<text x="{left}" y="{label_y}">lattice index</text>"#);
    }
    s.push_str("</svg>\n");
    Some(s)
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Write the three report files into `dir`, creating it if needed.
pub fn emit_report(r: &ScenarioReport, dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("decay.csv"), decay_csv(r))?;
    std::fs::write(dir.join("summary.json"), summary_json(r))?;
    if let Some(svg) = svg_map(r) {
        std::fs::write(dir.join("wf_map.svg"), svg)?;
    }
    Ok(())
}
