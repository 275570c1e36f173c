use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use closed_range::criteria::{ClosedRangeReport, CriteriaConfig, Verdict};
use serde::Serialize;

use crate::Format;

/// Version tag of the top-level document written by `analyze` and `sweep`.
pub const RUN_SCHEMA: &str = "closed-range/run/v1";

#[derive(Debug, Clone, Serialize)]
pub struct SymbolEntry {
    pub name: String,
    pub expression: String,
}

/// The fully resolved invocation, echoed into every document.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub symbols: Vec<SymbolEntry>,
    pub p: Vec<f64>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepEcho>,
    pub criteria: CriteriaConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepEcho {
    pub template: String,
    pub param: crate::SweepParam,
    pub values: Vec<f64>,
}

#[derive(Serialize)]
struct RunDocument<'a> {
    schema: &'static str,
    run_config: &'a RunConfig,
    reports: &'a [ClosedRangeReport],
}

pub fn report_json(run: &RunConfig, reports: &[ClosedRangeReport]) -> anyhow::Result<String> {
    let doc = RunDocument {
        schema: RUN_SCHEMA,
        run_config: run,
        reports,
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

/// One CSV line per report.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub name: String,
    pub expression: String,
    pub p: f64,
    pub verdicts: [(char, f64); 4],
    pub consistent: bool,
    pub overall: char,
    pub direct_probe_min: Option<f64>,
    pub luecking_min_gc_ratio: Option<f64>,
    pub errors: usize,
}

impl SummaryRow {
    pub const HEADER: [&'static str; 16] = [
        "name",
        "expression",
        "p",
        "verdict_i",
        "estimate_i",
        "verdict_ii",
        "estimate_ii",
        "verdict_iii",
        "estimate_iii",
        "verdict_window",
        "estimate_window",
        "consistent",
        "overall",
        "direct_probe_min",
        "luecking_min_gc_ratio",
        "errors",
    ];

    pub fn new(name: &str, r: &ClosedRangeReport) -> Self {
        let pair = |v: &Verdict| (v.state.code(), v.estimate);
        Self {
            name: name.to_owned(),
            expression: r.symbol.clone(),
            p: r.p,
            verdicts: [
                pair(&r.verdict_i),
                pair(&r.verdict_ii),
                pair(&r.verdict_iii),
                pair(&r.verdict_window),
            ],
            consistent: r.consistent,
            overall: r.overall.code(),
            direct_probe_min: r.direct_probe.as_ref().map(|d| d.min_ratio),
            luecking_min_gc_ratio: r.luecking.as_ref().map(|l| l.min_gc_ratio),
            errors: r.errors.len(),
        }
    }

    pub fn record(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        let mut rec = vec![self.name.clone(), self.expression.clone(), self.p.to_string()];
        for (code, est) in self.verdicts {
            rec.push(code.to_string());
            rec.push(est.to_string());
        }
        rec.extend([
            self.consistent.to_string(),
            self.overall.to_string(),
            opt(self.direct_probe_min),
            opt(self.luecking_min_gc_ratio),
            self.errors.to_string(),
        ]);
        rec
    }

    pub fn codes(&self) -> String {
        self.verdicts.iter().map(|v| v.0).collect()
    }
}

/// CSV text with `extra` columns prepended to each summary record.
pub fn summary_csv(extra_header: &[&str], rows: &[(Vec<String>, SummaryRow)]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = extra_header.iter().copied().chain(SummaryRow::HEADER).collect();
    w.write_record(&header)?;
    for (extra, row) in rows {
        w.write_record(extra.iter().cloned().chain(row.record()))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Fixed-width table of summary rows.
pub fn print_table(out: &mut dyn Write, rows: &[SummaryRow]) -> std::io::Result<()> {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(6);
    writeln!(
        out,
        "{:width$}  {:>4}  {:>5}  {:>10}  {:>10}  {:>10}  {:>10}  {:>10}  overall",
        "symbol", "p", "codes", "kernel", "density", "G_c", "window", "consistent"
    )?;
    for r in rows {
        writeln!(
            out,
            "{:width$}  {:>4}  {:>5}  {:>10.3e}  {:>10.3e}  {:>10.3e}  {:>10.3e}  {:>10}  {}",
            r.name,
            r.p,
            r.codes(),
            r.verdicts[0].1,
            r.verdicts[1].1,
            r.verdicts[2].1,
            r.verdicts[3].1,
            r.consistent,
            r.overall
        )?;
    }
    Ok(())
}

/// Long-format CSV files of the raw curves, keyed by file name.
pub fn curves_csv(results: &[(String, ClosedRangeReport)]) -> anyhow::Result<Vec<(&'static str, String)>> {
    let mut kernel = csv::Writer::from_writer(Vec::new());
    let mut density = csv::Writer::from_writer(Vec::new());
    let mut gc = csv::Writer::from_writer(Vec::new());
    let mut window = csv::Writer::from_writer(Vec::new());
    kernel.write_record(["name", "p", "k", "ray", "lambda_re", "lambda_im", "integral", "error"])?;
    density.write_record(["name", "p", "bin", "theta", "density", "error"])?;
    gc.write_record(["name", "p", "k", "a_re", "a_im", "eta", "c", "fraction"])?;
    window.write_record(["name", "p", "zeta_angle", "h", "mass", "ratio"])?;
    for (name, r) in results {
        let head = [name.clone(), r.p.to_string()];
        let c = &r.curves;
        for k in &c.kernel {
            let vals = [k.k as f64, k.ray as f64, k.lambda.0, k.lambda.1, k.integral, k.error];
            kernel.write_record(head.iter().cloned().chain(vals.iter().map(f64::to_string)))?;
        }
        if let Some(d) = &c.density {
            for (b, (v, e)) in d.densities.iter().zip(&d.errors).enumerate() {
                let theta = std::f64::consts::TAU * (b as f64 + 0.5) / d.bins as f64;
                let vals = [b as f64, theta, *v, *e];
                density.write_record(head.iter().cloned().chain(vals.iter().map(f64::to_string)))?;
            }
        }
        for g in &c.gc {
            for (thr, f) in c.gc_thresholds.iter().zip(&g.fractions) {
                let vals = [g.k as f64, g.a.0, g.a.1, g.eta, *thr, *f];
                gc.write_record(head.iter().cloned().chain(vals.iter().map(f64::to_string)))?;
            }
        }
        for w in &c.window {
            let vals = [w.zeta_angle, w.h, w.mass, w.ratio];
            window.write_record(head.iter().cloned().chain(vals.iter().map(f64::to_string)))?;
        }
    }
    let text = |w: csv::Writer<Vec<u8>>| -> anyhow::Result<String> { Ok(String::from_utf8(w.into_inner()?)?) };
    Ok(vec![
        ("curves_kernel.csv", text(kernel)?),
        ("curves_density.csv", text(density)?),
        ("curves_gc.csv", text(gc)?),
        ("curves_window.csv", text(window)?),
    ])
}
