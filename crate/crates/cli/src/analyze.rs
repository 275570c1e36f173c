use std::io::Write;
use std::sync::Arc;

use closed_range::criteria::{analyze_symbol, ClosedRangeReport, CriteriaConfig};
use closed_range::symbols::{NamedSymbol, SelfMap};

use crate::output::{
    curves_csv, print_table, report_json, summary_csv, write_file, RunConfig, SummaryRow, SymbolEntry,
};
use crate::{load_symbols, AnalyzeArgs, EXIT_FAILURE, EXIT_OK};

/// Reports for every (symbol, p), symbol-major.
pub(crate) fn analyze_all(
    symbols: &[NamedSymbol<f64>],
    ps: &[f64],
    cfg: &CriteriaConfig,
) -> anyhow::Result<Vec<(String, ClosedRangeReport)>> {
    let mut out = Vec::with_capacity(symbols.len() * ps.len());
    for s in symbols {
        let phi: Arc<dyn SelfMap<f64>> = Arc::new(s.symbol.clone());
        for r in analyze_symbol(phi, ps, cfg)? {
            out.push((s.name.clone(), r));
        }
    }
    Ok(out)
}

pub(crate) fn entries(symbols: &[NamedSymbol<f64>]) -> Vec<SymbolEntry> {
    symbols
        .iter()
        .map(|s| SymbolEntry {
            name: s.name.clone(),
            expression: s.symbol.to_string(),
        })
        .collect()
}

pub fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let symbols = load_symbols(args.symbols.as_deref())?;
    let cfg = args.criteria.resolve()?;
    let run = RunConfig {
        command: "analyze",
        symbols: entries(&symbols),
        p: args.p.clone(),
        format: args.format,
        sweep: None,
        criteria: cfg.clone(),
    };
    let results = analyze_all(&symbols, &args.p, &cfg)?;
    let rows: Vec<SummaryRow> = results.iter().map(|(n, r)| SummaryRow::new(n, r)).collect();
    print_table(out, &rows)?;
    for (name, r) in &results {
        for e in &r.errors {
            writeln!(out, "{name} (p = {}): {e}", r.p)?;
        }
    }
    if let Some(dir) = &args.out {
        if args.format.json() {
            let reports: Vec<ClosedRangeReport> = results.iter().map(|(_, r)| r.clone()).collect();
            write_file(dir, "report.json", &report_json(&run, &reports)?)?;
        }
        if args.format.csv() {
            let keyed: Vec<(Vec<String>, SummaryRow)> = rows.iter().map(|r| (Vec::new(), r.clone())).collect();
            write_file(dir, "summary.csv", &summary_csv(&[], &keyed)?)?;
            for (file, text) in curves_csv(&results)? {
                write_file(dir, file, &text)?;
            }
        }
    }
    let inconsistent: Vec<&SummaryRow> = rows.iter().filter(|r| !r.consistent).collect();
    for r in &inconsistent {
        writeln!(out, "inconsistent verdicts {} for {} at p = {}", r.codes(), r.name, r.p)?;
    }
    Ok(if inconsistent.is_empty() { EXIT_OK } else { EXIT_FAILURE })
}
