use std::io::Write;

use closed_range::criteria::ClosedRangeReport;
use closed_range::symbols::{parse_symbol, NamedSymbol};

use crate::analyze::{analyze_all, entries};
use crate::output::{report_json, summary_csv, write_file, RunConfig, SummaryRow, SweepEcho};
use crate::{SweepArgs, SweepParam, EXIT_FAILURE, EXIT_OK};

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let cfg = args.criteria.resolve()?;
    anyhow::ensure!(!args.values.is_empty(), "no sweep values");
    let mut symbols = Vec::new();
    let mut results: Vec<(f64, String, ClosedRangeReport)> = Vec::new();
    match args.param {
        SweepParam::X => {
            anyhow::ensure!(args.template.contains("{x}"), "template has no `{{x}}` placeholder");
            for &x in &args.values {
                let record = args.template.replace("{x}", &x.to_string());
                let symbol = parse_symbol(&record).map_err(|e| anyhow::anyhow!("x = {x}: {e}"))?;
                let named = NamedSymbol { name: record, symbol };
                for (name, r) in analyze_all(std::slice::from_ref(&named), &args.p, &cfg)? {
                    results.push((x, name, r));
                }
                symbols.push(named);
            }
        }
        SweepParam::P => {
            let symbol = parse_symbol(&args.template)?;
            let named = NamedSymbol {
                name: args.template.clone(),
                symbol,
            };
            for (name, r) in analyze_all(std::slice::from_ref(&named), &args.values, &cfg)? {
                results.push((r.p, name, r));
            }
            symbols.push(named);
        }
    }
    let run = RunConfig {
        command: "sweep",
        symbols: entries(&symbols),
        p: match args.param {
            SweepParam::X => args.p.clone(),
            SweepParam::P => args.values.clone(),
        },
        format: args.format,
        sweep: Some(SweepEcho {
            template: args.template.clone(),
            param: args.param,
            values: args.values.clone(),
        }),
        criteria: cfg,
    };

    let rows: Vec<(Vec<String>, SummaryRow)> = results
        .iter()
        .map(|(v, n, r)| (vec![v.to_string()], SummaryRow::new(n, r)))
        .collect();
    let csv = summary_csv(&["value"], &rows)?;
    match &args.out {
        Some(dir) => {
            if args.format.csv() {
                write_file(dir, "sweep.csv", &csv)?;
            }
            if args.format.json() {
                let reports: Vec<ClosedRangeReport> = results.iter().map(|(_, _, r)| r.clone()).collect();
                write_file(dir, "report.json", &report_json(&run, &reports)?)?;
            }
        }
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(if rows.iter().all(|(_, r)| r.consistent) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}
