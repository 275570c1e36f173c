use std::io::Write;

use closed_range::geometry::{
    pullback_measure, verify_pb1, verify_pb2_with, CarlesonWindow, GeometryError, ProbeGrid, TestObservable,
};
use closed_range::hardy::{
    norm_boundary, norm_hardy_stein, norm_hardy_stein_with, norm_layer_cake, HardyExponent, LayerCakeGrid, RadiusGrid,
    TestFunction,
};
use closed_range::nevanlinna::{verify_change_of_variable_with, CountingTable};
use closed_range::numerics::{CircleQuadrature, DiskQuadrature, SeededSampler};
use closed_range::symbols::{NamedSymbol, SelfMap};

use crate::output::write_file;
use crate::{corpus, load_symbols, VerifyArgs, EXIT_FAILURE, EXIT_OK};

pub const NORM_TOL: f64 = 1e-4;
pub const CHANGE_OF_VARIABLE_TOL: f64 = 1e-4;
pub const PB2_TOL: f64 = 1e-2;
pub const PB1_C: f64 = 1.0 / 16.0;
/// Window depths `h = 2^{−k}`, `k = 1..=PB1_DEPTHS`.
pub const PB1_DEPTHS: usize = 9;
pub const PB1_ANGLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum VerifyStatus {
    Pass,
    Fail,
    /// The hypotheses of the check do not hold for this row.
    Skip,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct VerifyRow {
    pub check: &'static str,
    pub symbol: String,
    pub item: String,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub tol: f64,
    pub status: VerifyStatus,
    pub note: String,
}

impl VerifyRow {
    fn graded(check: &'static str, symbol: &str, item: String, lhs: f64, rhs: f64, gap: f64, tol: f64) -> Self {
        Self {
            check,
            symbol: symbol.to_owned(),
            item,
            lhs,
            rhs,
            gap,
            tol,
            status: if gap <= tol {
                VerifyStatus::Pass
            } else {
                VerifyStatus::Fail
            },
            note: String::new(),
        }
    }

    fn failed(check: &'static str, symbol: &str, item: String, err: impl std::fmt::Display) -> Self {
        Self {
            check,
            symbol: symbol.to_owned(),
            item,
            lhs: f64::NAN,
            rhs: f64::NAN,
            gap: f64::INFINITY,
            tol: 0.0,
            status: VerifyStatus::Fail,
            note: err.to_string(),
        }
    }

    /// How far past its tolerance a failed row is.
    fn severity(&self) -> f64 {
        if self.tol > 0.0 {
            self.gap / self.tol
        } else {
            f64::INFINITY
        }
    }
}

fn rel_spread(values: &[f64]) -> f64 {
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale > 0.0 {
        (hi - lo) / scale
    } else {
        0.0
    }
}

/// Boundary, Hardy–Stein and layer-cake values of `‖f‖ᵖ`; the gap is their
/// largest pairwise difference relative to the largest value.
pub fn norm_rows(family: &[TestFunction<f64>], ps: &[f64], hs_constant: Option<f64>) -> Vec<VerifyRow> {
    let cq = CircleQuadrature::new(4096).expect("positive node count");
    let dq = DiskQuadrature::new(96, 256, 2).expect("valid disk rule");
    let radii = RadiusGrid::standard();
    let mut rows = Vec::new();
    for f in family {
        for &p in ps {
            let item = format!("p = {p}");
            let run = || -> Result<(f64, f64, f64), closed_range::hardy::HardyError> {
                let hp = HardyExponent::new(p)?;
                let b = norm_boundary(f, hp, &cq, &radii)?;
                let h = match hs_constant {
                    Some(c) => norm_hardy_stein_with(f, hp, &dq, c)?,
                    None => norm_hardy_stein(f, hp, &dq)?,
                };
                let l = norm_layer_cake(f, hp, &cq, &LayerCakeGrid::default())?;
                Ok((b, h, l))
            };
            rows.push(match run() {
                Ok((b, h, l)) => {
                    let mut row = VerifyRow::graded("norms", f.tag(), item, b, h, rel_spread(&[b, h, l]), NORM_TOL);
                    row.note = format!("layer-cake {l}");
                    row
                }
                Err(e) => VerifyRow::failed("norms", f.tag(), item, e),
            });
        }
    }
    rows
}

/// Observables for the change-of-variable identity; all positive, so the
/// relative gap is well defined.
type Observable = (&'static str, fn(num_complex::Complex64) -> f64);

fn cov_observables() -> Vec<Observable> {
    vec![
        ("1", |_| 1.0),
        ("|w|^2", |w| w.norm_sqr()),
        ("|w|^4", |w| w.norm_sqr() * w.norm_sqr()),
    ]
}

pub fn change_of_variable_rows(
    name: &str,
    phi: &dyn SelfMap<f64>,
    table: &CountingTable<f64>,
    q: &DiskQuadrature<f64>,
) -> Vec<VerifyRow> {
    cov_observables()
        .into_iter()
        .map(|(label, g)| match verify_change_of_variable_with(phi, g, q, table) {
            Ok(r) => VerifyRow::graded(
                "change-of-variable",
                name,
                format!("g = {label}"),
                r.lhs,
                r.rhs,
                r.relative_gap,
                CHANGE_OF_VARIABLE_TOL,
            ),
            Err(e) => VerifyRow::failed("change-of-variable", name, format!("g = {label}"), e),
        })
        .collect()
}

pub fn pb2_rows(
    name: &str,
    phi: &dyn SelfMap<f64>,
    samples: usize,
    seed: u64,
    table: &CountingTable<f64>,
    q: &DiskQuadrature<f64>,
) -> Vec<VerifyRow> {
    let mu = match pullback_measure(phi, samples, &SeededSampler::new(seed)) {
        Ok(m) => m,
        Err(e) => return vec![VerifyRow::failed("pullback", name, "measure".into(), e)],
    };
    [
        TestObservable::abs_sq(),
        TestObservable::re(),
        TestObservable::abs_pow4(),
    ]
    .iter()
    .map(|g| {
        let item = format!("g = {}, n = {samples}", g.description());
        match verify_pb2_with(phi, g, &mu, q, table) {
            Ok(r) => {
                let mut row = VerifyRow::graded("pullback", name, item, r.lhs, r.rhs, r.relative_gap, PB2_TOL);
                row.note = format!("mc std error {:.2e}", r.mc_std_error);
                row
            }
            Err(e) => VerifyRow::failed("pullback", name, item, e),
        }
    })
    .collect()
}

/// One row per window depth, aggregated over the angles: `lhs` is the
/// largest sampled `N_φ`, `rhs` the bound at the tightest angle.
pub fn pb1_rows(
    name: &str,
    phi: &dyn SelfMap<f64>,
    samples: usize,
    seed: u64,
    depths: std::ops::RangeInclusive<usize>,
) -> Vec<VerifyRow> {
    let mu = match pullback_measure(phi, samples, &SeededSampler::new(seed)) {
        Ok(m) => m,
        Err(e) => return vec![VerifyRow::failed("counting-bound", name, "measure".into(), e)],
    };
    let grid = ProbeGrid::default();
    let mut rows = Vec::new();
    for k in depths {
        let h = 0.5f64.powi(k as i32);
        let item = format!("h = 2^-{k}");
        let mut worst: Option<(f64, f64, f64)> = None;
        let mut skipped = None;
        let mut failure = None;
        for j in 0..PB1_ANGLES {
            let theta = std::f64::consts::TAU * j as f64 / PB1_ANGLES as f64;
            let w = match CarlesonWindow::at_angle(theta, h) {
                Ok(w) => w,
                Err(e) => {
                    failure = Some(e.to_string());
                    break;
                }
            };
            match verify_pb1(phi, &w, PB1_C, &mu, &grid) {
                Ok(r) => {
                    if worst.is_none_or(|(_, _, m)| r.margin < m) {
                        worst = Some((r.lhs, r.rhs, r.margin));
                    }
                }
                Err(GeometryError::Hypothesis(msg)) => {
                    skipped = Some(msg);
                    break;
                }
                Err(e) => {
                    failure = Some(e.to_string());
                    break;
                }
            }
        }
        rows.push(if let Some(msg) = failure {
            VerifyRow::failed("counting-bound", name, item, msg)
        } else if let Some(msg) = skipped {
            VerifyRow {
                check: "counting-bound",
                symbol: name.to_owned(),
                item,
                lhs: f64::NAN,
                rhs: f64::NAN,
                gap: f64::NAN,
                tol: 0.0,
                status: VerifyStatus::Skip,
                note: msg,
            }
        } else {
            let (lhs, rhs, margin) = worst.expect("at least one angle");
            let mut row = VerifyRow::graded("counting-bound", name, item, lhs, rhs, (-margin).max(0.0), 0.0);
            row.note = format!("min margin {margin}");
            row
        });
    }
    rows
}

pub fn verify_symbol(name: &str, phi: &dyn SelfMap<f64>, samples: usize, seed: u64) -> Vec<VerifyRow> {
    let q = DiskQuadrature::new(1024, 512, 2).expect("valid disk rule");
    let mut rows = Vec::new();
    match CountingTable::build(phi, &q) {
        Ok(table) => {
            rows.extend(change_of_variable_rows(name, phi, &table, &q));
            rows.extend(pb2_rows(name, phi, samples, seed, &table, &q));
        }
        Err(e) => rows.push(VerifyRow::failed("counting", name, "table".into(), e)),
    }
    rows.extend(pb1_rows(name, phi, samples, seed, 1..=PB1_DEPTHS));
    rows
}

fn print_rows(out: &mut dyn Write, rows: &[VerifyRow]) -> std::io::Result<()> {
    writeln!(
        out,
        "{:20} {:28} {:22} {:>14} {:>14} {:>10} {:>8}  status",
        "check", "symbol", "item", "lhs", "rhs", "gap", "tol"
    )?;
    for r in rows {
        writeln!(
            out,
            "{:20} {:28} {:22} {:>14.8e} {:>14.8e} {:>10.2e} {:>8.0e}  {:?}",
            r.check, r.symbol, r.item, r.lhs, r.rhs, r.gap, r.tol, r.status
        )?;
    }
    Ok(())
}

fn rows_csv(rows: &[VerifyRow]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check", "symbol", "item", "lhs", "rhs", "gap", "tol", "status", "note"])?;
    for r in rows {
        w.write_record([
            r.check.to_owned(),
            r.symbol.clone(),
            r.item.clone(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.gap.to_string(),
            r.tol.to_string(),
            format!("{:?}", r.status),
            r.note.clone(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let symbols: Vec<NamedSymbol<f64>> = load_symbols(args.symbols.as_deref())?;
    anyhow::ensure!(args.samples >= 2, "need at least two samples");
    let mut rows = norm_rows(&corpus::zero_free_family(), &args.p, args.hardy_stein_constant);
    for s in &symbols {
        rows.extend(verify_symbol(&s.name, &s.symbol, args.samples, args.seed));
    }
    print_rows(out, &rows)?;
    if let Some(dir) = &args.out {
        write_file(dir, "verify.csv", &rows_csv(&rows)?)?;
    }
    let count = |s: VerifyStatus| rows.iter().filter(|r| r.status == s).count();
    writeln!(
        out,
        "{} passed, {} failed, {} skipped",
        count(VerifyStatus::Pass),
        count(VerifyStatus::Fail),
        count(VerifyStatus::Skip)
    )?;
    let worst = rows
        .iter()
        .filter(|r| r.status == VerifyStatus::Fail)
        .max_by(|a, b| a.severity().total_cmp(&b.severity()));
    Ok(match worst {
        None => EXIT_OK,
        Some(r) => {
            writeln!(
                out,
                "worst offender: {} / {} / {}: lhs = {}, rhs = {}, gap = {:.3e} (tol {:.0e}) {}",
                r.check, r.symbol, r.item, r.lhs, r.rhs, r.gap, r.tol, r.note
            )?;
            EXIT_FAILURE
        }
    })
}
