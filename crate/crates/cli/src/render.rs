//! Text rendering for the three output formats.
//!
//! Numbers in table and CSV output are rounded to the requested precision
//! (ties to even, as `format!` does) with negative zero printed as zero.
//! JSON carries full `f64` values.

use serde::Serialize;

use crate::report::{ChisqReport, DatasetInfo, DecomposeReport, DiagnoseReport, SimulateReport};
use crate::{Format, OutputArgs};

/// Fixed-point rendering with `prec` decimals; `-0.000` becomes `0.000`.
///
/// ```
/// use influence_cli::render::num;
/// assert_eq!(num(-76.19686, 3), "-76.197");
/// assert_eq!(num(-0.0001, 3), "0.000");
/// assert_eq!(num(0.125, 2), "0.12");
/// ```
pub fn num(x: f64, prec: u8) -> String {
    let s = format!("{:.*}", usize::from(prec), x);
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// Scientific rendering for quantities spanning many magnitudes.
pub fn sci(x: f64, prec: u8) -> String {
    format!("{:.*e}", usize::from(prec), x)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Right-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect();
        padded.join("  ") + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

pub fn diagnose(rep: &DiagnoseReport, opts: &OutputArgs) -> String {
    let pr = opts.precision;
    let header = ["i", "e", "h", "t2", "cook_d", "k"];
    let rows: Vec<Vec<String>> = rep
        .rows
        .iter()
        .map(|r| {
            vec![
                r.i.to_string(),
                num(r.e, pr),
                num(r.h, pr),
                num(r.t2, pr),
                num(r.cook_d, pr),
                num(r.k, pr),
            ]
        })
        .collect();
    match opts.format {
        Format::Json => json(rep),
        Format::Csv => csv(&header, &rows),
        Format::Table => format!(
            "dataset: {} (n = {}, p = {})\n{}argmax |K|: {}\nargmax D: {}\n",
            rep.dataset,
            rep.n,
            rep.p,
            table(&header, &rows),
            rep.argmax_abs_k,
            rep.argmax_cook
        ),
    }
}

pub fn decompose(rep: &DecomposeReport, opts: &OutputArgs) -> String {
    let pr = opts.precision;
    let header = ["axis", "eigenvalue", "coordinate", "component"];
    let rows: Vec<Vec<String>> = rep
        .axes
        .iter()
        .map(|a| {
            vec![
                a.axis.to_string(),
                sci(a.eigenvalue, pr),
                num(a.coordinate, pr),
                num(a.component, pr),
            ]
        })
        .collect();
    match opts.format {
        Format::Json => json(rep),
        Format::Csv => {
            let mut all = rows;
            all.push(vec!["sum".into(), String::new(), String::new(), num(rep.sum, pr)]);
            csv(&header, &all)
        }
        Format::Table => format!(
            "dataset: {}, observation {} (p = {})\n{}sum of components: {}\ncook_d: {}\n",
            rep.dataset,
            rep.i,
            rep.p,
            table(&header, &rows),
            num(rep.sum, pr),
            num(rep.cook_d, pr)
        ),
    }
}

pub fn check_chisq(rep: &ChisqReport, opts: &OutputArgs) -> String {
    let pr = opts.precision;
    let header = ["i", "h", "trace", "condition1_residual", "satisfied"];
    let rows: Vec<Vec<String>> = rep
        .rows
        .iter()
        .map(|r| {
            vec![
                r.i.to_string(),
                num(r.h, pr),
                num(r.trace, pr),
                sci(r.condition1_residual, pr),
                r.satisfied.to_string(),
            ]
        })
        .collect();
    match opts.format {
        Format::Json => json(rep),
        Format::Csv => csv(&header, &rows),
        Format::Table => {
            let hits = rep.rows.iter().filter(|r| r.satisfied).count();
            format!(
                "source: {}\n{}satisfied: {} of {}\n",
                rep.source,
                table(&header, &rows),
                hits,
                rep.rows.len()
            )
        }
    }
}

pub fn simulate(rep: &SimulateReport, opts: &OutputArgs) -> String {
    let pr = opts.precision;
    let fields = [
        ("leverage", num(rep.leverage, pr)),
        ("samples", rep.samples.to_string()),
        ("seed", rep.seed.to_string()),
        ("mean", num(rep.mean, pr)),
        ("ks_statistic", num(rep.ks_statistic, pr)),
        ("p_value", sci(rep.p_value, pr)),
        ("reference", rep.reference.clone()),
        ("verdict", rep.verdict.clone()),
    ];
    match opts.format {
        Format::Json => json(rep),
        Format::Csv => {
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            csv(&header, &[fields.iter().map(|(_, v)| v.clone()).collect()])
        }
        Format::Table => fields
            .iter()
            .map(|(k, v)| format!("{k:<14}{v}\n"))
            .collect(),
    }
}

pub fn datasets(list: &[DatasetInfo], opts: &OutputArgs) -> String {
    let header = ["name", "n", "m", "response", "sha256", "provenance"];
    let rows: Vec<Vec<String>> = list
        .iter()
        .map(|d| {
            vec![
                d.name.clone(),
                d.n.to_string(),
                d.m.to_string(),
                d.response.clone(),
                d.sha256.clone(),
                d.provenance.clone(),
            ]
        })
        .collect();
    match opts.format {
        Format::Json => json(&list),
        Format::Csv => csv(&header, &rows),
        Format::Table => {
            let short: Vec<Vec<String>> = list
                .iter()
                .map(|d| {
                    vec![
                        d.name.clone(),
                        d.n.to_string(),
                        d.m.to_string(),
                        d.response.clone(),
                        d.sha256[..12].to_string(),
                    ]
                })
                .collect();
            table(&header[..5], &short)
        }
    }
}
