//! Plain data behind each command's output. These are what `--format json`
//! serializes, field order included.

use influence::data::{self, Dataset, BUILTIN_NAMES};
use influence::deletion::{cook_decomposition, diagnostics_table};
use influence::distribution::{lemma1_condition, chisq_condition_at_leverage, simulate_and_test};
use influence::Result;
use serde::{Deserialize, Serialize};

use crate::SortKey;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnoseRow {
    pub i: usize,
    pub e: f64,
    pub h: f64,
    pub t2: f64,
    pub cook_d: f64,
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnoseReport {
    pub dataset: String,
    pub n: usize,
    pub p: usize,
    pub rows: Vec<DiagnoseRow>,
    pub argmax_abs_k: usize,
    pub argmax_cook: usize,
}

pub fn diagnose(ds: &Dataset, sort: SortKey) -> Result<DiagnoseReport> {
    let fit = ds.fit()?;
    let table = diagnostics_table(&fit)?;
    let order = match sort {
        SortKey::Index => (1..=fit.n()).collect(),
        SortKey::KAbsDesc => table.order_by_abs_k(),
        SortKey::CookDesc => table.order_by_cook(),
    };
    let rows = order
        .into_iter()
        .map(|i| {
            let r = table.row(i).expect("row exists");
            DiagnoseRow {
                i: r.i,
                e: r.e_i,
                h: r.h_ii,
                t2: r.t2,
                cook_d: r.cook_d,
                k: r.k,
            }
        })
        .collect();
    Ok(DiagnoseReport {
        dataset: ds.name.clone(),
        n: fit.n(),
        p: fit.p(),
        rows,
        argmax_abs_k: table.argmax_abs_k(),
        argmax_cook: table.argmax_cook(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub axis: usize,
    pub eigenvalue: f64,
    pub coordinate: f64,
    pub component: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub dataset: String,
    pub i: usize,
    pub p: usize,
    pub axes: Vec<Axis>,
    pub sum: f64,
    pub cook_d: f64,
}

pub fn decompose(ds: &Dataset, i: usize) -> Result<DecomposeReport> {
    let fit = ds.fit()?;
    let dec = cook_decomposition(&fit, i)?;
    let axes = (0..fit.p())
        .map(|k| Axis {
            axis: k + 1,
            eigenvalue: dec.eigen.eigenvalues[k],
            coordinate: dec.coordinates[k],
            component: dec.components[k],
        })
        .collect();
    Ok(DecomposeReport {
        dataset: ds.name.clone(),
        i,
        p: fit.p(),
        axes,
        sum: dec.total(),
        cook_d: dec.cook_d,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChisqRow {
    pub i: usize,
    pub h: f64,
    pub trace: f64,
    pub condition1_residual: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChisqReport {
    pub source: String,
    pub rows: Vec<ChisqRow>,
}

fn chisq_row(c: &influence::ChiSquareCondition) -> ChisqRow {
    ChisqRow {
        i: c.i,
        h: c.h,
        trace: c.trace_value,
        condition1_residual: c.condition1_residual,
        satisfied: c.satisfied,
    }
}

pub fn check_chisq(ds: &Dataset, index: Option<usize>) -> Result<ChisqReport> {
    let fit = ds.fit()?;
    let indices: Vec<usize> = match index {
        Some(i) => vec![i],
        None => (1..=fit.n()).collect(),
    };
    let rows = indices
        .into_iter()
        .map(|i| lemma1_condition(&fit, i).map(|c| chisq_row(&c)))
        .collect::<Result<_>>()?;
    Ok(ChisqReport {
        source: ds.name.clone(),
        rows,
    })
}

pub fn check_chisq_leverage(h: f64) -> Result<ChisqReport> {
    let c = chisq_condition_at_leverage(h)?;
    Ok(ChisqReport {
        source: "synthetic".into(),
        rows: vec![chisq_row(&c)],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub leverage: f64,
    pub samples: usize,
    pub seed: u64,
    pub mean: f64,
    pub ks_statistic: f64,
    pub p_value: f64,
    pub reference: String,
    pub verdict: String,
}

pub fn simulate(h: f64, samples: usize, seed: u64) -> Result<SimulateReport> {
    let (mean, r) = simulate_and_test(h, samples, seed)?;
    Ok(SimulateReport {
        leverage: h,
        samples,
        seed,
        mean,
        ks_statistic: r.ks_statistic,
        p_value: r.p_value,
        reference: r.reference.to_string(),
        verdict: r.verdict().to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub response: String,
    pub predictors: Vec<String>,
    pub sha256: String,
    pub provenance: String,
}

pub fn datasets() -> Result<Vec<DatasetInfo>> {
    BUILTIN_NAMES
        .iter()
        .map(|&name| {
            let d = data::builtin(name)?;
            Ok(DatasetInfo {
                name: d.name.clone(),
                n: d.n(),
                m: d.m(),
                response: d.response_name.clone(),
                predictors: d.predictor_names.clone(),
                sha256: d.checksum.clone(),
                provenance: d.provenance.clone(),
            })
        })
        .collect()
}
