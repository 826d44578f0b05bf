//! Convergence studies over (dataset, level, order) grids: result tables,
//! least-squares rates and log-log plots.

mod plot;

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::BasisKind;
use crate::datasets::{generate_levels, DatasetSpec};
use crate::error::StudyError;
use crate::quality::{dataset_quality, LevelQuality};
use crate::vem::{solve_problem, ElementOptions, ModelProblem, SolveStatus, StabKind};

pub use plot::{loglog_svg, study_plots, Series};

/// Column order of the study table.
pub const STUDY_CSV_HEADER: &str = "dataset,level,k,n_dof,h,err_l2_rel,err_h1_rel,max_log10_cond_g,\
max_log10_cond_h,max_log10_pinabla_id,max_log10_pi0_id,rho,a_ratio,e_ratio,status";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    pub datasets: Vec<DatasetSpec>,
    pub orders: Vec<usize>,
    pub stab: StabKind,
    pub basis: BasisKind,
    /// Levels to run for every dataset; `0..=levels` of each spec if unset.
    pub levels: Option<Vec<usize>>,
    /// Only score mesh quality, no solves.
    pub quality_only: bool,
    pub plots: bool,
    pub out: PathBuf,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            datasets: Vec::new(),
            orders: vec![1, 2, 3],
            stab: StabKind::default(),
            basis: BasisKind::default(),
            levels: None,
            quality_only: false,
            plots: true,
            out: PathBuf::from("results"),
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<(), StudyError> {
        if self.datasets.is_empty() {
            return Err(StudyError::Config("at least one dataset is required".into()));
        }
        if self.orders.is_empty() && !self.quality_only {
            return Err(StudyError::Config("at least one order is required".into()));
        }
        if let Some(&k) = self.orders.iter().find(|&&k| !(1..=3).contains(&k)) {
            return Err(StudyError::Config(format!("order {k} is not in 1..=3")));
        }
        for d in &self.datasets {
            d.validate()?;
        }
        Ok(())
    }

    pub fn levels_for(&self, spec: &DatasetSpec) -> Vec<usize> {
        match &self.levels {
            Some(l) => l.clone(),
            None => (0..=spec.levels).collect(),
        }
    }
}

/// One line of the study table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub dataset: String,
    pub level: usize,
    pub k: usize,
    pub n_dof: usize,
    pub h: f64,
    pub err_l2_rel: f64,
    pub err_h1_rel: f64,
    pub max_log10_cond_g: f64,
    pub max_log10_cond_h: f64,
    pub max_log10_pinabla_id: f64,
    pub max_log10_pi0_id: f64,
    pub rho: f64,
    pub a_ratio: f64,
    pub e_ratio: f64,
    /// `ok`, `solver_failed`, `element_failed`, `blowup`, or a failure
    /// status suffixed with `+blowup`.
    pub status: String,
}

impl StudyRow {
    pub fn is_blowup(&self) -> bool {
        self.status.ends_with("blowup")
    }
}

/// Rows of every solve plus the per-dataset quality tables.
#[derive(Debug, Clone, Default)]
pub struct StudyResult {
    pub rows: Vec<StudyRow>,
    pub quality: Vec<(String, Vec<LevelQuality>)>,
}

/// Runs the configured grid. Solver trouble is recorded in the rows;
/// only invalid configurations and generator failures are errors.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyResult, StudyError> {
    cfg.validate()?;
    let pb = ModelProblem::sin_sin();
    let mut out = StudyResult::default();
    for spec in &cfg.datasets {
        let levels = cfg.levels_for(spec);
        let ds = generate_levels(spec, &levels)?;
        let name = spec.name();
        let mut quality = dataset_quality(&ds.meshes);
        for (q, &l) in quality.iter_mut().zip(&levels) {
            q.level = l;
        }
        if !cfg.quality_only {
            let jobs: Vec<(usize, usize)> =
                (0..levels.len()).flat_map(|i| cfg.orders.iter().map(move |&k| (i, k))).collect();
            let rows: Vec<StudyRow> = jobs
                .par_iter()
                .map(|&(i, k)| {
                    let opts = ElementOptions::new(k, cfg.basis, cfg.stab);
                    let q = &quality[i];
                    let (rep, status) = match solve_problem(&ds.meshes[i], &opts, &pb) {
                        Ok((rep, _)) => {
                            let st = rep.status.as_str().to_string();
                            (Some(rep), st)
                        }
                        Err(_) => (None, SolveStatus::ElementFailed.as_str().to_string()),
                    };
                    let f = |g: fn(&crate::vem::SolveReport) -> f64| rep.as_ref().map_or(f64::NAN, g);
                    StudyRow {
                        dataset: name.clone(),
                        level: levels[i],
                        k,
                        n_dof: rep.as_ref().map_or(0, |r| r.n_dof),
                        h: ds.meshes[i].stats().h,
                        err_l2_rel: f(|r| r.err_l2_rel),
                        err_h1_rel: f(|r| r.err_h1_rel),
                        max_log10_cond_g: f(|r| r.max_log10_cond_g),
                        max_log10_cond_h: f(|r| r.max_log10_cond_h),
                        max_log10_pinabla_id: f(|r| r.max_log10_pinabla_id),
                        max_log10_pi0_id: f(|r| r.max_log10_pi0_id),
                        rho: q.rho,
                        a_ratio: q.a_ratio,
                        e_ratio: q.e_ratio,
                        status,
                    }
                })
                .collect();
            out.rows.extend(rows);
        }
        out.quality.push((name, quality));
    }
    flag_blowups(&mut out.rows);
    Ok(out)
}

/// Marks rows whose relative L2 error exceeds that of the previous level
/// of the same dataset and order.
pub fn flag_blowups(rows: &mut [StudyRow]) {
    let mut idx: Vec<usize> = (0..rows.len()).collect();
    idx.sort_by(|&a, &b| {
        (&rows[a].dataset, rows[a].k, rows[a].level).cmp(&(&rows[b].dataset, rows[b].k, rows[b].level))
    });
    for w in idx.windows(2) {
        let (p, c) = (&rows[w[0]], &rows[w[1]]);
        if p.dataset != c.dataset || p.k != c.k || c.is_blowup() {
            continue;
        }
        let (ep, ec) = (p.err_l2_rel, c.err_l2_rel);
        if ep.is_finite() && ec.is_finite() && ec > ep {
            let row = &mut rows[w[1]];
            row.status = if row.status == "ok" { "blowup".into() } else { format!("{}+blowup", row.status) };
        }
    }
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.10e}")
    } else {
        "FAIL".into()
    }
}

pub fn study_csv(rows: &[StudyRow]) -> String {
    let mut s = String::from(STUDY_CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.dataset,
            r.level,
            r.k,
            r.n_dof,
            num(r.h),
            num(r.err_l2_rel),
            num(r.err_h1_rel),
            num(r.max_log10_cond_g),
            num(r.max_log10_cond_h),
            num(r.max_log10_pinabla_id),
            num(r.max_log10_pi0_id),
            num(r.rho),
            num(r.a_ratio),
            num(r.e_ratio),
            r.status
        );
    }
    s
}

/// Parses a table written by [`study_csv`]; `FAIL` cells become NaN.
pub fn read_study_csv(text: &str) -> Result<Vec<StudyRow>, StudyError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == STUDY_CSV_HEADER => {}
        _ => return Err(StudyError::Config("not a study table: unexpected header".into())),
    }
    let mut rows = Vec::new();
    for (no, line) in lines {
        let c: Vec<&str> = line.trim().split(',').collect();
        let bad = |what: &str| StudyError::Config(format!("line {}: bad {what}", no + 1));
        if c.len() != 15 {
            return Err(bad("column count"));
        }
        let int = |i: usize, what: &str| c[i].parse::<usize>().map_err(|_| bad(what));
        let flt = |i: usize, what: &str| -> Result<f64, StudyError> {
            if c[i] == "FAIL" {
                Ok(f64::NAN)
            } else {
                c[i].parse::<f64>().map_err(|_| bad(what))
            }
        };
        rows.push(StudyRow {
            dataset: c[0].to_string(),
            level: int(1, "level")?,
            k: int(2, "k")?,
            n_dof: int(3, "n_dof")?,
            h: flt(4, "h")?,
            err_l2_rel: flt(5, "err_l2_rel")?,
            err_h1_rel: flt(6, "err_h1_rel")?,
            max_log10_cond_g: flt(7, "max_log10_cond_g")?,
            max_log10_cond_h: flt(8, "max_log10_cond_h")?,
            max_log10_pinabla_id: flt(9, "max_log10_pinabla_id")?,
            max_log10_pi0_id: flt(10, "max_log10_pi0_id")?,
            rho: flt(11, "rho")?,
            a_ratio: flt(12, "a_ratio")?,
            e_ratio: flt(13, "e_ratio")?,
            status: c[14].to_string(),
        });
    }
    Ok(rows)
}

/// Least-squares slope of `ln y` against `ln x` over the finite positive
/// pairs; `None` with fewer than two of them.
pub fn fit_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| a.is_finite() && b.is_finite() && **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Fitted (L2, H1) slopes against `h` for one dataset and order.
pub fn rates_vs_h(rows: &[StudyRow], dataset: &str, k: usize) -> (Option<f64>, Option<f64>) {
    let sel: Vec<&StudyRow> = rows.iter().filter(|r| r.dataset == dataset && r.k == k).collect();
    let h: Vec<f64> = sel.iter().map(|r| r.h).collect();
    let l2: Vec<f64> = sel.iter().map(|r| r.err_l2_rel).collect();
    let h1: Vec<f64> = sel.iter().map(|r| r.err_h1_rel).collect();
    (fit_slope(&h, &l2), fit_slope(&h, &h1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::DatasetKind;

    fn row(level: usize, err: f64, status: &str) -> StudyRow {
        StudyRow {
            dataset: "jenga4".into(),
            level,
            k: 2,
            n_dof: 10 * (level + 1),
            h: 0.5f64.powi(level as i32),
            err_l2_rel: err,
            err_h1_rel: err,
            max_log10_cond_g: 1.0,
            max_log10_cond_h: f64::INFINITY,
            max_log10_pinabla_id: -12.0,
            max_log10_pi0_id: -12.0,
            rho: 0.5,
            a_ratio: 1.0,
            e_ratio: 2.0,
            status: status.into(),
        }
    }

    #[test]
    fn slope_of_exact_power_law() {
        let x = [1.0, 0.5, 0.25, 0.125];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(2.5)).collect();
        assert!((fit_slope(&x, &y).unwrap() - 2.5).abs() < 1e-12);
        assert!(fit_slope(&[1.0], &[1.0]).is_none());
        assert!(fit_slope(&[1.0, f64::NAN], &[1.0, 2.0]).is_none());
    }

    #[test]
    fn blowup_flags_increase_only() {
        let mut rows = vec![row(2, 1e-2, "ok"), row(0, 1.0, "ok"), row(1, 1e-1, "ok"), row(3, 5e-2, "solver_failed")];
        flag_blowups(&mut rows);
        let st: Vec<&str> = rows.iter().map(|r| r.status.as_str()).collect();
        assert_eq!(st, ["ok", "ok", "ok", "solver_failed+blowup"]);
    }

    #[test]
    fn csv_round_trip_with_fail() {
        let rows = vec![row(0, 0.25, "ok"), row(1, f64::NAN, "element_failed")];
        let text = study_csv(&rows);
        assert!(text.lines().nth(1).unwrap().contains("FAIL"));
        for line in text.lines().skip(1) {
            assert_eq!(line.split(',').count(), 15);
        }
        let back = read_study_csv(&text).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].err_l2_rel, 0.25);
        assert!(back[1].err_l2_rel.is_nan());
        assert!(back[0].max_log10_cond_h.is_nan());
        assert_eq!(study_csv(&back), text);
        assert!(read_study_csv("a,b\n").is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = StudyConfig::default();
        assert!(c.validate().is_err());
        c.datasets.push(DatasetSpec::new(DatasetKind::Slices).with_levels(2));
        assert!(c.validate().is_ok());
        c.orders = vec![4];
        assert!(c.validate().is_err());
        let parsed: StudyConfig =
            serde_json::from_str(r#"{"datasets": [{"kind": "maze", "levels": 3}], "orders": [1], "stab": "dd"}"#).unwrap();
        assert_eq!(parsed.stab, StabKind::Dd);
        assert_eq!(parsed.levels_for(&parsed.datasets[0]), vec![0, 1, 2, 3]);
    }

    #[test]
    fn small_study_is_deterministic_and_complete() {
        let cfg = StudyConfig {
            datasets: vec![DatasetSpec::new(DatasetKind::Slices).with_levels(2)],
            orders: vec![1, 2],
            ..StudyConfig::default()
        };
        let a = run_study(&cfg).unwrap();
        let b = run_study(&cfg).unwrap();
        assert_eq!(a.rows.len(), 6);
        assert_eq!(study_csv(&a.rows), study_csv(&b.rows));
        let keys: Vec<(usize, usize)> = a.rows.iter().map(|r| (r.level, r.k)).collect();
        assert_eq!(keys, [(0, 1), (0, 2), (1, 1), (1, 2), (2, 1), (2, 2)]);
        assert!(a.rows.iter().all(|r| r.status == "ok"));
    }
}
