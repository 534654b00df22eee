//! Filters × kernel-length sweeps and the knee/time-threshold selection
//! that picks an architecture from them.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::datasets::{PairedDataset, Split};
use crate::neural::{CnnConfig, CnnModel};
use crate::rng::{derive_seed, substream, tag};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DoeRow {
    pub sim_id: u32,
    pub filters: usize,
    /// Kernel label as reported, e.g. `23x1` or `9x9`.
    pub kernel: String,
    /// Length of the equivalent 1-D kernel.
    pub kernel_len: usize,
    pub avg_rms_mv: f64,
    pub avg_snr_db: f64,
    pub wall_time_s: f64,
}

impl DoeRow {
    pub fn validate(&self) -> Result<()> {
        if !(self.avg_rms_mv.is_finite() && self.avg_snr_db.is_finite()) {
            return Err(Error::NonFinite("sweep metrics"));
        }
        if !(self.wall_time_s > 0.0 && self.wall_time_s.is_finite()) {
            return Err(Error::invalid(alloc::format!(
                "sim {} has non-positive wall time",
                self.sim_id
            )));
        }
        Ok(())
    }
}

/// Length of the 1-D kernel behind a `KxW` label (the leading number).
pub fn kernel_len_from_label(label: &str) -> Result<usize> {
    label
        .split(['x', 'X'])
        .next()
        .and_then(|k| k.trim().parse().ok())
        .filter(|&k: &usize| k > 0)
        .ok_or_else(|| Error::invalid(alloc::format!("bad kernel label `{label}`")))
}

/// Where the quality knee sits in sim-id order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Knee {
    /// Rows from this sim id onward.
    FromSimId(u32),
    /// Rows from the first (lowest sim id) row whose RMS is below the bound onward.
    FirstRmsBelow(f64),
}

/// Lexicographic ranking of shortlisted rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Lowest RMS, then highest SNR, then shortest time.
    RmsSnrTime,
    /// Lowest RMS, then shortest time, then highest SNR.
    RmsTimeSnr,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionPolicy {
    pub knee: Knee,
    pub time_threshold_s: f64,
    /// Relative slack on the threshold ("approximately 5000 s").
    pub time_tolerance: f64,
    pub objective: Objective,
}

impl Default for SelectionPolicy {
    fn default() -> Self {
        Self {
            knee: Knee::FirstRmsBelow(0.14),
            time_threshold_s: 5000.0,
            time_tolerance: 0.05,
            objective: Objective::RmsSnrTime,
        }
    }
}

impl SelectionPolicy {
    /// The default shortlist with ties on RMS resolved by time, which picks
    /// the fast 13-tap model over its slower twin.
    pub fn time_first() -> Self {
        Self {
            objective: Objective::RmsTimeSnr,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.time_threshold_s > 0.0) {
            return Err(Error::invalid("time threshold must be positive"));
        }
        if !(self.time_tolerance >= 0.0) {
            return Err(Error::invalid("time tolerance must be non-negative"));
        }
        Ok(())
    }

    pub fn time_limit_s(&self) -> f64 {
        self.time_threshold_s * (1.0 + self.time_tolerance)
    }

    fn compare(&self, a: &DoeRow, b: &DoeRow) -> Ordering {
        let rms = a.avg_rms_mv.total_cmp(&b.avg_rms_mv);
        let snr = b.avg_snr_db.total_cmp(&a.avg_snr_db);
        let time = a.wall_time_s.total_cmp(&b.wall_time_s);
        let ranked = match self.objective {
            Objective::RmsSnrTime => rms.then(snr).then(time),
            Objective::RmsTimeSnr => rms.then(time).then(snr),
        };
        ranked.then(a.sim_id.cmp(&b.sim_id))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub best: DoeRow,
    /// Shortlisted rows in sim-id order.
    pub shortlist: Vec<DoeRow>,
}

/// Keeps rows past the knee and under the time limit, then ranks them.
pub fn select_optimal(rows: &[DoeRow], policy: &SelectionPolicy) -> Result<Selection> {
    policy.validate()?;
    if rows.is_empty() {
        return Err(Error::Empty("sweep rows"));
    }
    let mut sorted = rows.to_vec();
    sorted.sort_by_key(|r| r.sim_id);
    let cut = match policy.knee {
        Knee::FromSimId(id) => id,
        Knee::FirstRmsBelow(bound) => sorted
            .iter()
            .find(|r| r.avg_rms_mv < bound)
            .map(|r| r.sim_id)
            .ok_or(Error::Empty("rows past the quality knee"))?,
    };
    let limit = policy.time_limit_s();
    let shortlist: Vec<DoeRow> = sorted
        .into_iter()
        .filter(|r| r.sim_id >= cut && r.wall_time_s <= limit)
        .collect();
    let best = shortlist
        .iter()
        .min_by(|a, b| policy.compare(a, b))
        .cloned()
        .ok_or(Error::Empty("shortlist"))?;
    Ok(Selection { best, shortlist })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub filters: Vec<usize>,
    pub kernel_lens: Vec<usize>,
}

impl Grid {
    /// Cells in grid order: filters outer, kernels inner.
    pub fn cells(&self) -> Result<Vec<(usize, usize)>> {
        if self.filters.is_empty() || self.kernel_lens.is_empty() {
            return Err(Error::Empty("sweep grid"));
        }
        Ok(self
            .filters
            .iter()
            .flat_map(|&f| self.kernel_lens.iter().map(move |&k| (f, k)))
            .collect())
    }
}

/// Trains and scores one cell. `base` supplies everything but filters,
/// kernel and seed; the seed is derived from `base.seed` and the cell index.
/// `clock` returns monotonic seconds.
pub fn run_cell(
    cell: usize,
    filters: usize,
    kernel_len: usize,
    dataset: &PairedDataset,
    base: &CnnConfig,
    clock: &dyn Fn() -> f64,
) -> Result<DoeRow> {
    let wrap = |e: Error| Error::SweepCell {
        cell,
        source: Box::new(e),
    };
    let config = CnnConfig {
        filters_per_layer: filters,
        kernel_len,
        seed: substream(derive_seed(base.seed, tag::DOE), cell as u64),
        ..base.clone()
    };
    let train = dataset.indices(Split::Train);
    let noisy: Vec<&[f64]> = train.iter().map(|&i| dataset.noisy[i].samples()).collect();
    let clean: Vec<&[f64]> = train.iter().map(|&i| dataset.clean[i].samples()).collect();
    let start = clock();
    let (model, _) = CnnModel::train(config, &noisy, &clean).map_err(wrap)?;
    let elapsed = clock() - start;
    let report = dataset.evaluate(&model, Split::Test).map_err(wrap)?;
    Ok(DoeRow {
        sim_id: cell as u32 + 1,
        filters,
        kernel: alloc::format!("{kernel_len}x1"),
        kernel_len,
        avg_rms_mv: report.avg_rms_mv,
        avg_snr_db: report.avg_snr_db,
        // keep rows valid even when the clock is coarser than a cell
        wall_time_s: elapsed.max(1e-9),
    })
}

/// Every cell in grid order, sequentially.
pub fn run_sweep(
    grid: &Grid,
    dataset: &PairedDataset,
    base: &CnnConfig,
    clock: &dyn Fn() -> f64,
) -> Result<Vec<DoeRow>> {
    grid.cells()?
        .into_iter()
        .enumerate()
        .map(|(i, (f, k))| run_cell(i, f, k, dataset, base, clock))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn row(sim_id: u32, rms: f64, snr: f64, time: f64) -> DoeRow {
        DoeRow {
            sim_id,
            filters: 16,
            kernel: "9x1".into(),
            kernel_len: 9,
            avg_rms_mv: rms,
            avg_snr_db: snr,
            wall_time_s: time,
        }
    }

    #[test]
    fn single_row_selects_itself() {
        let r = row(1, 0.1, 10.0, 5.0);
        let s = select_optimal(core::slice::from_ref(&r), &SelectionPolicy::default()).unwrap();
        assert_eq!(s.best, r);
    }

    #[test]
    fn objectives_break_rms_ties_differently() {
        let rows = vec![row(1, 0.2, 5.0, 1.0), row(2, 0.1, 10.0, 100.0), row(3, 0.1, 12.0, 200.0)];
        let p = SelectionPolicy {
            knee: Knee::FromSimId(1),
            ..SelectionPolicy::default()
        };
        assert_eq!(select_optimal(&rows, &p).unwrap().best.sim_id, 3);
        let p = SelectionPolicy {
            objective: Objective::RmsTimeSnr,
            ..p
        };
        assert_eq!(select_optimal(&rows, &p).unwrap().best.sim_id, 2);
    }

    #[test]
    fn empty_inputs() {
        assert!(select_optimal(&[], &SelectionPolicy::default()).is_err());
        let slow = [row(1, 0.1, 10.0, 1e6)];
        assert_eq!(
            select_optimal(&slow, &SelectionPolicy::default()),
            Err(Error::Empty("shortlist"))
        );
        let grid = Grid {
            filters: vec![],
            kernel_lens: vec![3],
        };
        assert!(grid.cells().is_err());
    }

    #[test]
    fn kernel_labels() {
        assert_eq!(kernel_len_from_label("23x1").unwrap(), 23);
        assert_eq!(kernel_len_from_label("45x45").unwrap(), 45);
        assert!(kernel_len_from_label("x1").is_err());
    }
}
