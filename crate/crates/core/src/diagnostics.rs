//! Reference-versus-test comparison of CVRP sweeps in dB.
//!
//! Faulty elements leave the total radiated power nearly unchanged but
//! distort the main beam, so the sweeps drift apart at narrow fields of view.
//! The comparison reports per-FoV deltas and flags the pair when any delta
//! exceeds a threshold. The default 0.5 dB threshold is a configurable
//! starting point, not a value calibrated against measurement uncertainty.

use crate::error::{Error, Result};
use crate::metrics::CvrpSweep;
use crate::scalar::Scalar;

pub const DEFAULT_THRESHOLD_DB: f64 = 0.5;

/// dBm value assigned to zero (or vanishing) linear power.
pub const POWER_FLOOR_DBM: f64 = -200.0;

/// `10·log10(mW)`, floored at [`POWER_FLOOR_DBM`].
pub fn mw_to_dbm<T: Scalar>(mw: T) -> T {
    let floor = T::lit(POWER_FLOOR_DBM);
    if mw > T::zero() {
        (T::lit(10.0) * mw.log10()).max(floor)
    } else {
        floor
    }
}

pub fn dbm_to_mw<T: Scalar>(dbm: T) -> T {
    T::lit(10.0).powf(dbm / T::lit(10.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepComparison<T> {
    pub fov_deg: Vec<T>,
    pub ref_cvrp_db: Vec<T>,
    pub test_cvrp_db: Vec<T>,
    /// `test − ref` per FoV.
    pub delta_db: Vec<T>,
    pub max_abs_delta_db: T,
    /// Widest FoV at which `|delta|` exceeds the threshold.
    pub divergence_fov_deg: Option<T>,
    pub flagged: bool,
    pub threshold_db: T,
    pub ref_label: String,
    pub test_label: String,
}

impl<T: Scalar> SweepComparison<T> {
    /// Largest `|delta|` over FoVs not wider than `fov_deg`.
    pub fn max_abs_delta_within(&self, fov_deg: T) -> Option<T> {
        self.fov_deg
            .iter()
            .zip(&self.delta_db)
            .filter(|(f, _)| **f <= fov_deg)
            .map(|(_, d)| d.abs())
            .reduce(T::max)
    }

    pub fn delta_at(&self, fov_deg: T) -> Option<T> {
        self.fov_deg.iter().position(|&f| f == fov_deg).map(|k| self.delta_db[k])
    }

    pub fn exceeds(&self, k: usize) -> bool {
        self.delta_db[k].abs() > self.threshold_db
    }
}

pub fn compare_sweeps<T: Scalar>(
    reference: &CvrpSweep<T>,
    test: &CvrpSweep<T>,
    threshold_db: T,
) -> Result<SweepComparison<T>> {
    if !(threshold_db > T::zero()) || !threshold_db.is_finite() {
        return Err(Error::InvalidThreshold(threshold_db.to_f64_lossy()));
    }
    if reference.len() != test.len() || reference.fovs().zip(test.fovs()).any(|(a, b)| a != b) {
        return Err(Error::SweepMismatch(format!(
            "field-of-view lists differ ({} vs {} entries)",
            reference.len(),
            test.len()
        )));
    }
    let fov_deg: Vec<T> = reference.fovs().collect();
    let ref_cvrp_db: Vec<T> = reference.values().map(mw_to_dbm).collect();
    let test_cvrp_db: Vec<T> = test.values().map(mw_to_dbm).collect();
    let delta_db: Vec<T> = test_cvrp_db.iter().zip(&ref_cvrp_db).map(|(&t, &r)| t - r).collect();
    let max_abs_delta_db = delta_db.iter().map(|d| d.abs()).fold(T::zero(), T::max);
    let divergence_fov_deg = fov_deg
        .iter()
        .zip(&delta_db)
        .filter(|(_, d)| d.abs() > threshold_db)
        .map(|(&f, _)| f)
        .reduce(T::max);
    Ok(SweepComparison {
        flagged: divergence_fov_deg.is_some(),
        fov_deg,
        ref_cvrp_db,
        test_cvrp_db,
        delta_db,
        max_abs_delta_db,
        divergence_fov_deg,
        threshold_db,
        ref_label: reference.pattern_label.clone(),
        test_label: test.pattern_label.clone(),
    })
}

/// One line of a plot table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlotRow<T> {
    Sweep {
        fov_deg: T,
        cvrp_dbm: T,
    },
    Comparison {
        fov_deg: T,
        ref_dbm: T,
        test_dbm: T,
        delta_db: T,
        flagged: bool,
    },
}

/// Anything that can be tabulated as one row per FoV.
pub trait PlotSource<T> {
    fn plot_rows(&self) -> Vec<PlotRow<T>>;
}

impl<T: Scalar> PlotSource<T> for CvrpSweep<T> {
    fn plot_rows(&self) -> Vec<PlotRow<T>> {
        self.entries()
            .iter()
            .map(|&(fov_deg, mw)| PlotRow::Sweep {
                fov_deg,
                cvrp_dbm: mw_to_dbm(mw),
            })
            .collect()
    }
}

impl<T: Scalar> PlotSource<T> for SweepComparison<T> {
    fn plot_rows(&self) -> Vec<PlotRow<T>> {
        (0..self.fov_deg.len())
            .map(|k| PlotRow::Comparison {
                fov_deg: self.fov_deg[k],
                ref_dbm: self.ref_cvrp_db[k],
                test_dbm: self.test_cvrp_db[k],
                delta_db: self.delta_db[k],
                flagged: self.exceeds(k),
            })
            .collect()
    }
}

pub fn sweep_to_plot_rows<T, S: PlotSource<T> + ?Sized>(source: &S) -> Vec<PlotRow<T>> {
    source.plot_rows()
}
