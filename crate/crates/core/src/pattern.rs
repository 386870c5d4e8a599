//! Polarized EIRP patterns sampled on an [`AngularGrid`].
//!
//! Powers are stored in linear milliwatts. A zero entry means either no
//! radiation or a direction that was never measured; the latter is tracked
//! separately by the per-cell `measured` flags so that files can round-trip
//! their coverage.

use crate::error::{Error, Result};
use crate::grid::{AngularGrid, Convention, Direction};
use crate::scalar::{wrap_360, Scalar, NODE_TOLERANCE_DEG};

#[derive(Debug, Clone, PartialEq)]
pub struct PolarizedPattern<T> {
    grid: AngularGrid<T>,
    eirp_theta_mw: Vec<T>,
    eirp_phi_mw: Vec<T>,
    measured: Vec<bool>,
    pub frequency_hz: f64,
    pub label: String,
}

fn check_powers<T: Scalar>(values: &[T]) -> Result<()> {
    match values.iter().find(|v| !(**v >= T::zero()) || !v.is_finite()) {
        Some(bad) => Err(Error::NegativePower(bad.to_f64_lossy())),
        None => Ok(()),
    }
}

impl<T: Scalar> PolarizedPattern<T> {
    /// Builds a fully measured pattern. Both matrices are θ-major `[n_theta × n_phi]`.
    pub fn new(
        grid: AngularGrid<T>,
        eirp_theta_mw: Vec<T>,
        eirp_phi_mw: Vec<T>,
        frequency_hz: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        let measured = vec![true; grid.len()];
        Self::with_coverage(grid, eirp_theta_mw, eirp_phi_mw, measured, frequency_hz, label)
    }

    /// Like [`PolarizedPattern::new`] with explicit per-cell coverage flags.
    pub fn with_coverage(
        grid: AngularGrid<T>,
        eirp_theta_mw: Vec<T>,
        eirp_phi_mw: Vec<T>,
        measured: Vec<bool>,
        frequency_hz: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        let n = grid.len();
        if eirp_theta_mw.len() != n || eirp_phi_mw.len() != n || measured.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "grid has {} x {} = {n} cells, got {} / {} power samples and {} coverage flags",
                grid.n_theta(),
                grid.n_phi(),
                eirp_theta_mw.len(),
                eirp_phi_mw.len(),
                measured.len()
            )));
        }
        check_powers(&eirp_theta_mw)?;
        check_powers(&eirp_phi_mw)?;
        Ok(Self {
            grid,
            eirp_theta_mw,
            eirp_phi_mw,
            measured,
            frequency_hz,
            label: label.into(),
        })
    }

    /// Evaluates `f(theta_deg, phi_deg) -> (eirp_theta_mw, eirp_phi_mw)` at every node.
    pub fn from_fn(
        grid: AngularGrid<T>,
        frequency_hz: f64,
        label: impl Into<String>,
        mut f: impl FnMut(T, T) -> (T, T),
    ) -> Result<Self> {
        let mut et = Vec::with_capacity(grid.len());
        let mut ep = Vec::with_capacity(grid.len());
        for &theta in grid.theta_deg() {
            for &phi in grid.phi_deg() {
                let (a, b) = f(theta, phi);
                et.push(a);
                ep.push(b);
            }
        }
        Self::new(grid, et, ep, frequency_hz, label)
    }

    /// Constant pattern with the given per-polarization power.
    pub fn uniform(grid: AngularGrid<T>, theta_mw: T, phi_mw: T) -> Result<Self> {
        let n = grid.len();
        Self::new(grid, vec![theta_mw; n], vec![phi_mw; n], 0.0, "uniform")
    }

    pub fn grid(&self) -> &AngularGrid<T> {
        &self.grid
    }

    pub fn eirp_theta_mw(&self) -> &[T] {
        &self.eirp_theta_mw
    }

    pub fn eirp_phi_mw(&self) -> &[T] {
        &self.eirp_phi_mw
    }

    pub fn measured(&self) -> &[bool] {
        &self.measured
    }

    pub fn is_fully_measured(&self) -> bool {
        self.measured.iter().all(|&m| m)
    }

    /// Combined power at a grid node.
    #[inline]
    pub fn node_total(&self, flat_index: usize) -> T {
        self.eirp_theta_mw[flat_index] + self.eirp_phi_mw[flat_index]
    }

    pub(crate) fn require(&self, convention: Convention) -> Result<()> {
        if self.grid.convention() == convention {
            Ok(())
        } else {
            Err(Error::WrongConvention {
                expected: convention.name(),
                found: self.grid.convention().name(),
            })
        }
    }

    /// Multiplies both polarizations by `factor`.
    pub fn scaled(&self, factor: T) -> Result<Self> {
        let mul = |v: &[T]| v.iter().map(|&x| x * factor).collect::<Vec<_>>();
        let mut out = self.clone();
        out.eirp_theta_mw = mul(&self.eirp_theta_mw);
        out.eirp_phi_mw = mul(&self.eirp_phi_mw);
        check_powers(&out.eirp_theta_mw)?;
        Ok(out)
    }

    /// Sets every unmeasured cell to `fill_mw` in both polarizations and
    /// marks it as covered.
    pub fn fill_unmeasured(&self, fill_mw: T) -> Result<Self> {
        if !(fill_mw >= T::zero()) || !fill_mw.is_finite() {
            return Err(Error::NegativePower(fill_mw.to_f64_lossy()));
        }
        let mut out = self.clone();
        for (k, m) in out.measured.iter_mut().enumerate() {
            if !*m {
                out.eirp_theta_mw[k] = fill_mw;
                out.eirp_phi_mw[k] = fill_mw;
                *m = true;
            }
        }
        Ok(out)
    }

    /// Bilinear interpolation of both polarizations in (θ, φ) on linear power.
    ///
    /// φ wraps when the grid closes the circle; θ clamps to the first and last
    /// rings. Queries within 1e-9° of a node return the stored value.
    pub fn sample_bilinear(&self, d: Direction<T>) -> (T, T) {
        let g = &self.grid;
        let (i0, i1, f) = clamped_axis(g.theta_deg(), g.dtheta_deg(), d.theta_deg);
        let (j0, j1, w) = if g.wraps_azimuth() {
            wrapped_axis(g.phi_deg(), g.dphi_deg(), d.phi_deg)
        } else {
            clamped_axis(g.phi_deg(), g.dphi_deg(), d.phi_deg)
        };
        let pick = |m: &[T]| {
            let v00 = m[g.index(i0, j0)];
            if f == T::zero() && w == T::zero() {
                return v00;
            }
            let v01 = m[g.index(i0, j1)];
            let v10 = m[g.index(i1, j0)];
            let v11 = m[g.index(i1, j1)];
            let one = T::one();
            let lo = v00 * (one - w) + v01 * w;
            let hi = v10 * (one - w) + v11 * w;
            lo * (one - f) + hi * f
        };
        (pick(&self.eirp_theta_mw), pick(&self.eirp_phi_mw))
    }

    /// `EIRP_θ + EIRP_φ` at `d`, interpolated off-grid.
    pub fn combined_eirp(&self, d: Direction<T>) -> T {
        let (a, b) = self.sample_bilinear(d);
        a + b
    }

    /// Grid node of maximum combined power (first in θ-major order on ties).
    pub fn peak(&self) -> (Direction<T>, T) {
        let g = &self.grid;
        let mut best = (0, T::neg_infinity());
        for k in 0..g.len() {
            let v = self.node_total(k);
            if v > best.1 {
                best = (k, v);
            }
        }
        let (i, j) = (best.0 / g.n_phi(), best.0 % g.n_phi());
        (
            Direction::new(g.theta_deg()[i], g.phi_deg()[j]),
            best.1,
        )
    }

    pub(crate) fn from_parts_unchecked(
        grid: AngularGrid<T>,
        eirp_theta_mw: Vec<T>,
        eirp_phi_mw: Vec<T>,
        measured: Vec<bool>,
        frequency_hz: f64,
        label: String,
    ) -> Self {
        debug_assert_eq!(eirp_theta_mw.len(), grid.len());
        Self {
            grid,
            eirp_theta_mw,
            eirp_phi_mw,
            measured,
            frequency_hz,
            label,
        }
    }
}

/// Returns (lower index, upper index, fraction toward upper) on a clamped axis.
fn clamped_axis<T: Scalar>(axis: &[T], step: T, value: T) -> (usize, usize, T) {
    let n = axis.len();
    let pos = (value - axis[0]) / step;
    if pos <= T::zero() {
        return (0, 0, T::zero());
    }
    let last = T::from_usize_lossy(n - 1);
    if pos >= last {
        return (n - 1, n - 1, T::zero());
    }
    let snapped = snap(pos, step);
    let i = snapped.floor();
    let frac = snapped - i;
    let i = i.to_usize().unwrap_or(0).min(n - 1);
    if frac == T::zero() {
        (i, i, T::zero())
    } else {
        (i, (i + 1).min(n - 1), frac)
    }
}

fn wrapped_axis<T: Scalar>(axis: &[T], step: T, value: T) -> (usize, usize, T) {
    let n = axis.len();
    let rel = wrap_360(value - axis[0]);
    let mut pos = snap(rel / step, step);
    if pos >= T::from_usize_lossy(n) {
        pos = pos - T::from_usize_lossy(n);
    }
    let i = pos.floor();
    let frac = pos - i;
    let i = i.to_usize().unwrap_or(0) % n;
    (i, (i + 1) % n, frac)
}

#[inline]
fn snap<T: Scalar>(pos: T, step: T) -> T {
    let r = pos.round();
    if (pos - r).abs() * step <= T::lit(NODE_TOLERANCE_DEG) {
        r
    } else {
        pos
    }
}
