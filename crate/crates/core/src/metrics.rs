//! Radiated-power figures of merit on standard grids: TRP, PRP and CVRP.
//!
//! All three share one discretization,
//!
//! ```text
//!   Δθ·Δφ · Σ_i Σ_j w_ij · [EIRP_θ + EIRP_φ](θ_i, φ_j) · sin θ_i
//! ```
//!
//! with `w_ij` the mask coverage of the cell, divided by 4π (TRP, PRP) or by
//! the analytic solid angle of the mask (CVRP). Cells cut by a cap edge use
//! the mean of the interpolated pattern over their covered part in place of
//! the node value. Sums run in linear mW with
//! compensated accumulation in a fixed θ-major order, so results do not
//! depend on how callers schedule the work.

use crate::error::{Error, Result};
use crate::grid::{Convention, Direction};
use crate::mask::{MaskKind, SphericalMask};
use crate::pattern::PolarizedPattern;
use crate::scalar::{sin_polar_deg, CompensatedSum, Scalar};

/// Field-of-view half-angles (degrees) used for the reference sweeps: 180 is the
/// whole sphere, 0 the single observation direction.
pub const DEFAULT_FOV_HALF_ANGLES_DEG: [f64; 16] = [
    180.0, 165.0, 150.0, 135.0, 120.0, 105.0, 90.0, 60.0, 45.0, 30.0, 21.0, 15.0, 9.0, 6.0, 3.0, 0.0,
];

/// Masks with a smaller analytic area are rejected.
pub const MIN_SOLID_ANGLE_SR: f64 = 1e-12;

#[inline]
fn full_sphere_sr<T: Scalar>() -> T {
    T::lit(4.0) * T::PI()
}

/// `Δθ·Δφ·Σ w·EIRP·sinθ` over the grid.
fn masked_quadrature<T: Scalar>(p: &PolarizedPattern<T>, m: &SphericalMask<T>) -> Result<T> {
    p.require(Convention::Standard)?;
    let g = p.grid();
    let full = matches!(m.kind(), MaskKind::FullSphere);
    let mut acc = CompensatedSum::new();
    for (i, &theta) in g.theta_deg().iter().enumerate() {
        let s = sin_polar_deg(theta);
        if s == T::zero() {
            continue;
        }
        for j in 0..g.n_phi() {
            let v = if full {
                p.node_total(g.index(i, j))
            } else {
                m.covered_eirp(p, i, j)
            };
            if v != T::zero() {
                acc.add(v * s);
            }
        }
    }
    Ok(acc.total() * g.dtheta_rad() * g.dphi_rad())
}

/// Total radiated power (mW) of a standard-grid pattern.
pub fn trp<T: Scalar>(p: &PolarizedPattern<T>) -> Result<T> {
    Ok(masked_quadrature(p, &SphericalMask::full_sphere())? / full_sphere_sr())
}

/// Named θ bands for partial radiated power.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrpPreset {
    /// Upper hemisphere, θ ∈ [0, 90].
    Uhrp,
    /// θ ∈ [60, 90].
    N75prp,
    /// θ ∈ [60, 120].
    Nhprp,
}

impl PrpPreset {
    pub fn band_deg(self) -> (f64, f64) {
        match self {
            PrpPreset::Uhrp => (0.0, 90.0),
            PrpPreset::N75prp => (60.0, 90.0),
            PrpPreset::Nhprp => (60.0, 120.0),
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "uhrp" => Some(PrpPreset::Uhrp),
            "n75prp" => Some(PrpPreset::N75prp),
            "nhprp" => Some(PrpPreset::Nhprp),
            _ => None,
        }
    }
}

/// Partial radiated power over θ ∈ [θ1, θ2], all φ, normalized by 4π.
pub fn prp<T: Scalar>(p: &PolarizedPattern<T>, theta1_deg: T, theta2_deg: T) -> Result<T> {
    if !(theta1_deg >= T::zero() && theta1_deg < theta2_deg && theta2_deg <= T::lit(180.0)) {
        return Err(Error::InvalidBand {
            theta1: theta1_deg.to_f64_lossy(),
            theta2: theta2_deg.to_f64_lossy(),
        });
    }
    let band = SphericalMask::window(theta1_deg, theta2_deg, T::zero(), T::lit(360.0))?;
    Ok(masked_quadrature(p, &band)? / full_sphere_sr())
}

pub fn prp_preset<T: Scalar>(p: &PolarizedPattern<T>, preset: PrpPreset) -> Result<T> {
    let (a, b) = preset.band_deg();
    prp(p, T::lit(a), T::lit(b))
}

/// Constrained-view radiated power: masked quadrature over the mask's solid angle.
///
/// A full-sphere mask reproduces [`trp`] exactly. Point masks are rejected;
/// use [`cvrp_point`].
pub fn cvrp<T: Scalar>(p: &PolarizedPattern<T>, m: &SphericalMask<T>) -> Result<T> {
    if matches!(m.kind(), MaskKind::Point { .. }) {
        return Err(Error::PointMask);
    }
    let area = m.solid_angle_sr();
    if !(area >= T::lit(MIN_SOLID_ANGLE_SR)) {
        return Err(Error::DegenerateMask(area.to_f64_lossy()));
    }
    let area = if matches!(m.kind(), MaskKind::FullSphere) {
        full_sphere_sr()
    } else {
        area
    };
    Ok(masked_quadrature(p, m)? / area)
}

/// Point field of view: the combined EIRP at `center`.
pub fn cvrp_point<T: Scalar>(p: &PolarizedPattern<T>, center: Direction<T>) -> T {
    p.combined_eirp(center)
}

/// Evaluates any mask, routing points to [`cvrp_point`].
pub fn cvrp_any<T: Scalar>(p: &PolarizedPattern<T>, m: &SphericalMask<T>) -> Result<T> {
    match m.kind() {
        MaskKind::Point { center } => {
            p.require(Convention::Standard)?;
            Ok(cvrp_point(p, *center))
        }
        _ => cvrp(p, m),
    }
}

/// Ordered `(half-angle, CVRP)` pairs with strictly decreasing half-angles.
#[derive(Debug, Clone, PartialEq)]
pub struct CvrpSweep<T> {
    entries: Vec<(T, T)>,
    pub pattern_label: String,
}

fn check_fov_order<T: Scalar>(fovs: impl IntoIterator<Item = T>) -> Result<()> {
    let mut prev: Option<T> = None;
    for f in fovs {
        if !(f >= T::zero() && f <= T::lit(180.0)) {
            return Err(Error::InvalidFovList(format!("half-angle {f} outside [0, 180]")));
        }
        if let Some(p) = prev {
            if f == p {
                return Err(Error::InvalidFovList(format!("duplicate half-angle {f}")));
            }
            if f > p {
                return Err(Error::InvalidFovList(format!(
                    "half-angles must decrease, {f} follows {p}"
                )));
            }
        }
        prev = Some(f);
    }
    Ok(())
}

impl<T: Scalar> CvrpSweep<T> {
    pub fn new(entries: Vec<(T, T)>, pattern_label: impl Into<String>) -> Result<Self> {
        check_fov_order(entries.iter().map(|e| e.0))?;
        if let Some(&(fov, v)) = entries.iter().find(|e| !(e.1 >= T::zero())) {
            return Err(Error::InvalidFovList(format!(
                "negative CVRP {v} at half-angle {fov}"
            )));
        }
        Ok(Self {
            entries,
            pattern_label: pattern_label.into(),
        })
    }

    pub fn entries(&self) -> &[(T, T)] {
        &self.entries
    }

    pub fn fovs(&self) -> impl Iterator<Item = T> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn values(&self) -> impl Iterator<Item = T> + '_ {
        self.entries.iter().map(|e| e.1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// CVRP at an exact half-angle, if the sweep has it.
    pub fn at(&self, fov_deg: T) -> Option<T> {
        self.entries.iter().find(|e| e.0 == fov_deg).map(|e| e.1)
    }
}

/// CVRP over caps of decreasing half-angle around `center`; half-angle 0 is the
/// point field of view.
pub fn cvrp_sweep<T: Scalar>(
    p: &PolarizedPattern<T>,
    center: Direction<T>,
    half_angles_deg: &[T],
) -> Result<CvrpSweep<T>> {
    p.require(Convention::Standard)?;
    check_fov_order(half_angles_deg.iter().copied())?;
    let mut entries = Vec::with_capacity(half_angles_deg.len());
    for &beta in half_angles_deg {
        let v = if beta == T::zero() {
            cvrp_point(p, center)
        } else {
            cvrp(p, &SphericalMask::cap(center, beta)?)?
        };
        entries.push((beta, v));
    }
    CvrpSweep::new(entries, p.label.clone())
}

/// The default sweep list converted to `T`.
pub fn default_fovs<T: Scalar>() -> Vec<T> {
    DEFAULT_FOV_HALF_ANGLES_DEG.iter().map(|&f| T::lit(f)).collect()
}
