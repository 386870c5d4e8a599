//! Equispaced spherical sampling grids and observation directions.

use crate::error::{Error, Result};
use crate::scalar::{deg_to_rad, wrap_360, Scalar, NODE_TOLERANCE_DEG};

/// Angle convention of a grid.
///
/// `Standard` is θ ∈ [0, 180], φ ∈ [0, 360). `DistributedAxes` is the
/// roll-over-azimuth positioner layout: θ ∈ [-180, 180), φ ∈ [0, 180].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    Standard,
    DistributedAxes,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Standard => "standard",
            Convention::DistributedAxes => "distributed",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "standard" => Some(Convention::Standard),
            "distributed" => Some(Convention::DistributedAxes),
            _ => None,
        }
    }
}

/// θ/φ sample axes in degrees. Both axes are strictly increasing and equispaced.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularGrid<T> {
    theta_deg: Vec<T>,
    phi_deg: Vec<T>,
    dtheta_deg: T,
    dphi_deg: T,
    convention: Convention,
}

fn axis_step<T: Scalar>(axis: &[T], name: &str) -> Result<T> {
    if axis.len() < 2 {
        return Err(Error::InvalidGrid(format!(
            "{name} axis needs at least two samples, got {}",
            axis.len()
        )));
    }
    let step = axis[1] - axis[0];
    if !(step > T::zero()) {
        return Err(Error::InvalidGrid(format!(
            "{name} axis is not strictly increasing"
        )));
    }
    let tol = T::lit(NODE_TOLERANCE_DEG);
    for (k, pair) in axis.windows(2).enumerate() {
        if ((pair[1] - pair[0]) - step).abs() > tol {
            return Err(Error::InvalidGrid(format!(
                "{name} axis is not equispaced at index {}: step {} differs from {}",
                k + 1,
                pair[1] - pair[0],
                step
            )));
        }
    }
    Ok(step)
}

fn lattice_axis<T: Scalar>(start: f64, step: f64, count: usize) -> Vec<T> {
    (0..count)
        .map(|i| T::lit(start + step * i as f64))
        .collect()
}

fn divisions(span: f64, step: f64, name: &str) -> Result<usize> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidGrid(format!("{name} step must be positive, got {step}")));
    }
    let n = (span / step).round();
    if (n * step - span).abs() > NODE_TOLERANCE_DEG || n < 1.0 {
        return Err(Error::InvalidGrid(format!(
            "{name} step {step} does not divide the {span} degree span evenly"
        )));
    }
    Ok(n as usize)
}

impl<T: Scalar> AngularGrid<T> {
    /// Validates explicit axes against the equispacing and range rules of `convention`.
    pub fn new(theta_deg: Vec<T>, phi_deg: Vec<T>, convention: Convention) -> Result<Self> {
        let dtheta_deg = axis_step(&theta_deg, "theta")?;
        let dphi_deg = axis_step(&phi_deg, "phi")?;
        let tol = T::lit(NODE_TOLERANCE_DEG);
        let (t_lo, t_hi, p_lo, p_hi, t_open, p_open) = match convention {
            Convention::Standard => (0.0, 180.0, 0.0, 360.0, false, true),
            Convention::DistributedAxes => (-180.0, 180.0, 0.0, 180.0, true, false),
        };
        let in_range = |v: T, lo: f64, hi: f64, open: bool| {
            let lo = T::lit(lo) - tol;
            if open {
                v >= lo && v < T::lit(hi) - tol
            } else {
                v >= lo && v <= T::lit(hi) + tol
            }
        };
        let (t_first, t_last) = (theta_deg[0], theta_deg[theta_deg.len() - 1]);
        let (p_first, p_last) = (phi_deg[0], phi_deg[phi_deg.len() - 1]);
        if !in_range(t_first, t_lo, t_hi, t_open) || !in_range(t_last, t_lo, t_hi, t_open) {
            return Err(Error::InvalidGrid(format!(
                "theta samples [{t_first}, {t_last}] fall outside the {} range",
                convention.name()
            )));
        }
        if !in_range(p_first, p_lo, p_hi, p_open) || !in_range(p_last, p_lo, p_hi, p_open) {
            return Err(Error::InvalidGrid(format!(
                "phi samples [{p_first}, {p_last}] fall outside the {} range",
                convention.name()
            )));
        }
        Ok(Self {
            theta_deg,
            phi_deg,
            dtheta_deg,
            dphi_deg,
            convention,
        })
    }

    /// Full standard grid: θ ∈ {0, Δθ, …, 180}, φ ∈ {0, Δφ, …, 360 − Δφ}.
    pub fn standard(dtheta_deg: f64, dphi_deg: f64) -> Result<Self> {
        let nt = divisions(180.0, dtheta_deg, "theta")?;
        let np = divisions(360.0, dphi_deg, "phi")?;
        Self::new(
            lattice_axis(0.0, dtheta_deg, nt + 1),
            lattice_axis(0.0, dphi_deg, np),
            Convention::Standard,
        )
    }

    /// Full distributed-axes grid: θ ∈ {-180, …, 180 − Δθ}, φ ∈ {0, …, 180}.
    pub fn distributed(dtheta_deg: f64, dphi_deg: f64) -> Result<Self> {
        let nt = divisions(360.0, dtheta_deg, "theta")?;
        let np = divisions(180.0, dphi_deg, "phi")?;
        Self::new(
            lattice_axis(-180.0, dtheta_deg, nt),
            lattice_axis(0.0, dphi_deg, np + 1),
            Convention::DistributedAxes,
        )
    }

    /// Full grid of the given convention.
    pub fn full(convention: Convention, dtheta_deg: f64, dphi_deg: f64) -> Result<Self> {
        match convention {
            Convention::Standard => Self::standard(dtheta_deg, dphi_deg),
            Convention::DistributedAxes => Self::distributed(dtheta_deg, dphi_deg),
        }
    }

    pub fn theta_deg(&self) -> &[T] {
        &self.theta_deg
    }

    pub fn phi_deg(&self) -> &[T] {
        &self.phi_deg
    }

    pub fn dtheta_deg(&self) -> T {
        self.dtheta_deg
    }

    pub fn dphi_deg(&self) -> T {
        self.dphi_deg
    }

    pub fn dtheta_rad(&self) -> T {
        deg_to_rad(self.dtheta_deg)
    }

    pub fn dphi_rad(&self) -> T {
        deg_to_rad(self.dphi_deg)
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn n_theta(&self) -> usize {
        self.theta_deg.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phi_deg.len()
    }

    pub fn len(&self) -> usize {
        self.n_theta() * self.n_phi()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major (θ-major) flat index.
    #[inline]
    pub fn index(&self, i_theta: usize, j_phi: usize) -> usize {
        i_theta * self.n_phi() + j_phi
    }

    /// True when the φ samples close the full circle so interpolation may wrap.
    pub fn wraps_azimuth(&self) -> bool {
        let span = self.dphi_deg * T::from_usize_lossy(self.n_phi());
        (span - T::lit(360.0)).abs() <= T::lit(1e-6)
    }

    fn lattice_index(axis: &[T], step: T, value: T) -> Option<usize> {
        let pos = (value - axis[0]) / step;
        let k = pos.round();
        if k < T::zero() || (pos - k).abs() * step > T::lit(1e-6) {
            return None;
        }
        let k = k.to_usize()?;
        (k < axis.len()).then_some(k)
    }

    /// Index of the θ sample at `theta_deg`, if it lies on the lattice.
    pub fn theta_index(&self, theta_deg: T) -> Option<usize> {
        Self::lattice_index(&self.theta_deg, self.dtheta_deg, theta_deg)
    }

    /// Index of the φ sample at `phi_deg`, if it lies on the lattice.
    /// For wrapping grids the azimuth is reduced modulo 360 first.
    pub fn phi_index(&self, phi_deg: T) -> Option<usize> {
        if self.wraps_azimuth() {
            let rel = wrap_360(phi_deg - self.phi_deg[0]);
            let k = Self::lattice_index(&self.phi_deg, self.dphi_deg, self.phi_deg[0] + rel);
            match k {
                Some(k) => Some(k),
                // within tolerance of 360 -> first sample
                None if (T::lit(360.0) - rel) <= T::lit(1e-6) => Some(0),
                None => None,
            }
        } else {
            Self::lattice_index(&self.phi_deg, self.dphi_deg, phi_deg)
        }
    }
}

/// Observation direction in the standard convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction<T> {
    pub theta_deg: T,
    pub phi_deg: T,
}

impl<T: Scalar> Direction<T> {
    /// Clamps θ to [0, 180] and wraps φ to [0, 360).
    pub fn new(theta_deg: T, phi_deg: T) -> Self {
        let theta_deg = theta_deg.max(T::zero()).min(T::lit(180.0));
        Self {
            theta_deg,
            phi_deg: wrap_360(phi_deg),
        }
    }

    pub fn boresight() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn unit_vector(&self) -> [T; 3] {
        unit_vector(self.theta_deg, self.phi_deg)
    }

    pub fn from_unit_vector(v: [T; 3]) -> Self {
        let [x, y, z] = v;
        let rho = (x * x + y * y).sqrt();
        let theta = crate::scalar::rad_to_deg(rho.atan2(z));
        let phi = if rho == T::zero() {
            T::zero()
        } else {
            crate::scalar::rad_to_deg(y.atan2(x))
        };
        Self::new(theta, phi)
    }

    /// Great-circle angle to `other`, in radians.
    pub fn angular_distance_rad(&self, other: &Self) -> T {
        angle_between(self.unit_vector(), other.unit_vector())
    }
}

#[inline]
pub fn unit_vector<T: Scalar>(theta_deg: T, phi_deg: T) -> [T; 3] {
    let (st, ct) = deg_to_rad(theta_deg).sin_cos();
    let (sp, cp) = deg_to_rad(phi_deg).sin_cos();
    [st * cp, st * sp, ct]
}

#[inline]
pub(crate) fn dot<T: Scalar>(a: [T; 3], b: [T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn cross<T: Scalar>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Angle between unit vectors via atan2, accurate near 0 and π.
#[inline]
pub fn angle_between<T: Scalar>(a: [T; 3], b: [T; 3]) -> T {
    let c = cross(a, b);
    dot(c, c).sqrt().atan2(dot(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_grid_matches_measurement_layout() {
        let g = AngularGrid::<f64>::standard(1.5, 1.5).unwrap();
        assert_eq!(g.n_theta(), 121);
        assert_eq!(g.n_phi(), 240);
        assert!(g.wraps_azimuth());
        assert_eq!(g.theta_deg()[120], 180.0);
        assert_eq!(g.phi_deg()[239], 358.5);
    }

    #[test]
    fn distributed_grid_layout() {
        let g = AngularGrid::<f64>::distributed(1.5, 1.5).unwrap();
        assert_eq!(g.n_theta(), 240);
        assert_eq!(g.n_phi(), 121);
        assert_eq!(g.theta_deg()[0], -180.0);
        assert!(!g.wraps_azimuth());
    }

    #[test]
    fn rejects_uneven_axes() {
        let err = AngularGrid::<f64>::new(vec![0.0, 1.0, 2.5], vec![0.0, 1.0], Convention::Standard);
        assert!(matches!(err, Err(Error::InvalidGrid(_))));
        assert!(AngularGrid::<f64>::standard(7.0, 1.5).is_err());
    }

    #[test]
    fn rejects_out_of_range_samples() {
        let err = AngularGrid::<f64>::new(vec![-3.0, 0.0, 3.0], vec![0.0, 1.0], Convention::Standard);
        assert!(err.is_err());
        let err = AngularGrid::<f64>::new(vec![0.0, 1.0], vec![0.0, 360.0], Convention::Standard);
        assert!(err.is_err());
        let ok = AngularGrid::<f64>::new(vec![-171.0, 0.0, 171.0], vec![0.0, 180.0], Convention::DistributedAxes);
        assert!(ok.is_ok());
    }

    #[test]
    fn lattice_lookup_wraps_azimuth() {
        let g = AngularGrid::<f64>::standard(1.5, 1.5).unwrap();
        assert_eq!(g.phi_index(360.0), Some(0));
        assert_eq!(g.phi_index(-1.5), Some(239));
        assert_eq!(g.theta_index(3.0), Some(2));
        assert_eq!(g.theta_index(3.1), None);
    }

    #[test]
    fn direction_normalization() {
        let d = Direction::new(190.0_f64, -30.0);
        assert_eq!(d.theta_deg, 180.0);
        assert_eq!(d.phi_deg, 330.0);
        let back = Direction::from_unit_vector(Direction::new(30.0_f64, 220.0).unit_vector());
        assert!((back.theta_deg - 30.0).abs() < 1e-12);
        assert!((back.phi_deg - 220.0).abs() < 1e-12);
    }
}
