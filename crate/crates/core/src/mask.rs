//! Spherical field-of-view masks: full sphere, caps, (θ, φ) windows and points.
//!
//! Every mask carries its analytic solid angle on the unit sphere. Two views
//! of membership are provided:
//!
//! * [`SphericalMask::contains`] tests a single direction. [`apply_mask`] uses
//!   it at node centers to zero the pattern outside the region.
//! * [`SphericalMask::cell_coverage`] returns the fraction of a grid cell that
//!   lies inside the region. The masked quadrature in [`crate::metrics`]
//!   weights each node by it, so that a boundary running through a ring of
//!   nodes counts that ring by half rather than all-or-nothing.

use crate::error::{Error, Result};
use crate::grid::{angle_between, unit_vector, AngularGrid, Convention, Direction};
use crate::pattern::PolarizedPattern;
use crate::scalar::{deg_to_rad, rad_to_deg, wrap_360, Scalar, NODE_TOLERANCE_DEG};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaskKind<T> {
    FullSphere,
    /// Spherical cap: every direction within `half_angle_deg` of `center`.
    Cap { center: Direction<T>, half_angle_deg: T },
    /// θ ∈ [θmin, θmax], φ ∈ [φmin, φmax] with φmin ∈ [0, 360) and
    /// 0 < φmax − φmin ≤ 360 (φmax may exceed 360 when the window wraps).
    Window {
        theta_min_deg: T,
        theta_max_deg: T,
        phi_min_deg: T,
        phi_max_deg: T,
    },
    /// Single observation direction; solid angle 0.
    Point { center: Direction<T> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalMask<T> {
    kind: MaskKind<T>,
    solid_angle_sr: T,
}

impl<T: Scalar> SphericalMask<T> {
    pub fn full_sphere() -> Self {
        Self {
            kind: MaskKind::FullSphere,
            solid_angle_sr: T::lit(4.0) * T::PI(),
        }
    }

    pub fn cap(center: Direction<T>, half_angle_deg: T) -> Result<Self> {
        if !(half_angle_deg > T::zero() && half_angle_deg <= T::lit(180.0)) {
            return Err(Error::InvalidMask(format!(
                "cap half-angle must lie in (0, 180], got {half_angle_deg}"
            )));
        }
        let solid_angle_sr = T::lit(2.0) * T::PI() * (T::one() - deg_to_rad(half_angle_deg).cos());
        Ok(Self {
            kind: MaskKind::Cap {
                center,
                half_angle_deg,
            },
            solid_angle_sr,
        })
    }

    /// Rectangular (θ, φ) window. θ bounds are clamped to [0, 180]; the φ
    /// interval is normalized modulo 360 and saturates at the full circle.
    pub fn window(theta_min_deg: T, theta_max_deg: T, phi_min_deg: T, phi_max_deg: T) -> Result<Self> {
        let lo = theta_min_deg.max(T::zero());
        let hi = theta_max_deg.min(T::lit(180.0));
        if !(lo < hi) {
            return Err(Error::InvalidMask(format!(
                "empty theta interval [{theta_min_deg}, {theta_max_deg}] after clamping"
            )));
        }
        let full = T::lit(360.0);
        let extent = phi_max_deg - phi_min_deg;
        if !(extent > T::zero()) {
            return Err(Error::InvalidMask(format!(
                "empty phi interval [{phi_min_deg}, {phi_max_deg}]"
            )));
        }
        let (pmin, pmax) = if extent >= full {
            (T::zero(), full)
        } else {
            let start = wrap_360(phi_min_deg);
            (start, start + extent)
        };
        let solid_angle_sr = deg_to_rad(pmax - pmin) * (deg_to_rad(lo).cos() - deg_to_rad(hi).cos());
        Ok(Self {
            kind: MaskKind::Window {
                theta_min_deg: lo,
                theta_max_deg: hi,
                phi_min_deg: pmin,
                phi_max_deg: pmax,
            },
            solid_angle_sr,
        })
    }

    pub fn point(center: Direction<T>) -> Self {
        Self {
            kind: MaskKind::Point { center },
            solid_angle_sr: T::zero(),
        }
    }

    pub fn kind(&self) -> &MaskKind<T> {
        &self.kind
    }

    /// Analytic solid angle in steradians.
    pub fn solid_angle_sr(&self) -> T {
        self.solid_angle_sr
    }

    /// Node-center membership test.
    pub fn contains(&self, d: Direction<T>) -> bool {
        let tol = T::lit(NODE_TOLERANCE_DEG);
        match self.kind {
            MaskKind::FullSphere => true,
            MaskKind::Cap {
                center,
                half_angle_deg,
            } => d.angular_distance_rad(&center) <= deg_to_rad(half_angle_deg + tol),
            MaskKind::Window {
                theta_min_deg,
                theta_max_deg,
                phi_min_deg,
                phi_max_deg,
            } => {
                let theta_ok = d.theta_deg >= theta_min_deg - tol && d.theta_deg <= theta_max_deg + tol;
                let extent = phi_max_deg - phi_min_deg;
                let rel = wrap_360(d.phi_deg - phi_min_deg);
                let phi_ok = extent >= T::lit(360.0) || rel <= extent + tol || rel >= T::lit(360.0) - tol;
                theta_ok && phi_ok
            }
            MaskKind::Point { center } => d.angular_distance_rad(&center) <= deg_to_rad(tol),
        }
    }

    /// Fraction of the grid cell around node `(i, j)` that lies inside the mask.
    ///
    /// The cell spans `θ ± Δθ/2`, `φ ± Δφ/2` and fractions are measured in
    /// (θ, φ). Window edges are coordinate lines, so the overlap is exact. For
    /// caps the azimuthal overlap is exact at each colatitude and integrated
    /// numerically over θ. Points cover nothing.
    pub fn cell_coverage(&self, grid: &AngularGrid<T>, i: usize, j: usize) -> T {
        let theta = grid.theta_deg()[i];
        let phi = grid.phi_deg()[j];
        match self.kind {
            MaskKind::FullSphere => T::one(),
            MaskKind::Point { .. } => T::zero(),
            MaskKind::Window {
                theta_min_deg,
                theta_max_deg,
                phi_min_deg,
                phi_max_deg,
            } => {
                let ft = theta_fraction(theta, grid.dtheta_deg(), theta_min_deg, theta_max_deg);
                if ft == T::zero() {
                    return T::zero();
                }
                ft * phi_fraction(phi, grid.dphi_deg(), phi_min_deg, phi_max_deg - phi_min_deg)
            }
            MaskKind::Cap {
                center,
                half_angle_deg,
            } => {
                if half_angle_deg >= T::lit(180.0) {
                    return T::one();
                }
                cap_fraction(theta, phi, grid, center, half_angle_deg)
            }
        }
    }
}

impl<T: Scalar> SphericalMask<T> {
    /// `coverage × mean EIRP over the covered part` of the cell around node
    /// `(i, j)`. Cells cut by a cap edge are integrated row by row against
    /// the bilinear interpolant; everything else uses the node value.
    pub(crate) fn covered_eirp(&self, p: &PolarizedPattern<T>, i: usize, j: usize) -> T {
        let grid = p.grid();
        let node = p.node_total(grid.index(i, j));
        let MaskKind::Cap {
            center,
            half_angle_deg,
        } = self.kind
        else {
            return node * self.cell_coverage(grid, i, j);
        };
        if half_angle_deg >= T::lit(180.0) {
            return node;
        }
        let (theta, phi) = (grid.theta_deg()[i], grid.phi_deg()[j]);
        let mut acc = T::zero();
        match cap_rows(theta, phi, grid, center, half_angle_deg, |t, ph, f| {
            if f > T::zero() {
                acc = acc + f * p.combined_eirp(Direction { theta_deg: t, phi_deg: ph });
            }
        }) {
            CellSplit::Inside => node,
            CellSplit::Outside => T::zero(),
            CellSplit::Boundary => acc / T::from_usize_lossy(CAP_ROWS),
        }
    }
}

fn theta_fraction<T: Scalar>(theta: T, step: T, lo: T, hi: T) -> T {
    let half = step / T::lit(2.0);
    let a = (theta - half).max(T::zero());
    let b = (theta + half).min(T::lit(180.0));
    let tol = T::lit(NODE_TOLERANCE_DEG);
    if a >= lo - tol && b <= hi + tol {
        return T::one();
    }
    if b <= lo || a >= hi {
        return T::zero();
    }
    let overlap = b.min(hi) - a.max(lo);
    (overlap / (b - a)).max(T::zero()).min(T::one())
}

fn phi_fraction<T: Scalar>(phi: T, step: T, start: T, extent: T) -> T {
    let full = T::lit(360.0);
    if extent >= full {
        return T::one();
    }
    let tol = T::lit(NODE_TOLERANCE_DEG);
    let s = wrap_360(phi - step / T::lit(2.0) - start);
    let e = s + step;
    if e <= extent + tol || (s >= full - tol && e - full <= extent + tol) {
        return T::one();
    }
    let direct = (e.min(extent) - s).max(T::zero());
    let wrapped = (e - full).min(extent).max(T::zero());
    ((direct + wrapped) / step).max(T::zero()).min(T::one())
}

/// Sub-rows per boundary cell when integrating a cap's azimuthal extent over θ.
const CAP_ROWS: usize = 32;

enum CellSplit {
    Outside,
    Inside,
    Boundary,
}

/// Walks the cell `[θ ± Δθ/2] × [φ ± Δφ/2]` against a cap. Cells entirely
/// inside or outside return early. For boundary cells, `visit` receives each
/// of the [`CAP_ROWS`] θ rows with the covered fraction of the row and a
/// representative azimuth of the covered part. At each colatitude the cap
/// covers an exact azimuth arc.
fn cap_rows<T: Scalar>(
    theta_deg: T,
    phi_deg: T,
    grid: &AngularGrid<T>,
    center: Direction<T>,
    half_angle_deg: T,
    mut visit: impl FnMut(T, T, T),
) -> CellSplit {
    let half = grid.dtheta_deg() / T::lit(2.0);
    let lo = (theta_deg - half).max(T::zero());
    let hi = (theta_deg + half).min(T::lit(180.0));
    let beta = deg_to_rad(half_angle_deg);
    let distance = angle_between(unit_vector(theta_deg, phi_deg), center.unit_vector());
    // farthest reach of the cell from its node
    let widest = if lo <= T::lit(90.0) && hi >= T::lit(90.0) {
        T::one()
    } else {
        crate::scalar::sin_polar_deg(lo).max(crate::scalar::sin_polar_deg(hi))
    };
    let reach = deg_to_rad(half) + widest * grid.dphi_rad() / T::lit(2.0);
    if beta - distance >= reach {
        return CellSplit::Inside;
    }
    if distance - beta >= reach {
        return CellSplit::Outside;
    }
    let (sc, cc) = deg_to_rad(center.theta_deg).sin_cos();
    let cos_beta = beta.cos();
    let dphi = grid.dphi_deg();
    let step = (hi - lo) / T::from_usize_lossy(CAP_ROWS);
    for k in 0..CAP_ROWS {
        let t = lo + step * (T::from_usize_lossy(k) + T::lit(0.5));
        let (st, ct) = deg_to_rad(t).sin_cos();
        let denom = st * sc;
        let c = if denom.abs() < T::epsilon() {
            // membership does not depend on φ
            if ct * cc >= cos_beta {
                -T::one()
            } else {
                T::one()
            }
        } else {
            (cos_beta - ct * cc) / denom
        };
        if c <= -T::one() {
            visit(t, phi_deg, T::one());
        } else if c < T::one() {
            let h = rad_to_deg(c.acos());
            let (fraction, mid) = arc_overlap(phi_deg, dphi, center.phi_deg - h, h + h);
            visit(t, mid, fraction);
        } else {
            visit(t, phi_deg, T::zero());
        }
    }
    CellSplit::Boundary
}

/// Overlap of the cell `[φ ± Δφ/2]` with the arc `[start, start + extent]`:
/// the covered fraction and the middle of the covered part. When the overlap
/// comes in two pieces the node azimuth stands in for the middle.
fn arc_overlap<T: Scalar>(phi: T, step: T, start: T, extent: T) -> (T, T) {
    let full = T::lit(360.0);
    let s = wrap_360(phi - step / T::lit(2.0) - start);
    let e = s + step;
    let piece = |a: T, b: T| (a.max(T::zero()), b.min(extent));
    let (a1, b1) = piece(s, e);
    let (a2, b2) = piece(s - full, e - full);
    let l1 = (b1 - a1).max(T::zero());
    let l2 = (b2 - a2).max(T::zero());
    let fraction = ((l1 + l2) / step).min(T::one());
    let mid = if l1 > T::zero() && l2 > T::zero() {
        phi
    } else if l1 > T::zero() {
        start + (a1 + b1) / T::lit(2.0)
    } else if l2 > T::zero() {
        start + (a2 + b2) / T::lit(2.0)
    } else {
        phi
    };
    (fraction, wrap_360(mid))
}

fn cap_fraction<T: Scalar>(theta_deg: T, phi_deg: T, grid: &AngularGrid<T>, center: Direction<T>, half_angle_deg: T) -> T {
    let mut covered = T::zero();
    match cap_rows(theta_deg, phi_deg, grid, center, half_angle_deg, |_, _, f| covered = covered + f) {
        CellSplit::Inside => T::one(),
        CellSplit::Outside => T::zero(),
        CellSplit::Boundary => covered / T::from_usize_lossy(CAP_ROWS),
    }
}

/// Window from a center and full angular extents: θ ∈ θc ± θ_FoV/2, φ ∈ φc ± φ_FoV/2.
pub fn window_bounds<T: Scalar>(center: Direction<T>, theta_fov_deg: T, phi_fov_deg: T) -> Result<SphericalMask<T>> {
    let span = T::lit(360.0);
    for (name, v) in [("theta", theta_fov_deg), ("phi", phi_fov_deg)] {
        if !(v >= T::zero() && v <= span) {
            return Err(Error::InvalidMask(format!(
                "{name} field of view must lie in [0, 360], got {v}"
            )));
        }
    }
    let two = T::lit(2.0);
    SphericalMask::window(
        center.theta_deg - theta_fov_deg / two,
        center.theta_deg + theta_fov_deg / two,
        center.phi_deg - phi_fov_deg / two,
        center.phi_deg + phi_fov_deg / two,
    )
}

/// Analytic solid angle of `m` in steradians.
pub fn mask_solid_angle<T: Scalar>(m: &SphericalMask<T>) -> T {
    m.solid_angle_sr()
}

/// Zeroes both polarizations at every node outside `m`; nodes inside are untouched.
pub fn apply_mask<T: Scalar>(p: &PolarizedPattern<T>, m: &SphericalMask<T>) -> Result<PolarizedPattern<T>> {
    p.require(Convention::Standard)?;
    match m.kind() {
        MaskKind::Point { .. } => return Err(Error::PointMask),
        MaskKind::FullSphere => return Ok(p.clone()),
        _ => {}
    }
    let g = p.grid();
    let mut et = p.eirp_theta_mw().to_vec();
    let mut ep = p.eirp_phi_mw().to_vec();
    for (i, &theta) in g.theta_deg().iter().enumerate() {
        for (j, &phi) in g.phi_deg().iter().enumerate() {
            if !m.contains(Direction::new(theta, phi)) {
                let k = g.index(i, j);
                et[k] = T::zero();
                ep[k] = T::zero();
            }
        }
    }
    Ok(PolarizedPattern::from_parts_unchecked(
        g.clone(),
        et,
        ep,
        p.measured().to_vec(),
        p.frequency_hz,
        p.label.clone(),
    ))
}
