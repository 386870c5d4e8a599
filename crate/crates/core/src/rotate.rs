//! Rigid rotation of a pattern about the y-axis with bilinear regridding.

use crate::error::Result;
use crate::grid::{unit_vector, Convention, Direction};
use crate::pattern::PolarizedPattern;
use crate::scalar::{deg_to_rad, Scalar};

/// Rotation about +y by `alpha_deg` (right-handed): +z tilts toward +x.
#[inline]
pub fn rotate_vector_about_y<T: Scalar>(v: [T; 3], alpha_deg: T) -> [T; 3] {
    let (s, c) = deg_to_rad(alpha_deg).sin_cos();
    [v[0] * c + v[2] * s, v[1], -v[0] * s + v[2] * c]
}

/// Rotation that brings a beam steered to `scan_deg` in the xz-plane onto +z.
///
/// Scan angles are signed toward +x, so a beam at -45° sits at θ = 45°, φ = 180°.
pub fn aligning_angle<T: Scalar>(scan_deg: T) -> T {
    -scan_deg
}

/// Rotates the pattern content by `alpha_deg` about the y-axis and resamples it
/// onto the original grid.
///
/// Each output node is pulled back through the inverse rotation and sampled
/// bilinearly in linear power. Per-polarization powers are carried as scalars;
/// the polarization basis is not re-projected.
pub fn rotate_about_y<T: Scalar>(p: &PolarizedPattern<T>, alpha_deg: T) -> Result<PolarizedPattern<T>> {
    p.require(Convention::Standard)?;
    if alpha_deg == T::zero() {
        return Ok(p.clone());
    }
    let g = p.grid();
    let n = g.len();
    let mut et = Vec::with_capacity(n);
    let mut ep = Vec::with_capacity(n);
    for &theta in g.theta_deg() {
        for &phi in g.phi_deg() {
            let source = rotate_vector_about_y(unit_vector(theta, phi), -alpha_deg);
            let (a, b) = p.sample_bilinear(Direction::from_unit_vector(source));
            et.push(a);
            ep.push(b);
        }
    }
    let label = if p.label.is_empty() {
        format!("rotated {alpha_deg} deg about y")
    } else {
        format!("{} (rotated {alpha_deg} deg about y)", p.label)
    };
    PolarizedPattern::new(g.clone(), et, ep, p.frequency_hz, label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::AngularGrid;

    #[test]
    fn zero_rotation_is_bitwise_identity() {
        let g = AngularGrid::standard(1.5, 1.5).unwrap();
        let p = PolarizedPattern::from_fn(g, 28e9, "ramp", |t: f64, f: f64| (t.sin().abs() + f * 1e-3, 0.25)).unwrap();
        let r = rotate_about_y(&p, 0.0).unwrap();
        assert_eq!(r.eirp_theta_mw(), p.eirp_theta_mw());
        assert_eq!(r.eirp_phi_mw(), p.eirp_phi_mw());
    }

    #[test]
    fn isotropic_stays_isotropic() {
        let g = AngularGrid::standard(1.5, 1.5).unwrap();
        let p = PolarizedPattern::uniform(g, 1.0, 0.0).unwrap();
        for alpha in [4.5, -45.0, 90.0, 137.0] {
            let r = rotate_about_y(&p, alpha).unwrap();
            let worst = r
                .eirp_theta_mw()
                .iter()
                .map(|v: &f64| (v - 1.0).abs())
                .fold(0.0, f64::max);
            assert!(worst < 1e-12, "alpha {alpha}: {worst}");
        }
    }

    #[test]
    fn rotation_moves_z_toward_x() {
        let v = rotate_vector_about_y([0.0_f64, 0.0, 1.0], 90.0);
        assert!((v[0] - 1.0).abs() < 1e-15 && v[2].abs() < 1e-15);
        let beam = unit_vector(45.0_f64, 180.0);
        let aligned = rotate_vector_about_y(beam, aligning_angle(-45.0));
        assert!((aligned[2] - 1.0).abs() < 1e-12);
    }
}
