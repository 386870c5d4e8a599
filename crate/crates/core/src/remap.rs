//! Conversion between distributed-axes and standard spherical grids.
//!
//! A distributed sample at (θ, φ) with θ < 0 is the same physical direction
//! as the standard sample (−θ, φ + 180°); samples with θ ≥ 0 keep their
//! coordinates. Standard cells that no sample reaches stay zero and are
//! flagged as unmeasured.

use crate::error::{Error, Result};
use crate::grid::{AngularGrid, Convention};
use crate::pattern::PolarizedPattern;
use crate::scalar::{Scalar, NODE_TOLERANCE_DEG};

const DUPLICATE_RELATIVE_TOLERANCE: f64 = 1e-9;

fn agrees<T: Scalar>(a: T, b: T) -> bool {
    (a - b).abs() <= T::lit(DUPLICATE_RELATIVE_TOLERANCE) * a.abs().max(b.abs())
}

fn off_lattice(what: &str, value: f64) -> Error {
    Error::InvalidGrid(format!(
        "{what} sample {value} is not on the standard lattice"
    ))
}

/// Maps a distributed-axes pattern onto the full standard grid with the same steps.
pub fn remap_to_standard<T: Scalar>(p: &PolarizedPattern<T>) -> Result<PolarizedPattern<T>> {
    p.require(Convention::DistributedAxes)?;
    let src = p.grid();
    let out_grid = AngularGrid::<T>::standard(
        src.dtheta_deg().to_f64_lossy(),
        src.dphi_deg().to_f64_lossy(),
    )?;
    let n_theta_out = out_grid.n_theta();
    let n = out_grid.len();
    let mut et = vec![T::zero(); n];
    let mut ep = vec![T::zero(); n];
    let mut written = vec![false; n];
    let mut pole_mirrors: Vec<(usize, usize)> = Vec::new();
    let tol = T::lit(NODE_TOLERANCE_DEG);
    let half_turn = T::lit(180.0);

    for (i, &theta) in src.theta_deg().iter().enumerate() {
        let (theta_std, shift) = if theta < -tol {
            (-theta, half_turn)
        } else {
            (theta.max(T::zero()), T::zero())
        };
        let it = out_grid
            .theta_index(theta_std)
            .ok_or_else(|| off_lattice("theta", theta.to_f64_lossy()))?;
        let at_pole = it == 0 || it + 1 == n_theta_out;
        for (j, &phi) in src.phi_deg().iter().enumerate() {
            let from = src.index(i, j);
            if !p.measured()[from] {
                continue;
            }
            let jp = out_grid
                .phi_index(phi + shift)
                .ok_or_else(|| off_lattice("phi", phi.to_f64_lossy()))?;
            let to = out_grid.index(it, jp);
            let (a, b) = (p.eirp_theta_mw()[from], p.eirp_phi_mw()[from]);
            if written[to] {
                if !agrees(et[to], a) || !agrees(ep[to], b) {
                    return Err(Error::ConflictingSamples {
                        theta_deg: theta_std.to_f64_lossy(),
                        phi_deg: out_grid.phi_deg()[jp].to_f64_lossy(),
                        first: (et[to] + ep[to]).to_f64_lossy(),
                        second: (a + b).to_f64_lossy(),
                    });
                }
                continue;
            }
            et[to] = a;
            ep[to] = b;
            written[to] = true;
            if at_pole {
                // every azimuth on a pole ring is the same direction
                if let Some(jm) = out_grid.phi_index(phi + shift + half_turn) {
                    pole_mirrors.push((out_grid.index(it, jm), to));
                }
            }
        }
    }

    for (to, from) in pole_mirrors {
        if !written[to] {
            et[to] = et[from];
            ep[to] = ep[from];
            written[to] = true;
        }
    }

    Ok(PolarizedPattern::from_parts_unchecked(
        out_grid,
        et,
        ep,
        written,
        p.frequency_hz,
        p.label.clone(),
    ))
}

/// Inverse of [`remap_to_standard`]: expands a standard pattern onto the full
/// distributed-axes grid with the same steps. Coverage flags follow the source.
pub fn remap_to_distributed<T: Scalar>(p: &PolarizedPattern<T>) -> Result<PolarizedPattern<T>> {
    p.require(Convention::Standard)?;
    let src = p.grid();
    let out_grid = AngularGrid::<T>::distributed(
        src.dtheta_deg().to_f64_lossy(),
        src.dphi_deg().to_f64_lossy(),
    )?;
    let n = out_grid.len();
    let mut et = vec![T::zero(); n];
    let mut ep = vec![T::zero(); n];
    let mut measured = vec![false; n];
    for (i, &theta) in out_grid.theta_deg().iter().enumerate() {
        let (theta_std, shift) = if theta < T::zero() {
            (-theta, T::lit(180.0))
        } else {
            (theta, T::zero())
        };
        let Some(is) = src.theta_index(theta_std) else {
            continue;
        };
        for (j, &phi) in out_grid.phi_deg().iter().enumerate() {
            let Some(js) = src.phi_index(phi + shift) else {
                continue;
            };
            let (from, to) = (src.index(is, js), out_grid.index(i, j));
            et[to] = p.eirp_theta_mw()[from];
            ep[to] = p.eirp_phi_mw()[from];
            measured[to] = p.measured()[from];
        }
    }
    Ok(PolarizedPattern::from_parts_unchecked(
        out_grid,
        et,
        ep,
        measured,
        p.frequency_hz,
        p.label.clone(),
    ))
}
