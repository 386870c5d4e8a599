#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cvrp::array::ElementModel;
use cvrp::{Direction, Grid, Pattern};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit(theta_deg: f64, phi_deg: f64) -> [f64; 3] {
    let (t, p) = (theta_deg.to_radians(), phi_deg.to_radians());
    [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]
}

pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn to_direction(v: [f64; 3]) -> Direction {
    let theta = v[2].clamp(-1.0, 1.0).acos().to_degrees();
    let phi = v[1].atan2(v[0]).to_degrees().rem_euclid(360.0);
    Direction::new(theta, phi)
}

/// Smooth test pattern: floor plus a von Mises lobe, split over polarizations.
#[derive(Debug, Clone, Copy)]
pub struct Lobe {
    pub axis: [f64; 3],
    pub kappa: f64,
    pub floor_mw: f64,
    pub peak_mw: f64,
    pub theta_share: f64,
}

impl Lobe {
    pub fn random(r: &mut impl Rng) -> Self {
        let z: f64 = r.gen_range(-1.0..1.0);
        let az: f64 = r.gen_range(0.0..2.0 * PI);
        let s = (1.0 - z * z).sqrt();
        Lobe {
            axis: [s * az.cos(), s * az.sin(), z],
            kappa: r.gen_range(1.0..12.0),
            floor_mw: r.gen_range(0.05..1.0),
            peak_mw: r.gen_range(1.0..20.0),
            theta_share: r.gen_range(0.0..1.0),
        }
    }

    pub fn total(&self, v: [f64; 3]) -> f64 {
        self.floor_mw + self.peak_mw * (self.kappa * (dot(v, self.axis) - 1.0)).exp()
    }

    pub fn pattern(&self, grid: Grid) -> Pattern {
        Pattern::from_fn(grid, 28e9, "lobe", |t, p| {
            let e = self.total(unit(t, p));
            (e * self.theta_share, e * (1.0 - self.theta_share))
        })
        .unwrap()
    }
}

/// Random on-grid values, no spatial structure.
pub fn noise_pattern(r: &mut impl Rng, grid: Grid) -> Pattern {
    let n = grid.len();
    let et: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..10.0)).collect();
    let ep: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..10.0)).collect();
    Pattern::new(grid, et, ep, 28e9, "noise").unwrap()
}

/// Uniform direction inside the cap of half-angle `beta_deg` about `center`.
pub fn sample_cap(r: &mut impl Rng, center: [f64; 3], beta_deg: f64) -> [f64; 3] {
    let cos_beta = beta_deg.to_radians().cos();
    let u: f64 = r.gen_range(cos_beta..=1.0);
    let az: f64 = r.gen_range(0.0..2.0 * PI);
    let s = (1.0 - u * u).max(0.0).sqrt();
    // orthonormal frame around the center
    let helper = if center[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
    let e1 = normalize(cross(helper, center));
    let e2 = cross(center, e1);
    let mut v = [0.0; 3];
    for k in 0..3 {
        v[k] = u * center[k] + s * (az.cos() * e1[k] + az.sin() * e2[k]);
    }
    v
}

pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = dot(v, v).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Monte-Carlo mean of `f` over a cap: (mean, standard error).
pub fn monte_carlo_cap(
    r: &mut impl Rng,
    center: [f64; 3],
    beta_deg: f64,
    samples: usize,
    f: impl Fn([f64; 3]) -> f64,
) -> (f64, f64) {
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..samples {
        let v = f(sample_cap(r, center, beta_deg));
        s1 += v;
        s2 += v * v;
    }
    let n = samples as f64;
    let mean = s1 / n;
    let var = (s2 / n - mean * mean).max(0.0) * n / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Closed-form power pattern |AF · element|² of a uniform rows × cols array
/// with half-wavelength spacing, steered in the xz-plane, all elements on.
pub fn closed_form_power(element: ElementModel, rows: usize, cols: usize, scan_deg: f64, theta_deg: f64, phi_deg: f64) -> f64 {
    let (t, p) = (theta_deg.to_radians(), phi_deg.to_radians());
    let e = match element {
        ElementModel::Cosine => {
            if theta_deg < 90.0 {
                t.cos()
            } else {
                0.0
            }
        }
        ElementModel::Huygens => (1.0 + t.cos()) / 2.0,
    };
    let psi_x = PI * (t.sin() * p.cos() - scan_deg.to_radians().sin());
    let psi_y = PI * t.sin() * p.sin();
    let dirichlet = |psi: f64, n: usize| {
        let den = (psi / 2.0).sin();
        if den.abs() < 1e-12 {
            n as f64
        } else {
            (n as f64 * psi / 2.0).sin() / den
        }
    };
    let af = dirichlet(psi_x, cols) * dirichlet(psi_y, rows);
    (af * e).powi(2)
}

/// Midpoint-rule integral over the sphere with `step_deg` cells.
pub fn fine_integral(step_deg: f64, f: impl Fn(f64, f64) -> f64) -> f64 {
    let n_t = (180.0 / step_deg).round() as usize;
    let n_p = (360.0 / step_deg).round() as usize;
    let d = step_deg.to_radians();
    let mut total = 0.0;
    for i in 0..n_t {
        let t = (i as f64 + 0.5) * step_deg;
        let s = t.to_radians().sin();
        let mut ring = 0.0;
        for j in 0..n_p {
            ring += f(t, (j as f64 + 0.5) * step_deg);
        }
        total += ring * s;
    }
    total * d * d
}

pub fn db(x: f64) -> f64 {
    10.0 * x.log10()
}
