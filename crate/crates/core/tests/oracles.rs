//! Metric values against independent numerical oracles.

mod common;

use common::*;
use rand::Rng;

use cvrp::array::{synthesize_directivity, synthesize_eirp, ElementModel};
use cvrp::metrics::{cvrp, cvrp_sweep, default_fovs, prp_preset, trp, PrpPreset};
use cvrp::{Array, Direction, Grid, Mask, Pattern};

fn grid() -> Grid {
    Grid::standard(1.5, 1.5).unwrap()
}

#[test]
fn boresight_cosine_array_trp_matches_fine_quadrature() {
    let synth = synthesize_eirp(&Array::reference(ElementModel::Cosine), 1.0).unwrap();
    let (_, peak) = synth.pattern.peak();
    let p = synth.pattern.scaled(1.0 / peak).unwrap();
    let lib = trp(&p).unwrap();

    let u_max = closed_form_power(ElementModel::Cosine, 2, 8, 0.0, 0.0, 0.0);
    let oracle = fine_integral(0.1, |t, ph| closed_form_power(ElementModel::Cosine, 2, 8, 0.0, t, ph) / u_max) / (4.0 * std::f64::consts::PI);
    assert!((lib / oracle - 1.0).abs() < 5e-3, "library {lib}, oracle {oracle}");
}

#[test]
fn steered_directivity_peak_matches_fine_quadrature() {
    for element in [ElementModel::Cosine, ElementModel::Huygens] {
        for scan in [0.0, -4.5, -45.0] {
            let d = synthesize_directivity(&Array::reference(element).with_scan(scan)).unwrap();
            let radiated = fine_integral(0.1, |t, ph| closed_form_power(element, 2, 8, scan, t, ph));
            // the element pattern pulls the maximum toward broadside, so search the scan plane
            let phi = if scan < 0.0 { 180.0 } else { 0.0 };
            let u_max = (0..=9000)
                .map(|k| closed_form_power(element, 2, 8, scan, k as f64 * 0.01, phi))
                .fold(0.0, f64::max);
            let oracle_db = db(4.0 * std::f64::consts::PI * u_max / radiated);
            // the grid can only miss the maximum, by at most half a step
            assert!(
                d.peak_dbi() <= oracle_db + 0.01 && d.peak_dbi() > oracle_db - 0.1,
                "{element} scan {scan}: grid {} dBi, oracle {oracle_db} dBi",
                d.peak_dbi()
            );
        }
    }
}

#[test]
fn single_element_directivity_has_closed_form() {
    let cosine = synthesize_directivity(&Array::single(ElementModel::Cosine)).unwrap();
    let huygens = synthesize_directivity(&Array::single(ElementModel::Huygens)).unwrap();
    assert!((cosine.peak_dbi() - db(6.0)).abs() < 0.05);
    assert!((huygens.peak_dbi() - db(3.0)).abs() < 0.05);
}

#[test]
fn huygens_cap_30_matches_monte_carlo() {
    let synth = synthesize_eirp(&Array::reference(ElementModel::Huygens), 1.0).unwrap();
    let lib = cvrp(&synth.pattern, &Mask::cap(Direction::boresight(), 30.0).unwrap()).unwrap();

    let d = synthesize_directivity(&Array::reference(ElementModel::Huygens)).unwrap();
    // the closed form is scaled the same way as the library: EIRP = TRP_ref · D
    let radiated = fine_integral(0.1, |t, ph| closed_form_power(ElementModel::Huygens, 2, 8, 0.0, t, ph));
    let scale = 4.0 * std::f64::consts::PI / radiated;
    let mut r = rng(30);
    let (mean, se) = monte_carlo_cap(&mut r, [0.0, 0.0, 1.0], 30.0, 1_000_000, |v| {
        let dir = to_direction(v);
        closed_form_power(ElementModel::Huygens, 2, 8, 0.0, dir.theta_deg, dir.phi_deg) * scale
    });
    assert!(se / mean < 2e-3);
    assert!((lib / mean - 1.0).abs() < 0.01, "library {lib}, monte carlo {mean} ± {se}");
    assert!(d.peak_linear() > mean);
}

#[test]
fn random_lobes_match_monte_carlo_within_three_sigma() {
    let mut r = rng(2024);
    for case in 0..20 {
        let lobe = Lobe::random(&mut r);
        let p = lobe.pattern(grid());
        let beta: f64 = r.gen_range(15.0..120.0);
        // keep the lobe inside the cap so the integrand actually varies there;
        // over a flat region the Monte-Carlo error vanishes faster than any quadrature bias
        let center = sample_cap(&mut r, lobe.axis, beta / 2.0);
        let lib = cvrp(&p, &Mask::cap(to_direction(center), beta).unwrap()).unwrap();
        let (mean, se) = monte_carlo_cap(&mut r, center, beta, 1_000_000, |v| lobe.total(v));
        assert!(
            (lib - mean).abs() <= 3.0 * se,
            "case {case}: library {lib}, monte carlo {mean} ± {se}, cap {beta} at {center:?}, {lobe:?}"
        );
    }
}

#[test]
fn isotropic_sweep_is_flat_and_prp_is_biased() {
    let p = Pattern::uniform(grid(), 0.5, 0.5).unwrap();
    let s = cvrp_sweep(&p, Direction::boresight(), &default_fovs()).unwrap();
    for &(fov, v) in s.entries() {
        assert!((v - 1.0).abs() < 0.01, "fov {fov}: {v}");
    }
    assert!((prp_preset(&p, PrpPreset::Uhrp).unwrap() - 0.5).abs() < 5e-4);
    assert!((prp_preset(&p, PrpPreset::N75prp).unwrap() - 0.25).abs() < 2.5e-4);
    assert!((prp_preset(&p, PrpPreset::Nhprp).unwrap() - 0.5).abs() < 5e-4);
}

#[test]
fn isotropic_off_axis_caps_are_flat() {
    let p = Pattern::uniform(grid(), 1.0, 0.0).unwrap();
    let mut r = rng(7);
    for _ in 0..50 {
        let c = Direction::new(r.gen_range(0.0..180.0), r.gen_range(0.0..360.0));
        let beta = r.gen_range(3.0..180.0);
        let v = cvrp(&p, &Mask::cap(c, beta).unwrap()).unwrap();
        assert!((v - 1.0).abs() < 0.01, "cap {beta} at {c:?}: {v}");
    }
}

#[test]
fn single_cell_pattern_scales_inverse_with_cap_area() {
    let g = grid();
    let k = g.index(40, 20);
    let center = Direction::new(g.theta_deg()[40], g.phi_deg()[20]);
    let mut et = vec![0.0; g.len()];
    et[k] = 1.0;
    let p = Pattern::new(g.clone(), et, vec![0.0; g.len()], 28e9, "delta").unwrap();
    let mut products = Vec::new();
    for beta in [3.0, 9.0, 30.0, 90.0, 150.0] {
        let m = Mask::cap(center, beta).unwrap();
        products.push(cvrp(&p, &m).unwrap() * m.solid_angle_sr());
    }
    let cell = g.dtheta_rad() * g.dphi_rad() * 60f64.to_radians().sin();
    for v in products {
        assert!((v / cell - 1.0).abs() < 1e-12);
    }
}
