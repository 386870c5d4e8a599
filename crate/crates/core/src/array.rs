//! Planar phased-array synthesis: element patterns, progressive-phase steering,
//! element failures, directivity, and TRP-referenced EIRP.
//!
//! Geometry: the array lies in the xy-plane with broadside along +z. Columns
//! run along x (the scan axis), rows along y, both at `spacing_wl`
//! wavelengths. Elements are numbered 1-based, row-major: elements
//! `1..=cols` form the first row, `cols+1..=2*cols` the second, and so on.
//! A positive scan angle tilts the beam toward +x (φ = 0), a negative one
//! toward −x (φ = 180°).

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grid::AngularGrid;
use crate::pattern::PolarizedPattern;
use crate::scalar::{deg_to_rad, sin_polar_deg, CompensatedSum, Scalar};

/// Grid step (degrees) of the reference synthesis grid.
pub const REFERENCE_STEP_DEG: f64 = 1.5;
pub const REFERENCE_FREQUENCY_HZ: f64 = 28e9;
pub const MAX_SCAN_DEG: f64 = 45.0;
/// Angular spacing between adjacent beams of the reference beam set.
pub const BEAM_STEP_DEG: f64 = 4.5;
pub const BEAM_COUNT: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementModel {
    /// Field `cos θ` in the front hemisphere, nothing behind.
    Cosine,
    /// Cardioid field `(1 + cos θ) / 2`.
    Huygens,
}

impl ElementModel {
    pub fn name(self) -> &'static str {
        match self {
            ElementModel::Cosine => "cosine",
            ElementModel::Huygens => "huygens",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "cosine" | "cs" => Some(ElementModel::Cosine),
            "huygens" | "hs" => Some(ElementModel::Huygens),
            _ => None,
        }
    }
}

impl fmt::Display for ElementModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Far-field amplitude of a single element at polar angle `theta_deg` from broadside.
pub fn element_field<T: Scalar>(model: ElementModel, theta_deg: T) -> T {
    match model {
        ElementModel::Cosine => {
            if theta_deg >= T::lit(90.0) {
                T::zero()
            } else {
                deg_to_rad(theta_deg).cos()
            }
        }
        ElementModel::Huygens => (T::one() + deg_to_rad(theta_deg).cos()) / T::lit(2.0),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArraySpec<T> {
    pub rows: usize,
    pub cols: usize,
    pub spacing_wl: T,
    pub element: ElementModel,
    pub scan_angle_deg: T,
    /// 1-based, row-major element indices with zero excitation.
    pub failed_elements: BTreeSet<usize>,
    pub frequency_hz: f64,
}

impl<T: Scalar> ArraySpec<T> {
    /// The 2 × 8, half-wavelength, 28 GHz reference array at broadside.
    pub fn reference(element: ElementModel) -> Self {
        Self {
            rows: 2,
            cols: 8,
            spacing_wl: T::lit(0.5),
            element,
            scan_angle_deg: T::zero(),
            failed_elements: BTreeSet::new(),
            frequency_hz: REFERENCE_FREQUENCY_HZ,
        }
    }

    /// A lone element; its directivity is the element's own.
    pub fn single(element: ElementModel) -> Self {
        Self {
            rows: 1,
            cols: 1,
            ..Self::reference(element)
        }
    }

    pub fn with_scan(mut self, scan_angle_deg: T) -> Self {
        self.scan_angle_deg = scan_angle_deg;
        self
    }

    /// Beam `k` ∈ 1..=21 of the reference set, starting at −45° in 4.5° steps.
    pub fn with_beam(self, beam: usize) -> Result<Self> {
        Ok(self.with_scan(T::lit(beam_scan_deg(beam)?)))
    }

    pub fn with_failed(mut self, elements: impl IntoIterator<Item = usize>) -> Self {
        self.failed_elements = elements.into_iter().collect();
        self
    }

    pub fn element_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidArray("array needs at least one row and column".into()));
        }
        if !(self.spacing_wl > T::zero()) {
            return Err(Error::InvalidArray(format!(
                "element spacing must be positive, got {}",
                self.spacing_wl
            )));
        }
        let max = T::lit(MAX_SCAN_DEG);
        if !(self.scan_angle_deg >= -max && self.scan_angle_deg <= max) {
            return Err(Error::InvalidArray(format!(
                "scan angle {} outside [-45, 45]",
                self.scan_angle_deg
            )));
        }
        let n = self.element_count();
        if let Some(bad) = self.failed_elements.iter().find(|&&e| e == 0 || e > n) {
            return Err(Error::InvalidArray(format!(
                "failed element {bad} outside 1..={n}"
            )));
        }
        Ok(())
    }

    /// Short provenance label, e.g. `cosine 2x8 scan -45 failed 7,14`.
    pub fn describe(&self) -> String {
        let mut s = format!(
            "{} {}x{} scan {}",
            self.element, self.rows, self.cols, self.scan_angle_deg
        );
        if self.failed_elements.is_empty() {
            s.push_str(" all-on");
        } else {
            let list: Vec<String> = self.failed_elements.iter().map(|e| e.to_string()).collect();
            s.push_str(" failed ");
            s.push_str(&list.join(","));
        }
        s
    }

    /// (x, y) position in wavelengths of the 0-based element index.
    fn position_wl(&self, index: usize) -> (T, T) {
        let (r, c) = (index / self.cols, index % self.cols);
        (
            T::from_usize_lossy(c) * self.spacing_wl,
            T::from_usize_lossy(r) * self.spacing_wl,
        )
    }
}

/// Scan angle of beam `k` ∈ 1..=21.
pub fn beam_scan_deg(beam: usize) -> Result<f64> {
    if !(1..=BEAM_COUNT).contains(&beam) {
        return Err(Error::InvalidArray(format!("beam {beam} outside 1..={BEAM_COUNT}")));
    }
    Ok(-MAX_SCAN_DEG + BEAM_STEP_DEG * (beam - 1) as f64)
}

/// Unit-magnitude progressive-phase weights, one per element in row-major
/// order; failed elements get zero.
pub fn steering_weights<T: Scalar>(spec: &ArraySpec<T>) -> Result<Vec<Complex<T>>> {
    spec.validate()?;
    let sin_scan = deg_to_rad(spec.scan_angle_deg).sin();
    let two_pi = T::lit(2.0) * T::PI();
    Ok((0..spec.element_count())
        .map(|e| {
            if spec.failed_elements.contains(&(e + 1)) {
                return Complex::new(T::zero(), T::zero());
            }
            let (x, _) = spec.position_wl(e);
            Complex::from_polar(T::one(), -two_pi * x * sin_scan)
        })
        .collect())
}

/// Linear directivity on a grid (integrates to 4π under the grid quadrature).
#[derive(Debug, Clone, PartialEq)]
pub struct Directivity<T> {
    pub grid: AngularGrid<T>,
    pub linear: Vec<T>,
}

impl<T: Scalar> Directivity<T> {
    pub fn dbi(&self) -> Vec<T> {
        self.linear.iter().map(|&d| linear_to_db(d)).collect()
    }

    pub fn peak_linear(&self) -> T {
        self.linear.iter().copied().fold(T::zero(), T::max)
    }

    pub fn peak_dbi(&self) -> T {
        linear_to_db(self.peak_linear())
    }
}

fn linear_to_db<T: Scalar>(v: T) -> T {
    if v > T::zero() {
        T::lit(10.0) * v.log10()
    } else {
        T::neg_infinity()
    }
}

/// Radiation intensity `|Σ w_e f(θ) e^{j k r_e·û}|²` at every grid node.
pub fn radiation_intensity<T: Scalar>(spec: &ArraySpec<T>, grid: &AngularGrid<T>) -> Result<Vec<T>> {
    let weights = steering_weights(spec)?;
    let active: Vec<(Complex<T>, T, T)> = weights
        .iter()
        .enumerate()
        .filter(|(_, w)| w.norm_sqr() > T::zero())
        .map(|(e, &w)| {
            let (x, y) = spec.position_wl(e);
            (w, x, y)
        })
        .collect();
    if active.is_empty() {
        return Err(Error::AllElementsFailed);
    }
    let two_pi = T::lit(2.0) * T::PI();
    let mut out = Vec::with_capacity(grid.len());
    for &theta in grid.theta_deg() {
        let f = element_field(spec.element, theta);
        let st = deg_to_rad(theta).sin();
        for &phi in grid.phi_deg() {
            if f == T::zero() {
                out.push(T::zero());
                continue;
            }
            let (sp, cp) = deg_to_rad(phi).sin_cos();
            let (ux, uy) = (st * cp, st * sp);
            let mut af = Complex::new(T::zero(), T::zero());
            for &(w, x, y) in &active {
                af = af + w * Complex::from_polar(T::one(), two_pi * (x * ux + y * uy));
            }
            out.push(af.norm_sqr() * f * f);
        }
    }
    Ok(out)
}

/// Directivity of the array on the reference 1.5° standard grid.
pub fn synthesize_directivity<T: Scalar>(spec: &ArraySpec<T>) -> Result<Directivity<T>> {
    let grid = AngularGrid::standard(REFERENCE_STEP_DEG, REFERENCE_STEP_DEG)?;
    synthesize_directivity_on(spec, &grid)
}

/// Directivity of the array on an arbitrary standard grid.
pub fn synthesize_directivity_on<T: Scalar>(spec: &ArraySpec<T>, grid: &AngularGrid<T>) -> Result<Directivity<T>> {
    let u = radiation_intensity(spec, grid)?;
    let mut acc = CompensatedSum::new();
    for (i, &theta) in grid.theta_deg().iter().enumerate() {
        let s = sin_polar_deg(theta);
        for j in 0..grid.n_phi() {
            acc.add(u[grid.index(i, j)] * s);
        }
    }
    let radiated = acc.total() * grid.dtheta_rad() * grid.dphi_rad();
    if !(radiated > T::zero()) {
        return Err(Error::AllElementsFailed);
    }
    let scale = T::lit(4.0) * T::PI() / radiated;
    Ok(Directivity {
        grid: grid.clone(),
        linear: u.into_iter().map(|v| v * scale).collect(),
    })
}

/// `EIRP[dBm] = TRP_ref[dBm] + D[dBi]`, evaluated in linear units. All power
/// is assigned to the θ polarization.
pub fn eirp_from_directivity<T: Scalar>(
    directivity: &Directivity<T>,
    reference_trp_mw: T,
    frequency_hz: f64,
    label: impl Into<String>,
) -> Result<PolarizedPattern<T>> {
    if !(reference_trp_mw > T::zero()) || !reference_trp_mw.is_finite() {
        return Err(Error::NonPositiveReference(reference_trp_mw.to_f64_lossy()));
    }
    let et = directivity.linear.iter().map(|&d| d * reference_trp_mw).collect();
    let n = directivity.linear.len();
    PolarizedPattern::new(directivity.grid.clone(), et, vec![T::zero(); n], frequency_hz, label)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisResult<T> {
    pub directivity_dbi: Vec<T>,
    pub pattern: PolarizedPattern<T>,
    pub spec: ArraySpec<T>,
    pub reference_trp_mw: T,
}

/// Synthesizes the array and scales its directivity to EIRP with a reference TRP.
///
/// Failed elements are not compensated by re-weighting the survivors; the
/// radiated power is pinned solely by `reference_trp_mw`.
pub fn synthesize_eirp<T: Scalar>(spec: &ArraySpec<T>, reference_trp_mw: T) -> Result<SynthesisResult<T>> {
    if !(reference_trp_mw > T::zero()) || !reference_trp_mw.is_finite() {
        return Err(Error::NonPositiveReference(reference_trp_mw.to_f64_lossy()));
    }
    let directivity = synthesize_directivity(spec)?;
    let pattern = eirp_from_directivity(&directivity, reference_trp_mw, spec.frequency_hz, spec.describe())?;
    Ok(SynthesisResult {
        directivity_dbi: directivity.dbi(),
        pattern,
        spec: spec.clone(),
        reference_trp_mw,
    })
}
