//! End-to-end runs over synthesized arrays: synthesize, rotate the steered
//! beam onto boresight, sweep CVRP, and compare against a reference.

use crate::array::{synthesize_eirp, ArraySpec, ElementModel};
use crate::diagnostics::{compare_sweeps, SweepComparison};
use crate::error::Result;
use crate::grid::Direction;
use crate::metrics::{cvrp_sweep, CvrpSweep};
use crate::pattern::PolarizedPattern;
use crate::rotate::{aligning_angle, rotate_about_y};
use crate::scalar::Scalar;

/// Scan angles of the three reference beams (1, 10 and 11).
pub const REFERENCE_SCANS_DEG: [f64; 3] = [-45.0, -4.5, 0.0];

/// Failed-element sets of the reference fault study.
pub const REFERENCE_FAULTS: [&[usize]; 8] = [&[1], &[3], &[5], &[7], &[8, 7], &[14, 1], &[14, 7], &[15, 1]];

/// Synthesized EIRP pattern rotated so the steered beam sits on +z.
pub fn aligned_pattern<T: Scalar>(spec: &ArraySpec<T>, reference_trp_mw: T) -> Result<PolarizedPattern<T>> {
    let synth = synthesize_eirp(spec, reference_trp_mw)?;
    rotate_about_y(&synth.pattern, aligning_angle(spec.scan_angle_deg))
}

/// CVRP sweep around boresight of the aligned pattern.
pub fn aligned_sweep<T: Scalar>(spec: &ArraySpec<T>, reference_trp_mw: T, fovs_deg: &[T]) -> Result<CvrpSweep<T>> {
    let p = aligned_pattern(spec, reference_trp_mw)?;
    cvrp_sweep(&p, Direction::boresight(), fovs_deg)
}

/// One curve of the beam/element study.
#[derive(Debug, Clone)]
pub struct BeamCurve<T> {
    pub element: ElementModel,
    pub scan_deg: T,
    pub sweep: CvrpSweep<T>,
}

/// Aligned sweeps for every (element model, scan) pair with a common reference TRP.
pub fn beam_study<T: Scalar>(
    elements: &[ElementModel],
    scans_deg: &[T],
    reference_trp_mw: T,
    fovs_deg: &[T],
) -> Result<Vec<BeamCurve<T>>> {
    let mut out = Vec::new();
    for &element in elements {
        for &scan in scans_deg {
            let spec = ArraySpec::reference(element).with_scan(scan);
            out.push(BeamCurve {
                element,
                scan_deg: scan,
                sweep: aligned_sweep(&spec, reference_trp_mw, fovs_deg)?,
            });
        }
    }
    Ok(out)
}

/// All-on versus faulty sweeps at one scan, both at the same reference TRP.
#[derive(Debug, Clone)]
pub struct FaultStudy<T> {
    pub reference: CvrpSweep<T>,
    pub faulty: CvrpSweep<T>,
    pub comparison: SweepComparison<T>,
}

pub fn fault_study<T: Scalar>(
    element: ElementModel,
    scan_deg: T,
    failed: &[usize],
    reference_trp_mw: T,
    fovs_deg: &[T],
    threshold_db: T,
) -> Result<FaultStudy<T>> {
    let healthy = ArraySpec::reference(element).with_scan(scan_deg);
    let broken = healthy.clone().with_failed(failed.iter().copied());
    let reference = aligned_sweep(&healthy, reference_trp_mw, fovs_deg)?;
    let faulty = aligned_sweep(&broken, reference_trp_mw, fovs_deg)?;
    let comparison = compare_sweeps(&reference, &faulty, threshold_db)?;
    Ok(FaultStudy {
        reference,
        faulty,
        comparison,
    })
}
