//! Scattering of a plane wave by one junction at the origin.

use num_complex::Complex64;

use crate::error::{check_wavenumber, Error, Result};
use crate::junction::JunctionParams;
use crate::linear::{junction_rows, solve_rows, Trace};

/// Amplitudes for `e^{ikx} + A e^{−ikx}` (x < 0) and `B e^{ikx}` (x > 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleSolution {
    pub k: f64,
    /// `A`
    pub reflected: Complex64,
    /// `B`
    pub transmitted: Complex64,
    pub t1: f64,
    pub r1: f64,
}

impl SingleSolution {
    fn new(k: f64, reflected: Complex64, transmitted: Complex64) -> Self {
        SingleSolution {
            k,
            reflected,
            transmitted,
            t1: transmitted.norm_sqr(),
            r1: reflected.norm_sqr(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncidentSide {
    Left,
    Right,
}

/// Result of a direct dense solve, with a flag for (near-)singular systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSolve<S> {
    pub solution: S,
    pub ill_conditioned: bool,
}

/// Closed-form amplitudes, evaluated with `(q + ikp)` in place of `(1 + ikL)`
/// so infinite lengths need no special handling.
pub fn single_amplitudes(params: &JunctionParams, k: f64) -> Result<SingleSolution> {
    check_wavenumber(k)?;
    let f = params.factors();
    let ik = Complex64::new(0.0, k);
    let den = (f.qp + ik * f.pp) * (f.qm + ik * f.pm);
    let reflected = -f.s(k) / den;
    let transmitted = ik * f.diff() / den;
    Ok(SingleSolution::new(k, reflected, transmitted))
}

/// `k²(L⁺ − L⁻)² / ((1 + k²L⁺²)(1 + k²L⁻²))`, homogeneous form.
pub fn t1(params: &JunctionParams, k: f64) -> Result<f64> {
    check_wavenumber(k)?;
    let f = params.factors();
    let k2 = k * k;
    let n = f.diff();
    Ok(k2 * n * n / ((f.qp * f.qp + k2 * f.pp * f.pp) * (f.qm * f.qm + k2 * f.pm * f.pm)))
}

/// Solves the two junction equations on the plane-wave ansatz directly.
/// Finite lengths only.
pub fn single_oracle(
    params: &JunctionParams,
    k: f64,
    side: IncidentSide,
) -> Result<OracleSolve<SingleSolution>> {
    check_wavenumber(k)?;
    let (lp, lm) = (params.l_plus(), params.l_minus());
    if !lp.is_finite() || !lm.is_finite() {
        return Err(Error::InvalidParameter(
            "direct solve needs finite lengths".into(),
        ));
    }
    // unknowns: 0 = reflected, 1 = transmitted
    let (left, right) = match side {
        IncidentSide::Left => (
            Trace::<2>::of_waves(k, 0.0, &[(None, 1.0), (Some(0), -1.0)]),
            Trace::<2>::of_waves(k, 0.0, &[(Some(1), 1.0)]),
        ),
        IncidentSide::Right => (
            Trace::<2>::of_waves(k, 0.0, &[(Some(1), -1.0)]),
            Trace::<2>::of_waves(k, 0.0, &[(None, -1.0), (Some(0), 1.0)]),
        ),
    };
    let rows = junction_rows(&right, &left, lp.value(), lm.value());
    let solved = solve_rows(&rows, 1e-12);
    let solution = match solved.x {
        Some([r, t]) => SingleSolution::new(k, r, t),
        None => SingleSolution::new(k, Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)),
    };
    Ok(OracleSolve {
        solution,
        ill_conditioned: solved.ill_conditioned,
    })
}
