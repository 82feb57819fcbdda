//! Two junctions at `x = −a/2` and `x = +a/2`.
//!
//! The closed-form amplitudes use the homogeneous substitution
//! `(1 + ikL) → (q + ikp)` and `(1 + k²L⁺L⁻) → (q₊q₋ + k²p₊p₋)`
//! junction by junction. Numerators and `Δ` pick up the same factor
//! `q₁₊q₁₋q₂₊q₂₋`, so every amplitude is unchanged and stays finite
//! when a length is infinite.

use std::f64::consts::TAU;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{check_wavenumber, Error, Result};
use crate::junction::JunctionParams;
use crate::linear::{junction_rows, solve_rows, Trace};
use crate::single::{single_amplitudes, OracleSolve};

/// Deviation allowed between the transfer-matrix route and the closed form.
pub const TRANSFER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleConfig {
    /// Junction at `x = −a/2`.
    pub j1: JunctionParams,
    /// Junction at `x = +a/2`.
    pub j2: JunctionParams,
    pub a: f64,
}

impl DoubleConfig {
    pub fn new(j1: JunctionParams, j2: JunctionParams, a: f64) -> Result<Self> {
        if !a.is_finite() || a <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "separation must be finite and positive, got {a}"
            )));
        }
        Ok(DoubleConfig { j1, j2, a })
    }

    /// Lengths at `L₀ = 1`, in the order `L₁⁺, L₁⁻, L₂⁺, L₂⁻`.
    pub fn from_values(l1: (f64, f64), l2: (f64, f64), a: f64) -> Result<Self> {
        Self::new(
            JunctionParams::from_values(l1.0, l1.1)?,
            JunctionParams::from_values(l2.0, l2.1)?,
            a,
        )
    }

    /// The same pair seen from the other side.
    pub fn mirrored(&self) -> Self {
        DoubleConfig {
            j1: self.j2,
            j2: self.j1,
            a: self.a,
        }
    }
}

/// Amplitudes of
/// `e^{ikx} + A e^{−ikx}`, `B e^{ikx} + C e^{−ikx}`, `D e^{ikx}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleSolution {
    pub k: f64,
    /// `A`
    pub reflected: Complex64,
    /// `B`, right-moving wave between the junctions.
    pub inner_forward: Complex64,
    /// `C`, left-moving wave between the junctions.
    pub inner_backward: Complex64,
    /// `D`
    pub transmitted: Complex64,
    /// Homogeneous `Δ`, i.e. the textbook `Δ` times `q₁₊q₁₋q₂₊q₂₋`.
    pub delta: Complex64,
    pub t2: f64,
    pub r2: f64,
}

/// `e^{iθ}` with `θ` reduced modulo `2π` first.
pub(crate) fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta.rem_euclid(TAU))
}

fn check_config(config: &DoubleConfig) -> Result<()> {
    if !config.a.is_finite() || config.a <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "separation must be finite and positive, got {}",
            config.a
        )));
    }
    Ok(())
}

struct DeltaParts {
    p1: Complex64,
    p2: Complex64,
    s1: f64,
    s2: f64,
    n1: f64,
    n2: f64,
    delta: Complex64,
}

fn delta_parts(config: &DoubleConfig, k: f64) -> DeltaParts {
    let f1 = config.j1.factors();
    let f2 = config.j2.factors();
    let ik = Complex64::new(0.0, k);
    let p1 = (f1.qp + ik * f1.pp) * (f1.qm + ik * f1.pm);
    let p2 = (f2.qp + ik * f2.pp) * (f2.qm + ik * f2.pm);
    let s1 = f1.s(k);
    let s2 = f2.s(k);
    let delta = p1 * p2 - s1 * s2 * cis(2.0 * k * config.a);
    DeltaParts {
        p1,
        p2,
        s1,
        s2,
        n1: if config.j1.is_opaque() {
            0.0
        } else {
            f1.diff()
        },
        n2: if config.j2.is_opaque() {
            0.0
        } else {
            f2.diff()
        },
        delta,
    }
}

pub fn double_amplitudes(config: &DoubleConfig, k: f64) -> Result<DoubleSolution> {
    check_wavenumber(k)?;
    check_config(config)?;
    let a = config.a;
    let d = delta_parts(config, k);
    let zero = Complex64::new(0.0, 0.0);

    if d.n1 == 0.0 {
        // Nothing enters the cavity; with a second opaque junction Δ can
        // vanish at the closed-cavity modes, so avoid dividing by it.
        let wall = single_amplitudes(&config.j1, k)?;
        let reflected = wall.reflected * cis(-k * a);
        return Ok(DoubleSolution {
            k,
            reflected,
            inner_forward: zero,
            inner_backward: zero,
            transmitted: zero,
            delta: d.delta,
            t2: 0.0,
            r2: reflected.norm_sqr(),
        });
    }

    let ik = Complex64::new(0.0, k);
    let e1 = cis(k * a);
    let e2 = cis(2.0 * k * a);
    let reflected = cis(-k * a) * (-d.p2 * d.s1 + d.p1.conj() * d.s2 * e2) / d.delta;
    let inner_forward = ik * d.n1 * d.p2 / d.delta;
    let inner_backward = -ik * d.n1 * d.s2 * e1 / d.delta;
    let transmitted = Complex64::new(-k * k * d.n1 * d.n2, 0.0) / d.delta;
    Ok(DoubleSolution {
        k,
        reflected,
        inner_forward,
        inner_backward,
        transmitted,
        delta: d.delta,
        t2: transmitted.norm_sqr(),
        r2: reflected.norm_sqr(),
    })
}

/// `k⁴(L₁⁺ − L₁⁻)²(L₂⁺ − L₂⁻)² / |Δ|²`.
pub fn t2(config: &DoubleConfig, k: f64) -> Result<f64> {
    check_wavenumber(k)?;
    check_config(config)?;
    let d = delta_parts(config, k);
    if d.n1 == 0.0 || d.n2 == 0.0 {
        return Ok(0.0);
    }
    let num = k * k * d.n1 * d.n2;
    Ok(num * num / d.delta.norm_sqr())
}

/// Solves the four junction equations for `A, B, C, D` directly.
/// Finite lengths only. A singular system (both junctions decoupled, `k`
/// on a cavity mode) yields the zero-transmission solution with the flag set.
pub fn double_oracle(config: &DoubleConfig, k: f64) -> Result<OracleSolve<DoubleSolution>> {
    check_wavenumber(k)?;
    check_config(config)?;
    let lengths = [
        config.j1.l_plus(),
        config.j1.l_minus(),
        config.j2.l_plus(),
        config.j2.l_minus(),
    ];
    if lengths.iter().any(|l| !l.is_finite()) {
        return Err(Error::InvalidParameter(
            "direct solve needs finite lengths".into(),
        ));
    }
    let [l1p, l1m, l2p, l2m] = lengths.map(|l| l.value());
    let (x0, x1) = (-0.5 * config.a, 0.5 * config.a);

    // unknowns: 0 = A, 1 = B, 2 = C, 3 = D
    let outer_left = [(None, 1.0), (Some(0), -1.0)];
    let inner = [(Some(1), 1.0), (Some(2), -1.0)];
    let outer_right = [(Some(3), 1.0)];

    let [r0, r1] = junction_rows(
        &Trace::<4>::of_waves(k, x0, &inner),
        &Trace::<4>::of_waves(k, x0, &outer_left),
        l1p,
        l1m,
    );
    let [r2, r3] = junction_rows(
        &Trace::<4>::of_waves(k, x1, &outer_right),
        &Trace::<4>::of_waves(k, x1, &inner),
        l2p,
        l2m,
    );
    let rows = [r0, r1, r2, r3];
    let solved = solve_rows(&rows, 1e-13);
    let zero = Complex64::new(0.0, 0.0);
    let [a, b, c, d] = match solved.x {
        Some(x) => x,
        None => {
            // cavity sealed off: fit A alone to the first junction's rows
            let (num, den) = rows[..2].iter().fold((zero, 0.0), |(n, d), r| {
                (
                    n - r.coeffs[0].conj() * r.constant,
                    d + r.coeffs[0].norm_sqr(),
                )
            });
            [num / den, zero, zero, zero]
        }
    };
    Ok(OracleSolve {
        solution: DoubleSolution {
            k,
            reflected: a,
            inner_forward: b,
            inner_backward: c,
            transmitted: d,
            delta: Complex64::new(f64::NAN, f64::NAN),
            t2: d.norm_sqr(),
            r2: a.norm_sqr(),
        },
        ill_conditioned: solved.ill_conditioned,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferCheck {
    pub t2_transfer: f64,
    pub t2_closed: f64,
    pub deviation: f64,
    /// `deviation < TRANSFER_TOL`
    pub consistent: bool,
}

/// Transfer matrix of a symmetric scatterer at `x0`, mapping
/// `(right-moving, left-moving)` coefficients from its left side to its right.
fn junction_transfer(j: &JunctionParams, k: f64, x0: f64) -> Result<Matrix2<Complex64>> {
    let s = single_amplitudes(j, k)?;
    let (r, t) = (s.reflected, s.transmitted);
    let local = Matrix2::new((t * t - r * r) / t, r / t, -r / t, t.inv());
    let shift = Matrix2::new(
        cis(k * x0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        cis(-k * x0),
    );
    let unshift = Matrix2::new(
        cis(-k * x0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        cis(k * x0),
    );
    Ok(unshift * local * shift)
}

/// Recomputes `T2` by composing per-junction transfer matrices and
/// compares it with the closed form.
pub fn transfer_compose_check(config: &DoubleConfig, k: f64) -> Result<TransferCheck> {
    check_wavenumber(k)?;
    check_config(config)?;
    for (name, j) in [("first", &config.j1), ("second", &config.j2)] {
        if j.is_opaque() || single_amplitudes(j, k)?.transmitted.norm() == 0.0 {
            return Err(Error::NotApplicable(format!(
                "{name} junction is opaque, no transfer matrix exists"
            )));
        }
    }
    let total = junction_transfer(&config.j2, k, 0.5 * config.a)?
        * junction_transfer(&config.j1, k, -0.5 * config.a)?;
    // each factor has unit determinant, so D = 1 / M22
    let t2_transfer = total[(1, 1)].inv().norm_sqr();
    let t2_closed = t2(config, k)?;
    let deviation = (t2_transfer - t2_closed).abs();
    Ok(TransferCheck {
        t2_transfer,
        t2_closed,
        deviation,
        consistent: deviation < TRANSFER_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cfg(l1: (f64, f64), l2: (f64, f64), a: f64) -> DoubleConfig {
        DoubleConfig::from_values(l1, l2, a).unwrap()
    }

    fn fig7() -> DoubleConfig {
        cfg((1.0, 0.5), (1.0, 0.5), 1.0)
    }

    fn fig8() -> DoubleConfig {
        cfg((2.0, -1.0), (-2.0, 1.0), 1.0)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn free_pair_transmits_everything() {
        let c = cfg((f64::INFINITY, 0.0), (f64::INFINITY, 0.0), 1.3);
        for k in [0.05, 1.0, 7.7, 123.0] {
            let s = double_amplitudes(&c, k).unwrap();
            assert!(s.reflected.norm() < 1e-15);
            assert!((s.t2 - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn opaque_first_junction_blocks() {
        let c = cfg((0.7, 0.7), (2.0, -0.3), 1.0);
        let s = double_amplitudes(&c, 1.0).unwrap();
        assert_eq!(s.transmitted, Complex64::new(0.0, 0.0));
        assert_eq!(s.t2, 0.0);
        assert!((s.r2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fig7_amplitudes_at_k2() {
        // numpy dense solve of the four junction rows on the ansatz
        let s = double_amplitudes(&fig7(), 2.0).unwrap();
        let want = [
            (s.reflected, (0.32111176588618817, -0.8380687743229588)),
            (s.inner_forward, (1.0777626849383943, 0.8852724033296461)),
            (s.inner_backward, (-0.926488208495522, -0.9446540474412608)),
            (s.transmitted, (0.4118560458144828, 0.15780545250505457)),
        ];
        for (got, (re, im)) in want {
            assert!(
                close(got, Complex64::new(re, im), 1e-12),
                "{got} vs {re}+{im}i"
            );
        }
    }

    #[test]
    fn fig7_golden_values() {
        assert!((t2(&fig7(), 0.5).unwrap() - 0.01336243914689284).abs() < 1e-13);
        assert!((t2(&fig7(), 1.0).unwrap() - 0.043724002232887846).abs() < 1e-13);
        let o = double_oracle(&fig7(), 1.0).unwrap();
        assert!((o.solution.t2 - t2(&fig7(), 1.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn fig8_peaks() {
        for k in [0.5f64.sqrt(), PI, 2.0 * PI, 3.0 * PI] {
            assert!((t2(&fig8(), k).unwrap() - 1.0).abs() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn large_separation_phase_wrap() {
        let c = cfg((1.0, 0.5), (1.0, 0.5), 50.0);
        for k in [0.3, 4.1, 17.9] {
            let closed = t2(&c, k).unwrap();
            let o = double_oracle(&c, k).unwrap().solution.t2;
            assert!((closed - o).abs() < 1e-9);
        }
    }

    #[test]
    fn transfer_route() {
        let chk = transfer_compose_check(&fig7(), 3.0).unwrap();
        assert!(chk.deviation < 1e-10, "{chk:?}");
        assert!(chk.consistent);
        let opaque = cfg((0.4, 0.4), (1.0, 0.5), 1.0);
        assert!(matches!(
            transfer_compose_check(&opaque, 1.0),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn sealed_cavity_mode_is_flagged() {
        // Dirichlet walls on both sides: cavity modes at k = nπ/a
        let c = cfg((0.0, 0.0), (0.0, 0.0), 1.0);
        let o = double_oracle(&c, PI).unwrap();
        assert!(o.ill_conditioned);
        assert_eq!(o.solution.t2, 0.0);
        assert!((o.solution.r2 - 1.0).abs() < 1e-12);
        let s = double_amplitudes(&c, PI).unwrap();
        assert!(s.delta.norm() < 1e-12);
        assert_eq!(s.t2, 0.0);
        assert!((s.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn factorized_zero_on_grid() {
        for c in [
            cfg((0.3, 0.3), (1.0, -2.0), 1.1),
            cfg((1.0, -2.0), (-0.6, -0.6), 0.7),
        ] {
            for i in 1..=100 {
                assert_eq!(t2(&c, 0.2 * i as f64).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(DoubleConfig::from_values((1.0, 0.5), (1.0, 0.5), 0.0).is_err());
        assert!(t2(&fig7(), -1.0).is_err());
        let inf = cfg((f64::INFINITY, 1.0), (1.0, 0.5), 1.0);
        assert!(double_oracle(&inf, 1.0).is_err());
    }

    fn any_length() -> impl Strategy<Value = f64> {
        prop_oneof![
            8 => -5.0f64..5.0,
            1 => Just(0.0),
            1 => Just(f64::INFINITY),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn unitarity(l in proptest::array::uniform4(any_length()), a in 0.1f64..5.0, k in 1e-3f64..30.0) {
            let c = cfg((l[0], l[1]), (l[2], l[3]), a);
            let s = double_amplitudes(&c, k).unwrap();
            prop_assert!((s.r2 + s.t2 - 1.0).abs() < 1e-12, "{s:?}");
        }

        #[test]
        fn oracle_agreement(l in proptest::array::uniform4(-5.0f64..5.0), a in 0.1f64..5.0, k in 1e-2f64..20.0) {
            let c = cfg((l[0], l[1]), (l[2], l[3]), a);
            let s = double_amplitudes(&c, k).unwrap();
            let o = double_oracle(&c, k).unwrap().solution;
            prop_assert!(close(s.reflected, o.reflected, 1e-10));
            prop_assert!(close(s.inner_forward, o.inner_forward, 1e-10));
            prop_assert!(close(s.inner_backward, o.inner_backward, 1e-10));
            prop_assert!(close(s.transmitted, o.transmitted, 1e-10));
        }

        #[test]
        fn reciprocity(l in proptest::array::uniform4(any_length()), a in 0.1f64..5.0, k in 1e-2f64..20.0) {
            let c = cfg((l[0], l[1]), (l[2], l[3]), a);
            prop_assert!((t2(&c, k).unwrap() - t2(&c.mirrored(), k).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn transfer_agreement(l in proptest::array::uniform4(-5.0f64..5.0), a in 0.1f64..5.0, k in 1e-2f64..20.0) {
            let c = cfg((l[0], l[1]), (l[2], l[3]), a);
            if let Ok(chk) = transfer_compose_check(&c, k) {
                prop_assert!(chk.consistent, "{chk:?}");
            }
        }
    }
}
