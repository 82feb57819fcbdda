//! Single parity-invariant point interactions.
//!
//! Each junction is a point on the torus `(θ₊, θ₋)`. The physics only
//! ever needs the two extended lengths `L⁽±⁾ = L₀·cot(θ±/2)`, which live
//! on the projective line and are stored as normalized pairs `(p, q)`
//! with `L = p / q`.

use std::f64::consts::TAU;
use std::fmt;

use crate::error::{Error, Result};

/// Tolerance on canonical coordinates for all exact-class predicates.
pub const CLASS_TOL: f64 = 1e-12;

/// A real length that may be infinite, kept as a homogeneous pair.
///
/// Canonical form: `p² + q² = 1`, `q ≥ 0`, and `(1, 0)` for the single
/// point at infinity (`+∞` and `−∞` are the same point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedLength {
    p: f64,
    q: f64,
}

impl ExtendedLength {
    pub const INFINITE: ExtendedLength = ExtendedLength { p: 1.0, q: 0.0 };
    pub const ZERO: ExtendedLength = ExtendedLength { p: 0.0, q: 1.0 };

    /// Builds from any nonzero homogeneous pair; only the ratio matters.
    pub fn from_homogeneous(p: f64, q: f64) -> Result<Self> {
        if !p.is_finite() || !q.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "homogeneous length ({p}, {q}) is not finite"
            )));
        }
        if p == 0.0 && q == 0.0 {
            return Err(Error::InvalidParameter(
                "homogeneous length (0, 0) is not a point".into(),
            ));
        }
        let (p, q) = if q < 0.0 { (-p, -q) } else { (p, q) };
        if q == 0.0 {
            return Ok(Self::INFINITE);
        }
        let norm = p.hypot(q);
        Ok(ExtendedLength {
            p: p / norm,
            q: q / norm,
        })
    }

    /// `±∞` maps to the point at infinity; NaN is rejected.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() {
            return Err(Error::InvalidParameter("length is NaN".into()));
        }
        if value.is_infinite() {
            return Ok(Self::INFINITE);
        }
        Self::from_homogeneous(value, 1.0)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn is_finite(&self) -> bool {
        self.q != 0.0
    }

    /// `p / q`, or `+∞` at the point at infinity.
    pub fn value(&self) -> f64 {
        if self.is_finite() {
            self.p / self.q
        } else {
            f64::INFINITY
        }
    }

    pub fn negated(&self) -> Self {
        if self.is_finite() {
            ExtendedLength {
                p: -self.p,
                q: self.q,
            }
        } else {
            *self
        }
    }

    /// Projective closeness of canonical coordinates. Points just below
    /// the `q = 0` seam (`p ≈ −1`) count as close to infinity.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let direct = (self.p - other.p).abs().max((self.q - other.q).abs());
        let flipped = (self.p + other.p).abs().max((self.q + other.q).abs());
        direct.min(flipped) <= tol
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.approx_eq(&Self::ZERO, tol)
    }

    pub fn is_infinite(&self, tol: f64) -> bool {
        self.approx_eq(&Self::INFINITE, tol)
    }

    /// Half-angle `θ/2 ∈ [0, π)` with `cot(θ/2) = L / l0`.
    fn half_angle(&self, l0: f64) -> f64 {
        (self.q * l0).atan2(self.p)
    }
}

impl fmt::Display for ExtendedLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "{}", self.value())
        } else {
            f.write_str("inf")
        }
    }
}

fn snap(x: f64) -> f64 {
    if x.abs() < f64::EPSILON {
        0.0
    } else {
        x
    }
}

fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid may round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

fn length_from_angle(theta: f64, l0: f64) -> ExtendedLength {
    let half = 0.5 * theta;
    let (s, c) = half.sin_cos();
    ExtendedLength::from_homogeneous(snap(l0 * c), snap(s))
        .expect("sin and cos of a finite angle never vanish together")
}

fn check_scale(l0: f64) -> Result<()> {
    if !l0.is_finite() || l0 <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "scale length L0 must be finite and positive, got {l0}"
        )));
    }
    Ok(())
}

/// One parity-invariant junction: torus angles, scale `L₀`, and the
/// derived extended lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JunctionParams {
    theta_plus: f64,
    theta_minus: f64,
    l0: f64,
    l_plus: ExtendedLength,
    l_minus: ExtendedLength,
}

impl JunctionParams {
    /// Angles are reduced into `[0, 2π)`. `θ = 0` gives the infinite
    /// length, `θ = π` gives zero.
    pub fn from_angles(theta_plus: f64, theta_minus: f64, l0: f64) -> Result<Self> {
        if !theta_plus.is_finite() || !theta_minus.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "angles must be finite, got ({theta_plus}, {theta_minus})"
            )));
        }
        check_scale(l0)?;
        let theta_plus = reduce_angle(theta_plus);
        let theta_minus = reduce_angle(theta_minus);
        Ok(JunctionParams {
            theta_plus,
            theta_minus,
            l0,
            l_plus: length_from_angle(theta_plus, l0),
            l_minus: length_from_angle(theta_minus, l0),
        })
    }

    /// Inverse of the cotangent map: `θ = 2·arccot(L / L₀)`.
    pub fn from_lengths(l_plus: ExtendedLength, l_minus: ExtendedLength, l0: f64) -> Result<Self> {
        check_scale(l0)?;
        Ok(JunctionParams {
            theta_plus: 2.0 * l_plus.half_angle(l0),
            theta_minus: 2.0 * l_minus.half_angle(l0),
            l0,
            l_plus,
            l_minus,
        })
    }

    /// Convenience for plain (possibly infinite) values at `L₀ = 1`.
    pub fn from_values(l_plus: f64, l_minus: f64) -> Result<Self> {
        Self::from_lengths(
            ExtendedLength::new(l_plus)?,
            ExtendedLength::new(l_minus)?,
            1.0,
        )
    }

    pub fn theta_plus(&self) -> f64 {
        self.theta_plus
    }

    pub fn theta_minus(&self) -> f64 {
        self.theta_minus
    }

    pub fn l0(&self) -> f64 {
        self.l0
    }

    pub fn l_plus(&self) -> ExtendedLength {
        self.l_plus
    }

    pub fn l_minus(&self) -> ExtendedLength {
        self.l_minus
    }

    /// Overall U(1) phase `ξ = (θ₊ + θ₋) / 2`.
    pub fn xi(&self) -> f64 {
        0.5 * (self.theta_plus + self.theta_minus)
    }

    /// `σ₁` rotation angle `ζ = (θ₊ − θ₋) / 2`.
    pub fn zeta(&self) -> f64 {
        0.5 * (self.theta_plus - self.theta_minus)
    }

    /// Both lengths sign-flipped, same `L₀`.
    pub fn negated(&self) -> Self {
        Self::from_lengths(self.l_plus.negated(), self.l_minus.negated(), self.l0)
            .expect("scale already validated")
    }

    /// Even and odd channel lengths exchanged.
    pub fn swapped(&self) -> Self {
        Self::from_lengths(self.l_minus, self.l_plus, self.l0).expect("scale already validated")
    }

    /// `L⁺ = L⁻`: the two sides decouple and nothing is transmitted.
    pub fn is_opaque(&self) -> bool {
        self.l_plus.approx_eq(&self.l_minus, CLASS_TOL)
    }

    /// Free or phase-inverting junction: transmits everything at every `k`.
    pub fn is_transparent(&self) -> bool {
        matches!(
            self.classify(),
            BoundaryClass::Free | BoundaryClass::PhaseInversion
        )
    }

    pub fn classify(&self) -> BoundaryClass {
        classify_junction(self)
    }

    /// Homogeneous pieces used by the amplitude formulas.
    pub(crate) fn factors(&self) -> Factors {
        Factors {
            pp: self.l_plus.p,
            qp: self.l_plus.q,
            pm: self.l_minus.p,
            qm: self.l_minus.q,
        }
    }
}

/// Homogeneous coordinates of both channels of one junction.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Factors {
    pub pp: f64,
    pub qp: f64,
    pub pm: f64,
    pub qm: f64,
}

impl Factors {
    /// `q₊q₋`, the homogeneous stand-in for 1.
    pub fn qq(&self) -> f64 {
        self.qp * self.qm
    }

    /// `p₊p₋`, stands in for `L⁺L⁻`.
    pub fn pp_prod(&self) -> f64 {
        self.pp * self.pm
    }

    /// `p₊q₋ − p₋q₊`, stands in for `L⁺ − L⁻`.
    pub fn diff(&self) -> f64 {
        self.pp * self.qm - self.pm * self.qp
    }

    /// `p₊q₋ + p₋q₊`, stands in for `L⁺ + L⁻`.
    pub fn sum(&self) -> f64 {
        self.pp * self.qm + self.pm * self.qp
    }

    /// `q₊q₋ + k²p₊p₋`, stands in for `1 + k²L⁺L⁻`.
    pub fn s(&self, k: f64) -> f64 {
        self.qq() + k * k * self.pp_prod()
    }

    /// Largest finite `|L|`, zero when none.
    pub fn max_finite_length(&self) -> f64 {
        let mut m: f64 = 0.0;
        if self.qp != 0.0 {
            m = m.max((self.pp / self.qp).abs());
        }
        if self.qm != 0.0 {
            m = m.max((self.pm / self.qm).abs());
        }
        m
    }
}

/// Named families of parity-invariant junction conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryClass {
    /// `L⁺ = L⁻ = L` finite: Robin walls on both sides, no current through.
    Decoupling { length: f64 },
    /// Both lengths infinite: `ψ′(±0) = 0`.
    Neumann,
    /// Both lengths zero: `ψ(±0) = 0`.
    Dirichlet,
    /// `L⁺ = ∞`, `L⁻ = 0`: no interaction at all.
    Free,
    /// `L⁺ = 0`, `L⁻ = ∞`: ψ and ψ′ change sign across the point.
    PhaseInversion,
    /// `L⁻ = 0`, `L⁺` finite and nonzero: a δ potential of strength `−2/L⁺`.
    DiracDelta { l_plus: f64 },
    Generic {
        l_plus: ExtendedLength,
        l_minus: ExtendedLength,
    },
}

impl BoundaryClass {
    pub fn name(&self) -> &'static str {
        match self {
            BoundaryClass::Decoupling { .. } => "Decoupling",
            BoundaryClass::Neumann => "Neumann",
            BoundaryClass::Dirichlet => "Dirichlet",
            BoundaryClass::Free => "Free",
            BoundaryClass::PhaseInversion => "PhaseInversion",
            BoundaryClass::DiracDelta { .. } => "DiracDelta",
            BoundaryClass::Generic { .. } => "Generic",
        }
    }
}

impl fmt::Display for BoundaryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryClass::Decoupling { length } => write!(f, "Decoupling (L = {length})"),
            BoundaryClass::DiracDelta { l_plus } => write!(f, "DiracDelta (L+ = {l_plus})"),
            BoundaryClass::Generic { l_plus, l_minus } => {
                write!(f, "Generic (L+ = {l_plus}, L- = {l_minus})")
            }
            other => f.write_str(other.name()),
        }
    }
}

pub fn classify_junction(params: &JunctionParams) -> BoundaryClass {
    let lp = params.l_plus;
    let lm = params.l_minus;
    let (p_inf, m_inf) = (lp.is_infinite(CLASS_TOL), lm.is_infinite(CLASS_TOL));
    let (p_zero, m_zero) = (lp.is_zero(CLASS_TOL), lm.is_zero(CLASS_TOL));

    if p_inf && m_inf {
        BoundaryClass::Neumann
    } else if p_zero && m_zero {
        BoundaryClass::Dirichlet
    } else if p_inf && m_zero {
        BoundaryClass::Free
    } else if p_zero && m_inf {
        BoundaryClass::PhaseInversion
    } else if lp.approx_eq(&lm, CLASS_TOL) {
        BoundaryClass::Decoupling { length: lp.value() }
    } else if m_zero && !p_inf {
        BoundaryClass::DiracDelta { l_plus: lp.value() }
    } else {
        BoundaryClass::Generic {
            l_plus: lp,
            l_minus: lm,
        }
    }
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn jl(lp: f64, lm: f64) -> JunctionParams {
        JunctionParams::from_values(lp, lm).unwrap()
    }

    #[test]
    fn dirichlet_from_half_turns() {
        let j = JunctionParams::from_angles(PI, PI, 1.0).unwrap();
        assert_eq!(j.l_plus(), ExtendedLength::ZERO);
        assert_eq!(j.l_minus(), ExtendedLength::ZERO);
        assert_eq!(j.l_plus().value(), 0.0);
        assert_eq!(j.classify(), BoundaryClass::Dirichlet);
    }

    #[test]
    fn quarter_turns_give_unit_lengths() {
        let j = JunctionParams::from_angles(FRAC_PI_2, FRAC_PI_2, 1.0).unwrap();
        assert!((j.l_plus().value() - 1.0).abs() < 1e-15);
        assert!((j.l_minus().value() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn free_junction_from_angles() {
        let j = JunctionParams::from_angles(0.0, PI, 1.0).unwrap();
        assert!(!j.l_plus().is_finite());
        assert_eq!(j.l_plus().q(), 0.0);
        assert_eq!(j.l_minus().value(), 0.0);
        assert_eq!(j.classify(), BoundaryClass::Free);
    }

    #[test]
    fn lengths_to_angles() {
        let j = jl(0.0, 0.0);
        assert!((j.theta_plus() - PI).abs() < 1e-15);
        assert!((j.theta_minus() - PI).abs() < 1e-15);

        let j = jl(f64::INFINITY, f64::NEG_INFINITY);
        assert_eq!(j.theta_plus(), 0.0);
        assert_eq!(j.theta_minus(), 0.0);

        // arccot(0.5) = atan(2)
        let j = jl(1.0, 0.5);
        assert!((j.theta_plus() - FRAC_PI_2).abs() < 1e-15);
        assert!((j.theta_minus() - 2.0 * 2f64.atan()).abs() < 1e-15);
        let back = JunctionParams::from_angles(j.theta_plus(), j.theta_minus(), 1.0).unwrap();
        assert!((back.l_plus().value() - 1.0).abs() < 1e-12);
        assert!((back.l_minus().value() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn non_finite_inputs_rejected() {
        assert!(JunctionParams::from_angles(f64::NAN, 0.0, 1.0).is_err());
        assert!(JunctionParams::from_angles(0.0, f64::INFINITY, 1.0).is_err());
        assert!(JunctionParams::from_angles(0.0, 0.0, 0.0).is_err());
        assert!(JunctionParams::from_angles(0.0, 0.0, -1.0).is_err());
        assert!(ExtendedLength::new(f64::NAN).is_err());
        assert!(ExtendedLength::from_homogeneous(0.0, 0.0).is_err());
    }

    #[test]
    fn classification_table() {
        assert_eq!(
            jl(0.7, 0.7).classify(),
            BoundaryClass::Decoupling { length: 0.7 }
        );
        let j = JunctionParams::from_angles(PI, 0.0, 1.0).unwrap();
        assert_eq!(j.classify(), BoundaryClass::PhaseInversion);
        assert_eq!(
            jl(1.0, 0.0).classify(),
            BoundaryClass::DiracDelta { l_plus: 1.0 }
        );
        assert_eq!(
            jl(f64::INFINITY, f64::INFINITY).classify(),
            BoundaryClass::Neumann
        );
        assert!(matches!(
            jl(1.0, 0.5).classify(),
            BoundaryClass::Generic { .. }
        ));
        assert!(matches!(
            jl(1.0, 1.0 + 1e-9).classify(),
            BoundaryClass::Generic { .. }
        ));
        assert!(matches!(
            jl(f64::INFINITY, 2.0).classify(),
            BoundaryClass::Generic { .. }
        ));
    }

    #[test]
    fn scale_invariant_corners() {
        let cases = [
            ((0.0, 0.0), BoundaryClass::Neumann),
            ((PI, PI), BoundaryClass::Dirichlet),
            ((0.0, PI), BoundaryClass::Free),
            ((PI, 0.0), BoundaryClass::PhaseInversion),
        ];
        for ((tp, tm), class) in cases {
            let j = JunctionParams::from_angles(tp, tm, 1.0).unwrap();
            assert_eq!(j.classify(), class);
        }
    }

    #[test]
    fn huge_negative_length_is_near_infinity() {
        let big = ExtendedLength::new(-1e14).unwrap();
        assert!(big.is_infinite(CLASS_TOL));
        assert_eq!(ExtendedLength::INFINITE.negated(), ExtendedLength::INFINITE);
    }

    #[test]
    fn xi_zeta_recover_angles() {
        let j = JunctionParams::from_angles(1.2, 0.4, 1.0).unwrap();
        assert!((j.xi() + j.zeta() - 1.2).abs() < 1e-15);
        assert!((j.xi() - j.zeta() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn scale_l0_enters_cot_map() {
        let j = JunctionParams::from_angles(FRAC_PI_2, PI / 3.0, 2.5).unwrap();
        assert!((j.l_plus().value() - 2.5).abs() < 1e-14);
        assert!((j.l_minus().value() - 2.5 * 3f64.sqrt()).abs() < 1e-13);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn homogeneous_scale_invariance(p in -1e3f64..1e3, q in -1e3f64..1e3, c in 1e-3f64..1e3) {
            prop_assume!(p.abs() + q.abs() > 1e-6);
            let a = ExtendedLength::from_homogeneous(p, q).unwrap();
            let b = ExtendedLength::from_homogeneous(c * p, c * q).unwrap();
            prop_assert!(a.approx_eq(&b, 1e-15));
            prop_assert!(a.q() >= 0.0);
            prop_assert!((a.p().hypot(a.q()) - 1.0).abs() < 1e-15);
        }

        #[test]
        fn angle_round_trip(tp in 0.0..TAU, tm in 0.0..TAU, l0 in 0.1f64..10.0) {
            let j = JunctionParams::from_angles(tp, tm, l0).unwrap();
            let back = JunctionParams::from_lengths(j.l_plus(), j.l_minus(), l0).unwrap();
            prop_assert!(angle_distance(back.theta_plus(), tp) < 1e-12);
            prop_assert!(angle_distance(back.theta_minus(), tm) < 1e-12);
        }
    }
}
