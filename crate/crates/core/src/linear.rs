//! Dense complex solves for the direct junction-condition oracles.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// An affine expression `c · x + constant` in the unknown amplitudes.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Affine<const N: usize> {
    pub coeffs: [Complex64; N],
    pub constant: Complex64,
}

impl<const N: usize> Affine<N> {
    pub fn zero() -> Self {
        Affine {
            coeffs: [Complex64::new(0.0, 0.0); N],
            constant: Complex64::new(0.0, 0.0),
        }
    }

    /// `c · e^{±ikx}` attached to unknown `idx`, or to the constant when `idx` is `None`.
    pub fn term(idx: Option<usize>, c: Complex64) -> Self {
        let mut out = Self::zero();
        match idx {
            Some(i) => out.coeffs[i] = c,
            None => out.constant = c,
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for c in out.coeffs.iter_mut() {
            *c *= s;
        }
        out.constant *= s;
        out
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        let mut out = *self;
        for (c, o) in out.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *c += o * sign;
        }
        out.constant += other.constant * sign;
        out
    }
}

/// Value and derivative of a wave at one side of a junction.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Trace<const N: usize> {
    pub value: Affine<N>,
    pub slope: Affine<N>,
}

impl<const N: usize> Trace<N> {
    /// Plane waves `Σ c_j e^{i s_j k x}` evaluated at `x`; `s_j = ±1`.
    pub fn of_waves(k: f64, x: f64, waves: &[(Option<usize>, f64)]) -> Self {
        let mut value = Affine::zero();
        let mut slope = Affine::zero();
        for &(idx, dir) in waves {
            let phase = Complex64::from_polar(1.0, dir * k * x);
            value = value.add(&Affine::term(idx, phase));
            slope = slope.add(&Affine::term(idx, Complex64::new(0.0, dir * k) * phase));
        }
        Trace { value, slope }
    }
}

/// The two parity-invariant junction equations in Robin form,
/// `(ψ₊ + ψ₋) + L⁺(ψ′₊ − ψ′₋) = 0` and `(ψ₊ − ψ₋) + L⁻(ψ′₊ + ψ′₋) = 0`,
/// where `±` denotes the limits from the right and left.
pub(crate) fn junction_rows<const N: usize>(
    right: &Trace<N>,
    left: &Trace<N>,
    l_plus: f64,
    l_minus: f64,
) -> [Affine<N>; 2] {
    let even = right
        .value
        .add(&left.value)
        .add(&right.slope.sub(&left.slope).scale(l_plus));
    let odd = right
        .value
        .sub(&left.value)
        .add(&right.slope.add(&left.slope).scale(l_minus));
    [even, odd]
}

pub(crate) struct DenseSolve<const N: usize> {
    pub x: Option<[Complex64; N]>,
    pub ill_conditioned: bool,
}

/// Solves `rows = 0` for the unknowns. Flags the system when
/// `|det| / Π‖row‖` drops below `cond_tol`.
pub(crate) fn solve_rows<const N: usize>(rows: &[Affine<N>; N], cond_tol: f64) -> DenseSolve<N> {
    let m = DMatrix::<Complex64>::from_fn(N, N, |r, c| rows[r].coeffs[c]);
    let rhs = DVector::<Complex64>::from_fn(N, |r, _| -rows[r].constant);
    let row_norms: f64 = rows
        .iter()
        .map(|r| r.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
        .product();
    let lu = m.lu();
    let det = lu.determinant().norm();
    let ill_conditioned = det.is_nan() || det <= cond_tol * row_norms;
    let x = if ill_conditioned {
        None
    } else {
        lu.solve(&rhs).map(|v| std::array::from_fn(|i| v[i]))
    };
    DenseSolve { x, ill_conditioned }
}
