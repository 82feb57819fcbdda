//! Conditions for perfect transmission through two junctions.
//!
//! `T₂ ≤ 1` can be rewritten as `r₁² + r₂² ≥ 0` with
//! `r₁ = M₁₁ sin ka + M₁₂ cos ka` and `r₂ = M₂₁ sin ka + M₂₂ cos ka`, so
//! `T₂ = 1` exactly when both residuals vanish. A common root needs
//! `det M = 0`, which is `k²(αk⁴ + 2βk² + γ) = 0`. When `α = β = γ = 0`
//! (the symmetric and anti-symmetric relations between the two junctions)
//! there are infinitely many resonant wavenumbers; otherwise at most two
//! isolated ones, realised only for particular separations.
//!
//! Everything here is computed in homogeneous form: `M` carries an extra
//! factor `q₁₊q₁₋q₂₊q₂₋ ≥ 0` and the quartic its square. Zero sets are
//! unchanged.

use std::f64::consts::PI;
use std::fmt;

use crate::double::{t2, DoubleConfig};
use crate::error::{Error, Result};
use crate::junction::{JunctionParams, CLASS_TOL};
use crate::par::Execution;
use crate::roots::{grid_roots, linspace};
use crate::single::t1;

/// Largest `|T₂ − 1|` accepted for a reported resonance.
pub const ROOT_TOL: f64 = 1e-8;

/// Upper bound on grid points used to bracket roots.
const MAX_GRID: usize = 4_000_001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceMatrix {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
    /// `q₁₊q₁₋q₂₊q₂₋`; the entries are the textbook ones times this.
    pub scale: f64,
}

impl ResonanceMatrix {
    /// `(r₁, r₂)` at separation `a`.
    pub fn residuals(&self, k: f64, a: f64) -> (f64, f64) {
        let (s, c) = (k * a).sin_cos();
        (self.m11 * s + self.m12 * c, self.m21 * s + self.m22 * c)
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Magnitude of the two products that cancel in `det`.
    pub fn det_scale(&self) -> f64 {
        (self.m11 * self.m22).abs() + (self.m12 * self.m21).abs()
    }

    pub fn max_abs(&self) -> f64 {
        self.m11
            .abs()
            .max(self.m12.abs())
            .max(self.m21.abs())
            .max(self.m22.abs())
    }

    /// Entries with the homogeneous factor divided out; `None` when some
    /// length is infinite.
    pub fn unscaled(&self) -> Option<[f64; 4]> {
        (self.scale > 0.0).then(|| [self.m11, self.m12, self.m21, self.m22].map(|m| m / self.scale))
    }
}

pub fn resonance_matrix(config: &DoubleConfig, k: f64) -> Result<ResonanceMatrix> {
    if !k.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "wavenumber {k} is not finite"
        )));
    }
    let f1 = config.j1.factors();
    let f2 = config.j2.factors();
    let (q1, q2) = (f1.qq(), f2.qq());
    let (x1, x2) = (f1.pp_prod(), f2.pp_prod());
    let (s1, s2) = (f1.sum(), f2.sum());
    let (k2, k3) = (k * k, k * k * k);
    Ok(ResonanceMatrix {
        m11: 2.0 * (q1 * q2 - k2 * k2 * x1 * x2),
        m12: -k * (s1 * q2 + s2 * q1) - k3 * (x1 * s2 + x2 * s1),
        m21: k * (s1 * q2 - s2 * q1) - k3 * (x1 * s2 - x2 * s1),
        m22: -2.0 * k2 * (x1 * q2 - x2 * q1),
        scale: q1 * q2,
    })
}

/// `(r₁, r₂)` for the configuration's own separation.
pub fn resonance_residuals(config: &DoubleConfig, k: f64) -> Result<(f64, f64)> {
    Ok(resonance_matrix(config, k)?.residuals(k, config.a))
}

/// Coefficients of `αk⁴ + 2βk² + γ`, homogeneous form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Size of the terms that cancel in each coefficient.
    pub scale: f64,
    /// `(q₁₊q₁₋q₂₊q₂₋)²`
    pub homogeneous_factor: f64,
}

impl QuarticCoefficients {
    pub fn eval(&self, k: f64) -> f64 {
        let k2 = k * k;
        (self.alpha * k2 + 2.0 * self.beta) * k2 + self.gamma
    }

    /// All three coefficients vanish relative to `scale`.
    pub fn vanishes(&self, tol: f64) -> bool {
        let lim = tol * self.scale;
        self.alpha.abs() <= lim && self.beta.abs() <= lim && self.gamma.abs() <= lim
    }

    /// Positive `k` with `αk⁴ + 2βk² + γ = 0`, ascending. Empty when the
    /// polynomial vanishes identically.
    pub fn positive_roots(&self) -> Vec<f64> {
        let (a, b, c) = (self.alpha, self.beta, self.gamma);
        let tiny = 1e-300_f64.max(1e-15 * self.scale);
        let mut u = Vec::new();
        if a.abs() <= tiny {
            if b.abs() > tiny {
                u.push(-c / (2.0 * b));
            }
        } else {
            let disc = b * b - a * c;
            if disc >= 0.0 {
                let q = -(b + b.signum() * disc.sqrt());
                if q != 0.0 {
                    u.push(q / a);
                    u.push(c / q);
                } else {
                    u.push(0.0);
                }
            }
        }
        let mut ks: Vec<f64> = u.into_iter().filter(|&x| x > 0.0).map(f64::sqrt).collect();
        ks.sort_by(f64::total_cmp);
        ks.dedup();
        ks
    }

    /// Coefficients with the homogeneous factor divided out, when finite.
    pub fn unscaled(&self) -> Option<(f64, f64, f64)> {
        let h = self.homogeneous_factor;
        (h > 0.0).then(|| (self.alpha / h, self.beta / h, self.gamma / h))
    }
}

pub fn quartic_coefficients(config: &DoubleConfig) -> QuarticCoefficients {
    let f1 = config.j1.factors();
    let f2 = config.j2.factors();
    let (n1, n2) = (f1.diff(), f2.diff());
    let (x1, x2) = (f1.pp_prod(), f2.pp_prod());
    let (q1, q2) = (f1.qq(), f2.qq());
    let (n1s, n2s) = (n1 * n1, n2 * n2);
    let terms = [
        (n1s * x2 * x2, n2s * x1 * x1),
        (n1s * x2 * q2, n2s * x1 * q1),
        (n1s * q2 * q2, n2s * q1 * q1),
    ];
    let scale = terms
        .iter()
        .map(|(a, b)| a.abs().max(b.abs()))
        .fold(0.0, f64::max);
    QuarticCoefficients {
        alpha: terms[0].0 - terms[0].1,
        beta: terms[1].0 - terms[1].1,
        gamma: terms[2].0 - terms[2].1,
        scale,
        homogeneous_factor: (q1 * q2) * (q1 * q2),
    }
}

/// How the second junction's lengths relate to the first's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationClass {
    /// `(L₂⁺, L₂⁻) = (L₁⁺, L₁⁻)`
    SymmetricSame,
    /// `(L₂⁺, L₂⁻) = (L₁⁻, L₁⁺)`
    SymmetricSwapped,
    /// `(L₂⁺, L₂⁻) = (−L₁⁺, −L₁⁻)`
    AntiSame,
    /// `(L₂⁺, L₂⁻) = (−L₁⁻, −L₁⁺)`
    AntiSwapped,
    None,
}

impl RelationClass {
    pub const ALL: [RelationClass; 4] = [
        RelationClass::SymmetricSame,
        RelationClass::SymmetricSwapped,
        RelationClass::AntiSame,
        RelationClass::AntiSwapped,
    ];

    pub fn is_symmetric(&self) -> bool {
        matches!(
            self,
            RelationClass::SymmetricSame | RelationClass::SymmetricSwapped
        )
    }

    pub fn is_anti(&self) -> bool {
        matches!(self, RelationClass::AntiSame | RelationClass::AntiSwapped)
    }

    /// The second junction this relation pairs with `j1`.
    pub fn partner(&self, j1: &JunctionParams) -> Option<JunctionParams> {
        match self {
            RelationClass::SymmetricSame => Some(*j1),
            RelationClass::SymmetricSwapped => Some(j1.swapped()),
            RelationClass::AntiSame => Some(j1.negated()),
            RelationClass::AntiSwapped => Some(j1.negated().swapped()),
            RelationClass::None => None,
        }
    }
}

impl fmt::Display for RelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn classify_relation(config: &DoubleConfig) -> RelationClass {
    let (p2, m2) = (config.j2.l_plus(), config.j2.l_minus());
    RelationClass::ALL
        .into_iter()
        .find(|rel| {
            let partner = rel
                .partner(&config.j1)
                .expect("listed relations have partners");
            p2.approx_eq(&partner.l_plus(), CLASS_TOL)
                && m2.approx_eq(&partner.l_minus(), CLASS_TOL)
        })
        .unwrap_or(RelationClass::None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootKind {
    /// Zero of `(1 − k²L⁺L⁻) sin ka − k(L⁺ + L⁻) cos ka`, i.e. `tan ka = f(k)`.
    TanCondition,
    /// `sin ka = 0`, `k = nπ/a`.
    SinCondition,
    /// `k = √(−1 / (L⁺L⁻))`, where `1 + k²L⁺L⁻` vanishes.
    InverseSqrt,
    /// Isolated root of the quartic that happens to resonate at this `a`.
    Incidental,
}

impl fmt::Display for RootKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceRoot {
    pub k: f64,
    pub kind: RootKind,
    /// `|T₂(k) − 1|`
    pub residual: f64,
    /// Touching zero of the tan-condition residual (no sign change).
    pub tangency: bool,
}

impl ResonanceRoot {
    fn verified(config: &DoubleConfig, k: f64, kind: RootKind, tangency: bool) -> Result<Self> {
        Ok(ResonanceRoot {
            k,
            kind,
            residual: (t2(config, k)? - 1.0).abs(),
            tangency,
        })
    }

    pub fn is_verified(&self) -> bool {
        self.residual < ROOT_TOL
    }
}

fn check_k_max(k_max: f64) -> Result<()> {
    if !k_max.is_finite() || k_max <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "k_max must be finite and positive, got {k_max}"
        )));
    }
    Ok(())
}

/// Rejects the cases where the root list would be meaningless.
/// `Ok(false)` means the first junction is opaque and nothing resonates.
fn screen_first_junction(j1: &JunctionParams) -> Result<bool> {
    if j1.is_transparent() {
        return Err(Error::Degenerate(format!(
            "{} junctions transmit at every k",
            j1.classify().name()
        )));
    }
    Ok(!j1.is_opaque())
}

/// `√(−1/(L⁺L⁻))` when `L⁺L⁻ < 0`.
fn inverse_sqrt_root(j: &JunctionParams) -> Option<f64> {
    let f = j.factors();
    let (qq, pp) = (f.qq(), f.pp_prod());
    (qq * pp < 0.0).then(|| (-qq / pp).sqrt())
}

fn merge_inverse_sqrt(roots: &mut Vec<(f64, RootKind, bool)>, k_star: Option<f64>, k_max: f64) {
    if let Some(ks) = k_star.filter(|&ks| ks <= k_max) {
        roots.retain(|&(k, _, _)| (k - ks).abs() > 1e-9 * ks);
        roots.push((ks, RootKind::InverseSqrt, false));
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
}

/// Perfect-transmission wavenumbers in `(0, k_max]` for the symmetric
/// relations, where the two resonance equations reduce to
/// `(1 + k²L⁺L⁻)·g(k) = 0` with
/// `g(k) = (1 − k²L⁺L⁻) sin ka − k(L⁺ + L⁻) cos ka`.
///
/// `g` is bracketed on a grid finer than both `π/a` and `π/max|L|`, then
/// bisected; the pole-free form avoids the spurious crossings that
/// `tan ka = f(k)` produces at the poles of either side.
pub fn resonance_roots_case_i(config: &DoubleConfig, k_max: f64) -> Result<Vec<ResonanceRoot>> {
    resonance_roots_case_i_with(config, k_max, Execution::default())
}

pub fn resonance_roots_case_i_with(
    config: &DoubleConfig,
    k_max: f64,
    exec: Execution,
) -> Result<Vec<ResonanceRoot>> {
    check_k_max(k_max)?;
    let relation = classify_relation(config);
    if !relation.is_symmetric() {
        return Err(Error::NotApplicable(format!(
            "tan-condition roots need a symmetric relation, found {relation}"
        )));
    }
    if !screen_first_junction(&config.j1)? {
        return Ok(Vec::new());
    }
    let f = config.j1.factors();
    let a = config.a;
    let (qq, pp, sum) = (f.qq(), f.pp_prod(), f.sum());
    let g = move |k: f64| {
        let (s, c) = (k * a).sin_cos();
        (qq - k * k * pp) * s - k * sum * c
    };
    let touch_tol = move |k: f64| 1e-10 * (qq.abs() + k * k * pp.abs() + k * sum.abs());

    let ell = f.max_finite_length();
    let mut step = PI / (8.0 * a);
    if ell > 0.0 {
        step = step.min(PI / (8.0 * ell));
    }
    step *= 0.25;
    let n = ((k_max / step).ceil() as usize + 1).clamp(64, MAX_GRID);
    let grid = linspace(step.min(k_max) * 1e-6, k_max, n);

    let mut found: Vec<(f64, RootKind, bool)> = grid_roots(g, &grid, touch_tol, exec)
        .into_iter()
        .map(|r| (r.x, RootKind::TanCondition, r.tangency))
        .collect();
    merge_inverse_sqrt(&mut found, inverse_sqrt_root(&config.j1), k_max);
    found
        .into_iter()
        .map(|(k, kind, tangency)| ResonanceRoot::verified(config, k, kind, tangency))
        .collect()
}

/// Perfect-transmission wavenumbers in `(0, k_max]` for the
/// anti-symmetric relations: `k = nπ/a`, plus `√(−1/(L⁺L⁻))` when
/// `L⁺L⁻ < 0`.
pub fn resonance_roots_case_ii(config: &DoubleConfig, k_max: f64) -> Result<Vec<ResonanceRoot>> {
    check_k_max(k_max)?;
    let relation = classify_relation(config);
    if !relation.is_anti() {
        return Err(Error::NotApplicable(format!(
            "sin-condition roots need an anti-symmetric relation, found {relation}"
        )));
    }
    if !screen_first_junction(&config.j1)? {
        return Ok(Vec::new());
    }
    let a = config.a;
    let n_max = (k_max * a / PI).floor() as u64;
    let mut found: Vec<(f64, RootKind, bool)> = (1..=n_max)
        .map(|n| (n as f64 * PI / a, RootKind::SinCondition, false))
        .filter(|&(k, _, _)| k <= k_max)
        .collect();
    merge_inverse_sqrt(&mut found, inverse_sqrt_root(&config.j1), k_max);
    found
        .into_iter()
        .map(|(k, kind, tangency)| ResonanceRoot::verified(config, k, kind, tangency))
        .collect()
}

/// A positive root of the quartic outside the relation classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidentalCandidate {
    pub k: f64,
    /// `+1` or `−1`: which factor of the quartic produced it.
    pub branch: i8,
    pub residual: f64,
    /// `T₂(k) = 1` within [`ROOT_TOL`] at the configured separation.
    pub verified: bool,
}

/// Candidates from
/// `k² = (−(L₂⁺ − L₂⁻) ± (L₁⁺ − L₁⁻)) / (L₁⁺L₁⁻(L₂⁺ − L₂⁻) ∓ L₂⁺L₂⁻(L₁⁺ − L₁⁻))`,
/// the two factors of `αk⁴ + 2βk² + γ`. Whether they resonate depends
/// on `a`; see [`resonant_separations`].
pub fn incidental_resonance(config: &DoubleConfig) -> Result<Vec<IncidentalCandidate>> {
    let relation = classify_relation(config);
    if relation != RelationClass::None {
        return Err(Error::NotApplicable(format!(
            "relation {relation} resonates for every k on its root family"
        )));
    }
    let f1 = config.j1.factors();
    let f2 = config.j2.factors();
    let (n1, n2) = (f1.diff(), f2.diff());
    let (x1, x2) = (f1.pp_prod(), f2.pp_prod());
    let (q1, q2) = (f1.qq(), f2.qq());

    let mut degenerate = 0;
    let mut out = Vec::new();
    for branch in [1i8, -1] {
        let sign = f64::from(branch);
        let num = -n2 * q1 + sign * n1 * q2;
        let den = x1 * n2 - sign * x2 * n1;
        let den_scale = (x1 * n2).abs() + (x2 * n1).abs();
        if den == 0.0 || den.abs() <= 1e-14 * den_scale {
            degenerate += 1;
            continue;
        }
        let k2 = num / den;
        if k2 > 0.0 {
            let k = k2.sqrt();
            let residual = (t2(config, k)? - 1.0).abs();
            out.push(IncidentalCandidate {
                k,
                branch,
                residual,
                verified: residual < ROOT_TOL,
            });
        }
    }
    if degenerate == 2 {
        return Err(Error::NoCandidate);
    }
    out.sort_by(|a, b| a.k.total_cmp(&b.k));
    Ok(out)
}

/// Separations `a > 0` at which the junction pair resonates at `k`,
/// assuming `det M(k) = 0`. Returns the first `count` in ascending order.
pub fn resonant_separations(
    j1: &JunctionParams,
    j2: &JunctionParams,
    k: f64,
    count: usize,
) -> Result<Vec<f64>> {
    let probe = DoubleConfig::new(*j1, *j2, 1.0)?;
    let m = resonance_matrix(&probe, k)?;
    // use the larger row of M; the other is proportional when det M = 0
    let (c_sin, c_cos) = if m.m11.hypot(m.m12) >= m.m21.hypot(m.m22) {
        (m.m11, m.m12)
    } else {
        (m.m21, m.m22)
    };
    if c_sin == 0.0 && c_cos == 0.0 {
        return Err(Error::Degenerate(
            "both residuals vanish identically".into(),
        ));
    }
    let mut phase = (-c_cos).atan2(c_sin).rem_euclid(PI);
    if phase == 0.0 {
        phase = PI;
    }
    Ok((0..count).map(|n| (phase + n as f64 * PI) / k).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakWidth {
    pub n: u32,
    /// `nπ/a`
    pub k_n: f64,
    /// `|k_n (L⁺ − L⁻) √T₁(k_n) / (2a(1 + k_n² L⁺L⁻))|`
    pub w: f64,
}

/// Width scale of the `n`-th lattice peak of an anti-symmetric pair,
/// near which `T₂(k) ≈ 1 − ((k − k_n)/w)²`.
pub fn peak_width(j1: &JunctionParams, a: f64, n: u32) -> Result<PeakWidth> {
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "separation must be finite and positive, got {a}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("peak index starts at 1".into()));
    }
    if !screen_first_junction(j1)? {
        return Err(Error::NotApplicable("opaque junction has no peaks".into()));
    }
    let k_n = f64::from(n) * PI / a;
    let f = j1.factors();
    let s = f.s(k_n);
    if s.abs() <= 1e-12 * (f.qq().abs() + k_n * k_n * f.pp_prod().abs()) {
        return Err(Error::SingularPeak { n, k: k_n });
    }
    let w = (k_n * f.diff() * t1(j1, k_n)?.sqrt() / (2.0 * a * s)).abs();
    Ok(PeakWidth { n, k_n, w })
}

/// Everything known about perfect transmission for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceReport {
    pub relation: RelationClass,
    pub quartic: QuarticCoefficients,
    /// Verified resonances in `(0, k_max]`, ascending.
    pub roots: Vec<ResonanceRoot>,
    /// Quartic roots for relation-free pairs, verified or not.
    pub incidental: Vec<IncidentalCandidate>,
}

pub fn analyze(config: &DoubleConfig, k_max: f64) -> Result<ResonanceReport> {
    check_k_max(k_max)?;
    let relation = classify_relation(config);
    let quartic = quartic_coefficients(config);
    let (roots, incidental) = if relation.is_symmetric() {
        (resonance_roots_case_i(config, k_max)?, Vec::new())
    } else if relation.is_anti() {
        (resonance_roots_case_ii(config, k_max)?, Vec::new())
    } else {
        let cands = match incidental_resonance(config) {
            Ok(c) => c,
            Err(Error::NoCandidate) => Vec::new(),
            Err(e) => return Err(e),
        };
        let roots = cands
            .iter()
            .filter(|c| c.verified && c.k <= k_max)
            .map(|c| ResonanceRoot {
                k: c.k,
                kind: RootKind::Incidental,
                residual: c.residual,
                tangency: false,
            })
            .collect();
        (roots, cands)
    };
    Ok(ResonanceReport {
        relation,
        quartic,
        roots,
        incidental,
    })
}
