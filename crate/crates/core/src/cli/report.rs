//! Plain-text summary of a scenario.

use std::fmt::Write as _;

use crate::cli::config::{fmt_length, Mode, Scenario};
use crate::cli::output::fmt_float;
use crate::double::DoubleConfig;
use crate::error::{Error, Result};
use crate::junction::{BoundaryClass, ExtendedLength, JunctionParams, CLASS_TOL};
use crate::resonance::{analyze, peak_width, RelationClass};

/// The four second-junction choices that give a δ-potential first
/// junction infinitely many resonances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaCase {
    /// `(L₂⁺, L₂⁻) = (L₁⁺, 0)`: the same δ well.
    I,
    /// `(−L₁⁺, 0)`: the opposite δ.
    II,
    /// `(0, L₁⁺)`
    III,
    /// `(0, −L₁⁺)`
    IV,
}

impl DeltaCase {
    pub fn label(&self) -> &'static str {
        match self {
            DeltaCase::I => "I",
            DeltaCase::II => "II",
            DeltaCase::III => "III",
            DeltaCase::IV => "IV",
        }
    }
}

pub fn delta_case(config: &DoubleConfig) -> Option<DeltaCase> {
    if !matches!(config.j1.classify(), BoundaryClass::DiracDelta { .. }) {
        return None;
    }
    let l_plus = config.j1.l_plus();
    let (p2, m2) = (config.j2.l_plus(), config.j2.l_minus());
    let zero = ExtendedLength::ZERO;
    let neg = l_plus.negated();
    let eq = |a: &ExtendedLength, b: &ExtendedLength| a.approx_eq(b, CLASS_TOL);
    [
        (DeltaCase::I, l_plus, zero),
        (DeltaCase::II, neg, zero),
        (DeltaCase::III, zero, l_plus),
        (DeltaCase::IV, zero, neg),
    ]
    .into_iter()
    .find(|(_, p, m)| eq(&p2, p) && eq(&m2, m))
    .map(|(c, _, _)| c)
}

fn describe_junction(out: &mut String, i: u8, j: &JunctionParams) {
    let _ = writeln!(
        out,
        "junction {i}: L+ = {}, L- = {} ({})",
        fmt_length(j.l_plus()),
        fmt_length(j.l_minus()),
        j.classify().name()
    );
}

/// Single-junction perfect transmission: `1 + k²L⁺L⁻ = 0`.
fn single_resonance(j: &JunctionParams) -> Option<f64> {
    let f = j.factors();
    let (qq, pp) = (f.qq(), f.pp_prod());
    (qq * pp < 0.0 && !j.is_opaque()).then(|| (-qq / pp).sqrt())
}

pub fn emit_report(scenario: &Scenario) -> Result<String> {
    let mut out = String::new();
    describe_junction(&mut out, 1, &scenario.j1);
    if scenario.mode == Mode::Single {
        match single_resonance(&scenario.j1) {
            Some(k) => {
                let _ = writeln!(out, "perfect transmission: k = {}", fmt_float(k));
            }
            None if scenario.j1.is_transparent() => out.push_str("perfect transmission: every k\n"),
            None => out.push_str("perfect transmission: none\n"),
        }
        return Ok(out);
    }

    let config = scenario
        .double_config()
        .ok_or_else(|| Error::InvalidParameter("double mode needs two junctions and a".into()))?;
    describe_junction(&mut out, 2, &config.j2);
    let _ = writeln!(out, "separation: a = {}", fmt_float(config.a));

    let k_max = scenario.k_max;
    let report = match analyze(&config, k_max) {
        Ok(r) => r,
        Err(Error::Degenerate(msg)) => {
            let _ = writeln!(
                out,
                "relation: {}\nperfect transmission: every k ({msg})",
                crate::resonance::classify_relation(&config)
            );
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let q = &report.quartic;
    let _ = writeln!(out, "relation: {}", report.relation);
    let _ = writeln!(
        out,
        "quartic (homogeneous): alpha = {}, beta = {}, gamma = {}",
        fmt_float(q.alpha),
        fmt_float(q.beta),
        fmt_float(q.gamma)
    );
    if report.relation != RelationClass::None {
        if config.j1.is_opaque() {
            out.push_str("first junction is opaque: T2 vanishes for every k\n");
        } else {
            out.push_str("infinite family of resonances\n");
        }
    }
    if let Some(case) = delta_case(&config) {
        let _ = writeln!(out, "delta-potential case ({})", case.label());
    }

    let _ = writeln!(out, "resonances in (0, {}]:", fmt_float(k_max));
    if report.roots.is_empty() {
        out.push_str("  none\n");
    }
    for r in &report.roots {
        let _ = writeln!(
            out,
            "  k = {}  {}{}  |T2 - 1| = {}",
            fmt_float(r.k),
            r.kind,
            if r.tangency { " (tangency)" } else { "" },
            fmt_float(r.residual)
        );
    }

    if report.relation == RelationClass::None {
        if report.incidental.is_empty() {
            out.push_str("incidental candidates: none\n");
        }
        for c in &report.incidental {
            let _ = writeln!(
                out,
                "incidental candidate: k = {} ({}) at this a: {}",
                fmt_float(c.k),
                if c.branch > 0 { "+" } else { "-" },
                if c.verified {
                    "resonant"
                } else {
                    "not resonant"
                }
            );
        }
    }

    if report.relation.is_anti() && !config.j1.is_opaque() {
        let n_max = ((k_max * config.a / std::f64::consts::PI).floor() as u32).min(10);
        for n in 1..=n_max {
            match peak_width(&config.j1, config.a, n) {
                Ok(pw) => {
                    let _ = writeln!(
                        out,
                        "peak width: n = {n}, k_n = {}, w = {}",
                        fmt_float(pw.k_n),
                        fmt_float(pw.w)
                    );
                }
                Err(e) => {
                    let _ = writeln!(out, "peak width: n = {n}: {e}");
                }
            }
        }
    }
    Ok(out)
}
