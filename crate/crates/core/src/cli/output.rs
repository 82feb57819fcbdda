//! k-scans and their CSV form.

use std::fmt::Write as _;

use crate::cli::config::{Mode, Scenario};
use crate::double::t2;
use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use crate::resonance::resonance_residuals;
use crate::single::t1;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let m = x.abs();
    if m != 0.0 && !(1e-5..1e16).contains(&m) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub k: f64,
    pub t: f64,
    /// Resonance residuals (double mode only), in the homogeneous scaling.
    pub residuals: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    pub fn has_residuals(&self) -> bool {
        self.rows.first().is_some_and(|r| r.residuals.is_some())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k} = {v}");
        }
        out.push_str(if self.has_residuals() {
            "k,T,r1,r2\n"
        } else {
            "k,T\n"
        });
        for r in &self.rows {
            out.push_str(&fmt_float(r.k));
            out.push(',');
            out.push_str(&fmt_float(r.t));
            if let Some((r1, r2)) = r.residuals {
                out.push(',');
                out.push_str(&fmt_float(r1));
                out.push(',');
                out.push_str(&fmt_float(r2));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> std::result::Result<ScanTable, String> {
        let mut metadata = Vec::new();
        let mut rows = Vec::new();
        let mut width = None;
        for (i, line) in text.lines().enumerate() {
            if let Some(meta) = line.strip_prefix('#') {
                if let Some((k, v)) = meta.split_once('=') {
                    metadata.push((k.trim().to_string(), v.trim().to_string()));
                }
                continue;
            }
            if width.is_none() {
                width = match line {
                    "k,T" => Some(2),
                    "k,T,r1,r2" => Some(4),
                    other => return Err(format!("line {}: unexpected header `{other}`", i + 1)),
                };
                continue;
            }
            let vals = line
                .split(',')
                .map(|s| s.parse::<f64>().map_err(|e| format!("line {}: {e}", i + 1)))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            if Some(vals.len()) != width {
                return Err(format!(
                    "line {}: expected {} fields",
                    i + 1,
                    width.unwrap_or(0)
                ));
            }
            rows.push(ScanRow {
                k: vals[0],
                t: vals[1],
                residuals: (vals.len() == 4).then(|| (vals[2], vals[3])),
            });
        }
        Ok(ScanTable { metadata, rows })
    }

    /// Local maxima of `T` over the sampled rows, as `(k, T)`.
    pub fn sampled_maxima(&self) -> Vec<(f64, f64)> {
        self.rows
            .windows(3)
            .filter(|w| w[1].t >= w[0].t && w[1].t > w[2].t)
            .map(|w| (w[1].k, w[1].t))
            .collect()
    }
}

/// Samples `T₁` or `T₂` uniformly on `[k_min, k_max]`.
pub fn run_scan(scenario: &Scenario, exec: Execution) -> Result<ScanTable> {
    scenario
        .validate()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let n = scenario.samples;
    let (lo, hi) = (scenario.k_min, scenario.k_max);
    let k_at = |i: usize| {
        if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * (i as f64 / (n - 1) as f64)
        }
    };
    let annotate = |k: f64| {
        move |e: Error| Error::Numeric {
            k,
            message: e.to_string(),
        }
    };

    let rows: Vec<Result<ScanRow>> = match scenario.mode {
        Mode::Single => {
            let j1 = scenario.j1;
            map_indexed(n, exec, |i| {
                let k = k_at(i);
                Ok(ScanRow {
                    k,
                    t: t1(&j1, k).map_err(annotate(k))?,
                    residuals: None,
                })
            })
        }
        Mode::Double => {
            let config = scenario.double_config().ok_or_else(|| {
                Error::InvalidParameter("double mode needs two junctions and a".into())
            })?;
            map_indexed(n, exec, |i| {
                let k = k_at(i);
                Ok(ScanRow {
                    k,
                    t: t2(&config, k).map_err(annotate(k))?,
                    residuals: Some(resonance_residuals(&config, k).map_err(annotate(k))?),
                })
            })
        }
    };
    let mut metadata = vec![("pointscatter".to_string(), VERSION.to_string())];
    metadata.extend(scenario.echo());
    Ok(ScanTable {
        metadata,
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}
