//! Data for the six reference figures.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::cli::config::Scenario;
use crate::cli::output::{fmt_float, run_scan, VERSION};
use crate::double::{t2, DoubleConfig};
use crate::error::Result;
use crate::junction::JunctionParams;
use crate::par::{map_indexed, Execution};
use crate::resonance::{analyze, ResonanceRoot};
use crate::roots::linspace;
use crate::single::t1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig6,
        Preset::Fig7,
        Preset::Fig8,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
            Preset::Fig8 => "fig8",
        }
    }

    pub fn config(&self) -> DoubleConfig {
        let (l1, l2) = match self {
            Preset::Fig3 => ((1.0, 0.5), (1.0, 0.5)),
            Preset::Fig4 => ((-1.0, -0.5), (-1.0, -0.5)),
            Preset::Fig5 => ((5.0, -0.5), (5.0, -0.5)),
            Preset::Fig6 => ((-5.0, 0.5), (-5.0, 0.5)),
            Preset::Fig7 => ((1.0, 0.5), (1.0, 0.5)),
            Preset::Fig8 => ((2.0, -1.0), (-2.0, 1.0)),
        };
        DoubleConfig::from_values(l1, l2, 1.0).expect("preset parameters are valid")
    }

    pub fn k_max(&self) -> f64 {
        match self {
            Preset::Fig7 => 20.0,
            _ => 10.0,
        }
    }

    /// Two-curve presets plot `tan ka` against `f(k)`; the others plot `T`.
    pub fn is_curve_pair(&self) -> bool {
        !matches!(self, Preset::Fig7 | Preset::Fig8)
    }

    pub fn samples(&self) -> usize {
        4000
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown preset `{s}` (expected fig3 to fig8)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PresetOutput {
    pub preset: Preset,
    pub roots: Vec<ResonanceRoot>,
    /// `(file name, contents)` in write order.
    pub files: Vec<(String, String)>,
}

impl PresetOutput {
    pub fn write_to(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        self.files
            .iter()
            .map(|(name, body)| {
                let path = dir.join(name);
                std::fs::write(&path, body)?;
                Ok(path)
            })
            .collect()
    }
}

/// `f(k) = k(L⁺ + L⁻)/(1 − k²L⁺L⁻)`; infinite at its pole.
pub fn f_of_k(j: &JunctionParams, k: f64) -> f64 {
    let f = j.factors();
    k * f.sum() / (f.qq() - k * k * f.pp_prod())
}

pub fn run_preset(preset: Preset, exec: Execution) -> Result<PresetOutput> {
    let config = preset.config();
    let k_max = preset.k_max();
    let report = analyze(&config, k_max)?;
    let name = preset.name();
    let header = header_lines(preset, &config);

    let mut curves = header.clone();
    if preset.is_curve_pair() {
        let a = config.a;
        let j1 = config.j1;
        let ks = linspace(k_max / preset.samples() as f64, k_max, preset.samples());
        let rows = map_indexed(ks.len(), exec, |i| {
            let k = ks[i];
            format!(
                "{},{},{}\n",
                fmt_float(k),
                fmt_float((k * a).tan()),
                fmt_float(f_of_k(&j1, k))
            )
        });
        curves.push_str("k,tan_ka,f_k\n");
        curves.extend(rows);
    } else {
        let mut scenario = Scenario::double(&config, k_max);
        scenario.samples = preset.samples();
        let table = run_scan(&scenario, exec)?;
        let single = map_indexed(table.rows.len(), exec, |i| t1(&config.j1, table.rows[i].k));
        curves.push_str("k,T2,T1\n");
        for (row, t_single) in table.rows.iter().zip(single) {
            let _ = writeln!(
                curves,
                "{},{},{}",
                fmt_float(row.k),
                fmt_float(row.t),
                fmt_float(t_single?)
            );
        }
    }

    let mut roots = header;
    roots.push_str("k,kind,T2\n");
    for r in &report.roots {
        let _ = writeln!(
            roots,
            "{},{},{}",
            fmt_float(r.k),
            r.kind,
            fmt_float(t2(&config, r.k)?)
        );
    }

    Ok(PresetOutput {
        preset,
        roots: report.roots,
        files: vec![
            (format!("{name}_curves.csv"), curves),
            (format!("{name}_roots.csv"), roots),
            (format!("{name}.gp"), plot_script(preset)),
        ],
    })
}

fn header_lines(preset: Preset, config: &DoubleConfig) -> String {
    use crate::cli::config::fmt_length;
    format!(
        "# pointscatter = {VERSION}\n# preset = {}\n# L1_plus = {}\n# L1_minus = {}\n# L2_plus = {}\n# L2_minus = {}\n# a = {}\n# k_max = {}\n",
        preset.name(),
        fmt_length(config.j1.l_plus()),
        fmt_length(config.j1.l_minus()),
        fmt_length(config.j2.l_plus()),
        fmt_length(config.j2.l_minus()),
        fmt_float(config.a),
        fmt_float(preset.k_max()),
    )
}

fn plot_script(preset: Preset) -> String {
    let name = preset.name();
    let k_max = fmt_float(preset.k_max());
    let mut s = format!(
        "set datafile separator \",\"\nset datafile columnheaders\nset xlabel \"k\"\nset xrange [0:{k_max}]\n"
    );
    if preset.is_curve_pair() {
        let _ = write!(
            s,
            "set yrange [-10:10]\nplot \"{name}_curves.csv\" using 1:2 with lines title \"tan ka\", \\\n     \"{name}_curves.csv\" using 1:3 with lines title \"f(k)\", \\\n     \"{name}_roots.csv\" using 1:(tan($1)) with points pt 7 title \"roots\"\n"
        );
    } else {
        let _ = write!(
            s,
            "set yrange [0:1.05]\nset ylabel \"T\"\nplot \"{name}_curves.csv\" using 1:2 with lines lc rgb \"red\" title \"T2\", \\\n     \"{name}_curves.csv\" using 1:3 with lines dt 2 title \"T1\", \\\n     \"{name}_roots.csv\" using 1:3 with points pt 7 title \"T2 = 1\"\n"
        );
    }
    s
}
