//! `key = value` scenario documents.
//!
//! ```text
//! # symmetric pair
//! mode = double
//! L1_plus = 1.0
//! L1_minus = 0.5
//! L2_plus = 1.0
//! L2_minus = 0.5
//! a = 1
//! k_max = 20
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::double::DoubleConfig;
use crate::junction::{ExtendedLength, JunctionParams};

pub const DEFAULT_K_MIN: f64 = 1e-3;
pub const DEFAULT_K_MAX: f64 = 10.0;
pub const DEFAULT_SAMPLES: usize = 2000;

const KEYS: [&str; 15] = [
    "mode",
    "L0",
    "L1_plus",
    "L1_minus",
    "L2_plus",
    "L2_minus",
    "theta1_plus",
    "theta1_minus",
    "theta2_plus",
    "theta2_minus",
    "a",
    "k_min",
    "k_max",
    "samples",
    "outputs",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based; 0 for problems with the document as a whole.
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn document(message: impl Into<String>) -> Self {
        Self::at(0, 0, message)
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(
                f,
                "line {}, column {}: {}",
                self.line, self.column, self.message
            )
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Single,
    Double,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Single => "single",
            Mode::Double => "double",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutputKind {
    Csv,
    PlotScript,
    Report,
}

impl OutputKind {
    pub fn name(&self) -> &'static str {
        match self {
            OutputKind::Csv => "csv",
            OutputKind::PlotScript => "plotscript",
            OutputKind::Report => "report",
        }
    }
}

impl FromStr for OutputKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputKind::Csv),
            "plotscript" | "gp" => Ok(OutputKind::PlotScript),
            "report" => Ok(OutputKind::Report),
            other => Err(format!(
                "unknown output `{other}` (expected csv, plotscript, report)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub mode: Mode,
    pub j1: JunctionParams,
    pub j2: Option<JunctionParams>,
    pub a: Option<f64>,
    pub k_min: f64,
    pub k_max: f64,
    pub samples: usize,
    pub outputs: BTreeSet<OutputKind>,
}

impl Scenario {
    pub fn single(j1: JunctionParams, k_max: f64) -> Self {
        Scenario {
            mode: Mode::Single,
            j1,
            j2: None,
            a: None,
            k_min: DEFAULT_K_MIN,
            k_max,
            samples: DEFAULT_SAMPLES,
            outputs: BTreeSet::from([OutputKind::Csv]),
        }
    }

    pub fn double(config: &DoubleConfig, k_max: f64) -> Self {
        Scenario {
            mode: Mode::Double,
            j2: Some(config.j2),
            a: Some(config.a),
            ..Scenario::single(config.j1, k_max)
        }
    }

    /// `None` in single mode.
    pub fn double_config(&self) -> Option<DoubleConfig> {
        match (self.mode, self.j2, self.a) {
            (Mode::Double, Some(j2), Some(a)) => DoubleConfig::new(self.j1, j2, a).ok(),
            _ => None,
        }
    }

    /// Re-checks the range after command-line overrides.
    pub fn validate(&self) -> Result<(), ParseError> {
        if !self.k_min.is_finite() || self.k_min <= 0.0 {
            return Err(ParseError::document(format!(
                "k_min must be positive, got {}",
                self.k_min
            )));
        }
        if !self.k_max.is_finite() || self.k_max <= self.k_min {
            return Err(ParseError::document(format!(
                "k_max ({}) must exceed k_min ({})",
                self.k_max, self.k_min
            )));
        }
        if self.samples < 2 {
            return Err(ParseError::document("samples must be at least 2"));
        }
        Ok(())
    }

    /// Canonical `key = value` lines describing this scenario.
    pub fn echo(&self) -> Vec<(String, String)> {
        use crate::cli::output::fmt_float;
        let mut out = vec![("mode".to_string(), self.mode.name().to_string())];
        let mut push_junction = |i: u8, j: &JunctionParams| {
            out.push((format!("L{i}_plus"), fmt_length(j.l_plus())));
            out.push((format!("L{i}_minus"), fmt_length(j.l_minus())));
        };
        push_junction(1, &self.j1);
        if let Some(j2) = &self.j2 {
            push_junction(2, j2);
        }
        if let Some(a) = self.a {
            out.push(("a".into(), fmt_float(a)));
        }
        out.push(("k_min".into(), fmt_float(self.k_min)));
        out.push(("k_max".into(), fmt_float(self.k_max)));
        out.push(("samples".into(), self.samples.to_string()));
        out
    }
}

pub(crate) fn fmt_length(l: ExtendedLength) -> String {
    if l.is_finite() {
        crate::cli::output::fmt_float(l.value())
    } else {
        "inf".into()
    }
}

struct Entry {
    line: usize,
    key_col: usize,
    value_col: usize,
    value: String,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let mut entries: BTreeMap<&'static str, Entry> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let Some(eq) = content.find('=') else {
            return Err(ParseError::at(
                line,
                col(raw, indent),
                "expected `key = value`",
            ));
        };
        let key = content[..eq].trim();
        let value_part = &content[eq + 1..];
        let value = value_part.trim();
        let value_col = col(
            raw,
            eq + 1 + (value_part.len() - value_part.trim_start().len()),
        );
        let key_col = col(raw, indent);
        let Some(&known) = KEYS.iter().find(|&&k| k == key) else {
            return Err(ParseError::at(
                line,
                key_col,
                format!("unknown key `{key}`"),
            ));
        };
        if value.is_empty() {
            return Err(ParseError::at(
                line,
                value_col,
                format!("missing value for `{key}`"),
            ));
        }
        if let Some(prev) = entries.get(known) {
            return Err(ParseError::at(
                line,
                key_col,
                format!("duplicate key `{key}` (first set on line {})", prev.line),
            ));
        }
        entries.insert(
            known,
            Entry {
                line,
                key_col,
                value_col,
                value: value.to_string(),
            },
        );
    }
    build(&entries)
}

fn col(raw: &str, byte_offset: usize) -> usize {
    raw[..byte_offset].chars().count() + 1
}

fn number(e: &Entry, key: &str, allow_inf: bool) -> Result<f64, ParseError> {
    let bad = || {
        ParseError::at(
            e.line,
            e.value_col,
            format!("`{key}`: `{}` is not a number", e.value),
        )
    };
    let v = match e.value.as_str() {
        "inf" | "+inf" if allow_inf => return Ok(f64::INFINITY),
        "-inf" if allow_inf => return Ok(f64::NEG_INFINITY),
        s => s.parse::<f64>().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn build(entries: &BTreeMap<&'static str, Entry>) -> Result<Scenario, ParseError> {
    let mode = match entries.get("mode") {
        None => Mode::Double,
        Some(e) => match e.value.as_str() {
            "single" => Mode::Single,
            "double" => Mode::Double,
            other => {
                return Err(ParseError::at(
                    e.line,
                    e.value_col,
                    format!("mode must be `single` or `double`, got `{other}`"),
                ))
            }
        },
    };
    let l0 = match entries.get("L0") {
        Some(e) => {
            let v = number(e, "L0", false)?;
            if v <= 0.0 {
                return Err(ParseError::at(e.line, e.value_col, "L0 must be positive"));
            }
            v
        }
        None => 1.0,
    };

    let j1 = junction(entries, 1, l0)?.ok_or_else(|| {
        ParseError::document("junction 1 needs L1_plus/L1_minus or theta1_plus/theta1_minus")
    })?;
    let j2 = junction(entries, 2, l0)?;
    let a = entries
        .get("a")
        .map(|e| number(e, "a", false).map(|v| (e, v)))
        .transpose()?;

    let (j2, a) = match mode {
        Mode::Double => {
            let j2 = j2.ok_or_else(|| {
                ParseError::document(
                    "double mode needs L2_plus/L2_minus or theta2_plus/theta2_minus",
                )
            })?;
            let (e, a) =
                a.ok_or_else(|| ParseError::document("double mode needs the separation `a`"))?;
            if a <= 0.0 {
                return Err(ParseError::at(
                    e.line,
                    e.value_col,
                    "separation `a` must be positive",
                ));
            }
            (Some(j2), Some(a))
        }
        Mode::Single => {
            if let Some(e) = ["L2_plus", "L2_minus", "theta2_plus", "theta2_minus", "a"]
                .iter()
                .find_map(|k| entries.get(k))
            {
                return Err(ParseError::at(
                    e.line,
                    e.key_col,
                    "single mode takes one junction and no separation",
                ));
            }
            (None, None)
        }
    };

    let k_min = entries
        .get("k_min")
        .map(|e| number(e, "k_min", false))
        .transpose()?
        .unwrap_or(DEFAULT_K_MIN);
    let k_max = entries
        .get("k_max")
        .map(|e| number(e, "k_max", false))
        .transpose()?
        .unwrap_or(DEFAULT_K_MAX);
    let samples = match entries.get("samples") {
        Some(e) => e.value.parse::<usize>().map_err(|_| {
            ParseError::at(
                e.line,
                e.value_col,
                format!("`samples`: `{}` is not a count", e.value),
            )
        })?,
        None => DEFAULT_SAMPLES,
    };
    let outputs = match entries.get("outputs") {
        Some(e) => e
            .value
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<OutputKind>()
                    .map_err(|m| ParseError::at(e.line, e.value_col, m))
            })
            .collect::<Result<BTreeSet<_>, _>>()?,
        None => BTreeSet::from([OutputKind::Csv]),
    };

    let scenario = Scenario {
        mode,
        j1,
        j2,
        a,
        k_min,
        k_max,
        samples,
        outputs,
    };
    scenario.validate()?;
    Ok(scenario)
}

fn junction(
    entries: &BTreeMap<&'static str, Entry>,
    i: u8,
    l0: f64,
) -> Result<Option<JunctionParams>, ParseError> {
    let get = |k: String| entries.get(k.as_str()).map(|e| (k, e));
    let lp = get(format!("L{i}_plus"));
    let lm = get(format!("L{i}_minus"));
    let tp = get(format!("theta{i}_plus"));
    let tm = get(format!("theta{i}_minus"));

    let lengths = [&lp, &lm].into_iter().flatten().collect::<Vec<_>>();
    let angles = [&tp, &tm].into_iter().flatten().collect::<Vec<_>>();
    if let (Some(l), Some(t)) = (lengths.first(), angles.first()) {
        let (later, earlier) = if l.1.line > t.1.line { (l, t) } else { (t, l) };
        return Err(ParseError::at(
            later.1.line,
            later.1.key_col,
            format!(
                "`{}` conflicts with `{}` on line {}",
                later.0, earlier.0, earlier.1.line
            ),
        ));
    }
    let pair = |a: &Option<(String, &Entry)>, b: &Option<(String, &Entry)>, allow_inf: bool| match (
        a, b,
    ) {
        (Some((ka, ea)), Some((kb, eb))) => Ok(Some((
            number(ea, ka, allow_inf)?,
            number(eb, kb, allow_inf)?,
        ))),
        (None, None) => Ok(None),
        (Some((k, e)), None) | (None, Some((k, e))) => Err(ParseError::at(
            e.line,
            e.key_col,
            format!("`{k}` needs its partner for junction {i}"),
        )),
    };
    let invalid =
        |e: &Entry, err: crate::Error| ParseError::at(e.line, e.value_col, err.to_string());
    if let Some((p, m)) = pair(&lp, &lm, true)? {
        let e = lp.as_ref().map(|x| x.1).expect("present");
        let plus = ExtendedLength::new(p).map_err(|err| invalid(e, err))?;
        let minus = ExtendedLength::new(m).map_err(|err| invalid(e, err))?;
        return JunctionParams::from_lengths(plus, minus, l0)
            .map(Some)
            .map_err(|err| invalid(e, err));
    }
    if let Some((p, m)) = pair(&tp, &tm, false)? {
        let e = tp.as_ref().map(|x| x.1).expect("present");
        return JunctionParams::from_angles(p, m, l0)
            .map(Some)
            .map_err(|err| invalid(e, err));
    }
    Ok(None)
}
