//! JSON motion configuration.
//!
//! ```json
//! {
//!   "mode": "nilpotent",
//!   "axis": { "re": [0, 0, 0], "du": [0, 0, 1] },
//!   "h": [ { "num": [[2, 0], [1, 0]] } ],
//!   "translation": [ [ { "num": [[0, 0], [1, 0]] } ], [], [] ],
//!   "points": [ { "re": [1, 0, 0], "du": [0, 0, 0] } ],
//!   "meta": { "name": "example" }
//! }
//! ```
//!
//! Each term is `num(t) / den(t) · e^{rate·t}`; coefficients are `[re, du]`
//! pairs in ascending powers of `t`. `den` defaults to `[[1, 0]]` and `rate`
//! to `0`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dual_scalar::DualPolynomial;
use crate::error::Error;
use crate::function::{ScalarFunction, Term, VecFunction};
use crate::lorentz::{DualVec3, Vec3};
use crate::motion::{Mode, Motion};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeConfig {
    General,
    Nilpotent,
}

impl From<ModeConfig> for Mode {
    fn from(m: ModeConfig) -> Self {
        match m {
            ModeConfig::General => Mode::General,
            ModeConfig::Nilpotent => Mode::Nilpotent,
        }
    }
}

impl From<Mode> for ModeConfig {
    fn from(m: Mode) -> Self {
        match m {
            Mode::General => ModeConfig::General,
            Mode::Nilpotent => ModeConfig::Nilpotent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualVecConfig {
    pub re: [f64; 3],
    pub du: [f64; 3],
}

impl From<DualVecConfig> for DualVec3 {
    fn from(v: DualVecConfig) -> Self {
        DualVec3::from_arrays(v.re, v.du)
    }
}

impl From<DualVec3> for DualVecConfig {
    fn from(v: DualVec3) -> Self {
        Self { re: v.re.0, du: v.du.0 }
    }
}

fn unit_den() -> Vec<[f64; 2]> {
    vec![[1.0, 0.0]]
}

fn is_unit_den(d: &Vec<[f64; 2]>) -> bool {
    d.as_slice() == [[1.0, 0.0]]
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub num: Vec<[f64; 2]>,
    #[serde(default = "unit_den", skip_serializing_if = "is_unit_den")]
    pub den: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionConfig {
    pub mode: ModeConfig,
    pub axis: DualVecConfig,
    pub h: Vec<TermConfig>,
    pub translation: [Vec<TermConfig>; 3],
    #[serde(default)]
    pub points: Vec<DualVecConfig>,
    #[serde(default)]
    pub meta: BTreeMap<String, String>,
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub motion: Motion,
    pub points: Vec<DualVec3>,
    pub meta: BTreeMap<String, String>,
}

fn all_finite(pairs: &[[f64; 2]]) -> bool {
    pairs.iter().flatten().all(|x| x.is_finite())
}

fn term_from_config(tc: &TermConfig, field: &str) -> Result<Term, ConfigError> {
    if !all_finite(&tc.num) || !all_finite(&tc.den) || !tc.rate.is_finite() {
        return Err(invalid(field, "coefficients must be finite"));
    }
    let num = DualPolynomial::from_pairs(&tc.num);
    if is_unit_den(&tc.den) {
        return Ok(Term::exp_poly(num, tc.rate));
    }
    Term::new(num, DualPolynomial::from_pairs(&tc.den), tc.rate)
        .map_err(|_| invalid(format!("{field}.den"), "denominator must have a leading coefficient with nonzero real part"))
}

fn function_from_config(terms: &[TermConfig], field: &str) -> Result<ScalarFunction, ConfigError> {
    terms
        .iter()
        .enumerate()
        .map(|(i, tc)| term_from_config(tc, &format!("{field}[{i}]")))
        .collect::<Result<Vec<_>, _>>()
        .map(ScalarFunction::new)
}

fn term_to_config(term: &Term) -> TermConfig {
    let den = if term.den_pow() == 0 {
        unit_den()
    } else {
        term.den().to_pairs()
    };
    let num = term.num().to_pairs();
    TermConfig {
        num: if num.is_empty() { vec![[0.0, 0.0]] } else { num },
        den,
        rate: term.rate(),
    }
}

fn function_to_config(f: &ScalarFunction) -> Vec<TermConfig> {
    f.terms().iter().map(term_to_config).collect()
}

impl MotionConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Re-checks every motion invariant, reporting the offending field.
    pub fn validate(&self) -> Result<LoadedConfig, ConfigError> {
        let axis: DualVec3 = self.axis.into();
        if !axis.is_finite() {
            return Err(invalid("axis", "components must be finite"));
        }
        if self.mode == ModeConfig::Nilpotent && axis.re != Vec3::ZERO {
            return Err(invalid(
                "axis.re",
                "nilpotent mode requires Ã² = 0, which holds only for a zero real axis",
            ));
        }
        let h = function_from_config(&self.h, "h")?;
        if h.is_constant() {
            return Err(invalid("h", "h̃ = h̃(t) ≠ constant is required (a constant h̃ is an affine map)"));
        }
        let c: [ScalarFunction; 3] = [
            function_from_config(&self.translation[0], "translation[0]")?,
            function_from_config(&self.translation[1], "translation[1]")?,
            function_from_config(&self.translation[2], "translation[2]")?,
        ];
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let v: DualVec3 = (*p).into();
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(invalid(format!("points[{i}]"), "components must be finite"))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let motion = Motion::from_axis_vector(h, &axis, VecFunction(c), self.mode.into()).map_err(|e| match e {
            Error::InvalidMotion(msg) if msg.contains("C̃′") => invalid("translation", msg),
            Error::InvalidMotion(msg) if msg.contains("nilpotent") => invalid("axis", msg),
            other => invalid("motion", other.to_string()),
        })?;
        Ok(LoadedConfig {
            motion,
            points,
            meta: self.meta.clone(),
        })
    }

    pub fn from_motion(motion: &Motion, points: &[DualVec3], meta: &BTreeMap<String, String>) -> Self {
        let c = motion.translation();
        Self {
            mode: motion.mode().into(),
            axis: motion.axis_vector().into(),
            h: function_to_config(motion.h()),
            translation: std::array::from_fn(|i| function_to_config(&c.0[i])),
            points: points.iter().map(|&p| p.into()).collect(),
            meta: meta.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

impl LoadedConfig {
    pub fn to_config(&self) -> MotionConfig {
        MotionConfig::from_motion(&self.motion, &self.points, &self.meta)
    }
}

pub fn load_config_str(text: &str) -> Result<LoadedConfig, ConfigError> {
    MotionConfig::parse(text)?.validate()
}

pub fn load_config(path: impl AsRef<Path>) -> Result<LoadedConfig, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    load_config_str(&text)
}
