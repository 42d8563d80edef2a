//! Sweeps over sample nodes producing fixed-schema tables, rendered as CSV
//! or JSON.
//!
//! Every node yields exactly one row. Nodes where the evaluation fails keep
//! their row with empty numeric cells (or `null` in JSON) and a status code:
//!
//! | status            | meaning                                   |
//! |-------------------|-------------------------------------------|
//! | `OK`              | regular node                              |
//! | `SINGULAR_HPRIME` | `H′` singular; `det H′` columns filled    |
//! | `SINGULAR_HSECOND`| `H″` singular; invariant columns filled   |
//! | `ZERO_H`          | `h̃(t)` has a vanishing real part          |
//! | `POLE`            | a denominator vanishes at `t`             |
//! | `ERROR`           | any other numerical failure               |

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::acceleration::{accel_center, accel_decompose, AccelCenterResult};
use crate::dual_scalar::DualScalar;
use crate::error::Error;
use crate::function::VecFunction;
use crate::lorentz::DualVec3;
use crate::motion::{det_is_singular, sample_nodes, Motion};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Evaluate,
    Velocities,
    Poles,
    Accel,
    Centers,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Evaluate => "evaluate",
            Command::Velocities => "velocities",
            Command::Poles => "poles",
            Command::Accel => "accel",
            Command::Centers => "centers",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub t0: f64,
    pub t1: f64,
    pub samples: usize,
    /// Derivative order of `Ỹ` for [`Command::Evaluate`].
    pub order: usize,
    pub tol: f64,
    pub parallel: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            t0: 0.0,
            t1: 1.0,
            samples: 256,
            order: 0,
            tol: crate::acceleration::DEGENERACY_TOL,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub t: f64,
    /// One entry per numeric column; `None` renders as an empty cell.
    pub values: Vec<Option<f64>>,
    /// Degeneracy kind for [`Command::Centers`].
    pub kind: Option<&'static str>,
    pub status: &'static str,
}

impl Row {
    pub fn is_ok(&self) -> bool {
        self.status == "OK"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: Command,
    /// Numeric column names after `t`.
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

fn vec_columns(prefix: &str) -> Vec<String> {
    ["re", "du"]
        .iter()
        .flat_map(|part| (1..=3).map(move |i| format!("{prefix}{part}{i}")))
        .collect()
}

fn dual_columns(prefix: &str) -> Vec<String> {
    vec![format!("{prefix}re"), format!("{prefix}du")]
}

pub fn columns(command: Command) -> Vec<String> {
    let groups: Vec<Vec<String>> = match command {
        Command::Evaluate => vec![vec_columns("Y")],
        Command::Velocities => vec![vec_columns("Va"), vec_columns("Vf"), vec_columns("Vr")],
        Command::Poles => vec![vec_columns("P"), vec_columns("Q"), dual_columns("detHp")],
        Command::Accel => vec![vec_columns("Ga"), vec_columns("Gf"), vec_columns("Gr"), vec_columns("Gc")],
        Command::Centers => vec![vec_columns("X"), dual_columns("mu"), dual_columns("factor"), dual_columns("detHpp")],
    };
    groups.concat()
}

fn push_vec(out: &mut Vec<Option<f64>>, v: &DualVec3) {
    out.extend(v.re.0.iter().chain(v.du.0.iter()).map(|&x| Some(x)));
}

fn push_dual(out: &mut Vec<Option<f64>>, x: DualScalar) {
    out.extend([Some(x.re), Some(x.du)]);
}

fn error_status(e: &Error) -> &'static str {
    match e {
        Error::ZeroRealPart { .. } => "ZERO_H",
        Error::PoleAtT { .. } => "POLE",
        Error::SingularHprime { .. } => "SINGULAR_HPRIME",
        _ => "ERROR",
    }
}

struct Sweep<'a> {
    motion: &'a Motion,
    point: VecFunction,
    command: Command,
    opts: SweepOptions,
    width: usize,
}

impl Sweep<'_> {
    fn failed(&self, t: f64, status: &'static str) -> Row {
        Row {
            t,
            values: vec![None; self.width],
            kind: None,
            status,
        }
    }

    fn ok(&self, t: f64, values: Vec<Option<f64>>) -> Row {
        debug_assert_eq!(values.len(), self.width);
        Row {
            t,
            values,
            kind: None,
            status: "OK",
        }
    }

    fn row(&self, t: f64) -> Row {
        self.try_row(t).unwrap_or_else(|e| self.failed(t, error_status(&e)))
    }

    fn try_row(&self, t: f64) -> crate::Result<Row> {
        let m = self.motion;
        let mut v = Vec::with_capacity(self.width);
        match self.command {
            Command::Evaluate => {
                push_vec(&mut v, &m.y_nth(t, &self.point, self.opts.order)?);
            }
            Command::Velocities => {
                let s = m.velocity_decompose(t, &self.point)?;
                push_vec(&mut v, &s.absolute);
                push_vec(&mut v, &s.sliding);
                push_vec(&mut v, &s.relative);
            }
            Command::Poles => {
                let f = m.frame(t, 1)?;
                let det = f.h_matrix_derivs[0].det();
                if det_is_singular(det.re, &f.h_matrix_derivs[0]) {
                    let mut row = self.failed(t, "SINGULAR_HPRIME");
                    row.values[12] = Some(det.re);
                    row.values[13] = Some(det.du);
                    return Ok(row);
                }
                let pole = m.pole_point(t)?;
                let q = f.h_matrix * pole.p + f.c_derivs[0];
                let gap = (q - pole.q).max_abs() / (1.0 + q.max_abs());
                if !(gap <= 1e-12) {
                    return Ok(self.failed(t, "ERROR"));
                }
                push_vec(&mut v, &pole.p);
                push_vec(&mut v, &pole.q);
                push_dual(&mut v, det);
            }
            Command::Accel => {
                let a = accel_decompose(m, t, &self.point)?;
                push_vec(&mut v, &a.absolute);
                push_vec(&mut v, &a.sliding);
                push_vec(&mut v, &a.relative);
                push_vec(&mut v, &a.coriolis);
            }
            Command::Centers => {
                let det = m.h_nth(t, 2)?.det();
                match accel_center(m, t, self.opts.tol)? {
                    AccelCenterResult::Center { point, .. } => {
                        let inv = crate::acceleration::degeneracy_invariants(m, t)?;
                        push_vec(&mut v, &point);
                        push_dual(&mut v, inv.mu);
                        push_dual(&mut v, inv.factor);
                        push_dual(&mut v, det);
                    }
                    AccelCenterResult::Degenerate { kind, invariants } => {
                        let mut row = self.failed(t, "SINGULAR_HSECOND");
                        row.kind = Some(kind.as_str());
                        let tail = [invariants.mu, invariants.factor, det];
                        for (i, x) in tail.iter().enumerate() {
                            row.values[6 + 2 * i] = Some(x.re);
                            row.values[7 + 2 * i] = Some(x.du);
                        }
                        return Ok(row);
                    }
                }
            }
        }
        Ok(self.ok(t, v))
    }
}

/// Runs `command` over the sample nodes for the constant moving point `x`.
pub fn run(motion: &Motion, x: &DualVec3, command: Command, opts: &SweepOptions) -> Table {
    let cols = columns(command);
    let sweep = Sweep {
        motion,
        point: VecFunction::constant(x),
        command,
        opts: *opts,
        width: cols.len(),
    };
    let nodes = sample_nodes(opts.t0, opts.t1, opts.samples);
    let rows = if opts.parallel {
        nodes.par_iter().map(|&t| sweep.row(t)).collect()
    } else {
        nodes.iter().map(|&t| sweep.row(t)).collect()
    };
    Table {
        command,
        columns: cols,
        rows,
    }
}

/// Shared numeric text: 17 significant digits, which round-trips `f64`.
/// Negative zero prints as zero.
pub fn fmt_num(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

impl Table {
    pub fn all_failed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| !r.is_ok())
    }

    fn has_kind(&self) -> bool {
        self.command == Command::Centers
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["t".to_string()];
        h.extend(self.columns.iter().cloned());
        if self.has_kind() {
            h.push("kind".into());
        }
        h.push("status".into());
        h
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header().join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&fmt_num(r.t));
            for v in &r.values {
                out.push(',');
                if let Some(x) = v {
                    out.push_str(&fmt_num(*x));
                }
            }
            if self.has_kind() {
                out.push(',');
                out.push_str(r.kind.unwrap_or(""));
            }
            out.push(',');
            out.push_str(r.status);
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let num = |x: Option<f64>| match x {
            Some(x) if x.is_finite() => fmt_num(x),
            _ => "null".to_string(),
        };
        let mut out = String::new();
        let _ = write!(out, "{{\"command\":\"{}\",\"columns\":[", self.command.name());
        let header = self.header();
        out.push_str(&header.iter().map(|c| format!("\"{c}\"")).collect::<Vec<_>>().join(","));
        out.push_str("],\"rows\":[");
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("\n{");
            let _ = write!(out, "\"t\":{}", num(Some(r.t)));
            for (c, v) in self.columns.iter().zip(&r.values) {
                let _ = write!(out, ",\"{c}\":{}", num(*v));
            }
            if self.has_kind() {
                match r.kind {
                    Some(k) => {
                        let _ = write!(out, ",\"kind\":\"{k}\"");
                    }
                    None => out.push_str(",\"kind\":null"),
                }
            }
            let _ = write!(out, ",\"status\":\"{}\"}}", r.status);
        }
        out.push_str("\n]}\n");
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}
