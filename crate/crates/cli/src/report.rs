//! Report structure and its text rendering.

use std::fmt::Write as _;

use polyescape_core::bounds::{EigenCase, EscapeCertificate};
use polyescape_core::decide::{Decision, Mode, Outcome, PolytopeDefect};
use polyescape_core::simulate::{EscapeTime, TrajectoryRun, ValidationReport, ValidationStatus};
use polyescape_core::spectrum::EigenvalueEnclosure;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub decide_ms: f64,
    pub bound_ms: f64,
    pub simulate_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input_sha256: String,
    pub mode: Mode,
    pub dimension: usize,
    pub bit_size: u64,
    pub decision: Decision,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<EscapeCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runs: Option<Vec<TrajectoryRun>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    pub notes: Vec<String>,
    pub timings: Timings,
}

fn eigenvalue(e: &EigenvalueEnclosure) -> String {
    let re = if e.real_lo == e.real_hi {
        e.real_lo.to_string()
    } else {
        format!("[{:.9}, {:.9}]", f(&e.real_lo), f(&e.real_hi))
    };
    match (&e.imag_lo, &e.imag_hi) {
        (Some(lo), Some(hi)) => format!("{re} +/- i[{:.9}, {:.9}]", f(lo), f(hi)),
        _ => re,
    }
}

fn f(x: &polyescape_core::rational::Rational) -> f64 {
    polyescape_core::rational::to_f64(x)
}

fn case(c: EigenCase) -> &'static str {
    match c {
        EigenCase::Negative => "negative",
        EigenCase::Zero => "zero",
        EigenCase::Positive => "positive",
        EigenCase::Complex => "complex",
        EigenCase::CoveredBySteps => "covered by +d steps",
    }
}

fn escape(e: &EscapeTime) -> String {
    match e {
        EscapeTime::Continuous { lower, upper } => format!("{:.9} (certified exit by {upper}, not before {:.9} on the scan)", f(upper), f(lower)),
        EscapeTime::Discrete { steps } => format!("{steps} iterations"),
        EscapeTime::NotEscapedWithin { horizon } => format!("no exit within {horizon}"),
    }
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mode = match self.mode {
            Mode::Continuous => "continuous",
            Mode::Discrete => "discrete",
        };
        let _ = writeln!(s, "{} {} {}", self.tool, self.version, self.command);
        let _ = writeln!(s, "input sha256: {}", self.input_sha256);
        let _ = writeln!(s, "mode: {mode}, dimension: {}, bit size: {}", self.dimension, self.bit_size);
        let verdict = match self.decision.outcome {
            Outcome::AllEscape => "every trajectory escapes the polytope".to_string(),
            Outcome::TrappedPointExists => "a trapped point exists".to_string(),
            Outcome::InvalidPolytope(PolytopeDefect::Empty) => "invalid polytope: empty".to_string(),
            Outcome::InvalidPolytope(PolytopeDefect::Unbounded) => "invalid polytope: unbounded (a compact polytope is required)".to_string(),
        };
        let _ = writeln!(s, "decision: {verdict}");
        if let Some(w) = &self.decision.witness {
            let _ = writeln!(s, "  fixed point witness: {w}");
        }
        if let Some(c) = &self.certificate {
            let label = if c.mode == Mode::Discrete { "iteration bound N" } else { "escape-time bound T" };
            let _ = writeln!(s, "{label}: {}", c.total_bound);
            if let Some(t) = &c.continuous_time_bound {
                let _ = writeln!(s, "  time bound T (N = ceil(T) + d): {t}");
            }
            let _ = writeln!(s, "  complex hull time T_c: {}", c.complex_hull_time);
            let _ = writeln!(s, "  real escape time T_r: {}", c.real_bound);
            let _ = writeln!(s, "  ratio C/eps <= {} (exp(640 b d^(3d+8)))", c.ratio_bound);
            for e in &c.per_eigenvalue {
                let _ = writeln!(
                    s,
                    "  eigenvalue {} index {} multiplicity {}: {}, T = {}{}",
                    eigenvalue(&e.eigenvalue),
                    e.eigenvalue.index,
                    e.eigenvalue.alg_multiplicity,
                    case(e.case),
                    e.t_lambda,
                    if e.used_fallback { " (separation fallback)" } else { "" }
                );
            }
            let _ = writeln!(s, "  closed form 4 exp(640 b d^(4d+10)): {} ({})", c.closed_form_bound, if c.within_closed_form { "dominates" } else { "NOT certified to dominate" });
            if let Some(sb) = &c.special_case_bound {
                let _ = writeln!(s, "  diagonalizable and invertible: 4^(b d^2) = {sb}");
            }
            let _ = writeln!(s, "  spectrum precision: {} bits", c.spectrum_precision);
            for n in &c.notes {
                let _ = writeln!(s, "  note: {n}");
            }
        }
        if let Some(runs) = &self.runs {
            for r in runs {
                let _ = writeln!(s, "run from {}: {}", r.initial_point, escape(&r.escape));
            }
        }
        if let Some(v) = &self.validation {
            let status = match &v.status {
                ValidationStatus::Passed => "PASSED".to_string(),
                ValidationStatus::Failed => "FAILED".to_string(),
                ValidationStatus::Refused(r) => format!("REFUSED ({r})"),
            };
            let _ = writeln!(s, "validation: {status}");
            let _ = writeln!(s, "  runs: {}, failures: {}, unconfirmed: {}", v.runs.len(), v.failures, v.unconfirmed);
            let _ = writeln!(s, "  horizon: {} ({})", v.horizon, if v.bound_simulable { "the bound" } else { "simulation cap" });
            if let Some(m) = v.max_observed {
                let _ = writeln!(s, "  max observed escape: {m:.9}");
            }
            if let Some(sl) = v.slack_log10 {
                let _ = writeln!(s, "  slack log10(bound / observed): {sl:.3}");
            }
            for n in &v.notes {
                let _ = writeln!(s, "  note: {n}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let t = &self.timings;
        let _ = writeln!(s, "timings (ms): decide {:.1}, bound {:.1}, simulate {:.1}, total {:.1}", t.decide_ms, t.bound_ms, t.simulate_ms, t.total_ms);
        s
    }
}
