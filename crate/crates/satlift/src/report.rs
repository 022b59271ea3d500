//! Report assembly: runs the pipeline over patterns and cover degrees and
//! emits machine-readable reports. All rationals render as exact `p/q`
//! strings; JSON reports round-trip losslessly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::corpus;
use crate::diagram::{parse_word, DiagramError, Word};
use crate::exact::{rat_from_string, Rat, RatMatrix};
use crate::pipeline::{
    check_maincomp, check_mainextended, check_mainnullhom, cover_data_from_pattern, Ambient,
    CoverData, Outcome, PipelineError, Provenance, Verdict,
};
use crate::seifert::is_prime_power;

pub const REPORT_SCHEMA: &str = "satlift.report.v1";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("requested degree {0} exceeds the cap {1}")]
    DegreeCapped(u32, u32),
    #[error("degree {q} is not admissible for winding {w}: {reason}")]
    Inadmissible { q: u32, w: i64, reason: String },
    #[error("pattern '{0}' is not a built-in")]
    UnknownBuiltin(String),
    #[error("annular pattern word required for cover analysis, got a braid word")]
    NotAPattern,
}

impl ReportError {
    /// Stable process exit code: 2 for parse errors, 3 for consistency
    /// errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportError::Parse(_) | ReportError::Diagram(_) | ReportError::UnknownBuiltin(_) => 2,
            _ => 3,
        }
    }
}

/// A pattern description file: the word in the text grammar plus optional
/// user cover data keyed by cover degree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternFile {
    pub name: String,
    pub word: String,
    #[serde(default)]
    pub declared_slice_unknot: bool,
    #[serde(default)]
    pub cover_data: BTreeMap<String, UserCoverInput>,
}

/// User-supplied cover data for one degree (used when the branch locus is
/// knotted and the lift cannot be computed from the diagram).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UserCoverInput {
    pub w: i64,
    pub ambient: Ambient,
    pub lk: RatMatrix,
    #[serde(default)]
    pub fr: Option<Vec<String>>,
    pub n: u64,
}

impl UserCoverInput {
    pub fn to_cover_data(&self, q: u32) -> Result<CoverData, ReportError> {
        let fr: Option<Vec<Rat>> = match &self.fr {
            None => None,
            Some(v) => Some(
                v.iter()
                    .map(|s| {
                        rat_from_string(s)
                            .ok_or_else(|| ReportError::Parse(format!("bad rational '{s}'")))
                    })
                    .collect::<Result<_, _>>()?,
            ),
        };
        Ok(CoverData::new(
            q,
            self.w,
            self.ambient.clone(),
            self.lk.clone(),
            fr,
            self.n,
            Provenance::UserSupplied,
        )?)
    }
}

/// One analyzed degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub q: u32,
    pub cover: CoverData,
    pub verdict: Verdict,
}

/// The full analysis of one pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub pattern: String,
    pub word: Option<String>,
    pub winding: Option<i64>,
    pub declared_slice_unknot: bool,
    pub entries: Vec<ReportEntry>,
    pub notes: Vec<String>,
}

/// Degree-selection options for an analysis run.
#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    /// Explicit degrees; when empty, every admissible prime power up to the
    /// cap is used.
    pub degrees: Vec<u32>,
    pub max_q: u32,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            degrees: Vec::new(),
            max_q: 7,
        }
    }
}

/// Prime powers up to the cap that divide the winding (every degree divides
/// a zero winding).
pub fn admissible_degrees(w: i64, max_q: u32) -> Vec<u32> {
    (2..=max_q)
        .filter(|&q| is_prime_power(q as u64) && (w == 0 || w.rem_euclid(q as i64) == 0))
        .collect()
}

/// Analyzes a pattern file: diagram-computed lifts for admissible degrees,
/// user cover data where provided.
pub fn analyze(file: &PatternFile, opts: &AnalyzeOptions) -> Result<Report, ReportError> {
    let word = parse_word(&file.word)?;
    let pattern = match &word {
        Word::Annular(a) => a.clone(),
        Word::Braid(_) => return Err(ReportError::NotAPattern),
    };
    let w = pattern.winding();

    let mut degrees: Vec<u32> = if opts.degrees.is_empty() {
        let mut qs = admissible_degrees(w, opts.max_q);
        // Degrees with user-supplied data are analyzable even when the
        // diagram path is not admissible for them.
        for key in file.cover_data.keys() {
            if let Ok(q) = key.parse::<u32>() {
                if q <= opts.max_q && !qs.contains(&q) {
                    qs.push(q);
                }
            }
        }
        qs
    } else {
        for &q in &opts.degrees {
            if q > opts.max_q {
                return Err(ReportError::DegreeCapped(q, opts.max_q));
            }
            if !is_prime_power(q as u64) {
                return Err(ReportError::Inadmissible {
                    q,
                    w,
                    reason: "not a prime power".into(),
                });
            }
            let has_user = file.cover_data.contains_key(&q.to_string());
            if !has_user && w != 0 && w.rem_euclid(q as i64) != 0 {
                return Err(ReportError::Inadmissible {
                    q,
                    w,
                    reason: "does not divide the winding number".into(),
                });
            }
        }
        opts.degrees.clone()
    };
    degrees.sort_unstable();
    degrees.dedup();

    let mut entries = Vec::new();
    for q in degrees {
        let cover = match file.cover_data.get(&q.to_string()) {
            Some(user) => user.to_cover_data(q)?,
            None => cover_data_from_pattern(&pattern, q)?,
        };
        let verdict = if cover.n == 1 {
            check_mainnullhom(&cover)?
        } else {
            check_mainextended(&cover)?
        };
        entries.push(ReportEntry { q, cover, verdict });
    }

    let mut notes = Vec::new();
    if entries.is_empty() {
        notes.push(format!(
            "no admissible prime-power degree up to {} for winding {w}; nothing to check",
            opts.max_q
        ));
    }
    if !file.declared_slice_unknot {
        notes.push(
            "the pattern knot is not declared slice; homomorphism obstructions are \
             independent of that declaration, but pseudo-homomorphism claims require it"
                .into(),
        );
    }

    Ok(Report {
        schema: REPORT_SCHEMA.into(),
        pattern: file.name.clone(),
        word: Some(file.word.clone()),
        winding: Some(w),
        declared_slice_unknot: file.declared_slice_unknot,
        entries,
        notes,
    })
}

/// Looks up a built-in pattern as a pattern file.
pub fn builtin_file(name: &str) -> Result<PatternFile, ReportError> {
    let p = corpus::builtin_pattern(name).ok_or_else(|| ReportError::UnknownBuiltin(name.into()))?;
    Ok(PatternFile {
        name: p.name.into(),
        word: p.word.to_string(),
        declared_slice_unknot: p.declared_slice_unknot,
        cover_data: BTreeMap::new(),
    })
}

/// The composition demo: the (2,1)-cable's degree-2 data composed with the
/// winding of the 3-strand alternating cable.
pub fn composition_demo() -> Result<Report, ReportError> {
    let outer = corpus::cable_pattern(2);
    let cd = cover_data_from_pattern(&outer, 2)?;
    let w_r = corpus::alternating_cable_pattern(3).winding();
    let verdict = check_maincomp(&cd, w_r)?;
    let composed = crate::pipeline::compose_cover_data(&cd, w_r)?;
    Ok(Report {
        schema: REPORT_SCHEMA.into(),
        pattern: "compose-cable-2-1-alt-cable-3".into(),
        word: None,
        winding: Some(composed.w),
        declared_slice_unknot: true,
        entries: vec![ReportEntry {
            q: 2,
            cover: composed,
            verdict,
        }],
        notes: vec![
            "composition of the (2,1)-cable with the 3-strand alternating cable, analyzed at \
             the cover level"
                .into(),
        ],
    })
}

fn corpus_tasks() -> Vec<PatternFile> {
    corpus::builtin_patterns()
        .into_iter()
        .map(|p| PatternFile {
            name: p.name.into(),
            word: p.word.to_string(),
            declared_slice_unknot: p.declared_slice_unknot,
            cover_data: BTreeMap::new(),
        })
        .collect()
}

/// Analyzes every built-in pattern plus the composition demo. Entries are
/// deterministic: sorted by name, then degree.
pub fn analyze_corpus(opts: &AnalyzeOptions) -> Result<Vec<Report>, ReportError> {
    let tasks = corpus_tasks();
    #[cfg(feature = "parallel")]
    let mut reports: Vec<Report> = tasks
        .par_iter()
        .map(|f| analyze(f, opts))
        .collect::<Result<_, _>>()?;
    #[cfg(not(feature = "parallel"))]
    let mut reports: Vec<Report> = tasks
        .iter()
        .map(|f| analyze(f, opts))
        .collect::<Result<_, _>>()?;
    reports.push(composition_demo()?);
    reports.sort_by(|a, b| a.pattern.cmp(&b.pattern));
    Ok(reports)
}

/// Sequential corpus analysis; the benchmark baseline.
pub fn analyze_corpus_seq(opts: &AnalyzeOptions) -> Result<Vec<Report>, ReportError> {
    let tasks = corpus_tasks();
    let mut reports: Vec<Report> = tasks
        .iter()
        .map(|f| analyze(f, opts))
        .collect::<Result<_, _>>()?;
    reports.push(composition_demo()?);
    reports.sort_by(|a, b| a.pattern.cmp(&b.pattern));
    Ok(reports)
}

/// Renders a report as human-readable text.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "pattern: {}", report.pattern);
    if let Some(word) = &report.word {
        let _ = writeln!(out, "word:    {word}");
    }
    if let Some(w) = report.winding {
        let _ = writeln!(out, "winding: {w}");
    }
    for entry in &report.entries {
        let v = &entry.verdict;
        let outcome = match v.outcome {
            Outcome::NotHomomorphism => "NOT a homomorphism",
            Outcome::NotPseudoHomomorphism => "NOT a pseudo-homomorphism",
            Outcome::Inconclusive => "inconclusive",
        };
        let mirrored = if v.mirrored { " (via mirror)" } else { "" };
        let _ = writeln!(out, "  q={}: {}{}", entry.q, outcome, mirrored);
        let _ = writeln!(
            out,
            "    provenance: {}",
            match entry.cover.provenance {
                Provenance::DiagramComputed => "diagram-computed",
                Provenance::UserSupplied => "user-supplied",
            }
        );
        for h in &v.hypotheses {
            let mark = if h.passed { "pass" } else { "FAIL" };
            if h.detail.is_empty() {
                let _ = writeln!(out, "    [{mark}] {}", h.name);
            } else {
                let _ = writeln!(out, "    [{mark}] {} ({})", h.name, h.detail);
            }
        }
        if let Some(cert) = &v.certificate {
            let _ = writeln!(
                out,
                "    certificate: {} twist move(s), clasper {}, c0 = {}, bound {}",
                cert.twist_reduction.two_handle_count,
                cert.clasper_step.verdict,
                cert.lens_normalization.c0.render(),
                cert.bound.bound_expression
            );
        }
    }
    for n in &report.notes {
        let _ = writeln!(out, "  note: {n}");
    }
    out
}
