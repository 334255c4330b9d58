//! Executes a scenario's analyses against the core library.

use std::time::{Duration, Instant};

use mulsemi::dsl::{build_phi, build_section, FieldBuildError};
use mulsemi::mulop::{GrowthFlag, MulOpError, MulOperator, SpectrumReport};
use mulsemi::semigroup::{
    recover_phi_from_semigroup, ContinuityReport, SemigroupError, SemigroupEvaluator,
    SemigroupSamples, T0Report,
};
use mulsemi::space::Section;
use mulsemi::C64;
use thiserror::Error;

use crate::scenario::{Analysis, Scenario};

#[derive(Debug, Error)]
#[error("analysis `{analysis}`: {source}")]
pub struct AnalysisError {
    pub analysis: String,
    #[source]
    pub source: CoreError,
}

#[derive(Debug, Error)]
pub enum CoreError {
    #[error(transparent)]
    Field(#[from] FieldBuildError),
    #[error(transparent)]
    Op(#[from] MulOpError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormOutcome {
    pub operator_norm: f64,
    pub growth: GrowthFlag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvertOutcome {
    pub invertible: bool,
    /// Label of the point carrying the smallest entry modulus.
    pub point: String,
    /// Coordinate index of that entry.
    pub entry: usize,
    pub min_modulus: f64,
    pub inverse_norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveRow {
    pub t: f64,
    pub semigroup_norm: f64,
    pub evolved_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorRow {
    pub h: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoverRow {
    pub point: String,
    pub entry: usize,
    pub recovered: C64,
    /// `|recovered - actual|` against the scenario's own symbol.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisOutcome {
    Norm(NormOutcome),
    Invert(InvertOutcome),
    Spectrum(SpectrumReport<f64>),
    Evolve(Vec<EvolveRow>),
    Continuity(ContinuityReport<f64>),
    Generator(Vec<GeneratorRow>),
    T0(T0Report<f64>),
    Recover(Vec<RecoverRow>),
}

/// Everything a run produced, in the order the scenario requested it.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub scenario: Scenario,
    pub version: String,
    pub results: Vec<(String, AnalysisOutcome)>,
    /// Wall-clock per analysis; informational only, never emitted.
    pub timings: Vec<(String, Duration)>,
}

fn err(analysis: &str, source: impl Into<CoreError>) -> AnalysisError {
    AnalysisError {
        analysis: analysis.to_string(),
        source: source.into(),
    }
}

pub fn run(scenario: &Scenario) -> Result<RunReport, AnalysisError> {
    let phi = build_phi(&scenario.phi, &scenario.space).map_err(|e| err("setup", e))?;
    let op = MulOperator::with_domain_tolerance(phi, scenario.domain_tolerance);
    let section: Option<Section<f64>> = match &scenario.section {
        Some(entries) => Some(
            build_section(entries, &scenario.space, scenario.norm_spec.clone())
                .map_err(|e| err("setup", e))?,
        ),
        None => None,
    };
    let evaluator = SemigroupEvaluator::new(op);

    let mut results = Vec::with_capacity(scenario.analyses.len());
    let mut timings = Vec::with_capacity(scenario.analyses.len());
    for analysis in &scenario.analyses {
        let name = analysis.name();
        let started = Instant::now();
        let outcome = run_analysis(analysis, &evaluator, section.as_ref())?;
        timings.push((name.to_string(), started.elapsed()));
        results.push((name.to_string(), outcome));
    }

    Ok(RunReport {
        scenario: scenario.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        results,
        timings,
    })
}

fn need_section<'a>(
    name: &str,
    section: Option<&'a Section<f64>>,
) -> Result<&'a Section<f64>, AnalysisError> {
    section.ok_or_else(|| err(name, CoreError::Other("needs a [section] to act on".into())))
}

fn run_analysis(
    analysis: &Analysis,
    evaluator: &SemigroupEvaluator<f64>,
    section: Option<&Section<f64>>,
) -> Result<AnalysisOutcome, AnalysisError> {
    let op = evaluator.op();
    let outcome = match analysis {
        Analysis::Norm => {
            let report = op.is_bounded();
            AnalysisOutcome::Norm(NormOutcome {
                operator_norm: report.sampled_norm,
                growth: report.growth,
            })
        }
        Analysis::Invert { tol } => {
            let (index, entry, modulus) = op.phi().min_entry_modulus();
            let outcome = match op.invert(*tol) {
                Ok(inverse) => InvertOutcome {
                    invertible: true,
                    point: op.phi().space().label(index),
                    entry,
                    min_modulus: modulus,
                    inverse_norm: Some(inverse.norm()),
                },
                Err(MulOpError::NotInvertible {
                    label,
                    entry,
                    modulus,
                    ..
                }) => InvertOutcome {
                    invertible: false,
                    point: label,
                    entry,
                    min_modulus: modulus,
                    inverse_norm: None,
                },
                Err(other) => return Err(err("invert", other)),
            };
            AnalysisOutcome::Invert(outcome)
        }
        Analysis::Spectrum {
            lambdas,
            threshold,
            pole_tol,
        } => {
            let grid = Scenario::eval_lambdas(lambdas)
                .map_err(|e| err("spectrum", CoreError::Other(e)))?;
            AnalysisOutcome::Spectrum(op.spectrum_scan(&grid, *threshold, *pole_tol))
        }
        Analysis::Evolve { t_grid } => {
            let s = need_section("evolve", section)?;
            let mut rows = Vec::with_capacity(t_grid.len());
            for &t in t_grid {
                let moved = evaluator.evolve(s, t).map_err(|e| err("evolve", e))?;
                rows.push(EvolveRow {
                    t,
                    semigroup_norm: evaluator.semigroup_norm(t),
                    evolved_norm: moved.norm(),
                });
            }
            AnalysisOutcome::Evolve(rows)
        }
        Analysis::Continuity { t_grid } => {
            let s = need_section("continuity", section)?;
            let report = evaluator
                .continuity_profiles(s, t_grid)
                .map_err(|e| err("continuity", e))?;
            AnalysisOutcome::Continuity(report)
        }
        Analysis::Generator { h_seq } => {
            let s = need_section("generator", section)?;
            let mut rows = Vec::with_capacity(h_seq.len());
            for &h in h_seq {
                let gq = evaluator
                    .generator_diff_quotient(s, h)
                    .map_err(|e| err("generator", e))?;
                rows.push(GeneratorRow { h, error: gq.error });
            }
            AnalysisOutcome::Generator(rows)
        }
        Analysis::T0 { t0 } => AnalysisOutcome::T0(evaluator.check_t0_condition(*t0)),
        Analysis::Recover { h_seq } => {
            let pairs: Vec<(f64, _)> = h_seq.iter().map(|&h| (h, evaluator.sample(h))).collect();
            let samples = SemigroupSamples::new(pairs).map_err(|e| err("recover", e))?;
            let recovered =
                recover_phi_from_semigroup(&samples, h_seq).map_err(|e| err("recover", e))?;
            let actual = op.phi();
            let space = actual.space();
            let mut rows = Vec::new();
            for index in 0..actual.len() {
                let got = recovered.op(index).diag();
                let want = actual.op(index).diag();
                for entry in 0..got.len() {
                    rows.push(RecoverRow {
                        point: space.label(index),
                        entry,
                        recovered: got[entry],
                        deviation: (got[entry] - want[entry]).norm(),
                    });
                }
            }
            AnalysisOutcome::Recover(rows)
        }
    };
    Ok(outcome)
}
