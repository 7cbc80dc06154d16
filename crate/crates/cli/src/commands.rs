//! Subcommand implementations: load config, apply flag overrides, delegate
//! to the library, emit the artifact.

use std::fs;

use negligible::eval::{
    coexistence_diagnostic, exact_hp, mc_hp, trial_rng, write_sweep_csv, CoexistenceDiagnostic,
};
use negligible::flrm::{self, LookupModel};
use negligible::limits::{
    self, diagonalize, flrm_for_domain, nfl_brute_force, verify_diagonal, DiagonalRow,
};
use negligible::oracle::generate_qualified;
use negligible::shannon::{check_source_coding, smallest_high_mass_set, write_typical_csv};
use negligible::{
    EvalSettings, Experiment, Flrm, GroundTruth, MemorizeThenConstant, NflInstance,
    StringDistribution,
};
use negligible::{HallucinationReport, NecessityBound, SufficiencyBound, TypicalSetReport};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::config::*;
use crate::output::{csv_artifact, emit, json_artifact};
use crate::{Command, Common, Failure, Format};

#[derive(Serialize)]
struct BoundsResult {
    sufficiency: SufficiencyBound,
    necessity: NecessityBound,
}

#[derive(Serialize)]
struct TrainEvalResult {
    threshold: i64,
    table_size: usize,
    hallucination: HallucinationReport,
    diagnostic: CoexistenceDiagnostic,
}

#[derive(Serialize)]
struct DiagResult {
    verified: bool,
    rows: Vec<DiagonalRow>,
}

#[derive(Serialize)]
struct TypicalResult {
    report: TypicalSetReport,
    source_coding_holds: bool,
}

pub fn run(command: Command, common: &Common) -> Result<(), Failure> {
    match command {
        Command::Bounds => bounds(common),
        Command::TrainEval => train_eval(common),
        Command::Sweep => sweep(common),
        Command::NflVerify => nfl_verify(common),
        Command::Diagonalize => diag(common),
        Command::TypicalSet => typical(common),
    }
}

fn load<C: DeserializeOwned>(common: &Common) -> Result<C, Failure> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| Failure::config("--config PATH is required"))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::config(format!("invalid config {}: {e}", path.display())))
}

fn finish_json<C: Serialize, R: Serialize>(
    common: &Common,
    config: &C,
    seed: u64,
    result: &R,
) -> Result<(), Failure> {
    emit(&json_artifact(config, seed, result)?, common.out.as_deref())
}

fn bounds(common: &Common) -> Result<(), Failure> {
    let mut cfg: BoundsConfig = load(common)?;
    cfg.seed = common.seed.unwrap_or(cfg.seed);
    let sufficiency =
        limits::required_sample_size(&cfg.epsilon_h, &cfg.epsilon_t, &cfg.alphabet, &cfg.bound)?;
    let necessity = limits::nfl_sizes(&cfg.alphabet, &cfg.bound)?;
    finish_json(
        common,
        &cfg,
        cfg.seed,
        &BoundsResult {
            sufficiency,
            necessity,
        },
    )
}

struct Prepared {
    gt: GroundTruth,
    flrm: Flrm,
    settings: EvalSettings,
}

/// Validates the pieces against each other and checks that the distribution
/// dominates the bound.
fn prepare(setup: LearningSetup<'_>) -> Result<Prepared, Failure> {
    let gt = GroundTruth::from_spec(setup.alphabet.clone(), setup.ground_truth.clone())?;
    match setup.distribution {
        StringDistribution::LengthFactored(l) if l.alphabet() != setup.alphabet => {
            return Err(Failure::config(
                "distribution alphabet differs from the config alphabet",
            ));
        }
        d => {
            if let Some(support) = d.support() {
                for (s, _) in &support {
                    setup.alphabet.validate(s)?;
                }
            }
        }
    }
    let horizon = setup
        .horizon
        .unwrap_or(setup.bound.table().len() as u64 + 64);
    if !setup.distribution.dominates(setup.bound, horizon)? {
        return Err(Failure::new(4, "mu does not dominate CDF bound"));
    }
    let settings = EvalSettings {
        labeler: setup.labeler,
        mc_samples: setup.mc_samples,
        confidence: setup.confidence,
    };
    Ok(Prepared {
        gt,
        flrm: Flrm::new(setup.alphabet.clone(), setup.bound.clone()),
        settings,
    })
}

fn train_eval(common: &Common) -> Result<(), Failure> {
    let mut cfg: TrainEvalConfig = load(common)?;
    cfg.seed = common.seed.unwrap_or(cfg.seed);
    let p = prepare(cfg.setup())?;
    let mut rng = trial_rng(cfg.seed, 0);
    let m = usize::try_from(cfg.m)
        .map_err(|_| Failure::new(3, "training size does not fit in memory"))?;
    let t = generate_qualified(&cfg.distribution, &p.gt, m, p.settings.labeler, &mut rng);
    let model = flrm::train(&t, &cfg.alphabet, &cfg.bound);
    let hallucination = match exact_hp(&model, &cfg.distribution, &p.gt) {
        Ok(r) => r,
        Err(negligible::Error::Unsupported(_)) => mc_hp(
            &model,
            &cfg.distribution,
            &p.gt,
            p.settings.mc_samples,
            p.settings.confidence,
            &mut rng,
        )?,
        Err(e) => return Err(e.into()),
    };
    let diagnostic = coexistence_diagnostic(
        &model,
        &cfg.alphabet,
        &cfg.distribution,
        &p.gt,
        cfg.witnesses,
    );
    let result = TrainEvalResult {
        threshold: model.threshold(),
        table_size: model.table().len(),
        hallucination,
        diagnostic,
    };
    finish_json(common, &cfg, cfg.seed, &result)
}

fn sweep(common: &Common) -> Result<(), Failure> {
    let mut cfg: SweepConfig = load(common)?;
    cfg.seed = common.seed.unwrap_or(cfg.seed);
    let p = prepare(cfg.setup())?;
    let exp = Experiment::new(&p.flrm, &cfg.distribution, &p.gt, p.settings);
    let rows = exp.sweep(&cfg.m_grid, cfg.trials, cfg.epsilon_h, cfg.seed)?;
    match common.format.unwrap_or(Format::Csv) {
        Format::Json => finish_json(common, &cfg, cfg.seed, &rows),
        Format::Csv => {
            let mut body = Vec::new();
            write_sweep_csv(&rows, &mut body)?;
            emit(&csv_artifact(&cfg, cfg.seed, &body)?, common.out.as_deref())
        }
    }
}

fn nfl_verify(common: &Common) -> Result<(), Failure> {
    let mut cfg: NflConfig = load(common)?;
    cfg.seed = common.seed.unwrap_or(cfg.seed);
    cfg.budget = common.budget.unwrap_or(cfg.budget);
    for s in cfg.domain.iter().chain(&cfg.codomain) {
        cfg.alphabet.validate(s)?;
    }
    let inst = NflInstance::new(cfg.domain.clone(), cfg.codomain.clone(), cfg.m)?;
    let budget = cfg.budget as u128;
    let report = match &cfg.learner {
        LearnerSpec::MemorizeThenConstant { fallback } => {
            let fallback = fallback.clone().unwrap_or_else(|| cfg.codomain[0].clone());
            nfl_brute_force(
                &inst,
                &MemorizeThenConstant { fallback },
                &cfg.lambda_h,
                budget,
            )?
        }
        LearnerSpec::Flrm { bound: Some(bound) } => nfl_brute_force(
            &inst,
            &Flrm::new(cfg.alphabet.clone(), bound.clone()),
            &cfg.lambda_h,
            budget,
        )?,
        LearnerSpec::Flrm { bound: None } => nfl_brute_force(
            &inst,
            &flrm_for_domain(&cfg.alphabet, &cfg.domain)?,
            &cfg.lambda_h,
            budget,
        )?,
    };
    finish_json(common, &cfg, cfg.seed, &report)?;
    if report.verified {
        Ok(())
    } else {
        Err(Failure::new(
            1,
            "instance NOT VERIFIED: the worst-case bound failed",
        ))
    }
}

fn diag(common: &Common) -> Result<(), Failure> {
    let mut cfg: DiagConfig = load(common)?;
    cfg.seed = common.seed.unwrap_or(cfg.seed);
    let models: Vec<LookupModel> = match &cfg.models {
        ModelsSpec::RandomTables { count } => limits::random_table_models(
            &cfg.alphabet,
            *count,
            cfg.horizon,
            &mut trial_rng(cfg.seed, 0),
        ),
        ModelsSpec::Tables { tables } => tables
            .iter()
            .map(|t| {
                for e in &t.entries {
                    cfg.alphabet.validate(&e.s)?;
                    cfg.alphabet.validate(&e.y)?;
                }
                cfg.alphabet.validate(&t.fallback)?;
                Ok(LookupModel {
                    table: t
                        .entries
                        .iter()
                        .map(|e| (e.s.clone(), e.y.clone()))
                        .collect(),
                    fallback: t.fallback.clone(),
                })
            })
            .collect::<Result<_, negligible::Error>>()?,
    };
    let c = diagonalize(models, &cfg.alphabet, cfg.horizon)?;
    let verified = verify_diagonal(&c);
    match common.format.unwrap_or(Format::Csv) {
        Format::Json => finish_json(
            common,
            &cfg,
            cfg.seed,
            &DiagResult {
                verified,
                rows: c.rows(),
            },
        )?,
        Format::Csv => {
            let mut body = Vec::new();
            c.write_csv(&mut body)?;
            emit(&csv_artifact(&cfg, cfg.seed, &body)?, common.out.as_deref())?
        }
    }
    if verified {
        Ok(())
    } else {
        Err(Failure::new(1, "diagonal construction failed verification"))
    }
}

fn typical(common: &Common) -> Result<(), Failure> {
    let mut cfg: TypicalConfig = load(common)?;
    cfg.seed = common.seed.unwrap_or(cfg.seed);
    cfg.budget = common.budget.unwrap_or(cfg.budget);
    let report = smallest_high_mass_set(&cfg.source, cfg.m, &cfg.delta, cfg.budget as u128)?;
    let holds = check_source_coding(&report, cfg.epsilon);
    match common.format.unwrap_or(Format::Json) {
        Format::Json => finish_json(
            common,
            &cfg,
            cfg.seed,
            &TypicalResult {
                report,
                source_coding_holds: holds,
            },
        ),
        Format::Csv => {
            let mut body = Vec::new();
            write_typical_csv(std::slice::from_ref(&report), &mut body)?;
            emit(&csv_artifact(&cfg, cfg.seed, &body)?, common.out.as_deref())
        }
    }
}
