use std::fs;
use std::io::Write;
use std::path::Path;

use cspursuit::experiment::{
    bounds_sweep, decay_validation, iteration_bound_experiment, run_trials, summarize,
    CertifiedSuite, TrialConfig,
};
use cspursuit::io::{
    bounds_csv, experiment_csv, format_real, format_vector, read_matrix, read_vector, trace_csv,
};
use cspursuit::recovery::default_max_iterations;
use cspursuit::theory::{
    bounds_row, crossover_delta, iteration_bound, iteration_constant_cosamp, CROSSOVER_TOLERANCE,
};
use cspursuit::{
    exact_ric, greedy_partition, monte_carlo_ric_lower_bound, run, Error, RecoveryConfig,
    SparseSignal, StoppingError,
};
use serde_json::json;

use crate::{
    BoundsArgs, CrossoverArgs, DecayArgs, ExperimentArgs, PartitionArgs, RecoverArgs, RicArgs,
    RicMethodArg, SweepArgs,
};

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn violation(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

fn code_of(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Parse { .. } => 2,
        _ => 1,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: code_of(&e),
            message: e.to_string(),
        }
    }
}

fn in_file<T>(flag: &str, path: &Path, r: cspursuit::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure {
        code: code_of(&e),
        message: format!("{flag} {}: {e}", path.display()),
    })
}

fn emit(flag: &str, out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let written = match out {
        Some(path) => fs::write(path, text).map_err(|e| (path.display().to_string(), e)),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| ("stdout".to_string(), e)),
    };
    written.map_err(|(target, e)| Failure {
        code: 2,
        message: format!("{flag} {target}: {e}"),
    })
}

fn echo(config: serde_json::Value) {
    eprintln!("config: {config}");
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize") + "\n"
}

fn path_str(p: &Option<std::path::PathBuf>) -> serde_json::Value {
    p.as_ref()
        .map_or(json!("-"), |p| json!(p.display().to_string()))
}

pub fn recover(args: RecoverArgs) -> Result<(), Failure> {
    let a = in_file("--matrix", &args.matrix, read_matrix(&args.matrix))?;
    let y = in_file(
        "--measurements",
        &args.measurements,
        read_vector(&args.measurements),
    )?;
    let truth = match &args.truth {
        Some(p) => Some(SparseSignal::new(in_file("--truth", p, read_vector(p))?)),
        None => None,
    };
    let stopping = args
        .epsilon
        .map_or(StoppingError::Relative, StoppingError::Absolute);
    let max_iter = args
        .max_iter
        .unwrap_or(default_max_iterations(args.sparsity));
    echo(json!({
        "command": "recover",
        "algorithm": args.algorithm.to_string(),
        "matrix": args.matrix.display().to_string(),
        "measurements": args.measurements.display().to_string(),
        "sparsity": args.sparsity,
        "epsilon": stopping.resolve(&y),
        "max_iter": max_iter,
        "trace": path_str(&args.trace),
        "truth": path_str(&args.truth),
        "out": path_str(&args.out),
    }));
    let config = RecoveryConfig::new(args.sparsity)
        .with_stopping_error(stopping)
        .with_max_iterations(max_iter);
    let result = run(args.algorithm, &a, &y, &config, truth.as_ref())?;
    if let Some(path) = &args.trace {
        emit("--trace", Some(path), &trace_csv(&result))?;
    }
    emit(
        "--out",
        args.out.as_deref(),
        &format_vector(result.estimate.values()),
    )?;
    eprintln!(
        "iterations={} converged={} residual_norm={}",
        result.iterations_used,
        result.converged,
        format_real(result.final_residual_norm)
    );
    if let Some(x) = &truth {
        let (support_ok, err) = cspursuit::experiment::recovery_error(&result.estimate, x);
        eprintln!(
            "support_match={support_ok} relative_error={}",
            format_real(err)
        );
    }
    Ok(())
}

pub fn ric(args: RicArgs) -> Result<(), Failure> {
    let a = in_file("--matrix", &args.matrix, read_matrix(&args.matrix))?;
    let method = match args.method {
        RicMethodArg::Exact => "exact",
        RicMethodArg::MonteCarlo => "monte-carlo",
    };
    echo(json!({
        "command": "ric",
        "matrix": args.matrix.display().to_string(),
        "order": args.order,
        "method": method,
        "trials": args.trials,
        "seed": args.seed,
        "out": path_str(&args.out),
    }));
    let est = match args.method {
        RicMethodArg::Exact => exact_ric(&a, args.order)?,
        RicMethodArg::MonteCarlo => {
            monte_carlo_ric_lower_bound(&a, args.order, args.trials, args.seed)?
        }
    };
    let label = match args.method {
        RicMethodArg::Exact => "exact",
        RicMethodArg::MonteCarlo => "monte-carlo-lower-bound",
    };
    let text = format!(
        "order,method,delta,subsets_examined,support\n{},{label},{},{},{}\n",
        est.order, est.delta, est.subsets_examined, est.extremal_support
    );
    emit("--out", args.out.as_deref(), &text)
}

fn check_delta(flag: &str, delta: f64) -> Result<(), Failure> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Failure::usage(format!(
            "{flag} {delta}: must lie in [0, 1)"
        )));
    }
    Ok(())
}

pub fn bounds(args: BoundsArgs) -> Result<(), Failure> {
    let rows = match (args.delta, args.delta_min, args.delta_max, args.steps) {
        (Some(delta), ..) => {
            echo(json!({
                "command": "bounds",
                "delta": delta,
                "variant": args.variant.to_string(),
                "out": path_str(&args.out),
            }));
            check_delta("--delta", delta)?;
            vec![bounds_row(delta, args.variant)]
        }
        (None, Some(lo), Some(hi), Some(steps)) => {
            echo(json!({
                "command": "bounds",
                "delta_min": lo,
                "delta_max": hi,
                "steps": steps,
                "variant": args.variant.to_string(),
                "out": path_str(&args.out),
            }));
            bounds_sweep(lo, hi, steps, args.variant)?
        }
        _ => {
            return Err(Failure::usage(
                "bounds needs --delta or all of --delta-min, --delta-max, --steps",
            ))
        }
    };
    emit(
        "--out",
        args.out.as_deref(),
        &bounds_csv(&rows, args.variant),
    )
}

pub fn sweep(args: SweepArgs) -> Result<(), Failure> {
    echo(json!({
        "command": "sweep",
        "delta_min": args.delta_min,
        "delta_max": args.delta_max,
        "steps": args.steps,
        "variant": args.variant.to_string(),
        "out": path_str(&args.out),
    }));
    let rows = bounds_sweep(args.delta_min, args.delta_max, args.steps, args.variant)?;
    emit(
        "--out",
        args.out.as_deref(),
        &bounds_csv(&rows, args.variant),
    )
}

pub fn experiment(args: ExperimentArgs) -> Result<(), Failure> {
    let mut config = TrialConfig::new(
        args.m,
        args.n,
        args.k,
        args.algorithm,
        args.trials,
        args.seed,
    );
    config.noise_sigma = args.noise_sigma;
    config.distribution = args.distribution;
    config.ensemble = args.ensemble;
    config.certify = args.certify;
    config.epsilon = args.epsilon;
    if let Some(max_iter) = args.max_iter {
        config.max_iterations = max_iter;
    }
    echo(json!({
        "command": "experiment",
        "trial_config": config,
        "out": path_str(&args.out),
        "summary": path_str(&args.summary),
    }));
    let records = run_trials(&config)?;
    let summary = summarize(&config, &records);
    emit(
        "--out",
        args.out.as_deref(),
        &experiment_csv(&config, &records),
    )?;
    let report = to_json(&summary);
    match &args.summary {
        Some(path) => emit("--summary", Some(path), &report)?,
        None => eprint!("{report}"),
    }
    if summary.violations > 0 {
        return Err(Failure::violation(format!(
            "{} hypothesis-met trials exceeded their ceil(cK) bound",
            summary.violations
        )));
    }
    Ok(())
}

pub fn decay(args: DecayArgs) -> Result<(), Failure> {
    let suite = CertifiedSuite::new(
        args.m,
        args.n,
        args.k,
        args.algorithm,
        args.trials,
        args.seed,
    )
    .with_ensemble(args.ensemble)
    .with_distribution(args.distribution);
    echo(json!({
        "command": "decay",
        "suite": suite,
        "out": path_str(&args.out),
    }));
    let decay = decay_validation(&suite)?;
    let bound = iteration_bound_experiment(&suite)?;
    let report = json!({ "decay": decay, "iteration_bound": bound });
    emit("--out", args.out.as_deref(), &to_json(&report))?;
    eprintln!(
        "hypothesis_met={} hypothesis_not_met={} decay_violations={} bound_violations={} schedule_violations={}",
        decay.hypothesis_met,
        decay.hypothesis_not_met,
        decay.violations.len(),
        bound.violations.len(),
        bound.schedule_violations.len()
    );
    let total = decay.violations.len() + bound.violations.len() + bound.schedule_violations.len();
    if total > 0 {
        return Err(Failure::violation(format!(
            "{total} property violations on hypothesis-met trials"
        )));
    }
    Ok(())
}

pub fn partition(args: PartitionArgs) -> Result<(), Failure> {
    let x = SparseSignal::new(in_file(
        "--signal",
        &args.signal,
        read_vector(&args.signal),
    )?);
    echo(json!({
        "command": "partition",
        "signal": args.signal.display().to_string(),
        "delta": args.delta,
        "out": path_str(&args.out),
    }));
    check_delta("--delta", args.delta)?;
    let schedule = greedy_partition(&x, args.delta)?;
    let bound = iteration_bound(iteration_constant_cosamp(args.delta)?, x.sparsity());
    let bands: Vec<_> = schedule
        .partitions
        .iter()
        .zip(&schedule.iterations)
        .map(|(indices, k)| json!({ "indices": indices, "iterations": k }))
        .collect();
    let report = json!({
        "delta": args.delta,
        "sparsity": x.sparsity(),
        "bands": bands,
        "total": schedule.total,
        "bound": bound,
    });
    emit("--out", args.out.as_deref(), &to_json(&report))?;
    if schedule.total > bound {
        return Err(Failure::violation(format!(
            "schedule total {} exceeds ceil(cK) = {bound}",
            schedule.total
        )));
    }
    Ok(())
}

pub fn crossover(args: CrossoverArgs) -> Result<(), Failure> {
    echo(json!({
        "command": "crossover",
        "variant": args.variant.to_string(),
        "tolerance": CROSSOVER_TOLERANCE,
        "out": path_str(&args.out),
    }));
    let c = crossover_delta(args.variant)?;
    let text = format!(
        "variant,delta_3k,lo,hi,gap_lo,gap_hi,tolerance\n{},{},{},{},{},{},{}\n\
         # reference interval 0.0446 < delta_3k < 0.4859: not reproduced, open question\n",
        c.variant,
        format_real(c.delta),
        format_real(c.lo),
        format_real(c.hi),
        format_real(c.f_lo),
        format_real(c.f_hi),
        format_real(CROSSOVER_TOLERANCE),
    );
    emit("--out", args.out.as_deref(), &text)
}
