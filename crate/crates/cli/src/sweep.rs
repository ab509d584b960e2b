//! The threshold sweep: the integer protocol (k in [1,10] by default) and
//! the fractional protocol (multiples of 0.05 in [0.05, 0.60] by default),
//! with trials running concurrently over the shared graph and rows emitted
//! in deterministic order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use tipcascade::cascade::verify_seed;
use tipcascade::decomp::tip_decomp;
use tipcascade::graph::DirectedGraph;
use tipcascade::metrics::{bound_ratio, reichman_bound};
use tipcascade::thresholds::{parse_exact_ratio, resolve, ThresholdSpec};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Trial {
    Int(u32),
    Frac { num: u64, den: u64 },
}

/// Inclusive integer range `A..B` (or a single value).
pub fn parse_int_range(text: &str) -> Result<(u32, u32), CliError> {
    let invalid = || CliError::Usage(format!("--int expects `LO..HI`, got {text:?}"));
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (
            lo.parse::<u32>().map_err(|_| invalid())?,
            hi.parse::<u32>().map_err(|_| invalid())?,
        ),
        None => {
            let k = text.parse::<u32>().map_err(|_| invalid())?;
            (k, k)
        }
    };
    if lo == 0 || hi < lo {
        return Err(invalid());
    }
    Ok((lo, hi))
}

/// Fraction range `START..END:STEP` over exact decimal ratios.
pub fn parse_frac_range(text: &str) -> Result<Vec<(u64, u64)>, CliError> {
    let invalid = || {
        CliError::Usage(format!(
            "--frac expects `START..END:STEP` decimals, got {text:?}"
        ))
    };
    let (range, step) = text.split_once(':').ok_or_else(invalid)?;
    let (start, end) = range.split_once("..").ok_or_else(invalid)?;
    let start = parse_exact_ratio(start).ok_or_else(invalid)?;
    let end = parse_exact_ratio(end).ok_or_else(invalid)?;
    let step = parse_exact_ratio(step).ok_or_else(invalid)?;
    enumerate_fractions(start, end, step).ok_or_else(invalid)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Walk start, start+step, ..., end over a common denominator.
fn enumerate_fractions(
    start: (u64, u64),
    end: (u64, u64),
    step: (u64, u64),
) -> Option<Vec<(u64, u64)>> {
    let lcm = |a: u64, b: u64| a / gcd(a, b) * b;
    let den = lcm(lcm(start.1, end.1), step.1);
    let a = start.0.checked_mul(den / start.1)?;
    let e = end.0.checked_mul(den / end.1)?;
    let s = step.0.checked_mul(den / step.1)?;
    if a == 0 || s == 0 || e < a || e > den {
        return None;
    }
    let mut values = Vec::new();
    let mut num = a;
    while num <= e {
        values.push((num, den));
        num += s;
    }
    Some(values)
}

pub fn build_trials(int_range: (u32, u32), fracs: Vec<(u64, u64)>) -> Vec<Trial> {
    let mut trials: Vec<Trial> = (int_range.0..=int_range.1).map(Trial::Int).collect();
    trials.extend(fracs.into_iter().map(|(num, den)| Trial::Frac { num, den }));
    trials
}

struct RowData {
    trial: Trial,
    seed_size: usize,
    seed_fraction: f64,
    bound: Option<f64>,
    ratio: Option<f64>,
    runtime_ms: f64,
}

fn run_trial(g: &DirectedGraph, trial: Trial) -> Result<RowData, CliError> {
    let spec = match trial {
        Trial::Int(k) => ThresholdSpec::integer_cap(k),
        Trial::Frac { num, den } => ThresholdSpec::fraction(num, den),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;

    let started = Instant::now();
    let assignment = resolve(g, &spec).map_err(|e| CliError::Data(e.to_string()))?;
    let result = tip_decomp(g, &assignment);
    let runtime_ms = started.elapsed().as_secs_f64() * 1e3;

    let check = verify_seed(g, &assignment, result.seed.members())
        .map_err(|e| CliError::Data(e.to_string()))?;
    if !check.complete {
        return Err(CliError::Data(format!(
            "trial {trial:?}: seed failed verification ({}/{} activated)",
            check.activated,
            g.n()
        )));
    }

    let bound = match (&trial, g.is_symmetric()) {
        (Trial::Int(_), true) => {
            Some(reichman_bound(g, &spec).map_err(|e| CliError::Data(e.to_string()))?)
        }
        _ => None,
    };
    let ratio = match bound {
        Some(b) if b > 0.0 => {
            Some(bound_ratio(&result.seed, b).map_err(|e| CliError::Data(e.to_string()))?)
        }
        _ => None,
    };

    Ok(RowData {
        trial,
        seed_size: result.seed.size(),
        seed_fraction: result.seed.fraction(),
        bound,
        ratio,
        runtime_ms,
    })
}

pub const SWEEP_HEADER: &str =
    "graph_name,threshold_kind,threshold_value,seed_size,seed_fraction,reichman_bound,bound_ratio,runtime_ms";

fn format_row(name: &str, row: &RowData, stable: bool) -> String {
    let (kind, value) = match row.trial {
        Trial::Int(k) => ("int", k.to_string()),
        Trial::Frac { num, den } => ("frac", format!("{:.6}", num as f64 / den as f64)),
    };
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
    let runtime = if stable {
        String::new()
    } else {
        format!("{:.6}", row.runtime_ms)
    };
    format!(
        "{name},{kind},{value},{},{:.6},{},{},{runtime}",
        row.seed_size,
        row.seed_fraction,
        opt(row.bound),
        opt(row.ratio),
    )
}

/// Run all trials over the shared graph with `workers` threads and return
/// CSV lines (header included) in deterministic trial order.
pub fn run_sweep(
    g: &DirectedGraph,
    name: &str,
    trials: &[Trial],
    workers: usize,
    stable: bool,
) -> Result<Vec<String>, CliError> {
    let workers = workers.max(1).min(trials.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<RowData, CliError>>>> =
        trials.iter().map(|_| Mutex::new(None)).collect();

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= trials.len() {
                    break;
                }
                let outcome = run_trial(g, trials[i]);
                *slots[i].lock().unwrap() = Some(outcome);
            });
        }
    });

    let mut lines = vec![SWEEP_HEADER.to_string()];
    for slot in slots {
        let outcome = slot
            .into_inner()
            .unwrap()
            .expect("worker filled every slot");
        lines.push(format_row(name, &outcome?, stable));
    }
    Ok(lines)
}
