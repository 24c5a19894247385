//! Monte Carlo erasure trials. Output is CSV with `#` comment lines for
//! parameters and summary, fully determined by the seed.

use crate::cli::{ErasureModel, SimulateArgs};
use crate::commands::spec_from_args;
use crate::container::construction_label;
use crate::error::CliError;
use ambx_core::{decode, encode, DataGrid, DecodeStatus, Projection};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fs::File;
use std::io::{self, BufWriter, Write};

fn model_name(model: ErasureModel) -> &'static str {
    match model {
        ErasureModel::Uniform => "uniform",
        ErasureModel::Burst => "burst",
    }
}

/// Indices erased in one trial, sorted ascending. Each trial draws from its
/// own RNG stream so trial t is reproducible without replaying trials 0..t.
fn erased_indices(
    seed: u64,
    trial: u64,
    n: usize,
    erasures: usize,
    model: ErasureModel,
) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial + 1);
    let mut erased: Vec<usize> = match model {
        ErasureModel::Uniform => rand::seq::index::sample(&mut rng, n, erasures).into_vec(),
        ErasureModel::Burst => {
            if erasures == 0 {
                Vec::new()
            } else {
                let start = rng.random_range(0..n);
                (0..erasures).map(|offset| (start + offset) % n).collect()
            }
        }
    };
    erased.sort_unstable();
    erased
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let spec = spec_from_args(&args.code)?;
    let n = spec.n();
    if args.erasures > n {
        return Err(CliError::Usage(format!(
            "--erasures {} exceeds the code's {n} projections",
            args.erasures
        )));
    }

    // One fixed random payload; decoding success is a property of the
    // erasure pattern alone, so varying the payload adds nothing.
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    rng.set_stream(0);
    let mut payload = vec![0u8; spec.capacity()];
    rng.fill_bytes(&mut payload);
    let grid = DataGrid::from_bytes(&payload, spec.b(), spec.k(), spec.width())?;
    let projections = encode(&grid, &spec)?;

    let mut out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    writeln!(
        out,
        "# construction={} n={} k={} b={} width={}",
        construction_label(spec.construction()),
        n,
        spec.k(),
        spec.b(),
        spec.width()
    )?;
    writeln!(
        out,
        "# erasures={} model={} trials={} seed={} tolerance={}",
        args.erasures,
        model_name(args.model),
        args.trials,
        args.seed,
        spec.tolerance()
    )?;
    writeln!(out, "trial,erased_indices,success,steps")?;

    let mut successes: u64 = 0;
    let mut steps_on_success: u64 = 0;
    for trial in 0..args.trials {
        let erased = erased_indices(args.seed, trial, n, args.erasures, args.model);
        let survivors: Vec<Projection> = projections
            .iter()
            .filter(|p| erased.binary_search(&p.index).is_err())
            .cloned()
            .collect();
        let output = decode(&spec, &survivors)?;
        let success = match output.report.status {
            DecodeStatus::Success => {
                let got = output
                    .grid
                    .to_data_grid()
                    .expect("successful decode yields a complete grid")
                    .to_bytes(payload.len())
                    .expect("payload length equals capacity");
                got == payload
            }
            DecodeStatus::Stalled => false,
        };
        let steps = output.report.peel_trace.len();
        if success {
            successes += 1;
            steps_on_success += steps as u64;
        }
        let erased_text = erased
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(out, "{trial},{erased_text},{success},{steps}")?;
    }

    let rate = if args.trials == 0 {
        0.0
    } else {
        successes as f64 / args.trials as f64
    };
    writeln!(
        out,
        "# successes={successes} failures={} success_rate={rate:.6}",
        args.trials - successes
    )?;
    if successes > 0 {
        writeln!(
            out,
            "# mean_steps_on_success={:.2}",
            steps_on_success as f64 / successes as f64
        )?;
    }
    out.flush()?;
    Ok(())
}
