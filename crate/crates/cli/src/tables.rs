//! Bound tables. Normal mode compares, per k, the largest block length each
//! family certifies against the block length a design rate requires. The
//! --min-rate mode inverts that into the lowest achievable rate per k.

use crate::cli::BoundsArgs;
use crate::error::CliError;
use crate::rational::{parse_rational, parse_rational_list, required_n};
use ambx_core::{
    min_rate_curve, n_lower_bound_c33, solve_n_max, BoundConstruction, BoundQuery, NMax, Rat,
};
use num_traits::Signed;
use std::fs::File;
use std::io::{self, BufWriter, Write};

fn status(n_max: NMax) -> &'static str {
    match n_max {
        NMax::Bounded(_) => "ok",
        NMax::Unbounded => "unbounded",
        NMax::Inapplicable => "inapplicable",
    }
}

fn bound_cell(n_max: NMax) -> String {
    match n_max {
        NMax::Bounded(v) => v.to_string(),
        _ => String::new(),
    }
}

/// Whether this outcome certifies block lengths of at least `required`.
fn meets(n_max: NMax, required: u64) -> bool {
    match n_max {
        NMax::Bounded(v) => v >= required,
        NMax::Unbounded => true,
        NMax::Inapplicable => false,
    }
}

/// Smallest K in the sweep such that `flag` holds for every k >= K;
/// None if it fails at k_max itself.
fn suffix_threshold(ks: &[u64], flags: &[bool]) -> Option<u64> {
    let mut from = None;
    for (k, ok) in ks.iter().zip(flags).rev() {
        if *ok {
            from = Some(*k);
        } else {
            break;
        }
    }
    from
}

fn rate_in_unit_interval(rate: &Rat) -> Result<(), CliError> {
    if !rate.is_positive() || *rate > Rat::from_integer(1.into()) {
        return Err(CliError::Usage(format!(
            "rate {rate} is outside (0, 1]"
        )));
    }
    Ok(())
}

fn open_out(args: &BoundsArgs) -> Result<Box<dyn Write>, CliError> {
    Ok(match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn cmd_bounds(args: &BoundsArgs) -> Result<(), CliError> {
    if args.k_min < 1 || args.k_max < args.k_min {
        return Err(CliError::Usage("need 1 <= k-min <= k-max".into()));
    }
    if args.min_rate {
        min_rate_table(args)
    } else {
        bound_table(args)
    }
}

fn bound_table(args: &BoundsArgs) -> Result<(), CliError> {
    let rate_text = args
        .rate
        .as_deref()
        .ok_or_else(|| CliError::Usage("--rate is required (or use --min-rate)".into()))?;
    let rate = parse_rational(rate_text)?;
    rate_in_unit_interval(&rate)?;
    let mut out = open_out(args)?;

    writeln!(
        out,
        "# b={} sigma={} qe={} rate={} cap={}",
        args.b, args.sigma, args.qe, rate, args.cap
    )?;
    if let Some(floor) = n_lower_bound_c33(&rate, args.b) {
        writeln!(out, "# c33_feasibility_floor_n={floor:.3}")?;
    }
    writeln!(
        out,
        "k,required_n,classical_bound,classical_status,amds_bound,amds_status"
    )?;

    let ks: Vec<u64> = (args.k_min..=args.k_max).collect();
    let mut classical_fails = Vec::with_capacity(ks.len());
    let mut amds_meets = Vec::with_capacity(ks.len());
    for &k in &ks {
        let required = required_n(k, &rate)?;
        let classical = solve_n_max(&BoundQuery {
            cap: args.cap,
            ..BoundQuery::new(k, args.b, BoundConstruction::ClassicalMds { sigma: args.sigma })
        });
        let amds = solve_n_max(&BoundQuery {
            cap: args.cap,
            ..BoundQuery::new(k, args.b, BoundConstruction::C35 { q_e: args.qe })
        });
        classical_fails.push(!meets(classical.n_max, required));
        amds_meets.push(meets(amds.n_max, required));
        writeln!(
            out,
            "{k},{required},{},{},{},{}",
            bound_cell(classical.n_max),
            status(classical.n_max),
            bound_cell(amds.n_max),
            status(amds.n_max)
        )?;
    }

    match suffix_threshold(&ks, &classical_fails) {
        Some(k) => writeln!(out, "# classical_below_required_from_k={k}")?,
        None => writeln!(out, "# classical_below_required_from_k=none")?,
    }
    match suffix_threshold(&ks, &amds_meets) {
        Some(k) => writeln!(out, "# amds_meets_required_from_k={k}")?,
        None => writeln!(out, "# amds_meets_required_from_k=none")?,
    }
    out.flush()?;
    Ok(())
}

fn min_rate_table(args: &BoundsArgs) -> Result<(), CliError> {
    let rates = parse_rational_list(&args.rates)?;
    if rates.is_empty() {
        return Err(CliError::Usage("--rates must list at least one rate".into()));
    }
    for rate in &rates {
        rate_in_unit_interval(rate)?;
    }
    let mut out = open_out(args)?;

    writeln!(
        out,
        "# b={} sigma={} qe={} cap={}",
        args.b, args.sigma, args.qe, args.cap
    )?;
    writeln!(
        out,
        "k,assumed_rate,classical_min_rate,classical_status,amds_min_rate,amds_status"
    )?;

    let ks: Vec<u64> = (args.k_min..=args.k_max).collect();
    // The classical column ignores the assumed rate: its overhead model does
    // not depend on n, so one solve per k serves every rate row.
    let classical = min_rate_curve(
        args.b,
        &ks,
        |_| BoundConstruction::ClassicalMds { sigma: args.sigma },
        None,
        args.cap,
    );
    for (i, &k) in ks.iter().enumerate() {
        for rate in &rates {
            let amds = &min_rate_curve(
                args.b,
                &[k],
                |_| BoundConstruction::C35 { q_e: args.qe },
                Some(rate),
                args.cap,
            )[0];
            let fmt = |r: Option<f64>| r.map(|v| format!("{v:.6}")).unwrap_or_default();
            writeln!(
                out,
                "{k},{rate},{},{},{},{}",
                fmt(classical[i].r_min),
                status(classical[i].n_max),
                fmt(amds.r_min),
                status(amds.n_max)
            )?;
        }
    }
    out.flush()?;
    Ok(())
}
