//! Self-check suite behind `ambx verify`: every closed form the library
//! ships is recomputed here by a slower independent method (exhaustive
//! enumeration, direct measurement, or randomized comparison) and any
//! disagreement is reported as a finding. Exit is nonzero iff a finding
//! survived; checks skipped for budget are noted but are not failures.

use crate::cli::VerifyArgs;
use crate::error::CliError;
use ambx_core::{
    bin_degree_map, bound_classical_k_eq_sigma, bound_classical_limit, bound_amds_rhs,
    bound_amds_rhs_forms, decodable, decode, max_degree, measured_max_degree, overhead_exact,
    overhead_exact_enumerated, phi, projection_length, sum_abs_p_c33, sum_abs_p_c35,
    bound_amds_hypotheses, CodeSpec, Construction, DataGrid, DecodeStatus, Direction, Projection, Rat,
};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::{self, Write};
use std::time::{Duration, Instant};

/// At most this many detail lines are kept per check; the rest collapse
/// into a single "and N more" line.
const MAX_DETAILS: usize = 4;

pub struct CheckReport {
    pub name: &'static str,
    pub cases: u64,
    pub findings: Vec<String>,
}

pub struct VerifyOutcome {
    pub reports: Vec<CheckReport>,
    pub skipped: Vec<&'static str>,
}

impl VerifyOutcome {
    pub fn finding_count(&self) -> usize {
        self.reports.iter().map(|r| r.findings.len()).sum()
    }
}

struct Findings {
    details: Vec<String>,
    overflow: u64,
}

impl Findings {
    fn new() -> Self {
        Findings { details: Vec::new(), overflow: 0 }
    }

    fn push(&mut self, detail: String) {
        if self.details.len() < MAX_DETAILS {
            self.details.push(detail);
        } else {
            self.overflow += 1;
        }
    }

    fn into_vec(mut self) -> Vec<String> {
        if self.overflow > 0 {
            self.details.push(format!("and {} more", self.overflow));
        }
        self.details
    }
}

fn rat(num: u64, den: u64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Compares a peak-bin-degree formula against brute-force measurement over
/// every coprime direction with |p|, |q| <= 7 and every grid up to 20 x 20.
/// Parameterized over the formula so a deliberately wrong one can be fed in
/// to prove the check has teeth.
pub fn degree_formula_findings(
    formula: impl Fn(Direction, usize, usize) -> usize,
) -> (u64, Vec<String>) {
    let mut cases = 0;
    let mut findings = Findings::new();
    for p in -7i32..=7 {
        for q in -7i32..=7 {
            let Ok(dir) = Direction::new(p, q) else { continue };
            for b in 1..=20 {
                for k in 1..=20 {
                    cases += 1;
                    let predicted = formula(dir, b, k);
                    let measured = measured_max_degree(dir, b, k);
                    if predicted != measured {
                        findings.push(format!(
                            "direction {dir} over {b}x{k}: formula {predicted}, measured {measured}"
                        ));
                    }
                }
            }
        }
    }
    (cases, findings.into_vec())
}

/// Direction-magnitude sums: closed forms against direct enumeration for
/// small counts, then via their one-step recurrences and the floor-sum
/// pairing identity up to t = 10000.
fn magnitude_sum_findings() -> (u64, Vec<String>) {
    let mut cases = 0;
    let mut findings = Findings::new();
    for t in 1..=400usize {
        cases += 2;
        let s33: u64 = ambx_core::directions_c33(t)
            .expect("positive count")
            .iter()
            .map(|d| u64::from(d.p().unsigned_abs()))
            .sum();
        if s33 != sum_abs_p_c33(t as u64) {
            findings.push(format!(
                "q=1 family magnitude sum at t={t}: enumerated {s33}, closed {}",
                sum_abs_p_c33(t as u64)
            ));
        }
        let s35: u64 = ambx_core::directions_c35(t, 2)
            .expect("valid family")
            .iter()
            .map(|d| u64::from(d.p().unsigned_abs()))
            .sum();
        if s35 != sum_abs_p_c35(t as u64) {
            findings.push(format!(
                "odd-p family magnitude sum at t={t}: enumerated {s35}, closed {}",
                sum_abs_p_c35(t as u64)
            ));
        }
    }
    // Growing the direction set by one appends the next-smallest magnitude:
    // floor(t/2) for the q=1 family, the next odd integer for the other.
    for t in 1..=10_000u64 {
        cases += 3;
        if sum_abs_p_c33(t) - sum_abs_p_c33(t - 1) != t / 2 {
            findings.push(format!("q=1 sum recurrence breaks at t={t}"));
        }
        let odd_step = if t % 2 == 1 { t } else { t - 1 };
        if sum_abs_p_c35(t) - sum_abs_p_c35(t - 1) != odd_step {
            findings.push(format!("odd-p sum recurrence breaks at t={t}"));
        }
        if 2 * sum_abs_p_c33(t) != phi(t) + phi(t - 1) {
            findings.push(format!("floor-sum pairing identity breaks at t={t}"));
        }
    }
    (cases, findings.into_vec())
}

fn family_sweep(bs: &[usize]) -> Vec<CodeSpec> {
    let mut specs = Vec::new();
    for &b in bs {
        for n in 2..=12usize {
            for k in 2..=n.min(9) {
                if let Ok(spec) = CodeSpec::new(Construction::C33, n, k, b, 1) {
                    specs.push(spec);
                }
            }
        }
        for q_e in [2u16, 4] {
            for n in 2..=10usize {
                for k in 2..=8usize {
                    if let Ok(spec) = CodeSpec::new(Construction::C35 { q_e }, n, k, b, 1) {
                        specs.push(spec);
                    }
                }
            }
        }
    }
    specs
}

/// Worst-subset overhead: the sorted-suffix computation, the family closed
/// form, and full subset enumeration must all agree; the exact value must
/// sit inside the reported envelope.
fn overhead_agreement_findings() -> (u64, Vec<String>) {
    let mut cases = 0;
    let mut findings = Findings::new();
    for spec in family_sweep(&[7, 64]) {
        cases += 1;
        let label = format!(
            "{:?} n={} k={} b={}",
            spec.construction(),
            spec.n(),
            spec.k(),
            spec.b()
        );
        let report = match overhead_exact(&spec) {
            Ok(r) => r,
            Err(e) => {
                findings.push(format!("{label}: overhead computation failed: {e}"));
                continue;
            }
        };
        match overhead_exact_enumerated(&spec) {
            Ok(enumerated) => {
                if enumerated != report.eps_exact {
                    findings.push(format!(
                        "{label}: enumeration gives {enumerated}, suffix method {}",
                        report.eps_exact
                    ));
                }
            }
            Err(e) => findings.push(format!("{label}: enumeration failed: {e}")),
        }
        match &report.eps_closed_form {
            Some(closed) if *closed != report.eps_exact => {
                findings.push(format!(
                    "{label}: closed form {closed} differs from exact {}",
                    report.eps_exact
                ));
            }
            Some(_) => {}
            None => findings.push(format!("{label}: family spec lost its closed form")),
        }
        if let Some((lo, hi)) = &report.bracket {
            if report.eps_exact < *lo || report.eps_exact > *hi {
                findings.push(format!(
                    "{label}: exact {} escapes envelope [{lo}, {hi}]",
                    report.eps_exact
                ));
            }
        }
    }
    (cases, findings.into_vec())
}

/// Envelope containment at production-sized b over long n ranges, where
/// enumeration is impossible and only the algebra can be trusted.
fn bracket_containment_findings() -> (u64, Vec<String>) {
    let mut cases = 0;
    let mut findings = Findings::new();
    let b = 10_000usize;
    let mut specs = Vec::new();
    for k in [3usize, 8, 15] {
        for n in (k..=350).step_by(9) {
            if let Ok(spec) = CodeSpec::new(Construction::C33, n, k, b, 1) {
                specs.push(spec);
            }
        }
    }
    for q_e in [2u16, 4] {
        for k in [4usize, 9, 16] {
            for n in (2..=300).step_by(7) {
                if let Ok(spec) = CodeSpec::new(Construction::C35 { q_e }, n, k, b, 1) {
                    specs.push(spec);
                }
            }
        }
    }
    for spec in specs {
        cases += 1;
        let label = format!(
            "{:?} n={} k={} b={}",
            spec.construction(),
            spec.n(),
            spec.k(),
            spec.b()
        );
        match overhead_exact(&spec) {
            Ok(report) => match &report.bracket {
                Some((lo, hi)) => {
                    if report.eps_exact < *lo || report.eps_exact > *hi {
                        findings.push(format!(
                            "{label}: exact {} escapes envelope [{lo}, {hi}]",
                            report.eps_exact
                        ));
                    }
                }
                None => findings.push(format!("{label}: family spec has no envelope")),
            },
            Err(e) => findings.push(format!("{label}: overhead computation failed: {e}")),
        }
    }
    (cases, findings.into_vec())
}

/// Peeling outcome against the survivor-sum feasibility criterion on every
/// survivor subset of a grid of small codes. Success must coincide with the
/// criterion and reproduce the payload bit for bit.
fn decode_agreement_findings() -> (u64, Vec<String>) {
    let mut cases = 0;
    let mut findings = Findings::new();
    let mut specs = Vec::new();
    for b in 1..=4usize {
        for k in 1..=4usize {
            for n in k.max(2)..=7 {
                if let Ok(spec) = CodeSpec::new(Construction::C33, n, k, b, 1) {
                    specs.push(spec);
                }
            }
        }
    }
    for b in 1..=4usize {
        for k in 1..=5usize {
            for n in 2..=7 {
                if let Ok(spec) = CodeSpec::new(Construction::C35 { q_e: 2 }, n, k, b, 1) {
                    specs.push(spec);
                }
            }
        }
    }
    for spec in specs {
        let payload: Vec<u8> = (0..spec.capacity()).map(|i| (i * 131 + 7) as u8).collect();
        let grid = DataGrid::from_bytes(&payload, spec.b(), spec.k(), spec.width())
            .expect("payload sized to capacity");
        let projections = encode_or_skip(&grid, &spec, &mut findings);
        let Some(projections) = projections else { continue };
        let n = spec.n();
        for mask in 0u32..(1 << n) {
            cases += 1;
            let survivors: Vec<Projection> = projections
                .iter()
                .filter(|p| mask & (1 << p.index) != 0)
                .cloned()
                .collect();
            let dirs: Vec<Direction> = survivors.iter().map(|p| p.dir).collect();
            let feasible = decodable(&spec, &dirs);
            let label = format!(
                "{:?} n={} k={} b={} mask={mask:#b}",
                spec.construction(),
                n,
                spec.k(),
                spec.b()
            );
            match decode(&spec, &survivors) {
                Ok(out) => match out.report.status {
                    DecodeStatus::Success => {
                        if !feasible {
                            findings.push(format!("{label}: peeled although infeasible"));
                        }
                        let got = out
                            .grid
                            .to_data_grid()
                            .expect("complete grid")
                            .to_bytes(payload.len())
                            .expect("payload length equals capacity");
                        if got != payload {
                            findings.push(format!("{label}: reconstruction differs"));
                        }
                    }
                    DecodeStatus::Stalled => {
                        if feasible {
                            findings.push(format!("{label}: stalled although feasible"));
                        }
                    }
                },
                Err(e) => findings.push(format!("{label}: decode error: {e}")),
            }
        }
    }
    (cases, findings.into_vec())
}

fn encode_or_skip(
    grid: &DataGrid,
    spec: &CodeSpec,
    findings: &mut Findings,
) -> Option<Vec<Projection>> {
    match ambx_core::encode(grid, spec) {
        Ok(p) => Some(p),
        Err(e) => {
            findings.push(format!("encode failed for {spec:?}: {e}"));
            None
        }
    }
}

/// The block-length bound's right side has two algebraic renderings; they
/// must agree on every hypothesis-satisfying tuple.
fn rhs_form_findings() -> (u64, Vec<String>) {
    let mut cases = 0;
    let mut findings = Findings::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA3B1);
    let mut attempts = 0u64;
    while cases < 2000 && attempts < 200_000 {
        attempts += 1;
        let sigma = rng.random_range(3..=60u64);
        let k = rng.random_range(1..=500u64);
        let b = rng.random_range(1..=1_000_000u64);
        let eps = rat(rng.random_range(0..=60), 20);
        if bound_amds_hypotheses(k, b, sigma, &eps).iter().any(|c| !c.pass) {
            continue;
        }
        cases += 1;
        match bound_amds_rhs_forms(k, b, sigma, &eps) {
            Ok((one, two)) => {
                if one != two {
                    findings.push(format!(
                        "renderings disagree at k={k} b={b} sigma={sigma} eps={eps}: {one} vs {two}"
                    ));
                }
            }
            Err(e) => findings.push(format!(
                "evaluation failed at k={k} b={b} sigma={sigma} eps={eps}: {e}"
            )),
        }
    }
    if cases < 2000 {
        findings.push(format!(
            "only {cases} hypothesis-satisfying tuples in {attempts} draws"
        ));
    }
    (cases, findings.into_vec())
}

/// Bin incidence bookkeeping: per direction, bin degrees partition the grid,
/// the map length matches the bin-count formula, and the nonempty-bin count
/// respects the pigeonhole floor grid_cells / peak_degree.
fn incidence_findings() -> (u64, Vec<String>) {
    let mut cases = 0;
    let mut findings = Findings::new();
    for p in -5i32..=5 {
        for q in -5i32..=5 {
            let Ok(dir) = Direction::new(p, q) else { continue };
            for b in 1..=12usize {
                for k in 1..=12usize {
                    cases += 1;
                    let map = bin_degree_map(dir, b, k);
                    let total: usize = map.iter().sum();
                    if total != b * k {
                        findings.push(format!(
                            "{dir} over {b}x{k}: degrees sum to {total}, grid has {}",
                            b * k
                        ));
                    }
                    if map.len() != projection_length(dir, b, k) {
                        findings.push(format!(
                            "{dir} over {b}x{k}: map length {} vs formula {}",
                            map.len(),
                            projection_length(dir, b, k)
                        ));
                    }
                    let sigma = max_degree(dir, b, k);
                    let nonempty = map.iter().filter(|&&d| d > 0).count();
                    if nonempty < (b * k).div_ceil(sigma) {
                        findings.push(format!(
                            "{dir} over {b}x{k}: {nonempty} nonempty bins beat the pigeonhole floor"
                        ));
                    }
                }
            }
        }
    }
    (cases, findings.into_vec())
}

/// The bound's zero-overhead evaluation must approach its published
/// large-b limit from below and reach it by b = 1e9; frozen pins guard
/// against sign or offset slips in both implementations at once.
fn classical_limit_findings() -> (u64, Vec<String>) {
    let mut cases = 0;
    let mut findings = Findings::new();
    let big_b = 1_000_000_000u64;
    let pins: [(u64, u64, u64); 4] = [(3, 6, 9), (3, 4, 11), (4, 6, 14), (4, 9, 14)];
    for (sigma, k, expect) in pins {
        cases += 1;
        match bound_amds_rhs(k, big_b, sigma, &Rat::zero()) {
            Ok(rhs) => {
                if rhs.to_u64() != Some(expect) {
                    findings.push(format!(
                        "pin sigma={sigma} k={k}: rhs at b=1e9 is {rhs}, expected {expect}"
                    ));
                }
            }
            Err(e) => findings.push(format!("pin sigma={sigma} k={k}: {e}")),
        }
        match bound_classical_limit(k, sigma) {
            Ok(limit) if limit == expect => {}
            Ok(limit) => findings.push(format!(
                "pin sigma={sigma} k={k}: limit formula gives {limit}, expected {expect}"
            )),
            Err(e) => findings.push(format!("pin sigma={sigma} k={k}: {e}")),
        }
    }
    for sigma in 3..=6u64 {
        for k in (sigma + 1)..=(sigma + 20) {
            cases += 1;
            let limit = match bound_classical_limit(k, sigma) {
                Ok(v) => v,
                Err(e) => {
                    findings.push(format!("sigma={sigma} k={k}: limit failed: {e}"));
                    continue;
                }
            };
            let mut prev: Option<BigInt> = None;
            for b in [10u64, 1000, 100_000, big_b] {
                match bound_amds_rhs(k, b, sigma, &Rat::zero()) {
                    Ok(rhs) => {
                        if rhs > BigInt::from(limit) {
                            findings.push(format!(
                                "sigma={sigma} k={k} b={b}: rhs {rhs} exceeds limit {limit}"
                            ));
                        }
                        if let Some(p) = &prev {
                            if *p > rhs {
                                findings.push(format!(
                                    "sigma={sigma} k={k}: rhs decreases when b grows to {b}"
                                ));
                            }
                        }
                        prev = Some(rhs);
                    }
                    Err(e) => findings.push(format!("sigma={sigma} k={k} b={b}: {e}")),
                }
            }
            if prev != Some(BigInt::from(limit)) {
                findings.push(format!(
                    "sigma={sigma} k={k}: rhs at b=1e9 has not reached limit {limit}"
                ));
            }
        }
    }
    // At k = sigma the numerator factors through the denominator and the
    // bound collapses to sigma*b + floor(sigma/2). The separate linear form
    // sigma*b + sigma - 2 coincides with it only for sigma in {3, 4}; above
    // that the collapsed bound is strictly tighter by ceil(sigma/2) - 2.
    for sigma in 3..=8u64 {
        for b in [100u64, 10_000] {
            cases += 1;
            match bound_amds_rhs(sigma, b, sigma, &Rat::zero()) {
                Ok(rhs) => {
                    let collapsed = sigma * b + sigma / 2;
                    if rhs.to_u64() != Some(collapsed) {
                        findings.push(format!(
                            "k=sigma={sigma} b={b}: rhs {rhs} vs collapsed form {collapsed}"
                        ));
                    }
                    let linear = bound_classical_k_eq_sigma(sigma, b);
                    let should_match = sigma <= 4;
                    if (collapsed == linear) != should_match || collapsed > linear {
                        findings.push(format!(
                            "k=sigma={sigma} b={b}: collapsed {collapsed} vs linear {linear} \
                             breaks the expected relation"
                        ));
                    }
                }
                Err(e) => findings.push(format!("k=sigma={sigma} b={b}: {e}")),
            }
        }
    }
    (cases, findings.into_vec())
}

type Check = (&'static str, Box<dyn Fn() -> (u64, Vec<String>)>);

pub fn run_checks(budget: Duration, out: &mut dyn Write) -> io::Result<VerifyOutcome> {
    let started = Instant::now();
    let checks: Vec<Check> = vec![
        (
            "degree-formula-oracle",
            Box::new(|| degree_formula_findings(max_degree)),
        ),
        ("magnitude-sum-closed-forms", Box::new(magnitude_sum_findings)),
        (
            "overhead-closed-vs-enumeration",
            Box::new(overhead_agreement_findings),
        ),
        (
            "smooth-envelope-containment",
            Box::new(bracket_containment_findings),
        ),
        (
            "decode-feasibility-agreement",
            Box::new(decode_agreement_findings),
        ),
        ("rhs-form-equality", Box::new(rhs_form_findings)),
        ("incidence-counting-audit", Box::new(incidence_findings)),
        (
            "classical-limit-consistency",
            Box::new(classical_limit_findings),
        ),
    ];

    let mut outcome = VerifyOutcome { reports: Vec::new(), skipped: Vec::new() };
    for (name, check) in checks {
        if started.elapsed() >= budget {
            writeln!(out, "check {name} ... skipped (budget exhausted)")?;
            outcome.skipped.push(name);
            continue;
        }
        let t0 = Instant::now();
        let (cases, findings) = check();
        if findings.is_empty() {
            writeln!(
                out,
                "check {name} ... ok ({cases} cases, {:.2}s)",
                t0.elapsed().as_secs_f64()
            )?;
        } else {
            writeln!(
                out,
                "check {name} ... FAIL ({} findings over {cases} cases)",
                findings.len()
            )?;
            for f in &findings {
                writeln!(out, "    {f}")?;
            }
        }
        outcome.reports.push(CheckReport { name, cases, findings });
    }
    let total_cases: u64 = outcome.reports.iter().map(|r| r.cases).sum();
    writeln!(
        out,
        "{} checks run ({} cases), {} findings, {} skipped",
        outcome.reports.len(),
        total_cases,
        outcome.finding_count(),
        outcome.skipped.len()
    )?;
    Ok(outcome)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let mut stdout = io::stdout().lock();
    let outcome = run_checks(Duration::from_secs(args.budget_secs), &mut stdout)?;
    let count = outcome.finding_count();
    if count == 0 {
        Ok(())
    } else {
        Err(CliError::VerifyFailed(count))
    }
}
