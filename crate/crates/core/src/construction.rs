//! The two systematic direction families, their degree bound, and
//! structural validation of assembled code parameters.

use crate::code::CodeSpec;
use crate::direction::Direction;
use crate::encoder::bin_degree_map;
use crate::error::CodecError;
use std::collections::BTreeSet;

/// Which family the direction set comes from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Construction {
    /// q = 1, p over the n integers of smallest magnitude.
    C33,
    /// q = q_e (even, >= 2), p over n consecutive odd integers of smallest
    /// magnitude. Requires every p to be coprime with q_e, which holds
    /// automatically when q_e is a power of two.
    C35 { q_e: u16 },
    /// Hand-picked direction set; no family-level claims are made.
    Custom,
}

impl Construction {
    /// Number of projections a receiver must gather to reconstruct.
    ///
    /// C33 needs k of its projections, C35 needs ceil(k / q_e); a custom
    /// set claims nothing beyond "all n".
    pub fn reconstruction_size(&self, n: usize, k: usize) -> usize {
        match self {
            Construction::C33 => k,
            Construction::C35 { q_e } => k.div_ceil(usize::from(*q_e).max(1)),
            Construction::Custom => n,
        }
    }

    /// The family's canonical direction list for n projections.
    pub fn canonical_directions(&self, n: usize) -> Result<Vec<Direction>, CodecError> {
        match self {
            Construction::C33 => directions_c33(n),
            Construction::C35 { q_e } => directions_c35(n, *q_e),
            Construction::Custom => Err(CodecError::Parameter(
                "custom constructions supply their own directions".into(),
            )),
        }
    }
}

/// The n directions (p, 1) with p running over
/// `{-floor((n-1)/2), ..., ceil((n-1)/2)}` in ascending order.
pub fn directions_c33(n: usize) -> Result<Vec<Direction>, CodecError> {
    if n == 0 {
        return Err(CodecError::Parameter("direction count must be positive".into()));
    }
    let lo = -(((n - 1) / 2) as i64);
    (0..n as i64)
        .map(|i| {
            let p = lo + i;
            let p = i32::try_from(p)
                .map_err(|_| CodecError::Parameter(format!("p={p} overflows i32")))?;
            Direction::new(p, 1)
        })
        .collect()
}

/// The n directions (p, q_e) with p running over the n consecutive odd
/// integers ending at the smallest odd integer >= n-1, ascending.
///
/// Errors if q_e is odd, zero, or shares a factor with one of the p values
/// (possible for q_e with odd prime factors, e.g. q_e = 6 against p = 3).
pub fn directions_c35(n: usize, q_e: u16) -> Result<Vec<Direction>, CodecError> {
    if n == 0 {
        return Err(CodecError::Parameter("direction count must be positive".into()));
    }
    if q_e == 0 || !q_e.is_multiple_of(2) {
        return Err(CodecError::Parameter(format!(
            "q_e must be a positive even integer, got {q_e}"
        )));
    }
    let hi: i64 = if (n as i64 - 1) % 2 == 1 { n as i64 - 1 } else { n as i64 };
    let lo = hi - 2 * (n as i64 - 1);
    (0..n as i64)
        .map(|i| {
            let p = lo + 2 * i;
            let p = i32::try_from(p)
                .map_err(|_| CodecError::Parameter(format!("p={p} overflows i32")))?;
            Direction::new(p, i32::from(q_e)).map_err(|_| {
                CodecError::Parameter(format!(
                    "q_e={q_e} shares a factor with p={p}; pick a power of two"
                ))
            })
        })
        .collect()
}

/// Largest number of cells any single bin of `dir` covers on a `b x k`
/// grid: `min(ceil(b/|p|), ceil(k/|q|))`, where a zero component makes its
/// term unbounded (consecutive cells on one line step |p| rows, |q| cols).
pub fn max_degree(dir: Direction, b: usize, k: usize) -> usize {
    assert!(b >= 1 && k >= 1, "grid dimensions must be positive");
    let pa = dir.p().unsigned_abs() as usize;
    let qa = dir.q().unsigned_abs() as usize;
    match (pa, qa) {
        (0, 0) => unreachable!("(0,0) is not a valid direction"),
        (0, q) => k.div_ceil(q),
        (p, 0) => b.div_ceil(p),
        (p, q) => b.div_ceil(p).min(k.div_ceil(q)),
    }
}

/// Maximum bin degree over a whole direction set: the code's sigma.
pub fn code_sigma(dirs: &[Direction], b: usize, k: usize) -> usize {
    dirs.iter().map(|&d| max_degree(d, b, k)).max().unwrap_or(0)
}

/// Machine-readable classes of validation findings.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FindingCode {
    BadDimensions,
    QeNotEven,
    DirectionCountMismatch,
    DuplicateDirection,
    ConstructionDirectionMismatch,
    SigmaMismatch,
    ReconstructionUnsatisfiable,
    KatzUnsatisfied,
}

impl FindingCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            FindingCode::BadDimensions => "bad-dimensions",
            FindingCode::QeNotEven => "qe-not-even",
            FindingCode::DirectionCountMismatch => "direction-count-mismatch",
            FindingCode::DuplicateDirection => "duplicate-direction",
            FindingCode::ConstructionDirectionMismatch => "construction-direction-mismatch",
            FindingCode::SigmaMismatch => "sigma-mismatch",
            FindingCode::ReconstructionUnsatisfiable => "reconstruction-unsatisfiable",
            FindingCode::KatzUnsatisfied => "katz-unsatisfied",
        }
    }
}

/// One problem uncovered by [`validate`].
#[derive(Clone, Debug)]
pub struct Finding {
    pub code: FindingCode,
    pub message: String,
}

/// Structural audit of a code spec. Returns every problem found, empty on
/// a clean spec. `CodeSpec::new` never produces findings; this has teeth
/// against specs assembled with `CodeSpec::from_parts`.
pub fn validate(spec: &CodeSpec) -> Vec<Finding> {
    let mut findings = Vec::new();
    let mut push = |code: FindingCode, message: String| findings.push(Finding { code, message });

    if spec.k() == 0 || spec.b() == 0 || spec.width() == 0 || spec.n() == 0 {
        push(
            FindingCode::BadDimensions,
            format!(
                "n={}, k={}, b={}, width={} must all be positive",
                spec.n(),
                spec.k(),
                spec.b(),
                spec.width()
            ),
        );
        return findings;
    }

    if let Construction::C35 { q_e } = spec.construction() {
        if q_e == 0 || !q_e.is_multiple_of(2) {
            push(FindingCode::QeNotEven, format!("q_e={q_e} is not a positive even integer"));
        }
    }

    if spec.directions().len() != spec.n() {
        push(
            FindingCode::DirectionCountMismatch,
            format!("{} directions for n={}", spec.directions().len(), spec.n()),
        );
    }

    let mut seen = BTreeSet::new();
    for &d in spec.directions() {
        if !seen.insert(d) {
            push(FindingCode::DuplicateDirection, format!("direction {d} appears twice"));
        }
    }

    if !matches!(spec.construction(), Construction::Custom) {
        match spec.construction().canonical_directions(spec.n()) {
            Ok(canon) if canon != spec.directions() => {
                push(
                    FindingCode::ConstructionDirectionMismatch,
                    format!(
                        "directions {:?} differ from the family's canonical list {:?}",
                        spec.directions(),
                        canon
                    ),
                );
            }
            Err(e) => push(FindingCode::ConstructionDirectionMismatch, e.to_string()),
            Ok(_) => {}
        }
    }

    let actual_sigma = code_sigma(spec.directions(), spec.b(), spec.k());
    if spec.sigma() != actual_sigma {
        push(
            FindingCode::SigmaMismatch,
            format!("stored sigma {} but direction set yields {}", spec.sigma(), actual_sigma),
        );
    }

    if spec.n() < spec.reconstruction_size() {
        push(
            FindingCode::ReconstructionUnsatisfiable,
            format!(
                "n={} below the {} projections reconstruction needs",
                spec.n(),
                spec.reconstruction_size()
            ),
        );
    }

    // Custom sets describe a transform without a reconstruction claim, so
    // only the families are audited for full-set feasibility.
    if !matches!(spec.construction(), Construction::Custom) {
        let sum_p: u64 = spec.directions().iter().map(|d| u64::from(d.p().unsigned_abs())).sum();
        let sum_q: u64 = spec.directions().iter().map(|d| u64::from(d.q().unsigned_abs())).sum();
        if sum_p < spec.b() as u64 && sum_q < spec.k() as u64 {
            push(
                FindingCode::KatzUnsatisfied,
                format!(
                    "full set has sum|p|={sum_p} < b={} and sum|q|={sum_q} < k={}, so even all n \
                     projections cannot reconstruct",
                    spec.b(),
                    spec.k()
                ),
            );
        }
    }

    findings
}

/// Degree-counting cross-check: per-bin maxima measured from the grid must
/// match the closed-form degree bound for the direction.
pub fn measured_max_degree(dir: Direction, b: usize, k: usize) -> usize {
    bin_degree_map(dir, b, k).into_iter().max().unwrap_or(0)
}
