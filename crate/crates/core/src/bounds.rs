//! Upper bounds on the number of projections a code family can sustain,
//! and the rate floors they imply.

use crate::error::CodecError;
use crate::overhead::{eps_closed_c33, eps_closed_c35};
use crate::rat::{rat_frac, rat_u, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default scan ceiling for [`solve_n_max`].
pub const DEFAULT_SCAN_CAP: u64 = 1_000_000;

/// Which overhead model feeds the bound.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundConstruction {
    /// Sparse classical MDS family with a fixed maximum column degree.
    ClassicalMds { sigma: u64 },
    /// q = 1 family: sigma = k, overhead from its closed form.
    C33,
    /// Even-q family: sigma = ceil(k/q_e), overhead from its closed form.
    C35 { q_e: u16 },
}

/// One bound evaluation request.
#[derive(Clone, Debug)]
pub struct BoundQuery {
    pub k: u64,
    pub b: u64,
    pub construction: BoundConstruction,
    /// When set, overhead is evaluated at this fixed design rate with a
    /// continuous reconstruction size instead of the family's exact one.
    pub assumed_rate: Option<Rat>,
    /// Scan ceiling; reaching it counts as unbounded.
    pub cap: u64,
}

impl BoundQuery {
    pub fn new(k: u64, b: u64, construction: BoundConstruction) -> Self {
        BoundQuery { k, b, construction, assumed_rate: None, cap: DEFAULT_SCAN_CAP }
    }
}

/// Outcome of a block-length scan.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NMax {
    /// Largest n satisfying the bound.
    Bounded(u64),
    /// The bound stops constraining (hypotheses fail or cap reached).
    Unbounded,
    /// The bound never applies to these parameters (sigma <= 2).
    Inapplicable,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolveFormula {
    /// n-dependent overhead: the RHS was re-evaluated per candidate n.
    RhsScan,
    /// n-independent overhead (classical): the RHS was solved directly.
    RhsDirect,
}

/// Named predicate of the bound's hypothesis set.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub pass: bool,
}

/// Result of [`solve_n_max`], with the hypothesis state at the decisive n.
#[derive(Clone, Debug)]
pub struct BoundResult {
    pub n_max: NMax,
    pub formula_used: SolveFormula,
    /// Overhead at the returned n_max (or at the stopping point).
    pub epsilon_at_solution: Option<f64>,
    pub hypothesis_checks: Vec<HypothesisCheck>,
}

pub const HYP_SIGMA_GT_2: &str = "sigma-gt-2";
pub const HYP_DENOMINATOR_POSITIVE: &str = "denominator-positive";
pub const HYP_SIGMA_BELOW_RATIO: &str = "sigma-below-ratio";

/// Maximum block length when every information symbol appears in at most
/// sigma = k columns: `k b + 1 + max(k - 3, 0)`.
pub fn bound_classical_k_eq_sigma(k: u64, b: u64) -> u64 {
    assert!(k >= 1 && b >= 1);
    k * b + 1 + k.saturating_sub(3)
}

/// Large-b limit of the sparse-code bound for `k > sigma > 2`:
/// `k + sigma - 1 + floor(sigma(sigma-1)/(k-sigma))`, minus one when the
/// division is exact.
pub fn bound_classical_limit(k: u64, sigma: u64) -> Result<u64, CodecError> {
    if sigma <= 2 {
        return Err(CodecError::Hypothesis(HYP_SIGMA_GT_2));
    }
    if k <= sigma {
        return Err(CodecError::Hypothesis("k-gt-sigma"));
    }
    let num = sigma * (sigma - 1);
    let den = k - sigma;
    let exact = u64::from(num.is_multiple_of(den));
    Ok(k + sigma - 1 + num / den - exact)
}

/// Evaluates the bound's three hypotheses at the given overhead.
pub fn bound_amds_hypotheses(k: u64, b: u64, sigma: u64, eps: &Rat) -> Vec<HypothesisCheck> {
    let sigma_r = rat_u(sigma);
    let b_r = rat_u(b);
    let k_r = rat_u(k);
    let sigma_prime = &sigma_r * (Rat::one() + eps);
    let denominator = &b_r * (&k_r - &sigma_prime) + &sigma_r - Rat::one();
    let b_prime = (Rat::one() + eps) * &b_r;
    // sigma < (bk - 1)/(b' - 1), cross-multiplied to dodge b' = 1.
    let ratio_ok = &sigma_r * (&b_prime - Rat::one()) < &k_r * &b_r - Rat::one();
    vec![
        HypothesisCheck { name: HYP_SIGMA_GT_2, pass: sigma > 2 },
        HypothesisCheck { name: HYP_DENOMINATOR_POSITIVE, pass: denominator.is_positive() },
        HypothesisCheck { name: HYP_SIGMA_BELOW_RATIO, pass: ratio_ok },
    ]
}

/// Both algebraic renderings of the bound's right-hand side, which are
/// provably equal; kept separate so tests can cross-verify them.
///
/// Form one: `k + sigma - 1 +
///   floor((b(k(sigma'-sigma) + (sigma-1)sigma') - (sigma-1)(3 sigma/2 - 1))
///         / (b(k-sigma') + sigma - 1))`.
/// Form two: `floor(((k b + sigma - 1)(k - 1) - (sigma-1)(sigma/2 - 1))
///         / (b(k-sigma') + sigma - 1))`.
pub fn bound_amds_rhs_forms(
    k: u64,
    b: u64,
    sigma: u64,
    eps: &Rat,
) -> Result<(BigInt, BigInt), CodecError> {
    for check in bound_amds_hypotheses(k, b, sigma, eps) {
        if !check.pass {
            return Err(CodecError::Hypothesis(check.name));
        }
    }
    let sigma_r = rat_u(sigma);
    let b_r = rat_u(b);
    let k_r = rat_u(k);
    let one = Rat::one();
    let sigma_prime = &sigma_r * (&one + eps);
    let denominator = &b_r * (&k_r - &sigma_prime) + &sigma_r - &one;

    let num_one = &b_r * (&k_r * (&sigma_prime - &sigma_r) + (&sigma_r - &one) * &sigma_prime)
        - (&sigma_r - &one) * (rat_frac(3, 2) * &sigma_r - &one);
    let form_one = BigInt::from(k + sigma - 1) + (num_one / &denominator).floor().to_integer();

    let num_two = (&k_r * &b_r + &sigma_r - &one) * (&k_r - &one)
        - (&sigma_r - &one) * (&sigma_r / rat_u(2) - &one);
    let form_two = (num_two / &denominator).floor().to_integer();

    Ok((form_one, form_two))
}

/// The bound's right-hand side. Errors name the first failing hypothesis.
pub fn bound_amds_rhs(k: u64, b: u64, sigma: u64, eps: &Rat) -> Result<BigInt, CodecError> {
    let (one, two) = bound_amds_rhs_forms(k, b, sigma, eps)?;
    debug_assert_eq!(one, two, "the two RHS renderings must agree");
    Ok(two)
}

/// Overhead model for a query at candidate block length n.
///
/// Exact family closed forms when no rate is assumed; smooth
/// rate-parameterized forms otherwise (continuous reconstruction size, so
/// the result is nondecreasing in n). Clamped below at zero.
pub fn epsilon_model(query: &BoundQuery, n: u64) -> Rat {
    let k = query.k;
    let b = query.b;
    let eps = match (&query.construction, &query.assumed_rate) {
        (BoundConstruction::ClassicalMds { .. }, _) => Rat::zero(),
        (BoundConstruction::C33, None) => eps_closed_c33(n, k, b),
        (BoundConstruction::C35 { q_e }, None) => eps_closed_c35(n, k, b, u64::from(*q_e)),
        (BoundConstruction::C33, Some(r)) => {
            // n(2-r)(nr-1)/(4b)
            let n_r = rat_u(n);
            &n_r * (rat_u(2) - r) * (&n_r * r - Rat::one()) / rat_u(4 * b)
        }
        (BoundConstruction::C35 { q_e }, Some(r)) => {
            // ((rn-1)(n - rn/(2 q_e)) + q_e(b-1) + 1)/(q_e b) - 1
            let q = rat_u(u64::from(*q_e));
            let n_r = rat_u(n);
            let rn = &n_r * r;
            ((&rn - Rat::one()) * (&n_r - &rn / (rat_u(2) * &q)) + &q * rat_u(b - 1)
                + Rat::one())
                / (&q * rat_u(b))
                - Rat::one()
        }
    };
    if eps.is_negative() {
        Rat::zero()
    } else {
        eps
    }
}

fn sigma_for(query: &BoundQuery) -> u64 {
    match query.construction {
        BoundConstruction::ClassicalMds { sigma } => sigma,
        BoundConstruction::C33 => query.k,
        BoundConstruction::C35 { q_e } => query.k.div_ceil(u64::from(q_e).max(1)),
    }
}

/// Finds the largest block length n the bound admits for the query.
///
/// The three hypotheses are monotone in n under every overhead model here
/// (overhead never decreases with n), so the first n-dependent hypothesis
/// failure is permanent: from there the bound is silent and n is
/// unconstrained. sigma <= 2 is n-independent, hence Inapplicable.
pub fn solve_n_max(query: &BoundQuery) -> BoundResult {
    let k = query.k;
    let b = query.b;
    let sigma = sigma_for(query);
    assert!(k >= 1 && b >= 1, "k and b must be positive");

    if sigma <= 2 {
        return BoundResult {
            n_max: NMax::Inapplicable,
            formula_used: SolveFormula::RhsDirect,
            epsilon_at_solution: None,
            hypothesis_checks: vec![HypothesisCheck { name: HYP_SIGMA_GT_2, pass: false }],
        };
    }

    if matches!(query.construction, BoundConstruction::ClassicalMds { .. }) {
        let eps = Rat::zero();
        let checks = bound_amds_hypotheses(k, b, sigma, &eps);
        if checks.iter().any(|c| !c.pass) {
            return BoundResult {
                n_max: NMax::Unbounded,
                formula_used: SolveFormula::RhsDirect,
                epsilon_at_solution: Some(0.0),
                hypothesis_checks: checks,
            };
        }
        let rhs = bound_amds_rhs(k, b, sigma, &eps).expect("hypotheses verified");
        let n_max = if rhs > BigInt::from(query.cap) {
            NMax::Unbounded
        } else {
            NMax::Bounded(rhs.max(BigInt::zero()).to_u64().unwrap_or(0))
        };
        return BoundResult {
            n_max,
            formula_used: SolveFormula::RhsDirect,
            epsilon_at_solution: Some(0.0),
            hypothesis_checks: checks,
        };
    }

    let mut prev = k;
    let mut n = k + 1;
    loop {
        if n > query.cap {
            let eps = epsilon_model(query, query.cap);
            return BoundResult {
                n_max: NMax::Unbounded,
                formula_used: SolveFormula::RhsScan,
                epsilon_at_solution: eps.to_f64(),
                hypothesis_checks: bound_amds_hypotheses(k, b, sigma, &eps),
            };
        }
        let eps = epsilon_model(query, n);
        let checks = bound_amds_hypotheses(k, b, sigma, &eps);
        if checks.iter().any(|c| !c.pass) {
            // Permanent by monotonicity: the bound never binds again.
            return BoundResult {
                n_max: NMax::Unbounded,
                formula_used: SolveFormula::RhsScan,
                epsilon_at_solution: eps.to_f64(),
                hypothesis_checks: checks,
            };
        }
        let rhs = bound_amds_rhs(k, b, sigma, &eps).expect("hypotheses verified");
        if BigInt::from(n) > rhs {
            let eps_prev = epsilon_model(query, prev);
            return BoundResult {
                n_max: NMax::Bounded(prev),
                formula_used: SolveFormula::RhsScan,
                epsilon_at_solution: eps_prev.to_f64(),
                hypothesis_checks: checks,
            };
        }
        prev = n;
        n += 1;
    }
}

/// Large-b feasibility floor on n for the q=1 family at design rate r:
/// `sqrt(4b(1-2r) / (r^2 (2-r)))`, meaningful for 0 < r < 1/2 only.
pub fn n_lower_bound_c33(r: &Rat, b: u64) -> Option<f64> {
    if !r.is_positive() || *r >= rat_frac(1, 2) {
        return None;
    }
    let num = rat_u(4 * b) * (Rat::one() - rat_u(2) * r);
    let den = r * r * (rat_u(2) - r);
    Some((num / den).to_f64()?.sqrt())
}

/// One point of a minimum-achievable-rate curve.
#[derive(Clone, Debug)]
pub struct MinRatePoint {
    pub k: u64,
    pub n_max: NMax,
    /// `k / n_max`; `k / cap` when unbounded; None when inapplicable.
    pub r_min: Option<f64>,
}

/// Sweeps k and converts each n_max into the lowest achievable rate.
pub fn min_rate_curve(
    b: u64,
    ks: &[u64],
    construction: impl Fn(u64) -> BoundConstruction,
    assumed_rate: Option<&Rat>,
    cap: u64,
) -> Vec<MinRatePoint> {
    ks.iter()
        .map(|&k| {
            let query = BoundQuery {
                k,
                b,
                construction: construction(k),
                assumed_rate: assumed_rate.cloned(),
                cap,
            };
            let result = solve_n_max(&query);
            let r_min = match result.n_max {
                NMax::Bounded(n) if n > 0 => Some((k as f64 / n as f64).min(1.0)),
                NMax::Bounded(_) => Some(1.0),
                NMax::Unbounded => Some((k as f64 / cap as f64).min(1.0)),
                NMax::Inapplicable => None,
            };
            MinRatePoint { k, n_max: result.n_max, r_min }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_k_eq_sigma_frozen() {
        assert_eq!(bound_classical_k_eq_sigma(3, 2), 7);
        assert_eq!(bound_classical_k_eq_sigma(1, 1), 2);
        assert_eq!(bound_classical_k_eq_sigma(5, 10_000), 50_003);
    }

    #[test]
    fn classical_limit_frozen() {
        assert_eq!(bound_classical_limit(6, 3).unwrap(), 9);
        assert_eq!(bound_classical_limit(7, 3).unwrap(), 10);
        assert!(matches!(
            bound_classical_limit(6, 2),
            Err(CodecError::Hypothesis(HYP_SIGMA_GT_2))
        ));
        assert!(bound_classical_limit(3, 3).is_err());
    }

    #[test]
    fn rhs_forms_agree_on_known_points() {
        let cases: [(u64, u64, (i64, i64)); 4] =
            [(6, 100, (0, 1)), (9, 17, (1, 20)), (12, 1000, (3, 100)), (40, 10_000, (1, 7))];
        for (k, b, (en, ed)) in cases {
            for sigma in 3..=6 {
                if sigma >= k {
                    continue;
                }
                let eps = rat_frac(en, ed);
                match bound_amds_rhs_forms(k, b, sigma, &eps) {
                    Ok((one, two)) => assert_eq!(one, two, "k={k} b={b} sigma={sigma}"),
                    Err(CodecError::Hypothesis(_)) => {}
                    Err(e) => panic!("unexpected error {e}"),
                }
            }
        }
    }

    #[test]
    fn rhs_matches_classical_limit_at_zero_overhead_large_b() {
        // At eps = 0 and b = 10^9 the RHS reaches its large-b limit exactly.
        for (sigma, k, want) in [(3u64, 6u64, 9u64), (3, 4, 11), (4, 6, 14), (4, 9, 14)] {
            let rhs = bound_amds_rhs(k, 1_000_000_000, sigma, &Rat::zero()).unwrap();
            assert_eq!(rhs, BigInt::from(want), "sigma={sigma} k={k}");
            assert_eq!(bound_classical_limit(k, sigma).unwrap(), want);
        }
    }

    #[test]
    fn rhs_approaches_limit_from_below() {
        for (sigma, k) in [(3u64, 6u64), (3, 4), (4, 6), (4, 9)] {
            let limit = BigInt::from(bound_classical_limit(k, sigma).unwrap());
            let mut last = BigInt::from(0);
            for b in [10u64, 100, 10_000, 1_000_000_000] {
                let rhs = bound_amds_rhs(k, b, sigma, &Rat::zero()).unwrap();
                assert!(rhs <= limit, "sigma={sigma} k={k} b={b}");
                assert!(rhs >= last, "monotone in b: sigma={sigma} k={k} b={b}");
                last = rhs;
            }
            assert_eq!(last, limit);
        }
    }

    #[test]
    fn hypothesis_failures_are_named() {
        // sigma = 2 fails the first check.
        let err = bound_amds_rhs(6, 10, 2, &Rat::zero()).unwrap_err();
        assert!(matches!(err, CodecError::Hypothesis(HYP_SIGMA_GT_2)));
        // Huge overhead sends sigma' past k: denominator fails.
        let err = bound_amds_rhs(6, 10, 5, &rat_u(4)).unwrap_err();
        assert!(matches!(err, CodecError::Hypothesis(HYP_DENOMINATOR_POSITIVE)));
    }

    #[test]
    fn solve_c33_exact_goes_unbounded() {
        // sigma = k makes the denominator b(k - k(1+eps)) + k - 1 flip
        // negative as soon as eps > (k-1)/(b k); with the exact model this
        // happens immediately, so the bound never binds.
        let query = BoundQuery::new(6, 100, BoundConstruction::C33);
        let result = solve_n_max(&query);
        assert_eq!(result.n_max, NMax::Unbounded);
        assert_eq!(result.formula_used, SolveFormula::RhsScan);
        assert!(result
            .hypothesis_checks
            .iter()
            .any(|c| c.name == HYP_DENOMINATOR_POSITIVE && !c.pass));
    }

    #[test]
    fn solve_c35_small_k_inapplicable() {
        // ceil(k/q_e) <= 2 means sigma <= 2: the bound says nothing.
        let query = BoundQuery::new(4, 100, BoundConstruction::C35 { q_e: 2 });
        assert_eq!(solve_n_max(&query).n_max, NMax::Inapplicable);
    }

    #[test]
    fn solve_c35_known_points() {
        // Hand-checked at b = 10^4, q_e = 2, exact overhead model.
        for (k, want) in [(6u64, 10u64), (20, 39), (22, 43), (24, 48)] {
            let query = BoundQuery::new(k, 10_000, BoundConstruction::C35 { q_e: 2 });
            let result = solve_n_max(&query);
            assert_eq!(result.n_max, NMax::Bounded(want), "k={k}");
        }
        // Large k: the ratio hypothesis eventually flips and the scan
        // short-circuits to unbounded.
        let query = BoundQuery::new(60, 10_000, BoundConstruction::C35 { q_e: 2 });
        assert_eq!(solve_n_max(&query).n_max, NMax::Unbounded);
    }

    #[test]
    fn solve_classical_direct() {
        let query = BoundQuery::new(6, 1_000_000_000, BoundConstruction::ClassicalMds { sigma: 3 });
        let result = solve_n_max(&query);
        assert_eq!(result.n_max, NMax::Bounded(9));
        assert_eq!(result.formula_used, SolveFormula::RhsDirect);
        assert_eq!(result.epsilon_at_solution, Some(0.0));
    }

    #[test]
    fn feasibility_floor_matches_hand_computation() {
        // r = 1/4, b = 10^4: sqrt(1280000/7) = 427.61...
        let got = n_lower_bound_c33(&rat_frac(1, 4), 10_000).unwrap();
        assert!((got - (1_280_000.0f64 / 7.0).sqrt()).abs() < 1e-9);
        assert!((got - 427.617).abs() < 1e-3);
        // Outside (0, 1/2) there is no floor.
        assert!(n_lower_bound_c33(&rat_frac(1, 2), 10_000).is_none());
        assert!(n_lower_bound_c33(&rat_frac(3, 4), 10_000).is_none());
        assert!(n_lower_bound_c33(&rat_frac(0, 1), 10_000).is_none());
    }

    #[test]
    fn epsilon_models_monotone_in_n() {
        let rate = rat_frac(1, 2);
        let configs = [
            BoundQuery {
                k: 12,
                b: 100,
                construction: BoundConstruction::C33,
                assumed_rate: None,
                cap: DEFAULT_SCAN_CAP,
            },
            BoundQuery {
                k: 12,
                b: 100,
                construction: BoundConstruction::C35 { q_e: 2 },
                assumed_rate: None,
                cap: DEFAULT_SCAN_CAP,
            },
            BoundQuery {
                k: 12,
                b: 100,
                construction: BoundConstruction::C33,
                assumed_rate: Some(rate.clone()),
                cap: DEFAULT_SCAN_CAP,
            },
            BoundQuery {
                k: 12,
                b: 100,
                construction: BoundConstruction::C35 { q_e: 2 },
                assumed_rate: Some(rate),
                cap: DEFAULT_SCAN_CAP,
            },
        ];
        for query in &configs {
            let mut last = Rat::zero();
            for n in query.k + 1..query.k + 200 {
                let eps = epsilon_model(query, n);
                assert!(eps >= last, "model must not decrease, n={n}");
                last = eps;
            }
        }
    }

    #[test]
    fn min_rate_curve_shapes() {
        let ks: Vec<u64> = (2..=30).collect();
        let points = min_rate_curve(
            10_000,
            &ks,
            |_| BoundConstruction::ClassicalMds { sigma: 3 },
            None,
            DEFAULT_SCAN_CAP,
        );
        for p in &points {
            if p.k < 3 {
                // k below sigma flips the denominator: the bound is silent.
                assert_eq!(p.n_max, NMax::Unbounded, "k={}", p.k);
            } else {
                assert!(matches!(p.n_max, NMax::Bounded(_)), "k={}", p.k);
                let r = p.r_min.unwrap();
                assert!((0.0..=1.0).contains(&r));
            }
        }
        // Classical r_min tends to 1: bounded n_max close to k for large k.
        let last = points.last().unwrap();
        assert!(last.r_min.unwrap() > 0.8);
    }
}
