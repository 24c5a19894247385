//! Coding-overhead analytics: how much larger the retrieved bins are than
//! the source data, exactly and asymptotically.

use crate::code::CodeSpec;
use crate::construction::Construction;
use crate::encoder::projection_length;
use crate::error::CodecError;
use crate::rat::{rat_u, Rat};
use num_traits::{One, Signed, ToPrimitive};

/// `floor(x/2) * (floor(x/2) + 1)`: twice the sum `1 + 2 + ... + floor(x/2)`.
pub fn phi(x: u64) -> u64 {
    let h = x / 2;
    h * (h + 1)
}

/// Sum of |p| over the `t` integers of smallest magnitude
/// (`-floor((t-1)/2) ..= ceil((t-1)/2)`): equals `floor(t^2 / 4)`.
pub fn sum_abs_p_c33(t: u64) -> u64 {
    ((u128::from(t) * u128::from(t)) / 4) as u64
}

/// Sum of |p| over the `t` consecutive odd integers of smallest magnitude
/// (ending at the smallest odd integer >= t-1): equals `ceil(t^2 / 2)`.
pub fn sum_abs_p_c35(t: u64) -> u64 {
    (u128::from(t) * u128::from(t)).div_ceil(2) as u64
}

/// Exact and approximate overhead of retrieving the worst-case
/// reconstruction subset, relative to the source size `k * b`.
#[derive(Clone, Debug)]
pub struct OverheadReport {
    /// Projections a receiver must gather.
    pub reconstruction_size: usize,
    /// Bin counts of all n projections, in direction order.
    pub projection_lengths: Vec<u64>,
    /// Largest total bin count over any reconstruction-size subset.
    pub worst_subset_total: u64,
    /// `worst_subset_total / (k b) - 1`.
    pub eps_exact: Rat,
    /// Family closed form for the same quantity; `None` for custom sets.
    pub eps_closed_form: Option<Rat>,
    /// Leading-order approximation; `None` for custom sets.
    pub eps_asymptotic: Option<f64>,
    /// Guaranteed enclosure of `eps_exact` around the smooth approximant;
    /// `None` for custom sets.
    pub bracket: Option<(Rat, Rat)>,
    /// Average bins per retrieved projection: `worst_subset_total / s`.
    pub b_prime_avg: Rat,
}

/// Closed-form exact overhead of the q=1 family:
/// `(k-1) (S33(n) - S33(n-k)) / (k b)`.
pub(crate) fn eps_closed_c33(n: u64, k: u64, b: u64) -> Rat {
    assert!(n >= k && k >= 1 && b >= 1);
    rat_u(k - 1) * rat_u(sum_abs_p_c33(n) - sum_abs_p_c33(n - k)) / rat_u(k * b)
}

/// Closed-form exact overhead of the even-q family with `s = ceil(k/q_e)`:
/// `((k-1) (S35(n) - S35(n-s)) + s q_e (b-1) + s) / (k b) - 1`.
pub(crate) fn eps_closed_c35(n: u64, k: u64, b: u64, q_e: u64) -> Rat {
    assert!(k >= 1 && b >= 1 && q_e >= 1);
    let s = k.div_ceil(q_e);
    assert!(n >= s);
    let total = rat_u(k - 1) * rat_u(sum_abs_p_c35(n) - sum_abs_p_c35(n - s))
        + rat_u(s * q_e * (b - 1))
        + rat_u(s);
    total / rat_u(k * b) - Rat::one()
}

/// Leading-order overhead of the q=1 family: `(k-1)(2n-k) / (4b)`.
pub fn overhead_asymptotic_c33(n: u64, k: u64, b: u64) -> f64 {
    assert!(n >= k && k >= 1 && b >= 1);
    (k - 1) as f64 * (2 * n - k) as f64 / (4 * b) as f64
}

/// Leading-order overhead of the even-q family:
/// `(s / (k b)) ((k-1)(n - s/2) + (b-1) q_e + 1) - 1` with `s = ceil(k/q_e)`.
pub fn overhead_asymptotic_c35(n: u64, k: u64, b: u64, q_e: u64) -> f64 {
    let r = c35_smooth_rational(n, k, b, q_e);
    r.to_f64().expect("finite rational")
}

/// The C35 asymptote as an exact rational, used for bracket construction.
fn c35_smooth_rational(n: u64, k: u64, b: u64, q_e: u64) -> Rat {
    assert!(k >= 1 && b >= 1 && q_e >= 1);
    let s = k.div_ceil(q_e);
    assert!(n >= s);
    // s (n - s/2) is the smooth stand-in for S35(n) - S35(n - s).
    let smooth_sum = rat_u(s) * (rat_u(n) - rat_u(s) / rat_u(2));
    let total = rat_u(k - 1) * smooth_sum + rat_u(s * q_e * (b - 1)) + rat_u(s);
    total / rat_u(k * b) - Rat::one()
}

/// The C33 asymptote as an exact rational: `(k-1)(2n-k)/(4b)`.
fn c33_smooth_rational(n: u64, k: u64, b: u64) -> Rat {
    rat_u(k - 1) * rat_u(2 * n - k) / rat_u(4 * b)
}

/// Evaluates the worst-case retrieval overhead of `spec` by summing the
/// `reconstruction_size` largest projection lengths.
///
/// Maximizing a sum of per-projection lengths over subsets is achieved by
/// the sorted suffix; [`overhead_exact_enumerated`] cross-checks this by
/// brute force on small n.
pub fn overhead_exact(spec: &CodeSpec) -> Result<OverheadReport, CodecError> {
    let n = spec.n() as u64;
    let k = spec.k() as u64;
    let b = spec.b() as u64;
    let s = spec.reconstruction_size();
    if s == 0 || s > spec.n() {
        return Err(CodecError::Parameter(format!(
            "reconstruction size {s} incompatible with n={n}"
        )));
    }
    let projection_lengths: Vec<u64> = spec
        .directions()
        .iter()
        .map(|&d| projection_length(d, spec.b(), spec.k()) as u64)
        .collect();
    let mut sorted = projection_lengths.clone();
    sorted.sort_unstable();
    let worst_subset_total: u64 = sorted[sorted.len() - s..].iter().sum();
    let eps_exact = rat_u(worst_subset_total) / rat_u(k * b) - Rat::one();

    let (eps_closed_form, eps_asymptotic, bracket) = match spec.construction() {
        Construction::C33 => {
            let closed = eps_closed_c33(n, k, b);
            let smooth = c33_smooth_rational(n, k, b);
            let half_width = rat_u(k - 1) / rat_u(4 * k * b);
            (
                Some(closed),
                Some(overhead_asymptotic_c33(n, k, b)),
                Some((&smooth - &half_width, &smooth + &half_width)),
            )
        }
        Construction::C35 { q_e } => {
            let q_e = u64::from(q_e);
            let closed = eps_closed_c35(n, k, b, q_e);
            let smooth = c35_smooth_rational(n, k, b, q_e);
            let half_width = rat_u(k - 1) / rat_u(2 * k * b);
            (
                Some(closed),
                Some(overhead_asymptotic_c35(n, k, b, q_e)),
                Some((&smooth - &half_width, &smooth + &half_width)),
            )
        }
        Construction::Custom => (None, None, None),
    };

    Ok(OverheadReport {
        reconstruction_size: s,
        projection_lengths,
        worst_subset_total,
        eps_exact,
        eps_closed_form,
        eps_asymptotic,
        bracket,
        b_prime_avg: rat_u(worst_subset_total) / rat_u(s as u64),
    })
}

/// Brute-force worst-case overhead over every reconstruction-size subset.
/// Guarded to n <= 25; exists as an oracle for [`overhead_exact`].
pub fn overhead_exact_enumerated(spec: &CodeSpec) -> Result<Rat, CodecError> {
    let n = spec.n();
    let s = spec.reconstruction_size();
    if n > 25 {
        return Err(CodecError::Parameter(format!(
            "subset enumeration capped at n=25, got n={n}"
        )));
    }
    if s == 0 || s > n {
        return Err(CodecError::Parameter(format!(
            "reconstruction size {s} incompatible with n={n}"
        )));
    }
    let lengths: Vec<u64> = spec
        .directions()
        .iter()
        .map(|&d| projection_length(d, spec.b(), spec.k()) as u64)
        .collect();
    let mut worst = 0u64;
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != s {
            continue;
        }
        let total: u64 = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| lengths[i]).sum();
        worst = worst.max(total);
    }
    Ok(rat_u(worst) / rat_u((spec.k() * spec.b()) as u64) - Rat::one())
}

/// Relative error of the coded block volume implied by using `approx`
/// instead of `exact`: `|exact - approx| / (1 + exact)`.
pub fn coded_volume_relative_error(exact: &Rat, approx: &Rat) -> f64 {
    let diff = (exact - approx).abs();
    let denom = Rat::one() + exact.clone();
    (diff / denom).to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{directions_c33, directions_c35};
    use crate::direction::Direction;
    use crate::rat::rat_frac;

    #[test]
    fn phi_small_values() {
        let expect = [0, 0, 2, 2, 6, 6, 12];
        for (x, &e) in expect.iter().enumerate() {
            assert_eq!(phi(x as u64), e, "phi({x})");
        }
    }

    #[test]
    fn magnitude_sums_match_direct_enumeration() {
        // Oracle: sum |p| over the actual direction sets.
        for t in 1..=400u64 {
            let direct: u64 = directions_c33(t as usize)
                .unwrap()
                .iter()
                .map(|d| u64::from(d.p().unsigned_abs()))
                .sum();
            assert_eq!(sum_abs_p_c33(t), direct, "c33 t={t}");
            let direct: u64 = directions_c35(t as usize, 2)
                .unwrap()
                .iter()
                .map(|d| u64::from(d.p().unsigned_abs()))
                .sum();
            assert_eq!(sum_abs_p_c35(t), direct, "c35 t={t}");
        }
    }

    #[test]
    fn magnitude_sum_frozen_values() {
        assert_eq!(
            (1..=7).map(sum_abs_p_c33).collect::<Vec<_>>(),
            vec![0, 1, 2, 4, 6, 9, 12]
        );
        assert_eq!(
            (1..=5).map(sum_abs_p_c35).collect::<Vec<_>>(),
            vec![1, 2, 5, 8, 13]
        );
    }

    #[test]
    fn c33_sum_equals_half_phi_pair() {
        for t in 1..=200 {
            assert_eq!(2 * sum_abs_p_c33(t), phi(t) + phi(t - 1), "t={t}");
        }
    }

    #[test]
    fn c33_exact_frozen() {
        let spec = CodeSpec::new(Construction::C33, 5, 3, 4, 1).unwrap();
        let rep = overhead_exact(&spec).unwrap();
        assert_eq!(rep.eps_exact, rat_frac(5, 6));
        assert_eq!(rep.eps_closed_form, Some(rat_frac(5, 6)));
        assert_eq!(rep.worst_subset_total, 22);
        assert_eq!(rep.projection_lengths, vec![8, 6, 4, 6, 8]);
    }

    #[test]
    fn c33_exact_and_bracket_frozen_larger() {
        let spec = CodeSpec::new(Construction::C33, 10, 5, 100, 1).unwrap();
        let rep = overhead_exact(&spec).unwrap();
        assert_eq!(rep.eps_exact, rat_frac(19, 125));
        let (lo, hi) = rep.bracket.unwrap();
        assert_eq!(lo, rat_frac(74, 500));
        assert_eq!(hi, rat_frac(76, 500));
        assert!(lo <= rep.eps_exact && rep.eps_exact <= hi);
        assert!((rep.eps_asymptotic.unwrap() - 0.15).abs() < 1e-12);
    }

    #[test]
    fn c35_exact_frozen() {
        let spec = CodeSpec::new(Construction::C35 { q_e: 2 }, 4, 6, 8, 1).unwrap();
        let rep = overhead_exact(&spec).unwrap();
        assert_eq!(rep.reconstruction_size, 3);
        assert_eq!(rep.projection_lengths, vec![30, 20, 20, 30]);
        assert_eq!(rep.worst_subset_total, 80);
        assert_eq!(rep.eps_exact, rat_frac(2, 3));
        assert_eq!(rep.eps_closed_form, Some(rat_frac(2, 3)));
        assert_eq!(rep.b_prime_avg, rat_frac(80, 3));
        let (lo, hi) = rep.bracket.unwrap();
        assert!(lo <= rep.eps_exact && rep.eps_exact <= hi);
    }

    #[test]
    fn closed_forms_match_subset_maximum() {
        for n in 1..=12u64 {
            for k in 1..=n {
                for b in [1u64, 2, 7, 64] {
                    let spec =
                        CodeSpec::new(Construction::C33, n as usize, k as usize, b as usize, 1)
                            .unwrap();
                    let rep = overhead_exact(&spec).unwrap();
                    assert_eq!(
                        rep.eps_exact,
                        rep.eps_closed_form.clone().unwrap(),
                        "c33 n={n} k={k} b={b}"
                    );
                    assert_eq!(
                        rep.eps_exact,
                        overhead_exact_enumerated(&spec).unwrap(),
                        "c33 enumeration n={n} k={k} b={b}"
                    );
                    let (lo, hi) = rep.bracket.unwrap();
                    assert!(lo <= rep.eps_exact && rep.eps_exact <= hi);
                }
            }
        }
        for n in 1..=10u64 {
            for k in 1..=12u64 {
                for q_e in [2u64, 4] {
                    let s = k.div_ceil(q_e);
                    if n < s {
                        continue;
                    }
                    for b in [1u64, 8, 100] {
                        let spec = CodeSpec::new(
                            Construction::C35 { q_e: q_e as u16 },
                            n as usize,
                            k as usize,
                            b as usize,
                            1,
                        )
                        .unwrap();
                        let rep = overhead_exact(&spec).unwrap();
                        assert_eq!(
                            rep.eps_exact,
                            rep.eps_closed_form.clone().unwrap(),
                            "c35 n={n} k={k} b={b} q_e={q_e}"
                        );
                        assert_eq!(
                            rep.eps_exact,
                            overhead_exact_enumerated(&spec).unwrap(),
                            "c35 enumeration n={n} k={k} b={b} q_e={q_e}"
                        );
                        let (lo, hi) = rep.bracket.unwrap();
                        assert!(lo <= rep.eps_exact && rep.eps_exact <= hi);
                    }
                }
            }
        }
    }

    #[test]
    fn overhead_scales_inversely_with_rows() {
        // eps is exactly proportional to 1/b: doubling b halves it.
        for (n, k) in [(5u64, 3u64), (10, 5), (9, 9)] {
            for b in [2u64, 10, 50] {
                let e1 = eps_closed_c33(n, k, b);
                let e2 = eps_closed_c33(n, k, 2 * b);
                assert_eq!(e1, e2 * rat_u(2), "n={n} k={k} b={b}");
            }
        }
        for (n, k, q_e) in [(4u64, 6u64, 2u64), (6, 8, 4), (5, 5, 2)] {
            for b in [2u64, 16] {
                // Only the (b-1) term and normalization depend on b; the
                // inverse scaling holds for the centered quantity.
                let e1 = eps_closed_c35(n, k, b, q_e);
                let e2 = eps_closed_c35(n, k, 2 * b, q_e);
                assert!(e1 > e2, "n={n} k={k} b={b} q_e={q_e}");
            }
        }
    }

    #[test]
    fn custom_sets_report_generic_overhead_only() {
        let dirs = vec![
            Direction::new(-1, 1).unwrap(),
            Direction::new(1, 0).unwrap(),
            Direction::new(1, 1).unwrap(),
        ];
        let spec = CodeSpec::with_directions(3, 4, 1, dirs).unwrap();
        let rep = overhead_exact(&spec).unwrap();
        assert_eq!(rep.projection_lengths, vec![6, 3, 6]);
        assert_eq!(rep.worst_subset_total, 15);
        assert_eq!(rep.eps_exact, rat_frac(15, 12) - Rat::one());
        assert!(rep.eps_closed_form.is_none());
        assert!(rep.eps_asymptotic.is_none());
        assert!(rep.bracket.is_none());
    }

    #[test]
    fn volume_error_metric() {
        let exact = rat_frac(5, 6);
        let approx = rat_frac(5, 6);
        assert_eq!(coded_volume_relative_error(&exact, &approx), 0.0);
        let off = rat_frac(11, 12);
        // |5/6 - 11/12| / (1 + 5/6) = (1/12)/(11/6) = 1/22.
        let got = coded_volume_relative_error(&exact, &off);
        assert!((got - 1.0 / 22.0).abs() < 1e-15);
    }
}
