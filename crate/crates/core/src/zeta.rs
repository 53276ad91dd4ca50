//! The truncated-sum continuation of zeta and its factor function.
//!
//! For a truncation point `N` the evaluator computes
//!
//! ```text
//! Z(s) = sum_{n=1}^{N-1} n^{-s}  +  N^{1-s}/(s-1)  +  N^{-s}/2
//!      + s * sum_{mu>=1} (B_{2mu}/(2mu)!) (s+1)...(s+2mu-2) N^{1-s-2mu}
//! ```
//!
//! with the correction sum cut at its smallest term (never summing past the
//! point where terms start growing) and an error estimate of four times the
//! first omitted term. The factor function
//!
//! ```text
//! F(s) = (N^{s-1}/s) sum_{n=1}^{N-1} n^{-s}  +  1/(2Ns)
//!      + sum_{mu>=1} (B_{2mu}/(2mu)!) (s+1)...(s+2mu-2) N^{-2mu}
//! ```
//!
//! shares the partial sum and the correction terms with `Z` (one stopping
//! decision for both), which makes the identity `F(s) - Q(s) =
//! (N^{s-1}/s) Z(s)` with `Q(s) = 1/(s(1-s))` hold term by term at matched
//! truncation; `check_factor_identity` verifies it to rounding error.

use crate::bernoulli::BernoulliTable;
use crate::error::CoreError;
use crate::gamma::{ln_sin_pi, log_gamma};
use crate::scalar::{fd, sc, sc_u, Cx, Scalar};
use crate::Result;

/// Hard ceiling for the automatic truncation search.
pub const MAX_AUTO_N: u32 = 1_000_000;

/// Truncation parameters for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalParams<T: Scalar> {
    /// Truncation point `N >= 2`.
    pub n: u32,
    /// Cap on the number of correction terms.
    pub mu_max: u32,
    /// Requested absolute accuracy.
    pub tol: T,
}

impl<T: Scalar> EvalParams<T> {
    pub fn new(n: u32, mu_max: u32, tol: T) -> Result<Self> {
        if n < 2 {
            return Err(CoreError::parameter(format!(
                "truncation point must be >= 2, got {n}"
            )));
        }
        if mu_max == 0 {
            return Err(CoreError::parameter("mu_max must be >= 1"));
        }
        if !(tol > T::zero()) || !tol.is_finite() {
            return Err(CoreError::parameter("tolerance must be finite and > 0"));
        }
        Ok(Self { n, mu_max, tol })
    }

    /// Chooses `N` and `mu_max` so the estimated error at `s` is below
    /// `tol`, doubling `N` from a floor of `max(10, 2(|Re s| + |Im s| + 1))`.
    pub fn auto(s: Cx<T>, tol: T, table: &BernoulliTable) -> Result<Self> {
        if !(tol > T::zero()) || !tol.is_finite() {
            return Err(CoreError::parameter("tolerance must be finite and > 0"));
        }
        let floor = sc::<T>(2.0) * (s.re.abs() + s.im.abs() + T::one());
        let mut n = match floor.ceil().to_u32() {
            Some(v) => v.max(10),
            None => {
                return Err(CoreError::parameter(format!(
                    "evaluation point too large for automatic parameters: {s}"
                )))
            }
        };
        let mut best = T::infinity();
        while n <= MAX_AUTO_N {
            let tails = gb_tails(s, n, table.mu_limit(), table)?;
            let est = zeta_error_estimate(s, n, &tails);
            if est <= tol {
                let mu_max = (tails.used_mu + 1).min(table.mu_limit());
                return Self::new(n, mu_max, tol);
            }
            best = best.min(est);
            n = n.saturating_mul(2);
        }
        Err(CoreError::Capacity {
            requested: fd(tol),
            achievable: fd(best),
        })
    }

    /// Automatic parameters good on the whole circle `|s - 1/2| = rho`: the
    /// driver point is the one maximising `|Re s| + |Im s|` on the circle.
    pub fn auto_for_radius(rho: T, tol: T, table: &BernoulliTable) -> Result<Self> {
        if !(rho > T::zero()) || !rho.is_finite() {
            return Err(CoreError::parameter("radius must be finite and > 0"));
        }
        let half = sc::<T>(0.5);
        let c = rho * T::FRAC_1_SQRT_2();
        Self::auto(Cx::new(half + c, c), tol, table)
    }
}

/// Value with its accuracy bookkeeping.
#[derive(Debug, Clone, Copy)]
pub struct Estimated<T: Scalar> {
    pub value: Cx<T>,
    /// Conservative absolute error estimate (truncation plus rounding).
    pub error_estimate: T,
    /// Correction terms actually summed.
    pub used_mu: u32,
    /// Whether `error_estimate <= tol` of the parameters used.
    pub meets_tol: bool,
}

struct PartialSum<T: Scalar> {
    value: Cx<T>,
    abs_sum: T,
}

/// `sum_{k=1}^{n-1} k^{-s}` plus the sum of term magnitudes.
fn partial_sum<T: Scalar>(s: Cx<T>, n: u32) -> PartialSum<T> {
    let mut value = Cx::new(T::zero(), T::zero());
    let mut abs_sum = T::zero();
    for k in 1..n {
        let ln_k = sc_u::<T>(k).ln();
        let term = (-s * ln_k).exp();
        value = value + term;
        abs_sum = abs_sum + (-s.re * ln_k).exp();
    }
    PartialSum { value, abs_sum }
}

struct TailSums<T: Scalar> {
    /// `sum_mu (B_{2mu}/(2mu)!) (s+1)...(s+2mu-2) N^{-2mu}` over used terms.
    f_tail: Cx<T>,
    used_mu: u32,
    /// Magnitude of the first omitted term of that sum.
    omitted_mag: T,
}

/// Correction-tail sum shared by the zeta evaluator and the factor
/// function. Terms are built incrementally from the exact Bernoulli ratio
/// table so neither `B_{2mu}` nor the rising product is ever materialised.
fn gb_tails<T: Scalar>(
    s: Cx<T>,
    n: u32,
    mu_max: u32,
    table: &BernoulliTable,
) -> Result<TailSums<T>> {
    if mu_max == 0 {
        return Err(CoreError::parameter("mu_max must be >= 1"));
    }
    if mu_max > table.mu_limit() {
        return Err(CoreError::Capacity {
            requested: f64::from(mu_max),
            achievable: f64::from(table.mu_limit()),
        });
    }
    let n_t = sc_u::<T>(n);
    let inv_n2 = (n_t * n_t).recip();
    let mut term = Cx::new(table.first_tail_coeff::<T>() * inv_n2, T::zero());
    let mut f_tail = term;
    let mut prev_mag = term.norm();
    let mut mu = 1u32;
    while mu < mu_max {
        mu += 1;
        let ratio = table.tail_ratio::<T>(mu)? * inv_n2;
        let a = s + sc_u::<T>(2 * mu - 3);
        let b = s + sc_u::<T>(2 * mu - 2);
        term = term * a * b * ratio;
        let mag = term.norm();
        if mag >= prev_mag && prev_mag > T::zero() {
            return Ok(TailSums {
                f_tail,
                used_mu: mu - 1,
                omitted_mag: mag,
            });
        }
        f_tail = f_tail + term;
        prev_mag = mag;
        if mag == T::zero() {
            // Rising factor hit a negative even integer: every later term
            // vanishes identically.
            return Ok(TailSums {
                f_tail,
                used_mu: mu,
                omitted_mag: T::zero(),
            });
        }
    }
    // Cap reached while terms were still shrinking; extrapolate one step.
    let two_pi_n = sc::<T>(2.0) * T::PI() * n_t;
    let a = (s + sc_u::<T>(2 * mu - 1)).norm();
    let b = (s + sc_u::<T>(2 * mu)).norm();
    let omitted = prev_mag * a * b / (two_pi_n * two_pi_n);
    Ok(TailSums {
        f_tail,
        used_mu: mu,
        omitted_mag: omitted,
    })
}

fn is_exactly<T: Scalar>(s: Cx<T>, re: f64, im: f64) -> bool {
    s.re == sc::<T>(re) && s.im == sc::<T>(im)
}

fn zeta_error_estimate<T: Scalar>(s: Cx<T>, n: u32, tails: &TailSums<T>) -> T {
    let n_t = sc_u::<T>(n);
    let scale = (Cx::new(T::one() - s.re, -s.im) * n_t.ln()).exp().norm() * s.norm();
    let four = sc::<T>(4.0);
    four * scale * tails.omitted_mag + rounding_floor_bound(s, n)
}

/// Crude but safe bound on the accumulated rounding of the partial sum and
/// boundary terms, `~eps * sum |n^{-s}|`.
fn rounding_floor_bound<T: Scalar>(s: Cx<T>, n: u32) -> T {
    let n_t = sc_u::<T>(n);
    let sigma = s.re;
    let one = T::one();
    let abs_bound = if sigma > one {
        sigma / (sigma - one)
    } else {
        one + (n_t.powf(one - sigma) - one).abs() / (one - sigma).abs().max(sc(1e-3))
    };
    let boundary = n_t.powf(one - sigma) * (one + (s - one).norm().recip().min(sc(1e3)));
    sc::<T>(4.0) * T::epsilon() * (abs_bound + boundary)
}

/// Evaluates the continuation at `s`. Fails at the pole `s = 1`.
pub fn evaluate_zeta<T: Scalar>(
    s: Cx<T>,
    params: &EvalParams<T>,
    table: &BernoulliTable,
) -> Result<Estimated<T>> {
    if is_exactly(s, 1.0, 0.0) {
        return Err(CoreError::Pole {
            context: "zeta has its pole at s = 1".into(),
        });
    }
    let n_t = sc_u::<T>(params.n);
    let ln_n = n_t.ln();
    let p = partial_sum(s, params.n);
    let tails = gb_tails(s, params.n, params.mu_max, table)?;
    let one = Cx::new(T::one(), T::zero());
    let n_pow = ((one - s) * ln_n).exp(); // N^{1-s}
    let i1 = n_pow / (s - one);
    let i2 = n_pow / n_t * sc::<T>(0.5); // N^{-s}/2
    let z_tail = s * n_pow * tails.f_tail;
    let value = p.value + i1 + i2 + z_tail;

    let four = sc::<T>(4.0);
    let truncation = four * s.norm() * n_pow.norm() * tails.omitted_mag;
    let rounding = four * T::epsilon() * (p.abs_sum + i1.norm() + i2.norm() + z_tail.norm());
    let error_estimate = truncation + rounding;
    Ok(Estimated {
        value,
        error_estimate,
        used_mu: tails.used_mu,
        meets_tol: error_estimate <= params.tol,
    })
}

/// The factor function `F`. Fails at the pole `s = 0`.
pub fn f_gb<T: Scalar>(
    s: Cx<T>,
    params: &EvalParams<T>,
    table: &BernoulliTable,
) -> Result<Estimated<T>> {
    if is_exactly(s, 0.0, 0.0) {
        return Err(CoreError::Pole {
            context: "the factor function has its pole at s = 0".into(),
        });
    }
    let n_t = sc_u::<T>(params.n);
    let ln_n = n_t.ln();
    let p = partial_sum(s, params.n);
    let tails = gb_tails(s, params.n, params.mu_max, table)?;
    let one = Cx::new(T::one(), T::zero());
    let kappa = ((s - one) * ln_n).exp() / s; // N^{s-1}/s
    let boundary = (s * n_t * sc::<T>(2.0)).inv(); // 1/(2Ns)
    let value = kappa * p.value + boundary + tails.f_tail;

    let four = sc::<T>(4.0);
    let truncation = four * tails.omitted_mag;
    let rounding =
        four * T::epsilon() * (kappa.norm() * p.abs_sum + boundary.norm() + tails.f_tail.norm());
    let error_estimate = truncation + rounding;
    Ok(Estimated {
        value,
        error_estimate,
        used_mu: tails.used_mu,
        meets_tol: error_estimate <= params.tol,
    })
}

/// The rational factor `Q(s) = 1/(s(1-s))`.
pub fn q_of<T: Scalar>(s: Cx<T>) -> Result<Cx<T>> {
    if is_exactly(s, 0.0, 0.0) || is_exactly(s, 1.0, 0.0) {
        return Err(CoreError::Pole {
            context: "Q has poles at s = 0 and s = 1".into(),
        });
    }
    let one = Cx::new(T::one(), T::zero());
    Ok((s * (one - s)).inv())
}

/// `Q` in centred coordinates `s = 1/2 + s'`: `1/(1/4 - s'^2)`.
///
/// Evaluating through `s'^2` makes `Q` at `s'` and at `-s'` bit-identical,
/// which the exactly-symmetric circle sampling relies on.
pub fn q_of_prime<T: Scalar>(sp: Cx<T>) -> Result<Cx<T>> {
    let quarter = Cx::new(sc::<T>(0.25), T::zero());
    let d = quarter - sp * sp;
    if d.re == T::zero() && d.im == T::zero() {
        return Err(CoreError::Pole {
            context: "Q has poles at s' = +-1/2".into(),
        });
    }
    Ok(d.inv())
}

/// Relative residual of `F(s) - Q(s) = (N^{s-1}/s) Z(s)` at matched
/// truncation: zero up to rounding whatever the parameters.
pub fn check_factor_identity<T: Scalar>(
    s: Cx<T>,
    params: &EvalParams<T>,
    table: &BernoulliTable,
) -> Result<T> {
    if is_exactly(s, 0.0, 0.0) || is_exactly(s, 1.0, 0.0) {
        return Err(CoreError::Pole {
            context: "identity check undefined at the poles s = 0 and s = 1".into(),
        });
    }
    let n_t = sc_u::<T>(params.n);
    let ln_n = n_t.ln();
    let p = partial_sum(s, params.n);
    let tails = gb_tails(s, params.n, params.mu_max, table)?;
    let one = Cx::new(T::one(), T::zero());
    let kappa = ((s - one) * ln_n).exp() / s;
    let n_pow = ((one - s) * ln_n).exp();

    let f = kappa * p.value + (s * n_t * sc::<T>(2.0)).inv() + tails.f_tail;
    let q = (s * (one - s)).inv();
    let z = p.value + n_pow / (s - one) + n_pow / n_t * sc::<T>(0.5) + s * n_pow * tails.f_tail;

    let lhs = f - q;
    let rhs = kappa * z;
    let scale = f.norm().max(q.norm()).max(rhs.norm()).max(T::one());
    Ok((lhs - rhs).norm() / scale)
}

/// Independent slow reference for `Re s > 1`: a long direct sum with a
/// midpoint integral tail, `sum_{n<=M} n^{-s} + (M+1/2)^{1-s}/(s-1)`.
pub fn dirichlet_oracle<T: Scalar>(s: Cx<T>, terms: u32) -> Result<Cx<T>> {
    if !(s.re > T::one()) {
        return Err(CoreError::domain(format!(
            "direct-sum reference requires Re s > 1, got {s}"
        )));
    }
    if terms < 10 {
        return Err(CoreError::parameter("reference needs at least 10 terms"));
    }
    let mut acc = Cx::new(T::zero(), T::zero());
    for k in 1..=terms {
        acc = acc + (-s * sc_u::<T>(k).ln()).exp();
    }
    let one = Cx::new(T::one(), T::zero());
    let m = sc_u::<T>(terms) + sc::<T>(0.5);
    let tail = ((one - s) * m.ln()).exp() / (s - one);
    Ok(acc + tail)
}

/// Evaluates zeta left of the critical strip through the functional
/// equation `zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)`,
/// with the prefactor assembled in log space so nothing overflows on the
/// way.
pub fn reflect_zeta<T: Scalar>(s: Cx<T>, tol: T, table: &BernoulliTable) -> Result<Estimated<T>> {
    if !(s.re < sc::<T>(0.5)) {
        return Err(CoreError::domain(format!(
            "reflection path is for Re s < 1/2, got {s}"
        )));
    }
    if s.im.abs() > sc::<T>(400.0) {
        return Err(CoreError::Capacity {
            requested: fd(s.im.abs()),
            achievable: 400.0,
        });
    }
    if is_exactly(s, 0.0, 0.0) {
        // Removable 0 * pole(zeta(1)) combination with known value.
        return Ok(Estimated {
            value: Cx::new(sc::<T>(-0.5), T::zero()),
            error_estimate: T::zero(),
            used_mu: 0,
            meets_tol: true,
        });
    }
    let one = Cx::new(T::one(), T::zero());
    let w = one - s;
    let ln_pre =
        s * T::LN_2() + (s - one) * T::PI().ln() + ln_sin_pi(s * sc::<T>(0.5)) + log_gamma(w)?;
    if ln_pre.re > sc::<T>(700.0) {
        return Err(CoreError::Capacity {
            requested: fd(ln_pre.re),
            achievable: 700.0,
        });
    }
    let pre = ln_pre.exp();
    let pre_mag = pre.norm();
    let inner_tol = tol / (T::one() + pre_mag);
    let params = EvalParams::auto(w, inner_tol, table)?;
    let inner = evaluate_zeta(w, &params, table)?;
    let value = pre * inner.value;
    let phase_rounding = value.norm() * T::epsilon() * (ln_pre.im.abs() + sc::<T>(4.0));
    let error_estimate = pre_mag * inner.error_estimate + phase_rounding;
    Ok(Estimated {
        value,
        error_estimate,
        used_mu: inner.used_mu,
        meets_tol: error_estimate <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;
    use proptest::prelude::*;

    fn table() -> &'static BernoulliTable {
        static TABLE: std::sync::OnceLock<BernoulliTable> = std::sync::OnceLock::new();
        TABLE.get_or_init(BernoulliTable::default)
    }

    fn eval_auto(s: C64, tol: f64) -> Estimated<f64> {
        let p = EvalParams::auto(s, tol, table()).unwrap();
        evaluate_zeta(s, &p, table()).unwrap()
    }

    #[test]
    fn matches_even_integer_closed_forms() {
        // pi^2/6 and pi^4/90.
        let z2 = eval_auto(C64::new(2.0, 0.0), 1e-13);
        assert!(z2.meets_tol);
        assert!((z2.value.re - 1.644_934_066_848_226_4).abs() < 1e-13);
        assert!(z2.value.im.abs() < 1e-15);
        let z4 = eval_auto(C64::new(4.0, 0.0), 1e-13);
        assert!((z4.value.re - 1.082_323_233_711_138_2).abs() < 1e-13);
    }

    #[test]
    fn matches_external_references() {
        let cases = [
            (C64::new(3.0, 0.0), C64::new(1.202_056_903_159_594_3, 0.0)),
            (C64::new(0.5, 0.0), C64::new(-1.460_354_508_809_586_8, 0.0)),
            (
                C64::new(3.0, 4.0),
                C64::new(0.890_554_906_965_073_2, -0.008_075_945_424_327_26),
            ),
            (
                C64::new(0.5, 100.0),
                C64::new(2.692_619_885_681_324, -0.020_386_029_602_598_162),
            ),
        ];
        for (s, reference) in cases {
            let got = eval_auto(s, 1e-12);
            assert!(
                (got.value - reference).norm() < 1e-11,
                "zeta({s}) = {} vs {reference}",
                got.value
            );
        }
    }

    #[test]
    fn vanishes_at_first_nontrivial_zero_ordinate() {
        let s = C64::new(0.5, 14.134_725_141_734_694);
        let got = eval_auto(s, 1e-11);
        assert!(got.value.norm() < 1e-9, "|zeta| = {}", got.value.norm());
    }

    #[test]
    fn trivial_zeros_are_hit_with_tiny_residual() {
        let p = EvalParams::new(10, 20, 1e-8).unwrap();
        for re in [-2.0, -4.0] {
            let got = evaluate_zeta(C64::new(re, 0.0), &p, table()).unwrap();
            // The correction tail terminates exactly, leaving only the
            // rounding of the boundary cancellation (scale ~N^{|re|+1}).
            assert!(
                got.value.norm() < 1e-10,
                "zeta({re}) = {} too large",
                got.value
            );
        }
    }

    #[test]
    fn correction_terms_terminate_exactly_at_negative_even_integers() {
        let tails = gb_tails(C64::new(-2.0, 0.0), 10, 32, table()).unwrap();
        assert_eq!(tails.omitted_mag, 0.0);
        assert!(tails.used_mu <= 3);
    }

    #[test]
    fn pole_is_reported() {
        let p = EvalParams::new(16, 8, 1e-6).unwrap();
        assert!(matches!(
            evaluate_zeta(C64::new(1.0, 0.0), &p, table()),
            Err(CoreError::Pole { .. })
        ));
        // Near-pole evaluation stays finite and dominated by 1/(s-1).
        let near = evaluate_zeta(C64::new(1.0, 1e-9), &p, table()).unwrap();
        assert!(near.value.norm() > 1e8);
        assert!(near.value.is_finite());
    }

    #[test]
    fn honest_error_flag_when_parameters_are_too_small() {
        let p = EvalParams::new(4, 3, 1e-12).unwrap();
        let s = C64::new(0.5, 30.0);
        let got = evaluate_zeta(s, &p, table()).unwrap();
        assert!(!got.meets_tol);
        let reference = eval_auto(s, 1e-12).value;
        assert!(
            (got.value - reference).norm() <= 4.0 * got.error_estimate,
            "estimate not conservative enough: diff {} vs est {}",
            (got.value - reference).norm(),
            got.error_estimate
        );
    }

    #[test]
    fn auto_respects_the_truncation_floor() {
        let p = EvalParams::auto(C64::new(0.5, 30.0), 1e-10, table()).unwrap();
        assert!(p.n >= 63);
        let p = EvalParams::auto_for_radius(2.0, 1e-10, table()).unwrap();
        assert!(p.n >= 10);
    }

    #[test]
    fn auto_reports_capacity_for_impossible_tolerances() {
        match EvalParams::auto(C64::new(2.0, 0.0), 1e-30, table()) {
            Err(CoreError::Capacity {
                requested,
                achievable,
            }) => {
                assert_eq!(requested, 1e-30);
                assert!(achievable > 0.0 && achievable < 1e-10);
            }
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn oracle_agrees_with_evaluator_on_the_right_half() {
        for s in [
            C64::new(2.0, 0.0),
            C64::new(4.0, 0.0),
            C64::new(3.0, 4.0),
            C64::new(2.5, -11.0),
        ] {
            let reference = dirichlet_oracle(s, 50_000).unwrap();
            let got = eval_auto(s, 1e-12).value;
            assert!(
                (got - reference).norm() < 1e-12,
                "mismatch at {s}: {got} vs {reference}"
            );
        }
    }

    #[test]
    fn oracle_rejects_the_strip() {
        assert!(matches!(
            dirichlet_oracle(C64::new(1.0, 0.0), 1000),
            Err(CoreError::Domain { .. })
        ));
        assert!(matches!(
            dirichlet_oracle(C64::new(0.3, 2.0), 1000),
            Err(CoreError::Domain { .. })
        ));
    }

    #[test]
    fn factor_function_pole_and_value() {
        let p = EvalParams::new(16, 16, 1e-10).unwrap();
        assert!(matches!(
            f_gb(C64::new(0.0, 0.0), &p, table()),
            Err(CoreError::Pole { .. })
        ));
        // F is regular at s = 1 even though Z is not.
        let at_one = f_gb(C64::new(1.0, 0.0), &p, table()).unwrap();
        assert!(at_one.value.is_finite());
    }

    #[test]
    fn factor_identity_holds_on_a_grid() {
        let p = EvalParams::new(24, 24, 1e-8).unwrap();
        for re in [-3.0, -0.5, 0.25, 0.5, 2.0, 4.0] {
            for im in [0.0, 0.5, 3.0, 14.0, 30.0] {
                let s = C64::new(re, im);
                if (s - C64::new(1.0, 0.0)).norm() < 1e-9 || s.norm() < 1e-9 {
                    continue;
                }
                let r = check_factor_identity(s, &p, table()).unwrap();
                assert!(r < 1e-13, "identity residual {r} at {s}");
            }
        }
    }

    #[test]
    fn identity_check_rejects_poles() {
        let p = EvalParams::new(16, 8, 1e-6).unwrap();
        for s in [C64::new(0.0, 0.0), C64::new(1.0, 0.0)] {
            assert!(matches!(
                check_factor_identity(s, &p, table()),
                Err(CoreError::Pole { .. })
            ));
        }
    }

    #[test]
    fn q_symmetry_is_exact_and_poles_are_rejected() {
        assert!(matches!(
            q_of(C64::new(0.0, 0.0)),
            Err(CoreError::Pole { .. })
        ));
        assert!(matches!(
            q_of(C64::new(1.0, 0.0)),
            Err(CoreError::Pole { .. })
        ));
        assert!(matches!(
            q_of_prime(C64::new(0.5, 0.0)),
            Err(CoreError::Pole { .. })
        ));
        let q = q_of(C64::new(0.25, 3.0)).unwrap();
        let qp = q_of_prime(C64::new(-0.25, 3.0)).unwrap();
        assert!((q - qp).norm() < 1e-15 * q.norm());
    }

    #[test]
    fn centred_q_is_even_bitwise() {
        for sp in [C64::new(0.3, 0.2), C64::new(-1.7, 5.0), C64::new(0.0, 2.0)] {
            let a = q_of_prime(sp).unwrap();
            let b = q_of_prime(-sp).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn reflection_matches_references_on_the_left() {
        let cases = [
            (C64::new(-1.0, 0.0), C64::new(-1.0 / 12.0, 0.0)),
            (C64::new(-3.0, 0.0), C64::new(1.0 / 120.0, 0.0)),
            (
                C64::new(-0.5, 0.0),
                C64::new(-0.207_886_224_977_354_57, 0.0),
            ),
            (
                C64::new(-2.0, -1.0),
                C64::new(0.029_195_593_243_464_28, 0.017_787_106_970_842_08),
            ),
            (
                C64::new(-5.5, 2.0),
                C64::new(-0.020_607_553_049_350_62, -0.023_427_328_480_044_351),
            ),
        ];
        for (s, reference) in cases {
            let got = reflect_zeta(s, 1e-12, table()).unwrap();
            assert!(
                (got.value - reference).norm() < 1e-11 * reference.norm().max(1.0),
                "reflect({s}) = {} vs {reference}",
                got.value
            );
        }
    }

    #[test]
    fn reflection_handles_origin_and_rejects_right_half() {
        let at_zero = reflect_zeta(C64::new(0.0, 0.0), 1e-12, table()).unwrap();
        assert_eq!(at_zero.value, C64::new(-0.5, 0.0));
        assert!(matches!(
            reflect_zeta(C64::new(2.0, 0.0), 1e-12, table()),
            Err(CoreError::Domain { .. })
        ));
        assert!(matches!(
            reflect_zeta(C64::new(-1.0, 500.0), 1e-12, table()),
            Err(CoreError::Capacity { .. })
        ));
    }

    #[test]
    fn trivial_zero_inputs_reflect_to_near_zero() {
        for re in [-2.0, -4.0, -6.0] {
            let got = reflect_zeta(C64::new(re, 0.0), 1e-12, table()).unwrap();
            assert!(got.value.norm() < 1e-13, "reflect({re}) = {}", got.value);
        }
    }

    proptest! {
        /// Conjugation commutes with evaluation, bit for bit.
        #[test]
        fn conjugate_symmetry_is_exact(
            re in -4.0f64..4.0,
            im in 0.01f64..35.0,
        ) {
            let s = C64::new(re, im);
            let p = EvalParams::new(32, 24, 1e-6).unwrap();
            let plus = evaluate_zeta(s, &p, table()).unwrap().value;
            let minus = evaluate_zeta(s.conj(), &p, table()).unwrap().value;
            prop_assert_eq!(plus.re, minus.re);
            prop_assert_eq!(plus.im, -minus.im);
        }

        /// Same for the factor function.
        #[test]
        fn factor_conjugate_symmetry_is_exact(
            re in -4.0f64..4.0,
            im in 0.01f64..35.0,
        ) {
            let s = C64::new(re, im);
            let p = EvalParams::new(32, 24, 1e-6).unwrap();
            let plus = f_gb(s, &p, table()).unwrap().value;
            let minus = f_gb(s.conj(), &p, table()).unwrap().value;
            prop_assert_eq!(plus.re, minus.re);
            prop_assert_eq!(plus.im, -minus.im);
        }

        /// The factor identity holds at random points and parameters.
        #[test]
        fn factor_identity_random(
            re in -5.0f64..5.0,
            im in -40.0f64..40.0,
            n in 8u32..80,
            mu in 4u32..32,
        ) {
            let s = C64::new(re, im);
            prop_assume!(s.norm() > 1e-3);
            prop_assume!((s - C64::new(1.0, 0.0)).norm() > 1e-3);
            let p = EvalParams::new(n, mu, 1e-6).unwrap();
            let r = check_factor_identity(s, &p, table()).unwrap();
            prop_assert!(r < 1e-12, "residual {} at {} (n={}, mu={})", r, s, n, mu);
        }

        /// Q(s) == Q(1-s) up to the rounding of forming 1-s twice.
        #[test]
        fn q_functional_symmetry(re in -6.0f64..6.0, im in -6.0f64..6.0) {
            let s = C64::new(re, im);
            prop_assume!(s.norm() > 1e-3);
            prop_assume!((s - C64::new(1.0, 0.0)).norm() > 1e-3);
            let one = C64::new(1.0, 0.0);
            let a = q_of(s).unwrap();
            let b = q_of(one - s).unwrap();
            prop_assert!((a - b).norm() <= 1e-12 * a.norm());
        }
    }
}
