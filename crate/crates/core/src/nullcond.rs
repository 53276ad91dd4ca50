//! Null conditions on quartet probes and the critical-line scanner.
//!
//! The parity split of the factor function is computed two independent
//! ways. The value route forms `F^S` and `F^AS` from two direct
//! evaluations sharing one truncation; it is stable at every radius and
//! is what the scanner and reports use. The series route recombines
//! extracted coefficients termwise; it is the literal windowed sum, and
//! its accuracy is bounded by `eps * sum_k |c_k| rho^k`, which dwarfs the
//! result whenever the sampled function is orders of magnitude larger on
//! the circle than at the probe. Both routes agree to rounding wherever
//! the series route is conditioned, and tests pin that agreement.

use crate::bernoulli::BernoulliTable;
use crate::circle::AnnulusClass;
use crate::error::CoreError;
use crate::gamma::log_gamma;
use crate::laurent::LaurentSeries;
use crate::scalar::{fd, sc, Cx, Scalar};
use crate::zeta::{evaluate_zeta, f_gb, q_of_prime, EvalParams};
use crate::Result;

/// Largest ordinate the Hardy-function machinery accepts; beyond it the
/// reflection prefactor used by consistency checks overflows.
pub const MAX_ORDINATE: f64 = 400.0;

/// Width to which zero brackets are refined.
pub const REFINE_WIDTH: f64 = 1e-9;

/// A probe `s' = rho e^(i alpha)` together with its reflection quartet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuartetPoint<T: Scalar> {
    rho: T,
    alpha: T,
}

impl<T: Scalar> QuartetPoint<T> {
    pub fn new(rho: T, alpha: T) -> Result<Self> {
        if !rho.is_finite() || rho <= T::zero() {
            return Err(CoreError::parameter(format!(
                "probe radius must be finite and > 0, got {rho}"
            )));
        }
        if !(alpha > T::zero()) || alpha > T::FRAC_PI_2() {
            return Err(CoreError::parameter(format!(
                "probe angle must lie in (0, pi/2], got {alpha}"
            )));
        }
        Ok(Self { rho, alpha })
    }

    /// The probe on the critical line, `alpha = pi/2` exactly.
    pub fn canonical(rho: T) -> Result<Self> {
        Self::new(rho, T::FRAC_PI_2())
    }

    /// Smallest angle keeping the probe inside the strip: `acos(1/(2rho))`
    /// for `rho > 1/2`, zero otherwise.
    pub fn alpha_min(rho: T) -> T {
        let half = sc::<T>(0.5);
        if rho > half {
            (half / rho).acos()
        } else {
            T::zero()
        }
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// `Re s' = rho cos alpha`; exactly zero on the canonical angle.
    pub fn epsilon(&self) -> T {
        if self.alpha == T::FRAC_PI_2() {
            T::zero()
        } else {
            self.rho * self.alpha.cos()
        }
    }

    /// `Im s' = rho sin alpha`.
    pub fn eta(&self) -> T {
        if self.alpha == T::FRAC_PI_2() {
            self.rho
        } else {
            self.rho * self.alpha.sin()
        }
    }

    pub fn s_prime(&self) -> Cx<T> {
        Cx::new(self.epsilon(), self.eta())
    }

    /// Off the real axis and strictly inside the strip.
    pub fn is_strictly_admissible(&self) -> bool {
        self.eta() > T::zero() && self.epsilon().abs() < sc::<T>(0.5)
    }
}

/// Residual magnitudes of the null conditions at one probe.
#[derive(Debug, Clone, Copy)]
pub struct ResidualReport<T: Scalar> {
    pub probe: QuartetPoint<T>,
    /// `|Re F^AS|` at the probe.
    pub r_as_real: T,
    /// `|Im F^AS|` at the probe.
    pub r_as_imag: T,
    /// `|F^S - Q|` at the probe.
    pub r_sym: T,
    /// `|Z_GB|` at the probe, the combined size of both conditions.
    pub r_total: T,
    /// Truncation order of the evaluations behind the numbers.
    pub n_used: u32,
    /// Deepest correction term any of them consumed.
    pub mu_used: u32,
}

/// Evaluation context shared by the value-route residual operations.
#[derive(Debug, Clone)]
pub struct NullConditionProbe<'a, T: Scalar> {
    params: EvalParams<T>,
    table: &'a BernoulliTable,
}

impl<'a, T: Scalar> NullConditionProbe<'a, T> {
    pub fn new(params: EvalParams<T>, table: &'a BernoulliTable) -> Self {
        Self { params, table }
    }

    /// Parameters adequate on the whole circle of radius `rho`.
    pub fn for_radius(rho: T, tol: T, table: &'a BernoulliTable) -> Result<Self> {
        Ok(Self {
            params: EvalParams::auto_for_radius(rho, tol, table)?,
            table,
        })
    }

    pub fn params(&self) -> &EvalParams<T> {
        &self.params
    }

    fn f_value(&self, sp: Cx<T>) -> Result<(Cx<T>, u32)> {
        let s = Cx::new(sc::<T>(0.5) + sp.re, sp.im);
        let est = f_gb(s, &self.params, self.table)?;
        if !est.meets_tol {
            return Err(CoreError::Capacity {
                requested: fd(self.params.tol),
                achievable: fd(est.error_estimate),
            });
        }
        Ok((est.value, est.used_mu))
    }

    /// `(F^S, F^AS)` at the centred point, from two evaluations sharing
    /// one truncation.
    pub fn f_parts(&self, sp: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
        let half = sc::<T>(0.5);
        let (plus, _) = self.f_value(sp)?;
        let (minus, _) = self.f_value(-sp)?;
        Ok(((plus + minus).scale(half), (plus - minus).scale(half)))
    }

    /// Both null-condition residuals plus the zeta magnitude at a probe.
    pub fn report(&self, probe: &QuartetPoint<T>) -> Result<ResidualReport<T>> {
        let sp = probe.s_prime();
        let half = sc::<T>(0.5);
        let (plus, mu_a) = self.f_value(sp)?;
        let (minus, mu_b) = self.f_value(-sp)?;
        let f_sym = (plus + minus).scale(half);
        let f_anti = (plus - minus).scale(half);
        let q = q_of_prime(sp)?;
        let s = Cx::new(half + sp.re, sp.im);
        let z = evaluate_zeta(s, &self.params, self.table)?;
        if !z.meets_tol {
            return Err(CoreError::Capacity {
                requested: fd(self.params.tol),
                achievable: fd(z.error_estimate),
            });
        }
        Ok(ResidualReport {
            probe: *probe,
            r_as_real: f_anti.re.abs(),
            r_as_imag: f_anti.im.abs(),
            r_sym: (f_sym - q).norm(),
            r_total: z.value.norm(),
            n_used: self.params.n,
            mu_used: mu_a.max(mu_b),
        })
    }

    /// Odd critical-line condition at `s = 1/2 + i rho`, value route:
    /// `|Im F_GB|`, which equals `|F^AS(i rho)|` by conjugation symmetry.
    pub fn line_odd_residual(&self, rho: T) -> Result<T> {
        let (v, _) = self.f_value(Cx::new(T::zero(), rho))?;
        Ok(v.im.abs())
    }

    /// Even critical-line condition at `s = 1/2 + i rho`, value route:
    /// `|Re F_GB - Q|`.
    pub fn line_even_residual(&self, rho: T) -> Result<T> {
        let sp = Cx::new(T::zero(), rho);
        let (v, _) = self.f_value(sp)?;
        let q = q_of_prime(sp)?;
        Ok((v.re - q.re).abs())
    }
}

/// `e^(i k alpha)`, exact on the canonical angle where it is `i^k`.
fn unit_phase<T: Scalar>(k: i32, alpha: T) -> Cx<T> {
    if alpha == T::FRAC_PI_2() {
        let one = T::one();
        let zero = T::zero();
        match k.rem_euclid(4) {
            0 => Cx::new(one, zero),
            1 => Cx::new(zero, one),
            2 => Cx::new(-one, zero),
            _ => Cx::new(zero, -one),
        }
    } else {
        Cx::from_polar(T::one(), sc::<T>(k as f64) * alpha)
    }
}

fn require_matching_series<T: Scalar>(rho: T, series: &LaurentSeries<T>, odd: bool) -> Result<()> {
    let tol = sc::<T>(1e-12) * rho.max(T::one());
    if (series.rho_used() - rho).abs() > tol {
        return Err(CoreError::parameter(format!(
            "series extracted at rho = {} used with a probe at rho = {rho}",
            series.rho_used()
        )));
    }
    let expected = if rho < sc::<T>(0.5) {
        AnnulusClass::Inner
    } else {
        AnnulusClass::Outer
    };
    if series.annulus() != expected {
        return Err(CoreError::AnnulusMismatch {
            context: format!(
                "probe at rho = {rho} lies in the {expected} region but the series is {}",
                series.annulus()
            ),
        });
    }
    let want = if odd { 1 } else { 0 };
    for (k, c) in series.iter() {
        if k.rem_euclid(2) != want && c.norm() > T::zero() {
            let parity = if odd { "odd" } else { "even" };
            return Err(CoreError::parameter(format!(
                "expected an {parity}-part series but degree {k} is populated"
            )));
        }
    }
    Ok(())
}

/// Antisymmetric-part mode sum at a probe, series route. Returns the
/// magnitudes of the cosine and sine lines, `(|Re|, |Im|)` of
/// `sum_k c_k rho^k e^(i k alpha)` over the odd window.
pub fn antisym_residual<T: Scalar>(
    probe: &QuartetPoint<T>,
    odd_series: &LaurentSeries<T>,
) -> Result<(T, T)> {
    require_matching_series(probe.rho(), odd_series, true)?;
    let rho = probe.rho();
    let alpha = probe.alpha();
    let mut acc = Cx::new(T::zero(), T::zero());
    for (k, c) in odd_series.iter() {
        if k.rem_euclid(2) == 1 {
            let a = c.scale(rho.powi(k));
            acc = acc + a * unit_phase(k, alpha);
        }
    }
    Ok((acc.re.abs(), acc.im.abs()))
}

/// Both lines of the combined system at a strictly admissible probe,
/// series route: the odd mode sum split through the even harmonics
/// `b = sum_k c_k rho^(k-1) e^(i (k-1) alpha)` and recombined with
/// `(rho cos alpha, rho sin alpha)` weights.
pub fn full_system_residual<T: Scalar>(
    probe: &QuartetPoint<T>,
    odd_series: &LaurentSeries<T>,
) -> Result<(T, T)> {
    if !probe.is_strictly_admissible() {
        return Err(CoreError::domain(format!(
            "probe (rho = {}, alpha = {}) leaves the strip: Re s' = {}",
            probe.rho(),
            probe.alpha(),
            probe.epsilon()
        )));
    }
    require_matching_series(probe.rho(), odd_series, true)?;
    let rho = probe.rho();
    let alpha = probe.alpha();
    let mut b = Cx::new(T::zero(), T::zero());
    for (k, c) in odd_series.iter() {
        if k.rem_euclid(2) == 1 {
            let a = c.scale(rho.powi(k - 1));
            b = b + a * unit_phase(k - 1, alpha);
        }
    }
    let eps = probe.epsilon();
    let eta = probe.eta();
    let line_cos = eps * b.re - eta * b.im;
    let line_sin = eps * b.im + eta * b.re;
    Ok((line_cos.abs(), line_sin.abs()))
}

/// Odd critical-line condition, series route: `|sum_k c_k rho^k i^k|`
/// over the odd window.
pub fn critical_line_odd_residual<T: Scalar>(rho: T, odd_series: &LaurentSeries<T>) -> Result<T> {
    require_matching_series(rho, odd_series, true)?;
    let mut acc = Cx::new(T::zero(), T::zero());
    for (k, c) in odd_series.iter() {
        if k.rem_euclid(2) == 1 {
            acc = acc + c.scale(rho.powi(k)) * unit_phase(k, T::FRAC_PI_2());
        }
    }
    Ok(acc.norm())
}

/// Even critical-line condition, series route:
/// `|sum_k c_k rho^k i^k - 1/(1/4 + rho^2)|` over the even window.
pub fn critical_line_even_residual<T: Scalar>(rho: T, even_series: &LaurentSeries<T>) -> Result<T> {
    require_matching_series(rho, even_series, false)?;
    let mut acc = Cx::new(T::zero(), T::zero());
    for (k, c) in even_series.iter() {
        if k.rem_euclid(2) == 0 {
            acc = acc + c.scale(rho.powi(k)) * unit_phase(k, T::FRAC_PI_2());
        }
    }
    let quarter = sc::<T>(0.25);
    let target = (quarter + rho * rho).recip();
    Ok((acc - Cx::new(target, T::zero())).norm())
}

/// Riemann-Siegel phase `theta(t) = Im ln Gamma(1/4 + it/2) - (t/2) ln pi`.
pub fn hardy_theta<T: Scalar>(t: T) -> Result<T> {
    if !t.is_finite() {
        return Err(CoreError::domain("ordinate must be finite"));
    }
    let quarter = sc::<T>(0.25);
    let half = sc::<T>(0.5);
    let lg = log_gamma(Cx::new(quarter, half * t))?;
    Ok(lg.im - half * t * T::PI().ln())
}

/// Hardy function `Z(t) = e^(i theta(t)) zeta(1/2 + it)`, real for real
/// `t`; the discarded imaginary part is checked against an internal
/// consistency bound.
pub fn hardy_z<T: Scalar>(t: T, tol: T, table: &BernoulliTable) -> Result<T> {
    if !t.is_finite() {
        return Err(CoreError::domain("ordinate must be finite"));
    }
    if t.abs() > sc::<T>(MAX_ORDINATE) {
        return Err(CoreError::Capacity {
            requested: fd(t.abs()),
            achievable: MAX_ORDINATE,
        });
    }
    let half = sc::<T>(0.5);
    let s = Cx::new(half, t);
    let params = EvalParams::auto(s, tol, table)?;
    let z = evaluate_zeta(s, &params, table)?;
    let theta = hardy_theta(t)?;
    let rotated = Cx::from_polar(T::one(), theta) * z.value;
    let bound = sc::<T>(1e-8) * rotated.re.abs().max(T::one());
    if rotated.im.abs() > bound {
        return Err(CoreError::internal(format!(
            "rotated zeta at t = {t} kept an imaginary part of {}",
            rotated.im
        )));
    }
    Ok(rotated.re)
}

/// A refined sign change of the Hardy function with its attached
/// residual report.
#[derive(Debug, Clone)]
pub struct ZeroCandidate<T: Scalar> {
    /// Ordinate estimated from the odd null condition's own sign change.
    pub rho: T,
    /// Grid bracket the candidate was found in.
    pub bracket: (T, T),
    /// Null-condition residuals at the canonical probe.
    pub residuals: ResidualReport<T>,
    /// Independent ordinate from bisecting the Hardy function.
    pub oracle_ordinate: T,
    /// Set when another candidate sits within five grid steps.
    pub close_pair_warning: bool,
}

fn bisect_to_width<T, F>(mut f: F, mut lo: T, mut hi: T, width: T) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> Result<T>,
{
    let mut f_lo = f(lo)?;
    let half = sc::<T>(0.5);
    loop {
        let mid = (lo + hi) * half;
        if hi - lo <= width || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid)?;
        if f_mid == T::zero() {
            return Ok(mid);
        }
        if (f_lo < T::zero()) != (f_mid < T::zero()) {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
}

/// Walks `[t_min, t_max]` in steps of `step`, brackets sign changes of
/// the Hardy function, refines each bracket, and attaches value-route
/// residuals at the canonical probe of the refined ordinate.
///
/// The candidate ordinate comes from the sign change of the odd
/// condition `t -> Im F_GB(1/2 + it)` inside the refined bracket (with
/// the Hardy root as fallback if its smooth prefactor blurs the sign);
/// the Hardy root is reported separately as the independent oracle.
pub fn scan_critical_line<T: Scalar>(
    t_min: T,
    t_max: T,
    step: T,
    tol: T,
    table: &BernoulliTable,
) -> Result<Vec<ZeroCandidate<T>>> {
    if !(t_min > T::zero()) || !(t_max > t_min) || !(step > T::zero()) || !step.is_finite() {
        return Err(CoreError::parameter(format!(
            "scan range needs 0 < t_min < t_max and step > 0, got [{t_min}, {t_max}] step {step}"
        )));
    }
    if t_max > sc::<T>(MAX_ORDINATE) {
        return Err(CoreError::Capacity {
            requested: fd(t_max),
            achievable: MAX_ORDINATE,
        });
    }
    let count = ((t_max - t_min) / step).ceil().to_u64().unwrap_or(u64::MAX);
    if count > 2_000_000 {
        return Err(CoreError::parameter(format!(
            "scan grid of {count} points is unreasonably fine"
        )));
    }
    let refine = sc::<T>(REFINE_WIDTH);
    let mut out: Vec<ZeroCandidate<T>> = Vec::new();
    let mut prev_t = t_min;
    let mut prev_z = hardy_z(t_min, tol, table)?;
    for i in 1..=count {
        let t = if i == count {
            t_max
        } else {
            t_min + step * sc::<T>(i as f64)
        };
        let z = hardy_z(t, tol, table)?;
        if prev_z == T::zero() || (prev_z < T::zero()) != (z < T::zero()) {
            let oracle = bisect_to_width(|x| hardy_z(x, tol, table), prev_t, t, refine)?;
            let lo = oracle - refine;
            let hi = oracle + refine;
            let probe = NullConditionProbe::for_radius(hi, tol, table)?;
            let g = |x: T| -> Result<T> {
                let (v, _) = probe.f_value(Cx::new(T::zero(), x))?;
                Ok(v.im)
            };
            let rho = if (g(lo)? < T::zero()) != (g(hi)? < T::zero()) {
                bisect_to_width(g, lo, hi, refine * sc::<T>(1e-2))?
            } else {
                oracle
            };
            let report_probe = NullConditionProbe::for_radius(rho, tol, table)?;
            let residuals = report_probe.report(&QuartetPoint::canonical(rho)?)?;
            out.push(ZeroCandidate {
                rho,
                bracket: (prev_t, t),
                residuals,
                oracle_ordinate: oracle,
                close_pair_warning: false,
            });
        }
        prev_t = t;
        prev_z = z;
    }
    let near = step * sc::<T>(5.0);
    for i in 1..out.len() {
        if out[i].rho - out[i - 1].rho < near {
            out[i].close_pair_warning = true;
            out[i - 1].close_pair_warning = true;
        }
    }
    Ok(out)
}

/// Value-route residual reports over an angle grid ending exactly on the
/// canonical angle. The radius must exceed 1/2 so the quartet geometry
/// is nondegenerate.
pub fn quartet_grid_scan<T: Scalar>(
    rho: T,
    alpha_count: u32,
    probe: &NullConditionProbe<'_, T>,
) -> Result<Vec<ResidualReport<T>>> {
    if !rho.is_finite() || rho <= sc::<T>(0.5) {
        return Err(CoreError::domain(format!(
            "quartet geometry needs rho > 1/2, got {rho}"
        )));
    }
    if alpha_count < 2 {
        return Err(CoreError::parameter(format!(
            "angle grid needs at least 2 points, got {alpha_count}"
        )));
    }
    let a_min = QuartetPoint::alpha_min(rho);
    let span = T::FRAC_PI_2() - a_min;
    let mut out = Vec::with_capacity(alpha_count as usize);
    for j in 1..=alpha_count {
        let alpha = if j == alpha_count {
            T::FRAC_PI_2()
        } else {
            a_min + span * sc::<T>(f64::from(j)) / sc::<T>(f64::from(alpha_count))
        };
        let point = QuartetPoint::new(rho, alpha)?;
        out.push(probe.report(&point)?);
    }
    Ok(out)
}
