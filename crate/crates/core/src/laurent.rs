//! Laurent and Taylor coefficients by trapezoid quadrature on centred
//! circles.
//!
//! The discrete modes are summed in a fixed quartet order: node `j` is
//! paired with its antipode `j + K/2`, and those sums are paired with
//! their mirrors `K/2 - j`. Together with the exact reflection symmetries
//! of [`UnitCircle`] this makes two statements hold in exact arithmetic,
//! not merely to rounding: samples mirrored by conjugation produce
//! coefficients with imaginary part exactly zero, and samples invariant
//! under the antipode produce odd coefficients exactly zero.

use crate::circle::{AnnulusClass, GammaCircle, UnitCircle};
use crate::error::CoreError;
use crate::scalar::{fd, sc, sc_u, Cx, Scalar};
use crate::Result;

/// Relative floor used when trimming a coefficient window to the modes
/// that carry information.
pub const ADAPTIVE_FLOOR: f64 = 1e-13;

/// Relative coefficient drift accepted when a doubled grid confirms an
/// extraction.
pub const STABILITY_DRIFT: f64 = 1e-11;

/// A finite window of Laurent coefficients about the symmetry point,
/// tagged with the circle that produced it.
#[derive(Debug, Clone)]
pub struct LaurentSeries<T: Scalar> {
    min_k: i32,
    coeffs: Vec<Cx<T>>,
    rho: T,
    annulus: AnnulusClass,
}

impl<T: Scalar> LaurentSeries<T> {
    pub fn new(min_k: i32, coeffs: Vec<Cx<T>>, rho: T, annulus: AnnulusClass) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(CoreError::parameter("a series needs at least one term"));
        }
        Ok(Self {
            min_k,
            coeffs,
            rho,
            annulus,
        })
    }

    /// Inclusive index window `(lowest, highest)`.
    pub fn window(&self) -> (i32, i32) {
        (self.min_k, self.min_k + self.coeffs.len() as i32 - 1)
    }

    /// Coefficient of `s'^k`; zero outside the window.
    pub fn coeff(&self, k: i32) -> Cx<T> {
        let idx = k - self.min_k;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Cx::new(T::zero(), T::zero())
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// Radius of the extraction circle.
    pub fn rho_used(&self) -> T {
        self.rho
    }

    pub fn annulus(&self) -> AnnulusClass {
        self.annulus
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, Cx<T>)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (self.min_k + i as i32, *c))
    }

    pub fn max_abs(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, c| acc.max(c.norm()))
    }

    /// Splits into (even-degree, odd-degree) parts over the same window.
    pub fn split_parity(&self) -> (Self, Self) {
        let zero = Cx::new(T::zero(), T::zero());
        let mut even = self.coeffs.clone();
        let mut odd = self.coeffs.clone();
        for (i, _) in self.coeffs.iter().enumerate() {
            let k = self.min_k + i as i32;
            if k.rem_euclid(2) == 0 {
                odd[i] = zero;
            } else {
                even[i] = zero;
            }
        }
        (
            Self {
                min_k: self.min_k,
                coeffs: even,
                rho: self.rho,
                annulus: self.annulus,
            },
            Self {
                min_k: self.min_k,
                coeffs: odd,
                rho: self.rho,
                annulus: self.annulus,
            },
        )
    }
}

/// One discrete Fourier mode `(1/K) sum_j samples[j] w^(-jk)` in the
/// quartet summation order described in the module docs.
fn quad_paired_mode<T: Scalar>(samples: &[Cx<T>], unit: &UnitCircle<T>, k: i32) -> Cx<T> {
    let kk = samples.len();
    let half = kk / 2;
    let quarter = kk / 4;
    let t = |j: usize| samples[j] * unit.at(-(j as i64) * i64::from(k));
    let b = |j: usize| t(j) + t(j + half);
    let mut total = b(0) + b(quarter);
    for j in 1..quarter {
        total = total + (b(j) + b(half - j));
    }
    total.unscale(sc_u::<T>(kk as u32))
}

/// Extracts coefficients `c_k` for `k in [-m_neg, m_pos]` from samples on
/// `circle`.
///
/// Requires `K >= 4 * max(m_neg, m_pos) + 4` so the retained modes stay
/// clear of the aliasing mirror.
pub fn laurent_coeffs<T: Scalar>(
    samples: &[Cx<T>],
    circle: &GammaCircle<T>,
    m_neg: u32,
    m_pos: u32,
) -> Result<LaurentSeries<T>> {
    let k_quad = circle.len();
    if samples.len() as u32 != k_quad {
        return Err(CoreError::parameter(format!(
            "got {} samples for a {k_quad}-node circle",
            samples.len()
        )));
    }
    let reach = m_neg.max(m_pos);
    if k_quad < 4 * reach + 4 {
        return Err(CoreError::parameter(format!(
            "{k_quad} nodes cannot resolve modes out to {reach}; need at least {}",
            4 * reach + 4
        )));
    }
    let rho = circle.rho();
    let min_k = -(m_neg as i32);
    let max_k = m_pos as i32;
    let mut coeffs = Vec::with_capacity((max_k - min_k + 1) as usize);
    for k in min_k..=max_k {
        let hat = quad_paired_mode(samples, circle.unit(), k);
        if hat.re == T::zero() && hat.im == T::zero() {
            coeffs.push(hat);
            continue;
        }
        let scale = rho.powi(-k);
        if !scale.is_finite() || scale == T::zero() {
            let achievable = (fd(T::max_value().ln()) / fd(rho.ln().abs())).floor();
            return Err(CoreError::Capacity {
                requested: f64::from(k),
                achievable,
            });
        }
        coeffs.push(hat.scale(scale));
    }
    LaurentSeries::new(min_k, coeffs, rho, circle.annulus())
}

/// Closed-form coefficients of the pole-factor function about the
/// symmetry point: `4^(m+1)` at degree `2m` inside, `-4^(1-m)` at degree
/// `-2m` outside, zero elsewhere.
pub fn q_coeffs_closed_form<T: Scalar>(class: AnnulusClass, k: i32) -> T {
    let four = sc::<T>(4.0);
    match class {
        AnnulusClass::Inner => {
            if k >= 0 && k % 2 == 0 {
                four.powi(k / 2 + 1)
            } else {
                T::zero()
            }
        }
        AnnulusClass::Outer => {
            if k < 0 && k % 2 == 0 {
                -four.powi(1 + k / 2)
            } else {
                T::zero()
            }
        }
    }
}

/// Evaluates the series at a centred point.
///
/// The point must lie in the annulus class the series was extracted in;
/// the origin is a pole whenever negative-degree coefficients are
/// present.
pub fn eval_series<T: Scalar>(series: &LaurentSeries<T>, sp: Cx<T>) -> Result<Cx<T>> {
    let half = sc::<T>(0.5);
    let r = sp.norm();
    match series.annulus() {
        AnnulusClass::Inner if r >= half => {
            return Err(CoreError::AnnulusMismatch {
                context: format!(
                    "inner-series evaluation at |s'| = {r}, outside the open disc of radius 1/2"
                ),
            })
        }
        AnnulusClass::Outer if r <= half => {
            return Err(CoreError::AnnulusMismatch {
                context: format!(
                    "outer-series evaluation at |s'| = {r}, inside the excluded disc of radius 1/2"
                ),
            })
        }
        _ => {}
    }
    let zero = Cx::new(T::zero(), T::zero());
    let (lo, hi) = series.window();
    // Non-negative part by descending Horner.
    let mut plus = zero;
    let mut k = hi;
    while k >= 0.max(lo) {
        plus = plus * sp + series.coeff(k);
        k -= 1;
    }
    if lo > 0 {
        plus = plus * sp.powi(lo);
    }
    // Negative part by ascending Horner in 1/s'.
    let mut minus = zero;
    if lo < 0 {
        let has_negative = (lo..0).any(|k| {
            let c = series.coeff(k);
            c.re != T::zero() || c.im != T::zero()
        });
        if has_negative {
            if sp.re == T::zero() && sp.im == T::zero() {
                return Err(CoreError::Pole {
                    context: "series with negative-degree terms evaluated at s' = 0".into(),
                });
            }
            let inv = sp.inv();
            let mut k = lo;
            while k < 0 {
                minus = (minus + series.coeff(k)) * inv;
                k += 1;
            }
        }
    }
    Ok(plus + minus)
}

/// Evaluates the series at every node of `circle` through the exact node
/// table. The circle must lie in the series' annulus class.
pub fn eval_series_at_nodes<T: Scalar>(
    series: &LaurentSeries<T>,
    circle: &GammaCircle<T>,
) -> Result<Vec<Cx<T>>> {
    if circle.annulus() != series.annulus() {
        return Err(CoreError::AnnulusMismatch {
            context: format!(
                "series from the {} region evaluated on a {} circle",
                series.annulus(),
                circle.annulus()
            ),
        });
    }
    let rho = circle.rho();
    let (lo, hi) = series.window();
    let amps: Vec<Cx<T>> = (lo..=hi)
        .map(|k| series.coeff(k).scale(rho.powi(k)))
        .collect();
    let unit = circle.unit();
    let k_quad = circle.len();
    let mut out = Vec::with_capacity(k_quad as usize);
    for j in 0..k_quad {
        let mut acc = Cx::new(T::zero(), T::zero());
        for (i, a) in amps.iter().enumerate() {
            let k = lo + i as i32;
            acc = acc + *a * unit.at(i64::from(j) * i64::from(k));
        }
        out.push(acc);
    }
    Ok(out)
}

/// Cross-parity quadratures: the even mode `2m` of the antisymmetric part
/// and the odd mode `2m+1` of the symmetric part, as magnitudes.
///
/// Both vanish identically for exact quadrature, and the quartet
/// summation keeps them exactly zero in floating point too, so any
/// nonzero return exposes a broken grid rather than a property of `f`.
pub fn parity_orthogonality_check<T: Scalar>(
    samples: &[Cx<T>],
    circle: &GammaCircle<T>,
    m: u32,
) -> Result<(T, T)> {
    let k_quad = circle.len() as usize;
    if samples.len() != k_quad {
        return Err(CoreError::parameter(format!(
            "got {} samples for a {k_quad}-node circle",
            samples.len()
        )));
    }
    let odd_mode = 2 * m + 1;
    if circle.len() < 4 * odd_mode + 4 {
        return Err(CoreError::parameter(format!(
            "{k_quad} nodes cannot resolve mode {odd_mode}"
        )));
    }
    let half = k_quad / 2;
    let two = sc::<T>(2.0);
    let mut sym = Vec::with_capacity(k_quad);
    let mut anti = Vec::with_capacity(k_quad);
    for j in 0..k_quad {
        let a = samples[j];
        let b = samples[(j + half) % k_quad];
        sym.push((a + b).unscale(two));
        anti.push((a - b).unscale(two));
    }
    let even_of_anti = quad_paired_mode(&anti, circle.unit(), 2 * m as i32);
    let odd_of_sym = quad_paired_mode(&sym, circle.unit(), odd_mode as i32);
    Ok((even_of_anti.norm(), odd_of_sym.norm()))
}

/// Grid size policy: a power of two, at least 64 and at least eight times
/// the deepest retained mode.
pub fn default_quadrature_k(m_neg: u32, m_pos: u32) -> u32 {
    (8 * m_neg.max(m_pos).max(1)).next_power_of_two().max(64)
}

/// An extraction confirmed by a doubled grid.
#[derive(Debug, Clone)]
pub struct StableExtraction<T: Scalar> {
    pub series: LaurentSeries<T>,
    /// Grid size of the accepted run.
    pub k_used: u32,
    /// Largest relative coefficient change between the last two grids.
    pub drift: T,
}

/// Extracts on successively doubled grids until two consecutive runs
/// agree to [`STABILITY_DRIFT`] in every coefficient (relative to the
/// largest), sampling `f` (centred coordinate, assumed to commute with
/// conjugation) through the symmetric sampler.
pub fn stable_coeffs<T, F>(
    mut f: F,
    rho: T,
    m_neg: u32,
    m_pos: u32,
    k_max: u32,
) -> Result<StableExtraction<T>>
where
    T: Scalar,
    F: FnMut(Cx<T>) -> Result<Cx<T>>,
{
    let mut k = default_quadrature_k(m_neg, m_pos);
    if k > k_max {
        return Err(CoreError::parameter(format!(
            "window needs {k} nodes but the grid is capped at {k_max}"
        )));
    }
    let extract = |f: &mut F, k: u32| -> Result<LaurentSeries<T>> {
        let circle = GammaCircle::new(rho, k)?;
        let samples = crate::circle::sample_circle_symmetric(&mut *f, &circle)?;
        laurent_coeffs(&samples, &circle, m_neg, m_pos)
    };
    let mut prev = extract(&mut f, k)?;
    while 2 * k <= k_max {
        let next = extract(&mut f, 2 * k)?;
        let scale = next.max_abs().max(T::one());
        let mut drift = T::zero();
        for (kk, c) in next.iter() {
            drift = drift.max((c - prev.coeff(kk)).norm());
        }
        drift = drift / scale;
        if drift <= sc::<T>(STABILITY_DRIFT) {
            return Ok(StableExtraction {
                series: next,
                k_used: 2 * k,
                drift,
            });
        }
        prev = next;
        k *= 2;
    }
    Err(CoreError::Capacity {
        requested: f64::from(k) * 2.0,
        achievable: f64::from(k_max),
    })
}

/// Trims a window to the modes whose angular amplitude is at least
/// [`ADAPTIVE_FLOOR`] of the largest, from a probe sample set. Returns
/// `(m_neg, m_pos)`.
pub fn adaptive_window<T: Scalar>(
    samples: &[Cx<T>],
    circle: &GammaCircle<T>,
) -> Result<(u32, u32)> {
    let k_quad = circle.len();
    if samples.len() as u32 != k_quad {
        return Err(CoreError::parameter(format!(
            "got {} samples for a {k_quad}-node circle",
            samples.len()
        )));
    }
    let reach = (k_quad / 4 - 1) as i32;
    let mut amps = Vec::with_capacity((2 * reach + 1) as usize);
    let mut max_amp = T::zero();
    for k in -reach..=reach {
        let a = quad_paired_mode(samples, circle.unit(), k).norm();
        max_amp = max_amp.max(a);
        amps.push((k, a));
    }
    if max_amp == T::zero() {
        return Ok((0, 0));
    }
    let thr = max_amp * sc::<T>(ADAPTIVE_FLOOR);
    let mut m_neg = 0u32;
    let mut m_pos = 0u32;
    for (k, a) in amps {
        if a >= thr {
            if k < 0 {
                m_neg = m_neg.max(k.unsigned_abs());
            } else {
                m_pos = m_pos.max(k as u32);
            }
        }
    }
    Ok((m_neg, m_pos))
}
