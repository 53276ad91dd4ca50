//! Rising products and the log-gamma function.
//!
//! `log_gamma` uses the nine-term Lanczos approximation (g = 7). In the
//! right half-plane it returns the branch that is continuous along vertical
//! lines (the analytic continuation from the real axis), which is what the
//! phase function of the Hardy scanner needs; it is *not* clamped to the
//! principal strip. In the left half-plane it goes through the reflection
//! formula and is only defined up to multiples of `2 pi i`, which is fine
//! for every caller here because they re-exponentiate.

use crate::error::CoreError;
use crate::scalar::{sc, sc_u, Cx, Scalar};
use crate::Result;

/// Product `(s + 1)(s + 2) ... (s + 2*mu - 2)`; empty (one) for `mu <= 1`.
pub fn rising_product<T: Scalar>(s: Cx<T>, mu: u32) -> Cx<T> {
    let mut acc = Cx::new(T::one(), T::zero());
    if mu <= 1 {
        return acc;
    }
    for j in 1..=(2 * mu - 2) {
        acc = acc * (s + sc_u::<T>(j));
    }
    acc
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Log-gamma. Poles at non-positive integers are reported as such.
pub fn log_gamma<T: Scalar>(z: Cx<T>) -> Result<Cx<T>> {
    if z.im == T::zero() && z.re <= T::zero() && z.re.fract() == T::zero() {
        return Err(CoreError::Pole {
            context: format!("log_gamma at non-positive integer {}", z.re),
        });
    }
    if z.re > T::zero() {
        return Ok(lanczos_direct(z));
    }
    // Reflection: log Gamma(z) = ln pi - ln sin(pi z) - log Gamma(1 - z).
    let one = Cx::new(T::one(), T::zero());
    let ln_pi = Cx::new(T::PI().ln(), T::zero());
    Ok(ln_pi - ln_sin_pi(z) - lanczos_direct(one - z))
}

fn lanczos_direct<T: Scalar>(z: Cx<T>) -> Cx<T> {
    // Series is written for Gamma(z) with argument shifted by one:
    // A(z) = c0 + sum c_k / (z - 1 + k).
    let mut acc = Cx::new(sc::<T>(LANCZOS[0]), T::zero());
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + Cx::new(sc::<T>(c), T::zero()) / (z + sc::<T>(k as f64 - 1.0));
    }
    let g_half = sc::<T>(LANCZOS_G - 0.5);
    let t = z + g_half; // z + g - 1/2
    let half = sc::<T>(0.5);
    let ln_sqrt_two_pi = sc::<T>(0.918_938_533_204_672_8); // ln sqrt(2 pi)
    (z - half) * t.ln() - t + Cx::new(ln_sqrt_two_pi, T::zero()) + acc.ln()
}

/// `ln sin(pi z)` computed without overflowing for large `|Im z|`.
///
/// Returns a branch that may differ from the principal value by a multiple
/// of `2 pi i`; exact on the strip `|Im z| <~ 1` where the direct formula
/// is used.
pub fn ln_sin_pi<T: Scalar>(z: Cx<T>) -> Cx<T> {
    let pi = T::PI();
    let w = z * pi;
    if w.im.abs() < sc::<T>(3.0) {
        return w.sin().ln();
    }
    let i = Cx::new(T::zero(), T::one());
    let one = Cx::new(T::one(), T::zero());
    let ln2 = Cx::new(T::LN_2(), T::zero());
    if w.im > T::zero() {
        // sin w = e^{-iw} (1 - e^{2iw}) * i / 2, |e^{2iw}| < 1
        -i * w + (one - (i * w * sc::<T>(2.0)).exp()).ln() + Cx::new(T::zero(), T::FRAC_PI_2())
            - ln2
    } else {
        i * w + (one - (-i * w * sc::<T>(2.0)).exp()).ln() + Cx::new(T::zero(), -T::FRAC_PI_2())
            - ln2
    }
}
