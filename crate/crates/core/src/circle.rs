//! Quadrature circles centred on the symmetry point.
//!
//! Coefficient extraction and the parity machinery depend on three exact
//! relations between the quadrature nodes: `w[K-j] = conj(w[j])`,
//! `w[j + K/2] = -w[j]`, and the cardinal nodes landing exactly on the
//! axes. Calling `cos`/`sin` per node delivers none of these in the last
//! bit, so the table is built from one quarter wave and completed by
//! reflections, which are exact in IEEE arithmetic.

use crate::bernoulli::BernoulliTable;
use crate::error::CoreError;
use crate::scalar::{fd, sc, sc_u, Cx, Scalar};
use crate::zeta::EvalParams;
use crate::Result;
use std::fmt;

/// Half-width of the band around `rho = 1/2` on which circles are refused:
/// the integrand carries a pole at `s' = 1/2`, and quadrature this close to
/// it is numerically meaningless.
pub const POLE_EXCLUSION: f64 = 1e-3;

/// Which component of the analyticity domain a circle lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnulusClass {
    /// `rho < 1/2`: inside the pole circle, Taylor regime.
    Inner,
    /// `rho > 1/2`: outside it, full Laurent regime.
    Outer,
}

impl fmt::Display for AnnulusClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnnulusClass::Inner => write!(f, "inner"),
            AnnulusClass::Outer => write!(f, "outer"),
        }
    }
}

/// `K` equally spaced points on the unit circle with exact reflection
/// symmetries.
#[derive(Debug, Clone)]
pub struct UnitCircle<T: Scalar> {
    nodes: Vec<Cx<T>>,
}

impl<T: Scalar> UnitCircle<T> {
    /// `k` must be a positive multiple of 4 so the axis nodes are grid
    /// points.
    pub fn new(k: u32) -> Result<Self> {
        if k < 4 || !k.is_multiple_of(4) {
            return Err(CoreError::parameter(format!(
                "unit circle size must be a multiple of 4 and >= 4, got {k}"
            )));
        }
        let k = k as usize;
        let q = k / 4;
        let mut nodes = vec![Cx::new(T::zero(), T::zero()); k];
        let two_pi = sc::<T>(2.0) * T::PI();
        // Mirror writes below index off the same counter, so a range loop
        // is the clearer form here.
        #[allow(clippy::needless_range_loop)]
        for j in 0..=q / 2 {
            if 8 * j == k {
                // The diagonal node must have equal components; libm's
                // cos/sin of the rounded pi/4 differ in the last bit.
                let d = T::FRAC_1_SQRT_2();
                nodes[j] = Cx::new(d, d);
            } else {
                let theta = two_pi * sc_u::<T>(j as u32) / sc_u::<T>(k as u32);
                nodes[j] = Cx::new(theta.cos(), theta.sin());
            }
        }
        for j in q / 2 + 1..=q {
            let m = nodes[q - j];
            nodes[j] = Cx::new(m.im, m.re);
        }
        for j in q + 1..=2 * q {
            let m = nodes[2 * q - j];
            nodes[j] = Cx::new(-m.re, m.im);
        }
        for j in 2 * q + 1..k {
            let m = nodes[k - j];
            nodes[j] = Cx::new(m.re, -m.im);
        }
        Ok(Self { nodes })
    }

    pub fn len(&self) -> u32 {
        self.nodes.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node at any integer index, reduced modulo `K`.
    pub fn at(&self, index: i64) -> Cx<T> {
        let k = self.nodes.len() as i64;
        self.nodes[index.rem_euclid(k) as usize]
    }
}

/// A quadrature circle `|s'| = rho` around the symmetry point `s = 1/2`.
#[derive(Debug, Clone)]
pub struct GammaCircle<T: Scalar> {
    rho: T,
    unit: UnitCircle<T>,
    annulus: AnnulusClass,
}

impl<T: Scalar> GammaCircle<T> {
    pub fn new(rho: T, k: u32) -> Result<Self> {
        if !rho.is_finite() || rho <= T::zero() {
            return Err(CoreError::parameter(format!(
                "circle radius must be finite and > 0, got {rho}"
            )));
        }
        if k < 8 {
            return Err(CoreError::parameter(format!(
                "quadrature size must be >= 8, got {k}"
            )));
        }
        let half = sc::<T>(0.5);
        let excl = sc::<T>(POLE_EXCLUSION);
        if (rho - half).abs() <= excl {
            return Err(CoreError::PoleAdjacentCircle {
                rho: fd(rho),
                exclusion: POLE_EXCLUSION,
            });
        }
        let annulus = if rho < half {
            AnnulusClass::Inner
        } else {
            AnnulusClass::Outer
        };
        Ok(Self {
            rho,
            unit: UnitCircle::new(k)?,
            annulus,
        })
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn len(&self) -> u32 {
        self.unit.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn annulus(&self) -> AnnulusClass {
        self.annulus
    }

    pub fn unit(&self) -> &UnitCircle<T> {
        &self.unit
    }

    /// Angle of node `j`, for reporting.
    pub fn theta(&self, j: u32) -> T {
        sc::<T>(2.0) * T::PI() * sc_u::<T>(j) / sc_u::<T>(self.len())
    }

    /// Node in the centred coordinate, `s'_j = rho e^(i theta_j)`.
    pub fn node_prime(&self, j: u32) -> Cx<T> {
        self.unit.at(i64::from(j)).scale(self.rho)
    }

    /// Node in the strip coordinate, `s_j = 1/2 + s'_j`.
    pub fn node(&self, j: u32) -> Cx<T> {
        let p = self.node_prime(j);
        Cx::new(sc::<T>(0.5) + p.re, p.im)
    }

    /// Automatic evaluator parameters valid at every node of this circle.
    pub fn eval_params(&self, tol: T, table: &BernoulliTable) -> Result<EvalParams<T>> {
        EvalParams::auto_for_radius(self.rho, tol, table)
    }
}

/// Evaluates `f` (in the centred coordinate) at every node.
///
/// A failure at node `j` is reported with the node's index and angle.
pub fn sample_circle<T, F>(mut f: F, circle: &GammaCircle<T>) -> Result<Vec<Cx<T>>>
where
    T: Scalar,
    F: FnMut(Cx<T>) -> Result<Cx<T>>,
{
    let k = circle.len();
    let mut out = Vec::with_capacity(k as usize);
    for j in 0..k {
        let v = f(circle.node_prime(j)).map_err(|e| CoreError::Sampling {
            index: j as usize,
            theta: fd(circle.theta(j)),
            source: Box::new(e),
        })?;
        out.push(v);
    }
    Ok(out)
}

/// Evaluates `f` on the closed upper semicircle only and fills the lower
/// half with conjugates, so `samples[K-j] == conj(samples[j])` holds
/// exactly for `0 < j < K/2` whatever `f` does in the last bit; the two
/// real-axis nodes are evaluated directly.
///
/// Only meaningful for `f` commuting with conjugation; the mirrored nodes
/// satisfy `s'_{K-j} = conj(s'_j)` exactly, so for such `f` this agrees
/// with [`sample_circle`] up to rounding (bit for bit when `f` itself
/// conjugates exactly) at half the cost.
pub fn sample_circle_symmetric<T, F>(mut f: F, circle: &GammaCircle<T>) -> Result<Vec<Cx<T>>>
where
    T: Scalar,
    F: FnMut(Cx<T>) -> Result<Cx<T>>,
{
    let k = circle.len() as usize;
    let mut out = vec![Cx::new(T::zero(), T::zero()); k];
    for j in 0..=k / 2 {
        let v = f(circle.node_prime(j as u32)).map_err(|e| CoreError::Sampling {
            index: j,
            theta: fd(circle.theta(j as u32)),
            source: Box::new(e),
        })?;
        out[j] = v;
        if j != 0 && j != k / 2 {
            out[k - j] = v.conj();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::q_of_prime;
    use crate::C64;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_sizes_and_radii() {
        assert!(matches!(
            UnitCircle::<f64>::new(6),
            Err(CoreError::Parameter { .. })
        ));
        assert!(matches!(
            GammaCircle::new(1.0, 10),
            Err(CoreError::Parameter { .. })
        ));
        assert!(matches!(
            GammaCircle::new(1.0, 4),
            Err(CoreError::Parameter { .. })
        ));
        assert!(matches!(
            GammaCircle::new(0.0, 16),
            Err(CoreError::Parameter { .. })
        ));
        assert!(matches!(
            GammaCircle::new(f64::NAN, 16),
            Err(CoreError::Parameter { .. })
        ));
    }

    #[test]
    fn refuses_circles_hugging_the_pole() {
        for rho in [0.5, 0.4995, 0.5009, 0.4991] {
            assert!(matches!(
                GammaCircle::new(rho, 16),
                Err(CoreError::PoleAdjacentCircle { .. })
            ));
        }
        assert_eq!(
            GammaCircle::new(0.49, 16).unwrap().annulus(),
            AnnulusClass::Inner
        );
        assert_eq!(
            GammaCircle::new(0.502, 16).unwrap().annulus(),
            AnnulusClass::Outer
        );
    }

    #[test]
    fn cardinal_nodes_are_exact() {
        let u = UnitCircle::<f64>::new(16).unwrap();
        assert_eq!(u.at(0), C64::new(1.0, 0.0));
        assert_eq!(u.at(4), C64::new(0.0, 1.0));
        assert_eq!(u.at(8), C64::new(-1.0, 0.0));
        assert_eq!(u.at(12), C64::new(0.0, -1.0));
    }

    #[test]
    fn wraps_indices() {
        let u = UnitCircle::<f64>::new(12).unwrap();
        for j in 0..12i64 {
            assert_eq!(u.at(j), u.at(j + 12));
            assert_eq!(u.at(j), u.at(j - 36));
        }
        assert_eq!(u.at(-1), u.at(11));
    }

    #[test]
    fn nodes_match_direct_trigonometry() {
        let k = 1024u32;
        let u = UnitCircle::<f64>::new(k).unwrap();
        for j in 0..k {
            let theta = 2.0 * std::f64::consts::PI * f64::from(j) / f64::from(k);
            let direct = C64::new(theta.cos(), theta.sin());
            let got = u.at(i64::from(j));
            assert!((got - direct).norm() < 1e-15, "node {j}: {got} vs {direct}");
            assert!((got.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn circle_nodes_inherit_the_conjugation_symmetry() {
        let c = GammaCircle::new(2.5, 32).unwrap();
        let k = c.len();
        for j in 1..k {
            let a = c.node(j);
            let b = c.node(k - j);
            assert_eq!(a.re, b.re);
            assert_eq!(a.im, -b.im);
        }
        assert_eq!(c.node(0).im, 0.0);
        assert_eq!(c.node(k / 2).im, 0.0);
    }

    #[test]
    fn symmetric_sampler_matches_full_sampler_for_conjugation_commuting_f() {
        let c = GammaCircle::new(0.3, 24).unwrap();
        let full = sample_circle(q_of_prime, &c).unwrap();
        let half = sample_circle_symmetric(q_of_prime, &c).unwrap();
        assert_eq!(full.len(), half.len());
        for (j, (a, b)) in full.iter().zip(&half).enumerate() {
            assert_eq!(a.re, b.re, "node {j}");
            assert_eq!(a.im, b.im, "node {j}");
        }
    }

    #[test]
    fn symmetric_sampler_enforces_the_mirror_even_when_f_does_not() {
        // f(conj s') != conj(f(s')), yet the output must still mirror.
        let c = GammaCircle::new(1.5, 16).unwrap();
        let skew = |sp: C64| Ok(sp + C64::new(0.0, 1.0));
        let s = sample_circle_symmetric(skew, &c).unwrap();
        let k = s.len();
        for j in 1..k / 2 {
            assert_eq!(s[j].re, s[k - j].re);
            assert_eq!(s[j].im, -s[k - j].im);
        }
        let plain = sample_circle(skew, &c).unwrap();
        assert_ne!(plain[1].im, -plain[k - 1].im);
    }

    #[test]
    fn sampling_failures_carry_node_context() {
        let c = GammaCircle::new(1.0, 16).unwrap();
        let err = sample_circle(
            |sp: C64| {
                if sp.re < -0.99 {
                    Err(CoreError::domain("forced"))
                } else {
                    Ok(sp)
                }
            },
            &c,
        )
        .unwrap_err();
        match err {
            CoreError::Sampling { index, theta, .. } => {
                assert_eq!(index, 8);
                assert!((theta - std::f64::consts::PI).abs() < 1e-15);
            }
            other => panic!("expected sampling error, got {other}"),
        }
    }

    proptest! {
        /// conj and antipodal relations hold exactly for every size and
        /// index, including the signed-zero-free value comparisons.
        #[test]
        fn reflection_symmetries_are_exact(q in 2u32..128, j in 0i64..1024) {
            let k = 4 * q;
            prop_assume!(j < i64::from(k));
            let u = UnitCircle::<f64>::new(k).unwrap();
            let w = u.at(j);
            let wc = u.at(i64::from(k) - j);
            prop_assert_eq!(wc.re, w.re);
            prop_assert_eq!(wc.im, -w.im);
            let wa = u.at(j + i64::from(k / 2));
            prop_assert_eq!(wa.re, -w.re);
            prop_assert_eq!(wa.im, -w.im);
        }

        /// First-quadrant nodes reflect across the diagonal.
        #[test]
        fn quarter_wave_swap_holds((q, j) in (2u32..128).prop_flat_map(|q| (Just(q), 0..=q))) {
            let u = UnitCircle::<f64>::new(4 * q).unwrap();
            let w = u.at(i64::from(j));
            let m = u.at(i64::from(q - j));
            prop_assert_eq!(w.re, m.im);
            prop_assert_eq!(w.im, m.re);
        }
    }
}
