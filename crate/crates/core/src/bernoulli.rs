//! Exact even-index Bernoulli numbers.
//!
//! The correction tail of the truncated-sum evaluator consumes the ratios
//! `(B_{2mu}/(2mu)!) / (B_{2mu-2}/(2mu-2)!)` rather than raw `B_{2mu}`,
//! because the raw numbers overflow `f64` long before the ratios stop being
//! representable. The table stores the exact rationals and pre-converts
//! both the values and the consecutive tail ratios.

use crate::error::CoreError;
use crate::scalar::{sc, Scalar};
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Largest supported index (`B_0 .. B_MAX_DEPTH`).
pub const MAX_DEPTH: u32 = 1024;

/// Default maximum index; enough for every evaluator configuration the
/// tools emit.
pub const DEFAULT_DEPTH: u32 = 64;

/// Table of exact Bernoulli numbers `B_0, B_2, ..., B_depth` with
/// pre-converted floating images.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    evens: Vec<BigRational>,
    values: Vec<f64>,
    tail_ratios: Vec<f64>,
}

impl BernoulliTable {
    /// Builds the table via the defining recurrence
    /// `sum_{j=0}^{m} C(m+1, j) B_j = 0`. `depth` is the largest index
    /// retained and must be even.
    pub fn new(depth: u32) -> Result<Self> {
        if depth == 0 || !depth.is_multiple_of(2) {
            return Err(CoreError::parameter(format!(
                "bernoulli table depth must be a positive even index, got {depth}"
            )));
        }
        if depth > MAX_DEPTH {
            return Err(CoreError::Capacity {
                requested: f64::from(depth),
                achievable: f64::from(MAX_DEPTH),
            });
        }
        let top = depth as usize;
        let mut all: Vec<BigRational> = Vec::with_capacity(top + 1);
        all.push(BigRational::one());
        for m in 1..=top {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one(); // C(m+1, 0)
            for (j, b) in all.iter().enumerate().take(m) {
                if !b.is_zero() {
                    acc += b * BigRational::from(binom.clone());
                }
                // C(m+1, j+1) from C(m+1, j)
                binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            let b_m = -acc / BigRational::from(BigInt::from(m + 1));
            all.push(b_m);
        }

        let evens: Vec<BigRational> = all.into_iter().step_by(2).collect();
        let values: Vec<f64> = evens.iter().map(big_ratio_to_f64).collect();
        let mut tail_ratios = vec![f64::NAN; evens.len()];
        for mu in 2..evens.len() {
            let m = BigInt::from(2 * mu);
            let fact_ratio = BigRational::from(&m * (&m - BigInt::one()));
            let r = &evens[mu] / &evens[mu - 1] / fact_ratio;
            tail_ratios[mu] = big_ratio_to_f64(&r);
        }

        Ok(Self {
            evens,
            values,
            tail_ratios,
        })
    }

    /// Largest stored index.
    pub fn depth(&self) -> u32 {
        2 * self.mu_limit()
    }

    /// Largest `mu` with `B_{2*mu}` stored.
    pub fn mu_limit(&self) -> u32 {
        (self.evens.len() - 1) as u32
    }

    /// Exact `B_{2*mu}`.
    pub fn exact_even(&self, mu: u32) -> Result<&BigRational> {
        self.evens.get(mu as usize).ok_or(CoreError::Capacity {
            requested: f64::from(mu),
            achievable: f64::from(self.mu_limit()),
        })
    }

    /// `B_n` in the working scalar. Odd `n > 1` would be exactly zero and
    /// `B_1` is convention-dependent, so odd indices are rejected outright.
    pub fn value<T: Scalar>(&self, n: u32) -> Result<T> {
        if !n.is_multiple_of(2) {
            return Err(CoreError::domain(format!(
                "bernoulli index {n} is odd; only even indices are defined here"
            )));
        }
        let mu = (n / 2) as usize;
        let v = *self.values.get(mu).ok_or(CoreError::Capacity {
            requested: f64::from(n),
            achievable: f64::from(self.depth()),
        })?;
        if !v.is_finite() {
            return Err(CoreError::Capacity {
                requested: f64::from(n),
                achievable: f64::from(2 * self.largest_finite()),
            });
        }
        Ok(sc(v))
    }

    /// First tail coefficient `B_2 / 2!`.
    pub fn first_tail_coeff<T: Scalar>(&self) -> T {
        sc(self.values[1] / 2.0)
    }

    /// Signed ratio `(B_{2mu}/(2mu)!) / (B_{2mu-2}/(2mu-2)!)` for `mu >= 2`.
    ///
    /// Magnitude is roughly `mu^2 / 10`, so it stays representable at every
    /// supported depth even where `B_{2mu}` itself does not.
    pub fn tail_ratio<T: Scalar>(&self, mu: u32) -> Result<T> {
        if mu < 2 {
            return Err(CoreError::parameter(format!(
                "tail ratio defined for mu >= 2, got {mu}"
            )));
        }
        let r = *self
            .tail_ratios
            .get(mu as usize)
            .ok_or(CoreError::Capacity {
                requested: f64::from(mu),
                achievable: f64::from(self.mu_limit()),
            })?;
        Ok(sc(r))
    }

    fn largest_finite(&self) -> u32 {
        self.values.iter().rposition(|v| v.is_finite()).unwrap_or(0) as u32
    }

    /// Overwrites the floating image of `B_{2*mu}` and rebuilds the affected
    /// tail ratios from floating values. Exists so tests can inject a fault
    /// and watch the consistency checks catch it; never call it otherwise.
    #[doc(hidden)]
    pub fn poison_even_for_tests(&mut self, mu: u32, value: f64) {
        let mu = mu as usize;
        self.values[mu] = value;
        for k in [mu, mu + 1] {
            if k >= 2 && k < self.tail_ratios.len() {
                let m = (2 * k) as f64;
                self.tail_ratios[k] = self.values[k] / self.values[k - 1] / (m * (m - 1.0));
            }
        }
    }
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new(DEFAULT_DEPTH).expect("default depth is valid")
    }
}

/// Converts a possibly huge rational to `f64` by shifting numerator and
/// denominator into range first; overflow maps to signed infinity.
pub fn big_ratio_to_f64(r: &BigRational) -> f64 {
    let numer = r.numer();
    let denom = r.denom();
    if numer.is_zero() {
        return 0.0;
    }
    let shift = |x: &BigInt| -> (f64, i64) {
        let bits = x.bits();
        if bits <= 1023 {
            (x.to_f64().expect("in-range bigint"), 0)
        } else {
            let excess = (bits - 1000) as i64;
            let shifted = x >> (excess as usize);
            (shifted.to_f64().expect("shifted bigint in range"), excess)
        }
    };
    let (nf, ne) = shift(numer);
    let (df, de) = shift(denom);
    let exp = ne - de;
    let base = nf / df;
    if exp == 0 {
        base
    } else {
        base * (exp as f64).exp2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Independent construction via the Akiyama-Tanigawa triangle.
    /// Uses the other sign convention for B_1; even indices coincide.
    fn akiyama_tanigawa(n: usize) -> BigRational {
        let mut a: Vec<BigRational> = (0..=n)
            .map(|m| BigRational::new(BigInt::one(), BigInt::from(m + 1)))
            .collect();
        for m in 1..=n {
            for j in (1..=m).rev() {
                let diff = a[j - 1].clone() - a[j].clone();
                a[j - 1] = BigRational::from(BigInt::from(j)) * diff;
            }
        }
        a[0].clone()
    }

    #[test]
    fn classic_values_are_exact() {
        let t = BernoulliTable::new(16).unwrap();
        assert_eq!(*t.exact_even(0).unwrap(), rat(1, 1));
        assert_eq!(*t.exact_even(1).unwrap(), rat(1, 6));
        assert_eq!(*t.exact_even(2).unwrap(), rat(-1, 30));
        assert_eq!(*t.exact_even(3).unwrap(), rat(1, 42));
        assert_eq!(*t.exact_even(4).unwrap(), rat(-1, 30));
        assert_eq!(*t.exact_even(5).unwrap(), rat(5, 66));
        assert_eq!(*t.exact_even(6).unwrap(), rat(-691, 2730));
        assert_eq!(*t.exact_even(7).unwrap(), rat(7, 6));
    }

    #[test]
    fn matches_independent_triangle_construction() {
        let t = BernoulliTable::new(32).unwrap();
        for mu in 0..=16u32 {
            let reference = akiyama_tanigawa(2 * mu as usize);
            assert_eq!(
                *t.exact_even(mu).unwrap(),
                reference,
                "mismatch at B_{}",
                2 * mu
            );
        }
    }

    #[test]
    fn odd_index_is_domain_error() {
        let t = BernoulliTable::default();
        assert!(matches!(t.value::<f64>(3), Err(CoreError::Domain { .. })));
    }

    #[test]
    fn beyond_depth_is_capacity_error() {
        let t = BernoulliTable::new(8).unwrap();
        assert_eq!(t.depth(), 8);
        assert_eq!(t.mu_limit(), 4);
        assert!(matches!(t.exact_even(5), Err(CoreError::Capacity { .. })));
        assert!(matches!(
            t.value::<f64>(12),
            Err(CoreError::Capacity { .. })
        ));
    }

    #[test]
    fn depth_bounds_enforced() {
        assert!(matches!(
            BernoulliTable::new(0),
            Err(CoreError::Parameter { .. })
        ));
        assert!(matches!(
            BernoulliTable::new(7),
            Err(CoreError::Parameter { .. })
        ));
        assert!(matches!(
            BernoulliTable::new(MAX_DEPTH + 2),
            Err(CoreError::Capacity { .. })
        ));
    }

    #[test]
    fn tail_ratio_agrees_with_exact_quotient() {
        let t = BernoulliTable::new(24).unwrap();
        for mu in 2..=12u32 {
            let m = BigInt::from(2 * mu);
            let exact = t.exact_even(mu).unwrap()
                / t.exact_even(mu - 1).unwrap()
                / BigRational::from(&m * (&m - BigInt::one()));
            let expect = big_ratio_to_f64(&exact);
            let got: f64 = t.tail_ratio(mu).unwrap();
            assert_eq!(got, expect, "ratio at mu = {mu}");
        }
        assert!(matches!(
            t.tail_ratio::<f64>(1),
            Err(CoreError::Parameter { .. })
        ));
    }

    #[test]
    fn first_tail_coeff_is_one_twelfth() {
        let t = BernoulliTable::default();
        let c: f64 = t.first_tail_coeff();
        assert_eq!(c, 1.0 / 12.0);
    }

    #[test]
    fn floating_images_match_exact_entries() {
        let t = BernoulliTable::new(80).unwrap();
        for mu in 0..=40u32 {
            let v: f64 = t.value(2 * mu).unwrap();
            assert_eq!(v, big_ratio_to_f64(t.exact_even(mu).unwrap()));
        }
    }

    #[test]
    fn poisoning_changes_ratios() {
        let mut t = BernoulliTable::new(16).unwrap();
        let before: f64 = t.tail_ratio(3).unwrap();
        t.poison_even_for_tests(3, 10.0);
        let after: f64 = t.tail_ratio(3).unwrap();
        assert_ne!(before, after);
    }

    #[test]
    fn big_ratio_conversion_handles_huge_operands() {
        assert_eq!(big_ratio_to_f64(&rat(1, 3)), 1.0 / 3.0);
        let huge = BigInt::from(10u32).pow(400);
        let r = BigRational::new(huge.clone() + BigInt::one(), huge);
        let v = big_ratio_to_f64(&r);
        assert!((v - 1.0).abs() < 1e-12);
        let overflow = BigRational::new(BigInt::from(10u32).pow(400), BigInt::one());
        assert_eq!(big_ratio_to_f64(&overflow), f64::INFINITY);
    }

    fn primes_up_to(n: u64) -> Vec<u64> {
        let mut sieve = vec![true; (n + 1) as usize];
        let mut out = Vec::new();
        for p in 2..=n {
            if sieve[p as usize] {
                out.push(p);
                let mut q = p * p;
                while q <= n {
                    sieve[q as usize] = false;
                    q += p;
                }
            }
        }
        out
    }

    fn shared_table() -> &'static BernoulliTable {
        static TABLE: std::sync::OnceLock<BernoulliTable> = std::sync::OnceLock::new();
        TABLE.get_or_init(|| BernoulliTable::new(128).unwrap())
    }

    proptest! {
        /// von Staudt-Clausen: the denominator of B_{2mu} is exactly the
        /// product of the primes p with (p - 1) | 2mu.
        #[test]
        fn denominator_obeys_von_staudt_clausen(mu in 1u32..60) {
            let t = shared_table();
            let denom = t.exact_even(mu).unwrap().denom().clone();
            let m = u64::from(2 * mu);
            let product: BigInt = primes_up_to(m + 1)
                .into_iter()
                .filter(|p| m % (p - 1) == 0)
                .map(BigInt::from)
                .product();
            prop_assert_eq!(denom.abs(), product);
        }

        /// Signs alternate: B_{4k} < 0, B_{4k+2} > 0 for k >= 1.
        #[test]
        fn signs_alternate(mu in 1u32..64) {
            let v: f64 = shared_table().value(2 * mu).unwrap();
            if mu % 2 == 0 {
                prop_assert!(v < 0.0);
            } else {
                prop_assert!(v > 0.0);
            }
        }
    }
}
