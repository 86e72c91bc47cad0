//! Bounded cherry clocks.
//!
//! A cherry clock `cherry(alpha, K)` is the integer range `-alpha..=K-1`: a
//! stem of initial values `-alpha..=0` that feeds into a ring of correct
//! values `0..K`. The value `0` belongs to both parts.

use std::fmt;

use crate::error::ClockError;

/// Parameters of a cherry clock: stem length `alpha` and ring size `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClockParams {
    alpha: i64,
    k: i64,
}

/// Position of a value relative to the stem and the ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueClass {
    /// Strictly negative: initial but not correct.
    InitStrict,
    /// Zero: both initial and correct.
    Zero,
    /// Strictly positive: correct but not initial.
    StabStrict,
}

impl ClockParams {
    pub fn new(alpha: i64, k: i64) -> Result<Self, ClockError> {
        if alpha < 1 || k < 2 {
            return Err(ClockError::Params { alpha, k });
        }
        Ok(Self { alpha, k })
    }

    /// Parameters used by the mutual exclusion protocol on a graph with `n`
    /// vertices and diameter `diam`: `alpha = n`, `K = (2n-1)(diam+1)+2`.
    pub fn for_ssme(n: usize, diam: usize) -> Self {
        let n = n.max(1) as i64;
        let diam = diam as i64;
        Self {
            alpha: n,
            k: (2 * n - 1) * (diam + 1) + 2,
        }
    }

    pub fn alpha(&self) -> i64 {
        self.alpha
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    /// Number of distinct clock values, `alpha + K`.
    pub fn domain_size(&self) -> usize {
        (self.alpha + self.k) as usize
    }

    pub fn min_value(&self) -> i64 {
        -self.alpha
    }

    pub fn max_value(&self) -> i64 {
        self.k - 1
    }

    pub fn contains(&self, c: i64) -> bool {
        (-self.alpha..self.k).contains(&c)
    }

    pub fn value(&self, c: i64) -> Result<ClockValue, ClockError> {
        ClockValue::new(c, self)
    }

    /// The increment function `phi`. Callers must pass an in-range value.
    pub fn increment(&self, c: i64) -> i64 {
        debug_assert!(self.contains(c));
        if c < 0 {
            c + 1
        } else {
            (c + 1) % self.k
        }
    }

    /// Checked increment for values not yet validated.
    pub fn try_increment(&self, c: i64) -> Result<i64, ClockError> {
        self.check(c)?;
        Ok(self.increment(c))
    }

    pub fn reset(&self) -> i64 {
        -self.alpha
    }

    pub fn residue(&self, c: i64) -> i64 {
        c.rem_euclid(self.k)
    }

    pub fn distance(&self, a: i64, b: i64) -> i64 {
        let d = (a - b).rem_euclid(self.k);
        d.min(self.k - d)
    }

    pub fn locally_comparable(&self, a: i64, b: i64) -> bool {
        self.distance(a, b) <= 1
    }

    /// `a <=_l b` iff the residue of `b - a` is 0 or 1.
    pub fn leq_local(&self, a: i64, b: i64) -> bool {
        (b - a).rem_euclid(self.k) <= 1
    }

    pub fn is_init(&self, c: i64) -> bool {
        (-self.alpha..=0).contains(&c)
    }

    pub fn is_init_strict(&self, c: i64) -> bool {
        (-self.alpha..0).contains(&c)
    }

    pub fn is_stab(&self, c: i64) -> bool {
        (0..self.k).contains(&c)
    }

    pub fn is_stab_strict(&self, c: i64) -> bool {
        (1..self.k).contains(&c)
    }

    /// Integer order on initial values; false if either side is not initial.
    pub fn leq_init(&self, a: i64, b: i64) -> bool {
        self.is_init(a) && self.is_init(b) && a <= b
    }

    pub fn classify(&self, c: i64) -> ValueClass {
        match c.cmp(&0) {
            std::cmp::Ordering::Less => ValueClass::InitStrict,
            std::cmp::Ordering::Equal => ValueClass::Zero,
            std::cmp::Ordering::Greater => ValueClass::StabStrict,
        }
    }

    fn check(&self, c: i64) -> Result<(), ClockError> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(ClockError::OutOfRange {
                value: c,
                alpha: self.alpha,
                k: self.k,
            })
        }
    }
}

/// An element of `cherry(alpha, K)`, validated against its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClockValue(i64);

impl ClockValue {
    pub fn new(c: i64, params: &ClockParams) -> Result<Self, ClockError> {
        params.check(c)?;
        Ok(Self(c))
    }

    pub fn get(self) -> i64 {
        self.0
    }

    pub fn increment(self, params: &ClockParams) -> Self {
        Self(params.increment(self.0))
    }

    pub fn classify(self, params: &ClockParams) -> ValueClass {
        params.classify(self.0)
    }
}

impl fmt::Display for ClockValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Ring distance `d_K` on arbitrary integers.
pub fn ring_distance(a: i64, b: i64, k: i64) -> Result<i64, ClockError> {
    if k < 2 {
        return Err(ClockError::RingSize(k));
    }
    let d = (a - b).rem_euclid(k);
    Ok(d.min(k - d))
}

pub fn locally_comparable(a: i64, b: i64, k: i64) -> Result<bool, ClockError> {
    Ok(ring_distance(a, b, k)? <= 1)
}

pub fn leq_local(a: i64, b: i64, k: i64) -> Result<bool, ClockError> {
    if k < 2 {
        return Err(ClockError::RingSize(k));
    }
    Ok((b - a).rem_euclid(k) <= 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig() -> ClockParams {
        ClockParams::new(5, 12).unwrap()
    }

    #[test]
    fn increment_examples() {
        let p = fig();
        assert_eq!(p.increment(-5), -4);
        assert_eq!(p.increment(11), 0);
        assert_eq!(p.increment(0), 1);
        assert!(p.try_increment(12).is_err());
        assert!(p.try_increment(-6).is_err());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(ring_distance(0, 0, 12), Ok(0));
        assert_eq!(ring_distance(11, 0, 12), Ok(1));
        assert_eq!(ring_distance(3, 9, 12), Ok(6));
        assert_eq!(ring_distance(3, 9, 1), Err(ClockError::RingSize(1)));
    }

    #[test]
    fn local_order_examples() {
        assert_eq!(leq_local(11, 0, 12), Ok(true));
        assert_eq!(leq_local(0, 2, 12), Ok(false));
        assert_eq!(leq_local(0, 11, 12), Ok(false));
        for c in -20..20 {
            assert_eq!(leq_local(c, c, 12), Ok(true));
        }
        assert_eq!(locally_comparable(0, 11, 12), Ok(true));
        assert!(leq_local(0, 1, 0).is_err());
    }

    #[test]
    fn reset_and_classes() {
        assert_eq!(fig().reset(), -5);
        assert_eq!(ClockParams::new(1, 2).unwrap().reset(), -1);
        assert_eq!(ClockParams::for_ssme(4, 2).reset(), -4);

        let p = fig();
        assert_eq!(p.classify(-3), ValueClass::InitStrict);
        assert_eq!(p.classify(0), ValueClass::Zero);
        assert_eq!(p.classify(7), ValueClass::StabStrict);
        assert!(p.is_init(0) && p.is_stab(0));
        assert!(!p.is_init_strict(0) && !p.is_stab_strict(0));
        assert!(p.leq_init(-5, -2));
        assert!(!p.leq_init(-2, -5));
        assert!(!p.leq_init(-2, 3));
    }

    #[test]
    fn ssme_parameters() {
        let p = ClockParams::for_ssme(3, 1);
        assert_eq!((p.alpha(), p.k()), (3, 12));
        let p = ClockParams::for_ssme(4, 2);
        assert_eq!((p.alpha(), p.k()), (4, 23));
        let p = ClockParams::for_ssme(1, 0);
        assert_eq!((p.alpha(), p.k()), (1, 3));
    }

    #[test]
    fn invalid_params_and_values() {
        assert!(ClockParams::new(0, 5).is_err());
        assert!(ClockParams::new(2, 1).is_err());
        assert!(fig().value(12).is_err());
        assert_eq!(fig().value(-5).unwrap().get(), -5);
    }

    #[test]
    fn stem_then_cycle() {
        let p = fig();
        let mut c = p.reset();
        for _ in 0..p.alpha() {
            c = p.increment(c);
        }
        assert_eq!(c, 0);
        let mut seen = Vec::new();
        for _ in 0..p.k() {
            seen.push(c);
            c = p.increment(c);
        }
        assert_eq!(c, 0);
        assert_eq!(seen, (0..12).collect::<Vec<_>>());
    }

    proptest! {
        #[test]
        fn distance_is_a_metric(a in -100i64..100, b in -100i64..100, c in -100i64..100, k in 2i64..40) {
            let d = |x, y| ring_distance(x, y, k).unwrap();
            prop_assert!(d(a, b) >= 0 && d(a, b) <= k / 2);
            prop_assert_eq!(d(a, b), d(b, a));
            prop_assert_eq!(d(a, a), 0);
            prop_assert!(d(a, c) <= d(a, b) + d(b, c));
        }

        #[test]
        fn comparable_iff_ordered(n in 1usize..8, diam in 0usize..6, a in 0i64..200, b in 0i64..200) {
            let p = ClockParams::for_ssme(n, diam);
            let (a, b) = (a % p.k(), b % p.k());
            prop_assert_eq!(p.locally_comparable(a, b), p.leq_local(a, b) || p.leq_local(b, a));
        }

        #[test]
        fn ssme_params_dominate_topology_bounds(n in 1usize..64, diam in 0usize..64) {
            let p = ClockParams::for_ssme(n, diam);
            prop_assert!(p.k() > n as i64);
            prop_assert!(p.alpha() >= n as i64 - 2);
        }

        #[test]
        fn increment_stays_in_range(alpha in 1i64..20, k in 2i64..40, c in -20i64..40) {
            let p = ClockParams::new(alpha, k).unwrap();
            prop_assume!(p.contains(c));
            prop_assert!(p.contains(p.increment(c)));
        }
    }
}
