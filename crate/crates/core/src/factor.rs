//! Prime table and prime-factorization exponent vectors.
//!
//! A [`FactorVector`] is a finite-support map from 1-based prime indices
//! (index 1 is the prime 2, index 2 is 3, ...) to non-negative exponents.
//! Multiplication of positive integers becomes pointwise addition of their
//! vectors, which is what turns unary P system languages into affine
//! monoids.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

/// Largest number the shared sieve will grow to. Indexing a prime factor
/// above this value is refused instead of allocating gigabytes.
pub const SIEVE_CAP: u64 = 1 << 27;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("factorization is defined on positive integers only (got 0)")]
    Zero,
    #[error("prime factor {0} exceeds the sieve capacity of {SIEVE_CAP}")]
    PrimeTooLarge(u64),
}

struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

static TABLE: RwLock<PrimeTable> = RwLock::new(PrimeTable {
    limit: 1,
    primes: Vec::new(),
});

/// Odd-only sieve of Eratosthenes over `2..=limit`.
fn sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let half = ((limit - 1) / 2) as usize; // odd numbers 3, 5, ..., <= limit
    let mut composite = vec![false; half + 1];
    let mut primes = vec![2];
    let mut i = 1usize;
    while i <= half {
        if !composite[i] {
            let p = 2 * i as u64 + 1;
            primes.push(p);
            let mut j = p * p;
            while j <= limit {
                composite[((j - 1) / 2) as usize] = true;
                j += 2 * p;
            }
        }
        i += 1;
    }
    primes
}

fn grow_to(limit: u64) {
    let limit = limit.min(SIEVE_CAP);
    {
        let table = TABLE.read().expect("prime table poisoned");
        if table.limit >= limit {
            return;
        }
    }
    let mut table = TABLE.write().expect("prime table poisoned");
    if table.limit >= limit {
        return;
    }
    let target = limit.max(table.limit.saturating_mul(2)).min(SIEVE_CAP);
    table.primes = sieve(target);
    table.limit = target;
}

/// Upper bound on the value of the `count`-th prime (Rosser's bound).
fn nth_prime_upper_bound(count: usize) -> u64 {
    if count < 6 {
        return 15;
    }
    let n = count as f64;
    (n * (n.ln() + n.ln().ln())).ceil() as u64 + 1
}

/// The `index`-th prime, counting from `nth_prime(1) == 2`.
///
/// # Panics
///
/// Panics if `index` is zero or the prime lies above [`SIEVE_CAP`].
pub fn nth_prime(index: usize) -> u64 {
    assert!(index >= 1, "prime indices start at 1");
    grow_to(nth_prime_upper_bound(index));
    let table = TABLE.read().expect("prime table poisoned");
    *table
        .primes
        .get(index - 1)
        .unwrap_or_else(|| panic!("prime #{index} lies above the sieve capacity"))
}

/// 1-based index of `p` among the primes, or `None` if `p` is not prime.
pub fn prime_index(p: u64) -> Result<Option<usize>, FactorError> {
    if p > SIEVE_CAP {
        return Err(FactorError::PrimeTooLarge(p));
    }
    grow_to(p);
    let table = TABLE.read().expect("prime table poisoned");
    Ok(table.primes.binary_search(&p).ok().map(|i| i + 1))
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

/// Prime-factorization vector of `m` by trial division.
pub fn factorize(m: u64) -> Result<FactorVector, FactorError> {
    if m == 0 {
        return Err(FactorError::Zero);
    }
    let mut rest = m;
    let mut entries = BTreeMap::new();
    grow_to(isqrt(m) + 1);
    {
        let table = TABLE.read().expect("prime table poisoned");
        for (i, &p) in table.primes.iter().enumerate() {
            if p * p > rest {
                break;
            }
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                entries.insert(i + 1, e);
            }
        }
    }
    if rest > 1 {
        let index = prime_index(rest)?.expect("trial division leaves a prime cofactor");
        *entries.entry(index).or_insert(0) += 1;
    }
    Ok(FactorVector { entries })
}

/// Index of the greatest prime factor of `m`, with `gpf(1) == 1`.
pub fn gpf(m: u64) -> Result<usize, FactorError> {
    Ok(factorize(m)?.max_index().unwrap_or(1))
}

/// Finite-support exponent vector over the primes.
///
/// Only non-zero exponents are stored. The derived ordering compares the
/// sorted `(index, exponent)` pairs lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorVector {
    entries: BTreeMap<usize, u64>,
}

impl FactorVector {
    /// The zero vector, i.e. the factorization of 1.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a vector from `(prime index, exponent)` pairs. Zero exponents
    /// are dropped and repeated indices are summed.
    ///
    /// # Panics
    ///
    /// Panics on prime index 0.
    pub fn from_pairs<I: IntoIterator<Item = (usize, u64)>>(pairs: I) -> Self {
        let mut entries = BTreeMap::new();
        for (index, exp) in pairs {
            assert!(index >= 1, "prime indices start at 1");
            if exp > 0 {
                *entries.entry(index).or_insert(0) += exp;
            }
        }
        FactorVector { entries }
    }

    /// Single unit entry, the factorization of `nth_prime(index)`.
    pub fn unit(index: usize) -> Self {
        Self::from_pairs([(index, 1)])
    }

    pub fn get(&self, index: usize) -> u64 {
        self.entries.get(&index).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.entries.iter().map(|(&i, &e)| (i, e))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest prime index in the support.
    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    /// Sum of all exponents (the number of prime factors with multiplicity).
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// `f <= g` coordinatewise.
    pub fn partial_leq(&self, other: &FactorVector) -> bool {
        self.entries.iter().all(|(i, &e)| e <= other.get(*i))
    }

    /// `self - other`, or `None` if some coordinate would go negative.
    pub fn checked_sub(&self, other: &FactorVector) -> Option<FactorVector> {
        if !other.partial_leq(self) {
            return None;
        }
        let entries = self
            .entries
            .iter()
            .filter_map(|(&i, &e)| {
                let d = e - other.get(i);
                (d > 0).then_some((i, d))
            })
            .collect();
        Some(FactorVector { entries })
    }

    pub fn scale(&self, k: u64) -> FactorVector {
        if k == 0 {
            return FactorVector::zero();
        }
        FactorVector {
            entries: self.entries.iter().map(|(&i, &e)| (i, e * k)).collect(),
        }
    }

    /// `prod p_i ^ e_i` in arbitrary precision.
    pub fn to_integer(&self) -> BigUint {
        self.entries
            .iter()
            .fold(BigUint::one(), |acc, (&i, &e)| {
                let exp = u32::try_from(e).expect("exponent does not fit in u32");
                acc * BigUint::from(nth_prime(i)).pow(exp)
            })
    }

    /// [`to_integer`](Self::to_integer) narrowed to `u64`, if it fits.
    pub fn to_u64(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for (&i, &e) in &self.entries {
            let p = nth_prime(i);
            for _ in 0..e {
                acc = acc.checked_mul(p)?;
            }
        }
        Some(acc)
    }
}

impl Add for &FactorVector {
    type Output = FactorVector;

    fn add(self, rhs: &FactorVector) -> FactorVector {
        let mut entries = self.entries.clone();
        for (&i, &e) in &rhs.entries {
            *entries.entry(i).or_insert(0) += e;
        }
        FactorVector { entries }
    }
}

impl Add for FactorVector {
    type Output = FactorVector;

    fn add(self, rhs: FactorVector) -> FactorVector {
        &self + &rhs
    }
}

impl fmt::Display for FactorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, (i, e)) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{i}:{e}")?;
        }
        f.write_str("}")
    }
}

/// Divides out the primes with index `1..=k` from `m`. Returns the
/// exponent vector restricted to those primes if nothing else remains,
/// or `None` when `m` has a prime factor above `nth_prime(k)`.
///
/// Unlike [`factorize`] this never needs to index a large prime factor.
pub fn factorize_within(m: u64, k: usize) -> Result<Option<FactorVector>, FactorError> {
    if m == 0 {
        return Err(FactorError::Zero);
    }
    let mut rest = m;
    let mut pairs = Vec::new();
    for index in 1..=k {
        let p = nth_prime(index);
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((index, e));
        }
        if rest == 1 {
            break;
        }
    }
    Ok((rest == 1).then(|| FactorVector::from_pairs(pairs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Naive primality check, independent of the sieve.
    fn is_prime_naive(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    fn fv(pairs: &[(usize, u64)]) -> FactorVector {
        FactorVector::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn nth_prime_examples() {
        assert_eq!(nth_prime(1), 2);
        assert_eq!(nth_prime(2), 3);
        assert_eq!(nth_prime(3), 5);
        // oracle: the 10th number passing the naive primality test
        let tenth = (2u64..).filter(|&n| is_prime_naive(n)).nth(9).unwrap();
        assert_eq!(tenth, 29);
        assert_eq!(nth_prime(10), tenth);
    }

    #[test]
    fn nth_prime_matches_naive_enumeration() {
        let naive: Vec<u64> = (2u64..).filter(|&n| is_prime_naive(n)).take(500).collect();
        for (i, &p) in naive.iter().enumerate() {
            assert_eq!(nth_prime(i + 1), p);
            assert_eq!(prime_index(p).unwrap(), Some(i + 1));
        }
        assert_eq!(prime_index(1).unwrap(), None);
        assert_eq!(prime_index(9).unwrap(), None);
    }

    #[test]
    #[should_panic]
    fn nth_prime_zero_panics() {
        nth_prime(0);
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).unwrap(), fv(&[(1, 2), (2, 1)]));
        assert_eq!(factorize(1).unwrap(), FactorVector::zero());
        assert_eq!(factorize(360).unwrap(), fv(&[(1, 3), (2, 2), (3, 1)]));
        assert_eq!(factorize(0), Err(FactorError::Zero));
    }

    #[test]
    fn factorize_agrees_with_naive_trial_division() {
        for m in 1..3000u64 {
            let mut rest = m;
            let mut pairs = Vec::new();
            let mut d = 2;
            while rest > 1 {
                let mut e = 0;
                while rest % d == 0 {
                    rest /= d;
                    e += 1;
                }
                if e > 0 {
                    let idx = (2..=d).filter(|&q| is_prime_naive(q)).count();
                    pairs.push((idx, e));
                }
                d += 1;
            }
            assert_eq!(factorize(m).unwrap(), fv(&pairs), "m = {m}");
        }
    }

    #[test]
    fn gpf_examples() {
        assert_eq!(gpf(1).unwrap(), 1);
        assert_eq!(gpf(12).unwrap(), 2);
        assert_eq!(gpf(98).unwrap(), 4);
        assert_eq!(gpf(0), Err(FactorError::Zero));
    }

    #[test]
    fn add_examples() {
        assert_eq!(&FactorVector::zero() + &fv(&[(1, 1)]), fv(&[(1, 1)]));
        assert_eq!(
            factorize(6).unwrap() + factorize(10).unwrap(),
            factorize(60).unwrap()
        );
        assert_eq!(&fv(&[(1, 2)]) + &fv(&[(2, 3)]), fv(&[(1, 2), (2, 3)]));
    }

    #[test]
    fn to_integer_examples() {
        assert_eq!(FactorVector::zero().to_integer(), BigUint::from(1u32));
        assert_eq!(fv(&[(1, 2), (2, 1)]).to_integer(), BigUint::from(12u32));
        assert_eq!(fv(&[(4, 3)]).to_integer(), BigUint::from(343u32));
        assert_eq!(fv(&[(4, 3)]).to_u64(), Some(343));
        // 2^100 does not fit in u64 but is reconstructed exactly
        let big = fv(&[(1, 100)]);
        assert_eq!(big.to_u64(), None);
        assert_eq!(big.to_integer(), BigUint::from(2u32).pow(100));
    }

    #[test]
    fn partial_leq_examples() {
        assert!(FactorVector::zero().partial_leq(&fv(&[(3, 1)])));
        assert!(!fv(&[(1, 2)]).partial_leq(&fv(&[(1, 1), (2, 5)])));
        assert!(factorize(6).unwrap().partial_leq(&factorize(12).unwrap()));
    }

    #[test]
    fn sparse_normal_form() {
        let f = fv(&[(1, 0), (2, 3), (2, 1)]);
        assert_eq!(f, fv(&[(2, 4)]));
        assert_eq!(f.checked_sub(&fv(&[(2, 4)])), Some(FactorVector::zero()));
        assert_eq!(f.checked_sub(&fv(&[(1, 1)])), None);
        assert!(f.scale(0).is_zero());
    }

    #[test]
    fn factorize_within_rejects_foreign_primes() {
        assert_eq!(factorize_within(54, 2).unwrap(), Some(fv(&[(1, 1), (2, 3)])));
        assert_eq!(factorize_within(10, 2).unwrap(), None);
        assert_eq!(factorize_within(1, 0).unwrap(), Some(FactorVector::zero()));
        // a large prime factor is rejected without indexing it
        assert_eq!(factorize_within(2 * 1_000_000_007, 3).unwrap(), None);
    }

    #[test]
    fn round_trip_up_to_one_million() {
        for m in 1..=1_000_000u64 {
            assert_eq!(factorize(m).unwrap().to_u64(), Some(m));
        }
    }

    #[test]
    fn gpf_is_max_of_support() {
        for m in 2..5000u64 {
            let f = factorize(m).unwrap();
            assert_eq!(gpf(m).unwrap(), f.max_index().unwrap());
        }
    }

    #[test]
    fn concurrent_lookups_agree() {
        let handles: Vec<_> = (0..4)
            .map(|t| std::thread::spawn(move || (1..2000).map(|i| nth_prime(i + t)).collect::<Vec<_>>()))
            .collect();
        let results: Vec<Vec<u64>> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for (t, r) in results.iter().enumerate() {
            for (i, &p) in r.iter().enumerate() {
                assert_eq!(p, nth_prime(i + 1 + t));
            }
        }
    }

    fn small_vec() -> impl Strategy<Value = FactorVector> {
        proptest::collection::vec((1usize..6, 0u64..4), 0..5).prop_map(FactorVector::from_pairs)
    }

    proptest! {
        #[test]
        fn homomorphism_law(m in 1u64..10_000, n in 1u64..10_000) {
            prop_assert_eq!(
                factorize(m * n).unwrap(),
                factorize(m).unwrap() + factorize(n).unwrap()
            );
        }

        #[test]
        fn partial_order_laws(f in small_vec(), g in small_vec(), h in small_vec()) {
            prop_assert!(f.partial_leq(&f));
            if f.partial_leq(&g) && g.partial_leq(&f) {
                prop_assert_eq!(&f, &g);
            }
            if f.partial_leq(&g) && g.partial_leq(&h) {
                prop_assert!(f.partial_leq(&h));
            }
            prop_assert!(f.partial_leq(&(&f + &g)));
        }

        #[test]
        fn sub_inverts_add(f in small_vec(), g in small_vec()) {
            prop_assert_eq!((&f + &g).checked_sub(&g), Some(f));
        }
    }
}
