//! Languages generated by a system, bounded by total symbol count.
//!
//! [`enumerate_star`] closes the axiom under the homomorphisms directly.
//! [`simulate_reachable`] instead walks membrane configurations
//! (apply the innermost region's rules, or dissolve it), and is kept as an
//! independent check on the closed form.

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::factor::{factorize_within, FactorError};
use crate::model::{Diagnostic, ModelError, PSystem, Parikh, UnaryPSystem};
use crate::monoid::{build_repr, monoid_member};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("bound must be at least 1")]
    ZeroBound,
    #[error("membership is defined for positive lengths only")]
    ZeroLength,
    #[error("invalid system: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

/// How often each homomorphism must be applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Zero or more times.
    Star,
    /// At least once.
    Plus,
}

fn check<S: PSystem>(sys: &S, bound: u64) -> Result<(), SemanticsError> {
    sys.validate().map_err(SemanticsError::Invalid)?;
    if bound == 0 {
        return Err(SemanticsError::ZeroBound);
    }
    Ok(())
}

/// Members of the star language with total count `<= bound`.
pub fn enumerate_star<S: PSystem>(sys: &S, bound: u64) -> Result<BTreeSet<S::Member>, SemanticsError> {
    check(sys, bound)?;
    // identities stripped so that every remaining action is non-shrinking;
    // the visited set absorbs actions that fix a particular member
    let (sys, _) = sys.strip_identities();
    let mut seen = BTreeSet::new();
    let start = sys.axiom_member();
    if S::total(&start) > bound {
        return Ok(seen);
    }
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start);
    while let Some(x) = queue.pop_front() {
        for hom in 0..sys.hom_count() {
            let Some(y) = sys.apply(hom, &x) else { continue };
            if S::total(&y) <= bound && seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

/// Members of the plus language with total count `<= bound`, computed as
/// the star language of [`PSystem::plus_to_star`].
pub fn enumerate_plus<S: PSystem>(sys: &S, bound: u64) -> Result<BTreeSet<S::Member>, SemanticsError> {
    check(sys, bound)?;
    match sys.plus_to_star() {
        Ok(converted) => enumerate_star(&converted, bound),
        // the converted axiom alone exceeds any 64-bit bound
        Err(ModelError::Overflow) => Ok(BTreeSet::new()),
        Err(e) => unreachable!("plus_to_star on a validated system: {e}"),
    }
}

pub fn enumerate<S: PSystem>(sys: &S, mode: Mode, bound: u64) -> Result<BTreeSet<S::Member>, SemanticsError> {
    match mode {
        Mode::Star => enumerate_star(sys, bound),
        Mode::Plus => enumerate_plus(sys, bound),
    }
}

/// Simulator state: `depth` is the innermost intact membrane, 0 once only
/// the skin is left.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub depth: usize,
    pub contents: Parikh,
}

/// Halting results of the membrane-level simulation with total `<= bound`.
///
/// From depth `i > 0` a configuration either rewrites every object with the
/// rules of region `i`, or dissolves membrane `i` and releases its contents
/// to region `i - 1`. Results are collected once the skin is reached.
pub fn simulate_reachable<S: PSystem>(sys: &S, bound: u64) -> Result<BTreeSet<S::Member>, SemanticsError> {
    check(sys, bound)?;
    let g = sys.to_general();
    let total = |p: &Parikh| p.iter().fold(0u64, |a, &c| a.saturating_add(c));
    let mut results = BTreeSet::new();
    let start = Configuration {
        depth: g.homs.len(),
        contents: g.axiom.clone(),
    };
    if total(&start.contents) > bound {
        return Ok(results);
    }
    let mut visited = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(conf) = queue.pop_front() {
        if conf.depth == 0 {
            results.insert(S::member_from_parikh(&conf.contents));
            continue;
        }
        let rules = &g.homs[conf.depth - 1];
        let rewritten = conf
            .contents
            .iter()
            .zip(rules)
            .map(|(&c, &m)| c.checked_mul(m))
            .collect::<Option<Parikh>>();
        let mut next = Vec::with_capacity(2);
        if let Some(contents) = rewritten.filter(|p| total(p) <= bound) {
            next.push(Configuration {
                depth: conf.depth,
                contents,
            });
        }
        next.push(Configuration {
            depth: conf.depth - 1,
            contents: conf.contents,
        });
        for c in next {
            if visited.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    Ok(results)
}

/// Decides `a^m` in the star language exactly, returning the application
/// counts `(m_1, ..., m_n)` of one derivation.
///
/// Identity homomorphisms get count 0 in the witness.
pub fn member_star(sys: &UnaryPSystem, m: u64) -> Result<Option<Vec<u64>>, SemanticsError> {
    sys.validate().map_err(SemanticsError::Invalid)?;
    if m == 0 {
        return Err(SemanticsError::ZeroLength);
    }
    let kept: Vec<usize> = (0..sys.hom_count()).filter(|&j| !sys.is_identity(j)).collect();
    let (stripped, _) = sys.strip_identities();
    let repr = build_repr(&stripped).map_err(|e| match e {
        crate::monoid::MonoidError::Factor(f) => SemanticsError::Factor(f),
        other => unreachable!("stripped system has a valid representation: {other}"),
    })?;
    let Some(pf) = factorize_within(m, repr.k)? else {
        return Ok(None);
    };
    let Some(x) = pf.checked_sub(&repr.offset) else {
        return Ok(None);
    };
    Ok(monoid_member(&repr, &x).map(|v| {
        let mut witness = vec![0; sys.hom_count()];
        for (&j, t) in kept.iter().zip(v) {
            witness[j] = t;
        }
        witness
    }))
}

/// Plus-language membership; every witness entry is at least 1.
pub fn member_plus(sys: &UnaryPSystem, m: u64) -> Result<Option<Vec<u64>>, SemanticsError> {
    sys.validate().map_err(SemanticsError::Invalid)?;
    if m == 0 {
        return Err(SemanticsError::ZeroLength);
    }
    let converted = match sys.plus_to_star() {
        Ok(c) => c,
        Err(ModelError::Overflow) => return Ok(None),
        Err(e) => unreachable!("plus_to_star on a validated system: {e}"),
    };
    Ok(member_star(&converted, m)?.map(|w| w.into_iter().map(|t| t + 1).collect()))
}

pub fn member(sys: &UnaryPSystem, mode: Mode, m: u64) -> Result<Option<Vec<u64>>, SemanticsError> {
    match mode {
        Mode::Star => member_star(sys, m),
        Mode::Plus => member_plus(sys, m),
    }
}

/// Length of the word produced by applying `h_i` exactly `witness[i]` times.
pub fn evaluate_witness(sys: &UnaryPSystem, witness: &[u64]) -> Option<u64> {
    sys.coeffs
        .iter()
        .zip(witness)
        .try_fold(sys.axiom_len, |acc, (&c, &t)| {
            let e = u32::try_from(t).ok()?;
            acc.checked_mul(c.checked_pow(e)?)
        })
}
