//! Exponent-vector representation of unary systems and its unique minimal
//! form.
//!
//! Writing `pf(m)` for the factorization vector of `m`, the star language of
//! `(a^w, c_1, ..., c_n)` is `{ m : pf(m) = pf(w) + sum_j v_j pf(c_j), v >= 0 }`.
//! The offset `pf(w)` is the unique minimal element of that set, and the
//! irreducible columns generate the same affine monoid as all columns, so
//! offset plus sorted irreducibles is a canonical key for the language.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::factor::{factorize, gpf, FactorError, FactorVector};
use crate::model::{Diagnostic, ModelError, PSystem, UnaryPSystem};
use crate::semantics::Mode;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("invalid system: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("homomorphism {0} is the identity; strip identities before building the representation")]
    IdentityColumn(usize),
    #[error("irreducibility is undefined for the zero vector")]
    ZeroElement,
    #[error("{0} is not an element of the monoid")]
    NotInMonoid(FactorVector),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Columns `pf(c_j)` and offset `pf(|w|)` of a unary system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidRepr {
    /// Largest prime index occurring in the axiom length or any column
    /// (1 if none occurs).
    pub k: usize,
    pub columns: Vec<FactorVector>,
    pub offset: FactorVector,
}

impl MonoidRepr {
    pub fn from_parts(columns: Vec<FactorVector>, offset: FactorVector) -> Self {
        let k = columns
            .iter()
            .chain(std::iter::once(&offset))
            .filter_map(FactorVector::max_index)
            .max()
            .unwrap_or(1);
        MonoidRepr { k, columns, offset }
    }
}

/// Builds the representation of a validated, identity-free system.
pub fn build_repr(sys: &UnaryPSystem) -> Result<MonoidRepr, MonoidError> {
    sys.validate().map_err(MonoidError::Invalid)?;
    if let Some(j) = sys.coeffs.iter().position(|&c| c == 1) {
        return Err(MonoidError::IdentityColumn(j + 1));
    }
    let columns = sys
        .coeffs
        .iter()
        .map(|&c| factorize(c))
        .collect::<Result<Vec<_>, _>>()?;
    let offset = factorize(sys.axiom_len)?;
    let k = sys
        .coeffs
        .iter()
        .chain(std::iter::once(&sys.axiom_len))
        .map(|&c| gpf(c))
        .try_fold(1, |acc, g| g.map(|g| acc.max(g)))?;
    Ok(MonoidRepr { k, columns, offset })
}

/// Depth-first search for `x = sum_j v_j * columns[j]`, trying large
/// multiples of each column first. Failed `(column, residual)` pairs are
/// memoized for the lifetime of the searcher.
struct Searcher<'a> {
    columns: &'a [FactorVector],
    /// `reach[j]`: prime indices occurring in `columns[j..]`.
    reach: Vec<BTreeSet<usize>>,
    failed: HashSet<(usize, FactorVector)>,
}

impl<'a> Searcher<'a> {
    fn new(columns: &'a [FactorVector]) -> Self {
        let mut reach = vec![BTreeSet::new(); columns.len() + 1];
        for j in (0..columns.len()).rev() {
            let mut r = reach[j + 1].clone();
            r.extend(columns[j].iter().map(|(i, _)| i));
            reach[j] = r;
        }
        Searcher {
            columns,
            reach,
            failed: HashSet::new(),
        }
    }

    fn solve(&mut self, j: usize, residual: &FactorVector, v: &mut [u64]) -> bool {
        if residual.is_zero() {
            v[j..].iter_mut().for_each(|t| *t = 0);
            return true;
        }
        if j == self.columns.len() || residual.iter().any(|(i, _)| !self.reach[j].contains(&i)) {
            return false;
        }
        let key = (j, residual.clone());
        if self.failed.contains(&key) {
            return false;
        }
        let col = &self.columns[j];
        let max = col
            .iter()
            .map(|(i, e)| residual.get(i) / e)
            .min()
            .unwrap_or(0);
        for t in (0..=max).rev() {
            let rest = residual
                .checked_sub(&col.scale(t))
                .expect("multiplicity bounded by the residual");
            v[j] = t;
            if self.solve(j + 1, &rest, v) {
                return true;
            }
        }
        v[j] = 0;
        self.failed.insert(key);
        false
    }

    fn find(&mut self, x: &FactorVector) -> Option<Vec<u64>> {
        let mut v = vec![0; self.columns.len()];
        self.solve(0, x, &mut v).then_some(v)
    }
}

/// Coefficients `v` with `sum_j v_j * columns[j] == x`, if any exist.
pub fn monoid_member(repr: &MonoidRepr, x: &FactorVector) -> Option<Vec<u64>> {
    Searcher::new(&repr.columns).find(x)
}

/// Whether `x` has no decomposition into two non-zero monoid elements.
pub fn is_irreducible(repr: &MonoidRepr, x: &FactorVector) -> Result<bool, MonoidError> {
    if x.is_zero() {
        return Err(MonoidError::ZeroElement);
    }
    let mut searcher = Searcher::new(&repr.columns);
    if searcher.find(x).is_none() {
        return Err(MonoidError::NotInMonoid(x.clone()));
    }
    Ok(!is_reducible_with(&mut searcher, x))
}

/// `x` is reducible iff some column `c <= x` leaves a non-zero monoid
/// element `x - c`; non-zero columns make this equivalent to a
/// representation with `|v|_1 >= 2`.
fn is_reducible_with(searcher: &mut Searcher<'_>, x: &FactorVector) -> bool {
    let columns = searcher.columns;
    columns.iter().any(|c| {
        !c.is_zero()
            && x.checked_sub(c)
                .is_some_and(|rest| !rest.is_zero() && searcher.find(&rest).is_some())
    })
}

/// Offset plus the sorted, distinct irreducible generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub offset: FactorVector,
    pub generators: Vec<FactorVector>,
}

impl CanonicalForm {
    /// `offset: <int>` followed by `gen: <int>` lines in increasing order.
    pub fn to_text(&self) -> String {
        let mut gens: Vec<BigUint> = self.generators.iter().map(FactorVector::to_integer).collect();
        gens.sort();
        let mut out = format!("offset: {}\n", self.offset.to_integer());
        for g in gens {
            out.push_str(&format!("gen: {g}\n"));
        }
        out
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Canonical form of the star language of `sys`.
pub fn canonicalize(sys: &UnaryPSystem) -> Result<CanonicalForm, MonoidError> {
    sys.validate().map_err(MonoidError::Invalid)?;
    let (stripped, _) = sys.strip_identities();
    let repr = build_repr(&stripped)?;
    let distinct: Vec<FactorVector> = repr.columns.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let mut searcher = Searcher::new(&distinct);
    let generators = distinct
        .iter()
        .filter(|c| !is_reducible_with(&mut searcher, c))
        .cloned()
        .collect();
    Ok(CanonicalForm {
        offset: repr.offset,
        generators,
    })
}

/// The system `(a^offset, gen_1, ..., gen_n')` in generator order.
pub fn rebuild(cf: &CanonicalForm) -> Result<UnaryPSystem, ModelError> {
    let axiom_len = cf.offset.to_u64().ok_or(ModelError::Overflow)?;
    let coeffs = cf
        .generators
        .iter()
        .map(|g| g.to_u64().ok_or(ModelError::Overflow))
        .collect::<Result<_, _>>()?;
    Ok(UnaryPSystem { axiom_len, coeffs })
}

/// Equivalent system with the fewest homomorphisms.
pub fn minimize(sys: &UnaryPSystem) -> Result<UnaryPSystem, MonoidError> {
    // generators are columns of `sys` and the offset is its axiom, so
    // rebuilding cannot overflow
    Ok(rebuild(&canonicalize(sys)?)?)
}

fn star_equivalent_form(sys: &UnaryPSystem, mode: Mode) -> Result<CanonicalForm, MonoidError> {
    match mode {
        Mode::Star => canonicalize(sys),
        Mode::Plus => {
            sys.validate().map_err(MonoidError::Invalid)?;
            canonicalize(&sys.plus_to_star()?)
        }
    }
}

/// Decides whether the `mode1` language of `s1` equals the `mode2` language
/// of `s2`.
pub fn equivalent(s1: &UnaryPSystem, mode1: Mode, s2: &UnaryPSystem, mode2: Mode) -> Result<bool, MonoidError> {
    Ok(star_equivalent_form(s1, mode1)? == star_equivalent_form(s2, mode2)?)
}

pub fn equivalent_star(s1: &UnaryPSystem, s2: &UnaryPSystem) -> Result<bool, MonoidError> {
    equivalent(s1, Mode::Star, s2, Mode::Star)
}

pub fn equivalent_plus(s1: &UnaryPSystem, s2: &UnaryPSystem) -> Result<bool, MonoidError> {
    equivalent(s1, Mode::Plus, s2, Mode::Plus)
}

/// Context-freeness of the star language.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContextFreeClass {
    /// The language is `{ a^m }`.
    Singleton(u64),
    /// The language is infinite, hence not context-free.
    NotContextFree,
}

pub fn classify_context_free(sys: &UnaryPSystem) -> Result<ContextFreeClass, MonoidError> {
    let cf = canonicalize(sys)?;
    Ok(if cf.generators.is_empty() {
        ContextFreeClass::Singleton(sys.axiom_len)
    } else {
        ContextFreeClass::NotContextFree
    })
}

/// Which side of a comparison a distinguishing member belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// Smallest length `<= bound` in exactly one of the two languages.
pub fn distinguishing_member(
    s1: &UnaryPSystem,
    mode1: Mode,
    s2: &UnaryPSystem,
    mode2: Mode,
    bound: u64,
) -> Result<Option<(u64, Side)>, crate::semantics::SemanticsError> {
    let l1 = crate::semantics::enumerate(s1, mode1, bound)?;
    let l2 = crate::semantics::enumerate(s2, mode2, bound)?;
    let first = l1.difference(&l2).next().map(|&m| (m, Side::First));
    let second = l2.difference(&l1).next().map(|&m| (m, Side::Second));
    Ok(match (first, second) {
        (Some(a), Some(b)) => Some(if a.0 < b.0 { a } else { b }),
        (a, b) => a.or(b),
    })
}
