//! Size trade-offs when trading homomorphisms (membranes) for a larger
//! axiom under plus semantics.
//!
//! A homomorphism whose column is reducible, duplicated or zero can be
//! dropped from a system if its one mandatory application is moved into the
//! axiom. Iterating that step on the worst-case family `(a^m; m, ..., m)`
//! shows the polynomial blow-up in size.

use std::fmt;

use thiserror::Error;

use crate::factor::FactorVector;
use crate::model::{GeneralPSystem, ModelError, PSystem, UnaryPSystem};
use crate::monoid::{equivalent, MonoidError, MonoidRepr};
use crate::semantics::Mode;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexityError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Index of the homomorphism [`reduce_once`] would remove.
///
/// Candidates are identity columns, duplicated columns, and columns that
/// are sums of at least two other columns. Among them the one with the
/// smallest coefficient wins (smallest new axiom), ties broken by index.
pub fn find_removable(sys: &UnaryPSystem) -> Result<Option<usize>, ComplexityError> {
    sys.validate().map_err(|d| ComplexityError::Monoid(MonoidError::Invalid(d)))?;
    let (stripped, _) = sys.strip_identities();
    let repr = crate::monoid::build_repr(&stripped)?;
    let mut distinct = repr.columns.clone();
    distinct.sort();
    distinct.dedup();
    let reducible_repr = MonoidRepr::from_parts(distinct, FactorVector::zero());

    let mut best: Option<usize> = None;
    for (j, &c) in sys.coeffs.iter().enumerate() {
        let removable = c == 1
            || sys.coeffs.iter().enumerate().any(|(i, &d)| i != j && d == c)
            || {
                let col = crate::factor::factorize(c).map_err(MonoidError::from)?;
                !crate::monoid::is_irreducible(&reducible_repr, &col)?
            };
        if removable && best.is_none_or(|b| c < sys.coeffs[b]) {
            best = Some(j);
        }
    }
    Ok(best)
}

/// Drops one removable homomorphism `h` and replaces the axiom `w` by
/// `h(w)`, keeping the plus language. `None` when every column is a
/// distinct irreducible.
pub fn reduce_once(sys: &UnaryPSystem) -> Result<Option<UnaryPSystem>, ComplexityError> {
    let Some(j) = find_removable(sys)? else {
        return Ok(None);
    };
    let axiom_len = sys
        .axiom_len
        .checked_mul(sys.coeffs[j])
        .ok_or(ModelError::Overflow)?;
    let mut coeffs = sys.coeffs.clone();
    coeffs.remove(j);
    Ok(Some(UnaryPSystem { axiom_len, coeffs }))
}

/// `|reduced| <= |sys|^2 - 1`.
pub fn check_quadratic_bound(sys: &UnaryPSystem, reduced: &UnaryPSystem) -> bool {
    let s = u128::from(sys.size());
    u128::from(reduced.size()) < s * s
}

/// `(a^m; m, ..., m)` with `n` homomorphisms.
pub fn worst_case_family(m: u64, n: usize) -> Result<UnaryPSystem, ComplexityError> {
    if m < 2 {
        return Err(ComplexityError::Parameter(format!("m must be at least 2, got {m}")));
    }
    if n < 1 {
        return Err(ComplexityError::Parameter("n must be at least 1".into()));
    }
    Ok(UnaryPSystem {
        axiom_len: m,
        coeffs: vec![m; n],
    })
}

/// Sizes of `worst_case_family(m, n)` before and after `x` successive
/// reductions, measured on the reduced systems.
pub fn iterated_reduction_sizes(m: u64, n: usize, x: usize) -> Result<(u64, u64), ComplexityError> {
    let sys = worst_case_family(m, n)?;
    if x < 1 || x >= n {
        return Err(ComplexityError::Parameter(format!(
            "x must lie in 1..={}, got {x}",
            n.saturating_sub(1)
        )));
    }
    let mut current = sys.clone();
    for step in 0..x {
        current = reduce_once(&current)?.ok_or_else(|| {
            ComplexityError::Parameter(format!("no reduction possible at step {}", step + 1))
        })?;
    }
    Ok((sys.size(), current.size()))
}

/// `L(n)`: alphabet `a1..an`, axiom `a1 ... an`, and `h_i` multiplying the
/// count of `a_i` by the `i`-th prime.
pub fn prime_power_family(n: usize) -> Result<GeneralPSystem, ComplexityError> {
    if n < 1 {
        return Err(ComplexityError::Parameter("n must be at least 1".into()));
    }
    let homs = (0..n)
        .map(|i| {
            let mut h = vec![1; n];
            h[i] = crate::factor::nth_prime(i + 1);
            h
        })
        .collect();
    Ok(GeneralPSystem {
        alphabet: (1..=n).map(|i| format!("a{i}")).collect(),
        axiom: vec![1; n],
        homs,
    })
}

/// All systems with exactly `hom_count` non-identity homomorphisms
/// (coefficients non-decreasing) and size `<= max_size` whose `mode`
/// language equals that of `target`.
pub fn equivalent_systems(
    target: &UnaryPSystem,
    mode: Mode,
    hom_count: usize,
    max_size: u64,
) -> Result<Vec<UnaryPSystem>, ComplexityError> {
    fn coeff_lists(count: usize, min: u64, budget: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if acc.len() == count {
            out.push(acc.clone());
            return;
        }
        let left = (count - acc.len()) as u64;
        let mut c = min;
        while c * left <= budget {
            acc.push(c);
            coeff_lists(count, c, budget - c, acc, out);
            acc.pop();
            c += 1;
        }
    }
    let mut found = Vec::new();
    for axiom_len in 1..max_size {
        let mut lists = Vec::new();
        coeff_lists(hom_count, 2, max_size - axiom_len, &mut Vec::new(), &mut lists);
        for coeffs in lists {
            let candidate = UnaryPSystem { axiom_len, coeffs };
            if equivalent(&candidate, mode, target, mode)? {
                found.push(candidate);
            }
        }
    }
    Ok(found)
}

/// Sizes along a chain of reductions and the bounds checked at each step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradeoffReport {
    pub original_hom_count: usize,
    pub original_size: u64,
    /// `(homomorphism count, size)` after each reduction, in order.
    pub reduced_sizes: Vec<(usize, u64)>,
    /// `(bound id, satisfied)`.
    pub bound_checks: Vec<(String, bool)>,
}

impl TradeoffReport {
    /// Lines `n=<homs> size=<size>`, starting with the original system.
    pub fn machine_lines(&self) -> String {
        std::iter::once((self.original_hom_count, self.original_size))
            .chain(self.reduced_sizes.iter().copied())
            .map(|(n, s)| format!("n={n} size={s}\n"))
            .collect()
    }
}

impl fmt::Display for TradeoffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>6}  {:>20}", "homs", "size")?;
        for (n, s) in std::iter::once((self.original_hom_count, self.original_size)).chain(self.reduced_sizes.iter().copied()) {
            writeln!(f, "{n:>6}  {s:>20}")?;
        }
        let width = self.bound_checks.iter().map(|(id, _)| id.len()).max().unwrap_or(5).max(5);
        writeln!(f, "{:<width$}  status", "check")?;
        for (id, ok) in &self.bound_checks {
            writeln!(f, "{id:<width$}  {}", if *ok { "ok" } else { "VIOLATED" })?;
        }
        Ok(())
    }
}

/// Reduces `sys` up to `max_steps` times (until irreducible when `None`).
///
/// Each step is checked against `size_k <= size_{k-1}^2 - 1`, and after `x`
/// steps against `size_x <= size_0^(x+1)`.
pub fn tradeoff_report(sys: &UnaryPSystem, max_steps: Option<usize>) -> Result<TradeoffReport, ComplexityError> {
    let mut report = TradeoffReport {
        original_hom_count: sys.hom_count(),
        original_size: sys.size(),
        reduced_sizes: Vec::new(),
        bound_checks: Vec::new(),
    };
    let original = u128::from(sys.size());
    let mut current = sys.clone();
    let mut step = 0;
    while max_steps.is_none_or(|m| step < m) {
        let Some(next) = reduce_once(&current)? else { break };
        step += 1;
        report
            .bound_checks
            .push((format!("quadratic[{step}]"), check_quadratic_bound(&current, &next)));
        let power = original.checked_pow(step as u32 + 1);
        report.bound_checks.push((
            format!("power[{step}]"),
            power.is_none_or(|p| u128::from(next.size()) <= p),
        ));
        report.reduced_sizes.push((next.hom_count(), next.size()));
        current = next;
    }
    Ok(report)
}
