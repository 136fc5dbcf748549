//! Self-reproducing P systems with a linear membrane structure.
//!
//! Region `i` (1-based, outermost first) holds one rule `a -> a^m(i,a)` per
//! symbol and the dissolution action. Since every rule maps a symbol to a
//! power of itself, each region acts as a homomorphism `h_i`, and the system
//! is fully described by its axiom plus the list `h_1, ..., h_n`.

use std::fmt;
use std::hash::Hash;

use thiserror::Error;

/// Symbol counts indexed by alphabet position.
pub type Parikh = Vec<u64>;

/// A single validation finding. `hom` fields are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    EmptyAxiom,
    ErasingRule { hom: usize, symbol: String },
    UnknownSymbol { symbol: String },
    EmptyAlphabet,
    DuplicateSymbol { symbol: String },
    /// A Parikh vector or rule table whose length does not match the alphabet.
    Arity { field: String, expected: usize, found: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::EmptyAxiom => f.write_str("empty axiom"),
            Diagnostic::ErasingRule { hom, symbol } => {
                write!(f, "erasing rule forbidden: hom {hom} maps `{symbol}` to exponent 0")
            }
            Diagnostic::UnknownSymbol { symbol } => write!(f, "unknown symbol `{symbol}`"),
            Diagnostic::EmptyAlphabet => f.write_str("empty alphabet"),
            Diagnostic::DuplicateSymbol { symbol } => {
                write!(f, "duplicate symbol `{symbol}` in alphabet")
            }
            Diagnostic::Arity { field, expected, found } => {
                write!(f, "{field}: expected {expected} entries, found {found}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid system: {}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("axiom length overflows 64 bits")]
    Overflow,
    #[error("expected a unary system, alphabet has {0} symbols")]
    NotUnary(usize),
}

fn join_diagnostics(d: &[Diagnostic]) -> String {
    d.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Operations shared by unary and general systems.
///
/// `Member` is the representation of a generated word: its length for unary
/// systems, its Parikh vector otherwise.
pub trait PSystem: Clone + fmt::Debug {
    type Member: Clone + Ord + Hash + fmt::Debug;

    fn hom_count(&self) -> usize;

    fn validate(&self) -> Result<(), Vec<Diagnostic>>;

    /// Axiom length plus the lengths of all rule right-hand sides.
    fn size(&self) -> u64;

    /// Whether `h_hom` (0-based) fixes every symbol.
    fn is_identity(&self, hom: usize) -> bool;

    /// Reorders homomorphisms so that the new `i`-th one is the old
    /// `order[i]`-th one (0-based).
    fn permute(&self, order: &[usize]) -> Result<Self, ModelError>;

    /// Moves the mandatory first application of every homomorphism into the
    /// axiom, so that the star language of the result is the plus language
    /// of `self`.
    fn plus_to_star(&self) -> Result<Self, ModelError>;

    /// Drops identity homomorphisms, returning the count removed.
    fn strip_identities(&self) -> (Self, usize);

    fn axiom_member(&self) -> Self::Member;

    /// Image of `x` under `h_hom`, or `None` on arithmetic overflow.
    fn apply(&self, hom: usize, x: &Self::Member) -> Option<Self::Member>;

    /// Total symbol count of a member.
    fn total(x: &Self::Member) -> u64;

    fn to_general(&self) -> GeneralPSystem;

    fn member_from_parikh(parikh: &[u64]) -> Self::Member;
}

fn check_permutation(order: &[usize], n: usize) -> Result<(), ModelError> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(ModelError::NotAPermutation(n));
    }
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(ModelError::NotAPermutation(n));
        }
    }
    Ok(())
}

/// System over the one-letter alphabet `{a}`: axiom `a^axiom_len` and
/// homomorphisms `h_i(a) = a^coeffs[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnaryPSystem {
    pub axiom_len: u64,
    pub coeffs: Vec<u64>,
}

impl UnaryPSystem {
    /// Validating constructor.
    pub fn new(axiom_len: u64, coeffs: Vec<u64>) -> Result<Self, ModelError> {
        let sys = UnaryPSystem { axiom_len, coeffs };
        sys.validate().map_err(ModelError::Invalid)?;
        Ok(sys)
    }
}

impl PSystem for UnaryPSystem {
    type Member = u64;

    fn hom_count(&self) -> usize {
        self.coeffs.len()
    }

    fn validate(&self) -> Result<(), Vec<Diagnostic>> {
        let mut diags = Vec::new();
        if self.axiom_len == 0 {
            diags.push(Diagnostic::EmptyAxiom);
        }
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                diags.push(Diagnostic::ErasingRule {
                    hom: i + 1,
                    symbol: "a".into(),
                });
            }
        }
        if diags.is_empty() {
            Ok(())
        } else {
            Err(diags)
        }
    }

    fn size(&self) -> u64 {
        self.coeffs
            .iter()
            .fold(self.axiom_len, |acc, &c| acc.saturating_add(c))
    }

    fn is_identity(&self, hom: usize) -> bool {
        self.coeffs[hom] == 1
    }

    fn permute(&self, order: &[usize]) -> Result<Self, ModelError> {
        check_permutation(order, self.coeffs.len())?;
        Ok(UnaryPSystem {
            axiom_len: self.axiom_len,
            coeffs: order.iter().map(|&i| self.coeffs[i]).collect(),
        })
    }

    fn plus_to_star(&self) -> Result<Self, ModelError> {
        let axiom_len = self
            .coeffs
            .iter()
            .try_fold(self.axiom_len, |acc, &c| acc.checked_mul(c))
            .ok_or(ModelError::Overflow)?;
        Ok(UnaryPSystem {
            axiom_len,
            coeffs: self.coeffs.clone(),
        })
    }

    fn strip_identities(&self) -> (Self, usize) {
        let coeffs: Vec<u64> = self.coeffs.iter().copied().filter(|&c| c != 1).collect();
        let removed = self.coeffs.len() - coeffs.len();
        (
            UnaryPSystem {
                axiom_len: self.axiom_len,
                coeffs,
            },
            removed,
        )
    }

    fn axiom_member(&self) -> u64 {
        self.axiom_len
    }

    fn apply(&self, hom: usize, x: &u64) -> Option<u64> {
        x.checked_mul(self.coeffs[hom])
    }

    fn total(x: &u64) -> u64 {
        *x
    }

    fn to_general(&self) -> GeneralPSystem {
        GeneralPSystem {
            alphabet: vec!["a".into()],
            axiom: vec![self.axiom_len],
            homs: self.coeffs.iter().map(|&c| vec![c]).collect(),
        }
    }

    fn member_from_parikh(parikh: &[u64]) -> u64 {
        parikh.iter().sum()
    }
}

/// System over an arbitrary alphabet. `homs[i][s]` is the exponent
/// `m(i+1, alphabet[s])`; the axiom is kept as a Parikh vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneralPSystem {
    pub alphabet: Vec<String>,
    pub axiom: Parikh,
    pub homs: Vec<Vec<u64>>,
}

impl GeneralPSystem {
    pub fn new(alphabet: Vec<String>, axiom: Parikh, homs: Vec<Vec<u64>>) -> Result<Self, ModelError> {
        let sys = GeneralPSystem { alphabet, axiom, homs };
        sys.validate().map_err(ModelError::Invalid)?;
        Ok(sys)
    }

    /// Narrows a one-letter system to [`UnaryPSystem`].
    pub fn as_unary(&self) -> Result<UnaryPSystem, ModelError> {
        if self.alphabet.len() != 1 {
            return Err(ModelError::NotUnary(self.alphabet.len()));
        }
        Ok(UnaryPSystem {
            axiom_len: self.axiom.first().copied().unwrap_or(0),
            coeffs: self.homs.iter().map(|h| h.first().copied().unwrap_or(0)).collect(),
        })
    }

    pub fn symbol_index(&self, symbol: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == symbol)
    }
}

impl PSystem for GeneralPSystem {
    type Member = Parikh;

    fn hom_count(&self) -> usize {
        self.homs.len()
    }

    fn validate(&self) -> Result<(), Vec<Diagnostic>> {
        let mut diags = Vec::new();
        let k = self.alphabet.len();
        if k == 0 {
            diags.push(Diagnostic::EmptyAlphabet);
        }
        for (i, s) in self.alphabet.iter().enumerate() {
            if self.alphabet[..i].contains(s) {
                diags.push(Diagnostic::DuplicateSymbol { symbol: s.clone() });
            }
        }
        if self.axiom.len() != k {
            diags.push(Diagnostic::Arity {
                field: "axiom".into(),
                expected: k,
                found: self.axiom.len(),
            });
        }
        if self.axiom.iter().all(|&c| c == 0) {
            diags.push(Diagnostic::EmptyAxiom);
        }
        for (i, h) in self.homs.iter().enumerate() {
            if h.len() != k {
                diags.push(Diagnostic::Arity {
                    field: format!("hom {}", i + 1),
                    expected: k,
                    found: h.len(),
                });
            }
            for (s, &m) in h.iter().enumerate() {
                if m == 0 {
                    diags.push(Diagnostic::ErasingRule {
                        hom: i + 1,
                        symbol: self.alphabet.get(s).cloned().unwrap_or_else(|| format!("#{s}")),
                    });
                }
            }
        }
        if diags.is_empty() {
            Ok(())
        } else {
            Err(diags)
        }
    }

    fn size(&self) -> u64 {
        let axiom: u64 = self.axiom.iter().fold(0u64, |a, &c| a.saturating_add(c));
        self.homs
            .iter()
            .flatten()
            .fold(axiom, |acc, &m| acc.saturating_add(m))
    }

    fn is_identity(&self, hom: usize) -> bool {
        self.homs[hom].iter().all(|&m| m == 1)
    }

    fn permute(&self, order: &[usize]) -> Result<Self, ModelError> {
        check_permutation(order, self.homs.len())?;
        Ok(GeneralPSystem {
            alphabet: self.alphabet.clone(),
            axiom: self.axiom.clone(),
            homs: order.iter().map(|&i| self.homs[i].clone()).collect(),
        })
    }

    fn plus_to_star(&self) -> Result<Self, ModelError> {
        let mut axiom = self.axiom.clone();
        for h in &self.homs {
            axiom = apply_hom(h, &axiom).ok_or(ModelError::Overflow)?;
        }
        Ok(GeneralPSystem {
            alphabet: self.alphabet.clone(),
            axiom,
            homs: self.homs.clone(),
        })
    }

    fn strip_identities(&self) -> (Self, usize) {
        let homs: Vec<Vec<u64>> = self
            .homs
            .iter()
            .filter(|h| !h.iter().all(|&m| m == 1))
            .cloned()
            .collect();
        let removed = self.homs.len() - homs.len();
        (
            GeneralPSystem {
                alphabet: self.alphabet.clone(),
                axiom: self.axiom.clone(),
                homs,
            },
            removed,
        )
    }

    fn axiom_member(&self) -> Parikh {
        self.axiom.clone()
    }

    fn apply(&self, hom: usize, x: &Parikh) -> Option<Parikh> {
        apply_hom(&self.homs[hom], x)
    }

    fn total(x: &Parikh) -> u64 {
        x.iter().fold(0u64, |a, &c| a.saturating_add(c))
    }

    fn to_general(&self) -> GeneralPSystem {
        self.clone()
    }

    fn member_from_parikh(parikh: &[u64]) -> Parikh {
        parikh.to_vec()
    }
}

/// Rewrites every object once: count of symbol `s` is multiplied by `h[s]`.
pub(crate) fn apply_hom(h: &[u64], x: &[u64]) -> Option<Parikh> {
    x.iter().zip(h).map(|(&c, &m)| c.checked_mul(m)).collect()
}
