//! Line-based system description format and its JSON mirror.
//!
//! ```text
//! # two symbols, multiplied by 2 and 3 in separate membranes
//! alphabet: a1 a2
//! axiom: a1^1 a2^1
//! hom: a1->a1^2
//! hom: a2->a2^3
//! ```
//!
//! `#` starts a comment. Each `hom` line lists rules `x->x^k` separated by
//! whitespace or commas; symbols without a rule are left unchanged. The
//! exponent may be omitted (`x->x`, `x` in the axiom) and then means 1.

use std::collections::BTreeMap;
use std::fmt;

use psys_core::{GeneralPSystem, PSystem};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

/// Line numbers (1-based) of the directives a system was read from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    pub alphabet: Option<usize>,
    pub axiom: Option<usize>,
    pub homs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDocument {
    pub source: String,
    pub system: GeneralPSystem,
    pub positions: SourceMap,
}

struct Token {
    column: usize,
    text: String,
}

/// `sym` or `sym^k`, with its column.
struct Term {
    column: usize,
    symbol: String,
    exponent: Option<Token>,
}

struct Rule {
    lhs: Term,
    rhs: Term,
}

struct Scanner<'a> {
    chars: Vec<char>,
    pos: usize,
    /// column of `chars[0]`
    base: usize,
    line: usize,
    diags: &'a mut Vec<ParseDiagnostic>,
}

fn is_symbol_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

impl<'a> Scanner<'a> {
    fn column(&self) -> usize {
        self.base + self.pos
    }

    fn error(&mut self, column: usize, message: impl Into<String>) {
        self.diags.push(ParseDiagnostic {
            line: self.line,
            column,
            message: message.into(),
        });
    }

    fn skip_separators(&mut self) {
        while self.pos < self.chars.len() && (self.chars[self.pos].is_whitespace() || self.chars[self.pos] == ',') {
            self.pos += 1;
        }
    }

    fn skip_spaces(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn eat(&mut self, s: &str) -> bool {
        let n = s.chars().count();
        if self.chars[self.pos..].iter().take(n).copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> Token {
        let column = self.column();
        let start = self.pos;
        while self.pos < self.chars.len() && pred(self.chars[self.pos]) {
            self.pos += 1;
        }
        Token {
            column,
            text: self.chars[start..self.pos].iter().collect(),
        }
    }

    /// Skips to the next separator after a malformed item.
    fn recover(&mut self) {
        while self.pos < self.chars.len() && !(self.chars[self.pos].is_whitespace() || self.chars[self.pos] == ',') {
            self.pos += 1;
        }
    }

    fn symbol(&mut self) -> Option<Token> {
        let tok = self.take_while(is_symbol_char);
        if tok.text.is_empty() {
            let found = self.chars.get(self.pos).map_or("end of line".to_string(), |c| format!("`{c}`"));
            self.error(tok.column, format!("expected a symbol, found {found}"));
            self.recover();
            return None;
        }
        Some(tok)
    }

    fn term(&mut self) -> Option<Term> {
        let sym = self.symbol()?;
        let mut exponent = None;
        if self.eat("^") {
            let tok = self.take_while(|c| c.is_ascii_digit());
            if tok.text.is_empty() {
                self.error(tok.column, "expected an exponent after `^`");
                self.recover();
                return None;
            }
            exponent = Some(tok);
        }
        Some(Term {
            column: sym.column,
            symbol: sym.text,
            exponent,
        })
    }

    fn rule(&mut self) -> Option<Rule> {
        let lhs = self.term()?;
        if lhs.exponent.is_some() {
            self.error(lhs.column, "the left-hand side of a rule is a single symbol");
            self.recover();
            return None;
        }
        self.skip_spaces();
        if !self.eat("->") {
            let column = self.column();
            self.error(column, "expected `->`");
            self.recover();
            return None;
        }
        self.skip_spaces();
        let rhs = self.term()?;
        Some(Rule { lhs, rhs })
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Option<T>) -> Vec<T> {
        let mut out = Vec::new();
        self.skip_separators();
        while !self.at_end() {
            if let Some(x) = item(self) {
                out.push(x);
            }
            self.skip_separators();
        }
        out
    }
}

fn exponent_value(tok: &Option<Token>, line: usize, diags: &mut Vec<ParseDiagnostic>) -> Option<u64> {
    match tok {
        None => Some(1),
        Some(t) => match t.text.parse::<u64>() {
            Ok(v) => Some(v),
            Err(_) => {
                diags.push(ParseDiagnostic {
                    line,
                    column: t.column,
                    message: format!("exponent {} does not fit in 64 bits", t.text),
                });
                None
            }
        },
    }
}

/// Parses the line format. All problems found are reported together.
pub fn parse(text: &str) -> Result<SystemDocument, Vec<ParseDiagnostic>> {
    let mut diags = Vec::new();
    let mut positions = SourceMap::default();
    let mut alphabet: Option<Vec<Token>> = None;
    let mut axiom: Option<(usize, usize, Vec<Term>)> = None;
    let mut homs: Vec<(usize, Vec<Rule>)> = Vec::new();

    for (idx, raw) in text.split('\n').enumerate() {
        let line = idx + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let lead = content.chars().take_while(|c| c.is_whitespace()).count();
        let Some((name, rest)) = content.split_once(':') else {
            diags.push(ParseDiagnostic {
                line,
                column: lead + 1,
                message: "expected `directive: value`".into(),
            });
            continue;
        };
        let directive = name.trim();
        let rest_column = name.chars().count() + 2;
        let mut scanner = Scanner {
            chars: rest.chars().collect(),
            pos: 0,
            base: rest_column,
            line,
            diags: &mut diags,
        };
        match directive {
            "alphabet" => {
                let symbols = scanner.list(|s| s.symbol());
                if alphabet.is_some() {
                    diags.push(ParseDiagnostic {
                        line,
                        column: lead + 1,
                        message: "duplicate `alphabet` directive".into(),
                    });
                } else {
                    positions.alphabet = Some(line);
                    alphabet = Some(symbols);
                }
            }
            "axiom" => {
                let terms = scanner.list(|s| s.term());
                if axiom.is_some() {
                    diags.push(ParseDiagnostic {
                        line,
                        column: lead + 1,
                        message: "duplicate `axiom` directive".into(),
                    });
                } else {
                    positions.axiom = Some(line);
                    axiom = Some((line, lead + 1, terms));
                }
            }
            "hom" => {
                let rules = scanner.list(|s| s.rule());
                positions.homs.push(line);
                homs.push((line, rules));
            }
            other => diags.push(ParseDiagnostic {
                line,
                column: lead + 1,
                message: format!("unknown directive `{other}`"),
            }),
        }
    }

    let eof_line = text.split('\n').count().max(1);
    let missing = |what: &str| ParseDiagnostic {
        line: eof_line,
        column: 1,
        message: format!("missing `{what}` directive"),
    };

    // alphabet
    let symbols: Option<Vec<String>> = alphabet.map(|toks| {
        let mut out: Vec<String> = Vec::new();
        for t in toks {
            if out.contains(&t.text) {
                diags.push(ParseDiagnostic {
                    line: positions.alphabet.unwrap_or(0),
                    column: t.column,
                    message: format!("duplicate symbol `{}` in alphabet", t.text),
                });
            } else {
                out.push(t.text);
            }
        }
        out
    });
    let symbols = match symbols {
        Some(s) if s.is_empty() => {
            diags.push(ParseDiagnostic {
                line: positions.alphabet.unwrap_or(eof_line),
                column: 1,
                message: "empty alphabet".into(),
            });
            None
        }
        Some(s) => Some(s),
        None => {
            diags.push(missing("alphabet"));
            None
        }
    };
    let index_of = |sym: &str| symbols.as_ref().and_then(|s| s.iter().position(|x| x == sym));
    let known = symbols.is_some();

    // axiom
    let width = symbols.as_ref().map_or(0, Vec::len);
    let mut axiom_vec = vec![0u64; width];
    match &axiom {
        None => diags.push(missing("axiom")),
        Some((line, column, terms)) => {
            for t in terms {
                let value = exponent_value(&t.exponent, *line, &mut diags);
                match index_of(&t.symbol) {
                    Some(i) => {
                        if let Some(v) = value {
                            axiom_vec[i] = axiom_vec[i].saturating_add(v);
                        }
                    }
                    None if known => diags.push(ParseDiagnostic {
                        line: *line,
                        column: t.column,
                        message: format!("symbol `{}` is not in the alphabet", t.symbol),
                    }),
                    None => {}
                }
            }
            let any_positive = terms.iter().any(|t| {
                t.exponent
                    .as_ref()
                    .is_none_or(|e| e.text.chars().any(|c| c != '0'))
            });
            if !any_positive {
                diags.push(ParseDiagnostic {
                    line: *line,
                    column: *column,
                    message: "empty axiom".into(),
                });
            }
        }
    }

    // homomorphisms
    if homs.is_empty() {
        diags.push(missing("hom"));
    }
    let mut hom_vecs = Vec::with_capacity(homs.len());
    for (line, rules) in &homs {
        let mut h = vec![1u64; width];
        let mut defined = vec![false; width];
        if rules.is_empty() {
            diags.push(ParseDiagnostic {
                line: *line,
                column: 1,
                message: "`hom` needs at least one rule".into(),
            });
        }
        for r in rules {
            if r.lhs.symbol != r.rhs.symbol {
                diags.push(ParseDiagnostic {
                    line: *line,
                    column: r.rhs.column,
                    message: format!(
                        "rule must rewrite `{}` to a power of itself, not of `{}`",
                        r.lhs.symbol, r.rhs.symbol
                    ),
                });
                continue;
            }
            let value = exponent_value(&r.rhs.exponent, *line, &mut diags);
            if value == Some(0) {
                diags.push(ParseDiagnostic {
                    line: *line,
                    column: r.rhs.exponent.as_ref().map_or(r.rhs.column, |e| e.column),
                    message: format!("erasing rule forbidden: exponent 0 for `{}`", r.lhs.symbol),
                });
            }
            match index_of(&r.lhs.symbol) {
                Some(i) => {
                    if std::mem::replace(&mut defined[i], true) {
                        diags.push(ParseDiagnostic {
                            line: *line,
                            column: r.lhs.column,
                            message: format!("duplicate rule for `{}` in one hom", r.lhs.symbol),
                        });
                    }
                    if let Some(v) = value {
                        h[i] = v;
                    }
                }
                None if known => diags.push(ParseDiagnostic {
                    line: *line,
                    column: r.lhs.column,
                    message: format!("symbol `{}` is not in the alphabet", r.lhs.symbol),
                }),
                None => {}
            }
        }
        hom_vecs.push(h);
    }

    if !diags.is_empty() {
        diags.sort_by_key(|d| (d.line, d.column));
        return Err(diags);
    }
    let system = GeneralPSystem {
        alphabet: symbols.expect("alphabet checked above"),
        axiom: axiom_vec,
        homs: hom_vecs,
    };
    debug_assert!(system.validate().is_ok());
    Ok(SystemDocument {
        source: text.to_string(),
        system,
        positions,
    })
}

fn term(symbol: &str, exponent: u64) -> String {
    format!("{symbol}^{exponent}")
}

/// Normalized text form. Homomorphisms list only the symbols they change;
/// a system without homomorphisms gets a single identity `hom` line so
/// that the output parses.
pub fn to_text(sys: &GeneralPSystem) -> String {
    let mut out = format!("alphabet: {}\n", sys.alphabet.join(" "));
    let axiom: Vec<String> = sys
        .alphabet
        .iter()
        .zip(&sys.axiom)
        .filter(|(_, &c)| c > 0)
        .map(|(s, &c)| term(s, c))
        .collect();
    out.push_str(&format!("axiom: {}\n", axiom.join(" ")));
    let identity = vec![1; sys.alphabet.len()];
    let homs: Vec<&Vec<u64>> = if sys.homs.is_empty() {
        vec![&identity]
    } else {
        sys.homs.iter().collect()
    };
    for h in homs {
        let mut rules: Vec<String> = sys
            .alphabet
            .iter()
            .zip(h)
            .filter(|(_, &m)| m != 1)
            .map(|(s, &m)| format!("{s}->{}", term(s, m)))
            .collect();
        if rules.is_empty() {
            rules.push(format!("{0}->{0}^1", sys.alphabet[0]));
        }
        out.push_str(&format!("hom: {}\n", rules.join(" ")));
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonSystem {
    alphabet: Vec<String>,
    axiom: BTreeMap<String, u64>,
    homomorphisms: Vec<BTreeMap<String, u64>>,
}

/// JSON mirror: `alphabet`, `axiom` (symbol to count) and `homomorphisms`
/// (list of symbol to exponent maps, all symbols listed).
pub fn to_json(sys: &GeneralPSystem) -> String {
    let doc = JsonSystem {
        alphabet: sys.alphabet.clone(),
        axiom: sys
            .alphabet
            .iter()
            .cloned()
            .zip(sys.axiom.iter().copied())
            .filter(|(_, c)| *c > 0)
            .collect(),
        homomorphisms: sys
            .homs
            .iter()
            .map(|h| sys.alphabet.iter().cloned().zip(h.iter().copied()).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes") + "\n"
}

pub fn parse_json(text: &str) -> Result<SystemDocument, Vec<ParseDiagnostic>> {
    let doc: JsonSystem = serde_json::from_str(text).map_err(|e| {
        vec![ParseDiagnostic {
            line: e.line(),
            column: e.column(),
            message: format!("invalid JSON system: {e}"),
        }]
    })?;
    let at = |message: String| ParseDiagnostic {
        line: 1,
        column: 1,
        message,
    };
    let mut diags = Vec::new();
    let index_of = |s: &str| doc.alphabet.iter().position(|x| x == s);
    let mut axiom = vec![0u64; doc.alphabet.len()];
    for (s, &c) in &doc.axiom {
        match index_of(s) {
            Some(i) => axiom[i] = c,
            None => diags.push(at(format!("axiom: symbol `{s}` is not in the alphabet"))),
        }
    }
    let mut homs = Vec::new();
    for (n, map) in doc.homomorphisms.iter().enumerate() {
        let mut h = vec![1u64; doc.alphabet.len()];
        for (s, &m) in map {
            match index_of(s) {
                Some(i) => h[i] = m,
                None => diags.push(at(format!("hom {}: symbol `{s}` is not in the alphabet", n + 1))),
            }
        }
        homs.push(h);
    }
    if homs.is_empty() {
        diags.push(at("at least one homomorphism is required".into()));
    }
    let system = GeneralPSystem {
        alphabet: doc.alphabet.clone(),
        axiom,
        homs,
    };
    if let Err(d) = system.validate() {
        diags.extend(d.into_iter().map(|d| at(d.to_string())));
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    Ok(SystemDocument {
        source: text.to_string(),
        system,
        positions: SourceMap::default(),
    })
}

/// JSON when the first non-blank character is `{`, the line format otherwise.
pub fn parse_any(text: &str) -> Result<SystemDocument, Vec<ParseDiagnostic>> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse(text)
    }
}
