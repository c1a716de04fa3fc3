//! Vocabulary shared by every module: alphabets, words, histories with their
//! turn parity, the specification interface, and RCI instances.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// Default bound on the horizon `n`. Widths can reach `|Σ|^n`, so the bound is
/// about memory and time, never about correctness.
pub const DEFAULT_MAX_HORIZON: usize = 64;

/// Index of a symbol in its alphabet's declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u32);

impl Symbol {
    pub fn new(index: usize) -> Self {
        Symbol(u32::try_from(index).expect("alphabet index fits in u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An ordered set of distinct, non-empty symbol names. The declaration order
/// is the canonical order used for every tie-break.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Symbol>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::input("alphabet must contain at least one symbol"));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::input(format!("alphabet symbol #{i} is empty")));
            }
            if index.insert(name.clone(), Symbol::new(i)).is_some() {
                return Err(Error::input(format!(
                    "alphabet symbol {name:?} is repeated"
                )));
            }
        }
        Ok(Alphabet { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len()).map(Symbol::new)
    }

    pub fn symbol(&self, name: &str) -> Result<Symbol> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::input(format!("symbol {name:?} is not in the alphabet {self}")))
    }

    pub fn name(&self, symbol: Symbol) -> &str {
        &self.names[symbol.index()]
    }

    pub fn contains(&self, symbol: Symbol) -> bool {
        symbol.index() < self.names.len()
    }

    fn single_char(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Renders a word: symbols are concatenated when every name is a single
    /// character, and space-separated otherwise.
    pub fn render(&self, word: &[Symbol]) -> String {
        let sep = if self.single_char() { "" } else { " " };
        word.iter()
            .map(|&s| self.name(s))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Inverse of [`Alphabet::render`]. Accepts whitespace- or comma-separated
    /// names, or a run of names matched greedily by longest prefix.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || (text == "λ" && !self.index.contains_key("λ")) {
            return Ok(Word::empty());
        }
        if text.contains(|c: char| c.is_whitespace() || c == ',') && !self.index.contains_key(text)
        {
            return text
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| self.symbol(t))
                .collect::<Result<Vec<_>>>()
                .map(Word::from);
        }
        let mut out = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let best = self
                .names
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len());
            match best {
                Some((i, n)) => {
                    out.push(Symbol::new(i));
                    rest = &rest[n.len()..];
                }
                None => {
                    let pos = text.len() - rest.len();
                    return Err(Error::input(format!(
                        "cannot read a symbol of {self} at byte {pos} of {text:?}"
                    )));
                }
            }
        }
        Ok(Word::from(out))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names.join(", "))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.names).finish()
    }
}

impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.names.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let names = Vec::<String>::deserialize(d)?;
        Alphabet::new(names).map_err(serde::de::Error::custom)
    }
}

/// A finite word as symbol indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn push(&mut self, symbol: Symbol) {
        self.0.push(symbol);
    }

    pub fn into_vec(self) -> Vec<Symbol> {
        self.0
    }

    /// Checks every index against `alphabet`.
    pub fn check(&self, alphabet: &Alphabet) -> Result<()> {
        match self.0.iter().find(|s| !alphabet.contains(**s)) {
            Some(s) => Err(Error::input(format!(
                "symbol index {} is outside the alphabet {alphabet}",
                s.index()
            ))),
            None => Ok(()),
        }
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl std::ops::Deref for Word {
    type Target = [Symbol];
    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

/// Whose move comes next after a history.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Turn {
    Ours,
    Adversary,
    Ended,
}

/// Turn parity: the game has ended at `len == horizon`, otherwise even
/// lengths are ours and odd lengths are the adversary's.
pub fn turn_at(len: usize, horizon: usize) -> Turn {
    if len >= horizon {
        Turn::Ended
    } else if len.is_multiple_of(2) {
        Turn::Ours
    } else {
        Turn::Adversary
    }
}

/// The moves played so far in a game of fixed horizon.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct History {
    word: Word,
    horizon: usize,
}

impl History {
    pub fn new(horizon: usize) -> Self {
        History {
            word: Word::empty(),
            horizon,
        }
    }

    pub fn from_word(word: Word, horizon: usize) -> Result<Self> {
        if word.len() > horizon {
            return Err(Error::contract(format!(
                "history of length {} exceeds horizon {horizon}",
                word.len()
            )));
        }
        Ok(History { word, horizon })
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.word
    }

    pub fn turn(&self) -> Turn {
        turn_at(self.word.len(), self.horizon)
    }

    pub fn push(&mut self, symbol: Symbol) -> Result<()> {
        if self.turn() == Turn::Ended {
            return Err(Error::contract(
                "cannot extend a history after the game ended",
            ));
        }
        self.word.push(symbol);
        Ok(())
    }

    /// `h·u` as a new history.
    pub fn child(&self, symbol: Symbol) -> Result<History> {
        let mut next = self.clone();
        next.push(symbol)?;
        Ok(next)
    }
}

pub fn turn_of(history: &History) -> Turn {
    history.turn()
}

/// A language over an alphabet, queried by membership. Implementations must
/// be deterministic and safe to call from several threads.
pub trait Spec: Send + Sync + fmt::Debug {
    fn alphabet(&self) -> &Alphabet;

    fn accepts(&self, word: &[Symbol]) -> bool;

    /// The explicit automaton behind this spec, when there is one.
    fn as_dfa(&self) -> Option<&Dfa> {
        None
    }
}

/// `(H, S, n, ε, ρ)`.
#[derive(Debug, Clone)]
pub struct RciInstance {
    pub alphabet: Alphabet,
    pub hard: Arc<dyn Spec>,
    pub soft: Arc<dyn Spec>,
    pub horizon: usize,
    pub epsilon: Rational,
    pub rho: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "issue", rename_all = "kebab-case")]
pub enum Issue {
    EpsilonOutOfRange { epsilon: String },
    RhoOutOfRange { rho: String },
    RhoZero,
    AlphabetMismatch { spec: String },
    HorizonTooLarge { horizon: usize, limit: usize },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::EpsilonOutOfRange { epsilon } => {
                write!(f, "epsilon {epsilon} is outside [0, 1]")
            }
            Issue::RhoOutOfRange { rho } => write!(f, "rho {rho} is outside (0, 1]"),
            Issue::RhoZero => write!(
                f,
                "rho is 0, so no distribution can meet the randomness bound"
            ),
            Issue::AlphabetMismatch { spec } => {
                write!(
                    f,
                    "the {spec} specification uses a different alphabet than the instance"
                )
            }
            Issue::HorizonTooLarge { horizon, limit } => {
                write!(f, "horizon {horizon} exceeds the configured limit {limit}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

pub fn validate_instance(instance: &RciInstance, max_horizon: usize) -> ValidationReport {
    let mut issues = Vec::new();
    let (eps, rho) = (&instance.epsilon, &instance.rho);
    if eps.is_negative() || eps > &Rational::one() {
        issues.push(Issue::EpsilonOutOfRange {
            epsilon: format_rational(eps),
        });
    }
    if rho.is_zero() {
        issues.push(Issue::RhoZero);
    } else if rho.is_negative() || rho > &Rational::one() {
        issues.push(Issue::RhoOutOfRange {
            rho: format_rational(rho),
        });
    }
    if instance.hard.alphabet() != &instance.alphabet {
        issues.push(Issue::AlphabetMismatch {
            spec: "hard".into(),
        });
    }
    if instance.soft.alphabet() != &instance.alphabet {
        issues.push(Issue::AlphabetMismatch {
            spec: "soft".into(),
        });
    }
    if instance.horizon > max_horizon {
        issues.push(Issue::HorizonTooLarge {
            horizon: instance.horizon,
            limit: max_horizon,
        });
    }
    ValidationReport { issues }
}
