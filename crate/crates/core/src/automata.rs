//! Explicit DFAs: membership, product intersection, and the width table.
//!
//! The width table holds `C(v, i)` for every state `v` and level `0 ≤ i ≤ n`:
//! the membership indicator at `i = n`, the minimum over successors on the
//! adversary's levels (odd `i`), and the sum over successors on ours. The
//! width of the language given a history `h` is then `C(δ*(h), |h|)`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{turn_at, Alphabet, Spec, Symbol, Turn};
use crate::improviser::WidthOracle;

pub type StateId = usize;

/// A complete deterministic automaton with named states.
#[derive(Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    names: Vec<String>,
    initial: StateId,
    accepting: Vec<bool>,
    // delta[state * |Σ| + symbol]
    delta: Vec<StateId>,
}

impl Dfa {
    /// Builds a DFA from a dense table: `transitions[v][u]` is `δ(v, u)`.
    pub fn new(
        alphabet: Alphabet,
        names: Vec<String>,
        initial: StateId,
        accepting: &[StateId],
        transitions: Vec<Vec<StateId>>,
    ) -> Result<Self> {
        let count = names.len();
        if count == 0 {
            return Err(Error::input("a DFA needs at least one state"));
        }
        if initial >= count {
            return Err(Error::input(format!(
                "initial state {initial} out of range"
            )));
        }
        if transitions.len() != count {
            return Err(Error::input(format!(
                "{} transition rows for {count} states",
                transitions.len()
            )));
        }
        let mut acc = vec![false; count];
        for &v in accepting {
            *acc.get_mut(v)
                .ok_or_else(|| Error::input(format!("accepting state {v} out of range")))? = true;
        }
        let k = alphabet.len();
        let mut delta = Vec::with_capacity(count * k);
        for (v, row) in transitions.into_iter().enumerate() {
            if row.len() != k {
                return Err(Error::input(format!(
                    "state {} has {} transitions, alphabet has {k} symbols",
                    names[v],
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|&&t| t >= count) {
                return Err(Error::input(format!(
                    "transition target {bad} out of range"
                )));
            }
            delta.extend(row);
        }
        Ok(Dfa {
            alphabet,
            names,
            initial,
            accepting: acc,
            delta,
        })
    }

    /// Builds a DFA with states `0..count` from a transition function.
    pub fn from_fn(
        alphabet: Alphabet,
        count: usize,
        initial: StateId,
        is_accepting: impl Fn(StateId) -> bool,
        step: impl Fn(StateId, Symbol) -> StateId,
    ) -> Result<Self> {
        let names = (0..count).map(|v| format!("q{v}")).collect();
        let accepting: Vec<StateId> = (0..count).filter(|&v| is_accepting(v)).collect();
        let transitions = (0..count)
            .map(|v| alphabet.symbols().map(|u| step(v, u)).collect())
            .collect();
        Dfa::new(alphabet, names, initial, &accepting, transitions)
    }

    /// The one-state DFA accepting every word.
    pub fn universal(alphabet: Alphabet) -> Self {
        Dfa::from_fn(alphabet, 1, 0, |_| true, |_, _| 0).expect("one-state automaton is valid")
    }

    /// The one-state DFA accepting nothing.
    pub fn empty(alphabet: Alphabet) -> Self {
        Dfa::from_fn(alphabet, 1, 0, |_| false, |_, _| 0).expect("one-state automaton is valid")
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.names.len() {
            return Err(Error::input("state name count does not match state count"));
        }
        self.names = names;
        Ok(self)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn state_name(&self, v: StateId) -> &str {
        &self.names[v]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_accepting(&self, v: StateId) -> bool {
        self.accepting[v]
    }

    pub fn next(&self, v: StateId, u: Symbol) -> StateId {
        self.delta[v * self.alphabet.len() + u.index()]
    }

    /// `δ*(initial, word)`.
    pub fn run(&self, word: &[Symbol]) -> Result<StateId> {
        word.iter().try_fold(self.initial, |v, &u| {
            if self.alphabet.contains(u) {
                Ok(self.next(v, u))
            } else {
                Err(Error::input(format!(
                    "symbol index {} is not in the alphabet {}",
                    u.index(),
                    self.alphabet
                )))
            }
        })
    }

    pub fn accepts_word(&self, word: &[Symbol]) -> Result<bool> {
        self.run(word).map(|v| self.accepting[v])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DfaFile = serde_json::from_str(text)?;
        file.into_dfa()
    }

    pub fn to_file(&self) -> DfaFile {
        let transitions = (0..self.state_count())
            .map(|v| {
                let row = self
                    .alphabet
                    .symbols()
                    .map(|u| {
                        (
                            self.alphabet.name(u).to_string(),
                            self.names[self.next(v, u)].clone(),
                        )
                    })
                    .collect();
                (self.names[v].clone(), row)
            })
            .collect();
        DfaFile {
            kind: Some("dfa".into()),
            alphabet: self.alphabet.names().to_vec(),
            states: self.names.clone(),
            initial: self.names[self.initial].clone(),
            accepting: (0..self.state_count())
                .filter(|&v| self.accepting[v])
                .map(|v| self.names[v].clone())
                .collect(),
            transitions,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("DFA serializes")
    }
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dfa")
            .field("alphabet", &self.alphabet)
            .field("states", &self.names.len())
            .field("initial", &self.names[self.initial])
            .finish()
    }
}

impl Spec for Dfa {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn accepts(&self, word: &[Symbol]) -> bool {
        self.accepts_word(word).unwrap_or(false)
    }

    fn as_dfa(&self) -> Option<&Dfa> {
        Some(self)
    }
}

/// On-disk DFA form. Transitions must be total.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DfaFile {
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub accepting: Vec<String>,
    pub transitions: BTreeMap<String, BTreeMap<String, String>>,
}

impl DfaFile {
    pub fn into_dfa(self) -> Result<Dfa> {
        let alphabet = Alphabet::new(self.alphabet)?;
        let mut ids = HashMap::new();
        for (i, name) in self.states.iter().enumerate() {
            if ids.insert(name.as_str(), i).is_some() {
                return Err(Error::input(format!("state {name:?} is listed twice")));
            }
        }
        let lookup = |name: &str, role: &str| {
            ids.get(name)
                .copied()
                .ok_or_else(|| Error::input(format!("{role} {name:?} is not a declared state")))
        };
        let initial = lookup(&self.initial, "initial state")?;
        let accepting = self
            .accepting
            .iter()
            .map(|n| lookup(n, "accepting state"))
            .collect::<Result<Vec<_>>>()?;
        for (from, row) in &self.transitions {
            lookup(from, "transition source")?;
            for (sym, to) in row {
                alphabet.symbol(sym)?;
                lookup(to, "transition target")?;
            }
        }
        let mut missing = Vec::new();
        let mut table = Vec::with_capacity(self.states.len());
        for name in &self.states {
            let row = self.transitions.get(name);
            let mut targets = Vec::with_capacity(alphabet.len());
            for sym in alphabet.names() {
                match row.and_then(|r| r.get(sym)) {
                    Some(to) => targets.push(ids[to.as_str()]),
                    None => {
                        missing.push(format!("({name}, {sym})"));
                        targets.push(0);
                    }
                }
            }
            table.push(targets);
        }
        if !missing.is_empty() {
            return Err(Error::input(format!(
                "transition table is partial; missing {}",
                missing.join(", ")
            )));
        }
        Dfa::new(alphabet, self.states, initial, &accepting, table)
    }
}

/// Product construction over reachable pairs only. Also returns the pair
/// behind each product state.
pub fn product_with_pairs(d1: &Dfa, d2: &Dfa) -> Result<(Dfa, Vec<(StateId, StateId)>)> {
    if d1.alphabet != d2.alphabet {
        return Err(Error::input(format!(
            "cannot intersect automata over different alphabets {} and {}",
            d1.alphabet, d2.alphabet
        )));
    }
    let k = d1.alphabet.len();
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs = Vec::new();
    let mut queue = VecDeque::new();
    let start = (d1.initial, d2.initial);
    ids.insert(start, 0);
    pairs.push(start);
    queue.push_back(start);
    let mut delta = Vec::new();
    while let Some((a, b)) = queue.pop_front() {
        for u in d1.alphabet.symbols() {
            let next = (d1.next(a, u), d2.next(b, u));
            let id = *ids.entry(next).or_insert_with(|| {
                pairs.push(next);
                queue.push_back(next);
                pairs.len() - 1
            });
            delta.push(id);
        }
    }
    let names = pairs
        .iter()
        .map(|&(a, b)| format!("({},{})", d1.names[a], d2.names[b]))
        .collect();
    let accepting = pairs
        .iter()
        .map(|&(a, b)| d1.accepting[a] && d2.accepting[b])
        .collect();
    debug_assert_eq!(delta.len(), pairs.len() * k);
    Ok((
        Dfa {
            alphabet: d1.alphabet.clone(),
            names,
            initial: 0,
            accepting,
            delta,
        },
        pairs,
    ))
}

/// `L(result) = L(d1) ∩ L(d2)`.
pub fn dfa_product(d1: &Dfa, d2: &Dfa) -> Result<Dfa> {
    product_with_pairs(d1, d2).map(|(d, _)| d)
}

/// `C(v, i)` for all states and levels of one automaton at one horizon.
#[derive(Debug, Clone)]
pub struct WidthTable {
    dfa: Arc<Dfa>,
    horizon: usize,
    // levels[i][v] = C(v, i)
    levels: Vec<Vec<BigUint>>,
}

impl WidthTable {
    pub fn build(dfa: Arc<Dfa>, horizon: usize) -> Self {
        let count = dfa.state_count();
        let mut levels = vec![Vec::new(); horizon + 1];
        levels[horizon] = (0..count)
            .map(|v| {
                if dfa.is_accepting(v) {
                    BigUint::one()
                } else {
                    BigUint::zero()
                }
            })
            .collect();
        for i in (0..horizon).rev() {
            let next = &levels[i + 1];
            let row = match turn_at(i, horizon) {
                Turn::Adversary => (0..count)
                    .map(|v| {
                        dfa.alphabet
                            .symbols()
                            .map(|u| &next[dfa.next(v, u)])
                            .min()
                            .expect("alphabet is non-empty")
                            .clone()
                    })
                    .collect(),
                _ => (0..count)
                    .map(|v| dfa.alphabet.symbols().map(|u| &next[dfa.next(v, u)]).sum())
                    .collect(),
            };
            levels[i] = row;
        }
        WidthTable {
            dfa,
            horizon,
            levels,
        }
    }

    pub fn dfa(&self) -> &Arc<Dfa> {
        &self.dfa
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// `C(v, i)`.
    pub fn get(&self, v: StateId, level: usize) -> &BigUint {
        &self.levels[level][v]
    }

    /// `width(X | h) = C(δ*(h), |h|)`.
    pub fn width_given(&self, history: &[Symbol]) -> Result<BigUint> {
        if history.len() > self.horizon {
            return Err(Error::contract(format!(
                "history of length {} exceeds horizon {}",
                history.len(),
                self.horizon
            )));
        }
        let v = self.dfa.run(history)?;
        Ok(self.levels[history.len()][v].clone())
    }
}

impl WidthOracle for WidthTable {
    fn alphabet(&self) -> &Alphabet {
        self.dfa.alphabet()
    }

    fn horizon(&self) -> usize {
        self.horizon
    }

    fn width(&self, history: &[Symbol]) -> Result<BigUint> {
        self.width_given(history)
    }
}

pub fn width_table(dfa: Arc<Dfa>, horizon: usize) -> WidthTable {
    WidthTable::build(dfa, horizon)
}

pub fn dfa_width_given(table: &WidthTable, history: &[Symbol]) -> Result<BigUint> {
    table.width_given(history)
}
