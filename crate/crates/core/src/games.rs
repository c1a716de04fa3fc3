//! Compilers from game descriptions to DFA pairs `(hard, soft)`.
//!
//! Conventions shared by every compiler: an illegal move on our turn sends
//! the play to a rejecting sink, and an illegal move by the adversary sends
//! it to an accepting sink in both automata.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::game::{Alphabet, Symbol};

/// Default cap on the number of states a compiler may create.
pub const DEFAULT_STATE_BUDGET: usize = 2_000_000;

/// The hard and soft automata of a compiled game.
#[derive(Debug, Clone)]
pub struct SpecPair {
    pub hard: Dfa,
    pub soft: Dfa,
}

/// Breadth-first construction of the reachable part of an implicit automaton.
fn build_reachable<K: Clone + Eq + Hash>(
    alphabet: &Alphabet,
    start: K,
    budget: usize,
    what: &str,
    step: impl Fn(&K, Symbol) -> K,
    accept: impl Fn(&K) -> bool,
    name: impl Fn(&K) -> String,
) -> Result<Dfa> {
    let mut ids: HashMap<K, usize> = HashMap::new();
    let mut keys = vec![start.clone()];
    ids.insert(start, 0);
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let key = keys[v].clone();
        let mut row = Vec::with_capacity(alphabet.len());
        for u in alphabet.symbols() {
            let next = step(&key, u);
            let id = match ids.entry(next) {
                Entry::Occupied(e) => *e.get(),
                Entry::Vacant(e) => {
                    let id = keys.len();
                    if id >= budget {
                        return Err(Error::Size {
                            what: what.to_string(),
                            needed: id as u128 + 1,
                            limit: budget as u128,
                        });
                    }
                    keys.push(e.key().clone());
                    e.insert(id);
                    queue.push_back(id);
                    id
                }
            };
            row.push(id);
        }
        if rows.len() <= v {
            rows.resize(v + 1, Vec::new());
        }
        rows[v] = row;
    }
    let names = keys.iter().map(&name).collect();
    let accepting: Vec<usize> = (0..keys.len()).filter(|&v| accept(&keys[v])).collect();
    Dfa::new(alphabet.clone(), names, 0, &accepting, rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Owner {
    Us,
    Adversary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RsgKind {
    Reach,
    Safe,
    ReachAvoid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsgNode {
    pub owner: Owner,
    #[serde(default)]
    pub edges: BTreeMap<String, String>,
}

/// Target/avoid sets interpreted under a kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Objective {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<RsgKind>,
    #[serde(default)]
    pub target: Vec<String>,
    #[serde(default)]
    pub avoid: Vec<String>,
}

/// A reachability, safety or reach-avoid game graph. Ownership must
/// alternate along every edge, starting with us. `soft` is an optional second
/// objective; without it the soft automaton accepts everything.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rsg {
    pub kind: RsgKind,
    pub alphabet: Vec<String>,
    pub nodes: BTreeMap<String, RsgNode>,
    pub start: String,
    #[serde(default)]
    pub target: Vec<String>,
    #[serde(default)]
    pub avoid: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub soft: Option<Objective>,
}

impl Rsg {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn validate(&self) -> Result<Alphabet> {
        let alphabet = Alphabet::new(self.alphabet.iter().cloned())?;
        let node = |name: &str, role: &str| -> Result<&RsgNode> {
            self.nodes
                .get(name)
                .ok_or_else(|| Error::input(format!("{role} {name:?} is not a node")))
        };
        let start = node(&self.start, "start")?;
        if start.owner != Owner::Us {
            return Err(Error::input(format!(
                "start node {:?} must be ours: we move first",
                self.start
            )));
        }
        let objectives = std::iter::once((&self.target, &self.avoid))
            .chain(self.soft.iter().map(|s| (&s.target, &s.avoid)));
        for (target, avoid) in objectives {
            for t in target {
                node(t, "target")?;
            }
            for a in avoid {
                node(a, "avoid node")?;
            }
        }
        for (name, n) in &self.nodes {
            for (sym, to) in &n.edges {
                alphabet.symbol(sym)?;
                let succ = node(to, "edge target")?;
                if succ.owner == n.owner {
                    return Err(Error::input(format!(
                        "edge {name} --{sym}--> {to} joins two {:?} nodes; turns must alternate. \
                         Insert a relay node owned by the other player with a single successor",
                        n.owner
                    )));
                }
            }
        }
        Ok(alphabet)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum RsgState {
    At { node: usize, reached: bool },
    Accept,
    Reject,
}

fn compile_objective(
    g: &Rsg,
    alphabet: &Alphabet,
    kind: RsgKind,
    target: &[String],
    avoid: &[String],
    budget: usize,
) -> Result<Dfa> {
    let names: Vec<&String> = g.nodes.keys().collect();
    let index: HashMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let nodes: Vec<&RsgNode> = g.nodes.values().collect();
    let target: BTreeSet<usize> = target.iter().map(|t| index[t.as_str()]).collect();
    let avoid: BTreeSet<usize> = match kind {
        RsgKind::Reach => BTreeSet::new(),
        _ => avoid.iter().map(|a| index[a.as_str()]).collect(),
    };
    let needs_target = kind != RsgKind::Safe;
    let enter = |node: usize, reached: bool| {
        if avoid.contains(&node) {
            RsgState::Reject
        } else {
            RsgState::At {
                node,
                reached: reached || target.contains(&node),
            }
        }
    };
    let start = enter(index[g.start.as_str()], false);
    build_reachable(
        alphabet,
        start,
        budget,
        "game automaton",
        |s, u| match *s {
            RsgState::At { node, reached } => match nodes[node].edges.get(alphabet.name(u)) {
                Some(to) => enter(index[to.as_str()], reached),
                None if nodes[node].owner == Owner::Us => RsgState::Reject,
                None => RsgState::Accept,
            },
            ref sink => sink.clone(),
        },
        |s| match *s {
            RsgState::At { reached, .. } => reached || !needs_target,
            RsgState::Accept => true,
            RsgState::Reject => false,
        },
        |s| match *s {
            RsgState::At { node, reached } if reached && needs_target => {
                format!("{}*", names[node])
            }
            RsgState::At { node, .. } => names[node].clone(),
            RsgState::Accept => "#accept".into(),
            RsgState::Reject => "#reject".into(),
        },
    )
}

/// Compiles a game into its hard and soft automata. The automata do not
/// depend on the horizon; it is taken to check that the game is non-trivial
/// to play for `n` moves only through the width computation downstream.
pub fn compile_rsg(g: &Rsg) -> Result<SpecPair> {
    let alphabet = g.validate()?;
    let hard = compile_objective(
        g,
        &alphabet,
        g.kind,
        &g.target,
        &g.avoid,
        DEFAULT_STATE_BUDGET,
    )?;
    let soft = match &g.soft {
        Some(s) => compile_objective(
            g,
            &alphabet,
            s.kind.unwrap_or(g.kind),
            &s.target,
            &s.avoid,
            DEFAULT_STATE_BUDGET,
        )?,
        None => Dfa::universal(alphabet),
    };
    Ok(SpecPair { hard, soft })
}

pub type Cell = (usize, usize);

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SoftRule {
    #[default]
    NoRevisit,
    None,
}

fn default_true() -> bool {
    true
}

/// A patrol game on a grid. Cells are `[x, y]` with `x` growing east and `y`
/// growing south. We move on even positions, the adversary on odd ones; both
/// use the moves `N`, `S`, `E`, `W` and, unless disabled, `stay`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPatrolInstance {
    pub width: usize,
    pub height: usize,
    pub patroller: Cell,
    pub adversary: Cell,
    #[serde(default)]
    pub waypoints: Vec<Cell>,
    #[serde(default)]
    pub forbidden: Vec<Cell>,
    pub n: usize,
    #[serde(default)]
    pub soft: SoftRule,
    #[serde(default = "default_true")]
    pub stay: bool,
}

impl GridPatrolInstance {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn alphabet(&self) -> Alphabet {
        let moves: &[&str] = if self.stay {
            &["N", "S", "E", "W", "stay"]
        } else {
            &["N", "S", "E", "W"]
        };
        Alphabet::new(moves.iter().copied()).expect("fixed move names are valid")
    }

    fn cell_index(&self, c: Cell) -> usize {
        c.1 * self.width + c.0
    }

    fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::input("grid dimensions must be positive"));
        }
        let inside = |c: &Cell, role: &str| {
            if c.0 < self.width && c.1 < self.height {
                Ok(())
            } else {
                Err(Error::input(format!(
                    "{role} cell [{}, {}] lies outside the {}x{} grid",
                    c.0, c.1, self.width, self.height
                )))
            }
        };
        inside(&self.patroller, "patroller start")?;
        inside(&self.adversary, "adversary start")?;
        for w in &self.waypoints {
            inside(w, "waypoint")?;
        }
        for f in &self.forbidden {
            inside(f, "forbidden")?;
        }
        if self.patroller == self.adversary {
            return Err(Error::input(
                "patroller and adversary must start on different cells",
            ));
        }
        let distinct: BTreeSet<&Cell> = self.waypoints.iter().collect();
        if distinct.len() != self.waypoints.len() {
            return Err(Error::input("waypoints must be distinct"));
        }
        if self.waypoints.len() > 16 {
            return Err(Error::Size {
                what: "waypoint set".into(),
                needed: self.waypoints.len() as u128,
                limit: 16,
            });
        }
        Ok(())
    }

    /// Upper bound on the states of either compiled automaton:
    /// `cells² · 2^waypoints · 2` plus two sinks.
    pub fn state_bound(&self) -> u128 {
        let cells = (self.width as u128) * (self.height as u128);
        cells * cells * (1u128 << self.waypoints.len()) * 2 + 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum GridState {
    Play {
        p: Cell,
        a: Cell,
        visited: u32,
        ours: bool,
    },
    Accept,
    Reject,
}

struct GridRules<'a> {
    g: &'a GridPatrolInstance,
    alphabet: Alphabet,
    waypoint: HashMap<Cell, usize>,
    forbidden: BTreeSet<usize>,
}

impl GridRules<'_> {
    fn shift(&self, c: Cell, u: Symbol) -> Option<Cell> {
        let (x, y) = c;
        match self.alphabet.name(u) {
            "N" => y.checked_sub(1).map(|y| (x, y)),
            "S" => (y + 1 < self.g.height).then_some((x, y + 1)),
            "E" => (x + 1 < self.g.width).then_some((x + 1, y)),
            "W" => x.checked_sub(1).map(|x| (x, y)),
            _ => Some(c),
        }
    }

    fn mark(&self, c: Cell) -> u32 {
        self.waypoint.get(&c).map_or(0, |&j| 1 << j)
    }

    fn start(&self) -> GridState {
        GridState::Play {
            p: self.g.patroller,
            a: self.g.adversary,
            visited: self.mark(self.g.patroller),
            ours: true,
        }
    }

    /// `hard` selects collision and coverage checking; otherwise the
    /// no-revisit rule is applied.
    fn step(&self, s: &GridState, u: Symbol, hard: bool) -> GridState {
        let GridState::Play {
            p,
            a,
            visited,
            ours,
        } = *s
        else {
            return *s;
        };
        if ours {
            let Some(q) = self.shift(p, u) else {
                return GridState::Reject;
            };
            if hard && q == a {
                return GridState::Reject;
            }
            let bit = self.mark(q);
            if !hard && self.g.soft == SoftRule::NoRevisit && q != p && visited & bit != 0 {
                return GridState::Reject;
            }
            GridState::Play {
                p: q,
                a,
                visited: visited | bit,
                ours: false,
            }
        } else {
            let b = match self.shift(a, u) {
                Some(b) if b == a || !self.forbidden.contains(&self.g.cell_index(b)) => b,
                _ => return GridState::Accept,
            };
            if hard && b == p {
                return GridState::Reject;
            }
            GridState::Play {
                p,
                a: b,
                visited,
                ours: true,
            }
        }
    }
}

fn state_name(s: &GridState, waypoints: usize) -> String {
    match s {
        GridState::Play {
            p,
            a,
            visited,
            ours,
        } => format!(
            "p{},{}|a{},{}|v{:0w$b}|{}",
            p.0,
            p.1,
            a.0,
            a.1,
            visited,
            if *ours { "us" } else { "adv" },
            w = waypoints.max(1)
        ),
        GridState::Accept => "#accept".into(),
        GridState::Reject => "#reject".into(),
    }
}

pub fn compile_grid(g: &GridPatrolInstance) -> Result<SpecPair> {
    compile_grid_with_budget(g, DEFAULT_STATE_BUDGET)
}

pub fn compile_grid_with_budget(g: &GridPatrolInstance, budget: usize) -> Result<SpecPair> {
    g.validate()?;
    let bound = g.state_bound();
    if bound > budget as u128 {
        return Err(Error::Size {
            what: "grid automaton".into(),
            needed: bound,
            limit: budget as u128,
        });
    }
    let rules = GridRules {
        g,
        alphabet: g.alphabet(),
        waypoint: g
            .waypoints
            .iter()
            .enumerate()
            .map(|(j, &c)| (c, j))
            .collect(),
        forbidden: g.forbidden.iter().map(|&c| g.cell_index(c)).collect(),
    };
    let full = if g.waypoints.is_empty() {
        0
    } else {
        u32::MAX >> (32 - g.waypoints.len())
    };
    let k = g.waypoints.len();
    let hard = build_reachable(
        &rules.alphabet,
        rules.start(),
        budget,
        "grid automaton",
        |s, u| rules.step(s, u, true),
        |s| match s {
            GridState::Play { visited, .. } => *visited == full,
            GridState::Accept => true,
            GridState::Reject => false,
        },
        |s| state_name(s, k),
    )?;
    let soft = build_reachable(
        &rules.alphabet,
        rules.start(),
        budget,
        "grid automaton",
        |s, u| rules.step(s, u, false),
        |s| !matches!(s, GridState::Reject),
        |s| state_name(s, k),
    )?;
    Ok(SpecPair { hard, soft })
}

pub const PAD_SYMBOL: &str = "#";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum PadState {
    Word { v: usize, len: usize },
    Padding,
    Dead,
}

/// Extends `d` with a padding symbol `#` so that words of length `m..=n`
/// can be played in a fixed-length game: the result accepts `w·#^k` iff `d`
/// accepts `w` and `|w| ≥ m`. Any `#` followed by a real symbol rejects.
pub fn pad_spec(d: &Dfa, m: usize, n: usize) -> Result<Dfa> {
    if m > n {
        return Err(Error::contract(format!("pad range {m}..={n} is empty")));
    }
    if d.alphabet().names().iter().any(|s| s == PAD_SYMBOL) {
        return Err(Error::input(format!(
            "alphabet already contains the padding symbol {PAD_SYMBOL:?}"
        )));
    }
    let alphabet = Alphabet::new(
        d.alphabet()
            .names()
            .iter()
            .cloned()
            .chain([PAD_SYMBOL.to_string()]),
    )?;
    let pad = Symbol::new(d.alphabet().len());
    build_reachable(
        &alphabet,
        PadState::Word {
            v: d.initial(),
            len: 0,
        },
        DEFAULT_STATE_BUDGET,
        "padded automaton",
        |s, u| match (*s, u == pad) {
            (PadState::Word { v, len }, false) => PadState::Word {
                v: d.next(v, u),
                len: (len + 1).min(m),
            },
            (PadState::Word { v, len }, true) if d.is_accepting(v) && len >= m => PadState::Padding,
            (PadState::Padding, true) => PadState::Padding,
            _ => PadState::Dead,
        },
        |s| match *s {
            PadState::Word { v, len } => d.is_accepting(v) && len >= m,
            PadState::Padding => true,
            PadState::Dead => false,
        },
        |s| match *s {
            PadState::Word { v, len } => format!("{}|{}", d.state_name(v), len),
            PadState::Padding => "#pad".into(),
            PadState::Dead => "#dead".into(),
        },
    )
}
