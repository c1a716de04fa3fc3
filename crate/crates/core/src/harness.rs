//! Adversaries, episode runs, and exact play distributions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::automata::{Dfa, StateId};
use crate::error::{Error, Result};
use crate::game::{Alphabet, History, RciInstance, Symbol, Turn, Word};
use crate::improviser::{
    check_realizability, compute_params, play_out, step_weights, Improviser, ImproviserParams,
    ImproviserState, WidthOraclePair,
};
use crate::rational::{format_rational, Rational};

/// Default cap on the number of choice-tree nodes [`exact_distribution`] visits.
pub const DEFAULT_NODE_LIMIT: u64 = 1_000_000;

/// Which width the greedy adversary minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WidthTarget {
    Hard,
    Admissible,
}

/// A memoryless adversary keyed by the state the hard DFA is in.
#[derive(Clone)]
pub struct Policy {
    dfa: Arc<Dfa>,
    moves: HashMap<StateId, Symbol>,
    fallback: Option<Symbol>,
    text: String,
}

impl Policy {
    /// Parses `state=move,state=move,...`; the state `*` sets the fallback.
    /// Each entry splits at its first `=`, so moves may themselves be `=`.
    pub fn parse(text: &str, dfa: Arc<Dfa>) -> Result<Self> {
        let mut moves = HashMap::new();
        let mut fallback = None;
        for entry in text.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (state, mv) = entry
                .split_once('=')
                .ok_or_else(|| Error::input(format!("policy entry {entry:?} lacks '='")))?;
            let sym = dfa.alphabet().symbol(mv.trim())?;
            if state.trim() == "*" {
                fallback = Some(sym);
                continue;
            }
            let v = dfa
                .state_id(state.trim())
                .ok_or_else(|| Error::input(format!("policy names unknown state {state:?}")))?;
            moves.insert(v, sym);
        }
        Ok(Policy {
            dfa,
            moves,
            fallback,
            text: text.to_string(),
        })
    }

    fn lookup(&self, history: &[Symbol]) -> Result<Symbol> {
        let v = self.dfa.run(history)?;
        self.moves
            .get(&v)
            .copied()
            .or(self.fallback)
            .ok_or_else(|| {
                Error::input(format!(
                    "policy has no move for state {:?}",
                    self.dfa.state_name(v)
                ))
            })
    }
}

impl fmt::Debug for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Policy({:?})", self.text)
    }
}

#[derive(Debug, Clone)]
pub enum AdversaryKind {
    /// Plays `word[|h|]`: the script is indexed by absolute position.
    Scripted(Word),
    /// Plays the script's `k`-th symbol (mod its length) on its `k`-th move.
    Cyclic(Word),
    /// Uniform over the alphabet from its own seeded source.
    Random {
        seed: u64,
    },
    /// `argmin_u width(hu)`, ties to the earliest symbol.
    GreedyMinWidth(WidthTarget),
    Policy(Policy),
    /// Reads moves from an interactive channel.
    Repl,
}

impl AdversaryKind {
    /// Parses `scripted:W`, `cyclic:W`, `random[:SEED]`, `greedy[:hard|:admissible]`,
    /// `policy:STATE=MOVE,...` (needs the hard DFA) or `repl`.
    pub fn parse(text: &str, alphabet: &Alphabet, hard: Option<Arc<Dfa>>) -> Result<Self> {
        let (head, arg) = match text.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a)),
            None => (text.trim(), None),
        };
        let word = |a: Option<&str>| -> Result<Word> {
            let w = alphabet.parse_word(a.unwrap_or(""))?;
            if w.is_empty() {
                return Err(Error::input(format!(
                    "adversary {head:?} needs a non-empty word"
                )));
            }
            Ok(w)
        };
        match head {
            "scripted" => Ok(AdversaryKind::Scripted(word(arg)?)),
            "cyclic" => Ok(AdversaryKind::Cyclic(word(arg)?)),
            "random" => {
                let seed = match arg {
                    Some(s) => s
                        .trim()
                        .parse()
                        .map_err(|_| Error::input(format!("bad random adversary seed {s:?}")))?,
                    None => 0,
                };
                Ok(AdversaryKind::Random { seed })
            }
            "greedy" => match arg.map(str::trim) {
                None | Some("hard") => Ok(AdversaryKind::GreedyMinWidth(WidthTarget::Hard)),
                Some("admissible") => Ok(AdversaryKind::GreedyMinWidth(WidthTarget::Admissible)),
                Some(other) => Err(Error::input(format!("unknown greedy target {other:?}"))),
            },
            "policy" => {
                let dfa = hard.ok_or_else(|| {
                    Error::input("a policy adversary needs the hard specification to be a DFA")
                })?;
                Ok(AdversaryKind::Policy(Policy::parse(
                    arg.unwrap_or(""),
                    dfa,
                )?))
            }
            "repl" => Ok(AdversaryKind::Repl),
            _ => Err(Error::input(format!("unknown adversary {text:?}"))),
        }
    }

    pub fn is_deterministic(&self) -> bool {
        !matches!(self, AdversaryKind::Random { .. } | AdversaryKind::Repl)
    }
}

/// Line-oriented source of adversary moves.
pub trait ReplChannel: Send {
    /// Shows `prompt` and returns the next line, or `None` at end of input.
    fn read_line(&mut self, prompt: &str) -> Result<Option<String>>;

    fn report(&mut self, message: &str) -> Result<()>;
}

pub struct Adversary {
    kind: AdversaryKind,
    rng: ChaCha8Rng,
    channel: Option<Box<dyn ReplChannel>>,
}

fn adversary_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..11].copy_from_slice(b"adv");
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

impl Adversary {
    pub fn new(kind: AdversaryKind) -> Self {
        Self::for_episode(kind, 0)
    }

    /// A fresh adversary whose random source is the `episode`-th stream of its seed.
    pub fn for_episode(kind: AdversaryKind, episode: u64) -> Self {
        let seed = match kind {
            AdversaryKind::Random { seed } => seed,
            _ => 0,
        };
        Adversary {
            kind,
            rng: adversary_rng(seed, episode),
            channel: None,
        }
    }

    pub fn repl(channel: Box<dyn ReplChannel>) -> Self {
        Adversary {
            kind: AdversaryKind::Repl,
            rng: adversary_rng(0, 0),
            channel: Some(channel),
        }
    }

    pub fn kind(&self) -> &AdversaryKind {
        &self.kind
    }

    pub fn is_deterministic(&self) -> bool {
        self.kind.is_deterministic()
    }

    pub fn next_move(&mut self, history: &History, oracles: &WidthOraclePair) -> Result<Symbol> {
        if history.turn() != Turn::Adversary {
            return Err(Error::contract(format!(
                "adversary asked to move after history of length {}, which is not its turn",
                history.len()
            )));
        }
        let alphabet = oracles.alphabet();
        let u = match &self.kind {
            AdversaryKind::Scripted(w) => *w.get(history.len()).ok_or_else(|| {
                Error::input(format!(
                    "scripted adversary has no move at position {} (script length {})",
                    history.len(),
                    w.len()
                ))
            })?,
            AdversaryKind::Cyclic(w) => w[((history.len() - 1) / 2) % w.len()],
            AdversaryKind::Random { .. } => Symbol::new(self.rng.gen_range(0..alphabet.len())),
            AdversaryKind::GreedyMinWidth(target) => greedy_move(history, oracles, *target)?,
            AdversaryKind::Policy(p) => p.lookup(history.symbols())?,
            AdversaryKind::Repl => self.read_repl(history, alphabet)?,
        };
        if !alphabet.contains(u) {
            return Err(Error::input(format!(
                "adversary emitted symbol index {} outside the alphabet",
                u.index()
            )));
        }
        Ok(u)
    }

    fn read_repl(&mut self, history: &History, alphabet: &Alphabet) -> Result<Symbol> {
        let channel = self
            .channel
            .as_mut()
            .ok_or_else(|| Error::contract("repl adversary has no channel"))?;
        let prompt = format!(
            "h={} your-move? [{}] ",
            alphabet.render(history.symbols()),
            alphabet.names().join(" ")
        );
        loop {
            let Some(line) = channel.read_line(&prompt)? else {
                return Err(Error::Aborted);
            };
            let line = line.trim();
            if line.is_empty() {
                return Err(Error::Aborted);
            }
            match alphabet.symbol(line) {
                Ok(u) => return Ok(u),
                Err(_) => {
                    channel.report(&format!("unknown move {line:?}; legal moves: {alphabet}"))?
                }
            }
        }
    }
}

fn greedy_move(
    history: &History,
    oracles: &WidthOraclePair,
    target: WidthTarget,
) -> Result<Symbol> {
    let mut buf = history.symbols().to_vec();
    let mut best: Option<(BigUint, Symbol)> = None;
    for u in oracles.alphabet().symbols() {
        buf.push(u);
        let w = match target {
            WidthTarget::Hard => oracles.width_i(&buf)?,
            WidthTarget::Admissible => oracles.width_a(&buf)?,
        };
        buf.pop();
        if best.as_ref().is_none_or(|(b, _)| &w < b) {
            best = Some((w, u));
        }
    }
    Ok(best.expect("alphabets are non-empty").1)
}

/// Exact play probabilities; plays of probability zero are absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionMap {
    alphabet: Alphabet,
    plays: BTreeMap<Word, Rational>,
}

impl DistributionMap {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.plays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plays.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.plays.iter()
    }

    pub fn get(&self, play: &[Symbol]) -> Rational {
        self.plays
            .get(&Word::from(play.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Probability of a play given as text in the alphabet.
    pub fn probability_of(&self, play: &str) -> Result<Rational> {
        Ok(self.get(&self.alphabet.parse_word(play)?))
    }

    pub fn total(&self) -> Rational {
        self.plays.values().sum()
    }

    pub fn mass_where(&self, mut pred: impl FnMut(&[Symbol]) -> bool) -> Rational {
        self.plays
            .iter()
            .filter(|(w, _)| pred(w))
            .map(|(_, p)| p)
            .sum()
    }

    pub fn max_probability(&self) -> Rational {
        self.plays
            .values()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Rendered play → `"p/q"`.
    pub fn to_text_map(&self) -> BTreeMap<String, String> {
        self.plays
            .iter()
            .map(|(w, p)| (self.alphabet.render(w), format_rational(p)))
            .collect()
    }
}

impl Serialize for DistributionMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_text_map().serialize(s)
    }
}

pub fn exact_distribution(
    instance: &RciInstance,
    oracles: &WidthOraclePair,
    adversary: &mut Adversary,
) -> Result<DistributionMap> {
    exact_distribution_with_limit(instance, oracles, adversary, DEFAULT_NODE_LIMIT)
}

/// Enumerates the strategy's weighted choice tree against a deterministic
/// adversary. Refuses with a size error past `node_limit` nodes.
pub fn exact_distribution_with_limit(
    instance: &RciInstance,
    oracles: &WidthOraclePair,
    adversary: &mut Adversary,
    node_limit: u64,
) -> Result<DistributionMap> {
    if !adversary.is_deterministic() {
        return Err(Error::input(
            "exact enumeration needs a deterministic adversary (scripted, cyclic, greedy or policy)",
        ));
    }
    let (params, width_a, width_i) = realizable_params(instance, oracles)?;
    let mut walk = Walk {
        oracles,
        adversary,
        node_limit,
        nodes: 0,
        plays: BTreeMap::new(),
    };
    let root = ImproviserState {
        params,
        m_a: width_a,
        m_i: width_i,
        history: History::new(oracles.horizon()),
    };
    walk.visit(root, Rational::one())?;
    Ok(DistributionMap {
        alphabet: oracles.alphabet().clone(),
        plays: walk.plays,
    })
}

struct Walk<'a> {
    oracles: &'a WidthOraclePair,
    adversary: &'a mut Adversary,
    node_limit: u64,
    nodes: u64,
    plays: BTreeMap<Word, Rational>,
}

impl Walk<'_> {
    fn visit(&mut self, state: ImproviserState, prob: Rational) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Error::Size {
                what: "exact enumeration tree".into(),
                needed: self.nodes as u128,
                limit: self.node_limit as u128,
            });
        }
        match state.history.turn() {
            Turn::Ended => {
                *self
                    .plays
                    .entry(state.history.word().clone())
                    .or_insert_with(Rational::zero) += prob;
                Ok(())
            }
            Turn::Ours => {
                let sw = step_weights(&state, self.oracles)?;
                for (j, t) in sw.weights.iter().enumerate() {
                    if t.is_zero() {
                        continue;
                    }
                    let (m_a, m_i) = sw.parts[j].clone();
                    let child = ImproviserState {
                        params: state.params.clone(),
                        m_a,
                        m_i,
                        history: state.history.child(Symbol::new(j))?,
                    };
                    self.visit(child, &prob * t / &sw.total)?;
                }
                Ok(())
            }
            Turn::Adversary => {
                let u = self.adversary.next_move(&state.history, self.oracles)?;
                let history = state.history.child(u)?;
                self.visit(ImproviserState { history, ..state }, prob)
            }
        }
    }
}

fn realizable_params(
    instance: &RciInstance,
    oracles: &WidthOraclePair,
) -> Result<(ImproviserParams, BigUint, BigUint)> {
    let report = check_realizability(instance, oracles)?;
    if !report.realizable {
        return Err(Error::contract(format!(
            "instance is not realizable (epsilon_opt = {}, rho_min = {})",
            format_rational(&report.epsilon_opt),
            report.rho_min
        )));
    }
    let params = compute_params(&report.width_a, &report.width_i, &instance.rho)?;
    Ok((params, report.width_a, report.width_i))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EpisodeStats {
    pub episodes: u64,
    pub hard_violations: u64,
    pub soft_hits: u64,
    #[serde(with = "crate::rational")]
    pub max_play_frequency: Rational,
    pub seed: u64,
}

/// Improviser source for one episode: stream `episode` of the master seed.
pub fn episode_rng(seed: u64, episode: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(episode);
    rng
}

/// Plays `episodes` independent games in parallel. The result depends only on
/// the seeds, never on scheduling. With `checked`, the strategy re-verifies its
/// budget invariants after every move.
pub fn simulate_episodes(
    instance: &RciInstance,
    oracles: &WidthOraclePair,
    adversary: &AdversaryKind,
    episodes: u64,
    seed: u64,
    checked: bool,
) -> Result<Vec<Word>> {
    if matches!(adversary, AdversaryKind::Repl) {
        return Err(Error::input(
            "batch episodes cannot use an interactive adversary",
        ));
    }
    if episodes == 0 {
        return Ok(Vec::new());
    }
    let (params, width_a, width_i) = realizable_params(instance, oracles)?;
    (0..episodes)
        .into_par_iter()
        .map(|e| {
            let mut rng = episode_rng(seed, e);
            let mut adv = Adversary::for_episode(adversary.clone(), e);
            let mut imp =
                Improviser::with_params(params.clone(), width_a.clone(), width_i.clone(), oracles);
            imp.set_checked(checked);
            play_out(&mut imp, oracles, &mut adv, &mut rng)?;
            Ok(imp.into_play())
        })
        .collect()
}

pub fn summarize(instance: &RciInstance, plays: &[Word], seed: u64) -> EpisodeStats {
    let mut counts: HashMap<&Word, u64> = HashMap::new();
    let (mut hard_violations, mut soft_hits) = (0, 0);
    for w in plays {
        *counts.entry(w).or_default() += 1;
        if !instance.hard.accepts(w) {
            hard_violations += 1;
        } else if instance.soft.accepts(w) {
            soft_hits += 1;
        }
    }
    let episodes = plays.len() as u64;
    let max_play_frequency = match counts.values().max() {
        Some(&m) => Rational::new(m.into(), episodes.into()),
        None => Rational::zero(),
    };
    EpisodeStats {
        episodes,
        hard_violations,
        soft_hits,
        max_play_frequency,
        seed,
    }
}

pub fn run_episodes(
    instance: &RciInstance,
    oracles: &WidthOraclePair,
    adversary: &AdversaryKind,
    episodes: u64,
    seed: u64,
) -> Result<EpisodeStats> {
    let plays = simulate_episodes(instance, oracles, adversary, episodes, seed, false)?;
    Ok(summarize(instance, &plays, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::tests::{running_hard, running_soft};
    use crate::automata::{dfa_product, WidthTable};
    use crate::improviser::improvise_play;
    use crate::rational::parse_rational;

    fn running(eps: &str, rho: &str) -> (RciInstance, WidthOraclePair, Arc<Dfa>) {
        let h = Arc::new(running_hard());
        let s = Arc::new(running_soft());
        let a = Arc::new(dfa_product(&h, &s).unwrap());
        let oracles = WidthOraclePair::new(
            Arc::new(WidthTable::build(h.clone(), 4)),
            Arc::new(WidthTable::build(a, 4)),
        )
        .unwrap();
        let instance = RciInstance {
            alphabet: h.alphabet().clone(),
            hard: h.clone(),
            soft: s,
            horizon: 4,
            epsilon: parse_rational(eps).unwrap(),
            rho: parse_rational(rho).unwrap(),
        };
        (instance, oracles, h)
    }

    fn kind(text: &str, h: &Arc<Dfa>) -> AdversaryKind {
        AdversaryKind::parse(text, h.alphabet(), Some(h.clone())).unwrap()
    }

    fn hist(h: &Arc<Dfa>, s: &str) -> History {
        History::from_word(h.alphabet().parse_word(s).unwrap(), 4).unwrap()
    }

    fn sym(h: &Arc<Dfa>, s: &str) -> Symbol {
        h.alphabet().symbol(s).unwrap()
    }

    const AWAY_FROM_ZERO: &str = "policy:+0=-,+1=+,+2=+,-1=-,-2=-,*=+";

    #[test]
    fn greedy_moves_away_from_zero() {
        let (_, w, h) = running("1/2", "1/2");
        let mut adv = Adversary::new(kind("greedy", &h));
        assert_eq!(adv.next_move(&hist(&h, "+"), &w).unwrap(), sym(&h, "+"));
        assert_eq!(adv.next_move(&hist(&h, "-"), &w).unwrap(), sym(&h, "-"));
    }

    #[test]
    fn cyclic_wraps_and_scripted_exhausts() {
        let alphabet = Alphabet::new(["a", "b"]).unwrap();
        let a = Arc::new(Dfa::universal(alphabet.clone()));
        let w = WidthOraclePair::new(
            Arc::new(WidthTable::build(a.clone(), 6)),
            Arc::new(WidthTable::build(a.clone(), 6)),
        )
        .unwrap();
        let at = |len: usize| History::from_word(Word::from(vec![Symbol::new(0); len]), 6).unwrap();
        let mut cyc = Adversary::new(AdversaryKind::parse("cyclic:ab", &alphabet, None).unwrap());
        let got: Vec<_> = [1, 3, 5]
            .iter()
            .map(|&p| {
                alphabet
                    .name(cyc.next_move(&at(p), &w).unwrap())
                    .to_string()
            })
            .collect();
        assert_eq!(got, ["a", "b", "a"]);
        let mut scr = Adversary::new(AdversaryKind::parse("scripted:ab", &alphabet, None).unwrap());
        assert!(matches!(scr.next_move(&at(3), &w), Err(Error::Input(_))));
        assert_eq!(scr.next_move(&at(1), &w).unwrap(), Symbol::new(1));
    }

    #[test]
    fn adversary_refuses_our_turn() {
        let (_, w, h) = running("1/2", "1/2");
        let mut adv = Adversary::new(kind("greedy", &h));
        assert!(matches!(
            adv.next_move(&hist(&h, ""), &w),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn parse_errors() {
        let h = Arc::new(running_hard());
        for bad in [
            "",
            "bogus",
            "scripted:",
            "random:x",
            "greedy:soft",
            "policy:+9=+",
            "policy:+0",
        ] {
            assert!(
                AdversaryKind::parse(bad, h.alphabet(), Some(h.clone())).is_err(),
                "{bad}"
            );
        }
        assert!(AdversaryKind::parse("policy:*=+", h.alphabet(), None).is_err());
    }

    #[test]
    fn exact_distribution_against_away_from_zero() {
        let (c, w, h) = running("1/2", "1/2");
        let mut adv = Adversary::new(kind(AWAY_FROM_ZERO, &h));
        let d = exact_distribution(&c, &w, &mut adv).unwrap();
        let expect: BTreeMap<String, String> = [
            ("++-+", "1/2"),
            ("=-+-", "1/6"),
            ("=-=-", "1/6"),
            ("--+-", "1/6"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        assert_eq!(d.to_text_map(), expect);
        assert_eq!(d.total(), Rational::one());
    }

    #[test]
    fn exact_distribution_against_greedy() {
        let (c, w, h) = running("1/2", "1/2");
        let mut adv = Adversary::new(kind("greedy", &h));
        let d = exact_distribution(&c, &w, &mut adv).unwrap();
        let expect: BTreeMap<String, String> = [
            ("++-+", "1/2"),
            ("=+=+", "1/6"),
            ("=+-+", "1/6"),
            ("--++", "1/6"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        assert_eq!(d.to_text_map(), expect);
    }

    #[test]
    fn exact_distribution_rejects_random_and_tiny_limits() {
        let (c, w, h) = running("1/2", "1/2");
        let mut adv = Adversary::new(kind("random:3", &h));
        assert!(matches!(
            exact_distribution(&c, &w, &mut adv),
            Err(Error::Input(_))
        ));
        let mut adv = Adversary::new(kind("greedy", &h));
        assert!(matches!(
            exact_distribution_with_limit(&c, &w, &mut adv, 5),
            Err(Error::Size { .. })
        ));
    }

    #[test]
    fn forced_traces_match_worked_plays() {
        let (c, w, h) = running("1/2", "1/2");
        let mut adv = Adversary::new(kind(AWAY_FROM_ZERO, &h));
        let mut imp = Improviser::new(&c, &w).unwrap();
        imp.force(sym(&h, "+")).unwrap();
        let mut rng = episode_rng(0, 0);
        play_out(&mut imp, &w, &mut adv, &mut rng).unwrap();
        assert_eq!(h.alphabet().render(&imp.into_play()), "++-+");

        let mut imp = Improviser::new(&c, &w).unwrap();
        imp.force(sym(&h, "=")).unwrap();
        imp.observe(sym(&h, "=")).unwrap();
        imp.force(sym(&h, "+")).unwrap();
        play_out(
            &mut imp,
            &w,
            &mut Adversary::new(kind("scripted:===+", &h)),
            &mut rng,
        )
        .unwrap();
        let play = imp.into_play();
        assert_eq!(h.alphabet().render(&play), "==++");
        assert!(c.hard.accepts(&play));
    }

    #[test]
    fn unrealizable_instances_are_refused() {
        let (c, w, h) = running("1/2", "1/3");
        let mut rng = episode_rng(0, 0);
        let mut adv = Adversary::new(kind("greedy", &h));
        assert!(matches!(
            improvise_play(&c, &w, &mut adv, &mut rng),
            Err(Error::Contract(_))
        ));
        assert!(run_episodes(&c, &w, &kind("greedy", &h), 3, 0).is_err());
    }

    #[test]
    fn episodes_are_reproducible_and_sound() {
        let (c, w, h) = running("1/2", "1/2");
        for adv in ["greedy", "random:9", AWAY_FROM_ZERO, "cyclic:+-="] {
            let a = simulate_episodes(&c, &w, &kind(adv, &h), 500, 42, true).unwrap();
            let b = simulate_episodes(&c, &w, &kind(adv, &h), 500, 42, false).unwrap();
            assert_eq!(a, b);
            let stats = summarize(&c, &a, 42);
            assert_eq!(stats.hard_violations, 0);
            assert_eq!(stats.episodes, 500);
        }
    }

    #[test]
    fn zero_episodes() {
        let (c, w, h) = running("1/2", "1/2");
        let s = run_episodes(&c, &w, &kind("greedy", &h), 0, 7).unwrap();
        assert_eq!(s.episodes, 0);
        assert_eq!(s.max_play_frequency, Rational::zero());
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(
            json,
            r#"{"episodes":0,"hard_violations":0,"soft_hits":0,"max_play_frequency":"0/1","seed":7}"#
        );
    }

    struct Scripted(Vec<&'static str>, Vec<String>);

    impl ReplChannel for Scripted {
        fn read_line(&mut self, _prompt: &str) -> Result<Option<String>> {
            Ok(if self.0.is_empty() {
                None
            } else {
                Some(self.0.remove(0).to_string())
            })
        }
        fn report(&mut self, message: &str) -> Result<()> {
            self.1.push(message.to_string());
            Ok(())
        }
    }

    #[test]
    fn repl_reprompts_and_aborts() {
        let (_, w, h) = running("1/2", "1/2");
        let mut adv = Adversary::repl(Box::new(Scripted(vec!["x", "-", ""], vec![])));
        assert_eq!(adv.next_move(&hist(&h, "+"), &w).unwrap(), sym(&h, "-"));
        assert!(matches!(
            adv.next_move(&hist(&h, "+-+"), &w),
            Err(Error::Aborted)
        ));
    }
}
