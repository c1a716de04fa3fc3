//! Realizability and the improvising strategy.
//!
//! An instance is realizable iff `width(I) ≥ 1/ρ` and `width(A) ≥ (1-ε)/ρ`.
//! The strategy walks the game tree carrying two budgets, `m^A` and `m^I`:
//! how many admissible plays and how many improvisations it still intends to
//! keep possible. On each of our turns the budgets are split across symbols
//! by a greedy [`partition`] and a symbol is drawn with weight
//! `t_u = α·m^A_u + β·(m^I_u - m^A_u)`. Adversary moves leave the budgets
//! unchanged. Every reachable play then lands in `I`, has probability `α` or
//! `β` against a deterministic adversary, and the admissible mass is at least
//! `min(ρ·width(A), 1)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::RngCore;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::game::{Alphabet, History, RciInstance, Symbol, Turn, Word};
use crate::harness::Adversary;
use crate::rational::{format_rational, from_uint, recip_uint, Rational};

/// `width(X | h)` for one fixed set of plays `X ⊆ Σⁿ`.
pub trait WidthOracle: Send + Sync {
    fn alphabet(&self) -> &Alphabet;

    fn horizon(&self) -> usize;

    fn width(&self, history: &[Symbol]) -> Result<BigUint>;
}

/// Width oracles for the improvisations `I` and the admissible plays `A ⊆ I`.
#[derive(Clone)]
pub struct WidthOraclePair {
    pub hard: Arc<dyn WidthOracle>,
    pub admissible: Arc<dyn WidthOracle>,
}

impl WidthOraclePair {
    pub fn new(hard: Arc<dyn WidthOracle>, admissible: Arc<dyn WidthOracle>) -> Result<Self> {
        if hard.alphabet() != admissible.alphabet() {
            return Err(Error::input("width oracles disagree on the alphabet"));
        }
        if hard.horizon() != admissible.horizon() {
            return Err(Error::input(format!(
                "width oracles disagree on the horizon ({} vs {})",
                hard.horizon(),
                admissible.horizon()
            )));
        }
        Ok(WidthOraclePair { hard, admissible })
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.hard.alphabet()
    }

    pub fn horizon(&self) -> usize {
        self.hard.horizon()
    }

    pub fn width_i(&self, history: &[Symbol]) -> Result<BigUint> {
        self.hard.width(history)
    }

    pub fn width_a(&self, history: &[Symbol]) -> Result<BigUint> {
        self.admissible.width(history)
    }
}

impl fmt::Debug for WidthOraclePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WidthOraclePair")
            .field("alphabet", self.alphabet())
            .field("horizon", &self.horizon())
            .finish()
    }
}

/// A width as a JSON number while it fits in `u64`, else as a decimal string.
pub fn width_to_json(w: &BigUint) -> serde_json::Value {
    match u64::try_from(w) {
        Ok(v) => v.into(),
        Err(_) => w.to_string().into(),
    }
}

/// Serializes a width as a JSON number while it fits in `u128`, else as a string.
pub(crate) fn serialize_width<S: Serializer>(w: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match u128::try_from(w) {
        Ok(v) => s.serialize_u128(v),
        Err(_) => s.serialize_str(&w.to_string()),
    }
}

/// The least realizable ρ for a given ε, or unbounded when none exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RhoBound {
    Finite(Rational),
    Unbounded,
}

impl fmt::Display for RhoBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhoBound::Finite(r) => f.write_str(&format_rational(r)),
            RhoBound::Unbounded => f.write_str("inf"),
        }
    }
}

impl Serialize for RhoBound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizabilityReport {
    pub realizable: bool,
    #[serde(rename = "width_I", serialize_with = "serialize_width")]
    pub width_i: BigUint,
    #[serde(rename = "width_A", serialize_with = "serialize_width")]
    pub width_a: BigUint,
    #[serde(with = "crate::rational")]
    pub epsilon_opt: Rational,
    pub rho_min: RhoBound,
}

/// Decides realizability from the root widths with exact comparisons.
pub fn realizability_from_widths(
    width_i: &BigUint,
    width_a: &BigUint,
    epsilon: &Rational,
    rho: &Rational,
) -> RealizabilityReport {
    let wi = from_uint(width_i);
    let wa = from_uint(width_a);
    let one = Rational::one();
    let epsilon_opt = (&one - rho * &wa).max(Rational::zero());
    let realizable = rho * &wi >= one && epsilon >= &epsilon_opt;
    let soft_need = &one - epsilon;
    let rho_min = if width_i.is_zero() {
        RhoBound::Unbounded
    } else if width_a.is_zero() {
        if soft_need > Rational::zero() {
            RhoBound::Unbounded
        } else {
            RhoBound::Finite(recip_uint(width_i))
        }
    } else {
        RhoBound::Finite(recip_uint(width_i).max(soft_need / wa))
    };
    RealizabilityReport {
        realizable,
        width_i: width_i.clone(),
        width_a: width_a.clone(),
        epsilon_opt,
        rho_min,
    }
}

pub fn check_realizability(
    instance: &RciInstance,
    oracles: &WidthOraclePair,
) -> Result<RealizabilityReport> {
    let wi = oracles.width_i(&[])?;
    let wa = oracles.width_a(&[])?;
    Ok(realizability_from_widths(
        &wi,
        &wa,
        &instance.epsilon,
        &instance.rho,
    ))
}

/// The per-play probabilities `α` (admissible) and `β` (other improvisations).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImproviserParams {
    #[serde(with = "crate::rational")]
    pub alpha: Rational,
    #[serde(with = "crate::rational")]
    pub beta: Rational,
}

pub fn compute_params(
    width_a: &BigUint,
    width_i: &BigUint,
    rho: &Rational,
) -> Result<ImproviserParams> {
    if rho * from_uint(width_i) < Rational::one() {
        return Err(Error::contract(format!(
            "width(I) = {width_i} is below 1/rho = {}",
            format_rational(&rho.recip())
        )));
    }
    if width_a > width_i {
        return Err(Error::contract(format!(
            "width(A) = {width_a} exceeds width(I) = {width_i}"
        )));
    }
    let alpha = if width_a.is_zero() {
        Rational::zero()
    } else {
        rho.clone().min(recip_uint(width_a))
    };
    let beta = if width_i == width_a {
        Rational::zero()
    } else {
        (Rational::one() - &alpha * from_uint(width_a)) / from_uint(&(width_i - width_a))
    };
    let params = ImproviserParams { alpha, beta };
    let total = &params.alpha * from_uint(width_a) + &params.beta * from_uint(&(width_i - width_a));
    if total != Rational::one() {
        return Err(Error::invariant(format!(
            "initial weight is {} instead of 1",
            format_rational(&total)
        )));
    }
    if params.alpha > *rho || params.beta > *rho {
        return Err(Error::invariant("alpha or beta exceeds rho"));
    }
    Ok(params)
}

/// Per-symbol budgets `(m^A_u, m^I_u)` in alphabet order.
pub type Parts = Vec<(BigUint, BigUint)>;

/// Greedy split given the children's widths: fill `m^A` from the front using
/// `width(A | hu)`, then fill `m^I - m^A` using `width(I | hu) - m^A_u`.
pub fn partition_with_widths(
    m_a: &BigUint,
    m_i: &BigUint,
    child_a: &[BigUint],
    child_i: &[BigUint],
) -> Result<Parts> {
    if child_a.len() != child_i.len() {
        return Err(Error::contract("child width vectors differ in length"));
    }
    if let Some(j) = (0..child_a.len()).find(|&j| child_a[j] > child_i[j]) {
        return Err(Error::contract(format!(
            "width(A|hu) > width(I|hu) for symbol #{j}"
        )));
    }
    let total_a: BigUint = child_a.iter().sum();
    let total_i: BigUint = child_i.iter().sum();
    if m_a > m_i {
        return Err(Error::contract(format!("m^A = {m_a} exceeds m^I = {m_i}")));
    }
    if m_i > &total_i {
        return Err(Error::contract(format!(
            "m^I = {m_i} exceeds width(I|h) = {total_i}"
        )));
    }
    if m_a > &total_a {
        return Err(Error::contract(format!(
            "m^A = {m_a} exceeds width(A|h) = {total_a}"
        )));
    }

    let take_greedy = |budget: &BigUint, caps: &mut dyn Iterator<Item = BigUint>| -> Vec<BigUint> {
        let mut left = budget.clone();
        caps.map(|cap| {
            let part = if cap <= left { cap } else { left.clone() };
            left -= &part;
            part
        })
        .collect()
    };
    let parts_a = take_greedy(m_a, &mut child_a.iter().cloned());
    let mut diffs = child_i.iter().zip(&parts_a).map(|(wi, pa)| wi - pa);
    let extra = take_greedy(&(m_i - m_a), &mut diffs);
    Ok(parts_a
        .into_iter()
        .zip(extra)
        .map(|(pa, d)| {
            let pi = &pa + d;
            (pa, pi)
        })
        .collect())
}

/// Splits the budgets at history `h` (our turn) across the symbols.
pub fn partition(
    m_a: &BigUint,
    m_i: &BigUint,
    history: &History,
    oracles: &WidthOraclePair,
) -> Result<Parts> {
    if history.turn() != Turn::Ours {
        return Err(Error::contract(format!(
            "partition needs our turn, history of length {} is {:?}",
            history.len(),
            history.turn()
        )));
    }
    let (child_a, child_i) = child_widths(history, oracles)?;
    partition_with_widths(m_a, m_i, &child_a, &child_i)
}

fn child_widths(
    history: &History,
    oracles: &WidthOraclePair,
) -> Result<(Vec<BigUint>, Vec<BigUint>)> {
    let mut buf: Vec<Symbol> = history.symbols().to_vec();
    let mut child_a = Vec::with_capacity(oracles.alphabet().len());
    let mut child_i = Vec::with_capacity(oracles.alphabet().len());
    for u in oracles.alphabet().symbols() {
        buf.push(u);
        child_a.push(oracles.width_a(&buf)?);
        child_i.push(oracles.width_i(&buf)?);
        buf.pop();
    }
    Ok((child_a, child_i))
}

/// Runtime state of the strategy: parameters, the two budgets, the history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImproviserState {
    pub params: ImproviserParams,
    pub m_a: BigUint,
    pub m_i: BigUint,
    pub history: History,
}

impl ImproviserState {
    /// `t(h) = α·m^A + β·(m^I - m^A)`.
    pub fn weight(&self) -> Rational {
        weight(&self.params, &self.m_a, &self.m_i)
    }
}

fn weight(params: &ImproviserParams, m_a: &BigUint, m_i: &BigUint) -> Rational {
    &params.alpha * from_uint(m_a) + &params.beta * from_uint(&(m_i - m_a))
}

/// Unnormalized move weights at one of our turns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepWeights {
    pub parts: Parts,
    pub weights: Vec<Rational>,
    pub total: Rational,
}

impl StepWeights {
    /// `t_u / t(h)` for every symbol.
    pub fn probabilities(&self) -> Vec<Rational> {
        self.weights.iter().map(|w| w / &self.total).collect()
    }

    /// Draws a symbol with probability exactly `t_u / t(h)`. All weights are
    /// scaled to integers over a common denominator and a uniform integer
    /// below their sum selects by cumulative sums.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Symbol {
        let lcm = self
            .weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let scaled: Vec<BigUint> = self
            .weights
            .iter()
            .map(|w| {
                (w.numer() * (&lcm / w.denom()))
                    .to_biguint()
                    .expect("weights are non-negative")
            })
            .collect();
        let sum: BigUint = scaled.iter().sum();
        let mut draw = rng.gen_biguint_below(&sum);
        for (j, w) in scaled.iter().enumerate() {
            if &draw < w {
                return Symbol::new(j);
            }
            draw -= w;
        }
        unreachable!("draw is below the sum of the weights")
    }
}

pub fn step_weights(state: &ImproviserState, oracles: &WidthOraclePair) -> Result<StepWeights> {
    let parts = partition(&state.m_a, &state.m_i, &state.history, oracles).map_err(as_invariant)?;
    let weights: Vec<Rational> = parts
        .iter()
        .map(|(pa, pi)| weight(&state.params, pa, pi))
        .collect();
    let total: Rational = weights.iter().sum();
    if total.is_zero() {
        return Err(Error::invariant(format!(
            "all move weights are zero after history of length {}",
            state.history.len()
        )));
    }
    if total != state.weight() {
        return Err(Error::invariant("move weights do not sum to t(h)"));
    }
    Ok(StepWeights {
        parts,
        weights,
        total,
    })
}

fn as_invariant(e: Error) -> Error {
    match e {
        Error::Contract(msg) => Error::Invariant(msg),
        other => other,
    }
}

/// A single-owner session of the strategy. Drive it with [`Improviser::choose`]
/// (or [`Improviser::force`]) on our turns and [`Improviser::observe`] on the
/// adversary's.
pub struct Improviser<'a> {
    oracles: &'a WidthOraclePair,
    state: ImproviserState,
    checked: bool,
}

impl<'a> Improviser<'a> {
    /// Fails with a contract error when the instance is not realizable.
    pub fn new(instance: &RciInstance, oracles: &'a WidthOraclePair) -> Result<Self> {
        let report = check_realizability(instance, oracles)?;
        if !report.realizable {
            return Err(Error::contract(format!(
                "instance is not realizable (width_I = {}, width_A = {}, epsilon_opt = {})",
                report.width_i,
                report.width_a,
                format_rational(&report.epsilon_opt)
            )));
        }
        let params = compute_params(&report.width_a, &report.width_i, &instance.rho)?;
        Ok(Self::with_params(
            params,
            report.width_a,
            report.width_i,
            oracles,
        ))
    }

    pub fn with_params(
        params: ImproviserParams,
        width_a: BigUint,
        width_i: BigUint,
        oracles: &'a WidthOraclePair,
    ) -> Self {
        Improviser {
            oracles,
            state: ImproviserState {
                params,
                m_a: width_a,
                m_i: width_i,
                history: History::new(oracles.horizon()),
            },
            checked: false,
        }
    }

    /// When set, the budget invariants are re-verified against the width
    /// oracles after every move.
    pub fn set_checked(&mut self, checked: bool) {
        self.checked = checked;
    }

    pub fn state(&self) -> &ImproviserState {
        &self.state
    }

    pub fn history(&self) -> &History {
        &self.state.history
    }

    pub fn turn(&self) -> Turn {
        self.state.history.turn()
    }

    pub fn is_over(&self) -> bool {
        self.turn() == Turn::Ended
    }

    pub fn weights(&self) -> Result<StepWeights> {
        step_weights(&self.state, self.oracles)
    }

    /// Samples and plays our move.
    pub fn choose<R: RngCore + ?Sized>(&mut self, rng: &mut R) -> Result<Symbol> {
        let weights = self.weights()?;
        let u = weights.sample(rng);
        self.apply_ours(u, &weights)?;
        Ok(u)
    }

    /// Plays a specific move of ours; it must have positive weight.
    pub fn force(&mut self, u: Symbol) -> Result<()> {
        if !self.oracles.alphabet().contains(u) {
            return Err(Error::input(format!(
                "symbol index {} is outside the alphabet",
                u.index()
            )));
        }
        let weights = self.weights()?;
        if weights.weights[u.index()].is_zero() {
            return Err(Error::contract(format!(
                "move {:?} has probability zero here",
                self.oracles.alphabet().name(u)
            )));
        }
        self.apply_ours(u, &weights)
    }

    fn apply_ours(&mut self, u: Symbol, weights: &StepWeights) -> Result<()> {
        let (pa, pi) = weights.parts[u.index()].clone();
        self.state.history.push(u)?;
        self.state.m_a = pa;
        self.state.m_i = pi;
        self.after_move()
    }

    /// Records the adversary's move; the budgets carry over unchanged.
    pub fn observe(&mut self, u: Symbol) -> Result<()> {
        if self.turn() != Turn::Adversary {
            return Err(Error::contract(
                "observe called when it is not the adversary's turn",
            ));
        }
        if !self.oracles.alphabet().contains(u) {
            return Err(Error::input(format!(
                "adversary move index {} is outside the alphabet",
                u.index()
            )));
        }
        self.state.history.push(u)?;
        self.after_move()
    }

    fn after_move(&self) -> Result<()> {
        if self.state.m_i.is_zero() {
            return Err(Error::invariant("m^I reached zero on a reachable history"));
        }
        if self.checked {
            self.check_invariants()?;
        }
        Ok(())
    }

    /// `0 ≤ m^A ≤ m^I ≤ width(I|h)`, `m^A ≤ width(A|h)` and `m^I > 0`.
    pub fn check_invariants(&self) -> Result<()> {
        let h = self.state.history.symbols();
        let (m_a, m_i) = (&self.state.m_a, &self.state.m_i);
        let wi = self.oracles.width_i(h)?;
        let wa = self.oracles.width_a(h)?;
        let fail = |what: &str| {
            Err(Error::invariant(format!(
                "{what} after history of length {} (m^A = {m_a}, m^I = {m_i}, width_A = {wa}, width_I = {wi})",
                h.len()
            )))
        };
        if m_a > m_i {
            return fail("m^A > m^I");
        }
        if m_i > &wi {
            return fail("m^I > width(I|h)");
        }
        if m_a > &wa {
            return fail("m^A > width(A|h)");
        }
        if m_i.is_zero() {
            return fail("m^I = 0");
        }
        Ok(())
    }

    pub fn into_play(self) -> Word {
        self.state.history.word().clone()
    }
}

/// Runs one whole game of the strategy against `adversary`.
pub fn improvise_play<R: RngCore + ?Sized>(
    instance: &RciInstance,
    oracles: &WidthOraclePair,
    adversary: &mut Adversary,
    rng: &mut R,
) -> Result<Word> {
    let mut imp = Improviser::new(instance, oracles)?;
    play_out(&mut imp, oracles, adversary, rng)?;
    Ok(imp.into_play())
}

/// Finishes the game from the session's current history.
pub fn play_out<R: RngCore + ?Sized>(
    imp: &mut Improviser<'_>,
    oracles: &WidthOraclePair,
    adversary: &mut Adversary,
    rng: &mut R,
) -> Result<()> {
    loop {
        match imp.turn() {
            Turn::Ended => return Ok(()),
            Turn::Ours => {
                imp.choose(rng)?;
            }
            Turn::Adversary => {
                let u = adversary.next_move(imp.history(), oracles)?;
                imp.observe(u)?;
            }
        }
    }
}

/// `t_u / t(h)` with `t(h)` as a plain rational, for display.
pub fn normalized(weights: &StepWeights) -> Vec<BigRational> {
    weights.probabilities()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::tests::{running_hard, running_soft};
    use crate::automata::{dfa_product, WidthTable};
    use num_traits::ToPrimitive;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(p: i64, d: i64) -> Rational {
        BigRational::new(p.into(), d.into())
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    pub(crate) fn running_oracles() -> WidthOraclePair {
        let h = Arc::new(running_hard());
        let a = Arc::new(dfa_product(&h, &running_soft()).unwrap());
        WidthOraclePair::new(
            Arc::new(WidthTable::build(h, 4)),
            Arc::new(WidthTable::build(a, 4)),
        )
        .unwrap()
    }

    fn hist(w: &WidthOraclePair, s: &str) -> History {
        History::from_word(w.alphabet().parse_word(s).unwrap(), w.horizon()).unwrap()
    }

    #[test]
    fn realizability_examples() {
        let r = realizability_from_widths(&big(4), &big(1), &q(1, 2), &q(1, 2));
        assert!(r.realizable);
        assert_eq!(r.epsilon_opt, q(1, 2));
        assert_eq!(r.rho_min, RhoBound::Finite(q(1, 2)));
        let r = realizability_from_widths(&big(4), &big(1), &q(1, 2), &q(1, 3));
        assert!(!r.realizable);
        assert_eq!(r.epsilon_opt, q(2, 3));
        let r = realizability_from_widths(&big(3), &big(2), &q(1, 3), &q(1, 3));
        assert!(r.realizable);
        assert_eq!(r.epsilon_opt, q(1, 3));
    }

    #[test]
    fn rho_min_markers() {
        let r = realizability_from_widths(&big(0), &big(0), &q(1, 2), &q(1, 2));
        assert_eq!(r.rho_min, RhoBound::Unbounded);
        assert!(!r.realizable);
        let r = realizability_from_widths(&big(5), &big(0), &q(1, 2), &q(1, 2));
        assert_eq!(r.rho_min, RhoBound::Unbounded);
        let r = realizability_from_widths(&big(5), &big(0), &q(1, 1), &q(1, 2));
        assert_eq!(r.rho_min, RhoBound::Finite(q(1, 5)));
        assert!(r.realizable);
        let r = realizability_from_widths(&big(10), &big(2), &q(1, 2), &q(1, 2));
        assert_eq!(r.rho_min, RhoBound::Finite(q(1, 4)));
    }

    #[test]
    fn params_examples() {
        let p = compute_params(&big(1), &big(4), &q(1, 2)).unwrap();
        assert_eq!((p.alpha, p.beta), (q(1, 2), q(1, 6)));
        let p = compute_params(&big(0), &big(5), &q(1, 5)).unwrap();
        assert_eq!((p.alpha, p.beta), (q(0, 1), q(1, 5)));
        let p = compute_params(&big(3), &big(3), &q(1, 2)).unwrap();
        assert_eq!((p.alpha, p.beta), (q(1, 3), q(0, 1)));
        assert!(matches!(
            compute_params(&big(1), &big(2), &q(1, 3)),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn partition_examples() {
        let w = running_oracles();
        let parts = partition(&big(1), &big(4), &hist(&w, ""), &w).unwrap();
        assert_eq!(
            parts,
            vec![(big(1), big(1)), (big(0), big(2)), (big(0), big(1))]
        );
        let parts = partition(&big(0), &big(2), &hist(&w, "=="), &w).unwrap();
        assert_eq!(
            parts,
            vec![(big(0), big(1)), (big(0), big(1)), (big(0), big(0))]
        );
        let parts = partition(&big(0), &big(0), &hist(&w, "+-"), &w).unwrap();
        assert!(parts.iter().all(|(a, i)| a.is_zero() && i.is_zero()));
    }

    #[test]
    fn partition_names_the_violated_inequality() {
        let w = running_oracles();
        match partition(&big(2), &big(4), &hist(&w, ""), &w) {
            Err(Error::Contract(msg)) => assert!(msg.contains("width(A|h)"), "{msg}"),
            other => panic!("{other:?}"),
        }
        match partition(&big(0), &big(5), &hist(&w, ""), &w) {
            Err(Error::Contract(msg)) => assert!(msg.contains("width(I|h)"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(partition(&big(0), &big(1), &hist(&w, "+"), &w).is_err());
    }

    #[test]
    fn weights_examples() {
        let w = running_oracles();
        let params = compute_params(&big(1), &big(4), &q(1, 2)).unwrap();
        let state = ImproviserState {
            params: params.clone(),
            m_a: big(1),
            m_i: big(4),
            history: hist(&w, ""),
        };
        let sw = step_weights(&state, &w).unwrap();
        assert_eq!(sw.weights, vec![q(1, 2), q(1, 3), q(1, 6)]);
        assert_eq!(sw.total, q(1, 1));
        let state = ImproviserState {
            params,
            m_a: big(0),
            m_i: big(2),
            history: hist(&w, "=="),
        };
        let sw = step_weights(&state, &w).unwrap();
        assert_eq!(sw.weights, vec![q(1, 6), q(1, 6), q(0, 1)]);
        assert_eq!(sw.probabilities(), vec![q(1, 2), q(1, 2), q(0, 1)]);
    }

    #[test]
    fn beta_vanishes_when_budgets_match() {
        let w = running_oracles();
        let params = ImproviserParams {
            alpha: q(1, 2),
            beta: q(7, 9),
        };
        let state = ImproviserState {
            params,
            m_a: big(1),
            m_i: big(1),
            history: hist(&w, ""),
        };
        let sw = step_weights(&state, &w).unwrap();
        for (j, (pa, _)) in sw.parts.iter().enumerate() {
            assert_eq!(sw.weights[j], q(1, 2) * from_uint(pa));
        }
    }

    #[test]
    fn sampling_is_reproducible_and_respects_zero_weights() {
        let sw = StepWeights {
            parts: vec![],
            weights: vec![q(1, 6), q(0, 1), q(1, 3)],
            total: q(1, 2),
        };
        let mut counts = [0u32; 3];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30_000 {
            counts[sw.sample(&mut rng).index()] += 1;
        }
        assert_eq!(counts[1], 0);
        let frac = counts[0] as f64 / 30_000.0;
        // p = 1/3, sd ≈ 0.0027
        assert!((frac - 1.0 / 3.0).abs() < 0.012, "{frac}");
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<_> = (0..50).map(|_| sw.sample(&mut a)).collect();
        let ys: Vec<_> = (0..50).map(|_| sw.sample(&mut b)).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn forced_moves_follow_the_worked_trace() {
        let w = running_oracles();
        let params = compute_params(&big(1), &big(4), &q(1, 2)).unwrap();
        let mut imp = Improviser::with_params(params, big(1), big(4), &w);
        imp.set_checked(true);
        let sym = |s: &str| w.alphabet().symbol(s).unwrap();
        imp.force(sym("=")).unwrap();
        assert_eq!(
            (imp.state().m_a.to_u32(), imp.state().m_i.to_u32()),
            (Some(0), Some(2))
        );
        imp.observe(sym("=")).unwrap();
        assert!(imp.force(sym("-")).is_err());
        imp.force(sym("+")).unwrap();
        imp.observe(sym("+")).unwrap();
        assert!(imp.is_over());
        assert_eq!(w.alphabet().render(&imp.into_play()), "==++");
    }

    proptest! {
        #[test]
        fn partition_conserves_and_caps(
            kids in proptest::collection::vec((0u64..6, 0u64..6), 1..5),
            fa in 0.0f64..=1.0, fi in 0.0f64..=1.0,
        ) {
            let child_a: Vec<BigUint> = kids.iter().map(|&(a, _)| big(a)).collect();
            let child_i: Vec<BigUint> = kids.iter().map(|&(a, d)| big(a + d)).collect();
            let total_a: u64 = kids.iter().map(|k| k.0).sum();
            let total_i: u64 = kids.iter().map(|k| k.0 + k.1).sum();
            let m_a = (fa * total_a as f64).floor() as u64;
            let m_i = m_a + (fi * (total_i - m_a) as f64).floor() as u64;
            let parts = partition_with_widths(&big(m_a), &big(m_i), &child_a, &child_i).unwrap();
            let sum_a: BigUint = parts.iter().map(|p| &p.0).sum();
            let sum_i: BigUint = parts.iter().map(|p| &p.1).sum();
            prop_assert_eq!(sum_a, big(m_a));
            prop_assert_eq!(sum_i, big(m_i));
            for (j, (pa, pi)) in parts.iter().enumerate() {
                prop_assert!(pa <= pi);
                prop_assert!(pi <= &child_i[j]);
                prop_assert!(pa <= &child_a[j]);
            }
        }

        #[test]
        fn params_never_exceed_rho(wa in 0u64..20, extra in 0u64..20, den in 1u64..40) {
            let wi = wa + extra;
            let rho = q(1, den as i64);
            prop_assume!(wi >= den);
            let p = compute_params(&big(wa), &big(wi), &rho).unwrap();
            prop_assert!(p.alpha <= rho && p.beta <= rho);
            prop_assert!(p.alpha >= Rational::zero() && p.beta >= Rational::zero());
        }
    }
}
