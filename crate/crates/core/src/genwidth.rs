//! Width of a black-box specification from membership tests alone.
//!
//! The recursion keeps one path of the game tree alive at a time, so memory
//! is linear in `n - |h|` while time is `|Σ|^(n-|h|)` membership calls.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::game::{turn_at, Alphabet, Spec, Symbol, Turn};
use crate::improviser::WidthOracle;

/// Accepts a length-`n` word iff every member spec accepts it.
#[derive(Clone)]
pub struct MembershipOracle {
    alphabet: Alphabet,
    horizon: usize,
    specs: Vec<Arc<dyn Spec>>,
}

impl MembershipOracle {
    pub fn new(spec: Arc<dyn Spec>, horizon: usize) -> Self {
        MembershipOracle {
            alphabet: spec.alphabet().clone(),
            horizon,
            specs: vec![spec],
        }
    }

    /// The oracle for `X ∩ Y`.
    pub fn intersect(&self, other: &MembershipOracle) -> Result<Self> {
        if self.alphabet != other.alphabet {
            return Err(Error::input(
                "cannot intersect oracles over different alphabets",
            ));
        }
        if self.horizon != other.horizon {
            return Err(Error::input(
                "cannot intersect oracles with different horizons",
            ));
        }
        let mut specs = self.specs.clone();
        specs.extend(other.specs.iter().cloned());
        Ok(MembershipOracle {
            alphabet: self.alphabet.clone(),
            horizon: self.horizon,
            specs,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        word.len() == self.horizon && self.specs.iter().all(|s| s.accepts(word))
    }
}

impl fmt::Debug for MembershipOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MembershipOracle")
            .field("alphabet", &self.alphabet)
            .field("horizon", &self.horizon)
            .field("specs", &self.specs)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WidthConfig {
    /// Stop an adversary node early once some child has width 0.
    pub short_circuit: bool,
    /// Maximum number of memoized histories; 0 disables the cache.
    pub cache_capacity: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WidthStats {
    pub membership_calls: u64,
    pub max_depth: usize,
}

pub fn generic_width(oracle: &MembershipOracle, history: &[Symbol]) -> Result<BigUint> {
    let mut stats = WidthStats::default();
    generic_width_with(oracle, history, WidthConfig::default(), &mut stats)
}

/// As [`generic_width`], recording membership calls and recursion depth.
/// Only `short_circuit` of the config applies here; caching lives in [`GenericWidth`].
pub fn generic_width_with(
    oracle: &MembershipOracle,
    history: &[Symbol],
    config: WidthConfig,
    stats: &mut WidthStats,
) -> Result<BigUint> {
    check_history(oracle, history)?;
    let mut buf = history.to_vec();
    Ok(recurse(
        oracle,
        &mut buf,
        0,
        config,
        stats,
        &mut |_, _| None,
        &mut |_, _| {},
    ))
}

fn check_history(oracle: &MembershipOracle, history: &[Symbol]) -> Result<()> {
    if history.len() > oracle.horizon {
        return Err(Error::contract(format!(
            "history of length {} exceeds horizon {}",
            history.len(),
            oracle.horizon
        )));
    }
    if let Some(u) = history.iter().find(|u| !oracle.alphabet.contains(**u)) {
        return Err(Error::input(format!(
            "symbol index {} is outside the alphabet",
            u.index()
        )));
    }
    Ok(())
}

type Lookup<'a> = dyn FnMut(&[Symbol], usize) -> Option<BigUint> + 'a;
type Store<'a> = dyn FnMut(&[Symbol], &BigUint) + 'a;

fn recurse(
    oracle: &MembershipOracle,
    buf: &mut Vec<Symbol>,
    depth: usize,
    config: WidthConfig,
    stats: &mut WidthStats,
    lookup: &mut Lookup<'_>,
    store: &mut Store<'_>,
) -> BigUint {
    stats.max_depth = stats.max_depth.max(depth);
    let turn = turn_at(buf.len(), oracle.horizon);
    if turn == Turn::Ended {
        stats.membership_calls += 1;
        return BigUint::from(oracle.accepts(buf) as u8);
    }
    if let Some(hit) = lookup(buf, depth) {
        return hit;
    }
    let mut acc: Option<BigUint> = None;
    for u in oracle.alphabet.symbols() {
        buf.push(u);
        let w = recurse(oracle, buf, depth + 1, config, stats, lookup, store);
        buf.pop();
        acc = Some(match (acc, turn) {
            (None, _) => w,
            (Some(a), Turn::Ours) => a + w,
            (Some(a), _) => a.min(w),
        });
        if turn == Turn::Adversary
            && config.short_circuit
            && acc.as_ref().is_some_and(Zero::is_zero)
        {
            break;
        }
    }
    let value = acc.unwrap_or_default();
    store(buf, &value);
    value
}

/// A [`WidthOracle`] backed by membership tests, with an optional bounded memo.
pub struct GenericWidth {
    oracle: MembershipOracle,
    config: WidthConfig,
    cache: Mutex<HashMap<Vec<Symbol>, BigUint>>,
}

impl GenericWidth {
    pub fn new(oracle: MembershipOracle) -> Self {
        Self::with_config(oracle, WidthConfig::default())
    }

    pub fn with_config(oracle: MembershipOracle, config: WidthConfig) -> Self {
        GenericWidth {
            oracle,
            config,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn oracle(&self) -> &MembershipOracle {
        &self.oracle
    }

    pub fn width_with_stats(&self, history: &[Symbol], stats: &mut WidthStats) -> Result<BigUint> {
        check_history(&self.oracle, history)?;
        let mut buf = history.to_vec();
        if self.config.cache_capacity == 0 {
            return Ok(recurse(
                &self.oracle,
                &mut buf,
                0,
                self.config,
                stats,
                &mut |_, _| None,
                &mut |_, _| {},
            ));
        }
        let cap = self.config.cache_capacity;
        let cache = &self.cache;
        let mut lookup = |h: &[Symbol], _: usize| cache.lock().ok()?.get(h).cloned();
        let mut store = |h: &[Symbol], v: &BigUint| {
            if let Ok(mut c) = cache.lock() {
                if c.len() < cap {
                    c.insert(h.to_vec(), v.clone());
                }
            }
        };
        Ok(recurse(
            &self.oracle,
            &mut buf,
            0,
            self.config,
            stats,
            &mut lookup,
            &mut store,
        ))
    }
}

impl WidthOracle for GenericWidth {
    fn alphabet(&self) -> &Alphabet {
        self.oracle.alphabet()
    }

    fn horizon(&self) -> usize {
        self.oracle.horizon()
    }

    fn width(&self, history: &[Symbol]) -> Result<BigUint> {
        self.width_with_stats(history, &mut WidthStats::default())
    }
}

impl fmt::Debug for GenericWidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GenericWidth")
            .field("oracle", &self.oracle)
            .field("config", &self.config)
            .finish()
    }
}
