//! Instance files and width-backend selection.
//!
//! ```json
//! {"alphabet": ["+", "=", "-"], "hard": "hard.json", "soft": {...},
//!  "n": 4, "epsilon": "1/2", "rho": "1/2"}
//! ```
//!
//! A spec reference is a path (relative to the instance file) or an inline
//! object: a DFA, `{"type": "ltlf", "formula": "...", "props": [...]}` or
//! `{"type": "universal"}`. `alphabet` may be omitted when the hard spec
//! determines it.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::automata::{dfa_product, Dfa, DfaFile, WidthTable};
use crate::error::{Error, Result};
use crate::game::{validate_instance, Alphabet, RciInstance, Spec, DEFAULT_MAX_HORIZON};
use crate::games::SpecPair;
use crate::genwidth::{GenericWidth, MembershipOracle};
use crate::improviser::WidthOraclePair;
use crate::ltlf::{parse_ltlf, LtlfSpec};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Backend {
    /// DFA table when both specs are DFAs, membership recursion otherwise.
    #[default]
    Auto,
    Table,
    Generic,
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Backend::Auto),
            "table" | "dfa" => Ok(Backend::Table),
            "generic" => Ok(Backend::Generic),
            _ => Err(Error::input(format!(
                "unknown backend {s:?}; expected auto, table or generic"
            ))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Auto => "auto",
            Backend::Table => "table",
            Backend::Generic => "generic",
        })
    }
}

/// The on-disk instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<String>>,
    pub hard: Value,
    pub soft: Value,
    pub n: usize,
    #[serde(with = "crate::rational")]
    pub epsilon: Rational,
    #[serde(with = "crate::rational")]
    pub rho: Rational,
}

impl InstanceFile {
    /// An instance with both automata inlined.
    pub fn from_pair(pair: &SpecPair, n: usize, epsilon: Rational, rho: Rational) -> Result<Self> {
        Ok(InstanceFile {
            alphabet: Some(pair.hard.alphabet().names().to_vec()),
            hard: serde_json::to_value(pair.hard.to_file())?,
            soft: serde_json::to_value(pair.soft.to_file())?,
            n,
            epsilon,
            rho,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// A loaded instance, keeping the explicit automata when there are any.
#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub instance: RciInstance,
    pub hard_dfa: Option<Arc<Dfa>>,
    pub soft_dfa: Option<Arc<Dfa>>,
}

enum Loaded {
    Dfa(Arc<Dfa>),
    Other(Arc<dyn Spec>),
    Universal,
}

fn load_spec(value: &Value, base: &Path, depth: usize) -> Result<Loaded> {
    match value {
        Value::String(rel) => {
            if depth > 4 {
                return Err(Error::input("spec references nest too deeply"));
            }
            let path = base.join(rel);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::input(format!("cannot read spec {}: {e}", path.display())))?;
            let inner: Value = serde_json::from_str(&text).map_err(|e| {
                Error::input(format!("spec {} is not valid JSON: {e}", path.display()))
            })?;
            let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
            load_spec(&inner, &dir, depth + 1)
        }
        Value::Object(map) => match map.get("type").and_then(Value::as_str) {
            Some("universal") => Ok(Loaded::Universal),
            Some("ltlf") => {
                #[derive(Deserialize)]
                struct LtlfRef {
                    formula: String,
                    props: Vec<String>,
                }
                let r: LtlfRef = serde_json::from_value(value.clone())?;
                let f = parse_ltlf(&r.formula, &r.props)?;
                Ok(Loaded::Other(Arc::new(LtlfSpec::new(f)?)))
            }
            None | Some("dfa") => {
                let file: DfaFile = serde_json::from_value(value.clone())?;
                Ok(Loaded::Dfa(Arc::new(file.into_dfa()?)))
            }
            Some(other) => Err(Error::input(format!("unknown spec type {other:?}"))),
        },
        _ => Err(Error::input("a spec must be a path or an object")),
    }
}

impl LoadedInstance {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::input(format!("cannot read instance {}: {e}", path.display())))?;
        let base = path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(PathBuf::new);
        Self::from_json(&text, &base)
    }

    pub fn from_json(text: &str, base: &Path) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)
            .map_err(|e| Error::input(format!("malformed instance: {e}")))?;
        Self::from_file(file, base)
    }

    pub fn from_file(file: InstanceFile, base: &Path) -> Result<Self> {
        let hard = load_spec(&file.hard, base, 0)?;
        let soft = load_spec(&file.soft, base, 0)?;
        let alphabet = match (&file.alphabet, &hard) {
            (Some(names), _) => Alphabet::new(names.iter().cloned())?,
            (None, Loaded::Dfa(d)) => d.alphabet().clone(),
            (None, Loaded::Other(s)) => s.alphabet().clone(),
            (None, Loaded::Universal) => match &soft {
                Loaded::Dfa(d) => d.alphabet().clone(),
                Loaded::Other(s) => s.alphabet().clone(),
                Loaded::Universal => return Err(Error::input("instance needs an alphabet")),
            },
        };
        let resolve = |l: Loaded| -> (Arc<dyn Spec>, Option<Arc<Dfa>>) {
            match l {
                Loaded::Dfa(d) => (d.clone(), Some(d)),
                Loaded::Other(s) => (s, None),
                Loaded::Universal => {
                    let d = Arc::new(Dfa::universal(alphabet.clone()));
                    (d.clone(), Some(d))
                }
            }
        };
        let (hard, hard_dfa) = resolve(hard);
        let (soft, soft_dfa) = resolve(soft);
        let instance = RciInstance {
            alphabet,
            hard,
            soft,
            horizon: file.n,
            epsilon: file.epsilon,
            rho: file.rho,
        };
        let report = validate_instance(&instance, DEFAULT_MAX_HORIZON);
        if !report.is_valid() {
            let issues: Vec<String> = report.issues.iter().map(ToString::to_string).collect();
            return Err(Error::input(format!(
                "invalid instance: {}",
                issues.join("; ")
            )));
        }
        Ok(LoadedInstance {
            instance,
            hard_dfa,
            soft_dfa,
        })
    }

    /// Width oracles for `I` and `A` on the chosen backend.
    pub fn oracles(&self, backend: Backend) -> Result<WidthOraclePair> {
        let n = self.instance.horizon;
        let dfas = self.hard_dfa.as_ref().zip(self.soft_dfa.as_ref());
        match (backend, dfas) {
            (Backend::Table | Backend::Auto, Some((h, s))) => {
                let a = Arc::new(dfa_product(h, s)?);
                WidthOraclePair::new(
                    Arc::new(WidthTable::build(h.clone(), n)),
                    Arc::new(WidthTable::build(a, n)),
                )
            }
            (Backend::Table, None) => Err(Error::input(
                "the table backend needs both specifications to be DFAs",
            )),
            _ => {
                let h = MembershipOracle::new(self.instance.hard.clone(), n);
                let a = h.intersect(&MembershipOracle::new(self.instance.soft.clone(), n))?;
                WidthOraclePair::new(
                    Arc::new(GenericWidth::new(h)),
                    Arc::new(GenericWidth::new(a)),
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::tests::{running_hard, running_soft};
    use crate::improviser::check_realizability;
    use num_bigint::BigUint;

    fn running_json(rho: &str) -> String {
        format!(
            r#"{{"alphabet": ["+", "=", "-"], "hard": {}, "soft": {}, "n": 4, "epsilon": "1/2", "rho": "{rho}"}}"#,
            running_hard().to_json(),
            running_soft().to_json()
        )
    }

    #[test]
    fn inline_dfas_on_both_backends() {
        let li = LoadedInstance::from_json(&running_json("1/2"), Path::new(".")).unwrap();
        for backend in [Backend::Auto, Backend::Table, Backend::Generic] {
            let w = li.oracles(backend).unwrap();
            let r = check_realizability(&li.instance, &w).unwrap();
            assert!(r.realizable);
            assert_eq!(
                (r.width_i, r.width_a),
                (BigUint::from(4u8), BigUint::from(1u8))
            );
        }
    }

    #[test]
    fn ltlf_refs_need_the_generic_backend() {
        let text = r#"{"hard": {"type": "ltlf", "formula": "F p", "props": ["p"]},
                       "soft": {"type": "universal"}, "n": 3, "epsilon": "1", "rho": "1"}"#;
        let li = LoadedInstance::from_json(text, Path::new(".")).unwrap();
        assert!(li.oracles(Backend::Table).is_err());
        let w = li.oracles(Backend::Auto).unwrap();
        // Playing {p} first leaves 2 plays; otherwise the adversary withholds p
        // and only {p} at position 2 remains.
        assert_eq!(w.width_i(&[]).unwrap(), BigUint::from(3u8));
    }

    #[test]
    fn rejects_bad_instances() {
        let bad_rho = running_json("0");
        assert!(LoadedInstance::from_json(&bad_rho, Path::new(".")).is_err());
        let mismatch = running_json("1/2").replace(r#"["+", "=", "-"]"#, r#"["a", "b", "c"]"#);
        assert!(LoadedInstance::from_json(&mismatch, Path::new(".")).is_err());
        assert!(LoadedInstance::load("/nonexistent/instance.json").is_err());
        let unknown = r#"{"hard": {"type": "nfa"}, "soft": {"type": "universal"}, "n": 1, "epsilon": "0", "rho": "1"}"#;
        assert!(LoadedInstance::from_json(unknown, Path::new(".")).is_err());
    }

    #[test]
    fn path_refs_resolve_relative_to_the_instance() {
        let dir = std::env::temp_dir().join(format!("rci-instance-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("h.json"), running_hard().to_json()).unwrap();
        std::fs::write(dir.join("s.json"), running_soft().to_json()).unwrap();
        let text =
            r#"{"hard": "h.json", "soft": "s.json", "n": 4, "epsilon": "1/2", "rho": "1/3"}"#;
        std::fs::write(dir.join("inst.json"), text).unwrap();
        let li = LoadedInstance::load(dir.join("inst.json")).unwrap();
        let r = check_realizability(&li.instance, &li.oracles(Backend::Auto).unwrap()).unwrap();
        assert!(!r.realizable);
        std::fs::remove_dir_all(&dir).ok();
    }
}
