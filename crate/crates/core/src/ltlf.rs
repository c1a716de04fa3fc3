//! LTL over finite traces.
//!
//! Traces are words over `2^P`: symbol `k` is the assignment whose bit `j`
//! (least significant first) says whether the `j`-th declared proposition
//! holds. Semantics on a trace of length `L`, at position `i`:
//!
//! * `X f` holds iff `i + 1 < L` and `f` holds at `i + 1`, so it is false at the last position;
//! * `F f`, `G f` and `f U g` quantify over positions `i..L` only;
//! * on the empty trace atoms, `X`, `F` and `U` are false and `G` is true.
//!
//! Grammar, loosest first: `->` (right), `||`, `&&`, `U` (right), then the
//! prefix operators `!`, `X`, `F`, `G`. `true`, `false` and parentheses are
//! atoms. `&`, `|`, `~`, `¬`, `∧`, `∨` and `→` are accepted as spellings.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::game::{Alphabet, Spec, Symbol};
use crate::genwidth::MembershipOracle;

/// Default cap on `|P|`; the alphabet has `2^|P|` symbols.
pub const DEFAULT_PROP_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ltlf {
    True,
    False,
    Atom(usize),
    Not(Box<Ltlf>),
    And(Box<Ltlf>, Box<Ltlf>),
    Or(Box<Ltlf>, Box<Ltlf>),
    Implies(Box<Ltlf>, Box<Ltlf>),
    Next(Box<Ltlf>),
    Until(Box<Ltlf>, Box<Ltlf>),
    Eventually(Box<Ltlf>),
    Always(Box<Ltlf>),
}

/// A formula together with its ordered proposition set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtlfFormula {
    props: Vec<String>,
    root: Ltlf,
}

impl LtlfFormula {
    pub fn new(props: Vec<String>, root: Ltlf) -> Result<Self> {
        check_props(&props)?;
        let mut bad = None;
        visit(&root, &mut |f| {
            if let Ltlf::Atom(j) = f {
                if *j >= props.len() {
                    bad = Some(*j);
                }
            }
        });
        if let Some(j) = bad {
            return Err(Error::input(format!(
                "atom #{j} has no declared proposition"
            )));
        }
        Ok(LtlfFormula { props, root })
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn root(&self) -> &Ltlf {
        &self.root
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        visit(&self.root, &mut |_| n += 1);
        n
    }
}

fn check_props(props: &[String]) -> Result<()> {
    for (i, p) in props.iter().enumerate() {
        let ok = p
            .chars()
            .next()
            .is_some_and(|c| c.is_alphabetic() || c == '_')
            && p.chars().all(|c| c.is_alphanumeric() || c == '_')
            && !KEYWORDS.contains(&p.as_str());
        if !ok {
            return Err(Error::input(format!(
                "{p:?} is not a valid proposition name"
            )));
        }
        if props[..i].contains(p) {
            return Err(Error::input(format!("proposition {p:?} is declared twice")));
        }
    }
    Ok(())
}

const KEYWORDS: [&str; 6] = ["X", "F", "G", "U", "true", "false"];

fn visit(f: &Ltlf, g: &mut dyn FnMut(&Ltlf)) {
    match f {
        Ltlf::True | Ltlf::False | Ltlf::Atom(_) => {}
        Ltlf::Not(a) | Ltlf::Next(a) | Ltlf::Eventually(a) | Ltlf::Always(a) => visit(a, g),
        Ltlf::And(a, b) | Ltlf::Or(a, b) | Ltlf::Implies(a, b) | Ltlf::Until(a, b) => {
            visit(a, g);
            visit(b, g);
        }
    }
    g(f);
}

impl fmt::Display for LtlfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(&self.root, &self.props, f)
    }
}

fn write_node(node: &Ltlf, props: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let bin = |f: &mut fmt::Formatter<'_>, a: &Ltlf, op: &str, b: &Ltlf| {
        f.write_str("(")?;
        write_node(a, props, f)?;
        write!(f, " {op} ")?;
        write_node(b, props, f)?;
        f.write_str(")")
    };
    let un = |f: &mut fmt::Formatter<'_>, op: &str, a: &Ltlf| {
        f.write_str(op)?;
        write_node(a, props, f)
    };
    match node {
        Ltlf::True => f.write_str("true"),
        Ltlf::False => f.write_str("false"),
        Ltlf::Atom(j) => f.write_str(&props[*j]),
        Ltlf::Not(a) => un(f, "!", a),
        Ltlf::Next(a) => un(f, "X ", a),
        Ltlf::Eventually(a) => un(f, "F ", a),
        Ltlf::Always(a) => un(f, "G ", a),
        Ltlf::And(a, b) => bin(f, a, "&&", b),
        Ltlf::Or(a, b) => bin(f, a, "||", b),
        Ltlf::Implies(a, b) => bin(f, a, "->", b),
        Ltlf::Until(a, b) => bin(f, a, "U", b),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        if c.is_alphanumeric() || c == '_' {
            let mut ident = String::new();
            while let Some(&(_, c)) = it.peek() {
                if !(c.is_alphanumeric() || c == '_') {
                    break;
                }
                ident.push(c);
                it.next();
            }
            out.push((pos, Tok::Ident(ident)));
            continue;
        }
        it.next();
        let next_is = |it: &mut std::iter::Peekable<std::str::CharIndices<'_>>, want: char| {
            if it.peek().map(|&(_, c)| c) == Some(want) {
                it.next();
                true
            } else {
                false
            }
        };
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '!' | '~' | '¬' => Tok::Not,
            '∧' => Tok::And,
            '∨' => Tok::Or,
            '→' => Tok::Implies,
            '&' => {
                next_is(&mut it, '&');
                Tok::And
            }
            '|' => {
                next_is(&mut it, '|');
                Tok::Or
            }
            '-' if next_is(&mut it, '>') => Tok::Implies,
            _ => {
                return Err(Error::Parse {
                    position: pos,
                    message: format!("unexpected character {c:?}"),
                })
            }
        };
        out.push((pos, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    props: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos(),
            message: message.into(),
        })
    }

    fn is_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn implies(&mut self) -> Result<Ltlf> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Ltlf::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Ltlf> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Ltlf::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Ltlf> {
        let mut lhs = self.until()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Ltlf::And(Box::new(lhs), Box::new(self.until()?));
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Ltlf> {
        let lhs = self.unary()?;
        if self.is_ident("U") {
            self.bump();
            let rhs = self.until()?;
            return Ok(Ltlf::Until(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ltlf> {
        let wrap: fn(Box<Ltlf>) -> Ltlf = match self.peek() {
            Tok::Not => Ltlf::Not,
            Tok::Ident(s) if s == "X" => Ltlf::Next,
            Tok::Ident(s) if s == "F" => Ltlf::Eventually,
            Tok::Ident(s) if s == "G" => Ltlf::Always,
            _ => return self.primary(),
        };
        self.bump();
        Ok(wrap(Box::new(self.unary()?)))
    }

    fn primary(&mut self) -> Result<Ltlf> {
        let pos = self.pos();
        match self.bump() {
            Tok::LParen => {
                let inner = self.implies()?;
                if *self.peek() != Tok::RParen {
                    return self.error("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::Ident(s) if s == "true" => Ok(Ltlf::True),
            Tok::Ident(s) if s == "false" => Ok(Ltlf::False),
            Tok::Ident(s) if s == "U" => Err(Error::Parse {
                position: pos,
                message: "'U' needs a left operand".into(),
            }),
            Tok::Ident(s) => match self.props.iter().position(|p| *p == s) {
                Some(j) => Ok(Ltlf::Atom(j)),
                None => Err(Error::Parse {
                    position: pos,
                    message: format!("unknown proposition {s:?}"),
                }),
            },
            Tok::End => Err(Error::Parse {
                position: pos,
                message: "expected a formula".into(),
            }),
            Tok::RParen => Err(Error::Parse {
                position: pos,
                message: "unbalanced ')'".into(),
            }),
            _ => Err(Error::Parse {
                position: pos,
                message: "expected a formula".into(),
            }),
        }
    }
}

pub fn parse_ltlf<S: AsRef<str>>(text: &str, props: &[S]) -> Result<LtlfFormula> {
    let props: Vec<String> = props.iter().map(|p| p.as_ref().to_string()).collect();
    check_props(&props)?;
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        props: &props,
    };
    let root = p.implies()?;
    match p.peek() {
        Tok::End => {}
        Tok::RParen => return p.error("unbalanced ')'"),
        _ => return p.error("unexpected token after formula"),
    }
    Ok(LtlfFormula { props, root })
}

/// Subformulas in post-order, children referenced by index.
enum Op {
    True,
    False,
    Atom(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Next(usize),
    Until(usize, usize),
    Eventually(usize),
    Always(usize),
}

fn flatten(f: &Ltlf, ops: &mut Vec<Op>) -> usize {
    let op = match f {
        Ltlf::True => Op::True,
        Ltlf::False => Op::False,
        Ltlf::Atom(j) => Op::Atom(*j),
        Ltlf::Not(a) => Op::Not(flatten(a, ops)),
        Ltlf::Next(a) => Op::Next(flatten(a, ops)),
        Ltlf::Eventually(a) => Op::Eventually(flatten(a, ops)),
        Ltlf::Always(a) => Op::Always(flatten(a, ops)),
        Ltlf::And(a, b) => Op::And(flatten(a, ops), flatten(b, ops)),
        Ltlf::Or(a, b) => Op::Or(flatten(a, ops), flatten(b, ops)),
        Ltlf::Implies(a, b) => Op::Implies(flatten(a, ops), flatten(b, ops)),
        Ltlf::Until(a, b) => Op::Until(flatten(a, ops), flatten(b, ops)),
    };
    ops.push(op);
    ops.len() - 1
}

/// Truth of `f` at position 0 of `trace`, by a (subformula, position) table
/// filled from the last position backwards.
pub fn ltlf_eval(f: &LtlfFormula, trace: &[Symbol]) -> bool {
    if trace.is_empty() {
        return eval_empty(&f.root);
    }
    let mut ops = Vec::new();
    let top = flatten(&f.root, &mut ops);
    let len = trace.len();
    let mut val = vec![false; ops.len() * len];
    for i in (0..len).rev() {
        let at = |k: usize, j: usize| k * len + j;
        let later = |val: &[bool], k: usize| i + 1 < len && val[at(k, i + 1)];
        for (k, op) in ops.iter().enumerate() {
            let v = match *op {
                Op::True => true,
                Op::False => false,
                Op::Atom(j) => trace[i].index() >> j & 1 == 1,
                Op::Not(a) => !val[at(a, i)],
                Op::And(a, b) => val[at(a, i)] && val[at(b, i)],
                Op::Or(a, b) => val[at(a, i)] || val[at(b, i)],
                Op::Implies(a, b) => !val[at(a, i)] || val[at(b, i)],
                Op::Next(a) => later(&val, a),
                Op::Until(a, b) => val[at(b, i)] || (val[at(a, i)] && later(&val, k)),
                Op::Eventually(a) => val[at(a, i)] || later(&val, k),
                Op::Always(a) => val[at(a, i)] && (i + 1 == len || val[at(k, i + 1)]),
            };
            val[at(k, i)] = v;
        }
    }
    val[top * len]
}

fn eval_empty(f: &Ltlf) -> bool {
    match f {
        Ltlf::True | Ltlf::Always(_) => true,
        Ltlf::False | Ltlf::Atom(_) | Ltlf::Next(_) | Ltlf::Eventually(_) | Ltlf::Until(..) => {
            false
        }
        Ltlf::Not(a) => !eval_empty(a),
        Ltlf::And(a, b) => eval_empty(a) && eval_empty(b),
        Ltlf::Or(a, b) => eval_empty(a) || eval_empty(b),
        Ltlf::Implies(a, b) => !eval_empty(a) || eval_empty(b),
    }
}

/// The alphabet `2^P` in binary-counting order, symbols named like `{}`, `{p}`, `{p,q}`.
pub fn assignment_alphabet<S: AsRef<str>>(props: &[S]) -> Result<Alphabet> {
    let k = props.len();
    if k >= usize::BITS as usize - 1 {
        return Err(Error::Size {
            what: "assignment alphabet".into(),
            needed: k as u128,
            limit: 62,
        });
    }
    Alphabet::new((0..1usize << k).map(|mask| {
        let on: Vec<&str> = (0..k)
            .filter(|j| mask >> j & 1 == 1)
            .map(|j| props[j].as_ref())
            .collect();
        format!("{{{}}}", on.join(","))
    }))
}

/// A formula as a [`Spec`] over `2^P`.
#[derive(Debug, Clone)]
pub struct LtlfSpec {
    formula: LtlfFormula,
    alphabet: Alphabet,
}

impl LtlfSpec {
    pub fn new(formula: LtlfFormula) -> Result<Self> {
        Self::with_limit(formula, DEFAULT_PROP_LIMIT)
    }

    pub fn with_limit(formula: LtlfFormula, prop_limit: usize) -> Result<Self> {
        let k = formula.props.len();
        if k > prop_limit {
            return Err(Error::Size {
                what: format!("assignment alphabet over {k} propositions"),
                needed: 1u128 << k.min(127),
                limit: 1u128 << prop_limit.min(127),
            });
        }
        let alphabet = assignment_alphabet(&formula.props)?;
        Ok(LtlfSpec { formula, alphabet })
    }

    pub fn formula(&self) -> &LtlfFormula {
        &self.formula
    }
}

impl Spec for LtlfSpec {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn accepts(&self, word: &[Symbol]) -> bool {
        ltlf_eval(&self.formula, word)
    }
}

pub fn ltlf_oracle(formula: LtlfFormula, horizon: usize) -> Result<MembershipOracle> {
    Ok(MembershipOracle::new(
        Arc::new(LtlfSpec::new(formula)?),
        horizon,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genwidth::generic_width;
    use proptest::prelude::*;

    const PQ: [&str; 2] = ["p", "q"];

    fn f(text: &str) -> LtlfFormula {
        parse_ltlf(text, &PQ).unwrap()
    }

    /// Letters: '.' = {}, 'p', 'q', 'b' = both.
    fn trace(s: &str) -> Vec<Symbol> {
        s.chars()
            .map(|c| {
                Symbol::new(match c {
                    '.' => 0,
                    'p' => 1,
                    'q' => 2,
                    'b' => 3,
                    _ => panic!("bad letter"),
                })
            })
            .collect()
    }

    fn naive(f: &Ltlf, t: &[Symbol], i: usize) -> bool {
        let n = t.len();
        match f {
            Ltlf::True => true,
            Ltlf::False => false,
            Ltlf::Atom(j) => i < n && t[i].index() >> j & 1 == 1,
            Ltlf::Not(a) => !naive(a, t, i),
            Ltlf::And(a, b) => naive(a, t, i) && naive(b, t, i),
            Ltlf::Or(a, b) => naive(a, t, i) || naive(b, t, i),
            Ltlf::Implies(a, b) => !naive(a, t, i) || naive(b, t, i),
            Ltlf::Next(a) => i + 1 < n && naive(a, t, i + 1),
            Ltlf::Eventually(a) => (i..n).any(|k| naive(a, t, k)),
            Ltlf::Always(a) => (i..n).all(|k| naive(a, t, k)),
            Ltlf::Until(a, b) => (i..n).any(|k| naive(b, t, k) && (i..k).all(|j| naive(a, t, j))),
        }
    }

    #[test]
    fn parse_shapes() {
        let g = parse_ltlf("G p", &["p"]).unwrap();
        assert_eq!(g.root, Ltlf::Always(Box::new(Ltlf::Atom(0))));
        let u = f("p U (X q)");
        assert_eq!(
            u.root,
            Ltlf::Until(
                Box::new(Ltlf::Atom(0)),
                Box::new(Ltlf::Next(Box::new(Ltlf::Atom(1))))
            )
        );
        assert_eq!(
            f("!p U q && p || q -> p").to_string(),
            "((((!p U q) && p) || q) -> p)"
        );
        assert_eq!(f("p -> q -> p").to_string(), "(p -> (q -> p))");
        assert_eq!(f("p U q U p").to_string(), "(p U (q U p))");
        assert_eq!(f("G p U q").to_string(), "(G p U q)");
        assert_eq!(f("p & q | ~p → q").to_string(), "(((p && q) || !p) -> q)");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let pos = |text: &str| match parse_ltlf(text, &PQ) {
            Err(Error::Parse { position, .. }) => position,
            other => panic!("{text:?}: {other:?}"),
        };
        assert_eq!(pos("p &&"), 4);
        assert_eq!(pos("(p"), 2);
        assert_eq!(pos("p)"), 1);
        assert_eq!(pos("p && r"), 5);
        assert_eq!(pos("U p"), 0);
        assert_eq!(pos("p # q"), 2);
        assert_eq!(pos(""), 0);
        assert!(parse_ltlf("p", &["X"]).is_err());
        assert!(parse_ltlf("p", &["p", "p"]).is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "G (p -> X q)",
            "F G p && !(p U q)",
            "true || false",
            "X X p",
        ] {
            let a = f(text);
            assert_eq!(f(&a.to_string()), a);
        }
    }

    #[test]
    fn eval_examples() {
        assert!(ltlf_eval(&f("G p"), &trace("ppp")));
        assert!(ltlf_eval(&f("X p"), &trace(".p")));
        assert!(!ltlf_eval(&f("X p"), &trace("p")));
        assert!(ltlf_eval(&f("p U q"), &trace("ppq")));
        assert!(!ltlf_eval(&f("p U q"), &trace("pp.")));
        assert!(ltlf_eval(&f("X true"), &trace("..")));
        assert!(!ltlf_eval(&f("X true"), &trace(".")));
        assert!(ltlf_eval(&f("!X !true"), &trace(".")));
    }

    #[test]
    fn empty_trace_conventions() {
        let e: [Symbol; 0] = [];
        assert!(!ltlf_eval(&f("p"), &e));
        assert!(!ltlf_eval(&f("X true"), &e));
        assert!(!ltlf_eval(&f("F true"), &e));
        assert!(ltlf_eval(&f("G false"), &e));
        assert!(!ltlf_eval(&f("true U true"), &e));
        assert!(ltlf_eval(&f("!p"), &e));
    }

    #[test]
    fn assignment_alphabet_order() {
        let a = assignment_alphabet(&PQ).unwrap();
        assert_eq!(a.names(), ["{}", "{p}", "{q}", "{p,q}"]);
    }

    #[test]
    fn oracle_examples() {
        let g = parse_ltlf("G p", &["p"]).unwrap();
        let o = ltlf_oracle(g, 2).unwrap();
        let accepted: Vec<usize> = (0..4)
            .filter(|m| o.accepts(&[Symbol::new(m & 1), Symbol::new(m >> 1)]))
            .collect();
        assert_eq!(accepted, [3]);
        assert_eq!(generic_width(&o, &[]).unwrap(), 0u8.into());
        for n in 0..=4 {
            let t = ltlf_oracle(f("true"), n).unwrap();
            assert_eq!(
                generic_width(&t, &[]).unwrap(),
                4u32.pow(n.div_ceil(2) as u32).into()
            );
        }
    }

    #[test]
    fn prop_limit() {
        let props: Vec<String> = (0..9).map(|i| format!("p{i}")).collect();
        let big = parse_ltlf("p0", &props).unwrap();
        assert!(matches!(
            ltlf_oracle(big.clone(), 2),
            Err(Error::Size { .. })
        ));
        assert!(LtlfSpec::with_limit(big, 9).is_ok());
    }

    fn arb_formula() -> impl Strategy<Value = Ltlf> {
        let leaf = prop_oneof![
            Just(Ltlf::True),
            Just(Ltlf::False),
            (0usize..2).prop_map(Ltlf::Atom),
        ];
        leaf.prop_recursive(5, 24, 2, |inner| {
            let b = |x| Box::new(x);
            prop_oneof![
                inner.clone().prop_map(move |a| Ltlf::Not(b(a))),
                inner.clone().prop_map(move |a| Ltlf::Next(b(a))),
                inner.clone().prop_map(move |a| Ltlf::Eventually(b(a))),
                inner.clone().prop_map(move |a| Ltlf::Always(b(a))),
                (inner.clone(), inner.clone()).prop_map(move |(x, y)| Ltlf::And(b(x), b(y))),
                (inner.clone(), inner.clone()).prop_map(move |(x, y)| Ltlf::Or(b(x), b(y))),
                (inner.clone(), inner.clone()).prop_map(move |(x, y)| Ltlf::Implies(b(x), b(y))),
                (inner.clone(), inner).prop_map(move |(x, y)| Ltlf::Until(b(x), b(y))),
            ]
        })
    }

    fn arb_trace() -> impl Strategy<Value = Vec<Symbol>> {
        proptest::collection::vec((0usize..4).prop_map(Symbol::new), 0..7)
    }

    fn wrap(root: Ltlf) -> LtlfFormula {
        LtlfFormula::new(PQ.iter().map(|s| s.to_string()).collect(), root).unwrap()
    }

    proptest! {
        #[test]
        fn table_matches_naive(g in arb_formula(), t in arb_trace()) {
            prop_assume!(!t.is_empty());
            prop_assert_eq!(ltlf_eval(&wrap(g.clone()), &t), naive(&g, &t, 0));
        }

        #[test]
        fn negation_and_g_f_duality(g in arb_formula(), t in arb_trace()) {
            let pos = ltlf_eval(&wrap(g.clone()), &t);
            let neg = ltlf_eval(&wrap(Ltlf::Not(Box::new(g.clone()))), &t);
            prop_assert_eq!(neg, !pos);
            let always = ltlf_eval(&wrap(Ltlf::Always(Box::new(g.clone()))), &t);
            let dual = Ltlf::Not(Box::new(Ltlf::Eventually(Box::new(Ltlf::Not(Box::new(g))))));
            prop_assert_eq!(always, ltlf_eval(&wrap(dual), &t));
        }

        #[test]
        fn printed_formulas_reparse(g in arb_formula()) {
            let a = wrap(g);
            prop_assert_eq!(parse_ltlf(&a.to_string(), &PQ).unwrap(), a);
        }
    }
}
