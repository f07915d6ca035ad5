//! Bounds between parameters, stored as data and evaluated on intervals.
//!
//! Each row is `id | group | lhs <= rhs` (or `=`), where both sides are
//! affine expressions with rational coefficients. A parameter contributes
//! the interval `[lo, hi]` known for it; a row is violated when the lowest
//! possible left side exceeds the highest possible right side, holds when
//! the reverse comparison settles it, and is otherwise not evaluable.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Q = Ratio<i64>;

const BUILTIN: &str = include_str!("ledger.txt");

/// Scalar variables.
const SCALARS: &[&str] = &[
    "tl",
    "tb",
    "itl",
    "itb",
    "stb",
    "br",
    "sh",
    "ph",
    "delta",
    "delta_hat",
    "rho",
    "rho_hat",
    "td",
    "ad",
    "adt",
    "bnc",
    "BNC",
    "mcw",
    "mf",
    "glc",
    "cbc",
    "bgc",
];
/// Variables quantified over sources or orders.
const INDEXED: &[&str] = &["delta_s", "rho_s", "delta_q", "mcw_k", "mcw_2k", "mcw_2km1"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Group {
    /// Classical bounds (decomposition widths, distortion, glc, mf).
    Prior,
    /// Bounds through cluster diameters, bottlenecks and cycle constants.
    Main,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Affine {
    pub terms: BTreeMap<String, Q>,
    pub constant: Q,
}

impl Affine {
    fn constant(c: Q) -> Self {
        Affine { terms: BTreeMap::new(), constant: c }
    }

    fn var(name: &str) -> Self {
        Affine { terms: BTreeMap::from([(name.to_string(), Q::from_integer(1))]), constant: Q::from_integer(0) }
    }

    fn as_constant(&self) -> Option<Q> {
        self.terms.is_empty().then_some(self.constant)
    }

    fn add(mut self, other: &Affine, sign: i64) -> Self {
        for (v, c) in &other.terms {
            *self.terms.entry(v.clone()).or_default() += c * sign;
        }
        self.terms.retain(|_, c| *c != Q::from_integer(0));
        self.constant += other.constant * sign;
        self
    }

    fn scale(mut self, k: Q) -> Self {
        for c in self.terms.values_mut() {
            *c *= k;
        }
        self.terms.retain(|_, c| *c != Q::from_integer(0));
        self.constant *= k;
        self
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().map(String::as_str)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("ledger line {line}: {reason}")]
pub struct LedgerParseError {
    pub line: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Num(i64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token::Num(text.parse().map_err(|_| format!("number `{text}` too large"))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

/// Recursive descent over `expr := term (± term)*`,
/// `term := factor ((*|/) factor)*`, `factor := num | ident | (expr) | -factor`.
struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<Affine, String> {
        let mut acc = self.term()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = acc.add(&rhs, if op == '+' { 1 } else { -1 });
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Affine, String> {
        let mut acc = self.factor()?;
        while let Some(Token::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = if op == '*' {
                match (acc.as_constant(), rhs.as_constant()) {
                    (Some(k), _) => rhs.scale(k),
                    (None, Some(k)) => acc.scale(k),
                    _ => return Err("product of two non-constant expressions".into()),
                }
            } else {
                match rhs.as_constant() {
                    Some(k) if k != Q::from_integer(0) => acc.scale(k.recip()),
                    _ => return Err("division by a non-constant or zero".into()),
                }
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Affine, String> {
        let tok = self.peek().cloned().ok_or("unexpected end of expression")?;
        self.pos += 1;
        match tok {
            Token::Num(k) => Ok(Affine::constant(Q::from_integer(k))),
            Token::Ident(name) => {
                if SCALARS.contains(&name.as_str()) || INDEXED.contains(&name.as_str()) {
                    Ok(Affine::var(&name))
                } else {
                    Err(format!("unknown parameter `{name}`"))
                }
            }
            Token::Op('(') => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Token::Op(')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err("missing `)`".into()),
                }
            }
            Token::Op('-') => Ok(self.factor()?.scale(Q::from_integer(-1))),
            Token::Op(c) => Err(format!("unexpected `{c}`")),
        }
    }
}

pub fn parse_expression(s: &str) -> Result<Affine, String> {
    let mut p = Parser { tokens: tokenize(s)?, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(format!("trailing input in `{s}`"));
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerRow {
    pub id: String,
    pub group: Group,
    pub relation: Relation,
    pub lhs_text: String,
    pub rhs_text: String,
    pub lhs: Affine,
    pub rhs: Affine,
}

pub fn parse_ledger(text: &str) -> Result<Vec<LedgerRow>, LedgerParseError> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |reason: String| LedgerParseError { line: i + 1, reason };
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        let [id, group, body] = fields[..] else {
            return Err(err("expected `id | group | relation`".into()));
        };
        let group = match group {
            "prior" => Group::Prior,
            "main" => Group::Main,
            other => return Err(err(format!("unknown group `{other}`"))),
        };
        let (lhs_text, rhs_text, relation) = if let Some((l, r)) = body.split_once("<=") {
            (l.trim(), r.trim(), Relation::Le)
        } else if let Some((l, r)) = body.split_once('=') {
            (l.trim(), r.trim(), Relation::Eq)
        } else {
            return Err(err("missing `<=` or `=`".into()));
        };
        if rows.iter().any(|r: &LedgerRow| r.id == id) {
            return Err(err(format!("duplicate id `{id}`")));
        }
        rows.push(LedgerRow {
            id: id.to_string(),
            group,
            relation,
            lhs: parse_expression(lhs_text).map_err(err)?,
            rhs: parse_expression(rhs_text).map_err(err)?,
            lhs_text: lhs_text.to_string(),
            rhs_text: rhs_text.to_string(),
        });
    }
    Ok(rows)
}

/// The rows shipped with the crate.
pub fn builtin_ledger() -> &'static [LedgerRow] {
    static ROWS: OnceLock<Vec<LedgerRow>> = OnceLock::new();
    ROWS.get_or_init(|| parse_ledger(BUILTIN).expect("built-in ledger parses"))
}

/// `[lo, hi]`; `None` is an infinite end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Option<Q>,
    pub hi: Option<Q>,
}

impl Interval {
    pub fn exact(v: u32) -> Self {
        let q = Some(Q::from_integer(v as i64));
        Interval { lo: q, hi: q }
    }

    pub fn between(lo: u32, hi: Option<u32>) -> Self {
        Interval { lo: Some(Q::from_integer(lo as i64)), hi: hi.map(|h| Q::from_integer(h as i64)) }
    }

    pub fn unknown() -> Self {
        Interval::between(0, None)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lo, self.hi) {
            (Some(a), Some(b)) if a == b => write!(f, "{a}"),
            (lo, hi) => {
                let end = |x: Option<Q>, inf: &str| x.map_or(inf.to_string(), |q| q.to_string());
                write!(f, "[{}, {}]", end(lo, "-inf"), end(hi, "inf"))
            }
        }
    }
}

/// Values available to the ledger.
#[derive(Clone, Debug, Default)]
pub struct LedgerEnv {
    pub scalars: BTreeMap<String, Interval>,
    pub delta_s: Vec<u32>,
    pub rho_s: Vec<u32>,
    pub mcw_k: BTreeMap<usize, u32>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Instance {
    s: Option<usize>,
    q: Option<usize>,
    k: Option<usize>,
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = [("s", self.s), ("q", self.q), ("k", self.k)]
            .into_iter()
            .filter_map(|(name, v)| v.map(|v| format!("{name}={v}")))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl LedgerEnv {
    fn lookup(&self, var: &str, inst: &Instance) -> Interval {
        match var {
            "delta_s" => Interval::exact(self.delta_s[inst.s.unwrap()]),
            "delta_q" => Interval::exact(self.delta_s[inst.q.unwrap()]),
            "rho_s" => Interval::exact(self.rho_s[inst.s.unwrap()]),
            "mcw_k" => Interval::exact(self.mcw_k[&inst.k.unwrap()]),
            "mcw_2k" => Interval::exact(self.mcw_k[&(2 * inst.k.unwrap())]),
            "mcw_2km1" => Interval::exact(self.mcw_k[&(2 * inst.k.unwrap() - 1)]),
            other => self.scalars.get(other).copied().unwrap_or_else(Interval::unknown),
        }
    }

    fn eval(&self, e: &Affine, inst: &Instance) -> Interval {
        let mut lo = Some(e.constant);
        let mut hi = Some(e.constant);
        for (var, &c) in &e.terms {
            let iv = self.lookup(var, inst);
            let (a, b) = if c > Q::from_integer(0) { (iv.lo, iv.hi) } else { (iv.hi, iv.lo) };
            lo = lo.zip(a).map(|(x, y)| x + c * y);
            hi = hi.zip(b).map(|(x, y)| x + c * y);
        }
        Interval { lo, hi }
    }

    fn instances(&self, row: &LedgerRow) -> Vec<Instance> {
        let uses = |name: &str| row.lhs.terms.contains_key(name) || row.rhs.terms.contains_key(name);
        let n = self.delta_s.len();
        let sources: Vec<Option<usize>> =
            if uses("delta_s") || uses("rho_s") || uses("delta_q") { (0..n).map(Some).collect() } else { vec![None] };
        let seconds: Vec<Option<usize>> = if uses("delta_q") { (0..n).map(Some).collect() } else { vec![None] };
        let orders: Vec<Option<usize>> = if uses("mcw_k") {
            self.mcw_k.keys().map(|&k| Some(k)).collect()
        } else if uses("mcw_2k") || uses("mcw_2km1") {
            self.mcw_k
                .keys()
                .filter(|&&k| k % 2 == 0 && self.mcw_k.contains_key(&(k - 1)))
                .map(|&k| Some(k / 2))
                .collect()
        } else {
            vec![None]
        };
        let mut out = Vec::new();
        for &s in &sources {
            for &q in &seconds {
                for &k in &orders {
                    out.push(Instance { s, q, k });
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Violated,
    NotEvaluable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerResult {
    pub id: String,
    pub group: Group,
    pub lhs: String,
    pub rhs: String,
    pub relation: &'static str,
    /// Evaluated sides of the reported instance.
    pub lhs_value: String,
    pub rhs_value: String,
    pub verdict: Verdict,
    /// Which source / order the values belong to: the first violated
    /// instance, else the first unsettled one, else the first.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
}

fn le_verdict(l: Interval, r: Interval) -> Verdict {
    match (l.lo, r.hi) {
        (Some(a), Some(d)) if a > d => return Verdict::Violated,
        _ => {}
    }
    match (l.hi, r.lo) {
        (Some(b), Some(c)) if b <= c => Verdict::Holds,
        _ => Verdict::NotEvaluable,
    }
}

fn verdict(relation: Relation, l: Interval, r: Interval) -> Verdict {
    match relation {
        Relation::Le => le_verdict(l, r),
        Relation::Eq => match (le_verdict(l, r), le_verdict(r, l)) {
            (Verdict::Violated, _) | (_, Verdict::Violated) => Verdict::Violated,
            (Verdict::Holds, Verdict::Holds) => Verdict::Holds,
            _ => Verdict::NotEvaluable,
        },
    }
}

pub fn evaluate(rows: &[LedgerRow], env: &LedgerEnv, groups: &[Group]) -> Vec<LedgerResult> {
    rows.iter()
        .filter(|row| groups.contains(&row.group))
        .map(|row| {
            let evaluated: Vec<(Instance, Interval, Interval, Verdict)> = env
                .instances(row)
                .into_iter()
                .map(|inst| {
                    let (l, r) = (env.eval(&row.lhs, &inst), env.eval(&row.rhs, &inst));
                    (inst, l, r, verdict(row.relation, l, r))
                })
                .collect();
            let pick = evaluated
                .iter()
                .find(|e| e.3 == Verdict::Violated)
                .or_else(|| evaluated.iter().find(|e| e.3 == Verdict::NotEvaluable))
                .or(evaluated.first());
            let (inst, lhs_value, rhs_value, verdict) = match pick {
                Some(&(inst, l, r, v)) => (Some(inst), l.to_string(), r.to_string(), v),
                None => (None, "-".into(), "-".into(), Verdict::NotEvaluable),
            };
            LedgerResult {
                id: row.id.clone(),
                group: row.group,
                lhs: row.lhs_text.clone(),
                rhs: row.rhs_text.clone(),
                relation: if row.relation == Relation::Le { "<=" } else { "=" },
                lhs_value,
                rhs_value,
                verdict,
                instance: inst.map(|i| i.to_string()).filter(|s| !s.is_empty()),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn expressions() {
        let e = parse_expression("(tl - 3)/4").unwrap();
        assert_eq!(e.terms["tl"], q(1, 4));
        assert_eq!(e.constant, q(-3, 4));
        let e = parse_expression("2/3*(cbc - 1)").unwrap();
        assert_eq!((e.terms["cbc"], e.constant), (q(2, 3), q(-2, 3)));
        let e = parse_expression("3/2*tl + 1").unwrap();
        assert_eq!((e.terms["tl"], e.constant), (q(3, 2), q(1, 1)));
        assert!(parse_expression("tl*tb").is_err());
        assert!(parse_expression("tl/tb").is_err());
        assert!(parse_expression("foo + 1").is_err());
        assert!(parse_expression("(tl").is_err());
        assert_eq!(parse_expression("-tl").unwrap().terms["tl"], q(-1, 1));
    }

    #[test]
    fn builtin_rows_parse() {
        let rows = builtin_ledger();
        assert!(rows.len() > 100);
        assert!(rows.iter().any(|r| r.relation == Relation::Eq));
        assert!(parse_ledger("a | prior | tl <= tb\na | prior | tb <= tl").is_err());
        assert_eq!(parse_ledger("x | other | tl <= tb").unwrap_err().line, 1);
    }

    #[test]
    fn verdicts() {
        let rows = parse_ledger(
            "a | main | bgc <= 2*cbc - 1\nb | main | tl <= td\nc | main | delta_q <= 3*delta_s\nd | main | bnc = BNC",
        )
        .unwrap();
        let mut env = LedgerEnv { delta_s: vec![2, 2], rho_s: vec![1, 1], ..Default::default() };
        env.scalars.insert("bgc".into(), Interval::exact(3));
        env.scalars.insert("cbc".into(), Interval::exact(2));
        env.scalars.insert("tl".into(), Interval::exact(2));
        env.scalars.insert("bnc".into(), Interval::exact(1));
        env.scalars.insert("BNC".into(), Interval::exact(1));
        let out = evaluate(&rows, &env, &[Group::Main]);
        let v: Vec<Verdict> = out.iter().map(|r| r.verdict).collect();
        assert_eq!(v, vec![Verdict::Holds, Verdict::NotEvaluable, Verdict::Holds, Verdict::Holds]);
        assert_eq!(out[0].rhs_value, "3");
        assert_eq!(out[1].rhs_value, "[0, inf]");
        assert!(evaluate(&rows, &env, &[Group::Prior]).is_empty());

        env.scalars.insert("bgc".into(), Interval::between(4, None));
        assert_eq!(evaluate(&rows[..1], &env, &[Group::Main])[0].verdict, Verdict::Violated);
        env.delta_s = vec![1, 4];
        let out = evaluate(&rows[2..3], &env, &[Group::Main]);
        assert_eq!((out[0].verdict, out[0].instance.as_deref()), (Verdict::Violated, Some("s=0,q=1")));
    }
}
