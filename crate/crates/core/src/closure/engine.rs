use std::collections::HashMap;

use serde_json::{json, Value};

use super::datum::ClosureDatum;
use super::expr::{normalize, Expr, Nf, Word};
use super::{CertifyError, ClosureError, ReplayError};
use crate::checks::{Status, Verdict, Witness};

const J_ATOM: &str = "asserted strong decomposition";
const J_POWER: &str = "condition (1): atom (x) v^n has strong decomposition";
const J_RETRACT: &str = "retract lemma: retracts of objects with strong decomposition";
const J_SUM: &str = "retract lemma: direct sums of objects with strong decomposition";
const J_REWRITE: &str = "rule application: tensor then rewrite by condition (2)";

/// Derivation tree; each node proves strong decomposition of one normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    /// Leaf: the atom carries the strong flag.
    Atom {
        atom: String,
    },
    /// Leaf: power rule `rule` gives atom ⊗ v^power.
    Power {
        atom: String,
        power: u32,
        rule: usize,
    },
    Retract {
        child: Box<Node>,
    },
    DirectSum {
        children: Vec<Node>,
    },
    /// target ≅ ⊕_k retract(rest ⊗ Ṽ_k ⊗ v^{n_k}) via rule `rule` on `pair`.
    Rewrite {
        target: Word,
        pair: (String, String),
        rule: usize,
        terms: Vec<Node>,
    },
}

impl Node {
    pub fn justification(&self) -> &'static str {
        match self {
            Node::Atom { .. } => J_ATOM,
            Node::Power { .. } => J_POWER,
            Node::Retract { .. } => J_RETRACT,
            Node::DirectSum { .. } => J_SUM,
            Node::Rewrite { .. } => J_REWRITE,
        }
    }

    fn step(&self) -> &'static str {
        match self {
            Node::Atom { .. } => "atom",
            Node::Power { .. } => "power",
            Node::Retract { .. } => "retract",
            Node::DirectSum { .. } => "direct-sum",
            Node::Rewrite { .. } => "rewrite",
        }
    }

    fn children(&self) -> &[Node] {
        match self {
            Node::Atom { .. } | Node::Power { .. } => &[],
            Node::Retract { child } => std::slice::from_ref(child),
            Node::DirectSum { children } => children,
            Node::Rewrite { terms, .. } => terms,
        }
    }

    pub fn count_rewrites(&self) -> usize {
        usize::from(matches!(self, Node::Rewrite { .. }))
            + self.children().iter().map(Node::count_rewrites).sum::<usize>()
    }

    pub fn count_direct_sums(&self) -> usize {
        usize::from(matches!(self, Node::DirectSum { .. }))
            + self.children().iter().map(Node::count_direct_sums).sum::<usize>()
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Node::size).sum::<usize>()
    }

    fn label(&self, v: &str) -> String {
        match self {
            Node::Atom { atom } => atom.clone(),
            Node::Power { atom, power, rule } => format!("{} (power rule #{rule})", pow_display(atom, *power, v)),
            Node::Retract { .. } => "retract".into(),
            Node::DirectSum { children } => format!("sum of {}", children.len()),
            Node::Rewrite { target, pair, rule, .. } => {
                format!("{} via ({},{}) rule #{rule}", target.display(v), pair.0, pair.1)
            }
        }
    }

    pub fn to_json(&self, v: &str) -> Value {
        let mut o = json!({
            "step": self.step(),
            "justification": self.justification(),
            "label": self.label(v),
        });
        let kids = self.children();
        if !kids.is_empty() {
            o["children"] = Value::Array(kids.iter().map(|c| c.to_json(v)).collect());
        }
        o
    }

    fn write_tree(&self, v: &str, indent: usize, out: &mut String) {
        out.push_str(&format!(
            "{}{}: {} [{}]\n",
            "  ".repeat(indent),
            self.step(),
            self.label(v),
            self.justification()
        ));
        for c in self.children() {
            c.write_tree(v, indent + 1, out);
        }
    }
}

fn pow_display(atom: &str, n: u32, v: &str) -> String {
    if atom == v {
        Word::new(vec![], n + 1).display(v)
    } else {
        match n {
            0 => atom.to_string(),
            1 => format!("{atom}*{v}"),
            _ => format!("{atom}*{v}^{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// Target as written by the caller.
    pub target: String,
    pub normal_form: Nf,
    pub depth: u32,
    pub root: Node,
    /// The distinguished atom, for display.
    pub v: String,
}

impl Certificate {
    pub fn rewrites(&self) -> usize {
        self.root.count_rewrites()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "target": self.target,
            "normal_form": self.normal_form.display(&self.v),
            "depth": self.depth,
            "rewrites": self.rewrites(),
            "nodes": self.root.size(),
            "derivation": self.root.to_json(&self.v),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "certificate for {} (normal form {}, {} rewrite(s))\n",
            self.target,
            self.normal_form.display(&self.v),
            self.rewrites()
        );
        self.root.write_tree(&self.v, 1, &mut s);
        s
    }
}

fn pair_str(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// Is atom ⊗ v^n covered, either by the atom flag (n = 0) or a power rule?
fn covered(d: &ClosureDatum, atom: &str, n: u32) -> bool {
    (n == 0 && d.atom(atom).is_some_and(|a| a.strong)) || d.power_rule_for(atom, n).is_some()
}

/// Shared body of both corollaries; `gate(atoms, vpow)` says whether a
/// condition on that composite is required.
fn check_conditions(d: &ClosureDatum, check: &str, gate: &dyn Fn(&[String], u32) -> bool) -> Verdict {
    let s: Vec<&str> = d.s_atoms().map(|a| a.name.as_str()).collect();
    let mut witnesses = Vec::new();
    let mut required = 0usize;
    let mut vacuous = 0usize;

    for &a in &s {
        for n in 0..=d.power_bound {
            if !gate(&[a.to_string()], n) {
                vacuous += 1;
                continue;
            }
            required += 1;
            if !covered(d, a, n) {
                witnesses.push(Witness::new(
                    "condition (1)",
                    vec![a.to_string(), n.to_string()],
                    format!(
                        "{} lacks strong decomposition",
                        pow_display(a, n, d.distinguished.as_deref().unwrap_or("v"))
                    ),
                ));
            }
        }
    }
    for (i, &a) in s.iter().enumerate() {
        for &b in &s[i..] {
            if !gate(&[a.to_string(), b.to_string()], 0) {
                vacuous += 1;
                continue;
            }
            required += 1;
            let Some(r) = d.rule_for(a, b) else {
                witnesses.push(Witness::new(
                    "missing rule",
                    vec![a.to_string(), b.to_string()],
                    format!("no decomposition rule for {}", pair_str(a, b)),
                ));
                continue;
            };
            for t in &d.rules[r].terms {
                if !covered(d, &t.atom, t.power) {
                    witnesses.push(Witness::new(
                        "rule input",
                        vec![a.to_string(), b.to_string()],
                        format!(
                            "rule {} uses {}, which lacks strong decomposition",
                            pair_str(a, b),
                            pow_display(&t.atom, t.power, d.distinguished.as_deref().unwrap_or("v"))
                        ),
                    ));
                }
            }
        }
    }
    let status = if witnesses.is_empty() { Status::Holds } else { Status::Fails };
    let mut v = Verdict::new(check, status);
    v.witnesses = witnesses;
    v.notes.push(format!(
        "{required} condition(s) required, {vacuous} vacuous; powers checked up to n = {}",
        d.power_bound
    ));
    v
}

/// Every V ∈ S has V ⊗ v^n with strong decomposition (n ≤ power_bound),
/// and every pair in S has a rule whose terms are covered.
pub fn check_cor1(d: &ClosureDatum) -> Result<Verdict, ClosureError> {
    if d.distinguished.is_none() {
        return Err(ClosureError::NoDistinguished);
    }
    Ok(check_conditions(d, "closure-cor1", &|_, _| true))
}

/// As [`check_cor1`], each condition required only on generic degrees.
pub fn check_cor2(d: &ClosureDatum) -> Result<Verdict, ClosureError> {
    if d.distinguished.is_none() {
        return Err(ClosureError::NoDistinguished);
    }
    if d.grading.is_none() {
        return Err(ClosureError::NoGrading);
    }
    let gate = |atoms: &[String], n: u32| d.word_is_generic(atoms, n).unwrap_or(true);
    let mut verdict = check_conditions(d, "closure-cor2", &gate);
    // Atoms of S were covered at n = 0 above; v is the remaining object of S^v.
    if let Some(v) = d.distinguished.as_deref().and_then(|n| d.atom(n)) {
        if d.word_is_generic(std::slice::from_ref(&v.name), 0) == Some(true)
            && !v.strong
            && d.power_rule_for(&v.name, 0).is_none()
        {
            verdict.witnesses.push(Witness::new(
                "condition (1)",
                vec![v.name.clone()],
                format!("generic object {} lacks strong decomposition", v.name),
            ));
        }
    }
    if !verdict.witnesses.is_empty() {
        verdict.status = Status::Fails;
    }
    Ok(verdict)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Fail {
    Stuck(Word),
    Depth(Word),
}

struct Search<'a> {
    d: &'a ClosureDatum,
    v: &'a str,
    memo: HashMap<(Word, u32), Result<Node, Fail>>,
}

impl<'a> Search<'a> {
    fn word(&mut self, w: &Word, depth: u32) -> Result<Node, Fail> {
        if let Some(r) = self.memo.get(&(w.clone(), depth)) {
            return r.clone();
        }
        let r = self.word_uncached(w, depth);
        self.memo.insert((w.clone(), depth), r.clone());
        r
    }

    fn leaf(&self, w: &Word) -> Option<Node> {
        let (atom, n) = match w.atoms.as_slice() {
            [] if w.vpow > 0 => (self.v, w.vpow - 1),
            [a] => (a.as_str(), w.vpow),
            _ => return None,
        };
        let bare = if atom == self.v { w.vpow == 1 } else { n == 0 };
        if bare && self.d.atom(atom).is_some_and(|a| a.strong) {
            return Some(Node::Atom { atom: atom.to_string() });
        }
        self.d.power_rule_for(atom, n).map(|rule| Node::Power { atom: atom.to_string(), power: n, rule })
    }

    fn word_uncached(&mut self, w: &Word, depth: u32) -> Result<Node, Fail> {
        if let Some(n) = self.leaf(w) {
            return Ok(n);
        }
        if w.atoms.len() < 2 {
            return Err(Fail::Stuck(w.clone()));
        }
        if depth == 0 {
            return Err(Fail::Depth(w.clone()));
        }
        let mut first_fail: Option<Fail> = None;
        let mut saw_depth = None;
        // Pairs in lexicographic order of positions; sorted atoms make this
        // lexicographic in names too.
        let mut tried = std::collections::BTreeSet::new();
        for i in 0..w.atoms.len() {
            for j in i + 1..w.atoms.len() {
                let (a, b) = (&w.atoms[i], &w.atoms[j]);
                if !tried.insert((a.clone(), b.clone())) {
                    continue;
                }
                let Some(rule) = self.d.rule_for(a, b) else {
                    first_fail.get_or_insert(Fail::Stuck(w.clone()));
                    continue;
                };
                let mut rest = w.atoms.clone();
                rest.remove(j);
                rest.remove(i);
                let mut terms = Vec::new();
                let mut failed = None;
                for t in &self.d.rules[rule].terms {
                    let mut atoms = rest.clone();
                    atoms.push(t.atom.clone());
                    let child = Word::new(atoms, w.vpow + t.power);
                    match self.word(&child, depth - 1) {
                        Ok(n) => terms.push(Node::Retract { child: Box::new(n) }),
                        Err(f) => {
                            failed = Some(f);
                            break;
                        }
                    }
                }
                match failed {
                    None => return Ok(Node::Rewrite { target: w.clone(), pair: (a.clone(), b.clone()), rule, terms }),
                    Some(f @ Fail::Depth(_)) => {
                        saw_depth.get_or_insert(f);
                    }
                    Some(f) => {
                        first_fail.get_or_insert(f);
                    }
                }
            }
        }
        Err(saw_depth.or(first_fail).unwrap_or(Fail::Stuck(w.clone())))
    }

    fn nf(&mut self, nf: &Nf, depth: u32) -> Result<Node, Fail> {
        match nf {
            Nf::Word(w) => self.word(w, depth),
            Nf::Retract(x) => Ok(Node::Retract { child: Box::new(self.nf(x, depth)?) }),
            Nf::Sum(xs) => {
                Ok(Node::DirectSum { children: xs.iter().map(|x| self.nf(x, depth)).collect::<Result<_, _>>()? })
            }
        }
    }
}

fn preconditions(d: &ClosureDatum) -> Result<(), CertifyError> {
    let c1 = check_cor1(d)?;
    if c1.holds() {
        return Ok(());
    }
    if d.grading.is_some() && check_cor2(d)?.holds() {
        return Ok(());
    }
    let first = c1.witnesses.first().map(|w| w.detail.clone()).unwrap_or_default();
    Err(CertifyError::Preconditions(first))
}

fn check_atoms(d: &ClosureDatum, e: &Expr) -> Result<(), ClosureError> {
    let mut names = Vec::new();
    e.atoms(&mut names);
    match names.into_iter().find(|n| d.atom(n).is_none()) {
        Some(n) => Err(ClosureError::UnknownAtom(n)),
        None => Ok(()),
    }
}

/// Certificate that `expr` has strong decomposition, using at most `depth`
/// nested rewrites along any branch.
pub fn certify(d: &ClosureDatum, expr: &str, depth: u32) -> Result<Certificate, CertifyError> {
    let e: Expr = expr.parse().map_err(ClosureError::from)?;
    check_atoms(d, &e)?;
    preconditions(d)?;
    let v = d.distinguished.clone().ok_or(ClosureError::NoDistinguished)?;
    let nf = normalize(&e, &v);
    let mut s = Search { d, v: &v, memo: HashMap::new() };
    match s.nf(&nf, depth) {
        Ok(root) => Ok(Certificate { target: expr.to_string(), normal_form: nf, depth, root, v }),
        Err(Fail::Stuck(w)) => Err(CertifyError::Stuck { expr: w.display(&v) }),
        Err(Fail::Depth(w)) => Err(CertifyError::DepthExhausted { expr: w.display(&v), depth }),
    }
}

/// Object proven by a node, checked against the datum alone.
fn proven(d: &ClosureDatum, v: &str, n: &Node) -> Result<Nf, ReplayError> {
    let bad = |m: String| Err(ReplayError::BadNode(m));
    match n {
        Node::Atom { atom } => {
            let Some(a) = d.atom(atom) else { return bad(format!("undeclared atom {atom}")) };
            if !a.strong {
                return bad(format!("atom {atom} is not flagged strong"));
            }
            Ok(Nf::Word(if atom == v { Word::new(vec![], 1) } else { Word::new(vec![atom.clone()], 0) }))
        }
        Node::Power { atom, power, rule } => {
            let Some(r) = d.power_rules.get(*rule) else { return bad(format!("no power rule #{rule}")) };
            if r.atom != *atom || !r.powers.covers(*power) {
                return bad(format!("power rule #{rule} does not cover {atom} at n = {power}"));
            }
            Ok(Nf::Word(if atom == v { Word::new(vec![], power + 1) } else { Word::new(vec![atom.clone()], *power) }))
        }
        Node::Retract { child } => Ok(Nf::Retract(Box::new(proven(d, v, child)?))),
        Node::DirectSum { children } => {
            Ok(Nf::Sum(children.iter().map(|c| proven(d, v, c)).collect::<Result<_, _>>()?))
        }
        Node::Rewrite { target, pair, rule, terms } => {
            let Some(r) = d.rules.get(*rule) else { return bad(format!("no rule #{rule}")) };
            let (a, b) = pair;
            if !((r.left == *a && r.right == *b) || (r.left == *b && r.right == *a)) {
                return bad(format!("rule #{rule} is not for ({a},{b})"));
            }
            let mut rest = target.atoms.clone();
            for x in [a, b] {
                match rest.iter().position(|y| y == x) {
                    Some(p) => {
                        rest.remove(p);
                    }
                    None => return bad(format!("{} does not contain ({a},{b})", target.display(v))),
                }
            }
            if terms.len() != r.terms.len() {
                return bad(format!("rule #{rule} has {} terms, node has {}", r.terms.len(), terms.len()));
            }
            for (t, node) in r.terms.iter().zip(terms) {
                let mut atoms = rest.clone();
                atoms.push(t.atom.clone());
                let want = Nf::Retract(Box::new(Nf::Word(Word::new(atoms, target.vpow + t.power))));
                let got = proven(d, v, node)?;
                if got != want {
                    return bad(format!("term proves {}, rule needs {}", got.display(v), want.display(v)));
                }
            }
            Ok(Nf::Word(target.clone()))
        }
    }
}

/// Independent check: re-normalizes the target and recomputes what the
/// derivation proves from the datum's flags and rules.
pub fn replay(d: &ClosureDatum, cert: &Certificate) -> Result<Nf, ReplayError> {
    let v = d.distinguished.as_deref().ok_or(ReplayError::BadNode("datum has no distinguished atom".into()))?;
    let e: Expr = cert.target.parse().map_err(|e: super::ParseExprError| ReplayError::BadNode(e.to_string()))?;
    let want = normalize(&e, v);
    let got = proven(d, v, &cert.root)?;
    if got != want {
        return Err(ReplayError::Mismatch { expected: want.display(v), found: got.display(v) });
    }
    Ok(got)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Negligibility {
    Negligible,
    NonNegligible,
    Unknown,
}

impl Negligibility {
    pub fn as_str(self) -> &'static str {
        match self {
            Negligibility::Negligible => "negligible",
            Negligibility::NonNegligible => "non-negligible",
            Negligibility::Unknown => "unknown",
        }
    }
}

fn neg_of(d: &ClosureDatum, e: &Expr) -> Negligibility {
    use Negligibility::*;
    match e {
        Expr::Atom(a) => match d.atom(a).and_then(|x| x.negligible) {
            Some(true) => Negligible,
            Some(false) => NonNegligible,
            None => Unknown,
        },
        // Negligibles form a tensor ideal; a product of non-negligibles can
        // still be negligible.
        Expr::Tensor(xs) => {
            if xs.iter().any(|x| neg_of(d, x) == Negligible) {
                Negligible
            } else {
                Unknown
            }
        }
        Expr::Power(x, n) => {
            if *n > 0 && neg_of(d, x) == Negligible {
                Negligible
            } else {
                Unknown
            }
        }
        Expr::Sum(xs) => {
            let ns: Vec<_> = xs.iter().map(|x| neg_of(d, x)).collect();
            if ns.iter().all(|&n| n == Negligible) {
                Negligible
            } else if ns.contains(&NonNegligible) {
                NonNegligible
            } else {
                Unknown
            }
        }
        Expr::Retract(x) => match neg_of(d, x) {
            Negligible => Negligible,
            _ => Unknown,
        },
    }
}

pub fn negligible_closure(d: &ClosureDatum, expr: &str) -> Result<Negligibility, ClosureError> {
    let e: Expr = expr.parse()?;
    check_atoms(d, &e)?;
    Ok(neg_of(d, &e))
}

/// The 14 ordered words of length 1..=3 over two atoms, each tensored with
/// v^m for m = 0..=3: 56 expressions.
pub fn two_atom_expressions(a: &str, b: &str, v: &str) -> Vec<String> {
    let mut words: Vec<Vec<&str>> = vec![vec![]];
    let mut out = Vec::new();
    for _ in 0..3 {
        words = words.iter().flat_map(|w| [a, b].map(|x| [w.as_slice(), &[x]].concat())).collect();
        for w in &words {
            for m in 0..=3 {
                let mut s = w.join("*");
                match m {
                    0 => {}
                    1 => s.push_str(&format!("*{v}")),
                    _ => s.push_str(&format!("*{v}^{m}")),
                }
                out.push(s);
            }
        }
    }
    out
}
