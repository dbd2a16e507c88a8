//! Formal expressions `a*b + retract(a*v^2)` and their normal forms.

use std::fmt;

/// Parsed expression; `*` is ⊗, `+` is ⊕.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Atom(String),
    Tensor(Vec<Expr>),
    Sum(Vec<Expr>),
    Retract(Box<Expr>),
    Power(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse expression {input:?} at offset {offset}: {reason}")]
pub struct ParseExprError {
    pub input: String,
    pub offset: usize,
    pub reason: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, reason: impl Into<String>) -> Result<T, ParseExprError> {
        Err(ParseExprError { input: self.src.to_string(), offset: self.pos, reason: reason.into() })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let n = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(rest.len());
        if n == 0 || rest.starts_with(|c: char| c.is_ascii_digit()) {
            return None;
        }
        self.pos += n;
        Some(&rest[..n])
    }

    fn number(&mut self) -> Result<u32, ParseExprError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let n = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if n == 0 {
            return self.err("expected a non-negative integer exponent");
        }
        let v = rest[..n].parse().or_else(|_| self.err("exponent too large"))?;
        self.pos += n;
        Ok(v)
    }

    fn expr(&mut self) -> Result<Expr, ParseExprError> {
        let mut terms = vec![self.term()?];
        while self.eat('+') {
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 { terms.pop().expect("one") } else { Expr::Sum(terms) })
    }

    fn term(&mut self) -> Result<Expr, ParseExprError> {
        let mut fs = vec![self.factor()?];
        while self.eat('*') {
            fs.push(self.factor()?);
        }
        Ok(if fs.len() == 1 { fs.pop().expect("one") } else { Expr::Tensor(fs) })
    }

    fn factor(&mut self) -> Result<Expr, ParseExprError> {
        let base = self.primary()?;
        if self.eat('^') {
            let n = self.number()?;
            return Ok(Expr::Power(Box::new(base), n));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseExprError> {
        if self.eat('(') {
            let e = self.expr()?;
            if !self.eat(')') {
                return self.err("expected ')'");
            }
            return Ok(e);
        }
        match self.ident() {
            Some("retract") => {
                if !self.eat('(') {
                    return self.err("expected '(' after retract");
                }
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(Expr::Retract(Box::new(e)))
            }
            Some(name) => Ok(Expr::Atom(name.to_string())),
            None => self.err("expected an atom, '(' or retract("),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, pos: 0 };
        let e = p.expr()?;
        if p.peek().is_some() {
            return p.err("unexpected trailing input");
        }
        Ok(e)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Atom(a) => f.write_str(a),
            Expr::Tensor(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    match x {
                        Expr::Sum(_) => write!(f, "({x})")?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
            Expr::Sum(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            Expr::Retract(x) => write!(f, "retract({x})"),
            Expr::Power(x, n) => match **x {
                Expr::Atom(_) | Expr::Retract(_) => write!(f, "{x}^{n}"),
                _ => write!(f, "({x})^{n}"),
            },
        }
    }
}

impl Expr {
    pub fn atoms(&self, out: &mut Vec<String>) {
        match self {
            Expr::Atom(a) => out.push(a.clone()),
            Expr::Tensor(xs) | Expr::Sum(xs) => xs.iter().for_each(|x| x.atoms(out)),
            Expr::Retract(x) | Expr::Power(x, _) => x.atoms(out),
        }
    }
}

/// ⊗ of atoms of S (sorted, with repetition) and v^vpow. The braiding makes
/// the order irrelevant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub atoms: Vec<String>,
    pub vpow: u32,
}

impl Word {
    pub fn new(mut atoms: Vec<String>, vpow: u32) -> Self {
        atoms.sort();
        Word { atoms, vpow }
    }

    pub fn unit() -> Self {
        Word { atoms: vec![], vpow: 0 }
    }

    pub fn tensor(&self, o: &Word) -> Word {
        let mut a = self.atoms.clone();
        a.extend(o.atoms.iter().cloned());
        Word::new(a, self.vpow + o.vpow)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.vpow == 0
    }

    pub fn display(&self, v: &str) -> String {
        let mut parts: Vec<String> = self.atoms.clone();
        match self.vpow {
            0 => {}
            1 => parts.push(v.to_string()),
            n => parts.push(format!("{v}^{n}")),
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Normal form: a word, a retract of a normal form, or a direct sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nf {
    Word(Word),
    Retract(Box<Nf>),
    Sum(Vec<Nf>),
}

impl Nf {
    pub fn display(&self, v: &str) -> String {
        match self {
            Nf::Word(w) => w.display(v),
            Nf::Retract(x) => format!("retract({})", x.display(v)),
            Nf::Sum(xs) => xs.iter().map(|x| x.display(v)).collect::<Vec<_>>().join(" + "),
        }
    }
}

/// Flat list of summands, each a possibly-retracted word.
fn terms(e: &Expr, v: &str) -> Vec<(bool, Word)> {
    match e {
        Expr::Atom(a) if a == v => vec![(false, Word::new(vec![], 1))],
        Expr::Atom(a) => vec![(false, Word::new(vec![a.clone()], 0))],
        Expr::Sum(xs) => xs.iter().flat_map(|x| terms(x, v)).collect(),
        Expr::Retract(x) => terms(x, v).into_iter().map(|(_, w)| (true, w)).collect(),
        Expr::Tensor(xs) => xs.iter().fold(vec![(false, Word::unit())], |acc, x| product(&acc, &terms(x, v))),
        Expr::Power(x, n) => {
            let t = terms(x, v);
            (0..*n).fold(vec![(false, Word::unit())], |acc, _| product(&acc, &t))
        }
    }
}

/// retract(X) ⊗ Y is a retract of X ⊗ Y, and ⊗ distributes over ⊕.
fn product(a: &[(bool, Word)], b: &[(bool, Word)]) -> Vec<(bool, Word)> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (ra, wa) in a {
        for (rb, wb) in b {
            out.push((*ra || *rb, wa.tensor(wb)));
        }
    }
    out
}

/// Normal form of `e` with `v` the distinguished atom.
pub fn normalize(e: &Expr, v: &str) -> Nf {
    let mut ts: Vec<Nf> = terms(e, v)
        .into_iter()
        .map(|(r, w)| if r { Nf::Retract(Box::new(Nf::Word(w))) } else { Nf::Word(w) })
        .collect();
    if ts.len() == 1 {
        ts.pop().expect("one")
    } else {
        Nf::Sum(ts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let e: Expr = "a*b + retract(a * v^2)".parse().unwrap();
        assert_eq!(e.to_string(), "a*b + retract(a*v^2)");
        assert!("a*".parse::<Expr>().is_err());
        assert!("a b".parse::<Expr>().is_err());
        assert!("retract a".parse::<Expr>().is_err());
    }

    #[test]
    fn normal_forms() {
        let e: Expr = "(a + b)*retract(b*a)*v".parse().unwrap();
        let nf = normalize(&e, "v");
        assert_eq!(nf.display("v"), "retract(a*a*b*v) + retract(a*b*b*v)");
        let e: Expr = "b*a*a".parse().unwrap();
        assert_eq!(normalize(&e, "v"), Nf::Word(Word::new(vec!["a".into(), "a".into(), "b".into()], 0)));
    }
}
