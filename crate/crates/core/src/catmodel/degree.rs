//! Group elements for gradings and translation groups.
//!
//! A grading group is a product of cyclic factors (order 0 meaning Z) and an
//! optional torus factor C/Z. Torus elements are `n·ᾱ + s` with a formal
//! generic ᾱ and a rational shift `s` taken mod 1. Textual form: a single
//! component is written bare (`a+1/3`, `-a`, `2`), several components as a
//! tuple `(1,0,a)`; the torus component always comes last.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad group element {input:?}: {reason}")]
pub struct DegreeParseError {
    pub input: String,
    pub reason: String,
}

fn perr<T>(input: &str, reason: impl Into<String>) -> Result<T, DegreeParseError> {
    Err(DegreeParseError { input: input.to_string(), reason: reason.into() })
}

/// `generic·ᾱ + shift`, shift normalized into [0, 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusElem {
    pub generic: i64,
    pub shift: BigRational,
}

fn frac_mod1(r: &BigRational) -> BigRational {
    r - BigRational::from_integer(r.floor().to_integer())
}

impl TorusElem {
    pub fn new(generic: i64, shift: BigRational) -> Self {
        TorusElem { generic, shift: frac_mod1(&shift) }
    }

    pub fn zero() -> Self {
        TorusElem { generic: 0, shift: BigRational::zero() }
    }

    pub fn add(&self, o: &TorusElem) -> TorusElem {
        TorusElem::new(self.generic + o.generic, &self.shift + &o.shift)
    }

    pub fn neg(&self) -> TorusElem {
        TorusElem::new(-self.generic, -&self.shift)
    }

    pub fn is_zero(&self) -> bool {
        self.generic == 0 && self.shift.is_zero()
    }

    fn parse(s: &str) -> Result<TorusElem, DegreeParseError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return perr(s, "empty torus component");
        }
        let mut generic = 0i64;
        let mut shift = BigRational::zero();
        // split into signed chunks
        let mut chunks = Vec::new();
        let mut cur = String::new();
        for (i, ch) in t.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                chunks.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        chunks.push(cur);
        for chunk in chunks {
            let (neg, body) = match chunk.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, chunk.strip_prefix('+').unwrap_or(&chunk)),
            };
            if let Some(coef) = body.strip_suffix('a') {
                let n: i64 = if coef.is_empty() {
                    1
                } else {
                    match coef.trim_end_matches('*').parse() {
                        Ok(v) => v,
                        Err(_) => return perr(s, format!("bad multiple of a: {coef:?}")),
                    }
                };
                generic += if neg { -n } else { n };
            } else {
                let r = parse_rational(body).ok_or_else(|| DegreeParseError {
                    input: s.to_string(),
                    reason: format!("bad rational {body:?}"),
                })?;
                shift += if neg { -r } else { r };
            }
        }
        Ok(TorusElem::new(generic, shift))
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl fmt::Display for TorusElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shift = if self.shift.is_zero() {
            None
        } else if self.shift.is_integer() {
            Some(self.shift.numer().to_string())
        } else {
            Some(format!("{}/{}", self.shift.numer(), self.shift.denom()))
        };
        match (self.generic, shift) {
            (0, None) => write!(f, "0"),
            (0, Some(s)) => write!(f, "{s}"),
            (g, s) => {
                match g {
                    1 => write!(f, "a")?,
                    -1 => write!(f, "-a")?,
                    g => write!(f, "{g}a")?,
                }
                if let Some(s) = s {
                    write!(f, "+{s}")?;
                }
                Ok(())
            }
        }
    }
}

/// Shape of a product of cyclic groups and an optional torus.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupShape {
    pub cyclic: Vec<u64>,
    pub torus: bool,
}

/// Element of a [`GroupShape`]; cyclic parts reduced mod their order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree {
    pub cyclic: Vec<i64>,
    pub torus: Option<TorusElem>,
}

impl GroupShape {
    pub fn components(&self) -> usize {
        self.cyclic.len() + usize::from(self.torus)
    }

    pub fn zero(&self) -> Degree {
        Degree { cyclic: vec![0; self.cyclic.len()], torus: self.torus.then(TorusElem::zero) }
    }

    pub fn is_finite(&self) -> bool {
        !self.torus && self.cyclic.iter().all(|&o| o > 0)
    }

    pub fn normalize(&self, mut d: Degree) -> Degree {
        for (c, &o) in d.cyclic.iter_mut().zip(&self.cyclic) {
            if o > 0 {
                *c = c.mod_floor(&(o as i64));
            }
        }
        d
    }

    pub fn add(&self, a: &Degree, b: &Degree) -> Degree {
        let cyclic = a.cyclic.iter().zip(&b.cyclic).map(|(x, y)| x + y).collect();
        let torus = match (&a.torus, &b.torus) {
            (Some(x), Some(y)) => Some(x.add(y)),
            _ => None,
        };
        self.normalize(Degree { cyclic, torus })
    }

    pub fn neg(&self, a: &Degree) -> Degree {
        let cyclic = a.cyclic.iter().map(|x| -x).collect();
        self.normalize(Degree { cyclic, torus: a.torus.as_ref().map(TorusElem::neg) })
    }

    pub fn scale(&self, a: &Degree, n: i64) -> Degree {
        let cyclic = a.cyclic.iter().map(|x| x * n).collect();
        let torus =
            a.torus.as_ref().map(|t| TorusElem::new(t.generic * n, &t.shift * BigRational::from_integer(n.into())));
        self.normalize(Degree { cyclic, torus })
    }

    /// Finite-order test: zero on every Z factor and no ᾱ multiple.
    pub fn is_torsion(&self, d: &Degree) -> bool {
        let cyc = d.cyclic.iter().zip(&self.cyclic).all(|(&c, &o)| o > 0 || c == 0);
        let tor = d.torus.as_ref().is_none_or(|t| t.generic == 0);
        cyc && tor
    }

    pub fn parse(&self, s: &str) -> Result<Degree, DegreeParseError> {
        let t = s.trim();
        let n = self.components();
        let parts: Vec<&str> = if let Some(inner) = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
            inner.split(',').map(str::trim).collect()
        } else {
            vec![t]
        };
        if n == 0 {
            return if parts == ["0"] { Ok(self.zero()) } else { perr(s, "trivial group has only 0") };
        }
        if parts.len() != n {
            return perr(s, format!("expected {n} component(s), found {}", parts.len()));
        }
        let mut cyclic = Vec::with_capacity(self.cyclic.len());
        for p in &parts[..self.cyclic.len()] {
            match p.parse::<i64>() {
                Ok(v) => cyclic.push(v),
                Err(_) => return perr(s, format!("cyclic component {p:?} is not an integer")),
            }
        }
        let torus = if self.torus { Some(TorusElem::parse(parts[n - 1])?) } else { None };
        Ok(self.normalize(Degree { cyclic, torus }))
    }

    pub fn format(&self, d: &Degree) -> String {
        d.to_string()
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.cyclic.iter().map(|c| c.to_string()).collect();
        if let Some(t) = &self.torus {
            parts.push(t.to_string());
        }
        match parts.len() {
            0 => write!(f, "0"),
            1 => write!(f, "{}", parts[0]),
            _ => write!(f, "({})", parts.join(",")),
        }
    }
}

/// Membership predicate for the small symmetric subset X.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmallSubset {
    Elements(Vec<Degree>),
    /// All finite-order elements.
    Torsion,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingSpec {
    pub group: GroupShape,
    pub small: SmallSubset,
}

impl GradingSpec {
    pub fn in_small(&self, d: &Degree) -> bool {
        match &self.small {
            SmallSubset::Elements(xs) => xs.contains(d),
            SmallSubset::Torsion => self.group.is_torsion(d),
        }
    }

    pub fn is_generic(&self, d: &Degree) -> bool {
        !self.in_small(d)
    }

    /// First element x ∈ X with −x ∉ X.
    pub fn symmetry_violation(&self) -> Option<Degree> {
        match &self.small {
            SmallSubset::Torsion => None,
            SmallSubset::Elements(xs) => xs.iter().find(|x| !xs.contains(&self.group.neg(x))).cloned(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> GroupShape {
        GroupShape { cyclic: vec![], torus: true }
    }

    #[test]
    fn torus_parse_display() {
        let g = torus();
        for (s, out) in [
            ("a", "a"),
            ("-a", "-a"),
            ("a+1/3", "a+1/3"),
            ("a-1/3", "a+2/3"),
            ("4/3", "1/3"),
            ("0", "0"),
            ("2a", "2a"),
            ("1", "0"),
        ] {
            assert_eq!(g.parse(s).unwrap().to_string(), out, "{s}");
        }
        assert!(g.parse("b").is_err());
    }

    #[test]
    fn tuples_and_arithmetic() {
        let g = GroupShape { cyclic: vec![2, 0], torus: false };
        let x = g.parse("(1,3)").unwrap();
        let y = g.parse("(1,-1)").unwrap();
        assert_eq!(g.add(&x, &y).to_string(), "(0,2)");
        assert_eq!(g.neg(&x).to_string(), "(1,-3)");
        assert!(g.parse("1").is_err());
    }

    #[test]
    fn small_subset_predicates() {
        let g = torus();
        let spec = GradingSpec { group: g.clone(), small: SmallSubset::Elements(vec![g.zero()]) };
        assert!(spec.in_small(&g.parse("0").unwrap()));
        assert!(spec.is_generic(&g.parse("a").unwrap()));
        assert!(spec.symmetry_violation().is_none());
        let bad = GradingSpec { group: g.clone(), small: SmallSubset::Elements(vec![g.parse("1/3").unwrap()]) };
        assert_eq!(bad.symmetry_violation().unwrap().to_string(), "1/3");
        let tors = GradingSpec { group: g.clone(), small: SmallSubset::Torsion };
        assert!(tors.in_small(&g.parse("1/3").unwrap()));
        assert!(!tors.in_small(&g.parse("a+1/3").unwrap()));
    }
}
