use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cyclotomic::{self, Coeffs};

/// Formal invertible variables adjoined to the cyclotomic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    U,
    X,
    Y,
    W,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::U, Var::X, Var::Y, Var::W];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        match self {
            Var::U => 'u',
            Var::X => 'x',
            Var::Y => 'y',
            Var::W => 'w',
        }
    }
}

/// Exponent vector over (u, x, y, w).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub [i32; 4]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; 4])
    }

    pub fn var(v: Var, e: i32) -> Self {
        let mut m = [0; 4];
        m[v.index()] = e;
        Monomial(m)
    }

    pub fn mul(self, o: Monomial) -> Monomial {
        let mut m = self.0;
        for k in 0..4 {
            m[k] += o.0[k];
        }
        Monomial(m)
    }

    pub fn div(self, o: Monomial) -> Monomial {
        let mut m = self.0;
        for k in 0..4 {
            m[k] -= o.0[k];
        }
        Monomial(m)
    }

    pub fn is_one(self) -> bool {
        self.0 == [0; 4]
    }

    fn is_polynomial(self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }
}

/// Element of Q(ζ_m)[u^±1, x^±1, y^±1, w^±1].
///
/// Each monomial carries a power-basis coefficient vector of length φ(m).
/// Zero coefficient vectors are never stored, so structural emptiness is
/// the zero test. Values with different conductors compare equal when they
/// agree after lifting to a common field.
#[derive(Clone, Debug)]
pub struct CycScalar {
    conductor: u32,
    terms: BTreeMap<Monomial, Coeffs>,
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

impl CycScalar {
    pub fn zero() -> Self {
        CycScalar { conductor: 1, terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Monomial::one(), vec![r]);
        }
        CycScalar { conductor: 1, terms }
    }

    /// ζ_m^k.
    pub fn zeta(m: u32, k: i64) -> Self {
        assert!(m >= 1, "conductor must be positive");
        let f = cyclotomic::field(m);
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::one(), f.power(k));
        CycScalar { conductor: m, terms }
    }

    pub fn var(v: Var, e: i32) -> Self {
        Self::monomial(Monomial::var(v, e))
    }

    pub fn monomial(m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, vec![BigRational::one()]);
        CycScalar { conductor: 1, terms }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Number of monomials with a nonzero coefficient.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Returns the value if it is a plain rational number.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        if !m.is_one() || c.iter().skip(1).any(|x| !x.is_zero()) {
            return None;
        }
        Some(c[0].clone())
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// True when the value is free of u, x, y, w.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// Re-express in Q(ζ_target); `target` must be a multiple of the conductor.
    pub fn lift_to(&self, target: u32) -> CycScalar {
        assert!(target.is_multiple_of(self.conductor), "cannot lift conductor {} to {}", self.conductor, target);
        if target == self.conductor {
            return self.clone();
        }
        let from = cyclotomic::field(self.conductor);
        let to = cyclotomic::field(target);
        let terms = self.terms.iter().map(|(m, c)| (*m, from.lift(c, &to))).collect();
        CycScalar { conductor: target, terms }
    }

    fn common(&self, other: &CycScalar) -> (CycScalar, CycScalar) {
        let l = lcm(self.conductor, other.conductor);
        (self.lift_to(l), other.lift_to(l))
    }

    fn add_impl(&self, other: &CycScalar, negate: bool) -> CycScalar {
        let (a, b) = if self.conductor == other.conductor { (self.clone(), other.clone()) } else { self.common(other) };
        let mut terms = a.terms;
        for (m, c) in b.terms {
            let entry = terms.entry(m).or_insert_with(|| vec![BigRational::zero(); c.len()]);
            for (t, v) in c.into_iter().enumerate() {
                if negate {
                    entry[t] -= v;
                } else {
                    entry[t] += v;
                }
            }
            if cyclotomic::is_zero(entry) {
                terms.remove(&m);
            }
        }
        CycScalar { conductor: a.conductor, terms }
    }

    fn mul_impl(&self, other: &CycScalar) -> CycScalar {
        if self.is_zero() || other.is_zero() {
            return CycScalar::zero();
        }
        let (a, b) = if self.conductor == other.conductor {
            (std::borrow::Cow::Borrowed(self), std::borrow::Cow::Borrowed(other))
        } else {
            let (x, y) = self.common(other);
            (std::borrow::Cow::Owned(x), std::borrow::Cow::Owned(y))
        };
        let f = cyclotomic::field(a.conductor);
        let mut terms: BTreeMap<Monomial, Coeffs> = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let prod = f.mul(ca, cb);
                let m = ma.mul(*mb);
                let entry = terms.entry(m).or_insert_with(|| f.zero());
                for (t, v) in prod.into_iter().enumerate() {
                    entry[t] += v;
                }
            }
        }
        terms.retain(|_, c| !cyclotomic::is_zero(c));
        CycScalar { conductor: a.conductor, terms }
    }

    pub fn scale_rational(&self, r: &BigRational) -> CycScalar {
        if r.is_zero() {
            return CycScalar::zero();
        }
        let terms = self.terms.iter().map(|(m, c)| (*m, c.iter().map(|x| x * r).collect())).collect();
        CycScalar { conductor: self.conductor, terms }
    }

    /// A unit of the Laurent ring: a single monomial times a nonzero field element.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn inverse(&self) -> Option<CycScalar> {
        if !self.is_unit() {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let f = cyclotomic::field(self.conductor);
        let inv = f.inverse(c)?;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::one().div(*m), inv);
        Some(CycScalar { conductor: self.conductor, terms })
    }

    pub fn pow(&self, e: i64) -> Option<CycScalar> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = CycScalar::one();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &sq;
            }
            n >>= 1;
            if n > 0 {
                sq = &sq * &sq;
            }
        }
        Some(acc)
    }

    fn leading(&self) -> Option<(&Monomial, &Coeffs)> {
        self.terms.iter().next_back()
    }

    fn min_exponents(&self) -> Monomial {
        let mut out = [i32::MAX; 4];
        for m in self.terms.keys() {
            for k in 0..4 {
                out[k] = out[k].min(m.0[k]);
            }
        }
        if self.terms.is_empty() {
            out = [0; 4];
        }
        Monomial(out)
    }

    fn shift(&self, by: Monomial) -> CycScalar {
        let terms = self.terms.iter().map(|(m, c)| (m.mul(by), c.clone())).collect();
        CycScalar { conductor: self.conductor, terms }
    }

    /// Exact quotient `self / d` inside the Laurent ring, or `None` if `d`
    /// does not divide `self` (or `d` is zero).
    pub fn div_exact(&self, d: &CycScalar) -> Option<CycScalar> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(CycScalar::zero());
        }
        if d.is_unit() {
            return Some(self * &d.inverse()?);
        }
        let (a, b) = self.common(d);
        let sa = a.min_exponents();
        let sb = b.min_exponents();
        let mut rem = a.shift(Monomial::one().div(sa));
        let b = b.shift(Monomial::one().div(sb));
        let f = cyclotomic::field(rem.conductor);
        let (lm_b, lc_b) = b.leading().map(|(m, c)| (*m, c.clone()))?;
        let lc_inv = f.inverse(&lc_b)?;
        let mut quot = CycScalar { conductor: rem.conductor, terms: BTreeMap::new() };
        while let Some((lm_r, lc_r)) = rem.leading().map(|(m, c)| (*m, c.clone())) {
            let qm = lm_r.div(lm_b);
            if !qm.is_polynomial() {
                return None;
            }
            let mut t = CycScalar { conductor: rem.conductor, terms: BTreeMap::new() };
            t.terms.insert(qm, f.mul(&lc_r, &lc_inv));
            rem = &rem - &(&t * &b);
            quot = &quot + &t;
        }
        Some(quot.shift(sa.div(sb)))
    }

    /// Evaluate at ζ_m = exp(2πi/m) and the given values of (u, x, y, w).
    pub fn to_complex(&self, vars: &[Complex64; 4]) -> Complex64 {
        let m = self.conductor as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for (mono, c) in &self.terms {
            let mut field_val = Complex64::new(0.0, 0.0);
            for (j, r) in c.iter().enumerate() {
                if r.is_zero() {
                    continue;
                }
                let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / m);
                field_val += z * r.to_f64().unwrap_or(f64::NAN);
            }
            let mut mv = Complex64::new(1.0, 0.0);
            for k in 0..4 {
                mv *= vars[k].powi(mono.0[k]);
            }
            total += field_val * mv;
        }
        total
    }

    /// Substitute `v := value` (a unit) everywhere.
    pub fn substitute(&self, v: Var, value: &CycScalar) -> Option<CycScalar> {
        let mut out = CycScalar::zero();
        for (m, c) in &self.terms {
            let e = m.0[v.index()];
            let mut rest = *m;
            rest.0[v.index()] = 0;
            let mut term = CycScalar { conductor: self.conductor, terms: BTreeMap::new() };
            term.terms.insert(rest, c.clone());
            out = &out + &(&term * &value.pow(e as i64)?);
        }
        Some(out)
    }

    /// Drop to the smallest conductor that still represents the value.
    /// Used for display so equal values print identically.
    pub fn normalized(&self) -> CycScalar {
        let m = self.conductor;
        if m == 1 || self.is_zero() {
            return CycScalar { conductor: 1, terms: self.terms.clone() };
        }
        let mut divisors: Vec<u32> = (1..m).filter(|d| m.is_multiple_of(*d)).collect();
        divisors.sort();
        for d in divisors {
            if let Some(s) = self.try_descend(d) {
                return s;
            }
        }
        self.clone()
    }

    fn try_descend(&self, d: u32) -> Option<CycScalar> {
        // Solve for coefficients in Q(ζ_d) whose lift matches.
        let small = cyclotomic::field(d);
        let big = cyclotomic::field(self.conductor);
        let basis: Vec<Coeffs> = (0..small.phi)
            .map(|j| {
                let mut e = small.zero();
                e[j] = BigRational::one();
                small.lift(&e, &big)
            })
            .collect();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(*m, solve_in_span(&basis, c)?);
        }
        Some(CycScalar { conductor: d, terms })
    }

    /// Iterate (monomial, ζ-power, rational) over nonzero atomic terms.
    fn atoms(&self) -> Vec<(Monomial, usize, BigRational)> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            for (j, r) in c.iter().enumerate() {
                if !r.is_zero() {
                    out.push((*m, j, r.clone()));
                }
            }
        }
        out
    }
}

/// Express `target` as a rational combination of `basis` vectors, if possible.
fn solve_in_span(basis: &[Coeffs], target: &Coeffs) -> Option<Coeffs> {
    let n = basis.len();
    let rows = target.len();
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut r: Vec<BigRational> = (0..n).map(|j| basis[j][i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for v in a[r].iter_mut() {
            *v /= &piv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in c..=n {
                    let s = &f * &a[r][k];
                    a[i][k] -= s;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut out = vec![BigRational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        out[c] = a[i][n].clone();
    }
    Some(out)
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.terms == other.terms;
        }
        let (a, b) = self.common(other);
        a.terms == b.terms
    }
}

impl Eq for CycScalar {}

impl Default for CycScalar {
    fn default() -> Self {
        CycScalar::zero()
    }
}

impl From<i64> for CycScalar {
    fn from(n: i64) -> Self {
        CycScalar::from_integer(n)
    }
}

impl From<BigRational> for CycScalar {
    fn from(r: BigRational) -> Self {
        CycScalar::from_rational(r)
    }
}

impl Zero for CycScalar {
    fn zero() -> Self {
        CycScalar::zero()
    }
    fn is_zero(&self) -> bool {
        CycScalar::is_zero(self)
    }
}

impl One for CycScalar {
    fn one() -> Self {
        CycScalar::one()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a CycScalar> for &'a CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &'a CycScalar) -> CycScalar {
                let f: fn(&CycScalar, &CycScalar) -> CycScalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: CycScalar) -> CycScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &'a CycScalar) -> CycScalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_impl(b, false));
forward_binop!(Sub, sub, |a, b| a.add_impl(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));

impl AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        *self = self.add_impl(rhs, false);
    }
}

impl SubAssign<&CycScalar> for CycScalar {
    fn sub_assign(&mut self, rhs: &CycScalar) {
        *self = self.add_impl(rhs, true);
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        self.scale_rational(&-BigRational::one())
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

impl std::iter::Sum for CycScalar {
    fn sum<I: Iterator<Item = CycScalar>>(iter: I) -> Self {
        iter.fold(CycScalar::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for CycScalar {
    fn product<I: Iterator<Item = CycScalar>>(iter: I) -> Self {
        iter.fold(CycScalar::one(), |a, b| a * b)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.normalized();
        let atoms = s.atoms();
        if atoms.is_empty() {
            return write!(f, "0");
        }
        for (n, (mono, j, r)) in atoms.iter().enumerate() {
            let neg = r.is_negative();
            let mag = r.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() {
                factors.push(fmt_rational(&mag));
            }
            if *j == 1 {
                factors.push(format!("z{}", s.conductor));
            } else if *j > 1 {
                factors.push(format!("z{}^{}", s.conductor, j));
            }
            for v in Var::ALL {
                let e = mono.0[v.index()];
                match e {
                    0 => {}
                    1 => factors.push(v.name().to_string()),
                    _ => factors.push(format!("{}^{}", v.name(), e)),
                }
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Parity helper: (-1)^n as a scalar.
pub fn sign(n: i64) -> CycScalar {
    if n.is_even() {
        CycScalar::one()
    } else {
        -CycScalar::one()
    }
}
