//! (Super)characters as Laurent polynomials in x, y with a formal w = y^{2α}.
//!
//! A weight (H₁, H₂) = (a, b) contributes the monomial x^a y^{a+2b}.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::rep::WeightModuleRep;
use super::Sl21Error;

/// Integer Laurent polynomial in x, y keyed by (x-exponent, y-exponent).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly(BTreeMap<(i32, i32), i64>);

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, 0, 1)
    }

    pub fn monomial(x: i32, y: i32, c: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(x, y, c);
        p
    }

    pub fn add_term(&mut self, x: i32, y: i32, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.0.entry((x, y)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&(x, y));
        }
    }

    pub fn coeff(&self, x: i32, y: i32) -> i64 {
        self.0.get(&(x, y)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), i64)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = LaurentPoly::zero();
        for ((x, y), v) in self.terms() {
            out.add_term(x, y, v * c);
        }
        out
    }

    /// Value at x = y = 1.
    pub fn eval_at_one(&self) -> i64 {
        self.0.values().sum()
    }

    /// Highest monomial by y-degree, then x-degree.
    pub fn top_yx(&self) -> Option<((i32, i32), i64)> {
        self.terms().max_by_key(|((x, y), _)| (*y, *x))
    }

    fn top_xy(&self) -> Option<((i32, i32), i64)> {
        self.terms().max_by_key(|((x, y), _)| (*x, *y))
    }

    /// Exact quotient, when the divisor's top term in x is ±1 times a monomial.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        let ((dx, dy), dc) = d.top_xy()?;
        if dc.abs() != 1 || d.terms().filter(|((x, _), _)| *x == dx).count() != 1 {
            return None;
        }
        let min_x = self.terms().map(|((x, _), _)| x).min().unwrap_or(0);
        let d_min_x = d.terms().map(|((x, _), _)| x).min().unwrap_or(0);
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while let Some(((rx, ry), rc)) = rem.top_xy() {
            let (qx, qy) = (rx - dx, ry - dy);
            if qx + d_min_x < min_x {
                return None;
            }
            let t = LaurentPoly::monomial(qx, qy, rc * dc);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for ((x, y), c) in o.terms() {
            out.add_term(x, y, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self + &o.scale(-1)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for ((x1, y1), c1) in self.terms() {
            for ((x2, y2), c2) in o.terms() {
                out.add_term(x1 + x2, y1 + y2, c1 * c2);
            }
        }
        out
    }
}

fn fmt_var(f: &mut fmt::Formatter<'_>, v: char, e: i32, first: &mut bool) -> fmt::Result {
    if e == 0 {
        return Ok(());
    }
    if !*first {
        f.write_str("*")?;
    }
    *first = false;
    if e == 1 {
        write!(f, "{v}")
    } else {
        write!(f, "{v}^{e}")
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms in decreasing (y, x) order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by_key(|((x, y), _)| std::cmp::Reverse((*y, *x)));
        for (n, ((x, y), c)) in terms.into_iter().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if n == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            let mut first = true;
            if a != 1 || (x == 0 && y == 0) {
                write!(f, "{a}")?;
                first = false;
            }
            fmt_var(f, 'x', x, &mut first)?;
            fmt_var(f, 'y', y, &mut first)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Character χ⁺ and supercharacter χ⁻, both multiplied by w^{alpha_power}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharacterExpr {
    pub alpha_power: i32,
    pub plus: LaurentPoly,
    pub minus: LaurentPoly,
}

impl CharacterExpr {
    pub fn new(alpha_power: i32, plus: LaurentPoly, minus: LaurentPoly) -> Self {
        CharacterExpr { alpha_power, plus, minus }
    }

    pub fn zero(alpha_power: i32) -> Self {
        CharacterExpr::new(alpha_power, LaurentPoly::zero(), LaurentPoly::zero())
    }

    pub fn one() -> Self {
        CharacterExpr::new(0, LaurentPoly::one(), LaurentPoly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.plus.is_zero() && self.minus.is_zero()
    }

    /// Tensoring with the odd line C̄ negates the supercharacter only.
    pub fn flip_parity(&self) -> Self {
        CharacterExpr::new(self.alpha_power, self.plus.clone(), -&self.minus)
    }

    pub fn mul(&self, o: &CharacterExpr) -> CharacterExpr {
        CharacterExpr::new(self.alpha_power + o.alpha_power, &self.plus * &o.plus, &self.minus * &o.minus)
    }

    pub fn add(&self, o: &CharacterExpr) -> Result<CharacterExpr, Sl21Error> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.alpha_power != o.alpha_power {
            return Err(Sl21Error::AlphaMismatch(self.alpha_power, o.alpha_power));
        }
        Ok(CharacterExpr::new(self.alpha_power, &self.plus + &o.plus, &self.minus + &o.minus))
    }

    pub fn sub(&self, o: &CharacterExpr) -> Result<CharacterExpr, Sl21Error> {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, c: i64) -> CharacterExpr {
        CharacterExpr::new(self.alpha_power, self.plus.scale(c), self.minus.scale(c))
    }

    /// Total dimension: χ⁺ at x = y = w = 1.
    pub fn dimension(&self) -> i64 {
        self.plus.eval_at_one()
    }

    pub fn superdimension(&self) -> i64 {
        self.minus.eval_at_one()
    }
}

impl fmt::Display for CharacterExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = match self.alpha_power {
            0 => String::new(),
            1 => "w*".into(),
            a => format!("w^{a}*"),
        };
        write!(f, "chi+ = {w}({}); chi- = {w}({})", self.plus, self.minus)
    }
}

/// Typical module V(λ^k_{alpha·α + s}) twisted by C̄ when odd, where
/// s = shift + ℓ·eps and 0 ≤ shift < ℓ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightLabel {
    pub alpha: i32,
    pub k: u32,
    pub shift: u32,
    /// Power of σ(0̄,1) = ε split off the shift.
    pub eps: i64,
    pub parity: Parity,
}

impl WeightLabel {
    /// V(λ^k_{α+i}), even, no ε.
    pub fn new(k: u32, i: u32) -> Self {
        WeightLabel { alpha: 1, k, shift: i, eps: 0, parity: Parity::Even }
    }

    pub fn from_total_shift(alpha: i32, k: u32, s: i64, parity: Parity, ell: u32) -> Self {
        let l = i64::from(ell);
        WeightLabel { alpha, k, shift: s.rem_euclid(l) as u32, eps: s.div_euclid(l), parity }
    }

    pub fn total_shift(&self, ell: u32) -> i64 {
        i64::from(self.shift) + i64::from(ell) * self.eps
    }

    /// k = ℓ−1 modules have zero modified dimension.
    pub fn is_negligible(&self, ell: u32) -> bool {
        self.k + 1 == ell
    }

    pub fn in_alcove(&self, ell: u32) -> bool {
        self.k < ell
    }

    pub fn flipped(&self) -> Self {
        WeightLabel { parity: self.parity.flip(), ..*self }
    }
}

impl fmt::Display for WeightLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parity == Parity::Odd {
            f.write_str("Cbar*")?;
        }
        write!(f, "V[k={},i={}", self.k, self.shift)?;
        if self.eps != 0 {
            write!(f, ",eps={}", self.eps)?;
        }
        if self.alpha != 1 {
            write!(f, ",alpha={}", self.alpha)?;
        }
        f.write_str("]")
    }
}

/// X₀^± = (1 ± y/x)(1 ± xy).
pub fn x0(sign: i64) -> LaurentPoly {
    let a = &LaurentPoly::one() + &LaurentPoly::monomial(-1, 1, sign);
    let b = &LaurentPoly::one() + &LaurentPoly::monomial(1, 1, sign);
    &a * &b
}

fn x_minus_inv_x() -> LaurentPoly {
    &LaurentPoly::monomial(1, 0, 1) - &LaurentPoly::monomial(-1, 0, 1)
}

/// (x^n − x^{−n})/(x − x^{−1}), evaluated by exact division.
fn quantum_x(n: i32) -> LaurentPoly {
    let num = &LaurentPoly::monomial(n, 0, 1) - &LaurentPoly::monomial(-n, 0, 1);
    num.div_exact(&x_minus_inv_x()).expect("x - 1/x divides x^n - x^-n")
}

/// Closed form (y^n(x^{n+1}−x^{−n−1}) ± y^{n+1}(x^n−x^{−n}))/(x−x^{−1}).
pub fn chi_ak_closed_form(n: i32) -> CharacterExpr {
    let a = &LaurentPoly::monomial(n + 1, n, 1) - &LaurentPoly::monomial(-n - 1, n, 1);
    let b = &LaurentPoly::monomial(n, n + 1, 1) - &LaurentPoly::monomial(-n, n + 1, 1);
    let d = x_minus_inv_x();
    let plus = (&a + &b).div_exact(&d).expect("exact");
    let minus = (&a - &b).div_exact(&d).expect("exact");
    CharacterExpr::new(0, plus, minus)
}

/// χ^±(v) = y(x + 1/x) ± y², the (2|1)-dimensional standard module.
pub fn chi_standard() -> CharacterExpr {
    let even = &LaurentPoly::monomial(1, 1, 1) + &LaurentPoly::monomial(-1, 1, 1);
    let odd = LaurentPoly::monomial(0, 2, 1);
    CharacterExpr::new(0, &even + &odd, &even - &odd)
}

/// χ^±(V(λ^k_{α+s})) = X₀^± w y^{k+2s} (x^{k+1}−x^{−k−1})/(x−x^{−1}).
pub fn character_of_label(label: &WeightLabel, ell: u32) -> CharacterExpr {
    let s = label.total_shift(ell);
    let y = LaurentPoly::monomial(0, label.k as i32 + 2 * s as i32, 1);
    let core = &y * &quantum_x(label.k as i32 + 1);
    let chi = CharacterExpr::new(label.alpha, &x0(1) * &core, &x0(-1) * &core);
    match label.parity {
        Parity::Even => chi,
        Parity::Odd => chi.flip_parity(),
    }
}

/// Sum of x^a y^{a+2b} over basis vectors of weight (a, b), with the
/// supercharacter signed by parity.
pub fn character_of_rep(rep: &WeightModuleRep) -> Result<CharacterExpr, Sl21Error> {
    let w = rep.weights()?;
    let mut plus = LaurentPoly::zero();
    let mut minus = LaurentPoly::zero();
    for (wt, p) in w.iter().zip(&rep.parity) {
        let (a, b) = (wt[0] as i32, wt[1] as i32);
        plus.add_term(a, a + 2 * b, 1);
        minus.add_term(a, a + 2 * b, if *p == 0 { 1 } else { -1 });
    }
    Ok(CharacterExpr::new(0, plus, minus))
}

/// Greedy peeling into typical labels. The top monomial x^K y^{K+2s+2} of
/// the remaining character fixes (k, s) = (K, s). Its χ⁺ and χ⁻
/// coefficients give the even and odd multiplicities.
pub fn decompose_typical(chi: &CharacterExpr, ell: u32) -> Result<Vec<WeightLabel>, Sl21Error> {
    let residual = |c: &CharacterExpr| Sl21Error::NotTypical(c.to_string());
    let mut rest = chi.clone();
    let mut out = Vec::new();
    if rest.is_zero() {
        return Ok(out);
    }
    if rest.alpha_power == 0 {
        return Err(residual(&rest));
    }
    let budget = rest.plus.terms().map(|(_, c)| c.unsigned_abs()).sum::<u64>() + 1;
    for _ in 0..budget {
        let Some(((kx, yy), c)) = rest.plus.top_yx() else {
            break;
        };
        let cm = rest.minus.coeff(kx, yy);
        let s2 = yy - kx - 2;
        if kx < 0 || s2 % 2 != 0 || (c + cm) % 2 != 0 {
            return Err(residual(&rest));
        }
        let (m_even, m_odd) = ((c + cm) / 2, (c - cm) / 2);
        if m_even < 0 || m_odd < 0 {
            return Err(residual(&rest));
        }
        let s = i64::from(s2 / 2);
        for (m, p) in [(m_even, Parity::Even), (m_odd, Parity::Odd)] {
            if m == 0 {
                continue;
            }
            let label = WeightLabel::from_total_shift(rest.alpha_power, kx as u32, s, p, ell);
            rest = rest.sub(&character_of_label(&label, ell).scale(m))?;
            out.extend(std::iter::repeat_n(label, m as usize));
        }
        if rest.is_zero() {
            out.sort();
            return Ok(out);
        }
    }
    Err(residual(&rest))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_small() {
        let c = chi_ak_closed_form(1);
        assert_eq!(c, chi_standard());
        assert_eq!(c.dimension(), 3);
        assert_eq!(c.superdimension(), 1);
    }

    #[test]
    fn division_rejects_inexact() {
        let p = &LaurentPoly::monomial(2, 0, 1) + &LaurentPoly::one();
        assert!(p.div_exact(&x_minus_inv_x()).is_none());
        assert_eq!(quantum_x(3).to_string(), "x^2 + 1 + x^-2");
    }

    #[test]
    fn typical_k0_is_x0_times_w() {
        let c = character_of_label(&WeightLabel::new(0, 0), 5);
        assert_eq!(c.plus, x0(1));
        assert_eq!(c.minus, x0(-1));
        assert_eq!(c.alpha_power, 1);
    }

    #[test]
    fn single_peel() {
        let l = WeightLabel::new(2, 3);
        assert_eq!(decompose_typical(&character_of_label(&l, 5), 5).unwrap(), vec![l]);
        assert!(decompose_typical(&chi_standard(), 5).is_err());
    }
}
