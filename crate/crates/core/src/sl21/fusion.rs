//! A = A_{ℓ−1} acting on typical labels modulo negligible modules.

use std::collections::{BTreeMap, HashMap};

use super::character::{character_of_label, chi_ak_closed_form, chi_standard, decompose_typical, Parity, WeightLabel};
use super::Sl21Error;

/// A ⊗ V(λ^k_{α+i}) ≃ C̄ ⊗ V(λ^{ℓ−2−k}_{α+i+k+1}); overflow of the shift past
/// ℓ−1 is carried into ε.
pub fn fuse_a(label: &WeightLabel, ell: u32) -> Result<WeightLabel, Sl21Error> {
    if label.k + 2 > ell {
        return Err(Sl21Error::NegligibleInput(label.to_string()));
    }
    let s = label.total_shift(ell) + i64::from(label.k) + 1;
    Ok(WeightLabel::from_total_shift(label.alpha, ell - 2 - label.k, s, label.parity.flip(), ell))
}

/// A ⊗ A ⊗ V = σ(0̄,1) ⊗ V: the label comes back with ε raised by one.
pub fn fuse_a_twice(label: &WeightLabel, ell: u32) -> Result<WeightLabel, Sl21Error> {
    fuse_a(&fuse_a(label, ell)?, ell)
}

/// Signed multiset of labels, i.e. an element of the Grothendieck group of
/// the quotient by negligibles. Keys are (k, total shift, parity).
type Classes = BTreeMap<(u32, i64, Parity), i64>;

fn add_into(acc: &mut Classes, other: &Classes, sign: i64) {
    for (key, m) in other {
        let e = acc.entry(*key).or_insert(0);
        *e += sign * m;
        if *e == 0 {
            acc.remove(key);
        }
    }
}

struct Engine {
    ell: u32,
    alpha: i32,
    memo: HashMap<(u32, i64), Classes>,
}

impl Engine {
    fn label(&self, k: u32, s: i64, p: Parity) -> WeightLabel {
        WeightLabel::from_total_shift(self.alpha, k, s, p, self.ell)
    }

    /// Decompose a character and drop negligible summands.
    fn reduce(&self, chi: &super::CharacterExpr) -> Result<Classes, Sl21Error> {
        let mut out = Classes::new();
        for l in decompose_typical(chi, self.ell)? {
            if !l.in_alcove(self.ell) {
                return Err(Sl21Error::NotSimple(format!("{l} lies outside the alcove")));
            }
            if l.is_negligible(self.ell) {
                continue;
            }
            *out.entry((l.k, l.total_shift(self.ell), l.parity)).or_insert(0) += 1;
        }
        Ok(out)
    }

    /// (Σ m_l V_l) ⊗ v, reduced.
    fn times_standard(&self, x: &Classes) -> Result<Classes, Sl21Error> {
        let v = chi_standard();
        let mut out = Classes::new();
        for (&(k, s, p), &m) in x {
            let chi = character_of_label(&self.label(k, s, p), self.ell).mul(&v);
            add_into(&mut out, &self.reduce(&chi)?, m);
        }
        Ok(out)
    }

    /// A ⊗ V(λ^k_{α+s}), even, by induction on k. The base case k = 0 is
    /// read off χ(A)·χ(V⁰) directly. For k ≥ 1 the decomposition of
    /// V^{k−1}_s ⊗ v contains V^k_s once, and every other summand has smaller k, so
    /// A⊗V^k_s = (A⊗V^{k−1}_s)⊗v − Σ_{other summands W} A⊗W.
    fn a_times(&mut self, k: u32, s: i64) -> Result<Classes, Sl21Error> {
        if let Some(c) = self.memo.get(&(k, s)) {
            return Ok(c.clone());
        }
        let out = if k == 0 {
            let a = chi_ak_closed_form(self.ell as i32 - 1);
            let chi = a.mul(&character_of_label(&self.label(0, s, Parity::Even), self.ell));
            self.reduce(&chi)?
        } else {
            let j = k - 1;
            let mut others =
                self.reduce(&character_of_label(&self.label(j, s, Parity::Even), self.ell).mul(&chi_standard()))?;
            if others.remove(&(k, s, Parity::Even)) != Some(1) {
                return Err(Sl21Error::NotSimple(format!("V^{j} (x) v does not contain V^{k} once")));
            }
            let prev = self.a_times(j, s)?;
            let mut out = self.times_standard(&prev)?;
            for ((kk, ss, p), m) in others {
                if kk >= k {
                    return Err(Sl21Error::NotSimple(format!("V^{j} (x) v has a summand with k = {kk}")));
                }
                let part: Classes = self
                    .a_times(kk, ss)?
                    .into_iter()
                    .map(|((a, b, q), n)| {
                        let q = if p == Parity::Odd { q.flip() } else { q };
                        ((a, b, q), n)
                    })
                    .collect();
                add_into(&mut out, &part, -m);
            }
            out
        };
        self.memo.insert((k, s), out.clone());
        Ok(out)
    }
}

/// A ⊗ label computed from characters alone, following the induction on k
/// and discarding negligible summands at every step.
pub fn fuse_a_by_characters(label: &WeightLabel, ell: u32) -> Result<WeightLabel, Sl21Error> {
    if label.k + 2 > ell {
        return Err(Sl21Error::NegligibleInput(label.to_string()));
    }
    let mut eng = Engine { ell, alpha: label.alpha, memo: HashMap::new() };
    let classes = eng.a_times(label.k, label.total_shift(ell))?;
    let mut it = classes.iter();
    match (it.next(), it.next()) {
        (Some((&(k, s, p), &1)), None) => {
            let p = if label.parity == Parity::Odd { p.flip() } else { p };
            Ok(eng.label(k, s, p))
        }
        _ => Err(Sl21Error::NotSimple(
            classes
                .iter()
                .map(|((k, s, p), m)| format!("{m}*({k},{s},{})", p.as_str()))
                .collect::<Vec<_>>()
                .join(" + "),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ell3_examples() {
        let out = fuse_a(&WeightLabel::new(0, 0), 3).unwrap();
        assert_eq!((out.k, out.shift, out.parity), (1, 1, Parity::Odd));
        let out = fuse_a(&WeightLabel::new(3, 2), 5).unwrap();
        assert_eq!((out.k, out.shift, out.eps, out.parity), (0, 1, 1, Parity::Odd));
        assert!(fuse_a(&WeightLabel::new(2, 0), 3).is_err());
    }

    #[test]
    fn by_characters_ell3() {
        for k in 0..2 {
            for i in 0..3 {
                let l = WeightLabel::new(k, i);
                assert_eq!(fuse_a_by_characters(&l, 3).unwrap(), fuse_a(&l, 3).unwrap(), "{l}");
            }
        }
    }
}
