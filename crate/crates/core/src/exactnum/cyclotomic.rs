//! Power-basis arithmetic in Q(ζ_m).
//!
//! An element is a coefficient vector of length φ(m) over the basis
//! 1, ζ, …, ζ^{φ(m)−1}. Reduction tables are built once per conductor and
//! shared through a process-wide cache.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) type Coeffs = Vec<BigRational>;

#[derive(Debug)]
pub(crate) struct CycloField {
    pub m: u32,
    pub phi: usize,
    /// `powers[p]` is ζ^p reduced to the power basis, for 0 ≤ p < m.
    powers: Vec<Coeffs>,
}

fn cache() -> &'static Mutex<HashMap<u32, Arc<CycloField>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn poly_cache() -> &'static Mutex<HashMap<u32, Vec<BigInt>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of Φ_m, lowest degree first.
pub(crate) fn cyclotomic_poly(m: u32) -> Vec<BigInt> {
    assert!(m >= 1);
    if let Some(p) = poly_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            let div = cyclotomic_poly(d);
            num = divide_monic(&num, &div);
        }
    }
    poly_cache().lock().unwrap().insert(m, num.clone());
    num
}

/// Exact quotient of `num` by the monic `den` (remainder must be zero).
fn divide_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (t, dc) in den.iter().enumerate() {
            rem[k + t] -= &c * dc;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

pub(crate) fn field(m: u32) -> Arc<CycloField> {
    if let Some(f) = cache().lock().unwrap().get(&m) {
        return f.clone();
    }
    let f = Arc::new(CycloField::build(m));
    cache().lock().unwrap().entry(m).or_insert(f).clone()
}

impl CycloField {
    fn build(m: u32) -> Self {
        let modulus = cyclotomic_poly(m);
        let phi = modulus.len() - 1;
        let mut powers = Vec::with_capacity(m as usize);
        // current = ζ^p as a vector of length phi
        let mut current: Vec<BigInt> = vec![BigInt::zero(); phi];
        current[0] = BigInt::one();
        for _ in 0..m {
            powers.push(current.iter().map(|c| BigRational::from_integer(c.clone())).collect());
            // multiply by x, then eliminate x^phi using the monic modulus
            let top = current[phi - 1].clone();
            for t in (1..phi).rev() {
                current[t] = current[t - 1].clone();
            }
            current[0] = BigInt::zero();
            if !top.is_zero() {
                for t in 0..phi {
                    current[t] -= &top * &modulus[t];
                }
            }
        }
        CycloField { m, phi, powers }
    }

    pub fn zero(&self) -> Coeffs {
        vec![BigRational::zero(); self.phi]
    }

    pub fn power(&self, p: i64) -> Coeffs {
        let p = p.mod_floor(&(self.m as i64)) as usize;
        self.powers[p].clone()
    }

    pub fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Coeffs {
        let mut out = self.zero();
        let mut wide = vec![BigRational::zero(); 2 * self.phi - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    wide[i + j] += ai * bj;
                }
            }
        }
        for (k, c) in wide.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < self.phi {
                out[k] += c;
            } else {
                let red = &self.powers[k % self.m as usize];
                for (t, r) in red.iter().enumerate() {
                    if !r.is_zero() {
                        out[t] += &c * r;
                    }
                }
            }
        }
        out
    }

    /// Multiplicative inverse of a nonzero element, by solving a·b = 1.
    pub fn inverse(&self, a: &[BigRational]) -> Option<Coeffs> {
        let n = self.phi;
        // column j of the matrix is a·ζ^j
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            cols.push(self.mul(a, &self.powers[j]));
        }
        let mut aug: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..n).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !aug[r][c].is_zero())?;
            aug.swap(c, p);
            let piv = aug[c][c].clone();
            for v in aug[c].iter_mut() {
                *v /= &piv;
            }
            for r in 0..n {
                if r != c && !aug[r][c].is_zero() {
                    let f = aug[r][c].clone();
                    for k in c..=n {
                        let sub = &f * &aug[c][k];
                        aug[r][k] -= sub;
                    }
                }
            }
        }
        Some(aug.into_iter().map(|mut row| row.pop().unwrap()).collect())
    }

    /// Re-express an element of Q(ζ_m) inside Q(ζ_target), `m | target`.
    pub fn lift(&self, a: &[BigRational], target: &CycloField) -> Coeffs {
        if target.m == self.m {
            return a.to_vec();
        }
        let step = (target.m / self.m) as i64;
        let mut out = target.zero();
        for (j, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (t, r) in target.power(j as i64 * step).iter().enumerate() {
                if !r.is_zero() {
                    out[t] += c * r;
                }
            }
        }
        out
    }
}

pub(crate) fn is_zero(a: &[BigRational]) -> bool {
    a.iter().all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_poly(3), ints(&[1, 1, 1]));
        assert_eq!(cyclotomic_poly(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_poly(15).len(), 9);
    }

    #[test]
    fn zeta_power_wraps() {
        let f = field(5);
        assert_eq!(f.power(5), f.power(0));
        assert_eq!(f.mul(&f.power(3), &f.power(4)), f.power(2));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = field(7);
        let mut a = f.power(1);
        a[0] += BigRational::from_integer(2.into());
        let inv = f.inverse(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), f.power(0));
    }
}
