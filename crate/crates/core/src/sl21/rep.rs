use std::sync::OnceLock;

use super::relations::check_relations;
use super::{Sl21Error, SYMMETRIZER};
use crate::exactnum::{check_ell, q_pow, quantum_integer_unchecked, CycScalar, ExactMatrix};

/// Coefficient of F₂ v^0_i ↦ c_i v^1_{i−1} in A_k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Convention {
    /// c_i = [i+1], as printed.
    Paper,
    /// c_i = [i], forced by E₂F₂ + F₂E₂ = [H₂] on v^0_i.
    Corrected,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Paper => "paper",
            Convention::Corrected => "corrected",
        }
    }

    pub fn f2_coefficient(self, i: i64, ell: u32) -> CycScalar {
        match self {
            Convention::Paper => quantum_integer_unchecked(i + 1, ell),
            Convention::Corrected => quantum_integer_unchecked(i, ell),
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Convention::Paper),
            "corrected" => Ok(Convention::Corrected),
            _ => Err(format!("unknown convention '{s}' (expected paper or corrected)")),
        }
    }
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Finite-dimensional weight module given by generator matrices.
///
/// Index 0 of each array is the first simple root, index 1 the second (odd) one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightModuleRep {
    pub ell: u32,
    pub name: String,
    pub labels: Vec<String>,
    /// Super degree of each basis vector, 0 or 1.
    pub parity: Vec<u8>,
    pub h: [ExactMatrix; 2],
    pub e: [ExactMatrix; 2],
    pub f: [ExactMatrix; 2],
    pub convention: Option<Convention>,
}

/// Parity of E_i and F_i.
pub(crate) const GENERATOR_ODD: [bool; 2] = [false, true];

impl WeightModuleRep {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// One-dimensional even module with every generator acting by zero.
    pub fn trivial(ell: u32) -> WeightModuleRep {
        let z = ExactMatrix::zeros(1, 1);
        WeightModuleRep {
            ell,
            name: "trivial".into(),
            labels: vec!["1".into()],
            parity: vec![0],
            h: [z.clone(), z.clone()],
            e: [z.clone(), z.clone()],
            f: [z.clone(), z],
            convention: None,
        }
    }

    /// (H₁, H₂) eigenvalues per basis vector.
    pub fn weights(&self) -> Result<Vec<[i64; 2]>, Sl21Error> {
        let n = self.dim();
        let mut out = vec![[0i64; 2]; n];
        for (r, h) in self.h.iter().enumerate() {
            for a in 0..n {
                for b in 0..n {
                    if a != b && !h.get(a, b).is_zero() {
                        return Err(Sl21Error::NonDiagonal(r + 1));
                    }
                }
                let v = h.get(a, a).as_integer().ok_or(Sl21Error::NonDiagonal(r + 1))?;
                out[a][r] = i64::try_from(v).map_err(|_| Sl21Error::NonDiagonal(r + 1))?;
            }
        }
        Ok(out)
    }

    /// K_i^{±1} = q^{±d_i H_i}.
    pub fn k(&self, i: usize, inverse: bool) -> Result<ExactMatrix, Sl21Error> {
        let w = self.weights()?;
        let s = if inverse { -1 } else { 1 };
        let diag: Vec<CycScalar> = w.iter().map(|x| q_pow(self.ell, s * SYMMETRIZER[i] * x[i])).collect();
        Ok(ExactMatrix::diagonal(&diag))
    }

    /// (−1)^{parity} on the diagonal.
    pub fn parity_operator(&self) -> ExactMatrix {
        let d: Vec<CycScalar> =
            self.parity.iter().map(|&p| CycScalar::from_integer(if p == 0 { 1 } else { -1 })).collect();
        ExactMatrix::diagonal(&d)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

fn ak_label(j: i64, i: i64) -> String {
    format!("v^{j}_{i}")
}

/// The (2k+1)-dimensional module A_k with basis v^j_i, j ∈ {0,1}, 0 ≤ i ≤ k−j.
/// The j = 0 vectors come first. Out-of-range targets are the zero vector.
pub fn build_ak(k: i64, ell: i64, convention: Convention) -> Result<WeightModuleRep, Sl21Error> {
    let l = check_ell(ell)?;
    if k < 1 || k > ell - 1 {
        return Err(Sl21Error::KOutOfRange { k, max: ell - 1 });
    }
    let basis: Vec<(i64, i64)> = (0..=1).flat_map(|j| (0..=k - j).map(move |i| (j, i))).collect();
    let n = basis.len();
    let idx = |j: i64, i: i64| -> Option<usize> {
        if !(0..=1).contains(&j) || i < 0 || i > k - j {
            return None;
        }
        Some(if j == 0 { i as usize } else { (k + 1 + i) as usize })
    };
    let qi = |n: i64| quantum_integer_unchecked(n, l);

    let mut h1 = ExactMatrix::zeros(n, n);
    let mut h2 = ExactMatrix::zeros(n, n);
    let mut e1 = ExactMatrix::zeros(n, n);
    let mut f1 = ExactMatrix::zeros(n, n);
    let mut e2 = ExactMatrix::zeros(n, n);
    let mut f2 = ExactMatrix::zeros(n, n);
    for (col, &(j, i)) in basis.iter().enumerate() {
        h1.set(col, col, CycScalar::from_integer(k - j - 2 * i));
        h2.set(col, col, CycScalar::from_integer(i + j));
        if let Some(r) = idx(j, i + 1) {
            f1.set(r, col, CycScalar::one());
        }
        if let Some(r) = idx(j, i - 1) {
            e1.set(r, col, &qi(i) * &qi(k - j + 1 - i));
        }
        if j == 1 {
            if let Some(r) = idx(0, i + 1) {
                e2.set(r, col, CycScalar::one());
            }
        } else if let Some(r) = idx(1, i - 1) {
            f2.set(r, col, convention.f2_coefficient(i, l));
        }
    }
    Ok(WeightModuleRep {
        ell: l,
        name: format!("A_{k}"),
        labels: basis.iter().map(|&(j, i)| ak_label(j, i)).collect(),
        parity: basis.iter().map(|&(j, _)| j as u8).collect(),
        h: [h1, h2],
        e: [e1, e2],
        f: [f1, f2],
        convention: Some(convention),
    })
}

/// Tensor product through the coproduct
/// Δ(E) = E⊗1 + K^{-1}⊗E, Δ(F) = F⊗K + 1⊗F, Δ(H) = H⊗1 + 1⊗H,
/// acting on the super tensor product: basis u⊗v at index a·dim(b) + b, and
/// (X⊗Y)(u⊗v) = (−1)^{|Y||u|} Xu⊗Yv.
pub fn tensor_rep(a: &WeightModuleRep, b: &WeightModuleRep) -> Result<WeightModuleRep, Sl21Error> {
    if a.ell != b.ell {
        return Err(Sl21Error::EllMismatch(a.ell, b.ell));
    }
    let ia = ExactMatrix::identity(a.dim());
    let ib = ExactMatrix::identity(b.dim());
    let pa = a.parity_operator();
    let sum = |x: ExactMatrix, y: ExactMatrix| x.add(&y).expect("same shape");
    let mul = |x: &ExactMatrix, y: &ExactMatrix| x.mul(y).expect("same shape");

    let mut h = Vec::new();
    let mut e = Vec::new();
    let mut f = Vec::new();
    for i in 0..2 {
        let kinv_a = a.k(i, true)?;
        let k_b = b.k(i, false)?;
        let sign_a = if GENERATOR_ODD[i] { pa.clone() } else { ia.clone() };
        h.push(sum(a.h[i].kron(&ib), ia.kron(&b.h[i])));
        e.push(sum(a.e[i].kron(&ib), mul(&kinv_a, &sign_a).kron(&b.e[i])));
        f.push(sum(a.f[i].kron(&k_b), sign_a.kron(&b.f[i])));
    }
    let mut labels = Vec::with_capacity(a.dim() * b.dim());
    let mut parity = Vec::with_capacity(a.dim() * b.dim());
    for (la, qa) in a.labels.iter().zip(&a.parity) {
        for (lb, pb) in b.labels.iter().zip(&b.parity) {
            labels.push(format!("{la}(x){lb}"));
            parity.push((qa + pb) % 2);
        }
    }
    let [h1, h2]: [ExactMatrix; 2] = h.try_into().expect("two");
    let [e1, e2]: [ExactMatrix; 2] = e.try_into().expect("two");
    let [f1, f2]: [ExactMatrix; 2] = f.try_into().expect("two");
    Ok(WeightModuleRep {
        ell: a.ell,
        name: format!("{} (x) {}", a.name, b.name),
        labels,
        parity,
        h: [h1, h2],
        e: [e1, e2],
        f: [f1, f2],
        convention: a.convention.or(b.convention),
    })
}

/// Convention used when none is requested: the first of (paper, corrected)
/// for which A_1 and A_2 at ℓ = 3 satisfy every defining relation.
pub fn default_convention() -> Convention {
    static PROBE: OnceLock<Convention> = OnceLock::new();
    *PROBE.get_or_init(|| {
        for c in [Convention::Paper, Convention::Corrected] {
            let ok = (1..=2).all(|k| build_ak(k, 3, c).map(|r| check_relations(&r).all_hold()).unwrap_or(false));
            if ok {
                return c;
            }
        }
        Convention::Corrected
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_shapes() {
        let r = build_ak(1, 3, Convention::Paper).unwrap();
        assert_eq!(r.dim(), 3);
        assert_eq!(r.weights().unwrap(), vec![[1, 0], [-1, 1], [0, 1]]);
        assert_eq!(r.parity, vec![0, 0, 1]);
    }

    #[test]
    fn k_range() {
        assert!(build_ak(0, 5, Convention::Corrected).is_err());
        assert!(build_ak(5, 5, Convention::Corrected).is_err());
        assert!(build_ak(4, 5, Convention::Corrected).is_ok());
        assert!(build_ak(1, 4, Convention::Corrected).is_err());
    }

    #[test]
    fn conventions_differ_only_in_f2() {
        let p = build_ak(3, 5, Convention::Paper).unwrap();
        let c = build_ak(3, 5, Convention::Corrected).unwrap();
        assert_eq!(p.h, c.h);
        assert_eq!(p.e, c.e);
        assert_eq!(p.f[0], c.f[0]);
        assert_ne!(p.f[1], c.f[1]);
    }
}
