//! Symbolic datum for the generic degrees ±ᾱ of the sl(2|1) category.
//!
//! Here u stands for q^{ᾱℓ}. Row x and row τx of S′ are proportional with
//! factor −u² in degree ᾱ (−u^{−2} in degree −ᾱ). Entries between the
//! representatives of the τ-pairs are a placeholder matrix M = I + J.

use super::character::WeightLabel;
use super::fusion::fuse_a;
use super::Sl21Error;
use crate::catmodel::{
    DegreeData, GradingSpec, GroupShape, ModularDatum, Placeholder, PsiEntry, RowRelation, SPrimeBlock, SmallSubset,
    TranslationSpec,
};
use crate::exactnum::{check_ell, CycScalar, ExactMatrix, Var};

pub fn label_index(k: u32, i: u32, ell: u32) -> usize {
    (k * ell + i) as usize
}

pub fn label_name(k: u32, i: u32) -> String {
    format!("k{k}i{i}")
}

/// Labels (k, i) in index order.
pub(crate) fn theta(ell: u32) -> Vec<(u32, u32)> {
    (0..ell - 1).flat_map(|k| (0..ell).map(move |i| (k, i))).collect()
}

/// τ(k, i) = (ℓ−2−k, i+k+1 mod ℓ).
pub(crate) fn tau(k: u32, i: u32, ell: u32) -> (u32, u32) {
    let t = fuse_a(&WeightLabel::new(k, i), ell).expect("k <= ell-2");
    (t.k, t.shift)
}

/// A ⊗ V(λ^k_{α+i}) stays inside Θ without passing through σ(0̄,1).
pub(crate) fn non_wrapping(k: u32, i: u32, ell: u32) -> bool {
    i + k + 1 < ell
}

/// −u^{2·sign}, the row factor in degree sign·ᾱ.
pub(crate) fn row_factor(sign: i32) -> CycScalar {
    -CycScalar::var(Var::U, 2 * sign)
}

struct Layout {
    /// Representative position for each index.
    rep_of: Vec<usize>,
    /// Whether the index is a non-wrapping (scaled) member.
    scaled: Vec<bool>,
    reps: usize,
}

fn layout(ell: u32) -> Layout {
    let labels = theta(ell);
    let mut rep_pos = vec![usize::MAX; labels.len()];
    let mut reps = 0;
    for &(k, i) in &labels {
        if !non_wrapping(k, i, ell) {
            rep_pos[label_index(k, i, ell)] = reps;
            reps += 1;
        }
    }
    let mut rep_of = vec![0; labels.len()];
    let mut scaled = vec![false; labels.len()];
    for &(k, i) in &labels {
        let x = label_index(k, i, ell);
        if non_wrapping(k, i, ell) {
            let (tk, ti) = tau(k, i, ell);
            rep_of[x] = rep_pos[label_index(tk, ti, ell)];
            scaled[x] = true;
        } else {
            rep_of[x] = rep_pos[x];
        }
    }
    Layout { rep_of, scaled, reps }
}

fn placeholder_m(n: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            m.set(a, b, CycScalar::from_integer(if a == b { 2 } else { 1 }));
        }
    }
    m
}

fn block(lay: &Layout, m: &ExactMatrix, row_f: &CycScalar, col_f: &CycScalar) -> ExactMatrix {
    let n = lay.rep_of.len();
    let mut out = ExactMatrix::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            let mut v = m.get(lay.rep_of[x], lay.rep_of[y]).clone();
            if lay.scaled[x] {
                v = &v * row_f;
            }
            if lay.scaled[y] {
                v = &v * col_f;
            }
            out.set(x, y, v);
        }
    }
    out
}

/// The S′ block between degrees `row_sign`·ᾱ and `col_sign`·ᾱ.
pub(crate) fn sprime_block(ell: u32, row_sign: i32, col_sign: i32) -> ExactMatrix {
    let lay = layout(ell);
    block(&lay, &placeholder_m(lay.reps), &row_factor(row_sign), &row_factor(col_sign))
}

pub fn emit_datum(ell: i64) -> Result<ModularDatum, Sl21Error> {
    let l = check_ell(ell)?;
    let grading_group = GroupShape { cyclic: vec![], torus: true };
    let a = grading_group.parse("a").expect("literal");
    let na = grading_group.neg(&a);
    let zero = grading_group.zero();

    // Z = Z/2 × Z: σ(z̄, k) has quantum dimension (−1)^z.
    let z_group = GroupShape { cyclic: vec![2, 0], torus: false };
    let zdeg = |z: i64, k: i64| z_group.parse(&format!("({z},{k})")).expect("literal");
    let mut quantum_dimension = Vec::new();
    let mut psi = Vec::new();
    for z in 0..2 {
        for k in 0..2 {
            quantum_dimension.push((zdeg(z, k), if z == 0 { 1 } else { -1 }));
            for (g, s) in [(&zero, 0), (&a, 1), (&na, -1)] {
                psi.push(PsiEntry { g: g.clone(), k: zdeg(z, k), value: CycScalar::var(Var::U, -4 * s * k as i32) });
            }
        }
    }

    let labels: Vec<(u32, u32)> = theta(l);
    let names: Vec<String> = labels.iter().map(|&(k, i)| label_name(k, i)).collect();
    let n = labels.len();
    let degree = |g: &crate::catmodel::Degree| DegreeData {
        degree: g.clone(),
        labels: names.clone(),
        dims: vec![CycScalar::one(); n],
        twists: vec![CycScalar::one(); n],
        dual: None,
    };

    let s_aa = sprime_block(l, 1, 1);
    let s_na_a = sprime_block(l, -1, 1);
    let s_a_na = s_na_a.transpose();

    let mut row_relations = Vec::new();
    for (rows, cols, sign) in [(&a, &a, 1), (&na, &a, -1), (&a, &na, 1)] {
        for &(k, i) in &labels {
            if non_wrapping(k, i, l) {
                let (tk, ti) = tau(k, i, l);
                row_relations.push(RowRelation {
                    rows: rows.clone(),
                    cols: cols.clone(),
                    row: label_index(k, i, l),
                    partner: label_index(tk, ti, l),
                    factor: row_factor(sign),
                });
            }
        }
    }

    let placeholders = vec![
        Placeholder {
            name: "M".into(),
            description: "S' entries between pair representatives: I + J (symmetric, invertible, no zero entries)"
                .into(),
        },
        Placeholder { name: "d".into(), description: "modified dimensions set to 1".into() },
        Placeholder { name: "t".into(), description: "twists set to 1".into() },
        Placeholder { name: "dual".into(), description: "index duality between a and -a not supplied".into() },
    ];
    let notes = vec![
        "u denotes q^(alpha*ell) for the generic degree a; psi(a,(z,k)) = u^(-4k) is forced by the pairing of rows across sigma(0,1)".into(),
        format!("labels k{{k}}i{{i}} stand for V(lambda^k_(alpha+i)), 0 <= k <= {}, 0 <= i <= {}", l - 2, l - 1),
        "row relations are determined; everything listed under placeholders is not".into(),
    ];

    Ok(ModularDatum {
        name: Some(format!("sl(2|1) at ell={l}")),
        grading: GradingSpec { group: grading_group, small: SmallSubset::Elements(vec![zero]) },
        translation: TranslationSpec { group: z_group, quantum_dimension, psi },
        degrees: vec![degree(&a), degree(&na)],
        sprime: vec![
            SPrimeBlock { rows: a.clone(), cols: a.clone(), matrix: s_aa },
            SPrimeBlock { rows: na.clone(), cols: a.clone(), matrix: s_na_a },
            SPrimeBlock { rows: a.clone(), cols: na.clone(), matrix: s_a_na },
        ],
        fusion: vec![],
        orbit_count: None,
        no_self_extension: Some(true),
        row_relations,
        placeholders,
        notes,
    })
}
