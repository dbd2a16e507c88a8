//! Semantic invariants of a [`ModularDatum`].

use super::degree::SmallSubset;
use super::ModularDatum;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub clause: String,
    pub indices: Vec<String>,
    pub detail: String,
}

fn v(clause: &str, indices: Vec<String>, detail: String) -> Violation {
    Violation { clause: clause.to_string(), indices, detail }
}

pub const CLAUSE_SYMMETRIC_X: &str = "small symmetric subset: X = -X";
pub const CLAUSE_SMALL_X: &str = "small symmetric subset: X is small in G";
pub const CLAUSE_QDIM_PM1: &str = "free realisation: quantum dimension of sigma(k) is +1 or -1";
pub const CLAUSE_QDIM_UNIT: &str = "free realisation: sigma(0) is the unit, quantum dimension 1";
pub const CLAUSE_QDIM_MULT: &str = "free realisation: sigma(j+k) = sigma(j) (x) sigma(k) quantum dimensions multiply";
pub const CLAUSE_PSI_K: &str = "psi bilinear: psi(g,k+k') = psi(g,k) psi(g,k')";
pub const CLAUSE_PSI_G: &str = "psi bilinear: psi(g+g',k) = psi(g,k) psi(g',k)";
pub const CLAUSE_PSI_UNIT: &str = "psi takes invertible values";
pub const CLAUSE_GENERIC: &str = "generic semisimplicity: listed degree lies outside X";
pub const CLAUSE_NONEMPTY: &str = "generic semisimplicity: index set is finite and nonempty";
pub const CLAUSE_SHAPE: &str = "shape: dims and twists indexed by I_g";
pub const CLAUSE_DIMS: &str = "modified dimensions are nonzero";
pub const CLAUSE_TWISTS: &str = "twists are invertible";
pub const CLAUSE_DUAL: &str = "duality: i -> i* is a bijection I_g -> I_-g";
pub const CLAUSE_BLOCK: &str = "S' block indexed by declared I_g x I_h";
pub const CLAUSE_S_SYM: &str = "S_g is symmetric";
pub const CLAUSE_MIXED: &str = "mixed S: S_{h,g} is the transpose of S_{g,h}";
pub const CLAUSE_ROWREL: &str = "row relation S'[row] = factor * S'[partner]";
pub const CLAUSE_FUSION: &str = "fusion: multiplicities indexed I_g1 x I_g2 x I_(g1+g2)";
pub const CLAUSE_DUPLICATE: &str = "each degree and block declared once";

pub fn validate(d: &ModularDatum) -> Vec<Violation> {
    let mut out = Vec::new();
    let gs = &d.grading.group;

    if let Some(x) = d.grading.symmetry_violation() {
        let neg = gs.neg(&x);
        out.push(v(CLAUSE_SYMMETRIC_X, vec![x.to_string()], format!("{x} is in X but {neg} is not")));
    }
    let x_nonempty = match &d.grading.small {
        SmallSubset::Elements(xs) => !xs.is_empty(),
        SmallSubset::Torsion => true,
    };
    if gs.is_finite() && x_nonempty {
        out.push(v(CLAUSE_SMALL_X, vec![], "G is finite, so finitely many translates of a nonempty X cover it".into()));
    }

    // translation group
    let zs = &d.translation.group;
    for (k, q) in &d.translation.quantum_dimension {
        if *q != 1 && *q != -1 {
            out.push(v(CLAUSE_QDIM_PM1, vec![k.to_string()], format!("quantum dimension of sigma({k}) is {q}")));
        }
    }
    let zero = zs.zero();
    if let Some(q) = d.translation.quantum_dimension_of(&zero) {
        if q != 1 {
            out.push(v(CLAUSE_QDIM_UNIT, vec![zero.to_string()], format!("quantum dimension of sigma(0) is {q}")));
        }
    }
    let qd = &d.translation.quantum_dimension;
    'qd: for (j, qj) in qd {
        for (k, qk) in qd {
            let s = zs.add(j, k);
            if let Some(qs) = d.translation.quantum_dimension_of(&s) {
                if qs != qj * qk {
                    out.push(v(
                        CLAUSE_QDIM_MULT,
                        vec![j.to_string(), k.to_string()],
                        format!("qdim({s}) = {qs} but qdim({j})*qdim({k}) = {}", qj * qk),
                    ));
                    break 'qd;
                }
            }
        }
    }

    for p in &d.translation.psi {
        if !p.value.is_unit() {
            out.push(v(CLAUSE_PSI_UNIT, vec![p.g.to_string(), p.k.to_string()], format!("psi = {}", p.value)));
        }
    }
    'psik: for a in &d.translation.psi {
        for b in &d.translation.psi {
            if a.g != b.g {
                continue;
            }
            let kk = zs.add(&a.k, &b.k);
            if let Some(c) = d.translation.psi_of(&a.g, &kk) {
                if *c != &a.value * &b.value {
                    out.push(v(
                        CLAUSE_PSI_K,
                        vec![a.g.to_string(), a.k.to_string(), b.k.to_string()],
                        format!(
                            "(g,k,k') = ({},{},{}): psi(g,k+k') = {c}, product = {}",
                            a.g,
                            a.k,
                            b.k,
                            &a.value * &b.value
                        ),
                    ));
                    break 'psik;
                }
            }
        }
    }
    'psig: for a in &d.translation.psi {
        for b in &d.translation.psi {
            if a.k != b.k {
                continue;
            }
            let gg = gs.add(&a.g, &b.g);
            if let Some(c) = d.translation.psi_of(&gg, &a.k) {
                if *c != &a.value * &b.value {
                    out.push(v(
                        CLAUSE_PSI_G,
                        vec![a.g.to_string(), b.g.to_string(), a.k.to_string()],
                        format!(
                            "(g,g',k) = ({},{},{}): psi(g+g',k) = {c}, product = {}",
                            a.g,
                            b.g,
                            a.k,
                            &a.value * &b.value
                        ),
                    ));
                    break 'psig;
                }
            }
        }
    }

    // degree blocks
    for (n, g) in d.degrees.iter().enumerate() {
        let gname = g.degree.to_string();
        if d.degrees[..n].iter().any(|o| o.degree == g.degree) {
            out.push(v(CLAUSE_DUPLICATE, vec![gname.clone()], format!("degree {gname} listed twice")));
        }
        if d.grading.in_small(&g.degree) {
            out.push(v(CLAUSE_GENERIC, vec![gname.clone()], format!("degree {gname} is in X")));
        }
        if g.labels.is_empty() {
            out.push(v(CLAUSE_NONEMPTY, vec![gname.clone()], format!("I_{gname} is empty")));
        }
        if g.dims.len() != g.size() || g.twists.len() != g.size() {
            out.push(v(
                CLAUSE_SHAPE,
                vec![gname.clone()],
                format!("|I_g| = {}, {} dims, {} twists", g.size(), g.dims.len(), g.twists.len()),
            ));
            continue;
        }
        for (i, x) in g.dims.iter().enumerate() {
            if x.is_zero() {
                out.push(v(CLAUSE_DIMS, vec![gname.clone(), i.to_string()], format!("d({}) = 0", g.labels[i])));
            }
        }
        for (i, t) in g.twists.iter().enumerate() {
            if !t.is_unit() {
                out.push(v(CLAUSE_TWISTS, vec![gname.clone(), i.to_string()], format!("t({}) = {t}", g.labels[i])));
            }
        }
        if let Some(dual) = &g.dual {
            let want = gs.neg(&g.degree);
            if dual.degree != want {
                out.push(v(CLAUSE_DUAL, vec![gname.clone()], format!("dual degree {} but -g = {want}", dual.degree)));
            } else if let Some(other) = d.degree(&want) {
                let mut seen = vec![false; other.size()];
                let ok = dual.map.len() == g.size()
                    && other.size() == g.size()
                    && dual.map.iter().all(|&j| j < seen.len() && !std::mem::replace(&mut seen[j], true));
                if !ok {
                    out.push(v(CLAUSE_DUAL, vec![gname.clone()], format!("map {:?} is not a bijection", dual.map)));
                }
            } else if dual.map.len() != g.size() {
                out.push(v(CLAUSE_DUAL, vec![gname.clone()], "map length differs from |I_g|".into()));
            }
        }
    }

    // S' blocks
    for (n, b) in d.sprime.iter().enumerate() {
        let tag = format!("({},{})", b.rows, b.cols);
        if d.sprime[..n].iter().any(|o| o.rows == b.rows && o.cols == b.cols) {
            out.push(v(CLAUSE_DUPLICATE, vec![tag.clone()], format!("block {tag} listed twice")));
        }
        let (Some(r), Some(c)) = (d.degree(&b.rows), d.degree(&b.cols)) else {
            out.push(v(CLAUSE_BLOCK, vec![tag.clone()], format!("block {tag} references an undeclared degree")));
            continue;
        };
        if b.matrix.rows() != r.size() || b.matrix.cols() != c.size() {
            out.push(v(
                CLAUSE_BLOCK,
                vec![tag.clone()],
                format!("block {tag} is {}x{}, expected {}x{}", b.matrix.rows(), b.matrix.cols(), r.size(), c.size()),
            ));
            continue;
        }
        if c.dims.len() != c.size() {
            continue;
        }
        if b.rows == b.cols {
            let s = d.s_matrix(&b.rows, &b.cols).expect("block present");
            if let Some((i, j)) = s.first_asymmetry() {
                out.push(v(
                    CLAUSE_S_SYM,
                    vec![b.rows.to_string(), i.to_string(), j.to_string()],
                    format!("S[{i}][{j}] = {} but S[{j}][{i}] = {}", s.get(i, j), s.get(j, i)),
                ));
            }
        } else if let (Some(s), Some(t)) = (d.s_matrix(&b.rows, &b.cols), d.s_matrix(&b.cols, &b.rows)) {
            if t.rows() == s.cols() && t.cols() == s.rows() {
                if let Some((i, j)) = first_transpose_mismatch(&s, &t) {
                    out.push(v(
                        CLAUSE_MIXED,
                        vec![tag.clone(), i.to_string(), j.to_string()],
                        format!("S{tag}[{i}][{j}] = {} but transpose entry is {}", s.get(i, j), t.get(j, i)),
                    ));
                }
            }
        }
    }

    for (n, rel) in d.row_relations.iter().enumerate() {
        let tag = format!("({},{})", rel.rows, rel.cols);
        let Some(m) = d.block(&rel.rows, &rel.cols) else {
            out.push(v(CLAUSE_ROWREL, vec![n.to_string()], format!("relation {n} refers to missing block {tag}")));
            continue;
        };
        if rel.row >= m.rows() || rel.partner >= m.rows() {
            out.push(v(CLAUSE_ROWREL, vec![n.to_string()], format!("relation {n} row index out of range")));
            continue;
        }
        let bad = (0..m.cols()).find(|&j| *m.get(rel.row, j) != &rel.factor * m.get(rel.partner, j));
        if let Some(j) = bad {
            out.push(v(
                CLAUSE_ROWREL,
                vec![tag, rel.row.to_string(), rel.partner.to_string(), j.to_string()],
                format!("relation {n} fails in column {j}"),
            ));
        }
    }

    for (n, f) in d.fusion.iter().enumerate() {
        let tag = format!("({},{})->{}", f.left, f.right, f.result);
        let want = gs.add(&f.left, &f.right);
        if want != f.result {
            out.push(v(CLAUSE_FUSION, vec![n.to_string()], format!("{tag}: result degree should be {want}")));
            continue;
        }
        let sizes = [&f.left, &f.right, &f.result].map(|g| d.degree(g).map(|x| x.size()));
        let [Some(a), Some(b), Some(c)] = sizes else {
            out.push(v(CLAUSE_FUSION, vec![n.to_string()], format!("{tag}: undeclared degree")));
            continue;
        };
        let ok =
            f.coefficients.len() == a && f.coefficients.iter().all(|r| r.len() == b && r.iter().all(|x| x.len() == c));
        if !ok {
            out.push(v(CLAUSE_FUSION, vec![n.to_string()], format!("{tag}: expected {a}x{b}x{c} multiplicities")));
        }
    }

    out
}

fn first_transpose_mismatch(
    s: &crate::exactnum::ExactMatrix,
    t: &crate::exactnum::ExactMatrix,
) -> Option<(usize, usize)> {
    for i in 0..s.rows() {
        for j in 0..s.cols() {
            if s.get(i, j) != t.get(j, i) {
                return Some((i, j));
            }
        }
    }
    None
}
