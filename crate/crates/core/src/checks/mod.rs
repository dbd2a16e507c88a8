//! Decision procedures over a [`ModularDatum`]: non-degeneracy, rank
//! constancy of mixed S-matrices, the Z-trivial Müger center criterion,
//! relative modularity and input well-formedness.

pub mod synthetic;
mod verdict;

pub use verdict::{Status, Verdict, Witness};

use crate::catmodel::{validate, Degree, ModularDatum};
use crate::exactnum::{CycScalar, ExactMatrix, Inverse};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("S' block ({0},{1}) is absent")]
    MissingBlock(String, String),
    #[error("degree {0} is not declared")]
    UnknownDegree(String),
    #[error("index {index} out of range for I_{degree}")]
    BadIndex { degree: String, index: usize },
    #[error("degree {0} has no dual index map")]
    NoDual(String),
    #[error("twist t_{index} in degree {degree} is not invertible")]
    TwistNotInvertible { degree: String, index: usize },
}

pub const CHECK_NONDEG: &str = "non-degeneracy";
pub const CHECK_RANK: &str = "rank-constancy";
pub const CHECK_DMUG: &str = "dmug";
pub const CHECK_MODULARITY: &str = "relative-modularity";
pub const CHECK_PREMODULAR: &str = "premodular-inputs";

pub const HYP_NO_ZERO: &str = "the mixed S-matrices have no zero entry";
pub const HYP_NO_SELF_EXT: &str = "{sigma(k)} has no self extensions";

fn inv_twist(datum: &ModularDatum, g: &Degree, i: usize) -> Result<CycScalar, CheckError> {
    let d = datum.degree(g).ok_or_else(|| CheckError::UnknownDegree(g.to_string()))?;
    d.twists[i].inverse().ok_or(CheckError::TwistNotInvertible { degree: g.to_string(), index: i })
}

/// Δ₋ = t_j^{-1} Σ_i S′_{ij} t_i^{-1} d(V_i) over I_g.
pub fn delta_minus(datum: &ModularDatum, g: &Degree, j: usize) -> Result<CycScalar, CheckError> {
    let d = datum.degree(g).ok_or_else(|| CheckError::UnknownDegree(g.to_string()))?;
    let sp = datum.block(g, g).ok_or_else(|| CheckError::MissingBlock(g.to_string(), g.to_string()))?;
    if j >= d.size() {
        return Err(CheckError::BadIndex { degree: g.to_string(), index: j });
    }
    let mut sum = CycScalar::zero();
    for i in 0..d.size() {
        sum += &(&(sp.get(i, j) * &inv_twist(datum, g, i)?) * &d.dims[i]);
    }
    Ok(&inv_twist(datum, g, j)? * &sum)
}

/// Mirror of Δ₋ using twists and the dual-indexed block:
/// Δ₊ = t_j Σ_i S′_{−g,g}[i*][j] t_i d(V_i).
pub fn delta_plus(datum: &ModularDatum, g: &Degree, j: usize) -> Result<CycScalar, CheckError> {
    let d = datum.degree(g).ok_or_else(|| CheckError::UnknownDegree(g.to_string()))?;
    let dual = d.dual.as_ref().ok_or_else(|| CheckError::NoDual(g.to_string()))?;
    let ng = datum.neg(g);
    let sp = datum.block(&ng, g).ok_or_else(|| CheckError::MissingBlock(ng.to_string(), g.to_string()))?;
    if j >= d.size() {
        return Err(CheckError::BadIndex { degree: g.to_string(), index: j });
    }
    let mut sum = CycScalar::zero();
    for i in 0..d.size() {
        let istar = dual.map[i];
        if istar >= sp.rows() {
            return Err(CheckError::BadIndex { degree: ng.to_string(), index: istar });
        }
        sum += &(&(sp.get(istar, j) * &d.twists[i]) * &d.dims[i]);
    }
    Ok(&d.twists[j] * &sum)
}

fn kernel_witness(name: &str, m: &ExactMatrix) -> Witness {
    let v = match m.invert() {
        Ok(Inverse::Singular(v)) => Some(v),
        _ => m.kernel_vector().ok().flatten(),
    };
    match v {
        Some(v) => {
            let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            Witness::new(format!("kernel of {name}"), vec![], format!("({})", parts.join(", ")))
        }
        None => Witness::new(format!("rank of {name}"), vec![], "non-square matrix"),
    }
}

fn is_full_rank_square(m: &ExactMatrix) -> (bool, usize) {
    let r = m.rank();
    (m.is_square() && r == m.rows(), r)
}

/// S_g and S_{−g,g} both non-degenerate.
pub fn check_nondegeneracy(datum: &ModularDatum, g: &Degree) -> Verdict {
    let ng = datum.neg(g);
    let (Some(sg), Some(smix)) = (datum.s_matrix(g, g), datum.s_matrix(&ng, g)) else {
        let missing = if datum.block(g, g).is_none() { format!("({g},{g})") } else { format!("({ng},{g})") };
        return Verdict::data_absent(CHECK_NONDEG, format!("S' block {missing} or its dimensions"));
    };
    let (full_g, rank_g) = is_full_rank_square(&sg);
    let (full_m, rank_m) = is_full_rank_square(&smix);
    let mut out = Verdict::new(CHECK_NONDEG, if full_g && full_m { Status::Holds } else { Status::Fails });
    out.derive(format!("rank S_{g}"), CycScalar::from_integer(rank_g as i64));
    out.derive(format!("rank S_{ng},{g}"), CycScalar::from_integer(rank_m as i64));
    out.witnesses.push(
        Witness::new("rank S_g", vec![g.to_string()], format!("{rank_g} of {}", sg.rows()))
            .with_value(CycScalar::from_integer(rank_g as i64)),
    );
    out.witnesses.push(
        Witness::new("rank S_-g,g", vec![ng.to_string(), g.to_string()], format!("{rank_m} of {}", smix.rows()))
            .with_value(CycScalar::from_integer(rank_m as i64)),
    );
    if !full_g {
        out.witnesses.push(kernel_witness("S_g", &sg));
    }
    if !full_m {
        out.witnesses.push(kernel_witness("S_-g,g", &smix));
    }

    let dm = delta_minus(datum, g, 0);
    let dp = delta_plus(datum, g, 0);
    if let Ok(v) = &dm {
        out.derive("Delta_minus", v.clone());
        let size = datum.degree(g).map_or(0, |d| d.size());
        if let Some(j) = (1..size).find(|&j| delta_minus(datum, g, j).ok().as_ref() != Some(v)) {
            out.notes.push(format!(
                "Delta_minus differs between j=0 and j={j}; the data is not consistent with a relative pre-modular category"
            ));
        }
    }
    match &dp {
        Ok(v) => out.derive("Delta_plus (convention)", v.clone()),
        Err(e) => out.notes.push(format!("Delta_plus unavailable: {e}")),
    }
    if let (Ok(m), Ok(p)) = (&dm, &dp) {
        let prod = m * p;
        out.derive("Delta_plus*Delta_minus", prod.clone());
        if out.status == Status::Holds && prod.is_zero() {
            out.status = Status::Fails;
            out.witnesses.push(
                Witness::new(
                    "internal consistency",
                    vec![],
                    "S-matrices are non-degenerate but Delta_plus*Delta_minus = 0",
                )
                .with_value(prod),
            );
        }
    }
    out
}

/// Every present (mixed) S-matrix shares one rank, given no zero entries.
pub fn check_rank_constancy(datum: &ModularDatum) -> Verdict {
    let blocks: Vec<(&Degree, &Degree, ExactMatrix)> =
        datum.sprime.iter().filter_map(|b| datum.s_matrix(&b.rows, &b.cols).map(|s| (&b.rows, &b.cols, s))).collect();
    if blocks.len() < 2 {
        return Verdict::data_absent(CHECK_RANK, format!("{} S-matrix block(s); at least 2 needed", blocks.len()));
    }
    for (r, c, s) in &blocks {
        for i in 0..s.rows() {
            for j in 0..s.cols() {
                if s.get(i, j).is_zero() {
                    return Verdict::hypothesis_not_met(
                        CHECK_RANK,
                        HYP_NO_ZERO,
                        Witness::new(
                            "zero entry",
                            vec![r.to_string(), c.to_string(), i.to_string(), j.to_string()],
                            format!("S_({r},{c})[{i}][{j}] = 0"),
                        ),
                    );
                }
            }
        }
    }
    let ranks: Vec<usize> = blocks.iter().map(|(_, _, s)| s.rank()).collect();
    let mut out;
    if let Some(k) = (1..ranks.len()).find(|&k| ranks[k] != ranks[0]) {
        out = Verdict::new(CHECK_RANK, Status::Fails);
        for idx in [0, k] {
            let (r, c, _) = &blocks[idx];
            out.witnesses.push(
                Witness::new("rank", vec![r.to_string(), c.to_string()], format!("rank S_({r},{c}) = {}", ranks[idx]))
                    .with_value(CycScalar::from_integer(ranks[idx] as i64)),
            );
        }
    } else {
        out = Verdict::new(CHECK_RANK, Status::Holds);
        out.witnesses.push(
            Witness::new("common rank", vec![], format!("{} blocks", blocks.len()))
                .with_value(CycScalar::from_integer(ranks[0] as i64)),
        );
    }
    for ((r, c, _), k) in blocks.iter().zip(&ranks) {
        out.derive(format!("rank S_({r},{c})"), CycScalar::from_integer(*k as i64));
    }
    if let Some(w) = fusion_identity_violation(datum) {
        out.status = Status::Fails;
        out.witnesses.push(w);
    }
    out
}

/// d(V_{i4})^{-1} S_{i1,i4} S_{i2,i4} = Σ_{i3} c_{i1,i2}^{i3} S_{i3,i4} on every
/// fusion block whose S-blocks are present.
fn fusion_identity_violation(datum: &ModularDatum) -> Option<Witness> {
    for f in &datum.fusion {
        for g4 in &datum.degrees {
            let (Some(s1), Some(s2), Some(s3)) = (
                datum.s_matrix(&f.left, &g4.degree),
                datum.s_matrix(&f.right, &g4.degree),
                datum.s_matrix(&f.result, &g4.degree),
            ) else {
                continue;
            };
            for (i1, plane) in f.coefficients.iter().enumerate() {
                for (i2, row) in plane.iter().enumerate() {
                    for i4 in 0..g4.size() {
                        let Some(dinv) = g4.dims[i4].inverse() else { continue };
                        let lhs = &(&dinv * s1.get(i1, i4)) * s2.get(i2, i4);
                        let rhs: CycScalar = row
                            .iter()
                            .enumerate()
                            .map(|(i3, &c)| &CycScalar::from_integer(c as i64) * s3.get(i3, i4))
                            .sum();
                        if lhs != rhs {
                            return Some(Witness::new(
                                "fusion identity",
                                vec![i1.to_string(), i2.to_string(), i4.to_string(), g4.degree.to_string()],
                                format!("d^-1 S S = {lhs} but sum c S = {rhs}"),
                            ));
                        }
                    }
                }
            }
        }
    }
    None
}

fn row_without_zero(m: &ExactMatrix) -> Option<usize> {
    (0..m.rows()).find(|&i| m.row(i).iter().all(|x| !x.is_zero()))
}

/// Sufficient condition for a Z-trivial Müger center of C_0.
pub fn check_dmug(datum: &ModularDatum, g: &Degree) -> Verdict {
    let Some(n) = datum.orbit_count else {
        return Verdict::data_absent(CHECK_DMUG, "orbit count N of C_0 absent");
    };
    if datum.no_self_extension == Some(false) {
        return Verdict::hypothesis_not_met(
            CHECK_DMUG,
            HYP_NO_SELF_EXT,
            Witness::new("assertion", vec![], "datum asserts no_self_extension = false"),
        );
    }
    let ng = datum.neg(g);
    let (Some(sg), Some(smix)) = (datum.s_matrix(g, g), datum.s_matrix(&ng, g)) else {
        return Verdict::data_absent(CHECK_DMUG, format!("S' blocks ({g},{g}) and ({ng},{g}) required"));
    };
    let mut out = Verdict::new(CHECK_DMUG, Status::Holds);
    out.notes.push("sufficient condition for Z-trivial Müger center of C_0; the center itself is not computed".into());
    if datum.no_self_extension.is_none() {
        out.notes.push(format!(
            "hypothesis '{HYP_NO_SELF_EXT}' is not asserted by the datum; conclusion is conditional on it"
        ));
    }
    if sg.rows() != n {
        out.status = Status::Fails;
        out.witnesses.push(Witness::new(
            "condition (1) shape",
            vec![g.to_string()],
            format!("|I_g| = {} but N = {n}", sg.rows()),
        ));
    } else {
        let rank = sg.rank();
        out.derive(format!("rank S_{g}"), CycScalar::from_integer(rank as i64));
        if rank < n {
            out.status = Status::Fails;
            out.witnesses.push(kernel_witness("S_g", &sg).with_value(CycScalar::from_integer(rank as i64)));
        } else {
            out.witnesses.push(Witness::new(
                "condition (1)",
                vec![g.to_string()],
                format!("S_g is an invertible {n}x{n} matrix"),
            ));
        }
    }
    for (name, m) in [("S_g", &sg), ("S_-g,g", &smix)] {
        match row_without_zero(m) {
            Some(i) => out.witnesses.push(Witness::new(
                format!("condition (2) {name}"),
                vec![i.to_string()],
                "row with no zero entry",
            )),
            None => {
                out.status = Status::Fails;
                out.witnesses.push(Witness::new(format!("condition (2) {name}"), vec![], "every row has a zero entry"));
            }
        }
    }
    out
}

/// (1/ζ)·S_{g,h}·S_{h,−g} = Id for some nonzero ζ.
pub fn check_relative_modularity(datum: &ModularDatum, g: &Degree, h: &Degree) -> Verdict {
    let ng = datum.neg(g);
    let (Some(a), Some(b)) = (datum.s_matrix(g, h), datum.s_matrix(h, &ng)) else {
        return Verdict::data_absent(
            CHECK_MODULARITY,
            format!("S' blocks ({g},{h}) and ({h},{ng}) with dimensions required"),
        );
    };
    let p = match a.mul(&b) {
        Ok(p) => p,
        Err(e) => {
            return Verdict::new(CHECK_MODULARITY, Status::Fails).witness(Witness::new("shape", vec![], e.to_string()))
        }
    };
    let mut out = Verdict::new(CHECK_MODULARITY, Status::Holds);
    if !p.is_square() || p.rows() == 0 {
        out.status = Status::Fails;
        out.witnesses.push(Witness::new("shape", vec![], format!("P is {}x{}", p.rows(), p.cols())));
        return out;
    }
    let zeta = p.get(0, 0).clone();
    if zeta.is_zero() {
        out.status = Status::Fails;
        out.witnesses.push(
            Witness::new("zeta", vec!["0".into(), "0".into()], "P[0][0] = 0, so no nonzero zeta").with_value(zeta),
        );
        return out;
    }
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            let want = if i == j { zeta.clone() } else { CycScalar::zero() };
            if *p.get(i, j) != want {
                out.status = Status::Fails;
                out.witnesses.push(
                    Witness::new("P entry", vec![i.to_string(), j.to_string()], format!("expected {want}"))
                        .with_value(p.get(i, j).clone()),
                );
                return out;
            }
        }
    }
    out.derive("zeta_Omega", zeta.clone());
    out.witnesses
        .push(Witness::new("P = zeta*Id", vec![], format!("{}x{}", p.rows(), p.rows())).with_value(zeta.clone()));
    match (delta_minus(datum, g, 0), delta_plus(datum, g, 0)) {
        (Ok(m), Ok(pl)) => {
            let prod = &m * &pl;
            out.derive("Delta_minus", m);
            out.derive("Delta_plus (convention)", pl);
            out.derive("Delta_plus*Delta_minus", prod.clone());
            if prod != zeta {
                out.status = Status::Fails;
                out.witnesses.push(
                    Witness::new(
                        "Delta_plus convention mismatch",
                        vec![],
                        format!("zeta_Omega = {zeta} but Delta_plus*Delta_minus = {prod}"),
                    )
                    .with_value(prod),
                );
            }
        }
        (m, p) => {
            let why = m.err().or(p.err()).map(|e| e.to_string()).unwrap_or_default();
            out.notes.push(format!("zeta = Delta_plus*Delta_minus cross-check skipped: {why}"));
        }
    }
    out
}

/// Batch validation of translation, ψ, dimension and twist invariants.
pub fn check_premodular_inputs(datum: &ModularDatum) -> Verdict {
    let violations = validate(datum);
    if violations.is_empty() {
        return Verdict::new(CHECK_PREMODULAR, Status::Holds).witness(Witness::new(
            "all clauses",
            vec![],
            "grading, translation group, psi, dims, twists and S' blocks validated",
        ));
    }
    let mut out = Verdict::new(CHECK_PREMODULAR, Status::Fails);
    for v in violations {
        out.witnesses.push(Witness::new(v.clause, v.indices, v.detail));
    }
    out
}

/// One unit of work in [`check_all`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckJob {
    Premodular,
    Nondegeneracy(Degree),
    Dmug(Degree),
    Modularity(Degree, Degree),
    RankConstancy,
}

/// Jobs whose required blocks are present in the datum.
pub fn all_jobs(datum: &ModularDatum) -> Vec<CheckJob> {
    let mut jobs = vec![CheckJob::Premodular];
    for d in &datum.degrees {
        let g = &d.degree;
        let ng = datum.neg(g);
        let has = |r: &Degree, c: &Degree| datum.block(r, c).is_some();
        if !has(g, g) {
            continue;
        }
        if has(&ng, g) {
            jobs.push(CheckJob::Nondegeneracy(g.clone()));
            if datum.orbit_count.is_some() {
                jobs.push(CheckJob::Dmug(g.clone()));
            }
        }
        if has(g, &ng) {
            jobs.push(CheckJob::Modularity(g.clone(), g.clone()));
        }
    }
    if datum.sprime.len() >= 2 {
        jobs.push(CheckJob::RankConstancy);
    }
    jobs
}

pub fn run_job(datum: &ModularDatum, job: &CheckJob) -> Verdict {
    let mut v = match job {
        CheckJob::Premodular => check_premodular_inputs(datum),
        CheckJob::Nondegeneracy(g) => check_nondegeneracy(datum, g),
        CheckJob::Dmug(g) => check_dmug(datum, g),
        CheckJob::Modularity(g, h) => check_relative_modularity(datum, g, h),
        CheckJob::RankConstancy => check_rank_constancy(datum),
    };
    match job {
        CheckJob::Nondegeneracy(g) | CheckJob::Dmug(g) => v.check = format!("{} g={g}", v.check),
        CheckJob::Modularity(g, h) => v.check = format!("{} g={g} h={h}", v.check),
        _ => {}
    }
    v
}

pub fn check_all(datum: &ModularDatum) -> Vec<Verdict> {
    all_jobs(datum).iter().map(|j| run_job(datum, j)).collect()
}
