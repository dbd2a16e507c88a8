//! Builders for data that satisfy the modularity identity by construction.
//!
//! Given twists t, dimensions d, a target Δ₋, a target ζ and any symmetric
//! base matrix R, the builder corrects R by a symmetric rank-two term so that
//! S_g·(d/t) = Δ₋·(t∘d). Then S_{g,−g} := ζ·S_g^{-1} makes
//! S_g·S_{g,−g} = ζ·Id, and with the identity dual map Δ₊ = ζ/Δ₋.

use crate::catmodel::{
    DegreeData, DualMap, GradingSpec, GroupShape, ModularDatum, SPrimeBlock, SmallSubset, TranslationSpec,
};
use crate::exactnum::{CycScalar, ExactMatrix, Inverse};

#[derive(Debug, Clone)]
pub struct SyntheticSpec {
    pub twists: Vec<CycScalar>,
    pub dims: Vec<CycScalar>,
    pub delta_minus: CycScalar,
    pub zeta: CycScalar,
    /// Symmetric n×n starting point.
    pub base: ExactMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntheticError {
    #[error("corrected S_g is singular")]
    Singular,
    #[error("a scalar that must be invertible is not")]
    NotInvertible,
    #[error("inputs have inconsistent sizes")]
    Shape,
}

fn inv(x: &CycScalar) -> Result<CycScalar, SyntheticError> {
    x.inverse().ok_or(SyntheticError::NotInvertible)
}

/// Returns the datum and the planted S_g.
pub fn consistent_datum(spec: &SyntheticSpec) -> Result<(ModularDatum, ExactMatrix), SyntheticError> {
    let n = spec.twists.len();
    if spec.dims.len() != n || spec.base.rows() != n || spec.base.cols() != n || n == 0 {
        return Err(SyntheticError::Shape);
    }
    let a: Vec<CycScalar> =
        (0..n).map(|i| Ok(&spec.dims[i] * &inv(&spec.twists[i])?)).collect::<Result<_, SyntheticError>>()?;
    let b: Vec<CycScalar> = (0..n).map(|i| &spec.delta_minus * &(&spec.twists[i] * &spec.dims[i])).collect();
    let ra = spec.base.mul_vec(&a).map_err(|_| SyntheticError::Shape)?;
    let r: Vec<CycScalar> = b.iter().zip(&ra).map(|(x, y)| x - y).collect();
    let ata: CycScalar = a.iter().map(|x| x * x).sum();
    let atr: CycScalar = a.iter().zip(&r).map(|(x, y)| x * y).sum();
    let ata_inv = inv(&ata)?;
    let ata_inv2 = &ata_inv * &ata_inv;
    let mut s = spec.base.clone();
    for i in 0..n {
        for j in 0..n {
            let sym = &(&r[i] * &a[j]) + &(&a[i] * &r[j]);
            let corr = &(&sym * &ata_inv) - &(&(&atr * &(&a[i] * &a[j])) * &ata_inv2);
            s.set(i, j, s.get(i, j) + &corr);
        }
    }
    let sinv = match s.invert() {
        Ok(Inverse::Invertible(m)) => m,
        _ => return Err(SyntheticError::Singular),
    };
    let s_mix = sinv.scale(&spec.zeta);
    let dinv: Vec<CycScalar> = spec.dims.iter().map(inv).collect::<Result<_, _>>()?;
    let sp_gg = s.scale_columns(&dinv).expect("shape");
    let sp_g_ng = s_mix.scale_columns(&dinv).expect("shape");
    let sp_ng_g = s_mix.transpose().scale_columns(&dinv).expect("shape");

    let group = GroupShape { cyclic: vec![], torus: true };
    let g = group.parse("a").expect("literal");
    let ng = group.neg(&g);
    let labels: Vec<String> = (0..n).map(|i| format!("V{i}")).collect();
    let block = |deg: &crate::catmodel::Degree, dual: &crate::catmodel::Degree| DegreeData {
        degree: deg.clone(),
        labels: labels.clone(),
        dims: spec.dims.clone(),
        twists: spec.twists.clone(),
        dual: Some(DualMap { degree: dual.clone(), map: (0..n).collect() }),
    };
    let datum = ModularDatum {
        name: Some("synthetic".into()),
        grading: GradingSpec { small: SmallSubset::Elements(vec![group.zero()]), group },
        translation: TranslationSpec { group: GroupShape::default(), quantum_dimension: vec![], psi: vec![] },
        degrees: vec![block(&g, &ng), block(&ng, &g)],
        sprime: vec![
            SPrimeBlock { rows: g.clone(), cols: g.clone(), matrix: sp_gg },
            SPrimeBlock { rows: g.clone(), cols: ng.clone(), matrix: sp_g_ng },
            SPrimeBlock { rows: ng.clone(), cols: g.clone(), matrix: sp_ng_g },
        ],
        fusion: vec![],
        orbit_count: None,
        no_self_extension: None,
        row_relations: vec![],
        placeholders: vec![],
        notes: vec![],
    };
    Ok((datum, s))
}
