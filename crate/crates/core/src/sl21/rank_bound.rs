use serde_json::{json, Value};

use super::character::WeightLabel;
use super::emit::{label_index, label_name, non_wrapping, row_factor, sprime_block, tau, theta};
use super::fusion::fuse_a_twice;
use super::Sl21Error;
use crate::exactnum::{check_ell, CycScalar};

pub const OPEN_QUESTIONS: [&str; 4] = [
    "is A (x) A isomorphic to sigma(1,0) in the quotient by negligibles?",
    "if so, is the quotient relative modular once its translation group is enriched with A?",
    "if not, does the quotient embed into a relative modular category?",
    "is there a relative modular category whose translation group contains a square root of sigma?",
];

/// One τ-orbit {row, partner}: S′(row, W) = factor · S′(partner, W) for every
/// simple W of degree ᾱ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClass {
    pub row: (u32, u32),
    pub partner: (u32, u32),
    pub factor: CycScalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankBoundReport {
    pub ell: u32,
    /// |Θ_ᾱ| = ℓ(ℓ−1).
    pub size: usize,
    pub classes: Vec<PairClass>,
    pub fixed_points: Vec<(u32, u32)>,
    pub involutive: bool,
    pub bound: usize,
    /// The emitted S′_{ᾱ,ᾱ} block satisfies every pair relation.
    pub relations_verified: bool,
    pub not_relative_modular: bool,
    pub verdict: String,
    /// Evidence attached to the first open question.
    pub double_fusion_evidence: String,
}

/// τ(k, i) = (ℓ−2−k, i+k+1 mod ℓ) on {0..ℓ−2} × {0..ℓ−1}.
pub fn involution(k: u32, i: u32, ell: u32) -> (u32, u32) {
    tau(k, i, ell)
}

pub fn rank_bound_analysis(ell: i64) -> Result<RankBoundReport, Sl21Error> {
    let l = check_ell(ell)?;
    let labels = theta(l);
    let mut fixed_points = Vec::new();
    let mut involutive = true;
    let mut classes = Vec::new();
    for &(k, i) in &labels {
        let t = tau(k, i, l);
        if t == (k, i) {
            fixed_points.push((k, i));
        }
        if tau(t.0, t.1, l) != (k, i) {
            involutive = false;
        }
        if non_wrapping(k, i, l) {
            classes.push(PairClass { row: (k, i), partner: t, factor: row_factor(1) });
        }
    }
    let covered = classes.len() * 2 + fixed_points.len();
    let bound = classes.len() + fixed_points.len();

    let block = sprime_block(l, 1, 1);
    let relations_verified = covered == labels.len()
        && classes.iter().all(|c| {
            let (x, y) = (label_index(c.row.0, c.row.1, l), label_index(c.partner.0, c.partner.1, l));
            (0..block.cols()).all(|j| *block.get(x, j) == &c.factor * block.get(y, j))
        });

    let size = labels.len();
    let not_relative_modular = involutive && relations_verified && bound < size;
    let verdict = if not_relative_modular {
        format!(
            "not relative modular: rank S_g <= {bound} < {size} for every generic g, so S_g is degenerate and the modularity identity cannot hold"
        )
    } else {
        format!("inconclusive: bound {bound} of {size}")
    };

    let mut ok = 0;
    for &(k, i) in &labels {
        let l0 = WeightLabel::new(k, i);
        let back = fuse_a_twice(&l0, l)?;
        if back.k == k && back.shift == i && back.parity == l0.parity && back.eps == 1 {
            ok += 1;
        }
    }
    let double_fusion_evidence = format!(
        "A (x) A (x) V = sigma(0,1) (x) V holds label-wise on {ok} of {size} typical labels; this fixes A (x) A only up to the kernel of the action on typicals"
    );

    Ok(RankBoundReport {
        ell: l,
        size,
        classes,
        fixed_points,
        involutive,
        bound,
        relations_verified,
        not_relative_modular,
        verdict,
        double_fusion_evidence,
    })
}

impl RankBoundReport {
    pub fn fixed_point_free(&self) -> bool {
        self.fixed_points.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ell": self.ell,
            "size": self.size,
            "bound": self.bound,
            "classes": self.classes.iter().map(|c| json!({
                "row": label_name(c.row.0, c.row.1),
                "partner": label_name(c.partner.0, c.partner.1),
                "factor": c.factor.to_string(),
            })).collect::<Vec<_>>(),
            "fixed_point_free": self.fixed_point_free(),
            "involutive": self.involutive,
            "relations_verified": self.relations_verified,
            "verdict": self.verdict,
            "open_questions": OPEN_QUESTIONS.iter().map(|q| json!({"question": q, "status": "open"})).collect::<Vec<_>>(),
            "double_fusion_evidence": self.double_fusion_evidence,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("sl(2|1) rank bound at ell = {}\n", self.ell);
        s.push_str(&format!("  |Theta| = {}\n", self.size));
        s.push_str(&format!("  involution classes = {}\n", self.classes.len() + self.fixed_points.len()));
        s.push_str(&format!("  fixed-point-free = {}\n", self.fixed_point_free()));
        s.push_str(&format!("  involutive = {}\n", self.involutive));
        s.push_str(&format!("  bound = {}\n", self.bound));
        for c in &self.classes {
            s.push_str(&format!(
                "  row {} = {} * row {}\n",
                label_name(c.row.0, c.row.1),
                c.factor,
                label_name(c.partner.0, c.partner.1)
            ));
        }
        s.push_str(&format!("  pair relations verified on emitted S' = {}\n", self.relations_verified));
        s.push_str(&format!("  verdict: {}\n", self.verdict));
        for q in OPEN_QUESTIONS {
            s.push_str(&format!("  open: {q}\n"));
        }
        s.push_str(&format!("  evidence: {}\n", self.double_fusion_evidence));
        s
    }
}
