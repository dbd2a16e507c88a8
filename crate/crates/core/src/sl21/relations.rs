use super::rep::{Convention, WeightModuleRep, GENERATOR_ODD};
use super::{CARTAN, SYMMETRIZER};
use crate::checks::{Status, Verdict, Witness};
use crate::exactnum::{q_pow, CycScalar, ExactMatrix};

pub const CHECK_RELATIONS: &str = "sl21-relations";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationOutcome {
    pub name: String,
    pub holds: bool,
    /// True when the relation has no instance for sl(2|1).
    pub vacuous: bool,
    /// First basis vector on which LHS − RHS is nonzero, with the first
    /// nonzero coordinate of (LHS − RHS)·v.
    pub witness: Option<(String, CycScalar)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub module: String,
    pub ell: u32,
    pub convention: Option<Convention>,
    pub outcomes: Vec<RelationOutcome>,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.outcomes.iter().all(|o| o.holds)
    }

    pub fn outcome(&self, name: &str) -> Option<&RelationOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationOutcome> {
        self.outcomes.iter().filter(|o| !o.holds)
    }

    pub fn to_verdict(&self) -> Verdict {
        let mut v = Verdict::new(CHECK_RELATIONS, if self.all_hold() { Status::Holds } else { Status::Fails });
        for o in self.failures() {
            let mut w = Witness::new(o.name.clone(), vec![], "LHS - RHS is nonzero");
            if let Some((label, val)) = &o.witness {
                w = Witness::new(o.name.clone(), vec![label.clone()], format!("LHS - RHS is nonzero on {label}"))
                    .with_value(val.clone());
            }
            v.witnesses.push(w);
        }
        v.notes.push(format!("module {} at ell = {}", self.module, self.ell));
        if let Some(c) = self.convention {
            v.notes.push(format!("convention: {c}"));
        }
        for o in &self.outcomes {
            let state = match (o.holds, o.vacuous) {
                (true, true) => "holds (no instance)",
                (true, false) => "holds",
                (false, _) => "fails",
            };
            v.notes.push(format!("{}: {state}", o.name));
        }
        v
    }
}

pub mod names {
    pub fn a3(i: usize, j: usize) -> String {
        format!("A3 [E{i},F{j}] = delta_{i}{j} (K{i}-K{i}^-1)/(q^d{i}-q^-d{i})")
    }
}

fn mul(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    a.mul(b).expect("square matrices of one size")
}

fn mul3(a: &ExactMatrix, b: &ExactMatrix, c: &ExactMatrix) -> ExactMatrix {
    mul(&mul(a, b), c)
}

/// [x,y] = xy − (−1)^{|x||y|} yx.
fn supercommutator(x: &ExactMatrix, x_odd: bool, y: &ExactMatrix, y_odd: bool) -> ExactMatrix {
    let xy = mul(x, y);
    let yx = mul(y, x);
    if x_odd && y_odd {
        xy.add(&yx).expect("shape")
    } else {
        xy.sub(&yx).expect("shape")
    }
}

fn first_discrepancy(lhs: &ExactMatrix, rhs: &ExactMatrix, labels: &[String]) -> Option<(String, CycScalar)> {
    let d = lhs.sub(rhs).expect("shape");
    for c in 0..d.cols() {
        for r in 0..d.rows() {
            let x = d.get(r, c);
            if !x.is_zero() {
                return Some((labels[c].clone(), x.clone()));
            }
        }
    }
    None
}

struct Collector<'a> {
    labels: &'a [String],
    out: Vec<RelationOutcome>,
}

impl Collector<'_> {
    fn push(&mut self, name: String, lhs: &ExactMatrix, rhs: &ExactMatrix) {
        let witness = first_discrepancy(lhs, rhs, self.labels);
        self.out.push(RelationOutcome { name, holds: witness.is_none(), vacuous: false, witness });
    }

    fn vacuous(&mut self, name: &str) {
        self.out.push(RelationOutcome { name: name.into(), holds: true, vacuous: true, witness: None });
    }
}

/// Evaluate every defining relation of U_q^H sl(2|1) as a matrix identity.
pub fn check_relations(rep: &WeightModuleRep) -> RelationReport {
    let n = rep.dim();
    let id = ExactMatrix::identity(n);
    let zero = ExactMatrix::zeros(n, n);
    let mut c = Collector { labels: &rep.labels, out: Vec::new() };
    let report =
        |out| RelationReport { module: rep.name.clone(), ell: rep.ell, convention: rep.convention, outcomes: out };

    let (k, kinv) =
        match (0..2).map(|i| Ok((rep.k(i, false)?, rep.k(i, true)?))).collect::<Result<Vec<_>, super::Sl21Error>>() {
            Ok(v) => {
                c.out.push(RelationOutcome {
                    name: "weight module: H_i diagonal, K_i = q^(d_i H_i)".into(),
                    holds: true,
                    vacuous: false,
                    witness: None,
                });
                let (k, kinv): (Vec<_>, Vec<_>) = v.into_iter().unzip();
                (k, kinv)
            }
            Err(e) => {
                c.out.push(RelationOutcome {
                    name: "weight module: H_i diagonal, K_i = q^(d_i H_i)".into(),
                    holds: false,
                    vacuous: false,
                    witness: Some((format!("{e}"), CycScalar::zero())),
                });
                return report(c.out);
            }
        };
    let q = |e: i64| q_pow(rep.ell, e);
    let (e, f, h) = (&rep.e, &rep.f, &rep.h);

    // A1
    c.push("A1 K1K2 = K2K1".into(), &mul(&k[0], &k[1]), &mul(&k[1], &k[0]));
    for i in 0..2 {
        c.push(format!("A1 K{0}K{0}^-1 = 1", i + 1), &mul(&k[i], &kinv[i]), &id);
        c.push(format!("A1 K{0}^-1K{0} = 1", i + 1), &mul(&kinv[i], &k[i]), &id);
    }

    // A2
    for i in 0..2 {
        for j in 0..2 {
            let s = SYMMETRIZER[i] * CARTAN[i][j];
            let (a, b) = (i + 1, j + 1);
            c.push(
                format!("A2 K{a}E{b}K{a}^-1 = q^(d{a}a{a}{b}) E{b}"),
                &mul3(&k[i], &e[j], &kinv[i]),
                &e[j].scale(&q(s)),
            );
            c.push(
                format!("A2 K{a}F{b}K{a}^-1 = q^(-d{a}a{a}{b}) F{b}"),
                &mul3(&k[i], &f[j], &kinv[i]),
                &f[j].scale(&q(-s)),
            );
        }
    }

    // A3
    for i in 0..2 {
        for j in 0..2 {
            let lhs = supercommutator(&e[i], GENERATOR_ODD[i], &f[j], GENERATOR_ODD[j]);
            let rhs = if i == j {
                let den =
                    (&q(SYMMETRIZER[i]) - &q(-SYMMETRIZER[i])).inverse().expect("q^d - q^-d is a unit for odd ell");
                k[i].sub(&kinv[i]).expect("shape").scale(&den)
            } else {
                zero.clone()
            };
            c.push(names::a3(i + 1, j + 1), &lhs, &rhs);
        }
    }
    c.push("A3 E2^2 = 0".into(), &mul(&e[1], &e[1]), &zero);
    c.push("A3 F2^2 = 0".into(), &mul(&f[1], &f[1]), &zero);

    // A4 needs |i−j| > 2 and A6 needs a third simple root.
    c.vacuous("A4 [X_i,X_j] = 0 for |i-j| > 2");
    let q2 = &q(1) + &q(-1);
    for (x, tag) in [(e, "E"), (f, "F")] {
        let x1x1x2 = mul3(&x[0], &x[0], &x[1]);
        let x1x2x1 = mul3(&x[0], &x[1], &x[0]).scale(&q2);
        let x2x1x1 = mul3(&x[1], &x[0], &x[0]);
        let lhs = x1x1x2.sub(&x1x2x1).expect("shape").add(&x2x1x1).expect("shape");
        c.push(format!("A5 {tag}1^2{tag}2 - (q+q^-1){tag}1{tag}2{tag}1 + {tag}2{tag}1^2 = 0"), &lhs, &zero);
    }
    c.vacuous("A6 quartic relation around the odd root");

    // A7
    for i in 0..2 {
        for j in 0..2 {
            let (a, b) = (i + 1, j + 1);
            c.push(format!("A7 [H{a},H{b}] = 0"), &supercommutator(&h[i], false, &h[j], false), &zero);
            c.push(format!("A7 [H{a},K{b}] = 0"), &supercommutator(&h[i], false, &k[j], false), &zero);
            let a_ij = CycScalar::from_integer(CARTAN[i][j]);
            c.push(
                format!("A7 [H{a},E{b}] = a{a}{b} E{b}"),
                &supercommutator(&h[i], false, &e[j], false),
                &e[j].scale(&a_ij),
            );
            c.push(
                format!("A7 [H{a},F{b}] = -a{a}{b} F{b}"),
                &supercommutator(&h[i], false, &f[j], false),
                &f[j].scale(&-a_ij),
            );
        }
    }
    report(c.out)
}
