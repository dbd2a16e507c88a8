use proptest::prelude::*;
use relmod_core::catmodel::{validate, ModularDatum, CLAUSE_SYMMETRIC_X};
use relmod_core::checks::{check_nondegeneracy, check_premodular_inputs, Status};
use relmod_core::exactnum::{quantum_integer, CycScalar, ExactMatrix};
use relmod_core::sl21::*;

const ELLS: [i64; 3] = [3, 5, 7];

#[test]
fn ak_dimensions_and_spectra() {
    let r = build_ak(1, 3, Convention::Paper).unwrap();
    assert_eq!(r.dim(), 3);
    let w = r.weights().unwrap();
    let mut h1: Vec<i64> = w.iter().map(|x| x[0]).collect();
    let mut h2: Vec<i64> = w.iter().map(|x| x[1]).collect();
    h1.sort();
    h2.sort();
    assert_eq!(h1, vec![-1, 0, 1]);
    assert_eq!(h2, vec![0, 1, 1]);

    for ell in ELLS {
        for k in 1..ell {
            let r = build_ak(k, ell, default_convention()).unwrap();
            assert_eq!(r.dim() as i64, 2 * k + 1);
            for (n, label) in r.labels.iter().enumerate() {
                // label is v^j_i
                let (j, i) = label[2..].split_once('_').unwrap();
                let (j, i): (i64, i64) = (j.parse().unwrap(), i.parse().unwrap());
                assert_eq!(r.weights().unwrap()[n], [k - j - 2 * i, i + j]);
                assert_eq!(r.parity[n] as i64, j);
            }
        }
    }
}

#[test]
fn e1_on_v01_is_v00() {
    let r = build_ak(1, 3, Convention::Paper).unwrap();
    let (src, dst) = (r.index_of("v^0_1").unwrap(), r.index_of("v^0_0").unwrap());
    for row in 0..r.dim() {
        let want = if row == dst { CycScalar::one() } else { CycScalar::zero() };
        assert_eq!(*r.e[0].get(row, src), want);
    }
}

#[test]
fn f1_is_shift_matrix() {
    for c in [Convention::Paper, Convention::Corrected] {
        let r = build_ak(2, 5, c).unwrap();
        for col in 0..r.dim() {
            let (j, i) = r.labels[col][2..].split_once('_').unwrap();
            let target = format!("v^{j}_{}", i.parse::<i64>().unwrap() + 1);
            for row in 0..r.dim() {
                let want = r.index_of(&target) == Some(row);
                assert_eq!(r.f[0].get(row, col).is_one(), want);
                assert!(want || r.f[0].get(row, col).is_zero());
            }
        }
    }
}

#[test]
fn default_convention_passes_everything() {
    let c = default_convention();
    assert_eq!(c, Convention::Corrected);
    for ell in ELLS {
        for k in 1..ell {
            let rep = check_relations(&build_ak(k, ell, c).unwrap());
            assert!(rep.all_hold(), "ell={ell} k={k}: {:?}", rep.failures().collect::<Vec<_>>());
        }
    }
}

#[test]
fn paper_convention_breaks_only_f2_dependent_clauses() {
    for ell in ELLS {
        for k in 1..ell {
            let rep = check_relations(&build_ak(k, ell, Convention::Paper).unwrap());
            for o in &rep.outcomes {
                let touched = o.name == names_a3(2, 2) || o.name == names_a3(1, 2) || o.name == SERRE_F;
                if !touched {
                    assert!(o.holds, "ell={ell} k={k} {}", o.name);
                }
            }
            // [E2,F2] on v^0_1 is off by [2] - [1].
            let o = rep.outcome(&names_a3(2, 2)).unwrap();
            assert!(!o.holds);
            let (label, val) = o.witness.clone().unwrap();
            assert_eq!(label, "v^0_1");
            let want = &quantum_integer(2, ell).unwrap() - &quantum_integer(1, ell).unwrap();
            assert_eq!(val, want);
            // [E1,F2] = 0 needs [i+1][i-1] = [i]^2, false once k >= 2.
            assert_eq!(rep.outcome(&names_a3(1, 2)).unwrap().holds, k < 2, "ell={ell} k={k}");
            // c_0 = [1] is invisible (v^1_-1 = 0), so the Serre recurrence
            // c_0 - [2]c_1 + c_2 = 0 breaks on v^0_0 once k >= 2.
            let serre = rep.outcome(SERRE_F).unwrap();
            assert_eq!(serre.holds, k < 2, "ell={ell} k={k}");
            if k >= 2 {
                assert_eq!(serre.witness.as_ref().unwrap().0, "v^0_0");
            }
        }
    }
}

const SERRE_F: &str = "A5 F1^2F2 - (q+q^-1)F1F2F1 + F2F1^2 = 0";

fn names_a3(i: usize, j: usize) -> String {
    format!("A3 [E{i},F{j}] = delta_{i}{j} (K{i}-K{i}^-1)/(q^d{i}-q^-d{i})")
}

#[test]
fn zeroed_e2_fails_except_on_zero_weight() {
    let mut r = build_ak(3, 5, default_convention()).unwrap();
    let n = r.dim();
    r.e[1] = ExactMatrix::zeros(n, n);
    let rep = check_relations(&r);
    let o = rep.outcome(&names_a3(2, 2)).unwrap();
    assert!(!o.holds);
    // Remaining identity reads 0 = [H2] on each basis vector.
    let w = r.weights().unwrap();
    let (label, _) = o.witness.clone().unwrap();
    let first_bad = (0..n).find(|&c| !quantum_integer(w[c][1], 5).unwrap().is_zero()).unwrap();
    assert_eq!(label, r.labels[first_bad]);
}

#[test]
fn tensor_with_trivial() {
    let a = build_ak(2, 5, default_convention()).unwrap();
    let t = tensor_rep(&a, &WeightModuleRep::trivial(5)).unwrap();
    assert_eq!(t.h, a.h);
    assert_eq!(t.e, a.e);
    assert_eq!(t.f, a.f);
    assert_eq!(t.parity, a.parity);
    let t = tensor_rep(&WeightModuleRep::trivial(5), &a).unwrap();
    assert_eq!(t.e, a.e);
    assert_eq!(t.f, a.f);
    assert!(tensor_rep(&a, &WeightModuleRep::trivial(7)).is_err());
}

#[test]
fn tensor_h_is_additive() {
    let a = build_ak(1, 5, default_convention()).unwrap();
    let b = build_ak(2, 5, default_convention()).unwrap();
    let t = tensor_rep(&a, &b).unwrap();
    let (wa, wb, wt) = (a.weights().unwrap(), b.weights().unwrap(), t.weights().unwrap());
    for x in 0..a.dim() {
        for y in 0..b.dim() {
            let n = x * b.dim() + y;
            assert_eq!(wt[n], [wa[x][0] + wb[y][0], wa[x][1] + wb[y][1]]);
            assert_eq!(t.parity[n], (a.parity[x] + b.parity[y]) % 2);
        }
    }
}

#[test]
fn tensor_square_satisfies_relations() {
    let a = build_ak(1, 5, Convention::Corrected).unwrap();
    let t = tensor_rep(&a, &a).unwrap();
    let rep = check_relations(&t);
    assert!(rep.all_hold(), "{:?}", rep.failures().collect::<Vec<_>>());
    let t3 = tensor_rep(&t, &a).unwrap();
    assert!(check_relations(&t3).all_hold());
}

#[test]
fn character_of_ak_matches_closed_form() {
    for ell in ELLS {
        for k in 1..ell {
            let r = build_ak(k, ell, default_convention()).unwrap();
            assert_eq!(character_of_rep(&r).unwrap(), chi_ak_closed_form(k as i32), "ell={ell} k={k}");
        }
    }
    assert_eq!(character_of_rep(&WeightModuleRep::trivial(3)).unwrap(), CharacterExpr::one());
}

#[test]
fn standard_module_character() {
    // The (2|1)-dimensional module is A_1: weights (1,0), (-1,1) even, (0,1) odd.
    let v = character_of_rep(&build_ak(1, 5, default_convention()).unwrap()).unwrap();
    assert_eq!(v, chi_standard());
    assert_eq!(v.plus.to_string(), "y^2 + x*y + x^-1*y");
    assert_eq!(v.minus.to_string(), "-y^2 + x*y + x^-1*y");
}

#[test]
fn typical_character_examples() {
    let c = character_of_label(&WeightLabel::new(0, 0), 5);
    assert_eq!(c.plus, x0(1));
    for k in 0..7u32 {
        let c = character_of_label(&WeightLabel::new(k, 0), 7);
        assert_eq!(c.dimension(), 4 * (k as i64 + 1));
        let odd = character_of_label(&WeightLabel::new(k, 0).flipped(), 7);
        assert_eq!(odd.plus, c.plus);
        assert_eq!(odd.minus, -&c.minus);
    }
}

fn even(k: u32, s: i64, ell: u32) -> WeightLabel {
    WeightLabel::from_total_shift(1, k, s, Parity::Even, ell)
}

#[test]
fn vav_decomposition() {
    for ell in [3u32, 5, 7] {
        for k in 1..=ell.saturating_sub(3) {
            let chi = character_of_label(&WeightLabel::new(k, 0), ell).mul(&chi_standard());
            let mut want = vec![even(k + 1, 0, ell), even(k - 1, 1, ell), even(k, 1, ell).flipped()];
            want.sort();
            assert_eq!(decompose_typical(&chi, ell).unwrap(), want, "ell={ell} k={k}");
        }
    }
}

#[test]
fn a_times_v0_decomposition() {
    for ell in [3u32, 5, 7] {
        let chi = chi_ak_closed_form(ell as i32 - 1).mul(&character_of_label(&WeightLabel::new(0, 0), ell));
        let got = decompose_typical(&chi, ell).unwrap();
        let mut want = vec![even(ell - 1, 0, ell), even(ell - 2, 1, ell).flipped()];
        want.sort();
        assert_eq!(got, want);
        let negligible: Vec<_> = got.iter().filter(|l| l.is_negligible(ell)).collect();
        assert_eq!(negligible, vec![&even(ell - 1, 0, ell)]);
    }
}

#[test]
fn fuse_a_examples() {
    let out = fuse_a(&WeightLabel::new(0, 0), 3).unwrap();
    assert_eq!((out.k, out.shift, out.parity), (1, 1, Parity::Odd));
    let out = fuse_a(&WeightLabel::new(3, 2), 5).unwrap();
    assert_eq!((out.k, out.shift, out.parity), (0, 1, Parity::Odd));
    assert!(matches!(fuse_a(&WeightLabel::new(4, 0), 5), Err(Sl21Error::NegligibleInput(_))));
}

#[test]
fn fuse_a_twice_is_sigma01() {
    for ell in [3u32, 5, 7] {
        for k in 0..ell - 1 {
            for i in 0..ell {
                let l = WeightLabel::new(k, i);
                let back = fuse_a_twice(&l, ell).unwrap();
                assert_eq!(back, WeightLabel { eps: 1, ..l });
            }
        }
    }
}

#[test]
fn fuse_a_agrees_with_characters() {
    for ell in [3u32, 5, 7] {
        for k in 0..ell - 1 {
            for i in 0..ell {
                for l in [WeightLabel::new(k, i), WeightLabel::new(k, i).flipped()] {
                    assert_eq!(fuse_a_by_characters(&l, ell).unwrap(), fuse_a(&l, ell).unwrap(), "ell={ell} {l}");
                }
            }
        }
    }
}

#[test]
fn rank_bound_counts() {
    for (ell, want) in [(3, 3), (5, 10), (7, 21)] {
        let r = rank_bound_analysis(ell).unwrap();
        assert_eq!(r.bound, want);
        assert_eq!(r.classes.len(), want);
        assert!(r.fixed_point_free());
        assert!(r.involutive);
        assert!(r.relations_verified);
        assert!(r.not_relative_modular);
        assert!(r.verdict.starts_with("not relative modular"));
        assert!(r.classes.iter().all(|c| c.factor.to_string() == "-u^2"));
    }
    assert!(rank_bound_analysis(4).is_err());
}

#[test]
fn emitted_datum_round_trips_and_is_degenerate() {
    let d = emit_datum(3).unwrap();
    let text = d.to_json();
    let back = ModularDatum::from_json(&text).unwrap();
    assert_eq!(back, d);
    let g = d.degrees[0].degree.clone();
    assert_eq!(d.degrees[0].size(), 6);
    let v = check_nondegeneracy(&d, &g);
    assert_eq!(v.status, Status::Fails);
    assert_eq!(v.derived_value(&format!("rank S_{g}")), Some(&CycScalar::from_integer(3)));
    let p = check_premodular_inputs(&d);
    assert!(!p.witnesses.iter().any(|w| w.name == CLAUSE_SYMMETRIC_X));
    assert_eq!(p.status, Status::Holds, "{}", p.to_text());
    let qd = &d.translation;
    let z = |s: &str| qd.group.parse(s).unwrap();
    assert_eq!(qd.quantum_dimension_of(&z("(1,0)")), Some(-1));
    assert_eq!(qd.quantum_dimension_of(&z("(0,1)")), Some(1));
    assert!(validate(&emit_datum(5).unwrap()).is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn involution_fixed_point_free(half in 1u32..60) {
        let ell = 2 * half + 1;
        for k in 0..ell - 1 {
            for i in 0..ell {
                let t = involution(k, i, ell);
                prop_assert_ne!(t, (k, i));
                prop_assert_eq!(involution(t.0, t.1, ell), (k, i));
            }
        }
    }

    /// Decomposing a product in stages equals decomposing it at once.
    #[test]
    fn decomposition_is_linear(ell_idx in 0usize..3, k in 0u32..6, i in 0u32..7, use_a in any::<bool>()) {
        let ell = [3u32, 5, 7][ell_idx];
        let k = k % (ell - 1);
        let i = i % ell;
        let v = chi_standard();
        let b = if use_a { chi_ak_closed_form(ell as i32 - 1) } else { v.clone() };
        let base = character_of_label(&WeightLabel::new(k, i), ell);
        let whole = decompose_typical(&base.mul(&b).mul(&v), ell).unwrap();
        let mut staged = Vec::new();
        for l in decompose_typical(&base.mul(&b), ell).unwrap() {
            staged.extend(decompose_typical(&character_of_label(&l, ell).mul(&v), ell).unwrap());
        }
        staged.sort();
        prop_assert_eq!(whole, staged);
    }

    /// Peeling reconstructs its input.
    #[test]
    fn decomposition_reconstructs(ell_idx in 0usize..3, k in 0u32..6, i in 0u32..7, odd in any::<bool>()) {
        let ell = [3u32, 5, 7][ell_idx];
        let mut l = WeightLabel::new(k % (ell - 1), i % ell);
        if odd { l = l.flipped(); }
        let chi = chi_ak_closed_form(ell as i32 - 1).mul(&character_of_label(&l, ell));
        let parts = decompose_typical(&chi, ell).unwrap();
        let mut sum = CharacterExpr::zero(1);
        for p in &parts {
            sum = sum.add(&character_of_label(p, ell)).unwrap();
        }
        prop_assert_eq!(sum, chi);
    }
}
