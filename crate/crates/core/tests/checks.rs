use num_rational::BigRational;
use proptest::prelude::*;
use relmod_core::catmodel::{ModularDatum, SmallSubset, CLAUSE_PSI_K, CLAUSE_QDIM_PM1, CLAUSE_SYMMETRIC_X};
use relmod_core::checks::synthetic::{consistent_datum, SyntheticSpec};
use relmod_core::checks::*;
use relmod_core::exactnum::{parse_scalar, CycScalar, ExactMatrix};

fn s(x: &str) -> CycScalar {
    parse_scalar(x).unwrap()
}

fn matrix_json(rows: &[&[&str]]) -> String {
    let r: Vec<String> = rows
        .iter()
        .map(|row| format!("[{}]", row.iter().map(|x| format!("\"{x}\"")).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", r.join(","))
}

/// Torus-graded datum with degrees a and -a sharing size n.
fn two_degree_datum(dims: &[&str], twists: &[&str], gg: &[&[&str]], mix: &[&[&str]], extra: &str) -> ModularDatum {
    let n = dims.len();
    let labels: Vec<String> = (0..n).map(|i| format!("\"V{i}\"")).collect();
    let q = |v: &[&str]| v.iter().map(|x| format!("\"{x}\"")).collect::<Vec<_>>().join(",");
    let map: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let text = format!(
        r#"{{
        "schema": "relmod-datum/1",
        "grading": {{"torus": true, "small_subset": {{"elements": ["0"]}}}},
        "translation": {{}},
        "degrees": [
          {{"degree": "a", "labels": [{l}], "dims": [{d}], "twists": [{t}], "dual": {{"degree": "-a", "map": [{m}]}}}},
          {{"degree": "-a", "labels": [{l}], "dims": [{d}], "twists": [{t}], "dual": {{"degree": "a", "map": [{m}]}}}}
        ],
        "sprime": [
          {{"rows": "a", "cols": "a", "entries": {gg}}},
          {{"rows": "-a", "cols": "a", "entries": {mix}}},
          {{"rows": "a", "cols": "-a", "entries": {mixt}}}
        ]{extra}
        }}"#,
        l = labels.join(","),
        d = q(dims),
        t = q(twists),
        m = map.join(","),
        gg = matrix_json(gg),
        mix = matrix_json(mix),
        mixt = matrix_json(&transpose(mix)),
    );
    ModularDatum::from_json_unchecked(&text).unwrap()
}

fn transpose<'a>(m: &[&[&'a str]]) -> Vec<&'a [&'a str]> {
    let n = m.len();
    let cols: Vec<Vec<&'a str>> = (0..m[0].len()).map(|j| (0..n).map(|i| m[i][j]).collect()).collect();
    cols.into_iter().map(|c| &*Box::leak(c.into_boxed_slice())).collect()
}

fn identity_datum() -> ModularDatum {
    two_degree_datum(&["1", "1"], &["1", "1"], &[&["1", "0"], &["0", "1"]], &[&["1", "0"], &["0", "1"]], "")
}

fn a(d: &ModularDatum) -> relmod_core::catmodel::Degree {
    d.parse_degree("a").unwrap()
}

#[test]
fn delta_examples() {
    let d = identity_datum();
    assert!(delta_minus(&d, &a(&d), 0).unwrap().is_one());
    assert!(delta_minus(&d, &a(&d), 1).unwrap().is_one());
    assert!(delta_plus(&d, &a(&d), 0).unwrap().is_one());
    let d = two_degree_datum(&["1", "1"], &["z5", "3"], &[&["1", "0"], &["0", "1"]], &[&["1", "0"], &["0", "1"]], "");
    assert_eq!(delta_minus(&d, &a(&d), 0).unwrap(), s("z5^-2"));
    assert_eq!(delta_plus(&d, &a(&d), 0).unwrap(), s("z5^2"));
}

#[test]
fn delta_minus_matches_brute_force_sum() {
    let d = two_degree_datum(
        &["2", "-1", "z3"],
        &["u", "z7^2", "5"],
        &[&["1", "2*u", "3"], &["2*u", "z7", "x"], &["3", "x", "-1"]],
        &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]],
        "",
    );
    let g = a(&d);
    let dd = d.degree(&g).unwrap();
    let sp = d.block(&g, &g).unwrap();
    for j in 0..3 {
        // explicit unrolled sum
        let mut total = CycScalar::zero();
        for i in 0..3 {
            let term = sp.get(i, j).clone() * dd.dims[i].clone() * dd.twists[i].pow(-1).unwrap();
            total = total + term;
        }
        total = total * dd.twists[j].pow(-1).unwrap();
        assert_eq!(delta_minus(&d, &g, j).unwrap(), total);
    }
}

#[test]
fn nondegeneracy_examples() {
    let d = identity_datum();
    let v = check_nondegeneracy(&d, &a(&d));
    assert_eq!(v.status, Status::Holds, "{}", v.to_text());
    assert!(v.derived_value("Delta_plus*Delta_minus").unwrap().is_one());

    let d = two_degree_datum(&["1", "1"], &["1", "1"], &[&["1", "1"], &["1", "1"]], &[&["1", "0"], &["0", "1"]], "");
    let v = check_nondegeneracy(&d, &a(&d));
    assert_eq!(v.status, Status::Fails);
    assert!(v.witnesses.iter().any(|w| w.name == "kernel of S_g" && w.detail == "(1, -1)"), "{}", v.to_text());
}

#[test]
fn missing_blocks_are_data_absent() {
    let mut d = identity_datum();
    d.sprime.retain(|b| b.rows == b.cols);
    assert_eq!(check_nondegeneracy(&d, &a(&d)).status, Status::DataAbsent);
    assert_eq!(check_relative_modularity(&d, &a(&d), &a(&d)).status, Status::DataAbsent);
    assert_eq!(check_dmug(&d, &a(&d)).status, Status::DataAbsent);
    assert!(matches!(delta_plus(&d, &a(&d), 0), Err(CheckError::MissingBlock(..))));
}

#[test]
fn rank_constancy_examples() {
    let ones = &[&["1", "2"][..], &["3", "4"]];
    let d = two_degree_datum(&["1", "1"], &["1", "1"], &[&["1", "2"], &["2", "1"]], ones, "");
    assert_eq!(check_rank_constancy(&d).status, Status::Holds);

    let d = identity_datum();
    let v = check_rank_constancy(&d);
    assert_eq!(v.status, Status::HypothesisNotMet);
    assert_eq!(v.hypothesis.as_deref(), Some(HYP_NO_ZERO));
    assert_eq!(v.witnesses[0].indices, vec!["a", "a", "0", "1"]);

    // ranks 2 and 3 with no zero entries
    let d = two_degree_datum(
        &["1", "1", "1"],
        &["1", "1", "1"],
        &[&["1", "2", "3"], &["2", "5", "7"], &["3", "7", "11"]],
        &[&["1", "1", "1"], &["1", "2", "3"], &["2", "3", "4"]],
        "",
    );
    assert_eq!(ExactMatrix::rank(d.block(&a(&d), &a(&d)).unwrap()), 3);
    let v = check_rank_constancy(&d);
    assert_eq!(v.status, Status::Fails, "{}", v.to_text());
}

#[test]
fn dmug_examples() {
    let one = &[&["1"][..]];
    let base = two_degree_datum(&["1"], &["1"], one, one, r#", "orbit_count": 1"#);
    assert_eq!(check_dmug(&base, &a(&base)).status, Status::Holds);

    let d = two_degree_datum(
        &["1", "1"],
        &["1", "1"],
        &[&["0", "1"], &["1", "0"]],
        &[&["0", "1"], &["1", "0"]],
        r#", "orbit_count": 2"#,
    );
    let v = check_dmug(&d, &a(&d));
    assert_eq!(v.status, Status::Fails);
    assert!(v.witnesses.iter().any(|w| w.name.starts_with("condition (2)") && w.detail.contains("every row")));

    let d = two_degree_datum(
        &["1", "1", "1"],
        &["1", "1", "1"],
        &[&["1", "1", "1"], &["1", "2", "1"], &["1", "1", "3"]],
        &[&["1", "1", "1"], &["1", "2", "1"], &["1", "1", "3"]],
        r#", "orbit_count": 2"#,
    );
    let v = check_dmug(&d, &a(&d));
    assert_eq!(v.status, Status::Fails);
    assert!(v.witnesses.iter().any(|w| w.name == "condition (1) shape"));

    let d =
        two_degree_datum(&["1"], &["1"], one, one, r#", "orbit_count": 1, "assertions": {"no_self_extension": false}"#);
    assert_eq!(check_dmug(&d, &a(&d)).status, Status::HypothesisNotMet);
}

#[test]
fn modularity_examples() {
    let d = identity_datum();
    let v = check_relative_modularity(&d, &a(&d), &a(&d));
    assert_eq!(v.status, Status::Holds, "{}", v.to_text());
    assert!(v.derived_value("zeta_Omega").unwrap().is_one());

    let d = two_degree_datum(&["1", "1"], &["1", "1"], &[&["1", "0"], &["0", "2"]], &[&["1", "0"], &["0", "1"]], "");
    let v = check_relative_modularity(&d, &a(&d), &a(&d));
    assert_eq!(v.status, Status::Fails);
    assert_eq!(v.witnesses[0].indices, vec!["1", "1"]);

    let d = two_degree_datum(&["1", "1"], &["1", "1"], &[&["1", "1"], &["1", "1"]], &[&["1", "0"], &["0", "1"]], "");
    assert_eq!(check_relative_modularity(&d, &a(&d), &a(&d)).status, Status::Fails);
}

#[test]
fn premodular_negative_controls() {
    let good = identity_datum();
    assert_eq!(check_premodular_inputs(&good).status, Status::Holds);

    let mut bad = good.clone();
    bad.translation.quantum_dimension.push((bad.translation.group.zero(), 2));
    let v = check_premodular_inputs(&bad);
    assert_eq!(v.status, Status::Fails);
    assert_eq!(v.witnesses[0].name, CLAUSE_QDIM_PM1);

    let mut bad = good.clone();
    bad.grading.small = SmallSubset::Elements(vec![bad.parse_degree("1/3").unwrap()]);
    let v = check_premodular_inputs(&bad);
    assert_eq!(v.status, Status::Fails);
    assert_eq!(v.witnesses[0].name, CLAUSE_SYMMETRIC_X);
}

#[test]
fn psi_bilinearity_violation_names_indices() {
    let text = r#"{
        "schema": "relmod-datum/1",
        "grading": {"torus": true, "small_subset": {"elements": ["0"]}},
        "translation": {"cyclic": [0], "quantum_dimension": [{"k": "0", "value": 1}],
            "psi": [{"g": "a", "k": "1", "value": "u"}, {"g": "a", "k": "2", "value": "u^3"}]},
        "degrees": [{"degree": "a", "labels": ["V"], "dims": ["1"], "twists": ["1"]}],
        "sprime": [{"rows": "a", "cols": "a", "entries": [["1"]]}]
    }"#;
    let err = ModularDatum::from_json(text).unwrap_err().to_string();
    assert!(err.contains(CLAUSE_PSI_K) && err.contains("(a,1,1)"), "{err}");
}

#[test]
fn check_all_covers_every_degree() {
    let d = identity_datum();
    let vs = check_all(&d);
    assert!(vs.iter().all(|v| v.status == Status::Holds || v.check.starts_with(CHECK_RANK)), "{vs:?}");
    // (-a,-a) is absent, so only degree a gets the per-degree checks
    assert_eq!(vs.len(), 1 + 2 + 1);
}

fn rational(n: i64, d: i64) -> CycScalar {
    CycScalar::from_rational(BigRational::new(n.into(), d.into()))
}

fn nonzero() -> impl Strategy<Value = CycScalar> {
    (prop_oneof![-5i64..=-1, 1i64..=5], 1i64..=4).prop_map(|(n, d)| rational(n, d))
}

fn spec(n: usize) -> impl Strategy<Value = SyntheticSpec> {
    (
        prop::collection::vec(nonzero(), n),
        prop::collection::vec(nonzero(), n),
        nonzero(),
        nonzero(),
        prop::collection::vec(-4i64..=4, n * n),
    )
        .prop_map(move |(twists, dims, dm, zeta, raw)| {
            let mut base = ExactMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let v = if i <= j { raw[i * n + j] } else { raw[j * n + i] };
                    base.set(i, j, CycScalar::from_integer(v));
                }
            }
            SyntheticSpec { twists, dims, delta_minus: dm, zeta, base }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn consistent_data_satisfy_every_check(sp in (1usize..=4).prop_flat_map(spec)) {
        let Ok((d, _)) = consistent_datum(&sp) else { return Ok(()) };
        prop_assert!(relmod_core::catmodel::validate(&d).is_empty());
        let g = a(&d);
        for j in 0..sp.twists.len() {
            prop_assert_eq!(&delta_minus(&d, &g, j).unwrap(), &sp.delta_minus);
        }
        let m = check_relative_modularity(&d, &g, &g);
        prop_assert_eq!(m.status, Status::Holds, "{}", m.to_text());
        prop_assert_eq!(m.derived_value("zeta_Omega"), Some(&sp.zeta));
        let nd = check_nondegeneracy(&d, &g);
        prop_assert_eq!(nd.status, Status::Holds);
        prop_assert!(!delta_plus(&d, &g, 0).unwrap().is_zero());
    }
}
