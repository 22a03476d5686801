//! Unary and binary products, necessity of lower stages, and determinism.

use std::collections::BTreeMap;

use massey_core::algebra::json::parse_doc;
use massey_core::algebra::{build_standard_coalgebra, LieAlgebra, StandardCoalgebra};
use massey_core::ce::CeComplex;
use massey_core::dg::DgAlgebra;
use massey_core::dgca::{dgca_massey, DgcAlgebra, DgcaClass};
use massey_core::exact::{int, is_zero_vec, sign, unit_vec, zero_vec, Scalar};
use massey_core::massey::{massey_search, ClassAssignment, MasseyProblem, SearchOptions, Status};

fn lie_algebras() -> Vec<(&'static str, CeComplex)> {
    [
        ("abelian2", LieAlgebra::abelian(2)),
        ("heisenberg", LieAlgebra::heisenberg()),
        ("sl2", LieAlgebra::sl2()),
        ("aff1", LieAlgebra::aff1()),
    ]
    .into_iter()
    .map(|(n, g)| (n, CeComplex::new(g).unwrap()))
    .collect()
}

/// Degrees `q` of `L = C^{*+1}(g; g)` with `H^q ≠ 0`.
fn live_degrees(ce: &CeComplex, top: i64) -> Vec<i64> {
    (-1..=top)
        .filter(|&q| DgAlgebra::cohomology(ce, q).unwrap().dimension() > 0)
        .collect()
}

fn classical(degrees: &[i64]) -> MasseyProblem {
    let f = build_standard_coalgebra(&StandardCoalgebra::Classical {
        degrees: degrees.to_vec(),
    })
    .unwrap();
    MasseyProblem::from_coalgebra(&f).unwrap()
}

#[test]
fn dgla_binary_product_is_signed_bracket() {
    let mut nonzero_even = 0;
    for (name, ce) in lie_algebras() {
        let top = ce.lie().dim() as i64 - 1;
        let live = live_degrees(&ce, top);
        for &q1 in &live {
            for &q2 in &live {
                let h1 = DgAlgebra::cohomology(&ce, q1).unwrap();
                let h2 = DgAlgebra::cohomology(&ce, q2).unwrap();
                let h12 = DgAlgebra::cohomology(&ce, q1 + q2).unwrap();
                let problem = classical(&[q1, q2]);
                for i in 0..h1.dimension() {
                    for j in 0..h2.dimension() {
                        let (c1, c2) = (unit_vec(h1.dimension(), i), unit_vec(h2.dimension(), j));
                        let classes = ClassAssignment {
                            a: BTreeMap::from([("f{1}".to_string(), c1.clone()), ("f{2}".to_string(), c2.clone())]),
                            b: None,
                        };
                        let r = massey_search(&ce, &problem, &classes, &SearchOptions::default()).unwrap();
                        assert_eq!(r.status, Status::Found);
                        let bracket = ce.product(q1, &h1.lift(&c1).unwrap(), q2, &h2.lift(&c2).unwrap());
                        let class = h12.decompose(&bracket).unwrap().coords;
                        let expected: Vec<Scalar> = class.iter().map(|c| c * sign(q1 + 1)).collect();
                        assert_eq!(r.products["f{1,2}"], expected, "{name}: q = ({q1}, {q2}), ({i}, {j})");
                        if q1 % 2 == 0 && !is_zero_vec(&class) {
                            nonzero_even += 1;
                        }
                    }
                }
            }
        }
    }
    // the sign is visible: some even-degree left factor has a nonzero bracket
    assert!(nonzero_even > 0);
}

#[test]
fn dgla_unary_product_vanishes() {
    for (name, ce) in lie_algebras() {
        let top = ce.lie().dim() as i64 - 1;
        for q in live_degrees(&ce, top) {
            let f = build_standard_coalgebra(&StandardCoalgebra::ExplicitTable {
                degrees: vec![q, q],
                r: 1,
                coefficients: vec![],
            })
            .unwrap();
            let problem = MasseyProblem::from_coalgebra(&f).unwrap();
            let h = DgAlgebra::cohomology(&ce, q).unwrap();
            for i in 0..h.dimension() {
                let classes = ClassAssignment {
                    a: BTreeMap::from([("f1".to_string(), unit_vec(h.dimension(), i))]),
                    b: None,
                };
                let r = massey_search(&ce, &problem, &classes, &SearchOptions::default()).unwrap();
                assert_eq!(r.status, Status::Found);
                assert!(is_zero_vec(&r.products["f2"]), "{name}: q = {q}");
            }
        }
    }
}

const EXTERIOR: &str = r#"{"kind": "dgca",
  "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 1}, {"name": "y", "degree": 1},
            {"name": "xy", "degree": 2}],
  "table": [
    {"left": "1", "right": "1", "result": {"1": "1"}},
    {"left": "1", "right": "x", "result": {"x": "1"}},
    {"left": "x", "right": "1", "result": {"x": "1"}},
    {"left": "1", "right": "y", "result": {"y": "1"}},
    {"left": "y", "right": "1", "result": {"y": "1"}},
    {"left": "1", "right": "xy", "result": {"xy": "1"}},
    {"left": "xy", "right": "1", "result": {"xy": "1"}},
    {"left": "x", "right": "y", "result": {"xy": "1"}},
    {"left": "y", "right": "x", "result": {"xy": "-1"}}]}"#;

/// `K[w]/(w³)` with `|w| = 2`.
const TRUNCATED: &str = r#"{"kind": "dgca",
  "basis": [{"name": "1", "degree": 0}, {"name": "w", "degree": 2}, {"name": "w2", "degree": 4}],
  "table": [
    {"left": "1", "right": "1", "result": {"1": "1"}},
    {"left": "1", "right": "w", "result": {"w": "1"}},
    {"left": "w", "right": "1", "result": {"w": "1"}},
    {"left": "1", "right": "w2", "result": {"w2": "1"}},
    {"left": "w2", "right": "1", "result": {"w2": "1"}},
    {"left": "w", "right": "w", "result": {"w2": "1"}}]}"#;

fn dgcas() -> Vec<(&'static str, DgcAlgebra)> {
    [("exterior", EXTERIOR), ("truncated", TRUNCATED)]
        .into_iter()
        .map(|(n, s)| (n, DgcAlgebra::from_doc(&parse_doc(s).unwrap()).unwrap()))
        .collect()
}

fn class(degree: i64, coords: Vec<Scalar>) -> DgcaClass {
    DgcaClass { degree, coords }
}

#[test]
fn dgca_binary_product_is_signed_product() {
    for (name, a) in dgcas() {
        let live: Vec<i64> = (0..=4).filter(|&p| a.cohomology(p).unwrap().dimension() > 0).collect();
        for &p in &live {
            for &q in &live {
                let (hp, hq) = (a.cohomology(p).unwrap(), a.cohomology(q).unwrap());
                let hpq = a.cohomology(p + q).unwrap();
                for i in 0..hp.dimension() {
                    for j in 0..hq.dimension() {
                        let (ci, cj) = (unit_vec(hp.dimension(), i), unit_vec(hq.dimension(), j));
                        let r = dgca_massey(
                            &a,
                            &[class(p, ci.clone()), class(q, cj.clone())],
                            None,
                            &SearchOptions::default(),
                        )
                        .unwrap();
                        assert_eq!(r.status, Status::Found);
                        let ab = a.product(p, &hp.lift(&ci).unwrap(), q, &hq.lift(&cj).unwrap());
                        let expected: Vec<Scalar> =
                            hpq.decompose(&ab).unwrap().coords.iter().map(|c| c * sign(p)).collect();
                        assert_eq!(r.products["a(1,3)"], expected, "{name}: ({p}, {q}), ({i}, {j})");
                    }
                }
            }
        }
    }
}

#[test]
fn dgca_unary_product_vanishes() {
    for (_, a) in dgcas() {
        for p in 0..=4 {
            let h = a.cohomology(p).unwrap();
            for i in 0..h.dimension() {
                let r = dgca_massey(&a, &[class(p, unit_vec(h.dimension(), i))], None, &SearchOptions::default())
                    .unwrap();
                assert_eq!(r.status, Status::Found);
                assert!(r.products.values().all(|v| is_zero_vec(v)));
            }
        }
    }
}

#[test]
fn obstructed_stage_is_solvable_after_truncation() {
    let f = build_standard_coalgebra(&StandardCoalgebra::OneParam { order: 4 }).unwrap();
    let problem = MasseyProblem::from_coalgebra(&f).unwrap();
    let ce = CeComplex::new(LieAlgebra::abelian(3)).unwrap();
    let h = DgAlgebra::cohomology(&ce, 1).unwrap();
    let mut obstructed = 0;
    for i in 0..h.dimension() {
        for j in i..h.dimension() {
            let mut c = unit_vec(h.dimension(), i);
            c[j] += int(1);
            let classes = ClassAssignment {
                a: BTreeMap::from([("f1".to_string(), c)]),
                b: None,
            };
            let r = massey_search(&ce, &problem, &classes, &SearchOptions::default()).unwrap();
            if r.status != Status::Obstructed {
                continue;
            }
            obstructed += 1;
            let k = problem.index_of(&r.obstruction.unwrap().generator).unwrap();
            let lower = problem.truncated_before(k).unwrap();
            let r = massey_search(&ce, &lower, &classes, &SearchOptions::default()).unwrap();
            assert_eq!(r.status, Status::Found);
        }
    }
    assert!(obstructed > 0);
}

#[test]
fn undefined_triple_has_an_obstructed_window() {
    let (_, a) = dgcas().remove(0);
    let h1 = a.cohomology(1).unwrap();
    let (x, y) = (class(1, unit_vec(2, 0)), class(1, unit_vec(2, 1)));
    let zero = zero_vec(a.cohomology(2).unwrap().dimension());
    assert_eq!(h1.dimension(), 2);
    let opts = SearchOptions::backtrack(8);
    // ⟨x, x⟩ contains 0 and ⟨x, y⟩ does not, so ⟨x, x, y⟩ fails at (2, 4)
    let xx = dgca_massey(&a, &[x.clone(), x.clone()], Some(&zero), &opts).unwrap();
    assert_eq!(xx.status, Status::Found);
    let xy = dgca_massey(&a, &[x.clone(), y.clone()], Some(&zero), &opts).unwrap();
    assert_ne!(xy.status, Status::Found);
    let r = dgca_massey(&a, &[x.clone(), x, y], None, &SearchOptions::default()).unwrap();
    assert_eq!(r.status, Status::Obstructed);
    assert_eq!(r.obstruction.unwrap().generator, "a(2,4)");
}

#[test]
fn searches_are_deterministic() {
    let f = build_standard_coalgebra(&StandardCoalgebra::Pair { order: 5 }).unwrap();
    let problem = MasseyProblem::from_coalgebra(&f).unwrap();
    let ce = CeComplex::new(LieAlgebra::heisenberg()).unwrap();
    let h = DgAlgebra::cohomology(&ce, 1).unwrap();
    for opts in [SearchOptions::default(), SearchOptions::backtrack(16)] {
        let classes = ClassAssignment {
            a: BTreeMap::from([
                ("f1".to_string(), unit_vec(h.dimension(), 0)),
                ("phi2".to_string(), unit_vec(h.dimension(), 1)),
            ]),
            b: None,
        };
        let first = massey_search(&ce, &problem, &classes, &opts).unwrap();
        let second = massey_search(&ce, &problem, &classes, &opts).unwrap();
        assert_eq!(format!("{first:?}"), format!("{second:?}"));
    }
}
