//! Dual algebras of the standard coalgebras, compared as exact tables with
//! tables written out independently here.

use massey_core::algebra::{
    build_standard_coalgebra, dualize, AssocCommAlgebra, Coalgebra, FiltrationSpec, StandardCoalgebra,
};
use massey_core::deform::LocalBaseAlgebra;
use massey_core::exact::{int, rat, sign, unit_vec, zero_vec, Scalar};

fn product(g: &AssocCommAlgebra, a: &str, b: &str) -> Vec<Scalar> {
    let n = g.dim();
    g.product(&unit_vec(n, g.index_of(a).unwrap()), &unit_vec(n, g.index_of(b).unwrap()))
}

fn unit(g: &AssocCommAlgebra, name: &str, c: Scalar) -> Vec<Scalar> {
    let mut v = zero_vec(g.dim());
    v[g.index_of(name).unwrap()] = c;
    v
}

#[test]
fn one_param_dual_multiplication() {
    let n = 7;
    let g = build_standard_coalgebra(&StandardCoalgebra::OneParam { order: n }).unwrap().dual_algebra();
    for k in 1..=n {
        for l in 1..=n {
            let expected = if k + l <= n {
                unit(&g, &format!("f{}", k + l), rat(-1, 2))
            } else {
                zero_vec(n)
            };
            assert_eq!(product(&g, &format!("f{k}"), &format!("f{l}")), expected, "g^{k} g^{l}");
        }
    }
}

#[test]
fn one_param_dual_is_power_series_ideal() {
    // g^k = (-2)^{k-1} t^k identifies G with the maximal ideal of K[t]/(t^{n+1})
    let n = 6;
    let g = build_standard_coalgebra(&StandardCoalgebra::OneParam { order: n }).unwrap().dual_algebra();
    let s = LocalBaseAlgebra::one_param(n).unwrap();
    let scale = |k: usize| -> Scalar { int(-2).pow((k - 1) as i32) };
    for k in 1..=n {
        for l in 1..=n {
            let lhs = product(&g, &format!("f{k}"), &format!("f{l}"));
            // g^k g^l = c_k c_l t^k t^l, rewritten in the g basis
            let st = s.structure(k - 1, l - 1);
            let mut rhs = zero_vec(n);
            for (m, c) in st.iter().enumerate() {
                rhs[m] = c * scale(k) * scale(l) / scale(m + 1);
            }
            assert_eq!(lhs, rhs);
        }
    }
}

fn epsilon(k: &[usize], l: &[usize], q: &[i64]) -> i64 {
    let mut e = 0;
    for &a in k {
        for &b in l {
            if a > b {
                e += (q[a] + 1) * (q[b] + 1);
            }
        }
    }
    e
}

fn set_name(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
    format!("f{{{}}}", parts.join(","))
}

fn subsets(r: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << r))
        .map(|m| (0..r).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

#[test]
fn classical_dual_multiplication() {
    for q in [vec![1, 1, 1], vec![0, 1, 2], vec![2, 2], vec![1, 0, 1, 2]] {
        let r = q.len();
        let g = build_standard_coalgebra(&StandardCoalgebra::Classical { degrees: q.clone() })
            .unwrap()
            .dual_algebra();
        for k in subsets(r) {
            for l in subsets(r) {
                let disjoint = k.iter().all(|a| !l.contains(a));
                let expected = if disjoint {
                    let mut u: Vec<usize> = k.iter().chain(&l).copied().collect();
                    u.sort_unstable();
                    unit(&g, &set_name(&u), rat(1, 2) * sign(epsilon(&k, &l, &q)))
                } else {
                    zero_vec(g.dim())
                };
                assert_eq!(product(&g, &set_name(&k), &set_name(&l)), expected, "q={q:?} K={k:?} L={l:?}");
            }
        }
    }
}

fn round_trip(f: &Coalgebra) {
    let g = f.dual_algebra();
    let back = dualize(&g, &FiltrationSpec::default()).unwrap();
    assert_eq!(back.table(), f.table());
    // F0* = G/G²: F0 is the annihilator of G²
    assert_eq!(back.f0(), f.f0());
}

#[test]
fn first_filtration_is_dual_of_indecomposables() {
    for kind in [
        StandardCoalgebra::OneParam { order: 5 },
        StandardCoalgebra::Singular { order: 7 },
        StandardCoalgebra::Pair { order: 6 },
        StandardCoalgebra::Classical { degrees: vec![1, 1, 1] },
        StandardCoalgebra::Classical { degrees: vec![0, 2] },
    ] {
        round_trip(&build_standard_coalgebra(&kind).unwrap());
    }
}

#[test]
fn pair_dual_relation() {
    let g = build_standard_coalgebra(&StandardCoalgebra::Pair { order: 6 }).unwrap().dual_algebra();
    let n = g.dim();
    let t = unit_vec(n, g.index_of("f1").unwrap());
    let psi = unit_vec(n, g.index_of("phi2").unwrap());
    let u_sq = g.product(&psi, &psi);
    let t2u = g.product(&g.product(&t, &t), &psi);
    // with u = ψ²: u² = -½ ψ⁴ and t²u = ¼ ψ⁴, so -2u² = 4 t²u
    assert_eq!(u_sq, unit(&g, "phi4", rat(-1, 2)));
    assert_eq!(t2u, unit(&g, "phi4", rat(1, 4)));
    // with u = ¼ψ² the relation -2u² = t²u holds
    let u: Vec<Scalar> = psi.iter().map(|c| c * rat(1, 4)).collect();
    let lhs: Vec<Scalar> = g.product(&u, &u).iter().map(|c| c * int(-2)).collect();
    assert_eq!(lhs, g.product(&g.product(&t, &t), &u));
}
