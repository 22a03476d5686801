//! Randomized defining systems over `C*(sl₂; sl₂)`, where all cohomology
//! vanishes so every stage is solvable: the right side
//! `Σ (-1)^{|f_i|} d_k^{ij} [α_i, α_j]` is a cocycle on every generator,
//! including those outside `F1`.

use massey_core::algebra::{build_standard_coalgebra, Coalgebra, LieAlgebra, StandardCoalgebra};
use massey_core::ce::CeComplex;
use massey_core::dg::DgAlgebra;
use massey_core::exact::{axpy, int, is_zero_vec, rat, sign, solve_affine, zero_vec, Scalar};
use massey_core::massey::MasseyProblem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Scalar> {
    (0..n)
        .map(|_| match rng.gen_range(0..3) {
            0 => int(0),
            1 => int(rng.gen_range(-2..=2)),
            _ => rat(rng.gen_range(-3..=3), rng.gen_range(1..=3)),
        })
        .collect()
}

/// Right side at `k`, straight from the coproduct table.
fn rhs(ce: &CeComplex, f: &Coalgebra, values: &[Option<Vec<Scalar>>], k: usize) -> Vec<Scalar> {
    let deg = |i: usize| f.degree(i) + 1;
    let mut out = zero_vec(ce.component_dim(deg(k) + 1));
    for (idx, d) in f.coproduct(k).terms() {
        let (i, j) = (idx[0], idx[1]);
        let x = values[i].as_ref().expect("left factor defined");
        let y = values[j].as_ref().expect("right factor defined");
        let c = sign(f.degree(i)) * d;
        axpy(&mut out, &c, &ce.product(deg(i), x, deg(j), y));
    }
    out
}

/// Builds a random system stage by stage and checks closedness everywhere.
fn check_random_system(rng: &mut ChaCha8Rng, ce: &CeComplex, f: &Coalgebra) {
    let problem = MasseyProblem::from_coalgebra(f).unwrap();
    let mut values: Vec<Option<Vec<Scalar>>> = vec![None; f.dim()];
    for &k in problem.stage_order() {
        let d = f.degree(k) + 1;
        let r = rhs(ce, f, &values, k);
        let closed = is_zero_vec(&DgAlgebra::differential(ce, d + 1, &r));
        assert!(closed, "right side at {} not closed", f.basis()[k].name);
        if !f.in_f1(k) {
            continue;
        }
        let v = if f.in_f0(k) {
            let pre = random_vec(rng, ce.component_dim(d - 1));
            DgAlgebra::differential(ce, d - 1, &pre)
        } else {
            let sol = solve_affine(&ce.differential_matrix(d), &r)
                .unwrap()
                .expect("sl2 has no cohomology");
            let mut v = sol.particular;
            for z in &sol.kernel_basis {
                axpy(&mut v, &int(rng.gen_range(-2..=2)), z);
            }
            v
        };
        assert_eq!(DgAlgebra::differential(ce, d, &v), r);
        values[k] = Some(v);
    }
}

#[test]
fn right_sides_are_closed_on_random_systems() {
    let ce = CeComplex::new(LieAlgebra::sl2()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut count = 0;
    for _ in 0..130 {
        let families = [
            StandardCoalgebra::OneParam {
                order: rng.gen_range(2..=6),
            },
            StandardCoalgebra::Singular {
                order: rng.gen_range(4..=8),
            },
            StandardCoalgebra::Pair {
                order: rng.gen_range(3..=6),
            },
            StandardCoalgebra::Classical {
                degrees: (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..=1)).collect(),
            },
        ];
        for kind in &families {
            let f = build_standard_coalgebra(kind).unwrap();
            check_random_system(&mut rng, &ce, &f);
            count += 1;
        }
    }
    assert!(count >= 500, "{count} systems");
}
