//! The two tensor identities behind the closedness of the right sides:
//! `Δ ⊗ 1 = C ∘ (1 ⊗ Δ) ∘ S` for any degree-0 `Δ` and
//! `C ∘ (α ⊗ α ⊗ α) = (α ⊗ α ⊗ α) ∘ C` for any degree-1 `α`, checked on
//! random tensors against maps with no structure at all.

use massey_core::exact::int;
use massey_core::graded::{cycle, swap, tensor_apply, GradedMap, Tensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_tensor(rng: &mut ChaCha8Rng, dim: usize, len: usize) -> Tensor {
    let mut t = Tensor::zero();
    for _ in 0..rng.gen_range(1..=5) {
        let idx = (0..len).map(|_| rng.gen_range(0..dim)).collect();
        t.add_term(idx, int(rng.gen_range(-4..=4)));
    }
    t
}

/// A homogeneous map of the given degree from a space graded by `src` into
/// `dst^{⊗len}`, with random integer coefficients.
fn random_map(rng: &mut ChaCha8Rng, src: &[i64], dst: &[i64], degree: i64, len: usize) -> GradedMap {
    let images = src
        .iter()
        .map(|&d| {
            let mut t = Tensor::zero();
            for _ in 0..rng.gen_range(0..=4) {
                let idx: Vec<usize> = (0..len).map(|_| rng.gen_range(0..dst.len())).collect();
                if idx.iter().map(|&i| dst[i]).sum::<i64>() == d + degree {
                    t.add_term(idx, int(rng.gen_range(-3..=3)));
                }
            }
            t
        })
        .collect();
    GradedMap { degree, images }
}

#[test]
fn lemma_one_on_random_tensors() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut checked = 0;
    for round in 0..25 {
        let deg: Vec<i64> = (0..rng.gen_range(2..=6)).map(|_| rng.gen_range(-2..=3)).collect();
        let delta = random_map(&mut rng, &deg, &deg, 0, 2);
        let id = GradedMap::identity(deg.len());
        for _ in 0..24 {
            let t = random_tensor(&mut rng, deg.len(), 2);
            let lhs = tensor_apply(&[&delta, &id], &deg, &t);
            let rhs = cycle(&deg, &tensor_apply(&[&id, &delta], &deg, &swap(&deg, &t)));
            assert_eq!(lhs, rhs, "round {round}");
            checked += 1;
        }
    }
    assert!(checked >= 500);
}

#[test]
fn lemma_two_on_random_tensors() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut checked = 0;
    for round in 0..25 {
        let src: Vec<i64> = (0..rng.gen_range(2..=5)).map(|_| rng.gen_range(-2..=3)).collect();
        let dst: Vec<i64> = (0..rng.gen_range(2..=6)).map(|_| rng.gen_range(-1..=4)).collect();
        let alpha = random_map(&mut rng, &src, &dst, 1, 1);
        for _ in 0..24 {
            let t = random_tensor(&mut rng, src.len(), 3);
            let lhs = cycle(&dst, &tensor_apply(&[&alpha, &alpha, &alpha], &src, &t));
            let rhs = tensor_apply(&[&alpha, &alpha, &alpha], &src, &cycle(&src, &t));
            assert_eq!(lhs, rhs, "round {round}");
            checked += 1;
        }
    }
    assert!(checked >= 500);
}
