//! Sparse tensors over graded bases and the sign-carrying operators used
//! throughout: the symmetry `S`, the cyclic permutation `C`, and tensor
//! products of graded maps with the Koszul rule
//! `(f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y)`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::Zero;

use crate::exact::{sign, Scalar};

/// Element of a tensor power, keyed by basis multi-index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tensor {
    terms: BTreeMap<Vec<usize>, Scalar>,
}

impl Tensor {
    pub fn zero() -> Self {
        Tensor::default()
    }

    pub fn basis(index: &[usize]) -> Self {
        let mut t = Tensor::zero();
        t.add_term(index.to_vec(), crate::exact::one());
        t
    }

    pub fn add_term(&mut self, index: Vec<usize>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(index) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &Tensor) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        let mut t = Tensor::zero();
        for (k, v) in &self.terms {
            t.add_term(k.clone(), c * v);
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, index: &[usize]) -> Scalar {
        self.terms.get(index).cloned().unwrap_or_else(Scalar::zero)
    }
}

/// `S(a ⊗ b) = (-1)^{|a||b|} b ⊗ a` on 2-tensors.
pub fn swap(degrees: &[i64], t: &Tensor) -> Tensor {
    let mut out = Tensor::zero();
    for (k, v) in t.terms() {
        let (a, b) = (k[0], k[1]);
        out.add_term(vec![b, a], sign(degrees[a] * degrees[b]) * v);
    }
    out
}

/// `C(a ⊗ b ⊗ c) = (-1)^{|a|(|b|+|c|)} b ⊗ c ⊗ a` on 3-tensors.
pub fn cycle(degrees: &[i64], t: &Tensor) -> Tensor {
    let mut out = Tensor::zero();
    for (k, v) in t.terms() {
        let (a, b, c) = (k[0], k[1], k[2]);
        out.add_term(
            vec![b, c, a],
            sign(degrees[a] * (degrees[b] + degrees[c])) * v,
        );
    }
    out
}

/// A homogeneous linear map from a graded space into some tensor power of
/// another graded space (a coproduct lands in `F ⊗ F`, an ordinary map in `F`).
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub degree: i64,
    pub images: Vec<Tensor>,
}

impl GradedMap {
    pub fn identity(dim: usize) -> Self {
        GradedMap {
            degree: 0,
            images: (0..dim).map(|i| Tensor::basis(&[i])).collect(),
        }
    }

    pub fn apply(&self, t: &Tensor) -> Tensor {
        let mut out = Tensor::zero();
        for (k, v) in t.terms() {
            assert_eq!(k.len(), 1, "GradedMap::apply expects vectors");
            out.add(&self.images[k[0]].scale(v));
        }
        out
    }
}

/// `(f_1 ⊗ … ⊗ f_n)(x_1 ⊗ … ⊗ x_n)` with the Koszul sign
/// `(-1)^{Σ_i |f_i| (|x_1| + … + |x_{i-1}|)}`; `degrees` grades the source.
pub fn tensor_apply(maps: &[&GradedMap], degrees: &[i64], t: &Tensor) -> Tensor {
    let mut out = Tensor::zero();
    for (k, v) in t.terms() {
        assert_eq!(k.len(), maps.len());
        let mut exp = 0;
        let mut passed = 0;
        for (f, &x) in maps.iter().zip(k) {
            exp += f.degree * passed;
            passed += degrees[x];
        }
        let mut acc = Tensor::basis(&[]).scale(&(sign(exp) * v));
        for (f, &x) in maps.iter().zip(k) {
            acc = concat(&acc, &f.images[x]);
            if acc.is_zero() {
                break;
            }
        }
        out.add(&acc);
    }
    out
}

fn concat(a: &Tensor, b: &Tensor) -> Tensor {
    let mut out = Tensor::zero();
    for (ka, va) in a.terms() {
        for (kb, vb) in b.terms() {
            let mut k = ka.clone();
            k.extend_from_slice(kb);
            out.add_term(k, va * vb);
        }
    }
    out
}

/// Applies a degree-0 binary operation to the first two factors of every
/// term, leaving the rest in place.
pub fn contract_front<F>(t: &Tensor, op: F) -> Tensor
where
    F: Fn(usize, usize) -> Vec<(usize, Scalar)>,
{
    let mut out = Tensor::zero();
    for (k, v) in t.terms() {
        for (r, c) in op(k[0], k[1]) {
            let mut idx = vec![r];
            idx.extend_from_slice(&k[2..]);
            out.add_term(idx, &c * v);
        }
    }
    out
}
