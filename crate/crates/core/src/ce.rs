//! The Chevalley–Eilenberg complex `C*(g; g)` as a DGLA, with
//! `L^d = C^{d+1}(g; g)`.
//!
//! Conventions, with 0-based arguments:
//!
//! ```text
//! (δφ)(g_0, …, g_q) = Σ_i (-1)^i [g_i, φ(…, ĝ_i, …)]
//!                   + Σ_{i<j} (-1)^{i+j} φ([g_i, g_j], …, ĝ_i, …, ĝ_j, …)
//!
//! (φ ∘ ψ)(g_1, …, g_{p+q-1}) = Σ_{σ ∈ Sh(q, p-1)} sgn(σ) φ(ψ(g_σ(1), …, g_σ(q)), g_σ(q+1), …)
//! [φ, ψ] = (-1)^{(p-1)(q-1)} φ ∘ ψ - ψ ∘ φ
//! ```
//!
//! With these signs `δφ = [m, φ]` for the bracket cochain `m`, so `δ` is a
//! derivation of the bracket, and a deformed bracket `m + Σ t^k γ_k`
//! satisfies Jacobi exactly when `δγ_k = -½ Σ [γ_i, γ_{k-i}]`.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::LieAlgebra;
use crate::dg::{Cohomology, DgAlgebra};
use crate::error::{Error, Result};
use crate::exact::{axpy, sign, unit_vec, zero_vec, Scalar};

/// Element of `C^q(g; g)`, stored on strictly increasing argument tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    parent: u64,
    arity: usize,
    coeffs: Vec<Scalar>,
}

impl Cochain {
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// DGLA degree `q - 1`.
    pub fn degree(&self) -> i64 {
        self.arity as i64 - 1
    }

    /// Coordinates: entry `idx * dim g + k` is the `e_k` component on the
    /// `idx`-th increasing tuple.
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> Cochain {
        Cochain {
            coeffs: self.coeffs.iter().map(|x| c * x).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        if self.parent != other.parent {
            return Err(Error::ParentMismatch);
        }
        if self.arity != other.arity {
            return Err(Error::DegreeMismatch(format!(
                "cannot add cochains of arity {} and {}",
                self.arity, other.arity
            )));
        }
        let mut coeffs = self.coeffs.clone();
        crate::exact::add_assign(&mut coeffs, &other.coeffs);
        Ok(Cochain { coeffs, ..self.clone() })
    }
}

/// `C*(g; g)` for an ungraded Lie algebra `g`.
#[derive(Clone, Debug)]
pub struct CeComplex {
    g: LieAlgebra,
    fingerprint: u64,
    /// `tuples[q]`: increasing `q`-tuples of basis indices, lexicographic.
    tuples: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
}

fn increasing_tuples(n: usize, q: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, q, &mut Vec::new(), &mut out);
    out
}

/// Sorts `args` and returns the sign of the sorting permutation, or `None`
/// when an index repeats.
fn sort_with_sign(args: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut inversions = 0;
    for i in 0..args.len() {
        for j in i + 1..args.len() {
            if args[i] == args[j] {
                return None;
            }
            if args[i] > args[j] {
                inversions += 1;
            }
        }
    }
    let mut sorted = args.to_vec();
    sorted.sort_unstable();
    Some((sorted, inversions))
}

impl CeComplex {
    pub fn new(g: LieAlgebra) -> Result<Self> {
        g.validate().into_result()?;
        if !g.is_ungraded() {
            return Err(Error::InvalidParameter(
                "the Chevalley–Eilenberg complex is implemented for ungraded Lie algebras".into(),
            ));
        }
        let n = g.dim();
        let tuples: Vec<Vec<Vec<usize>>> = (0..=n).map(|q| increasing_tuples(n, q)).collect();
        let lookup = tuples
            .iter()
            .map(|ts| ts.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect())
            .collect();
        let mut h = DefaultHasher::new();
        format!("{g:?}").hash(&mut h);
        Ok(CeComplex {
            g,
            fingerprint: h.finish(),
            tuples,
            lookup,
        })
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.g
    }

    fn n(&self) -> usize {
        self.g.dim()
    }

    pub fn tuples(&self, q: usize) -> &[Vec<usize>] {
        self.tuples.get(q).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn cochain_dim(&self, q: usize) -> usize {
        self.tuples(q).len() * self.n()
    }

    pub fn zero(&self, q: usize) -> Cochain {
        Cochain {
            parent: self.fingerprint,
            arity: q,
            coeffs: zero_vec(self.cochain_dim(q)),
        }
    }

    pub fn from_coeffs(&self, q: usize, coeffs: Vec<Scalar>) -> Result<Cochain> {
        if coeffs.len() != self.cochain_dim(q) {
            return Err(Error::DimensionMismatch {
                expected: self.cochain_dim(q),
                found: coeffs.len(),
            });
        }
        Ok(Cochain {
            parent: self.fingerprint,
            arity: q,
            coeffs,
        })
    }

    fn check(&self, c: &Cochain) -> Result<()> {
        if c.parent != self.fingerprint {
            return Err(Error::ParentMismatch);
        }
        Ok(())
    }

    /// Sets `φ(e_{args}) = value`, normalizing the argument order.
    pub fn set_value(&self, phi: &mut Cochain, args: &[usize], value: &[Scalar]) -> Result<()> {
        self.check(phi)?;
        let (sorted, inv) = sort_with_sign(args)
            .ok_or_else(|| Error::InvalidParameter(format!("repeated argument in {args:?}")))?;
        let idx = *self.lookup[phi.arity]
            .get(&sorted)
            .ok_or_else(|| Error::InvalidParameter(format!("bad arguments {args:?}")))?;
        let n = self.n();
        let s = sign(inv);
        for (k, v) in value.iter().enumerate() {
            phi.coeffs[idx * n + k] = &s * v;
        }
        Ok(())
    }

    /// `φ(e_{a_1}, …, e_{a_q})` for basis indices in any order.
    pub fn value(&self, phi: &Cochain, args: &[usize]) -> Vec<Scalar> {
        eval(self, phi.arity, &phi.coeffs, args)
    }

    /// The bracket cochain `m(x, y) = [x, y]`.
    pub fn bracket_cochain(&self) -> Cochain {
        let n = self.n();
        let mut m = self.zero(2);
        for (idx, t) in self.tuples(2).iter().enumerate() {
            for (k, c) in self.g.bracket_basis(t[0], t[1]).iter().enumerate() {
                m.coeffs[idx * n + k] = c.clone();
            }
        }
        m
    }

    pub fn differential(&self, phi: &Cochain) -> Result<Cochain> {
        self.check(phi)?;
        Ok(Cochain {
            parent: self.fingerprint,
            arity: phi.arity + 1,
            coeffs: differential_raw(self, phi.arity, &phi.coeffs),
        })
    }

    /// `[φ, ψ]` of arity `p + q - 1`; errors when `p = q = 0`.
    pub fn bracket(&self, phi: &Cochain, psi: &Cochain) -> Result<Cochain> {
        self.check(phi)?;
        self.check(psi)?;
        if phi.arity + psi.arity == 0 {
            return Err(Error::OutOfRange {
                what: "bracket arity",
                value: -1,
            });
        }
        let m = phi.arity + psi.arity - 1;
        Ok(Cochain {
            parent: self.fingerprint,
            arity: m,
            coeffs: bracket_raw(self, phi.arity, &phi.coeffs, psi.arity, &psi.coeffs),
        })
    }

    /// `H^q(g; g)`, `0 <= q <= dim g`.
    pub fn cohomology_space(&self, q: i64) -> Result<CohomologySpace> {
        if q < 0 || q as usize > self.n() {
            return Err(Error::OutOfRange {
                what: "cohomology degree",
                value: q,
            });
        }
        Ok(CohomologySpace {
            parent: self.fingerprint,
            arity: q as usize,
            inner: DgAlgebra::cohomology(self, q - 1)?,
        })
    }

    pub fn cochain_from_doc(&self, doc: &CochainDoc) -> Result<Cochain> {
        let mut phi = self.zero(doc.arity);
        if doc.arity > self.n() && !doc.terms.is_empty() {
            return Err(Error::Schema(format!("arity {} exceeds dim g", doc.arity)));
        }
        let basis = self.g.basis();
        for term in &doc.terms {
            if term.args.len() != doc.arity {
                return Err(Error::Schema(format!("term has {} arguments, expected {}", term.args.len(), doc.arity)));
            }
            let args = term
                .args
                .iter()
                .map(|a| crate::algebra::json::index(basis, a))
                .collect::<Result<Vec<_>>>()?;
            let (sorted, inv) =
                sort_with_sign(&args).ok_or_else(|| Error::Schema(format!("repeated argument in {:?}", term.args)))?;
            let idx = self.lookup[doc.arity][&sorted];
            let v = crate::algebra::json::parse_vector(basis, &term.value)?;
            axpy(&mut phi.coeffs[idx * self.n()..(idx + 1) * self.n()], &sign(inv), &v);
        }
        Ok(phi)
    }

    pub fn cochain_to_doc(&self, phi: &Cochain) -> CochainDoc {
        let basis = self.g.basis();
        let n = self.n();
        let terms = self
            .tuples(phi.arity)
            .iter()
            .enumerate()
            .filter_map(|(idx, t)| {
                let value = crate::algebra::json::format_vector(basis, &phi.coeffs[idx * n..(idx + 1) * n]);
                (!value.is_empty()).then(|| CochainTerm {
                    args: t.iter().map(|&i| basis[i].name.clone()).collect(),
                    value,
                })
            })
            .collect();
        CochainDoc {
            arity: phi.arity,
            terms,
        }
    }
}

fn eval(ce: &CeComplex, q: usize, coeffs: &[Scalar], args: &[usize]) -> Vec<Scalar> {
    let n = ce.n();
    debug_assert_eq!(args.len(), q);
    match sort_with_sign(args) {
        None => zero_vec(n),
        Some((sorted, inv)) => {
            let idx = ce.lookup[q][&sorted];
            let s = sign(inv);
            coeffs[idx * n..(idx + 1) * n].iter().map(|c| &s * c).collect()
        }
    }
}

fn differential_raw(ce: &CeComplex, q: usize, phi: &[Scalar]) -> Vec<Scalar> {
    let n = ce.n();
    let g = &ce.g;
    let mut out = zero_vec(ce.cochain_dim(q + 1));
    for (idx, c) in ce.tuples(q + 1).iter().enumerate() {
        let slot = &mut out[idx * n..(idx + 1) * n];
        for i in 0..=q {
            let rest: Vec<usize> = c.iter().enumerate().filter(|&(l, _)| l != i).map(|(_, &x)| x).collect();
            let v = eval(ce, q, phi, &rest);
            axpy(slot, &sign(i as i64), &g.bracket(&unit_vec(n, c[i]), &v));
        }
        for i in 0..=q {
            for j in i + 1..=q {
                let br = g.bracket_basis(c[i], c[j]);
                for (k, bk) in br.iter().enumerate() {
                    if bk.is_zero() {
                        continue;
                    }
                    let mut args = vec![k];
                    args.extend(c.iter().enumerate().filter(|&(l, _)| l != i && l != j).map(|(_, &x)| x));
                    let v = eval(ce, q, phi, &args);
                    axpy(slot, &(sign((i + j) as i64) * bk), &v);
                }
            }
        }
    }
    out
}

/// `φ ∘ ψ` for `φ` of arity `p >= 1` and `ψ` of arity `q`.
fn compose_raw(ce: &CeComplex, p: usize, phi: &[Scalar], q: usize, psi: &[Scalar]) -> Vec<Scalar> {
    let n = ce.n();
    let m = p + q - 1;
    let mut out = zero_vec(ce.cochain_dim(m));
    if m > n {
        return out;
    }
    let positions = increasing_tuples(m, q);
    for (idx, c) in ce.tuples(m).iter().enumerate() {
        let slot = &mut out[idx * n..(idx + 1) * n];
        for s in &positions {
            let inner_args: Vec<usize> = s.iter().map(|&l| c[l]).collect();
            let v = eval(ce, q, psi, &inner_args);
            let rest: Vec<usize> = (0..m).filter(|l| !s.contains(l)).map(|l| c[l]).collect();
            let inv: usize = s.iter().enumerate().map(|(a, &l)| l - a).sum();
            let sg = sign(inv as i64);
            for (k, vk) in v.iter().enumerate() {
                if vk.is_zero() {
                    continue;
                }
                let mut args = vec![k];
                args.extend_from_slice(&rest);
                axpy(slot, &(&sg * vk), &eval(ce, p, phi, &args));
            }
        }
    }
    out
}

fn bracket_raw(ce: &CeComplex, p: usize, phi: &[Scalar], q: usize, psi: &[Scalar]) -> Vec<Scalar> {
    let m = p + q - 1;
    let mut out = zero_vec(ce.cochain_dim(m));
    if p >= 1 {
        let s = sign((p as i64 - 1) * (q as i64 - 1));
        axpy(&mut out, &s, &compose_raw(ce, p, phi, q, psi));
    }
    if q >= 1 {
        axpy(&mut out, &crate::exact::int(-1), &compose_raw(ce, q, psi, p, phi));
    }
    out
}

impl DgAlgebra for CeComplex {
    fn component_dim(&self, d: i64) -> usize {
        if d < -1 {
            0
        } else {
            self.cochain_dim((d + 1) as usize)
        }
    }

    fn differential(&self, d: i64, x: &[Scalar]) -> Vec<Scalar> {
        if d < -1 {
            return Vec::new();
        }
        differential_raw(self, (d + 1) as usize, x)
    }

    fn product(&self, dx: i64, x: &[Scalar], dy: i64, y: &[Scalar]) -> Vec<Scalar> {
        if dx < -1 || dy < -1 || dx + dy < -1 {
            return Vec::new();
        }
        bracket_raw(self, (dx + 1) as usize, x, (dy + 1) as usize, y)
    }
}

/// `H^q(g; g)` with representative cocycles.
#[derive(Clone, Debug)]
pub struct CohomologySpace {
    parent: u64,
    arity: usize,
    inner: Cohomology,
}

impl CohomologySpace {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    pub fn raw(&self) -> &Cohomology {
        &self.inner
    }

    pub fn representatives(&self) -> Vec<Cochain> {
        self.inner
            .representatives()
            .iter()
            .map(|v| Cochain {
                parent: self.parent,
                arity: self.arity,
                coeffs: v.clone(),
            })
            .collect()
    }

    pub fn lift(&self, coords: &[Scalar]) -> Result<Cochain> {
        Ok(Cochain {
            parent: self.parent,
            arity: self.arity,
            coeffs: self.inner.lift(coords)?,
        })
    }

    /// Class coordinates of a cocycle and a cochain `η` with
    /// `φ = Σ coords_i rep_i + δη`.
    pub fn decompose(&self, phi: &Cochain) -> Result<(Vec<Scalar>, Option<Cochain>)> {
        if phi.parent != self.parent {
            return Err(Error::ParentMismatch);
        }
        if phi.arity != self.arity {
            return Err(Error::DegreeMismatch(format!(
                "cochain of arity {} in H^{}",
                phi.arity, self.arity
            )));
        }
        let d = self.inner.decompose(&phi.coeffs)?;
        let pre = (self.arity > 0).then(|| Cochain {
            parent: self.parent,
            arity: self.arity - 1,
            coeffs: d.preimage,
        });
        Ok((d.coords, pre))
    }
}

pub fn ce_differential(ce: &CeComplex, phi: &Cochain) -> Result<Cochain> {
    ce.differential(phi)
}

pub fn nr_bracket(ce: &CeComplex, phi: &Cochain, psi: &Cochain) -> Result<Cochain> {
    ce.bracket(phi, psi)
}

pub fn cohomology(ce: &CeComplex, q: i64) -> Result<CohomologySpace> {
    ce.cohomology_space(q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainDoc {
    pub arity: usize,
    pub terms: Vec<CochainTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainTerm {
    pub args: Vec<String>,
    pub value: BTreeMap<String, String>,
}

impl CochainDoc {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn ce(g: LieAlgebra) -> CeComplex {
        CeComplex::new(g).unwrap()
    }

    #[test]
    fn abelian_differential_vanishes() {
        let c = ce(LieAlgebra::abelian(3));
        for q in 0..=2 {
            let phi = c.from_coeffs(q, (0..c.cochain_dim(q)).map(|i| int(i as i64 + 1)).collect()).unwrap();
            assert!(c.differential(&phi).unwrap().is_zero());
        }
    }

    #[test]
    fn aff1_zero_cochain() {
        let c = ce(LieAlgebra::aff1());
        let phi = c.from_coeffs(0, vec![int(0), int(1)]).unwrap();
        let d = c.differential(&phi).unwrap();
        assert_eq!(c.value(&d, &[0]), vec![int(0), int(1)]);
        assert_eq!(c.value(&d, &[1]), vec![int(0), int(0)]);
    }

    #[test]
    fn heisenberg_bracket_cochain_is_closed() {
        let c = ce(LieAlgebra::heisenberg());
        let m = c.bracket_cochain();
        assert!(c.differential(&m).unwrap().is_zero());
        assert!(c.bracket(&m, &m).unwrap().is_zero());
    }

    #[test]
    fn bracket_beyond_top_arity_is_zero() {
        let c = ce(LieAlgebra::aff1());
        let phi = c.from_coeffs(2, vec![int(1), int(2)]).unwrap();
        let b = c.bracket(&phi, &phi).unwrap();
        assert_eq!(b.arity(), 3);
        assert!(b.coeffs().is_empty());
    }

    #[test]
    fn cohomology_dimensions() {
        assert_eq!(ce(LieAlgebra::abelian(2)).cohomology_space(2).unwrap().dimension(), 2);
        assert_eq!(ce(LieAlgebra::sl2()).cohomology_space(2).unwrap().dimension(), 0);
        assert_eq!(ce(LieAlgebra::heisenberg()).cohomology_space(0).unwrap().dimension(), 1);
        assert!(matches!(
            ce(LieAlgebra::heisenberg()).cohomology_space(4),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn decompose_representatives() {
        let c = ce(LieAlgebra::heisenberg());
        let h = c.cohomology_space(2).unwrap();
        for (i, r) in h.representatives().iter().enumerate() {
            let (coords, pre) = h.decompose(r).unwrap();
            let mut e = zero_vec(h.dimension());
            e[i] = int(1);
            assert_eq!(coords, e);
            assert!(pre.unwrap().is_zero());
        }
    }

    #[test]
    fn parent_mismatch() {
        let a = ce(LieAlgebra::aff1());
        let b = ce(LieAlgebra::abelian(2));
        assert!(matches!(b.differential(&a.zero(1)), Err(Error::ParentMismatch)));
    }

    #[test]
    fn graded_algebra_rejected() {
        let basis = vec![crate::algebra::BasisElement::new("x", 1)];
        let g = LieAlgebra::new(basis, crate::algebra::StructureTable::zero(1)).unwrap();
        assert!(matches!(CeComplex::new(g), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn cochain_doc_round_trip() {
        let c = ce(LieAlgebra::heisenberg());
        let doc = CochainDoc::parse(
            r#"{"arity": 2, "terms": [{"args": ["e2", "e1"], "value": {"e3": "1/2"}}]}"#,
        )
        .unwrap();
        let phi = c.cochain_from_doc(&doc).unwrap();
        assert_eq!(c.value(&phi, &[0, 1]), vec![int(0), int(0), rat(-1, 2)]);
        let back = c.cochain_to_doc(&phi);
        assert_eq!(back.terms[0].args, vec!["e1", "e2"]);
        assert_eq!(c.cochain_from_doc(&back).unwrap(), phi);
    }
}
