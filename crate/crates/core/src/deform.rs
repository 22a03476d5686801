//! Deformations of a Lie algebra `g` over a finite local base
//! `S = K·1 ⊕ 𝔪`.
//!
//! A deformation is an `S`-bilinear skew bracket on `g ⊗ S`,
//!
//! ```text
//! τ(x ⊗ 1, y ⊗ 1) = [x, y] ⊗ 1 + Σ_i α_i(x, y) ⊗ m_i,
//! ```
//!
//! with one cochain `α_i ∈ C²(g; g)` per basis element `m_i` of `𝔪`. It
//! satisfies the Jacobi identity iff
//!
//! ```text
//! δα_k + ½ Σ_{ij} s_ij^k [α_i, α_j] = 0,     m_i m_j = Σ_k s_ij^k m_k.
//! ```
//!
//! With `F = 𝔪*` (coproduct dual to the multiplication) this says that
//! `-α/2` is a defining system for the triviality condition of Massey
//! `F`-products, which is how [`integrate`] proceeds.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::json::{expect_kind, product_table, product_table_doc, StructureDoc};
use crate::algebra::{dualize, AssocCommAlgebra, BasisElement, Coalgebra, FiltrationSpec, StructureTable};
use crate::ce::{CeComplex, Cochain};
use crate::error::{Error, Result};
use crate::exact::{int, rat, Scalar};
use crate::massey::{
    massey_search, rescale_equations, stage_equations, ClassAssignment, DefiningSystem, MasseyProblem,
    MasseyResult, SearchOptions, StageEquation, Status,
};

/// `S = K·1 ⊕ 𝔪` with `𝔪` nilpotent, stored through the multiplication of
/// `𝔪` on a basis `m_1, …, m_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalBaseAlgebra {
    ideal: AssocCommAlgebra,
    /// Smallest `N` with `𝔪^N = 0`.
    nilpotency: usize,
}

impl LocalBaseAlgebra {
    pub fn new(ideal: AssocCommAlgebra) -> Result<Self> {
        if let Some(b) = ideal.basis().iter().find(|b| b.degree != 0) {
            return Err(Error::DegreeMismatch(format!("base element `{}` has nonzero degree", b.name)));
        }
        ideal.validate().into_result()?;
        let nilpotency = ideal.top_power()? + 1;
        Ok(LocalBaseAlgebra { ideal, nilpotency })
    }

    /// `K[t]/(t^{order+1})`, basis `t, t^2, …`.
    pub fn one_param(order: usize) -> Result<Self> {
        check_order(order, 1)?;
        monomial_base((1..=order).collect(), order)
    }

    /// `span{1, t², t³, …}` truncated above `t^order`; this is
    /// `K[u, v]/(u³ - v²)` with `u = t²`, `v = t³`.
    pub fn singular(order: usize) -> Result<Self> {
        check_order(order, 2)?;
        monomial_base((2..=order).collect(), order)
    }

    /// `K[t, u]/(2u² + t²u)` truncated above weight `order`, where `t` has
    /// weight 1 and `u` weight 2. Basis `t^k` (`k ≥ 1`) and `t^l u` (`l ≥ 0`).
    pub fn pair(order: usize) -> Result<Self> {
        check_order(order, 1)?;
        // (has u, power of t)
        let mut mons: Vec<(bool, usize)> = (1..=order).map(|k| (false, k)).collect();
        mons.extend((0..=order.saturating_sub(2)).map(|l| (true, l)));
        let weight = |(u, l): (bool, usize)| l + if u { 2 } else { 0 };
        let name = |(u, l): (bool, usize)| {
            let t = match l {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{l}"),
            };
            if u {
                format!("{t}u")
            } else {
                t
            }
        };
        let basis: Vec<BasisElement> = mons.iter().map(|&m| BasisElement::new(name(m), 0)).collect();
        let n = mons.len();
        let pos = |m: (bool, usize)| mons.iter().position(|&x| x == m);
        let mut table = StructureTable::zero(n);
        for (i, &(ui, li)) in mons.iter().enumerate() {
            for (j, &(uj, lj)) in mons.iter().enumerate() {
                if weight((ui, li)) + weight((uj, lj)) > order {
                    continue;
                }
                // u² = -½ t² u
                let (m, c) = match (ui, uj) {
                    (true, true) => ((true, li + lj + 2), rat(-1, 2)),
                    _ => ((ui || uj, li + lj), int(1)),
                };
                if let Some(k) = pos(m) {
                    *table.entry_mut(i, j, k) += c;
                }
            }
        }
        LocalBaseAlgebra::new(AssocCommAlgebra::new(basis, table)?)
    }

    pub fn from_doc(doc: &StructureDoc) -> Result<Self> {
        expect_kind(doc, &["local-base"])?;
        LocalBaseAlgebra::new(AssocCommAlgebra::new(doc.basis.clone(), product_table(doc)?)?)
    }

    pub fn to_doc(&self) -> StructureDoc {
        StructureDoc {
            kind: "local-base".into(),
            basis: self.ideal.basis().to_vec(),
            table: product_table_doc(self.ideal.basis(), self.ideal.table()),
            ..Default::default()
        }
    }

    /// The maximal ideal `𝔪` as a (non-unital) algebra.
    pub fn ideal(&self) -> &AssocCommAlgebra {
        &self.ideal
    }

    /// `dim 𝔪`.
    pub fn dim(&self) -> usize {
        self.ideal.dim()
    }

    pub fn basis(&self) -> &[BasisElement] {
        self.ideal.basis()
    }

    pub fn nilpotency(&self) -> usize {
        self.nilpotency
    }

    /// `s_ij^k`.
    pub fn structure(&self, i: usize, j: usize) -> &[Scalar] {
        self.ideal.product_basis(i, j)
    }

    /// Product of basis elements of `S`, index 0 being `1` and `i + 1`
    /// being `m_i`; coordinates in the same basis.
    pub fn multiply_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n + 1];
        match (i, j) {
            (0, j) => out[j] = int(1),
            (i, 0) => out[i] = int(1),
            (i, j) => {
                for (k, c) in self.structure(i - 1, j - 1).iter().enumerate() {
                    out[k + 1] = c.clone();
                }
            }
        }
        out
    }

    /// `F = 𝔪*` with `Δ` dual to the multiplication, `F0 = (𝔪²)^⊥` and
    /// `F1 = F`.
    pub fn coalgebra(&self) -> Result<Coalgebra> {
        dualize(&self.ideal, &FiltrationSpec::triviality())
    }

    /// Basis elements of `𝔪` whose dual functionals vanish on `𝔪²`.
    pub fn first_order(&self) -> Result<Vec<usize>> {
        Ok(self.coalgebra()?.f0().to_vec())
    }
}

fn check_order(order: usize, min: usize) -> Result<()> {
    if order < min {
        return Err(Error::InvalidParameter(format!("truncation order must be at least {min}, got {order}")));
    }
    Ok(())
}

/// Span of `t^e` for the given exponents, with `t^a t^b = t^{a+b}` up to
/// `t^order`.
fn monomial_base(exponents: Vec<usize>, order: usize) -> Result<LocalBaseAlgebra> {
    let n = exponents.len();
    let name = |k: usize| if k == 1 { "t".to_string() } else { format!("t^{k}") };
    let basis = exponents.iter().map(|&e| BasisElement::new(name(e), 0)).collect();
    let mut table = StructureTable::zero(n);
    for (i, a) in exponents.iter().enumerate() {
        for (j, b) in exponents.iter().enumerate() {
            if a + b > order {
                continue;
            }
            if let Some(k) = exponents.iter().position(|&e| e == a + b) {
                *table.entry_mut(i, j, k) += int(1);
            }
        }
    }
    LocalBaseAlgebra::new(AssocCommAlgebra::new(basis, table)?)
}

/// `τ = m ⊗ 1 + Σ_i α_i ⊗ m_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformedBracket {
    base: LocalBaseAlgebra,
    cochains: Vec<Cochain>,
}

impl DeformedBracket {
    pub fn new(base: LocalBaseAlgebra, cochains: Vec<Cochain>) -> Result<Self> {
        if cochains.len() != base.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                found: cochains.len(),
            });
        }
        if let Some(c) = cochains.iter().find(|c| c.arity() != 2) {
            return Err(Error::DegreeMismatch(format!("deformation cochain of arity {}", c.arity())));
        }
        Ok(DeformedBracket { base, cochains })
    }

    /// All `α_i = 0`.
    pub fn trivial(ce: &CeComplex, base: LocalBaseAlgebra) -> Self {
        let cochains = vec![ce.zero(2); base.dim()];
        DeformedBracket { base, cochains }
    }

    pub fn base(&self) -> &LocalBaseAlgebra {
        &self.base
    }

    pub fn cochains(&self) -> &[Cochain] {
        &self.cochains
    }

    /// `α_i` for the basis element named `name`.
    pub fn cochain(&self, name: &str) -> Result<&Cochain> {
        Ok(&self.cochains[self.base.ideal.index_of(name)?])
    }
}

/// `δα_k + ½ Σ_{ij} s_ij^k [α_i, α_j]` for each basis functional `m_k*`.
pub fn mc_residual(ce: &CeComplex, tau: &DeformedBracket) -> Result<Vec<Cochain>> {
    let s = &tau.base;
    let n = s.dim();
    let mut out = tau
        .cochains
        .iter()
        .map(|a| ce.differential(a))
        .collect::<Result<Vec<_>>>()?;
    let half = rat(1, 2);
    for i in 0..n {
        for j in 0..n {
            let prod = s.structure(i, j);
            if prod.iter().all(Zero::is_zero) {
                continue;
            }
            let br = ce.bracket(&tau.cochains[i], &tau.cochains[j])?;
            for (k, c) in prod.iter().enumerate() {
                if !c.is_zero() {
                    out[k] = out[k].add(&br.scale(&(&half * c)))?;
                }
            }
        }
    }
    Ok(out)
}

pub fn is_deformation(ce: &CeComplex, tau: &DeformedBracket) -> Result<bool> {
    Ok(mc_residual(ce, tau)?.iter().all(Cochain::is_zero))
}

/// `J(x, y, z) = τ(τ(x, y), z) + τ(τ(y, z), x) + τ(τ(z, x), y)` on
/// increasing basis triples of `g`, with values in `g ⊗ S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jacobiator {
    pub triples: Vec<[usize; 3]>,
    /// `values[t][a * (1 + dim 𝔪) + s]`: coefficient of `e_a ⊗ s`, `s = 0`
    /// being `1`.
    pub values: Vec<Vec<Scalar>>,
    width: usize,
}

impl Jacobiator {
    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(Zero::is_zero)
    }

    /// The `S`-component `s` (0 for `1`, `k + 1` for `m_k`) as a 3-cochain.
    pub fn component(&self, ce: &CeComplex, s: usize) -> Result<Cochain> {
        let n = ce.lie().dim();
        let mut phi = ce.zero(3);
        for (t, v) in self.triples.iter().zip(&self.values) {
            let value: Vec<Scalar> = (0..n).map(|a| v[a * self.width + s].clone()).collect();
            ce.set_value(&mut phi, t, &value)?;
        }
        Ok(phi)
    }
}

/// Evaluates the Jacobi identity of `τ` directly on `g ⊗ S`.
pub fn jacobiator(ce: &CeComplex, tau: &DeformedBracket) -> Result<Jacobiator> {
    let g = ce.lie();
    let n = g.dim();
    let s = &tau.base;
    let w = s.dim() + 1;
    let mul: Vec<Vec<Vec<Scalar>>> = (0..w).map(|i| (0..w).map(|j| s.multiply_basis(i, j)).collect()).collect();
    // τ(e_a ⊗ 1, e_b ⊗ 1) in g ⊗ S coordinates
    let table: Vec<Vec<Vec<Scalar>>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut v = vec![Scalar::zero(); n * w];
                    for (c, x) in g.bracket_basis(a, b).iter().enumerate() {
                        v[c * w] = x.clone();
                    }
                    if a != b {
                        for (k, alpha) in tau.cochains.iter().enumerate() {
                            for (c, x) in ce.value(alpha, &[a, b]).into_iter().enumerate() {
                                v[c * w + k + 1] = x;
                            }
                        }
                    }
                    v
                })
                .collect()
        })
        .collect();
    let apply = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); n * w];
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let (a, sa, b, sb) = (i / w, i % w, j / w, j % w);
                let xy = xi * yj;
                for (p, t) in table[a][b].iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let (c, r) = (p / w, p % w);
                    // e_c ⊗ (r · sa · sb)
                    let rs = &mul[sa][sb];
                    for (q, u) in rs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        for (o, v) in mul[r][q].iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                            out[c * w + o] += &xy * t * u * v;
                        }
                    }
                }
            }
        }
        out
    };
    let unit = |a: usize| {
        let mut v = vec![Scalar::zero(); n * w];
        v[a * w] = int(1);
        v
    };
    let mut triples = Vec::new();
    let mut values = Vec::new();
    for t in ce.tuples(3) {
        let (x, y, z) = (unit(t[0]), unit(t[1]), unit(t[2]));
        let mut j = apply(&apply(&x, &y), &z);
        for (p, q) in apply(&apply(&y, &z), &x).into_iter().zip(&mut j) {
            *q += p;
        }
        for (p, q) in apply(&apply(&z, &x), &y).into_iter().zip(&mut j) {
            *q += p;
        }
        triples.push([t[0], t[1], t[2]]);
        values.push(j);
    }
    Ok(Jacobiator {
        triples,
        values,
        width: w,
    })
}

/// Classes `[α_φ] ∈ H²(g; g)` for the functionals `φ` of a basis of
/// `(𝔪/𝔪²)*`, keyed by the name of the dual basis element of `𝔪`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InfinitesimalDeformation {
    pub classes: BTreeMap<String, Vec<Scalar>>,
}

/// Reads off the infinitesimal deformation of `τ`; fails unless `τ` is a
/// deformation.
pub fn deformation_differential(ce: &CeComplex, tau: &DeformedBracket) -> Result<InfinitesimalDeformation> {
    if let Some(k) = mc_residual(ce, tau)?.iter().position(|r| !r.is_zero()) {
        return Err(Error::NotADeformation(format!(
            "Maurer–Cartan residual is nonzero at `{}`",
            tau.base.basis()[k].name
        )));
    }
    let h2 = ce.cohomology_space(2)?;
    let mut classes = BTreeMap::new();
    for k in tau.base.first_order()? {
        let (coords, _) = h2.decompose(&tau.cochains[k])?;
        classes.insert(tau.base.basis()[k].name.clone(), coords);
    }
    Ok(InfinitesimalDeformation { classes })
}

/// Outcome of [`integrate`]: the deformation when the search succeeds, and
/// the underlying search record (in terms of `-α/2`) either way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integration {
    pub status: Status,
    pub deformation: Option<DeformedBracket>,
    pub search: MasseyResult,
}

/// Looks for a deformation over `base` with infinitesimal part `a`, as a
/// defining system of the triviality condition for `-a/2`.
pub fn integrate(
    ce: &CeComplex,
    base: &LocalBaseAlgebra,
    a: &InfinitesimalDeformation,
    opts: &SearchOptions,
) -> Result<Integration> {
    let f = base.coalgebra()?;
    let problem = MasseyProblem::from_coalgebra(&f)?;
    let dim = ce.cohomology_space(2)?.dimension();
    let half = rat(-1, 2);
    let mut classes = ClassAssignment::default();
    for &k in f.f0() {
        let name = &f.basis()[k].name;
        let coords = a
            .classes
            .get(name)
            .ok_or_else(|| Error::InvalidParameter(format!("no class given for `{name}`")))?;
        if coords.len() != dim {
            return Err(Error::DegreeMismatch(format!(
                "class at `{name}` has {} coordinates, H²(g; g) has dimension {dim}",
                coords.len()
            )));
        }
        classes.a.insert(name.clone(), coords.iter().map(|c| &half * c).collect());
    }
    if let Some(extra) = a.classes.keys().find(|k| !classes.a.contains_key(*k)) {
        return Err(Error::InvalidParameter(format!("`{extra}` is not a first-order generator of the base")));
    }
    let search = massey_search(ce, &problem, &classes, opts)?;
    let deformation = match &search.witness {
        Some(w) if search.status == Status::Found => Some(to_deformation(ce, base, &w.scaled(&int(-2)))?),
        _ => None,
    };
    if let Some(tau) = &deformation {
        if !is_deformation(ce, tau)? {
            return Err(Error::Invariant("integrated bracket fails Maurer–Cartan".into()));
        }
    }
    Ok(Integration {
        status: search.status,
        deformation,
        search,
    })
}

fn to_deformation(ce: &CeComplex, base: &LocalBaseAlgebra, sys: &DefiningSystem) -> Result<DeformedBracket> {
    let cochains = sys
        .values
        .iter()
        .map(|v| ce.from_coeffs(2, v.clone().unwrap_or_else(|| ce.zero(2).coeffs().to_vec())))
        .collect::<Result<Vec<_>>>()?;
    DeformedBracket::new(base.clone(), cochains)
}

/// The stage equations solved by [`integrate`], written for `α` itself:
/// `δα_k = -½ Σ s_ij^k [α_i, α_j]`, named by the basis of `𝔪`.
pub fn integration_stage_equations(base: &LocalBaseAlgebra) -> Result<Vec<StageEquation>> {
    let problem = MasseyProblem::from_coalgebra(&base.coalgebra()?)?;
    let map = problem
        .names()
        .iter()
        .map(|x| (x.clone(), (x.clone(), rat(-1, 2))))
        .collect();
    let degrees = problem.names().iter().cloned().zip(problem.degrees().iter().copied()).collect();
    Ok(rescale_equations(
        &stage_equations(&problem),
        &map,
        &degrees,
        problem.symmetry(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieAlgebra;

    #[test]
    fn base_shapes() {
        let s = LocalBaseAlgebra::one_param(4).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.nilpotency(), 5);
        assert_eq!(s.first_order().unwrap(), vec![0]);
        let s = LocalBaseAlgebra::singular(6).unwrap();
        assert_eq!(s.dim(), 5);
        assert_eq!(s.first_order().unwrap().len(), 2);
        let s = LocalBaseAlgebra::pair(4).unwrap();
        let names: Vec<&str> = s.basis().iter().map(|b| b.name.as_str()).collect();
        assert_eq!(names, ["t", "t^2", "t^3", "t^4", "u", "tu", "t^2u"]);
        let first: Vec<&str> = s.first_order().unwrap().iter().map(|&k| names[k]).collect();
        assert_eq!(first, ["t", "u"]);
        assert!(LocalBaseAlgebra::singular(1).is_err());
    }

    #[test]
    fn local_base_doc_round_trip() {
        let s = LocalBaseAlgebra::pair(5).unwrap();
        assert_eq!(LocalBaseAlgebra::from_doc(&s.to_doc()).unwrap(), s);
    }

    #[test]
    fn trivial_bracket_has_zero_residual() {
        let ce = CeComplex::new(LieAlgebra::heisenberg()).unwrap();
        let tau = DeformedBracket::trivial(&ce, LocalBaseAlgebra::one_param(3).unwrap());
        assert!(is_deformation(&ce, &tau).unwrap());
        assert!(jacobiator(&ce, &tau).unwrap().is_zero());
        let d = deformation_differential(&ce, &tau).unwrap();
        assert!(d.classes["t"].iter().all(Zero::is_zero));
    }

    #[test]
    fn abelian_plane_integrates() {
        let ce = CeComplex::new(LieAlgebra::abelian(2)).unwrap();
        let base = LocalBaseAlgebra::one_param(4).unwrap();
        let mut m = ce.zero(2);
        ce.set_value(&mut m, &[0, 1], &[int(1), int(0)]).unwrap();
        let (coords, _) = ce.cohomology_space(2).unwrap().decompose(&m).unwrap();
        let a = InfinitesimalDeformation {
            classes: BTreeMap::from([("t".to_string(), coords)]),
        };
        let r = integrate(&ce, &base, &a, &SearchOptions::default()).unwrap();
        assert_eq!(r.status, Status::Found);
        let tau = r.deformation.unwrap();
        assert_eq!(deformation_differential(&ce, &tau).unwrap(), a);
        assert!(tau.cochains()[1..].iter().all(Cochain::is_zero));
    }
}
