use num_traits::Zero;

use super::{
    basis_index, check_unique_names, AssocCommAlgebra, BasisElement, FiltrationSpec, LieAlgebra,
    StructureTable, ValidationReport,
};
use crate::error::{Error, Result};
use crate::exact::{sign, Scalar};
use crate::graded::{swap, tensor_apply, GradedMap, Tensor};

/// Coproduct (or cobracket) values `Δf_k = Σ d_k^{ij} f_i ⊗ f_j`, one 2-tensor
/// per generator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoTable {
    images: Vec<Tensor>,
}

/// One nonzero entry `coef · f_left ⊗ f_right` of a coproduct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoproductTerm {
    pub left: usize,
    pub right: usize,
    pub coef: Scalar,
}

impl CoTable {
    pub fn zero(dim: usize) -> Self {
        CoTable {
            images: vec![Tensor::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    /// Adds `c · f_i ⊗ f_j` to `Δf_k`.
    pub fn add(&mut self, k: usize, i: usize, j: usize, c: Scalar) {
        self.images[k].add_term(vec![i, j], c);
    }

    pub fn image(&self, k: usize) -> &Tensor {
        &self.images[k]
    }

    pub fn coefficient(&self, k: usize, i: usize, j: usize) -> Scalar {
        self.images[k].coefficient(&[i, j])
    }

    pub fn terms(&self, k: usize) -> Vec<CoproductTerm> {
        self.images[k]
            .terms()
            .map(|(idx, c)| CoproductTerm {
                left: idx[0],
                right: idx[1],
                coef: c.clone(),
            })
            .collect()
    }

    fn as_map(&self) -> GradedMap {
        GradedMap {
            degree: 0,
            images: self.images.clone(),
        }
    }

    fn check(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::MalformedTable(format!(
                "coproduct table has {} rows but the basis has {dim} elements",
                self.dim()
            )));
        }
        for t in &self.images {
            for (idx, _) in t.terms() {
                if idx.len() != 2 || idx.iter().any(|&i| i >= dim) {
                    return Err(Error::MalformedTable(format!("bad coproduct index {idx:?}")));
                }
            }
        }
        Ok(())
    }

    /// The plain transpose: the product `e_i e_j = Σ_k d_k^{ij} e_k`.
    fn transpose(&self) -> StructureTable {
        let n = self.dim();
        let mut t = StructureTable::zero(n);
        for k in 0..n {
            for (idx, c) in self.images[k].terms() {
                *t.entry_mut(idx[0], idx[1], k) += c;
            }
        }
        t
    }

    fn from_transpose(table: &StructureTable) -> Self {
        let n = table.dim();
        let mut out = CoTable::zero(n);
        for i in 0..n {
            for j in 0..n {
                for (k, c) in table.get(i, j).iter().enumerate() {
                    out.add(k, i, j, c.clone());
                }
            }
        }
        out
    }
}

fn check_filtration(dim: usize, f0: &[usize], f1: &[usize]) -> Result<()> {
    if f0.iter().chain(f1).any(|&i| i >= dim) {
        return Err(Error::MalformedTable("filtration index out of range".into()));
    }
    Ok(())
}

fn report_filtration(
    report: &mut ValidationReport,
    basis: &[BasisElement],
    table: &CoTable,
    f0: &[usize],
    f1: &[usize],
) {
    let name = |i: usize| basis[i].name.clone();
    for &i in f0 {
        if !f1.contains(&i) {
            report.push("filtration-nesting", vec![name(i)]);
        }
        if !table.image(i).is_zero() {
            report.push("primitive-f0", vec![name(i)]);
        }
    }
    for k in 0..table.dim() {
        for (idx, _) in table.image(k).terms() {
            if !f1.contains(&idx[0]) || !f1.contains(&idx[1]) {
                report.push("image-in-f1", vec![name(k), name(idx[0]), name(idx[1])]);
            }
        }
    }
}

fn report_grading(report: &mut ValidationReport, basis: &[BasisElement], table: &CoTable) {
    for k in 0..table.dim() {
        for (idx, _) in table.image(k).terms() {
            if basis[idx[0]].degree + basis[idx[1]].degree != basis[k].degree {
                report.push(
                    "grading",
                    vec![basis[k].name.clone(), basis[idx[0]].name.clone(), basis[idx[1]].name.clone()],
                );
            }
        }
    }
}

/// Graded cocommutative coassociative coalgebra with filtration `F0 ⊆ F1 ⊆ F`.
/// Degrees are the coalgebra degrees `deg f_k = q_k - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coalgebra {
    basis: Vec<BasisElement>,
    table: CoTable,
    f0: Vec<usize>,
    f1: Vec<usize>,
}

impl Coalgebra {
    pub fn new(basis: Vec<BasisElement>, table: CoTable, mut f0: Vec<usize>, mut f1: Vec<usize>) -> Result<Self> {
        check_unique_names(&basis)?;
        table.check(basis.len())?;
        check_filtration(basis.len(), &f0, &f1)?;
        f0.sort_unstable();
        f0.dedup();
        f1.sort_unstable();
        f1.dedup();
        Ok(Coalgebra { basis, table, f0, f1 })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.basis.iter().map(|b| b.degree).collect()
    }

    pub fn degree(&self, k: usize) -> i64 {
        self.basis[k].degree
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        basis_index(&self.basis, name)
    }

    pub fn table(&self) -> &CoTable {
        &self.table
    }

    pub fn coproduct(&self, k: usize) -> &Tensor {
        self.table.image(k)
    }

    /// `d_k^{ij}`.
    pub fn d(&self, k: usize, i: usize, j: usize) -> Scalar {
        self.table.coefficient(k, i, j)
    }

    /// `c_k^{ij} = (-1)^{q_i - 1} d_k^{ij}`.
    pub fn c(&self, k: usize, i: usize, j: usize) -> Scalar {
        sign(self.degree(i)) * self.d(k, i, j)
    }

    pub fn f0(&self) -> &[usize] {
        &self.f0
    }

    pub fn f1(&self) -> &[usize] {
        &self.f1
    }

    pub fn in_f0(&self, k: usize) -> bool {
        self.f0.binary_search(&k).is_ok()
    }

    pub fn in_f1(&self, k: usize) -> bool {
        self.f1.binary_search(&k).is_ok()
    }

    /// Generators of `F` outside `F1`, i.e. a basis of `F/F1`.
    pub fn outside_f1(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&k| !self.in_f1(k)).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let deg = self.degrees();
        let name = |i: usize| self.basis[i].name.clone();
        let mut report = ValidationReport::default();
        for k in 0..self.dim() {
            if swap(&deg, self.coproduct(k)) != *self.coproduct(k) {
                report.push("cocommutativity", vec![name(k)]);
            }
        }
        report_grading(&mut report, &self.basis, &self.table);
        let delta = self.table.as_map();
        let id = GradedMap::identity(self.dim());
        for k in 0..self.dim() {
            let d = self.coproduct(k);
            let left = tensor_apply(&[&delta, &id], &deg, d);
            let right = tensor_apply(&[&id, &delta], &deg, d);
            if left != right {
                report.push("coassociativity", vec![name(k)]);
            }
        }
        report_filtration(&mut report, &self.basis, &self.table, &self.f0, &self.f1);
        report
    }

    /// The dual algebra `G = F*`, with `g^i g^j = Σ_k d_k^{ij} g^k`.
    pub fn dual_algebra(&self) -> AssocCommAlgebra {
        AssocCommAlgebra::new(self.basis.clone(), self.table.transpose()).expect("sizes agree")
    }

    /// Same coproduct, different filtration.
    pub fn with_filtration(&self, f0: Vec<usize>, f1: Vec<usize>) -> Result<Self> {
        Coalgebra::new(self.basis.clone(), self.table.clone(), f0, f1)
    }

    /// Restriction to the subcoalgebra spanned by `keep`, which must be
    /// closed under the coproduct.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let pos = |i: usize| keep.iter().position(|&k| k == i);
        let mut table = CoTable::zero(keep.len());
        for (new_k, &k) in keep.iter().enumerate() {
            for (idx, c) in self.coproduct(k).terms() {
                match (pos(idx[0]), pos(idx[1])) {
                    (Some(a), Some(b)) => table.add(new_k, a, b, c.clone()),
                    _ => {
                        return Err(Error::InvalidParameter(format!(
                            "`{}` is not closed under the coproduct",
                            self.basis[k].name
                        )))
                    }
                }
            }
        }
        let basis = keep.iter().map(|&k| self.basis[k].clone()).collect();
        let f0 = self.f0.iter().filter_map(|&i| pos(i)).collect();
        let f1 = self.f1.iter().filter_map(|&i| pos(i)).collect();
        Coalgebra::new(basis, table, f0, f1)
    }
}

/// Dual coalgebra of `g`: `Δf_k = Σ m_ij^k f_i ⊗ f_j`, with `F_i` the
/// annihilator of the ideal named in `spec`. The ideals must be spanned by
/// basis elements so that the annihilators are too.
pub fn dualize(g: &AssocCommAlgebra, spec: &FiltrationSpec) -> Result<Coalgebra> {
    g.validate().into_result()?;
    let f0 = annihilator(g, &spec.f0)?;
    let f1 = annihilator(g, &spec.f1)?;
    let table = CoTable::from_transpose(g.table());
    let out = Coalgebra::new(g.basis().to_vec(), table, f0, f1)?;
    out.validate().into_result()?;
    Ok(out)
}

fn annihilator(g: &AssocCommAlgebra, spec: &super::IdealSpec) -> Result<Vec<usize>> {
    let n = g.dim();
    let span = g.ideal(spec)?;
    let support: Vec<usize> = (0..n).filter(|&k| span.iter().any(|v| !v[k].is_zero())).collect();
    if support.len() != span.len() {
        return Err(Error::NotAnIdeal(format!("{spec:?} is not spanned by basis elements")));
    }
    Ok((0..n).filter(|k| !support.contains(k)).collect())
}

/// Graded Lie coalgebra with filtration `Q0 ⊆ Q1 ⊆ Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieCoalgebra {
    basis: Vec<BasisElement>,
    table: CoTable,
    q0: Vec<usize>,
    q1: Vec<usize>,
}

impl LieCoalgebra {
    pub fn new(basis: Vec<BasisElement>, table: CoTable, mut q0: Vec<usize>, mut q1: Vec<usize>) -> Result<Self> {
        check_unique_names(&basis)?;
        table.check(basis.len())?;
        check_filtration(basis.len(), &q0, &q1)?;
        q0.sort_unstable();
        q0.dedup();
        q1.sort_unstable();
        q1.dedup();
        Ok(LieCoalgebra { basis, table, q0, q1 })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.basis.iter().map(|b| b.degree).collect()
    }

    pub fn degree(&self, k: usize) -> i64 {
        self.basis[k].degree
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        basis_index(&self.basis, name)
    }

    pub fn table(&self) -> &CoTable {
        &self.table
    }

    pub fn cobracket(&self, k: usize) -> &Tensor {
        self.table.image(k)
    }

    pub fn d(&self, k: usize, i: usize, j: usize) -> Scalar {
        self.table.coefficient(k, i, j)
    }

    pub fn q0(&self) -> &[usize] {
        &self.q0
    }

    pub fn q1(&self) -> &[usize] {
        &self.q1
    }

    pub fn in_q0(&self, k: usize) -> bool {
        self.q0.binary_search(&k).is_ok()
    }

    pub fn in_q1(&self, k: usize) -> bool {
        self.q1.binary_search(&k).is_ok()
    }

    pub fn outside_q1(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&k| !self.in_q1(k)).collect()
    }

    /// The Lie algebra `Q*` with `[e_i, e_j] = Σ_k d_k^{ij} e_k`.
    pub fn dual_lie_algebra(&self) -> LieAlgebra {
        LieAlgebra::new(self.basis.clone(), self.table.transpose()).expect("sizes agree")
    }

    /// Checks `S∘Δ = -Δ`, the grading, co-Jacobi (as the Jacobi identity of
    /// the transposed bracket) and the filtration conditions.
    pub fn validate(&self) -> ValidationReport {
        let deg = self.degrees();
        let mut report = ValidationReport::default();
        for k in 0..self.dim() {
            if swap(&deg, self.cobracket(k)).scale(&crate::exact::int(-1)) != *self.cobracket(k) {
                report.push("co-antisymmetry", vec![self.basis[k].name.clone()]);
            }
        }
        report_grading(&mut report, &self.basis, &self.table);
        for v in self.dual_lie_algebra().validate().violations {
            if v.identity == "jacobi" {
                report.push("co-jacobi", v.witness);
            }
        }
        report_filtration(&mut report, &self.basis, &self.table, &self.q0, &self.q1);
        report
    }
}
