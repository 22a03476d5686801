//! Finite differential graded algebras presented by their graded components,
//! and their cohomology.

use num_traits::Zero;

use crate::algebra::json::{expect_kind, product_table, StructureDoc};
use crate::algebra::{BasisElement, StructureTable, ValidationReport};
use crate::error::{Error, Result};
use crate::exact::{
    combine, is_zero_vec, sign, solve_affine, subquotient, sub_vec, unit_vec, zero_vec, Matrix, Scalar, Subquotient,
};

/// A graded vector space `L = ⊕ L^d` with a degree +1 differential and a
/// degree 0 product (a bracket for DGLAs, a multiplication for DGCAs).
/// Elements of `L^d` are coordinate vectors of length `component_dim(d)`.
pub trait DgAlgebra {
    fn component_dim(&self, d: i64) -> usize;

    /// `δ: L^d → L^{d+1}`.
    fn differential(&self, d: i64, x: &[Scalar]) -> Vec<Scalar>;

    /// Product of `x ∈ L^{dx}` and `y ∈ L^{dy}`, in `L^{dx+dy}`.
    fn product(&self, dx: i64, x: &[Scalar], dy: i64, y: &[Scalar]) -> Vec<Scalar>;

    /// Matrix of `δ: L^d → L^{d+1}`.
    fn differential_matrix(&self, d: i64) -> Matrix {
        let n = self.component_dim(d);
        let cols: Vec<Vec<Scalar>> = (0..n).map(|i| self.differential(d, &unit_vec(n, i))).collect();
        Matrix::from_columns(self.component_dim(d + 1), &cols)
    }

    fn cohomology(&self, d: i64) -> Result<Cohomology> {
        Cohomology::compute(self, d)
    }
}

/// `H^d = Ker δ / Im δ` with chosen representative cocycles.
#[derive(Clone, Debug)]
pub struct Cohomology {
    degree: i64,
    quotient: Subquotient,
    /// Basis of `L^{d-1}` mapped through `δ`: boundary `j` is `δ(e_j)`.
    source_dim: usize,
}

/// `v = Σ coords_i · rep_i + δ(preimage)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDecomposition {
    pub coords: Vec<Scalar>,
    pub preimage: Vec<Scalar>,
}

impl Cohomology {
    fn compute<A: DgAlgebra + ?Sized>(a: &A, d: i64) -> Result<Self> {
        let n = a.component_dim(d);
        let dm = a.differential_matrix(d);
        let kernel = solve_affine(&dm, &zero_vec(dm.rows()))?
            .expect("homogeneous systems are solvable")
            .kernel_basis;
        let source_dim = a.component_dim(d - 1);
        let boundaries: Vec<Vec<Scalar>> =
            (0..source_dim).map(|i| a.differential(d - 1, &unit_vec(source_dim, i))).collect();
        let quotient = subquotient(n, &kernel, &boundaries).map_err(|e| match e {
            Error::BoundaryOutsideCycles { .. } => Error::Invariant(format!("δ∘δ ≠ 0 into degree {d}")),
            other => other,
        })?;
        Ok(Cohomology {
            degree: d,
            quotient,
            source_dim,
        })
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn dimension(&self) -> usize {
        self.quotient.dimension()
    }

    pub fn ambient(&self) -> usize {
        self.quotient.ambient()
    }

    pub fn representatives(&self) -> &[Vec<Scalar>] {
        self.quotient.representatives()
    }

    /// Representative cocycle of the class with the given coordinates.
    pub fn lift(&self, coords: &[Scalar]) -> Result<Vec<Scalar>> {
        self.quotient.lift(coords)
    }

    /// A basis of the coboundaries `B^d`.
    pub fn coboundary_basis(&self) -> &[Vec<Scalar>] {
        self.quotient.boundary_basis()
    }

    /// Class coordinates of a cocycle together with an explicit preimage of
    /// the exact remainder. Fails with `NotInSpan` on non-cocycles.
    pub fn decompose(&self, v: &[Scalar]) -> Result<ClassDecomposition> {
        let d = self.quotient.decompose(v)?;
        Ok(ClassDecomposition {
            coords: d.coords,
            preimage: {
                let mut p = zero_vec(self.source_dim);
                for (j, c) in d.boundary_coeffs.iter().enumerate() {
                    p[j] = c.clone();
                }
                p
            },
        })
    }

    pub fn is_exact(&self, v: &[Scalar]) -> Result<bool> {
        Ok(is_zero_vec(&self.decompose(v)?.coords))
    }
}

/// Checks that `v` is a cocycle of degree `d`.
pub fn is_cocycle<A: DgAlgebra + ?Sized>(a: &A, d: i64, v: &[Scalar]) -> bool {
    is_zero_vec(&a.differential(d, v))
}

/// A graded basis with a bilinear table and a differential given by the
/// images of basis vectors, shared by the table-defined DGLA and DGCA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct GradedTables {
    pub basis: Vec<BasisElement>,
    pub table: StructureTable,
    /// `δ(e_i)` in full coordinates.
    pub diff: Vec<Vec<Scalar>>,
    /// `components[d - min]` lists the basis indices of degree `d`.
    min_degree: i64,
    components: Vec<Vec<usize>>,
}

impl GradedTables {
    pub fn new(basis: Vec<BasisElement>, table: StructureTable, diff: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = basis.len();
        if table.dim() != n || diff.len() != n || diff.iter().any(|v| v.len() != n) {
            return Err(Error::MalformedTable("table or differential does not match the basis".into()));
        }
        crate::algebra::check_unique_names(&basis)?;
        let min_degree = basis.iter().map(|b| b.degree).min().unwrap_or(0);
        let max_degree = basis.iter().map(|b| b.degree).max().unwrap_or(0);
        let mut components = vec![Vec::new(); (max_degree - min_degree + 1) as usize];
        for (i, b) in basis.iter().enumerate() {
            let c = &mut components[(b.degree - min_degree) as usize];
            c.push(i);
        }
        Ok(GradedTables {
            basis,
            table,
            diff,
            min_degree,
            components,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn component(&self, d: i64) -> &[usize] {
        let i = d - self.min_degree;
        if i < 0 || i as usize >= self.components.len() {
            &[]
        } else {
            &self.components[i as usize]
        }
    }

    /// Embeds component coordinates into full coordinates.
    pub fn embed(&self, d: i64, x: &[Scalar]) -> Vec<Scalar> {
        let mut v = zero_vec(self.dim());
        for (&i, c) in self.component(d).iter().zip(x) {
            v[i] = c.clone();
        }
        v
    }

    /// Projects full coordinates onto component `d`.
    pub fn project(&self, d: i64, v: &[Scalar]) -> Vec<Scalar> {
        self.component(d).iter().map(|&i| v[i].clone()).collect()
    }

    pub fn differential_full(&self, v: &[Scalar]) -> Vec<Scalar> {
        combine(self.dim(), v, &self.diff)
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.basis.iter().map(|b| b.degree).collect()
    }

    /// Basis, product table and `"differential"` entries of a document.
    pub fn from_doc(doc: &StructureDoc) -> Result<Self> {
        let n = doc.basis.len();
        let mut diff = vec![zero_vec(n); n];
        for e in &doc.differential {
            let i = crate::algebra::json::index(&doc.basis, &e.source)?;
            let v = crate::algebra::json::parse_vector(&doc.basis, &e.value)?;
            crate::exact::add_assign(&mut diff[i], &v);
        }
        GradedTables::new(doc.basis.clone(), product_table(doc)?, diff)
    }

    /// Grading of the product and the differential, and `δ∘δ = 0`.
    pub fn validate_common(&self, report: &mut ValidationReport) {
        let n = self.dim();
        let deg = self.degrees();
        let name = |i: usize| self.basis[i].name.clone();
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.table.get(i, j).iter().enumerate() {
                    if !c.is_zero() && deg[k] != deg[i] + deg[j] {
                        report.push("grading", vec![name(i), name(j), name(k)]);
                    }
                }
            }
            for (k, c) in self.diff[i].iter().enumerate() {
                if !c.is_zero() && deg[k] != deg[i] + 1 {
                    report.push("differential-degree", vec![name(i), name(k)]);
                }
            }
            if !is_zero_vec(&self.differential_full(&self.diff[i])) {
                report.push("differential-square", vec![name(i)]);
            }
        }
    }

    /// `δ(xy) = δx·y + (-1)^{|x|} x·δy` on basis pairs.
    pub fn validate_leibniz(&self, report: &mut ValidationReport) {
        let n = self.dim();
        let deg = self.degrees();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.differential_full(self.table.get(i, j));
                let mut rhs = self.table.apply(&self.diff[i], &unit_vec(n, j));
                crate::exact::axpy(&mut rhs, &sign(deg[i]), &self.table.apply(&unit_vec(n, i), &self.diff[j]));
                if !is_zero_vec(&sub_vec(&lhs, &rhs)) {
                    report.push("leibniz", vec![self.basis[i].name.clone(), self.basis[j].name.clone()]);
                }
            }
        }
    }

    pub fn component_dim(&self, d: i64) -> usize {
        self.component(d).len()
    }

    pub fn differential(&self, d: i64, x: &[Scalar]) -> Vec<Scalar> {
        self.project(d + 1, &self.differential_full(&self.embed(d, x)))
    }

    pub fn product(&self, dx: i64, x: &[Scalar], dy: i64, y: &[Scalar]) -> Vec<Scalar> {
        self.project(dx + dy, &self.table.apply(&self.embed(dx, x), &self.embed(dy, y)))
    }
}

/// A finite DGLA given by a bracket table and a differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableDgla {
    inner: GradedTables,
}

impl TableDgla {
    pub fn new(basis: Vec<BasisElement>, bracket: StructureTable, diff: Vec<Vec<Scalar>>) -> Result<Self> {
        Ok(TableDgla {
            inner: GradedTables::new(basis, bracket, diff)?,
        })
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.inner.basis
    }

    /// Basis indices of `L^d`.
    pub fn component(&self, d: i64) -> &[usize] {
        self.inner.component(d)
    }

    /// Antisymmetry, Jacobi and grading of the bracket, plus the differential
    /// axioms.
    pub fn validate(&self) -> ValidationReport {
        let lie = crate::algebra::LieAlgebra::new(self.inner.basis.clone(), self.inner.table.clone())
            .expect("sizes checked");
        let mut report = lie.validate();
        report.violations.retain(|v| v.identity != "grading");
        self.inner.validate_common(&mut report);
        self.inner.validate_leibniz(&mut report);
        report
    }
}

/// Reads a `"kind": "dgla"` document: bracket table plus differential.
pub fn dgla_from_doc(doc: &StructureDoc) -> Result<TableDgla> {
    expect_kind(doc, &["dgla"])?;
    Ok(TableDgla {
        inner: GradedTables::from_doc(doc)?,
    })
}

impl DgAlgebra for TableDgla {
    fn component_dim(&self, d: i64) -> usize {
        self.inner.component_dim(d)
    }

    fn differential(&self, d: i64, x: &[Scalar]) -> Vec<Scalar> {
        self.inner.differential(d, x)
    }

    fn product(&self, dx: i64, x: &[Scalar], dy: i64, y: &[Scalar]) -> Vec<Scalar> {
        self.inner.product(dx, x, dy, y)
    }
}
