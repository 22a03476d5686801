//! Massey products in the cohomology of a differential graded commutative
//! algebra: classical, matric, and parameterized by a Lie coalgebra.
//!
//! Classical products `⟨a_1, …, a_r⟩`, `a_i ∈ H^{q_i}`, use a family
//! `α_ij`, `1 ≤ i < j ≤ r + 1`, `(i, j) ≠ (1, r + 1)`, with
//!
//! ```text
//! α_{i,i+1} ∈ a_i,   δα_ij = Σ_{i<k<j} (-1)^{|α_ik|} α_ik α_kj,
//! ```
//!
//! and the product is the class of the same sum at `(1, r + 1)`. Matric
//! products read every `α_ij` as a `p_i × p_j` matrix.

use std::collections::BTreeMap;

use crate::algebra::json::{expect_kind, StructureDoc};
use crate::algebra::{AssocCommAlgebra, BasisElement, LieCoalgebra, ValidationReport};
use crate::dg::{DgAlgebra, GradedTables};
use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::massey::{massey_search, ClassAssignment, MasseyProblem, MasseyResult, SearchOptions};

/// A finite DGCA given by its multiplication table and differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgcAlgebra {
    inner: GradedTables,
}

impl DgcAlgebra {
    pub fn new(
        basis: Vec<BasisElement>,
        table: crate::algebra::StructureTable,
        diff: Vec<Vec<Scalar>>,
    ) -> Result<Self> {
        Ok(DgcAlgebra {
            inner: GradedTables::new(basis, table, diff)?,
        })
    }

    /// Reads a `"kind": "dgca"` document.
    pub fn from_doc(doc: &StructureDoc) -> Result<Self> {
        expect_kind(doc, &["dgca"])?;
        Ok(DgcAlgebra {
            inner: GradedTables::from_doc(doc)?,
        })
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.inner.basis
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Basis indices of degree `d`, in component order.
    pub fn component(&self, d: i64) -> &[usize] {
        self.inner.component(d)
    }

    /// Component coordinates from full coordinates.
    pub fn project(&self, d: i64, v: &[Scalar]) -> Vec<Scalar> {
        self.inner.project(d, v)
    }

    /// Full coordinates from component coordinates.
    pub fn embed(&self, d: i64, x: &[Scalar]) -> Vec<Scalar> {
        self.inner.embed(d, x)
    }

    /// Graded commutativity, associativity, grading, `δ∘δ = 0` and the
    /// Leibniz rule.
    pub fn validate(&self) -> ValidationReport {
        let g = AssocCommAlgebra::new(self.inner.basis.clone(), self.inner.table.clone()).expect("sizes checked");
        let mut report = g.validate();
        report.violations.retain(|v| v.identity != "grading");
        self.inner.validate_common(&mut report);
        self.inner.validate_leibniz(&mut report);
        report
    }
}

impl DgAlgebra for DgcAlgebra {
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

/// A class `a ∈ H^degree`, by coordinates in the canonical basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgcaClass {
    pub degree: i64,
    pub coords: Vec<Scalar>,
}

fn check_class(a: &DgcAlgebra, c: &DgcaClass) -> Result<()> {
    let dim = a.cohomology(c.degree)?.dimension();
    if c.coords.len() != dim {
        return Err(Error::DegreeMismatch(format!(
            "class has {} coordinates, H^{} has dimension {dim}",
            c.coords.len(),
            c.degree
        )));
    }
    Ok(())
}

/// `⟨a_1, …, a_r⟩`, optionally testing membership of `b`.
pub fn dgca_massey(
    a: &DgcAlgebra,
    classes: &[DgcaClass],
    b: Option<&[Scalar]>,
    opts: &SearchOptions,
) -> Result<MasseyResult> {
    let blocks = vec![1; classes.len() + 1];
    let matrices: Vec<MatrixClass> = classes
        .iter()
        .map(|c| MatrixClass {
            entries: vec![vec![c.clone()]],
        })
        .collect();
    let b = b.map(|v| vec![vec![v.to_vec()]]);
    matric_massey(a, &blocks, &matrices, b.as_deref(), opts)
}

/// A `p × p'` matrix of classes of one common degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixClass {
    pub entries: Vec<Vec<DgcaClass>>,
}

impl MatrixClass {
    fn degree(&self) -> Result<i64> {
        let first = self
            .entries
            .first()
            .and_then(|row| row.first())
            .ok_or_else(|| Error::InvalidParameter("empty class matrix".into()))?;
        if self.entries.iter().flatten().any(|c| c.degree != first.degree) {
            return Err(Error::DegreeMismatch("entries of one class matrix have different degrees".into()));
        }
        Ok(first.degree)
    }
}

/// Matric Massey product with block sizes `p_1, …, p_{r+1}`; `b`, if given,
/// is a `p_1 × p_{r+1}` matrix of coordinate vectors.
pub fn matric_massey(
    a: &DgcAlgebra,
    blocks: &[usize],
    classes: &[MatrixClass],
    b: Option<&[Vec<Vec<Scalar>>]>,
    opts: &SearchOptions,
) -> Result<MasseyResult> {
    let (problem, assignment) = matric_problem(a, blocks, classes, b)?;
    massey_search(a, &problem, &assignment, opts)
}

/// The stage problem and class assignment behind [`matric_massey`].
pub fn matric_problem(
    a: &DgcAlgebra,
    blocks: &[usize],
    classes: &[MatrixClass],
    b: Option<&[Vec<Vec<Scalar>>]>,
) -> Result<(MasseyProblem, ClassAssignment)> {
    let r = classes.len();
    if r == 0 || blocks.len() != r + 1 {
        return Err(Error::DimensionMismatch {
            expected: r + 1,
            found: blocks.len(),
        });
    }
    let mut degrees = Vec::with_capacity(r);
    for (i, m) in classes.iter().enumerate() {
        if m.entries.len() != blocks[i] || m.entries.iter().any(|row| row.len() != blocks[i + 1]) {
            return Err(Error::DimensionMismatch {
                expected: blocks[i] * blocks[i + 1],
                found: m.entries.iter().map(Vec::len).sum(),
            });
        }
        degrees.push(m.degree()?);
        for c in m.entries.iter().flatten() {
            check_class(a, c)?;
        }
    }
    let problem = MasseyProblem::matric_dgca(blocks, &degrees)?;
    let mut assignment = ClassAssignment::default();
    for &k in problem.f0() {
        let (i, s, t) = entry_of(problem.name(k));
        assignment
            .a
            .insert(problem.name(k).to_string(), classes[i - 1].entries[s][t].coords.clone());
    }
    if let Some(b) = b {
        if b.len() != blocks[0] || b.iter().any(|row| row.len() != blocks[r]) {
            return Err(Error::DimensionMismatch {
                expected: blocks[0] * blocks[r],
                found: b.iter().map(Vec::len).sum(),
            });
        }
        let mut map = BTreeMap::new();
        for k in problem.outside_f1() {
            let (_, s, t) = entry_of(problem.name(k));
            map.insert(problem.name(k).to_string(), b[s][t].clone());
        }
        assignment.b = Some(map);
    }
    Ok((problem, assignment))
}

/// `(i, s, t)` from `a(i,j)` or `a(i,j)[s,t]` (entries 0-based).
fn entry_of(name: &str) -> (usize, usize, usize) {
    let nums: Vec<usize> = name
        .split(|c: char| !c.is_ascii_digit())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().expect("digits"))
        .collect();
    match nums.as_slice() {
        [i, _] => (*i, 0, 0),
        [i, _, s, t] => (*i, s - 1, t - 1),
        _ => unreachable!("generator names are built by matric_dgca"),
    }
}

/// Massey `Q`-products for a Lie coalgebra `Q`: `δα = μ(α ⊗ α)Δ` on `Q1`.
pub fn lie_coalgebra_massey(
    a: &DgcAlgebra,
    q: &LieCoalgebra,
    classes: &ClassAssignment,
    opts: &SearchOptions,
) -> Result<MasseyResult> {
    let problem = MasseyProblem::from_lie_coalgebra(q)?;
    massey_search(a, &problem, classes, opts)
}
