use num_traits::Zero;

use super::{basis_index, check_unique_names, BasisElement, StructureTable, ValidationReport};
use crate::error::{Error, Result};
use crate::exact::{int, is_zero_vec, sign, Scalar};
use crate::graded::{contract_front, cycle, Tensor};

/// Graded Lie algebra given by structure constants `[e_i, e_j] = Σ_k b_ij^k e_k`.
///
/// The table is taken literally: nothing is symmetrized, so a malformed table
/// is reported by [`LieAlgebra::validate`] rather than silently repaired.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    basis: Vec<BasisElement>,
    table: StructureTable,
}

impl LieAlgebra {
    pub fn new(basis: Vec<BasisElement>, table: StructureTable) -> Result<Self> {
        if table.dim() != basis.len() {
            return Err(Error::MalformedTable(format!(
                "table is {}-dimensional but the basis has {} elements",
                table.dim(),
                basis.len()
            )));
        }
        check_unique_names(&basis)?;
        Ok(LieAlgebra { basis, table })
    }

    /// Builds an algebra from brackets `[e_i, e_j]` for `i < j`, filling in
    /// `[e_j, e_i]` by graded antisymmetry and `[e_i, e_i]` as zero unless given.
    pub fn from_brackets(
        basis: Vec<BasisElement>,
        brackets: &[(usize, usize, Vec<(usize, Scalar)>)],
    ) -> Result<Self> {
        let n = basis.len();
        let mut table = StructureTable::zero(n);
        for (i, j, value) in brackets {
            let (i, j) = (*i, *j);
            if i >= n || j >= n {
                return Err(Error::MalformedTable(format!("index ({i}, {j}) out of range")));
            }
            let s = -sign(basis[i].degree * basis[j].degree);
            for (k, c) in value {
                if *k >= n {
                    return Err(Error::MalformedTable(format!("index {k} out of range")));
                }
                *table.entry_mut(i, j, *k) += c;
                if i != j {
                    *table.entry_mut(j, i, *k) += &s * c;
                }
            }
        }
        LieAlgebra::new(basis, table)
    }

    pub fn abelian(n: usize) -> Self {
        let basis = (1..=n).map(|i| BasisElement::new(format!("e{i}"), 0)).collect();
        LieAlgebra::new(basis, StructureTable::zero(n)).expect("sizes agree")
    }

    /// Heisenberg algebra `[e1, e2] = e3`.
    pub fn heisenberg() -> Self {
        Self::ungraded(&["e1", "e2", "e3"], &[(0, 1, vec![(2, 1)])])
    }

    /// `sl2` in the basis `e, f, h`: `[e,f] = h`, `[h,e] = 2e`, `[h,f] = -2f`.
    pub fn sl2() -> Self {
        Self::ungraded(
            &["e", "f", "h"],
            &[(0, 1, vec![(2, 1)]), (2, 0, vec![(0, 2)]), (2, 1, vec![(1, -2)])],
        )
    }

    /// Two-dimensional non-abelian algebra `[e1, e2] = e2`.
    pub fn aff1() -> Self {
        Self::ungraded(&["e1", "e2"], &[(0, 1, vec![(1, 1)])])
    }

    fn ungraded(names: &[&str], brackets: &[(usize, usize, Vec<(usize, i64)>)]) -> Self {
        let basis = names.iter().map(|n| BasisElement::new(*n, 0)).collect();
        let brackets: Vec<_> = brackets
            .iter()
            .map(|(i, j, v)| (*i, *j, v.iter().map(|(k, c)| (*k, int(*c))).collect()))
            .collect();
        Self::from_brackets(basis, &brackets).expect("fixed algebra is well formed")
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.basis.iter().map(|b| b.degree).collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        basis_index(&self.basis, name)
    }

    pub fn is_ungraded(&self) -> bool {
        self.basis.iter().all(|b| b.degree == 0)
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Scalar] {
        self.table.get(i, j)
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.table.apply(x, y)
    }

    /// A copy with one structure constant `b_ij^k` replaced.
    pub fn with_constant(&self, i: usize, j: usize, k: usize, value: Scalar) -> Self {
        let mut out = self.clone();
        *out.table.entry_mut(i, j, k) = value;
        out
    }

    /// Checks `μ∘S = -μ`, the grading, and `μ∘(μ⊗1)∘(1+C+C²) = 0` on all
    /// basis elements.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let deg = self.degrees();
        let name = |i: usize| self.basis[i].name.clone();
        let mut report = ValidationReport::default();
        for i in 0..n {
            for j in i..n {
                let s = sign(deg[i] * deg[j]);
                let ok = self
                    .table
                    .get(i, j)
                    .iter()
                    .zip(self.table.get(j, i))
                    .all(|(a, b)| (a + &s * b).is_zero());
                if !ok {
                    report.push("antisymmetry", vec![name(i), name(j)]);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.table.get(i, j).iter().enumerate() {
                    if !c.is_zero() && deg[k] != deg[i] + deg[j] {
                        report.push("grading", vec![name(i), name(j), name(k)]);
                    }
                }
            }
        }
        let mu = |a: usize, b: usize| -> Vec<(usize, Scalar)> {
            self.table
                .get(a, b)
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.clone()))
                .collect()
        };
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let t = Tensor::basis(&[i, j, k]);
                    let c1 = cycle(&deg, &t);
                    let c2 = cycle(&deg, &c1);
                    let mut sum = t;
                    sum.add(&c1);
                    sum.add(&c2);
                    let jac = contract_front(&contract_front(&sum, mu), mu);
                    if !jac.is_zero() {
                        report.push("jacobi", vec![name(i), name(j), name(k)]);
                    }
                }
            }
        }
        report
    }

    /// The Jacobiator `[[x,y],z] + (-1)^{x(y+z)}[[y,z],x] + (-1)^{z(x+y)}[[z,x],y]`
    /// on basis elements, computed directly from the table.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vec<Scalar> {
        let d = self.degrees();
        let e = |a: usize| crate::exact::unit_vec(self.dim(), a);
        let t1 = self.bracket(self.bracket_basis(i, j), &e(k));
        let t2 = self.bracket(self.bracket_basis(j, k), &e(i));
        let t3 = self.bracket(self.bracket_basis(k, i), &e(j));
        let mut out = t1;
        crate::exact::axpy(&mut out, &sign(d[i] * (d[j] + d[k])), &t2);
        crate::exact::axpy(&mut out, &sign(d[k] * (d[i] + d[j])), &t3);
        out
    }

    pub fn is_jacobi_exact(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| is_zero_vec(&self.jacobiator(i, j, k)))))
    }
}
