use num_traits::Zero;

use super::{basis_index, check_unique_names, BasisElement, StructureTable, ValidationReport};
use crate::error::{Error, Result};
use crate::exact::{sign, unit_vec, Matrix, Scalar};

/// Graded commutative associative algebra (not necessarily unital), given
/// by `g^i g^j = Σ_k m_ij^k g^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocCommAlgebra {
    basis: Vec<BasisElement>,
    table: StructureTable,
}

/// Which ideal of `G` a filtration step annihilates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealSpec {
    /// The zero ideal; its annihilator is everything.
    Zero,
    /// `G^k`.
    Power(usize),
    /// The last nonzero power `G^k`, `k >= 2`; the zero ideal when `G² = 0`.
    TopPower,
    /// The span of the named basis elements.
    Span(Vec<String>),
}

/// Filtration of the dual coalgebra: `F0 = I0^⊥` and `F1 = I1^⊥`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationSpec {
    pub f0: IdealSpec,
    pub f1: IdealSpec,
}

impl Default for FiltrationSpec {
    fn default() -> Self {
        FiltrationSpec {
            f0: IdealSpec::Power(2),
            f1: IdealSpec::TopPower,
        }
    }
}

impl FiltrationSpec {
    /// `F0* = G/G²` and `F1 = F`.
    pub fn triviality() -> Self {
        FiltrationSpec {
            f0: IdealSpec::Power(2),
            f1: IdealSpec::Zero,
        }
    }
}

impl AssocCommAlgebra {
    pub fn new(basis: Vec<BasisElement>, table: StructureTable) -> Result<Self> {
        if table.dim() != basis.len() {
            return Err(Error::MalformedTable(format!(
                "table is {}-dimensional but the basis has {} elements",
                table.dim(),
                basis.len()
            )));
        }
        check_unique_names(&basis)?;
        Ok(AssocCommAlgebra { basis, table })
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

    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.table.apply(x, y)
    }

    pub fn product_basis(&self, i: usize, j: usize) -> &[Scalar] {
        self.table.get(i, j)
    }

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
                    .all(|(a, b)| (a - &s * b).is_zero());
                if !ok {
                    report.push("commutativity", vec![name(i), name(j)]);
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
        for i in 0..n {
            for j in 0..n {
                let ij = self.table.get(i, j);
                for k in 0..n {
                    let left = self.product(ij, &unit_vec(n, k));
                    let right = self.product(&unit_vec(n, i), self.table.get(j, k));
                    if left != right {
                        report.push("associativity", vec![name(i), name(j), name(k)]);
                    }
                }
            }
        }
        report
    }

    /// A basis (reduced echelon rows) of the power `G^k`, `k >= 1`.
    pub fn power_span(&self, k: usize) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        let mut span: Vec<Vec<Scalar>> = (0..n).map(|i| unit_vec(n, i)).collect();
        for _ in 1..k.max(1) {
            let mut next = Vec::new();
            for v in &span {
                for j in 0..n {
                    next.push(self.product(v, &unit_vec(n, j)));
                }
            }
            span = row_basis(n, &next);
            if span.is_empty() {
                break;
            }
        }
        span
    }

    /// Largest `k` with `G^k != 0`; errors when `G` is not nilpotent.
    pub fn top_power(&self) -> Result<usize> {
        let n = self.dim();
        if n == 0 {
            return Ok(0);
        }
        let mut k = 1;
        loop {
            if self.power_span(k + 1).is_empty() {
                return Ok(k);
            }
            k += 1;
            if k > n {
                return Err(Error::InvalidParameter("algebra is not nilpotent".into()));
            }
        }
    }

    /// Basis of the ideal named by `spec`, after checking that it is an ideal.
    pub fn ideal(&self, spec: &IdealSpec) -> Result<Vec<Vec<Scalar>>> {
        let n = self.dim();
        let span = match spec {
            IdealSpec::Zero => Vec::new(),
            IdealSpec::Power(k) => {
                if *k == 0 {
                    return Err(Error::InvalidParameter("powers start at 1".into()));
                }
                self.power_span(*k)
            }
            IdealSpec::TopPower => match self.top_power()? {
                k if k >= 2 => self.power_span(k),
                _ => Vec::new(),
            },
            IdealSpec::Span(names) => {
                let vs: Vec<Vec<Scalar>> = names
                    .iter()
                    .map(|s| self.index_of(s).map(|i| unit_vec(n, i)))
                    .collect::<Result<_>>()?;
                row_basis(n, &vs)
            }
        };
        let base = Matrix::from_columns(n, &span);
        for v in &span {
            for j in 0..n {
                let p = self.product(v, &unit_vec(n, j));
                if crate::exact::solve_affine(&base, &p)?.is_none() {
                    return Err(Error::NotAnIdeal(format!(
                        "{spec:?} is not closed under multiplication by `{}`",
                        self.basis[j].name
                    )));
                }
            }
        }
        Ok(span)
    }
}

/// Reduced echelon basis of the span of `vs`.
pub(crate) fn row_basis(n: usize, vs: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let m = Matrix::from_rows(n, vs);
    let (r, piv) = m.rref();
    (0..piv.len()).map(|i| r.row(i).to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    /// span{t, t², t³} in K[t]/(t⁴) with g^k g^l = -1/2 g^{k+l}.
    fn series_ideal(n: usize) -> AssocCommAlgebra {
        let basis = (1..=n).map(|k| BasisElement::new(format!("g{k}"), 0)).collect();
        let mut t = StructureTable::zero(n);
        for k in 1..=n {
            for l in 1..=n {
                if k + l <= n {
                    *t.entry_mut(k - 1, l - 1, k + l - 1) = rat(-1, 2);
                }
            }
        }
        AssocCommAlgebra::new(basis, t).unwrap()
    }

    #[test]
    fn powers_of_series_ideal() {
        let g = series_ideal(3);
        assert!(g.validate().is_valid());
        assert_eq!(g.power_span(1).len(), 3);
        assert_eq!(g.power_span(2).len(), 2);
        assert_eq!(g.power_span(3).len(), 1);
        assert!(g.power_span(4).is_empty());
        assert_eq!(g.top_power().unwrap(), 3);
    }

    #[test]
    fn non_ideal_span_rejected() {
        let g = series_ideal(3);
        let r = g.ideal(&IdealSpec::Span(vec!["g1".into()]));
        assert!(matches!(r, Err(Error::NotAnIdeal(_))));
        assert_eq!(g.ideal(&IdealSpec::Span(vec!["g2".into(), "g3".into()])).unwrap().len(), 2);
    }

    #[test]
    fn associativity_violation() {
        // xx = y, yy = x, xy = 0: (xx)y = x but x(xy) = 0
        let basis = vec![BasisElement::new("x", 0), BasisElement::new("y", 0)];
        let mut t = StructureTable::zero(2);
        *t.entry_mut(0, 0, 1) = rat(1, 1);
        *t.entry_mut(1, 1, 0) = rat(1, 1);
        let g = AssocCommAlgebra::new(basis, t).unwrap();
        let r = g.validate();
        assert!(r.has("associativity"));
        assert!(!r.has("commutativity"));
    }
}
