//! Finite-dimensional algebraic parameters: graded Lie algebras, graded
//! commutative associative algebras, cocommutative coalgebras with a
//! two-step filtration, and graded Lie coalgebras.

mod assoc;
mod builders;
mod coalgebra;
pub mod json;
mod lie;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{zero_vec, Scalar};

pub use assoc::{AssocCommAlgebra, FiltrationSpec, IdealSpec};
pub use builders::{
    build_standard_coalgebra, build_upper_triangular_lie_coalgebra, upper_triangular_positions, StandardCoalgebra,
};
pub use coalgebra::{dualize, CoTable, Coalgebra, CoproductTerm, LieCoalgebra};
pub use lie::LieAlgebra;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
}

impl BasisElement {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        BasisElement {
            name: name.into(),
            degree,
        }
    }
}

pub(crate) fn basis_index(basis: &[BasisElement], name: &str) -> Result<usize> {
    basis
        .iter()
        .position(|b| b.name == name)
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}

pub(crate) fn check_unique_names(basis: &[BasisElement]) -> Result<()> {
    for (i, b) in basis.iter().enumerate() {
        if basis[..i].iter().any(|c| c.name == b.name) {
            return Err(Error::MalformedTable(format!("duplicate basis name `{}`", b.name)));
        }
    }
    Ok(())
}

/// Dense table of a bilinear operation on a basis: `e_i * e_j = Σ_k t[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTable {
    dim: usize,
    data: Vec<Vec<Scalar>>,
}

impl StructureTable {
    pub fn zero(dim: usize) -> Self {
        StructureTable {
            dim,
            data: vec![zero_vec(dim); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &[Scalar] {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Vec<Scalar>) -> Result<()> {
        if value.len() != self.dim {
            return Err(Error::MalformedTable(format!(
                "product of {i} and {j} has {} coordinates, expected {}",
                value.len(),
                self.dim
            )));
        }
        self.data[i * self.dim + j] = value;
        Ok(())
    }

    pub fn entry_mut(&mut self, i: usize, j: usize, k: usize) -> &mut Scalar {
        &mut self.data[i * self.dim + j][k]
    }

    /// Bilinear extension to arbitrary vectors.
    pub fn apply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        use num_traits::Zero;
        let mut out = zero_vec(self.dim);
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let c = a * b;
                crate::exact::axpy(&mut out, &c, self.get(i, j));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| crate::exact::is_zero_vec(v))
    }
}

/// One failed identity together with the basis elements witnessing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: String,
    pub witness: Vec<String>,
}

/// Every identity a structure fails; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, identity: &str, witness: Vec<String>) {
        self.violations.push(Violation {
            identity: identity.to_string(),
            witness,
        });
    }

    pub(crate) fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidStructure(self))
        }
    }

    pub fn has(&self, identity: &str) -> bool {
        self.violations.iter().any(|v| v.identity == identity)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let shown: Vec<String> = self
            .violations
            .iter()
            .take(5)
            .map(|v| format!("{} at ({})", v.identity, v.witness.join(", ")))
            .collect();
        write!(f, "{}", shown.join("; "))?;
        if self.violations.len() > 5 {
            write!(f, "; and {} more", self.violations.len() - 5)?;
        }
        Ok(())
    }
}
