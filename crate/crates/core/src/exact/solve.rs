use num_traits::Zero;

use super::{combine, zero_vec, Matrix, Scalar};
use crate::error::{Error, Result};

/// Solution set of `M x = y`: `particular + span(kernel_basis)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Scalar>,
    pub kernel_basis: Vec<Vec<Scalar>>,
}

/// Solves `M x = y` exactly. `Ok(None)` means `y` is outside the column space.
///
/// The particular solution sets every free variable to zero, and the kernel
/// basis has one vector per free column, so the output is a deterministic
/// function of the input.
pub fn solve_affine(m: &Matrix, y: &[Scalar]) -> Result<Option<AffineSolution>> {
    if y.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: y.len(),
        });
    }
    let n = m.cols();
    let mut aug = Matrix::zeros(m.rows(), n + 1);
    for i in 0..m.rows() {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n, y[i].clone());
    }
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut particular = zero_vec(n);
    for (row, &col) in pivots.iter().enumerate() {
        particular[col] = r.get(row, n).clone();
    }
    let is_pivot: Vec<bool> = (0..n).map(|j| pivots.contains(&j)).collect();
    let kernel_basis = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = zero_vec(n);
            v[f] = super::one();
            for (row, &col) in pivots.iter().enumerate() {
                let x = r.get(row, f);
                if !x.is_zero() {
                    v[col] = -x.clone();
                }
            }
            v
        })
        .collect();
    Ok(Some(AffineSolution {
        particular,
        kernel_basis,
    }))
}

/// The quotient `span(Z) / span(B)` with a chosen basis of representatives.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: usize,
    boundary_count: usize,
    /// Indices into the boundary list forming a basis of `span(B)`.
    boundary_basis: Vec<usize>,
    boundary_vectors: Vec<Vec<Scalar>>,
    representatives: Vec<Vec<Scalar>>,
    /// Columns `[B basis | representatives]`.
    frame: Matrix,
}

/// Result of [`Subquotient::decompose`]:
/// `v = sum coords[i] * representatives[i] + remainder`, with
/// `remainder = sum boundary_coeffs[j] * B[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub coords: Vec<Scalar>,
    pub remainder: Vec<Scalar>,
    pub boundary_coeffs: Vec<Scalar>,
}

/// Builds the subquotient `span(Z) / span(B)` of a space of dimension
/// `ambient`. Every `B` vector must lie in `span(Z)`.
pub fn subquotient(ambient: usize, z: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Result<Subquotient> {
    for v in z.iter().chain(b) {
        if v.len() != ambient {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: v.len(),
            });
        }
    }
    let zmat = Matrix::from_columns(ambient, z);
    for (i, v) in b.iter().enumerate() {
        if solve_affine(&zmat, v)?.is_none() {
            return Err(Error::BoundaryOutsideCycles { index: i });
        }
    }
    let (_, bpiv) = Matrix::from_columns(ambient, b).rref();
    let boundary_vectors: Vec<Vec<Scalar>> = bpiv.iter().map(|&i| b[i].clone()).collect();
    let mut cols = boundary_vectors.clone();
    cols.extend(z.iter().cloned());
    let (_, piv) = Matrix::from_columns(ambient, &cols).rref();
    let nb = boundary_vectors.len();
    let representatives: Vec<Vec<Scalar>> = piv
        .iter()
        .filter(|&&c| c >= nb)
        .map(|&c| cols[c].clone())
        .collect();
    let mut frame_cols = boundary_vectors.clone();
    frame_cols.extend(representatives.iter().cloned());
    Ok(Subquotient {
        ambient,
        boundary_count: b.len(),
        boundary_basis: bpiv,
        boundary_vectors,
        representatives,
        frame: Matrix::from_columns(ambient, &frame_cols),
    })
}

impl Subquotient {
    pub fn dimension(&self) -> usize {
        self.representatives.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn representatives(&self) -> &[Vec<Scalar>] {
        &self.representatives
    }

    /// Vector representing the quotient element with the given coordinates.
    pub fn lift(&self, coords: &[Scalar]) -> Result<Vec<Scalar>> {
        if coords.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: coords.len(),
            });
        }
        Ok(combine(self.ambient, coords, &self.representatives))
    }

    /// A basis of `span(B)`.
    pub fn boundary_basis(&self) -> &[Vec<Scalar>] {
        &self.boundary_vectors
    }

    pub fn decompose(&self, v: &[Scalar]) -> Result<Decomposition> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: v.len(),
            });
        }
        let sol = solve_affine(&self.frame, v)?.ok_or(Error::NotInSpan)?;
        let nb = self.boundary_vectors.len();
        let coords = sol.particular[nb..].to_vec();
        let mut boundary_coeffs = zero_vec(self.boundary_count);
        for (k, &i) in self.boundary_basis.iter().enumerate() {
            boundary_coeffs[i] = sol.particular[k].clone();
        }
        let remainder = combine(self.ambient, &sol.particular[..nb], &self.boundary_vectors);
        Ok(Decomposition {
            coords,
            remainder,
            boundary_coeffs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn m(cols: usize, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            cols,
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn scalar_division() {
        let s = solve_affine(&m(1, &[&[2]]), &[int(1)]).unwrap().unwrap();
        assert_eq!(s.particular, vec![rat(1, 2)]);
        assert!(s.kernel_basis.is_empty());
    }

    #[test]
    fn symmetric_kernel() {
        let s = solve_affine(&m(2, &[&[1, 1]]), &[int(0)]).unwrap().unwrap();
        assert_eq!(s.particular, vec![int(0), int(0)]);
        assert_eq!(s.kernel_basis, vec![vec![int(-1), int(1)]]);
    }

    #[test]
    fn inconsistent_system() {
        let s = solve_affine(&m(1, &[&[1], &[0]]), &[int(0), int(1)]).unwrap();
        assert!(s.is_none());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            solve_affine(&m(1, &[&[1]]), &[int(0), int(1)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn subquotient_examples() {
        let e1 = vec![int(1), int(0)];
        let e2 = vec![int(0), int(1)];
        let q = subquotient(2, &[e1.clone(), e2.clone()], &[]).unwrap();
        assert_eq!(q.dimension(), 2);

        let q = subquotient(2, &[e1.clone(), e2.clone()], &[e1.clone()]).unwrap();
        assert_eq!(q.dimension(), 1);
        let d = q.decompose(&[int(2), int(3)]).unwrap();
        assert_eq!(d.coords, vec![int(3)]);
        assert_eq!(d.remainder, vec![int(2), int(0)]);
        assert_eq!(d.boundary_coeffs, vec![int(2)]);

        let q = subquotient(2, &[vec![int(1), int(1)]], &[vec![int(2), int(2)]]).unwrap();
        assert_eq!(q.dimension(), 0);
    }

    #[test]
    fn boundary_outside_cycles() {
        let r = subquotient(2, &[vec![int(1), int(0)]], &[vec![int(0), int(1)]]);
        assert!(matches!(r, Err(Error::BoundaryOutsideCycles { index: 0 })));
    }

    #[test]
    fn decompose_outside_span() {
        let q = subquotient(2, &[vec![int(1), int(0)]], &[]).unwrap();
        assert!(matches!(q.decompose(&[int(0), int(1)]), Err(Error::NotInSpan)));
    }

    fn small() -> impl Strategy<Value = i64> {
        -3i64..=3
    }

    proptest! {
        #[test]
        fn planted_solution_is_recovered(
            rows in 1usize..5,
            cols in 1usize..5,
            data in proptest::collection::vec(small(), 25),
            x in proptest::collection::vec(small(), 5),
            k in proptest::collection::vec(small(), 5),
        ) {
            let mat = Matrix::from_rows(cols, &(0..rows)
                .map(|i| (0..cols).map(|j| int(data[i * 5 + j])).collect())
                .collect::<Vec<_>>());
            let x: Vec<Scalar> = x[..cols].iter().map(|&v| int(v)).collect();
            let y = mat.mul_vec(&x);
            let sol = solve_affine(&mat, &y).unwrap().unwrap();
            prop_assert_eq!(mat.mul_vec(&sol.particular), y.clone());
            prop_assert_eq!(sol.kernel_basis.len(), cols - mat.rank());
            let mut shifted = sol.particular.clone();
            for (c, v) in k.iter().zip(&sol.kernel_basis) {
                prop_assert!(mat.mul_vec(v).iter().all(|e| e.is_zero()));
                crate::exact::axpy(&mut shifted, &int(*c), v);
            }
            prop_assert_eq!(mat.mul_vec(&shifted), y);
            // determinism
            prop_assert_eq!(solve_affine(&mat, &mat.mul_vec(&x)).unwrap().unwrap(), sol);
        }

        #[test]
        fn decompose_reconstructs(
            zdata in proptest::collection::vec(small(), 12),
            bsel in proptest::collection::vec(small(), 6),
            coeffs in proptest::collection::vec(small(), 3),
        ) {
            let z: Vec<Vec<Scalar>> = zdata.chunks(4).map(|c| c.iter().map(|&v| int(v)).collect()).collect();
            let b: Vec<Vec<Scalar>> = bsel.chunks(3).map(|c| combine(4, &c.iter().map(|&v| int(v)).collect::<Vec<_>>(), &z)).collect();
            let q = subquotient(4, &z, &b).unwrap();
            let v = combine(4, &coeffs.iter().map(|&v| int(v)).collect::<Vec<_>>(), &z);
            let d = q.decompose(&v).unwrap();
            let mut rebuilt = combine(4, &d.coords, q.representatives());
            crate::exact::add_assign(&mut rebuilt, &d.remainder);
            prop_assert_eq!(rebuilt, v);
            prop_assert_eq!(combine(4, &d.boundary_coeffs, &b), d.remainder);
            let bspan = Matrix::from_columns(4, &b).rank();
            let zspan = Matrix::from_columns(4, &z).rank();
            prop_assert_eq!(q.dimension(), zspan - bspan);
        }
    }
}
