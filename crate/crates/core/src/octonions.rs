//! Split octonions and their derivation algebra.
//!
//! The algebra is built by three Cayley-Dickson doublings starting from the
//! reals, with doubling parameters (-1, -1, +1): reals -> complex ->
//! quaternions -> split octonions. The resulting norm form has signature
//! (4,4) and is +1 on the quaternion basis units, -1 on the doubled ones.
//!
//! Derivations D (linear maps with D(xy) = D(x)y + x D(y)) are computed as
//! the null space of the derivation constraints over the 8x8 matrix entries.
//! The solution space is the 14-dimensional split real form of the
//! exceptional algebra g2.

use crate::linalg;
use nalgebra::{DMatrix, DVector};

/// Multiplication table of a finite-dimensional algebra with conjugation.
/// `mul[i][j]` holds the coordinates of e_i * e_j; conjugation negates every
/// basis unit except e_0.
pub struct AlgebraTable {
    pub dim: usize,
    pub mul: Vec<Vec<DVector<f64>>>,
}

impl AlgebraTable {
    fn reals() -> Self {
        AlgebraTable {
            dim: 1,
            mul: vec![vec![DVector::from_vec(vec![1.0])]],
        }
    }

    fn conj(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut out = -x.clone();
        out[0] = x[0];
        out
    }

    fn product(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim);
        for i in 0..self.dim {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..self.dim {
                if y[j] == 0.0 {
                    continue;
                }
                out += &self.mul[i][j] * (x[i] * y[j]);
            }
        }
        out
    }

    /// Cayley-Dickson doubling: pairs (a,b) with
    /// (a,b)(c,d) = (ac + mu * conj(d) b, d a + b conj(c)).
    fn double(&self, mu: f64) -> Self {
        let d = self.dim;
        let dim = 2 * d;
        let embed = |half: usize, v: &DVector<f64>| -> DVector<f64> {
            let mut out = DVector::zeros(dim);
            for i in 0..d {
                out[half * d + i] = v[i];
            }
            out
        };
        let split = |v: &DVector<f64>| -> (DVector<f64>, DVector<f64>) {
            (v.rows(0, d).into_owned(), v.rows(d, d).into_owned())
        };
        let mut mul = vec![vec![DVector::zeros(dim); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let (a, b) = split(&basis_vec(dim, i));
                let (c, dd) = split(&basis_vec(dim, j));
                let first =
                    self.product(&a, &c) + self.product(&self.conj(&dd), &b) * mu;
                let second = self.product(&dd, &a) + self.product(&b, &self.conj(&c));
                mul[i][j] = embed(0, &first) + embed(1, &second);
            }
        }
        AlgebraTable { dim, mul }
    }
}

fn basis_vec(dim: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(dim);
    v[i] = 1.0;
    v
}

/// The 8-dimensional split octonion algebra.
pub fn split_octonion_table() -> AlgebraTable {
    AlgebraTable::reals().double(-1.0).double(-1.0).double(1.0)
}

/// Norm of each basis unit, N(e_i) = e_i conj(e_i); diagonal of the bilinear
/// norm form in this basis.
pub fn basis_norms(t: &AlgebraTable) -> Vec<f64> {
    (0..t.dim)
        .map(|i| {
            let e = basis_vec(t.dim, i);
            t.product(&e, &t.conj(&e))[0]
        })
        .collect()
}

/// Basis of the derivation algebra as 8x8 matrices acting on octonion
/// coordinates. Computed as the null space of D(e_i e_j) - D(e_i)e_j -
/// e_i D(e_j) = 0 over all basis pairs.
pub fn derivation_basis(t: &AlgebraTable) -> Vec<DMatrix<f64>> {
    let d = t.dim;
    let unknowns = d * d; // D as column-major d x d matrix
    let mut rows: Vec<f64> = Vec::new();
    let mut nrows = 0;
    for i in 0..d {
        for j in 0..d {
            // D(e_i e_j)_r = sum_c mul[i][j]_c D_{rc}
            // (D e_i * e_j)_r = sum_c D_{ci} mul[c][j]_r
            // (e_i * D e_j)_r = sum_c D_{cj} mul[i][c]_r
            for r in 0..d {
                let mut row = vec![0.0; unknowns];
                for c in 0..d {
                    row[c * d + r] += t.mul[i][j][c]; // entry D_{rc}
                    row[i * d + c] -= t.mul[c][j][r]; // entry D_{ci}
                    row[j * d + c] -= t.mul[i][c][r]; // entry D_{cj}
                }
                rows.extend_from_slice(&row);
                nrows += 1;
            }
        }
    }
    let system = DMatrix::from_row_slice(nrows, unknowns, &rows);
    linalg::null_space(&system, 1e-9)
        .into_iter()
        .map(|v| linalg::unvectorize(&v, d, d))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_has_split_signature() {
        let t = split_octonion_table();
        assert_eq!(t.dim, 8);
        let norms = basis_norms(&t);
        assert_eq!(
            norms,
            vec![1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0]
        );
    }

    #[test]
    fn quaternion_subalgebra_relations() {
        let t = split_octonion_table();
        // e1*e2 = e3 and e1^2 = -1 inside the quaternion subalgebra
        let e1 = basis_vec(8, 1);
        let e2 = basis_vec(8, 2);
        let p = t.product(&e1, &e2);
        assert!((p - basis_vec(8, 3)).norm() < 1e-14);
        let sq = t.product(&e1, &e1);
        assert!((sq + basis_vec(8, 0)).norm() < 1e-14);
    }

    #[test]
    fn split_units_square_to_plus_one() {
        let t = split_octonion_table();
        for i in 4..8 {
            let e = basis_vec(8, i);
            let sq = t.product(&e, &e);
            assert!((sq - basis_vec(8, 0)).norm() < 1e-14, "e_{i}^2 != 1");
        }
    }

    #[test]
    fn derivation_space_is_fourteen_dimensional() {
        let t = split_octonion_table();
        let ders = derivation_basis(&t);
        assert_eq!(ders.len(), 14);
        // each D annihilates the unit and satisfies the Leibniz rule on a
        // random pair
        for dmat in &ders {
            assert!(dmat.column(0).norm() < 1e-9);
        }
    }

    #[test]
    fn derivations_leibniz_on_all_pairs() {
        let t = split_octonion_table();
        let ders = derivation_basis(&t);
        let dmat = &ders[0] + &ders[7] * 0.5;
        for i in 0..8 {
            for j in 0..8 {
                let ei = basis_vec(8, i);
                let ej = basis_vec(8, j);
                let lhs = &dmat * t.product(&ei, &ej);
                let rhs = t.product(&(&dmat * &ei), &ej) + t.product(&ei, &(&dmat * &ej));
                assert!((lhs - rhs).norm() < 1e-9);
            }
        }
    }
}
