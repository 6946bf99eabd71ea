//! Bracket, invariant form, inner product and Cartan decomposition of a
//! realized matrix Lie algebra.
//!
//! A realization stores a basis of d x d real matrices together with the
//! derived data: structure constants, the Cartan involution theta acting on
//! coordinates (X -> -X^T in every supported realization), the invariant
//! form B (a positive rational multiple of the Killing form) and the inner
//! product <X,Y> = -B(X, theta Y).

use crate::error::{LieError, Result};
use crate::linalg::{self, SpanSolver};
use nalgebra::{DMatrix, DVector};

pub struct LieAlgebraRealization {
    pub id: String,
    /// Dimension of the algebra.
    pub dim: usize,
    /// Size of the realizing matrices.
    pub matrix_dim: usize,
    pub basis: Vec<DMatrix<f64>>,
    /// ad matrices of the basis vectors: `ad[i] * y` are the coordinates of
    /// [e_i, Y] for a coordinate vector y.
    pub ad_basis: Vec<DMatrix<f64>>,
    /// Coordinate matrix of the Cartan involution.
    pub theta: DMatrix<f64>,
    /// Invariant form B in coordinates (form_scale times the Killing form).
    pub b_form: DMatrix<f64>,
    /// Gram matrix of <X,Y> = -B(X, theta Y).
    pub gram: DMatrix<f64>,
    solver: SpanSolver,
    /// Largest residual seen when closing the basis under brackets.
    pub closure_residual: f64,
    /// max(|theta^2 - id|, automorphism defect of theta).
    pub theta_residual: f64,
}

impl LieAlgebraRealization {
    /// Builds the realization from a matrix basis, checking bracket closure
    /// and that X -> -X^T restricts to an involutive automorphism.
    pub fn from_matrix_basis(
        id: &str,
        basis: Vec<DMatrix<f64>>,
        form_scale: f64,
    ) -> Result<Self> {
        let dim = basis.len();
        let matrix_dim = basis[0].nrows();
        let solver = SpanSolver::new(&basis);

        // structure constants and closure
        let mut closure_residual: f64 = 0.0;
        let mut ad_basis = vec![DMatrix::zeros(dim, dim); dim];
        for i in 0..dim {
            for j in 0..dim {
                let comm = &basis[i] * &basis[j] - &basis[j] * &basis[i];
                let (coords, res) = solver.solve(&comm);
                closure_residual = closure_residual.max(res);
                ad_basis[i].set_column(j, &coords);
            }
        }
        if closure_residual > 1e-12 {
            return Err(LieError::NotClosedUnderBracket {
                residual: closure_residual,
            });
        }

        // theta = -X^T in coordinates
        let mut theta = DMatrix::zeros(dim, dim);
        let mut theta_residual: f64 = 0.0;
        for j in 0..dim {
            let (coords, res) = solver.solve(&(-basis[j].transpose()));
            theta_residual = theta_residual.max(res);
            theta.set_column(j, &coords);
        }
        let inv_res = (&theta * &theta - DMatrix::identity(dim, dim)).norm();
        theta_residual = theta_residual.max(inv_res);
        if theta_residual > 1e-12 {
            return Err(LieError::ThetaNotInvolutive {
                residual: theta_residual,
            });
        }

        // Killing form from the structure constants
        let mut b_form = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                b_form[(i, j)] = (&ad_basis[i] * &ad_basis[j]).trace() * form_scale;
            }
        }
        b_form = (&b_form + b_form.transpose()) * 0.5;

        let gram = -(&b_form * &theta);
        let gram = (&gram + gram.transpose()) * 0.5;

        let real = LieAlgebraRealization {
            id: id.to_string(),
            dim,
            matrix_dim,
            basis,
            ad_basis,
            theta,
            b_form,
            gram,
            solver,
            closure_residual,
            theta_residual,
        };
        real.validate()?;
        Ok(real)
    }

    fn validate(&self) -> Result<()> {
        let auto = self.theta_automorphism_residual();
        if auto > 1e-12 {
            return Err(LieError::ThetaNotInvolutive { residual: auto });
        }
        let jac = self.jacobi_residual();
        if jac > 1e-10 {
            return Err(LieError::Numerical(format!(
                "Jacobi identity residual {jac:.3e}"
            )));
        }
        let adinv = self.b_ad_invariance_residual();
        if adinv > 1e-10 {
            return Err(LieError::Numerical(format!(
                "B is not ad-invariant, residual {adinv:.3e}"
            )));
        }
        // gram must be positive-definite
        let eig = self.gram.clone().symmetric_eigen();
        let min = eig.eigenvalues.min();
        if min <= 0.0 {
            return Err(LieError::Numerical(format!(
                "inner product not positive-definite, min eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }

    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(LieError::DimensionMismatch {
                expected: self.dim,
                got: x.len().max(y.len()),
            });
        }
        Ok(self.ad(x) * y)
    }

    /// ad X as a matrix acting on coordinates.
    pub fn ad(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            if x[i] != 0.0 {
                out += &self.ad_basis[i] * x[i];
            }
        }
        out
    }

    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        linalg::ip(&self.gram, x, y)
    }

    pub fn inner_product(&self) -> InnerProduct {
        InnerProduct {
            gram: self.gram.clone(),
        }
    }

    pub fn theta_apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.theta * x
    }

    /// Matrix realizing the coordinate vector.
    pub fn matrix_of(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.matrix_dim, self.matrix_dim);
        for i in 0..self.dim {
            if x[i] != 0.0 {
                out += &self.basis[i] * x[i];
            }
        }
        out
    }

    /// Coordinates of a matrix known to lie in the algebra.
    pub fn coords_of(&self, m: &DMatrix<f64>) -> Result<DVector<f64>> {
        let (coords, res) = self.solver.solve(m);
        if res > 1e-9 * (1.0 + m.norm()) {
            return Err(LieError::Numerical(format!(
                "matrix lies outside the algebra, residual {res:.3e}"
            )));
        }
        Ok(coords)
    }

    pub fn basis_vector(&self, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim);
        v[i] = 1.0;
        v
    }

    pub fn jacobi_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let ij = self.ad_basis[i].column(j).into_owned();
                for k in (j + 1)..self.dim {
                    let jk = self.ad_basis[j].column(k).into_owned();
                    let ki = self.ad_basis[k].column(i).into_owned();
                    let s = self.ad(&ij) * self.basis_vector(k)
                        + self.ad(&jk) * self.basis_vector(i)
                        + self.ad(&ki) * self.basis_vector(j);
                    worst = worst.max(s.norm());
                }
            }
        }
        worst
    }

    /// max residual of theta[X,Y] = [theta X, theta Y] over basis pairs.
    pub fn theta_automorphism_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = &self.theta * self.ad_basis[i].column(j);
                let ti = self.theta.column(i).into_owned();
                let tj = self.theta.column(j).into_owned();
                let rhs = self.ad(&ti) * tj;
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }

    /// max residual of B([Z,X],Y) + B(X,[Z,Y]) = 0 over basis triples.
    pub fn b_ad_invariance_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for z in 0..self.dim {
            let lhs = self.ad_basis[z].transpose() * &self.b_form + &self.b_form * &self.ad_basis[z];
            worst = worst.max(lhs.norm());
        }
        worst
    }

    /// ad X must be self-adjoint w.r.t. the inner product for X in p and
    /// skew-adjoint for X in k. Returns the worst residual over the given
    /// vectors, with `sign` +1 for self-adjoint and -1 for skew.
    pub fn ad_adjointness_residual(&self, vectors: &[DVector<f64>], sign: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for v in vectors {
            let a = self.ad(v);
            let lhs = &self.gram * &a - (&a.transpose() * &self.gram) * sign;
            worst = worst.max(lhs.norm());
        }
        worst
    }
}

/// Orthonormal bases of the +1/-1 eigenspaces of theta.
pub struct CartanDecomposition {
    pub k_basis: Vec<DVector<f64>>,
    pub p_basis: Vec<DVector<f64>>,
}

impl CartanDecomposition {
    pub fn dim_k(&self) -> usize {
        self.k_basis.len()
    }
    pub fn dim_p(&self) -> usize {
        self.p_basis.len()
    }

    /// Worst residual of the inclusions [k,k] in k, [k,p] in p, [p,p] in k.
    pub fn inclusion_residual(&self, real: &LieAlgebraRealization) -> f64 {
        let mut worst: f64 = 0.0;
        let check = |xs: &[DVector<f64>],
                     ys: &[DVector<f64>],
                     target: &[DVector<f64>]|
         -> f64 {
            let mut w: f64 = 0.0;
            for x in xs {
                for y in ys {
                    let b = real.ad(x) * y;
                    w = w.max(linalg::residual_outside_span(&b, target, &real.gram));
                }
            }
            w
        };
        worst = worst.max(check(&self.k_basis, &self.k_basis, &self.k_basis));
        worst = worst.max(check(&self.k_basis, &self.p_basis, &self.p_basis));
        worst = worst.max(check(&self.p_basis, &self.p_basis, &self.k_basis));
        worst
    }
}

/// Splits the algebra into theta-eigenspaces, orthonormal w.r.t. the inner
/// product.
pub fn cartan_decompose(real: &LieAlgebraRealization) -> Result<CartanDecomposition> {
    let inv_res = (&real.theta * &real.theta - DMatrix::identity(real.dim, real.dim)).norm();
    if inv_res > 1e-10 {
        return Err(LieError::ThetaNotInvolutive { residual: inv_res });
    }
    let id = DMatrix::identity(real.dim, real.dim);
    let proj_k = (&id + &real.theta) * 0.5;
    let proj_p = (&id - &real.theta) * 0.5;
    let columns = |m: &DMatrix<f64>| -> Vec<DVector<f64>> {
        (0..real.dim).map(|j| m.column(j).into_owned()).collect()
    };
    let k_basis = linalg::gram_schmidt(&columns(&proj_k), &real.gram, 1e-8);
    let p_basis = linalg::gram_schmidt(&columns(&proj_p), &real.gram, 1e-8);
    if k_basis.len() + p_basis.len() != real.dim {
        return Err(LieError::Numerical(format!(
            "eigenspace dimensions {} + {} != {}",
            k_basis.len(),
            p_basis.len(),
            real.dim
        )));
    }
    Ok(CartanDecomposition { k_basis, p_basis })
}

/// The K-invariant inner product as a positive-definite Gram matrix.
pub struct InnerProduct {
    pub gram: DMatrix<f64>,
}

impl InnerProduct {
    pub fn eval(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        linalg::ip(&self.gram, x, y)
    }
}
