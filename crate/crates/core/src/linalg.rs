//! Dense linear-algebra helpers used throughout the crate.
//!
//! Everything works on `nalgebra` dynamic matrices in double precision.
//! Orthonormalization is a deterministic Gram-Schmidt with fixed pivoting
//! order so that repeated runs produce identical bases.

use nalgebra::{DMatrix, DVector};

/// Inner product x^T G y for a symmetric Gram matrix G.
pub fn ip(gram: &DMatrix<f64>, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    (x.transpose() * gram * y)[(0, 0)]
}

pub fn norm(gram: &DMatrix<f64>, x: &DVector<f64>) -> f64 {
    ip(gram, x, x).max(0.0).sqrt()
}

/// Gram-Schmidt in the given order against the inner product `gram`.
/// Vectors whose residual norm falls below `drop_tol` are discarded.
/// The sign of each output vector is fixed so its largest-magnitude
/// coordinate is positive.
pub fn gram_schmidt(
    vectors: &[DVector<f64>],
    gram: &DMatrix<f64>,
    drop_tol: f64,
) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        // two passes for numerical stability
        for _ in 0..2 {
            for b in &basis {
                let c = ip(gram, &w, b);
                w -= b * c;
            }
        }
        let n = norm(gram, &w);
        if n > drop_tol {
            w /= n;
            fix_sign(&mut w);
            basis.push(w);
        }
    }
    basis
}

fn fix_sign(v: &mut DVector<f64>) {
    let mut idx = 0;
    let mut best = 0.0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > best {
            best = x.abs();
            idx = i;
        }
    }
    if v[idx] < 0.0 {
        *v = -&*v;
    }
}

/// Residual norm of `v` outside the span of `basis` (orthonormal w.r.t. `gram`).
pub fn residual_outside_span(
    v: &DVector<f64>,
    basis: &[DVector<f64>],
    gram: &DMatrix<f64>,
) -> f64 {
    let mut w = v.clone();
    for b in basis {
        let c = ip(gram, &w, b);
        w -= b * c;
    }
    norm(gram, &w)
}

/// Orthonormal basis (standard dot product) of the null space of `a`.
pub fn null_space(a: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let ncols = a.ncols();
    // pad with zero rows so the thin SVD returns a full square v_t
    let work = if a.nrows() < ncols {
        let mut padded = DMatrix::zeros(ncols, ncols);
        padded.view_mut((0, 0), (a.nrows(), ncols)).copy_from(a);
        padded
    } else {
        a.clone()
    };
    let svd = work.svd(false, true);
    let v_t = svd.v_t.expect("svd requested v_t");
    let mut out = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s <= tol {
            out.push(v_t.row(i).transpose());
        }
    }
    for v in &mut out {
        fix_sign(v);
    }
    out
}

/// Flatten a matrix column-major into a vector.
pub fn vectorize(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &DVector<f64>, nrows: usize, ncols: usize) -> DMatrix<f64> {
    DMatrix::from_column_slice(nrows, ncols, v.as_slice())
}

/// Expresses matrices in the span of a fixed matrix basis by least squares.
pub struct SpanSolver {
    stacked: DMatrix<f64>,
    svd: nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>,
    nrows: usize,
    ncols: usize,
}

impl SpanSolver {
    pub fn new(basis: &[DMatrix<f64>]) -> Self {
        let nrows = basis[0].nrows();
        let ncols = basis[0].ncols();
        let mut stacked = DMatrix::zeros(nrows * ncols, basis.len());
        for (j, m) in basis.iter().enumerate() {
            stacked.set_column(j, &vectorize(m));
        }
        let svd = stacked.clone().svd(true, true);
        SpanSolver {
            stacked,
            svd,
            nrows,
            ncols,
        }
    }

    /// Coordinates of `m` in the basis plus the residual left outside the span.
    pub fn solve(&self, m: &DMatrix<f64>) -> (DVector<f64>, f64) {
        assert_eq!(m.nrows(), self.nrows);
        assert_eq!(m.ncols(), self.ncols);
        let rhs = vectorize(m);
        let sol = self
            .svd
            .solve(&rhs, 1e-13)
            .expect("svd solve is infallible for consistent eps");
        let coords = DVector::from_column_slice(sol.as_slice());
        let residual = (&self.stacked * &coords - rhs).norm();
        (coords, residual)
    }
}

/// exp of a nilpotent matrix by its (finite) power series.
pub fn nilpotent_exp(m: &DMatrix<f64>) -> DMatrix<f64> {
    let d = m.nrows();
    let mut out = DMatrix::identity(d, d);
    let mut term = DMatrix::identity(d, d);
    for k in 1..=d {
        term = (&term * m) / k as f64;
        if term.norm() == 0.0 {
            break;
        }
        out += &term;
    }
    out
}

/// log of a unipotent matrix via the finite series log(I+Z) = sum (-1)^{k+1} Z^k / k.
/// Returns the log together with the residual norm of Z^d, which must vanish
/// for a genuinely unipotent input.
pub fn unipotent_log(u: &DMatrix<f64>) -> (DMatrix<f64>, f64) {
    let d = u.nrows();
    let z = u - DMatrix::identity(d, d);
    let mut out = DMatrix::zeros(d, d);
    let mut power = DMatrix::identity(d, d);
    for k in 1..=d {
        power = &power * &z;
        if k < d {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            out += &power * (sign / k as f64);
        }
    }
    let residual = power.norm(); // Z^d
    (out, residual)
}

/// Nearest rational p/q with q <= max_den, if within tol.
pub fn snap_rational(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    for q in 1..=max_den {
        let p = (x * q as f64).round();
        if (x - p / q as f64).abs() < tol {
            let g = gcd(p.abs() as i64, q);
            return Some(((p as i64) / g, q / g));
        }
    }
    None
}

fn gcd(a: i64, b: i64) -> i64 {
    if a == 0 {
        b.max(1)
    } else {
        gcd(b % a, a)
    }
}
