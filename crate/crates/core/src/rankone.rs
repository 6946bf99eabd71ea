//! Rank-one data attached to a simple restricted root: the subalgebra
//! generated by its root spaces, the solvable models of the source and
//! target groups in exponential coordinates, the orthogonal projection
//! between them, and the group operations needed to evaluate functions
//! along left translates.

use crate::algebra_core::LieAlgebraRealization;
use crate::error::{LieError, Result};
use crate::linalg;
use crate::roots::RestrictedRootSystem;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Everything attached to a simple root beta.
pub struct RankOneData {
    pub beta: usize,
    /// Dual vector of beta in ambient coordinates.
    pub h_beta: DVector<f64>,
    /// |H_beta| = sqrt(<beta,beta>).
    pub h_beta_norm: f64,
    /// <beta, beta>.
    pub beta_norm2: f64,
    /// Orthonormal basis of g_beta + g_{2beta}.
    pub n_beta_basis: Vec<DVector<f64>>,
    /// Unit vector spanning the one-dimensional abelian part.
    pub a_beta_unit: DVector<f64>,
    /// Basis of the compact part of the generated subalgebra.
    pub k_beta_basis: Vec<DVector<f64>>,
    /// Orthonormal basis of the subalgebra generated by g_{+beta}, g_{-beta}.
    pub g_beta_full: Vec<DVector<f64>>,
    pub m_beta: usize,
    pub m_two_beta: usize,
    /// 1 + m_beta + m_{2beta}.
    pub dim_m_beta: usize,
}

impl RankOneData {
    /// Hyperbolic type read off the double-root multiplicity.
    pub fn hyperbolic_type(&self) -> &'static str {
        match self.m_two_beta {
            0 => "real",
            1 => "complex",
            3 => "quaternionic",
            _ => "exceptional",
        }
    }
}

/// Builds the rank-one data for a simple root.
pub fn build_rank_one(
    real: &LieAlgebraRealization,
    system: &RestrictedRootSystem,
    beta: usize,
) -> Result<RankOneData> {
    if !system.is_simple(beta) {
        return Err(LieError::Numerical(format!("root {beta} is not simple")));
    }
    let h_beta = system.roots[beta].h_alpha.clone();
    let beta_norm2 = system.root_inner(beta, beta);
    let h_beta_norm = beta_norm2.sqrt();
    let a_beta_unit = &h_beta / h_beta_norm;

    let m_beta = system.multiplicities[beta];
    let m_two_beta = system.multiplicity_of_double(beta);
    let mut n_beta_basis = system.root_spaces[beta].clone();
    if let Some(double) = system.double_root(beta) {
        n_beta_basis.extend(system.root_spaces[double].iter().cloned());
    }

    // subalgebra generated by g_{+beta} and g_{-beta}: grow the span by
    // brackets until stable (the span is monotone in a finite space)
    let neg = system
        .find_root(&(-&system.roots[beta].coords))
        .ok_or_else(|| LieError::Numerical("missing negative root".into()))?;
    let mut generators: Vec<DVector<f64>> = system.root_spaces[beta].clone();
    generators.extend(system.root_spaces[neg].iter().cloned());
    let mut span = linalg::gram_schmidt(&generators, &real.gram, 1e-10);
    for _ in 0..real.dim {
        let mut new_vecs = span.clone();
        for x in &span {
            for y in &span {
                new_vecs.push(real.ad(x) * y);
            }
        }
        let grown = linalg::gram_schmidt(&new_vecs, &real.gram, 1e-8);
        if grown.len() == span.len() {
            span = grown;
            break;
        }
        span = grown;
    }
    let g_beta_full = span;

    // theta-stability and closure of the generated subalgebra
    for v in &g_beta_full {
        let tv = real.theta_apply(v);
        let res = linalg::residual_outside_span(&tv, &g_beta_full, &real.gram);
        if res > 1e-8 {
            return Err(LieError::Numerical(format!(
                "generated subalgebra is not theta-stable, residual {res:.3e}"
            )));
        }
    }

    // k^beta as the intersection with the +1 eigenspace of theta, computed
    // inside the span: (theta - id) V c = 0
    let dim = real.dim;
    let mut v_mat = DMatrix::zeros(dim, g_beta_full.len());
    for (j, v) in g_beta_full.iter().enumerate() {
        v_mat.set_column(j, v);
    }
    let constraint = (&real.theta - DMatrix::identity(dim, dim)) * &v_mat;
    let k_beta_basis: Vec<DVector<f64>> = linalg::null_space(&constraint, 1e-9)
        .iter()
        .map(|c| &v_mat * c)
        .collect();

    // cross-check: dim g^beta = dim k^beta + 1 + m_beta + m_{2beta}
    let dim_m_beta = 1 + m_beta + m_two_beta;
    if g_beta_full.len() != k_beta_basis.len() + dim_m_beta {
        return Err(LieError::Numerical(format!(
            "Iwasawa dimension mismatch for the generated subalgebra: {} != {} + {}",
            g_beta_full.len(),
            k_beta_basis.len(),
            dim_m_beta
        )));
    }

    Ok(RankOneData {
        beta,
        h_beta,
        h_beta_norm,
        beta_norm2,
        n_beta_basis,
        a_beta_unit,
        k_beta_basis,
        g_beta_full,
        m_beta,
        m_two_beta,
        dim_m_beta,
    })
}

/// A simply connected solvable group n + a in exponential coordinates
/// (X, H) for the point exp(X) exp(H), together with the frame data needed
/// for its left-invariant geometry.
pub struct SolvableGroup {
    pub matrix_dim: usize,
    pub n_dim: usize,
    pub a_dim: usize,
    /// Orthonormal frame in ambient algebra coordinates: n-vectors grouped
    /// by positive root, then the a-basis.
    pub frame: Vec<DVector<f64>>,
    /// Matrix realization of each frame vector.
    pub frame_mats: Vec<DMatrix<f64>>,
    /// For each n-frame vector, the root functional on the a-frame.
    pub n_root_coords: Vec<DVector<f64>>,
    /// Structure constants in the frame: structure[i] column j holds the
    /// frame coordinates of [f_i, f_j].
    pub structure: Vec<DMatrix<f64>>,
    solver: linalg::SpanSolver,
}

/// Point of the group in exponential coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupPoint {
    /// Coordinates of the nilpotent part in the n-frame.
    #[serde(rename = "X")]
    pub n: Vec<f64>,
    /// Coordinates of the abelian part in the a-frame.
    #[serde(rename = "H")]
    pub a: Vec<f64>,
}

impl GroupPoint {
    pub fn n_vec(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.n)
    }
    pub fn a_vec(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.a)
    }
    pub fn from_vecs(n: DVector<f64>, a: DVector<f64>) -> Self {
        GroupPoint {
            n: n.as_slice().to_vec(),
            a: a.as_slice().to_vec(),
        }
    }
}

impl SolvableGroup {
    /// The full Iwasawa model n + a of the realization.
    pub fn source(real: &LieAlgebraRealization, system: &RestrictedRootSystem) -> Result<Self> {
        let mut frame = Vec::new();
        let mut n_root_coords = Vec::new();
        for &i in &system.positives {
            for v in &system.root_spaces[i] {
                frame.push(v.clone());
                n_root_coords.push(system.roots[i].coords.clone());
            }
        }
        let n_dim = frame.len();
        // the a-frame is the basis the root coordinates refer to
        let a_dim = system.a_basis.len();
        frame.extend(system.a_basis.iter().cloned());
        Self::assemble(real, frame, n_root_coords, n_dim, a_dim)
    }

    /// The rank-one model n^beta + a^beta inside the same realization.
    pub fn target(
        real: &LieAlgebraRealization,
        system: &RestrictedRootSystem,
        data: &RankOneData,
    ) -> Result<Self> {
        let mut frame = Vec::new();
        let mut n_root_coords = Vec::new();
        let beta_on_a = data.h_beta_norm; // beta(H_beta/|H_beta|) = |H_beta|
        for v in &system.root_spaces[data.beta] {
            frame.push(v.clone());
            n_root_coords.push(DVector::from_vec(vec![beta_on_a]));
        }
        if let Some(double) = system.double_root(data.beta) {
            for v in &system.root_spaces[double] {
                frame.push(v.clone());
                n_root_coords.push(DVector::from_vec(vec![2.0 * beta_on_a]));
            }
        }
        let n_dim = frame.len();
        frame.push(data.a_beta_unit.clone());
        Self::assemble(real, frame, n_root_coords, n_dim, 1)
    }

    fn assemble(
        real: &LieAlgebraRealization,
        frame: Vec<DVector<f64>>,
        n_root_coords: Vec<DVector<f64>>,
        n_dim: usize,
        a_dim: usize,
    ) -> Result<Self> {
        let dim = frame.len();
        // orthonormality of the frame
        for (i, x) in frame.iter().enumerate() {
            for (j, y) in frame.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (real.inner(x, y) - expect).abs() > 1e-9 {
                    return Err(LieError::Numerical(
                        "solvable frame is not orthonormal".into(),
                    ));
                }
            }
        }
        // structure constants in the frame; closure under bracket is part of
        // the contract for a subalgebra frame
        let mut structure = vec![DMatrix::zeros(dim, dim); dim];
        for i in 0..dim {
            for j in 0..dim {
                let b = real.ad(&frame[i]) * &frame[j];
                let mut coords = DVector::zeros(dim);
                let mut remainder = b.clone();
                for (k, f) in frame.iter().enumerate() {
                    let c = real.inner(&b, f);
                    coords[k] = c;
                    remainder -= f * c;
                }
                let res = linalg::norm(&real.gram, &remainder);
                if res > 1e-9 {
                    return Err(LieError::NotClosedUnderBracket { residual: res });
                }
                structure[i].set_column(j, &coords);
            }
        }
        let frame_mats: Vec<DMatrix<f64>> =
            frame.iter().map(|v| real.matrix_of(v)).collect();
        let solver = linalg::SpanSolver::new(&frame_mats[..n_dim]);
        Ok(SolvableGroup {
            matrix_dim: real.matrix_dim,
            n_dim,
            a_dim,
            frame,
            frame_mats,
            n_root_coords,
            structure,
            solver,
        })
    }

    pub fn dim(&self) -> usize {
        self.n_dim + self.a_dim
    }

    pub fn identity(&self) -> GroupPoint {
        GroupPoint {
            n: vec![0.0; self.n_dim],
            a: vec![0.0; self.a_dim],
        }
    }

    /// Validates coordinate dimensions and the nilpotency of the n-part.
    pub fn point(&self, n: Vec<f64>, a: Vec<f64>) -> Result<GroupPoint> {
        if n.len() != self.n_dim || a.len() != self.a_dim {
            return Err(LieError::DimensionMismatch {
                expected: self.n_dim,
                got: n.len(),
            });
        }
        let p = GroupPoint { n, a };
        let m = self.n_matrix(&p.n_vec());
        let mut power = DMatrix::identity(self.matrix_dim, self.matrix_dim);
        for _ in 0..self.matrix_dim {
            power = &power * &m;
        }
        if power.norm() > 1e-9 * (1.0 + m.norm().powi(self.matrix_dim as i32)) {
            return Err(LieError::NonUnipotentProduct {
                residual: power.norm(),
            });
        }
        Ok(p)
    }

    pub fn n_matrix(&self, n: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.matrix_dim, self.matrix_dim);
        for i in 0..self.n_dim {
            if n[i] != 0.0 {
                out += &self.frame_mats[i] * n[i];
            }
        }
        out
    }

    /// Value of the root attached to n-frame direction i on the a-vector h.
    fn root_value(&self, i: usize, h: &DVector<f64>) -> f64 {
        self.n_root_coords[i].dot(h)
    }

    /// Ad(exp h) acting on an n-vector: each root component scales by
    /// exp(alpha(h)).
    pub fn ad_exp_a(&self, h: &DVector<f64>, n: &DVector<f64>) -> DVector<f64> {
        let mut out = n.clone();
        for i in 0..self.n_dim {
            out[i] *= self.root_value(i, h).exp();
        }
        out
    }

    /// Group law: exp(X1)exp(H1) exp(X2)exp(H2) =
    /// exp(log(exp(X1) exp(Ad(exp H1)X2))) exp(H1+H2).
    pub fn multiply(&self, g1: &GroupPoint, g2: &GroupPoint) -> Result<GroupPoint> {
        let h1 = g1.a_vec();
        let x2 = self.ad_exp_a(&h1, &g2.n_vec());
        let x1 = g1.n_vec();
        let u = linalg::nilpotent_exp(&self.n_matrix(&x1))
            * linalg::nilpotent_exp(&self.n_matrix(&x2));
        let (log, nil_res) = linalg::unipotent_log(&u);
        if nil_res > 1e-9 * (1.0 + u.norm()) {
            return Err(LieError::NonUnipotentProduct { residual: nil_res });
        }
        let (coords, res) = self.solver.solve(&log);
        if res > 1e-8 * (1.0 + log.norm()) {
            return Err(LieError::NonUnipotentProduct { residual: res });
        }
        Ok(GroupPoint::from_vecs(coords, h1 + g2.a_vec()))
    }

    /// Left translate of g by exp(t v) to first order along a frame vector
    /// which may mix n and a parts; exact when v is purely in n or a.
    pub fn translate(&self, g: &GroupPoint, v: &DVector<f64>, t: f64) -> Result<GroupPoint> {
        let n = v.rows(0, self.n_dim).into_owned() * t;
        let a = v.rows(self.n_dim, self.a_dim).into_owned() * t;
        self.multiply(g, &GroupPoint::from_vecs(n, a))
    }
}

/// Orthogonal projection from the source solvable model onto the rank-one
/// target, expressed in the source frame.
pub struct SubmersionProjection {
    /// Row i is target frame vector i written in source frame coordinates.
    pub target_rows: DMatrix<f64>,
    /// Square projector on source frame coordinates.
    pub pi_matrix: DMatrix<f64>,
    /// Orthonormal basis of the kernel n(beta) + ker(beta) in source frame
    /// coordinates.
    pub kernel_basis: Vec<DVector<f64>>,
    pub source_n_dim: usize,
    pub source_a_dim: usize,
    pub target_n_dim: usize,
}

/// Builds the projection and certifies that it is an idempotent,
/// self-adjoint Lie algebra homomorphism whose kernel is an ideal.
pub fn build_projection(
    real: &LieAlgebraRealization,
    source: &SolvableGroup,
    target: &SolvableGroup,
) -> Result<SubmersionProjection> {
    let sdim = source.dim();
    let tdim = target.dim();
    let mut target_rows = DMatrix::zeros(tdim, sdim);
    for (i, tv) in target.frame.iter().enumerate() {
        for (j, sv) in source.frame.iter().enumerate() {
            target_rows[(i, j)] = real.inner(tv, sv);
        }
    }
    let pi_matrix = target_rows.transpose() * &target_rows;

    // kernel: orthogonal complement of the target inside the source frame
    let mut kernel_candidates = Vec::new();
    for j in 0..sdim {
        let mut e = DVector::zeros(sdim);
        e[j] = 1.0;
        kernel_candidates.push(&e - &pi_matrix * &e);
    }
    let id = DMatrix::identity(sdim, sdim);
    let kernel_basis = linalg::gram_schmidt(&kernel_candidates, &id, 1e-8);
    if kernel_basis.len() + tdim != sdim {
        return Err(LieError::Numerical(format!(
            "kernel dimension {} does not complement target {}",
            kernel_basis.len(),
            tdim
        )));
    }

    let proj = SubmersionProjection {
        target_rows,
        pi_matrix,
        kernel_basis,
        source_n_dim: source.n_dim,
        source_a_dim: source.a_dim,
        target_n_dim: target.n_dim,
    };

    // idempotent and self-adjoint in the orthonormal frame
    let idem = (&proj.pi_matrix * &proj.pi_matrix - &proj.pi_matrix).norm();
    let selfadj = (&proj.pi_matrix - proj.pi_matrix.transpose()).norm();
    if idem > 1e-10 || selfadj > 1e-10 {
        return Err(LieError::Numerical(format!(
            "projection fails idempotence ({idem:.3e}) or symmetry ({selfadj:.3e})"
        )));
    }

    // the kernel must be an ideal of n + a
    let res = proj.kernel_ideal_residual(source);
    if res > 1e-10 {
        return Err(LieError::IdealCheckFailure { residual: res });
    }
    // and the projection a Lie algebra homomorphism
    let res = proj.homomorphism_residual(source);
    if res > 1e-10 {
        return Err(LieError::Numerical(format!(
            "projection is not a Lie algebra homomorphism, residual {res:.3e}"
        )));
    }
    Ok(proj)
}

impl SubmersionProjection {
    fn bracket_frame(&self, source: &SolvableGroup, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let dim = source.dim();
        let mut out = DVector::zeros(dim);
        for i in 0..dim {
            if x[i] == 0.0 {
                continue;
            }
            out += &source.structure[i] * y * x[i];
        }
        out
    }

    /// Worst residual of [ker, n + a] inside ker.
    pub fn kernel_ideal_residual(&self, source: &SolvableGroup) -> f64 {
        let dim = source.dim();
        let id = DMatrix::identity(dim, dim);
        let mut worst: f64 = 0.0;
        for k in &self.kernel_basis {
            for j in 0..dim {
                let mut e = DVector::zeros(dim);
                e[j] = 1.0;
                let b = self.bracket_frame(source, k, &e);
                worst =
                    worst.max(linalg::residual_outside_span(&b, &self.kernel_basis, &id));
            }
        }
        worst
    }

    /// Worst residual of pi[X,Y] = [pi X, pi Y] over source frame pairs.
    pub fn homomorphism_residual(&self, source: &SolvableGroup) -> f64 {
        let dim = source.dim();
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            let mut ei = DVector::zeros(dim);
            ei[i] = 1.0;
            let pei = &self.pi_matrix * &ei;
            for j in 0..dim {
                let mut ej = DVector::zeros(dim);
                ej[j] = 1.0;
                let lhs = &self.pi_matrix * self.bracket_frame(source, &ei, &ej);
                let rhs = self.bracket_frame(source, &pei, &(&self.pi_matrix * &ej));
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }

    /// Gram matrix defect of the restriction to the orthogonal complement of
    /// the kernel; exactly the identity for a Riemannian submersion.
    pub fn isometry_residual(&self) -> f64 {
        let gram = &self.target_rows * self.target_rows.transpose();
        (gram - DMatrix::identity(self.target_rows.nrows(), self.target_rows.nrows())).norm()
    }

    /// Projects a source point to the target group: gather the coordinates
    /// of both exponential parts.
    pub fn project_point(&self, g: &GroupPoint) -> GroupPoint {
        let sdim = self.source_n_dim + self.source_a_dim;
        let mut src = DVector::zeros(sdim);
        for i in 0..self.source_n_dim {
            src[i] = g.n[i];
        }
        for i in 0..self.source_a_dim {
            src[self.source_n_dim + i] = g.a[i];
        }
        let t = &self.target_rows * src;
        let tn = t.rows(0, self.target_n_dim).into_owned();
        let ta = t
            .rows(self.target_n_dim, t.len() - self.target_n_dim)
            .into_owned();
        GroupPoint::from_vecs(tn, ta)
    }

    /// Embeds a target point back into the source: the section of the
    /// retraction.
    pub fn embed_point(&self, g: &GroupPoint) -> GroupPoint {
        let tdim = self.target_rows.nrows();
        let mut t = DVector::zeros(tdim);
        for i in 0..self.target_n_dim {
            t[i] = g.n[i];
        }
        for i in 0..(tdim - self.target_n_dim) {
            t[self.target_n_dim + i] = g.a[i];
        }
        let s = self.target_rows.transpose() * t;
        let sn = s.rows(0, self.source_n_dim).into_owned();
        let sa = s.rows(self.source_n_dim, self.source_a_dim).into_owned();
        GroupPoint::from_vecs(sn, sa)
    }
}
