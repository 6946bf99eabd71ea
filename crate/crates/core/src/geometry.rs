//! Left-invariant Riemannian geometry of the solvable models: Levi-Civita
//! connection from the Koszul formula, tension field of the projection,
//! curvature, and the Laplace-Beltrami operator.
//!
//! The frame is the orthonormal basis carried by a `SolvableGroup`, so
//! metric coefficients are trivial and the connection reduces to constants
//! Gamma_{ij}^k = (c_{ij}^k - c_{jk}^i + c_{ki}^j) / 2.

use crate::error::{LieError, Result};
use crate::rankone::{GroupPoint, SolvableGroup, SubmersionProjection};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub struct LeftInvariantGeometry {
    pub dim: usize,
    /// structure[i] column j = frame coordinates of [f_i, f_j].
    pub structure: Vec<DMatrix<f64>>,
    /// gamma[i] column j = frame coordinates of nabla_{f_i} f_j.
    pub gamma: Vec<DMatrix<f64>>,
    /// sum_k nabla_{f_k} f_k, the first-order term of the Laplacian.
    pub trace_vector: DVector<f64>,
}

/// Connection coefficients from the Koszul formula on an orthonormal frame
/// of a solvable subalgebra.
pub fn build_geometry(group: &SolvableGroup) -> Result<LeftInvariantGeometry> {
    let dim = group.dim();
    // structure constants live on the group; closure was checked there, but
    // guard against a frame that is not bracket-closed
    let mut gamma = vec![DMatrix::zeros(dim, dim); dim];
    let c = |i: usize, j: usize, k: usize| group.structure[i][(k, j)];
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                gamma[i][(k, j)] = 0.5 * (c(i, j, k) - c(j, k, i) + c(k, i, j));
            }
        }
    }
    let mut trace_vector = DVector::zeros(dim);
    for k in 0..dim {
        trace_vector += gamma[k].column(k);
    }
    let geom = LeftInvariantGeometry {
        dim,
        structure: group.structure.clone(),
        gamma,
        trace_vector,
    };
    // metric compatibility and the torsion identity are exact consequences
    // of the formula; verify once at build time
    let mc = geom.metric_compatibility_residual();
    let tf = geom.torsion_residual();
    if mc > 1e-12 || tf > 1e-12 {
        return Err(LieError::Numerical(format!(
            "connection fails frame identities: compat {mc:.3e}, torsion {tf:.3e}"
        )));
    }
    Ok(geom)
}

impl LeftInvariantGeometry {
    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim);
        for i in 0..self.dim {
            if x[i] != 0.0 {
                out += &self.structure[i] * y * x[i];
            }
        }
        out
    }

    /// nabla_X Y for left-invariant (constant frame coefficient) fields.
    pub fn nabla(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim);
        for i in 0..self.dim {
            if x[i] != 0.0 {
                out += &self.gamma[i] * y * x[i];
            }
        }
        out
    }

    /// Gamma_{ij}^k + Gamma_{ik}^j = 0 in an orthonormal frame.
    pub fn metric_compatibility_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            let s = &self.gamma[i] + self.gamma[i].transpose();
            worst = worst.max(s.norm());
        }
        worst
    }

    /// Gamma_{ij}^k - Gamma_{ji}^k = c_{ij}^k.
    pub fn torsion_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let lhs = self.gamma[i][(k, j)] - self.gamma[j][(k, i)];
                    worst = worst.max((lhs - self.structure[i][(k, j)]).abs());
                }
            }
        }
        worst
    }

    /// Curvature R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z -
    /// nabla_{[X,Y]} Z on left-invariant fields.
    pub fn curvature(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        z: &DVector<f64>,
    ) -> DVector<f64> {
        self.nabla(x, &self.nabla(y, z)) - self.nabla(y, &self.nabla(x, z))
            - self.nabla(&self.bracket(x, y), z)
    }

    /// Sectional curvature of the plane spanned by X and Y.
    pub fn sectional_curvature(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        let xx = x.dot(x);
        let yy = y.dot(y);
        let xy = x.dot(y);
        let gram_det = xx * yy - xy * xy;
        if gram_det < 1e-12 * (xx * yy).max(1e-300) {
            return Err(LieError::DegeneratePlane { gram_det });
        }
        let r = self.curvature(x, y, y);
        Ok(r.dot(x) / gram_det)
    }

    /// Worst violation of the antisymmetry and pair symmetry of R over the
    /// given probe vectors.
    pub fn curvature_symmetry_residual(&self, probes: &[DVector<f64>]) -> f64 {
        let mut worst: f64 = 0.0;
        for x in probes {
            for y in probes {
                let rxy = self.curvature(x, y, y);
                let ryx = self.curvature(y, x, y);
                worst = worst.max((&rxy + ryx).norm());
                for z in probes {
                    for w in probes {
                        let a = self.curvature(x, y, z).dot(w);
                        let b = self.curvature(z, w, x).dot(y);
                        worst = worst.max((a - b).abs());
                    }
                }
            }
        }
        worst
    }
}

/// Tension data of the projection: <tau, X> = -trace_{ker pi}(ad X) per
/// target frame direction X.
#[derive(Debug, Clone)]
pub struct TensionFieldReport {
    /// Components of the tension field over the target frame.
    pub tau: Vec<f64>,
    /// trace_{ker pi}(ad X) for X running over the target frame.
    pub per_direction_traces: Vec<f64>,
}

impl TensionFieldReport {
    pub fn max_trace(&self) -> f64 {
        self.per_direction_traces
            .iter()
            .fold(0.0f64, |m, t| m.max(t.abs()))
    }
}

/// Exact tension field of the projection: purely algebraic in the structure
/// constants, no finite differences involved.
pub fn tension_field(
    geometry_source: &LeftInvariantGeometry,
    proj: &SubmersionProjection,
) -> TensionFieldReport {
    let mut traces = Vec::new();
    for i in 0..proj.target_rows.nrows() {
        let x = proj.target_rows.row(i).transpose();
        let mut trace = 0.0;
        for k in &proj.kernel_basis {
            trace += geometry_source.bracket(&x, k).dot(k);
        }
        traces.push(trace);
    }
    TensionFieldReport {
        tau: traces.iter().map(|t| -t).collect(),
        per_direction_traces: traces,
    }
}

/// Minimality of the fibres: sum over an orthonormal kernel basis of
/// <nabla_{e_i} e_i, X> for a horizontal X, asserted per direction.
pub fn fiber_minimality_traces(
    geometry_source: &LeftInvariantGeometry,
    proj: &SubmersionProjection,
) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..proj.target_rows.nrows() {
        let x = proj.target_rows.row(i).transpose();
        let mut sum = 0.0;
        for k in &proj.kernel_basis {
            sum += geometry_source.nabla(k, k).dot(&x);
        }
        out.push(sum);
    }
    out
}

/// <nabla_X X, H> for a vertical direction X: the obstruction to the fibre
/// being totally geodesic.
pub fn fiber_second_fundamental(
    geometry: &LeftInvariantGeometry,
    x: &DVector<f64>,
    h: &DVector<f64>,
) -> f64 {
    geometry.nabla(x, x).dot(h)
}

/// Scalar function on group points.
pub type ScalarField<'a> = dyn Fn(&GroupPoint) -> f64 + 'a;
/// Complex-valued function on group points.
pub type ComplexField<'a> = dyn Fn(&GroupPoint) -> Complex64 + 'a;

fn check_value(v: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(LieError::EvaluationFailure(format!(
            "non-finite function value {v}"
        )))
    }
}

fn second_derivative_c(
    group: &SolvableGroup,
    f: &ComplexField,
    g: &GroupPoint,
    dir: usize,
    h: f64,
    f0: Complex64,
) -> Result<Complex64> {
    let mut v = DVector::zeros(group.dim());
    v[dir] = 1.0;
    let plus = check_value(f(&group.translate(g, &v, h)?))?;
    let minus = check_value(f(&group.translate(g, &v, -h)?))?;
    Ok((plus - f0 * 2.0 + minus) / (h * h))
}

fn directional_derivative_c(
    group: &SolvableGroup,
    f: &ComplexField,
    g: &GroupPoint,
    v: &DVector<f64>,
    h: f64,
) -> Result<Complex64> {
    let plus = check_value(f(&group.translate(g, v, h)?))?;
    let minus = check_value(f(&group.translate(g, v, -h)?))?;
    Ok((plus - minus) / (2.0 * h))
}

/// Laplace-Beltrami operator in the left-invariant frame:
/// Delta f = sum_k e_k(e_k f) - (sum_k nabla_{e_k} e_k) f,
/// with central finite differences of step h. `richardson` combines steps
/// h and h/2 for fourth-order accuracy.
pub fn laplacian_c(
    group: &SolvableGroup,
    geometry: &LeftInvariantGeometry,
    f: &ComplexField,
    g: &GroupPoint,
    h: f64,
    richardson: bool,
) -> Result<Complex64> {
    if h < 1e-6 {
        return Err(LieError::StepTooSmall(h));
    }
    let single = |h: f64| -> Result<Complex64> {
        let f0 = check_value(f(g))?;
        let mut total = Complex64::new(0.0, 0.0);
        for k in 0..group.dim() {
            total += second_derivative_c(group, f, g, k, h, f0)?;
        }
        if geometry.trace_vector.norm() > 0.0 {
            total -= directional_derivative_c(group, f, g, &geometry.trace_vector, h)?;
        }
        Ok(total)
    };
    if richardson {
        let coarse = single(h)?;
        let fine = single(h / 2.0)?;
        Ok((fine * 4.0 - coarse) / 3.0)
    } else {
        single(h)
    }
}

pub fn laplacian(
    group: &SolvableGroup,
    geometry: &LeftInvariantGeometry,
    f: &ScalarField,
    g: &GroupPoint,
    h: f64,
    richardson: bool,
) -> Result<f64> {
    let fc = |p: &GroupPoint| Complex64::new(f(p), 0.0);
    Ok(laplacian_c(group, geometry, &fc, g, h, richardson)?.re)
}

/// Frame gradient (e_1 f, ..., e_n f) by central differences.
pub fn frame_gradient_c(
    group: &SolvableGroup,
    f: &ComplexField,
    g: &GroupPoint,
    h: f64,
    richardson: bool,
) -> Result<Vec<Complex64>> {
    if h < 1e-6 {
        return Err(LieError::StepTooSmall(h));
    }
    let mut out = Vec::with_capacity(group.dim());
    for k in 0..group.dim() {
        let mut v = DVector::zeros(group.dim());
        v[k] = 1.0;
        let d = if richardson {
            let coarse = directional_derivative_c(group, f, g, &v, h)?;
            let fine = directional_derivative_c(group, f, g, &v, h / 2.0)?;
            (fine * 4.0 - coarse) / 3.0
        } else {
            directional_derivative_c(group, f, g, &v, h)?
        };
        out.push(d);
    }
    Ok(out)
}

/// The Laplacian restricted to functions of t = beta(log of the abelian
/// part): Delta u(t) = <beta,beta> u'' - drift u', with the drift the
/// weighted sum of root values against beta. Exact, no finite differences.
#[derive(Debug, Clone, Copy)]
pub struct RadialOperator {
    pub beta_norm2: f64,
    pub drift: f64,
}

impl RadialOperator {
    /// Operator of the full solvable model: drift = sum over positive roots
    /// of m_alpha <alpha, beta>.
    pub fn for_source(
        system: &crate::roots::RestrictedRootSystem,
        beta: usize,
    ) -> RadialOperator {
        let mut drift = 0.0;
        for &i in &system.positives {
            drift += system.multiplicities[i] as f64 * system.root_inner(i, beta);
        }
        RadialOperator {
            beta_norm2: system.root_inner(beta, beta),
            drift,
        }
    }

    /// Operator of the rank-one target: drift = (m_beta + 2 m_{2beta})
    /// <beta,beta>.
    pub fn for_target(data: &crate::rankone::RankOneData) -> RadialOperator {
        RadialOperator {
            beta_norm2: data.beta_norm2,
            drift: (data.m_beta as f64 + 2.0 * data.m_two_beta as f64) * data.beta_norm2,
        }
    }

    /// Delta applied to u at t given u' and u''.
    pub fn apply(&self, d1: f64, d2: f64) -> f64 {
        self.beta_norm2 * d2 - self.drift * d1
    }

    /// Delta on polynomial coefficients (coeffs[k] is the t^k coefficient).
    /// The drift term lowers the degree by exactly one, so iterating drives
    /// any polynomial to zero in finitely many steps.
    pub fn apply_poly(&self, coeffs: &[f64]) -> Vec<f64> {
        if coeffs.len() <= 1 {
            return Vec::new();
        }
        let mut out = vec![0.0; coeffs.len() - 1];
        for (k, &c) in coeffs.iter().enumerate() {
            if k >= 2 {
                out[k - 2] += self.beta_norm2 * (k * (k - 1)) as f64 * c;
            }
            if k >= 1 {
                out[k - 1] -= self.drift * k as f64 * c;
            }
        }
        while out.last() == Some(&0.0) {
            out.pop();
        }
        out
    }

    /// Eigenvalue of e^{s t}: <beta,beta> s^2 - drift * s.
    pub fn exp_eigenvalue(&self, s: f64) -> f64 {
        self.beta_norm2 * s * s - self.drift * s
    }
}

/// A twice-differentiable function of one variable with explicit
/// derivatives, for the exact radial oracle.
pub struct RadialFunction<'a> {
    pub f: Box<dyn Fn(f64) -> f64 + 'a>,
    pub d1: Box<dyn Fn(f64) -> f64 + 'a>,
    pub d2: Box<dyn Fn(f64) -> f64 + 'a>,
}

impl<'a> RadialFunction<'a> {
    pub fn exponential(s: f64) -> RadialFunction<'a> {
        RadialFunction {
            f: Box::new(move |t| (s * t).exp()),
            d1: Box::new(move |t| s * (s * t).exp()),
            d2: Box::new(move |t| s * s * (s * t).exp()),
        }
    }

    pub fn monomial(k: u32) -> RadialFunction<'a> {
        RadialFunction {
            f: Box::new(move |t| t.powi(k as i32)),
            d1: Box::new(move |t| {
                if k == 0 {
                    0.0
                } else {
                    k as f64 * t.powi(k as i32 - 1)
                }
            }),
            d2: Box::new(move |t| {
                if k < 2 {
                    0.0
                } else {
                    (k * (k - 1)) as f64 * t.powi(k as i32 - 2)
                }
            }),
        }
    }
}

/// Exact Laplacian of F(g) = u(beta(log_A a)) at radial coordinate t.
pub fn radial_laplacian(op: &RadialOperator, u: &RadialFunction, t: f64) -> f64 {
    op.apply((u.d1)(t), (u.d2)(t))
}

/// beta(log_A a) of a point: pairing of the root with the abelian
/// exponential coordinate. For the source model this is the dot product of
/// beta's coordinates with the a-part; the target has a single a-direction
/// scaled by |H_beta|.
pub fn radial_coordinate(beta_coords: &DVector<f64>, g: &GroupPoint) -> f64 {
    beta_coords.dot(&g.a_vec())
}
