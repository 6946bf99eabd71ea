//! Verification suites and the machine-readable report they produce.
//!
//! Every check is one section with a residual and the tolerance it is held
//! to; a report passes when every section does. Sampling is seeded and the
//! section order is fixed, so identical flags and seed give identical
//! reports modulo the timestamps.

use crate::analysis::{AlgebraModel, RankOneBundle};
use crate::error::Result;
use crate::geometry::{
    fiber_minimality_traces, fiber_second_fundamental, laplacian, radial_coordinate,
    radial_laplacian, tension_field, RadialFunction, RadialOperator,
};
use crate::morphisms::{
    build_phi, check_eigenfunction_pullback, check_harmonic_morphism, check_intertwining,
    check_r_harmonic_pullback, PhiVariant,
};
use crate::rankone::{GroupPoint, SolvableGroup};
use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const REPORT_SCHEMA: &str = "lieharm-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Structure,
    Lemma1,
    Submersion,
    Morphism,
    Functions,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "all" => Some(Suite::All),
            "structure" => Some(Suite::Structure),
            "lemma1" => Some(Suite::Lemma1),
            "submersion" => Some(Suite::Submersion),
            "morphism" => Some(Suite::Morphism),
            "functions" => Some(Suite::Functions),
            _ => None,
        }
    }

    fn includes(&self, other: Suite) -> bool {
        *self == Suite::All || *self == other
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyParams {
    pub samples: usize,
    pub step: f64,
    pub tol: f64,
    pub seed: u64,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            samples: 100,
            step: 1e-3,
            tol: 1e-5,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSection {
    pub check_name: String,
    pub status: String,
    pub residual: f64,
    pub tolerance: f64,
    pub details: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timestamps {
    pub started: String,
    pub finished: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema: String,
    pub algebra_id: String,
    /// None when every simple root is covered in one report.
    pub beta_index: Option<usize>,
    pub suite: String,
    pub sections: Vec<CheckSection>,
    pub overall: String,
    pub seed: u64,
    pub timestamps: Timestamps,
    pub tool_version: String,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.overall == "pass"
    }
}

struct SectionBuilder {
    sections: Vec<CheckSection>,
}

impl SectionBuilder {
    fn new() -> Self {
        SectionBuilder {
            sections: Vec::new(),
        }
    }

    fn residual(&mut self, name: &str, residual: f64, tolerance: f64, details: String) {
        let status = if residual <= tolerance { "pass" } else { "fail" };
        self.sections.push(CheckSection {
            check_name: name.to_string(),
            status: status.to_string(),
            residual,
            tolerance,
            details,
        });
    }

    fn boolean(&mut self, name: &str, ok: bool, details: String) {
        self.residual(name, if ok { 0.0 } else { 1.0 }, 0.5, details);
    }
}

/// Seeded sample of group points with coordinates uniform in [-2, 2].
pub fn sample_points(group: &SolvableGroup, count: usize, seed: u64) -> Vec<GroupPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n: Vec<f64> = (0..group.n_dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let a: Vec<f64> = (0..group.a_dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
            group
                .point(n, a)
                .expect("sampled nilpotent coordinates are valid")
        })
        .collect()
}

/// Runs the selected suite for an algebra; `beta_index = None` covers every
/// simple root.
pub fn run_verification(
    model: &AlgebraModel,
    suite: Suite,
    beta_index: Option<usize>,
    params: &VerifyParams,
) -> Result<VerificationReport> {
    let started = chrono::Utc::now().to_rfc3339();
    let mut b = SectionBuilder::new();

    if suite.includes(Suite::Structure) {
        structure_sections(model, &mut b)?;
    }

    let betas: Vec<usize> = match beta_index {
        Some(i) => vec![i],
        None => (0..model.simple_count()).collect(),
    };
    for &bi in &betas {
        let tag = format!("[beta={bi}]");
        if suite.includes(Suite::Lemma1) {
            lemma1_sections(model, bi, &tag, &mut b)?;
        }
        if suite.includes(Suite::Submersion)
            || suite.includes(Suite::Morphism)
            || suite.includes(Suite::Functions)
        {
            let bundle = model.rank_one_bundle(bi)?;
            if suite.includes(Suite::Submersion) {
                submersion_sections(model, &bundle, &tag, params, &mut b)?;
            }
            if suite.includes(Suite::Morphism) {
                morphism_sections(model, &bundle, &tag, params, &mut b)?;
            }
            if suite.includes(Suite::Functions) {
                functions_sections(model, &bundle, &tag, params, &mut b)?;
            }
        }
    }

    let overall = if b.sections.iter().all(|s| s.status == "pass") {
        "pass"
    } else {
        "fail"
    };
    Ok(VerificationReport {
        schema: REPORT_SCHEMA.to_string(),
        algebra_id: model.spec.id.clone(),
        beta_index,
        suite: format!("{suite:?}").to_lowercase(),
        sections: b.sections,
        overall: overall.to_string(),
        seed: params.seed,
        timestamps: Timestamps {
            started,
            finished: chrono::Utc::now().to_rfc3339(),
        },
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

fn structure_sections(model: &AlgebraModel, b: &mut SectionBuilder) -> Result<()> {
    let real = &model.realization;
    let cartan = &model.cartan;
    let system = &model.roots;

    b.residual(
        "structure.bracket_closure",
        real.closure_residual,
        1e-12,
        format!("dim {}", real.dim),
    );
    b.residual("structure.jacobi", real.jacobi_residual(), 1e-10, String::new());
    b.residual(
        "structure.theta_involution",
        real.theta_residual,
        1e-12,
        "theta = -X^T restricted to the realization".into(),
    );
    b.residual(
        "structure.theta_automorphism",
        real.theta_automorphism_residual(),
        1e-12,
        String::new(),
    );
    b.residual(
        "structure.b_ad_invariant",
        real.b_ad_invariance_residual(),
        1e-10,
        String::new(),
    );

    // definiteness of B: negative on k, positive on p
    let mut definiteness_violation = 0.0f64;
    for k in &cartan.k_basis {
        definiteness_violation =
            definiteness_violation.max(crate::linalg::ip(&real.b_form, k, k));
    }
    for p in &cartan.p_basis {
        definiteness_violation =
            definiteness_violation.max(-crate::linalg::ip(&real.b_form, p, p));
    }
    b.residual(
        "structure.b_definiteness",
        definiteness_violation.max(0.0),
        1e-12,
        "B < 0 on k, B > 0 on p".into(),
    );

    b.residual(
        "structure.cartan_inclusions",
        cartan.inclusion_residual(real),
        1e-10,
        format!("dim k = {}, dim p = {}", cartan.dim_k(), cartan.dim_p()),
    );
    b.boolean(
        "structure.cartan_dimension",
        cartan.dim_k() + cartan.dim_p() == real.dim,
        format!("{} + {} = {}", cartan.dim_k(), cartan.dim_p(), real.dim),
    );
    let adj = real
        .ad_adjointness_residual(&cartan.p_basis, 1.0)
        .max(real.ad_adjointness_residual(&cartan.k_basis, -1.0));
    b.residual("structure.ad_adjointness", adj, 1e-10, String::new());

    // a is abelian and maximal
    let mut abelian_res = 0.0f64;
    for x in &model.abelian.basis {
        for y in &model.abelian.basis {
            abelian_res = abelian_res.max(real.bracket(x, y)?.norm());
        }
    }
    b.residual("structure.a_abelian", abelian_res, 1e-12, String::new());
    // maximality was enforced at construction; re-express as the dimension
    // of the p-part of g_0
    let p_parts: Vec<DVector<f64>> = system
        .g0_basis
        .iter()
        .map(|v| (v - &real.theta * v) * 0.5)
        .collect();
    let p_dim = crate::linalg::gram_schmidt(&p_parts, &real.gram, 1e-8).len();
    b.boolean(
        "structure.a_maximality",
        p_dim == system.rank,
        format!("centralizer p-part dim {} vs rank {}", p_dim, system.rank),
    );

    b.residual(
        "structure.root_decomposition_orthogonality",
        system.decomposition_residual(real),
        1e-10,
        format!("{} roots", system.roots.len()),
    );
    b.residual(
        "structure.root_bracket_inclusions",
        system.bracket_inclusion_residual(real),
        1e-10,
        String::new(),
    );
    b.residual(
        "structure.root_dual_pairing",
        system.dual_pairing_residual(real),
        1e-10,
        String::new(),
    );

    let mut symmetric = true;
    for i in 0..system.roots.len() {
        match system.find_root(&(-&system.roots[i].coords)) {
            Some(j) => symmetric &= system.multiplicities[i] == system.multiplicities[j],
            None => symmetric = false,
        }
    }
    b.boolean("structure.root_symmetry", symmetric, String::new());

    let decompose_ok = system
        .positives
        .iter()
        .all(|&i| system.decompose_in_simples(i).is_ok());
    b.boolean(
        "structure.positives_decompose",
        decompose_ok,
        format!(
            "{} positive roots over {} simples",
            system.positives.len(),
            system.simples.len()
        ),
    );

    let min_abs = system
        .roots
        .iter()
        .map(|r| r.hreg_value.abs())
        .fold(f64::INFINITY, f64::min);
    b.boolean(
        "structure.genericity",
        min_abs > 1e-9,
        format!("min |alpha(H_reg)| = {min_abs:.3e}"),
    );
    Ok(())
}

fn lemma1_sections(
    model: &AlgebraModel,
    beta_index: usize,
    tag: &str,
    b: &mut SectionBuilder,
) -> Result<()> {
    let beta = model.roots.simples[beta_index];
    let checks =
        crate::roots::simple_root_identities(&model.realization, &model.roots, beta)?;
    b.residual(
        &format!("lemma1.ideal{tag}"),
        checks.ideal_residual,
        1e-10,
        "[n(beta), n] inside n(beta)".into(),
    );
    b.residual(
        &format!("lemma1.weighted_sum{tag}"),
        checks.weighted_sum.abs(),
        1e-10,
        "sum of m_alpha <alpha,beta> over the remaining positives".into(),
    );
    b.boolean(
        &format!("lemma1.parity{tag}"),
        checks.parity_ok,
        format!("m_beta = {}, m_2beta = {}", checks.m_beta, checks.m_two_beta),
    );
    b.boolean(
        &format!("lemma1.reflection_permutation{tag}"),
        checks.permutation_ok,
        String::new(),
    );
    b.residual(
        &format!("lemma1.reflection_fixed_sum{tag}"),
        checks.fixed_sum_residual,
        1e-10,
        String::new(),
    );
    Ok(())
}

fn submersion_sections(
    model: &AlgebraModel,
    bundle: &RankOneBundle,
    tag: &str,
    params: &VerifyParams,
    b: &mut SectionBuilder,
) -> Result<()> {
    let proj = &bundle.projection;
    let source = &bundle.source;
    let target = &bundle.target;

    let idem = (&proj.pi_matrix * &proj.pi_matrix - &proj.pi_matrix).norm();
    b.residual(&format!("submersion.idempotent{tag}"), idem, 1e-12, String::new());
    let selfadj = (&proj.pi_matrix - proj.pi_matrix.transpose()).norm();
    b.residual(
        &format!("submersion.self_adjoint{tag}"),
        selfadj,
        1e-12,
        String::new(),
    );
    b.residual(
        &format!("submersion.kernel_ideal{tag}"),
        proj.kernel_ideal_residual(source),
        1e-10,
        format!("kernel dimension {}", proj.kernel_basis.len()),
    );
    b.residual(
        &format!("submersion.algebra_homomorphism{tag}"),
        proj.homomorphism_residual(source),
        1e-10,
        String::new(),
    );
    b.residual(
        &format!("submersion.isometry_gram{tag}"),
        proj.isometry_residual(),
        1e-12,
        "pi restricted to the horizontal space".into(),
    );

    // sampled group-level homomorphism and retraction
    let pts = sample_points(source, params.samples.min(50), params.seed);
    let mut hom_res = 0.0f64;
    for pair in pts.chunks(2) {
        if pair.len() < 2 {
            break;
        }
        let lhs = proj.project_point(&source.multiply(&pair[0], &pair[1])?);
        let rhs = target.multiply(
            &proj.project_point(&pair[0]),
            &proj.project_point(&pair[1]),
        )?;
        hom_res = hom_res.max((lhs.n_vec() - rhs.n_vec()).norm());
        hom_res = hom_res.max((lhs.a_vec() - rhs.a_vec()).norm());
    }
    b.residual(
        &format!("submersion.group_homomorphism{tag}"),
        hom_res,
        1e-9,
        format!("{} sampled pairs", pts.len() / 2),
    );

    let tpts = sample_points(target, 10, params.seed.wrapping_add(1));
    let mut retract_res = 0.0f64;
    for t in &tpts {
        let round = proj.project_point(&proj.embed_point(t));
        retract_res = retract_res.max((round.n_vec() - t.n_vec()).norm());
        retract_res = retract_res.max((round.a_vec() - t.a_vec()).norm());
    }
    b.residual(
        &format!("submersion.retraction{tag}"),
        retract_res,
        1e-12,
        String::new(),
    );

    // exact harmonicity: every per-direction trace vanishes
    let report = tension_field(&bundle.source_geometry, proj);
    b.residual(
        &format!("submersion.tension_traces{tag}"),
        report.max_trace(),
        1e-10,
        format!("{} target directions, exact", report.per_direction_traces.len()),
    );
    let min_res = fiber_minimality_traces(&bundle.source_geometry, proj)
        .iter()
        .fold(0.0f64, |m, t| m.max(t.abs()));
    b.residual(
        &format!("submersion.fiber_minimality{tag}"),
        min_res,
        1e-10,
        String::new(),
    );

    // non-totally-geodesic fibres: <nabla_X X, H_beta> = <alpha,beta><X,X>
    let beta = bundle.data.beta;
    let mut h_frame = DVector::zeros(source.dim());
    for (i, v) in source.frame.iter().enumerate() {
        h_frame[i] = model.realization.inner(&bundle.data.h_beta, v);
    }
    let mut worst = 0.0f64;
    let mut max_value = 0.0f64;
    for &alpha in &model.roots.positives_excluding(beta) {
        for av in &model.roots.root_spaces[alpha] {
            let mut x = DVector::zeros(source.dim());
            for (i, v) in source.frame.iter().enumerate() {
                x[i] = model.realization.inner(av, v);
            }
            let got = fiber_second_fundamental(&bundle.source_geometry, &x, &h_frame);
            let expect = model.roots.root_inner(alpha, beta);
            worst = worst.max((got - expect).abs());
            max_value = max_value.max(got.abs());
        }
    }
    b.residual(
        &format!("submersion.fiber_second_fundamental{tag}"),
        worst,
        1e-10,
        format!("largest |<nabla_X X, H_beta>| = {max_value:.6}"),
    );
    if model.roots.rank >= 2 {
        let has_nonzero = model
            .roots
            .positives_excluding(beta)
            .iter()
            .any(|&a| model.roots.root_inner(a, beta).abs() > 1e-10);
        if has_nonzero {
            b.boolean(
                &format!("submersion.fibers_not_totally_geodesic{tag}"),
                max_value > 1e-10,
                "some <alpha,beta> != 0 forces a nonzero second fundamental form".into(),
            );
        }
    }

    b.residual(
        &format!("submersion.curvature_symmetries{tag}"),
        bundle
            .target_geometry
            .curvature_symmetry_residual(&plane_probes(target.dim(), params.seed)),
        1e-10,
        String::new(),
    );

    // target curvature
    let c = bundle.data.beta_norm2;
    let (min_k, max_k) = sampled_curvature_range(bundle, 200, params.seed)?;
    if bundle.data.m_two_beta == 0 {
        let dev = (min_k + c).abs().max((max_k + c).abs());
        b.residual(
            &format!("submersion.curvature_constant{tag}"),
            dev,
            1e-8,
            format!("sampled K in [{min_k:.9}, {max_k:.9}], -<beta,beta> = {:.9}", -c),
        );
    } else {
        let in_band = min_k >= -c - 1e-8 && max_k <= -c / 4.0 + 1e-8;
        let min_close = (min_k + c).abs() <= 0.02 * c;
        b.boolean(
            &format!("submersion.curvature_pinching{tag}"),
            in_band && min_close,
            format!(
                "sampled K in [{min_k:.9}, {max_k:.9}]; required [-<b,b>, -<b,b>/4] = [{:.9}, {:.9}] with min within 2% of {:.9}",
                -c,
                -c / 4.0,
                -c
            ),
        );
    }
    Ok(())
}

fn plane_probes(dim: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(17));
    (0..4)
        .map(|_| DVector::from_iterator(dim, (0..dim).map(|_| rng.gen_range(-1.0..1.0))))
        .collect()
}

fn sampled_curvature_range(
    bundle: &RankOneBundle,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let dim = bundle.target.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(23));
    let mut min_k = f64::INFINITY;
    let mut max_k = f64::NEG_INFINITY;
    // axis planes first so the extremes of the pinch band are represented
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut x = DVector::zeros(dim);
            x[i] = 1.0;
            let mut y = DVector::zeros(dim);
            y[j] = 1.0;
            let k = bundle.target_geometry.sectional_curvature(&x, &y)?;
            min_k = min_k.min(k);
            max_k = max_k.max(k);
        }
    }
    let mut count = 0usize;
    while count < samples {
        let x = DVector::from_iterator(dim, (0..dim).map(|_| rng.gen_range(-1.0..1.0)));
        let y = DVector::from_iterator(dim, (0..dim).map(|_| rng.gen_range(-1.0..1.0)));
        match bundle.target_geometry.sectional_curvature(&x, &y) {
            Ok(k) => {
                min_k = min_k.min(k);
                max_k = max_k.max(k);
                count += 1;
            }
            Err(_) => continue,
        }
    }
    Ok((min_k, max_k))
}

fn morphism_sections(
    model: &AlgebraModel,
    bundle: &RankOneBundle,
    tag: &str,
    params: &VerifyParams,
    b: &mut SectionBuilder,
) -> Result<()> {
    let source = &bundle.source;
    let pts = sample_points(source, params.samples, params.seed);

    let variants: Vec<(PhiVariant, &str)> = if bundle.data.m_beta == 1 {
        vec![(PhiVariant::MultOne, "mult_one")]
    } else {
        vec![(PhiVariant::Isotropic, "isotropic")]
    };

    for (variant, vname) in variants {
        let phi = build_phi(&model.roots, &bundle.data, source, &model.realization, variant)?;
        b.residual(
            &format!("morphism.phi_normalization.{vname}{tag}"),
            phi.normalization_residual,
            1e-12,
            String::new(),
        );
        let field = phi.as_field();
        let report = check_harmonic_morphism(
            source,
            &bundle.source_geometry,
            &field,
            &pts,
            params.step,
            params.tol,
        )?;
        b.residual(
            &format!("morphism.phi_laplacian.{vname}{tag}"),
            report.max_laplacian,
            params.tol,
            format!("{} points, Richardson step {}", pts.len(), params.step),
        );
        b.residual(
            &format!("morphism.phi_conformality.{vname}{tag}"),
            report.max_conformality,
            params.tol,
            String::new(),
        );
        b.boolean(
            &format!("morphism.phi_nonconstant.{vname}{tag}"),
            report.separation > 0.1,
            format!("max separation {:.6}", report.separation),
        );

        // holomorphic post-composition keeps the residuals small
        let sub = &pts[..pts.len().min(30)];
        let square = |g: &GroupPoint| {
            let v = phi.eval(g);
            v * v
        };
        let rep2 = check_harmonic_morphism(
            source,
            &bundle.source_geometry,
            &square,
            sub,
            params.step,
            1e-4,
        )?;
        let exp_i = |g: &GroupPoint| (Complex64::i() * phi.eval(g)).exp();
        let rep3 = check_harmonic_morphism(
            source,
            &bundle.source_geometry,
            &exp_i,
            sub,
            params.step,
            1e-4,
        )?;
        b.residual(
            &format!("morphism.holomorphic_composition.{vname}{tag}"),
            rep2.max_laplacian
                .max(rep2.max_conformality)
                .max(rep3.max_laplacian)
                .max(rep3.max_conformality),
            1e-4,
            "phi^2 and exp(i phi)".into(),
        );
    }

    // Laplacian intertwining for the three standard test functions
    let ipts = sample_points(source, params.samples.min(50), params.seed.wrapping_add(2));
    let scale = bundle.data.h_beta_norm;
    let linear = |g: &GroupPoint| Complex64::new(g.n[0], 0.0);
    let square = move |g: &GroupPoint| Complex64::new((scale * g.a[0]).powi(2), 0.0);
    let exp_half = move |g: &GroupPoint| Complex64::new((scale * g.a[0] / 2.0).exp(), 0.0);
    for (name, f) in [
        ("linear", &linear as &dyn Fn(&GroupPoint) -> Complex64),
        ("t2", &square),
        ("exp_half", &exp_half),
    ] {
        let res = check_intertwining(
            &bundle.projection,
            source,
            &bundle.source_geometry,
            &bundle.target,
            &bundle.target_geometry,
            f,
            &ipts,
            params.step,
        )?;
        b.residual(
            &format!("morphism.intertwining_{name}{tag}"),
            res,
            params.tol,
            format!("{} points", ipts.len()),
        );
    }
    Ok(())
}

fn functions_sections(
    model: &AlgebraModel,
    bundle: &RankOneBundle,
    tag: &str,
    params: &VerifyParams,
    b: &mut SectionBuilder,
) -> Result<()> {
    let source = &bundle.source;
    let pts = sample_points(source, params.samples.min(25), params.seed.wrapping_add(3));

    // eigenfunction pullback at the zero-eigenvalue exponent
    let s = bundle.data.m_beta as f64 + 2.0 * bundle.data.m_two_beta as f64;
    let report = check_eigenfunction_pullback(
        &bundle.data,
        &bundle.projection,
        source,
        &bundle.source_geometry,
        s,
        &pts,
        params.step,
    )?;
    b.residual(
        &format!("functions.eigen_harmonic{tag}"),
        report.max_rel_residual_f,
        params.tol,
        format!("s = {s}, lambda = {:.3e}", report.lambda),
    );
    b.residual(
        &format!("functions.eigen_square{tag}"),
        report.max_rel_residual_f2,
        params.tol,
        format!("mu = {:.9}", report.mu),
    );

    // radial consistency of the finite-difference Laplacian
    let op = RadialOperator::for_source(&model.roots, bundle.data.beta);
    let coords = model.roots.roots[bundle.data.beta].coords.clone();
    let radials = [
        ("t", RadialFunction::monomial(1)),
        ("t2", RadialFunction::monomial(2)),
        ("exp_half", RadialFunction::exponential(0.5)),
    ];
    let rpts = sample_points(source, 50, params.seed.wrapping_add(4));
    let mut worst = 0.0f64;
    for g in &rpts {
        let t = radial_coordinate(&coords, g);
        for (_, u) in &radials {
            let cl = coords.clone();
            let field = |p: &GroupPoint| (u.f)(radial_coordinate(&cl, p));
            let fd = laplacian(source, &bundle.source_geometry, &field, g, params.step, true)?;
            worst = worst.max((fd - radial_laplacian(&op, u, t)).abs());
        }
    }
    b.residual(
        &format!("functions.radial_consistency{tag}"),
        worst,
        1e-5,
        "u in {t, t^2, exp(t/2)} at 50 points".into(),
    );

    // proper r-harmonic pullbacks: exact mode r = 1..6
    for r in 1..=6u32 {
        let rep = check_r_harmonic_pullback(
            &model.roots,
            &bundle.data,
            &bundle.projection,
            source,
            &bundle.source_geometry,
            r,
            &[],
            params.step,
        )?;
        let ok = rep.exact_zero_after_r
            && rep.penultimate_nonzero.abs() > 1e-12
            && rep.pullback_commutation_residual < 1e-10;
        b.boolean(
            &format!("functions.rharmonic_exact_r{r}{tag}"),
            ok,
            format!(
                "penultimate constant {:.6e}, commutation residual {:.3e}",
                rep.penultimate_nonzero, rep.pullback_commutation_residual
            ),
        );
    }
    // numerical cross-check for r <= 2 at 20 points
    let npts = sample_points(source, 20, params.seed.wrapping_add(5));
    for r in 1..=2u32 {
        let rep = check_r_harmonic_pullback(
            &model.roots,
            &bundle.data,
            &bundle.projection,
            source,
            &bundle.source_geometry,
            r,
            &npts,
            params.step,
        )?;
        let worst = rep
            .numerical_residuals
            .iter()
            .fold(0.0f64, |m, r| m.max(*r));
        b.residual(
            &format!("functions.rharmonic_numeric_r{r}{tag}"),
            worst,
            1e-4,
            format!("{} points", npts.len()),
        );
    }

    // geometry.apply_poly against the explicit monomial formula, pinned here
    // so the functions suite carries its own oracle consistency check
    let top = RadialOperator::for_target(&bundle.data);
    let k = 3usize;
    let mut coeffs = vec![0.0; k + 1];
    coeffs[k] = 1.0;
    let out = top.apply_poly(&coeffs);
    let c = top.drift / top.beta_norm2;
    let expect_km1 = -top.beta_norm2 * c * k as f64;
    let expect_km2 = top.beta_norm2 * (k * (k - 1)) as f64;
    let res = (out.get(k - 1).copied().unwrap_or(0.0) - expect_km1)
        .abs()
        .max((out.get(k - 2).copied().unwrap_or(0.0) - expect_km2).abs());
    b.residual(
        &format!("functions.radial_monomial_formula{tag}"),
        res,
        1e-12,
        "Delta t^k = <b,b>(k(k-1) t^(k-2) - (m+2m') k t^(k-1))".into(),
    );
    Ok(())
}

/// Structured summary for the analyze command.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeSummary {
    pub algebra_id: String,
    pub family: String,
    pub dim: usize,
    pub rank: usize,
    pub dim_k: usize,
    pub dim_p: usize,
    pub positive_roots: Vec<PositiveRootSummary>,
    pub simple_indices: Vec<usize>,
    pub rank_one: Vec<RankOneSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PositiveRootSummary {
    pub coords: Vec<f64>,
    pub multiplicity: usize,
    pub height: i64,
    pub simple: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RankOneSummary {
    pub beta_index: usize,
    pub m_beta: usize,
    pub m_two_beta: usize,
    pub dim_m_beta: usize,
    pub hyperbolic_type: String,
    pub beta_norm2: f64,
}

pub fn analyze(model: &AlgebraModel) -> Result<AnalyzeSummary> {
    let mut positive_roots = Vec::new();
    for &i in &model.roots.positives {
        positive_roots.push(PositiveRootSummary {
            coords: model.roots.roots[i].coords.as_slice().to_vec(),
            multiplicity: model.roots.multiplicities[i],
            height: model.roots.height(i)?,
            simple: model.roots.is_simple(i),
        });
    }
    let mut rank_one = Vec::new();
    for bi in 0..model.simple_count() {
        let beta = model.roots.simples[bi];
        let data = crate::rankone::build_rank_one(&model.realization, &model.roots, beta)?;
        rank_one.push(RankOneSummary {
            beta_index: bi,
            m_beta: data.m_beta,
            m_two_beta: data.m_two_beta,
            dim_m_beta: data.dim_m_beta,
            hyperbolic_type: data.hyperbolic_type().to_string(),
            beta_norm2: data.beta_norm2,
        });
    }
    Ok(AnalyzeSummary {
        algebra_id: model.spec.id.clone(),
        family: model.spec.family.to_string(),
        dim: model.realization.dim,
        rank: model.rank(),
        dim_k: model.cartan.dim_k(),
        dim_p: model.cartan.dim_p(),
        positive_roots,
        simple_indices: (0..model.simple_count()).collect(),
        rank_one,
    })
}
