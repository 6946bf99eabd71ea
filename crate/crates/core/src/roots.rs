//! Restricted root systems: maximal abelian subspaces, simultaneous
//! eigendecomposition of ad(a), multiplicities, positivity, simple roots,
//! reflections and the identities attached to a simple root.
//!
//! Roots are stored by their values on a fixed orthonormal basis of the
//! maximal abelian subspace a, so the dual pairing on a* is the plain dot
//! product. Values are additionally snapped to small rationals (denominator
//! at most 48) when within 1e-6, keeping both the raw numerical value and
//! the snapped audit value.

use crate::algebra_core::{CartanDecomposition, LieAlgebraRealization};
use crate::catalog::{self, AlgebraSpec};
use crate::error::{LieError, Result};
use crate::linalg;
use nalgebra::{DMatrix, DVector};

/// Eigenvalue clustering tolerance for ad(H_reg).
pub const CLUSTER_TOL: f64 = 1e-8;
/// Positivity threshold against the regular element.
pub const POSITIVITY_TOL: f64 = 1e-9;
/// Tolerance for matching root coordinate vectors.
pub const ROOT_MATCH_TOL: f64 = 1e-6;

pub struct MaximalAbelian {
    /// Orthonormal basis of a inside p.
    pub basis: Vec<DVector<f64>>,
    pub rank: usize,
}

/// Builds a maximal abelian subspace of p. Families with a standard choice
/// use it; otherwise a deterministic greedy construction picks commuting
/// directions from the orthonormal p-basis until the centralizer in p
/// stabilizes.
pub fn maximal_abelian(
    real: &LieAlgebraRealization,
    cartan: &CartanDecomposition,
    spec: &AlgebraSpec,
) -> Result<MaximalAbelian> {
    let candidates: Vec<DVector<f64>> = match catalog::canonical_a_matrices(spec) {
        Some(mats) => mats
            .iter()
            .map(|m| real.coords_of(m))
            .collect::<Result<_>>()?,
        None => greedy_abelian(real, cartan),
    };
    let basis = linalg::gram_schmidt(&candidates, &real.gram, 1e-10);
    let rank = basis.len();

    for x in &basis {
        for y in &basis {
            let b = real.bracket(x, y)?;
            if b.norm() > 1e-12 {
                return Err(LieError::Numerical(format!(
                    "abelian candidate fails [a,a]=0, residual {:.3e}",
                    b.norm()
                )));
            }
        }
    }

    // maximality: the centralizer of a inside p must be a itself
    let cdim = centralizer_in_p(real, cartan, &basis).len();
    if cdim != rank {
        return Err(LieError::NonMaximalA {
            centralizer_dim: cdim,
            rank,
        });
    }
    Ok(MaximalAbelian { basis, rank })
}

fn centralizer_in_p(
    real: &LieAlgebraRealization,
    cartan: &CartanDecomposition,
    a_basis: &[DVector<f64>],
) -> Vec<DVector<f64>> {
    // solve [H_i, sum c_j p_j] = 0 for all i over the p-basis coefficients
    let p = &cartan.p_basis;
    let rows = real.dim * a_basis.len();
    let mut sys = DMatrix::zeros(rows, p.len());
    for (i, h) in a_basis.iter().enumerate() {
        let ad_h = real.ad(h);
        for (j, pj) in p.iter().enumerate() {
            sys.view_mut((i * real.dim, j), (real.dim, 1))
                .copy_from(&(&ad_h * pj));
        }
    }
    linalg::null_space(&sys, 1e-9)
        .iter()
        .map(|c| {
            let mut v = DVector::zeros(real.dim);
            for (j, pj) in p.iter().enumerate() {
                v += pj * c[j];
            }
            v
        })
        .collect()
}

fn greedy_abelian(
    real: &LieAlgebraRealization,
    cartan: &CartanDecomposition,
) -> Vec<DVector<f64>> {
    let mut chosen: Vec<DVector<f64>> = Vec::new();
    let mut centralizer: Vec<DVector<f64>> = cartan.p_basis.clone();
    loop {
        // first centralizer direction independent of what we already have
        let next = centralizer.iter().find_map(|v| {
            let mut w = v.clone();
            for b in &chosen {
                let c = linalg::ip(&real.gram, &w, b);
                w -= b * c;
            }
            let n = linalg::norm(&real.gram, &w);
            (n > 1e-8).then(|| w / n)
        });
        let Some(v) = next else { break };
        chosen.push(v);
        centralizer = centralizer_in_p(real, cartan, &chosen);
    }
    chosen
}

#[derive(Debug, Clone)]
pub struct RestrictedRoot {
    /// Values (alpha(H_1), ..., alpha(H_rank)) on the orthonormal a-basis.
    pub coords: DVector<f64>,
    /// Per-coordinate rational snap (denominator <= 48) when within 1e-6.
    pub snapped: Vec<Option<(i64, i64)>>,
    /// Dual vector in ambient algebra coordinates: alpha(H) = <H_alpha, H>.
    pub h_alpha: DVector<f64>,
    /// Value on the regular element used for positivity.
    pub hreg_value: f64,
}

pub struct RestrictedRootSystem {
    pub rank: usize,
    /// The orthonormal a-basis the root coordinates refer to.
    pub a_basis: Vec<DVector<f64>>,
    pub roots: Vec<RestrictedRoot>,
    /// Orthonormal basis of each root space, parallel to `roots`.
    pub root_spaces: Vec<Vec<DVector<f64>>>,
    pub multiplicities: Vec<usize>,
    /// Orthonormal basis of the centralizer g_0 = m + a.
    pub g0_basis: Vec<DVector<f64>>,
    /// Indices of positive roots, sorted by value on the regular element.
    pub positives: Vec<usize>,
    /// Indices of the simple roots among the positives, same sort order.
    pub simples: Vec<usize>,
}

/// Simultaneous eigendecomposition of ad(H), H in a, by clustering the
/// spectrum of ad(H_reg) for the weighted regular element
/// H_reg = sum_i 10^(rank-i) H_i and refining coordinates with Rayleigh
/// quotients along each a-direction.
pub fn extract_roots(
    real: &LieAlgebraRealization,
    cartan: &CartanDecomposition,
    abelian: &MaximalAbelian,
) -> Result<RestrictedRootSystem> {
    let dim = real.dim;
    let rank = abelian.rank;

    for h in &abelian.basis {
        let res = linalg::residual_outside_span(h, &cartan.p_basis, &real.gram);
        if res > 1e-10 {
            return Err(LieError::Numerical(format!(
                "a is not contained in p, residual {res:.3e}"
            )));
        }
    }

    // orthonormal coordinate frame for g so ad(H) becomes a symmetric matrix
    let identity_basis: Vec<DVector<f64>> =
        (0..dim).map(|i| real.basis_vector(i)).collect();
    let onb = linalg::gram_schmidt(&identity_basis, &real.gram, 1e-12);
    if onb.len() != dim {
        return Err(LieError::Numerical(
            "could not orthonormalize the algebra coordinates".into(),
        ));
    }
    let mut q = DMatrix::zeros(dim, dim);
    for (j, v) in onb.iter().enumerate() {
        q.set_column(j, v);
    }
    let q_adj = q.transpose() * &real.gram; // Q^{-1} since Q^T G Q = I

    let mut h_reg = DVector::zeros(dim);
    for (i, h) in abelian.basis.iter().enumerate() {
        h_reg += h * 10f64.powi((rank - 1 - i) as i32);
    }

    let sym = {
        let m = &q_adj * real.ad(&h_reg) * &q;
        (&m + m.transpose()) * 0.5
    };
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    // cluster sorted eigenvalues
    let mut clusters: Vec<(f64, Vec<usize>)> = Vec::new();
    for &i in &order {
        let lam = eig.eigenvalues[i];
        match clusters.last_mut() {
            Some((center, members)) if (lam - *center).abs() <= CLUSTER_TOL => {
                members.push(i);
                *center =
                    (*center * (members.len() - 1) as f64 + lam) / members.len() as f64;
            }
            _ => clusters.push((lam, vec![i])),
        }
    }

    let mut roots = Vec::new();
    let mut root_spaces = Vec::new();
    let mut multiplicities = Vec::new();
    let mut g0_basis = Vec::new();

    for (center, members) in &clusters {
        let vectors: Vec<DVector<f64>> = members
            .iter()
            .map(|&i| &q * eig.eigenvectors.column(i).into_owned())
            .collect();
        let vectors = linalg::gram_schmidt(&vectors, &real.gram, 1e-10);
        if center.abs() <= POSITIVITY_TOL {
            g0_basis.extend(vectors);
            continue;
        }
        if center.abs() <= CLUSTER_TOL * 10.0 {
            return Err(LieError::ClusteringAmbiguity(format!(
                "root value {center:.3e} too close to zero for the positivity threshold"
            )));
        }
        // refine alpha(H_i) as the mean Rayleigh quotient, and demand the
        // cluster is a simultaneous eigenspace of every a-direction
        let mut coords = DVector::zeros(rank);
        for (i, h) in abelian.basis.iter().enumerate() {
            let ad_h = real.ad(h);
            let mut val = 0.0;
            for v in &vectors {
                val += linalg::ip(&real.gram, &(&ad_h * v), v);
            }
            val /= vectors.len() as f64;
            for v in &vectors {
                let res = (&ad_h * v - v * val).norm();
                if res > ROOT_MATCH_TOL {
                    return Err(LieError::ClusteringAmbiguity(format!(
                        "cluster at {center:.6} mixes eigenvalues along a-direction {i} (residual {res:.3e})"
                    )));
                }
            }
            coords[i] = val;
        }
        let snapped = coords
            .iter()
            .map(|&x| linalg::snap_rational(x, 48, 1e-6))
            .collect();
        let mut h_alpha = DVector::zeros(dim);
        for (i, h) in abelian.basis.iter().enumerate() {
            h_alpha += h * coords[i];
        }
        roots.push(RestrictedRoot {
            coords,
            snapped,
            h_alpha,
            hreg_value: *center,
        });
        root_spaces.push(vectors);
        multiplicities.push(members.len());
    }

    if g0_basis.is_empty() {
        return Err(LieError::Numerical("empty centralizer g_0".into()));
    }

    // maximality cross-check: the p-part of g_0 must be exactly a
    let theta = &real.theta;
    let p_parts: Vec<DVector<f64>> =
        g0_basis.iter().map(|v| (v - theta * v) * 0.5).collect();
    let p_part_dim = linalg::gram_schmidt(&p_parts, &real.gram, 1e-8).len();
    if p_part_dim != rank {
        return Err(LieError::NonMaximalA {
            centralizer_dim: p_part_dim,
            rank,
        });
    }

    // sort roots by their value on the regular element
    let mut order: Vec<usize> = (0..roots.len()).collect();
    order.sort_by(|&i, &j| roots[i].hreg_value.total_cmp(&roots[j].hreg_value));
    let roots: Vec<RestrictedRoot> = order.iter().map(|&i| roots[i].clone()).collect();
    let root_spaces: Vec<Vec<DVector<f64>>> =
        order.iter().map(|&i| root_spaces[i].clone()).collect();
    let multiplicities: Vec<usize> = order.iter().map(|&i| multiplicities[i]).collect();

    let positives: Vec<usize> = (0..roots.len())
        .filter(|&i| roots[i].hreg_value > POSITIVITY_TOL)
        .collect();

    let mut system = RestrictedRootSystem {
        rank,
        a_basis: abelian.basis.clone(),
        roots,
        root_spaces,
        multiplicities,
        g0_basis,
        positives,
        simples: Vec::new(),
    };

    // symmetry Sigma = -Sigma with matching multiplicities
    for i in 0..system.roots.len() {
        let neg = system
            .find_root(&(-&system.roots[i].coords))
            .ok_or_else(|| LieError::Numerical("root system is not symmetric".into()))?;
        if system.multiplicities[neg] != system.multiplicities[i] {
            return Err(LieError::Numerical(
                "multiplicities of alpha and -alpha differ".into(),
            ));
        }
    }

    system.simples = compute_simples(&system)?;
    // every positive root must decompose over the simples with natural
    // coefficients
    for i in system.positives.clone() {
        system.decompose_in_simples(i)?;
    }
    Ok(system)
}

fn compute_simples(system: &RestrictedRootSystem) -> Result<Vec<usize>> {
    let mut simples = Vec::new();
    for &i in &system.positives {
        let mut decomposable = false;
        'outer: for &j in &system.positives {
            for &k in &system.positives {
                let sum = &system.roots[j].coords + &system.roots[k].coords;
                if (sum - &system.roots[i].coords).norm() < ROOT_MATCH_TOL {
                    decomposable = true;
                    break 'outer;
                }
            }
        }
        if !decomposable {
            simples.push(i);
        }
    }
    if simples.len() != system.rank {
        return Err(LieError::DecompositionFailure(format!(
            "found {} indecomposable positive roots, expected rank {}",
            simples.len(),
            system.rank
        )));
    }
    Ok(simples)
}

/// Returns the indecomposable positive roots, re-validating the count and
/// the natural decomposition of every positive root.
pub fn simple_roots(system: &RestrictedRootSystem) -> Result<Vec<usize>> {
    let simples = compute_simples(system)?;
    for &i in &system.positives {
        system.decompose_in_simples(i)?;
    }
    Ok(simples)
}

impl RestrictedRootSystem {
    pub fn find_root(&self, coords: &DVector<f64>) -> Option<usize> {
        self.roots
            .iter()
            .position(|r| (&r.coords - coords).norm() < ROOT_MATCH_TOL)
    }

    /// <alpha, beta> on a*; the a-basis is orthonormal so this is the dot
    /// product of coordinate vectors.
    pub fn root_inner(&self, i: usize, j: usize) -> f64 {
        self.roots[i].coords.dot(&self.roots[j].coords)
    }

    pub fn is_simple(&self, i: usize) -> bool {
        self.simples.contains(&i)
    }

    /// Index of 2*beta if it is a root.
    pub fn double_root(&self, beta: usize) -> Option<usize> {
        self.find_root(&(&self.roots[beta].coords * 2.0))
    }

    pub fn multiplicity_of_double(&self, beta: usize) -> usize {
        self.double_root(beta).map_or(0, |i| self.multiplicities[i])
    }

    /// The positive roots with beta and 2*beta removed.
    pub fn positives_excluding(&self, beta: usize) -> Vec<usize> {
        let double = self.double_root(beta);
        self.positives
            .iter()
            .copied()
            .filter(|&i| i != beta && Some(i) != double)
            .collect()
    }

    /// Coefficients of a positive root over the simple roots; they must be
    /// nonnegative integers.
    pub fn decompose_in_simples(&self, i: usize) -> Result<Vec<i64>> {
        let rank = self.rank;
        let mut m = DMatrix::zeros(rank, rank);
        for (c, &s) in self.simples.iter().enumerate() {
            m.set_column(c, &self.roots[s].coords);
        }
        let svd = m.svd(true, true);
        let sol = svd
            .solve(&self.roots[i].coords, 1e-12)
            .map_err(|e| LieError::DecompositionFailure(e.to_string()))?;
        let mut coeffs = Vec::with_capacity(rank);
        let mut reconstructed = DVector::zeros(rank);
        for (c, &s) in self.simples.iter().enumerate() {
            let n = sol[c].round();
            if (sol[c] - n).abs() > 1e-6 || n < 0.0 {
                return Err(LieError::DecompositionFailure(format!(
                    "coefficient {:.6} of root {} over simple {} is not a natural number",
                    sol[c], i, c
                )));
            }
            reconstructed += &self.roots[s].coords * n;
            coeffs.push(n as i64);
        }
        let res = (reconstructed - &self.roots[i].coords).norm();
        if res > ROOT_MATCH_TOL {
            return Err(LieError::DecompositionFailure(format!(
                "decomposition residual {res:.3e} for root {i}"
            )));
        }
        Ok(coeffs)
    }

    pub fn height(&self, i: usize) -> Result<i64> {
        Ok(self.decompose_in_simples(i)?.iter().sum())
    }

    /// Coordinates of the reflection sigma_beta(alpha).
    pub fn reflect_coords(&self, beta: usize, alpha: usize) -> DVector<f64> {
        let b = &self.roots[beta].coords;
        let a = &self.roots[alpha].coords;
        let factor = 2.0 * a.dot(b) / b.dot(b);
        a - b * factor
    }

    /// Reflects alpha in the hyperplane of beta and locates the image root.
    pub fn reflect(&self, beta: usize, alpha: usize) -> Option<usize> {
        self.find_root(&self.reflect_coords(beta, alpha))
    }

    /// Worst deviation from orthogonality between distinct root spaces and
    /// g_0, or infinity if the spaces do not fill the algebra.
    pub fn decomposition_residual(&self, real: &LieAlgebraRealization) -> f64 {
        let mut spaces: Vec<&[DVector<f64>]> = vec![self.g0_basis.as_slice()];
        spaces.extend(self.root_spaces.iter().map(|s| s.as_slice()));
        let mut total = 0usize;
        let mut worst: f64 = 0.0;
        for (i, si) in spaces.iter().enumerate() {
            total += si.len();
            for (j, sj) in spaces.iter().enumerate() {
                if i == j {
                    continue;
                }
                for x in si.iter() {
                    for y in sj.iter() {
                        worst = worst.max(real.inner(x, y).abs());
                    }
                }
            }
        }
        if total != real.dim {
            return f64::INFINITY;
        }
        worst
    }

    /// Worst residual of [g_alpha, g_alpha'] inside g_{alpha+alpha'}
    /// (zero space when alpha+alpha' is neither a root nor zero).
    pub fn bracket_inclusion_residual(&self, real: &LieAlgebraRealization) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.roots.len() {
            for j in 0..self.roots.len() {
                let sum = &self.roots[i].coords + &self.roots[j].coords;
                let target: Option<&[DVector<f64>]> = if sum.norm() < ROOT_MATCH_TOL {
                    Some(self.g0_basis.as_slice())
                } else {
                    self.find_root(&sum).map(|k| self.root_spaces[k].as_slice())
                };
                for x in &self.root_spaces[i] {
                    for y in &self.root_spaces[j] {
                        let b = real.ad(x) * y;
                        let res = match target {
                            Some(t) => linalg::residual_outside_span(&b, t, &real.gram),
                            None => linalg::norm(&real.gram, &b),
                        };
                        worst = worst.max(res);
                    }
                }
            }
        }
        worst
    }

    /// Residual between <alpha,beta> computed on a* and via the dual
    /// vectors H_alpha in the ambient inner product.
    pub fn dual_pairing_residual(&self, real: &LieAlgebraRealization) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.roots.len() {
            for j in 0..self.roots.len() {
                let via_coords = self.root_inner(i, j);
                let via_dual =
                    real.inner(&self.roots[i].h_alpha, &self.roots[j].h_alpha);
                worst = worst.max((via_coords - via_dual).abs());
            }
        }
        worst
    }
}

/// The identities attached to a simple root: the ideal property of n(beta),
/// the vanishing weighted sum over the remaining positive roots, and the
/// multiplicity parity implication.
#[derive(Debug, Clone)]
pub struct SimpleRootChecks {
    pub beta: usize,
    /// Residual of [n(beta), n] inside n(beta).
    pub ideal_residual: f64,
    /// sum over alpha in Sigma+ \ {beta, 2beta} of m_alpha <alpha, beta>.
    pub weighted_sum: f64,
    /// m_beta odd implies m_{2beta} = 0.
    pub parity_ok: bool,
    pub m_beta: usize,
    pub m_two_beta: usize,
    /// The reflection permutes the remaining positives preserving
    /// multiplicities.
    pub permutation_ok: bool,
    /// Residual of sigma_beta fixing sum m_alpha alpha.
    pub fixed_sum_residual: f64,
}

/// Runs every identity attached to a simple root beta.
pub fn simple_root_identities(
    real: &LieAlgebraRealization,
    system: &RestrictedRootSystem,
    beta: usize,
) -> Result<SimpleRootChecks> {
    if !system.is_simple(beta) {
        return Err(LieError::Numerical(format!("root {beta} is not simple")));
    }
    let rest = system.positives_excluding(beta);
    let n_beta_space: Vec<DVector<f64>> = rest
        .iter()
        .flat_map(|&i| system.root_spaces[i].iter().cloned())
        .collect();
    let n_space: Vec<DVector<f64>> = system
        .positives
        .iter()
        .flat_map(|&i| system.root_spaces[i].iter().cloned())
        .collect();

    let mut ideal_residual: f64 = 0.0;
    for x in &n_beta_space {
        for y in &n_space {
            let b = real.ad(x) * y;
            ideal_residual = ideal_residual
                .max(linalg::residual_outside_span(&b, &n_beta_space, &real.gram));
        }
    }

    let mut weighted_sum = 0.0;
    let mut weighted_vec = DVector::zeros(system.rank);
    for &i in &rest {
        let m = system.multiplicities[i] as f64;
        weighted_sum += m * system.root_inner(i, beta);
        weighted_vec += &system.roots[i].coords * m;
    }

    let m_beta = system.multiplicities[beta];
    let m_two_beta = system.multiplicity_of_double(beta);
    let parity_ok = m_beta % 2 == 0 || m_two_beta == 0;

    let mut permutation_ok = true;
    for &i in &rest {
        match system.reflect(beta, i) {
            Some(img) if rest.contains(&img) => {
                if system.multiplicities[img] != system.multiplicities[i] {
                    permutation_ok = false;
                }
            }
            _ => permutation_ok = false,
        }
    }

    let b = &system.roots[beta].coords;
    let factor = 2.0 * weighted_vec.dot(b) / b.dot(b);
    let reflected = &weighted_vec - b * factor;
    let fixed_sum_residual = (reflected - &weighted_vec).norm();

    Ok(SimpleRootChecks {
        beta,
        ideal_residual,
        weighted_sum,
        parity_ok,
        m_beta,
        m_two_beta,
        permutation_ok,
        fixed_sum_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_core::cartan_decompose;
    use crate::catalog::{realize, resolve};

    fn system_for(id: &str) -> (LieAlgebraRealization, RestrictedRootSystem) {
        let spec = resolve(id, &[]).unwrap();
        let real = realize(&spec).unwrap();
        let cartan = cartan_decompose(&real).unwrap();
        let abelian = maximal_abelian(&real, &cartan, &spec).unwrap();
        let system = extract_roots(&real, &cartan, &abelian).unwrap();
        (real, system)
    }

    #[test]
    fn sl2_has_one_positive_root_of_multiplicity_one() {
        let (_, system) = system_for("sl2");
        assert_eq!(system.rank, 1);
        assert_eq!(system.positives.len(), 1);
        assert_eq!(system.multiplicities[system.positives[0]], 1);
        assert_eq!(system.multiplicity_of_double(system.positives[0]), 0);
    }

    #[test]
    fn su12_multiplicities_are_two_and_one() {
        let (_, system) = system_for("su12");
        assert_eq!(system.rank, 1);
        assert_eq!(system.positives.len(), 2);
        let beta = system.simples[0];
        assert_eq!(system.multiplicities[beta], 2);
        assert_eq!(system.multiplicity_of_double(beta), 1);
    }

    #[test]
    fn sl_n_roots_are_type_a() {
        for (id, n) in [("sl3", 3usize), ("sl4", 4usize)] {
            let (_, system) = system_for(id);
            assert_eq!(system.rank, n - 1, "{id}");
            assert_eq!(system.positives.len(), n * (n - 1) / 2, "{id}");
            for &i in &system.positives {
                assert_eq!(system.multiplicities[i], 1, "{id}");
            }
            assert_eq!(system.simples.len(), n - 1);
        }
    }

    #[test]
    fn g2_split_has_six_positive_roots_of_height_up_to_five() {
        let (_, system) = system_for("g2split");
        assert_eq!(system.rank, 2);
        assert_eq!(system.positives.len(), 6);
        let mut heights: Vec<i64> = system
            .positives
            .iter()
            .map(|&i| system.height(i).unwrap())
            .collect();
        heights.sort();
        assert_eq!(heights, vec![1, 1, 2, 3, 4, 5]);
        for &i in &system.positives {
            assert_eq!(system.multiplicities[i], 1);
        }
    }

    #[test]
    fn dim_p_minus_rank_counts_positive_root_multiplicities() {
        // dim p = rank + sum of m_alpha over the positive roots
        for id in ["sl3", "su12", "g2split", "sp4"] {
            let spec = resolve(id, &[]).unwrap();
            let real = realize(&spec).unwrap();
            let cartan = cartan_decompose(&real).unwrap();
            let abelian = maximal_abelian(&real, &cartan, &spec).unwrap();
            let system = extract_roots(&real, &cartan, &abelian).unwrap();
            let total: usize = system
                .positives
                .iter()
                .map(|&i| system.multiplicities[i])
                .sum();
            assert_eq!(cartan.dim_p() - system.rank, total, "{id}");
        }
    }

    #[test]
    fn so13_has_one_root_of_multiplicity_two() {
        let (_, system) = system_for("so13");
        assert_eq!(system.rank, 1);
        assert_eq!(system.positives.len(), 1);
        assert_eq!(system.multiplicities[system.positives[0]], 2);
    }

    #[test]
    fn so23_and_sp4_are_rank_two_with_multiplicity_one() {
        for id in ["so23", "sp4"] {
            let (_, system) = system_for(id);
            assert_eq!(system.rank, 2, "{id}");
            assert_eq!(system.positives.len(), 4, "{id}");
            for &i in &system.positives {
                assert_eq!(system.multiplicities[i], 1, "{id}");
            }
        }
    }

    #[test]
    fn decomposition_and_bracket_inclusions_hold() {
        for id in ["sl3", "su12", "g2split"] {
            let (real, system) = system_for(id);
            assert!(system.decomposition_residual(&real) < 1e-10, "{id}");
            assert!(system.bracket_inclusion_residual(&real) < 1e-10, "{id}");
            assert!(system.dual_pairing_residual(&real) < 1e-10, "{id}");
        }
    }

    #[test]
    fn a2_weighted_sum_vanishes_with_the_expected_terms() {
        // A2 Gram: <alpha1, alpha2> = -1/2 <alpha1, alpha1>; for sl(3,R) with
        // the Killing form this means <alpha,alpha> = 1/3, cross term -1/6.
        let (real, system) = system_for("sl3");
        for &beta in &system.simples {
            let checks = simple_root_identities(&real, &system, beta).unwrap();
            assert!(checks.ideal_residual < 1e-10);
            assert!(checks.weighted_sum.abs() < 1e-10);
            assert!(checks.parity_ok);
            assert!(checks.permutation_ok);
            assert!(checks.fixed_sum_residual < 1e-10);

            let rest = system.positives_excluding(beta);
            assert_eq!(rest.len(), 2);
            let mut inners: Vec<f64> =
                rest.iter().map(|&i| system.root_inner(i, beta)).collect();
            inners.sort_by(f64::total_cmp);
            assert!((inners[0] + 1.0 / 6.0).abs() < 1e-10);
            assert!((inners[1] - 1.0 / 6.0).abs() < 1e-10);
            assert!((system.root_inner(beta, beta) - 1.0 / 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rank_one_weighted_sum_is_empty() {
        let (real, system) = system_for("su12");
        let beta = system.simples[0];
        let checks = simple_root_identities(&real, &system, beta).unwrap();
        assert!(system.positives_excluding(beta).is_empty());
        assert_eq!(checks.weighted_sum, 0.0);
    }

    #[test]
    fn g2_identities_hold_for_both_simple_roots() {
        let (real, system) = system_for("g2split");
        for &beta in &system.simples {
            let checks = simple_root_identities(&real, &system, beta).unwrap();
            assert!(checks.ideal_residual < 1e-10);
            assert!(checks.weighted_sum.abs() < 1e-10);
            assert!(checks.permutation_ok);
            assert!(checks.fixed_sum_residual < 1e-10);
        }
    }

    #[test]
    fn simple_roots_revalidates_the_selection() {
        let (_, system) = system_for("sp4");
        let recomputed = simple_roots(&system).unwrap();
        assert_eq!(recomputed, system.simples);
        // B2 positives: the two simples plus their sum and the sum with the
        // long one doubled; heights 1, 1, 2, 3
        let mut heights: Vec<i64> = system
            .positives
            .iter()
            .map(|&i| system.height(i).unwrap())
            .collect();
        heights.sort();
        assert_eq!(heights, vec![1, 1, 2, 3]);
    }

    #[test]
    fn reflections_behave_like_weyl_reflections() {
        let (_, system) = system_for("sl3");
        let b0 = system.simples[0];
        let b1 = system.simples[1];
        // sigma_beta(beta) = -beta
        let img = system.reflect(b0, b0).unwrap();
        assert!((&system.roots[img].coords + &system.roots[b0].coords).norm() < 1e-9);
        // A2: reflecting one simple root in the other gives their sum
        let img = system.reflect(b0, b1).unwrap();
        let sum = &system.roots[b0].coords + &system.roots[b1].coords;
        assert!((&system.roots[img].coords - sum).norm() < 1e-9);
        // involution on every root
        for i in 0..system.roots.len() {
            let once = system.reflect(b0, i).unwrap();
            let twice = system.reflect(b0, once).unwrap();
            assert_eq!(twice, i);
        }
    }

    #[test]
    fn parity_implication_across_catalog() {
        for spec in crate::catalog::builtin_catalog() {
            let (real, system) = system_for(&spec.id);
            for &beta in &system.simples {
                let checks = simple_root_identities(&real, &system, beta).unwrap();
                assert!(checks.parity_ok, "{}", spec.id);
            }
        }
    }

    #[test]
    fn snapped_coordinates_where_rational() {
        // so(1,3): the root value on the unit a-direction is 1/2
        let (_, system) = system_for("so13");
        let beta = system.simples[0];
        assert_eq!(system.roots[beta].snapped[0], Some((1, 2)));
    }

    #[test]
    fn a_that_is_not_maximal_is_rejected() {
        // hand the extractor only one direction of the two-dimensional a of
        // sl3: the centralizer in p is then strictly larger
        let spec = resolve("sl3", &[]).unwrap();
        let real = realize(&spec).unwrap();
        let cartan = cartan_decompose(&real).unwrap();
        let full = maximal_abelian(&real, &cartan, &spec).unwrap();
        let partial = MaximalAbelian {
            basis: vec![full.basis[0].clone()],
            rank: 1,
        };
        assert!(matches!(
            extract_roots(&real, &cartan, &partial),
            Err(LieError::NonMaximalA { .. })
        ));
    }

    #[test]
    fn root_values_in_the_dead_zone_are_ambiguous() {
        // shrinking the a-basis pushes every root value into the gap between
        // the positivity threshold and the clustering tolerance
        let spec = resolve("sl2", &[]).unwrap();
        let real = realize(&spec).unwrap();
        let cartan = cartan_decompose(&real).unwrap();
        let full = maximal_abelian(&real, &cartan, &spec).unwrap();
        let tiny = MaximalAbelian {
            basis: vec![&full.basis[0] * 7.07e-8],
            rank: 1,
        };
        assert!(matches!(
            extract_roots(&real, &cartan, &tiny),
            Err(LieError::ClusteringAmbiguity(_))
        ));
    }

    #[test]
    fn colliding_regular_values_are_ambiguous() {
        // rotate the a-basis of sl3 so two distinct roots take the same
        // value on the regular element; the merged cluster then fails the
        // simultaneous-eigenspace test along the other a-direction
        let spec = resolve("sl3", &[]).unwrap();
        let real = realize(&spec).unwrap();
        let cartan = cartan_decompose(&real).unwrap();
        let full = maximal_abelian(&real, &cartan, &spec).unwrap();
        let system = extract_roots(&real, &cartan, &full).unwrap();
        let d = &system.roots[system.positives[0]].coords
            - &system.roots[system.positives[1]].coords;
        // solve (10 d1 + d2) cos t + (10 d2 - d1) sin t = 0
        let theta = (-(10.0 * d[0] + d[1])).atan2(10.0 * d[1] - d[0]);
        let (s, c) = theta.sin_cos();
        let rotated = MaximalAbelian {
            basis: vec![
                &full.basis[0] * c + &full.basis[1] * s,
                &full.basis[0] * (-s) + &full.basis[1] * c,
            ],
            rank: 2,
        };
        assert!(matches!(
            extract_roots(&real, &cartan, &rotated),
            Err(LieError::ClusteringAmbiguity(_))
        ));
    }
}
