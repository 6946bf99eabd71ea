//! One-stop pipeline: realize an algebra, run the Cartan and root-space
//! machinery, and assemble per-simple-root submersion bundles.

use crate::algebra_core::{cartan_decompose, CartanDecomposition, LieAlgebraRealization};
use crate::catalog::AlgebraSpec;
use crate::error::Result;
use crate::geometry::{build_geometry, LeftInvariantGeometry};
use crate::rankone::{
    build_projection, build_rank_one, RankOneData, SolvableGroup, SubmersionProjection,
};
use crate::roots::{extract_roots, maximal_abelian, MaximalAbelian, RestrictedRootSystem};

pub struct AlgebraModel {
    pub spec: AlgebraSpec,
    pub realization: LieAlgebraRealization,
    pub cartan: CartanDecomposition,
    pub abelian: MaximalAbelian,
    pub roots: RestrictedRootSystem,
}

impl AlgebraModel {
    pub fn build(spec: AlgebraSpec) -> Result<Self> {
        let realization = crate::catalog::realize(&spec)?;
        let cartan = cartan_decompose(&realization)?;
        let abelian = maximal_abelian(&realization, &cartan, &spec)?;
        let roots = extract_roots(&realization, &cartan, &abelian)?;
        Ok(AlgebraModel {
            spec,
            realization,
            cartan,
            abelian,
            roots,
        })
    }

    pub fn rank(&self) -> usize {
        self.roots.rank
    }

    /// Number of simple roots (indexable by `beta_index`).
    pub fn simple_count(&self) -> usize {
        self.roots.simples.len()
    }

    /// Assembles the submersion bundle for the beta_index-th simple root.
    pub fn rank_one_bundle(&self, beta_index: usize) -> Result<RankOneBundle> {
        let beta = *self
            .roots
            .simples
            .get(beta_index)
            .ok_or_else(|| crate::error::LieError::Numerical(format!(
                "beta index {beta_index} out of range ({} simple roots)",
                self.roots.simples.len()
            )))?;
        let data = build_rank_one(&self.realization, &self.roots, beta)?;
        let source = SolvableGroup::source(&self.realization, &self.roots)?;
        let target = SolvableGroup::target(&self.realization, &self.roots, &data)?;
        let projection = build_projection(&self.realization, &source, &target)?;
        let source_geometry = build_geometry(&source)?;
        let target_geometry = build_geometry(&target)?;
        Ok(RankOneBundle {
            data,
            source,
            target,
            projection,
            source_geometry,
            target_geometry,
        })
    }
}

/// Everything needed to work with the submersion onto one rank-one target.
pub struct RankOneBundle {
    pub data: RankOneData,
    pub source: SolvableGroup,
    pub target: SolvableGroup,
    pub projection: SubmersionProjection,
    pub source_geometry: LeftInvariantGeometry,
    pub target_geometry: LeftInvariantGeometry,
}
