//! Generators for the benchmark mesh families of the unit square:
//! Poisson-disk Delaunay triangulations, hybrid meshes with inserted
//! polygons, and mirrored base meshes with anisotropic refinement.

mod hybrid;
mod io;
mod mirroring;
mod poisson;
mod shapes;
mod triangle;
mod triangulate;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::DatasetError;
use crate::mesh::{MeshStats, PolygonalMesh, Violation};

pub use hybrid::{gen_hybrid, GAP_FRACTION, MAX_SHRINK_STEPS, SHRINK_FRACTION};
pub use io::{load_manifest, read_manifest, write_dataset, Manifest, ManifestLevel};
pub use mirroring::{gen_jenga, gen_slices, gen_ulike, jenga_base, mirror_mesh, mirror_times, slices_base, ulike_base};
pub use poisson::{poisson_disk, BRIDSON_ATTEMPTS};
pub use shapes::{interior_angle, maze_polygon, star_polygon, star_vertex_count, STAR_STEP};
pub use triangle::{gen_triangle, TRIANGLE_R0};
pub use triangulate::{constrained_delaunay_refine, delaunay, Triangulation};

/// Largest mesh (in elements) a generator agrees to build.
pub const MAX_ELEMENTS: f64 = 4.0e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetKind {
    Triangle,
    Maze,
    Star,
    Jenga,
    Slices,
    Ulike,
}

impl DatasetKind {
    pub const ALL: [DatasetKind; 6] = [
        DatasetKind::Triangle,
        DatasetKind::Maze,
        DatasetKind::Star,
        DatasetKind::Jenga,
        DatasetKind::Slices,
        DatasetKind::Ulike,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DatasetKind::Triangle => "triangle",
            DatasetKind::Maze => "maze",
            DatasetKind::Star => "star",
            DatasetKind::Jenga => "jenga",
            DatasetKind::Slices => "slices",
            DatasetKind::Ulike => "ulike",
        }
    }

    pub fn is_mirrored(self) -> bool {
        matches!(self, DatasetKind::Jenga | DatasetKind::Slices | DatasetKind::Ulike)
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DatasetKind {
    type Err = DatasetError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DatasetKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| DatasetError::InvalidSpec(format!("unknown dataset kind '{s}'")))
    }
}

/// Parameters of one dataset. Meshes are numbered `0..=levels`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetSpec {
    pub kind: DatasetKind,
    /// Index of the last mesh (the dataset has `levels + 1` meshes).
    pub levels: usize,
    /// Refinement steps per level; 4 gives the "x4" variants.
    pub n_el: u32,
    /// Area of the inserted polygon at level 0 (hybrid kinds).
    pub d0: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub seed: u64,
}

impl Default for DatasetSpec {
    fn default() -> Self {
        Self {
            kind: DatasetKind::Triangle,
            levels: 10,
            n_el: 1,
            d0: 0.03,
            t_min: 0.0,
            t_max: 0.95,
            seed: 0,
        }
    }
}

impl DatasetSpec {
    pub fn new(kind: DatasetKind) -> Self {
        Self { kind, ..Self::default() }
    }

    pub fn with_levels(mut self, levels: usize) -> Self {
        self.levels = levels;
        self
    }

    pub fn with_n_el(mut self, n_el: u32) -> Self {
        self.n_el = n_el;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        let bad = |m: String| Err(DatasetError::InvalidSpec(m));
        if self.levels < 1 {
            return bad("levels must be at least 1".into());
        }
        if self.n_el < 1 {
            return bad("n_el must be at least 1".into());
        }
        if !(self.d0 > 0.0 && self.d0 < 1.0) {
            return bad(format!("d0 = {} outside (0, 1)", self.d0));
        }
        if !(self.t_min >= 0.0 && self.t_min <= self.t_max && self.t_max < 1.0) {
            return bad(format!("deformation range [{}, {}] invalid", self.t_min, self.t_max));
        }
        Ok(())
    }

    /// Dataset name used for files: the kind, suffixed with `n_el` when it
    /// exceeds one (`jenga4`).
    pub fn name(&self) -> String {
        if self.n_el > 1 {
            format!("{}{}", self.kind, self.n_el)
        } else {
            self.kind.to_string()
        }
    }

    /// Deformation parameter `t_n`.
    pub fn t(&self, n: usize) -> f64 {
        self.t_min + n as f64 * (self.t_max - self.t_min) / self.levels as f64
    }

    /// Number of polygon copies `e_n` at level `n`.
    pub fn copies(&self, n: usize) -> usize {
        1usize << n
    }

    /// Target copy area `d_n`.
    pub fn d(&self, n: usize) -> f64 {
        self.d0 / 2f64.powi(n as i32)
    }

    /// Base-mesh refinement steps at level `n`.
    pub fn steps(&self, n: usize) -> usize {
        n * self.n_el as usize
    }

    /// Per-level RNG stream, independent of which other levels are built.
    pub fn level_rng(&self, n: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ (n as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    /// Rough element count of mesh `n`, used to refuse hopeless sizes.
    pub fn estimated_elements(&self, n: usize) -> f64 {
        let m = self.steps(n) as f64;
        let copies = 4f64.powi(n as i32);
        match self.kind {
            DatasetKind::Triangle => 2.0 * 50.0 * 4f64.powi(n as i32),
            DatasetKind::Maze | DatasetKind::Star => 4.0 / self.d(n),
            DatasetKind::Jenga => copies * (m + 4.0),
            DatasetKind::Slices => copies * 2.0 * (m + 2.0),
            DatasetKind::Ulike => copies * (2f64.powf(m) + 1.0),
        }
    }
}

/// Builds mesh `n` of the dataset described by `spec`.
pub fn generate_level(spec: &DatasetSpec, n: usize) -> Result<PolygonalMesh, DatasetError> {
    spec.validate()?;
    let est = spec.estimated_elements(n);
    if est > MAX_ELEMENTS {
        return Err(DatasetError::TooLarge { level: n, estimate: est });
    }
    match spec.kind {
        DatasetKind::Triangle => gen_triangle(spec, n),
        DatasetKind::Maze | DatasetKind::Star => gen_hybrid(spec, n),
        DatasetKind::Jenga => Ok(gen_jenga(spec, n)),
        DatasetKind::Slices => Ok(gen_slices(spec, n)),
        DatasetKind::Ulike => Ok(gen_ulike(spec, n)),
    }
}

/// Ordered sequence of meshes sharing one construction pattern.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub spec: DatasetSpec,
    /// Level index of each mesh.
    pub levels: Vec<usize>,
    pub meshes: Vec<PolygonalMesh>,
}

impl Dataset {
    pub fn stats(&self) -> Vec<MeshStats> {
        self.meshes.par_iter().map(|m| m.stats()).collect()
    }

    /// Mesh violations tagged with their level; empty for a sound dataset.
    pub fn violations(&self) -> Vec<(usize, Violation)> {
        self.levels
            .iter()
            .zip(&self.meshes)
            .flat_map(|(&l, m)| m.validate().into_iter().map(move |v| (l, v)))
            .collect()
    }
}

/// Builds every mesh `0..=spec.levels`.
pub fn generate(spec: &DatasetSpec) -> Result<Dataset, DatasetError> {
    let levels: Vec<usize> = (0..=spec.levels).collect();
    generate_levels(spec, &levels)
}

/// Builds the listed levels (in parallel; output follows `levels`).
pub fn generate_levels(spec: &DatasetSpec, levels: &[usize]) -> Result<Dataset, DatasetError> {
    spec.validate()?;
    let meshes = levels
        .par_iter()
        .map(|&n| generate_level(spec, n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Dataset { spec: spec.clone(), levels: levels.to_vec(), meshes })
}
