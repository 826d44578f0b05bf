//! A-priori mesh quality: per-element indicators ϱ₁..ϱ₄ and the mesh-level
//! aggregate ϱ.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{Polygon, COLLINEAR_TOL};
use crate::mesh::{mesh_stats, MeshStats, PolygonalMesh};

/// Indicators of one element, each in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElementQuality {
    /// Kernel area over element area (0 when not star-shaped).
    pub rho1: f64,
    /// `min(√|P|, min|e|) / max(√|P|, h_P)`.
    pub rho2: f64,
    /// `3 / #edges`.
    pub rho3: f64,
    /// Worst ratio of shortest to longest edge within a collinear group.
    pub rho4: f64,
}

impl ElementQuality {
    /// Contribution `(ϱ₁ϱ₂ + ϱ₁ϱ₃ + ϱ₁ϱ₄) / 3` to the mesh aggregate.
    pub fn score(&self) -> f64 {
        (self.rho1 * self.rho2 + self.rho1 * self.rho3 + self.rho1 * self.rho4) / 3.0
    }
}

pub fn element_quality(p: &Polygon) -> ElementQuality {
    let area = p.area();
    let met = p.metrics();
    let kernel = p.kernel();
    let rho1 = (kernel.area / area).clamp(0.0, 1.0);
    let sa = area.sqrt();
    let rho2 = sa.min(met.shortest_edge) / sa.max(met.diameter);
    let rho3 = 3.0 / p.len() as f64;
    let lengths: Vec<f64> = p.edge_lengths().collect();
    let rho4 = p
        .collinear_submeshes(COLLINEAR_TOL)
        .groups
        .iter()
        .map(|g| {
            let (lo, hi) = g
                .iter()
                .fold((f64::INFINITY, 0.0f64), |(lo, hi), &e| (lo.min(lengths[e]), hi.max(lengths[e])));
            lo / hi
        })
        .fold(1.0f64, f64::min);
    ElementQuality { rho1, rho2, rho3, rho4 }
}

/// `sqrt(mean of the element scores)`.
pub fn aggregate_rho(q: &[ElementQuality]) -> f64 {
    if q.is_empty() {
        return 0.0;
    }
    let s: f64 = q.iter().map(ElementQuality::score).sum();
    (s / q.len() as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub elements: Vec<ElementQuality>,
    pub rho: f64,
    pub stats: MeshStats,
}

impl QualityReport {
    /// Mesh averages of ϱ₁..ϱ₄.
    pub fn means(&self) -> [f64; 4] {
        let n = self.elements.len().max(1) as f64;
        let mut m = [0.0; 4];
        for q in &self.elements {
            m[0] += q.rho1;
            m[1] += q.rho2;
            m[2] += q.rho3;
            m[3] += q.rho4;
        }
        m.map(|v| v / n)
    }

    /// One row per element: `element,rho1,rho2,rho3,rho4`.
    pub fn element_csv(&self) -> String {
        let mut s = String::from("element,rho1,rho2,rho3,rho4\n");
        for (i, q) in self.elements.iter().enumerate() {
            let _ = writeln!(s, "{i},{},{},{},{}", q.rho1, q.rho2, q.rho3, q.rho4);
        }
        s
    }
}

pub fn mesh_quality(m: &PolygonalMesh) -> QualityReport {
    let elements: Vec<ElementQuality> =
        (0..m.n_elements()).into_par_iter().map(|e| element_quality(&m.element_polygon(e))).collect();
    let rho = aggregate_rho(&elements);
    QualityReport { elements, rho, stats: mesh_stats(m) }
}

/// Quality summary of one level of a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelQuality {
    pub level: usize,
    /// Number of vertices, i.e. the dof count at k = 1.
    pub n_dof_proxy: usize,
    pub rho: f64,
    pub a_ratio: f64,
    pub e_ratio: f64,
}

pub fn dataset_quality(meshes: &[PolygonalMesh]) -> Vec<LevelQuality> {
    meshes
        .iter()
        .enumerate()
        .map(|(level, m)| {
            let r = mesh_quality(m);
            LevelQuality {
                level,
                n_dof_proxy: m.n_vertices(),
                rho: r.rho,
                a_ratio: r.stats.a_ratio,
                e_ratio: r.stats.e_ratio,
            }
        })
        .collect()
}

/// `level,rho,a_ratio,e_ratio` table.
pub fn quality_csv(rows: &[LevelQuality]) -> String {
    let mut s = String::from("level,rho,a_ratio,e_ratio\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", r.level, r.rho, r.a_ratio, r.e_ratio);
    }
    s
}
