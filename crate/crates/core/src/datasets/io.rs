//! OFF files plus a JSON manifest per dataset.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Dataset, DatasetSpec};
use crate::error::MeshIoError;
use crate::mesh::{read_mesh, write_off, PolygonalMesh};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestLevel {
    pub level: usize,
    /// OFF file name relative to the manifest.
    pub file: String,
    pub h: f64,
    pub a_ratio: f64,
    pub e_ratio: f64,
    pub n_vertices: usize,
    pub n_elements: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub name: String,
    pub spec: DatasetSpec,
    pub levels: Vec<ManifestLevel>,
}

fn json_err(e: serde_json::Error) -> MeshIoError {
    MeshIoError::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, e))
}

/// Writes `<name>_<n>.off` for every mesh and `<name>_manifest.json` into
/// `dir` (created if missing). Returns the manifest path.
pub fn write_dataset(ds: &Dataset, dir: impl AsRef<Path>) -> Result<PathBuf, MeshIoError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let name = ds.spec.name();
    let stats = ds.stats();
    let mut levels = Vec::with_capacity(ds.meshes.len());
    for ((&level, mesh), st) in ds.levels.iter().zip(&ds.meshes).zip(stats) {
        let file = format!("{name}_{level}.off");
        fs::write(dir.join(&file), write_off(mesh))?;
        levels.push(ManifestLevel {
            level,
            file,
            h: st.h,
            a_ratio: st.a_ratio,
            e_ratio: st.e_ratio,
            n_vertices: st.n_vertices,
            n_elements: st.n_elements,
        });
    }
    let manifest = Manifest { name: name.clone(), spec: ds.spec.clone(), levels };
    let path = dir.join(format!("{name}_manifest.json"));
    let mut text = serde_json::to_string_pretty(&manifest).map_err(json_err)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Manifest, MeshIoError> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(json_err)
}

/// Reads a manifest and all meshes it lists.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<(Manifest, Vec<PolygonalMesh>), MeshIoError> {
    let path = path.as_ref();
    let manifest = read_manifest(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let meshes = manifest
        .levels
        .iter()
        .map(|l| read_mesh(dir.join(&l.file)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((manifest, meshes))
}
