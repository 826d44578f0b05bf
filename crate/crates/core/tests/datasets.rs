use polyvem::datasets::{generate, generate_level, interior_angle};
use polyvem::mesh::write_off;
use polyvem::{DatasetKind, DatasetSpec, PolygonalMesh};

fn min_triangle_angle(m: &PolygonalMesh) -> f64 {
    m.elements
        .iter()
        .filter(|e| e.len() == 3)
        .flat_map(|e| {
            let p = |i: usize| m.vertices[e[i % 3]];
            (0..3).map(move |i| interior_angle(p(i + 2), p(i), p(i + 1)))
        })
        .fold(f64::INFINITY, f64::min)
        .to_degrees()
}

#[test]
fn every_family_is_a_conforming_partition() {
    for kind in DatasetKind::ALL {
        let ds = generate(&DatasetSpec::new(kind).with_levels(3)).unwrap();
        assert_eq!(ds.meshes.len(), 4);
        assert!(ds.violations().is_empty(), "{kind}: {:?}", ds.violations());
        for m in &ds.meshes {
            assert!((m.total_area() - 1.0).abs() < 1e-12, "{kind}");
        }
    }
}

#[test]
fn ear_clipping_conserves_area_on_dataset_elements() {
    for kind in DatasetKind::ALL {
        for n in 0..=2 {
            let m = generate_level(&DatasetSpec::new(kind), n).unwrap();
            for e in 0..m.n_elements() {
                let p = m.element_polygon(e);
                let v = p.vertices();
                let sum: f64 = p
                    .ear_clip()
                    .unwrap()
                    .iter()
                    .map(|t| polyvem::geometry::signed_area(&[v[t[0]], v[t[1]], v[t[2]]]))
                    .sum();
                assert!((sum - p.area()).abs() <= 1e-12 * p.area(), "{kind} level {n} element {e}");
            }
        }
    }
}

#[test]
fn triangle_meshes_are_well_shaped() {
    let ds = generate(&DatasetSpec::new(DatasetKind::Triangle).with_levels(3)).unwrap();
    for (n, m) in ds.meshes.iter().enumerate() {
        assert!(m.elements.iter().all(|e| e.len() == 3));
        let a = min_triangle_angle(m);
        assert!(a >= 15.0, "level {n}: {a}");
    }
}

#[test]
fn hybrid_triangles_respect_the_angle_bound() {
    for kind in [DatasetKind::Maze, DatasetKind::Star] {
        for n in 0..=5 {
            let m = generate_level(&DatasetSpec::new(kind), n).unwrap();
            let a = min_triangle_angle(&m);
            assert!(a >= 18.0, "{kind} level {n}: {a}");
        }
    }
}

#[test]
fn hybrid_levels_hold_their_copies() {
    let spec = DatasetSpec::new(DatasetKind::Star);
    for n in 0..=4 {
        let m = generate_level(&spec, n).unwrap();
        let copies = m.elements.iter().filter(|e| e.len() > 3).count();
        assert_eq!(copies, spec.copies(n), "level {n}");
    }
}

#[test]
fn mesh_size_decreases_with_level() {
    for kind in [DatasetKind::Triangle, DatasetKind::Jenga, DatasetKind::Slices] {
        let ds = generate(&DatasetSpec::new(kind).with_levels(4)).unwrap();
        let h: Vec<f64> = ds.stats().iter().map(|s| s.h).collect();
        assert!(h.windows(2).all(|w| w[1] < w[0]), "{kind}: {h:?}");
    }
    // Copies get more elongated as t grows, so hybrid h only shrinks overall.
    for kind in [DatasetKind::Maze, DatasetKind::Star] {
        let ds = generate(&DatasetSpec::new(kind).with_levels(6)).unwrap();
        let h: Vec<f64> = ds.stats().iter().map(|s| s.h).collect();
        assert!(h[6] < 0.5 * h[0], "{kind}: {h:?}");
    }
}

#[test]
fn generation_is_byte_deterministic_and_seeded() {
    for kind in [DatasetKind::Triangle, DatasetKind::Maze, DatasetKind::Star] {
        let spec = DatasetSpec::new(kind).with_seed(5);
        let a = write_off(&generate_level(&spec, 2).unwrap());
        let b = write_off(&generate_level(&spec, 2).unwrap());
        assert_eq!(a, b, "{kind}");
        let c = write_off(&generate_level(&spec.clone().with_seed(6), 2).unwrap());
        assert_ne!(a, c, "{kind}");
    }
}

#[test]
fn multiple_mirroring_scales_by_sixteen() {
    let ds = generate(&DatasetSpec::new(DatasetKind::Jenga).with_n_el(4).with_levels(3)).unwrap();
    let s = ds.stats();
    for w in s.windows(2).skip(1) {
        assert!((w[1].a_ratio / w[0].a_ratio - 16.0).abs() < 1e-6);
        assert!((w[1].e_ratio / w[0].e_ratio - 16.0).abs() < 1e-6);
    }
    assert_eq!(ds.spec.name(), "jenga4");
}
