use cellcurv::complex::{build_cubical_2d, build_cubical_3d, CellComplex, EpsilonConvention};
use cellcurv::flow::{flow_step, run_flow, FlowConfig};
use cellcurv::io::{encode_field, parse_csv, FieldRef, Format, Normalization};
use cellcurv::planar::{
    combinatorial_ricci_edges, directional_map, edge_operators, edge_weights, pixel_average, pixel_weights, Direction,
};
use cellcurv::reference::{classical_gauss, classical_laplacian};
use cellcurv::sampling::{downsample, mass, upsample};
use cellcurv::verify::compare_planar;
use cellcurv::voxel::ricci_edges_3d;
use cellcurv::{Axis, EdgeField, GrayImage, Grid, Grid3, VoxelVolume, WeightScheme};
use proptest::prelude::*;

fn heights(max_side: usize) -> impl Strategy<Value = GrayImage> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(h, w)| {
        prop::collection::vec(0.001f64..=1.0, h * w)
            .prop_map(move |v| GrayImage::new(Grid::from_vec(h, w, v).unwrap()).unwrap())
    })
}

fn gray_image(max_side: usize) -> impl Strategy<Value = GrayImage> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(h, w)| {
        prop::collection::vec(any::<u8>(), h * w)
            .prop_map(move |v| GrayImage::from_gray_levels(&Grid::from_vec(h, w, v).unwrap()).unwrap())
    })
}

fn volume(max_side: usize) -> impl Strategy<Value = VoxelVolume> {
    (1..=max_side, 1..=max_side, 1..=max_side).prop_flat_map(|(d, h, w)| {
        prop::collection::vec(0.001f64..=1.0, d * h * w)
            .prop_map(move |v| VoxelVolume::new(Grid3::from_vec([d, h, w], v).unwrap()).unwrap())
    })
}

fn unit_weights(c: &CellComplex) -> CellComplex {
    c.reweighted(|_, _| 1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn double_boundary_vanishes(img in heights(5), vol in volume(3)) {
        let (c2, _) = build_cubical_2d(&img, &WeightScheme::default());
        prop_assert!(c2.double_boundary_defects().is_empty());
        let (c3, _) = build_cubical_3d(&vol, &WeightScheme::default());
        prop_assert!(c3.double_boundary_defects().is_empty());
    }

    #[test]
    fn parallelism_is_symmetric_and_irreflexive(img in heights(4), vol in volume(2)) {
        let (c2, _) = build_cubical_2d(&img, &WeightScheme::default());
        let (c3, _) = build_cubical_3d(&vol, &WeightScheme::default());
        for c in [&c2, &c3] {
            for a in c.ids() {
                let par = c.parallel_cells(a).unwrap();
                prop_assert!(!par.contains(&a));
                for &b in &par {
                    prop_assert_eq!(c.dim(a), c.dim(b));
                    prop_assert!(c.parallel_cells(b).unwrap().contains(&a));
                }
            }
        }
    }

    #[test]
    fn curvature_is_homogeneous_and_laplacian_scale_free(img in heights(5), lambda in 0.1f64..20.0) {
        let (c, _) = build_cubical_2d(&img, &WeightScheme::default());
        let scaled = c.scaled(lambda).unwrap();
        let base: Vec<f64> = c.ids().map(|a| c.curvature_function(a).unwrap()).collect();
        let scale = base.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
        for (a, f) in c.ids().zip(&base) {
            let g = scaled.curvature_function(a).unwrap();
            prop_assert!((g - lambda * f).abs() <= 1e-12 * lambda * scale, "{g} vs {}", lambda * f);
            for conv in [EpsilonConvention::Standard, EpsilonConvention::Oriented] {
                let l0 = c.laplacian_entry(a, a, conv).unwrap();
                let l1 = scaled.laplacian_entry(a, a, conv).unwrap();
                prop_assert!((l0 - l1).abs() <= 1e-12 * l0.abs().max(1.0));
            }
        }
    }

    #[test]
    fn unit_weights_reduce_to_counting(img in heights(5), vol in volume(3)) {
        let (c2, _) = build_cubical_2d(&img, &WeightScheme::default());
        let (c3, _) = build_cubical_3d(&vol, &WeightScheme::default());
        for c in [unit_weights(&c2), unit_weights(&c3)] {
            for a in c.ids() {
                prop_assert_eq!(c.curvature_function(a).unwrap(), c.combinatorial_curvature(a).unwrap() as f64);
            }
        }
    }

    #[test]
    fn unit_eq13_matches_counting(img in heights(6)) {
        let (c, map) = build_cubical_2d(&img, &WeightScheme::default());
        let (h, w) = (img.height(), img.width());
        let ones = combinatorial_ricci_edges(&EdgeField::filled(h, w, 1.0), &Grid::filled(h, w, 1.0)).unwrap();
        for r in 0..=h {
            for j in 0..w {
                let e = map.horizontal_edge(r, j).unwrap();
                prop_assert_eq!(ones.horizontal()[(r, j)], c.combinatorial_curvature(e).unwrap() as f64);
            }
        }
        for i in 0..h {
            for col in 0..=w {
                let e = map.vertical_edge(i, col).unwrap();
                prop_assert_eq!(ones.vertical()[(i, col)], c.combinatorial_curvature(e).unwrap() as f64);
            }
        }
    }

    #[test]
    fn kernels_match_oracle(img in heights(16), w1 in 0.1f64..10.0) {
        let dev = compare_planar(&img, &WeightScheme::default().with_w1(w1)).unwrap();
        prop_assert!(dev.max() <= 1e-10, "{dev:?}");
    }

    #[test]
    fn w1_scaling(img in gray_image(12), lambda in prop::sample::select(vec![0.5, 2.0, 3.0, 10.0])) {
        let s = WeightScheme::default();
        let a = edge_operators(&img, &s).unwrap();
        let b = edge_operators(&img, &s.with_w1(lambda)).unwrap();
        for (x, y) in a.ricci.values().zip(b.ricci.values()) {
            prop_assert!((y - lambda * x).abs() <= 1e-12 * (lambda * x).abs());
        }
        for (x, y) in a.box1.values().zip(b.box1.values()).chain(a.box2.values().zip(b.box2.values())) {
            prop_assert!((y - x).abs() <= 1e-12 * x.abs());
        }
    }

    #[test]
    fn transpose_equivariance(img in heights(9)) {
        let s = WeightScheme::default();
        let a = edge_operators(&img, &s).unwrap();
        let t = edge_operators(&img.transpose(), &s).unwrap();
        prop_assert_eq!(&t.ricci, &a.ricci.transpose());
        prop_assert_eq!(&t.box1, &a.box1.transpose());
        prop_assert_eq!(&t.bochner, &a.bochner.transpose());
        prop_assert_eq!(&t.box2, &a.box2.transpose());
        prop_assert_eq!(pixel_average(&t.ricci), pixel_average(&a.ricci).transpose());
        prop_assert_eq!(
            directional_map(&t.ricci, Direction::Horizontal),
            directional_map(&a.ricci, Direction::Vertical).transpose()
        );
        prop_assert_eq!(
            directional_map(&t.ricci, Direction::Vertical),
            directional_map(&a.ricci, Direction::Horizontal).transpose()
        );
        prop_assert_eq!(directional_map(&a.ricci, Direction::Average), pixel_average(&a.ricci));
    }

    #[test]
    fn bochner_identity_is_exact(img in heights(10)) {
        let ops = edge_operators(&img, &WeightScheme::default()).unwrap();
        for ((b, q), r) in ops.bochner.values().zip(ops.box1.values()).zip(ops.ricci.values()) {
            prop_assert_eq!(b, q - r);
        }
    }

    #[test]
    fn step_response_is_local(h in 2usize..12, w in 2usize..12, a in 1u8..=255, b in 0u8..=255, frac in 0.0f64..1.0) {
        prop_assume!(a != b);
        let step = 1 + ((w - 1) as f64 * frac) as usize % (w - 1);
        let img = GrayImage::from_gray_levels(&Grid::from_fn(h, w, |_, j| if j < step { a } else { b })).unwrap();
        let ops = edge_operators(&img, &WeightScheme::default()).unwrap();
        prop_assert!(ops.ricci.horizontal().iter().all(|&v| v == 0.0));
        for i in 0..h {
            for c in 0..=w {
                let v = ops.ricci.vertical()[(i, c)];
                if c == step {
                    prop_assert!(v > 0.0);
                } else {
                    prop_assert_eq!(v, 0.0);
                }
            }
        }
    }

    #[test]
    fn resampling_round_trip(img in heights(6), gray in gray_image(6)) {
        let up = upsample(&img, 2).unwrap();
        prop_assert_eq!(downsample(&up, 2).unwrap(), img.clone());
        prop_assert!((mass(&up) - mass(&img)).abs() <= 1e-12 * mass(&img));
        for f in [2, 3] {
            let up = upsample(&gray, f).unwrap();
            prop_assert_eq!(downsample(&up, f).unwrap(), gray.clone());
        }
    }

    #[test]
    fn voxel_axis_permutation(vol in volume(3)) {
        let s = WeightScheme::default();
        let base = ricci_edges_3d(&vol, &s).unwrap();
        let scale = base.max_abs().max(1e-300);
        for perm in [[0, 2, 1], [1, 0, 2], [2, 0, 1], [1, 2, 0], [2, 1, 0]] {
            let moved = ricci_edges_3d(&vol.permute_axes(perm), &s).unwrap();
            for k in 0..3 {
                let src = base.family(Axis::from_index(perm[k]));
                let dst = moved.family(Axis::from_index(k));
                let d = dst.dims();
                for z in 0..d[0] {
                    for y in 0..d[1] {
                        for x in 0..d[2] {
                            let q = [z, y, x];
                            let mut p = [0; 3];
                            for a in 0..3 {
                                p[perm[a]] = q[a];
                            }
                            prop_assert!((dst[q] - src[p]).abs() <= 1e-12 * scale);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn voxel_homogeneity(vol in volume(3), lambda in 0.1f64..10.0) {
        let s = WeightScheme::default();
        let a = ricci_edges_3d(&vol, &s).unwrap();
        let b = ricci_edges_3d(&vol, &s.with_w1(lambda)).unwrap();
        let scale = a.max_abs().max(1e-300);
        for (x, y) in a.values().zip(b.values()) {
            prop_assert!((y - lambda * x).abs() <= 1e-12 * lambda * scale);
        }
    }

    #[test]
    fn gauss_invariances(img in heights(8), shift in 0.0f64..0.5) {
        prop_assume!(img.height() >= 3 && img.width() >= 3);
        let g = img.heights();
        let k = classical_gauss(g, 0.125).unwrap();
        prop_assert_eq!(classical_gauss(&g.transpose(), 0.125).unwrap(), k.transpose());
        let shifted = g.map(|h| h + shift);
        let ks = classical_gauss(&shifted, 0.125).unwrap();
        for (a, b) in k.iter().zip(ks.iter()) {
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        }
    }

    #[test]
    fn laplacian_is_linear(a in heights(7), s in -3.0f64..3.0) {
        prop_assume!(a.height() >= 3 && a.width() >= 3);
        let g = a.heights();
        let ramp = Grid::from_fn(g.rows(), g.cols(), |i, j| ((i * 3 + j * 5) % 7) as f64);
        let combo = Grid::from_fn(g.rows(), g.cols(), |i, j| g[(i, j)] + s * ramp[(i, j)]);
        let l = classical_laplacian(&combo, 0.5).unwrap();
        let la = classical_laplacian(g, 0.5).unwrap();
        let lr = classical_laplacian(&ramp, 0.5).unwrap();
        for ((x, y), z) in l.iter().zip(la.iter()).zip(lr.iter()) {
            prop_assert!((x - (y + s * z)).abs() <= 1e-9 * (1.0 + y.abs() + (s * z).abs()));
        }
    }

    #[test]
    fn flow_respects_floor(img in heights(6), dt in 1e-4f64..0.5, floor in 0.0f64..0.01) {
        let cfg = FlowConfig { dt, steps: 4, floor, renormalize: false };
        for field in &run_flow(&img, &WeightScheme::default(), &cfg).unwrap()[1..] {
            prop_assert!(field.values().all(|w| w >= floor));
        }
    }

    #[test]
    fn flow_zero_dt(img in heights(6)) {
        let s = WeightScheme::default();
        let e = edge_weights(&img, &s);
        prop_assert_eq!(flow_step(&e, &pixel_weights(&img, &s), 0.0, 0.0).unwrap(), e);
    }

    #[test]
    fn csv_round_trip(img in heights(6)) {
        let ops = edge_operators(&img, &WeightScheme::default()).unwrap();
        let parts = encode_field(FieldRef::Edge(&ops.bochner), Format::Csv, Normalization::None).unwrap();
        let parsed = parse_csv(std::str::from_utf8(&parts[0].bytes).unwrap()).unwrap();
        prop_assert_eq!(&parsed[0].1, ops.bochner.horizontal());
        prop_assert_eq!(&parsed[1].1, ops.bochner.vertical());
        let avg = pixel_average(&ops.ricci);
        let parts = encode_field(FieldRef::Pixel(&avg), Format::Csv, Normalization::None).unwrap();
        let parsed = parse_csv(std::str::from_utf8(&parts[0].bytes).unwrap()).unwrap();
        prop_assert_eq!(&parsed[0].1, &avg);
    }
}

/// Brute-force parallel counts on interior edges, against the lattice pictures.
#[test]
fn interior_edge_parallel_counts() {
    let img = GrayImage::constant(5, 5, 0.5).unwrap();
    let (c, map) = build_cubical_2d(&img, &WeightScheme::default());
    let e = map.horizontal_edge(2, 2).unwrap();
    let par = c.parallel_cells(e).unwrap();
    assert_eq!(par.len(), 4);
    for other in [
        map.horizontal_edge(1, 2),
        map.horizontal_edge(3, 2),
        map.horizontal_edge(2, 1),
        map.horizontal_edge(2, 3),
    ] {
        assert!(par.contains(&other.unwrap()));
    }
    assert_eq!(c.combinatorial_curvature(e).unwrap(), 0);

    let vol = VoxelVolume::new(Grid3::from_fn([4, 4, 4], |_| 0.5)).unwrap();
    let (c, map) = build_cubical_3d(&vol, &WeightScheme::default());
    let e = map.edge(Axis::X, [2, 2, 1]).unwrap();
    assert_eq!(c.parallel_cells(e).unwrap().len(), 6);
    assert_eq!(c.cofaces(e).len(), 4);
    assert_eq!(c.combinatorial_curvature(e).unwrap(), 0);
}

/// Discretized paraboloid `h = c + (x² + y²)/2`: central differences are exact
/// on quadratics, so `K = 1/(1 + x² + y²)²` at every interior sample.
#[test]
fn paraboloid_gauss_matches_analytic() {
    let n = 81;
    let spacing = 1.8 / (n - 1) as f64;
    let coord = |k: usize| -0.9 + k as f64 * spacing;
    let g = Grid::from_fn(n, n, |i, j| 0.01 + (coord(i).powi(2) + coord(j).powi(2)) / 2.0);
    let img = GrayImage::new(g).unwrap();
    let k = classical_gauss(img.heights(), spacing).unwrap();
    let c = n / 2;
    assert!((k[(c, c)] - 1.0).abs() <= 0.05);
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            let (x, y) = (coord(j), coord(i));
            let exact = 1.0 / (1.0 + x * x + y * y).powi(2);
            assert!(
                (k[(i, j)] - exact).abs() <= 1e-6,
                "({i}, {j}): {} vs {exact}",
                k[(i, j)]
            );
        }
    }
}

#[test]
fn planar_ramp_gauss_vanishes_inside() {
    let g = Grid::from_fn(9, 11, |i, j| 0.05 + 0.03 * i as f64 + 0.05 * j as f64);
    let k = classical_gauss(&g, 0.1).unwrap();
    for i in 1..8 {
        for j in 1..10 {
            assert!(k[(i, j)].abs() <= 1e-9);
        }
    }
}

#[test]
fn quadratic_laplacian_on_integer_grid() {
    let g = Grid::from_fn(6, 7, |_, j| (j * j) as f64);
    let l = classical_laplacian(&g, 1.0).unwrap();
    for i in 1..5 {
        for j in 1..6 {
            assert_eq!(l[(i, j)], 2.0);
        }
    }
}

#[test]
fn renormalized_flow_keeps_mass() {
    let img = GrayImage::from_gray_levels(&Grid::from_fn(12, 12, |i, j| ((i * 37 + j * 91) % 256) as u8)).unwrap();
    let cfg = FlowConfig {
        dt: 1e-3,
        steps: 30,
        floor: 0.0,
        renormalize: true,
    };
    let trace = run_flow(&img, &WeightScheme::default(), &cfg).unwrap();
    let m0 = trace[0].sum();
    for f in &trace {
        assert!((f.sum() - m0).abs() <= 1e-9 * m0);
    }
}
