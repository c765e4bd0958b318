use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uscut_core::contour::Contour;
use uscut_core::graph::{build_graph, build_network, sample_nodes};
use uscut_core::image::seed_stats;
use uscut_core::maxflow::{brute_force_cut, max_flow, Solver};
use uscut_core::{GrayImage, Point, TemplateConfig, TerminalWeights, WeightModel};

fn template() -> impl Strategy<Value = TemplateConfig> {
    (3usize..=8, 3usize..=6)
        .prop_flat_map(|(rays, nodes)| (Just(rays), Just(nodes), 0..=nodes - 2))
        .prop_map(|(rays, nodes, delta)| TemplateConfig::new(rays, nodes, nodes as f64, delta).unwrap())
}

/// Template plus terminal weights drawn from {0, 0.25, ..., 1}.
fn instance() -> impl Strategy<Value = (TemplateConfig, TerminalWeights)> {
    template().prop_flat_map(|cfg| {
        let n = cfg.node_count();
        let quarter = (0u8..=4).prop_map(|q| f64::from(q) * 0.25);
        (
            Just(cfg),
            proptest::collection::vec(quarter.clone(), n),
            proptest::collection::vec(quarter, n),
        )
            .prop_map(|(cfg, source, sink)| (cfg, TerminalWeights { source, sink }))
    })
}

fn small_image() -> impl Strategy<Value = GrayImage> {
    (8usize..40, 8usize..40).prop_flat_map(|(w, h)| {
        proptest::collection::vec(any::<u8>(), w * h)
            .prop_map(move |bytes| GrayImage::from_bytes(w, h, &bytes).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn max_flow_matches_exhaustive_search((cfg, weights) in instance()) {
        let oracle = brute_force_cut(&weights, &cfg).unwrap();
        let net = build_network(&cfg, &weights);
        for solver in [Solver::BoykovKolmogorov, Solver::Dinic] {
            let cut = solver.solve(&net).unwrap();
            prop_assert!((cut.flow_value - oracle.min_cost).abs() <= 1e-9 * (1.0 + oracle.min_cost));
            cut.check_invariants(&cfg).unwrap();
            if oracle.unique {
                prop_assert_eq!(&cut.cut_indices, &oracle.cut_indices);
            }
        }
    }

    #[test]
    fn solve_is_independent_of_arc_order((cfg, weights) in instance(), shuffle_seed in any::<u64>()) {
        let net = build_network(&cfg, &weights);
        let mut shuffled = net.clone();
        shuffled.arcs_mut().shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle_seed));
        let a = max_flow(&net).unwrap();
        let b = max_flow(&shuffled).unwrap();
        prop_assert_eq!(a.flow_value.to_bits(), b.flow_value.to_bits());
        prop_assert_eq!(a.source_side, b.source_side);
        prop_assert_eq!(a.cut_indices, b.cut_indices);
    }

    #[test]
    fn edge_counts(cfg in template()) {
        let n = cfg.node_count();
        let weights = TerminalWeights { source: vec![0.5; n], sink: vec![0.0; n] };
        let net = build_network(&cfg, &weights);
        let ray = |v: usize| v / cfg.nodes_per_ray;
        let (s, t) = (net.source(), net.sink());
        let inner = net.arcs().iter().filter(|a| a.from < n && a.to < n);
        let intra = inner.clone().filter(|a| ray(a.from) == ray(a.to)).count();
        let inter = inner.filter(|a| ray(a.from) != ray(a.to)).count();
        let inf = net.arcs()[0].capacity;
        let terminal_inf = net
            .arcs()
            .iter()
            .filter(|a| (a.from == s || a.to == t) && a.capacity == inf)
            .count();
        prop_assert_eq!(intra, cfg.num_rays * (cfg.nodes_per_ray - 1));
        prop_assert_eq!(inter, 2 * n);
        prop_assert_eq!(terminal_inf, 2 * cfg.num_rays);
        prop_assert_eq!(net.vertex_count(), n + 2);
        // The sentinel dominates every finite capacity combined.
        prop_assert!(inf > 0.5 * n as f64);
    }

    #[test]
    fn cuts_on_random_images_are_valid_prefix_cuts(
        img in small_image(),
        cfg in template(),
        fx in 0.05f64..0.95,
        fy in 0.05f64..0.95,
    ) {
        let seed = Point::new(fx * (img.width() - 1) as f64, fy * (img.height() - 1) as f64);
        let stats = seed_stats(&img, seed, &cfg).unwrap();
        let grid = sample_nodes(&img, seed, &cfg).unwrap();
        let cut = max_flow(&build_graph(&grid, &stats)).unwrap();
        cut.check_invariants(&cfg).unwrap();
        for r in 0..cfg.num_rays {
            let k = cut.cut_indices[r];
            for i in 0..cfg.nodes_per_ray {
                prop_assert_eq!(cut.source_side[cfg.node_id(r, i)], i <= k);
            }
            let next = cut.cut_indices[(r + 1) % cfg.num_rays];
            prop_assert!(k.abs_diff(next) <= cfg.delta);
        }
    }

    #[test]
    fn weights_are_bounded_and_exclusive(
        img in small_image(),
        cfg in template(),
        fx in 0.05f64..0.95,
        fy in 0.05f64..0.95,
    ) {
        let seed = Point::new(fx * (img.width() - 1) as f64, fy * (img.height() - 1) as f64);
        let stats = seed_stats(&img, seed, &cfg).unwrap();
        let grid = sample_nodes(&img, seed, &cfg).unwrap();
        for model in [WeightModel::from_stats(&stats), WeightModel::seed_contrast(&stats)] {
            let w = model.weights(&grid);
            for (cs, ct) in w.source.iter().zip(&w.sink) {
                prop_assert!((0.0..=1.0).contains(cs) && (0.0..=1.0).contains(ct));
                prop_assert!(*cs == 0.0 || *ct == 0.0);
            }
        }
    }

    #[test]
    fn p5_round_trip_is_byte_identical(img in small_image()) {
        let bytes = img.encode_pgm();
        let back = GrayImage::decode_pgm(&bytes).unwrap();
        prop_assert_eq!(back.encode_pgm(), bytes);
    }

    #[test]
    fn bilinear_is_a_convex_combination(img in small_image(), x in -3.0f64..45.0, y in -3.0f64..45.0) {
        let v = img.sample_bilinear(x, y);
        let cx = x.clamp(0.0, (img.width() - 1) as f64);
        let cy = y.clamp(0.0, (img.height() - 1) as f64);
        let (x0, y0) = (cx.floor() as usize, cy.floor() as usize);
        let (x1, y1) = ((x0 + 1).min(img.width() - 1), (y0 + 1).min(img.height() - 1));
        let corners = [img.get(x0, y0), img.get(x1, y0), img.get(x0, y1), img.get(x1, y1)];
        let lo = corners.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = corners.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
    }

    #[test]
    fn constant_image_stats(level in 0u8..=255, radius in 1.0f64..200.0, fx in 0.0f64..1.0, fy in 0.0f64..1.0) {
        let value = f64::from(level) / 255.0;
        let img = GrayImage::filled(50, 30, value).unwrap();
        let cfg = TemplateConfig::new(12, 5, radius, 1).unwrap();
        let stats = seed_stats(&img, Point::new(fx * 49.0, fy * 29.0), &cfg).unwrap();
        prop_assert!((stats.mu_seed - value).abs() < 1e-12);
        prop_assert!((stats.mu_ring - value).abs() < 1e-12);
    }

    #[test]
    fn diameter_is_rotation_invariant(
        pts in proptest::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 2..30),
        angle in 0.0f64..std::f64::consts::TAU,
        shift in (-100.0f64..100.0, -100.0f64..100.0),
    ) {
        let points: Vec<Point> = pts.iter().map(|&p| p.into()).collect();
        let (s, c) = angle.sin_cos();
        let moved = points
            .iter()
            .map(|p| Point::new(c * p.x - s * p.y + shift.0, s * p.x + c * p.y + shift.1))
            .collect();
        let a = Contour { points, spacing: 0.3 }.max_diameter_mm().unwrap();
        let b = Contour { points: moved, spacing: 0.3 }.max_diameter_mm().unwrap();
        prop_assert!((a - b).abs() < 1e-9 * (1.0 + a));
    }

    #[test]
    fn contour_dice_against_its_own_raster_is_one(
        radii in proptest::collection::vec(3.0f64..25.0, 12),
        cx in 30.0f64..34.0,
        cy in 30.0f64..34.0,
    ) {
        let points = radii
            .iter()
            .enumerate()
            .map(|(r, rho)| {
                let t = std::f64::consts::TAU * r as f64 / 12.0;
                Point::new(cx + rho * t.cos(), cy + rho * t.sin())
            })
            .collect();
        let contour = Contour { points, spacing: 1.0 };
        let raster = contour.rasterize(64, 64);
        let d = contour.dice(&raster);
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert_eq!(d, 1.0);
    }
}
