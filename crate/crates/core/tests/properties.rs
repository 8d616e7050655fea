use pdboundary::boundary::{self, certify};
use pdboundary::cantor;
use pdboundary::drury_arveson::{self, BallPoint};
use pdboundary::gaussian::{self, SetRkhsElement};
use pdboundary::kernel::{gram, is_psd, kernel_leq, min_kernel, product_kernel};
use pdboundary::learn::{self, TrainingSet};
use pdboundary::network::{self, ResistanceNetwork};
use pdboundary::rkhs::{evaluate, rkhs_inner};
use pdboundary::{linalg, Point, RkhsElement, C64};
use proptest::prelude::*;

fn c64() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| C64::new(a, b))
}

fn ball_point(k: usize, radius: f64) -> impl Strategy<Value = BallPoint> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), k).prop_map(move |v| {
        let z: Vec<C64> = v.into_iter().map(|(a, b)| C64::new(a, b)).collect();
        let n = linalg::norm2(&z).max(1.0);
        BallPoint::new(z.into_iter().map(|c| c * (radius / n)).collect()).unwrap()
    })
}

/// Connected network: a random spanning tree plus a few extra edges.
fn network() -> impl Strategy<Value = ResistanceNetwork> {
    (3usize..9).prop_flat_map(|n| {
        (
            prop::collection::vec((any::<prop::sample::Index>(), 0.1..5.0f64), n - 1),
            prop::collection::vec((0..n, 0..n, 0.1..5.0f64), 0..4),
            0..n,
        )
            .prop_map(move |(tree, extra, base)| {
                let mut edges: Vec<(usize, usize, f64)> = Vec::new();
                for (v, (parent, c)) in tree.into_iter().enumerate() {
                    edges.push((parent.index(v + 1), v + 1, c));
                }
                for (a, b, c) in extra {
                    let dup = edges
                        .iter()
                        .any(|&(x, y, _)| (x == a && y == b) || (x == b && y == a));
                    if a != b && !dup {
                        edges.push((a, b, c));
                    }
                }
                ResistanceNetwork::new(n, &edges, base).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gram_is_hermitian_and_psd(pts in prop::collection::vec(ball_point(2, 0.9), 1..8)) {
        let k = drury_arveson::kernel(2);
        let points: Vec<Point> = pts.iter().map(|p| p.to_point()).collect();
        let g = gram(&k, &points).unwrap();
        prop_assert_eq!(linalg::hermitian_defect(g.matrix()), 0.0);
        prop_assert!(is_psd(g.matrix(), 1e-10).unwrap().is_psd);
    }

    #[test]
    fn reproducing_property_is_exact(
        idx in prop::collection::vec(0usize..30, 1..6),
        coeffs in prop::collection::vec(c64(), 6),
        x in 0usize..30,
    ) {
        let k = min_kernel();
        let pts: Vec<Point> = idx.iter().map(|&i| Point::Vertex(i)).collect();
        let f = RkhsElement::new(&k, pts.clone(), coeffs[..pts.len()].to_vec()).unwrap();
        let sec = RkhsElement::section(&k, Point::Vertex(x)).unwrap();
        prop_assert_eq!(rkhs_inner(&sec, &f).unwrap(), evaluate(&f, &Point::Vertex(x)).unwrap());
    }

    #[test]
    fn inner_product_is_hermitian(
        a in prop::collection::vec(c64(), 4),
        b in prop::collection::vec(c64(), 4),
        pts in prop::collection::vec(ball_point(1, 0.95), 4),
    ) {
        let k = drury_arveson::kernel(1);
        let p: Vec<Point> = pts.iter().map(|q| q.to_point()).collect();
        let fa = RkhsElement::new(&k, p.clone(), a).unwrap();
        let fb = RkhsElement::new(&k, p, b).unwrap();
        let (x, y) = (rkhs_inner(&fa, &fb).unwrap(), rkhs_inner(&fb, &fa).unwrap());
        prop_assert!((x - y.conj()).norm() <= 1e-12 * x.norm().max(1.0));
    }

    #[test]
    fn order_is_reflexive_and_schur_products_stay_psd(idx in prop::collection::vec(0usize..20, 1..7)) {
        let k = min_kernel();
        let pts: Vec<Point> = idx.iter().map(|&i| Point::Vertex(i)).collect();
        prop_assert!(kernel_leq(&k, &k, &pts, 1e-10).unwrap().holds);
        let sq = product_kernel(&k, &k).unwrap();
        prop_assert!(is_psd(gram(&sq, &pts).unwrap().matrix(), 1e-10).unwrap().is_psd);
    }

    #[test]
    fn energy_pairing_matches_laplacian(
        net in network(),
        seed in any::<u64>(),
    ) {
        let n = net.vertex_count();
        let mut rng = pdboundary::random::rng(seed);
        let f = pdboundary::random::gaussian_vector(&mut rng, n);
        let g = pdboundary::random::gaussian_vector(&mut rng, n);
        let lhs = network::energy_inner(&net, &f, &g).unwrap();
        let rhs: C64 = (0..n)
            .map(|x| f[x].conj() * network::laplacian_apply(&net, &g, x).unwrap())
            .sum();
        let scale = network::energy_norm(&net, &f).unwrap() * network::energy_norm(&net, &g).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn riesz_identity_and_green_symmetry(net in network(), seed in any::<u64>()) {
        let n = net.vertex_count();
        let o = net.base();
        let solver = network::GreenSolver::new(&net).unwrap();
        let mut rng = pdboundary::random::rng(seed);
        let f = pdboundary::random::gaussian_vector(&mut rng, n);
        for x in 0..n {
            let v: Vec<C64> = solver.element(x).unwrap().into_iter().map(|t| C64::new(t, 0.0)).collect();
            let lhs = network::energy_inner(&net, &v, &f).unwrap();
            let rhs = f[x] - f[o];
            prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
            let dn = network::delta_embedding_norm(&net, x).unwrap().powi(2);
            let deg = network::conductance_degree(&net, x).unwrap();
            prop_assert!((dn - deg).abs() <= 1e-12 * deg);
        }
        let g = solver.matrix().unwrap();
        for x in 0..n {
            prop_assert_eq!(g[(o, x)], 0.0);
            for y in 0..n {
                prop_assert_eq!(g[(x, y)], g[(y, x)]);
            }
        }
        let gc = g.map(|t| C64::new(t, 0.0));
        prop_assert!(linalg::min_eigenvalue(&gc) >= -1e-10);
    }

    #[test]
    fn chain_boundary_certifies(n in 1usize..25, refine in 0u32..3) {
        let setup = network::chain_setup(n, 0.5f64.powi(refine as i32)).unwrap();
        let pts: Vec<Point> = (0..=n).map(Point::Vertex).collect();
        prop_assert!(certify(&setup, &pts, 1e-10).unwrap().is_boundary);
    }

    #[test]
    fn adjoint_identity_on_chain(n in 2usize..20, seed in any::<u64>()) {
        let setup = network::chain_setup(n, 0.5).unwrap();
        let pts: Vec<Point> = (1..=n).map(Point::Vertex).collect();
        prop_assert!(boundary::verify_adjoint(&setup, &pts, 5, seed, 1e-10).is_ok());
    }

    #[test]
    fn cantor_self_similarity(m in 1usize..10, coeffs in prop::collection::vec(-1.0..1.0f64, 7)) {
        let poly = |x: f64| coeffs.iter().rev().fold(0.0, |acc, a| acc * x + a);
        let fine = cantor::cantor_nodes(m).unwrap();
        let coarse = cantor::cantor_nodes(m - 1).unwrap();
        let lhs = fine.integrate(|x| C64::new(poly(x), 0.0)).re;
        let rhs = 0.5
            * (coarse.integrate(|x| C64::new(poly(x / 4.0), 0.0)).re
                + coarse.integrate(|x| C64::new(poly((x + 2.0) / 4.0), 0.0)).re);
        let scale = coeffs.iter().map(|a| a.abs()).sum::<f64>().max(1e-300);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
    }

    #[test]
    fn k_lambda4_product_equals_series(
        depth in 0usize..7,
        z in ball_point(1, 0.95),
        w in ball_point(1, 0.95),
    ) {
        let (a, b) = (z.coords()[0], w.coords()[0]);
        let s = cantor::k_lambda4_series(a, b, depth).unwrap();
        let p = cantor::k_lambda4_product(a, b, depth).unwrap();
        prop_assert!((s - p).norm() <= 1e-12 * s.norm().max(1.0));
    }

    #[test]
    fn set_kernel_reproduces(
        weights in prop::collection::vec(0.01..3.0f64, 8),
        density in prop::collection::vec(c64(), 8),
        set in prop::collection::btree_set(0usize..8, 0..8),
    ) {
        let m = boundary::DiscreteMeasure::indexed(weights).unwrap();
        let g = SetRkhsElement::new(&m, density).unwrap();
        let a: Vec<usize> = set.into_iter().collect();
        prop_assert_eq!(g.reproducing_residual(&a).unwrap(), 0.0);
        let fa = SetRkhsElement::section(&m, &a).unwrap();
        let k = gaussian::set_kernel(&m);
        let kaa = k.eval(&Point::set(a.clone()), &Point::set(a.clone())).unwrap().re;
        prop_assert!((fa.norm_sq() - kaa).abs() <= 1e-15 * kaa.max(1.0));
    }

    #[test]
    fn fit_is_the_global_minimum(
        targets in prop::collection::vec(c64(), 5),
        weights in prop::collection::vec(0.1..3.0f64, 5),
        log_beta in -3.0..2.0f64,
        seed in any::<u64>(),
    ) {
        let k = min_kernel();
        let pts: Vec<Point> = (1..=5).map(Point::Vertex).collect();
        let data = TrainingSet::new(pts.clone(), weights, targets).unwrap();
        let beta = 10f64.powf(log_beta);
        let r = learn::fit(&k, &data, beta).unwrap();
        let mut rng = pdboundary::random::rng(seed);
        for _ in 0..20 {
            let c = pdboundary::random::gaussian_vector(&mut rng, 5);
            let other = RkhsElement::new(&k, pts.clone(), c).unwrap();
            prop_assert!(r.objective <= learn::objective(&data, beta, &other).unwrap() * (1.0 + 1e-12));
        }
    }
}
