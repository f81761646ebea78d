use netdeploy::rng::layer_count_from_variate;
use netdeploy::stats::{chi2_uniform, radial_ks};
use netdeploy::{
    annulus_area, deploy_automatic, deploy_planned, sample_layer_count, sample_point_in_annulus,
    sector_area, sector_density, split_nodes, DeploymentPlan, NetworkConfig, Origin, Point,
    RandomStream, SectorSpec,
};
use proptest::prelude::*;

fn ulps(a: f64, b: f64) -> u64 {
    (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
}

/// Round half down, floored at 2 (`v = 3/2` only occurs for `u = 0`).
fn nearest_rounding_half_down(u: f64, n_max: usize) -> usize {
    let v = 1.5 + u * (n_max as f64 - 1.0);
    ((v - 0.5).ceil() as usize).max(2)
}

proptest! {
    #[test]
    fn annulus_area_is_additive(r in 1e-3f64..10.0, extra in 1e-3f64..10.0) {
        let big = r + extra;
        let parts = annulus_area(0.0, r).unwrap() + annulus_area(r, big).unwrap();
        let whole = annulus_area(0.0, big).unwrap();
        prop_assert!(ulps(parts, whole) <= 4, "{parts} vs {whole}");
    }

    #[test]
    fn density_times_area_is_count(r in 1e-2f64..100.0, n in 1usize..100_000) {
        let s = SectorSpec::disk(r, n);
        let back = sector_density(&s).unwrap() * sector_area(&s).unwrap();
        prop_assert!(ulps(back, n as f64) <= 4);
    }

    #[test]
    fn threshold_scan_matches_rounding(u in 0.0f64..1.0, n_max in 2usize..200) {
        prop_assert_eq!(
            layer_count_from_variate(u, n_max).unwrap(),
            nearest_rounding_half_down(u, n_max)
        );
    }

    #[test]
    fn split_conserves(nodes in 2usize..100_000, layers in 2usize..1000) {
        prop_assume!(layers <= nodes);
        let (n_in, n_out) = split_nodes(nodes, layers).unwrap();
        prop_assert_eq!(n_in + (layers - 1) * n_out, nodes);
        prop_assert_eq!(n_in - n_out, nodes % layers);
    }

    #[test]
    fn points_stay_in_their_layer(seed in any::<u64>(), size in 0.1f64..100.0, max_layers in 2usize..12, extra in 0usize..300) {
        let config = NetworkConfig::new(size, max_layers, max_layers + extra, seed);
        let d = deploy_automatic(&config, &mut RandomStream::new(seed, 0)).unwrap();
        prop_assert_eq!(d.points.len(), config.nodes);
        let Origin::Automatic { plan, .. } = &d.origin else { unreachable!() };
        prop_assert!((2..=max_layers).contains(&plan.layer_count()));
        prop_assert_eq!(plan.total_nodes(), config.nodes);
        for p in &d.points {
            prop_assert!(d.point_in_sector(p), "{p:?}");
        }
        // tags are non-decreasing: innermost layer first
        prop_assert!(d.points.windows(2).all(|w| w[0].sector <= w[1].sector));
    }

    #[test]
    fn planned_counts_exact(seed in any::<u64>(), a in 1usize..200, b in 1usize..200, c in 1usize..200) {
        let plan = DeploymentPlan::new(vec![
            SectorSpec::disk(1.0, a),
            SectorSpec::annulus(1.0, 2.0, b),
            SectorSpec::rect(3.0, -1.0, 4.0, 1.0, c),
        ]).unwrap();
        let d = deploy_planned(&plan, seed, 0).unwrap();
        let count = |t: u32| d.points.iter().filter(|p| p.sector == t).count();
        prop_assert_eq!((count(1), count(2), count(3)), (a, b, c));
        prop_assert!(d.points.iter().all(|p| d.point_in_sector(p)));
    }
}

#[test]
fn threshold_scan_matches_rounding_at_half_integers() {
    for n_max in 2..50usize {
        for k in 0..(n_max - 1) {
            let u = k as f64 / (n_max - 1) as f64;
            assert_eq!(
                layer_count_from_variate(u, n_max).unwrap(),
                nearest_rounding_half_down(u, n_max),
                "u={u} n_max={n_max}"
            );
        }
    }
}

#[test]
fn layer_count_chi_square() {
    let mut s = RandomStream::new(2024, 0);
    for _ in 0..100_000 {
        assert_eq!(sample_layer_count(2, &mut s).unwrap(), 2);
    }
    for n_max in [3usize, 5, 10] {
        let mut s = RandomStream::new(n_max as u64, 0);
        let mut counts = vec![0usize; n_max - 1];
        for _ in 0..100_000 {
            counts[sample_layer_count(n_max, &mut s).unwrap() - 2] += 1;
        }
        let out = chi2_uniform(&counts, 0.001).unwrap();
        assert!(out.pass, "n_max={n_max} {out:?}");
    }
}

#[test]
fn single_disk_radial_law() {
    let plan = DeploymentPlan::new(vec![SectorSpec::disk(2.0, 10_000)]).unwrap();
    let d = deploy_planned(&plan, 77, 0).unwrap();
    assert!(radial_ks(&d.points, 0.0, 2.0, 0.01).unwrap().pass);
}

#[test]
fn sector_points_do_not_depend_on_other_sectors() {
    let ring = SectorSpec::annulus(1.0, 2.0, 25);
    let a = DeploymentPlan::new(vec![SectorSpec::disk(0.5, 10), ring]).unwrap();
    let b = DeploymentPlan::new(vec![SectorSpec::rect(5.0, 5.0, 6.0, 6.0, 300), ring]).unwrap();
    let ring_of = |plan: &DeploymentPlan| -> Vec<Point> {
        deploy_planned(plan, 5, 0)
            .unwrap()
            .points
            .into_iter()
            .filter(|p| p.sector == 2)
            .collect()
    };
    assert_eq!(ring_of(&a), ring_of(&b));
}

#[test]
fn angle_marginal_of_annulus_sampler() {
    let mut s = RandomStream::new(8, 1);
    let pts: Vec<Point> = (0..10_000)
        .map(|_| {
            let (x, y) = sample_point_in_annulus(0.3, 0.7, &mut s).unwrap();
            Point { x, y, sector: 1 }
        })
        .collect();
    assert!(
        netdeploy::stats::angular_chi2(&pts, 36, 0.001)
            .unwrap()
            .pass
    );
}
