mod support;

use mdmkit::geometry::{
    convex_hull_2d, dist_point_segment, dist_to_network, polygon_perimeter, resample,
    EmbeddedNetwork, Point, PolyCurve,
};
use proptest::prelude::*;
use rand::Rng;
use support::*;

#[test]
fn tiny_segment_matches_sampling() {
    let (a, b) = (p2(0.0, 0.0), p2(0.0, 0.0001));
    let p = p2(3.0, 4.0);
    let (d, t) = dist_point_segment(&p, &a, &b).unwrap();
    let net = EmbeddedNetwork::segment(a, b).unwrap();
    let oracle = sampled_dist(&p, &net, 100_000);
    assert!((d - oracle).abs() < 1e-12, "{d} vs {oracle}");
    assert_eq!(t, 1.0);
    // the sampled value sits just under 5
    assert!(d < 5.0 && d > 4.9999);
}

#[test]
fn right_angle_bisector_point_has_two_feet() {
    let net = EmbeddedNetwork::path(right_angle()).unwrap();
    let p = p2(0.2, 0.2);
    let d = dist_to_network(&p, &net);
    assert!((d.distance - 0.2).abs() < 1e-15);
    assert!((d.distance - sampled_dist(&p, &net, 10_000)).abs() < 1e-12);
    let mut feet: Vec<Point> = d.nearest.iter().map(|f| f.point).collect();
    feet.sort_by(|a, b| a.x().total_cmp(&b.x()));
    assert_eq!(feet.len(), 2);
    assert!(feet[0].dist(&p2(0.0, 0.2)) < 1e-15 && feet[1].dist(&p2(0.2, 0.0)) < 1e-15);
}

#[test]
fn circle_center_has_many_ties() {
    let curve = PolyCurve::arc(p2(0.0, 0.0), 1.0, 0.0, std::f64::consts::TAU, 64).unwrap();
    let d = dist_to_network(&p2(0.0, 0.0), &curve.to_network());
    assert!((d.distance - (std::f64::consts::PI / 64.0).cos()).abs() < 1e-12);
    assert_eq!(d.nearest.len(), 64);
}

#[test]
fn hull_perimeter_against_pairwise_scan() {
    let mut rng = rng(11);
    let pts: Vec<Point> = (0..1000)
        .map(|_| {
            let (r, t): (f64, f64) = (
                rng.random::<f64>().sqrt(),
                rng.random::<f64>() * std::f64::consts::TAU,
            );
            p2(r * t.cos(), r * t.sin())
        })
        .collect();
    let hull = convex_hull_2d(&pts).unwrap();
    let per = polygon_perimeter(&hull);
    assert!(per <= std::f64::consts::TAU);
    // brute force: a point is extreme iff some direction maximizes it
    for h in &hull {
        assert!(pts.contains(h));
    }
    for dir in 0..720 {
        let t = dir as f64 * std::f64::consts::PI / 360.0;
        let u = p2(t.cos(), t.sin());
        let best = pts
            .iter()
            .map(|p| p.dot(&u))
            .fold(f64::NEG_INFINITY, f64::max);
        let hull_best = hull
            .iter()
            .map(|p| p.dot(&u))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((best - hull_best).abs() < 1e-15);
    }
}

#[test]
fn quarter_circle_resampled_length() {
    let arc = PolyCurve::arc(p2(0.0, 0.0), 1.0, 0.0, std::f64::consts::FRAC_PI_2, 2000).unwrap();
    let c = resample(&arc, 0.01).unwrap();
    assert!((c.length() - std::f64::consts::FRAC_PI_2).abs() < 1e-4);
    assert!(c.max_segment_length() <= 0.01 + 1e-12);
}

#[test]
fn schema_round_trips() {
    let net = EmbeddedNetwork::new(
        vec![p2(0.0, 0.0), p2(1.0, 0.5), p2(2.0, 0.0)],
        vec![(0, 1), (1, 2)],
    )
    .unwrap();
    let s = serde_json::to_string(&net).unwrap();
    assert_eq!(
        s,
        r#"{"nodes":[[0.0,0.0],[1.0,0.5],[2.0,0.0]],"edges":[[0,1],[1,2]]}"#
    );
    let back: EmbeddedNetwork = serde_json::from_str(&s).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), s);
    let c = PolyCurve::new(vec![Point::new3(0.0, 0.0, 0.0), Point::new3(0.1, 0.2, 0.3)]).unwrap();
    let s = serde_json::to_string(&c).unwrap();
    assert_eq!(s, r#"{"vertices":[[0.0,0.0,0.0],[0.1,0.2,0.3]]}"#);
    let back: PolyCurve = serde_json::from_str(&s).unwrap();
    assert_eq!(back, c);
    assert!(
        serde_json::from_str::<EmbeddedNetwork>(r#"{"nodes":[[0,0]],"edges":[[0,1]]}"#).is_err()
    );
    assert!(serde_json::from_str::<Point>("[1]").is_err());
}

fn arb_point() -> impl Strategy<Value = Point> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y)| p2(x, y))
}

fn arb_network() -> impl Strategy<Value = EmbeddedNetwork> {
    (any::<u64>(), 1usize..8).prop_map(|(seed, e)| random_tree(&mut rng(seed), e))
}

proptest! {
    #[test]
    fn distance_is_one_lipschitz(net in arb_network(), p in arb_point(), q in arb_point()) {
        let (dp, dq) = (dist_to_network(&p, &net).distance, dist_to_network(&q, &net).distance);
        prop_assert!((dp - dq).abs() <= p.dist(&q) + 1e-12);
    }

    #[test]
    fn distance_matches_projection_oracle(net in arb_network(), p in arb_point()) {
        let segs: Vec<_> = net.segments().into_iter().map(|(a, b)| ([a.x(), a.y()], [b.x(), b.y()])).collect();
        let d = dist_to_network(&p, &net);
        prop_assert!((d.distance - net_dist(p.x(), p.y(), &segs)).abs() < 1e-12);
        for f in &d.nearest {
            prop_assert!((p.dist(&f.point) - d.distance).abs() < 1e-9);
        }
    }

    #[test]
    fn hull_contains_all_points(seed in any::<u64>(), n in 3usize..60) {
        let pts = random_points(&mut rng(seed), n);
        let hull = convex_hull_2d(&pts).unwrap();
        let k = hull.len();
        for p in &pts {
            for i in 0..k {
                let (a, b) = (hull[i], hull[(i + 1) % k]);
                prop_assert!((b - a).cross2(&(*p - a)) >= -1e-12);
            }
        }
    }

    #[test]
    fn resample_keeps_shape(seed in any::<u64>(), h in 0.01..0.5f64) {
        let mut r = rng(seed);
        let verts: Vec<Point> = (0..5).map(|i| p2(i as f64 * 0.3, r.random::<f64>())).collect();
        let c = PolyCurve::new(verts).unwrap();
        let s = resample(&c, h).unwrap();
        prop_assert!((s.length() - c.length()).abs() < 1e-9 * c.length().max(1.0));
        prop_assert!(s.max_segment_length() <= h + 1e-12);
        for v in c.vertices() {
            prop_assert!(s.vertices().iter().any(|w| w.dist(v) < 1e-12));
        }
    }

    #[test]
    fn point_json_round_trip(x in -1e6..1e6f64, y in -1e6..1e6f64, z in -1e6..1e6f64) {
        for p in [p2(x, y), Point::new3(x, y, z)] {
            let s = serde_json::to_string(&p).unwrap();
            let back: Point = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, p);
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), s);
        }
    }
}
