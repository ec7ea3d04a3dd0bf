mod common;

use common::{oracle_agreement, oracle_grow};
use proptest::prelude::*;
use std::f64::consts::PI;
use vortexkit::geometry::dist;
use vortexkit::merging::*;

fn seeds_strategy(max: usize) -> impl Strategy<Value = Vec<Seed>> {
    prop::collection::vec(
        (
            -1.0f64..1.0,
            -1.0f64..1.0,
            prop::sample::select(vec![-2i64, -1, 1, 1, 2, 3]),
        ),
        1..=max,
    )
    .prop_map(|v| v.into_iter().map(|(x, y, d)| Seed::new([x, y], d)).collect())
    .prop_filter("distinct centers", |s: &Vec<Seed>| {
        s.iter().enumerate().all(|(i, a)| s[..i].iter().all(|b| a.center != b.center))
    })
}

fn opts() -> GrowthOptions {
    GrowthOptions {
        record_snapshots: true,
        ..GrowthOptions::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn radius_sums_agree_at_every_event(seeds in seeds_strategy(6), eta in 0.01f64..3.0) {
        let s = grow_and_merge(&seeds, eta, &opts()).unwrap();
        for snap in &s.snapshots {
            let p: f64 = snap.plus.iter().map(|b| b.radius).sum();
            let m: f64 = snap.minus.iter().map(|b| b.radius).sum();
            let nonzero_frozen: f64 = snap.plus.iter().filter(|b| b.esg == 0.0).map(|b| b.radius).sum();
            // cancelled balls stay in plus but their members remain in minus
            prop_assert!((p - m).abs() <= 1e-12 * p.max(1e-300) || nonzero_frozen > 0.0);
        }
        if !s.stalled {
            prop_assert!((s.radius_sum_plus() - eta).abs() <= 1e-9);
        }
    }

    #[test]
    fn plus_balls_disjoint_and_cover_seeds(seeds in seeds_strategy(6), eta in 0.01f64..3.0) {
        let s = grow_and_merge(&seeds, eta, &opts()).unwrap();
        // states between events: the last snapshot at each event time
        let settled = s.snapshots.iter().enumerate()
            .filter(|(i, x)| s.snapshots.get(i + 1).is_none_or(|n| n.t > x.t))
            .map(|(_, x)| x);
        for snap in settled {
            for (i, a) in snap.plus.iter().enumerate() {
                for b in &snap.plus[i + 1..] {
                    prop_assert!(dist(a.center, b.center) > a.radius + b.radius - 1e-12);
                }
            }
            for seed in &seeds {
                prop_assert!(snap.plus.iter().any(|b| dist(b.center, seed.center) <= b.radius + 1e-12));
            }
        }
        for (i, a) in s.balls_minus.iter().enumerate() {
            for b in &s.balls_minus[i + 1..] {
                prop_assert!(dist(a.center, b.center) > a.radius + b.radius - 1e-12);
            }
        }
    }

    #[test]
    fn final_balls_obey_growth_bound(seeds in seeds_strategy(5), eta in 0.01f64..2.0) {
        let s = grow_and_merge(&seeds, eta, &GrowthOptions::default()).unwrap();
        for b in s.balls_minus.iter().filter(|b| b.esg > 0.0) {
            prop_assert!(b.radius <= b.esg * s.t * (1.0 + 1e-12) + 1e-15);
        }
    }

    #[test]
    fn merged_esg_is_subadditive(a in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]),
                                 b in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3])) {
        let ball = |id: usize, c: [f64; 2], d: i64| Ball {
            id,
            center: c,
            radius: 1.0,
            enclosed_seed_ids: vec![id],
            class_label: d,
            esg: PI * d.unsigned_abs() as f64,
            state: BallState::Frozen,
            collection: Collection::Plus,
        };
        let (x, y) = (ball(0, [0.0, 0.0], a), ball(1, [1.0, 0.0], b));
        let m = merge_pair(&x, &y, 2, &CircleClasses).unwrap();
        prop_assert!(m.esg <= x.esg + y.esg);
        prop_assert_eq!(m.radius, 2.0);
    }

    #[test]
    fn disjointify_preserves_radius_and_containment(
        raw in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0, 0.05f64..1.0), 0..8)
    ) {
        let balls: Vec<Ball> = raw.iter().enumerate().map(|(i, &(x, y, r))| Ball {
            id: i,
            center: [x, y],
            radius: r,
            enclosed_seed_ids: vec![i],
            class_label: 1,
            esg: PI,
            state: BallState::Frozen,
            collection: Collection::Plus,
        }).collect();
        let out = disjointify(&balls, &CircleClasses);
        let rin: f64 = balls.iter().map(|b| b.radius).sum();
        let rout: f64 = out.iter().map(|b| b.radius).sum();
        prop_assert!((rin - rout).abs() <= 1e-12 * rin.max(1.0));
        for (i, a) in out.iter().enumerate() {
            for b in &out[i + 1..] {
                prop_assert!(dist(a.center, b.center) > a.radius + b.radius - 1e-12);
            }
        }
        for b in &balls {
            let owners = out.iter().filter(|o| o.enclosed_seed_ids.contains(&b.id)).count();
            prop_assert_eq!(owners, 1);
            let o = out.iter().find(|o| o.enclosed_seed_ids.contains(&b.id)).unwrap();
            prop_assert!(dist(o.center, b.center) + b.radius <= o.radius + 1e-9);
        }
    }
}

#[test]
fn event_logs_are_deterministic() {
    let seeds = vec![
        Seed::new([0.0, 0.0], 1),
        Seed::new([0.3, 0.1], -1),
        Seed::new([-0.4, 0.2], 2),
        Seed::new([0.1, -0.5], 1),
    ];
    let a = serde_json::to_string(&grow_and_merge(&seeds, 1.5, &GrowthOptions::default()).unwrap()).unwrap();
    let runs: Vec<String> = std::thread::scope(|s| {
        let hs: Vec<_> = (0..4)
            .map(|_| s.spawn(|| serde_json::to_string(&grow_and_merge(&seeds, 1.5, &GrowthOptions::default()).unwrap()).unwrap()))
            .collect();
        hs.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert!(runs.iter().all(|r| *r == a));
}

#[test]
fn agrees_with_explicit_stepper() {
    let (mismatched, worst) = oracle_agreement(50, 7);
    assert_eq!(mismatched, 0);
    assert!(worst <= 1e-6, "worst deviation {worst}");
}

#[test]
fn oracle_reproduces_hand_example() {
    let o = oracle_grow(&[[-0.05, 0.0], [0.05, 0.0]], &[1, 1], 0.5);
    assert_eq!(o.balls.len(), 1);
    assert!((o.balls[0].radius - 0.5).abs() < 1e-6);
    assert!(o.balls[0].center[0].abs() < 1e-6);
}
