use gwlab_core::analysis::dx_value;
use gwlab_core::processes::{generate_stream, rng_stream, sample_poisson};
use gwlab_core::walk::{couple_restrict, run_walk, run_walk_naive, step_candidates, UnvisitedSet};
use gwlab_core::{Construction, Line, ProcessSpec, Realization, Site, Space, StopReason, StopRule};
use proptest::prelude::*;

fn spec(kind: usize, window: f64) -> ProcessSpec {
    let (c, space) = match kind {
        0 => (Construction::SingleLinePoisson, Space::single_line(window)),
        1 => (Construction::IntersectingIndependent, Space::intersecting(1.1, window)),
        2 => (Construction::ParallelDuplicated, Space::parallel(0.7, window)),
        3 => (Construction::ParallelThinned { p: 0.4 }, Space::parallel(1.0, window)),
        _ => (Construction::ParallelShifted { s: 0.25 }, Space::parallel(1.0, window)),
    };
    ProcessSpec::new(c, 1.0, space.unwrap()).unwrap()
}

fn rule(truncate: bool) -> StopRule {
    if truncate {
        StopRule::TruncationSafe
    } else {
        StopRule::RunToExhaustion
    }
}

/// Distinct half-integers in `[-l, l)`, so that many distances tie.
fn lattice(l: i32) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(-2 * l..2 * l, 0..30)
        .prop_map(|s| s.into_iter().map(|k| k as f64 / 2.0).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engine_matches_linear_scan(seed in any::<u64>(), kind in 0usize..5, window in 3.0f64..30.0, truncate: bool) {
        let real = generate_stream(&spec(kind, window), seed, 0).unwrap();
        let fast = run_walk(&real, Site::ORIGIN, rule(truncate)).unwrap();
        let slow = run_walk_naive(&real, Site::ORIGIN, rule(truncate)).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn engine_matches_linear_scan_under_ties(a in lattice(6), b in lattice(6), truncate: bool, parallel: bool) {
        let space = if parallel { Space::parallel(1.0, 6.0) } else { Space::intersecting(std::f64::consts::FRAC_PI_2, 6.0) };
        let construction = if parallel { Construction::ParallelThinned { p: 0.5 } } else { Construction::IntersectingIndependent };
        let spec = ProcessSpec::new(construction, 1.0, space.unwrap()).unwrap();
        let real = Realization::from_lines(spec, a, b).unwrap();
        for start in [Site::ORIGIN, Site::new(0.5, Line::One)] {
            let fast = run_walk(&real, start, rule(truncate)).unwrap();
            let slow = run_walk_naive(&real, start, rule(truncate)).unwrap();
            prop_assert_eq!(fast, slow);
        }
    }

    #[test]
    fn truncated_walk_is_a_prefix_of_the_larger_window(seed in any::<u64>(), kind in 0usize..5, window in 4.0f64..40.0, frac in 0.2f64..0.9) {
        let real = generate_stream(&spec(kind, window), seed, 3).unwrap();
        let inner = couple_restrict(&real, window * frac).unwrap();
        let a = run_walk(&inner, Site::ORIGIN, StopRule::TruncationSafe).unwrap();
        let b = run_walk(&real, Site::ORIGIN, StopRule::TruncationSafe).unwrap();
        prop_assert!(a.len() <= b.len());
        prop_assert_eq!(&a.steps[..], &b.steps[..a.len()]);
        if a.stop_reason == StopReason::Exhausted {
            prop_assert_eq!(inner.point_count(), a.len());
        }
    }

    #[test]
    fn triangle_inequality(kind in 0usize..3, alpha in 0.05f64..3.1, r in 0.1f64..3.0,
                           u in prop::array::uniform3(-50.0f64..50.0), lines in prop::array::uniform3(any::<bool>())) {
        let space = match kind {
            0 => Space::single_line(60.0),
            1 => Space::intersecting(alpha, 60.0),
            _ => Space::parallel(r, 60.0),
        }
        .unwrap();
        let site = |i: usize| Site::new(u[i], if kind > 0 && lines[i] { Line::One } else { Line::Zero });
        let m = space.metric();
        let (a, b, c) = (site(0), site(1), site(2));
        prop_assert!((m.distance(a, b) - m.distance(b, a)).abs() <= 1e-9 * (1.0 + m.distance(a, b)));
        prop_assert!(m.distance(a, c) <= m.distance(a, b) + m.distance(b, c) + 1e-9 * (1.0 + m.distance(a, c)));
        prop_assert_eq!(m.distance(a, a), 0.0);
    }

    #[test]
    fn dx_shrinks_when_a_point_is_added(x in 0.5f64..50.0, fr in prop::collection::vec(0.001f64..0.999, 0..12), extra in 0.001f64..0.999) {
        let mut z: Vec<f64> = fr.iter().map(|f| f * x).collect();
        z.sort_by(f64::total_cmp);
        z.dedup();
        let before = dx_value(x, &z);
        prop_assert!(before > 0.0 && before <= x);
        let add = extra * x;
        if !z.contains(&add) {
            z.push(add);
            z.sort_by(f64::total_cmp);
            prop_assert!(dx_value(x, &z) <= before);
        }
    }

    #[test]
    fn candidates_contain_the_nearest_point(seed in any::<u64>(), kind in 0usize..5, drop in prop::collection::vec(any::<bool>(), 64), pick in any::<prop::sample::Index>()) {
        let real = generate_stream(&spec(kind, 12.0), seed, 1).unwrap();
        prop_assume!(real.point_count() > 0);
        let sites: Vec<Site> = real.sites().collect();
        let at = sites[pick.index(sites.len())];
        let mut unvisited = UnvisitedSet::new(real.line0.len(), real.line1.len());
        let mut alive = Vec::new();
        for line in Line::BOTH {
            for (i, &u) in real.line(line).iter().enumerate() {
                let s = Site::new(u, line);
                if s == at || drop[(i + 31 * line.index()) % drop.len()] {
                    unvisited.line_mut(line).remove(i);
                } else {
                    alive.push(s);
                }
            }
        }
        let m = real.space().metric();
        let cands = step_candidates(&real, &mut unvisited, at);
        prop_assert_eq!(cands.is_empty(), alive.is_empty());
        if let Some(best) = cands.best() {
            let nearest = alive.iter().map(|&s| m.distance(at, s)).fold(f64::INFINITY, f64::min);
            prop_assert_eq!(best.dist, nearest);
            prop_assert!(alive.contains(&best.site));
        }
    }

    #[test]
    fn poisson_samples_are_sorted_and_in_range(seed in any::<u64>(), rate in 0.0f64..5.0, lo in -20.0f64..0.0, len in 0.0f64..20.0) {
        let pts = sample_poisson(rate, lo, lo + len, &mut rng_stream(seed, 0));
        prop_assert!(pts.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(pts.iter().all(|&u| u >= lo && u < lo + len));
    }
}

#[test]
fn poisson_count_has_the_right_mean() {
    // Mean 50 per sample; 4000 samples give a standard error of sqrt(50 / 4000).
    let n = 4000;
    let total: usize = (0..n)
        .map(|i| sample_poisson(1.0, -25.0, 25.0, &mut rng_stream(17, i)).len())
        .sum();
    let mean = total as f64 / n as f64;
    let se = (50.0f64 / n as f64).sqrt();
    assert!((mean - 50.0).abs() < 4.0 * se, "mean {mean}");
}
