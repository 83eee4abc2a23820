use std::f64::consts::PI;

use colorcap::bounds::four_cycle_upper_base;
use colorcap::exact::{path_gradient, path_objective, path_ratios, PathSolution, SunflowerObjective, TwoSetsObjective};
use colorcap::{
    bounds_cycle, bounds_general, capacity, capacity_path, capacity_sunflower, capacity_two_sets,
    chebyshev_u, chebyshev_w, count_outputs, subgraph_monotonic_check, ChannelSystem,
    EnumerationConfig, Witness,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sys(q: usize, chans: &[&[usize]]) -> ChannelSystem {
    ChannelSystem::from_lists(q, chans).unwrap()
}

#[test]
fn sunflower_stationary_and_concave() {
    for k in 1..=6 {
        for p in 1..=6 {
            for t in 2..=6 {
                if k + t * p > 16 {
                    continue;
                }
                let g = SunflowerObjective { k, p, t, q: 16 };
                let y = g.stationary_point();
                assert!(g.slope(y).abs() < 1e-9, "k={k} p={p} t={t}");
                assert!(g.curvature(y) < 0.0);
                // Stationary point is a maximum over a grid.
                let best = g.value(y);
                for j in 1..100 {
                    assert!(g.value(j as f64 / 100.0) <= best + 1e-12);
                }
            }
        }
    }
}

#[test]
fn sunflower_derivatives_match_finite_differences() {
    let g = SunflowerObjective { k: 2, p: 3, t: 3, q: 11 };
    let h = 1e-6;
    for j in 1..20 {
        let y = j as f64 / 20.0;
        let fd1 = (g.value(y + h) - g.value(y - h)) / (2.0 * h);
        assert!((fd1 - g.slope(y)).abs() < 1e-6, "slope at {y}");
        let fd2 = (g.slope(y + h) - g.slope(y - h)) / (2.0 * h);
        assert!((fd2 - g.curvature(y)).abs() < 1e-4 * g.curvature(y).abs(), "curvature at {y}");
    }
}

#[test]
fn two_sets_gradient_vanishes_at_optimum() {
    for k in 1..=6 {
        for p1 in 1..=6 {
            for p2 in 1..=6 {
                let m = TwoSetsObjective { k, p1, p2, q: k + p1 + p2 };
                let (x1, x2) = m.optimum();
                assert!(x1 > 0.0 && x2 > 0.0 && x1 + x2 < 1.0);
                let [g1, g2] = m.gradient(x1, x2);
                assert!(g1.abs() < 1e-9 && g2.abs() < 1e-9, "k={k} p1={p1} p2={p2}");
            }
        }
    }
}

#[test]
fn two_sets_hessian_negative_definite() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let m = TwoSetsObjective {
            k: rng.gen_range(1..=6),
            p1: rng.gen_range(1..=6),
            p2: rng.gen_range(1..=6),
            q: 20,
        };
        let x1: f64 = rng.gen_range(0.01..0.98);
        let x2: f64 = rng.gen_range(0.01..(0.99 - x1));
        let [[a, b], [_, d]] = m.hessian(x1, x2);
        assert!(a < 0.0 && a * d - b * b > 0.0, "at ({x1}, {x2})");

        let h = 1e-6;
        let g = m.gradient(x1, x2);
        let fd1 = (m.value(x1 + h, x2) - m.value(x1 - h, x2)) / (2.0 * h);
        let fd2 = (m.value(x1, x2 + h) - m.value(x1, x2 - h)) / (2.0 * h);
        assert!((fd1 - g[0]).abs() < 1e-5 && (fd2 - g[1]).abs() < 1e-5);
        let g_plus = m.gradient(x1 + h, x2);
        let g_minus = m.gradient(x1 - h, x2);
        let d11 = (g_plus[0] - g_minus[0]) / (2.0 * h);
        let d12 = (g_plus[1] - g_minus[1]) / (2.0 * h);
        assert!((d11 - a).abs() < 1e-4 * a.abs().max(1.0));
        assert!((d12 - b).abs() < 1e-4 * b.abs().max(1.0));
    }
}

#[test]
fn path_recursion_endpoint_and_stationarity() {
    for t in 2..=30 {
        let s = PathSolution::new(t).unwrap();
        let last = s.r_star[t - 1];
        assert!((last * (s.m_star - 1.0) - 1.0).abs() < 1e-9, "t={t}");
        assert!(s.r_star.iter().all(|&r| r > 0.0));
        let total: f64 = s.alpha_star.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);

        // Every partial derivative equals the multiplier, which by
        // homogeneity equals the optimum itself.
        let q = t + 1;
        let value = path_objective(&s.alpha_star, q);
        for d in path_gradient(&s.alpha_star, q) {
            assert!((d - value).abs() < 1e-9, "t={t}");
        }
        assert!((value - (s.m_star.ln() / (q as f64).ln())).abs() < 1e-9);
    }
}

#[test]
fn path_optimum_beats_perturbations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in [3, 5, 8] {
        let s = PathSolution::new(t).unwrap();
        let best = path_objective(&s.alpha_star, 10);
        for _ in 0..200 {
            let mut a: Vec<f64> = s
                .alpha_star
                .iter()
                .map(|&x| (x * (1.0 + rng.gen_range(-0.2..0.2))).max(1e-12))
                .collect();
            let sum: f64 = a.iter().sum();
            a.iter_mut().for_each(|x| *x /= sum);
            assert!(path_objective(&a, 10) <= best + 1e-12);
        }
    }
}

#[test]
fn chebyshev_ratio_lemma() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 50 {
        let m: f64 = rng.gen_range(0.05..3.95);
        let u = (m - 2.0) / 2.0;
        let r = path_ratios(m, 12);
        // Stay away from poles of either side.
        let near_pole = (0..=7).any(|i| chebyshev_u(i, u).abs() < 1e-3 || chebyshev_w(i, u).abs() < 1e-3)
            || r.iter().any(|x| x.abs() > 1e6 || (x + 1.0).abs() < 1e-3);
        if near_pole {
            continue;
        }
        for i in 1..=5 {
            let odd = chebyshev_u(i, u) / chebyshev_u(i - 1, u);
            let even = chebyshev_w(i + 1, u) / chebyshev_w(i, u);
            assert!((r[2 * i - 1] - odd).abs() <= 1e-9 * odd.abs().max(1.0), "m={m} i={i}");
            assert!((r[2 * i] - even).abs() <= 1e-9 * even.abs().max(1.0), "m={m} i={i}");
        }
        checked += 1;
    }
}

#[test]
fn chebyshev_root_solutions() {
    for i in 1..=20usize {
        for k in 1..=i + 1 {
            if i % 3 == 0 && 3 * k == 2 * i + 3 {
                continue;
            }
            let x = 2.0 + 2.0 * (2.0 * PI * k as f64 / (2 * i + 3) as f64).cos();
            let u = (x - 2.0) / 2.0;
            let lhs = (x - 1.0) * chebyshev_u(i, u);
            assert!((lhs - chebyshev_u(i - 1, u)).abs() < 1e-9, "U i={i} k={k}");
        }
        for k in 1..=i {
            if (i + 1) % 3 == 0 && 3 * k == 2 * (i + 1) {
                continue;
            }
            let x = 2.0 + 2.0 * (2.0 * PI * k as f64 / (2 * i + 2) as f64).cos();
            let u = (x - 2.0) / 2.0;
            let lhs = (x - 1.0) * chebyshev_w(i, u);
            assert!((lhs - chebyshev_w(i - 1, u)).abs() < 1e-9, "W i={i} k={k}");
        }
    }
}

#[test]
fn path_capacity_is_largest_root() {
    for t in 2..=30 {
        let q = (t + 1).max(2);
        let r = capacity_path(t, q).unwrap();
        let Witness::Path { m_star, .. } = r.witness else { panic!() };
        let expected = m_star.ln() / (q as f64).ln();
        assert!((r.capacity.exact().unwrap() - expected).abs() < 1e-12);
    }
}

#[test]
fn two_sets_with_equal_petals_is_a_sunflower() {
    for k in 1..=6 {
        for p in 1..=6 {
            let q = (k + 2 * p).max(2);
            let a = capacity_two_sets(k, p, p, q).unwrap().capacity.exact().unwrap();
            let b = capacity_sunflower(k, p, 2, q).unwrap().capacity.exact().unwrap();
            assert!((a - b).abs() < 1e-10, "k={k} p={p}");
        }
    }
}

#[test]
fn two_path_matches_sunflower() {
    for q in 3..=8 {
        let a = capacity_path(2, q).unwrap().capacity.exact().unwrap();
        let b = capacity_sunflower(1, 1, 2, q).unwrap().capacity.exact().unwrap();
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn cycle_bounds() {
    assert!((four_cycle_upper_base() - (2.0 + 3f64.sqrt())).abs() < 1e-12);
    for q in 4..=8 {
        let c = bounds_cycle(4, q).unwrap();
        let s = capacity_sunflower(2, 1, 2, q).unwrap().capacity.exact().unwrap();
        assert!((c.capacity.upper() - s).abs() < 1e-9);
        let p = capacity_path(3, q).unwrap().capacity.exact().unwrap();
        assert_eq!(c.capacity.lower(), p);
    }
    let c5 = bounds_cycle(5, 5).unwrap();
    assert!((c5.capacity.upper() - 4f64.ln() / 5f64.ln()).abs() < 1e-15);
    assert!(c5.capacity.lower() < c5.capacity.upper());
    assert!(bounds_cycle(3, 5).is_err());
    assert!(bounds_cycle(6, 5).is_err());
}

#[test]
fn exact_values_sit_inside_general_bounds() {
    let systems = [
        sys(3, &[&[1, 3], &[2, 3]]),
        sys(4, &[&[1, 2, 3], &[1, 2, 4]]),
        sys(4, &[&[1, 2], &[1, 3, 4]]),
        sys(4, &[&[1, 2], &[1, 3], &[1, 4]]),
        sys(4, &[&[1, 2], &[2, 3], &[3, 4]]),
        sys(6, &[&[1, 2, 3], &[1, 4, 5]]),
        sys(7, &[&[1, 2], &[2, 3], &[3, 4], &[4, 5], &[5, 6], &[6, 7]]),
        sys(8, &[&[1, 2, 3], &[1, 2, 4], &[1, 2, 5]]),
    ];
    for s in &systems {
        let exact = capacity(s).capacity.exact().unwrap();
        let b = bounds_general(s).unwrap();
        assert!(b.capacity.lower() <= exact + 1e-12 && exact <= b.capacity.upper() + 1e-12, "{s}");
    }
}

#[test]
fn subgraph_monotonicity() {
    let cfg = EnumerationConfig::default();
    let path = sys(4, &[&[1, 2], &[2, 3], &[3, 4]]);
    let cycle = sys(4, &[&[1, 2], &[2, 3], &[3, 4], &[4, 1]]);
    let full = sys(4, &[&[1, 2, 3, 4]]);
    for n in 1..=6 {
        assert!(subgraph_monotonic_check(&path, &cycle, n, &cfg).unwrap());
        assert!(subgraph_monotonic_check(&cycle, &full, n, &cfg).unwrap());
    }
    assert!(subgraph_monotonic_check(&cycle, &path, 3, &cfg).is_err());
    assert!(subgraph_monotonic_check(&sys(4, &[&[1], &[2, 3]]), &full, 3, &cfg).is_err());
}

#[test]
fn four_cycle_counts_sit_between_path_and_clique() {
    let cfg = EnumerationConfig::default();
    let path = sys(4, &[&[1, 2], &[2, 3], &[3, 4]]);
    let cycle = sys(4, &[&[1, 2], &[2, 3], &[3, 4], &[4, 1]]);
    let star = sys(4, &[&[1, 2, 3], &[1, 3, 4]]);
    let mut prev = num_bigint::BigUint::from(0u8);
    for n in 1..=7 {
        let p = count_outputs(&path, n, &cfg).unwrap();
        let c = count_outputs(&cycle, n, &cfg).unwrap();
        let s = count_outputs(&star, n, &cfg).unwrap();
        assert!(p.count <= c.count && c.count <= s.count);
        assert!(c.rate <= 1.0);
        assert!(c.count > prev);
        prev = c.count;
    }
}
