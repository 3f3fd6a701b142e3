use facloc::audit::{probe_costs, Gcm, Mechanism};
use facloc::line::{lrm, minmaxp, mixed_delta, onlym_decompose, onlym_transform, MixtureParam};
use facloc::model::{agent_expected_cost, egalitarian_cost, max_cost, optimal_solution, Instance, Lottery};
use facloc::plane::{centroid_all, centroid_extremes, accurate_extreme_prediction, GcmConfig};
use facloc::sampling::{random_line_lottery, trial_rng};
use facloc::{Point, Prediction};
use proptest::prelude::*;

fn two_agents() -> impl Strategy<Value = Instance> {
    (-50.0..50.0f64, 0.01..50.0f64).prop_map(|(a, w)| Instance::line(&[a + w, a]).unwrap())
}

fn plane_instance(max: usize) -> impl Strategy<Value = Instance> {
    prop::collection::vec((-20.0..20.0f64, -20.0..20.0f64), 1..max).prop_map(|v| Instance::plane(&v).unwrap())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// On the line, cost = opt + E[d(M, .)].
    #[test]
    fn line_cost_identity(inst in two_agents(), seed in any::<u64>()) {
        let (lo, hi) = inst.extremes().unwrap();
        let mid = (lo + hi) / 2.0;
        let l = random_line_lottery(&mut trial_rng(seed, 0), lo - 10.0, hi + 10.0, 16);
        let lhs = egalitarian_cost(&l, &inst).unwrap();
        let rhs = optimal_solution(&inst).cost + l.expect(|p| (p.x() - mid).abs());
        prop_assert!(close(lhs, rhs, 1e-12));
    }

    /// Two planar points: max distance >= sqrt(d(o, y)^2 + opt^2).
    #[test]
    fn two_point_planar_floor(a in (-10.0..10.0f64, -10.0..10.0f64), b in (-10.0..10.0f64, -10.0..10.0f64),
                              y in (-30.0..30.0f64, -30.0..30.0f64)) {
        let inst = Instance::plane(&[a, b]).unwrap();
        let o = optimal_solution(&inst);
        let y = Point::plane(y.0, y.1);
        let floor = (y.dist(&o.facility).powi(2) + o.cost * o.cost).sqrt();
        prop_assert!(max_cost(&inst, &y) >= floor - 1e-9 * (1.0 + floor));
    }

    /// Expected cost is convex: a lottery costs at least its mean point.
    #[test]
    fn lottery_costs_at_least_its_mean(inst in two_agents(), seed in any::<u64>()) {
        let (lo, hi) = inst.extremes().unwrap();
        let l = random_line_lottery(&mut trial_rng(seed, 1), lo - 5.0, hi + 5.0, 8);
        let mean = Point::line(l.expect(Point::x));
        prop_assert!(egalitarian_cost(&l, &inst).unwrap() >= max_cost(&inst, &mean) - 1e-9);
    }

    #[test]
    fn mixture_cost_is_linear(inst in two_agents(), f in -80.0..80.0f64, delta in 0.0..=0.5f64) {
        let f = Point::line(f);
        let m = mixed_delta(&inst, &f, MixtureParam::new(delta).unwrap()).unwrap();
        let expected = 2.0 * delta * egalitarian_cost(&lrm(&inst).unwrap(), &inst).unwrap()
            + (1.0 - 2.0 * delta) * egalitarian_cost(&minmaxp(&inst, &f).unwrap(), &inst).unwrap();
        prop_assert!(close(egalitarian_cost(&m, &inst).unwrap(), expected, 1e-12));
    }

    /// The OnlyM rewrite keeps total and per-agent costs and leaves no mass
    /// strictly inside the interval except at the midpoint.
    #[test]
    fn onlym_preserves_costs(inst in two_agents(), seed in any::<u64>()) {
        let (lo, hi) = inst.extremes().unwrap();
        let mid = (lo + hi) / 2.0;
        let l = random_line_lottery(&mut trial_rng(seed, 2), lo - 3.0, hi + 3.0, 16);
        let t = onlym_transform(&l, &inst).unwrap();
        let (a, b) = (probe_costs(&l, &inst).unwrap(), probe_costs(&t, &inst).unwrap());
        prop_assert!(close(a.total, b.total, 1e-9));
        prop_assert!(close(a.left, b.left, 1e-9));
        prop_assert!(close(a.right, b.right, 1e-9));
        prop_assert_eq!(t.mass_where(|p| lo < p.x() && p.x() < hi && p.x() != mid), 0.0);
        let d = onlym_decompose(&l, &inst).unwrap();
        for q in [d.q_left, d.q_right].into_iter().flatten() {
            prop_assert!((0.0..=1.0).contains(&q));
        }
    }

    /// Raising one report's coordinate never lowers that output coordinate.
    #[test]
    fn gcm_is_monotone(inst in plane_instance(8), i in 0usize..8, dx in 0.0..10.0f64, dy in 0.0..10.0f64,
                       phantoms in prop::collection::vec((-20.0..20.0f64, -20.0..20.0f64), 0..5)) {
        let i = i % inst.n();
        let cfg = GcmConfig::new(phantoms.iter().map(|&(x, y)| Point::plane(x, y)).collect()).unwrap();
        let mech = Gcm { label: "prop".into(), config: cfg };
        let before = mech.run(&inst, &Prediction::None).unwrap().as_point().unwrap();
        let moved = inst.with_report(i, inst.points()[i] + Point::plane(dx, dy)).unwrap();
        let after = mech.run(&moved, &Prediction::None).unwrap().as_point().unwrap();
        prop_assert!(after.x() >= before.x() && after.y() >= before.y());
    }

    #[test]
    fn centroid_bounds(inst in plane_instance(20)) {
        let n = inst.n() as f64;
        let opt = optimal_solution(&inst).cost;
        let all = egalitarian_cost(&centroid_all(&inst).unwrap(), &inst).unwrap();
        prop_assert!(all <= (2.0 - 1.0 / n) * opt + 1e-9 * (1.0 + opt));
        if inst.n() >= 2 {
            let ext = centroid_extremes(&inst, &accurate_extreme_prediction(&inst).unwrap()).unwrap();
            let c = egalitarian_cost(&ext, &inst).unwrap();
            prop_assert!(c <= 5.0 / 3.0 * opt + 1e-9 * (1.0 + opt));
        }
    }

    /// Agents' expected costs are affine in the mixture weight.
    #[test]
    fn agent_cost_of_mixture(seed in any::<u64>(), w in 0.0..=1.0f64, x in -20.0..20.0f64) {
        let mut rng = trial_rng(seed, 3);
        let a = random_line_lottery(&mut rng, -10.0, 10.0, 6);
        let b = random_line_lottery(&mut rng, -10.0, 10.0, 6);
        let m = Lottery::mixture(&[(w, &a), (1.0 - w, &b)]).unwrap();
        let p = Point::line(x);
        let expected = w * agent_expected_cost(&a, &p) + (1.0 - w) * agent_expected_cost(&b, &p);
        prop_assert!(close(agent_expected_cost(&m, &p), expected, 1e-12));
    }
}
