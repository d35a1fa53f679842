use ghostfield::bell::BellConfig;
use ghostfield::sampling::{uniform_direction, worker_rng};
use ghostfield::{
    bell_sum, build_quadrature, lhv_bruteforce_max, mixture_bell_value, naive_field, quasi_field,
    reduced_trine_expression, trine_config, CorrelationModel, DeterministicStrategy, Direction,
    ExactQuantum, FixedMatrix, LocalGhost, LocalGhostMonteCarlo, LocalGhostQuadrature, McPlan,
    NonlocalEmpirical, NonlocalGhost, TwoSpinState,
};
use rand::Rng;

fn random_config(rng: &mut impl Rng) -> BellConfig<f64> {
    loop {
        let [a, b, c]: [Direction; 3] = std::array::from_fn(|_| uniform_direction(rng));
        if let Ok(cfg) = BellConfig::new(a, b, c) {
            return cfg;
        }
    }
}

/// Independent oracle: correlations of a deterministic mixture written out
/// pair by pair, with s_b = −s_a.
fn mixture_oracle(weights: &[f64; 8]) -> f64 {
    let mut e = [0.0; 3];
    for (k, w) in weights.iter().enumerate() {
        let s: [f64; 3] = std::array::from_fn(|i| if (k >> (2 - i)) & 1 == 0 { 1.0 } else { -1.0 });
        for (slot, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            e[slot] += w * s[i] * -s[j];
        }
    }
    e.iter().sum()
}

#[test]
fn enumeration_bounds() {
    let lhv = lhv_bruteforce_max();
    assert_eq!(lhv.strategies.len(), 8);
    assert_eq!((lhv.max_s, lhv.min_sigma), (1, 1));
    for (s, value, sigma) in &lhv.strategies {
        assert!(*value == 1 || *value == -3);
        let sum: i32 = s.s_a.iter().map(|o| i32::from(o.value())).sum();
        assert_eq!(*sigma, sum * sum);
        assert_eq!(2 * value, 3 - sigma);
    }
    assert_eq!(lhv.strategies.iter().filter(|t| t.1 == -3).count(), 2);
}

#[test]
fn convex_mixtures_stay_below_the_bound() {
    let mut rng = worker_rng(31, 0);
    let bound = f64::from(lhv_bruteforce_max().max_s);
    for _ in 0..1000 {
        // exponential spacings give a uniform point on the simplex
        let raw: [f64; 8] = std::array::from_fn(|_| -(1.0 - rng.gen::<f64>()).ln());
        let total: f64 = raw.iter().sum();
        let w = raw.map(|x| x / total);
        let s = mixture_bell_value(&w).unwrap();
        assert!(s <= bound + 1e-12);
        assert!((s - mixture_oracle(&w)).abs() <= 1e-12);
    }
    assert!(mixture_bell_value(&[0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.1]).is_err());
    assert!(mixture_bell_value(&[1.5, -0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).is_err());
}

#[test]
fn trine_values() {
    let t = trine_config();
    let cases: [(Box<dyn CorrelationModel<f64>>, f64, bool); 4] = [
        (Box::new(ExactQuantum::singlet()), 1.5, true),
        (Box::new(LocalGhost::naive()), 0.5, false),
        (Box::new(LocalGhost::quasi()), 1.5, true),
        (Box::new(FixedMatrix::counterexample_5_12()), -0.5, false),
    ];
    for (model, s, violated) in cases {
        let r = bell_sum(model.as_ref(), &t).unwrap();
        assert!((r.s - s).abs() <= 1e-12, "{}: {}", r.model_name, r.s);
        assert_eq!(r.violated, violated);
        assert_eq!(r.bound, 1.0);
        assert!(r.s_stderr.is_none());
    }
    assert!((reduced_trine_expression(&ExactQuantum::<f64>::singlet()).unwrap() - 1.5).abs() <= 1e-12);
    assert!((reduced_trine_expression(&NonlocalGhost::<f64>::singlet()).unwrap() - 1.5).abs() <= 1e-12);
}

#[test]
fn nonlocal_matrix_model_matches_quantum_everywhere() {
    let mut rng = worker_rng(32, 0);
    for _ in 0..200 {
        let cfg = random_config(&mut rng);
        let q = bell_sum(&ExactQuantum::singlet(), &cfg).unwrap();
        let n = bell_sum(&NonlocalGhost::singlet(), &cfg).unwrap();
        assert!((q.s - n.s).abs() <= 1e-12);
    }
}

#[test]
fn permutation_symmetry() {
    let mut rng = worker_rng(33, 0);
    let models: Vec<Box<dyn CorrelationModel<f64>>> = vec![
        Box::new(ExactQuantum::singlet()),
        Box::new(LocalGhost::naive()),
        Box::new(LocalGhost::quasi()),
        Box::new(NonlocalGhost::singlet()),
    ];
    for _ in 0..50 {
        let c = random_config(&mut rng);
        let perms = [(c.a, c.b, c.c), (c.b, c.a, c.c), (c.c, c.b, c.a), (c.b, c.c, c.a)];
        for m in &models {
            let base = bell_sum(m.as_ref(), &c).unwrap().s;
            for (x, y, z) in perms {
                let s = bell_sum(m.as_ref(), &BellConfig::new(x, y, z).unwrap()).unwrap().s;
                assert!((s - base).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn trine_is_rotation_invariant() {
    let t = trine_config::<f64>();
    let mut rng = worker_rng(34, 0);
    for _ in 0..20 {
        let axis: Direction = uniform_direction(&mut rng);
        let angle = rng.gen::<f64>() * std::f64::consts::TAU;
        let r = BellConfig::new(
            t.a.rotated_about(&axis, angle),
            t.b.rotated_about(&axis, angle),
            t.c.rotated_about(&axis, angle),
        )
        .unwrap();
        for m in [&ExactQuantum::singlet() as &dyn CorrelationModel<f64>, &LocalGhost::quasi()] {
            assert!((bell_sum(m, &r).unwrap().s - 1.5).abs() <= 1e-12);
        }
        assert!((bell_sum(&LocalGhost::naive(), &r).unwrap().s - 0.5).abs() <= 1e-12);
    }
}

#[test]
fn quadrature_model_matches_closed_form() {
    let model = LocalGhostQuadrature::<f64> {
        dist: quasi_field(),
        quad: build_quadrature(32, 64).unwrap(),
        label: "quasi-local-quad".into(),
    };
    let r = bell_sum(&model, &trine_config()).unwrap();
    assert!((r.s - 1.5).abs() <= 1e-10);
}

#[test]
fn sampled_models_agree_with_closed_forms() {
    let t = trine_config();
    let plan = McPlan::new(1_000_000, 2718).with_workers(4);
    let sampled: [(Box<dyn CorrelationModel<f64>>, f64); 3] = [
        (Box::new(LocalGhostMonteCarlo { dist: quasi_field(), plan, label: "quasi-local-mc".into() }), 1.5),
        (Box::new(LocalGhostMonteCarlo { dist: naive_field(), plan, label: "naive-local-mc".into() }), 0.5),
        (Box::new(NonlocalEmpirical { state: TwoSpinState::singlet(), plan }), 1.5),
    ];
    for (model, closed) in sampled {
        let r = bell_sum(model.as_ref(), &t).unwrap();
        let se = r.s_stderr.expect("sampled model reports an error bar");
        assert!((r.s - closed).abs() <= 4.0 * se, "{}: {} ± {}", r.model_name, r.s, se);
        assert_eq!(r, bell_sum(model.as_ref(), &t).unwrap());
    }
}

#[test]
fn report_serializes_with_expected_fields() {
    let r = bell_sum(&ExactQuantum::<f64>::singlet(), &trine_config()).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    let obj = v.as_object().unwrap();
    for key in ["e_ab", "e_ac", "e_bc", "s", "bound", "violated", "model_name", "config"] {
        assert!(obj.contains_key(key), "missing {key}");
    }
    assert!(!obj.contains_key("s_stderr"));
    assert_eq!(obj["config"]["a"].as_array().unwrap().len(), 3);
    assert_eq!(obj["violated"], true);
}

#[test]
fn strategy_listing_order() {
    let all = DeterministicStrategy::all();
    assert_eq!(all[0].bell_value(), -3);
    assert_eq!(all[7].bell_value(), -3);
    assert!(all[1..7].iter().all(|s| s.bell_value() == 1));
}
