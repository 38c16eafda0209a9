mod common;

use excitonkit::analytics::{collection_series, detect_route, monogamy_score};
use excitonkit::correlations::{self, negativity_site_vs_rest};
use excitonkit::evolution::propagate;
use excitonkit::linalg::{c, hermiticity_error, CMatrix};
use excitonkit::netmodel::build_fcn;
use excitonkit::{dense, Liouvillian, Measure, Preset, PropagationOptions, RouteOptions, SubspaceState};
use proptest::prelude::*;

fn rates(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..80.0f64, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generator_is_traceless_and_hermitian(
        coupling in -80.0..80.0f64,
        onsite in prop::collection::vec(-200.0..200.0f64, 4),
        diss in rates(4),
        deph in rates(4),
        sink in 0.0..80.0f64,
        seed in any::<u64>(),
    ) {
        let spec = build_fcn(4, coupling, &onsite, &diss, &deph, sink, 2).unwrap();
        let l = Liouvillian::new(&spec);
        let rho = common::ginibre(&mut common::rng(seed), spec.subspace_dim());
        let out = l.apply(&rho);
        prop_assert!(out.trace().norm() < 1e-10 * (1.0 + out.norm()));
        prop_assert!(hermiticity_error(&out) < 1e-10 * (1.0 + out.norm()));
    }

    #[test]
    fn short_runs_keep_a_valid_state(
        coupling in 10.0..80.0f64,
        deph in rates(3),
        sink in 0.0..80.0f64,
        start in 1usize..=3,
    ) {
        let spec = build_fcn(3, coupling, &[0.0, 30.0, -30.0], &[0.0; 3], &deph, sink, 3).unwrap();
        let rho0 = SubspaceState::basis(start, spec.subspace_dim()).unwrap();
        let traj = propagate(&spec, &rho0, PropagationOptions::new(0.5, 1e-3, 0.05)).unwrap();
        let sink_pop = traj.sink_population();
        for w in sink_pop.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-9);
        }
        for s in traj.states() {
            prop_assert!((s.trace() - 1.0).abs() < 1e-8);
            prop_assert!(s.min_eigenvalue() > -1e-8);
            let t = s.trace_out_sink().unwrap();
            prop_assert!((t.trace() - 1.0).abs() < 1e-8);
            prop_assert!(t.min_eigenvalue() > -1e-8);
        }
    }

    #[test]
    fn negativity_fast_path_matches_embedding(seed in any::<u64>(), n in 3usize..=6, pick in 0usize..6) {
        let state = common::subspace_state(&mut common::rng(seed), n);
        let i = 1 + pick % n;
        let split = dense::qubit_bipartition(&state.embed_full().unwrap(), n, i).unwrap();
        let slow = dense::negativity(&split, 2, 1 << (n - 1)).unwrap();
        let fast = negativity_site_vs_rest(&state, i).unwrap();
        prop_assert!((fast - slow).abs() < 1e-9);
    }

    #[test]
    fn monogamy_bookkeeping(seed in any::<u64>(), pick in 0usize..4) {
        let state = common::subspace_state(&mut common::rng(seed), 4);
        let i = 1 + pick;
        for measure in [Measure::Negativity, Measure::NegativitySquared, Measure::Discord] {
            let m = monogamy_score(&state, i, measure).unwrap();
            let scale = m.total.abs().max(m.bipartite.abs());
            prop_assert!((m.delta + m.bipartite - m.total).abs() <= 4.0 * f64::EPSILON * scale);
        }
    }

    #[test]
    fn two_qubit_measures_are_bounded(seed in any::<u64>()) {
        let state = common::two_qubit_state(&mut common::rng(seed));
        let d = correlations::discord(&state).unwrap();
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&d));
        let n = correlations::negativity_two_qubit(&state);
        prop_assert!((0.0..=0.5 + 1e-12).contains(&n));
        let swapped = correlations::negativity_two_qubit(&state.swap_parties());
        prop_assert!((n - swapped).abs() < 1e-12);
        let i = correlations::mutual_information_two_qubit(&state).unwrap();
        let j = correlations::classical_correlation(&state).unwrap();
        prop_assert!(j <= i + 1e-9);
        prop_assert!((i - j - d).abs() < 1e-6);
    }

    #[test]
    fn route_is_scale_invariant(
        values in prop::collection::vec(prop::collection::vec(0.01..1.0f64, 4), 5..60),
        scale in 0.1..10.0f64,
    ) {
        let times: Vec<f64> = (0..values.len()).map(|k| k as f64 * 0.01).collect();
        let scaled: Vec<Vec<f64>> = values.iter().map(|r| r.iter().map(|v| v * scale).collect()).collect();
        let a = detect_route(&times, &values, RouteOptions::default()).unwrap();
        let b = detect_route(&times, &scaled, RouteOptions::default()).unwrap();
        prop_assert_eq!(a.route, b.route);
        prop_assert_eq!(a.intervals, b.intervals);
    }
}

#[test]
fn pure_bipartite_discord_equals_entanglement_entropy() {
    // cos a |ge> + sin a |eg>: both parties have entropy h(cos² a).
    for a in [0.2f64, 0.5, 0.7, 1.1] {
        let v = [0.0, a.cos(), a.sin(), 0.0];
        let m = CMatrix::from_fn(4, 4, |x, y| c(v[x] * v[y], 0.0));
        let p = a.cos().powi(2);
        let h = -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        let d = correlations::discord(&excitonkit::TwoQubitState::new(m).unwrap()).unwrap();
        assert!((d - h).abs() < 1e-6, "{d} vs {h}");
    }
}

#[test]
fn fmo_route_is_stable_under_finer_sampling() {
    let spec = Preset::Fmo.spec();
    for start in [1, 6] {
        let rho0 = SubspaceState::basis(start, spec.subspace_dim()).unwrap();
        let coarse = propagate(&spec, &rho0, PropagationOptions::new(3.0, 1e-3, 1e-2)).unwrap();
        let fine = propagate(&spec, &rho0, PropagationOptions::new(3.0, 1e-3, 5e-3)).unwrap();
        let route = |traj| {
            let s = collection_series(traj, Measure::Negativity).unwrap();
            detect_route(&s.times, &s.values, RouteOptions::default()).unwrap().route
        };
        assert_eq!(route(&coarse), route(&fine), "initial site {start}");
    }
}
