use multifold_core::analytic::{rho_l_leading, rho_p_leading};
use multifold_core::evolution::{
    exp_generator, harmonic_generator, harmonic_propagator, inverted_generator, inverted_propagator,
    perturbed_generator, perturbed_propagator,
};
use multifold_core::experiments::{figure_scenario, run_scenario, Grid};
use multifold_core::gaussian::{complexity, inner_product, reference_covariance, relative_covariance, rho_exact};
use multifold_core::state::{loschmidt_covariance, loschmidt_rho, precursor_covariance, TimeFold};
use multifold_core::{Mat2, OscillatorParams, Real, Symplectic};
use proptest::prelude::*;

const TOL: f64 = 1e-30;

fn params() -> impl Strategy<Value = OscillatorParams> {
    (0.2..5.0f64, 0.2..3.0f64, 0.0..0.1f64, 0.3..3.0f64)
        .prop_map(|(m, w, r, g)| OscillatorParams::new(m, w, r * w, g).unwrap())
}

fn det_defect(m: &Symplectic) -> f64 {
    (m.det() - Real::one(m.matrix().precision())).abs().to_f64()
}

fn product_close(a: &Mat2, b: &Mat2) -> bool {
    a.rel_diff_max(b) <= TOL
}

type Flow = fn(&Real, &OscillatorParams) -> Symplectic;

const FLOWS: [(&str, Flow); 3] =
    [("inverted", inverted_propagator), ("perturbed", perturbed_propagator), ("harmonic", harmonic_propagator)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unit_determinant(p in params(), x in -50.0..50.0f64) {
        for (name, flow) in FLOWS {
            let m = flow(&p.time(x), &p);
            prop_assert!(det_defect(&m) < TOL, "{name}");
        }
    }

    #[test]
    fn group_law(p in params(), x in -25.0..25.0f64, y in -25.0..25.0f64) {
        let (a, b) = (p.time(x), p.time(y));
        let sum = &a + &b;
        for (name, flow) in FLOWS {
            let lhs = &flow(&a, &p) * &flow(&b, &p);
            let rhs = flow(&sum, &p);
            prop_assert!(product_close(lhs.matrix(), rhs.matrix()), "{name}");
        }
    }

    #[test]
    fn inversion(p in params(), x in -50.0..50.0f64) {
        let t = p.time(x);
        for (name, flow) in FLOWS {
            let m = flow(&t, &p);
            let back = &m * &flow(&-&t, &p);
            prop_assert!(product_close(back.matrix(), &Mat2::identity(p.precision())), "{name}");
            prop_assert!(m.inverse().matrix().rel_diff_max(flow(&-&t, &p).matrix()) < TOL, "{name}");
        }
    }

    #[test]
    fn generators_match_closed_forms(p in params(), x in -50.0..50.0f64) {
        let t = p.time(x);
        prop_assert!(exp_generator(&inverted_generator(&t, &p)).matrix()
            .rel_diff_entrywise(inverted_propagator(&t, &p).matrix()) < TOL);
        prop_assert!(exp_generator(&perturbed_generator(&t, &p)).matrix()
            .rel_diff_entrywise(perturbed_propagator(&t, &p).matrix()) < TOL);
        prop_assert!(exp_generator(&harmonic_generator(&t, &p)).matrix()
            .rel_diff_max(harmonic_propagator(&t, &p).matrix()) < TOL);
    }
}

fn fold_times(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-20.0..20.0f64, 0..=max_n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn loschmidt_state_is_valid(p in params(), times in fold_times(5)) {
        let fold = TimeFold::insertions(&times, &p).unwrap();
        let g = loschmidt_covariance(&fold, &p);
        prop_assert!(g.xx().is_positive() && g.det().is_positive());
        let r = reference_covariance(&p.clone().with_precision(g.precision()));
        let delta = relative_covariance(&g, &r);
        prop_assert!((delta.det() - Real::one(g.precision())).abs().to_f64() < TOL);
        let rho = rho_exact(&delta).unwrap();
        prop_assert!(rho >= Real::one(g.precision()));
        prop_assert!(!complexity(&rho).unwrap().is_negative());
        let i = inner_product(&rho).unwrap().to_f64();
        prop_assert!(i > 0.0 && i <= 1.0);
    }

    #[test]
    fn precursor_state_is_valid(p in params(), times in fold_times(5), ts in -20.0..20.0f64, tf in -20.0..20.0f64) {
        let fold = TimeFold::from_omega_t(ts, tf, &times, &p).unwrap();
        let g = precursor_covariance(&fold, &p);
        let r = reference_covariance(&p.clone().with_precision(g.precision()));
        let delta = relative_covariance(&g, &r);
        prop_assert!((delta.det() - Real::one(g.precision())).abs().to_f64() < TOL);
        prop_assert!(rho_exact(&delta).is_ok());
    }

    #[test]
    fn unperturbed_echo_is_trivial(times in fold_times(6)) {
        let p = OscillatorParams::natural(0.0).unwrap();
        let fold = TimeFold::insertions(&times, &p).unwrap();
        prop_assert_eq!(loschmidt_rho(&fold, &p).unwrap(), Real::one(p.precision()));
    }

    #[test]
    fn zero_insertions_drop_out(p in params(), times in fold_times(4), at in 0usize..5) {
        let base = TimeFold::insertions(&times, &p).unwrap();
        let mut padded = times.clone();
        padded.insert(at.min(times.len()), 0.0);
        let padded = TimeFold::insertions(&padded, &p).unwrap();
        let a = loschmidt_rho(&base, &p).unwrap();
        let b = loschmidt_rho(&padded, &p).unwrap();
        prop_assert!(a.rel_diff(&b) < 1e-35);
    }

    #[test]
    fn leading_order_sums_its_terms(p in params(), times in fold_times(6), ts in -20.0..20.0f64, tf in -20.0..20.0f64) {
        let fold = TimeFold::from_omega_t(ts, tf, &times, &p).unwrap();
        for lo in [rho_l_leading(&fold, &p).unwrap(), rho_p_leading(&fold, &p).unwrap()] {
            let direct: Real = lo.terms().iter().map(|t| t.value().clone()).sum();
            prop_assert_eq!(&direct, lo.rho());
            prop_assert!(*lo.rho() >= Real::one(p.precision()));
        }
    }
}

#[test]
fn rows_do_not_depend_on_thread_count() {
    let mut s = figure_scenario(9).unwrap();
    s.grid = Grid::new(0.5, 20.0, 0.5).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| run_scenario(&s).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert!(one.windows(2).all(|w| w[0].t < w[1].t));
}
