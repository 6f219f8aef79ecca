use std::f64::consts::PI;

use ncfk::action::{act_direct, act_spectral};
use ncfk::builtins::{builtin_operator, BUILTIN_NAMES};
use ncfk::hermite::hermite_fn;
use ncfk::oscillator::h_inv_schatten_series;
use ncfk::suites::{gaussian_projector, gaussian_weight, run_suite, SUITES};
use ncfk::synthesis::decay::{decay_ladder, DecayTable};
use ncfk::synthesis::mollifier::{make_mollifier, tau_delta, versal_sample};
use ncfk::synthesis::rho::find_rho;
use ncfk::{Error, KernelOperator, LineGrid, PlaneGrid, Report};

#[test]
fn every_suite_passes_on_a_small_grid() {
    for name in SUITES {
        let r = run_suite(name, 64, 1).unwrap();
        assert!(r.pass, "{name}: {:?}", r.failed_checks().collect::<Vec<_>>());
        let back = Report::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
    }
    assert!(run_suite("bogus", 64, 1).is_err());
}

#[test]
fn builtins_have_zero_trace_except_the_projector() {
    let g = LineGrid::self_dual(64).unwrap();
    for name in BUILTIN_NAMES {
        let x = builtin_operator(name, &g, 3).unwrap();
        let expected = if name == "gauss-proj" { 1.0 } else { 0.0 };
        assert!((x.trace().norm() - expected).abs() < 1e-12, "{name}");
    }
}

#[test]
fn direct_and_spectral_actions_converge() {
    let mut previous = f64::INFINITY;
    for n in [16, 32, 64] {
        let g = LineGrid::self_dual(n).unwrap();
        let x = gaussian_projector(&g).unwrap();
        let q = gaussian_weight(&PlaneGrid::square(g));
        let dis = act_direct(&q, &x).unwrap().sub(&act_spectral(&q, &x).unwrap().value).unwrap().trace_norm();
        assert!(dis < previous, "n = {n}: {dis} !< {previous}");
        previous = dis;
    }
    assert!(previous < 1e-3);
}

#[test]
fn action_contracts_trace_norm() {
    let g = LineGrid::self_dual(32).unwrap();
    let x = builtin_operator("random-tracezero", &g, 8).unwrap();
    let q = gaussian_weight(&PlaneGrid::square(g));
    let acted = act_direct(&q, &x).unwrap();
    assert!(acted.trace_norm() <= q.l1_norm() * x.trace_norm() * (1.0 + 1e-12));
}

#[test]
fn decay_table_csv_round_trip() {
    let g = LineGrid::self_dual(64).unwrap();
    let x = builtin_operator("hermite01", &g, 0).unwrap();
    let fam = make_mollifier(&PlaneGrid::square(g)).unwrap();
    let table = decay_ladder(&x, &fam, 1.5, 6).unwrap();
    assert!(table.report.pass);
    let rows = DecayTable::read_csv_rows(&table.to_csv_string().unwrap()).unwrap();
    assert_eq!(rows, table.rows);
    assert!(table.rows.iter().all(|r| r.lp_norm <= r.bound));

    let one = decay_ladder(&x, &fam, 1.5, 1).unwrap();
    assert_eq!(one.rows.len(), 1);
    assert!(one.report.pass);
}

#[test]
fn decay_rejects_nonzero_trace() {
    let g = LineGrid::self_dual(32).unwrap();
    let fam = make_mollifier(&PlaneGrid::square(g)).unwrap();
    let w = builtin_operator("gauss-proj", &g, 0).unwrap();
    assert!(matches!(decay_ladder(&w, &fam, 1.5, 2), Err(Error::NonzeroTrace { .. })));
}

#[test]
fn find_rho_with_a_generous_budget_stops_at_the_top() {
    let g = LineGrid::self_dual(64).unwrap();
    let x = builtin_operator("hermite01", &g, 0).unwrap();
    let fam = make_mollifier(&PlaneGrid::square(g)).unwrap();
    let res = find_rho(&x, 10.0 * x.trace_norm(), &fam).unwrap();
    assert_eq!(res.delta0, 1.0);
    assert!(res.final_norm < 10.0);
    assert!(res.report.pass);
}

#[test]
fn find_rho_reports_the_best_norm_when_exhausted() {
    let g = LineGrid::self_dual(64).unwrap();
    let x = builtin_operator("hermite01", &g, 0).unwrap();
    let fam = make_mollifier(&PlaneGrid::square(g)).unwrap();
    match find_rho(&x, 1e-3, &fam) {
        Err(Error::SynthesisExhausted { best_norm, report, .. }) => {
            assert!(best_norm.is_finite() && best_norm > 5e-4);
            assert!(!report.pass);
        }
        other => panic!("expected exhaustion, got {other:?}"),
    }
}

#[test]
fn tau_delta_check_matches_rescaling() {
    let g = LineGrid::self_dual(64).unwrap();
    let fam = make_mollifier(&PlaneGrid::square(g)).unwrap();
    let td = tau_delta(&fam, 0.5).unwrap();
    assert!(td.scaling_error.is_finite());
    let matched = versal_sample(64, 0.5).unwrap();
    assert_eq!(matched.n, 256);
    assert!((matched.l1_norm / fam.versal - 1.0).abs() < 0.01);
    assert!(matched.scaling_error < 1e-6);
    assert!(matches!(tau_delta(&fam, 0.25), Err(Error::DeltaTooSmall { .. })));
}

#[test]
fn h_inverse_series_matches_closed_form() {
    let exact = (PI * PI / 8.0).sqrt() / (2.0 * PI);
    assert!((h_inv_schatten_series(2.0, 200_000) - exact).abs() < 1e-5);
}

#[test]
fn rank_one_trace_is_inner_product() {
    let g = LineGrid::self_dual(64).unwrap();
    let a = hermite_fn(&g, 2).unwrap();
    let b = hermite_fn(&g, 2).unwrap();
    let x: KernelOperator = ncfk::rank_one(&a, &b).unwrap();
    assert!((x.trace().re - 1.0).abs() < 1e-12);
    assert!((x.trace_norm() - 1.0).abs() < 1e-12);
}
