use advac::flow::FlowState;
use advac::harness::{physical_probe, run_pbm1, run_pbm2, run_physical_against, physical_reference, ExperimentSpec};

fn short(mut spec: ExperimentSpec, steps: u64) -> ExperimentSpec {
    spec.steps = steps;
    spec
}

#[test]
fn zero_amplitude_gives_zero_series() {
    for run in [run_pbm1, run_pbm2] {
        let spec = ExperimentSpec { amplitude: 0.0, ..short(ExperimentSpec::pbm1(), 200) };
        for s in run(&spec).unwrap() {
            assert!(s.p.iter().chain(&s.xi).chain(&s.zeta).all(|&v| v == 0.0));
        }
    }
}

#[test]
fn pbm2_is_odd_in_the_amplitude() {
    let spec = short(ExperimentSpec::pbm2(), 500);
    let a = run_pbm2(&spec).unwrap();
    let b = run_pbm2(&ExperimentSpec { amplitude: -1.0, ..spec }).unwrap();
    for (sa, sb) in a.iter().zip(&b) {
        assert_eq!(sa.scaled(-1.0), *sb);
    }
}

#[test]
fn pbm1_residuals_are_mirrored_across_the_source_axis() {
    let mut spec = ExperimentSpec::pbm1();
    spec.probes.extend([(0.5, 25.5), (0.5, -25.5)]);
    let all = run_pbm1(&spec).unwrap();
    let at = |loc: (f64, f64)| all.iter().find(|s| s.location == loc).unwrap();
    let n = all[0].len() - 1;
    let (up, down) = (at((0.0, 25.0)), at((0.0, -25.0)));
    assert!(up.p[n] * down.p[n] < 0.0 && up.xi[n] * down.xi[n] < 0.0);
    // Exact antisymmetry at mirrored cell centres.
    let (up, down) = (at((0.5, 25.5)), at((0.5, -25.5)));
    assert!(up.p[n].abs() > 1e-6 && up.xi[n].abs() > 1e-6);
    for k in [n / 2, n] {
        assert!((up.p[k] + down.p[k]).abs() <= 1e-12 * up.p[k].abs(), "{} {}", up.p[k], down.p[k]);
        assert!((up.xi[k] + down.xi[k]).abs() <= 1e-12 * up.xi[k].abs(), "{} {}", up.xi[k], down.xi[k]);
    }
    // ξ vanishes on the source axis, up to the half-cell probe offset.
    for loc in [(45.0, 0.0), (0.0, 0.0), (-45.0, 0.0)] {
        assert!(at(loc).xi[n].abs() < 1e-8, "{loc:?}: {}", at(loc).xi[n]);
    }
}

#[test]
fn thicker_layers_reflect_less_at_rest() {
    let spec = ExperimentSpec::physical();
    let flow = FlowState::at_rest(1.0);
    let reference = physical_reference(&spec, &flow).unwrap();
    let l2: Vec<f64> = [4, 10, 20].iter().map(|&n| run_physical_against(&spec, n, &flow, &reference).unwrap().error.l2()).collect();
    assert!(l2[0] > l2[1] && l2[1] > l2[2], "{l2:?}");
}

#[test]
fn reference_domain_is_causally_isolated() {
    let spec = ExperimentSpec::physical();
    let flow = FlowState::at_rest(1.0);
    let standard = physical_probe(&spec, spec.reference_x_max, 0, &flow).unwrap();
    let far = physical_probe(&spec, spec.reference_x_max + 100.0, 0, &flow).unwrap();
    assert_eq!(standard, far);
}

#[test]
fn reference_domain_is_isolated_under_flow() {
    let spec = ExperimentSpec::physical();
    let flow = FlowState::new(0.5, 0.0, 1.0, 1.0).unwrap();
    let standard = physical_probe(&spec, spec.reference_x_max, 0, &flow).unwrap();
    let far = physical_probe(&spec, spec.reference_x_max + 50.0, 0, &flow).unwrap();
    let peak = far.p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = standard.p.iter().zip(&far.p).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(diff <= 1e-12 * peak, "{diff:e} against peak {peak:e}");
}
