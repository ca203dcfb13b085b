use tw_secrecy::optimize::log_grid;
use tw_secrecy::{capacity, optimize_eta, CapacityKind, GammaConvention, OptimizeOptions, QuadratureSpec};

fn scan_max(kind: CapacityKind, gamma: f64, points: usize, opts: &OptimizeOptions) -> (f64, f64) {
    let quad = QuadratureSpec::default();
    log_grid(opts.eta_bounds.0, opts.eta_bounds.1, points)
        .into_iter()
        .map(|eta| {
            let p = opts.convention.params(gamma, eta).unwrap();
            (eta, capacity(kind, &p, &quad).unwrap().value)
        })
        .fold(
            (f64::NAN, f64::NEG_INFINITY),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        )
}

fn assert_no_better_eta(kind: CapacityKind, gamma: f64, points: usize) {
    let opts = OptimizeOptions::default();
    let found = optimize_eta(kind, gamma, &opts).unwrap();
    let (eta, best) = scan_max(kind, gamma, points, &opts);
    assert!(
        best <= found.capacity_star + 1e-6,
        "{kind} gamma={gamma}: scan found {best} at eta={eta}, optimiser {} at {}",
        found.capacity_star,
        found.eta_star
    );
}

#[test]
fn closed_form_optima_beat_dense_scan() {
    for (kind, gamma) in [
        (CapacityKind::TwHard, 0.05),
        (CapacityKind::TwHard, 240.0),
        (CapacityKind::OwHard, 0.3),
        (CapacityKind::TwHard, 18.0 / 17.0),
        (CapacityKind::OwHard, 0.9),
    ] {
        assert_no_better_eta(kind, gamma, 100_000);
    }
}

#[test]
fn quadrature_optima_beat_scan() {
    for (kind, gamma) in [
        (CapacityKind::TwSoft, 240.0),
        (CapacityKind::TwSoft, 0.5),
        (CapacityKind::OwSoft, 0.2),
    ] {
        assert_no_better_eta(kind, gamma, 2_000);
    }
}

#[test]
fn leo_optimum_is_interior() {
    let opts = OptimizeOptions::default();
    let o = optimize_eta(CapacityKind::TwSoft, 240.0, &opts).unwrap();
    assert!(o.eta_star > 2.0 * opts.eta_bounds.0);
    let at_edge = capacity(
        CapacityKind::TwSoft,
        &GammaConvention::SnrRatio.params(240.0, 1e-3).unwrap(),
        &QuadratureSpec::default(),
    )
    .unwrap()
    .value;
    assert!(o.capacity_star > 2.0 * at_edge);
}
