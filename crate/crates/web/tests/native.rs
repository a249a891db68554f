use rosenthal_web::{evaluate, evaluation, ratio_curve_values, saddle_point_value, series_weight_values};

#[test]
fn evaluation_at_six() {
    let e = evaluate(6.0).unwrap();
    assert_eq!((e.k().as_str(), e.l().as_str()), ("31", "41"));
    assert_eq!(e.k_route(), "combinatorial");
    assert!((e.g() - 41f64.powf(1.0 / 6.0)).abs() < 1e-12);
    assert!((e.s() - 31f64.powf(1.0 / 6.0)).abs() < 1e-12);
    assert_eq!(e.rel_error(), 0.0);
    assert!(evaluation(1.0).is_err());
}

#[test]
fn curve_peaks_near_the_extremal_point() {
    let c = ratio_curve_values("G/g", 4.0, 700.0, 400).unwrap();
    assert_eq!(c.len(), 800);
    assert_eq!((c[0], c[798]), (4.0, 700.0));
    let (i, best) = c
        .chunks(2)
        .enumerate()
        .max_by(|a, b| a.1[1].total_cmp(&b.1[1]))
        .map(|(i, pr)| (i, pr[1]))
        .unwrap();
    assert!((c[2 * i] - 33.46).abs() < 1.0);
    assert!(best <= 1.77638 + 1e-5 && best > 1.776);
}

#[test]
fn curve_arguments_checked() {
    assert!(ratio_curve_values("G/x", 4.0, 10.0, 10).is_err());
    assert!(ratio_curve_values("G/h", 4.0, 100.0, 10).is_err());
    assert!(ratio_curve_values("G/g", 10.0, 4.0, 10).is_err());
    assert!(ratio_curve_values("G/g", 4.0, 10.0, 1).is_err());
}

#[test]
fn weights_are_a_distribution_peaked_at_the_saddle() {
    for (kind, p) in [("L", 50.0), ("K", 50.0), ("L", 700.0)] {
        let w = series_weight_values(kind, p).unwrap();
        let total: f64 = w.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(w.iter().all(|&x| x >= 0.0));
        let argmax = w.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0 as f64;
        let m = saddle_point_value(kind, p).unwrap();
        // the terms peak within a few units of the saddle point
        assert!((argmax - m).abs() < 3.0 + 0.05 * m, "{kind} {p}: {argmax} vs {m}");
    }
}

#[test]
fn weights_reproduce_small_moments() {
    // L(2) = Var θ = 1: the weights are |n - 1|^2 P(θ = n)
    let w = series_weight_values("L", 2.0).unwrap();
    let poisson_zero = (-1f64).exp();
    assert!((w[0] - poisson_zero).abs() < 1e-14);
    assert_eq!(w[1], 0.0);
    assert!(series_weight_values("Q", 4.0).is_err());
    assert!(series_weight_values("L", 1.0).is_err());
}
