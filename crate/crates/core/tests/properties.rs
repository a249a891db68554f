use proptest::prelude::*;
use rosenthal_core::asymptotics::{epsilon_envelopes, solve_m, solve_n, x1};
use rosenthal_core::constants::{g_value, k_series, l_series, s_value};
use rosenthal_core::dyadic::BigRationalDyadic;
use rosenthal_core::extrema::{maximize_ratio, SearchOptions};
use rosenthal_core::mc::{mc_k_threads, mc_l_threads};
use rosenthal_core::report::{format_log, parse_printed};
use rosenthal_core::series::{log_add_exp, LogSum};
use rosenthal_core::special::generalized_bell;
use rosenthal_core::SeriesConfig;

fn cfg() -> SeriesConfig {
    SeriesConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn n_is_half_m_at_twice_p(p in 4.0f64..1e5) {
        let n = solve_n(p).unwrap();
        let m = solve_m(2.0 * p).unwrap();
        prop_assert!((n / (0.5 * m) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn root_residuals(p in 1e-3f64..1e12) {
        let m = solve_m(p).unwrap();
        let n = solve_n(p).unwrap();
        prop_assert!((m * m.ln() - p).abs() <= 1e-12 * p.max(1.0));
        prop_assert!((n * (2.0 * n).ln() - p).abs() <= 1e-12 * p.max(1.0));
    }

    #[test]
    fn envelopes_bracket_roots(lp in 700f64.ln()..40.0) {
        prop_assert!(epsilon_envelopes(lp.exp()).is_ok());
    }

    #[test]
    fn x1_decreasing(p in 700.0f64..1e9, r in 1.001f64..10.0) {
        prop_assert!(x1(p * r) <= x1(p));
    }

    #[test]
    fn k_below_l(p in 4.0f64..200.0) {
        let k = k_series(p, &cfg()).unwrap().log_value;
        let l = l_series(p, &cfg()).unwrap().log_value;
        prop_assert!(k <= l);
    }

    #[test]
    fn roots_increase(p in 4.0f64..300.0, dp in 0.01f64..5.0) {
        prop_assert!(g_value(p + dp, &cfg()).unwrap() > g_value(p, &cfg()).unwrap());
        prop_assert!(s_value(p + dp, &cfg()).unwrap() > s_value(p, &cfg()).unwrap());
    }

    #[test]
    fn centered_bell_nondecreasing(p in 2.0f64..60.0, dp in 0.0f64..3.0) {
        let a = generalized_bell(1.0, p, 1.0, &cfg()).unwrap().log_value;
        let b = generalized_bell(1.0, p + dp, 1.0, &cfg()).unwrap().log_value;
        prop_assert!(b >= a - 1e-12);
    }

    #[test]
    fn log_sum_matches_direct_sum(xs in prop::collection::vec(-30.0f64..30.0, 1..40)) {
        let mut s = LogSum::new(1e-15, 1000);
        for &x in &xs {
            s.add_term(x);
        }
        let direct: f64 = xs.iter().map(|x| x.exp()).sum();
        let got = s.finish().unwrap().log_value;
        prop_assert!((got - direct.ln()).abs() <= 1e-12 * direct.ln().abs().max(1.0));
    }

    #[test]
    fn log_add_exp_commutes(a in -1e3f64..1e3, b in -1e3f64..1e3) {
        prop_assert_eq!(log_add_exp(a, b), log_add_exp(b, a));
        prop_assert!(log_add_exp(a, b) >= a.max(b));
    }

    #[test]
    fn dyadic_sum_matches_float(a in -1_000_000i64..1_000_000, sa in 0u64..20, b in -1_000_000i64..1_000_000, sb in 0u64..20) {
        let x = BigRationalDyadic::new(a.into(), sa);
        let y = BigRationalDyadic::new(b.into(), sb);
        let want = a as f64 / 2f64.powi(sa as i32) + b as f64 / 2f64.powi(sb as i32);
        prop_assert!(((&x + &y).to_f64() - want).abs() <= 1e-9 * want.abs().max(1.0));
        prop_assert_eq!(&x + &y, &y + &x);
    }

    #[test]
    fn printed_scientific_round_trip(m in 1.0f64..10.0, e in 0i32..15) {
        let text = format!("{m:.5}E+{e:03}");
        let want: f64 = format!("{m:.5}e{e}").parse().unwrap();
        prop_assert_eq!(parse_printed(&text).unwrap(), want);
        let spaced = format!("{m:.5} E + {e:03}");
        prop_assert_eq!(parse_printed(&spaced).unwrap(), want);
    }

    #[test]
    fn huge_rendering_parses_back(l in 700.0f64..1e6) {
        let text = format_log(l);
        let (m, e) = text.split_once('e').unwrap();
        let back = m.parse::<f64>().unwrap().ln() + e.parse::<f64>().unwrap() * std::f64::consts::LN_10;
        prop_assert!((back - l).abs() <= 1e-9 * l);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn parabola_peak_is_certified(c in 5.0f64..95.0, w in 0.5f64..20.0) {
        let opts = SearchOptions { tol: 1e-6, ..Default::default() };
        let r = maximize_ratio(|x| Ok(-((x - c) / w).powi(2)), 4.0, 100.0, &opts).unwrap();
        prop_assert!((r.argmax - c).abs() <= 1e-4 * w.max(1.0));
        prop_assert!(r.edge_values.0 <= r.max_value && r.edge_values.1 <= r.max_value);
    }

    #[test]
    fn mc_independent_of_thread_count(seed in any::<u64>(), threads in 2usize..9) {
        let n = 200_000;
        prop_assert_eq!(mc_l_threads(4.0, n, seed, 1).unwrap(), mc_l_threads(4.0, n, seed, threads).unwrap());
        prop_assert_eq!(mc_k_threads(4.0, n, seed, 1).unwrap(), mc_k_threads(4.0, n, seed, threads).unwrap());
    }
}
