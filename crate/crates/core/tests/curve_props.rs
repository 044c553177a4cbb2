use proptest::prelude::*;
use relmaj::curve::{beta_at, direct_sum, tensor, tensor_power, Pair};
use relmaj::lp::{self, Status};
use relmaj::sample;
use relmaj::{Ext, LP_TOL, TOL};

fn any_pair() -> impl Strategy<Value = Pair> {
    any::<u64>().prop_map(|s| sample::pair(&mut sample::rng(s), 8))
}

fn normalized() -> impl Strategy<Value = Pair> {
    any::<u64>().prop_map(|s| sample::normalized_pair(&mut sample::rng(s), 1, 8))
}

fn grid(hi: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| hi * k as f64 / n as f64).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn beta_monotone_and_convex(pair in any_pair()) {
        let e = pair.elbows();
        let xs = grid(pair.total_p(), 40);
        let b: Vec<f64> = xs.iter().map(|&x| e.beta(x).unwrap()).collect();
        for w in b.windows(2) {
            prop_assert!(w[0] <= w[1] + TOL);
        }
        for w in xs.windows(3) {
            let mid = e.beta(w[1]).unwrap();
            let avg = 0.5 * (e.beta(w[0]).unwrap() + e.beta(w[2]).unwrap());
            prop_assert!(mid <= avg + TOL);
        }
    }

    #[test]
    fn alpha_monotone_and_concave(pair in any_pair()) {
        let e = pair.elbows();
        let ys = grid(pair.total_q(), 40);
        for w in ys.windows(3) {
            let [a0, a1, a2] = [w[0], w[1], w[2]].map(|y| e.alpha(y).unwrap());
            prop_assert!(a0 <= a1 + TOL && a1 <= a2 + TOL);
            prop_assert!(a1 >= 0.5 * (a0 + a2) - TOL);
        }
    }

    #[test]
    fn alpha_and_beta_are_inverse(pair in any_pair()) {
        let e = pair.elbows();
        let (px, qy) = (pair.total_p(), pair.total_q());
        // β∘α is the identity where β can be reached, i.e. up to the flat part
        // of the boundary at |p|.
        let y_full = e.beta(px).unwrap();
        for y in grid(qy, 25) {
            let x = e.alpha(y).unwrap();
            let back = e.beta(x).unwrap();
            prop_assert!((back - y.min(y_full)).abs() <= TOL, "y={y} x={x} back={back}");
        }
        // α∘β is the identity except on vertical pieces (q-free mass).
        let x0 = e.alpha(0.0).unwrap();
        for x in grid(px, 25) {
            let y = e.beta(x).unwrap();
            let back = e.alpha(y).unwrap();
            prop_assert!((back - x.max(x0)).abs() <= TOL, "x={x} y={y} back={back}");
        }
    }

    #[test]
    fn symmetry_of_testing_region(pair in normalized()) {
        let (e, s) = (pair.elbows(), pair.swapped().elbows());
        for y in grid(1.0, 30) {
            let total = e.alpha(y).unwrap() + s.beta(1.0 - y).unwrap();
            prop_assert!((total - 1.0).abs() <= TOL, "y={y} total={total}");
        }
    }

    #[test]
    fn beta_matches_its_program(pair in any_pair(), t in 0.0f64..1.0) {
        let x = t * pair.total_p();
        let sol = lp::solve(&lp::beta_program(pair.p(), pair.q(), x)).unwrap();
        prop_assert_eq!(sol.status, Status::Optimal);
        prop_assert!((sol.objective - beta_at(&pair, x).unwrap()).abs() <= LP_TOL);
    }

    #[test]
    fn zero_extension_leaves_beta_unchanged(pair in any_pair(), s in any::<u64>()) {
        let mut rng = sample::rng(s);
        let k = sample::dim(&mut rng, 1, 4);
        let pad = Pair::new(vec![0.0; k], sample::weights(&mut rng, k, false)).unwrap();
        let (e, f) = (pair.elbows(), direct_sum(&pair, &pad).elbows());
        for x in grid(pair.total_p(), 20) {
            prop_assert!((e.beta(x).unwrap() - f.beta(x).unwrap()).abs() <= TOL);
        }
    }

    #[test]
    fn tensoring_with_a_common_vector_rescales(pair in any_pair(), s in any::<u64>()) {
        let mut rng = sample::rng(s);
        let k = sample::dim(&mut rng, 1, 4);
        let r = sample::positive_weights(&mut rng, k, 0.1);
        let r_tot: f64 = r.iter().sum();
        let common = Pair::new(r.clone(), r).unwrap();
        let (e, f) = (pair.elbows(), tensor(&pair, &common).unwrap().elbows());
        for x in grid(pair.total_p(), 20) {
            let scaled = f.beta(x * r_tot).unwrap() / r_tot;
            prop_assert!((e.beta(x).unwrap() - scaled).abs() <= TOL);
        }
    }

    #[test]
    fn elbows_are_few_and_sorted(pair in any_pair()) {
        let e = pair.elbows();
        prop_assert!(e.points.len() <= pair.len());
        prop_assert!(e.is_convex());
        let mut prev = (0.0, 0.0);
        let mut last_slope = 0.0f64;
        for &(x, y) in &e.points {
            let (dx, dy) = (x - prev.0, y - prev.1);
            if dx > 1e-12 {
                let slope = dy / dx;
                prop_assert!(slope >= last_slope - 1e-9 * (1.0 + slope.abs()));
                last_slope = slope;
            } else {
                last_slope = f64::INFINITY;
            }
            prev = (x, y);
        }
    }

    #[test]
    fn aggregated_power_matches_expansion(s in any::<u64>(), n in 1u32..4) {
        let pair = sample::pair(&mut sample::rng(s), 3);
        let power = tensor_power(&pair, n).unwrap();
        let expanded = power.expand(10_000).unwrap();
        let mut direct = pair.clone();
        for _ in 1..n {
            direct = tensor(&direct, &pair).unwrap();
        }
        let (e, f) = (power.elbows(), direct.elbows());
        for x in grid(direct.total_p(), 20) {
            let (u, v) = (e.beta(x), f.beta(x));
            prop_assert!(u.le_tol(v, 1e-9) && v.le_tol(u, 1e-9), "{u:?} vs {v:?}");
            prop_assert!(expanded.beta(x).le_tol(v, 1e-9) && v.le_tol(expanded.beta(x), 1e-9));
        }
    }
}

#[test]
fn beta_past_the_end_is_infinite() {
    let pair = Pair::new(vec![0.7, 0.3], vec![0.5, 0.5]).unwrap();
    assert_eq!(pair.beta(1.1), Ext::PosInf);
    assert_eq!(pair.alpha(-0.1), Ext::NegInf);
}
