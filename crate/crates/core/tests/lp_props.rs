use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::Rng;
use relmaj::lp::{self, rational_approx, Feasibility, LinearProgram, Relation, Sense, Status};
use relmaj::sample;
use relmaj::LP_TOL;

/// A random program with small integer data, mixing all three row types.
fn random_program(seed: u64) -> LinearProgram<f64> {
    let mut rng = sample::rng(seed);
    let vars = rng.gen_range(1..=5);
    let rows = rng.gen_range(1..=5);
    let sense = if rng.gen_bool(0.5) { Sense::Maximize } else { Sense::Minimize };
    let mut prog = LinearProgram::new(sense, vars);
    for j in 0..vars {
        prog.set_objective(j, rng.gen_range(-4..=4) as f64);
    }
    for _ in 0..rows {
        let coeffs = (0..vars).map(|_| rng.gen_range(-3..=5) as f64).collect();
        let rel = match rng.gen_range(0..4) {
            0 => Relation::Ge,
            1 => Relation::Eq,
            _ => Relation::Le,
        };
        prog.add(coeffs, rel, rng.gen_range(-2..=8) as f64);
    }
    // Keep most programs bounded.
    if rng.gen_bool(0.8) {
        prog.add(vec![1.0; vars], Relation::Le, 10.0);
    }
    prog
}

fn to_rational(prog: &LinearProgram<f64>) -> LinearProgram<BigRational> {
    let conv = |v: &f64| rational_approx(*v, 1);
    let mut out = LinearProgram::new(prog.sense, prog.vars());
    out.objective = prog.objective.iter().map(conv).collect();
    for c in &prog.constraints {
        out.add(c.coefficients.iter().map(conv).collect(), c.relation, conv(&c.bound));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn optimal_solutions_certify_themselves(seed in any::<u64>()) {
        let prog = random_program(seed);
        let sol = lp::solve(&prog).unwrap();
        match sol.status {
            Status::Optimal => {
                prop_assert!(prog.max_violation(&sol.primal) <= LP_TOL);
                prop_assert!(prog.duality_gap(&sol) <= LP_TOL);
                prop_assert!(prog.complementary_slackness(&sol) <= LP_TOL);
                prop_assert!(prog.dual_violation(&sol.dual) <= LP_TOL);
            }
            Status::Infeasible => {
                prop_assert!(prog.certifies_infeasibility(&sol.dual, LP_TOL));
            }
            Status::Unbounded => {}
        }
    }

    #[test]
    fn exact_and_float_solvers_agree(seed in any::<u64>()) {
        let prog = random_program(seed);
        let float = lp::solve(&prog).unwrap();
        let exact = lp::solve(&to_rational(&prog)).unwrap();
        prop_assert_eq!(float.status, exact.status);
        if exact.status == Status::Optimal {
            let v = exact.objective.to_f64().unwrap();
            prop_assert!((float.objective - v).abs() <= LP_TOL * (1.0 + v.abs()));
            prop_assert!(to_rational(&prog).duality_gap(&exact) == 0.0);
        }
    }

    #[test]
    fn feasibility_agrees_with_solve(seed in any::<u64>()) {
        let prog = random_program(seed);
        let sol = lp::solve(&prog).unwrap();
        match lp::feasible(&prog).unwrap() {
            Feasibility::Feasible(x) => {
                prop_assert!(sol.status != Status::Infeasible);
                prop_assert!(prog.max_violation(&x) <= LP_TOL);
            }
            Feasibility::Infeasible(y) => {
                prop_assert_eq!(sol.status, Status::Infeasible);
                prop_assert!(prog.certifies_infeasibility(&y, LP_TOL));
            }
        }
    }
}
