use fdswipt_core::covopt::build_feasibility_a;
use fdswipt_core::model::example_network;
use fdswipt_core::sdp::{solve, Tolerances};

fn main() {
    let inst = example_network();
    for gamma in [0.0, 0.3, 0.6, 0.9, 1.0, 1.1, 1.2, 1.22, 1.25, 1.3, 1.5, 2.0, 3.0] {
        let p = build_feasibility_a(gamma, &inst, &[1.0, 1e-6], &[6.0, 6.0]);
        match solve(&p, &Tolerances::default()) {
            Ok(sol) => println!("gamma={gamma:<5} status={:?} slack={:+.3e} iters={}", sol.status, sol.objective, sol.iterations),
            Err(e) => println!("gamma={gamma:<5} ERROR {e}"),
        }
    }
}
