use fdswipt_core::covopt::build_feasibility_a;
use fdswipt_core::model::example_network;
use fdswipt_core::sdp::{solve, Tolerances};

fn main() {
    let inst = example_network();
    let p = build_feasibility_a(0.0, &inst, &[1.0, 1e-6], &[6.0, 6.0]);
    match solve(&p, &Tolerances::default()) {
        Ok(sol) => println!("status={:?} slack={:+.3e} iters={}", sol.status, sol.objective, sol.iterations),
        Err(e) => println!("ERROR {e}"),
    }
}
