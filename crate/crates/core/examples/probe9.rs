use fdswipt_core::covopt::{chebyshev_bisect_spec, BisectOptions, BsCoding, MaxMinSpec, ObjectiveRow, Receiver};
use fdswipt_core::model::example_network;
use fdswipt_core::pseudoopt::{build_feasibility_s, build_improper_system, ImproperObjective};
use fdswipt_core::sdp::{solve, Tolerances};

fn main() {
    let mut inst = example_network();
    inst.config.tx_noise_scale = 0.0;
    let spec = MaxMinSpec {
        rows: vec![
            ObjectiveRow::Rate { receiver: Receiver::Cellular(0), weight: 0.5 },
            ObjectiveRow::Rate { receiver: Receiver::Cellular(1), weight: 0.5 },
        ],
        energy_demands: vec![3.0, 3.0],
        ..MaxMinSpec::new(vec![], 2)
    };
    let opts = BisectOptions { tol: 1e-5, max_steps: 60, randomizations: 200, seed: 7 };
    let res = chebyshev_bisect_spec(&spec, &inst, &opts).unwrap();
    println!("proper gamma = {:.6}", res.gamma_star);
    let system = build_improper_system(&inst, &res.design, [1.0, 1.0], &BsCoding::Tin).unwrap();
    let objectives = [
        ImproperObjective { row: 0, weight: 0.5 },
        ImproperObjective { row: 1, weight: 0.5 },
    ];
    for lambda in [res.gamma_star + 0.1] {
        let p = build_feasibility_s(&system, &objectives, &[], lambda);
        match solve(&p, &Tolerances::default()) {
            Ok(sol) => println!("lambda={lambda:.4} {:?} slack {:+.3e} iters {}", sol.status, sol.objective, sol.iterations),
            Err(e) => println!("lambda={lambda:.4} ERROR {e}"),
        }
    }
}
