use fdswipt_core::covopt::{gaussian_randomization, MaxMinSpec, ObjectiveRow, Receiver};
use fdswipt_core::covopt::build_feasibility_a;
use fdswipt_core::model::example_network;
use fdswipt_core::sdp::{numerical_rank, solve, Tolerances};
use fdswipt_core::stats::{StreamCovariance, TxDesign};

fn main() {
    let inst = example_network();
    let p = build_feasibility_a(1.2223, &inst, &[1.0, 1e-9], &[6.0, 6.0]);
    let sol = solve(&p, &Tolerances::default()).unwrap();
    let stream = |b: &nalgebra::DMatrix<num_complex::Complex64>| {
        let info = numerical_rank(b, 1e-6);
        match info.factor {
            Some(t) => StreamCovariance::from_beamformer(t),
            None => StreamCovariance { cov: b.clone(), pseudo: b.map(|_| 0.0.into()), beamformer: None },
        }
    };
    let relaxed = TxDesign {
        bs_streams: vec![stream(&sol.blocks[0]), StreamCovariance::zero(2)],
        d2d_streams: [stream(&sol.blocks[2]), stream(&sol.blocks[3])],
    };
    println!("d2d powers: {} {}", relaxed.d2d_streams[0].power(), relaxed.d2d_streams[1].power());
    let spec = MaxMinSpec {
        rows: vec![ObjectiveRow::Rate { receiver: Receiver::Cellular(0), weight: 1.0 }],
        energy_demands: vec![6.0, 6.0],
        ..MaxMinSpec::new(vec![], 2)
    };
    match gaussian_randomization(&relaxed, &spec, &inst, 1000, 1) {
        Ok((_, rep)) => println!("ok feasible={} best={:.6}", rep.feasible, rep.best_value),
        Err(e) => println!("ERR {e}"),
    }
}
