use fdswipt_core::covopt::{build_feasibility_a, MaxMinSpec, ObjectiveRow, Receiver};
use fdswipt_core::model::example_network;
use fdswipt_core::sdp::{numerical_rank, solve, Tolerances};
use fdswipt_core::stats::{rates_and_energies, StreamCovariance, TxDesign};

fn main() {
    let inst = example_network();
    let p = build_feasibility_a(1.2223568, &inst, &[1.0, 1e-9], &[6.0, 6.0]);
    let sol = solve(&p, &Tolerances::default()).unwrap();
    println!("status {:?}", sol.status);
    for (i, b) in sol.blocks.iter().enumerate() {
        let info = numerical_rank(b, 1e-6);
        println!("block {i}: trace {:.4} rank {} eigs {:?}", b.trace().re, info.rank, info.eigenvalues.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>());
    }
    let design = TxDesign {
        bs_streams: vec![
            StreamCovariance { cov: sol.blocks[0].clone(), pseudo: sol.blocks[0].map(|_| 0.0.into()), beamformer: None },
            StreamCovariance { cov: sol.blocks[1].clone(), pseudo: sol.blocks[1].map(|_| 0.0.into()), beamformer: None },
        ],
        d2d_streams: [
            StreamCovariance { cov: sol.blocks[2].clone(), pseudo: sol.blocks[2].map(|_| 0.0.into()), beamformer: None },
            StreamCovariance { cov: sol.blocks[3].clone(), pseudo: sol.blocks[3].map(|_| 0.0.into()), beamformer: None },
        ],
    };
    let rep = rates_and_energies(&inst, &design, None).unwrap();
    println!("R1 {:.6} R2 {:.6} E1 {:.6} E2 {:.6}", rep.cell_rates[0].total(), rep.cell_rates[1].total(), rep.cell_energy[0], rep.cell_energy[1]);
    let _ = MaxMinSpec::new(vec![ObjectiveRow::Rate { receiver: Receiver::Cellular(0), weight: 1.0 }], 2);
}
