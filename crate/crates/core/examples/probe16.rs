use fdswipt_core::covopt::{chebyshev_bisect_spec, BisectOptions, MaxMinSpec, ObjectiveRow, Receiver};
use fdswipt_core::model::example_network;
use fdswipt_core::stats::rates_and_energies;

fn main() {
    let mut inst = example_network();
    inst.config.tx_noise_scale = 0.0;
    // info user = 1, energy user = 0; weights (1/3, 2/3); Sigma = 0.5.
    let spec = MaxMinSpec {
        rows: vec![
            ObjectiveRow::Rate { receiver: Receiver::D2d(1), weight: 1.0 / 3.0 },
            ObjectiveRow::Energy { receiver: Receiver::D2d(0), weight: 2.0 / 3.0 },
        ],
        rate_demands: vec![0.5, 0.5],
        split: [0.0, 1.0],
        ..MaxMinSpec::new(vec![], 2)
    };
    let res = chebyshev_bisect_spec(&spec, &inst, &BisectOptions::default()).unwrap();
    let rep = rates_and_energies(&inst, &res.design, Some(spec.split)).unwrap();
    println!(
        "gamma={:.6} relaxed={:.6} ranks={:?} rand={:?}",
        res.gamma_star, res.relaxed_bound, res.ranks,
        res.randomization.as_ref().map(|r| (r.samples, r.feasible, r.best_value))
    );
    println!(
        "R'_2={:.6} E'_1={:.6} (paper 0.915584606749126, 1.92538175029877); cell rates {:.4} {:.4}",
        rep.d2d_rates[1].total(), rep.d2d_energy[0], rep.cell_rates[0].proper, rep.cell_rates[1].proper
    );
    for (i, s) in res.design.bs_streams.iter().enumerate() {
        println!("bs {i}: {:.4}", s.power());
    }
    for (j, s) in res.design.d2d_streams.iter().enumerate() {
        println!("d2d {j}: {:.4}", s.power());
    }
}
