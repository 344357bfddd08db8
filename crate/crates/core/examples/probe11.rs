use fdswipt_core::covopt::{chebyshev_bisect_spec, BisectOptions, BsCoding, MaxMinSpec, ObjectiveRow, Receiver};
use fdswipt_core::model::example_network;
use fdswipt_core::pseudoopt::{apply_pseudo_scalars, build_improper_system, improper_bisect, ImproperObjective, ImproperOptions};
use fdswipt_core::stats::rates_and_energies;

fn run(eps: f64) {
    let mut inst = example_network();
    inst.config.tx_noise_scale = 0.0;
    let w = [1.0 - eps, eps];
    let spec = MaxMinSpec {
        rows: vec![
            ObjectiveRow::Rate { receiver: Receiver::Cellular(0), weight: w[0] },
            ObjectiveRow::Rate { receiver: Receiver::Cellular(1), weight: w[1] },
        ],
        energy_demands: vec![6.0, 6.0],
        ..MaxMinSpec::new(vec![], 2)
    };
    let res = chebyshev_bisect_spec(&spec, &inst, &BisectOptions::default()).unwrap();
    let system = build_improper_system(&inst, &res.design, [1.0, 1.0], &BsCoding::Tin).unwrap();
    let objectives: Vec<_> = (0..2)
        .map(|k| ImproperObjective { row: k, weight: w[k] })
        .collect();
    let param = improper_bisect(&system, &objectives, &[], &ImproperOptions::default()).unwrap();
    let improper = apply_pseudo_scalars(&res.design, &param.scalars).unwrap();
    let rep = rates_and_energies(&inst, &improper, None).unwrap();
    println!(
        "eps={eps:.0e}: proper R=({:.6},{:.3e}) improper R=({:.6},{:.3e}) lifted_rank={}",
        res.gamma_star * w[0],
        res.gamma_star * w[1],
        rep.cell_rates[0].total(),
        rep.cell_rates[1].total(),
        param.lifted_rank
    );
}

fn main() {
    for eps in [1e-4, 1e-5, 1e-6] {
        run(eps);
    }
}
