use fdswipt_core::covopt::{chebyshev_bisect, BisectOptions, BsCoding, Receiver, Scenario};
use fdswipt_core::model::example_network;
use fdswipt_core::pseudoopt::{build_improper_system, improper_bisect, ImproperObjective, ImproperOptions, apply_pseudo_scalars};
use fdswipt_core::stats::rates_and_energies;

fn main() {
    let inst = example_network();
    // Fig 4 improper interior point: alpha = (5/9, 4/9) -> (1.1000, 0.8800)
    let w = vec![5.0 / 9.0, 4.0 / 9.0];
    let scenario = Scenario::cellular_region(w.clone(), vec![0.0, 0.0]);
    let res = chebyshev_bisect(&scenario, &inst, &BisectOptions::default()).unwrap();
    let system = build_improper_system(&inst, &res.design, [1.0, 1.0], &BsCoding::Tin).unwrap();
    let objectives: Vec<_> = (0..2)
        .map(|k| ImproperObjective { row: system.row_index(Receiver::Cellular(k)), weight: w[k] })
        .collect();
    let t0 = std::time::Instant::now();
    let param = improper_bisect(&system, &objectives, &[], &ImproperOptions::default()).unwrap();
    let improper = apply_pseudo_scalars(&res.design, &param.scalars).unwrap();
    let rep = rates_and_energies(&inst, &improper, None).unwrap();
    println!(
        "proper gamma={:.6}; improper lambda={:.6} relaxed={:.6} rank={} R=({:.6},{:.6}) expect (1.1000,0.8800) dt={:?}",
        res.gamma_star,
        param.lambda_star,
        param.relaxed_bound,
        param.lifted_rank,
        rep.cell_rates[0].total(),
        rep.cell_rates[1].total(),
        t0.elapsed()
    );
    println!("scalars: {:?}", param.scalars.iter().map(|s| (s.norm(), s.arg())).collect::<Vec<_>>());
}
