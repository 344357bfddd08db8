use fdswipt_core::covopt::{chebyshev_bisect, BisectOptions, Scenario};
use fdswipt_core::model::example_network;
use fdswipt_core::stats::rates_and_energies;

fn main() {
    let inst = example_network();
    for (a1, a2) in [(5.0 / 9.0, 4.0 / 9.0), (4.0 / 9.0, 5.0 / 9.0)] {
        let scenario = Scenario::cellular_region(vec![a1, a2], vec![0.0, 0.0]);
        let t0 = std::time::Instant::now();
        let res = chebyshev_bisect(&scenario, &inst, &BisectOptions::default()).unwrap();
        let rep = rates_and_energies(&inst, &res.design, None).unwrap();
        println!(
            "alpha=({a1:.4},{a2:.4})  R=({:.6},{:.6}) gamma*={:.6} relaxed={:.6} ranks={:?} solves={} dt={:?}",
            rep.cell_rates[0].total(),
            rep.cell_rates[1].total(),
            res.gamma_star,
            res.relaxed_bound,
            res.ranks,
            res.solves,
            t0.elapsed()
        );
    }
    // EH-constrained endpoint: maximize R_1 alone with Psi = (6, 6).
    use fdswipt_core::covopt::{chebyshev_bisect_spec, MaxMinSpec, ObjectiveRow, Receiver};
    let spec = MaxMinSpec {
        rows: vec![ObjectiveRow::Rate { receiver: Receiver::Cellular(0), weight: 1.0 }],
        energy_demands: vec![6.0, 6.0],
        ..MaxMinSpec::new(vec![], 2)
    };
    let t0 = std::time::Instant::now();
    let res = chebyshev_bisect_spec(&spec, &inst, &BisectOptions::default()).unwrap();
    let rep = rates_and_energies(&inst, &res.design, None).unwrap();
    println!(
        "EH endpoint: R1={:.6} (expect 1.2224) E=({:.4},{:.4}) ranks={:?} rand={:?} dt={:?}",
        rep.cell_rates[0].total(),
        rep.cell_energy[0],
        rep.cell_energy[1],
        res.ranks,
        res.randomization.map(|r| (r.samples, r.feasible)),
        t0.elapsed()
    );
}
