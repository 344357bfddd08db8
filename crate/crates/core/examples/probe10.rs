use fdswipt_core::covopt::{BsCoding, ScenarioKind};
use fdswipt_core::model::example_network;
use fdswipt_core::regions::*;

fn main() {
    let mut inst = example_network();
    inst.config.tx_noise_scale = 0.0;
    let opts = SweepOptions { bisect_tol: 1e-6, randomizations: 1000, seed: 1 };

    // Fig 5 endpoints: Psi = 6, alpha = (1, 0): proper 1.2224, improper 1.3815.
    let kind = ScenarioKind::CellularRegion { energy_demand: vec![6.0, 6.0] };
    let t0 = std::time::Instant::now();
    let sweep = scan_rate_region(&inst, &kind, &BsCoding::Tin, &[Signaling::Proper, Signaling::Improper], 3, &opts);
    for p in sweep.outcomes.iter().filter_map(|o| o.point()) {
        if p.weights[0] == 1.0 {
            println!("Fig5 endpoint {:?}: R1={:.6} (proper expect 1.2224 improper 1.3815) lifted_rank={:?}", p.signaling, p.objectives[0], p.lifted_rank);
        }
    }
    println!("fig5 sweep took {:?}", t0.elapsed());

    // Fig 7: D2D region with Sigma = 0.7: proper endpoint 0.5785, improper 0.6383.
    let kind = ScenarioKind::D2dRegion { rate_demand: vec![0.7, 0.7] };
    let t0 = std::time::Instant::now();
    let sweep = scan_rate_region(&inst, &kind, &BsCoding::Tin, &[Signaling::Proper, Signaling::Improper], 3, &opts);
    for p in sweep.outcomes.iter().filter_map(|o| o.point()) {
        println!("Fig7 {:?} w={:?}: R'=({:.6},{:.6})", p.signaling, p.weights, p.objectives[0], p.objectives[1]);
    }
    println!("fig7 sweep took {:?}", t0.elapsed());

    // Fig 8: cross rate-energy, Sigma = 0.5, proper contains (0.9156, 1.9254).
    let t0 = std::time::Instant::now();
    let sweep = cross_rate_energy(&inst, 1, 0, 7, &[0.5, 0.5], &[Signaling::Proper], &opts);
    for p in sweep.outcomes.iter().filter_map(|o| o.point()) {
        println!("Fig8 w=({:.3},{:.3}): R'_2={:.6} E'_1={:.6}", p.weights[0], p.weights[1], p.objectives[0], p.objectives[1]);
    }
    println!("fig8 sweep took {:?}", t0.elapsed());
}
