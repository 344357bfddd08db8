use fdswipt_core::covopt::{BsCoding, ScenarioKind};
use fdswipt_core::model::example_network;
use fdswipt_core::regions::{scan_rate_region, DirectionOutcome, Signaling, SweepOptions};

fn main() {
    let mut inst = example_network();
    inst.config.tx_noise_scale = 0.0;
    let kind = ScenarioKind::CellularRegion { energy_demand: vec![3.0, 3.0] };
    let opts = SweepOptions { bisect_tol: 1e-5, randomizations: 200, seed: 7 };
    let sweep = scan_rate_region(&inst, &kind, &BsCoding::Tin, &[Signaling::Proper, Signaling::Improper], 3, &opts);
    for o in &sweep.outcomes {
        match o {
            DirectionOutcome::Point(p) => println!(
                "{:?} w={:?} obj={:?} gamma={:.6} lambda={:.6} ranks={:?}",
                p.signaling, p.weights, p.objectives.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>(), p.gamma_star, p.lambda_star, p.ranks
            ),
            DirectionOutcome::Failed { signaling, weights, error, .. } => {
                println!("{signaling:?} w={weights:?} FAILED: {error}")
            }
        }
    }
}
