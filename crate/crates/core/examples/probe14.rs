use fdswipt_core::covopt::{chebyshev_bisect_spec, BisectOptions, BsCoding, MaxMinSpec, ObjectiveRow, Receiver};
use fdswipt_core::model::example_network;
use fdswipt_core::pseudoopt::build_improper_system;
use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};

fn main() {
    let mut inst = example_network();
    inst.config.tx_noise_scale = 0.0;
    for (i, paper) in [(5usize, (0.948269402252052, 0.758615807833758)), (9, (1.38149365207228, 0.0))] {
        let a1 = (i as f64 / 9.0).min(1.0 - 1e-6);
        let w = [a1, 1.0 - a1];
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
        let n = system.active.len();
        let bounds = system.bounds();
        // Random real-scalar search.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut best = f64::NEG_INFINITY;
        let mut best_rates = (0.0, 0.0);
        for _ in 0..200000 {
            let s = DVector::from_fn(n, |k, _| {
                Complex64::new((rng.gen::<f64>() * 2.0 - 1.0) * bounds[k], 0.0)
            });
            let r: Option<Vec<f64>> = system
                .rows
                .iter()
                .map(|row| row.improper_rate(&s).map(|imp| row.proper_rate + imp))
                .collect();
            let Some(r) = r else { continue };
            let val = (r[0] / w[0]).min(r[1] / w[1]);
            if val > best {
                best = val;
                best_rates = (r[0], r[1]);
            }
        }
        println!("i={i} real-s best=({:.4},{:.4}) paper=({:.4},{:.4})", best_rates.0, best_rates.1, paper.0, paper.1);
    }
}
