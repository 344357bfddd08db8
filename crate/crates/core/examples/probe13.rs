use fdswipt_core::covopt::{chebyshev_bisect_spec, BisectOptions, BsCoding, MaxMinSpec, ObjectiveRow, Receiver};
use fdswipt_core::model::example_network;
use fdswipt_core::pseudoopt::{apply_pseudo_scalars, build_improper_system, improper_bisect, ImproperObjective, ImproperOptions};
use fdswipt_core::stats::rates_and_energies;
use num_complex::Complex64;

fn main() {
    let mut inst = example_network();
    inst.config.tx_noise_scale = 0.0;
    let expect = [
        (0.192599581775098, 1.21023429781508, 1usize),
        (0.731825353095367, 0.914108514138164, 4),
        (0.948269402252052, 0.758615807833758, 5),
        (1.21672056504278, 0.180276662731908, 8),
    ];
    for (e1, e2, i) in expect {
        let a1 = i as f64 / 9.0;
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
        let mut system = build_improper_system(&inst, &res.design, [1.0, 1.0], &BsCoding::Tin).unwrap();
        // Pin the D2D slots: restrict the active set to BS slots only.
        let keep: Vec<usize> = system.active.iter().enumerate().filter(|(_, &s)| s >= 2).map(|(i, _)| i).collect();
        system.active = system.active.iter().copied().filter(|&s| s >= 2).collect();
        for row in system.rows.iter_mut() {
            row.signal = nalgebra::DVector::from_iterator(keep.len(), keep.iter().map(|&i| row.signal[i]));
            row.interference = nalgebra::DVector::from_iterator(keep.len(), keep.iter().map(|&i| row.interference[i]));
        }
        let objectives: Vec<_> = (0..2).map(|k| ImproperObjective { row: k, weight: w[k] }).collect();
        let param = improper_bisect(&system, &objectives, &[], &ImproperOptions::default()).unwrap();
        let mut scalars = vec![Complex64::new(0.0, 0.0); 4];
        for (slot, v) in system.active.iter().zip(param.scalars.iter().skip(0)) {
            let _ = (slot, v);
        }
        scalars.copy_from_slice(&param.scalars);
        let improper = apply_pseudo_scalars(&res.design, &scalars).unwrap();
        let rep = rates_and_energies(&inst, &improper, None).unwrap();
        println!(
            "i={i} ours-bs-only=({:.4},{:.4}) paper=({:.4},{:.4}) rank={}",
            rep.cell_rates[0].total(), rep.cell_rates[1].total(), e1, e2, param.lifted_rank
        );
    }
}
