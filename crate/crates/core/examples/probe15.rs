use fdswipt_core::covopt::{chebyshev_bisect_spec, BisectOptions, BsCoding, MaxMinSpec, ObjectiveRow, Receiver};
use fdswipt_core::model::example_network;
use fdswipt_core::pseudoopt::*;
use fdswipt_core::stats::link_stats_d2d;

fn main() {
    let mut inst = example_network();
    inst.config.tx_noise_scale = 0.0;
    let spec = MaxMinSpec {
        rows: vec![ObjectiveRow::Rate { receiver: Receiver::D2d(0), weight: 1.0 }],
        rate_demands: vec![0.7, 0.7],
        ..MaxMinSpec::new(vec![], 2)
    };
    let res = chebyshev_bisect_spec(&spec, &inst, &BisectOptions::default()).unwrap();
    println!("proper gamma = {:.6}, ranks {:?}", res.gamma_star, res.ranks);
    for (i, s) in res.design.bs_streams.iter().enumerate() {
        println!("bs stream {i}: power {:.4}", s.power());
    }
    for (j, s) in res.design.d2d_streams.iter().enumerate() {
        println!("d2d stream {j}: power {:.4}", s.power());
    }
    let stats = link_stats_d2d(&inst, &res.design, 0, 1.0);
    println!("d2d0 stats: Cz={:.4} Cq={:.4}", stats.received_var, stats.interference_var);
    let system = build_improper_system(&inst, &res.design, [1.0, 1.0], &BsCoding::Tin).unwrap();
    println!("active slots: {:?}", system.active);
    for row in &system.rows {
        println!("row {:?}: |a|={:?} |b|={:?} proper={:.4} floor={}",
            row.receiver,
            row.signal.iter().map(|z| format!("{:.4}", z.norm())).collect::<Vec<_>>(),
            row.interference.iter().map(|z| format!("{:.4}", z.norm())).collect::<Vec<_>>(),
            row.proper_rate, row.noise_floor);
    }
    let objectives = [ImproperObjective { row: system.row_index(Receiver::D2d(0)), weight: 1.0 }];
    let floors: Vec<_> = (0..2).map(|k| ImproperFloor { row: k, min_rate: 0.7 }).collect();
    let param = improper_bisect(&system, &objectives, &floors, &ImproperOptions::default()).unwrap();
    println!("lambda = {:.6} relaxed = {:.6} rank = {}", param.lambda_star, param.relaxed_bound, param.lifted_rank);
    // Without cellular floors, how far can it go?
    let param2 = improper_bisect(&system, &objectives, &[], &ImproperOptions::default()).unwrap();
    println!("no floors: lambda = {:.6} relaxed = {:.6}", param2.lambda_star, param2.relaxed_bound);
}
