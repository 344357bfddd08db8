use fdswipt_core::covopt::build_feasibility_a;
use fdswipt_core::model::example_network;
use fdswipt_core::sdp::{hermitian_eigen, solve, Tolerances};
use fdswipt_core::stats::{rates_and_energies, StreamCovariance, TxDesign};
use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};

fn draw(cov: &nalgebra::DMatrix<Complex64>, rng: &mut rand_chacha::ChaCha8Rng) -> DVector<Complex64> {
    let (vals, vecs) = hermitian_eigen(cov);
    let d = cov.nrows();
    let mut f = nalgebra::DMatrix::<Complex64>::zeros(d, d);
    for (i, &v) in vals.iter().enumerate() {
        if v > 0.0 {
            f.set_column(i, &(vecs.column(i) * Complex64::new(v.sqrt(), 0.0)));
        }
    }
    let z = DVector::from_fn(d, |_, _| {
        let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
        let u2: f64 = rng.gen();
        Complex64::from_polar((-2.0 * u1.ln()).sqrt() * std::f64::consts::FRAC_1_SQRT_2, 2.0 * std::f64::consts::PI * u2)
    });
    &f * z
}

fn main() {
    let inst = example_network();
    let p = build_feasibility_a(1.2223, &inst, &[1.0, 1e-9], &[6.0, 6.0]);
    let sol = solve(&p, &Tolerances::default()).unwrap();
    println!("status {:?}", sol.status);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let mut fail_e1 = 0;
    let mut fail_e2 = 0;
    let mut ok = 0;
    let mut best_r1 = f64::NEG_INFINITY;
    for _ in 0..2000 {
        let mut u1 = draw(&sol.blocks[2], &mut rng);
        let mut u2 = draw(&sol.blocks[3], &mut rng);
        for (u, tgt) in [(&mut u1, 2.0), (&mut u2, 2.0)] {
            let n = u.norm_squared();
            if n > 0.0 { *u *= Complex64::new((tgt / n).sqrt(), 0.0); }
        }
        let design = TxDesign {
            bs_streams: vec![
                StreamCovariance { cov: sol.blocks[0].clone(), pseudo: sol.blocks[0].map(|_| 0.0.into()), beamformer: None },
                StreamCovariance::zero(2),
            ],
            d2d_streams: [StreamCovariance::from_beamformer(u1), StreamCovariance::from_beamformer(u2)],
        };
        let rep = rates_and_energies(&inst, &design, None).unwrap();
        let e_ok1 = rep.cell_energy[0] >= 6.0 - 1e-6;
        let e_ok2 = rep.cell_energy[1] >= 6.0 - 1e-6;
        if !e_ok1 { fail_e1 += 1; }
        if !e_ok2 { fail_e2 += 1; }
        if e_ok1 && e_ok2 { ok += 1; best_r1 = best_r1.max(rep.cell_rates[0].total()); }
    }
    println!("ok {ok} fail_e1 {fail_e1} fail_e2 {fail_e2} best_r1 {best_r1:.6}");
}
