//! Primal-dual path-following interior-point method for real symmetric
//! cone programs in standard form: `min c'x  s.t.  A x = b`, `x` in a
//! product of PSD blocks (scalar blocks are the nonnegative orthant).
//!
//! Uses Nesterov-Todd scaling with a Mehrotra-style adaptive centering
//! parameter. Blocks here are at most ~10x10, so every factorization is a
//! dense eigendecomposition or Cholesky; one Schur complement solve per
//! direction.

use nalgebra::{DMatrix, DVector};

use super::realify::{smat, svec_into, svec_len, RealProblem};
use super::Tolerances;
use crate::error::SdpError;

pub struct IpmOutput {
    pub x: DVector<f64>,
    pub iterations: usize,
}

enum Scaling {
    Scalar(f64),            // g^2 = x/s for 1x1 blocks
    Dense(DMatrix<f64>),    // svec-space matrix of Z -> G Z G
}

struct Blocks<'a> {
    dims: &'a [usize],
    offsets: Vec<usize>,
}

impl<'a> Blocks<'a> {
    fn new(dims: &'a [usize]) -> Self {
        let mut offsets = Vec::with_capacity(dims.len());
        let mut total = 0;
        for d in dims {
            offsets.push(total);
            total += svec_len(*d);
        }
        Blocks { dims, offsets }
    }

    fn total(&self) -> usize {
        self.offsets.last().map_or(0, |o| o + svec_len(*self.dims.last().unwrap()))
    }

    fn slice<'b>(&self, v: &'b DVector<f64>, bi: usize) -> &'b [f64] {
        let off = self.offsets[bi];
        &v.as_slice()[off..off + svec_len(self.dims[bi])]
    }

    fn mat(&self, v: &DVector<f64>, bi: usize) -> DMatrix<f64> {
        smat(self.slice(v, bi), self.dims[bi])
    }

    /// Writes `rho * I` for every block.
    fn identity_scaled(&self, rho: f64) -> DVector<f64> {
        let mut v = DVector::zeros(self.total());
        for (bi, &d) in self.dims.iter().enumerate() {
            let eye = DMatrix::identity(d, d) * rho;
            let off = self.offsets[bi];
            svec_into(&eye, &mut v.as_mut_slice()[off..off + svec_len(d)]);
        }
        v
    }
}

fn sym_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = m.clone().symmetric_eigen();
    (eig.eigenvalues, eig.eigenvectors)
}

/// U f(D) U' for a symmetric matrix with eigenpairs (D, U).
fn spectral_fn(vals: &DVector<f64>, vecs: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let d = DMatrix::from_diagonal(&vals.map(f));
    vecs * d * vecs.transpose()
}

/// Nesterov-Todd scaling point G with G S G = X, as an svec-space operator.
fn nt_scaling(x: &DMatrix<f64>, s: &DMatrix<f64>) -> Scaling {
    let d = x.nrows();
    if d == 1 {
        return Scaling::Scalar(x[(0, 0)] / s[(0, 0)]);
    }
    let (xv, xu) = sym_eigen(x);
    let x_half = spectral_fn(&xv, &xu, |v| v.max(1e-300).sqrt());
    let inner = &x_half * s * &x_half;
    let (iv, iu) = sym_eigen(&inner);
    let inner_inv_half = spectral_fn(&iv, &iu, |v| 1.0 / v.max(1e-300).sqrt());
    let g = &x_half * inner_inv_half * &x_half;
    // Materialize Z -> G Z G column by column over the svec basis.
    let n = svec_len(d);
    let mut op = DMatrix::zeros(n, n);
    let mut basis = vec![0.0; n];
    let mut col = vec![0.0; n];
    for k in 0..n {
        basis.iter_mut().for_each(|v| *v = 0.0);
        basis[k] = 1.0;
        let e = smat(&basis, d);
        let ge = &g * e * &g;
        svec_into(&ge, &mut col);
        op.set_column(k, &DVector::from_column_slice(&col));
    }
    Scaling::Dense(op)
}

fn apply_scaling(scalings: &[Scaling], blocks: &Blocks, v: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(v.len());
    for (bi, sc) in scalings.iter().enumerate() {
        let off = blocks.offsets[bi];
        let len = svec_len(blocks.dims[bi]);
        match sc {
            Scaling::Scalar(g2) => out[off] = g2 * v[off],
            Scaling::Dense(op) => {
                let seg = DVector::from_column_slice(&v.as_slice()[off..off + len]);
                let mapped = op * seg;
                out.as_mut_slice()[off..off + len].copy_from_slice(mapped.as_slice());
            }
        }
    }
    out
}

/// Largest step alpha such that every block of `v + alpha * dv` stays PSD,
/// scaled back by `frac` and capped at 1.
fn max_step(blocks: &Blocks, v: &DVector<f64>, dv: &DVector<f64>, frac: f64) -> f64 {
    let mut alpha = f64::INFINITY;
    for (bi, &d) in blocks.dims.iter().enumerate() {
        if d == 1 {
            let off = blocks.offsets[bi];
            if dv[off] < 0.0 {
                alpha = alpha.min(-v[off] / dv[off]);
            }
            continue;
        }
        let x = blocks.mat(v, bi);
        let dx = blocks.mat(dv, bi);
        // lambda_min of X^{-1/2} dX X^{-1/2}.
        let (vals, vecs) = sym_eigen(&x);
        let floor = 1e-300;
        let x_inv_half = spectral_fn(&vals, &vecs, |e| 1.0 / e.max(floor).sqrt());
        let t = &x_inv_half * dx * &x_inv_half;
        let (tvals, _) = sym_eigen(&t);
        let lam_min = tvals.iter().cloned().fold(f64::INFINITY, f64::min);
        if lam_min < 0.0 {
            alpha = alpha.min(-1.0 / lam_min);
        }
    }
    (frac * alpha).min(1.0)
}

/// svec of the per-block inverses of `v`.
fn block_inverse(blocks: &Blocks, v: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(v.len());
    for (bi, &d) in blocks.dims.iter().enumerate() {
        let off = blocks.offsets[bi];
        if d == 1 {
            out[off] = 1.0 / v[off];
            continue;
        }
        let m = blocks.mat(v, bi);
        let (vals, vecs) = sym_eigen(&m);
        let inv = spectral_fn(&vals, &vecs, |e| 1.0 / e.max(1e-300));
        svec_into(&inv, &mut out.as_mut_slice()[off..off + svec_len(d)]);
    }
    out
}

pub fn solve_real(rp: &RealProblem, tol: &Tolerances) -> Result<IpmOutput, SdpError> {
    let blocks = Blocks::new(&rp.dims);
    let n = blocks.total();
    let m = rp.a.nrows();
    debug_assert_eq!(rp.a.ncols(), n);
    if m == 0 {
        return Ok(IpmOutput { x: blocks.identity_scaled(1.0), iterations: 0 });
    }

    let nu: f64 = rp.dims.iter().map(|&d| d as f64).sum();
    let b_norm = rp.b.norm();
    let c_norm = rp.c.norm();
    let rho_p = 1.0 + rp.b.amax();
    let rho_d = 1.0 + rp.c.amax();
    let mut x = blocks.identity_scaled(rho_p);
    let mut s = blocks.identity_scaled(rho_d);
    let mut y = DVector::zeros(m);
    let x0_norm = x.norm();

    struct BestIterate {
        merit: f64,
        x: DVector<f64>,
        relaxed_ok: bool,
        iteration: usize,
    }
    let mut best = BestIterate { merit: f64::INFINITY, x: x.clone(), relaxed_ok: false, iteration: 0 };
    let mut stale = 0usize;
    for iter in 0..tol.max_iterations {
        let r_p = &rp.b - &rp.a * &x;
        let r_d = &rp.c - rp.a.transpose() * &y - &s;
        let gap = x.dot(&s);
        let obj = rp.c.dot(&x);
        let p_res = r_p.norm() / (1.0 + b_norm);
        let d_res = r_d.norm() / (1.0 + c_norm);
        let rel_gap = gap.abs() / (1.0 + obj.abs());
        if p_res <= tol.feas && d_res <= tol.feas && rel_gap <= tol.gap {
            return Ok(IpmOutput { x, iterations: iter });
        }
        let merit = p_res.max(d_res).max(rel_gap);
        if merit < best.merit {
            let improved = merit < 0.97 * best.merit;
            best = BestIterate {
                merit,
                x: x.clone(),
                relaxed_ok: p_res <= 1e-6 && d_res <= 1e-6 && rel_gap <= 1e-6,
                iteration: iter,
            };
            if improved {
                stale = 0;
            } else {
                stale += 1;
            }
        } else {
            stale += 1;
        }
        if stale > 30 {
            break;
        }
        log::trace!(
            "ipm iter {iter}: mu {:.2e} primal {:.2e} dual {:.2e} gap {:.2e}",
            gap / nu,
            p_res,
            d_res,
            rel_gap
        );
        if !x.norm().is_finite() || x.norm() > 1e10 * x0_norm {
            break;
        }

        let mu = gap / nu;
        if mu.abs() < 1e-13 {
            // Complementarity is at the double-precision floor; directions
            // computed beyond this point are noise.
            break;
        }
        let scalings: Vec<Scaling> = (0..rp.dims.len())
            .map(|bi| nt_scaling(&blocks.mat(&x, bi), &blocks.mat(&s, bi)))
            .collect();

        // Schur complement M = A * Gop * A'.
        let mut w = DMatrix::zeros(n, m);
        for col in 0..m {
            let at_col = DVector::from_column_slice(rp.a.row(col).transpose().as_slice());
            w.set_column(col, &apply_scaling(&scalings, &blocks, &at_col));
        }
        let m_schur = &rp.a * &w;
        let mut reg = 1e-13 * (1.0 + m_schur.diagonal().amax());
        let mut chol = None;
        for _ in 0..8 {
            if let Some(c) = (m_schur.clone() + DMatrix::identity(m, m) * reg).cholesky() {
                chol = Some(c);
                break;
            }
            reg *= 100.0;
        }
        let Some(chol) = chol else {
            // Complementarity has sharpened past what the Schur system can
            // resolve; stop and let the post-loop check grade the iterate.
            break;
        };

        let solve_direction = |r_mu: &DVector<f64>| {
            let rhs = &r_p - &rp.a * r_mu + &rp.a * apply_scaling(&scalings, &blocks, &r_d);
            let dy = chol.solve(&rhs);
            let ds = &r_d - rp.a.transpose() * &dy;
            let dx = r_mu - apply_scaling(&scalings, &blocks, &ds);
            (dx, dy, ds)
        };

        // Predictor: pure Newton step toward the complementarity boundary.
        let r_mu_aff = -&x;
        let (dx_aff, _, ds_aff) = solve_direction(&r_mu_aff);
        let ap_aff = max_step(&blocks, &x, &dx_aff, 1.0);
        let ad_aff = max_step(&blocks, &s, &ds_aff, 1.0);
        let gap_aff = (&x + &dx_aff * ap_aff).dot(&(&s + &ds_aff * ad_aff));
        let sigma = (gap_aff / gap).max(0.0).powi(3).clamp(1e-8, 0.9);

        // Corrector with centering toward sigma * mu. A common primal/dual
        // step keeps the infeasible-start residual contraction coupled.
        let r_mu = block_inverse(&blocks, &s) * (sigma * mu) - &x;
        let (dx, dy, ds) = solve_direction(&r_mu);
        let ap = max_step(&blocks, &x, &dx, 0.99);
        let ad = max_step(&blocks, &s, &ds, 0.99);
        // Growth cap so one bad direction cannot run the iterate off.
        let growth = 1e3 * (1.0 + x.norm() + s.norm());
        let dir_norm = dx.norm().max(ds.norm());
        let alpha = ap.min(ad).min(if dir_norm > 0.0 { growth / dir_norm } else { 1.0 });
        if alpha < 1e-10 {
            break;
        }
        let new_x = &x + &dx * alpha;
        let new_y = &y + &dy * alpha;
        let new_s = &s + &ds * alpha;
        let new_gap = new_x.dot(&new_s);
        if !new_gap.is_finite() || (iter > 5 && new_gap > 1e3 * gap.abs().max(1e-12)) {
            // Blow-up from an ill-conditioned direction; keep the last sane
            // iterate and let the post-loop check grade it.
            break;
        }
        x = new_x;
        y = new_y;
        s = new_s;
    }

    // The tight target was not reached; fall back to the best iterate seen
    // and accept it if the contract-level tolerances hold.
    if best.relaxed_ok {
        return Ok(IpmOutput { x: best.x, iterations: best.iteration });
    }
    Err(SdpError::NumericalFailure {
        iterations: tol.max_iterations,
        reason: format!("did not converge: best combined residual {:.2e}", best.merit),
    })
}
