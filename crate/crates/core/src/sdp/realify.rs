//! Embedding of complex Hermitian problems into real symmetric ones.
//!
//! A Hermitian `X = P + iQ` maps to the symmetric `[[P, -Q], [Q, P]]` of
//! twice the dimension; the embedding preserves positive semidefiniteness
//! and doubles the trace. Coefficient matrices carry a factor 1/2 so every
//! constraint and objective value is preserved exactly. The reverse map
//! averages the diagonal blocks and antisymmetrizes the off-diagonal block,
//! which projects solver output onto the embedded subspace and returns an
//! exactly Hermitian matrix.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{LinearForm, SdpProblem, Sense};
use crate::stats::CMatrix;

/// Real symmetric embedding of a complex Hermitian matrix.
pub fn realify(x: &CMatrix) -> DMatrix<f64> {
    let d = x.nrows();
    let mut out = DMatrix::zeros(2 * d, 2 * d);
    for r in 0..d {
        for c in 0..d {
            let v = x[(r, c)];
            out[(r, c)] = v.re;
            out[(r + d, c + d)] = v.re;
            out[(r, c + d)] = -v.im;
            out[(r + d, c)] = v.im;
        }
    }
    out
}

/// Inverse of [`realify`], tolerant to solver dust: the result is exactly
/// Hermitian and agrees with the input when the input has the embedded
/// structure.
pub fn derealify(b: &DMatrix<f64>) -> CMatrix {
    let d = b.nrows() / 2;
    assert_eq!(b.nrows(), 2 * d);
    assert_eq!(b.ncols(), 2 * d);
    let mut out = CMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            let re = 0.25 * (b[(r, c)] + b[(c, r)] + b[(r + d, c + d)] + b[(c + d, r + d)]);
            let im = 0.5 * (b[(r + d, c)] - b[(c + d, r)]);
            out[(r, c)] = Complex64::new(re, im);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// svec packing: svec(M)' svec(N) = Tr(M N) for symmetric M, N
// ---------------------------------------------------------------------------

pub fn svec_len(d: usize) -> usize {
    d * (d + 1) / 2
}

pub fn svec_into(m: &DMatrix<f64>, out: &mut [f64]) {
    let d = m.nrows();
    let mut k = 0;
    for j in 0..d {
        for i in 0..=j {
            out[k] = if i == j { m[(i, j)] } else { std::f64::consts::SQRT_2 * m[(i, j)] };
            k += 1;
        }
    }
}

pub fn smat(v: &[f64], d: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(d, d);
    let mut k = 0;
    for j in 0..d {
        for i in 0..=j {
            if i == j {
                m[(i, j)] = v[k];
            } else {
                let w = v[k] * std::f64::consts::FRAC_1_SQRT_2;
                m[(i, j)] = w;
                m[(j, i)] = w;
            }
            k += 1;
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Real standard-form problem
// ---------------------------------------------------------------------------

/// `minimize c'x  s.t.  A x = b,  x in a product of PSD cones`, produced
/// from a complex-domain problem. Inequalities gain scalar slack blocks;
/// equalities are expanded into paired inequalities sharing one tolerance.
/// In phase-1 mode an extra scalar measures the largest constraint
/// violation and is minimized.
pub struct RealProblem {
    /// Dimension of each real symmetric block (variables first, then
    /// slacks, then the optional phase-1 scalar).
    pub dims: Vec<usize>,
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DVector<f64>,
    /// Number of leading blocks that embed complex problem variables.
    var_blocks: usize,
    /// svec offset of each block.
    offsets: Vec<usize>,
    /// Phase-1 bookkeeping: (svec index of the shifted slack scalar, shift).
    phase1: Option<(usize, f64)>,
}

impl RealProblem {
    pub fn build(
        problem: &SdpProblem,
        objective: Option<(&LinearForm, bool)>,
        phase1: bool,
    ) -> RealProblem {
        let var_blocks = problem.blocks.len();
        let mut dims: Vec<usize> = problem.blocks.iter().map(|b| 2 * b.dim).collect();

        // Normalize every constraint to `row' x <= rhs` over the variable
        // blocks, in svec coordinates (coefficients carry the 1/2 embedding
        // factor so values match the complex domain).
        let var_len: usize = dims.iter().map(|&d| svec_len(d)).sum();
        let mut var_offsets = Vec::with_capacity(var_blocks);
        {
            let mut off = 0;
            for d in &dims {
                var_offsets.push(off);
                off += svec_len(*d);
            }
        }
        let pack_form = |form: &LinearForm| -> DVector<f64> {
            let mut row = DVector::zeros(var_len);
            for (bi, coeff) in &form.terms {
                let emb = realify(coeff) * 0.5;
                let off = var_offsets[*bi];
                let len = svec_len(emb.nrows());
                svec_into(&emb, &mut row.as_mut_slice()[off..off + len]);
            }
            row
        };

        let mut rows: Vec<(DVector<f64>, f64)> = Vec::new();
        for cons in &problem.constraints {
            let packed = pack_form(&cons.form);
            match cons.sense {
                Sense::Le => rows.push((packed, cons.rhs)),
                Sense::Ge => rows.push((-packed, -cons.rhs)),
                Sense::Eq => {
                    rows.push((packed.clone(), cons.rhs));
                    rows.push((-packed, -cons.rhs));
                }
            }
        }

        // Row equilibration keeps the Schur complement well conditioned.
        for (row, rhs) in rows.iter_mut() {
            let scale = row.norm().max(1.0);
            *row /= scale;
            *rhs /= scale;
        }

        let shift = rows
            .iter()
            .map(|(_, rhs)| rhs.abs())
            .fold(1.0_f64, f64::max)
            .mul_add(2.0, 1.0);

        let m_ineq = rows.len();
        let phase1_block = phase1.then_some(dims.len() + m_ineq);
        // One scalar slack per inequality, plus the phase-1 scalar and its
        // bound-row slack.
        for _ in 0..m_ineq {
            dims.push(1);
        }
        if phase1 {
            dims.push(1); // shifted violation scalar
            dims.push(1); // slack of its upper bound
        }

        let mut offsets = Vec::with_capacity(dims.len());
        let mut total = 0;
        for d in &dims {
            offsets.push(total);
            total += svec_len(*d);
        }

        let m_total = m_ineq + usize::from(phase1);
        let mut a = DMatrix::zeros(m_total, total);
        let mut b = DVector::zeros(m_total);
        for (i, (row, rhs)) in rows.iter().enumerate() {
            a.view_mut((i, 0), (1, var_len)).copy_from(&row.transpose());
            a[(i, offsets[var_blocks + i])] = 1.0;
            b[i] = *rhs;
            if let Some(pb) = phase1_block {
                // row' x - (t + shift) + s = rhs - shift
                a[(i, offsets[pb])] = -1.0;
                b[i] = rhs - shift;
            }
        }
        let phase1_info = phase1_block.map(|pb| {
            // Bound row: (t + shift) + s' = 2 * shift, i.e. t <= shift.
            let i = m_total - 1;
            a[(i, offsets[pb])] = 1.0;
            a[(i, offsets[pb + 1])] = 1.0;
            b[i] = 2.0 * shift;
            (offsets[pb], shift)
        });

        let mut c = DVector::zeros(total);
        match (objective, phase1_info) {
            (Some((form, maximize)), _) => {
                let packed = pack_form(form);
                let sign = if maximize { -1.0 } else { 1.0 };
                c.view_mut((0, 0), (var_len, 1)).copy_from(&(packed * sign));
            }
            (None, Some((t_idx, _))) => c[t_idx] = 1.0,
            (None, None) => {}
        }

        RealProblem { dims, a, b, c, var_blocks, offsets, phase1: phase1_info }
    }

    /// Recovers the complex Hermitian variable blocks from an svec iterate.
    pub fn recover_blocks(&self, x: &DVector<f64>) -> Vec<CMatrix> {
        (0..self.var_blocks)
            .map(|bi| {
                let d = self.dims[bi];
                let off = self.offsets[bi];
                let m = smat(&x.as_slice()[off..off + svec_len(d)], d);
                derealify(&m)
            })
            .collect()
    }

    /// Minimal slack achieved by a phase-1 iterate (negative means every
    /// constraint holds with margin).
    pub fn phase1_value(&self, x: &DVector<f64>) -> f64 {
        let (idx, shift) = self.phase1.expect("phase-1 problem");
        x[idx] - shift
    }
}
