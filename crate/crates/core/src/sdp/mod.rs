//! Dense semidefinite programming over products of small Hermitian PSD
//! blocks with linear trace constraints.
//!
//! Problems are stated over complex Hermitian variables. Internally each
//! block is embedded into a real symmetric block of twice the dimension
//! (see [`realify`]) and handed to a primal-dual interior-point method.
//! All blocks in this crate are tiny (at most a few antennas squared), so a
//! dense bespoke solver keeps the dependency footprint small and the results
//! deterministic.

mod ipm;
mod rank;
mod realify;

pub use rank::{hermitian_eigen, hermitian_eigenvalues, numerical_rank, RankInfo};
pub use realify::{derealify, realify};

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::SdpError;
use crate::stats::CMatrix;

/// One Hermitian PSD variable.
#[derive(Debug, Clone)]
pub struct BlockSpec {
    pub name: String,
    pub dim: usize,
}

/// Linear functional `sum_b Tr(A_b X_b)` over the problem blocks.
#[derive(Debug, Clone, Default)]
pub struct LinearForm {
    /// (block index, Hermitian coefficient matrix) pairs.
    pub terms: Vec<(usize, CMatrix)>,
}

impl LinearForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, block: usize, coeff: CMatrix) -> Self {
        self.add(block, coeff);
        self
    }

    pub fn add(&mut self, block: usize, coeff: CMatrix) {
        for (b, m) in self.terms.iter_mut() {
            if *b == block {
                *m += coeff;
                return;
            }
        }
        self.terms.push((block, coeff));
    }

    /// Evaluates the functional on a list of per-block matrices.
    pub fn eval(&self, blocks: &[CMatrix]) -> f64 {
        self.terms
            .iter()
            .map(|(b, a)| (a * &blocks[*b]).diagonal().iter().map(|z| z.re).sum::<f64>())
            .sum()
    }

    pub fn scaled(&self, factor: f64) -> LinearForm {
        LinearForm {
            terms: self
                .terms
                .iter()
                .map(|(b, m)| (*b, m * Complex64::new(factor, 0.0)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// One scalar constraint `form ⋈ rhs`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub form: LinearForm,
    pub sense: Sense,
    pub rhs: f64,
    pub label: String,
}

#[derive(Debug, Clone)]
pub enum Objective {
    /// Decide whether the constraint set is non-empty.
    Feasibility,
    Maximize(LinearForm),
    Minimize(LinearForm),
}

/// A linear-objective problem over Hermitian PSD blocks.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub blocks: Vec<BlockSpec>,
    pub objective: Objective,
    pub constraints: Vec<Constraint>,
}

impl SdpProblem {
    pub fn feasibility(blocks: Vec<BlockSpec>) -> Self {
        SdpProblem { blocks, objective: Objective::Feasibility, constraints: Vec::new() }
    }

    pub fn constrain(&mut self, form: LinearForm, sense: Sense, rhs: f64, label: impl Into<String>) {
        self.constraints.push(Constraint { form, sense, rhs, label: label.into() });
    }

    /// Plain-text dump of every coefficient matrix, for offline cross-checks.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "blocks:");
        for b in &self.blocks {
            let _ = writeln!(out, "  {} dim {}", b.name, b.dim);
        }
        let obj = match &self.objective {
            Objective::Feasibility => "feasibility".to_string(),
            Objective::Maximize(_) => "maximize".to_string(),
            Objective::Minimize(_) => "minimize".to_string(),
        };
        let _ = writeln!(out, "objective: {obj}");
        if let Objective::Maximize(f) | Objective::Minimize(f) = &self.objective {
            dump_form(&mut out, f, &self.blocks);
        }
        for (i, c) in self.constraints.iter().enumerate() {
            let sense = match c.sense {
                Sense::Le => "<=",
                Sense::Ge => ">=",
                Sense::Eq => "==",
            };
            let _ = writeln!(out, "constraint {i} [{}] {sense} {}", c.label, c.rhs);
            dump_form(&mut out, &c.form, &self.blocks);
        }
        out
    }

    fn validate(&self) -> Result<(), SdpError> {
        let forms = self
            .constraints
            .iter()
            .map(|c| &c.form)
            .chain(match &self.objective {
                Objective::Maximize(f) | Objective::Minimize(f) => Some(f),
                Objective::Feasibility => None,
            });
        for (index, form) in forms.enumerate() {
            for (b, a) in &form.terms {
                let Some(spec) = self.blocks.get(*b) else {
                    return Err(SdpError::UnknownBlock { index, block: format!("#{b}") });
                };
                if a.nrows() != spec.dim || a.ncols() != spec.dim {
                    return Err(SdpError::ConstraintShape {
                        index,
                        block: spec.name.clone(),
                        got: a.nrows(),
                        got2: a.ncols(),
                        want: spec.dim,
                    });
                }
                let asym = (a - a.adjoint()).norm();
                if asym > 1e-12 * (1.0 + a.norm()) {
                    return Err(SdpError::NotHermitian { index, block: spec.name.clone(), asym });
                }
            }
        }
        Ok(())
    }
}

fn dump_form(out: &mut String, form: &LinearForm, blocks: &[BlockSpec]) {
    for (b, a) in &form.terms {
        let _ = writeln!(out, "  block {}:", blocks[*b].name);
        for r in 0..a.nrows() {
            let row = (0..a.ncols())
                .map(|c| format!("{:+.12e}{:+.12e}i", a[(r, c)].re, a[(r, c)].im))
                .collect::<Vec<_>>()
                .join("  ");
            let _ = writeln!(out, "    {row}");
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Objective problem solved to tolerance.
    Optimal,
    /// Feasibility problem: a point satisfying all constraints was found.
    Feasible,
    /// Feasibility problem: the minimal constraint slack exceeds the
    /// infeasibility threshold.
    Infeasible,
}

/// Solver tolerances. Defaults satisfy the library-wide contracts
/// (primal feasibility 1e-7, relative gap 1e-6) with margin.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Target relative primal/dual residual.
    pub feas: f64,
    /// Target relative duality gap.
    pub gap: f64,
    /// Minimal-slack threshold above which a feasibility problem is declared
    /// infeasible.
    pub infeasibility_slack: f64,
    pub max_iterations: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { feas: 1e-8, gap: 1e-8, infeasibility_slack: 1e-6, max_iterations: 500 }
    }
}

/// A certified solution.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SolveStatus,
    /// Per-block Hermitian solutions, in problem block order.
    pub blocks: Vec<CMatrix>,
    /// Objective value in the problem's own sense (minimal slack for
    /// feasibility problems).
    pub objective: f64,
    /// Largest constraint violation, relative to `1 + |rhs|`.
    pub max_violation: f64,
    /// Eigenvalue spectrum of each block.
    pub spectra: Vec<Vec<f64>>,
    pub iterations: usize,
}

/// Solves the problem. Feasibility problems run an auxiliary
/// slack-minimization phase: minimize `t` such that every inequality holds
/// with margin `-t`; the set is declared infeasible when the minimal slack
/// exceeds `tol.infeasibility_slack`.
pub fn solve(problem: &SdpProblem, tol: &Tolerances) -> Result<SdpSolution, SdpError> {
    problem.validate()?;
    match &problem.objective {
        Objective::Feasibility => solve_phase1(problem, tol),
        Objective::Maximize(f) => solve_objective(problem, f, true, tol),
        Objective::Minimize(f) => solve_objective(problem, f, false, tol),
    }
}

fn solve_objective(
    problem: &SdpProblem,
    form: &LinearForm,
    maximize: bool,
    tol: &Tolerances,
) -> Result<SdpSolution, SdpError> {
    let real = realify::RealProblem::build(problem, Some((form, maximize)), false);
    let out = ipm::solve_real(&real, tol)?;
    let blocks = real.recover_blocks(&out.x);
    let objective = form.eval(&blocks);
    Ok(finish(problem, blocks, SolveStatus::Optimal, objective, out.iterations))
}

fn solve_phase1(problem: &SdpProblem, tol: &Tolerances) -> Result<SdpSolution, SdpError> {
    let real = realify::RealProblem::build(problem, None, true);
    let out = ipm::solve_real(&real, tol)?;
    let blocks = real.recover_blocks(&out.x);
    let slack = real.phase1_value(&out.x);
    let status = if slack <= tol.infeasibility_slack {
        SolveStatus::Feasible
    } else {
        SolveStatus::Infeasible
    };
    Ok(finish(problem, blocks, status, slack, out.iterations))
}

fn finish(
    problem: &SdpProblem,
    blocks: Vec<CMatrix>,
    status: SolveStatus,
    objective: f64,
    iterations: usize,
) -> SdpSolution {
    let mut max_violation: f64 = 0.0;
    if status != SolveStatus::Infeasible {
        for c in &problem.constraints {
            let v = c.form.eval(&blocks);
            let miss = match c.sense {
                Sense::Le => v - c.rhs,
                Sense::Ge => c.rhs - v,
                Sense::Eq => (v - c.rhs).abs(),
            };
            max_violation = max_violation.max(miss / (1.0 + c.rhs.abs()));
        }
    }
    let spectra = blocks.iter().map(|x| hermitian_eigenvalues(x)).collect();
    SdpSolution { status, blocks, objective, max_violation, spectra, iterations }
}

/// Convenience: solve a feasibility problem and report whether the set is
/// non-empty, together with the witness blocks.
pub fn solve_feasibility(
    problem: &SdpProblem,
    tol: &Tolerances,
) -> Result<(bool, SdpSolution), SdpError> {
    let sol = solve(problem, tol)?;
    Ok((sol.status == SolveStatus::Feasible, sol))
}

/// Builds a `dim x dim` Hermitian coefficient from a rank-1 channel outer
/// product `h h^H`.
pub fn outer(h: &crate::model::CVector) -> CMatrix {
    h * h.adjoint()
}

/// Diagonal coefficient matrix with `|g_i|^2` entries; represents
/// `Tr(diag(|g|^2) X) = g^H diag(X) g`.
pub fn diag_abs2(g: &crate::model::CVector) -> CMatrix {
    let n = g.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(g[i].norm_sqr(), 0.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CVector;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn random_hermitian(rng: &mut rand_chacha::ChaCha8Rng, d: usize) -> CMatrix {
        let raw = CMatrix::from_fn(d, d, |_, _| {
            Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
        });
        (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0)
    }

    fn trace_bounded_max(h: &CMatrix, p: f64) -> SdpProblem {
        let d = h.nrows();
        let mut problem = SdpProblem {
            blocks: vec![BlockSpec { name: "x".into(), dim: d }],
            objective: Objective::Maximize(LinearForm::new().with(0, h.clone())),
            constraints: Vec::new(),
        };
        problem.constrain(
            LinearForm::new().with(0, CMatrix::identity(d, d)),
            Sense::Le,
            p,
            "power",
        );
        problem
    }

    #[test]
    fn max_trace_equals_power_times_largest_eigenvalue() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for trial in 0..20 {
            let d = 2 + trial % 3;
            let h = random_hermitian(&mut rng, d);
            let p = 0.5 + rng.gen::<f64>() * 4.0;
            let sol = solve(&trace_bounded_max(&h, p), &Tolerances::default()).unwrap();
            let lam_max = hermitian_eigenvalues(&h).last().copied().unwrap();
            let oracle = p * lam_max.max(0.0);
            assert!(
                (sol.objective - oracle).abs() <= 1e-6 * (1.0 + oracle.abs()),
                "trial {trial}: objective {} vs oracle {oracle}",
                sol.objective
            );
            if lam_max > 1e-6 {
                // Optimal X concentrates on the principal eigenvector.
                let info = numerical_rank(&sol.blocks[0], 1e-5);
                assert_eq!(info.rank, 1, "spectrum {:?}", info.eigenvalues);
            }
        }
    }

    #[test]
    fn feasibility_detects_contradictory_traces() {
        let d = 2;
        let mut problem = SdpProblem::feasibility(vec![BlockSpec { name: "x".into(), dim: d }]);
        let eye = LinearForm::new().with(0, CMatrix::identity(d, d));
        problem.constrain(eye.clone(), Sense::Le, 1.0, "upper");
        problem.constrain(eye, Sense::Ge, 2.0, "lower");
        let sol = solve(&problem, &Tolerances::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
        assert!(sol.objective > 1e-6, "minimal slack {}", sol.objective);
    }

    #[test]
    fn feasibility_accepts_trace_bound_alone() {
        let mut problem = SdpProblem::feasibility(vec![BlockSpec { name: "x".into(), dim: 2 }]);
        problem.constrain(
            LinearForm::new().with(0, CMatrix::identity(2, 2)),
            Sense::Le,
            1.0,
            "upper",
        );
        let sol = solve(&problem, &Tolerances::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Feasible);
        let tr = sol.blocks[0].trace().re;
        assert!(tr <= 1.0 + 1e-7, "trace {tr}");
        let min_eig = sol.spectra[0].first().copied().unwrap();
        assert!(min_eig >= -1e-8);
    }

    #[test]
    fn equality_constraints_hold_as_paired_inequalities() {
        // max Tr(diag(1, 0) X) s.t. Tr(X) = 1 -> objective 1 at X = e1 e1'.
        let h = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]));
        let mut problem = SdpProblem {
            blocks: vec![BlockSpec { name: "x".into(), dim: 2 }],
            objective: Objective::Maximize(LinearForm::new().with(0, h)),
            constraints: Vec::new(),
        };
        problem.constrain(
            LinearForm::new().with(0, CMatrix::identity(2, 2)),
            Sense::Eq,
            1.0,
            "trace",
        );
        let sol = solve(&problem, &Tolerances::default()).unwrap();
        assert_abs_diff_eq!(sol.objective, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(sol.blocks[0].trace().re, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn minimize_runs_through_the_same_path() {
        // min Tr(X) s.t. Tr(H X) >= 1 with H = h h^H, ||h|| = 1: optimum 1.
        let h = CVector::from_vec(vec![
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
        ]);
        let mut problem = SdpProblem {
            blocks: vec![BlockSpec { name: "x".into(), dim: 2 }],
            objective: Objective::Minimize(LinearForm::new().with(0, CMatrix::identity(2, 2))),
            constraints: Vec::new(),
        };
        problem.constrain(LinearForm::new().with(0, outer(&h)), Sense::Ge, 1.0, "gain");
        let sol = solve(&problem, &Tolerances::default()).unwrap();
        assert_abs_diff_eq!(sol.objective, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn multi_block_feasibility_with_cross_constraints() {
        // Two blocks, coupled budget, plus per-block demands.
        let mut problem = SdpProblem::feasibility(vec![
            BlockSpec { name: "a".into(), dim: 2 },
            BlockSpec { name: "b".into(), dim: 3 },
        ]);
        let eye2 = CMatrix::identity(2, 2);
        let eye3 = CMatrix::identity(3, 3);
        problem.constrain(
            LinearForm::new().with(0, eye2.clone()).with(1, eye3.clone()),
            Sense::Le,
            2.0,
            "joint budget",
        );
        problem.constrain(LinearForm::new().with(0, eye2), Sense::Ge, 0.5, "a demand");
        problem.constrain(LinearForm::new().with(1, eye3), Sense::Ge, 0.7, "b demand");
        let sol = solve(&problem, &Tolerances::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Feasible);
        assert!(sol.max_violation <= 1e-7);
    }

    #[test]
    fn relaxing_a_feasible_set_keeps_it_feasible() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let h = random_hermitian(&mut rng, 2);
            let demand = rng.gen::<f64>();
            let mut problem = SdpProblem::feasibility(vec![BlockSpec { name: "x".into(), dim: 2 }]);
            problem.constrain(
                LinearForm::new().with(0, CMatrix::identity(2, 2)),
                Sense::Le,
                1.0 + rng.gen::<f64>(),
                "budget",
            );
            problem.constrain(
                LinearForm::new().with(0, &h * &h + CMatrix::identity(2, 2)),
                Sense::Ge,
                demand,
                "demand",
            );
            let base = solve(&problem, &Tolerances::default()).unwrap();
            if base.status != SolveStatus::Feasible {
                continue;
            }
            // Relax every right-hand side and re-solve.
            let mut relaxed = problem.clone();
            for c in relaxed.constraints.iter_mut() {
                match c.sense {
                    Sense::Le => c.rhs += 0.5,
                    Sense::Ge => c.rhs -= 0.5_f64.min(c.rhs),
                    Sense::Eq => {}
                }
            }
            let sol = solve(&relaxed, &Tolerances::default()).unwrap();
            assert_eq!(sol.status, SolveStatus::Feasible);
        }
    }

    #[test]
    fn local_perturbations_do_not_improve_certified_optima() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let h = random_hermitian(&mut rng, 3);
        let p = 2.0;
        let problem = trace_bounded_max(&h, p);
        let sol = solve(&problem, &Tolerances::default()).unwrap();
        let objective = |x: &CMatrix| (&h * x).trace().re;
        let base = objective(&sol.blocks[0]);
        let mut improved = 0;
        for _ in 0..200 {
            let dir = random_hermitian(&mut rng, 3);
            let dir = &dir * Complex64::new(1e-4 / dir.norm(), 0.0);
            let cand = &sol.blocks[0] + dir;
            let feasible = hermitian_eigenvalues(&cand).first().copied().unwrap() >= 0.0
                && cand.trace().re <= p;
            if feasible && objective(&cand) > base + 1e-5 {
                improved += 1;
            }
        }
        assert_eq!(improved, 0);
    }

    #[test]
    fn dump_names_blocks_and_constraints() {
        let problem = trace_bounded_max(&CMatrix::identity(2, 2), 1.0);
        let text = problem.dump();
        assert!(text.contains("x dim 2"));
        assert!(text.contains("power"));
    }
}
