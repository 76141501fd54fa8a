//! Primal log-barrier interior-point method for the shaping program.
//!
//! Minimizes the linear power objective over the joint PMF subject to
//!
//! - `H(a_m | state) >= R` (concave, handled by the barrier),
//! - entrywise `P >= eps` (handled by the barrier),
//! - normalization and stationarity (linear equalities, handled exactly by
//!   equality-constrained Newton steps).
//!
//! The barrier parameter `t` starts at 1 and is multiplied by 10 per outer
//! stage; each stage re-centers with Newton steps on
//! `t * cost^T x - sum ln(x_i - eps) - ln(H(x) - R)` restricted to the
//! affine feasible set. The certified suboptimality after a centered stage
//! is `(n + 1) / t`.

use nalgebra::{DMatrix, DVector};
use shaping_core::pmf::{kahan_sum, tuple_energies};
use shaping_core::{index, JointPmf};

use crate::{OptError, Result, ShapingProblem, ShapingSolution};

/// Interior clamp on probabilities; keeps the entropy gradient finite.
const EPS_INT: f64 = 1e-12;
const BARRIER_GROWTH: f64 = 10.0;
/// Stop a Newton stage once the decrement satisfies `lambda^2 / 2 <= this`.
const NEWTON_TOL: f64 = 1e-11;
/// Below this decrement the iterate is inside the quadratic-convergence
/// region; Newton steps are accepted on feasibility alone. Near the central
/// path the entropy gap shrinks like `1/t` and the barrier value can no
/// longer be evaluated to better than ~1e-6 absolute, so an Armijo test on
/// it would reject genuine progress.
const FULL_STEP_REGION: f64 = 1e-4;
const ARMIJO_SLOPE: f64 = 0.25;
const BACKTRACK: f64 = 0.5;
const LN2: f64 = std::f64::consts::LN_2;

/// Solves the shaping program for the power-minimizing stationary joint PMF.
///
/// Deterministic for fixed inputs: the iteration starts from the uniform
/// joint (strictly feasible for every rate below saturation) and contains no
/// randomized steps. At `R = log2(m_b)` the unique feasible point is the
/// uniform i.i.d. joint, which is returned directly.
pub fn solve_markov_shaping(problem: &ShapingProblem) -> Result<ShapingSolution> {
    let constellation = problem.constellation();
    let filter = problem.filter();
    let rate = problem.rate();
    let tols = *problem.tolerances();
    let m = constellation.m_b();
    let order = filter.len();
    let max_rate = constellation.max_entropy_bits();

    if rate > max_rate + 1e-12 {
        return Err(OptError::InfeasibleRate {
            rate,
            min: 0.0,
            max: max_rate,
        });
    }
    let n = index::tensor_len(m, order)?;

    if rate >= max_rate - 1e-12 {
        // Rate saturation: entropy can only reach log2(m_b) when every
        // conditional row is uniform and the state chain is uniform too.
        let pmf = JointPmf::uniform(constellation.clone(), order)?;
        let power = pmf.transmit_power(filter)?;
        let entropy = pmf.conditional_entropy();
        return Ok(ShapingSolution {
            pmf,
            power,
            entropy,
            kkt_residual: 0.0,
            iterations: 0,
        });
    }

    let cost = DVector::from_vec(tuple_energies(constellation, filter));
    let (a_mat, b_vec) = equality_constraints(m, n);

    let mut x = DVector::from_element(n, 1.0 / n as f64);
    let mut t = 1.0;
    let n_ineq = (n + 1) as f64;
    // One decade below gap_tol so the solution itself, not just its
    // objective, sits tight against the constraint boundary.
    let gap_target = 0.1 * tols.gap_tol;
    let mut steps_used = 0usize;

    let finish = |x: &DVector<f64>, t: f64, iterations: usize| -> Result<ShapingSolution> {
        let probs = renormalized(x.as_slice());
        let pmf = JointPmf::new(constellation.clone(), order, probs)?;
        let power = pmf.transmit_power(filter)?;
        let entropy = pmf.conditional_entropy();
        Ok(ShapingSolution {
            pmf,
            power,
            entropy,
            kkt_residual: n_ineq / t,
            iterations,
        })
    };

    loop {
        let budget = tols.max_iter.saturating_sub(steps_used);
        let stage = newton_stage(&mut x, t, &cost, &a_mat, &b_vec, rate, m, budget);
        steps_used += stage.steps;
        match stage.outcome {
            StageOutcome::Centered => {}
            StageOutcome::OutOfBudget | StageOutcome::Stalled => {
                return Err(OptError::NoConvergence {
                    best: Box::new(finish(&x, t, steps_used)?),
                });
            }
        }
        if n_ineq / t <= gap_target {
            break;
        }
        if steps_used >= tols.max_iter {
            return Err(OptError::NoConvergence {
                best: Box::new(finish(&x, t, steps_used)?),
            });
        }
        t *= BARRIER_GROWTH;
    }

    let solution = finish(&x, t, steps_used)?;
    debug_assert!(solution.pmf.stationarity_residual() <= tols.feas_tol);
    debug_assert!(solution.entropy >= rate - 1e-6);
    Ok(solution)
}

/// Clamps the interior iterate onto the exact simplex: probabilities within
/// `[-1e-12, 0)` become 0 and the tensor is renormalized.
fn renormalized(x: &[f64]) -> Vec<f64> {
    let mut probs: Vec<f64> = x.iter().map(|p| p.max(0.0)).collect();
    let total = kahan_sum(probs.iter().copied());
    for p in &mut probs {
        *p /= total;
    }
    probs
}

/// Normalization plus stationarity rows. One stationarity row is dropped:
/// the rows sum to zero (every tuple enters once as a chain head and once
/// as a tail), so keeping all of them would make the system rank-deficient.
fn equality_constraints(m: usize, n: usize) -> (DMatrix<f64>, DVector<f64>) {
    let n_states = n / m;
    let extra = n_states.saturating_sub(1);
    let mut a = DMatrix::zeros(1 + extra, n);
    for j in 0..n {
        a[(0, j)] = 1.0;
        // leading marginal of the trailing (L-1)-tuple ...
        let tail_state = j % n_states;
        if tail_state < extra {
            a[(1 + tail_state, j)] += 1.0;
        }
        // ... minus trailing marginal of the leading (L-1)-tuple
        let head_state = j / m;
        if head_state < extra {
            a[(1 + head_state, j)] -= 1.0;
        }
    }
    let mut b = DVector::zeros(1 + extra);
    b[0] = 1.0;
    (a, b)
}

struct Stage {
    steps: usize,
    outcome: StageOutcome,
}

enum StageOutcome {
    Centered,
    OutOfBudget,
    Stalled,
}

/// Conditional entropy in bits together with the per-state block sums.
fn entropy_state(x: &DVector<f64>, m: usize) -> (f64, Vec<f64>) {
    let mut blocks = Vec::with_capacity(x.len() / m);
    let mut h_nats = 0.0;
    for block in x.as_slice().chunks_exact(m) {
        let s: f64 = block.iter().sum();
        for &xi in block {
            h_nats -= xi * xi.ln();
        }
        h_nats += s * s.ln();
        blocks.push(s);
    }
    (h_nats / LN2, blocks)
}

/// Equality-constrained Newton re-centering at fixed barrier parameter `t`.
fn newton_stage(
    x: &mut DVector<f64>,
    t: f64,
    cost: &DVector<f64>,
    a_mat: &DMatrix<f64>,
    b_vec: &DVector<f64>,
    rate: f64,
    m: usize,
    budget: usize,
) -> Stage {
    let n = x.len();
    let p = a_mat.nrows();
    let mut steps = 0usize;

    loop {
        let (h_bits, blocks) = entropy_state(x, m);
        let gap_h = h_bits - rate;
        debug_assert!(gap_h > 0.0);

        let grad_h: DVector<f64> = DVector::from_fn(n, |i, _| {
            (blocks[i / m].ln() - x[i].ln()) / LN2
        });

        let grad_f: DVector<f64> = DVector::from_fn(n, |i, _| {
            t * cost[i] - 1.0 / (x[i] - EPS_INT) - grad_h[i] / gap_h
        });

        // Hessian of the barrier: diagonal + per-state blocks + rank one.
        let mut hess = DMatrix::zeros(n, n);
        for (b, s) in blocks.iter().enumerate() {
            let coeff = -1.0 / (gap_h * LN2 * s);
            for i in b * m..(b + 1) * m {
                for j in b * m..(b + 1) * m {
                    hess[(i, j)] = coeff;
                }
            }
        }
        for i in 0..n {
            let slack = x[i] - EPS_INT;
            hess[(i, i)] += 1.0 / (slack * slack) + 1.0 / (gap_h * LN2 * x[i]);
        }
        hess.ger(1.0 / (gap_h * gap_h), &grad_h, &grad_h, 1.0);

        // KKT system for the equality-constrained Newton step.
        let dim = n + p;
        let mut kkt = DMatrix::zeros(dim, dim);
        kkt.view_mut((0, 0), (n, n)).copy_from(&hess);
        kkt.view_mut((0, n), (n, p)).copy_from(&a_mat.transpose());
        kkt.view_mut((n, 0), (p, n)).copy_from(a_mat);
        let mut rhs = DVector::zeros(dim);
        rhs.rows_mut(0, n).copy_from(&(-&grad_f));
        rhs.rows_mut(n, p).copy_from(&(b_vec - a_mat * &*x));

        let dx = match kkt.lu().solve(&rhs) {
            Some(sol) => sol.rows(0, n).into_owned(),
            None => return Stage { steps, outcome: StageOutcome::Stalled },
        };

        // Newton decrement via the structured quadratic form (O(n)).
        let mut dec = 0.0;
        for i in 0..n {
            let slack = x[i] - EPS_INT;
            dec += (1.0 / (slack * slack) + 1.0 / (gap_h * LN2 * x[i])) * dx[i] * dx[i];
        }
        for (b, s) in blocks.iter().enumerate() {
            let block_sum: f64 = dx.as_slice()[b * m..(b + 1) * m].iter().sum();
            dec -= block_sum * block_sum / (gap_h * LN2 * s);
        }
        let gh_dx = grad_h.dot(&dx);
        dec += gh_dx * gh_dx / (gap_h * gap_h);
        let decrement = dec.max(0.0) / 2.0;
        if decrement <= NEWTON_TOL {
            return Stage { steps, outcome: StageOutcome::Centered };
        }
        if steps >= budget {
            return Stage { steps, outcome: StageOutcome::OutOfBudget };
        }

        let mut alpha = 1.0;
        let mut accepted = false;
        if decrement <= FULL_STEP_REGION {
            // quadratic phase: back off only as far as the interior requires
            for _ in 0..70 {
                if stays_interior(x, &dx, alpha, rate, m) {
                    accepted = true;
                    break;
                }
                alpha *= BACKTRACK;
            }
        } else {
            let slope = grad_f.dot(&dx);
            let cost_dx = cost.dot(&dx);
            for _ in 0..70 {
                if let Some(delta) = barrier_delta(x, &dx, alpha, t, cost_dx, rate, m) {
                    if delta <= ARMIJO_SLOPE * alpha * slope {
                        accepted = true;
                        break;
                    }
                }
                alpha *= BACKTRACK;
            }
        }
        if !accepted {
            return Stage { steps, outcome: StageOutcome::Stalled };
        }
        x.axpy(alpha, &dx, 1.0);
        steps += 1;
    }
}

/// Whether `x + alpha dx` keeps every probability above the interior clamp
/// and the entropy strictly above the rate bound.
fn stays_interior(x: &DVector<f64>, dx: &DVector<f64>, alpha: f64, rate: f64, m: usize) -> bool {
    let n = x.len();
    for i in 0..n {
        if x[i] + alpha * dx[i] <= EPS_INT {
            return false;
        }
    }
    let trial = DVector::from_fn(n, |i, _| x[i] + alpha * dx[i]);
    let (h_bits, _) = entropy_state(&trial, m);
    h_bits > rate
}

/// Exact change of the barrier objective along `alpha * dx`, or `None` if
/// the trial point leaves the interior. Computed in difference form so the
/// Armijo test stays meaningful when `t * cost^T x` dwarfs the decrement.
fn barrier_delta(
    x: &DVector<f64>,
    dx: &DVector<f64>,
    alpha: f64,
    t: f64,
    cost_dx: f64,
    rate: f64,
    m: usize,
) -> Option<f64> {
    let n = x.len();
    let mut log_sum = 0.0;
    for i in 0..n {
        let slack = x[i] - EPS_INT;
        let new_slack = slack + alpha * dx[i];
        if new_slack <= 0.0 {
            return None;
        }
        log_sum += (alpha * dx[i] / slack).ln_1p();
    }
    let trial = DVector::from_fn(n, |i, _| x[i] + alpha * dx[i]);
    let (h_new, _) = entropy_state(&trial, m);
    let (h_old, _) = entropy_state(x, m);
    let gap_new = h_new - rate;
    if gap_new <= 0.0 {
        return None;
    }
    Some(t * alpha * cost_dx - log_sum - (gap_new / (h_old - rate)).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use shaping_core::{Constellation, PrecodingFilter};

    fn problem(m: usize, taps: Vec<f64>, rate: f64) -> ShapingProblem {
        ShapingProblem::new(
            Constellation::new(m).unwrap(),
            PrecodingFilter::new(taps).unwrap(),
            rate,
        )
        .unwrap()
    }

    #[test]
    fn saturated_rate_returns_uniform() {
        let sol = solve_markov_shaping(&problem(2, vec![1.0, 0.9], 1.0)).unwrap();
        assert!((sol.power - 1.81).abs() < 1e-12);
        assert!((sol.entropy - 1.0).abs() < 1e-12);
        for p in sol.pmf.probs() {
            assert!((p - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn infeasible_rate_rejected_at_construction() {
        assert!(matches!(
            ShapingProblem::new(
                Constellation::new(4).unwrap(),
                PrecodingFilter::new(vec![1.0]).unwrap(),
                2.5,
            ),
            Err(OptError::InfeasibleRate { .. })
        ));
    }

    #[test]
    fn solution_is_feasible_and_certified() {
        let prob = problem(2, vec![1.0, 0.9], 0.5);
        let sol = solve_markov_shaping(&prob).unwrap();
        assert!(sol.entropy >= 0.5 - 1e-6);
        assert!(sol.pmf.stationarity_residual() <= 1e-8);
        assert!(sol.kkt_residual <= 1e-8);
        let sum: f64 = sol.pmf.probs().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-10);
        // alternation is favored: flips carry more mass than repeats
        let p = sol.pmf.probs();
        assert!(p[1] > p[0] && p[2] > p[3]);
    }

    #[test]
    fn equality_constraints_have_zero_residual_at_uniform() {
        let (a, b) = equality_constraints(2, 8);
        let x = DVector::from_element(8, 0.125);
        let r = &b - &a * x;
        assert!(r.amax() < 1e-14);
        assert_eq!(a.nrows(), 4); // normalization + 3 of 4 stationarity rows
    }

    #[test]
    fn deterministic_across_runs() {
        let prob = problem(4, vec![1.0, 0.6], 1.3);
        let s1 = solve_markov_shaping(&prob).unwrap();
        let s2 = solve_markov_shaping(&prob).unwrap();
        assert_eq!(s1.pmf.probs(), s2.pmf.probs());
        assert_eq!(s1.iterations, s2.iterations);
    }

    #[test]
    fn tiny_iteration_budget_reports_best_iterate() {
        let prob = problem(4, vec![1.0, 0.6], 1.3).with_tolerances(crate::Tolerances {
            feas_tol: 1e-8,
            gap_tol: 1e-8,
            max_iter: 3,
        });
        match solve_markov_shaping(&prob) {
            Err(OptError::NoConvergence { best }) => {
                let sum: f64 = best.pmf.probs().iter().sum();
                assert!((sum - 1.0).abs() < 1e-10);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }
}
