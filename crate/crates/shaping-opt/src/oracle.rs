//! Exhaustive search over stationary binary two-tap joints, used as ground
//! truth for the interior-point solver. No derivatives, no convexity
//! machinery: every candidate is evaluated directly.

use shaping_core::pmf::tuple_energies;
use shaping_core::{Constellation, JointPmf, PrecodingFilter};

use crate::{OptError, Result, ShapingSolution};

/// Refinement stops once the scan step is below this.
const FINAL_STEP: f64 = 1e-9;
/// Feasibility slack so boundary optima (e.g. the uniform joint at
/// saturation) are not lost to rounding in the entropy evaluation.
const FEAS_SLACK: f64 = 1e-12;

/// Exhaustively scans stationary 2-ASK, two-tap joint PMFs for the
/// power-minimizing feasible point.
///
/// A stationary binary joint is `[x, z, z, y]` with `x + y + 2z = 1`, so
/// the search space is the two-dimensional `(x, y)` simplex. The full
/// simplex is scanned at `resolution`; the scan is then repeated on
/// successively finer grids around the incumbent until the step drops
/// below 1e-9, so the returned objective tracks the continuous optimum far
/// tighter than the initial grid spacing. `iterations` reports the number
/// of evaluated grid points.
pub fn grid_oracle(
    constellation: &Constellation,
    filter: &PrecodingFilter,
    rate: f64,
    resolution: f64,
) -> Result<ShapingSolution> {
    if constellation.m_b() != 2 || filter.len() != 2 {
        return Err(OptError::Unsupported(format!(
            "grid oracle covers 2-ASK with two taps only, got m_b={}, L={}",
            constellation.m_b(),
            filter.len()
        )));
    }
    if !(resolution > 0.0 && resolution <= 0.25) {
        return Err(OptError::InvalidArgument(format!(
            "resolution must be in (0, 0.25], got {resolution}"
        )));
    }
    if !rate.is_finite() || rate <= 0.0 || rate > 1.0 + 1e-12 {
        return Err(OptError::InfeasibleRate {
            rate,
            min: 0.0,
            max: 1.0,
        });
    }

    let build = |x: f64, y: f64| -> Result<ShapingSolution> {
        let z = 0.5 * (1.0 - x - y);
        let pmf = JointPmf::new(constellation.clone(), 2, vec![x, z, z, y])?;
        Ok(ShapingSolution {
            power: pmf.transmit_power(filter)?,
            entropy: pmf.conditional_entropy(),
            pmf,
            kkt_residual: 0.0,
            iterations: 0,
        })
    };

    if rate >= 1.0 - 1e-12 {
        // saturation: only the uniform joint reaches 1 bit/symbol
        return build(0.25, 0.25);
    }

    let energies = tuple_energies(constellation, filter); // (--, -+, +-, ++)
    let evaluate = |x: f64, y: f64| -> Option<f64> {
        let z = 0.5 * (1.0 - x - y);
        if x < 0.0 || y < 0.0 || z < 0.0 {
            return None;
        }
        let s0 = x + z;
        let s1 = z + y;
        let mut h = 0.0;
        for (p, s) in [(x, s0), (z, s0), (z, s1), (y, s1)] {
            if p > 0.0 && s > 0.0 {
                h -= p * (p / s).log2();
            }
        }
        if h < rate - FEAS_SLACK {
            return None;
        }
        Some(x * energies[0] + z * (energies[1] + energies[2]) + y * energies[3])
    };

    let mut evaluated = 0usize;
    let mut best: Option<(f64, f64, f64)> = None; // (power, x, y)
    let mut consider = |x: f64, y: f64, evaluated: &mut usize, best: &mut Option<(f64, f64, f64)>| {
        *evaluated += 1;
        if let Some(power) = evaluate(x, y) {
            let better = match best {
                None => true,
                Some((bp, _, _)) => power < *bp,
            };
            if better {
                *best = Some((power, x, y));
            }
        }
    };

    // full scan of the simplex at the requested resolution
    let cells = (1.0 / resolution).floor() as i64;
    for i in 0..=cells {
        let x = i as f64 * resolution;
        for j in 0..=(cells - i) {
            let y = j as f64 * resolution;
            consider(x, y, &mut evaluated, &mut best);
        }
    }
    let (_, mut bx, mut by) = best.ok_or_else(|| {
        OptError::InvalidArgument(format!(
            "no feasible grid point for rate {rate} at resolution {resolution}"
        ))
    })?;

    // refine around the incumbent; each window spans two cells of the
    // previous level so the continuous optimum cannot be stepped over
    let mut step = resolution;
    while step > FINAL_STEP {
        step /= 4.0;
        for i in -8..=8i64 {
            for j in -8..=8i64 {
                let x = bx + i as f64 * step;
                let y = by + j as f64 * step;
                consider(x, y, &mut evaluated, &mut best);
            }
        }
        let (_, nx, ny) = best.unwrap();
        bx = nx;
        by = ny;
    }

    let (_, x, y) = best.unwrap();
    let mut solution = build(x, y)?;
    solution.iterations = evaluated;
    Ok(solution)
}
