//! Property tests for the evaluable quantities: entropy bounds and
//! concavity, power linearity, the i.i.d. independence identity, and the
//! Markov decomposition round-trip.

use proptest::prelude::*;
use shaping_core::pmf::kahan_sum;
use shaping_core::{Constellation, JointPmf, PrecodingFilter};

fn normalized(mut weights: Vec<f64>) -> Vec<f64> {
    let total = kahan_sum(weights.iter().copied());
    for w in &mut weights {
        *w /= total;
    }
    weights
}

fn arb_pmf(m_b: usize, order: usize) -> impl Strategy<Value = JointPmf> {
    let len = m_b.pow(order as u32);
    prop::collection::vec(1e-4f64..1.0, len).prop_map(move |w| {
        JointPmf::new(Constellation::new(m_b).unwrap(), order, normalized(w)).unwrap()
    })
}

fn mix(p1: &JointPmf, p2: &JointPmf, lambda: f64) -> JointPmf {
    let probs = p1
        .probs()
        .iter()
        .zip(p2.probs())
        .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
        .collect();
    JointPmf::new(p1.constellation().clone(), p1.order(), probs).unwrap()
}

proptest! {
    #[test]
    fn entropy_within_bounds(pmf in arb_pmf(4, 2)) {
        let h = pmf.conditional_entropy();
        prop_assert!(h >= 0.0);
        prop_assert!(h <= 2.0 + 1e-12);
    }

    #[test]
    fn entropy_is_concave(
        p1 in arb_pmf(4, 2),
        p2 in arb_pmf(4, 2),
        lambda in 0.05f64..0.95,
    ) {
        let mixed = mix(&p1, &p2, lambda);
        let lhs = mixed.conditional_entropy();
        let rhs = lambda * p1.conditional_entropy() + (1.0 - lambda) * p2.conditional_entropy();
        prop_assert!(lhs >= rhs - 1e-10, "concavity violated: {lhs} < {rhs}");
    }

    #[test]
    fn power_is_linear_in_pmf(
        p1 in arb_pmf(2, 3),
        p2 in arb_pmf(2, 3),
        lambda in 0.0f64..1.0,
        g0 in -1.5f64..1.5,
        g1 in -1.5f64..1.5,
    ) {
        let g = PrecodingFilter::new(vec![1.0, g0, g1]).unwrap();
        let mixed = mix(&p1, &p2, lambda);
        let lhs = mixed.transmit_power(&g).unwrap();
        let rhs = lambda * p1.transmit_power(&g).unwrap()
            + (1.0 - lambda) * p2.transmit_power(&g).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12, "linearity violated: {lhs} vs {rhs}");
    }

    #[test]
    fn iid_power_factorizes(
        weights in prop::collection::vec(1e-3f64..1.0, 4),
        g1 in -1.0f64..1.0,
    ) {
        // zero-mean marginal: symmetrize the weights
        let sym: Vec<f64> = weights.iter().zip(weights.iter().rev()).map(|(a, b)| a + b).collect();
        let marginal = normalized(sym);
        let c = Constellation::new(4).unwrap();
        let order = 2;
        let mut probs = vec![0.0; 16];
        for i in 0..4 {
            for j in 0..4 {
                probs[i * 4 + j] = marginal[i] * marginal[j];
            }
        }
        let pmf = JointPmf::new(c.clone(), order, normalized(probs)).unwrap();
        let g = PrecodingFilter::new(vec![1.0, g1]).unwrap();
        let mean_square: f64 = marginal
            .iter()
            .zip(c.points())
            .map(|(p, a)| p * (*a as f64) * (*a as f64))
            .sum();
        let expect = mean_square * (1.0 + g1 * g1);
        let got = pmf.transmit_power(&g).unwrap();
        prop_assert!((got - expect).abs() <= 1e-12, "independence identity: {got} vs {expect}");
    }

    #[test]
    fn markov_roundtrip_on_stationary_joints(
        rows in prop::collection::vec(prop::collection::vec(1e-3f64..1.0, 2), 2),
    ) {
        // build a stationary 2-state chain from arbitrary positive rows
        let t: Vec<Vec<f64>> = rows.iter().map(|r| normalized(r.clone())).collect();
        // stationary distribution of a 2-state chain in closed form
        let p_flip0 = t[0][1];
        let p_flip1 = t[1][0];
        let pi0 = p_flip1 / (p_flip0 + p_flip1);
        let probs = normalized(vec![
            pi0 * t[0][0],
            pi0 * t[0][1],
            (1.0 - pi0) * t[1][0],
            (1.0 - pi0) * t[1][1],
        ]);
        let pmf = JointPmf::new(Constellation::new(2).unwrap(), 2, probs).unwrap();
        prop_assert!(pmf.stationarity_residual() <= 1e-12);
        let back = pmf.to_markov().unwrap().to_joint().unwrap();
        for (a, b) in back.probs().iter().zip(pmf.probs()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn serde_roundtrip(pmf in arb_pmf(4, 2)) {
        let json = serde_json::to_string(&pmf).unwrap();
        let back: JointPmf = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, pmf);
    }
}

#[test]
fn entropy_hits_upper_bound_only_for_uniform_conditionals() {
    let c = Constellation::new(4).unwrap();
    let uniform = JointPmf::uniform(c.clone(), 2).unwrap();
    assert_eq!(uniform.conditional_entropy(), 2.0);

    // uniform conditionals with a non-uniform state distribution still reach
    // the bound
    let pi = [0.1, 0.2, 0.3, 0.4];
    let mut probs = vec![0.0; 16];
    for s in 0..4 {
        for a in 0..4 {
            probs[s * 4 + a] = pi[s] * 0.25;
        }
    }
    let pmf = JointPmf::new(c.clone(), 2, probs).unwrap();
    assert!((pmf.conditional_entropy() - 2.0).abs() < 1e-12);

    // any non-uniform reachable row stays strictly below
    let mut probs = vec![0.25 * 0.25; 16];
    probs[0] = 0.25 * 0.20;
    probs[1] = 0.25 * 0.30;
    let pmf = JointPmf::new(c, 2, probs).unwrap();
    assert!(pmf.conditional_entropy() < 2.0 - 1e-4);
}
