//! Exact planning on the deterministic discrete environments.

/// A deterministic finite MDP with absorbing terminal states.
pub trait FiniteMdp {
    fn num_states(&self) -> usize;
    fn num_actions(&self) -> usize;
    fn is_terminal(&self, state: usize) -> bool;
    /// `(next_state, reward)` for a non-terminal `state`.
    fn transition(&self, state: usize, action: usize) -> (usize, f64);
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValueTable {
    pub values: Vec<f64>,
    /// Greedy action per state; `None` on terminal states.
    pub policy: Vec<Option<usize>>,
    pub iterations: usize,
}

/// Sup-norm distance to the fixed point that value iteration stops at.
pub const VALUE_TOLERANCE: f64 = 1e-8;

const MAX_SWEEPS: usize = 10_000_000;

/// Action values of one state under `values`; `gamma` may be exactly 1 for
/// MDPs where every policy worth following reaches a terminal.
pub fn q_values<M: FiniteMdp + ?Sized>(mdp: &M, values: &[f64], state: usize, gamma: f64) -> Vec<f64> {
    (0..mdp.num_actions())
        .map(|a| {
            let (next, reward) = mdp.transition(state, a);
            let tail = if mdp.is_terminal(next) { 0.0 } else { values[next] };
            reward + gamma * tail
        })
        .collect()
}

/// Lowest-index argmax; near-ties within 1e-12 resolve to the smaller index.
pub fn greedy(q: &[f64]) -> usize {
    let mut best = 0;
    for (a, &v) in q.iter().enumerate().skip(1) {
        if v > q[best] + 1e-12 {
            best = a;
        }
    }
    best
}

/// Synchronous value iteration until the sup-norm error bound drops below
/// [`VALUE_TOLERANCE`]. For `gamma < 1` the bound is `delta * gamma / (1 - gamma)`;
/// for `gamma == 1` the sweep stops once values stop changing.
pub fn value_iteration<M: FiniteMdp + ?Sized>(mdp: &M, gamma: f64) -> ValueTable {
    assert!(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
    let n = mdp.num_states();
    let mut values = vec![0.0; n];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut delta: f64 = 0.0;
        let next: Vec<f64> = (0..n)
            .map(|s| {
                if mdp.is_terminal(s) {
                    return 0.0;
                }
                let q = q_values(mdp, &values, s, gamma);
                let v = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                delta = delta.max((v - values[s]).abs());
                v
            })
            .collect();
        values = next;
        let bound = if gamma < 1.0 {
            delta * gamma / (1.0 - gamma)
        } else {
            delta
        };
        if bound < VALUE_TOLERANCE * 1e-2 || iterations >= MAX_SWEEPS {
            break;
        }
    }
    let policy = (0..n)
        .map(|s| (!mdp.is_terminal(s)).then(|| greedy(&q_values(mdp, &values, s, gamma))))
        .collect();
    ValueTable {
        values,
        policy,
        iterations,
    }
}

/// Largest absolute Bellman residual over non-terminal states.
pub fn bellman_residual<M: FiniteMdp + ?Sized>(mdp: &M, values: &[f64], gamma: f64) -> f64 {
    (0..mdp.num_states())
        .filter(|&s| !mdp.is_terminal(s))
        .map(|s| {
            let best = q_values(mdp, values, s, gamma)
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max);
            (best - values[s]).abs()
        })
        .fold(0.0, f64::max)
}
