//! Walk states and the single-step evolution U = S(C ⊗ I).

use std::collections::BTreeMap;

use crate::coin::{CoinOperator, InitialCoinState};
use crate::error::{QwError, Result};
use crate::graph::WalkGraph;
use crate::C64;

/// Complex amplitudes over the graph's (vertex, port) slots.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    amps: Vec<C64>,
    graph_fp: u64,
    time: u64,
}

impl WalkState {
    /// Place `coin` at `vertex`, zero elsewhere.
    pub fn initial(graph: &WalkGraph, vertex: usize, coin: &InitialCoinState) -> Result<Self> {
        if vertex >= graph.vertex_count() {
            return Err(QwError::Domain(format!(
                "vertex {vertex} does not exist (graph has {} vertices)",
                graph.vertex_count()
            )));
        }
        let local = coin.realize(graph.degree(vertex))?;
        let mut amps = vec![C64::new(0.0, 0.0); graph.amp_len()];
        for (p, a) in local.into_iter().enumerate() {
            amps[graph.slot(vertex, p)] = a;
        }
        Ok(Self {
            amps,
            graph_fp: graph.fingerprint(),
            time: 0,
        })
    }

    /// Wrap raw amplitudes (mainly for tests and the Fourier solver).
    pub fn from_amplitudes(graph: &WalkGraph, amps: Vec<C64>, time: u64) -> Result<Self> {
        if amps.len() != graph.amp_len() {
            return Err(QwError::Shape(format!(
                "state has {} amplitudes, graph has {} slots",
                amps.len(),
                graph.amp_len()
            )));
        }
        Ok(Self {
            amps,
            graph_fp: graph.fingerprint(),
            time,
        })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, graph: &WalkGraph, vertex: usize, port: usize) -> C64 {
        self.amps[graph.slot(vertex, port)]
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Σ_p |ψ(v, p)|².
    pub fn vertex_probability(&self, graph: &WalkGraph, vertex: usize) -> f64 {
        graph
            .slot_range(vertex)
            .map(|s| self.amps[s].norm_sqr())
            .sum()
    }

    pub(crate) fn check_graph(&self, graph: &WalkGraph) -> Result<()> {
        if self.graph_fp != graph.fingerprint() {
            return Err(QwError::Shape(
                "state does not live on this graph".into(),
            ));
        }
        Ok(())
    }
}

/// ⟨a|b⟩.
pub fn overlap(a: &WalkState, b: &WalkState) -> C64 {
    a.amps
        .iter()
        .zip(b.amps.iter())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

/// |⟨a|b⟩|, insensitive to global phase.
pub fn fidelity(a: &WalkState, b: &WalkState) -> f64 {
    overlap(a, b).norm()
}

/// Coin assignment for a walk: one operator for regular graphs, or one per
/// vertex degree on locally-regular graphs such as the glued trees.
#[derive(Debug, Clone)]
pub enum CoinSet {
    Uniform(CoinOperator),
    PerDegree(BTreeMap<usize, CoinOperator>),
}

impl CoinSet {
    pub fn uniform(op: CoinOperator) -> Self {
        CoinSet::Uniform(op)
    }

    /// Grover coin of each degree present in the graph (degree 2 gives the
    /// swap matrix, so tree roots transmit perfectly).
    pub fn grover_for(graph: &WalkGraph) -> Result<Self> {
        Self::per_degree_for(graph, CoinOperator::grover)
    }

    /// DFT coin of each degree present in the graph (degree 2 gives the
    /// Hadamard coin).
    pub fn dft_for(graph: &WalkGraph) -> Result<Self> {
        Self::per_degree_for(graph, CoinOperator::dft)
    }

    fn per_degree_for(
        graph: &WalkGraph,
        make: impl Fn(usize) -> Result<CoinOperator>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for v in 0..graph.vertex_count() {
            let d = graph.degree(v);
            if !map.contains_key(&d) {
                map.insert(d, make(d)?);
            }
        }
        Ok(CoinSet::PerDegree(map))
    }

    pub fn coin_for(&self, degree: usize) -> Result<&CoinOperator> {
        match self {
            CoinSet::Uniform(op) => {
                if op.dim() != degree {
                    return Err(QwError::Shape(format!(
                        "coin dimension {} does not match vertex degree {degree}",
                        op.dim()
                    )));
                }
                Ok(op)
            }
            CoinSet::PerDegree(map) => map.get(&degree).ok_or_else(|| {
                QwError::Shape(format!("no coin provided for vertex degree {degree}"))
            }),
        }
    }
}

impl From<CoinOperator> for CoinSet {
    fn from(op: CoinOperator) -> Self {
        CoinSet::Uniform(op)
    }
}

fn apply_coin(
    graph: &WalkGraph,
    coins: &CoinSet,
    src: &[C64],
    dst: &mut [C64],
    adjoint: bool,
) -> Result<()> {
    for v in 0..graph.vertex_count() {
        let r = graph.slot_range(v);
        let coin = coins.coin_for(r.len())?;
        if adjoint {
            coin.apply_block_adjoint(&src[r.clone()], &mut dst[r]);
        } else {
            coin.apply_block(&src[r.clone()], &mut dst[r]);
        }
    }
    Ok(())
}

/// One step of the walk: S(C ⊗ I)|ψ⟩.
pub fn step(graph: &WalkGraph, coins: &CoinSet, state: &WalkState) -> Result<WalkState> {
    state.check_graph(graph)?;
    let mut coined = vec![C64::new(0.0, 0.0); graph.amp_len()];
    apply_coin(graph, coins, &state.amps, &mut coined, false)?;
    let mut shifted = vec![C64::new(0.0, 0.0); graph.amp_len()];
    for (dst, &src) in graph.shift_src().iter().enumerate() {
        shifted[dst] = coined[src];
    }
    Ok(WalkState {
        amps: shifted,
        graph_fp: state.graph_fp,
        time: state.time + 1,
    })
}

/// One adjoint step: (C† ⊗ I)S⁻¹|ψ⟩, the inverse of [`step`].
pub fn step_adjoint(graph: &WalkGraph, coins: &CoinSet, state: &WalkState) -> Result<WalkState> {
    state.check_graph(graph)?;
    let mut unshifted = vec![C64::new(0.0, 0.0); graph.amp_len()];
    for (dst, &src) in graph.shift_dst().iter().enumerate() {
        unshifted[dst] = state.amps[src];
    }
    let mut out = vec![C64::new(0.0, 0.0); graph.amp_len()];
    apply_coin(graph, coins, &unshifted, &mut out, true)?;
    Ok(WalkState {
        amps: out,
        graph_fp: state.graph_fp,
        time: state.time.saturating_sub(1),
    })
}

/// t applications of [`step`]; t = 0 returns the input unchanged.
pub fn evolve(graph: &WalkGraph, coins: &CoinSet, state: &WalkState, t: u64) -> Result<WalkState> {
    state.check_graph(graph)?;
    if t == 0 {
        return Ok(state.clone());
    }
    // double-buffered in-place evolution
    let mut cur = state.amps.clone();
    let mut coined = vec![C64::new(0.0, 0.0); graph.amp_len()];
    let mut shifted = vec![C64::new(0.0, 0.0); graph.amp_len()];
    for _ in 0..t {
        apply_coin(graph, coins, &cur, &mut coined, false)?;
        for (dst, &src) in graph.shift_src().iter().enumerate() {
            shifted[dst] = coined[src];
        }
        std::mem::swap(&mut cur, &mut shifted);
    }
    Ok(WalkState {
        amps: cur,
        graph_fp: state.graph_fp,
        time: state.time + t,
    })
}

/// t applications of [`step_adjoint`].
pub fn evolve_adjoint(
    graph: &WalkGraph,
    coins: &CoinSet,
    state: &WalkState,
    t: u64,
) -> Result<WalkState> {
    let mut cur = state.clone();
    for _ in 0..t {
        cur = step_adjoint(graph, coins, &cur)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::BoundaryMode;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn rho_one_is_uniform_motion() {
        let g = WalkGraph::line(9).unwrap();
        let coin = CoinSet::uniform(CoinOperator::general2(1.0, 0.0, 0.0).unwrap());
        let s0 = WalkState::initial(&g, g.origin_vertex(), &InitialCoinState::right()).unwrap();
        let s1 = step(&g, &coin, &s0).unwrap();
        // amplitude 1 at x = +1 in coin |R⟩, up to coin phase (here exactly +1)
        assert!(close(
            s1.amplitude(&g, g.origin_vertex() + 1, 0),
            C64::new(1.0, 0.0),
            1e-15
        ));
        assert_eq!(s1.time(), 1);
    }

    #[test]
    fn hadamard_single_step_splits() {
        let g = WalkGraph::line(9).unwrap();
        let coin = CoinSet::uniform(CoinOperator::hadamard());
        let o = g.origin_vertex();
        let s1 = step(
            &g,
            &coin,
            &WalkState::initial(&g, o, &InitialCoinState::right()).unwrap(),
        )
        .unwrap();
        // (|R⟩⊗|x=1⟩ + |L⟩⊗|x=−1⟩)/√2
        assert!(close(s1.amplitude(&g, o + 1, 0), C64::new(FRAC_1_SQRT_2, 0.0), 1e-15));
        assert!(close(s1.amplitude(&g, o - 1, 1), C64::new(FRAC_1_SQRT_2, 0.0), 1e-15));
        assert!(close(s1.amplitude(&g, o + 1, 1), C64::new(0.0, 0.0), 1e-15));
    }

    #[test]
    fn two_cycle_hadamard_period_two() {
        let g = WalkGraph::cycle(2).unwrap();
        let coin = CoinSet::uniform(CoinOperator::hadamard());
        // any state: try a generic one
        let s0 = WalkState::initial(
            &g,
            0,
            &InitialCoinState::bias(0.3, 1.1).unwrap(),
        )
        .unwrap();
        let s2 = evolve(&g, &coin, &s0, 2).unwrap();
        assert!(fidelity(&s0, &s2) > 1.0 - 1e-12);
    }

    #[test]
    fn evolve_zero_is_identity() {
        let g = WalkGraph::cycle(5).unwrap();
        let coin = CoinSet::uniform(CoinOperator::hadamard());
        let s0 = WalkState::initial(&g, 2, &InitialCoinState::left()).unwrap();
        let s = evolve(&g, &coin, &s0, 0).unwrap();
        assert_eq!(s, s0);
    }

    #[test]
    fn eight_cycle_hadamard_period_24() {
        let g = WalkGraph::cycle(8).unwrap();
        let coin = CoinSet::uniform(CoinOperator::hadamard());
        let s0 = WalkState::initial(&g, 0, &InitialCoinState::right()).unwrap();
        let s = evolve(&g, &coin, &s0, 24).unwrap();
        assert!(fidelity(&s0, &s) > 1.0 - 1e-9);
    }

    #[test]
    fn norm_preserved_across_families() {
        let cases: Vec<(WalkGraph, CoinSet)> = vec![
            (
                WalkGraph::cycle(12).unwrap(),
                CoinSet::uniform(CoinOperator::general2(0.37, 0.9, 2.2).unwrap()),
            ),
            (
                WalkGraph::lattice2d(8, 8, BoundaryMode::Torus).unwrap(),
                CoinSet::uniform(CoinOperator::grover(4).unwrap()),
            ),
            (
                WalkGraph::lattice2d(4, 6, BoundaryMode::Klein).unwrap(),
                CoinSet::uniform(CoinOperator::dft(4).unwrap()),
            ),
            (
                WalkGraph::glued_trees(3, 5).unwrap(),
                CoinSet::grover_for(&WalkGraph::glued_trees(3, 5).unwrap()).unwrap(),
            ),
            (
                WalkGraph::hypercube(4).unwrap(),
                CoinSet::uniform(CoinOperator::grover(4).unwrap()),
            ),
        ];
        for (g, coin) in cases {
            let init = if g.degree(0) == 2 {
                InitialCoinState::bias(0.7, 0.4).unwrap()
            } else {
                InitialCoinState::uniform(g.degree(0))
            };
            let s0 = WalkState::initial(&g, 0, &init).unwrap();
            let s = evolve(&g, &coin, &s0, 300).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-12, "{:?}", g.kind());
        }
    }

    #[test]
    fn adjoint_reverses_evolution() {
        let g = WalkGraph::glued_trees(3, 9).unwrap();
        let coin = CoinSet::grover_for(&g).unwrap();
        let s0 = WalkState::initial(&g, 0, &InitialCoinState::uniform(2)).unwrap();
        let fwd = evolve(&g, &coin, &s0, 57).unwrap();
        let back = evolve_adjoint(&g, &coin, &fwd, 57).unwrap();
        assert!(fidelity(&s0, &back) > 1.0 - 1e-9);
    }

    #[test]
    fn graph_mismatch_is_shape_error() {
        let g1 = WalkGraph::cycle(4).unwrap();
        let g2 = WalkGraph::cycle(5).unwrap();
        let coin = CoinSet::uniform(CoinOperator::hadamard());
        let s = WalkState::initial(&g1, 0, &InitialCoinState::right()).unwrap();
        assert!(matches!(step(&g2, &coin, &s), Err(QwError::Shape(_))));
    }

    #[test]
    fn coin_dimension_mismatch_is_shape_error() {
        let g = WalkGraph::hypercube(3).unwrap();
        let coin = CoinSet::uniform(CoinOperator::hadamard());
        let s = WalkState::initial(&g, 0, &InitialCoinState::uniform(3)).unwrap();
        assert!(matches!(step(&g, &coin, &s), Err(QwError::Shape(_))));
    }
}
