//! The 640-coin experiment and spreading analysis on the 2-D lattice.
//!
//! Restricting 4×4 unitary coins to entries in {±1/2, ±i/2} with the
//! leading diagonal entry +1/2 leaves exactly 640 operators.  Probing each
//! with a |RU⟩ start and recording the second-moment trajectory groups
//! them into 10 types; Hadamard-pair, Grover and DFT coins land in
//! different types.

use rayon::prelude::*;
use serde::Serialize;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coin::{CoinOperator, InitialCoinState};
use crate::dist::{moments2d, position_distribution};
use crate::error::{QwError, Result};
use crate::graph::{BoundaryMode, WalkGraph};
use crate::state::{evolve, step, CoinSet, WalkState};
use crate::C64;

/// Entry alphabet of the enumeration, in canonical order.
const ENTRY_VALUES: [C64; 4] = [
    C64::new(0.5, 0.0),
    C64::new(0.0, 0.5),
    C64::new(-0.5, 0.0),
    C64::new(0.0, -0.5),
];

/// All symmetric 4×4 unitaries with entries in {±1/2, ±i/2} and leading
/// diagonal entry +1/2, in canonical (row-major, lexicographic) order.
/// There are exactly 640.
pub fn enumerate_unbiased_coins4() -> Vec<CoinOperator> {
    let mut rows: Vec<[C64; 4]> = Vec::with_capacity(256);
    let mut codes = [0usize; 4];
    loop {
        rows.push([
            ENTRY_VALUES[codes[0]],
            ENTRY_VALUES[codes[1]],
            ENTRY_VALUES[codes[2]],
            ENTRY_VALUES[codes[3]],
        ]);
        // next code vector
        let mut i = 3;
        loop {
            codes[i] += 1;
            if codes[i] < 4 {
                break;
            }
            codes[i] = 0;
            if i == 0 {
                break;
            }
            i -= 1;
        }
        if codes == [0usize; 4] {
            break;
        }
    }

    let orthogonal = |a: &[C64; 4], b: &[C64; 4]| -> bool {
        let dot: C64 = a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum();
        dot.norm() < 1e-12
    };

    let mut out = Vec::new();
    // depth-first over rows with symmetry and orthogonality pruning; row 0
    // fixes the leading entry +1/2, later rows must mirror earlier columns
    for r0 in rows.iter().filter(|r| r[0] == ENTRY_VALUES[0]) {
        for r1 in rows
            .iter()
            .filter(|r| r[0] == r0[1] && orthogonal(r, r0))
        {
            for r2 in rows
                .iter()
                .filter(|r| r[0] == r0[2] && r[1] == r1[2] && orthogonal(r, r0) && orthogonal(r, r1))
            {
                for r3 in rows.iter().filter(|r| {
                    r[0] == r0[3]
                        && r[1] == r1[3]
                        && r[2] == r2[3]
                        && orthogonal(r, r0)
                        && orthogonal(r, r1)
                        && orthogonal(r, r2)
                }) {
                    let mut entries = Vec::with_capacity(16);
                    for row in [r0, r1, r2, r3] {
                        entries.extend_from_slice(&row[..]);
                    }
                    let label = format!("unbiased4[{}]", out.len());
                    out.push(
                        CoinOperator::from_matrix(label, 4, entries)
                            .expect("rows are orthonormal by construction"),
                    );
                }
            }
        }
    }
    out
}

/// Second-moment trajectory ⟨x²+y²⟩(t), t = 1..=t_probe, of a lattice walk
/// from |RU⟩ at the center of an open window sized to the light cone.
/// This is the classification key for the 640-coin experiment.
pub fn class_signature(coin: &CoinOperator, t_probe: usize) -> Result<Vec<f64>> {
    if coin.dim() != 4 {
        return Err(QwError::Shape(format!(
            "lattice probe needs a 4-dimensional coin, got {}",
            coin.dim()
        )));
    }
    let window = 2 * t_probe + 3;
    let graph = WalkGraph::lattice2d(window, window, BoundaryMode::Open)?;
    let ru = InitialCoinState::Explicit(vec![
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
    ]);
    let coins = CoinSet::uniform(coin.clone());
    let mut state = WalkState::initial(&graph, graph.origin_vertex(), &ru)?;
    let mut sig = Vec::with_capacity(t_probe);
    for _ in 0..t_probe {
        state = step(&graph, &coins, &state)?;
        let m = moments2d(&position_distribution(&graph, &state)?)?;
        sig.push(m.second);
    }
    Ok(sig)
}

/// One equivalence class of coins with identical probe signatures.
#[derive(Debug, Clone, Serialize)]
pub struct CoinClass {
    pub id: usize,
    /// Lowest-index member of the class in enumeration order.
    pub representative_index: usize,
    #[serde(skip)]
    pub representative: CoinOperator,
    /// Indices into the enumerated coin list.
    pub members: Vec<usize>,
    /// Shared second-moment trajectory.
    pub signature: Vec<f64>,
}

const SIGNATURE_TOL: f64 = 1e-9;

/// Group coins by identical second-moment trajectories.  The observed
/// inter-class gaps are O(0.1); grouping demands agreement within 1e−9 per
/// step and verifies the gap structure before returning.
pub fn classify_coins(coins: &[CoinOperator], t_probe: usize) -> Result<Vec<CoinClass>> {
    if t_probe < 10 {
        return Err(QwError::Domain(format!(
            "probe length {t_probe} is too short to separate classes; use >= 10"
        )));
    }
    let signatures: Vec<Vec<f64>> = coins
        .par_iter()
        .map(|c| class_signature(c, t_probe))
        .collect::<Result<Vec<_>>>()?;

    let sig_close = |a: &[f64], b: &[f64]| -> bool {
        a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() < SIGNATURE_TOL)
    };

    let mut classes: Vec<CoinClass> = Vec::new();
    for (idx, sig) in signatures.iter().enumerate() {
        match classes.iter_mut().find(|c| sig_close(&c.signature, sig)) {
            Some(class) => class.members.push(idx),
            None => classes.push(CoinClass {
                id: 0,
                representative_index: idx,
                representative: coins[idx].clone(),
                members: vec![idx],
                signature: sig.clone(),
            }),
        }
    }

    // classes must be separated by far more than the matching tolerance
    let mut min_gap = f64::MAX;
    for i in 0..classes.len() {
        for j in (i + 1)..classes.len() {
            let gap = classes[i]
                .signature
                .iter()
                .zip(classes[j].signature.iter())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            min_gap = min_gap.min(gap);
        }
    }
    if classes.len() > 1 && min_gap < 1e-3 {
        return Err(QwError::Domain(format!(
            "classification is ill-conditioned: inter-class gap {min_gap:.3e}"
        )));
    }

    classes.sort_by_key(|c| c.representative_index);
    for (i, c) in classes.iter_mut().enumerate() {
        c.id = i;
    }
    Ok(classes)
}

/// Find the class whose signature matches `coin`'s probe trajectory.
pub fn class_of(coin: &CoinOperator, classes: &[CoinClass], t_probe: usize) -> Result<Option<usize>> {
    let sig = class_signature(coin, t_probe)?;
    Ok(classes
        .iter()
        .find(|c| {
            c.signature
                .iter()
                .zip(sig.iter())
                .all(|(a, b)| (a - b).abs() < SIGNATURE_TOL)
        })
        .map(|c| c.id))
}

/// Extremal spreading of a coin over a grid of initial coin states.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalReport {
    pub t: u64,
    pub min_second: f64,
    pub max_second: f64,
    pub argmin: Vec<C64>,
    pub argmax: Vec<C64>,
    /// |⟨(x,y)⟩| of the minimal/maximal distributions; the extremes occur
    /// at symmetric (zero-first-moment) states.
    pub argmin_first_moment: f64,
    pub argmax_first_moment: f64,
}

/// Evolve each initial state for t steps on an open window and report the
/// extremal second moments about the origin.
pub fn extremal_spreading(
    coin: &CoinOperator,
    initial_grid: &[Vec<C64>],
    t: u64,
) -> Result<ExtremalReport> {
    if initial_grid.is_empty() {
        return Err(QwError::Domain("initial grid must be non-empty".into()));
    }
    let window = 2 * t as usize + 3;
    let graph = WalkGraph::lattice2d(window, window, BoundaryMode::Open)?;
    let coins = CoinSet::uniform(coin.clone());

    let results: Vec<(f64, f64)> = initial_grid
        .par_iter()
        .map(|c0| -> Result<(f64, f64)> {
            let s0 = WalkState::initial(
                &graph,
                graph.origin_vertex(),
                &InitialCoinState::Explicit(c0.clone()),
            )?;
            let st = evolve(&graph, &coins, &s0, t)?;
            let m = moments2d(&position_distribution(&graph, &st)?)?;
            Ok((m.second, (m.mean_x * m.mean_x + m.mean_y * m.mean_y).sqrt()))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut min_i = 0;
    let mut max_i = 0;
    for (i, r) in results.iter().enumerate() {
        if r.0 < results[min_i].0 {
            min_i = i;
        }
        if r.0 > results[max_i].0 {
            max_i = i;
        }
    }
    Ok(ExtremalReport {
        t,
        min_second: results[min_i].0,
        max_second: results[max_i].0,
        argmin: initial_grid[min_i].clone(),
        argmax: initial_grid[max_i].clone(),
        argmin_first_moment: results[min_i].1,
        argmax_first_moment: results[max_i].1,
    })
}

/// Default initial-state grid: the 4 direction states, all products of the
/// six standard single-axis states, the three special symmetric states, and
/// `samples` seeded quasi-random unit 4-vectors.
pub fn default_state_grid(samples: usize, seed: u64) -> Vec<Vec<C64>> {
    let mut grid: Vec<Vec<C64>> = Vec::new();
    for i in 0..4 {
        let mut v = vec![C64::new(0.0, 0.0); 4];
        v[i] = C64::new(1.0, 0.0);
        grid.push(v);
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let axis_states: [[C64; 2]; 6] = [
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        [C64::new(h, 0.0), C64::new(h, 0.0)],
        [C64::new(h, 0.0), C64::new(-h, 0.0)],
        [C64::new(h, 0.0), C64::new(0.0, h)],
        [C64::new(h, 0.0), C64::new(0.0, -h)],
    ];
    for a in &axis_states {
        for b in &axis_states {
            grid.push(vec![a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]);
        }
    }
    for special in [
        InitialCoinState::sym_hadamard4(),
        InitialCoinState::sym_grover4(),
        InitialCoinState::sym_dft4(),
    ] {
        grid.push(special.realize(4).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        grid.push(random_unit4(&mut rng));
    }
    grid
}

fn random_unit4(rng: &mut ChaCha8Rng) -> Vec<C64> {
    // Gaussian components via Box-Muller, then normalize.
    let mut v = Vec::with_capacity(4);
    for _ in 0..4 {
        let u1: f64 = rng.random::<f64>().max(1e-12);
        let u2: f64 = rng.random();
        let r = (-2.0 * u1.ln()).sqrt();
        v.push(C64::new(
            r * (2.0 * std::f64::consts::PI * u2).cos(),
            r * (2.0 * std::f64::consts::PI * u2).sin(),
        ));
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_has_640_members() {
        let coins = enumerate_unbiased_coins4();
        assert_eq!(coins.len(), 640);
        for c in &coins {
            assert!(c.is_unbiased());
            assert!(c.unitarity_deviation() < 1e-12);
            assert_eq!(c.entry(0, 0), C64::new(0.5, 0.0));
            for r in 0..4 {
                for col in 0..4 {
                    assert_eq!(c.entry(r, col), c.entry(col, r));
                }
            }
        }
    }

    #[test]
    fn enumeration_contains_known_coins() {
        let coins = enumerate_unbiased_coins4();
        let contains = |m: &CoinOperator| {
            coins
                .iter()
                .any(|c| (0..16).all(|i| (c.entries()[i] - m.entries()[i]).norm() < 1e-12))
        };

        let h4 = CoinOperator::hadamard().kron(&CoinOperator::hadamard(), "hh");
        assert!(contains(&h4));
        assert!(contains(&CoinOperator::dft(4).unwrap()));

        // Grover-4 itself carries −1/2 on the diagonal and is excluded...
        let g4 = CoinOperator::grover(4).unwrap();
        assert!(!contains(&g4));
        // ...but its derangement row permutations put +1/2 on the whole
        // diagonal and are present.
        for perm in [[1usize, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]] {
            let mut permuted = Vec::with_capacity(16);
            for r in perm {
                for c in 0..4 {
                    permuted.push(g4.entry(r, c));
                }
            }
            let g4p = CoinOperator::from_matrix("grover4-deranged", 4, permuted).unwrap();
            assert!(contains(&g4p), "permutation {perm:?} missing");
        }
    }

    #[test]
    fn default_grid_is_normalized_and_deterministic() {
        let a = default_state_grid(16, 7);
        let b = default_state_grid(16, 7);
        assert_eq!(a.len(), 4 + 36 + 3 + 16);
        for (x, y) in a.iter().zip(b.iter()) {
            for (p, q) in x.iter().zip(y.iter()) {
                assert_eq!(p, q);
            }
        }
        for v in &a {
            let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }
}
