//! Probability distributions over vertices or columns, and their statistics.

use serde::Serialize;

use crate::error::{QwError, Result};
use crate::graph::{GraphKind, WalkGraph};
use crate::state::{evolve, CoinSet, WalkState};

/// Coordinate labels attached to a distribution's entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Labels {
    /// Signed positions relative to the origin vertex.
    OneD(Vec<i64>),
    /// Lattice coordinates (centered on open windows).
    TwoD(Vec<(i64, i64)>),
    /// Glued-trees column indices.
    Columns(Vec<usize>),
    /// Bare vertex indices.
    Vertices,
}

/// Nonnegative vector summing to 1 over vertices (or columns).
#[derive(Debug, Clone, Serialize)]
pub struct Distribution {
    probs: Vec<f64>,
    labels: Labels,
    /// Index of the origin entry, the reference point for moments.
    origin: usize,
}

impl Distribution {
    pub fn new(probs: Vec<f64>, labels: Labels, origin: usize) -> Result<Self> {
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(QwError::Domain(format!(
                "distribution must sum to 1, got {sum}"
            )));
        }
        if probs.iter().any(|&p| p < -1e-12) {
            return Err(QwError::Domain("negative probability entry".into()));
        }
        Ok(Self {
            probs,
            labels,
            origin,
        })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n],
            labels: Labels::Vertices,
            origin: 0,
        }
    }

    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Self {
            probs,
            labels: Labels::Vertices,
            origin: at,
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn max_entry(&self) -> (usize, f64) {
        let mut best = (0, f64::MIN);
        for (i, &p) in self.probs.iter().enumerate() {
            if p > best.1 {
                best = (i, p);
            }
        }
        best
    }

    pub fn min_entry(&self) -> (usize, f64) {
        let mut best = (0, f64::MAX);
        for (i, &p) in self.probs.iter().enumerate() {
            if p < best.1 {
                best = (i, p);
            }
        }
        best
    }
}

/// Marginalize the coin register: P(v) = Σ_p |ψ(p, v)|².
pub fn position_distribution(graph: &WalkGraph, state: &WalkState) -> Result<Distribution> {
    state.check_graph(graph)?;
    let probs: Vec<f64> = (0..graph.vertex_count())
        .map(|v| state.vertex_probability(graph, v))
        .collect();
    let labels = match graph.kind() {
        GraphKind::Line { .. } | GraphKind::Cycle { .. } => Labels::OneD(
            (0..graph.vertex_count())
                .map(|v| graph.label_1d(v).unwrap())
                .collect(),
        ),
        GraphKind::Lattice2d { .. } => Labels::TwoD(
            (0..graph.vertex_count())
                .map(|v| graph.label_2d(v).unwrap())
                .collect(),
        ),
        _ => Labels::Vertices,
    };
    Distribution::new(probs, labels, graph.origin_vertex())
}

/// Sum vertex probabilities per glued-trees column.
pub fn column_distribution(graph: &WalkGraph, state: &WalkState) -> Result<Distribution> {
    state.check_graph(graph)?;
    let ncols = graph.column_count().ok_or_else(|| {
        QwError::Unsupported("column distribution requires a glued-trees graph".into())
    })?;
    let mut probs = vec![0.0; ncols];
    for v in 0..graph.vertex_count() {
        probs[graph.column(v).unwrap()] += state.vertex_probability(graph, v);
    }
    Distribution::new(probs, Labels::Columns((0..ncols).collect()), 0)
}

/// Cesàro average (1/T)·Σ_{t<T} P(·, t) of the instantaneous position
/// distributions, starting from `state0` at t = 0.
pub fn time_averaged_distribution(
    graph: &WalkGraph,
    coins: &CoinSet,
    state0: &WalkState,
    t_total: u64,
) -> Result<Distribution> {
    if t_total < 1 {
        return Err(QwError::Domain("time average needs T >= 1".into()));
    }
    state0.check_graph(graph)?;
    let mut acc = vec![0.0; graph.vertex_count()];
    let mut cur = state0.clone();
    let inv = 1.0 / t_total as f64;
    for t in 0..t_total {
        for (v, a) in acc.iter_mut().enumerate() {
            *a += inv * cur.vertex_probability(graph, v);
        }
        if t + 1 < t_total {
            cur = evolve(graph, coins, &cur, 1)?;
        }
    }
    let labels = match graph.kind() {
        GraphKind::Line { .. } | GraphKind::Cycle { .. } => Labels::OneD(
            (0..graph.vertex_count())
                .map(|v| graph.label_1d(v).unwrap())
                .collect(),
        ),
        _ => Labels::Vertices,
    };
    Distribution::new(acc, labels, graph.origin_vertex())
}

/// (1/2)·Σ|p − q| over matching supports.
pub fn total_variation(a: &Distribution, b: &Distribution) -> Result<f64> {
    if a.len() != b.len() {
        return Err(QwError::Shape(format!(
            "distributions have different supports: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(0.5
        * a.probs
            .iter()
            .zip(b.probs.iter())
            .map(|(p, q)| (p - q).abs())
            .sum::<f64>())
}

/// Moments of a 1-D distribution, taken about the origin vertex (not the
/// mean), as the skewness convention requires.
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub mean: f64,
    pub second: f64,
    pub third: f64,
    /// ⟨x³⟩ / ⟨x²⟩^{3/2}
    pub skewness: f64,
    /// √(⟨x²⟩ − ⟨x⟩²)
    pub std_dev: f64,
}

pub fn moments(dist: &Distribution) -> Result<MomentReport> {
    let xs = match dist.labels() {
        Labels::OneD(xs) => xs,
        _ => {
            return Err(QwError::Unsupported(
                "moments need 1-D position labels".into(),
            ))
        }
    };
    let origin = xs[dist.origin()] as f64;
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    for (&x, &p) in xs.iter().zip(dist.probs.iter()) {
        let d = x as f64 - origin;
        m1 += p * d;
        m2 += p * d * d;
        m3 += p * d * d * d;
    }
    let skewness = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };
    Ok(MomentReport {
        mean: m1,
        second: m2,
        third: m3,
        skewness,
        std_dev: (m2 - m1 * m1).max(0.0).sqrt(),
    })
}

/// Moments of a 2-D distribution about the origin vertex.
#[derive(Debug, Clone, Serialize)]
pub struct Moment2dReport {
    pub mean_x: f64,
    pub mean_y: f64,
    /// ⟨x² + y²⟩
    pub second: f64,
    /// √(⟨x²+y²⟩ − |⟨(x,y)⟩|²)
    pub std_dev: f64,
}

pub fn moments2d(dist: &Distribution) -> Result<Moment2dReport> {
    let xy = match dist.labels() {
        Labels::TwoD(xy) => xy,
        _ => {
            return Err(QwError::Unsupported(
                "2-D moments need lattice labels".into(),
            ))
        }
    };
    let (ox, oy) = xy[dist.origin()];
    let mut mx = 0.0;
    let mut my = 0.0;
    let mut m2 = 0.0;
    for (&(x, y), &p) in xy.iter().zip(dist.probs.iter()) {
        let dx = (x - ox) as f64;
        let dy = (y - oy) as f64;
        mx += p * dx;
        my += p * dy;
        m2 += p * (dx * dx + dy * dy);
    }
    Ok(Moment2dReport {
        mean_x: mx,
        mean_y: my,
        second: m2,
        std_dev: (m2 - mx * mx - my * my).max(0.0).sqrt(),
    })
}

/// Classical random-walk baseline: evolve the probability simplex with the
/// uniform-over-ports transition matrix of the same graph (exact, no
/// Monte Carlo noise).
pub fn classical_position_distribution(
    graph: &WalkGraph,
    start: usize,
    t: u64,
) -> Result<Distribution> {
    if start >= graph.vertex_count() {
        return Err(QwError::Domain(format!("vertex {start} does not exist")));
    }
    let n = graph.vertex_count();
    let mut cur = vec![0.0f64; n];
    cur[start] = 1.0;
    let mut next = vec![0.0f64; n];
    for _ in 0..t {
        next.iter_mut().for_each(|x| *x = 0.0);
        for v in 0..n {
            if cur[v] == 0.0 {
                continue;
            }
            let share = cur[v] / graph.degree(v) as f64;
            for &(u, _) in graph.ports(v) {
                next[u] += share;
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    let labels = match graph.kind() {
        GraphKind::Line { .. } | GraphKind::Cycle { .. } => {
            Labels::OneD((0..n).map(|v| graph.label_1d(v).unwrap()).collect())
        }
        GraphKind::Lattice2d { .. } => {
            Labels::TwoD((0..n).map(|v| graph.label_2d(v).unwrap()).collect())
        }
        _ => Labels::Vertices,
    };
    Distribution::new(cur, labels, start)
}

/// Classical baseline aggregated per glued-trees column.
pub fn classical_column_distribution(
    graph: &WalkGraph,
    start: usize,
    t: u64,
) -> Result<Distribution> {
    let flat = classical_position_distribution(graph, start, t)?;
    let ncols = graph.column_count().ok_or_else(|| {
        QwError::Unsupported("column distribution requires a glued-trees graph".into())
    })?;
    let mut probs = vec![0.0; ncols];
    for (v, &p) in flat.probs().iter().enumerate() {
        probs[graph.column(v).unwrap()] += p;
    }
    Distribution::new(probs, Labels::Columns((0..ncols).collect()), 0)
}
