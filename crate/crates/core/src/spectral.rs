//! Fourier-space solution of cycle walks, eigenvalue degeneracy,
//! limiting distributions, and exact-periodicity analysis.
//!
//! For the general 2-D coin the k-th Fourier mode of the walk operator on
//! an N-cycle is the 2×2 unitary
//!
//! ```text
//!   C_k = ( √ρ·e^{ik'}            √(1−ρ)·e^{i(k'+θ)}       )      k' = 2πk/N
//!         ( √(1−ρ)·e^{i(−k'+φ)}   −√ρ·e^{i(−k'+θ+φ)}       )
//! ```
//!
//! with eigenvalues λ_k± = ±e^{iδ}·e^{±iω_k}, where δ = (θ+φ)/2 and
//! sin ω_k = √ρ·sin(k' − δ), ω_k taken in the principal range [−π/2, π/2]
//! for the + branch.  Degenerate eigenvalues occur for mode pairs with
//! k + j ≡ N(δ + π/2)/π (mod N), and only those pairs contribute the
//! non-uniform part of the limiting time-averaged distribution.
//!
//! A walk is exactly periodic with period Ω iff every λ_k± is an Ω-th
//! root of unity, which reduces to finding an integer m (fixing
//! δ = mπ/Ω − π/2) and per-k integers j of the same parity as m with
//! cos(πj/Ω) = √ρ·cos(2πk/N − πm/Ω).

use serde::Serialize;
use std::f64::consts::PI;

use crate::coin::{CoinSpec, InitialCoinState};
use crate::dist::{Distribution, Labels};
use crate::error::{QwError, Result};
use crate::graph::{GraphKind, WalkGraph};
use crate::state::{step, CoinSet, WalkState};
use crate::C64;

/// Eigenvalues closer than this are treated as degenerate.
const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

/// Eigen-data of one Fourier mode.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralMode {
    pub k: usize,
    /// Principal solution of sin ω = √ρ·sin(2πk/N − δ).
    pub omega: f64,
    pub lambda_plus: C64,
    pub lambda_minus: C64,
    pub xi_plus: [C64; 2],
    pub xi_minus: [C64; 2],
    /// Normalization factors of the unnormalized eigenvector forms.
    pub norm_plus: f64,
    pub norm_minus: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralDecomposition {
    pub n: usize,
    pub coin: CoinSpec,
    pub rho: f64,
    pub delta: f64,
    pub modes: Vec<SpectralMode>,
}

impl SpectralDecomposition {
    /// Rebuild C_k from its eigen-pairs (λ₊ ξ₊ξ₊† + λ₋ ξ₋ξ₋†).
    pub fn reconstruct_mode(&self, k: usize) -> [[C64; 2]; 2] {
        let m = &self.modes[k];
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = m.lambda_plus * m.xi_plus[r] * m.xi_plus[c].conj()
                    + m.lambda_minus * m.xi_minus[r] * m.xi_minus[c].conj();
            }
        }
        out
    }

    /// The k-th coin transition matrix in Fourier space.
    pub fn mode_matrix(&self, k: usize) -> [[C64; 2]; 2] {
        let (rho, theta, phi) = self
            .coin
            .as_general2()
            .expect("decomposition built from a 2-D coin");
        mode_matrix(self.n, k, rho, theta, phi)
    }
}

fn mode_matrix(n: usize, k: usize, rho: f64, theta: f64, phi: f64) -> [[C64; 2]; 2] {
    let kp = 2.0 * PI * k as f64 / n as f64;
    let sr = rho.sqrt();
    let sq = (1.0 - rho).sqrt();
    [
        [
            sr * C64::from_polar(1.0, kp),
            sq * C64::from_polar(1.0, kp + theta),
        ],
        [
            sq * C64::from_polar(1.0, -kp + phi),
            -sr * C64::from_polar(1.0, -kp + theta + phi),
        ],
    ]
}

fn require_general2(coin: &CoinSpec) -> Result<(f64, f64, f64)> {
    coin.as_general2().ok_or_else(|| {
        QwError::Unsupported(format!(
            "spectral analysis needs a 2-dimensional coin, got {coin:?}"
        ))
    })
}

/// Diagonalize all N Fourier modes of the cycle walk.
pub fn cycle_eigensystem(n: usize, coin: &CoinSpec) -> Result<SpectralDecomposition> {
    if n < 2 {
        return Err(QwError::Domain(format!("cycle needs N >= 2, got {n}")));
    }
    let (rho, theta, phi) = require_general2(coin)?;
    let delta = 0.5 * (theta + phi);
    let sr = rho.sqrt();
    let sq = (1.0 - rho).sqrt();

    let mut modes = Vec::with_capacity(n);
    for k in 0..n {
        let kp = 2.0 * PI * k as f64 / n as f64;
        let omega = (sr * (kp - delta).sin()).clamp(-1.0, 1.0).asin();
        let lambda_plus = C64::from_polar(1.0, delta + omega);
        let lambda_minus = -C64::from_polar(1.0, delta - omega);

        let (xi_plus, xi_minus, norm_plus, norm_minus) = if 1.0 - rho < 1e-14 {
            // Diagonal coin: the basis vectors are the eigenvectors; match
            // them against the analytic eigenvalue branches.
            let a = sr * C64::from_polar(1.0, kp);
            let e0 = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
            let e1 = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
            if (lambda_plus - a).norm() <= (lambda_minus - a).norm() {
                (e0, e1, 1.0, 1.0)
            } else {
                (e1, e0, 1.0, 1.0)
            }
        } else {
            let top = C64::from_polar(1.0, kp);
            let make = |lambda: C64| -> ([C64; 2], f64) {
                let bottom =
                    C64::from_polar(1.0, -theta) * (lambda - sr * C64::from_polar(1.0, kp)) / sq;
                let norm = (top.norm_sqr() + bottom.norm_sqr()).sqrt();
                ([top / norm, bottom / norm], norm)
            };
            let (xp, np) = make(lambda_plus);
            let (xm, nm) = make(lambda_minus);
            (xp, xm, np, nm)
        };

        modes.push(SpectralMode {
            k,
            omega,
            lambda_plus,
            lambda_minus,
            xi_plus,
            xi_minus,
            norm_plus,
            norm_minus,
        });
    }
    Ok(SpectralDecomposition {
        n,
        coin: coin.clone(),
        rho,
        delta,
        modes,
    })
}

/// Evolve an origin-started cycle (or line-window) walk analytically in
/// Fourier space.  Cross-checks the direct simulation.
pub fn evolve_fourier(
    graph: &WalkGraph,
    coin: &CoinSpec,
    initial: &InitialCoinState,
    t: u64,
) -> Result<WalkState> {
    let n = match graph.kind() {
        GraphKind::Cycle { n } => *n,
        GraphKind::Line { window } => *window,
        other => {
            return Err(QwError::Unsupported(format!(
                "Fourier evolution covers degree-2 rings, not {other:?}"
            )))
        }
    };
    let dec = cycle_eigensystem(n, coin)?;
    let c0 = initial.realize(2)?;
    let v0 = graph.origin_vertex();

    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let tf = t as f64;
    // per-mode evolved Fourier components
    let mut modes_t = Vec::with_capacity(n);
    for m in &dec.modes {
        let kp = 2.0 * PI * m.k as f64 / n as f64;
        let psi0 = [
            c0[0] * C64::from_polar(inv_sqrt_n, kp * v0 as f64),
            c0[1] * C64::from_polar(inv_sqrt_n, kp * v0 as f64),
        ];
        let proj_plus = m.xi_plus[0].conj() * psi0[0] + m.xi_plus[1].conj() * psi0[1];
        let proj_minus = m.xi_minus[0].conj() * psi0[0] + m.xi_minus[1].conj() * psi0[1];
        let lp = C64::from_polar(1.0, m.lambda_plus.arg() * tf);
        let lm = C64::from_polar(1.0, m.lambda_minus.arg() * tf);
        modes_t.push([
            lp * proj_plus * m.xi_plus[0] + lm * proj_minus * m.xi_minus[0],
            lp * proj_plus * m.xi_plus[1] + lm * proj_minus * m.xi_minus[1],
        ]);
    }

    // inverse transform
    let mut amps = vec![C64::new(0.0, 0.0); graph.amp_len()];
    for x in 0..n {
        let mut acc = [C64::new(0.0, 0.0); 2];
        for (k, mt) in modes_t.iter().enumerate() {
            let phase = C64::from_polar(inv_sqrt_n, -2.0 * PI * (k * x % n) as f64 / n as f64);
            acc[0] += phase * mt[0];
            acc[1] += phase * mt[1];
        }
        amps[graph.slot(x, 0)] = acc[0];
        amps[graph.slot(x, 1)] = acc[1];
    }
    WalkState::from_amplitudes(graph, amps, t)
}

#[derive(Debug, Clone, Serialize)]
pub struct DegeneratePair {
    pub k: usize,
    pub branch_k: Branch,
    pub j: usize,
    pub branch_j: Branch,
}

/// Non-trivially degenerate eigenvalue pairs of the cycle walk operator.
/// An empty list means the limiting time-averaged distribution is uniform.
#[derive(Debug, Clone, Serialize)]
pub struct DegeneracySet {
    pub n: usize,
    pub delta: f64,
    /// Φ = N(δ + π/2)/π; degenerate pairs satisfy k + j ≡ Φ (mod N)
    /// whenever Φ is an integer.
    pub phi: f64,
    pub pairs: Vec<DegeneratePair>,
}

impl DegeneracySet {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Group the 2N eigenvalues into equality classes within `DEGENERACY_TOL`.
/// Returns groups of (mode index, branch).
fn eigenvalue_groups(dec: &SpectralDecomposition) -> Vec<Vec<(usize, Branch)>> {
    let mut levels: Vec<(C64, usize, Branch)> = Vec::with_capacity(2 * dec.n);
    for m in &dec.modes {
        levels.push((m.lambda_plus, m.k, Branch::Plus));
        levels.push((m.lambda_minus, m.k, Branch::Minus));
    }
    let mut assigned = vec![false; levels.len()];
    let mut groups = Vec::new();
    for i in 0..levels.len() {
        if assigned[i] {
            continue;
        }
        assigned[i] = true;
        let mut group = vec![(levels[i].1, levels[i].2)];
        for j in (i + 1)..levels.len() {
            if !assigned[j] && (levels[i].0 - levels[j].0).norm() < DEGENERACY_TOL {
                assigned[j] = true;
                group.push((levels[j].1, levels[j].2));
            }
        }
        groups.push(group);
    }
    groups
}

/// List all non-trivial eigenvalue degeneracies of the N-cycle walk.
pub fn degeneracy_condition(n: usize, coin: &CoinSpec) -> Result<DegeneracySet> {
    let dec = cycle_eigensystem(n, coin)?;
    let mut pairs = Vec::new();
    for group in eigenvalue_groups(&dec) {
        for a in 0..group.len() {
            for b in (a + 1)..group.len() {
                pairs.push(DegeneratePair {
                    k: group[a].0,
                    branch_k: group[a].1,
                    j: group[b].0,
                    branch_j: group[b].1,
                });
            }
        }
    }
    pairs.sort_by_key(|p| (p.k, p.j, p.branch_k != Branch::Plus));
    Ok(DegeneracySet {
        n,
        delta: dec.delta,
        phi: n as f64 * (dec.delta + PI / 2.0) / PI,
        pairs,
    })
}

/// Analytic T → ∞ limit of the time-averaged distribution for an
/// origin-started cycle walk: the uniform 1/N part plus coherent
/// corrections from each degenerate eigenspace.
pub fn limiting_distribution(
    n: usize,
    coin: &CoinSpec,
    initial: &InitialCoinState,
) -> Result<Distribution> {
    let dec = cycle_eigensystem(n, coin)?;
    let c0 = initial.realize(2)?;
    let groups = eigenvalue_groups(&dec);

    let xi = |k: usize, b: Branch| -> &[C64; 2] {
        match b {
            Branch::Plus => &dec.modes[k].xi_plus,
            Branch::Minus => &dec.modes[k].xi_minus,
        }
    };

    // ⟨ξ_k^b | c0⟩ for every eigen-level
    let mut probs = vec![0.0f64; n];
    let inv_n = 1.0 / n as f64;
    for group in &groups {
        let overlaps: Vec<C64> = group
            .iter()
            .map(|&(k, b)| {
                let x = xi(k, b);
                x[0].conj() * c0[0] + x[1].conj() * c0[1]
            })
            .collect();
        for (x, p) in probs.iter_mut().enumerate() {
            // w_g(x, a) = (1/N)·Σ_{(k,b) ∈ g} e^{−ik'x}·ξ_k^b[a]·⟨ξ_k^b|c0⟩
            // (mode k lives on the conjugate plane wave, matching the
            // transform convention used by evolve_fourier)
            let mut w = [C64::new(0.0, 0.0); 2];
            for (&(k, b), ov) in group.iter().zip(overlaps.iter()) {
                let phase = C64::from_polar(inv_n, -2.0 * PI * (k * x % n) as f64 / n as f64);
                let v = xi(k, b);
                w[0] += phase * v[0] * ov;
                w[1] += phase * v[1] * ov;
            }
            *p += w[0].norm_sqr() + w[1].norm_sqr();
        }
    }
    Distribution::new(probs, Labels::OneD((0..n as i64).collect()), 0)
}

/// Smallest t ≤ omega_max with |⟨ψ₀|ψ_t⟩| > 1 − 1e−9 (coin register
/// included), or None.
pub fn find_period_numeric(
    graph: &WalkGraph,
    coins: &CoinSet,
    state0: &WalkState,
    omega_max: u64,
) -> Result<Option<u64>> {
    if omega_max < 1 {
        return Err(QwError::Domain("omega_max must be >= 1".into()));
    }
    let mut cur = state0.clone();
    for t in 1..=omega_max {
        cur = step(graph, coins, &cur)?;
        let fid: C64 = state0
            .amplitudes()
            .iter()
            .zip(cur.amplitudes().iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        if fid.norm() > 1.0 - 1e-9 {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// A coin (ρ, δ) certified to make the N-cycle walk exactly periodic with
/// period Ω: every eigenvalue λ_k± is an Ω-th root of unity.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodCertificate {
    pub n: usize,
    pub omega: u64,
    pub rho: f64,
    /// δ = mπ/Ω − π/2.
    pub delta: f64,
    pub m: i64,
    /// Per-k integers j with cos(πj/Ω) = √ρ·cos(2πk/N − πm/Ω), parity of m.
    pub j_values: Vec<i64>,
}

impl PeriodCertificate {
    /// A coin realizing the certificate (θ = φ = δ).
    pub fn coin_spec(&self) -> CoinSpec {
        CoinSpec::General2 {
            rho: self.rho,
            theta: self.delta,
            phi: self.delta,
        }
    }
}

const TRIVIAL_RHO_MARGIN: f64 = 1e-9;
const J_INTEGRALITY_TOL: f64 = 1e-10;

/// Try to certify (Ω, m, ρ): every k must yield an integer j of m's parity.
fn verify_period_candidate(
    n: usize,
    omega: u64,
    m: i64,
    rho: f64,
    delta: f64,
) -> Option<Vec<i64>> {
    let sr = rho.sqrt();
    let mut js = Vec::with_capacity(n);
    for k in 0..n {
        let kp = 2.0 * PI * k as f64 / n as f64;
        let s = (sr * (kp - delta).sin()).clamp(-1.0, 1.0);
        let omega_k = s.asin();
        let jf = (omega_k - PI / 2.0) * omega as f64 / PI;
        let j = jf.round();
        if (jf - j).abs() > J_INTEGRALITY_TOL {
            return None;
        }
        let j = j as i64;
        if (j - m).rem_euclid(2) != 0 {
            return None;
        }
        js.push(j);
    }
    Some(js)
}

/// Scan all periods Ω ≤ omega_max and phase integers m ∈ [0, 2Ω) for coin
/// biases ρ ∈ (0, 1) that make the N-cycle walk exactly periodic.
/// Candidate ρ are solved from the first constraining Fourier mode and
/// verified against all modes; trivial ρ = 0, 1 solutions are excluded.
/// Certificates at multiples of a base period are reported as found; the
/// scan makes no completeness claim beyond the searched range.
pub fn solve_period_condition(n: usize, omega_max: u64) -> Result<Vec<PeriodCertificate>> {
    if n < 2 {
        return Err(QwError::Domain(format!("cycle needs N >= 2, got {n}")));
    }
    if omega_max < 2 {
        return Err(QwError::Domain("omega_max must be >= 2".into()));
    }
    let mut out = Vec::new();
    for omega in 2..=omega_max {
        for m in 0..(2 * omega as i64) {
            let delta = m as f64 * PI / omega as f64 - PI / 2.0;

            // first mode whose equation actually constrains ρ
            let pivot = (0..n).find(|&k| {
                let kp = 2.0 * PI * k as f64 / n as f64;
                (kp - delta).sin().abs() > 1e-9
            });

            let mut candidates: Vec<f64> = Vec::new();
            match pivot {
                Some(k) => {
                    let kp = 2.0 * PI * k as f64 / n as f64;
                    let s = (kp - delta).sin();
                    let mut j = -(omega as i64);
                    // j of m's parity in [−Ω, 0]
                    if (j - m).rem_euclid(2) != 0 {
                        j += 1;
                    }
                    while j <= 0 {
                        let sr = (PI * j as f64 / omega as f64).cos() / s;
                        if sr > 0.0 {
                            let rho = sr * sr;
                            if rho > TRIVIAL_RHO_MARGIN && rho < 1.0 - TRIVIAL_RHO_MARGIN {
                                candidates.push(rho);
                            }
                        }
                        j += 2;
                    }
                    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    candidates.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
                }
                // Every mode is unconstraining (N = 2 with δ ≡ 0 mod π):
                // any bias works; certify the fair coin as representative.
                None => candidates.push(0.5),
            }

            for rho in candidates {
                if let Some(j_values) = verify_period_candidate(n, omega, m, rho, delta) {
                    out.push(PeriodCertificate {
                        n,
                        omega,
                        rho,
                        delta,
                        m,
                        j_values,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// The minimal-Ω certificate per distinct coin (ρ, δ), the Table-style view.
pub fn minimal_periods(certs: &[PeriodCertificate]) -> Vec<PeriodCertificate> {
    let mut sorted: Vec<&PeriodCertificate> = certs.iter().collect();
    sorted.sort_by(|a, b| a.omega.cmp(&b.omega));
    let mut kept: Vec<PeriodCertificate> = Vec::new();
    for c in sorted {
        let dup = kept.iter().any(|k| {
            (k.rho - c.rho).abs() < 1e-9
                && ((k.delta - c.delta).rem_euclid(2.0 * PI)).min(
                    (2.0 * PI - (k.delta - c.delta).rem_euclid(2.0 * PI)).abs(),
                ) < 1e-9
                && c.omega % k.omega == 0
        });
        if !dup {
            kept.push(c.clone());
        }
    }
    kept
}
