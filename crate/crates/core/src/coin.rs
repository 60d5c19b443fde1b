//! Coin operators and initial coin states.
//!
//! The general 2-D coin, with bias ρ in the unit interval and phases θ, φ, is
//!
//! ```text
//!     ( √ρ            √(1−ρ)·e^{iθ}     )
//!     ( √(1−ρ)·e^{iφ} −√ρ·e^{i(θ+φ)}    )
//! ```
//!
//! with the global phase fixed so the top-left entry is real and
//! nonnegative.  δ = (θ+φ)/2 is the phase combination that controls
//! eigenvalue degeneracy on cycles.  Coin basis ordering on degree-2
//! graphs is (R, L): the first component is the right-moving amplitude.
//! On degree-4 lattices the basis is (LD, LU, RD, RU), i.e. the tensor
//! order (L, R) ⊗ (D, U) used by the 4-D initial states below.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{QwError, Result};
use crate::C64;

const UNITARITY_TOL: f64 = 1e-12;

/// Construction recipe for a coin operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CoinSpec {
    /// General 2×2 unitary with bias `rho` and phases `theta`, `phi` (radians).
    General2 { rho: f64, theta: f64, phi: f64 },
    /// Balanced real coin; equals `General2 { rho: 1/2, theta: 0, phi: 0 }`.
    Hadamard,
    /// Grover diffusion coin: entries 2/d − δ_ij.
    Grover { degree: usize },
    /// Discrete Fourier transform coin: entry (j,k) = d^{−1/2}·e^{2πijk/d}.
    Dft { degree: usize },
    /// (1/√2)[[1, −i], [−i, 1]]: the simplest unbiased coin with δ = −π/2,
    /// which drives a non-uniform limiting distribution in the large-N limit.
    NonUniformMixing,
    /// Unitary supplied entrywise (e.g. a member of the 640-coin enumeration).
    Explicit { label: String },
}

impl CoinSpec {
    /// Coin dimension, when the family fixes it.
    pub fn degree(&self) -> Option<usize> {
        match self {
            CoinSpec::General2 { .. } | CoinSpec::Hadamard | CoinSpec::NonUniformMixing => Some(2),
            CoinSpec::Grover { degree } | CoinSpec::Dft { degree } => Some(*degree),
            CoinSpec::Explicit { .. } => None,
        }
    }

    /// (ρ, θ, φ) parameters when the coin belongs to the 2-D general family.
    pub fn as_general2(&self) -> Option<(f64, f64, f64)> {
        match self {
            CoinSpec::General2 { rho, theta, phi } => Some((*rho, *theta, *phi)),
            CoinSpec::Hadamard => Some((0.5, 0.0, 0.0)),
            CoinSpec::Dft { degree: 2 } => Some((0.5, 0.0, 0.0)),
            CoinSpec::Grover { degree: 2 } => Some((0.0, 0.0, 0.0)),
            CoinSpec::NonUniformMixing => Some((0.5, -PI / 2.0, -PI / 2.0)),
            _ => None,
        }
    }

    /// δ = (θ+φ)/2 for 2-D coins.
    pub fn delta(&self) -> Option<f64> {
        self.as_general2().map(|(_, theta, phi)| 0.5 * (theta + phi))
    }

    /// Realize the coin matrix.
    pub fn build(&self) -> Result<CoinOperator> {
        match self {
            CoinSpec::General2 { rho, theta, phi } => CoinOperator::general2(*rho, *theta, *phi),
            CoinSpec::Hadamard => Ok(CoinOperator::hadamard()),
            CoinSpec::Grover { degree } => CoinOperator::grover(*degree),
            CoinSpec::Dft { degree } => CoinOperator::dft(*degree),
            CoinSpec::NonUniformMixing => Ok(CoinOperator::non_uniform_mixing()),
            CoinSpec::Explicit { label } => Err(QwError::Unsupported(format!(
                "explicit coin `{label}` carries no matrix; construct it via CoinOperator::from_matrix"
            ))),
        }
    }
}

/// A realized d×d unitary coin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoinOperator {
    dim: usize,
    /// Row-major entries.
    entries: Vec<C64>,
    spec: CoinSpec,
}

impl CoinOperator {
    /// General 2-D coin, Eq. above. `rho` must lie in [0, 1]; the phases are
    /// unrestricted reals (the canonical parameterization takes them in [0, π],
    /// but e.g. δ = −π/2 coins need values outside that range).
    pub fn general2(rho: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) || !rho.is_finite() {
            return Err(QwError::Domain(format!(
                "coin bias rho must lie in [0, 1], got {rho}"
            )));
        }
        if !theta.is_finite() || !phi.is_finite() {
            return Err(QwError::Domain("coin phases must be finite".into()));
        }
        let sr = rho.sqrt();
        let sq = (1.0 - rho).sqrt();
        let entries = vec![
            C64::new(sr, 0.0),
            sq * C64::from_polar(1.0, theta),
            sq * C64::from_polar(1.0, phi),
            -sr * C64::from_polar(1.0, theta + phi),
        ];
        Ok(Self {
            dim: 2,
            entries,
            spec: CoinSpec::General2 { rho, theta, phi },
        })
    }

    /// The Hadamard coin (1/√2)[[1, 1], [1, −1]].
    pub fn hadamard() -> Self {
        let h = FRAC_1_SQRT_2;
        Self {
            dim: 2,
            entries: vec![
                C64::new(h, 0.0),
                C64::new(h, 0.0),
                C64::new(h, 0.0),
                C64::new(-h, 0.0),
            ],
            spec: CoinSpec::Hadamard,
        }
    }

    /// Grover diffusion coin of degree d: entries 2/d − δ_ij.
    pub fn grover(degree: usize) -> Result<Self> {
        if degree < 2 {
            return Err(QwError::Domain(format!(
                "Grover coin needs degree >= 2, got {degree}"
            )));
        }
        let off = 2.0 / degree as f64;
        let mut entries = vec![C64::new(off, 0.0); degree * degree];
        for i in 0..degree {
            entries[i * degree + i] = C64::new(off - 1.0, 0.0);
        }
        Ok(Self {
            dim: degree,
            entries,
            spec: CoinSpec::Grover { degree },
        })
    }

    /// DFT coin of degree d: entry (j,k) = d^{−1/2}·e^{2πijk/d}.
    pub fn dft(degree: usize) -> Result<Self> {
        if degree < 2 {
            return Err(QwError::Domain(format!(
                "DFT coin needs degree >= 2, got {degree}"
            )));
        }
        let norm = 1.0 / (degree as f64).sqrt();
        let mut entries = Vec::with_capacity(degree * degree);
        for j in 0..degree {
            for k in 0..degree {
                // Reduce jk mod d before the trig call so large degrees stay exact.
                let phase = 2.0 * PI * ((j * k) % degree) as f64 / degree as f64;
                entries.push(norm * C64::from_polar(1.0, phase));
            }
        }
        Ok(Self {
            dim: degree,
            entries,
            spec: CoinSpec::Dft { degree },
        })
    }

    /// (1/√2)[[1, −i], [−i, 1]], the δ = −π/2 unbiased coin.
    pub fn non_uniform_mixing() -> Self {
        let h = FRAC_1_SQRT_2;
        Self {
            dim: 2,
            entries: vec![
                C64::new(h, 0.0),
                C64::new(0.0, -h),
                C64::new(0.0, -h),
                C64::new(h, 0.0),
            ],
            spec: CoinSpec::NonUniformMixing,
        }
    }

    /// Build from explicit row-major entries, validating unitarity.
    pub fn from_matrix(label: impl Into<String>, dim: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(QwError::Shape(format!(
                "coin matrix needs {}x{} = {} entries, got {}",
                dim,
                dim,
                dim * dim,
                entries.len()
            )));
        }
        let op = Self {
            dim,
            entries,
            spec: CoinSpec::Explicit {
                label: label.into(),
            },
        };
        let dev = op.unitarity_deviation();
        if dev >= UNITARITY_TOL {
            return Err(QwError::Domain(format!(
                "matrix is not unitary: max |C†C − I| = {dev:.3e}"
            )));
        }
        Ok(op)
    }

    /// Tensor product, acting on the concatenated direction labels of `self`
    /// (slow index) and `other` (fast index).
    pub fn kron(&self, other: &Self, label: &str) -> Self {
        let d = self.dim * other.dim;
        let mut entries = vec![C64::new(0.0, 0.0); d * d];
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        let r = r1 * other.dim + r2;
                        let c = c1 * other.dim + c2;
                        entries[r * d + c] = self.entry(r1, c1) * other.entry(r2, c2);
                    }
                }
            }
        }
        Self {
            dim: d,
            entries,
            spec: CoinSpec::Explicit {
                label: label.to_string(),
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spec(&self) -> &CoinSpec {
        &self.spec
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// max |(C†C − I)_{ij}|.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..d {
                    acc += self.entry(k, i).conj() * self.entry(k, j);
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// An unbiased coin has every entry of modulus d^{−1/2}.
    pub fn is_unbiased(&self) -> bool {
        let want = 1.0 / (self.dim as f64).sqrt();
        self.entries
            .iter()
            .all(|z| (z.norm() - want).abs() < UNITARITY_TOL)
    }

    /// y ← C·x for one coin block.
    pub(crate) fn apply_block(&self, x: &[C64], y: &mut [C64]) {
        let d = self.dim;
        for (r, out) in y.iter_mut().enumerate() {
            let row = &self.entries[r * d..(r + 1) * d];
            let mut acc = C64::new(0.0, 0.0);
            for (m, xv) in row.iter().zip(x.iter()) {
                acc += m * xv;
            }
            *out = acc;
        }
    }

    /// y ← C†·x for one coin block.
    pub(crate) fn apply_block_adjoint(&self, x: &[C64], y: &mut [C64]) {
        let d = self.dim;
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (c, xv) in x.iter().enumerate() {
                acc += self.entries[c * d + r].conj() * xv;
            }
            *out = acc;
        }
    }
}

/// Initial state of the coin register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InitialCoinState {
    /// √η·|R⟩ + e^{iα}·√(1−η)·|L⟩ on degree-2 graphs.
    Bias { eta: f64, alpha: f64 },
    /// Explicit unit vector for higher coin dimensions.
    Explicit(Vec<C64>),
}

impl InitialCoinState {
    pub fn bias(eta: f64, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) || !eta.is_finite() {
            return Err(QwError::Domain(format!(
                "coin bias eta must lie in [0, 1], got {eta}"
            )));
        }
        if !alpha.is_finite() {
            return Err(QwError::Domain("coin phase alpha must be finite".into()));
        }
        Ok(Self::Bias { eta, alpha })
    }

    /// Pure right-mover |R⟩.
    pub fn right() -> Self {
        Self::Bias {
            eta: 1.0,
            alpha: 0.0,
        }
    }

    /// Pure left-mover |L⟩.
    pub fn left() -> Self {
        Self::Bias {
            eta: 0.0,
            alpha: 0.0,
        }
    }

    /// (|R⟩ + i|L⟩)/√2, the state whose Hadamard walk is exactly symmetric.
    pub fn symmetric2() -> Self {
        Self::Bias {
            eta: 0.5,
            alpha: PI / 2.0,
        }
    }

    /// Uniform real superposition over d directions.
    pub fn uniform(d: usize) -> Self {
        let a = 1.0 / (d as f64).sqrt();
        Self::Explicit(vec![C64::new(a, 0.0); d])
    }

    /// (1/2)(|LD⟩ + i|LU⟩ + i|RD⟩ − |RU⟩) = (1/2)(|L⟩+i|R⟩)⊗(|D⟩+i|U⟩):
    /// symmetric start for Hadamard-pair walks on the lattice.
    pub fn sym_hadamard4() -> Self {
        Self::Explicit(vec![
            C64::new(0.5, 0.0),
            C64::new(0.0, 0.5),
            C64::new(0.0, 0.5),
            C64::new(-0.5, 0.0),
        ])
    }

    /// (1/2)(|LD⟩ − |LU⟩ − |RD⟩ + |RU⟩): the Grover-coin state that removes
    /// the central spike and maximizes spreading.
    pub fn sym_grover4() -> Self {
        Self::Explicit(vec![
            C64::new(0.5, 0.0),
            C64::new(-0.5, 0.0),
            C64::new(-0.5, 0.0),
            C64::new(0.5, 0.0),
        ])
    }

    /// (1/2)(|LD⟩ + (1−i)/√2·|LU⟩ + |RD⟩ − (1−i)/√2·|RU⟩): the DFT-coin
    /// ring-producing state.
    pub fn sym_dft4() -> Self {
        let w = C64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2) * 0.5;
        Self::Explicit(vec![C64::new(0.5, 0.0), w, C64::new(0.5, 0.0), -w])
    }

    /// Realize as a unit vector of dimension `d`.
    pub fn realize(&self, d: usize) -> Result<Vec<C64>> {
        match self {
            InitialCoinState::Bias { eta, alpha } => {
                if d != 2 {
                    return Err(QwError::Shape(format!(
                        "(eta, alpha) coin state is 2-dimensional, vertex degree is {d}"
                    )));
                }
                Ok(vec![
                    C64::new(eta.sqrt(), 0.0),
                    C64::from_polar((1.0 - eta).sqrt(), *alpha),
                ])
            }
            InitialCoinState::Explicit(v) => {
                if v.len() != d {
                    return Err(QwError::Shape(format!(
                        "explicit coin state has dimension {}, vertex degree is {d}",
                        v.len()
                    )));
                }
                let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                if (norm2 - 1.0).abs() > 1e-12 {
                    return Err(QwError::Domain(format!(
                        "coin state must be normalized: |v|^2 = {norm2}"
                    )));
                }
                Ok(v.clone())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn hadamard_from_general2() {
        let g = CoinOperator::general2(0.5, 0.0, 0.0).unwrap();
        let h = CoinOperator::hadamard();
        for r in 0..2 {
            for c in 0..2 {
                assert!(close(g.entry(r, c), h.entry(r, c), 1e-15));
            }
        }
        // and equals the degree-2 DFT coin
        let d = CoinOperator::dft(2).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert!(close(g.entry(r, c), d.entry(r, c), 1e-15));
            }
        }
    }

    #[test]
    fn rho_one_is_diagonal() {
        let c = CoinOperator::general2(1.0, 0.0, 0.0).unwrap();
        assert!(close(c.entry(0, 0), C64::new(1.0, 0.0), 1e-15));
        assert!(close(c.entry(0, 1), C64::new(0.0, 0.0), 1e-15));
        assert!(close(c.entry(1, 0), C64::new(0.0, 0.0), 1e-15));
        assert!(close(c.entry(1, 1), C64::new(-1.0, 0.0), 1e-15));
    }

    #[test]
    fn rho_out_of_range_rejected() {
        assert!(matches!(
            CoinOperator::general2(1.2, 0.0, 0.0),
            Err(QwError::Domain(_))
        ));
        assert!(matches!(
            CoinOperator::general2(-0.1, 0.0, 0.0),
            Err(QwError::Domain(_))
        ));
    }

    #[test]
    fn general2_with_minus_half_pi_phases_is_mixing_coin() {
        // theta = phi = −π/2 gives theta + phi = −π and exactly the
        // (1/√2)[[1, −i], [−i, 1]] matrix, global phase +1.
        let g = CoinOperator::general2(0.5, -PI / 2.0, -PI / 2.0).unwrap();
        let nu = CoinOperator::non_uniform_mixing();
        for r in 0..2 {
            for c in 0..2 {
                assert!(close(g.entry(r, c), nu.entry(r, c), 1e-15));
            }
        }
        assert!((nu.spec().delta().unwrap() + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn grover_matrices() {
        let g3 = CoinOperator::grover(3).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let want = if r == c { -1.0 / 3.0 } else { 2.0 / 3.0 };
                assert!(close(g3.entry(r, c), C64::new(want, 0.0), 1e-15));
            }
        }
        let g4 = CoinOperator::grover(4).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let want = if r == c { -0.5 } else { 0.5 };
                assert!(close(g4.entry(r, c), C64::new(want, 0.0), 1e-15));
            }
        }
        // degree 2 degenerates to the swap matrix
        let g2 = CoinOperator::grover(2).unwrap();
        assert!(close(g2.entry(0, 0), C64::new(0.0, 0.0), 1e-15));
        assert!(close(g2.entry(0, 1), C64::new(1.0, 0.0), 1e-15));
        assert!(matches!(CoinOperator::grover(1), Err(QwError::Domain(_))));
    }

    #[test]
    fn dft_matrices() {
        let d3 = CoinOperator::dft(3).unwrap();
        let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
        let s = 1.0 / 3.0f64.sqrt();
        assert!(close(d3.entry(1, 1), s * w, 1e-15));
        assert!(close(d3.entry(1, 2), s * w.conj(), 1e-14));
        assert!(close(d3.entry(2, 2), s * w, 1e-14));

        let d4 = CoinOperator::dft(4).unwrap();
        let expect = [
            [1.0, 1.0, 1.0, 1.0],
            [1.0, 0.0, -1.0, 0.0],
            [1.0, -1.0, 1.0, -1.0],
            [1.0, 0.0, -1.0, 0.0],
        ];
        let imag = [
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, -1.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 1.0],
        ];
        for r in 0..4 {
            for c in 0..4 {
                let want = C64::new(expect[r][c] * 0.5, imag[r][c] * 0.5);
                assert!(
                    close(d4.entry(r, c), want, 1e-15),
                    "entry ({r},{c}) = {}",
                    d4.entry(r, c)
                );
            }
        }
        assert!(matches!(CoinOperator::dft(0), Err(QwError::Domain(_))));
    }

    #[test]
    fn factory_coins_are_unitary() {
        let coins = [
            CoinOperator::hadamard(),
            CoinOperator::general2(0.3, 1.1, 2.4).unwrap(),
            CoinOperator::general2(0.0, 0.5, 0.25).unwrap(),
            CoinOperator::general2(1.0, 0.5, 0.25).unwrap(),
            CoinOperator::grover(3).unwrap(),
            CoinOperator::grover(7).unwrap(),
            CoinOperator::dft(4).unwrap(),
            CoinOperator::dft(5).unwrap(),
            CoinOperator::non_uniform_mixing(),
            CoinOperator::hadamard().kron(&CoinOperator::hadamard(), "hadamard⊗hadamard"),
        ];
        for c in coins {
            assert!(
                c.unitarity_deviation() < 1e-12,
                "{:?} deviation {}",
                c.spec(),
                c.unitarity_deviation()
            );
        }
    }

    #[test]
    fn unbiased_flag() {
        assert!(CoinOperator::hadamard().is_unbiased());
        assert!(CoinOperator::dft(4).unwrap().is_unbiased());
        assert!(CoinOperator::non_uniform_mixing().is_unbiased());
        assert!(!CoinOperator::grover(3).unwrap().is_unbiased());
        assert!(CoinOperator::grover(2).unwrap().is_unbiased() == false);
        // Grover-4 happens to be unbiased: all entries ±1/2.
        assert!(CoinOperator::grover(4).unwrap().is_unbiased());
    }

    #[test]
    fn from_matrix_validates_unitarity() {
        let bad = vec![
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        ];
        assert!(matches!(
            CoinOperator::from_matrix("bad", 2, bad),
            Err(QwError::Domain(_))
        ));
        assert!(matches!(
            CoinOperator::from_matrix("short", 2, vec![C64::new(1.0, 0.0)]),
            Err(QwError::Shape(_))
        ));
    }

    #[test]
    fn initial_states() {
        let r = InitialCoinState::right().realize(2).unwrap();
        assert!(close(r[0], C64::new(1.0, 0.0), 1e-15));
        assert!(close(r[1], C64::new(0.0, 0.0), 1e-15));

        let b = InitialCoinState::bias(0.8536, 0.0).unwrap().realize(2).unwrap();
        let n2: f64 = b.iter().map(|z| z.norm_sqr()).sum();
        assert!((n2 - 1.0).abs() < 1e-12);

        for st in [
            InitialCoinState::sym_hadamard4(),
            InitialCoinState::sym_grover4(),
            InitialCoinState::sym_dft4(),
            InitialCoinState::uniform(3),
        ] {
            let d = match &st {
                InitialCoinState::Explicit(v) => v.len(),
                _ => 2,
            };
            let v = st.realize(d).unwrap();
            let n2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert!((n2 - 1.0).abs() < 1e-12);
        }

        assert!(matches!(
            InitialCoinState::right().realize(3),
            Err(QwError::Shape(_))
        ));
        assert!(matches!(
            InitialCoinState::bias(1.5, 0.0),
            Err(QwError::Domain(_))
        ));
    }
}
