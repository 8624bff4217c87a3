//! Exact diagonalization of the spin ring for small sizes.
//!
//! Basis states are σᶻ product states indexed by an integer whose bit `j-1`
//! holds site `j`; a cleared bit is spin up (`σᶻ = +1`). The parity
//! `P = Π σᶻ_j` of a basis state is therefore `(-1)^popcount`.
//!
//! Everything here works with dense real matrices and is meant as an
//! independent check of the free-fermion formulas, not as a fast path.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::spectral::ModelParams;
use crate::{Error, Result};

pub const MIN_SITES: usize = 4;
pub const MAX_SITES: usize = 12;

/// Smallest tolerated gap above the even-parity ground state.
pub const DEGENERACY_GAP: f64 = 1e-10;

fn check_oracle_size(l: usize) -> Result<()> {
    if !(MIN_SITES..=MAX_SITES).contains(&l) {
        return Err(Error::ResourceGuard { size: l, min: MIN_SITES, max: MAX_SITES });
    }
    if !l.is_multiple_of(2) {
        return Err(Error::Size { size: l, reason: "the lattice size must be even" });
    }
    Ok(())
}

fn is_even(state: usize) -> bool {
    state.count_ones().is_multiple_of(2)
}

/// Diagonal element and bond-flip partners of one basis state.
fn for_each_element(l: usize, j: f64, h: f64, state: usize, mut put: impl FnMut(usize, f64)) {
    let downs = state.count_ones() as f64;
    put(state, -h * (l as f64 - 2.0 * downs));
    for site in 0..l {
        let flip = (1 << site) | (1 << ((site + 1) % l));
        put(state ^ flip, -j);
    }
}

/// `H = -J Σ σˣσˣ - h Σ σᶻ` on the full `2^L` space.
#[derive(Debug, Clone)]
pub struct SpinHamiltonian {
    size: usize,
    j: f64,
    h: f64,
    matrix: DMatrix<f64>,
}

impl SpinHamiltonian {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `max |H - Hᵀ|`
    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    /// `max |[H, P]|`; `P` is diagonal so the entries are `H_ab (p_b - p_a)`.
    pub fn parity_commutator(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (idx, v) in self.matrix.iter().enumerate() {
            let (a, b) = (idx % self.matrix.nrows(), idx / self.matrix.nrows());
            if is_even(a) != is_even(b) {
                worst = worst.max(2.0 * v.abs());
            }
        }
        worst
    }

    /// All eigenvalues, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }
}

pub fn build_hamiltonian(l: usize, j: f64, h: f64) -> Result<SpinHamiltonian> {
    check_oracle_size(l)?;
    ModelParams::new(j, h)?;
    let dim = 1usize << l;
    let mut matrix = DMatrix::zeros(dim, dim);
    for state in 0..dim {
        for_each_element(l, j, h, state, |other, v| matrix[(other, state)] += v);
    }
    Ok(SpinHamiltonian { size: l, j, h, matrix })
}

/// The `P = +1` block, in increasing basis-index order.
struct EvenBlock {
    states: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl EvenBlock {
    fn new(l: usize) -> Self {
        let dim = 1usize << l;
        let states: Vec<usize> = (0..dim).filter(|&s| is_even(s)).collect();
        let mut position = vec![None; dim];
        for (i, &s) in states.iter().enumerate() {
            position[s] = Some(i);
        }
        EvenBlock { states, position }
    }

    fn hamiltonian(&self, l: usize, j: f64, h: f64) -> DMatrix<f64> {
        let n = self.states.len();
        let mut m = DMatrix::zeros(n, n);
        for (col, &state) in self.states.iter().enumerate() {
            for_each_element(l, j, h, state, |other, v| {
                let row = self.position[other].expect("H conserves parity");
                m[(row, col)] += v;
            });
        }
        m
    }
}

fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Lowest even-parity eigenstate, embedded in the full `2^L` space.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    /// Distance to the next even-parity level.
    pub gap: f64,
    pub amplitudes: DVector<f64>,
}

impl GroundState {
    /// `⟨P⟩`
    pub fn parity(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(s, a)| if is_even(s) { a * a } else { -a * a })
            .sum()
    }
}

fn even_ground(block: &EvenBlock, l: usize, j: f64, h: f64) -> Result<(f64, f64, DVector<f64>)> {
    let (values, vectors) = sorted_eigen(block.hamiltonian(l, j, h));
    let gap = values[1] - values[0];
    if gap < DEGENERACY_GAP {
        return Err(Error::Degenerate { gap });
    }
    let mut v: DVector<f64> = vectors.column(0).into_owned();
    let pivot = v.iamax();
    if v[pivot] < 0.0 {
        v.neg_mut();
    }
    Ok((values[0], gap, v))
}

fn check_fields(j: f64, h_i: f64, h_f: f64) -> Result<()> {
    ModelParams::new(j, h_i)?;
    ModelParams::new(j, h_f)?;
    if h_i <= 0.0 {
        return Err(Error::domain(format!("the oracle prepares states at h_i > 0 (got {h_i})")));
    }
    Ok(())
}

/// Ground state of the `P = +1` block at field `h_i > 0`, normalized with
/// its largest-magnitude amplitude positive.
pub fn ground_state_even(l: usize, j: f64, h_i: f64) -> Result<GroundState> {
    check_oracle_size(l)?;
    check_fields(j, h_i, h_i)?;
    let block = EvenBlock::new(l);
    let (energy, gap, v) = even_ground(&block, l, j, h_i)?;
    let mut amplitudes = DVector::zeros(1 << l);
    for (i, &s) in block.states.iter().enumerate() {
        amplitudes[s] = v[i];
    }
    Ok(GroundState { energy, gap, amplitudes })
}

/// Postquench eigenvalues (ascending, even block) and the weight of the
/// initial state on each.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SpectralDecomposition {
    /// `|Σ_n w_n e^{-i E_n t}|²`, energies measured from the lowest level.
    pub fn echo(&self, t: f64) -> f64 {
        let e0 = self.eigenvalues[0];
        let (mut re, mut im) = (0.0, 0.0);
        for (e, w) in self.eigenvalues.iter().zip(&self.weights) {
            let (s, c) = ((e - e0) * t).sin_cos();
            re += w * c;
            im -= w * s;
        }
        re * re + im * im
    }
}

/// A prepared quench: initial state, postquench block and its
/// decomposition, reusable across times.
#[derive(Debug, Clone)]
pub struct QuenchOracle {
    size: usize,
    initial: DVector<f64>,
    post: DMatrix<f64>,
    decomposition: SpectralDecomposition,
}

impl QuenchOracle {
    pub fn new(l: usize, j: f64, h_i: f64, h_f: f64) -> Result<Self> {
        check_oracle_size(l)?;
        check_fields(j, h_i, h_f)?;
        let block = EvenBlock::new(l);
        let (_, _, initial) = even_ground(&block, l, j, h_i)?;
        let post = block.hamiltonian(l, j, h_f);
        let (eigenvalues, vectors) = sorted_eigen(post.clone());
        let weights = vectors.tr_mul(&initial).iter().map(|a| a * a).collect();
        Ok(QuenchOracle { size: l, initial, post, decomposition: SpectralDecomposition { eigenvalues, weights } })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    pub fn echo(&self, t: f64) -> f64 {
        self.decomposition.echo(t)
    }

    /// `(⟨H_f⟩, ⟨H_f²⟩)` by direct matrix-vector products.
    pub fn energy_moments(&self) -> (f64, f64) {
        let hv = &self.post * &self.initial;
        (self.initial.dot(&hv), hv.norm_squared())
    }

    pub fn energy_variance(&self) -> f64 {
        let (m1, m2) = self.energy_moments();
        m2 - m1 * m1
    }
}

pub fn oracle_echo(l: usize, j: f64, h_i: f64, h_f: f64, t: f64) -> Result<f64> {
    Ok(QuenchOracle::new(l, j, h_i, h_f)?.echo(t))
}

pub fn oracle_energy_moments(l: usize, j: f64, h_i: f64, h_f: f64) -> Result<(f64, f64)> {
    Ok(QuenchOracle::new(l, j, h_i, h_f)?.energy_moments())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{dispersion, momentum_grid, Sector};
    use crate::zeros::{critical_times, zero_set};
    use crate::{energy_variance, loschmidt_echo, QuenchSpec};
    use approx::assert_relative_eq;

    /// Many-body levels of one parity sector: `Σ a_q (2 n_q - 1)` over single
    /// fermion modes `q`, with the total occupation even (aPBC) or odd (PBC).
    fn fermion_levels(l: usize, h: f64, sector: Sector) -> Vec<f64> {
        let params = ModelParams::new(1.0, h).unwrap();
        let mut modes: Vec<f64> = Vec::new();
        for k in momentum_grid(l, sector).unwrap().iter() {
            let e = dispersion(k, &params).energy;
            modes.extend([e, e]);
        }
        if sector == Sector::OddPbc {
            // unpaired k = 0 and k = π
            modes.extend([-(1.0 + h), 1.0 - h]);
        }
        let parity = u32::from(sector == Sector::OddPbc);
        (0..1usize << modes.len())
            .filter(|occ| occ.count_ones() % 2 == parity)
            .map(|occ| modes.iter().enumerate().map(|(q, a)| if occ >> q & 1 == 1 { *a } else { -*a }).sum())
            .collect()
    }

    #[test]
    fn small_ring_spectrum_is_free_fermion() {
        for h in [0.0, 0.7, 2.3] {
            let ham = build_hamiltonian(4, 1.0, h).unwrap();
            let mut expected = fermion_levels(4, h, Sector::EvenApbc);
            expected.extend(fermion_levels(4, h, Sector::OddPbc));
            expected.sort_by(f64::total_cmp);
            let spectrum = ham.spectrum();
            assert_eq!(spectrum.len(), expected.len());
            for (a, b) in spectrum.iter().zip(&expected) {
                assert!((a - b).abs() < 1e-10, "h = {h}: {a} vs {b}");
            }
        }
        let spectrum = build_hamiltonian(4, 1.0, 0.0).unwrap().spectrum();
        assert!((spectrum[0] + 4.0).abs() < 1e-12);
        assert!((spectrum[15] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_and_parity_conserving() {
        for l in [4, 6, 8] {
            let ham = build_hamiltonian(l, 1.3, 0.4).unwrap();
            assert!(ham.hermiticity_error() <= 1e-12);
            assert!(ham.parity_commutator() <= 1e-12);
        }
    }

    #[test]
    fn size_guard() {
        assert_eq!(build_hamiltonian(14, 1.0, 0.5).unwrap_err(), Error::ResourceGuard { size: 14, min: 4, max: 12 });
        assert!(matches!(build_hamiltonian(2, 1.0, 0.5), Err(Error::ResourceGuard { .. })));
        assert!(matches!(build_hamiltonian(7, 1.0, 0.5), Err(Error::Size { .. })));
        assert!(matches!(oracle_echo(16, 1.0, 0.5, 2.0, 1.0), Err(Error::ResourceGuard { .. })));
    }

    #[test]
    fn ground_energy_is_free_fermion_vacuum() {
        for l in [4, 6, 8, 10] {
            for h in [0.2, 0.9, 1.0, 3.0] {
                let gs = ground_state_even(l, 1.0, h).unwrap();
                let params = ModelParams::new(1.0, h).unwrap();
                let vacuum: f64 = -2.0
                    * momentum_grid(l, Sector::EvenApbc).unwrap().iter().map(|k| dispersion(k, &params).energy).sum::<f64>();
                assert!((gs.energy - vacuum).abs() < 1e-10, "L = {l}, h = {h}");
                assert!((gs.parity() - 1.0).abs() < 1e-12);
                assert!((gs.amplitudes.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn strong_field_ground_state_is_all_up() {
        let gs = ground_state_even(8, 1.0, 1e4).unwrap();
        assert!(gs.amplitudes[0] > 0.0);
        assert!(gs.amplitudes[0] * gs.amplitudes[0] > 1.0 - 1e-6);
    }

    #[test]
    fn ground_energy_duality() {
        for l in [6, 8] {
            for g in [0.3, 0.8, 2.5] {
                let direct = ground_state_even(l, 1.0, g).unwrap().energy;
                let dual = ground_state_even(l, 1.0, 1.0 / g).unwrap().energy;
                assert_relative_eq!(direct, g * dual, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn prequench_field_must_be_positive() {
        assert!(ground_state_even(6, 1.0, 0.0).is_err());
        assert!(QuenchOracle::new(6, 1.0, -0.5, 1.0).is_err());
    }

    #[test]
    fn weights_are_normalized() {
        let oracle = QuenchOracle::new(8, 1.0, 0.5, 2.0).unwrap();
        let d = oracle.decomposition();
        assert!(d.weights.iter().all(|&w| w >= 0.0));
        assert!((d.weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        assert!((oracle.echo(0.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn echo_agrees_with_product_formula() {
        let oracle = QuenchOracle::new(8, 1.0, 0.5, 2.0).unwrap();
        let spec = QuenchSpec::new(1.0, 0.5, 2.0, 8, Sector::EvenApbc).unwrap();
        for t in [0.0, 0.3, 1.7, 6.2] {
            assert!((oracle.echo(t) - loschmidt_echo(&spec, t).unwrap()).abs() <= 1e-8);
        }
        let spec = QuenchSpec::new(2.0, 0.6, 5.0, 6, Sector::EvenApbc).unwrap();
        let oracle = QuenchOracle::new(6, 2.0, 0.6, 5.0).unwrap();
        for t in [0.1, 0.9, 3.3] {
            assert!((oracle.echo(t) - loschmidt_echo(&spec, t).unwrap()).abs() <= 1e-8);
        }
    }

    #[test]
    fn echo_vanishes_at_matched_zeros() {
        for sol in zero_set(0.5, 8, Sector::EvenApbc) {
            let Some(gf) = sol.gamma_f().finite() else { continue };
            if gf <= 0.0 {
                continue;
            }
            let t0 = critical_times(&sol, 0).unwrap().times[0];
            assert!(oracle_echo(8, 1.0, 0.5, gf, t0).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn variance_matches_closed_form() {
        let oracle = QuenchOracle::new(8, 1.0, 0.5, 2.0).unwrap();
        let spec = QuenchSpec::dimensionless(0.5, 2.0, 8, Sector::EvenApbc).unwrap();
        assert!((oracle.energy_variance() - energy_variance(&spec).unwrap()).abs() <= 1e-8);
        let same = QuenchOracle::new(6, 1.0, 0.7, 0.7).unwrap();
        assert!(same.energy_variance().abs() < 1e-10);
    }

    #[test]
    fn variance_of_classical_quench() {
        // strong prequench field, h_f = 0: ΔE² → J² L
        let (m1, m2) = oracle_energy_moments(8, 1.0, 1e6, 0.0).unwrap();
        assert!((m2 - m1 * m1 - 8.0).abs() < 1e-3);
    }
}
