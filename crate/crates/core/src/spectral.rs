//! Momentum grids, single-mode dispersions and the quench overlap factor of
//! the fermionized transverse-field Ising ring.
//!
//! Even fermion parity corresponds to anti-periodic fermion boundary
//! conditions and odd parity to periodic ones. Both grids are stored as
//! exact rational multiples of π, so a momentum such as `k = π/2` is an
//! integer test rather than a float comparison.

use std::f64::consts::PI;

use serde::Serialize;

use crate::compensated::DoubleDouble;
use crate::{Error, Extended, Result};

/// Fermion-parity sector of the periodic spin chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sector {
    /// Even parity, anti-periodic fermions: `k = π(2m-1)/L`, `m = 1..=L/2`.
    EvenApbc,
    /// Odd parity, periodic fermions: `k = 2πm/L`, `m = 1..L/2` (the
    /// unpaired `k = 0, π` modes never contribute to the echo).
    OddPbc,
}

impl Sector {
    pub fn label(self) -> &'static str {
        match self {
            Sector::EvenApbc => "apbc",
            Sector::OddPbc => "pbc",
        }
    }

    /// Number of positive modes at size `l`.
    pub fn mode_count(self, l: usize) -> usize {
        match self {
            Sector::EvenApbc => l / 2,
            Sector::OddPbc => l / 2 - 1,
        }
    }
}

impl std::str::FromStr for Sector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "apbc" => Ok(Sector::EvenApbc),
            "pbc" => Ok(Sector::OddPbc),
            other => Err(Error::argument(format!("unknown sector `{other}` (expected apbc|pbc)"))),
        }
    }
}

/// `(sin πx, cos πx)` for `x = num/den ∈ [0, 1]`, reduced exactly to
/// `[0, 1/4]` first so that `π/2` gives `(1, 0)` bit-exactly.
fn sin_cos_pi(num: u64, den: u64) -> (f64, f64) {
    debug_assert!(den > 0 && num <= den);
    if 2 * num > den {
        let (s, c) = sin_cos_pi(den - num, den);
        return (s, -c);
    }
    if 4 * num > den {
        // π/2 - πx = π(den - 2 num) / (2 den)
        let (s, c) = sin_cos_pi(den - 2 * num, 2 * den);
        return (c, s);
    }
    if num == 0 {
        return (0.0, 1.0);
    }
    (PI * (num as f64 / den as f64)).sin_cos()
}

/// A momentum `k = π·num/den` with its trigonometry evaluated once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Momentum {
    index: usize,
    num: u64,
    den: u64,
    sin: f64,
    cos: f64,
}

impl Momentum {
    /// `k = π·num/den`, required to lie strictly inside `(0, π)`.
    pub fn from_ratio(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num >= den {
            return Err(Error::domain(format!("momentum π·{num}/{den} is outside (0, π)")));
        }
        Ok(Self::grid_point(0, num, den))
    }

    fn grid_point(index: usize, num: u64, den: u64) -> Self {
        let (sin, cos) = sin_cos_pi(num, den);
        Momentum { index, num, den, sin, cos }
    }

    /// Grid mode index `m` (0 for momenta built with [`Momentum::from_ratio`]).
    pub fn index(&self) -> usize {
        self.index
    }

    /// `(num, den)` with `k = π·num/den`.
    pub fn ratio(&self) -> (u64, u64) {
        (self.num, self.den)
    }

    pub fn radians(&self) -> f64 {
        PI * (self.num as f64 / self.den as f64)
    }

    pub fn sin(&self) -> f64 {
        self.sin
    }

    pub fn cos(&self) -> f64 {
        self.cos
    }

    pub fn is_half_pi(&self) -> bool {
        2 * self.num == self.den
    }
}

/// The positive momenta of one parity sector, ascending in `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    size: usize,
    sector: Sector,
    modes: Vec<Momentum>,
}

impl MomentumGrid {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn modes(&self) -> &[Momentum] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Momentum> {
        self.modes.iter()
    }

    /// Whether `k = π/2` belongs to the grid.
    pub fn contains_half_pi(&self) -> bool {
        self.modes.iter().any(Momentum::is_half_pi)
    }
}

impl<'a> IntoIterator for &'a MomentumGrid {
    type Item = &'a Momentum;
    type IntoIter = std::slice::Iter<'a, Momentum>;

    fn into_iter(self) -> Self::IntoIter {
        self.modes.iter()
    }
}

pub(crate) fn check_size(l: usize) -> Result<()> {
    if !l.is_multiple_of(2) {
        return Err(Error::Size { size: l, reason: "the lattice size must be even" });
    }
    if l < 4 {
        return Err(Error::Size { size: l, reason: "the lattice size must be at least 4" });
    }
    Ok(())
}

/// Positive momentum set of `sector` for an even ring of `l ≥ 4` sites.
pub fn momentum_grid(l: usize, sector: Sector) -> Result<MomentumGrid> {
    check_size(l)?;
    let den = l as u64;
    let modes = match sector {
        Sector::EvenApbc => (1..=l / 2)
            .map(|m| Momentum::grid_point(m, 2 * m as u64 - 1, den))
            .collect(),
        Sector::OddPbc => (1..l / 2)
            .map(|m| Momentum::grid_point(m, 2 * m as u64, den))
            .collect(),
    };
    Ok(MomentumGrid { size: l, sector, modes })
}

/// Coupling and transverse field of one Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    j: f64,
    h: f64,
}

impl ModelParams {
    /// Only the ferromagnetic convention `J > 0` is supported.
    pub fn new(j: f64, h: f64) -> Result<Self> {
        if !(j.is_finite() && j > 0.0) {
            return Err(Error::domain(format!("coupling J = {j} must be finite and positive")));
        }
        if !h.is_finite() {
            return Err(Error::domain(format!("field h = {h} must be finite")));
        }
        Ok(ModelParams { j, h })
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn gamma(&self) -> f64 {
        self.h / self.j
    }
}

/// Per-momentum quantities of one Hamiltonian, plus the overlap factor when
/// produced for a quench.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeData {
    pub k: f64,
    /// `ε_k = -J cos k - h`
    pub eps: f64,
    /// `ζ_k = -J sin k`
    pub zeta: f64,
    /// `E_k = sqrt(ε_k² + ζ_k²)`
    pub energy: f64,
    /// `sin²(2δθ_k)` between pre- and postquench Bogoliubov angles.
    pub overlap: Option<f64>,
}

pub fn dispersion(k: &Momentum, params: &ModelParams) -> ModeData {
    let eps = -params.j * k.cos - params.h;
    let zeta = -params.j * k.sin;
    ModeData { k: k.radians(), eps, zeta, energy: eps.hypot(zeta), overlap: None }
}

/// `1 + 2γ cos k + γ²`, i.e. `(E_k/J)²`.
#[inline]
fn energy_squared(gamma: f64, cos: f64) -> f64 {
    1.0 + 2.0 * gamma * cos + gamma * gamma
}

/// `(sin²(2δθ_k), cos²(2δθ_k))`, both from branch-free closed forms.
///
/// The two parts sum to one analytically; keeping the complement separate
/// avoids cancellation in `1 - sin²(2δθ_k)` close to an exact zero.
#[inline]
pub(crate) fn overlap_parts(k: &Momentum, gamma_i: f64, gamma_f: f64) -> (f64, f64) {
    let (sin, cos) = (k.sin, k.cos);
    let denom = energy_squared(gamma_i, cos) * energy_squared(gamma_f, cos);
    let diff = (gamma_i - gamma_f) * sin;
    let dot = 1.0 + (gamma_i + gamma_f) * cos + gamma_i * gamma_f;
    let overlap = (diff * diff / denom).clamp(0.0, 1.0);
    let complement = (dot * dot / denom).clamp(0.0, 1.0);
    (overlap, complement)
}

/// `sin²(2δθ_k) = (γ_i - γ_f)² sin²k / [(1 + 2γ_i cos k + γ_i²)(1 + 2γ_f cos k + γ_f²)]`.
pub fn overlap_factor(k: &Momentum, gamma_i: f64, gamma_f: f64) -> Result<f64> {
    if !(gamma_i.is_finite() && gamma_f.is_finite()) {
        return Err(Error::domain(format!(
            "overlap factor needs finite fields (γ_i = {gamma_i}, γ_f = {gamma_f})"
        )));
    }
    Ok(overlap_parts(k, gamma_i, gamma_f).0)
}

/// Limit of [`overlap_factor`] for `γ_f → ±∞`: `sin²k / (1 + 2γ_i cos k + γ_i²)`.
pub fn overlap_factor_unbounded(k: &Momentum, gamma_i: f64) -> f64 {
    (k.sin * k.sin / energy_squared(gamma_i, k.cos)).clamp(0.0, 1.0)
}

/// `E_k/J` in double-double precision for the oscillating phase.
///
/// Uses `1 + 2γ cos k + γ²` under the root, which is exactly `γ²` times the
/// value at `1/γ` for the same `cos k`.
pub(crate) fn reduced_energy_dd(k: &Momentum, gamma: f64) -> DoubleDouble {
    let g2 = DoubleDouble::product(gamma, gamma);
    let cross = DoubleDouble::product(2.0 * gamma, k.cos);
    DoubleDouble::from_f64(1.0).add(cross).add(g2).sqrt()
}

/// A sudden quench `h_i → h_f` of a ring of `size` sites in one parity sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuenchSpec {
    j: f64,
    h_i: f64,
    h_f: Extended,
    size: usize,
    sector: Sector,
}

impl QuenchSpec {
    pub fn new(j: f64, h_i: f64, h_f: f64, size: usize, sector: Sector) -> Result<Self> {
        if !h_f.is_finite() {
            return Err(Error::domain(format!(
                "postquench field h_f = {h_f} must be finite; use QuenchSpec::with_unbounded_field"
            )));
        }
        Self::build(j, h_i, Extended::Finite(h_f), size, sector)
    }

    /// A quench to a symbolically unbounded postquench field. Only the
    /// zero and speed-limit analyses accept such a spec.
    pub fn with_unbounded_field(j: f64, h_i: f64, size: usize, sector: Sector) -> Result<Self> {
        Self::build(j, h_i, Extended::Unbounded, size, sector)
    }

    /// Dimensionless form with `J = 1`.
    pub fn dimensionless(gamma_i: f64, gamma_f: f64, size: usize, sector: Sector) -> Result<Self> {
        Self::new(1.0, gamma_i, gamma_f, size, sector)
    }

    fn build(j: f64, h_i: f64, h_f: Extended, size: usize, sector: Sector) -> Result<Self> {
        ModelParams::new(j, h_i)?;
        check_size(size)?;
        Ok(QuenchSpec { j, h_i, h_f, size, sector })
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn h_i(&self) -> f64 {
        self.h_i
    }

    pub fn h_f(&self) -> Extended {
        self.h_f
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn gamma_i(&self) -> f64 {
        self.h_i / self.j
    }

    pub fn gamma_f(&self) -> Extended {
        match self.h_f {
            Extended::Finite(h) => Extended::Finite(h / self.j),
            Extended::Unbounded => Extended::Unbounded,
        }
    }

    /// Finite `h_f`, or a domain error naming `what` needs it.
    pub(crate) fn finite_h_f(&self, what: &str) -> Result<f64> {
        self.h_f
            .finite()
            .ok_or_else(|| Error::domain(format!("{what} requires a finite postquench field")))
    }

    pub fn prequench(&self) -> ModelParams {
        ModelParams { j: self.j, h: self.h_i }
    }

    pub fn postquench(&self) -> Result<ModelParams> {
        let h = self.finite_h_f("the postquench Hamiltonian")?;
        Ok(ModelParams { j: self.j, h })
    }

    pub fn grid(&self) -> MomentumGrid {
        momentum_grid(self.size, self.sector).expect("size validated at construction")
    }

    /// Per-mode data of the postquench Hamiltonian with overlap factors.
    pub fn modes(&self) -> Result<Vec<ModeData>> {
        let post = self.postquench()?;
        let (gi, gf) = (self.gamma_i(), post.gamma());
        self.grid()
            .iter()
            .map(|k| {
                let mut data = dispersion(k, &post);
                data.overlap = Some(overlap_factor(k, gi, gf)?);
                Ok(data)
            })
            .collect()
    }
}
