//! Density operators on `C^m ⊗ C^n`: sampling, marginals, spectra,
//! purification, the spectrum-estimation bound and a numerical search for
//! states with prescribed marginal spectra.
//!
//! Bipartite indices are row-major: basis vector `|a⟩|b⟩` sits at
//! `a * n + b`. Logarithms are natural throughout.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, Partition};
use crate::symfunc::{schur_weyl_prob, Spectrum};

/// Eigenvalues below this are treated as round-off and clamped to zero.
pub const EIGEN_CLAMP: f64 = 1e-10;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PINSKER_SLACK: f64 = 1e-12;

/// Mixes a base seed with a task index into an independent stream seed
/// (splitmix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Eigen("matrix has non-finite entries".into()));
    }
    if m.nrows() == 1 {
        return Ok(vec![m[(0, 0)].re]);
    }
    Ok(m.clone().symmetric_eigen().eigenvalues.iter().copied().collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square and nonempty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let d = matrix.nrows();
        for i in 0..d {
            for j in 0..=i {
                if (matrix[(i, j)] - matrix[(j, i)].conj()).norm() > HERMITIAN_TOL {
                    return Err(Error::Precondition(format!("matrix is not Hermitian at ({i},{j})")));
                }
            }
        }
        let trace: Complex64 = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL {
            return Err(Error::Precondition(format!("trace is {} instead of 1", trace.re)));
        }
        let min = hermitian_eigenvalues(&matrix)?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -EIGEN_CLAMP {
            return Err(Error::Precondition(format!("eigenvalue {min} is negative")));
        }
        Ok(Self { matrix })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    fn from_trusted(matrix: DMatrix<Complex64>) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::from_trusted(DMatrix::<f64>::identity(d, d).scale(1.0 / d as f64).map(|x| Complex64::new(x, 0.0)))
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(state: &PureState) -> Self {
        let v = &state.amplitudes;
        Self::from_trusted(v * v.adjoint())
    }

    /// `ρ ⊗ σ`.
    pub fn tensor(&self, other: &DensityOperator) -> Self {
        Self::from_trusted(self.matrix.kronecker(&other.matrix))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Eigenvalues, clamped at [`EIGEN_CLAMP`] and renormalized.
    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::from_eigenvalues(hermitian_eigenvalues(&self.matrix)?, EIGEN_CLAMP)
    }
}

/// Hilbert–Schmidt random state `G G† / Tr(G G†)` with `G` a `d×d` matrix of
/// independent standard complex Gaussians. Deterministic per seed.
pub fn random_density(d: usize, seed: u64) -> DensityOperator {
    assert!(d >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(d, d, |_, _| complex_gaussian(&mut rng));
    let gg = &g * g.adjoint();
    let tr = gg.trace().re;
    let mut rho = gg.unscale(tr);
    // force exact Hermiticity
    for i in 0..d {
        rho[(i, i)].im = 0.0;
        for j in 0..i {
            rho[(j, i)] = rho[(i, j)].conj();
        }
    }
    DensityOperator::from_trusted(rho)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Keep the first factor (trace out B).
    A,
    /// Keep the second factor (trace out A).
    B,
}

fn partial_trace_matrix(rho: &DMatrix<Complex64>, side: Side, m: usize, n: usize) -> DMatrix<Complex64> {
    match side {
        Side::A => DMatrix::from_fn(m, m, |a, a2| (0..n).map(|b| rho[(a * n + b, a2 * n + b)]).sum()),
        Side::B => DMatrix::from_fn(n, n, |b, b2| (0..m).map(|a| rho[(a * n + b, a * n + b2)]).sum()),
    }
}

/// Marginal of `rho` on `C^m ⊗ C^n`.
pub fn partial_trace(rho: &DensityOperator, side: Side, m: usize, n: usize) -> Result<DensityOperator> {
    if rho.dim() != m * n {
        return Err(Error::DimensionMismatch(format!(
            "operator has dimension {} but m·n = {}",
            rho.dim(),
            m * n
        )));
    }
    Ok(DensityOperator::from_trusted(partial_trace_matrix(&rho.matrix, side, m, n)))
}

/// `(Spec ρ^A, Spec ρ^B, Spec ρ^{AB})`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralTriple {
    pub a: Spectrum,
    pub b: Spectrum,
    pub ab: Spectrum,
}

impl SpectralTriple {
    pub fn new(a: Spectrum, b: Spectrum, ab: Spectrum) -> Result<Self> {
        if ab.len() != a.len() * b.len() {
            return Err(Error::DimensionMismatch(format!(
                "joint spectrum has {} entries, expected {}",
                ab.len(),
                a.len() * b.len()
            )));
        }
        Ok(Self { a, b, ab })
    }

    /// Builds a triple from the normalized shapes, padding to `(m, n, m·n)`.
    pub fn from_shapes(mu: &Partition, nu: &Partition, lambda: &Partition, m: usize, n: usize) -> Result<Self> {
        let pad = |p: &Partition, len: usize| -> Result<Spectrum> {
            if p.len() > len {
                return Err(Error::DimensionMismatch(format!("shape {p} has more than {len} rows")));
            }
            let mut w = p.normalize()?.to_f64();
            w.resize(len, 0.0);
            Spectrum::from_eigenvalues(w, 0.0)
        };
        Self::new(pad(mu, m)?, pad(nu, n)?, pad(lambda, m * n)?)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.a.len(), self.b.len())
    }

    /// `r^A ⧺ r^B ⧺ r^{AB}`.
    pub fn flatten(&self) -> Vec<f64> {
        [self.a.probs(), self.b.probs(), self.ab.probs()].concat()
    }

    /// Sum of the three L1 distances.
    pub fn l1_distance(&self, other: &SpectralTriple) -> f64 {
        l1_distance(self.a.probs(), other.a.probs())
            + l1_distance(self.b.probs(), other.b.probs())
            + l1_distance(self.ab.probs(), other.ab.probs())
    }
}

/// `‖p − q‖₁`, padding the shorter vector with zeros.
pub fn l1_distance(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    (0..len)
        .map(|i| (p.get(i).copied().unwrap_or(0.0) - q.get(i).copied().unwrap_or(0.0)).abs())
        .sum()
}

pub fn spectral_triple(rho: &DensityOperator, m: usize, n: usize) -> Result<SpectralTriple> {
    let a = partial_trace(rho, Side::A, m, n)?.spectrum()?;
    let b = partial_trace(rho, Side::B, m, n)?.spectrum()?;
    SpectralTriple::new(a, b, rho.spectrum()?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm_squared();
        if amplitudes.is_empty() || (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::Precondition(format!("squared norm is {norm} instead of 1")));
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// `|index⟩` in `C^d`.
    pub fn basis(d: usize, index: usize) -> Self {
        assert!(index < d, "basis index {index} out of range for dimension {d}");
        let amplitudes = DVector::from_fn(d, |i, _| Complex64::from(if i == index { 1.0 } else { 0.0 }));
        Self { amplitudes }
    }

    /// `(|00⟩ + |11⟩ + …)/√d` on `C^d ⊗ C^d`.
    pub fn maximally_entangled(d: usize) -> Self {
        let amp = Complex64::from(1.0 / (d as f64).sqrt());
        let amplitudes = DVector::from_fn(d * d, |i, _| if i / d == i % d { amp } else { Complex64::from(0.0) });
        Self { amplitudes }
    }

    /// `|ψ⟩ ⊗ |φ⟩`.
    pub fn tensor(&self, other: &PureState) -> Self {
        Self {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        }
    }
}

/// Purification on `C^d ⊗ C^d` whose first-factor marginal is `rho`.
pub fn purify(rho: &DensityOperator) -> PureState {
    let d = rho.dim();
    let (values, vectors) = if d == 1 {
        (vec![rho.trace()], DMatrix::<Complex64>::identity(1, 1))
    } else {
        let eig = rho.matrix.clone().symmetric_eigen();
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };
    let weights: Vec<f64> = values.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut amplitudes = DVector::zeros(d * d);
    for (i, w) in weights.iter().enumerate() {
        let s = (w / total).sqrt();
        for a in 0..d {
            amplitudes[a * d + i] = vectors[(a, i)] * s;
        }
    }
    PureState { amplitudes }
}

/// `D(p‖q) = Σ p_i ln(p_i/q_i)` with `0·ln(0/·) = 0`; `+∞` when some
/// `p_i > 0` meets `q_i = 0`.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(format!(
            "distributions have lengths {} and {}",
            p.len(),
            q.len()
        )));
    }
    let mut d = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Ok(f64::INFINITY);
            }
            d += pi * (pi / qi).ln();
        }
    }
    Ok(d.max(0.0))
}

/// `‖p − q‖₁² / 2 ≤ D(p‖q)` up to [`PINSKER_SLACK`].
pub fn check_pinsker(p: &[f64], q: &[f64]) -> Result<bool> {
    let d = kl_divergence(p, q)?;
    let l1 = l1_distance(p, q);
    Ok(l1 * l1 / 2.0 <= d + PINSKER_SLACK)
}

/// Upper bound `(k+1)^{d(d−1)/2} exp(−k D(λ̄‖r))` on `Tr P_λ ρ^{⊗k}`.
pub fn estimation_bound(lambda: &Partition, r: &Spectrum, k: u32) -> Result<f64> {
    if lambda.size() != k {
        return Err(Error::SizeMismatch(format!("shape {lambda} does not have {k} boxes")));
    }
    let d = r.len();
    if lambda.len() > d {
        return Err(Error::DimensionMismatch(format!("shape {lambda} has more than {d} rows")));
    }
    let mut bar = lambda.normalize()?.to_f64();
    bar.resize(d, 0.0);
    let div = kl_divergence(&bar, r.probs())?;
    if div.is_infinite() {
        return Ok(0.0);
    }
    let exponent = (d * (d - 1) / 2) as f64;
    Ok((k as f64 + 1.0).powf(exponent) * (-(k as f64) * div).exp())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub k: u32,
    /// Most likely Schur–Weyl outcome.
    pub argmax: Partition,
    pub probability: f64,
    /// `‖λ̄* − r‖₁`.
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// Smallest `c` with `distance ≤ c/√k` on every row.
    pub fitted_c: f64,
}

/// For each `k`, the diagram maximizing `Tr P_λ ρ^{⊗k}` and its distance to `r`.
/// Ties go to the first diagram in enumeration order.
pub fn estimation_convergence(r: &Spectrum, ks: &[u32]) -> Result<ConvergenceTable> {
    let d = r.len();
    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        if k == 0 {
            return Err(Error::Precondition("k must be positive".into()));
        }
        let mut best: Option<(Partition, f64)> = None;
        for lambda in enumerate_partitions(k, d) {
            let prob = schur_weyl_prob(&lambda, r, k)?;
            if best.as_ref().is_none_or(|(_, b)| prob > *b) {
                best = Some((lambda, prob));
            }
        }
        let (argmax, probability) = best.expect("Par(k, d) is nonempty");
        let distance = l1_distance(&argmax.normalize()?.to_f64(), r.probs());
        rows.push(ConvergenceRow {
            k,
            argmax,
            probability,
            distance,
        });
    }
    let fitted_c = rows
        .iter()
        .map(|row| row.distance * (row.k as f64).sqrt())
        .fold(0.0, f64::max);
    Ok(ConvergenceTable { rows, fitted_c })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessSearch {
    pub restarts: usize,
    /// Coordinate sweeps per restart.
    pub iterations: usize,
    pub seed: u64,
    /// Stop as soon as the total L1 error drops to this value.
    pub target_error: f64,
}

impl Default for WitnessSearch {
    fn default() -> Self {
        Self {
            restarts: 200,
            iterations: 2000,
            seed: 0,
            target_error: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub rho: DensityOperator,
    /// Sum of the three L1 spectral distances to the target.
    pub error: f64,
    pub restarts_used: usize,
}

struct WitnessObjective<'a> {
    target: &'a SpectralTriple,
    m: usize,
    n: usize,
}

fn sorted_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v = hermitian_eigenvalues(m).unwrap_or_else(|_| vec![f64::NAN; m.nrows()]);
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn squared_distance(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
}

impl WitnessObjective<'_> {
    /// Joint state of the purification `Σ_i √r_i |u_i⟩|i⟩`, i.e.
    /// `U diag(r^{AB}) U†` for the unitary with columns `u_i`.
    fn joint(&self, u: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let psi = DMatrix::from_fn(u.nrows(), u.ncols(), |ab, c| u[(ab, c)] * self.target.ab.probs()[c].sqrt());
        &psi * psi.adjoint()
    }

    fn marginals(&self, rho: &DMatrix<Complex64>) -> (Vec<f64>, Vec<f64>) {
        (
            sorted_eigenvalues(&partial_trace_matrix(rho, Side::A, self.m, self.n)),
            sorted_eigenvalues(&partial_trace_matrix(rho, Side::B, self.m, self.n)),
        )
    }

    /// Smooth surrogate minimized by the search.
    fn loss(&self, u: &DMatrix<Complex64>) -> f64 {
        let (ra, rb) = self.marginals(&self.joint(u));
        let f = squared_distance(&ra, self.target.a.probs()) + squared_distance(&rb, self.target.b.probs());
        if f.is_nan() {
            f64::INFINITY
        } else {
            f
        }
    }

    /// Sum of the three L1 spectral distances.
    fn error(&self, u: &DMatrix<Complex64>) -> f64 {
        let rho = self.joint(u);
        let (ra, rb) = self.marginals(&rho);
        let e = l1_distance(&ra, self.target.a.probs())
            + l1_distance(&rb, self.target.b.probs())
            + l1_distance(&sorted_eigenvalues(&rho), self.target.ab.probs());
        if e.is_nan() {
            f64::INFINITY
        } else {
            e
        }
    }
}

/// Right-multiplies `u` by `exp(i t G)` where `G` is the Hermitian generator
/// `E_jk + E_kj` (`imaginary = false`) or `−i E_jk + i E_kj` (`true`).
fn rotate_columns(u: &DMatrix<Complex64>, j: usize, k: usize, t: f64, imaginary: bool) -> DMatrix<Complex64> {
    let (c, s) = (t.cos(), t.sin());
    let (off_jk, off_kj) = if imaginary {
        (Complex64::new(-s, 0.0), Complex64::new(s, 0.0))
    } else {
        (Complex64::new(0.0, s), Complex64::new(0.0, s))
    };
    let mut out = u.clone();
    for r in 0..u.nrows() {
        let (a, b) = (u[(r, j)], u[(r, k)]);
        out[(r, j)] = a * c + b * off_kj;
        out[(r, k)] = a * off_jk + b * c;
    }
    out
}

/// Random-restart local search for a state on `C^m ⊗ C^n` whose spectral
/// triple approximates `target`.
///
/// The state is parameterized by a purification `Σ_i √r^{AB}_i |u_i⟩|i⟩`
/// with `(u_i)` an orthonormal basis, so positivity, unit trace and the
/// joint spectrum hold by construction. Each restart draws a random basis
/// and then perturbs it one coordinate (a Givens rotation between two basis
/// vectors) at a time, keeping only moves that reduce the squared distance
/// of the marginal spectra and halving the step when a full sweep fails.
pub fn find_witness_state(target: &SpectralTriple, m: usize, n: usize, opts: &WitnessSearch) -> Result<Witness> {
    if target.a.len() != m || target.b.len() != n || target.ab.len() != m * n {
        return Err(Error::DimensionMismatch(format!(
            "target lengths ({}, {}, {}) do not match ({m}, {n}, {})",
            target.a.len(),
            target.b.len(),
            target.ab.len(),
            m * n
        )));
    }
    let dim = m * n;
    let objective = WitnessObjective { target, m, n };
    let coords: Vec<(usize, usize, bool)> = (0..dim)
        .flat_map(|j| (j + 1..dim).flat_map(move |k| [(j, k, false), (j, k, true)]))
        .collect();
    let mut best: Option<(DMatrix<Complex64>, f64)> = None;
    let mut restarts_used = 0;

    for restart in 0..opts.restarts.max(1) {
        restarts_used = restart + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, restart as u64));
        // Haar-random unitary from the QR factor of a Ginibre matrix
        let g = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(&mut rng));
        let mut u = g.qr().q();
        let mut loss = objective.loss(&u);
        let mut err = objective.error(&u);
        let mut step = 0.5;

        for _ in 0..opts.iterations {
            if err <= opts.target_error || step < 1e-13 {
                break;
            }
            let mut improved = false;
            for &(j, k, imaginary) in &coords {
                for t in [step, -step] {
                    let candidate = rotate_columns(&u, j, k, t, imaginary);
                    let l = objective.loss(&candidate);
                    if l < loss {
                        u = candidate;
                        loss = l;
                        improved = true;
                        break;
                    }
                }
            }
            if improved {
                err = objective.error(&u);
            } else {
                step *= 0.5;
            }
        }

        if best.as_ref().is_none_or(|(_, b)| err < *b) {
            best = Some((u, err));
        }
        if err <= opts.target_error {
            break;
        }
    }

    let (u, error) = best.expect("at least one restart");
    let mut rho = objective.joint(&u);
    for i in 0..dim {
        rho[(i, i)].im = 0.0;
        for j in 0..i {
            rho[(j, i)] = rho[(i, j)].conj();
        }
    }
    Ok(Witness {
        rho: DensityOperator::from_trusted(rho),
        error,
        restarts_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn random_density_basics() {
        let one = random_density(1, 7);
        assert!((one.matrix()[(0, 0)] - Complex64::from(1.0)).norm() < 1e-15);
        assert_eq!(random_density(4, 11), random_density(4, 11));
        assert_ne!(random_density(4, 11), random_density(4, 12));
        let rho = random_density(5, 3);
        assert!(DensityOperator::new(rho.matrix().clone()).is_ok());
    }

    #[test]
    fn hilbert_schmidt_mean_gap() {
        // For d = 2 the eigenvalue density is ∝ (λ1 − λ2)^2, so the gap
        // |λ1 − λ2| has density 3x² on [0, 1] and mean 3/4.
        let trials = 10_000;
        let mean: f64 = (0..trials)
            .map(|s| {
                let sp = random_density(2, derive_seed(99, s)).spectrum().unwrap();
                sp.probs()[0] - sp.probs()[1]
            })
            .sum::<f64>()
            / trials as f64;
        assert!((mean - 0.75).abs() / 0.75 < 0.02, "mean gap {mean}");
    }

    #[test]
    fn partial_trace_examples() {
        let ra = random_density(2, 1);
        let rb = random_density(3, 2);
        let prod = ra.tensor(&rb);
        let back = partial_trace(&prod, Side::A, 2, 3).unwrap();
        assert!((back.matrix() - ra.matrix()).norm() < 1e-14);
        let back = partial_trace(&prod, Side::B, 2, 3).unwrap();
        assert!((back.matrix() - rb.matrix()).norm() < 1e-14);

        let bell = DensityOperator::from_pure(&PureState::maximally_entangled(2));
        let marg = partial_trace(&bell, Side::A, 2, 2).unwrap();
        assert!((marg.matrix() - DensityOperator::maximally_mixed(2).matrix()).norm() < 1e-15);

        let rho = random_density(6, 5);
        assert!((partial_trace(&rho, Side::B, 3, 2).unwrap().trace() - 1.0).abs() < 1e-12);
        assert!(matches!(
            partial_trace(&rho, Side::A, 2, 2),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn spectral_triple_examples() {
        let zero = PureState::new(DVector::from_vec(vec![Complex64::from(1.0), Complex64::from(0.0)])).unwrap();
        let prod = DensityOperator::from_pure(&zero.tensor(&zero));
        let t = spectral_triple(&prod, 2, 2).unwrap();
        assert!(close(&t.flatten(), &[1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0], 1e-12));

        let bell = DensityOperator::from_pure(&PureState::maximally_entangled(2));
        let t = spectral_triple(&bell, 2, 2).unwrap();
        assert!(close(&t.flatten(), &[0.5, 0.5, 0.5, 0.5, 1.0, 0.0, 0.0, 0.0], 1e-12));

        let t = spectral_triple(&DensityOperator::maximally_mixed(6), 2, 3).unwrap();
        assert!(close(t.a.probs(), &[0.5; 2], 1e-12));
        assert!(close(t.b.probs(), &[1.0 / 3.0; 3], 1e-12));
        assert!(close(t.ab.probs(), &[1.0 / 6.0; 6], 1e-12));
    }

    #[test]
    fn purification_examples() {
        let trivial = purify(&DensityOperator::maximally_mixed(1));
        assert_eq!(trivial.dim(), 1);
        assert!((trivial.amplitudes()[0].norm() - 1.0).abs() < 1e-15);

        let half = purify(&DensityOperator::maximally_mixed(2));
        let t = spectral_triple(&DensityOperator::from_pure(&half), 2, 2).unwrap();
        assert!(close(&t.flatten(), &[0.5, 0.5, 0.5, 0.5, 1.0, 0.0, 0.0, 0.0], 1e-12));

        let rho = random_density(3, 8);
        let psi = DensityOperator::from_pure(&purify(&rho));
        let first = partial_trace(&psi, Side::A, 3, 3).unwrap();
        assert!((first.matrix() - rho.matrix()).norm() < 1e-10);
        let env = partial_trace(&psi, Side::B, 3, 3).unwrap().spectrum().unwrap();
        assert!(close(env.probs(), rho.spectrum().unwrap().probs(), 1e-10));
    }

    #[test]
    fn kl_examples() {
        let p = [0.3, 0.7];
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        assert!((kl_divergence(&[1.0, 0.0], &[0.5, 0.5]).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]).unwrap(), f64::INFINITY);
        assert!(kl_divergence(&[1.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn pinsker_examples() {
        assert!(check_pinsker(&[0.2, 0.8], &[0.2, 0.8]).unwrap());
        assert!(check_pinsker(&[1.0, 0.0], &[0.5, 0.5]).unwrap());
        assert!(check_pinsker(&[0.5, 0.5], &[1.0, 0.0]).unwrap());
    }

    #[test]
    fn estimation_bound_examples() {
        // λ̄ = r: the KL factor is 1
        let r = spec(&[0.75, 0.25]);
        assert!((estimation_bound(&p("6,2"), &r, 8).unwrap() - 9.0).abs() < 1e-12);
        let r3 = spec(&[0.5, 0.25, 0.25]);
        assert!((estimation_bound(&p("2,1,1"), &r3, 4).unwrap() - 125.0).abs() < 1e-9);

        let r = spec(&[0.7, 0.3]);
        let expected = 5.0 * (-4.0 * (1.0f64 / 0.7).ln()).exp();
        assert!((estimation_bound(&p("4"), &r, 4).unwrap() - expected).abs() < 1e-12);

        // the spectrum is sorted, so an infinite divergence needs a zero tail
        let r = spec(&[1.0, 0.0]);
        assert_eq!(estimation_bound(&p("1,1"), &r, 2).unwrap(), 0.0);
        assert!(estimation_bound(&p("2"), &r, 3).is_err());
    }

    #[test]
    fn convergence_pure_state() {
        let table = estimation_convergence(&spec(&[1.0, 0.0]), &[1, 2, 5, 9]).unwrap();
        for row in &table.rows {
            assert_eq!(row.argmax, Partition::single_row(row.k));
            assert_eq!(row.distance, 0.0);
        }
        assert_eq!(table.fitted_c, 0.0);
    }

    #[test]
    fn convergence_maximally_mixed_qubit() {
        // For r = (1/2, 1/2): Tr P_λ ρ^{⊗k} = dim V_λ (λ1 − λ2 + 1) / 2^k.
        // Brute-force that closed form over all two-row shapes.
        let r = spec(&[0.5, 0.5]);
        let ks: Vec<u32> = (2..=16).step_by(2).collect();
        let table = estimation_convergence(&r, &ks).unwrap();
        for row in &table.rows {
            let k = row.k;
            let mut best = (0u32, 0.0f64);
            for l2 in 0..=k / 2 {
                let l1 = k - l2;
                let shape = Partition::new(vec![l1, l2]).unwrap();
                let dim: f64 = num_traits::ToPrimitive::to_f64(&crate::symfunc::dim_sk(&shape)).unwrap();
                let prob = dim * f64::from(l1 - l2 + 1) / 2f64.powi(k as i32);
                if prob > best.1 {
                    best = (l2, prob);
                }
            }
            assert_eq!(row.argmax.row(1), best.0, "k={k}");
            assert!((row.probability - best.1).abs() < 1e-12);
            assert!(row.distance <= 2.0 / (k as f64).sqrt());
        }
    }

    #[test]
    fn witness_examples() {
        let opts = WitnessSearch {
            seed: 4,
            ..WitnessSearch::default()
        };
        let product = SpectralTriple::from_shapes(&p("1"), &p("1"), &p("1"), 2, 2).unwrap();
        let w = find_witness_state(&product, 2, 2, &opts).unwrap();
        assert!(w.error <= 1e-8, "error {}", w.error);
        let actual = spectral_triple(&w.rho, 2, 2).unwrap();
        assert!(actual.l1_distance(&product) <= 1e-8);

        let bell = SpectralTriple::from_shapes(&p("1,1"), &p("1,1"), &p("2"), 2, 2).unwrap();
        assert!(close(&bell.flatten(), &[0.5, 0.5, 0.5, 0.5, 1.0, 0.0, 0.0, 0.0], 0.0));
        let w = find_witness_state(&bell, 2, 2, &opts).unwrap();
        assert!(w.error <= 1e-6, "error {}", w.error);
    }
}
