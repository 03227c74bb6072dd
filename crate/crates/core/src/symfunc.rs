//! Symmetric-group characters, representation dimensions, Schur polynomials
//! and the outcome distribution of a Schur–Weyl measurement on `ρ^{⊗k}`.
//!
//! Characters are exact ([`BigInt`]) and computed with the
//! Murnaghan–Nakayama rule on beta-sets, memoized per
//! `(remaining shape, remaining cycle type)`. Schur polynomials are evaluated
//! by branching over variables (sum over horizontal strips), so every
//! intermediate term is nonnegative for nonnegative arguments.

use std::collections::HashMap;
use std::ops::{Add, Mul};
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, Partition};

/// Allowed deviation of `Σ probs` from 1 for a [`Spectrum`].
pub const SPECTRUM_SUM_TOL: f64 = 1e-12;

/// Tolerance for `Σ_λ dim V_λ s_λ(r) = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-10;

pub(crate) fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// A conjugacy class of `S_k`, labelled by its cycle lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleType {
    cycles: Partition,
    class_size: BigUint,
}

impl CycleType {
    pub fn new(cycles: Partition) -> Self {
        let k = cycles.size();
        let mut denom = BigUint::one();
        for (j, &m) in cycles.multiplicities().iter().enumerate().skip(1) {
            denom *= BigUint::from(j as u32).pow(m) * factorial(m);
        }
        let class_size = factorial(k) / denom;
        Self { cycles, class_size }
    }

    pub fn cycles(&self) -> &Partition {
        &self.cycles
    }

    /// Number of permutations with this cycle type.
    pub fn class_size(&self) -> &BigUint {
        &self.class_size
    }

    /// The identity class `(1^k)`.
    pub fn identity(k: u32) -> Self {
        Self::new(Partition::single_column(k))
    }
}

/// All conjugacy classes of `S_k`.
pub fn conjugacy_classes(k: u32) -> Vec<CycleType> {
    enumerate_partitions(k, k as usize)
        .into_iter()
        .map(CycleType::new)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterValue {
    pub lambda: Partition,
    pub cycle_type: CycleType,
    pub value: BigInt,
}

/// Memo table for Murnaghan–Nakayama subproblems.
///
/// Readers take a shared lock. Inserts are idempotent, so two threads racing
/// on the same key write the same value; an entry is only visible once the
/// write lock is released.
#[derive(Debug, Default)]
pub struct CharacterCache {
    memo: RwLock<HashMap<(Partition, Partition), BigInt>>,
}

impl CharacterCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide cache shared by the free functions of this module.
    pub fn global() -> &'static CharacterCache {
        static CACHE: OnceLock<CharacterCache> = OnceLock::new();
        CACHE.get_or_init(CharacterCache::new)
    }

    pub fn len(&self) -> usize {
        self.memo.read().expect("character cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `χ_λ` evaluated on the class with cycle lengths `cycle_type`.
    pub fn character(&self, lambda: &Partition, cycle_type: &Partition) -> Result<BigInt> {
        if lambda.size() != cycle_type.size() {
            return Err(Error::SizeMismatch(format!(
                "shape {lambda} has {} boxes but cycle type {cycle_type} has {}",
                lambda.size(),
                cycle_type.size()
            )));
        }
        Ok(self.mn(lambda, cycle_type))
    }

    fn mn(&self, shape: &Partition, cycles: &Partition) -> BigInt {
        if cycles.is_empty() {
            return BigInt::one();
        }
        let key = (shape.clone(), cycles.clone());
        if let Some(v) = self.memo.read().expect("character cache poisoned").get(&key) {
            return v.clone();
        }
        let strip = cycles.row(0);
        let rest = Partition::new(cycles.rows()[1..].to_vec()).expect("suffix of a partition");
        let mut total = BigInt::zero();
        for (smaller, negative) in remove_rim_hooks(shape, strip) {
            let v = self.mn(&smaller, &rest);
            if negative {
                total -= v;
            } else {
                total += v;
            }
        }
        self.memo
            .write()
            .expect("character cache poisoned")
            .insert(key, total.clone());
        total
    }

    /// Snapshot of every memoized top-level and intermediate value.
    pub fn entries(&self) -> Vec<CharacterValue> {
        let memo = self.memo.read().expect("character cache poisoned");
        let mut out: Vec<CharacterValue> = memo
            .iter()
            .map(|((lambda, cycles), value)| CharacterValue {
                lambda: lambda.clone(),
                cycle_type: CycleType::new(cycles.clone()),
                value: value.clone(),
            })
            .collect();
        out.sort_by(|a, b| {
            (&a.lambda, a.cycle_type.cycles()).cmp(&(&b.lambda, b.cycle_type.cycles()))
        });
        out
    }

    /// Seeds the memo with externally supplied values.
    pub fn insert(&self, lambda: Partition, cycle_type: Partition, value: BigInt) {
        self.memo
            .write()
            .expect("character cache poisoned")
            .insert((lambda, cycle_type), value);
    }
}

/// Every shape obtained from `shape` by removing a rim hook of `len` boxes,
/// with `true` marking odd leg length (negative sign).
fn remove_rim_hooks(shape: &Partition, len: u32) -> Vec<(Partition, bool)> {
    let rows = shape.len();
    let beta: Vec<i64> = shape
        .rows()
        .iter()
        .enumerate()
        .map(|(i, &r)| i64::from(r) + (rows - 1 - i) as i64)
        .collect();
    let len = i64::from(len);
    let mut out = Vec::new();
    for (i, &b) in beta.iter().enumerate() {
        let target = b - len;
        if target < 0 || beta.contains(&target) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut moved = beta.clone();
        moved[i] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let new_rows = moved
            .iter()
            .enumerate()
            .map(|(j, &x)| (x - (rows - 1 - j) as i64) as u32)
            .collect();
        let smaller = Partition::new(new_rows).expect("rim hook removal keeps a partition");
        out.push((smaller, between % 2 == 1));
    }
    out
}

/// `χ_λ(class)` using the global cache.
pub fn character(lambda: &Partition, cycle_type: &Partition) -> Result<BigInt> {
    CharacterCache::global().character(lambda, cycle_type)
}

/// `dim V_λ = k! / ∏ hooks`.
pub fn dim_sk(lambda: &Partition) -> BigUint {
    let hooks = lambda
        .hook_lengths()
        .into_iter()
        .fold(BigUint::one(), |acc, h| acc * h);
    factorial(lambda.size()) / hooks
}

/// Dimension of the `GL(d)` irrep with highest weight `λ`; zero when `λ`
/// has more than `d` rows.
pub fn dim_gl(lambda: &Partition, d: u32) -> BigUint {
    if lambda.len() > d as usize {
        return BigUint::zero();
    }
    let hooks = lambda.hook_lengths();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    let mut h = hooks.into_iter();
    for (i, &r) in lambda.rows().iter().enumerate() {
        for j in 0..r {
            num *= d + j - i as u32;
            den *= h.next().expect("one hook per box");
        }
    }
    num / den
}

/// A probability vector sorted in weakly decreasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    probs: Vec<f64>,
}

impl Spectrum {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(probs, SPECTRUM_SUM_TOL)
    }

    pub fn with_tolerance(probs: Vec<f64>, tol: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidSpectrum("no entries".into()));
        }
        if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidSpectrum(format!("entry {bad} is not a nonnegative number")));
        }
        if probs.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpectrum(format!("{probs:?} is not weakly decreasing")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::InvalidSpectrum(format!("entries sum to {sum}")));
        }
        Ok(Self { probs })
    }

    /// Sorts, clamps entries below `clamp` to zero and renormalizes.
    pub fn from_eigenvalues(mut values: Vec<f64>, clamp: f64) -> Result<Self> {
        for v in values.iter_mut() {
            if *v < clamp {
                *v = 0.0;
            }
        }
        let sum: f64 = values.iter().sum();
        if sum.is_nan() || sum <= 0.0 {
            return Err(Error::InvalidSpectrum(format!("eigenvalues {values:?} have no positive mass")));
        }
        values.iter_mut().for_each(|v| *v /= sum);
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { probs: values })
    }

    /// Uniform distribution on `d` outcomes.
    pub fn uniform(d: usize) -> Self {
        Self {
            probs: vec![1.0 / d as f64; d],
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

fn schur_eval<T>(lambda: &Partition, x: &[T]) -> T
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
{
    fn pow<T: Clone + One + Mul<Output = T>>(base: &T, e: u32) -> T {
        (0..e).fold(T::one(), |acc, _| acc * base.clone())
    }

    fn rec<T>(shape: &Partition, n: usize, x: &[T], memo: &mut HashMap<(Partition, usize), T>) -> T
    where
        T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
    {
        if shape.len() > n {
            return T::zero();
        }
        if shape.is_empty() {
            return T::one();
        }
        if n == 1 {
            return pow(&x[0], shape.size());
        }
        let key = (shape.clone(), n);
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        // μ interlaces λ: λ_{i+1} ≤ μ_i ≤ λ_i, with at most n-1 rows
        let upper: Vec<u32> = (0..n - 1).map(|i| shape.row(i)).collect();
        let lower: Vec<u32> = (0..n - 1).map(|i| shape.row(i + 1)).collect();
        let mut mu = lower.clone();
        let mut total = T::zero();
        loop {
            let inner = Partition::new(mu.clone()).expect("interlacing rows decrease");
            let strip = shape.size() - inner.size();
            let term = pow(&x[n - 1], strip) * rec(&inner, n - 1, x, memo);
            total = total + term;
            let mut i = 0;
            loop {
                if i == mu.len() {
                    memo.insert(key, total.clone());
                    return total;
                }
                if mu[i] < upper[i] {
                    mu[i] += 1;
                    break;
                }
                mu[i] = lower[i];
                i += 1;
            }
        }
    }

    rec(lambda, x.len(), x, &mut HashMap::new())
}

/// `s_λ(x)` for nonnegative `x`.
pub fn schur_poly(lambda: &Partition, x: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::DimensionMismatch("Schur polynomial needs at least one variable".into()));
    }
    if let Some(&neg) = x.iter().find(|v| **v < 0.0) {
        return Err(Error::NegativeEntry(neg));
    }
    Ok(schur_eval(lambda, x))
}

/// Exact `s_λ(x)` for nonnegative rational `x`.
pub fn schur_poly_exact(lambda: &Partition, x: &[BigRational]) -> Result<BigRational> {
    if x.is_empty() {
        return Err(Error::DimensionMismatch("Schur polynomial needs at least one variable".into()));
    }
    if let Some(neg) = x.iter().find(|v| v.is_negative()) {
        return Err(Error::NegativeEntry(neg.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(schur_eval(lambda, x))
}

fn check_size(lambda: &Partition, k: u32) -> Result<()> {
    if lambda.size() != k {
        return Err(Error::SizeMismatch(format!(
            "shape {lambda} has {} boxes, expected {k}",
            lambda.size()
        )));
    }
    Ok(())
}

/// Probability `Tr P_λ ρ^{⊗k} = dim V_λ · s_λ(r)` of observing `λ` in the
/// Schur–Weyl measurement of `k` copies of a state with spectrum `r`.
pub fn schur_weyl_prob(lambda: &Partition, r: &Spectrum, k: u32) -> Result<f64> {
    check_size(lambda, k)?;
    if lambda.len() > r.len() {
        return Ok(0.0);
    }
    let dim = dim_sk(lambda).to_f64().unwrap_or(f64::INFINITY);
    Ok(dim * schur_eval(lambda, r.probs()))
}

/// Exact rational version of [`schur_weyl_prob`].
pub fn schur_weyl_prob_exact(lambda: &Partition, r: &[BigRational], k: u32) -> Result<BigRational> {
    check_size(lambda, k)?;
    let s = schur_poly_exact(lambda, r)?;
    Ok(BigRational::from_integer(BigInt::from(dim_sk(lambda))) * s)
}
