//! Kronecker coefficients and the semigroup of triples on which they are
//! nonzero.
//!
//! `g_{μνλ}` is computed as the class-weighted character average
//! `(1/k!) Σ_C |C| χ_μ(C) χ_ν(C) χ_λ(C)`, which is the dimension of the
//! `S_k`-invariant subspace of `V_μ ⊗ V_ν ⊗ V_λ`.

use std::cmp::Reverse;
use std::collections::{HashMap, HashSet};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, Partition};
use crate::symfunc::{conjugacy_classes, factorial, CharacterCache};

/// Row bounds `(m, n, mn_bound)` on `(μ, ν, λ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 3]", into = "[usize; 3]")]
pub struct RowBounds {
    pub m: usize,
    pub n: usize,
    pub mn_bound: usize,
}

impl RowBounds {
    /// Bounds `(m, n, m·n)` for a bipartite system `C^m ⊗ C^n`.
    pub fn bipartite(m: usize, n: usize) -> Self {
        Self { m, n, mn_bound: m * n }
    }

    pub fn new(m: usize, n: usize, mn_bound: usize) -> Self {
        Self { m, n, mn_bound }
    }

    pub fn admits(&self, mu: &Partition, nu: &Partition, lambda: &Partition) -> bool {
        mu.len() <= self.m && nu.len() <= self.n && lambda.len() <= self.mn_bound
    }
}

impl From<[usize; 3]> for RowBounds {
    fn from(v: [usize; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<RowBounds> for [usize; 3] {
    fn from(b: RowBounds) -> Self {
        [b.m, b.n, b.mn_bound]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KronTriple {
    pub mu: Partition,
    pub nu: Partition,
    pub lambda: Partition,
    pub g: u64,
}

impl KronTriple {
    /// Computes `g` for the given shapes.
    pub fn compute(mu: Partition, nu: Partition, lambda: Partition) -> Result<Self> {
        let g = kronecker_coefficient(&mu, &nu, &lambda)?;
        Ok(Self { mu, nu, lambda, g })
    }

    pub fn size(&self) -> u32 {
        self.mu.size()
    }

    pub fn shapes(&self) -> (&Partition, &Partition, &Partition) {
        (&self.mu, &self.nu, &self.lambda)
    }

    fn order_key(&self) -> (u32, Reverse<&Partition>, Reverse<&Partition>, Reverse<&Partition>) {
        (self.size(), Reverse(&self.mu), Reverse(&self.nu), Reverse(&self.lambda))
    }
}

impl std::fmt::Display for KronTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(({}),({}),({})) g={}", self.mu, self.nu, self.lambda, self.g)
    }
}

/// Memo of computed coefficients, keyed by the sorted shape triple (`g` is
/// symmetric in its arguments).
#[derive(Debug, Default)]
pub struct KronCache {
    memo: RwLock<HashMap<[Partition; 3], u64>>,
}

impl KronCache {
    pub fn global() -> &'static KronCache {
        static CACHE: OnceLock<KronCache> = OnceLock::new();
        CACHE.get_or_init(KronCache::default)
    }

    fn key(mu: &Partition, nu: &Partition, lambda: &Partition) -> [Partition; 3] {
        let mut key = [mu.clone(), nu.clone(), lambda.clone()];
        key.sort();
        key
    }

    pub fn get(&self, mu: &Partition, nu: &Partition, lambda: &Partition) -> Option<u64> {
        self.memo
            .read()
            .expect("kronecker cache poisoned")
            .get(&Self::key(mu, nu, lambda))
            .copied()
    }

    pub fn insert(&self, mu: &Partition, nu: &Partition, lambda: &Partition, g: u64) {
        self.memo
            .write()
            .expect("kronecker cache poisoned")
            .insert(Self::key(mu, nu, lambda), g);
    }

    pub fn len(&self) -> usize {
        self.memo.read().expect("kronecker cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All cached coefficients in a deterministic order.
    pub fn entries(&self) -> Vec<KronTriple> {
        let memo = self.memo.read().expect("kronecker cache poisoned");
        let mut out: Vec<KronTriple> = memo
            .iter()
            .map(|([a, b, c], &g)| KronTriple {
                mu: a.clone(),
                nu: b.clone(),
                lambda: c.clone(),
                g,
            })
            .collect();
        out.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
        out
    }
}

/// `g_{μνλ}` from the character average, bypassing every cache except the
/// given character memo.
pub fn kronecker_coefficient_with(
    chars: &CharacterCache,
    mu: &Partition,
    nu: &Partition,
    lambda: &Partition,
) -> Result<u64> {
    let k = mu.size();
    if nu.size() != k || lambda.size() != k {
        return Err(Error::SizeMismatch(format!(
            "shapes ({mu}), ({nu}), ({lambda}) have {k}, {}, {} boxes",
            nu.size(),
            lambda.size()
        )));
    }
    let mut total = BigInt::zero();
    for class in conjugacy_classes(k) {
        let c = class.cycles();
        let prod = chars.character(mu, c)? * chars.character(nu, c)? * chars.character(lambda, c)?;
        if !prod.is_zero() {
            total += BigInt::from(class.class_size().clone()) * prod;
        }
    }
    let (g, rem) = total.div_rem(&BigInt::from(factorial(k)));
    if !rem.is_zero() {
        return Err(Error::Consistency(format!(
            "character sum for ({mu}),({nu}),({lambda}) is not divisible by {k}!"
        )));
    }
    g.to_u64().ok_or_else(|| {
        Error::Consistency(format!("coefficient {g} for ({mu}),({nu}),({lambda}) is negative or too large"))
    })
}

/// `g_{μνλ}`, memoized in the global caches.
pub fn kronecker_coefficient(mu: &Partition, nu: &Partition, lambda: &Partition) -> Result<u64> {
    let cache = KronCache::global();
    if let Some(g) = cache.get(mu, nu, lambda) {
        return Ok(g);
    }
    let g = kronecker_coefficient_with(CharacterCache::global(), mu, nu, lambda)?;
    cache.insert(mu, nu, lambda, g);
    Ok(g)
}

/// Nonzero triples within row bounds, up to a box count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KronSet {
    pub bounds: RowBounds,
    pub max_boxes: u32,
    pub triples: Vec<KronTriple>,
}

impl KronSet {
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Puts the triples in canonical order: box count ascending, then each
    /// shape in lexicographically decreasing order.
    pub fn sort(&mut self) {
        self.triples.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("KronSet serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Consistency(format!("bad KronSet JSON: {e}")))
    }
}

/// Every nonzero triple with exactly `k` boxes inside `bounds`. `k = 0`
/// yields an empty set.
pub fn enumerate_kron(k: u32, bounds: RowBounds) -> Result<KronSet> {
    let mut set = KronSet {
        bounds,
        max_boxes: k,
        triples: Vec::new(),
    };
    if k == 0 {
        return Ok(set);
    }
    let mus = enumerate_partitions(k, bounds.m);
    let nus = enumerate_partitions(k, bounds.n);
    let lambdas = enumerate_partitions(k, bounds.mn_bound);
    let pairs: Vec<(&Partition, &Partition)> = mus
        .iter()
        .flat_map(|mu| nus.iter().map(move |nu| (mu, nu)))
        .collect();
    let found: Vec<Vec<KronTriple>> = pairs
        .par_iter()
        .map(|(mu, nu)| {
            let mut out = Vec::new();
            for lambda in &lambdas {
                let g = kronecker_coefficient(mu, nu, lambda)?;
                if g > 0 {
                    out.push(KronTriple {
                        mu: (*mu).clone(),
                        nu: (*nu).clone(),
                        lambda: lambda.clone(),
                        g,
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    set.triples = found.into_iter().flatten().collect();
    set.sort();
    Ok(set)
}

/// Union of [`enumerate_kron`] over box counts `1..=max_boxes`.
pub fn enumerate_kron_up_to(max_boxes: u32, bounds: RowBounds) -> Result<KronSet> {
    let mut set = KronSet {
        bounds,
        max_boxes,
        triples: Vec::new(),
    };
    for k in 1..=max_boxes {
        set.triples.extend(enumerate_kron(k, bounds)?.triples);
    }
    set.sort();
    Ok(set)
}

fn require_nonzero(t: &KronTriple) -> Result<()> {
    if t.g == 0 {
        return Err(Error::Precondition(format!("triple {t} has zero coefficient")));
    }
    Ok(())
}

/// Row-wise sum of two nonzero triples. A zero coefficient on the sum
/// contradicts the semigroup property and is returned as
/// [`Error::Falsification`].
pub fn check_semigroup(t1: &KronTriple, t2: &KronTriple) -> Result<KronTriple> {
    require_nonzero(t1)?;
    require_nonzero(t2)?;
    let sum = KronTriple::compute(
        t1.mu.add_rowwise(&t2.mu),
        t1.nu.add_rowwise(&t2.nu),
        t1.lambda.add_rowwise(&t2.lambda),
    )?;
    if sum.g == 0 {
        return Err(Error::Falsification(format!(
            "semigroup: {t1} + {t2} = {sum}"
        )));
    }
    Ok(sum)
}

/// Whether `g_{Nμ,Nν,Nλ} ≠ 0`.
pub fn check_stability(t: &KronTriple, factor: u32) -> Result<bool> {
    require_nonzero(t)?;
    if factor == 0 {
        return Err(Error::Precondition("scale factor must be positive".into()));
    }
    let g = kronecker_coefficient(&t.mu.scale(factor), &t.nu.scale(factor), &t.lambda.scale(factor))?;
    Ok(g > 0)
}

fn subtract(a: &Partition, b: &Partition) -> Option<Partition> {
    if !b.is_contained_in(a) {
        return None;
    }
    let rows = (0..a.len()).map(|i| a.row(i) - b.row(i)).collect();
    Partition::new(rows).ok()
}

/// Members of `set` that are not the row-wise sum of two members of `set`.
///
/// This is a bounded-degree candidate list: a triple above `set.max_boxes`
/// may still be needed to generate the full semigroup.
pub fn extract_generators(set: &KronSet) -> Vec<KronTriple> {
    let members: HashSet<(&Partition, &Partition, &Partition)> =
        set.triples.iter().map(KronTriple::shapes).collect();
    let mut by_size: HashMap<u32, Vec<&KronTriple>> = HashMap::new();
    for t in &set.triples {
        by_size.entry(t.size()).or_default().push(t);
    }
    let decomposable = |t: &KronTriple| {
        let k = t.size();
        (1..=k / 2).any(|j| {
            by_size.get(&j).is_some_and(|smaller| {
                smaller.iter().any(|s| {
                    match (
                        subtract(&t.mu, &s.mu),
                        subtract(&t.nu, &s.nu),
                        subtract(&t.lambda, &s.lambda),
                    ) {
                        (Some(a), Some(b), Some(c)) => members.contains(&(&a, &b, &c)),
                        _ => false,
                    }
                })
            })
        })
    };
    set.triples
        .iter()
        .filter(|t| !decomposable(t))
        .cloned()
        .collect()
}

/// Shannon entropies (natural log) of the normalized shapes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyReport {
    pub h_mu: f64,
    pub h_nu: f64,
    pub h_lambda: f64,
    /// `H(λ̄) ≤ H(μ̄) + H(ν̄)` and `|H(μ̄) − H(ν̄)| ≤ H(λ̄)`.
    pub holds: bool,
}

pub(crate) fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

const ENTROPY_SLACK: f64 = 1e-12;

pub fn entropy_check(t: &KronTriple) -> Result<EntropyReport> {
    require_nonzero(t)?;
    let h = |p: &Partition| -> Result<f64> { Ok(shannon_entropy(&p.normalize()?.to_f64())) };
    let (h_mu, h_nu, h_lambda) = (h(&t.mu)?, h(&t.nu)?, h(&t.lambda)?);
    let holds = h_lambda <= h_mu + h_nu + ENTROPY_SLACK && (h_mu - h_nu).abs() <= h_lambda + ENTROPY_SLACK;
    Ok(EntropyReport {
        h_mu,
        h_nu,
        h_lambda,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn triple(a: &str, b: &str, c: &str) -> KronTriple {
        KronTriple::compute(p(a), p(b), p(c)).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(kronecker_coefficient(&p("2"), &p("2"), &p("2")).unwrap(), 1);
        assert_eq!(kronecker_coefficient(&p("1,1"), &p("1,1"), &p("1,1")).unwrap(), 0);
        // (1/6)(1·8 + 3·0 + 2·(-1)) = 1
        assert_eq!(kronecker_coefficient(&p("2,1"), &p("2,1"), &p("2,1")).unwrap(), 1);
        assert!(matches!(
            kronecker_coefficient(&p("2"), &p("2,1"), &p("2,1")),
            Err(Error::SizeMismatch(_))
        ));
    }

    #[test]
    fn enumeration_examples() {
        let b = RowBounds::bipartite(2, 2);
        let one = enumerate_kron(1, b).unwrap();
        assert_eq!(one.triples, vec![triple("1", "1", "1")]);
        let two = enumerate_kron(2, b).unwrap();
        assert_eq!(
            two.triples,
            vec![
                triple("2", "2", "2"),
                triple("2", "1,1", "1,1"),
                triple("1,1", "2", "1,1"),
                triple("1,1", "1,1", "2"),
            ]
        );
        assert!(enumerate_kron(0, b).unwrap().is_empty());
    }

    #[test]
    fn semigroup_examples() {
        let t = triple("2,1", "2,1", "2,1");
        let sum = check_semigroup(&t, &t).unwrap();
        assert_eq!(sum.shapes(), (&p("4,2"), &p("4,2"), &p("4,2")));
        assert!(sum.g > 0);

        let one = triple("1", "1", "1");
        assert_eq!(check_semigroup(&one, &one).unwrap(), triple("2", "2", "2"));
        assert_eq!(triple("2", "2", "2").g, 1);

        let s = check_semigroup(&triple("2", "1,1", "1,1"), &triple("1,1", "2", "1,1")).unwrap();
        assert_eq!(s.shapes(), (&p("3,1"), &p("3,1"), &p("2,2")));
        assert!(s.g > 0);

        let zero = triple("1,1", "1,1", "1,1");
        assert!(matches!(check_semigroup(&zero, &one), Err(Error::Precondition(_))));
    }

    #[test]
    fn stability_examples() {
        assert!(check_stability(&triple("2,1", "2,1", "2,1"), 2).unwrap());
        assert!(check_stability(&triple("3,1", "2,2", "2,1,1"), 1).unwrap());
        assert!(check_stability(&triple("1,1", "1,1", "2"), 3).unwrap());
    }

    #[test]
    fn generator_examples() {
        let b = RowBounds::bipartite(2, 2);
        let k1 = enumerate_kron_up_to(1, b).unwrap();
        assert_eq!(extract_generators(&k1), vec![triple("1", "1", "1")]);
        let k2 = enumerate_kron_up_to(2, b).unwrap();
        let gens = extract_generators(&k2);
        assert!(!gens.contains(&triple("2", "2", "2")));
        assert!(gens.contains(&triple("1,1", "1,1", "2")));
        assert!(gens.contains(&triple("2", "1,1", "1,1")));
        assert!(gens.contains(&triple("1,1", "2", "1,1")));
        assert_eq!(gens.len(), 4);
    }

    #[test]
    fn entropy_examples() {
        let r = entropy_check(&triple("4", "4", "4")).unwrap();
        assert_eq!((r.h_mu, r.h_nu, r.h_lambda, r.holds), (0.0, 0.0, 0.0, true));
        let r = entropy_check(&triple("1,1", "1,1", "2")).unwrap();
        let ln2 = std::f64::consts::LN_2;
        assert!((r.h_mu - ln2).abs() < 1e-15 && (r.h_nu - ln2).abs() < 1e-15);
        assert_eq!(r.h_lambda, 0.0);
        assert!(r.holds);
        let r = entropy_check(&triple("2,1", "2,1", "2,1")).unwrap();
        let h = -(2.0f64 / 3.0) * (2.0f64 / 3.0).ln() - (1.0f64 / 3.0) * (1.0f64 / 3.0).ln();
        assert!((r.h_mu - h).abs() < 1e-14 && (r.h_lambda - h).abs() < 1e-14);
        assert!(r.holds);
    }

    #[test]
    fn json_schema() {
        let set = enumerate_kron(1, RowBounds::bipartite(2, 2)).unwrap();
        assert_eq!(
            set.to_json(),
            r#"{"bounds":[2,2,4],"max_boxes":1,"triples":[{"mu":"1","nu":"1","lambda":"1","g":1}]}"#
        );
        assert_eq!(KronSet::from_json(&set.to_json()).unwrap(), set);
    }

    #[test]
    fn cache_is_symmetric() {
        let cache = KronCache::default();
        cache.insert(&p("2,1"), &p("3"), &p("2,1"), 1);
        assert_eq!(cache.get(&p("3"), &p("2,1"), &p("2,1")), Some(1));
        assert_eq!(cache.entries().len(), 1);
    }
}
