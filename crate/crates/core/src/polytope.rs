//! Convex hull of normalized nonzero Kronecker triples.
//!
//! The hull is kept as a vertex list of exact rational points, each the
//! flattening `r^A ⧺ r^B ⧺ r^{AB}` of a normalized triple. Built from all
//! triples up to `K` boxes it is an inner approximation of the set of
//! admissible spectral triples, growing towards it as `K` increases.
//! Membership, L1 distance and Carathéodory decompositions are linear
//! programs over the vertex list: exact for rational queries, `f64` for
//! sampled spectra.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kronecker::{kronecker_coefficient, KronSet, KronTriple, RowBounds};
use crate::lp::{self, LpOutcome, LpScalar};
use crate::partitions::Partition;
use crate::spectra::SpectralTriple;

/// Feasibility slack for floating-point membership queries.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// An exact rational spectral triple, flattened as `r^A ⧺ r^B ⧺ r^{AB}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalTriple {
    pub m: usize,
    pub n: usize,
    pub coords: Vec<BigRational>,
}

impl RationalTriple {
    pub fn new(a: Vec<BigRational>, b: Vec<BigRational>, ab: Vec<BigRational>) -> Result<Self> {
        let (m, n) = (a.len(), b.len());
        if ab.len() != m * n {
            return Err(Error::DimensionMismatch(format!(
                "joint block has {} entries, expected {}",
                ab.len(),
                m * n
            )));
        }
        for block in [&a, &b, &ab] {
            if block.iter().any(Signed::is_negative) || block.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidSpectrum("block is not weakly decreasing and nonnegative".into()));
            }
            if block.iter().fold(BigRational::zero(), |s, x| s + x) != BigRational::one() {
                return Err(Error::InvalidSpectrum("block does not sum to 1".into()));
            }
        }
        Ok(Self {
            m,
            n,
            coords: [a, b, ab].concat(),
        })
    }

    /// `(μ̄, ν̄, λ̄)` padded to `(m, n, m·n)`.
    pub fn from_shapes(mu: &Partition, nu: &Partition, lambda: &Partition, m: usize, n: usize) -> Result<Self> {
        if mu.len() > m || nu.len() > n || lambda.len() > m * n {
            return Err(Error::DimensionMismatch(format!(
                "shapes ({mu}),({nu}),({lambda}) exceed rows ({m},{n},{})",
                m * n
            )));
        }
        Self::new(
            mu.normalize()?.padded(m),
            nu.normalize()?.padded(n),
            lambda.normalize()?.padded(m * n),
        )
    }

    pub fn from_triple(t: &KronTriple, m: usize, n: usize) -> Result<Self> {
        Self::from_shapes(&t.mu, &t.nu, &t.lambda, m, n)
    }

    fn from_coords(m: usize, n: usize, coords: Vec<BigRational>) -> Self {
        Self { m, n, coords }
    }

    pub fn blocks(&self) -> (&[BigRational], &[BigRational], &[BigRational]) {
        let (a, rest) = self.coords.split_at(self.m);
        let (b, ab) = rest.split_at(self.n);
        (a, b, ab)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// `"p/q"` with the denominator always present.
pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidSpectrum(format!("bad rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeV {
    bounds: RowBounds,
    source_max_boxes: u32,
    vertices: Vec<Vec<BigRational>>,
    float_vertices: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct HullJson {
    bounds: RowBounds,
    max_boxes: u32,
    ambient_dim: usize,
    vertices: Vec<Vec<String>>,
}

fn to_floats(points: &[Vec<BigRational>]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| p.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
        .collect()
}

/// Whether `p` is a convex combination of `points` (exact).
fn in_hull_exact(points: &[&Vec<BigRational>], p: &[BigRational]) -> bool {
    if points.is_empty() {
        return false;
    }
    let (a, b) = hull_system(points, p);
    let c = vec![BigRational::zero(); points.len()];
    matches!(lp::solve(&a, &b, &c), LpOutcome::Optimal { .. })
}

/// Rows `Σ x_i v_i = p` and `Σ x_i = 1`.
fn hull_system<T: LpScalar>(points: &[&Vec<T>], p: &[T]) -> (Vec<Vec<T>>, Vec<T>) {
    let dim = p.len();
    let mut a: Vec<Vec<T>> = (0..dim)
        .map(|j| points.iter().map(|v| v[j].clone()).collect())
        .collect();
    a.push(vec![T::one(); points.len()]);
    let mut b = p.to_vec();
    b.push(T::one());
    (a, b)
}

/// Minimum of `‖Σ x_i v_i − p‖₁` over the simplex, with its minimizer.
fn l1_to_hull<T: LpScalar>(points: &[&Vec<T>], p: &[T]) -> Result<(T, Vec<T>)> {
    let (mut a, b) = hull_system(points, p);
    let k = points.len();
    let dim = p.len();
    for (j, row) in a.iter_mut().enumerate() {
        for s in 0..dim {
            row.push(if s == j { T::one() } else { T::zero() });
        }
        for s in 0..dim {
            row.push(if s == j { -T::one() } else { T::zero() });
        }
    }
    let mut c = vec![T::zero(); k];
    c.extend((0..2 * dim).map(|_| T::one()));
    match lp::solve(&a, &b, &c) {
        LpOutcome::Optimal { x, objective } => Ok((objective, x[..k].to_vec())),
        // slack columns make the system feasible and the objective is bounded
        // below, so only a numerical breakdown lands here
        other => Err(Error::Consistency(format!("distance LP failed: {other:?}"))),
    }
}

/// Rank of a set of rational vectors.
fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone() / pivot[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot) {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        r += 1;
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Membership {
    pub inside: bool,
    /// L1 distance to the hull; zero when inside.
    pub distance: f64,
}

/// A point written as a convex combination of at most `t + 1` vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct CaratheodoryCert {
    pub generators: Vec<RationalTriple>,
    pub coefficients: Vec<BigRational>,
}

impl CaratheodoryCert {
    /// `Σ x_i v_i`.
    pub fn reconstruct(&self) -> Vec<BigRational> {
        let dim = self.generators.first().map_or(0, |g| g.coords.len());
        let mut out = vec![BigRational::zero(); dim];
        for (g, x) in self.generators.iter().zip(&self.coefficients) {
            for (o, v) in out.iter_mut().zip(&g.coords) {
                *o += x.clone() * v.clone();
            }
        }
        out
    }
}

impl PolytopeV {
    /// Hull of the normalized triples of `set` with redundant points removed.
    pub fn build(set: &KronSet) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::Precondition("cannot build a hull from an empty set".into()));
        }
        let (m, n) = (set.bounds.m, set.bounds.n);
        if set.bounds.mn_bound > m * n {
            return Err(Error::DimensionMismatch(format!(
                "joint row bound {} exceeds m·n = {}",
                set.bounds.mn_bound,
                m * n
            )));
        }
        let mut seen = HashSet::new();
        let mut points = Vec::new();
        for t in &set.triples {
            let p = RationalTriple::from_triple(t, m, n)?.coords;
            if seen.insert(p.clone()) {
                points.push(p);
            }
        }

        // One pass keeps every point not already in the hull of the kept
        // ones; a second pass drops kept points inside the hull of the rest.
        let mut kept: Vec<Vec<BigRational>> = Vec::new();
        for p in points {
            let refs: Vec<&Vec<BigRational>> = kept.iter().collect();
            if !in_hull_exact(&refs, &p) {
                kept.push(p);
            }
        }
        let mut i = 0;
        while i < kept.len() {
            let others: Vec<&Vec<BigRational>> = kept
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, v)| v)
                .collect();
            if in_hull_exact(&others, &kept[i]) {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(Self::from_vertices(set.bounds, set.max_boxes, kept))
    }

    fn from_vertices(bounds: RowBounds, source_max_boxes: u32, vertices: Vec<Vec<BigRational>>) -> Self {
        let float_vertices = to_floats(&vertices);
        Self {
            bounds,
            source_max_boxes,
            vertices,
            float_vertices,
        }
    }

    pub fn bounds(&self) -> RowBounds {
        self.bounds
    }

    pub fn source_max_boxes(&self) -> u32 {
        self.source_max_boxes
    }

    /// `m + n + mn`.
    pub fn ambient_dim(&self) -> usize {
        let (m, n) = (self.bounds.m, self.bounds.n);
        m + n + m * n
    }

    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    pub fn vertex_triples(&self) -> Vec<RationalTriple> {
        self.vertices
            .iter()
            .map(|v| RationalTriple::from_coords(self.bounds.m, self.bounds.n, v.clone()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Same hull with the vertex list reordered by `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let vertices = perm.iter().map(|&i| self.vertices[i].clone()).collect();
        Self::from_vertices(self.bounds, self.source_max_boxes, vertices)
    }

    /// Affine dimension `t` of the hull.
    pub fn affine_dim(&self) -> usize {
        let Some(first) = self.vertices.first() else {
            return 0;
        };
        let diffs = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(first).map(|(a, b)| a - b).collect())
            .collect();
        rank(diffs)
    }

    fn check_dims(&self, m: usize, n: usize) -> Result<()> {
        if (m, n) != (self.bounds.m, self.bounds.n) {
            return Err(Error::DimensionMismatch(format!(
                "point is on {m}x{n} but the hull is on {}x{}",
                self.bounds.m, self.bounds.n
            )));
        }
        Ok(())
    }

    /// Exact membership and L1 distance for a rational point.
    pub fn membership_exact(&self, p: &RationalTriple) -> Result<(bool, BigRational)> {
        self.check_dims(p.m, p.n)?;
        let refs: Vec<&Vec<BigRational>> = self.vertices.iter().collect();
        if in_hull_exact(&refs, &p.coords) {
            return Ok((true, BigRational::zero()));
        }
        let (dist, _) = l1_to_hull(&refs, &p.coords)?;
        Ok((false, dist))
    }

    /// Floating-point membership: inside when the L1 distance to the hull is
    /// at most [`MEMBERSHIP_TOL`].
    pub fn membership(&self, p: &SpectralTriple) -> Result<Membership> {
        self.membership_with_tolerance(p, MEMBERSHIP_TOL)
    }

    pub fn membership_with_tolerance(&self, p: &SpectralTriple, tol: f64) -> Result<Membership> {
        let (m, n) = p.dims();
        self.check_dims(m, n)?;
        let refs: Vec<&Vec<f64>> = self.float_vertices.iter().collect();
        let (dist, _) = l1_to_hull(&refs, &p.flatten())?;
        let dist = dist.max(0.0);
        if dist <= tol {
            Ok(Membership {
                inside: true,
                distance: 0.0,
            })
        } else {
            Ok(Membership {
                inside: false,
                distance: dist,
            })
        }
    }

    /// Writes `p` as a convex combination of at most `affine_dim + 1`
    /// vertices, verified by exact reconstruction.
    pub fn caratheodory(&self, p: &RationalTriple) -> Result<CaratheodoryCert> {
        self.check_dims(p.m, p.n)?;
        let refs: Vec<&Vec<BigRational>> = self.vertices.iter().collect();
        let (a, b) = hull_system(&refs, &p.coords);
        let c = vec![BigRational::zero(); refs.len()];
        let LpOutcome::Optimal { x, .. } = lp::solve(&a, &b, &c) else {
            return Err(Error::OutsideHull);
        };
        let (generators, coefficients): (Vec<_>, Vec<_>) = x
            .into_iter()
            .enumerate()
            .filter(|(_, xi)| !xi.is_zero())
            .map(|(i, xi)| (RationalTriple::from_coords(p.m, p.n, self.vertices[i].clone()), xi))
            .unzip();
        let cert = CaratheodoryCert {
            generators,
            coefficients,
        };
        if cert.coefficients.len() > self.affine_dim() + 1 {
            return Err(Error::Consistency(format!(
                "certificate uses {} vertices for affine dimension {}",
                cert.coefficients.len(),
                self.affine_dim()
            )));
        }
        if cert.reconstruct() != p.coords
            || cert.coefficients.iter().fold(BigRational::zero(), |s, x| s + x) != BigRational::one()
        {
            return Err(Error::Consistency("certificate does not reconstruct the point".into()));
        }
        Ok(cert)
    }

    pub fn to_json(&self) -> String {
        let json = HullJson {
            bounds: self.bounds,
            max_boxes: self.source_max_boxes,
            ambient_dim: self.ambient_dim(),
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(format_rational).collect())
                .collect(),
        };
        serde_json::to_string(&json).expect("hull serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let json: HullJson =
            serde_json::from_str(s).map_err(|e| Error::Consistency(format!("bad hull JSON: {e}")))?;
        let poly = Self::from_vertices(json.bounds, json.max_boxes, Vec::new());
        if json.ambient_dim != poly.ambient_dim() {
            return Err(Error::Consistency(format!(
                "ambient_dim {} does not match bounds",
                json.ambient_dim
            )));
        }
        let mut vertices = Vec::with_capacity(json.vertices.len());
        for v in &json.vertices {
            if v.len() != poly.ambient_dim() {
                return Err(Error::Consistency(format!("vertex has {} coordinates", v.len())));
            }
            let coords = v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            let (m, n) = (json.bounds.m, json.bounds.n);
            let (a, rest) = coords.split_at(m);
            let (b, ab) = rest.split_at(n);
            vertices.push(RationalTriple::new(a.to_vec(), b.to_vec(), ab.to_vec())?.coords);
        }
        Ok(Self::from_vertices(json.bounds, json.max_boxes, vertices))
    }
}

/// Builds the hull of a nonempty [`KronSet`].
pub fn build_polytope(set: &KronSet) -> Result<PolytopeV> {
    PolytopeV::build(set)
}

fn lcm_of_denominators(coords: &[BigRational]) -> BigInt {
    coords.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Shapes `(s·p)` if every coordinate of `s·p` is an integer and each block
/// is a partition.
fn integer_shapes(p: &RationalTriple, s: &BigInt) -> Option<(Partition, Partition, Partition)> {
    let scaled: Option<Vec<u32>> = p
        .coords
        .iter()
        .map(|x| {
            let y = x * BigRational::from_integer(s.clone());
            if y.is_integer() {
                y.to_integer().to_u32()
            } else {
                None
            }
        })
        .collect();
    let scaled = scaled?;
    let (a, rest) = scaled.split_at(p.m);
    let (b, ab) = rest.split_at(p.n);
    Some((
        Partition::new(a.to_vec()).ok()?,
        Partition::new(b.to_vec()).ok()?,
        Partition::new(ab.to_vec()).ok()?,
    ))
}

/// Search bound on the scaling derived from a certificate: with `x_i = n_i/L`
/// and `k_i` a box count at which vertex `i` is realized by a nonzero triple,
/// `L · lcm(k_i) · p` is a sum of nonzero triples. Returns `None` if some
/// vertex is not realized within `max_multiple` multiples of its denominator.
pub fn certificate_bound(cert: &CaratheodoryCert, max_multiple: u32) -> Result<Option<BigInt>> {
    let mut bound = cert
        .coefficients
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    for g in &cert.generators {
        let den = lcm_of_denominators(&g.coords);
        let mut found = None;
        for s in 1..=max_multiple {
            let k = &den * BigInt::from(s);
            if let Some((a, b, c)) = integer_shapes(g, &k) {
                if kronecker_coefficient(&a, &b, &c)? > 0 {
                    found = Some(k);
                    break;
                }
            }
        }
        match found {
            Some(k) => bound = bound.lcm(&k),
            None => return Ok(None),
        }
    }
    Ok(Some(bound))
}

/// Smallest `m ≤ max_m` (further capped by the certificate bound) such that
/// `m·p` is an integer triple with nonzero coefficient. `None` means no such
/// `m` exists in the searched range.
pub fn find_scaling(p: &RationalTriple, cert: &CaratheodoryCert, max_m: u32) -> Result<Option<(u32, KronTriple)>> {
    let limit = match certificate_bound(cert, 12)? {
        Some(b) => b.to_u32().map_or(max_m, |b| b.min(max_m)),
        None => max_m,
    };
    for s in 1..=limit {
        if let Some((mu, nu, lambda)) = integer_shapes(p, &BigInt::from(s)) {
            let t = KronTriple::compute(mu, nu, lambda)?;
            if t.g > 0 {
                return Ok(Some((s, t)));
            }
        }
    }
    Ok(None)
}
