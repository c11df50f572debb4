//! Point clouds, distance matrices and landmark selection.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Finite sample of points in a real vector space, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud<T> {
    dim: usize,
    coords: Vec<T>,
}

impl<T: Scalar> PointCloud<T> {
    pub fn new(points: Vec<Vec<T>>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::invalid("point cloud is empty"))?;
        if dim == 0 {
            return Err(Error::invalid("points have dimension 0"));
        }
        let mut coords = Vec::with_capacity(dim * points.len());
        for (i, p) in points.into_iter().enumerate() {
            if p.len() != dim {
                return Err(Error::invalid(format!(
                    "point {i} has dimension {} but point 0 has {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid(format!("point {i} has a non-finite coordinate")));
            }
            coords.extend(p);
        }
        Ok(PointCloud { dim, coords })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Reads each point as a complex vector of half the dimension, pairing
    /// consecutive coordinates as (re, im).
    pub fn complex_point(&self, i: usize) -> Result<Vec<Complex<T>>> {
        if !self.dim.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "complex interpretation needs an even dimension, got {}",
                self.dim
            )));
        }
        Ok(self
            .point(i)
            .chunks_exact(2)
            .map(|c| Complex::new(c[0], c[1]))
            .collect())
    }
}

/// Dense symmetric matrix of nonnegative dissimilarities with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DistanceMatrix<T> {
    /// Validates rows of an arbitrary dissimilarity matrix. Entries must be
    /// finite and nonnegative; asymmetry up to 1e-9 is averaged away, larger
    /// asymmetry or a nonzero diagonal is rejected.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::invalid("distance matrix is empty"));
        }
        let tol = T::of(1e-9);
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() || x < T::zero() {
                    return Err(Error::invalid(format!("entry ({i}, {j}) = {x} is not a finite nonnegative value")));
                }
            }
            data.extend_from_slice(row);
        }
        for i in 0..n {
            if data[i * n + i] > tol {
                return Err(Error::invalid(format!("diagonal entry {i} is nonzero")));
            }
            data[i * n + i] = T::zero();
            for j in i + 1..n {
                let (a, b) = (data[i * n + j], data[j * n + i]);
                if (a - b).abs() > tol {
                    return Err(Error::invalid(format!(
                        "entries ({i}, {j}) and ({j}, {i}) differ by {}",
                        (a - b).abs()
                    )));
                }
                let m = (a + b) / T::of(2.0);
                data[i * n + j] = m;
                data[j * n + i] = m;
            }
        }
        Ok(DistanceMatrix { n, data })
    }

    /// Builds a matrix from a function of unordered pairs `i < j`.
    pub fn from_fn(n: usize, mut dist: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = dist(i, j);
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        DistanceMatrix { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Restriction to the given index subset, in the given order.
    pub fn submatrix(&self, indices: &[usize]) -> Self {
        DistanceMatrix::from_fn(indices.len(), |a, b| self.get(indices[a], indices[b]))
    }
}

pub fn euclidean_distances<T: Scalar>(cloud: &PointCloud<T>) -> DistanceMatrix<T> {
    DistanceMatrix::from_fn(cloud.len(), |i, j| {
        cloud
            .point(i)
            .iter()
            .zip(cloud.point(j))
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<T>()
            .sqrt()
    })
}

fn unit_tolerance<T: Scalar>() -> T {
    T::of(1e-9).max(T::epsilon() * T::of(64.0))
}

fn hermitian_norm<T: Scalar>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Angle `arccos |conj(xi) . eta|` between the complex lines through two unit vectors.
pub fn projective_distance<T: Scalar>(xi: &[Complex<T>], eta: &[Complex<T>]) -> Result<T> {
    if xi.len() != eta.len() {
        return Err(Error::invalid(format!(
            "vectors have dimensions {} and {}",
            xi.len(),
            eta.len()
        )));
    }
    let tol = unit_tolerance::<T>();
    for v in [xi, eta] {
        let norm = hermitian_norm(v);
        if (norm - T::one()).abs() > tol {
            return Err(Error::invalid(format!("vector has Hermitian norm {norm}, expected 1")));
        }
    }
    Ok(projective_angle(xi, eta))
}

fn projective_angle<T: Scalar>(xi: &[Complex<T>], eta: &[Complex<T>]) -> T {
    let zero = Complex::new(T::zero(), T::zero());
    let inner: Complex<T> = xi.iter().zip(eta).fold(zero, |acc, (a, b)| acc + a.conj() * b);
    // arccos|<xi, eta>| loses half the digits near 0; the component of eta
    // orthogonal to xi carries the sine exactly.
    let sine = xi
        .iter()
        .zip(eta)
        .map(|(a, b)| (b - inner * a).norm_sqr())
        .sum::<T>()
        .sqrt();
    let cosine = inner.norm().min(T::one());
    sine.atan2(cosine)
}

/// Pairwise projective distances of a cloud read as unit complex vectors.
pub fn projective_distances<T: Scalar>(cloud: &PointCloud<T>) -> Result<DistanceMatrix<T>> {
    let tol = unit_tolerance::<T>();
    let points = (0..cloud.len())
        .map(|i| {
            let z = cloud.complex_point(i)?;
            let norm = hermitian_norm(&z);
            if (norm - T::one()).abs() > tol {
                return Err(Error::invalid(format!("point {i} has Hermitian norm {norm}, expected 1")));
            }
            Ok(z)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DistanceMatrix::from_fn(points.len(), |i, j| {
        projective_angle(&points[i], &points[j])
    }))
}

/// Landmark indices in selection order with their covering radius.
#[derive(Clone, Debug, PartialEq)]
pub struct LandmarkSet<T> {
    pub indices: Vec<usize>,
    /// Largest distance from any point to its nearest landmark.
    pub covering_radius: T,
}

/// Greedy furthest-point (maxmin) landmark selection starting at `seed`.
/// Ties go to the lowest point index.
pub fn maxmin_landmarks<T: Scalar>(d: &DistanceMatrix<T>, k: usize, seed: usize) -> Result<LandmarkSet<T>> {
    let n = d.len();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("landmark count {k} must lie in 1..={n}")));
    }
    if seed >= n {
        return Err(Error::invalid(format!("seed index {seed} out of range for {n} points")));
    }
    let mut indices = Vec::with_capacity(k);
    let mut nearest: Vec<T> = d.row(seed).to_vec();
    let mut chosen = vec![false; n];
    indices.push(seed);
    chosen[seed] = true;
    while indices.len() < k {
        let mut best: Option<(usize, T)> = None;
        for (i, &dist) in nearest.iter().enumerate() {
            if chosen[i] {
                continue;
            }
            if best.is_none_or(|(_, b)| dist > b) {
                best = Some((i, dist));
            }
        }
        let (next, _) = best.expect("k <= n leaves an unchosen point");
        indices.push(next);
        chosen[next] = true;
        for (m, &x) in nearest.iter_mut().zip(d.row(next)) {
            if x < *m {
                *m = x;
            }
        }
    }
    let covering_radius = nearest.iter().copied().fold(T::zero(), T::max);
    Ok(LandmarkSet { indices, covering_radius })
}
