//! Filtered Vietoris–Rips and lazy witness 2-skeleta.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::metric::{DistanceMatrix, LandmarkSet};
use crate::scalar::Scalar;

/// A vertex, edge or triangle, vertices strictly increasing.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Simplex {
    vertices: [usize; 3],
    len: u8,
}

impl Simplex {
    pub fn vertex(a: usize) -> Self {
        Simplex { vertices: [a, 0, 0], len: 1 }
    }

    pub fn edge(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "edge needs two distinct vertices");
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        Simplex { vertices: [a, b, 0], len: 2 }
    }

    pub fn triangle(a: usize, b: usize, c: usize) -> Self {
        let mut v = [a, b, c];
        v.sort_unstable();
        assert!(v[0] < v[1] && v[1] < v[2], "triangle needs three distinct vertices");
        Simplex { vertices: v, len: 3 }
    }

    /// Sorts the vertices; fails on repeats or more than three vertices.
    pub fn new(vertices: &[usize]) -> Result<Self> {
        let mut v = vertices.to_vec();
        v.sort_unstable();
        if v.is_empty() || v.len() > 3 || v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("{vertices:?} is not a simplex of dimension 0, 1 or 2")));
        }
        let mut vertices = [0; 3];
        vertices[..v.len()].copy_from_slice(&v);
        Ok(Simplex { vertices, len: v.len() as u8 })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices[..self.len as usize]
    }

    pub fn dim(&self) -> usize {
        self.len as usize - 1
    }

    /// Codimension-one faces; face `t` omits vertex `t` and carries sign `(-1)^t`.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let v = self.vertices();
        let n = if v.len() > 1 { v.len() } else { 0 };
        (0..n).map(move |skip| {
            let rest: Vec<usize> = v.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
            Simplex::new(&rest).expect("faces of a simplex are simplices")
        })
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices().cmp(other.vertices())
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.vertices())
    }
}

/// Unordered collection of simplices with entry values.
#[derive(Clone, Debug)]
pub struct FilteredComplex<T> {
    pub vertex_count: usize,
    pub simplices: Vec<(Simplex, T)>,
}

impl<T: Scalar> FilteredComplex<T> {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn count_dim(&self, dim: usize) -> usize {
        self.simplices.iter().filter(|(s, _)| s.dim() == dim).count()
    }
}

/// Simplices in a total order compatible with the filtration, with facet
/// positions precomputed.
#[derive(Clone, Debug)]
pub struct OrderedFiltration<T> {
    vertex_count: usize,
    simplices: Vec<Simplex>,
    values: Vec<T>,
    facets: Vec<[usize; 3]>,
    index: HashMap<Simplex, usize>,
}

impl<T: Scalar> OrderedFiltration<T> {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn simplex(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn value(&self, i: usize) -> T {
        self.values[i]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn dim(&self, i: usize) -> usize {
        self.simplices[i].dim()
    }

    /// Positions of the facets of simplex `i`, facet `t` omitting vertex `t`.
    pub fn facets(&self, i: usize) -> &[usize] {
        let d = self.simplices[i].dim();
        let n = if d == 0 { 0 } else { d + 1 };
        &self.facets[i][..n]
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Positions of all simplices of the given dimension, in filtration order.
    pub fn indices_of_dim(&self, dim: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.dim(i) == dim)
    }

    /// Number of simplices with value `<= eps`; they form a prefix.
    pub fn prefix_len(&self, eps: T) -> usize {
        self.values.partition_point(|&v| v <= eps)
    }

    /// The subcomplex of the first `len` simplices. Positions are unchanged,
    /// so cochains on `self` restrict by dropping keys `>= len`.
    pub fn prefix(&self, len: usize) -> Self {
        let len = len.min(self.len());
        let simplices = self.simplices[..len].to_vec();
        let index = simplices.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        OrderedFiltration {
            vertex_count: self.vertex_count,
            simplices,
            values: self.values[..len].to_vec(),
            facets: self.facets[..len].to_vec(),
            index,
        }
    }

    /// The subcomplex `X^eps` of simplices with value `<= eps`.
    pub fn sublevel(&self, eps: T) -> Self {
        self.prefix(self.prefix_len(eps))
    }

    pub fn max_value(&self) -> Option<T> {
        self.values.last().copied()
    }

    /// One line per simplex: `value v0 [v1 [v2]]`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (s, v) in self.simplices.iter().zip(&self.values) {
            out.push_str(&v.to_string());
            for x in s.vertices() {
                out.push(' ');
                out.push_str(&x.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Vietoris–Rips 2-skeleton: a simplex enters at its largest pairwise
/// distance, and only if that is `<= r_max`.
pub fn rips_2skeleton<T: Scalar>(d: &DistanceMatrix<T>, r_max: T) -> FilteredComplex<T> {
    let n = d.len();
    let mut simplices: Vec<(Simplex, T)> = (0..n).map(|v| (Simplex::vertex(v), T::zero())).collect();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|a| (a + 1..n).filter(|&b| d.get(a, b) <= r_max).collect())
        .collect();
    for (a, nbrs) in neighbors.iter().enumerate() {
        for &b in nbrs {
            simplices.push((Simplex::edge(a, b), d.get(a, b)));
        }
    }
    for (a, nbrs) in neighbors.iter().enumerate() {
        for (i, &b) in nbrs.iter().enumerate() {
            for &c in &nbrs[i + 1..] {
                let bc = d.get(b, c);
                if bc <= r_max {
                    let v = d.get(a, b).max(d.get(a, c)).max(bc);
                    simplices.push((Simplex::triangle(a, b, c), v));
                }
            }
        }
    }
    FilteredComplex { vertex_count: n, simplices }
}

/// Lazy witness 2-skeleton on landmark positions `0..landmarks.len()`.
///
/// With `m(s)` the distance from `s` to its `nu`-th nearest landmark (zero
/// for `nu = 0`), edge `ab` enters at
/// `max(0, min_s max(d(a,s), d(b,s)) - m(s))` over every point `s`.
/// Triangles enter once all three edges are present.
pub fn witness_2skeleton<T: Scalar>(
    d_all: &DistanceMatrix<T>,
    landmarks: &LandmarkSet<T>,
    nu: usize,
    r_max: T,
) -> Result<FilteredComplex<T>> {
    let n = d_all.len();
    let marks = &landmarks.indices;
    if nu > 2 {
        return Err(Error::invalid(format!("nu must be 0, 1 or 2, got {nu}")));
    }
    if let Some(&bad) = marks.iter().find(|&&l| l >= n) {
        return Err(Error::invalid(format!("landmark {bad} out of range for {n} points")));
    }
    if nu > marks.len() {
        return Err(Error::invalid(format!("nu = {nu} exceeds the {} landmarks", marks.len())));
    }
    let offset: Vec<T> = (0..n)
        .map(|s| {
            if nu == 0 {
                return T::zero();
            }
            let mut ds: Vec<T> = marks.iter().map(|&l| d_all.get(l, s)).collect();
            ds.select_nth_unstable_by(nu - 1, |a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
            ds[nu - 1]
        })
        .collect();

    let k = marks.len();
    let mut simplices: Vec<(Simplex, T)> = (0..k).map(|v| (Simplex::vertex(v), T::zero())).collect();
    let mut edge_value: Vec<Option<T>> = vec![None; k * k];
    for a in 0..k {
        let row_a = d_all.row(marks[a]);
        for b in a + 1..k {
            let row_b = d_all.row(marks[b]);
            let mut best = T::infinity();
            for s in 0..n {
                let e = row_a[s].max(row_b[s]) - offset[s];
                if e < best {
                    best = e;
                }
            }
            let value = best.max(T::zero());
            if value <= r_max {
                edge_value[a * k + b] = Some(value);
                simplices.push((Simplex::edge(a, b), value));
            }
        }
    }
    for a in 0..k {
        for b in a + 1..k {
            let Some(ab) = edge_value[a * k + b] else { continue };
            for c in b + 1..k {
                if let (Some(ac), Some(bc)) = (edge_value[a * k + c], edge_value[b * k + c]) {
                    simplices.push((Simplex::triangle(a, b, c), ab.max(ac).max(bc)));
                }
            }
        }
    }
    Ok(FilteredComplex { vertex_count: k, simplices })
}

/// Sorts by (value, dimension, vertex tuple) and checks closure.
pub fn total_order<T: Scalar>(complex: &FilteredComplex<T>) -> Result<OrderedFiltration<T>> {
    let mut entries = complex.simplices.clone();
    for (s, v) in &entries {
        if !v.is_finite() || *v < T::zero() {
            return Err(Error::InvalidComplex(format!("simplex {s:?} has value {v}")));
        }
        if let Some(&x) = s.vertices().iter().find(|&&x| x >= complex.vertex_count) {
            return Err(Error::InvalidComplex(format!(
                "vertex {x} out of range for {} vertices",
                complex.vertex_count
            )));
        }
    }
    entries.sort_by(|(s, v), (t, w)| {
        v.partial_cmp(w)
            .expect("values are finite")
            .then(s.dim().cmp(&t.dim()))
            .then(s.cmp(t))
    });
    let mut index = HashMap::with_capacity(entries.len());
    for (i, (s, _)) in entries.iter().enumerate() {
        if index.insert(*s, i).is_some() {
            return Err(Error::InvalidComplex(format!("simplex {s:?} appears twice")));
        }
    }
    let mut facets = Vec::with_capacity(entries.len());
    for (i, (s, v)) in entries.iter().enumerate() {
        let mut f = [0usize; 3];
        for (t, face) in s.facets().enumerate() {
            let j = *index
                .get(&face)
                .ok_or_else(|| Error::InvalidComplex(format!("face {face:?} of {s:?} is missing")))?;
            if entries[j].1 > *v {
                return Err(Error::InvalidComplex(format!(
                    "face {face:?} enters at {} after its coface {s:?} at {v}",
                    entries[j].1
                )));
            }
            debug_assert!(j < i);
            f[t] = j;
        }
        facets.push(f);
    }
    let (simplices, values) = entries.into_iter().unzip();
    Ok(OrderedFiltration { vertex_count: complex.vertex_count, simplices, values, facets, index })
}

/// Parses the dump format back into a complex.
pub fn parse_filtration<T: Scalar + std::str::FromStr>(text: &str) -> Result<OrderedFiltration<T>> {
    let mut simplices = Vec::new();
    let mut vertex_count = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: lineno + 1, msg };
        let mut fields = line.split_whitespace();
        let value: T = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| parse_err("missing or malformed value".into()))?;
        let vertices = fields
            .map(|f| f.parse::<usize>().map_err(|e| parse_err(format!("vertex {f:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let s = Simplex::new(&vertices).map_err(|e| parse_err(e.to_string()))?;
        vertex_count = vertex_count.max(s.vertices()[s.dim()] + 1);
        simplices.push((s, value));
    }
    total_order(&FilteredComplex { vertex_count, simplices })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[f64]]) -> DistanceMatrix<f64> {
        DistanceMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn sorted(c: &FilteredComplex<f64>) -> Vec<(Vec<usize>, f64)> {
        let f = total_order(c).unwrap();
        (0..f.len()).map(|i| (f.simplex(i).vertices().to_vec(), f.value(i))).collect()
    }

    #[test]
    fn equilateral_rips() {
        let d = matrix(&[&[0.0, 1.0, 1.0], &[1.0, 0.0, 1.0], &[1.0, 1.0, 0.0]]);
        let c = rips_2skeleton(&d, 2.0);
        assert_eq!((c.count_dim(0), c.count_dim(1), c.count_dim(2)), (3, 3, 1));
        assert!(c.simplices.iter().all(|(s, v)| *v == if s.dim() == 0 { 0.0 } else { 1.0 }));
        let small = rips_2skeleton(&d, 0.5);
        assert_eq!(small.len(), 3);
    }

    #[test]
    fn rips_triangle_at_longest_edge() {
        let d = matrix(&[&[0.0, 1.0, 1.0], &[1.0, 0.0, 2.0], &[1.0, 2.0, 0.0]]);
        let c = rips_2skeleton(&d, 2.0);
        let tri: Vec<_> = c.simplices.iter().filter(|(s, _)| s.dim() == 2).collect();
        assert_eq!(tri.len(), 1);
        // Brute force: the triangle needs every pair within the radius.
        let pairwise = [(0, 1), (0, 2), (1, 2)].iter().map(|&(a, b)| d.get(a, b)).fold(0.0, f64::max);
        assert_eq!(tri[0].1, pairwise);
        assert_eq!(tri[0].1, 2.0);
        // Inclusion is closed at r_max.
        assert_eq!(rips_2skeleton(&d, 1.0).count_dim(2), 0);
    }

    fn two_landmarks_one_witness(nu: usize) -> f64 {
        let d = matrix(&[&[0.0, 2.0, 1.0], &[2.0, 0.0, 1.0], &[1.0, 1.0, 0.0]]);
        let marks = LandmarkSet { indices: vec![0, 1], covering_radius: 1.0 };
        let c = witness_2skeleton(&d, &marks, nu, 10.0).unwrap();
        c.simplices.iter().find(|(s, _)| s.dim() == 1).unwrap().1
    }

    #[test]
    fn witness_edge_values() {
        assert_eq!(two_landmarks_one_witness(0), 1.0);
        assert_eq!(two_landmarks_one_witness(1), 0.0);
    }

    #[test]
    fn witness_landmarks_only() {
        let d = matrix(&[&[0.0, 3.0], &[3.0, 0.0]]);
        let marks = LandmarkSet { indices: vec![0, 1], covering_radius: 0.0 };
        let c = witness_2skeleton(&d, &marks, 0, 10.0).unwrap();
        assert_eq!(c.simplices.last().unwrap().1, 3.0);
        assert!(witness_2skeleton(&d, &marks, 0, 2.9).unwrap().count_dim(1) == 0);
        assert!(witness_2skeleton(&d, &marks, 3, 1.0).is_err());
        let bad = LandmarkSet { indices: vec![0, 5], covering_radius: 0.0 };
        assert!(witness_2skeleton(&d, &bad, 0, 1.0).is_err());
    }

    #[test]
    fn witness_triangle_from_edges() {
        let d = matrix(&[&[0.0, 1.0, 1.0], &[1.0, 0.0, 1.5], &[1.0, 1.5, 0.0]]);
        let marks = LandmarkSet { indices: vec![0, 1, 2], covering_radius: 0.0 };
        let c = witness_2skeleton(&d, &marks, 0, 10.0).unwrap();
        let f = total_order(&c).unwrap();
        let tri = f.indices_of_dim(2).next().unwrap();
        let edge_max = f.indices_of_dim(1).map(|i| f.value(i)).fold(0.0, f64::max);
        assert_eq!(f.value(tri), edge_max);
    }

    #[test]
    fn order_tiebreaks() {
        let c = FilteredComplex {
            vertex_count: 3,
            simplices: vec![
                (Simplex::edge(0, 2), 1.0),
                (Simplex::edge(0, 1), 1.0),
                (Simplex::vertex(2), 0.0),
                (Simplex::vertex(1), 1.0),
                (Simplex::vertex(0), 0.0),
            ],
        };
        let order = sorted(&c);
        let names: Vec<_> = order.iter().map(|(v, _)| v.clone()).collect();
        assert_eq!(names, vec![vec![0], vec![2], vec![1], vec![0, 1], vec![0, 2]]);
    }

    #[test]
    fn order_rejects_bad_complexes() {
        let missing = FilteredComplex { vertex_count: 2, simplices: vec![(Simplex::vertex(0), 0.0), (Simplex::edge(0, 1), 1.0)] };
        assert!(matches!(total_order(&missing), Err(Error::InvalidComplex(_))));
        let late_face = FilteredComplex {
            vertex_count: 2,
            simplices: vec![(Simplex::vertex(0), 0.0), (Simplex::vertex(1), 2.0), (Simplex::edge(0, 1), 1.0)],
        };
        assert!(total_order(&late_face).is_err());
        let dup = FilteredComplex { vertex_count: 1, simplices: vec![(Simplex::vertex(0), 0.0), (Simplex::vertex(0), 0.0)] };
        assert!(total_order(&dup).is_err());
        let out_of_range = FilteredComplex { vertex_count: 1, simplices: vec![(Simplex::vertex(3), 0.0)] };
        assert!(total_order(&out_of_range).is_err());
    }

    #[test]
    fn facets_precede_and_carry_positions() {
        let d = matrix(&[&[0.0, 1.0, 1.0], &[1.0, 0.0, 1.0], &[1.0, 1.0, 0.0]]);
        let f = total_order(&rips_2skeleton(&d, 2.0)).unwrap();
        let tri = f.len() - 1;
        let faces: Vec<_> = f.facets(tri).iter().map(|&i| f.simplex(i).vertices().to_vec()).collect();
        assert_eq!(faces, vec![vec![1, 2], vec![0, 2], vec![0, 1]]);
        for i in 0..f.len() {
            assert!(f.facets(i).iter().all(|&j| j < i));
        }
    }

    #[test]
    fn dump_round_trip() {
        let d = matrix(&[&[0.0, 1.0, 1.25], &[1.0, 0.0, 0.5], &[1.25, 0.5, 0.0]]);
        let f = total_order(&rips_2skeleton(&d, 2.0)).unwrap();
        let text = f.dump();
        assert_eq!(text.lines().next().unwrap(), "0 0");
        assert_eq!(text.lines().last().unwrap(), "1.25 0 1 2");
        let back: OrderedFiltration<f64> = parse_filtration(&text).unwrap();
        assert_eq!(back.dump(), text);
    }

    #[test]
    fn sublevel_is_prefix() {
        let d = matrix(&[&[0.0, 1.0, 1.25], &[1.0, 0.0, 0.5], &[1.25, 0.5, 0.0]]);
        let f = total_order(&rips_2skeleton(&d, 2.0)).unwrap();
        assert_eq!(f.prefix_len(0.0), 3);
        assert_eq!(f.prefix_len(1.0), 5);
        let sub = f.sublevel(1.0);
        assert_eq!(sub.len(), 5);
        assert_eq!(sub.index_of(&Simplex::edge(0, 1)), f.index_of(&Simplex::edge(0, 1)));
        assert_eq!(sub.index_of(&Simplex::edge(0, 2)), None);
    }
}
