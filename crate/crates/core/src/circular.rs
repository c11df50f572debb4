//! Circle-valued coordinates on the vertices of a complex.

use std::collections::VecDeque;

use crate::cochain::Cochain;
use crate::complex::OrderedFiltration;
use crate::error::{Error, Result};
use crate::scalar::{frac, wrap, Scalar};

/// Angle in `[0, 1)` for each vertex label `0..len`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircularCoordinate<T> {
    pub theta: Vec<T>,
}

impl<T: Scalar> CircularCoordinate<T> {
    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Table `point_index,theta`, angles in full precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("point_index,theta\n");
        for (i, t) in self.theta.iter().enumerate() {
            out.push_str(&format!("{i},{:.16e}\n", t));
        }
        out
    }
}

/// `theta(v) = f(v) mod 1`. Vertices without an entry in `f` get 0.
pub fn coordinates_from_potential<T: Scalar>(f: &Cochain<T>, complex: &OrderedFiltration<T>) -> CircularCoordinate<T> {
    let mut theta = vec![T::zero(); complex.vertex_count()];
    for (k, x) in f.iter() {
        theta[complex.simplex(k).vertices()[0]] = frac(x);
    }
    CircularCoordinate { theta }
}

fn edge_tolerance<T: Scalar>() -> T {
    T::of(1e-6).max(T::epsilon() * T::of(256.0))
}

/// Integrates a real 1-cocycle along a breadth-first spanning tree of each
/// component, starting from `theta = 0` at the base vertex. The base is the
/// first entry of `bases` lying in the component, else its lowest label.
/// Every edge is then checked against the integrated values; a mismatch
/// beyond 1e-6 modulo 1 means the class is not integral.
pub fn integrate_cocycle<T: Scalar>(
    alpha_bar: &Cochain<T>,
    complex: &OrderedFiltration<T>,
    bases: &[usize],
) -> Result<CircularCoordinate<T>> {
    if alpha_bar.dimension() != 1 {
        return Err(Error::invalid(format!("expected a 1-cochain, got dimension {}", alpha_bar.dimension())));
    }
    let n = complex.vertex_count();
    let mut adjacency: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for e in complex.indices_of_dim(1) {
        let v = complex.simplex(e).vertices();
        let x = alpha_bar.get(e).unwrap_or_else(T::zero);
        adjacency[v[0]].push((v[1], x));
        adjacency[v[1]].push((v[0], -x));
        edges.push((v[0], v[1], x));
    }
    let mut present = vec![false; n];
    for k in complex.indices_of_dim(0) {
        present[complex.simplex(k).vertices()[0]] = true;
    }

    let mut theta = vec![T::zero(); n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    let roots = bases.iter().copied().filter(|&b| b < n).chain(0..n);
    for root in roots {
        if seen[root] || !present[root] {
            continue;
        }
        seen[root] = true;
        queue.push_back(root);
        while let Some(a) = queue.pop_front() {
            for &(b, x) in &adjacency[a] {
                if !seen[b] {
                    seen[b] = true;
                    theta[b] = frac(theta[a] + x);
                    queue.push_back(b);
                }
            }
        }
    }

    let tol = edge_tolerance::<T>();
    for (a, b, x) in edges {
        let gap = wrap(theta[b] - theta[a] - x);
        if gap.abs() > tol {
            return Err(Error::NonIntegralClass(a, b, gap.as_f64()));
        }
    }
    Ok(CircularCoordinate { theta })
}
