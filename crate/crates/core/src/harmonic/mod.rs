//! Harmonic smoothing of 1-cocycles.
//!
//! Given a cocycle `alpha`, find the 0-cochain `f` minimizing
//! `‖alpha + d0 f‖²`. The minimizer `alpha + d0 f` is the unique cocycle in
//! the class of `alpha` with `d0* = 0`.

pub mod lsqr;

use std::collections::BTreeMap;

use crate::cochain::{adjoint0, coboundary1, norm, Cochain, Reals};
use crate::complex::OrderedFiltration;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use lsqr::{iterative_least_squares, LinearLeastSquaresProblem, LinearOperator, LsqrOutcome};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// `d0` as an operator from vertex values to edge values, in dense positions.
#[derive(Clone, Debug)]
pub struct EdgeIncidence {
    /// Filtration positions of the vertices, in order.
    pub vertices: Vec<usize>,
    /// Filtration positions of the edges, in order.
    pub edges: Vec<usize>,
    /// `(tail, head)` as dense vertex positions, tail the smaller label.
    ends: Vec<(usize, usize)>,
}

impl EdgeIncidence {
    pub fn new<T: Scalar>(complex: &OrderedFiltration<T>) -> Self {
        let vertices: Vec<usize> = complex.indices_of_dim(0).collect();
        let dense: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let edges: Vec<usize> = complex.indices_of_dim(1).collect();
        let ends = edges
            .iter()
            .map(|&e| {
                let f = complex.facets(e);
                (dense[&f[1]], dense[&f[0]])
            })
            .collect();
        EdgeIncidence { vertices, edges, ends }
    }

    pub fn ends(&self) -> &[(usize, usize)] {
        &self.ends
    }

    /// Dense edge vector of a 1-cochain.
    pub fn edge_vector<T: Scalar>(&self, alpha: &Cochain<T>) -> Vec<T> {
        self.edges.iter().map(|&e| alpha.get(e).unwrap_or_else(T::zero)).collect()
    }
}

impl<T: Scalar> LinearOperator<T> for EdgeIncidence {
    fn rows(&self) -> usize {
        self.ends.len()
    }

    fn cols(&self) -> usize {
        self.vertices.len()
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        for (yi, &(a, b)) in y.iter_mut().zip(&self.ends) {
            *yi = x[b] - x[a];
        }
    }

    fn apply_transpose(&self, y: &[T], x: &mut [T]) {
        x.iter_mut().for_each(|v| *v = T::zero());
        for (&yi, &(a, b)) in y.iter().zip(&self.ends) {
            x[a] = x[a] - yi;
            x[b] = x[b] + yi;
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct HarmonicOptions<T> {
    /// Success when `‖d0* smoothed‖ <= tolerance · max(1, ‖alpha‖)`.
    pub tolerance: T,
    /// Defaults to ten times the vertex count.
    pub max_iterations: Option<usize>,
}

impl<T: Scalar> Default for HarmonicOptions<T> {
    fn default() -> Self {
        HarmonicOptions { tolerance: T::of(DEFAULT_TOLERANCE), max_iterations: None }
    }
}

#[derive(Clone, Debug)]
pub struct HarmonicResult<T> {
    /// `alpha + d0 potential`
    pub smoothed: Cochain<T>,
    pub potential: Cochain<T>,
    /// `‖d0* smoothed‖`
    pub residual_norm: T,
    pub iterations: usize,
}

/// Embeds an integer cochain into the reals.
pub fn to_real<T: Scalar>(alpha: &Cochain<i64>) -> Cochain<T> {
    alpha.map(|x| T::of(x as f64))
}

/// Harmonic representative of the class of a real 1-cocycle.
pub fn harmonic_representative<T: Scalar>(
    alpha: &Cochain<T>,
    complex: &OrderedFiltration<T>,
    options: &HarmonicOptions<T>,
) -> Result<HarmonicResult<T>> {
    if alpha.dimension() != 1 {
        return Err(Error::invalid(format!("expected a 1-cochain, got dimension {}", alpha.dimension())));
    }
    let scale = T::one().max(norm(alpha));
    let defect = norm(&coboundary1(&Reals::<T>::default(), alpha, complex)?);
    if defect > T::epsilon().sqrt() * scale {
        return Err(Error::invalid(format!("input is not a cocycle: ‖d1 alpha‖ = {defect}")));
    }
    let op = EdgeIncidence::new(complex);
    let max_iterations = options.max_iterations.unwrap_or(10 * op.vertices.len().max(1));
    let target = options.tolerance * scale;

    let rhs: Vec<T> = op.edge_vector(alpha).into_iter().map(|x| -x).collect();
    let out = lsqr::lsqr_to(&op, &rhs, target, max_iterations);
    if !out.converged {
        return Err(Error::NotConverged {
            iterations: out.iterations,
            residual: out.normal_residual.as_f64(),
            best: out.x.iter().map(|x| x.as_f64()).collect(),
        });
    }

    let mut d0f = vec![T::zero(); op.edges.len()];
    op.apply(&out.x, &mut d0f);
    let smoothed: BTreeMap<usize, T> = op
        .edges
        .iter()
        .zip(&d0f)
        .map(|(&e, &df)| (e, alpha.get(e).unwrap_or_else(T::zero) + df))
        .filter(|&(_, x)| x != T::zero())
        .collect();
    let smoothed = Cochain::from_map(1, smoothed);
    let potential = Cochain::from_map(0, op.vertices.iter().copied().zip(out.x.iter().copied()).filter(|&(_, x)| x != T::zero()).collect());
    let residual_norm = norm(&adjoint0(&smoothed, complex)?);
    Ok(HarmonicResult { smoothed, potential, residual_norm, iterations: out.iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{coboundary0, inner};
    use crate::complex::{total_order, FilteredComplex, Simplex};

    fn three_cycle() -> OrderedFiltration<f64> {
        let mut s: Vec<(Simplex, f64)> = (0..3).map(|v| (Simplex::vertex(v), 0.0)).collect();
        s.extend([(Simplex::edge(0, 1), 1.0), (Simplex::edge(0, 2), 1.0), (Simplex::edge(1, 2), 1.0)]);
        total_order(&FilteredComplex { vertex_count: 3, simplices: s }).unwrap()
    }

    fn edge(c: &OrderedFiltration<f64>, a: usize, b: usize) -> usize {
        c.index_of(&Simplex::edge(a, b)).unwrap()
    }

    #[test]
    fn three_cycle_spreads_evenly() {
        let c = three_cycle();
        let r = Reals::default();
        let alpha = Cochain::from_entries(&r, 1, &c, [(edge(&c, 0, 1), 1.0)]).unwrap();
        let h = harmonic_representative(&alpha, &c, &HarmonicOptions::default()).unwrap();
        let third = 1.0 / 3.0;
        for (e, want) in [((0, 1), third), ((0, 2), -third), ((1, 2), third)] {
            assert!((h.smoothed.get(edge(&c, e.0, e.1)).unwrap() - want).abs() < 1e-12);
        }
        let n2 = norm(&h.smoothed).powi(2);
        assert!((n2 - third).abs() < 1e-12);
        assert!(h.residual_norm <= 1e-10);
    }

    #[test]
    fn harmonic_input_is_fixed() {
        let c = three_cycle();
        let r = Reals::default();
        let third = 1.0 / 3.0;
        let alpha = Cochain::from_entries(&r, 1, &c, [(edge(&c, 0, 1), third), (edge(&c, 0, 2), -third), (edge(&c, 1, 2), third)]).unwrap();
        let h = harmonic_representative(&alpha, &c, &HarmonicOptions::default()).unwrap();
        for (k, x) in alpha.iter() {
            assert!((h.smoothed.get(k).unwrap() - x).abs() < 1e-12);
        }
        assert!(h.potential.iter().all(|(_, x)| x.abs() < 1e-12));
    }

    #[test]
    fn coboundary_smooths_to_zero() {
        let c = three_cycle();
        let r = Reals::default();
        let g = Cochain::from_entries(&r, 0, &c, [(0, 0.3), (1, -1.2), (2, 2.0)]).unwrap();
        let alpha = coboundary0(&r, &g, &c).unwrap();
        let h = harmonic_representative(&alpha, &c, &HarmonicOptions::default()).unwrap();
        assert!(norm(&h.smoothed) < 1e-12);
    }

    #[test]
    fn orthogonal_to_coboundaries() {
        let c = three_cycle();
        let r = Reals::default();
        let alpha = Cochain::from_entries(&r, 1, &c, [(edge(&c, 0, 1), 2.0), (edge(&c, 1, 2), -0.5)]).unwrap();
        let h = harmonic_representative(&alpha, &c, &HarmonicOptions::default()).unwrap();
        let g = Cochain::from_entries(&r, 0, &c, [(0, 1.0), (2, -3.0)]).unwrap();
        let dg = coboundary0(&r, &g, &c).unwrap();
        assert!(inner(&h.smoothed, &dg).abs() <= 1e-8 * norm(&h.smoothed) * norm(&dg));
    }

    #[test]
    fn rejects_non_cocycles_and_wrong_dimension() {
        let d = crate::metric::DistanceMatrix::from_rows(vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]]).unwrap();
        let c = total_order(&crate::complex::rips_2skeleton(&d, 2.0)).unwrap();
        let r = Reals::default();
        let alpha = Cochain::from_entries(&r, 1, &c, [(edge(&c, 0, 1), 1.0)]).unwrap();
        assert!(matches!(harmonic_representative(&alpha, &c, &HarmonicOptions::default()), Err(Error::InvalidInput(_))));
        assert!(harmonic_representative(&Cochain::<f64>::zero(0), &c, &HarmonicOptions::default()).is_err());
    }

    #[test]
    fn iteration_cap_surfaces_not_converged() {
        let c = three_cycle();
        let r = Reals::default();
        let alpha = Cochain::from_entries(&r, 1, &c, [(edge(&c, 0, 1), 1.0)]).unwrap();
        let opts = HarmonicOptions { tolerance: 1e-30, max_iterations: Some(1) };
        assert!(matches!(harmonic_representative(&alpha, &c, &opts), Err(Error::NotConverged { .. })));
    }
}
