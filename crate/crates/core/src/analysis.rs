//! Comparing circular coordinates: winding degrees, scatter tables, histograms.

use std::f64::consts::TAU;

use crate::circular::CircularCoordinate;
use crate::error::{Error, Result};
use crate::scalar::{wrap, Scalar};

/// Vertex indices sorted by angle (ties by index): a cyclic traversal of a
/// circle when `values` is its ground-truth angle.
pub fn cyclic_ordering<T: Scalar>(values: &[T], subset: Option<&[usize]>) -> Vec<usize> {
    let mut order: Vec<usize> = match subset {
        Some(s) => s.to_vec(),
        None => (0..values.len()).collect(),
    };
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite angles").then(a.cmp(&b)));
    order
}

fn winding<T: Scalar>(theta: &[T], ordering: &[usize]) -> T {
    let n = ordering.len();
    (0..n).map(|i| wrap(theta[ordering[(i + 1) % n]] - theta[ordering[i]])).sum()
}

/// Degree of `theta2` against `theta1` along a cyclic vertex sequence.
///
/// The sequence must visit distinct vertices, every wrapped step of `theta1`
/// along it must be shorter than half a turn, and `theta1` must wind exactly
/// once (either direction) around it. The result is the rounded winding of
/// `theta2` divided by that of `theta1`.
pub fn degree_between<T: Scalar>(theta1: &CircularCoordinate<T>, theta2: &CircularCoordinate<T>, ordering: &[usize]) -> Result<i64> {
    let n = theta1.len();
    if theta2.len() != n {
        return Err(Error::invalid(format!("coordinates have {} and {} vertices", n, theta2.len())));
    }
    if ordering.len() < 2 {
        return Err(Error::UnreliableDegree("ordering needs at least two vertices".into()));
    }
    let mut seen = vec![false; n];
    for &v in ordering {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::UnreliableDegree(format!("vertex {v} is out of range or repeated")));
        }
    }
    let half = T::of(0.5);
    for i in 0..ordering.len() {
        let (a, b) = (ordering[i], ordering[(i + 1) % ordering.len()]);
        let gap = wrap(theta1.theta[b] - theta1.theta[a]);
        if gap.abs() >= half {
            return Err(Error::UnreliableDegree(format!("step {a} -> {b} jumps half a turn")));
        }
    }
    let base = winding(&theta1.theta, ordering).round();
    if base.abs() != T::one() {
        return Err(Error::UnreliableDegree(format!("reference coordinate winds {base} times along the ordering")));
    }
    let w = winding(&theta2.theta, ordering).round() * base;
    Ok(w.to_i64().expect("winding is finite"))
}

/// Mean resultant length of `theta - sum_j k_j truth_j`, a value in `[0, 1]`
/// that is 1 exactly when the two differ by a constant rotation.
pub fn circular_correlation<T: Scalar>(theta: &[T], truths: &[&[T]], degrees: &[i64]) -> T {
    let n = theta.len();
    if n == 0 {
        return T::zero();
    }
    let (mut c, mut s) = (0.0f64, 0.0f64);
    for i in 0..n {
        let mut phase = theta[i].as_f64();
        for (t, &k) in truths.iter().zip(degrees) {
            phase -= k as f64 * t[i].as_f64();
        }
        c += (TAU * phase).cos();
        s += (TAU * phase).sin();
    }
    T::of(c.hypot(s) / n as f64)
}

/// Integer degrees `k_j` in `[-max_degree, max_degree]` best explaining
/// `theta ≈ sum_j k_j truth_j + const`, by exhaustive search on the
/// circular correlation. Returns the degrees and their correlation.
pub fn fit_degrees<T: Scalar>(theta: &[T], truths: &[&[T]], max_degree: i64) -> (Vec<i64>, T) {
    let mut best = (vec![0; truths.len()], T::of(-1.0));
    let mut current = vec![-max_degree; truths.len()];
    loop {
        let r = circular_correlation(theta, truths, &current);
        if r > best.1 {
            best = (current.clone(), r);
        }
        let mut i = 0;
        while i < current.len() && current[i] == max_degree {
            current[i] = -max_degree;
            i += 1;
        }
        if i == current.len() {
            break;
        }
        current[i] += 1;
    }
    best
}

#[derive(Clone, Debug)]
pub struct CorrelationReport<T> {
    pub degree: i64,
    /// `(theta1, theta2)` for each vertex.
    pub scatter: Vec<(T, T)>,
    /// Circular correlation of `theta2 - degree * theta1`.
    pub correlation: T,
}

pub fn correlate<T: Scalar>(theta1: &CircularCoordinate<T>, theta2: &CircularCoordinate<T>, ordering: &[usize]) -> Result<CorrelationReport<T>> {
    let degree = degree_between(theta1, theta2, ordering)?;
    let correlation = circular_correlation(&theta2.theta, &[&theta1.theta], &[degree]);
    let scatter = theta1.theta.iter().copied().zip(theta2.theta.iter().copied()).collect();
    Ok(CorrelationReport { degree, scatter, correlation })
}

/// Counts of angles in `[k/bins, (k+1)/bins)`.
pub fn histogram<T: Scalar>(theta: &CircularCoordinate<T>, bins: usize) -> Result<Vec<usize>> {
    if bins == 0 {
        return Err(Error::invalid("histogram needs at least one bin"));
    }
    let nb = T::of(bins as f64);
    let edge = |k: usize| T::of(k as f64) / nb;
    let mut counts = vec![0; bins];
    for &t in &theta.theta {
        let mut b = (t * nb).floor().to_usize().unwrap_or(0).min(bins - 1);
        while b + 1 < bins && edge(b + 1) <= t {
            b += 1;
        }
        while b > 0 && edge(b) > t {
            b -= 1;
        }
        counts[b] += 1;
    }
    Ok(counts)
}

pub fn histogram_csv(counts: &[usize]) -> String {
    let bins = counts.len() as f64;
    let mut out = String::from("bin_start,bin_end,count\n");
    for (k, c) in counts.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", k as f64 / bins, (k + 1) as f64 / bins, c));
    }
    out
}

pub fn scatter_csv<T: Scalar>(a: &CircularCoordinate<T>, b: &CircularCoordinate<T>) -> String {
    let mut out = String::from("point_index,theta_a,theta_b\n");
    for (i, (x, y)) in a.theta.iter().zip(&b.theta).enumerate() {
        out.push_str(&format!("{i},{x:.16e},{y:.16e}\n"));
    }
    out
}
