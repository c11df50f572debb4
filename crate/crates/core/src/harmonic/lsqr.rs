//! LSQR (Paige & Saunders) for `min ‖Ax - b‖` using only products with `A`
//! and `Aᵀ`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A linear map given by its action, never by a stored matrix.
pub trait LinearOperator<T> {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    /// `y = A x`
    fn apply(&self, x: &[T], y: &mut [T]);
    /// `x = Aᵀ y`
    fn apply_transpose(&self, y: &[T], x: &mut [T]);
}

#[derive(Clone, Debug)]
pub struct LinearLeastSquaresProblem<'a, T, A> {
    pub operator: &'a A,
    pub rhs: Vec<T>,
    /// Stop once `‖Aᵀ(Ax - b)‖ <= tolerance · ‖Aᵀb‖`.
    pub tolerance: T,
    pub max_iterations: usize,
}

#[derive(Clone, Debug)]
pub struct LsqrOutcome<T> {
    pub x: Vec<T>,
    pub iterations: usize,
    /// Recomputed `‖Aᵀ(b - Ax)‖` of the returned iterate.
    pub normal_residual: T,
    pub converged: bool,
}

fn norm<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

fn scale<T: Scalar>(v: &mut [T], s: T) {
    v.iter_mut().for_each(|x| *x = *x * s);
}

/// `‖Aᵀ(b - Ax)‖`
pub fn normal_residual<T: Scalar, A: LinearOperator<T>>(op: &A, b: &[T], x: &[T]) -> T {
    let mut r = vec![T::zero(); op.rows()];
    op.apply(x, &mut r);
    r.iter_mut().zip(b).for_each(|(ri, &bi)| *ri = bi - *ri);
    let mut g = vec![T::zero(); op.cols()];
    op.apply_transpose(&r, &mut g);
    norm(&g)
}

/// One LSQR run from `x = 0` on `b`, stopping when the estimated normal
/// residual reaches `target` or after `max_iterations` steps.
fn lsqr_run<T: Scalar, A: LinearOperator<T>>(op: &A, b: &[T], target: T, max_iterations: usize) -> (Vec<T>, usize) {
    let (m, n) = (op.rows(), op.cols());
    let mut x = vec![T::zero(); n];
    let mut u = b.to_vec();
    let mut beta = norm(&u);
    if beta == T::zero() {
        return (x, 0);
    }
    scale(&mut u, beta.recip());
    let mut v = vec![T::zero(); n];
    op.apply_transpose(&u, &mut v);
    let mut alpha = norm(&v);
    if alpha == T::zero() {
        return (x, 0);
    }
    scale(&mut v, alpha.recip());
    let mut w = v.clone();
    let mut phi_bar = beta;
    let mut rho_bar = alpha;
    let mut av = vec![T::zero(); m];
    let mut atu = vec![T::zero(); n];

    for iter in 1..=max_iterations {
        op.apply(&v, &mut av);
        u.iter_mut().zip(&av).for_each(|(ui, &a)| *ui = a - alpha * *ui);
        beta = norm(&u);
        if beta > T::zero() {
            scale(&mut u, beta.recip());
            op.apply_transpose(&u, &mut atu);
            v.iter_mut().zip(&atu).for_each(|(vi, &a)| *vi = a - beta * *vi);
            alpha = norm(&v);
            if alpha > T::zero() {
                scale(&mut v, alpha.recip());
            }
        } else {
            alpha = T::zero();
        }

        let rho = rho_bar.hypot(beta);
        let c = rho_bar / rho;
        let s = beta / rho;
        let theta = s * alpha;
        rho_bar = -c * alpha;
        let phi = c * phi_bar;
        phi_bar = s * phi_bar;

        let step = phi / rho;
        let ratio = theta / rho;
        for ((xi, wi), &vi) in x.iter_mut().zip(w.iter_mut()).zip(&v) {
            *xi = *xi + step * *wi;
            *wi = vi - ratio * *wi;
        }

        // ‖Aᵀr‖ estimate; zero once the Krylov space is exhausted.
        let estimate = phi_bar * alpha * c.abs();
        if estimate <= target || alpha == T::zero() {
            return (x, iter);
        }
    }
    (x, max_iterations)
}

/// LSQR with restarts: after each run the true normal residual is
/// recomputed, and if rounding left it above `target` the solver continues
/// on the remaining residual until the iteration budget is spent.
pub fn lsqr_to<T: Scalar, A: LinearOperator<T>>(op: &A, b: &[T], target: T, max_iterations: usize) -> LsqrOutcome<T> {
    let mut x = vec![T::zero(); op.cols()];
    let mut iterations = 0;
    let mut residual = normal_residual(op, b, &x);
    let mut best = (x.clone(), residual);
    let mut stalled = 0;
    while residual > target && iterations < max_iterations && stalled < 3 {
        let mut r = vec![T::zero(); op.rows()];
        op.apply(&x, &mut r);
        r.iter_mut().zip(b).for_each(|(ri, &bi)| *ri = bi - *ri);
        let (dx, used) = lsqr_run(op, &r, target, max_iterations - iterations);
        iterations += used.max(1);
        x.iter_mut().zip(&dx).for_each(|(xi, &d)| *xi = *xi + d);
        residual = normal_residual(op, b, &x);
        if residual < best.1 {
            best = (x.clone(), residual);
            stalled = 0;
        } else {
            stalled += 1;
        }
    }
    let (x, normal_residual) = best;
    LsqrOutcome { converged: normal_residual <= target, x, iterations, normal_residual }
}

/// Solves the problem to its relative tolerance, or fails with
/// [`Error::NotConverged`] carrying the best iterate.
pub fn iterative_least_squares<T: Scalar, A: LinearOperator<T>>(problem: &LinearLeastSquaresProblem<'_, T, A>) -> Result<Vec<T>> {
    let op = problem.operator;
    if problem.rhs.len() != op.rows() {
        return Err(Error::invalid(format!(
            "right-hand side has length {} but the operator has {} rows",
            problem.rhs.len(),
            op.rows()
        )));
    }
    let mut atb = vec![T::zero(); op.cols()];
    op.apply_transpose(&problem.rhs, &mut atb);
    let target = problem.tolerance * norm(&atb);
    let out = lsqr_to(op, &problem.rhs, target, problem.max_iterations);
    if out.converged {
        Ok(out.x)
    } else {
        Err(Error::NotConverged {
            iterations: out.iterations,
            residual: out.normal_residual.as_f64(),
            best: out.x.iter().map(|x| x.as_f64()).collect(),
        })
    }
}

/// Column-major dense matrix, mostly for tests and small problems.
#[derive(Clone, Debug)]
pub struct DenseOperator<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> DenseOperator<T> {
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let (m, n) = (rows.len(), rows.first().map_or(0, Vec::len));
        let mut data = vec![T::zero(); m * n];
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                data[j * m + i] = x;
            }
        }
        DenseOperator { rows: m, cols: n, data }
    }
}

impl<T: Scalar> LinearOperator<T> for DenseOperator<T> {
    fn rows(&self) -> usize {
        self.rows
    }
    fn cols(&self) -> usize {
        self.cols
    }
    fn apply(&self, x: &[T], y: &mut [T]) {
        y.iter_mut().for_each(|v| *v = T::zero());
        for j in 0..self.cols {
            for i in 0..self.rows {
                y[i] = y[i] + self.data[j * self.rows + i] * x[j];
            }
        }
    }
    fn apply_transpose(&self, y: &[T], x: &mut [T]) {
        for j in 0..self.cols {
            x[j] = (0..self.rows).map(|i| self.data[j * self.rows + i] * y[i]).sum();
        }
    }
}
