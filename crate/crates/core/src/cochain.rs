//! Cochains on an ordered filtration and the coboundary maps.
//!
//! Orientation is fixed by sorted vertex order: `(d0 f)(ab) = f(b) - f(a)` and
//! `(d1 a)(abc) = a(bc) - a(ac) + a(ab)`.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::marker::PhantomData;

use crate::complex::OrderedFiltration;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Coefficient arithmetic for cochains.
pub trait Ring {
    type Elem: Copy + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;

    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.add(a, self.neg(b))
    }

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = i64;

    fn zero(&self) -> i64 {
        0
    }
    fn one(&self) -> i64 {
        1
    }
    fn add(&self, a: i64, b: i64) -> i64 {
        a + b
    }
    fn neg(&self, a: i64) -> i64 {
        -a
    }
}

/// The prime field F_p with canonical representatives in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::invalid(format!("prime {p} is too large")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "zero has no inverse");
        let (mut r0, mut r1) = (self.p as i64, (a % self.p) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        self.reduce(t0)
    }
}

impl Ring for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Copy, Debug)]
pub struct Reals<T>(PhantomData<T>);

impl<T> Default for Reals<T> {
    fn default() -> Self {
        Reals(PhantomData)
    }
}

impl<T: Scalar> Ring for Reals<T> {
    type Elem = T;

    fn zero(&self) -> T {
        T::zero()
    }
    fn one(&self) -> T {
        T::one()
    }
    fn add(&self, a: T, b: T) -> T {
        a + b
    }
    fn neg(&self, a: T) -> T {
        -a
    }
}

/// Sparse cochain: coefficients keyed by simplex position in an
/// [`OrderedFiltration`]; absent keys are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<E> {
    dimension: usize,
    values: BTreeMap<usize, E>,
}

impl<E: Copy + PartialEq + Debug> Cochain<E> {
    pub fn zero(dimension: usize) -> Self {
        Cochain { dimension, values: BTreeMap::new() }
    }

    /// Builds a cochain, checking every key names a simplex of `dimension`.
    /// Zero coefficients are dropped.
    pub fn from_entries<T: Scalar, R: Ring<Elem = E>>(
        ring: &R,
        dimension: usize,
        complex: &OrderedFiltration<T>,
        entries: impl IntoIterator<Item = (usize, E)>,
    ) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (k, v) in entries {
            if k >= complex.len() || complex.dim(k) != dimension {
                return Err(Error::invalid(format!("position {k} is not a {dimension}-simplex")));
            }
            if !ring.is_zero(v) {
                values.insert(k, v);
            }
        }
        Ok(Cochain { dimension, values })
    }

    pub(crate) fn from_map(dimension: usize, values: BTreeMap<usize, E>) -> Self {
        Cochain { dimension, values }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn get(&self, k: usize) -> Option<E> {
        self.values.get(&k).copied()
    }

    /// Nonzero entries in increasing position order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, E)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    /// Drops entries at positions `>= len`, restricting to a prefix subcomplex.
    pub fn restrict(&self, len: usize) -> Self {
        Cochain {
            dimension: self.dimension,
            values: self.values.range(..len).map(|(&k, &v)| (k, v)).collect(),
        }
    }

    pub fn map<F: Copy + PartialEq + Debug>(&self, mut f: impl FnMut(E) -> F) -> Cochain<F> {
        Cochain {
            dimension: self.dimension,
            values: self.values.iter().map(|(&k, &v)| (k, f(v))).collect(),
        }
    }
}

fn value_or<R: Ring>(ring: &R, c: &Cochain<R::Elem>, k: usize) -> R::Elem {
    c.get(k).unwrap_or_else(|| ring.zero())
}

/// Applies the coboundary to a cochain of dimension `dim`, evaluating on every
/// `(dim + 1)`-simplex of the complex.
fn coboundary<T: Scalar, R: Ring>(
    ring: &R,
    c: &Cochain<R::Elem>,
    complex: &OrderedFiltration<T>,
    dim: usize,
) -> Result<Cochain<R::Elem>> {
    if c.dimension != dim {
        return Err(Error::invalid(format!(
            "expected a {dim}-cochain, got dimension {}",
            c.dimension
        )));
    }
    let mut values = BTreeMap::new();
    for k in complex.indices_of_dim(dim + 1) {
        let mut acc = ring.zero();
        for (t, &face) in complex.facets(k).iter().enumerate() {
            let x = value_or(ring, c, face);
            acc = if t % 2 == 0 { ring.add(acc, x) } else { ring.sub(acc, x) };
        }
        if !ring.is_zero(acc) {
            values.insert(k, acc);
        }
    }
    Ok(Cochain { dimension: dim + 1, values })
}

/// `(d0 f)(ab) = f(b) - f(a)` on every edge.
pub fn coboundary0<T: Scalar, R: Ring>(
    ring: &R,
    f: &Cochain<R::Elem>,
    complex: &OrderedFiltration<T>,
) -> Result<Cochain<R::Elem>> {
    coboundary(ring, f, complex, 0)
}

/// `(d1 a)(abc) = a(bc) - a(ac) + a(ab)` on every triangle.
pub fn coboundary1<T: Scalar, R: Ring>(
    ring: &R,
    alpha: &Cochain<R::Elem>,
    complex: &OrderedFiltration<T>,
) -> Result<Cochain<R::Elem>> {
    coboundary(ring, alpha, complex, 1)
}

/// Adjoint of `d0` for the standard inner products: each edge `ab` sends
/// `-alpha(ab)` to `a` and `+alpha(ab)` to `b`.
pub fn adjoint0<T: Scalar>(alpha: &Cochain<T>, complex: &OrderedFiltration<T>) -> Result<Cochain<T>> {
    if alpha.dimension != 1 {
        return Err(Error::invalid(format!("expected a 1-cochain, got dimension {}", alpha.dimension)));
    }
    let mut acc: BTreeMap<usize, T> = BTreeMap::new();
    for (k, x) in alpha.iter() {
        let f = complex.facets(k);
        // facet 0 omits the tail, so it is the head vertex b
        let head = acc.entry(f[0]).or_insert_with(T::zero);
        *head = *head + x;
        let tail = acc.entry(f[1]).or_insert_with(T::zero);
        *tail = *tail - x;
    }
    acc.retain(|_, v| *v != T::zero());
    Ok(Cochain { dimension: 0, values: acc })
}

pub fn inner<T: Scalar>(a: &Cochain<T>, b: &Cochain<T>) -> T {
    a.iter().filter_map(|(k, x)| b.get(k).map(|y| x * y)).sum()
}

pub fn norm<T: Scalar>(a: &Cochain<T>) -> T {
    a.iter().map(|(_, x)| x * x).sum::<T>().sqrt()
}

/// One line per nonzero edge coefficient: `v0 v1 coefficient`.
pub fn dump_cocycle<T: Scalar, E: Copy + PartialEq + Debug + std::fmt::Display>(
    c: &Cochain<E>,
    complex: &OrderedFiltration<T>,
) -> String {
    let mut out = String::new();
    for (k, x) in c.iter() {
        let v = complex.simplex(k).vertices();
        out.push_str(&format!("{} {} {}\n", v[0], v[1], x));
    }
    out
}

/// Reads the edge cocycle dump format against a complex.
pub fn parse_cocycle<T: Scalar, R: Ring>(
    ring: &R,
    text: &str,
    complex: &OrderedFiltration<T>,
) -> Result<Cochain<R::Elem>>
where
    R::Elem: std::str::FromStr,
{
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: lineno + 1, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(format!("expected `v0 v1 coefficient`, got {line:?}")));
        }
        let a: usize = fields[0].parse().map_err(|_| err(format!("bad vertex {:?}", fields[0])))?;
        let b: usize = fields[1].parse().map_err(|_| err(format!("bad vertex {:?}", fields[1])))?;
        let x: R::Elem = fields[2].parse().map_err(|_| err(format!("bad coefficient {:?}", fields[2])))?;
        if a == b {
            return Err(err("degenerate edge".into()));
        }
        let k = complex
            .index_of(&crate::complex::Simplex::edge(a, b))
            .ok_or_else(|| err(format!("edge ({a}, {b}) is not in the complex")))?;
        let x = if a < b { x } else { ring.neg(x) };
        entries.push((k, x));
    }
    Cochain::from_entries(ring, 1, complex, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{rips_2skeleton, total_order, Simplex};
    use crate::metric::DistanceMatrix;

    fn triangle() -> OrderedFiltration<f64> {
        let d = DistanceMatrix::from_rows(vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]]).unwrap();
        total_order(&rips_2skeleton(&d, 2.0)).unwrap()
    }

    fn vertex(c: &OrderedFiltration<f64>, v: usize) -> usize {
        c.index_of(&Simplex::vertex(v)).unwrap()
    }

    fn edge(c: &OrderedFiltration<f64>, a: usize, b: usize) -> usize {
        c.index_of(&Simplex::edge(a, b)).unwrap()
    }

    #[test]
    fn field_arithmetic() {
        let f = PrimeField::new(47).unwrap();
        for a in 1..47 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert_eq!(f.neg(1), 46);
        assert_eq!(f.sub(3, 5), 45);
        assert_eq!(f.reduce(-1), 46);
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(49).is_err());
        assert!(is_prime(2) && is_prime(61) && !is_prime(91));
    }

    #[test]
    fn d0_examples() {
        let c = triangle();
        let z = Integers;
        let f = Cochain::from_entries(&z, 0, &c, [(vertex(&c, 0), 1), (vertex(&c, 1), 3)]).unwrap();
        let df = coboundary0(&z, &f, &c).unwrap();
        assert_eq!(df.get(edge(&c, 0, 1)), Some(2));

        let constant = Cochain::from_entries(&z, 0, &c, (0..3).map(|v| (vertex(&c, v), 7))).unwrap();
        assert_eq!(coboundary0(&z, &constant, &c).unwrap().support_len(), 0);

        let ind = Cochain::from_entries(&z, 0, &c, [(vertex(&c, 1), 1)]).unwrap();
        let d = coboundary0(&z, &ind, &c).unwrap();
        assert_eq!(d.get(edge(&c, 0, 1)), Some(1));
        assert_eq!(d.get(edge(&c, 1, 2)), Some(-1));
        assert_eq!(d.get(edge(&c, 0, 2)), None);
    }

    #[test]
    fn d1_examples() {
        let c = triangle();
        let z = Integers;
        let alpha = Cochain::from_entries(&z, 1, &c, [(edge(&c, 0, 1), 1), (edge(&c, 1, 2), 1), (edge(&c, 0, 2), 2)]).unwrap();
        assert_eq!(coboundary1(&z, &alpha, &c).unwrap().support_len(), 0);
        let elementary = Cochain::from_entries(&z, 1, &c, [(edge(&c, 0, 1), 1)]).unwrap();
        let d = coboundary1(&z, &elementary, &c).unwrap();
        assert_eq!(d.get(c.len() - 1), Some(1));
    }

    #[test]
    fn dimension_mismatch() {
        let c = triangle();
        let z = Integers;
        let alpha = Cochain::from_entries(&z, 1, &c, [(edge(&c, 0, 1), 1)]).unwrap();
        assert!(matches!(coboundary0(&z, &alpha, &c), Err(Error::InvalidInput(_))));
        let f = Cochain::<i64>::zero(0);
        assert!(coboundary1(&z, &f, &c).is_err());
        assert!(Cochain::from_entries(&z, 1, &c, [(vertex(&c, 0), 1)]).is_err());
    }

    #[test]
    fn adjoint_examples() {
        let c = triangle();
        let r = Reals::<f64>::default();
        let single = Cochain::from_entries(&r, 1, &c, [(edge(&c, 0, 1), 1.0)]).unwrap();
        let d = adjoint0(&single, &c).unwrap();
        assert_eq!(d.get(vertex(&c, 0)), Some(-1.0));
        assert_eq!(d.get(vertex(&c, 1)), Some(1.0));

        let third = 1.0 / 3.0;
        let harmonic = Cochain::from_entries(&r, 1, &c, [(edge(&c, 0, 1), third), (edge(&c, 0, 2), -third), (edge(&c, 1, 2), third)]).unwrap();
        let d = adjoint0(&harmonic, &c).unwrap();
        assert!(d.iter().all(|(_, x)| x.abs() < 1e-15));

        assert_eq!(adjoint0(&Cochain::<f64>::zero(1), &c).unwrap().support_len(), 0);
        assert!(adjoint0(&Cochain::<f64>::zero(0), &c).is_err());
    }

    #[test]
    fn cocycle_dump_round_trip() {
        let c = triangle();
        let f = PrimeField::new(47).unwrap();
        let alpha = Cochain::from_entries(&f, 1, &c, [(edge(&c, 0, 1), 46), (edge(&c, 1, 2), 3)]).unwrap();
        let text = dump_cocycle(&alpha, &c);
        assert_eq!(text, "0 1 46\n1 2 3\n");
        assert_eq!(parse_cocycle(&f, &text, &c).unwrap(), alpha);
        // Reversed orientation negates.
        let flipped = parse_cocycle(&f, "1 0 1\n", &c).unwrap();
        assert_eq!(flipped.get(edge(&c, 0, 1)), Some(46));
        assert!(parse_cocycle(&f, "0 5 1\n", &c).is_err());
    }
}
