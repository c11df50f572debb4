//! Lifting mod-p cocycles to integer cocycles.

use crate::cochain::{coboundary1, Cochain, Integers, PrimeField, Ring};
use crate::complex::OrderedFiltration;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Primes tried in turn when a lift hits p-torsion.
pub const RETRY_PRIMES: [u32; 4] = [47, 53, 59, 61];

#[derive(Clone, Debug, PartialEq)]
pub struct LiftResult {
    pub cocycle: Cochain<i64>,
    pub prime_used: u32,
}

/// Representative of `c mod p` closest to zero: `[-(p-1)/2, (p-1)/2]` for odd
/// `p`, `{0, 1}` for `p = 2`.
pub fn centered_representative(c: u32, p: u32) -> i64 {
    let c = (c % p) as i64;
    let p = p as i64;
    if p > 2 && c > (p - 1) / 2 {
        c - p
    } else {
        c
    }
}

/// Replaces each coefficient by its representative nearest zero and checks
/// the result is an integer cocycle.
///
/// Fails with [`Error::InvalidInput`] if `alpha_p` is not a cocycle mod p and
/// with [`Error::TorsionObstruction`] if the lift is not a cocycle over ℤ;
/// the caller is expected to rerun persistence with another prime.
pub fn lift_cocycle<T: Scalar>(alpha_p: &Cochain<u32>, field: &PrimeField, complex: &OrderedFiltration<T>) -> Result<LiftResult> {
    if alpha_p.dimension() != 1 {
        return Err(Error::invalid(format!("expected a 1-cochain, got dimension {}", alpha_p.dimension())));
    }
    if coboundary1(field, alpha_p, complex)?.support_len() != 0 {
        return Err(Error::invalid("input is not a cocycle modulo p"));
    }
    let p = field.modulus();
    let cocycle = alpha_p.map(|c| centered_representative(c, p));
    if coboundary1(&Integers, &cocycle, complex)?.support_len() != 0 {
        return Err(Error::TorsionObstruction { prime: p });
    }
    Ok(LiftResult { cocycle, prime_used: p })
}

/// Reduction of an integer cochain modulo p.
pub fn reduce_mod_p(alpha: &Cochain<i64>, field: &PrimeField) -> Cochain<u32> {
    let entries = alpha.iter().map(|(k, x)| (k, field.reduce(x))).filter(|&(_, x)| !field.is_zero(x));
    Cochain::from_map(alpha.dimension(), entries.collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{total_order, FilteredComplex, Simplex};
    use crate::persistence::persistent_cocycles;

    #[test]
    fn representatives() {
        assert_eq!(centered_representative(46, 47), -1);
        assert_eq!(centered_representative(1, 47), 1);
        assert_eq!(centered_representative(23, 47), 23);
        assert_eq!(centered_representative(24, 47), -23);
        assert_eq!(centered_representative(1, 2), 1);
        assert_eq!(centered_representative(2, 3), -1);
    }

    fn hollow_triangle() -> OrderedFiltration<f64> {
        let mut s: Vec<(Simplex, f64)> = (0..3).map(|v| (Simplex::vertex(v), 0.0)).collect();
        s.extend([(Simplex::edge(0, 1), 1.0), (Simplex::edge(0, 2), 1.0), (Simplex::edge(1, 2), 1.0)]);
        total_order(&FilteredComplex { vertex_count: 3, simplices: s }).unwrap()
    }

    #[test]
    fn three_cycle_lift() {
        let c = hollow_triangle();
        let field = PrimeField::new(47).unwrap();
        let e01 = c.index_of(&Simplex::edge(0, 1)).unwrap();
        let alpha = Cochain::from_entries(&field, 1, &c, [(e01, 1)]).unwrap();
        let lifted = lift_cocycle(&alpha, &field, &c).unwrap();
        assert_eq!(lifted.cocycle.iter().collect::<Vec<_>>(), vec![(e01, 1)]);
        assert_eq!(lifted.prime_used, 47);
        assert_eq!(reduce_mod_p(&lifted.cocycle, &field), alpha);
    }

    /// Six-vertex triangulation of the real projective plane.
    pub(crate) fn projective_plane() -> OrderedFiltration<f64> {
        let triangles = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
            [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3],
        ];
        let mut set = std::collections::BTreeSet::new();
        for t in triangles {
            set.insert(Simplex::triangle(t[0], t[1], t[2]));
            for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                set.insert(Simplex::edge(a, b));
            }
        }
        let mut s: Vec<(Simplex, f64)> = (0..6).map(|v| (Simplex::vertex(v), 0.0)).collect();
        s.extend(set.into_iter().map(|x| (x, x.dim() as f64)));
        total_order(&FilteredComplex { vertex_count: 6, simplices: s }).unwrap()
    }

    #[test]
    fn two_torsion_blocks_the_lift() {
        let rp2 = projective_plane();
        let diagram = persistent_cocycles(rp2.clone(), 2).unwrap();
        let survivors: Vec<_> = diagram.intervals_of_dim(1).filter(|iv| iv.is_infinite()).collect();
        assert_eq!(survivors.len(), 1);
        let err = lift_cocycle(&survivors[0].representative, &diagram.field(), &rp2).unwrap_err();
        assert!(matches!(err, Error::TorsionObstruction { prime: 2 }));
        // Over F_3 the class disappears altogether.
        let odd = persistent_cocycles(rp2, 3).unwrap();
        assert_eq!(odd.intervals_of_dim(1).filter(|iv| iv.is_infinite()).count(), 0);
    }

    #[test]
    fn rejects_non_cocycles() {
        let rp2 = projective_plane();
        let field = PrimeField::new(47).unwrap();
        let e = rp2.index_of(&Simplex::edge(0, 1)).unwrap();
        let alpha = Cochain::from_entries(&field, 1, &rp2, [(e, 1)]).unwrap();
        assert!(matches!(lift_cocycle(&alpha, &field, &rp2), Err(Error::InvalidInput(_))));
    }
}
