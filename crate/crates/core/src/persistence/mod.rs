//! Persistent cohomology with explicit representative cocycles over F_p.
//!
//! Simplices are processed in filtration order while a set of live cocycles
//! is maintained. A new simplex either opens a cocycle (every live cocycle
//! has zero coboundary on it) or closes the youngest live cocycle whose
//! coboundary hits it, after subtracting that cocycle from the older ones
//! with nonzero coboundary.

pub mod oracle;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::cochain::{Cochain, PrimeField, Ring};
use crate::complex::OrderedFiltration;
use crate::error::Result;
use crate::scalar::Scalar;

pub const DEFAULT_PRIME: u32 = 47;

#[derive(Clone, Debug)]
pub struct PersistenceInterval<T> {
    pub dimension: usize,
    pub birth: T,
    /// `None` for intervals that survive the whole filtration.
    pub death: Option<T>,
    pub birth_index: usize,
    pub death_index: Option<usize>,
    /// The cocycle as it stood when the interval closed, or the final cocycle
    /// for infinite intervals. Supported on `birth_index` and later simplices.
    pub representative: Cochain<u32>,
}

impl<T: Scalar> PersistenceInterval<T> {
    pub fn is_infinite(&self) -> bool {
        self.death.is_none()
    }

    /// Birth and death at the same filtration value.
    pub fn is_degenerate(&self) -> bool {
        self.death == Some(self.birth)
    }

    /// `birth <= eps < death`.
    pub fn is_alive_at(&self, eps: T) -> bool {
        self.birth <= eps && self.death.is_none_or(|d| eps < d)
    }

    /// Length with an infinite death replaced by `cap`.
    pub fn length(&self, cap: T) -> T {
        (self.death.unwrap_or(cap) - self.birth).max(T::zero())
    }

    /// Orders by decreasing length (infinite first), then earlier birth.
    fn cmp_by_length(&self, other: &Self) -> Ordering {
        match (self.death, other.death) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => (b - other.birth).partial_cmp(&(a - self.birth)).unwrap_or(Ordering::Equal),
        }
        .then(self.birth.partial_cmp(&other.birth).unwrap_or(Ordering::Equal))
        .then(self.birth_index.cmp(&other.birth_index))
    }
}

#[derive(Clone, Debug)]
pub struct PersistenceDiagram<T> {
    field: PrimeField,
    intervals: Vec<PersistenceInterval<T>>,
    filtration: OrderedFiltration<T>,
}

impl<T: Scalar> PersistenceDiagram<T> {
    pub fn prime(&self) -> u32 {
        self.field.modulus()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn filtration(&self) -> &OrderedFiltration<T> {
        &self.filtration
    }

    /// Every interval including zero-length ones, finite ones in order of
    /// death followed by infinite ones in order of birth.
    pub fn all_intervals(&self) -> &[PersistenceInterval<T>] {
        &self.intervals
    }

    /// Reported intervals: zero-length ones are suppressed.
    pub fn intervals(&self) -> impl Iterator<Item = &PersistenceInterval<T>> + '_ {
        self.intervals.iter().filter(|iv| !iv.is_degenerate())
    }

    pub fn intervals_of_dim(&self, dim: usize) -> impl Iterator<Item = &PersistenceInterval<T>> + '_ {
        self.intervals().filter(move |iv| iv.dimension == dim)
    }

    /// Reported intervals of one dimension, longest first.
    pub fn by_length(&self, dim: usize) -> Vec<&PersistenceInterval<T>> {
        let mut out: Vec<_> = self.intervals_of_dim(dim).collect();
        out.sort_by(|a, b| a.cmp_by_length(b));
        out
    }

    /// Like [`by_length`](Self::by_length), but infinite intervals count
    /// only up to the last filtration value.
    pub fn by_capped_length(&self, dim: usize) -> Vec<&PersistenceInterval<T>> {
        let cap = self.filtration.max_value().unwrap_or_else(T::zero);
        let mut out: Vec<_> = self.intervals_of_dim(dim).collect();
        out.sort_by(|a, b| {
            b.length(cap)
                .partial_cmp(&a.length(cap))
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.cmp_by_length(b))
        });
        out
    }

    /// Scale range where the `k` longest (capped) 1-dimensional intervals
    /// are all alive and the fewest other intervals are. `None` when there
    /// are fewer than `k` intervals or they never coexist.
    pub fn selection_band(&self, k: usize) -> Option<Band<T>> {
        let ranked = self.by_capped_length(1);
        if k == 0 || ranked.len() < k {
            return None;
        }
        let cap = self.filtration.max_value()?;
        let (chosen, rest) = ranked.split_at(k);
        let lo = chosen.iter().map(|iv| iv.birth).fold(T::neg_infinity(), T::max);
        let hi = chosen.iter().map(|iv| iv.death.unwrap_or(cap)).fold(T::infinity(), T::min);
        let all_infinite = chosen.iter().all(|iv| iv.is_infinite());
        if lo > hi || (lo == hi && !all_infinite) {
            return None;
        }
        let others_at = |eps: T| rest.iter().filter(|iv| iv.is_alive_at(eps)).count();
        if lo == hi {
            return Some(Band { lo, hi, others: others_at(lo) });
        }
        let mut cuts = vec![lo, hi];
        for iv in rest {
            cuts.extend([iv.birth, iv.death.unwrap_or(cap)].into_iter().filter(|&x| lo < x && x < hi));
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        cuts.dedup();
        let mut best: Option<Band<T>> = None;
        for w in cuts.windows(2) {
            let band = Band { lo: w[0], hi: w[1], others: others_at(w[0] + (w[1] - w[0]) / T::of(2.0)) };
            let better = match &best {
                None => true,
                Some(b) => band.others < b.others || (band.others == b.others && band.width() > b.width()),
            };
            if better {
                best = Some(band);
            }
        }
        best
    }

    /// `(dimension, birth_index, death_index)` for every interval, sorted.
    pub fn index_pairs(&self) -> Vec<(usize, usize, Option<usize>)> {
        let mut pairs: Vec<_> = self
            .intervals
            .iter()
            .map(|iv| (iv.dimension, iv.birth_index, iv.death_index))
            .collect();
        pairs.sort();
        pairs
    }

    /// Midpoint of the longest 1-dimensional interval, infinite deaths capped
    /// at the largest filtration value.
    pub fn suggested_delta(&self) -> Option<T> {
        let cap = self.filtration.max_value()?;
        let longest = *self.by_length(1).first()?;
        Some(longest.birth + longest.length(cap) / T::of(2.0))
    }
}

/// A range of scales `[lo, hi)` and how many intervals besides the chosen
/// ones are alive inside it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Band<T> {
    pub lo: T,
    pub hi: T,
    pub others: usize,
}

impl<T: Scalar> Band<T> {
    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> T {
        self.lo + self.width() / T::of(2.0)
    }
}

type SparseVec = Vec<(usize, u32)>;

fn coefficient(v: &SparseVec, k: usize) -> u32 {
    v.binary_search_by_key(&k, |&(i, _)| i).map_or(0, |pos| v[pos].1)
}

/// `target - factor * source`, writing into `out`. Calls `fresh` for every
/// position that is nonzero in the result but absent from `target`.
fn axpy_into(
    field: &PrimeField,
    target: &SparseVec,
    factor: u32,
    source: &SparseVec,
    out: &mut SparseVec,
    mut fresh: impl FnMut(usize),
) {
    out.clear();
    let (mut a, mut b) = (0, 0);
    while a < target.len() || b < source.len() {
        let ka = target.get(a).map_or(usize::MAX, |e| e.0);
        let kb = source.get(b).map_or(usize::MAX, |e| e.0);
        match ka.cmp(&kb) {
            Ordering::Less => {
                out.push(target[a]);
                a += 1;
            }
            Ordering::Greater => {
                let x = field.neg(field.mul(factor, source[b].1));
                if x != 0 {
                    out.push((kb, x));
                    fresh(kb);
                }
                b += 1;
            }
            Ordering::Equal => {
                let x = field.sub(target[a].1, field.mul(factor, source[b].1));
                if x != 0 {
                    out.push((ka, x));
                }
                a += 1;
                b += 1;
            }
        }
    }
}

fn to_cochain(dimension: usize, v: &SparseVec) -> Cochain<u32> {
    Cochain::from_map(dimension, v.iter().copied().collect::<BTreeMap<_, _>>())
}

/// Persistent cohomology intervals in dimensions 0 and 1 (and the classes
/// born by triangles), each with a representative cocycle over F_p.
pub fn persistent_cocycles<T: Scalar>(filtration: OrderedFiltration<T>, p: u32) -> Result<PersistenceDiagram<T>> {
    let field = PrimeField::new(p)?;
    let m = filtration.len();
    // Live cocycles keyed by the position of the simplex that opened them.
    let mut live: Vec<Option<SparseVec>> = vec![None; m];
    // Per simplex: ids of live cocycles that may be nonzero there (stale
    // entries are filtered when read).
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut intervals = Vec::new();
    let mut candidates: Vec<usize> = Vec::new();
    let mut coeffs: Vec<(usize, u32)> = Vec::new();
    let mut scratch: SparseVec = Vec::new();

    for k in 0..m {
        candidates.clear();
        for &face in filtration.facets(k) {
            incident[face].retain(|&i| live[i].as_ref().is_some_and(|v| coefficient(v, face) != 0));
            candidates.extend_from_slice(&incident[face]);
        }
        candidates.sort_unstable();
        candidates.dedup();

        coeffs.clear();
        for &i in &candidates {
            let alpha = live[i].as_ref().expect("candidates are live");
            let mut c = 0;
            for (t, &face) in filtration.facets(k).iter().enumerate() {
                let x = coefficient(alpha, face);
                c = if t % 2 == 0 { field.add(c, x) } else { field.sub(c, x) };
            }
            if c != 0 {
                coeffs.push((i, c));
            }
        }

        let Some(&(j, cj)) = coeffs.last() else {
            live[k] = Some(vec![(k, 1)]);
            incident[k].push(k);
            continue;
        };
        let killed = live[j].take().expect("killed cocycle is live");
        let inv = field.inv(cj);
        for &(i, ci) in &coeffs[..coeffs.len() - 1] {
            let factor = field.mul(ci, inv);
            let alpha = live[i].as_mut().expect("live");
            axpy_into(&field, alpha, factor, &killed, &mut scratch, |s| incident[s].push(i));
            std::mem::swap(alpha, &mut scratch);
        }
        intervals.push(PersistenceInterval {
            dimension: filtration.dim(j),
            birth: filtration.value(j),
            death: Some(filtration.value(k)),
            birth_index: j,
            death_index: Some(k),
            representative: to_cochain(filtration.dim(j), &killed),
        });
    }

    for (i, alpha) in live.iter().enumerate() {
        if let Some(alpha) = alpha {
            intervals.push(PersistenceInterval {
                dimension: filtration.dim(i),
                birth: filtration.value(i),
                death: None,
                birth_index: i,
                death_index: None,
                representative: to_cochain(filtration.dim(i), alpha),
            });
        }
    }
    Ok(PersistenceDiagram { field, intervals, filtration })
}

/// One-dimensional reported intervals alive at `delta`, longest first.
pub fn live_cocycles_at<T: Scalar>(diagram: &PersistenceDiagram<T>, delta: T) -> Vec<&PersistenceInterval<T>> {
    let mut out: Vec<_> = diagram.intervals_of_dim(1).filter(|iv| iv.is_alive_at(delta)).collect();
    out.sort_by(|a, b| a.cmp_by_length(b));
    out
}

/// Diagram table: `dimension,birth,death` with an empty death for infinite
/// intervals. Only reported intervals of dimension 0 and 1 are written.
pub fn diagram_csv<T: Scalar>(diagram: &PersistenceDiagram<T>) -> String {
    let mut out = String::from("dimension,birth,death\n");
    for iv in diagram.intervals().filter(|iv| iv.dimension <= 1) {
        let death = iv.death.map(|d| d.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{},{}\n", iv.dimension, iv.birth, death));
    }
    out
}
