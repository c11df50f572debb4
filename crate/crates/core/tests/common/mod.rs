#![allow(dead_code)]

use circular_coords::complex::{total_order, FilteredComplex, OrderedFiltration, Simplex};
use circular_coords::persistence::oracle::{boundary_reduction_pairs, persistent_rank};
use circular_coords::persistence::persistent_cocycles;
use rand::Rng;

/// Random 2-dimensional filtration with at most `max_simplices` simplices.
/// Values sit on a coarse grid so ties are common.
pub fn random_filtration<R: Rng>(rng: &mut R, max_simplices: usize) -> OrderedFiltration<f64> {
    let n = rng.random_range(1..=8usize);
    let mut simplices: Vec<(Simplex, f64)> = Vec::new();
    let mut value = vec![0.0; n];
    for (v, slot) in value.iter_mut().enumerate() {
        *slot = rng.random_range(0..4) as f64 * 0.25;
        simplices.push((Simplex::vertex(v), *slot));
    }
    let mut edges = std::collections::HashMap::new();
    let edge_p = rng.random_range(0.3..1.0);
    for a in 0..n {
        for b in a + 1..n {
            if simplices.len() >= max_simplices || !rng.random_bool(edge_p) {
                continue;
            }
            let x = value[a].max(value[b]) + rng.random_range(0..4) as f64 * 0.25;
            edges.insert((a, b), x);
            simplices.push((Simplex::edge(a, b), x));
        }
    }
    let tri_p = rng.random_range(0.0..0.8);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if simplices.len() >= max_simplices {
                    continue;
                }
                let (Some(&x), Some(&y), Some(&z)) = (edges.get(&(a, b)), edges.get(&(a, c)), edges.get(&(b, c))) else {
                    continue;
                };
                if rng.random_bool(tri_p) {
                    let w = x.max(y).max(z) + rng.random_range(0..3) as f64 * 0.25;
                    simplices.push((Simplex::triangle(a, b, c), w));
                }
            }
        }
    }
    total_order(&FilteredComplex { vertex_count: n, simplices }).expect("generated complex is valid")
}

fn critical_values(f: &OrderedFiltration<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = f.values().to_vec();
    v.dedup();
    v
}

/// Compares interval counts against the persistent rank of every
/// restriction between critical values, in dimensions 0 to 2.
pub fn check_rank_oracle(f: &OrderedFiltration<f64>, p: u32) -> Result<(), String> {
    let diagram = persistent_cocycles(f.clone(), p).map_err(|e| e.to_string())?;
    let crit = critical_values(f);
    for dim in 0..=2 {
        for (a, &i) in crit.iter().enumerate() {
            for &j in &crit[a..] {
                let expected = persistent_rank(f, p, dim, i, j).map_err(|e| e.to_string())?;
                let got = diagram
                    .all_intervals()
                    .iter()
                    .filter(|iv| iv.dimension == dim && iv.birth <= i && iv.death.is_none_or(|d| d > j))
                    .count();
                if got != expected {
                    return Err(format!("p={p} dim={dim} [{i},{j}]: intervals {got}, rank {expected}\n{}", f.dump()));
                }
            }
        }
    }
    Ok(())
}

/// Compares index pairs with the homology boundary-matrix reduction.
pub fn check_homology_pairs(f: &OrderedFiltration<f64>, p: u32) -> Result<(), String> {
    let diagram = persistent_cocycles(f.clone(), p).map_err(|e| e.to_string())?;
    let ours = diagram.index_pairs();
    let theirs = boundary_reduction_pairs(f, p).map_err(|e| e.to_string())?;
    if ours != theirs {
        return Err(format!("p={p}: cohomology {ours:?} vs homology {theirs:?}\n{}", f.dump()));
    }
    Ok(())
}
