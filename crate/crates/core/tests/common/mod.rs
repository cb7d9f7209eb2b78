//! Brute-force reference implementations. Nothing here calls the lattice
//! code: subgroups are closures, annihilators are filters over the whole
//! dual, cosets are orbits.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_complex::Complex64;
use th_core::{GroupElement, GroupSpec};

pub type Set = BTreeSet<Vec<u64>>;

pub fn el(spec: &GroupSpec, coords: &[u64]) -> GroupElement {
    let c: Vec<i64> = coords.iter().map(|&x| x as i64).collect();
    spec.element(&c).unwrap()
}

pub fn coords(set: &[GroupElement]) -> Set {
    set.iter().map(|e| e.coords().to_vec()).collect()
}

/// All coordinate vectors, odometer order.
pub fn all(spec: &GroupSpec) -> Vec<Vec<u64>> {
    let n = spec.factors();
    let mut out = vec![vec![]];
    for &f in n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..f).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn add(spec: &GroupSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    spec.factors()
        .iter()
        .zip(a.iter().zip(b))
        .map(|(&n, (&x, &y))| (x + y) % n)
        .collect()
}

pub fn closure(spec: &GroupSpec, gens: &[Vec<u64>]) -> Set {
    let zero = vec![0; spec.rank()];
    let mut seen: Set = [zero.clone()].into();
    let mut frontier = vec![zero];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = add(spec, &p, g);
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    seen
}

/// Every subgroup, as the distinct closures of pairs of elements. Enough for
/// groups with at most two invariant factors.
pub fn all_subgroups(spec: &GroupSpec) -> Vec<Set> {
    assert!(spec.rank() <= 2);
    let elems = all(spec);
    let mut out: BTreeSet<Set> = BTreeSet::new();
    for a in &elems {
        for b in &elems {
            if a <= b {
                out.insert(closure(spec, &[a.clone(), b.clone()]));
            }
        }
    }
    out.into_iter().collect()
}

/// `Σ γ_j x_j / n_j` as `(s, L)` with `L = ∏ n_j`, `s ∈ [0, L)`.
pub fn pairing_frac(spec: &GroupSpec, gamma: &[u64], x: &[u64]) -> (u128, u128) {
    let l: u128 = spec.factors().iter().map(|&n| n as u128).product();
    let s = spec
        .factors()
        .iter()
        .zip(gamma.iter().zip(x))
        .map(|(&n, (&g, &y))| (g as u128 * y as u128 % n as u128) * (l / n as u128))
        .sum::<u128>()
        % l;
    (s, l)
}

pub fn chi(spec: &GroupSpec, gamma: &[u64], x: &[u64]) -> Complex64 {
    let (s, l) = pairing_frac(spec, gamma, x);
    Complex64::from_polar(1.0, std::f64::consts::TAU * s as f64 / l as f64)
}

pub fn annihilator(spec: &GroupSpec, h: &Set) -> Set {
    all(spec)
        .into_iter()
        .filter(|g| h.iter().all(|y| pairing_frac(spec, g, y).0 == 0))
        .collect()
}

/// Partition of the whole group into `λ`-cosets.
pub fn cosets(spec: &GroupSpec, lambda: &Set) -> Vec<Set> {
    let mut left: Set = all(spec).into_iter().collect();
    let mut out = Vec::new();
    while let Some(g) = left.iter().next().cloned() {
        let c: Set = lambda.iter().map(|l| add(spec, &g, l)).collect();
        for p in &c {
            left.remove(p);
        }
        out.push(c);
    }
    out
}

pub fn coset_hits(cosets: &[Set], t: &Set) -> Vec<usize> {
    cosets.iter().map(|c| c.intersection(t).count()).collect()
}

pub fn brute_is_transversal(cosets: &[Set], t: &Set) -> bool {
    coset_hits(cosets, t).iter().all(|&k| k == 1)
}

pub fn brute_is_partial(cosets: &[Set], t: &Set) -> bool {
    coset_hits(cosets, t).iter().all(|&k| k <= 1)
}

/// All subsets of `items` with size in `lo..=hi`.
pub fn subsets<T: Clone>(items: &[T], lo: usize, hi: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec<T: Clone>(items: &[T], start: usize, lo: usize, hi: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() >= lo {
            out.push(cur.clone());
        }
        if cur.len() == hi {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            rec(items, i + 1, lo, hi, cur, out);
            cur.pop();
        }
    }
    rec(items, 0, lo, hi, &mut cur, &mut out);
    out
}

/// Rank of a complex matrix by Gaussian elimination with partial pivoting.
pub fn gauss_rank(rows: &[Vec<Complex64>], tol: f64) -> usize {
    let mut m: Vec<Vec<Complex64>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).max_by(|&a, &b| m[a][c].norm().total_cmp(&m[b][c].norm())) else {
            break;
        };
        if m[p][c].norm() <= tol {
            continue;
        }
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank {
                let f = m[r][c] / m[rank][c];
                for k in c..cols {
                    let v = m[rank][k];
                    m[r][k] -= f * v;
                }
            }
        }
        rank += 1;
    }
    rank
}
