//! Integer lattice reductions behind subgroup canonical forms and quotients.
//!
//! Every lattice handled here lives in `Z^r` and contains `diag(n_1, ..., n_r)`,
//! so coordinates can be reduced modulo the corresponding `n_j` without leaving
//! the lattice. All arithmetic is `i128` with such reductions after each step.

use num_integer::Integer;
use num_rational::Ratio;

/// Row-style Hermite normal form of the lattice spanned by `generators` and
/// `moduli[j] * e_j`.
///
/// The result is upper triangular, `r x r`, with pivots `d_i > 0` dividing
/// `moduli[i]` and every entry above a pivot reduced into `[0, d_i)`. It is
/// unique for the lattice, so two generating sets span the same lattice iff
/// their forms are equal.
pub(crate) fn hermite_with_moduli(moduli: &[u64], generators: &[Vec<i64>]) -> Vec<Vec<u64>> {
    let r = moduli.len();
    let m: Vec<i128> = moduli.iter().map(|&n| n as i128).collect();
    let reduce_tail = |v: &mut [i128], from: usize| {
        for j in from..r {
            v[j] = v[j].rem_euclid(m[j]);
        }
    };

    let mut residual: Vec<Vec<i128>> = generators
        .iter()
        .map(|g| {
            let mut v: Vec<i128> = g.iter().map(|&x| x as i128).collect();
            reduce_tail(&mut v, 0);
            v
        })
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();

    let mut basis: Vec<Vec<i128>> = Vec::with_capacity(r);
    for i in 0..r {
        let mut pivot = vec![0i128; r];
        pivot[i] = m[i];
        for w in residual.iter_mut() {
            // Column-i entries stay in [0, n_i], so plain Euclid keeps them non-negative.
            while w[i] != 0 {
                let q = pivot[i] / w[i];
                for j in i..r {
                    pivot[j] -= q * w[j];
                }
                reduce_tail(&mut pivot, i + 1);
                std::mem::swap(&mut pivot, w);
            }
            reduce_tail(w, i + 1);
        }
        residual.retain(|v| v.iter().any(|&x| x != 0));
        debug_assert!(pivot[i] > 0);
        basis.push(pivot);
    }

    for i in 0..r {
        let d = basis[i][i];
        for k in 0..i {
            let q = basis[k][i].div_euclid(d);
            if q != 0 {
                let (head, tail) = basis.split_at_mut(i);
                let row = &mut head[k];
                for j in i..r {
                    row[j] -= q * tail[0][j];
                }
                reduce_tail(row, i + 1);
            }
        }
    }
    basis
        .into_iter()
        .map(|row| row.into_iter().map(|x| x as u64).collect())
        .collect()
}

/// Basis rows of the lattice `{ g in Z^r : g . diag(n)^{-1} . y in Z for all y in K }`,
/// where `K` is given by an upper-triangular Hermite basis containing `diag(n)`.
///
/// This is the dual lattice of `K` rescaled by `diag(n)`; the rows are
/// `(B^{-1})^T diag(n)` and come out integral because `K ⊇ diag(n) Z^r`.
pub(crate) fn scaled_dual_rows(moduli: &[u64], basis: &[Vec<u64>]) -> Vec<Vec<i64>> {
    let r = moduli.len();
    let inv = upper_triangular_inverse(basis);
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let v = inv[j][i] * Ratio::from_integer(moduli[j] as i128);
                    assert!(v.is_integer(), "dual lattice row is not integral");
                    v.to_integer().rem_euclid(moduli[j] as i128) as i64
                })
                .collect()
        })
        .collect()
}

fn upper_triangular_inverse(basis: &[Vec<u64>]) -> Vec<Vec<Ratio<i128>>> {
    let r = basis.len();
    let b = |i: usize, j: usize| Ratio::from_integer(basis[i][j] as i128);
    let zero = Ratio::from_integer(0);
    let mut inv = vec![vec![zero; r]; r];
    // Solve B X = I column by column with back substitution.
    for col in 0..r {
        for i in (0..=col).rev() {
            let mut acc = if i == col { Ratio::from_integer(1) } else { zero };
            for k in (i + 1)..=col {
                acc -= b(i, k) * inv[k][col];
            }
            inv[i][col] = acc / b(i, i);
        }
    }
    inv
}

/// Diagonal of the Smith normal form of a square non-singular integer matrix,
/// as a divisibility chain `s_1 | s_2 | ... | s_r` of positive integers.
pub(crate) fn smith_diagonal(matrix: &[Vec<u64>]) -> Vec<u64> {
    let n = matrix.len();
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut diag = Vec::with_capacity(n);

    for t in 0..n {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&a, t) else {
                // Remaining block is zero; only happens for singular input.
                diag.extend(std::iter::repeat_n(0, n - t));
                return diag;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }

            let p = a[t][t];
            let mut dirty = false;
            for i in (t + 1)..n {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..n {
                        a[i][j] -= q * a[t][j];
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in (t + 1)..n {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if dirty {
                continue;
            }

            let offender = ((t + 1)..n)
                .find(|&i| ((t + 1)..n).any(|j| !a[i][j].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    for j in t..n {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].unsigned_abs() as u64);
    }
    diag
}

fn smallest_nonzero(a: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let n = a.len();
    let mut best: Option<(usize, usize)> = None;
    for i in t..n {
        for j in t..n {
            if a[i][j] != 0 {
                match best {
                    Some((bi, bj)) if a[bi][bj].abs() <= a[i][j].abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
    }
    best
}
