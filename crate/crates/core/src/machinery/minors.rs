//! Determinants and Pfaffians of small matrices with polynomial entries.

use crate::exactalg::{Field, Polynomial};

/// Laplace expansion along the first row.
pub(crate) fn determinant<F: Field>(m: &[Vec<Polynomial<F>>], nvars: usize) -> Polynomial<F> {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(nvars);
    }
    let mut acc = Polynomial::zero(nvars);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial<F>>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * &determinant(&minor, nvars);
        acc = if j % 2 == 0 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}

/// Pfaffian of a skew-symmetric matrix of even size (upper triangle used).
pub(crate) fn pfaffian<F: Field>(m: &[Vec<Polynomial<F>>], nvars: usize) -> Polynomial<F> {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(nvars);
    }
    if n % 2 == 1 {
        return Polynomial::zero(nvars);
    }
    let mut acc = Polynomial::zero(nvars);
    for j in 1..n {
        if m[0][j].is_zero() {
            continue;
        }
        let keep: Vec<usize> = (1..n).filter(|&k| k != j).collect();
        let minor: Vec<Vec<Polynomial<F>>> = keep
            .iter()
            .map(|&a| keep.iter().map(|&b| m[a][b].clone()).collect())
            .collect();
        let term = &m[0][j] * &pfaffian(&minor, nvars);
        acc = if j % 2 == 1 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}
