#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strength_core::exactalg::{Field, Matrix, Monomial, Polynomial};
use strength_core::families::random_vector;
use strength_core::machinery::{decomposable_point, ClosedSetPresentation, Sampler};
use strength_core::multilinear::{Coordinates, Flavor, Tensor};
use strength_core::Q;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Q {
    Q::from_i64(n)
}

/// Entries in `[-2, 2]`.
pub fn random_matrix<F: Field>(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix<F> {
    Matrix::from_fn(rows, cols, |_, _| F::from_i64(rng.gen_range(-2..=2)))
}

pub fn random_invertible<F: Field>(n: usize, rng: &mut ChaCha8Rng) -> Matrix<F> {
    loop {
        let m = random_matrix(n, n, rng);
        if m.rank() == n {
            return m;
        }
    }
}

/// `diag(1_U, g)`.
pub fn block_diagonal<F: Field>(du: usize, g: &Matrix<F>) -> Matrix<F> {
    let n = du + g.rows();
    Matrix::from_fn(n, n, |i, j| match (i < du, j < du) {
        (true, true) if i == j => F::one(),
        (false, false) => g[(i - du, j - du)].clone(),
        _ => F::zero(),
    })
}

/// A random polynomial with up to `terms` terms of degree `<= max_deg`.
pub fn random_poly<F: Field>(
    nvars: usize,
    terms: usize,
    max_deg: u32,
    rng: &mut ChaCha8Rng,
) -> Polynomial<F> {
    let mut p = Polynomial::zero(nvars);
    for _ in 0..terms {
        let mut exps = vec![0u32; nvars];
        for _ in 0..rng.gen_range(0..=max_deg) {
            exps[rng.gen_range(0..nvars)] += 1;
        }
        p.add_term(
            Monomial::from_exponents(&exps),
            F::from_i64(rng.gen_range(-4..=4)),
        );
    }
    p
}

/// Decomposable points `u^d`, `u_1 ∧ ... ∧ u_d` or `u_1 ⊗ ... ⊗ u_d`.
pub fn decomposable(flavor: Flavor, d: u32, dims: &[usize], rng: &mut ChaCha8Rng) -> Tensor<Q> {
    decomposable_with(flavor, d, dims, rng, random_vector)
}

/// Like [`decomposable`] with entries in `[-3, 3]`, so that interpolation
/// sees enough distinct points.
pub fn wide_decomposable(
    flavor: Flavor,
    d: u32,
    dims: &[usize],
    rng: &mut ChaCha8Rng,
) -> Tensor<Q> {
    decomposable_with(flavor, d, dims, rng, |n, rng| {
        (0..n).map(|_| q(rng.gen_range(-3..=3))).collect()
    })
}

fn decomposable_with(
    flavor: Flavor,
    d: u32,
    dims: &[usize],
    rng: &mut ChaCha8Rng,
    mut vector: impl FnMut(usize, &mut ChaCha8Rng) -> Vec<Q>,
) -> Tensor<Q> {
    let coords = Coordinates::new(flavor, d, dims).unwrap();
    let us: Vec<Vec<Q>> = match flavor {
        Flavor::Sym => vec![vector(dims[0], rng)],
        Flavor::Alt => (0..d).map(|_| vector(dims[0], rng)).collect(),
        Flavor::Ord => dims.iter().map(|&n| vector(n, rng)).collect(),
    };
    coords
        .tensor(&decomposable_point(&coords, &us).unwrap())
        .unwrap()
}

/// All quadrics in the base coordinates vanishing on `points`, by
/// interpolation: the kernel of the evaluation matrix of degree-2 monomials.
pub fn vanishing_quadrics(coords: &Coordinates, points: &[Tensor<Q>]) -> Vec<Polynomial<Q>> {
    let n = coords.len();
    let monomials: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let values: Vec<Vec<Q>> = points
        .iter()
        .map(|p| coords.coordinates(p).unwrap())
        .collect();
    let m = Matrix::from_fn(points.len(), monomials.len(), |r, c| {
        let (i, j) = monomials[c];
        values[r][i].clone() * values[r][j].clone()
    });
    m.kernel()
        .into_iter()
        .map(|v| {
            let terms = monomials
                .iter()
                .zip(v)
                .map(|(&(i, j), c)| (Monomial::from_pairs([(i, 1), (j, 1)]), c));
            Polynomial::from_terms(n, terms).unwrap()
        })
        .collect()
}

/// The cone over decomposable points (Veronese, Grassmannian or Segre) on
/// the base space, with generators found by interpolation.
/// Generators are interpolated once per process.
pub fn decomposable_locus(flavor: Flavor, d: u32, base: &[usize]) -> ClosedSetPresentation<Q> {
    type Cache = Mutex<HashMap<(Flavor, u32, Vec<usize>), Vec<Polynomial<Q>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let key = (flavor, d, base.to_vec());
    let generators = CACHE
        .get_or_init(Default::default)
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| {
            let coords = Coordinates::new(flavor, d, base).unwrap();
            let mut r = rng(0xdec0);
            let points: Vec<Tensor<Q>> = (0..coords.len() * (coords.len() + 1) / 2 + 5)
                .map(|_| wide_decomposable(flavor, d, base, &mut r))
                .collect();
            vanishing_quadrics(&coords, &points)
        })
        .clone();
    let base_dims = base.to_vec();
    let sampler = Sampler::Custom(Arc::new(move |dim_v: &[usize], rng: &mut ChaCha8Rng| {
        let dims: Vec<usize> = base_dims.iter().zip(dim_v).map(|(u, v)| u + v).collect();
        Ok(decomposable(flavor, d, &dims, rng))
    }));
    ClosedSetPresentation::new(flavor, d, base, generators, sampler, false).unwrap()
}
