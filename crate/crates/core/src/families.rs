//! Built-in example tensors and random generators. All randomness comes
//! from the caller's seeded generator.

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Monomial, Polynomial};
use crate::multilinear::{AltTensor, Coordinates, Flavor, OrdTensor, Split, SymTensor, Tensor};
use crate::strength::{CertTerm, StrengthCertificate};

/// `x_1^d + ... + x_n^d`.
pub fn power_sum<F: Field>(d: u32, n: usize) -> Result<Tensor<F>> {
    if d == 0 || n == 0 {
        return Err(Error::invalid("power_sum needs d >= 1 and n >= 1"));
    }
    let terms = (0..n).map(|i| (Monomial::var_pow(i, d), F::one()));
    Ok(Tensor::Sym(SymTensor::new(
        d,
        Polynomial::from_terms(n, terms)?,
    )?))
}

/// `x_1 y_1 z_1 + ... + x_n y_n z_n` in the `3n` variables
/// `x_1, y_1, z_1, x_2, ...`.
pub fn triple_product<F: Field>(n: usize) -> Result<Tensor<F>> {
    if n == 0 {
        return Err(Error::invalid("triple_product needs n >= 1"));
    }
    let terms = (0..n).map(|i| {
        (
            Monomial::from_pairs([(3 * i, 1), (3 * i + 1, 1), (3 * i + 2, 1)]),
            F::one(),
        )
    });
    Ok(Tensor::Sym(SymTensor::new(
        3,
        Polynomial::from_terms(3 * n, terms)?,
    )?))
}

/// Small integer in `[-bound, bound]`.
pub fn random_scalar<F: Field>(rng: &mut impl Rng, bound: i64) -> F {
    F::from_i64(rng.gen_range(-bound..=bound))
}

pub fn random_vector<F: Field>(n: usize, rng: &mut impl Rng) -> Vec<F> {
    (0..n).map(|_| random_scalar(rng, 2)).collect()
}

/// Every coordinate drawn from `[-3, 3]`.
pub fn random_dense<F: Field>(
    flavor: Flavor,
    d: u32,
    dims: &[usize],
    rng: &mut impl Rng,
) -> Result<Tensor<F>> {
    let coords = Coordinates::new(flavor, d, dims)?;
    let values: Vec<F> = (0..coords.len()).map(|_| random_scalar(rng, 3)).collect();
    coords.tensor(&values)
}

fn random_nonzero<F: Field>(
    flavor: Flavor,
    d: u32,
    dims: &[usize],
    rng: &mut impl Rng,
) -> Result<Tensor<F>> {
    if Coordinates::new(flavor, d, dims)?.is_empty() {
        return Err(Error::invalid(format!(
            "the space of degree-{d} {flavor} tensors on {dims:?} is zero"
        )));
    }
    loop {
        let t = random_dense(flavor, d, dims, rng)?;
        if !t.is_zero() {
            return Ok(t);
        }
    }
}

/// A random split of degree `d`: `e` in `1..=d/2` (sym/alt) or a nonempty
/// proper slot set (ord).
pub fn random_split(flavor: Flavor, d: u32, rng: &mut impl Rng) -> Result<Split> {
    if d < 2 {
        return Err(Error::invalid("products need degree at least 2"));
    }
    Ok(match flavor {
        Flavor::Sym | Flavor::Alt => Split::Degree(rng.gen_range(1..=d / 2)),
        Flavor::Ord => {
            let mask = rng.gen_range(1u64..(1 << d) - 1);
            Split::Slots((0..d as usize).filter(|&j| mask >> j & 1 == 1).collect())
        }
    })
}

/// A sum of `k` random products together with that decomposition, so the
/// result has strength at most `k` by construction.
pub fn border_strength<F: Field>(
    flavor: Flavor,
    d: u32,
    dims: &[usize],
    k: usize,
    rng: &mut impl Rng,
) -> Result<StrengthCertificate<F>> {
    flavor.check_dims(d, dims)?;
    let mut terms = Vec::with_capacity(k);
    let mut target = Tensor::zero(flavor, d, dims)?;
    for _ in 0..k {
        let split = random_split(flavor, d, rng)?;
        let (rd, sd, re, se) = match &split {
            Split::Degree(e) => (dims.to_vec(), dims.to_vec(), *e, d - e),
            Split::Slots(j) => {
                let rest = Split::complement(j, d);
                (
                    j.iter().map(|&s| dims[s]).collect(),
                    rest.iter().map(|&s| dims[s]).collect(),
                    j.len() as u32,
                    rest.len() as u32,
                )
            }
        };
        let r = random_nonzero(flavor, re, &rd, rng)?;
        let s = random_nonzero(flavor, se, &sd, rng)?;
        target = target.add(&Tensor::product(&split, &r, &s)?)?;
        terms.push(CertTerm::new(split, r, s));
    }
    Ok(StrengthCertificate::new(target, terms))
}

/// A random degree-2 tensor whose matrix (Gram, skew or plain) has rank at
/// most `rank`: `Σ λ_i ℓ_i²`, `Σ a_i ∧ b_i` (rank/2 terms) or `Σ a_i ⊗ b_i`.
pub fn rank_locus_point<F: Field>(
    flavor: Flavor,
    dims: &[usize],
    rank: usize,
    rng: &mut impl Rng,
) -> Result<Tensor<F>> {
    flavor.check_dims(2, dims)?;
    let mut acc = Tensor::zero(flavor, 2, dims)?;
    match flavor {
        Flavor::Sym => {
            for _ in 0..rank {
                let l = SymTensor::power(&random_vector::<F>(dims[0], rng), 2);
                let lambda = F::from_i64([1, -1, 2][rng.gen_range(0..3)]);
                acc = acc.add(&Tensor::Sym(l.scale(&lambda)))?;
            }
        }
        Flavor::Alt => {
            if rank % 2 == 1 {
                return Err(Error::invalid("alternating forms have even rank"));
            }
            for _ in 0..rank / 2 {
                let a = AltTensor::vector(&random_vector::<F>(dims[0], rng));
                let b = AltTensor::vector(&random_vector::<F>(dims[0], rng));
                acc = acc.add(&Tensor::Alt(a.wedge(&b)?))?;
            }
        }
        Flavor::Ord => {
            for _ in 0..rank {
                let a = OrdTensor::vector(&random_vector::<F>(dims[0], rng));
                let b = OrdTensor::vector(&random_vector::<F>(dims[1], rng));
                acc = acc.add(&Tensor::Ord(OrdTensor::place(&[0], &a, &b)?))?;
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = BigRational;

    #[test]
    fn named_families() {
        let q: Tensor<Q> = power_sum(2, 5).unwrap();
        assert_eq!(q.to_string(), "x1^2 + x2^2 + x3^2 + x4^2 + x5^2");
        let t: Tensor<Q> = triple_product(2).unwrap();
        assert_eq!(t.dims(), vec![6]);
        assert_eq!(t.num_terms(), 2);
    }

    #[test]
    fn border_strength_decomposes_itself() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cert = border_strength::<Q>(Flavor::Sym, 3, &[4], 2, &mut rng).unwrap();
        assert_eq!(cert.len(), 2);
        assert!(cert.verify().unwrap());
    }

    #[test]
    fn rank_locus_has_small_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for flavor in Flavor::ALL {
            let dims = if flavor == Flavor::Ord {
                vec![4, 3]
            } else {
                vec![4]
            };
            let q = rank_locus_point::<Q>(flavor, &dims, 2, &mut rng).unwrap();
            assert!(crate::strength::degree_two_strength(&q).unwrap().rank <= 2);
        }
    }
}
