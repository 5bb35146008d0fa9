//! Reduction of an integral presentation modulo a prime.

use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactalg::{is_prime, Field, Polynomial};
use crate::machinery::presentation::{ClosedSetPresentation, Sampler};
use crate::multilinear::Tensor;

/// What happened to each generator of a presentation modulo `p`.
#[derive(Clone, Debug)]
pub struct Specialization<G: Field> {
    pub prime: u64,
    /// `None` when no generator survives: the reduction vanishes mod `p`.
    pub presentation: Option<ClosedSetPresentation<G>>,
    /// Indices of generators that vanish mod `p`.
    pub vanished: Vec<usize>,
    /// `(index, number of p-th roots taken)` for repaired generators.
    pub repaired: Vec<(usize, u32)>,
}

impl<G: Field> Specialization<G> {
    pub fn vanishes(&self) -> bool {
        self.presentation.is_none()
    }
}

/// `g` times the lcm of its denominators, reduced mod the characteristic of `G`.
pub fn reduce_integral<G: Field>(g: &Polynomial<BigRational>) -> Polynomial<G> {
    let lcm = g
        .terms()
        .fold(num_bigint::BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let scale = BigRational::from_integer(lcm);
    g.map_coefficients(|c| {
        let n = (c * &scale).to_integer();
        G::from_bigint(&n)
    })
}

/// Reduces every generator mod `p`, drops the ones that vanish and replaces
/// any generator whose partials all vanish by its `p`-th root, repeatedly.
pub fn specialize_mod_p<G: Field>(
    p: &ClosedSetPresentation<BigRational>,
    prime: u64,
) -> Result<Specialization<G>> {
    if !is_prime(prime) {
        return Err(Error::invalid(format!("{prime} is not prime")));
    }
    if G::characteristic() != prime {
        return Err(Error::FieldMismatch {
            expected: format!("F_{prime}"),
            found: G::tag().to_string(),
        });
    }
    if !p.integral() {
        return Err(Error::invalid(
            "only integral presentations can be reduced mod p",
        ));
    }
    let mut generators = Vec::new();
    let mut vanished = Vec::new();
    let mut repaired = Vec::new();
    for (k, g) in p.generators().iter().enumerate() {
        let mut reduced = reduce_integral::<G>(g);
        if reduced.is_zero() {
            vanished.push(k);
            continue;
        }
        let mut roots = 0;
        while reduced.total_degree().is_some_and(|deg| deg > 0) && reduced.all_partials_vanish() {
            match reduced.frobenius_root()? {
                Some(root) => {
                    reduced = root;
                    roots += 1;
                }
                None => break,
            }
        }
        if roots > 0 {
            repaired.push((k, roots));
        }
        generators.push(reduced);
    }
    if generators.is_empty() {
        return Ok(Specialization {
            prime,
            presentation: None,
            vanished,
            repaired,
        });
    }
    let sampler = match p.sampler() {
        Sampler::RankLocus { rank } => Sampler::RankLocus { rank: *rank },
        Sampler::BorderStrength { k } => Sampler::BorderStrength { k: *k },
        Sampler::Points(points) => {
            Sampler::Points(points.iter().map(reduce_tensor).collect::<Result<_>>()?)
        }
        Sampler::Custom(f) => {
            let f = f.clone();
            Sampler::Custom(Arc::new(move |dim_v, rng| reduce_tensor(&f(dim_v, rng)?)))
        }
    };
    let presentation = ClosedSetPresentation::new(
        p.flavor(),
        p.degree(),
        p.base_dims(),
        generators,
        sampler,
        true,
    )?;
    Ok(Specialization {
        prime,
        presentation: Some(presentation),
        vanished,
        repaired,
    })
}

/// A rational tensor reduced mod `p`; denominators must be invertible.
pub fn reduce_tensor<G: Field>(t: &Tensor<BigRational>) -> Result<Tensor<G>> {
    let entries = t
        .entries()
        .into_iter()
        .map(|(k, c)| {
            G::from_rational(&c).map(|g| (k, g)).ok_or_else(|| {
                Error::invalid(format!("coefficient {c} has a denominator divisible by p"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Tensor::from_entries(t.flavor(), t.degree(), &t.dims(), entries)
}
