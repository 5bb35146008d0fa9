//! Strength certificates `q = Σ r_i s_i` (products in the flavor's algebra)
//! and the constructions that produce them.

mod brute;
mod chop;
mod leibniz;
mod quadratic;
mod trivial;

use std::fmt;

pub use brute::{brute_force_strength, BruteForceConfig, BruteForceResult};
pub use chop::chop;
pub use leibniz::{leibniz_reduce, LeibnizReduction};
pub use quadratic::{
    degree_two_strength, DegreeTwoReport, ExtensionCertificate, ExtensionTerm, Witness,
};
pub use trivial::trivial_certificate;

use crate::error::{Error, Result};
use crate::exactalg::Field;
use crate::multilinear::{Flavor, Split, Tensor};

/// One product `r·s` (sym), `r∧s` (alt) or `r⊗s` placed on slots (ord).
#[derive(Clone, PartialEq, Eq)]
pub struct CertTerm<F> {
    pub split: Split,
    pub r: Tensor<F>,
    pub s: Tensor<F>,
}

impl<F: Field> CertTerm<F> {
    pub fn new(split: Split, r: Tensor<F>, s: Tensor<F>) -> Self {
        CertTerm { split, r, s }
    }

    /// The product, after checking the term is well formed for `target`.
    pub fn product_for(&self, target: &Tensor<F>) -> Result<Tensor<F>> {
        let flavor = target.flavor();
        let d = target.degree();
        self.split.validate(flavor, d)?;
        if self.r.flavor() != flavor || self.s.flavor() != flavor {
            return Err(Error::MalformedTerm(format!(
                "factor flavor differs from {flavor}"
            )));
        }
        if self.r.is_zero() || self.s.is_zero() {
            return Err(Error::MalformedTerm("zero factor".into()));
        }
        if self.r.degree() + self.s.degree() != d {
            return Err(Error::MalformedTerm(format!(
                "factor degrees {} + {} differ from {d}",
                self.r.degree(),
                self.s.degree()
            )));
        }
        let dims = target.dims();
        match &self.split {
            Split::Degree(_) => {
                if self.r.dims() != dims || self.s.dims() != dims {
                    return Err(Error::MalformedTerm(
                        "factor lives in a different space".into(),
                    ));
                }
            }
            Split::Slots(j) => {
                let rest = Split::complement(j, d);
                let rd: Vec<usize> = j.iter().map(|&k| dims[k]).collect();
                let sd: Vec<usize> = rest.iter().map(|&k| dims[k]).collect();
                if self.r.dims() != rd || self.s.dims() != sd {
                    return Err(Error::MalformedTerm(
                        "factor dims do not match the slots".into(),
                    ));
                }
            }
        }
        Tensor::product(&self.split, &self.r, &self.s)
    }
}

impl<F: Field> fmt::Debug for CertTerm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}: {} | {})", self.split, self.r, self.s)
    }
}

/// A decomposition of `target` into `terms.len()` products, witnessing
/// `S(target) <= terms.len()`.
#[derive(Clone, PartialEq, Eq)]
pub struct StrengthCertificate<F> {
    pub target: Tensor<F>,
    pub terms: Vec<CertTerm<F>>,
}

impl<F: Field> StrengthCertificate<F> {
    pub fn new(target: Tensor<F>, terms: Vec<CertTerm<F>>) -> Self {
        StrengthCertificate { target, terms }
    }

    pub fn empty(target: Tensor<F>) -> Self {
        StrengthCertificate {
            target,
            terms: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn flavor(&self) -> Flavor {
        self.target.flavor()
    }

    /// Sum of the products of all terms.
    pub fn sum(&self) -> Result<Tensor<F>> {
        let mut acc = Tensor::zero(
            self.target.flavor(),
            self.target.degree(),
            &self.target.dims(),
        )?;
        for t in &self.terms {
            acc = acc.add(&t.product_for(&self.target)?)?;
        }
        Ok(acc)
    }

    /// `Ok(true)` iff the products sum to the target exactly; malformed
    /// terms are errors.
    pub fn verify(&self) -> Result<bool> {
        Ok(self.sum()? == self.target)
    }

    /// Like [`verify`](Self::verify) but turns a mismatch into an error.
    pub fn check(&self) -> Result<()> {
        if self.verify()? {
            Ok(())
        } else {
            Err(Error::VerificationFailed(format!(
                "{} terms do not sum to the target",
                self.terms.len()
            )))
        }
    }

    /// Pushes the certificate through an induced map (one matrix for sym/alt,
    /// one per slot for ord); the images of the terms decompose the image.
    pub fn induced(&self, maps: &[crate::exactalg::Matrix<F>]) -> Result<Self> {
        let target = self.target.induced(maps)?;
        let mut terms = Vec::new();
        for t in &self.terms {
            let (rm, sm): (Vec<_>, Vec<_>) = match &t.split {
                Split::Degree(_) => (maps.to_vec(), maps.to_vec()),
                Split::Slots(j) => {
                    let rest = Split::complement(j, self.target.degree());
                    (
                        j.iter().map(|&k| maps[k].clone()).collect(),
                        rest.iter().map(|&k| maps[k].clone()).collect(),
                    )
                }
            };
            let r = t.r.induced(&rm)?;
            let s = t.s.induced(&sm)?;
            if !r.is_zero() && !s.is_zero() {
                terms.push(CertTerm::new(t.split.clone(), r, s));
            }
        }
        Ok(StrengthCertificate { target, terms })
    }
}

impl<F: Field> fmt::Debug for StrengthCertificate<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StrengthCertificate")
            .field("target", &self.target)
            .field("terms", &self.terms)
            .finish()
    }
}

/// Groups a symmetric or alternating tensor's terms by the lowest variable
/// accepted by `pick` and factors it out: `q = Σ_i e_i · s_i`. Terms with no
/// accepted variable are returned untouched as the remainder.
pub(crate) fn factor_lowest<F: Field>(
    q: &Tensor<F>,
    pick: impl Fn(usize) -> bool,
) -> Result<(Vec<CertTerm<F>>, Tensor<F>)> {
    use std::collections::BTreeMap;
    let flavor = q.flavor();
    let d = q.degree();
    let dims = q.dims();
    let n = dims[0];
    let mut groups: BTreeMap<usize, Vec<(Vec<usize>, F)>> = BTreeMap::new();
    let mut rest = Vec::new();
    for (key, c) in q.entries() {
        let lowest = match flavor {
            Flavor::Sym => (0..n).find(|&i| key[i] > 0 && pick(i)),
            Flavor::Alt => key.iter().copied().find(|&i| pick(i)),
            Flavor::Ord => return Err(Error::invalid("factor_lowest is for sym/alt tensors")),
        };
        match lowest {
            None => rest.push((key, c)),
            Some(i) => {
                let (reduced, c) = match flavor {
                    Flavor::Sym => {
                        let mut k = key;
                        k[i] -= 1;
                        (k, c)
                    }
                    _ => {
                        // move e_i to the front: sign (-1)^position
                        let pos = key.iter().position(|&x| x == i).expect("present");
                        let mut k = key;
                        k.remove(pos);
                        (k, if pos % 2 == 1 { -c } else { c })
                    }
                };
                groups.entry(i).or_default().push((reduced, c));
            }
        }
    }
    let mut terms = Vec::new();
    for (i, entries) in groups {
        let r = Tensor::from_entries(flavor, 1, &dims, [(basis_key(flavor, n, i), F::one())])?;
        let s = Tensor::from_entries(flavor, d - 1, &dims, entries)?;
        if !s.is_zero() {
            terms.push(CertTerm::new(Split::Degree(1), r, s));
        }
    }
    let remainder = Tensor::from_entries(flavor, d, &dims, rest)?;
    Ok((terms, remainder))
}

fn basis_key(flavor: Flavor, n: usize, i: usize) -> Vec<usize> {
    match flavor {
        Flavor::Sym => {
            let mut k = vec![0; n];
            k[i] = 1;
            k
        }
        _ => vec![i],
    }
}
