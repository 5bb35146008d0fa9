//! Recovering the top component from the lower ones, and turning the
//! covariant expansion into a strength certificate.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix};
use crate::families::random_vector;
use crate::machinery::bounds::{bound_n, BoundReport};
use crate::machinery::direction::{find_direction, DEFAULT_BOX};
use crate::machinery::expansion::{
    phi_expand, CovariantExpansion, Factor, Functional, PhiExpansion,
};
use crate::machinery::presentation::ClosedSetPresentation;
use crate::multilinear::{
    increasing_tuples, product_tuples, sort_with_sign, sym_exponents, BigradedElement, Block,
    Flavor, OrdTensor, Split, Tensor,
};
use crate::strength::{chop, CertTerm, StrengthCertificate};

/// Redraws allowed when the symmetric evaluation system is singular.
const REDRAWS: usize = 16;
const REDRAW_SEED: u64 = 0x70b;

fn nonzero_h<F: Field>(e: &PhiExpansion<F>, b: &BigradedElement<F>) -> Result<F> {
    let h0 = e.h_value(b)?;
    if h0.is_zero() {
        return Err(Error::YBranch);
    }
    Ok(h0)
}

/// The top component `q_d` (or `q_{[d]}`) of `q`, computed only from the
/// lower components as `⟨x, q_top⟩ = −Ψ(x, lower)/h(q_0)` for enough
/// functionals `x` and a linear solve.
pub fn reconstruct_top<F: Field>(e: &PhiExpansion<F>, b: &BigradedElement<F>) -> Result<Tensor<F>> {
    let h0 = nonzero_h(e, b)?;
    let prep = e.prepare(b)?;
    let minus_inv = -h0.inv().expect("nonzero");
    let value =
        |x: &Functional<F>| -> Result<F> { Ok(e.psi_prepared(&prep, b, x)? * minus_inv.clone()) };
    let d = b.degree();
    let du = b.dim_u();
    let dv = b.dim_v();
    let full = b.full_dims();
    let unit = |n: usize, i: usize| -> Vec<F> {
        (0..n)
            .map(|k| if k == i { F::one() } else { F::zero() })
            .collect()
    };
    let mut entries: Vec<(Vec<usize>, F)> = Vec::new();
    match b.flavor() {
        Flavor::Sym => {
            let n = dv[0];
            let keys = sym_exponents(n, d);
            let monomial = |x: &[F], key: &[usize]| -> F {
                x.iter()
                    .zip(key)
                    .fold(F::one(), |acc, (a, &k)| acc * a.pow(k as u64))
            };
            // principal lattice points: unisolvent in char 0 and char > d
            let mut points: Vec<Vec<F>> = keys
                .iter()
                .map(|k| k.iter().map(|&a| F::from_i64(a as i64)).collect())
                .collect();
            let mut rng = ChaCha8Rng::seed_from_u64(REDRAW_SEED);
            let mut attempts = 0;
            let coeffs = loop {
                let m = Matrix::from_fn(keys.len(), keys.len(), |r, c| {
                    monomial(&points[r], &keys[c])
                });
                let rhs: Vec<F> = points
                    .iter()
                    .map(|x| value(&Functional(vec![x.clone()])))
                    .collect::<Result<_>>()?;
                if let Some(sol) = m.solve(&rhs)? {
                    if m.rank() == keys.len() {
                        break sol;
                    }
                }
                attempts += 1;
                if attempts > REDRAWS {
                    return Err(Error::SingularSystem { attempts });
                }
                points = keys.iter().map(|_| random_vector(n, &mut rng)).collect();
            };
            for (key, c) in keys.into_iter().zip(coeffs) {
                let mut k = vec![0; du[0]];
                k.extend(key);
                entries.push((k, c));
            }
        }
        Flavor::Alt => {
            for key in increasing_tuples(dv[0], d as usize) {
                let x = Functional(key.iter().map(|&i| unit(dv[0], i)).collect());
                entries.push((key.iter().map(|&i| i + du[0]).collect(), value(&x)?));
            }
        }
        Flavor::Ord => {
            for key in product_tuples(dv) {
                let x = Functional(
                    key.iter()
                        .enumerate()
                        .map(|(j, &i)| unit(dv[j], i))
                        .collect(),
                );
                entries.push((
                    key.iter().enumerate().map(|(j, &i)| i + du[j]).collect(),
                    value(&x)?,
                ));
            }
        }
    }
    Tensor::from_entries(b.flavor(), d, &full, entries)
}

/// A certificate for the top component built from the covariant expansion:
/// each monomial of `Ψ` is grouped by one of its factors `w`, which becomes
/// `r`, and the evaluated cofactors scaled by `−1/h(q_0)` sum to `s`.
pub fn covariant_decompose<F: Field>(
    e: &PhiExpansion<F>,
    cov: &CovariantExpansion<F>,
    b: &BigradedElement<F>,
) -> Result<StrengthCertificate<F>> {
    let h0 = nonzero_h(e, b)?;
    let target = b.top();
    if target.is_zero() {
        return Ok(StrengthCertificate::empty(target));
    }
    let prep = e.prepare(b)?;
    let d = b.degree();
    let mut scale = -h0.inv().expect("nonzero");
    if b.flavor() == Flavor::Alt {
        let fact = (1..=d as i64).fold(F::one(), |acc, k| acc * F::from_i64(k));
        scale *= fact.inv().expect("char 0 or char > d");
    }
    let factors = cov.factors();
    let mut groups: BTreeMap<(Block, Vec<usize>), Tensor<F>> = BTreeMap::new();
    'terms: for term in cov.terms() {
        let p = term.coefficient.eval(&prep.c0)?;
        if p.is_zero() {
            continue;
        }
        let Some(chosen) = cov.chosen_factor(term) else {
            return Err(Error::VerificationFailed(
                "a covariant monomial has no grouping factor".into(),
            ));
        };
        let mut occurrences: Vec<usize> = Vec::new();
        for &(f, k) in &term.factors {
            if !prep.pieces.contains_key(&factors[f].piece()) {
                continue 'terms;
            }
            occurrences.extend(std::iter::repeat_n(f, k as usize));
        }
        let piece = |f: usize| &prep.pieces[&factors[f].piece()];
        let pos = occurrences
            .iter()
            .position(|&f| f == chosen)
            .expect("chosen factor occurs");
        let rest: Vec<usize> = occurrences
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pos)
            .map(|(_, &f)| f)
            .collect();
        let s = match b.flavor() {
            Flavor::Sym => {
                let mut acc = piece(rest[0]).as_sym().expect("sym piece").clone();
                for &f in &rest[1..] {
                    acc = acc.mul(piece(f).as_sym().expect("sym piece"))?;
                }
                Tensor::Sym(acc.scale(&(p * scale.clone())))
            }
            Flavor::Alt => {
                let weights: Vec<u32> = occurrences.iter().map(|&f| factors[f].weight()).collect();
                let mut concat: Vec<usize> = occurrences
                    .iter()
                    .flat_map(|&f| match &factors[f] {
                        Factor::Alt { slots, .. } => slots.clone(),
                        _ => unreachable!("alt factor"),
                    })
                    .collect();
                let Some(negative) = sort_with_sign(&mut concat) else {
                    return Err(Error::VerificationFailed(
                        "a covariant monomial repeats a slot".into(),
                    ));
                };
                let mut c = p * scale.clone();
                for &w in &weights {
                    c *= (1..=w as i64).fold(F::one(), |acc, k| acc * F::from_i64(k));
                }
                // moving the chosen factor to the front of the wedge
                let before: u32 = weights[..pos].iter().sum();
                if negative ^ (weights[pos] * before % 2 == 1) {
                    c = -c;
                }
                let mut acc = piece(rest[0]).as_alt().expect("alt piece").clone();
                for &f in &rest[1..] {
                    acc = acc.wedge(piece(f).as_alt().expect("alt piece"))?;
                }
                Tensor::Alt(acc.scale(&c))
            }
            Flavor::Ord => {
                let slots_of = |f: usize| match &factors[f] {
                    Factor::Ord { slots, .. } => slots.clone(),
                    _ => unreachable!("ord factor"),
                };
                let mut acc_slots = slots_of(rest[0]);
                let mut acc = piece(rest[0]).as_ord().expect("ord piece").clone();
                for &f in &rest[1..] {
                    let mut union = acc_slots.clone();
                    union.extend(slots_of(f));
                    union.sort_unstable();
                    let at: Vec<usize> = acc_slots
                        .iter()
                        .map(|s| union.binary_search(s).expect("present"))
                        .collect();
                    acc = OrdTensor::place(&at, &acc, piece(f).as_ord().expect("ord piece"))?;
                    acc_slots = union;
                }
                Tensor::Ord(acc.scale(&(p * scale.clone())))
            }
        };
        let key = factors[chosen].piece();
        let entry = match groups.remove(&key) {
            Some(prev) => prev.add(&s)?,
            None => s,
        };
        groups.insert(key, entry);
    }
    let mut terms = Vec::new();
    for (key, s) in groups {
        if s.is_zero() {
            continue;
        }
        let r = prep.pieces[&key].clone();
        let split = match key.0 {
            Block::VDegree(i) => Split::Degree(i),
            Block::VSlots(m) => Split::Slots((0..d as usize).filter(|j| m >> j & 1 == 1).collect()),
        };
        terms.push(CertTerm::new(split, r, s));
    }
    let cert = StrengthCertificate::new(target, terms);
    cert.check()?;
    Ok(cert)
}

/// A certificate for a point of `X(U ⊕ V)` with its provenance.
#[derive(Clone, Debug)]
pub struct MembershipCertificate<F: Field> {
    pub certificate: StrengthCertificate<F>,
    /// How many leading terms come from chopping the lower part.
    pub chop_terms: usize,
    pub covariant_terms: usize,
    pub bound: BoundReport,
}

/// One layer of the membership pipeline for a fixed presentation: the
/// generator, its direction, the expansion and the covariant grouping are
/// computed once and reused for every point.
#[derive(Clone, Debug)]
pub struct MembershipEngine<F: Field> {
    presentation: ClosedSetPresentation<F>,
    generator: usize,
    expansion: PhiExpansion<F>,
    covariant: CovariantExpansion<F>,
    bound: BoundReport,
}

impl<F: Field> MembershipEngine<F> {
    /// Uses the first generator (by degree, then position) that has a
    /// nonzero directional derivative in the box `[-bound, bound]`.
    pub fn new(p: &ClosedSetPresentation<F>, bound: i64) -> Result<Self> {
        let mut order: Vec<usize> = (0..p.generators().len())
            .filter(|&k| p.generators()[k].total_degree().is_some_and(|deg| deg > 0))
            .collect();
        if order.is_empty() {
            return Err(Error::NoGenerators);
        }
        order.sort_by_key(|&k| (p.generators()[k].total_degree(), k));
        let mut last = Error::BoxExhausted { bound };
        for k in order {
            match find_direction(
                &p.generators()[k],
                p.flavor(),
                p.degree(),
                p.base_dims(),
                bound,
            ) {
                Ok(dd) => {
                    let expansion = phi_expand(p.flavor(), p.degree(), p.base_dims(), &dd)?;
                    let covariant = CovariantExpansion::from_expansion(&expansion)?;
                    return Ok(MembershipEngine {
                        presentation: p.clone(),
                        generator: k,
                        expansion,
                        covariant,
                        bound: bound_n(p.flavor(), p.degree(), p.base_dims())?,
                    });
                }
                Err(err @ Error::BoxExhausted { .. }) => last = err,
                Err(err) => return Err(err),
            }
        }
        Err(last)
    }

    pub fn presentation(&self) -> &ClosedSetPresentation<F> {
        &self.presentation
    }

    /// Index of the generator in use.
    pub fn generator(&self) -> usize {
        self.generator
    }

    pub fn expansion(&self) -> &PhiExpansion<F> {
        &self.expansion
    }

    pub fn covariant(&self) -> &CovariantExpansion<F> {
        &self.covariant
    }

    pub fn bound(&self) -> &BoundReport {
        &self.bound
    }

    /// Splits `q` along `U = K^{base dims}`.
    pub fn split(&self, q: &Tensor<F>) -> Result<BigradedElement<F>> {
        let p = &self.presentation;
        if q.flavor() != p.flavor() || q.degree() != p.degree() {
            return Err(Error::dims(format!(
                "expected a degree-{} {} tensor, got a degree-{} {} tensor",
                p.degree(),
                p.flavor(),
                q.degree(),
                q.flavor()
            )));
        }
        BigradedElement::split(q, p.base_dims())
    }

    pub fn reconstruct(&self, q: &Tensor<F>) -> Result<Tensor<F>> {
        reconstruct_top(&self.expansion, &self.split(q)?)
    }

    /// Chopping plus the covariant certificate, verified and checked
    /// against the bound.
    pub fn certify(&self, q: &Tensor<F>) -> Result<MembershipCertificate<F>> {
        let b = self.split(q)?;
        nonzero_h(&self.expansion, &b)?;
        let chopped = chop(&b)?;
        let top = covariant_decompose(&self.expansion, &self.covariant, &b)?;
        let chop_terms = chopped.len();
        let covariant_terms = top.len();
        let mut terms = chopped.terms;
        terms.extend(top.terms);
        let certificate = StrengthCertificate::new(q.clone(), terms);
        certificate.check()?;
        if certificate.len() as u64 > self.bound.n {
            return Err(Error::VerificationFailed(format!(
                "{} terms exceed the bound {}",
                certificate.len(),
                self.bound.n
            )));
        }
        Ok(MembershipCertificate {
            certificate,
            chop_terms,
            covariant_terms,
            bound: self.bound.clone(),
        })
    }
}

/// [`MembershipEngine::certify`] with the default search box.
pub fn strength_from_membership<F: Field>(
    p: &ClosedSetPresentation<F>,
    q: &Tensor<F>,
) -> Result<MembershipCertificate<F>> {
    MembershipEngine::new(p, DEFAULT_BOX)?.certify(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_polynomial;
    use crate::multilinear::SymTensor;
    use num_rational::BigRational;

    type Q = BigRational;

    fn sym(text: &str, n: usize) -> Tensor<Q> {
        Tensor::Sym(SymTensor::new(2, parse_polynomial(text, Some(n)).unwrap()).unwrap())
    }

    fn gram_engine() -> MembershipEngine<Q> {
        let p = ClosedSetPresentation::rank_locus(Flavor::Sym, &[3], 2).unwrap();
        MembershipEngine::new(&p, DEFAULT_BOX).unwrap()
    }

    #[test]
    fn rank_two_quadric_top_is_recovered() {
        // (u2 + v)^2 + u3^2: q0 = u2^2 + u3^2, h(q0) = 1, top = v^2
        let e = gram_engine();
        let q = sym("x2^2 + 2*x2*x4 + x4^2 + x3^2", 4);
        let b = e.split(&q).unwrap();
        assert_eq!(e.expansion().h_value(&b).unwrap(), Q::from_i64(1));
        assert_eq!(e.reconstruct(&q).unwrap(), sym("x4^2", 4));
        let cert = e.certify(&q).unwrap();
        assert!(cert.certificate.verify().unwrap());
        assert!(cert.certificate.len() <= 6);
    }

    #[test]
    fn zero_top_gives_empty_certificate() {
        let e = gram_engine();
        let q = sym("x2^2 + x3^2", 5);
        assert!(e.reconstruct(&q).unwrap().is_zero());
        let b = e.split(&q).unwrap();
        let cert = covariant_decompose(e.expansion(), e.covariant(), &b).unwrap();
        assert!(cert.is_empty());
        let full = e.certify(&q).unwrap();
        assert!(full.certificate.len() <= 3);
    }

    #[test]
    fn y_branch_is_signalled() {
        // q0 = u1^2 has h(q0) = 0
        let e = gram_engine();
        let q = sym("x1^2 + x4^2", 4);
        assert_eq!(e.certify(&q).unwrap_err(), Error::YBranch);
        assert_eq!(e.reconstruct(&q).unwrap_err(), Error::YBranch);
    }

    #[test]
    fn alternating_and_ordinary_layers() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (flavor, base, dim_v, rank) in [
            (Flavor::Alt, vec![4], vec![3], 2),
            (Flavor::Ord, vec![2, 2], vec![2, 1], 1),
            (Flavor::Ord, vec![2, 3], vec![1, 2], 1),
        ] {
            let p = ClosedSetPresentation::<Q>::rank_locus(flavor, &base, rank).unwrap();
            let e = MembershipEngine::new(&p, DEFAULT_BOX).unwrap();
            let mut certified = 0;
            for _ in 0..15 {
                let q = p.sample(&dim_v, &mut rng).unwrap();
                match e.certify(&q) {
                    Ok(cert) => {
                        certified += 1;
                        assert!(cert.certificate.len() as u64 <= e.bound().n);
                        let b = e.split(&q).unwrap();
                        assert_eq!(reconstruct_top(e.expansion(), &b).unwrap(), b.top());
                    }
                    Err(Error::YBranch) => {}
                    Err(other) => panic!("{flavor}: {other}"),
                }
            }
            assert!(
                certified > 5,
                "{flavor}: only {certified} samples off the Y-branch"
            );
        }
    }
}
