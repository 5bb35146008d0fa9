use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactalg::Field;
use crate::multilinear::{Entries, Flavor, Split, Tensor};
use crate::strength::{factor_lowest, CertTerm, StrengthCertificate};

/// The elementary decompositions: at most `dim V` terms (sym, grouping by
/// the lowest variable), `dim V - d + 1` terms (alt, peeling off the first
/// basis vector), or `min_j n_j` terms (ord, expanding along the smallest
/// slot). The result is verified before it is returned.
pub fn trivial_certificate<F: Field>(q: &Tensor<F>) -> Result<StrengthCertificate<F>> {
    let d = q.degree();
    if d < 2 {
        return Err(Error::invalid(format!(
            "strength needs degree at least 2, got {d}"
        )));
    }
    if q.is_zero() {
        return Ok(StrengthCertificate::empty(q.clone()));
    }
    let terms = match q.flavor() {
        Flavor::Sym | Flavor::Alt => {
            let (terms, rest) = factor_lowest(q, |_| true)?;
            debug_assert!(rest.is_zero());
            terms
        }
        Flavor::Ord => {
            let dims = q.dims();
            let m = (0..dims.len()).min_by_key(|&j| dims[j]).expect("d >= 2");
            expand_slot(q, m, |_| true)?.0
        }
    };
    let cert = StrengthCertificate::new(q.clone(), terms);
    cert.check()?;
    Ok(cert)
}

/// Groups the terms of an ordinary tensor whose index in `slot` satisfies
/// `pick` by that index: `Σ_i e_i(slot) ⊗ s_i`. Returns the terms and the
/// untouched remainder.
pub(crate) fn expand_slot<F: Field>(
    q: &Tensor<F>,
    slot: usize,
    pick: impl Fn(usize) -> bool,
) -> Result<(Vec<CertTerm<F>>, Entries<F>)> {
    let dims = q.dims();
    let d = q.degree();
    let mut groups: BTreeMap<usize, Entries<F>> = BTreeMap::new();
    let mut rest = Vec::new();
    for (key, c) in q.entries() {
        if pick(key[slot]) {
            let mut k = key.clone();
            k.remove(slot);
            groups.entry(key[slot]).or_default().push((k, c));
        } else {
            rest.push((key, c));
        }
    }
    let mut sdims = dims.clone();
    sdims.remove(slot);
    let mut terms = Vec::new();
    for (i, entries) in groups {
        let r = Tensor::from_entries(Flavor::Ord, 1, &[dims[slot]], [(vec![i], F::one())])?;
        let s = Tensor::from_entries(Flavor::Ord, d - 1, &sdims, entries)?;
        if !s.is_zero() {
            terms.push(CertTerm::new(Split::Slots(vec![slot]), r, s));
        }
    }
    Ok((terms, rest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::{AltTensor, OrdTensor};
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn alt_bounds() {
        let top = Tensor::Alt(AltTensor::<Q>::basis(4, &[0, 1, 2, 3]).unwrap());
        assert_eq!(trivial_certificate(&top).unwrap().len(), 1);
        let q = AltTensor::<Q>::from_terms(
            3,
            5,
            [
                (vec![0, 1, 2], Q::from_i64(1)),
                (vec![0, 3, 4], Q::from_i64(1)),
            ],
        )
        .unwrap();
        let cert = trivial_certificate(&Tensor::Alt(q)).unwrap();
        assert!(cert.len() <= 3);
    }

    #[test]
    fn ord_expands_along_smallest_slot() {
        let q = OrdTensor::<Q>::from_terms(
            vec![2, 3, 4],
            (0..2).map(|i| (vec![i, i, i], Q::from_i64(1))),
        )
        .unwrap();
        let cert = trivial_certificate(&Tensor::Ord(q)).unwrap();
        assert!(cert.len() <= 2);
        assert!(cert.verify().unwrap());
    }
}
