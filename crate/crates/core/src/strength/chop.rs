use crate::error::Result;
use crate::exactalg::Field;
use crate::multilinear::{BigradedElement, Flavor, Tensor};
use crate::strength::trivial::expand_slot;
use crate::strength::{factor_lowest, CertTerm, StrengthCertificate};

/// A certificate for `q - q_top` (everything but the pure-`V` component).
///
/// Sym/alt: each lower term contains a `U` variable; grouping by the lowest
/// one gives at most `dim U` terms. Ord: each lower term has some slot with
/// a `U` index; grouping by the first such slot and its index gives at most
/// `n_1 + ... + n_d` terms.
pub fn chop<F: Field>(b: &BigradedElement<F>) -> Result<StrengthCertificate<F>> {
    let lower = b.lower();
    let dim_u = b.dim_u().to_vec();
    let terms = match b.flavor() {
        Flavor::Sym | Flavor::Alt => {
            let u = dim_u[0];
            let (terms, rest) = factor_lowest(&lower, |i| i < u)?;
            debug_assert!(rest.is_zero());
            terms
        }
        Flavor::Ord => {
            let mut terms: Vec<CertTerm<F>> = Vec::new();
            let mut remaining = lower;
            for (slot, &u) in dim_u.iter().enumerate() {
                let (t, rest) = expand_slot(&remaining, slot, |i| i < u)?;
                terms.extend(t);
                remaining = Tensor::from_entries(Flavor::Ord, b.degree(), &b.full_dims(), rest)?;
            }
            debug_assert!(remaining.is_zero());
            terms
        }
    };
    let cert = StrengthCertificate::new(b.lower(), terms);
    cert.check()?;
    Ok(cert)
}
