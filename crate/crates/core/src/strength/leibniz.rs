//! Derivatives of a decomposed form modulo its linear factors.
//!
//! If `q = Σ_{i<=k} r_i s_i` and `ℓ` of the terms have a linear factor, let
//! `W` be the span of those linear factors. In `S^d(V/W)` the image `q̃`
//! loses those terms, and for every `x ∈ (V/W)*` the Leibniz rule writes
//! `<x, q̃> = Σ <x, r̃_i> s̃_i + r̃_i <x, s̃_i>` with at most `2(k - ℓ)` terms.

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix};
use crate::multilinear::{Split, SymTensor, Tensor};
use crate::strength::{CertTerm, StrengthCertificate};

#[derive(Clone, Debug)]
pub struct LeibnizReduction<F: Field> {
    /// Independent vectors spanning `W ⊂ V`.
    pub w_basis: Vec<Vec<F>>,
    /// The quotient map `V -> V/W ≅ K^(n - dim W)`.
    pub quotient: Matrix<F>,
    /// Number of terms with a linear factor.
    pub linear_terms: usize,
    /// The image of `q` in `S^d(V/W)`.
    pub reduced: SymTensor<F>,
    /// One verified certificate for `<x, q̃>` per requested `x`.
    pub derivatives: Vec<StrengthCertificate<F>>,
}

impl<F: Field> LeibnizReduction<F> {
    /// The bound `2(k - ℓ)` every derivative certificate respects.
    pub fn bound(&self, k: usize) -> usize {
        2 * (k - self.linear_terms)
    }
}

pub fn leibniz_reduce<F: Field>(
    cert: &StrengthCertificate<F>,
    functionals: &[Vec<F>],
) -> Result<LeibnizReduction<F>> {
    let Tensor::Sym(q) = &cert.target else {
        return Err(Error::invalid(
            "the Leibniz reduction applies to symmetric tensors",
        ));
    };
    let d = q.degree();
    let p = F::characteristic();
    if p != 0 && p <= d as u64 {
        return Err(Error::UnsupportedCharacteristic {
            characteristic: p,
            reason: format!("derivatives of degree-{d} forms need char 0 or char > {d}"),
        });
    }
    cert.check()?;
    let n = q.dim();

    // orient every term so a linear factor, if any, is r
    let mut linear = Vec::new();
    let mut other = Vec::new();
    for t in &cert.terms {
        let (r, s) = (t.r.as_sym().expect("sym"), t.s.as_sym().expect("sym"));
        if r.degree() == 1 {
            linear.push(r.clone());
        } else if s.degree() == 1 {
            linear.push(s.clone());
        } else {
            other.push((r.clone(), s.clone()));
        }
    }

    let vectors: Vec<Vec<F>> = linear.iter().map(|r| linear_coefficients(r)).collect();
    let m = Matrix::from_rows(vectors, n)?;
    let ech = m.echelon();
    let w_basis: Vec<Vec<F>> = ech
        .reduced
        .to_rows()
        .into_iter()
        .take(ech.pivots.len())
        .collect();
    let added = Matrix::complete_basis(&w_basis, n);
    // basis of V as columns: completion vectors, then W
    let mut cols: Vec<Vec<F>> = added
        .iter()
        .map(|&i| {
            let mut e = vec![F::zero(); n];
            e[i] = F::one();
            e
        })
        .collect();
    cols.extend(w_basis.iter().cloned());
    let b = Matrix::from_rows(cols, n)?.transpose();
    let binv = b.inverse().expect("completed basis");
    let quotient_dim = added.len();
    let quotient = Matrix::from_fn(quotient_dim, n, |i, j| binv[(i, j)].clone());

    let reduced = q.induced(&quotient)?;
    let images: Vec<(SymTensor<F>, SymTensor<F>)> = other
        .iter()
        .map(|(r, s)| Ok((r.induced(&quotient)?, s.induced(&quotient)?)))
        .collect::<Result<_>>()?;

    let mut derivatives = Vec::new();
    for x in functionals {
        if x.len() != quotient_dim {
            return Err(Error::dims(format!(
                "functional of length {} on a quotient of dimension {quotient_dim}",
                x.len()
            )));
        }
        let target = reduced.contract(x)?;
        let mut terms = Vec::new();
        for (r, s) in &images {
            let dr = r.contract(x)?;
            if !dr.is_zero() && !s.is_zero() {
                terms.push(CertTerm::new(
                    Split::Degree(dr.degree()),
                    Tensor::Sym(dr),
                    Tensor::Sym(s.clone()),
                ));
            }
            let ds = s.contract(x)?;
            if !r.is_zero() && !ds.is_zero() {
                terms.push(CertTerm::new(
                    Split::Degree(r.degree()),
                    Tensor::Sym(r.clone()),
                    Tensor::Sym(ds),
                ));
            }
        }
        let c = StrengthCertificate::new(Tensor::Sym(target), terms);
        c.check()?;
        derivatives.push(c);
    }

    Ok(LeibnizReduction {
        w_basis,
        quotient,
        linear_terms: linear.len(),
        reduced,
        derivatives,
    })
}

fn linear_coefficients<F: Field>(r: &SymTensor<F>) -> Vec<F> {
    let mut v = vec![F::zero(); r.dim()];
    for (m, c) in r.poly().terms() {
        let (i, _) = m.iter().next().expect("linear monomial");
        v[i] = c.clone();
    }
    v
}
