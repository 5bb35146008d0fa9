//! Exact strength in degree two.
//!
//! * ordinary `d = 2`: a matrix of rank `r` has strength `r` (rank factorisation);
//! * alternating `d = 2`: symplectic rank `2m` gives strength `m`;
//! * symmetric `d = 2`: over a prime field `F_p` (p odd) the strength is
//!   `n - (dimension of a maximal subspace on which q vanishes)`, which is
//!   `⌈r/2⌉` or `r/2 + 1` for an anisotropic-type form of even rank. Over `Q`
//!   the report gives `⌈r/2⌉`, the value over the algebraic closure, and the
//!   witness may need square roots: pairs `a x² + b y²` with `-ab` not a
//!   square become products over `Q(√δ)`.

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, Polynomial};
use crate::multilinear::{AltTensor, Flavor, OrdTensor, Split, SymTensor, Tensor};
use crate::strength::{factor_lowest, CertTerm, StrengthCertificate};

/// A product `(r0 + √δ r1)(s0 + √δ s1)` whose irrational part vanishes, so
/// it contributes `r0 s0 + δ r1 s1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionTerm<F: Field> {
    pub delta: F,
    pub r0: SymTensor<F>,
    pub r1: SymTensor<F>,
    pub s0: SymTensor<F>,
    pub s1: SymTensor<F>,
}

/// A decomposition of a quadric into linear × linear products, some of them
/// defined over quadratic extensions `Q(√δ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCertificate<F: Field> {
    pub target: Tensor<F>,
    pub rational: Vec<CertTerm<F>>,
    pub extension: Vec<ExtensionTerm<F>>,
}

impl<F: Field> ExtensionCertificate<F> {
    pub fn len(&self) -> usize {
        self.rational.len() + self.extension.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn verify(&self) -> Result<bool> {
        let Tensor::Sym(target) = &self.target else {
            return Err(Error::invalid(
                "extension certificates are for symmetric tensors",
            ));
        };
        let mut acc = StrengthCertificate::new(self.target.clone(), self.rational.clone())
            .sum()?
            .as_sym()
            .cloned()
            .expect("sym");
        for t in &self.extension {
            if [&t.r0, &t.r1, &t.s0, &t.s1].iter().any(|x| x.degree() != 1) {
                return Err(Error::MalformedTerm(
                    "extension factors must be linear".into(),
                ));
            }
            if t.r1.is_zero() && t.s1.is_zero() {
                return Err(Error::MalformedTerm(
                    "extension term without irrational part".into(),
                ));
            }
            let irrational = t.r0.mul(&t.s1)?.add(&t.r1.mul(&t.s0)?)?;
            if !irrational.is_zero() {
                return Ok(false);
            }
            let rational = t.r0.mul(&t.s0)?.add(&t.r1.mul(&t.s1)?.scale(&t.delta))?;
            acc = acc.add(&rational)?;
        }
        Ok(&acc == target)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness<F: Field> {
    Rational(StrengthCertificate<F>),
    QuadraticExtension(ExtensionCertificate<F>),
}

impl<F: Field> Witness<F> {
    pub fn len(&self) -> usize {
        match self {
            Witness::Rational(c) => c.len(),
            Witness::QuadraticExtension(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn verify(&self) -> Result<bool> {
        match self {
            Witness::Rational(c) => c.verify(),
            Witness::QuadraticExtension(c) => c.verify(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeTwoReport<F: Field> {
    pub flavor: Flavor,
    pub rank: usize,
    pub strength: usize,
    pub witness: Witness<F>,
}

pub fn degree_two_strength<F: Field>(q: &Tensor<F>) -> Result<DegreeTwoReport<F>> {
    if q.degree() != 2 {
        return Err(Error::invalid(format!(
            "degree must be 2, got {}",
            q.degree()
        )));
    }
    let report = match q {
        Tensor::Ord(o) => ord_two(o)?,
        Tensor::Alt(a) => alt_two(a)?,
        Tensor::Sym(s) => match F::characteristic() {
            2 => {
                return Err(Error::UnsupportedCharacteristic {
                    characteristic: 2,
                    reason: "symmetric quadrics need a symmetric bilinear form (char != 2)".into(),
                })
            }
            0 => sym_two_rational(s)?,
            _ => sym_two_finite(s)?,
        },
    };
    if !report.witness.verify()? {
        return Err(Error::VerificationFailed("degree-two witness".into()));
    }
    Ok(report)
}

fn ord_two<F: Field>(q: &OrdTensor<F>) -> Result<DegreeTwoReport<F>> {
    let m = q.to_matrix()?;
    let ech = m.echelon();
    let dims = q.dims();
    let mut terms = Vec::new();
    for (row, &p) in ech.pivots.iter().enumerate() {
        let r = OrdTensor::vector(&m.column(p));
        let s = OrdTensor::vector(ech.reduced.row(row));
        terms.push(CertTerm::new(
            Split::Slots(vec![0]),
            Tensor::Ord(r),
            Tensor::Ord(s),
        ));
    }
    debug_assert_eq!(dims.len(), 2);
    let rank = terms.len();
    Ok(DegreeTwoReport {
        flavor: Flavor::Ord,
        rank,
        strength: rank,
        witness: Witness::Rational(StrengthCertificate::new(Tensor::Ord(q.clone()), terms)),
    })
}

fn alt_two<F: Field>(q: &AltTensor<F>) -> Result<DegreeTwoReport<F>> {
    let n = q.dim();
    let mut rest = q.clone();
    let mut terms = Vec::new();
    loop {
        let first = rest.terms().next().map(|(k, c)| (k.clone(), c.clone()));
        let Some((idx, c)) = first else { break };
        let (i, j) = (idx[0], idx[1]);
        let unit = |k: usize| {
            let mut e = vec![F::zero(); n];
            e[k] = F::one();
            e
        };
        let a = rest.contract(&unit(i))?;
        let b = rest.contract(&unit(j))?;
        let r = a.scale(&c.inv().expect("nonzero coefficient"));
        rest = rest.sub(&r.wedge(&b)?)?;
        terms.push(CertTerm::new(
            Split::Degree(1),
            Tensor::Alt(r),
            Tensor::Alt(b),
        ));
    }
    let m = terms.len();
    Ok(DegreeTwoReport {
        flavor: Flavor::Alt,
        rank: 2 * m,
        strength: m,
        witness: Witness::Rational(StrengthCertificate::new(Tensor::Alt(q.clone()), terms)),
    })
}

/// Symmetric matrix `G` with `q(x) = x^T G x` (needs char != 2).
pub(crate) fn gram_matrix<F: Field>(q: &SymTensor<F>) -> Matrix<F> {
    let n = q.dim();
    let half = F::from_i64(2).inv().expect("char != 2");
    let mut g = Matrix::zeros(n, n);
    for (m, c) in q.poly().terms() {
        let vars: Vec<(usize, u32)> = m.iter().collect();
        match vars.as_slice() {
            [(i, 2)] => g[(*i, *i)] = c.clone(),
            [(i, 1), (j, 1)] => {
                g[(*i, *j)] = c.clone() * half.clone();
                g[(*j, *i)] = c.clone() * half.clone();
            }
            _ => unreachable!("quadric terms have degree 2"),
        }
    }
    g
}

/// Congruence diagonalisation: returns `P` (basis vectors as columns) and
/// `a` with `P^T G P = diag(a)`.
pub(crate) fn diagonalize<F: Field>(g: &Matrix<F>) -> (Matrix<F>, Vec<F>) {
    let n = g.rows();
    let mut a = g.clone();
    let mut p = Matrix::identity(n);
    // b_j += f b_k, applied to the form and the basis
    let add = |a: &mut Matrix<F>, p: &mut Matrix<F>, j: usize, k: usize, f: F| {
        for i in 0..n {
            let v = a[(i, j)].clone() + f.clone() * a[(i, k)].clone();
            a[(i, j)] = v;
        }
        for i in 0..n {
            let v = a[(j, i)].clone() + f.clone() * a[(k, i)].clone();
            a[(j, i)] = v;
        }
        for i in 0..n {
            let v = p[(i, j)].clone() + f.clone() * p[(i, k)].clone();
            p[(i, j)] = v;
        }
    };
    let swap = |a: &mut Matrix<F>, p: &mut Matrix<F>, j: usize, k: usize| {
        if j == k {
            return;
        }
        for i in 0..n {
            let t = a[(i, j)].clone();
            a[(i, j)] = a[(i, k)].clone();
            a[(i, k)] = t;
        }
        for i in 0..n {
            let t = a[(j, i)].clone();
            a[(j, i)] = a[(k, i)].clone();
            a[(k, i)] = t;
        }
        for i in 0..n {
            let t = p[(i, j)].clone();
            p[(i, j)] = p[(i, k)].clone();
            p[(i, k)] = t;
        }
    };
    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                swap(&mut a, &mut p, k, j);
            } else {
                let pair = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[(i, j)].is_zero());
                let Some((i, j)) = pair else { break };
                // both diagonal entries vanish, so b_i + b_j has value 2 a_ij
                add(&mut a, &mut p, i, j, F::one());
                swap(&mut a, &mut p, k, i);
            }
        }
        let pivot_inv = a[(k, k)].inv().expect("nonzero pivot");
        for j in k + 1..n {
            if a[(k, j)].is_zero() {
                continue;
            }
            let f = -(a[(k, j)].clone() * pivot_inv.clone());
            add(&mut a, &mut p, j, k, f);
        }
    }
    let diag = (0..n).map(|i| a[(i, i)].clone()).collect();
    (p, diag)
}

/// `x^T G y`.
fn bilinear<F: Field>(g: &Matrix<F>, x: &[F], y: &[F]) -> F {
    let gy = g.mul_vec(y).expect("dims");
    x.iter()
        .zip(&gy)
        .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// Linear form `Σ_j row[j] x_j` as an element of `S^1`.
fn linear_form<F: Field>(row: &[F]) -> SymTensor<F> {
    SymTensor::vector(row)
}

fn ceil_half(r: usize) -> usize {
    r.div_ceil(2)
}

fn sym_two_rational<F: Field>(q: &SymTensor<F>) -> Result<DegreeTwoReport<F>> {
    let g = gram_matrix(q);
    let rank = g.rank();
    let (p, diag) = diagonalize(&g);
    let pinv = p.inverse().expect("basis change is invertible");
    // q(x) = Σ a_k y_k(x)^2 with y_k the k-th row of P^{-1}
    let y = |k: usize| linear_form(pinv.row(k));
    let nonzero: Vec<usize> = (0..diag.len()).filter(|&k| !diag[k].is_zero()).collect();
    let mut used = vec![false; nonzero.len()];
    let mut rational = Vec::new();
    let mut extension = Vec::new();
    let mut leftovers = Vec::new();
    for a in 0..nonzero.len() {
        if used[a] {
            continue;
        }
        used[a] = true;
        let i = nonzero[a];
        let partner = (a + 1..nonzero.len()).find(|&b| {
            !used[b]
                && (-(diag[nonzero[b]].clone() / diag[i].clone()))
                    .sqrt()
                    .is_some()
        });
        match partner {
            Some(b) => {
                used[b] = true;
                let j = nonzero[b];
                // a_i y_i^2 + a_j y_j^2 = a_i (y_i - t y_j)(y_i + t y_j), t^2 = -a_j/a_i
                let t = (-(diag[j].clone() / diag[i].clone()))
                    .sqrt()
                    .expect("checked");
                let r = y(i).sub(&y(j).scale(&t))?.scale(&diag[i]);
                let s = y(i).add(&y(j).scale(&t))?;
                rational.push(CertTerm::new(
                    Split::Degree(1),
                    Tensor::Sym(r),
                    Tensor::Sym(s),
                ));
            }
            None => leftovers.push(i),
        }
    }
    let mut chunks = leftovers.chunks(2);
    for chunk in &mut chunks {
        match *chunk {
            [i, j] => {
                let delta = -(diag[j].clone() / diag[i].clone());
                extension.push(ExtensionTerm {
                    delta,
                    r0: y(i).scale(&diag[i]),
                    r1: y(j).scale(&diag[i]),
                    s0: y(i),
                    s1: y(j).scale(&-F::one()),
                });
            }
            [i] => rational.push(CertTerm::new(
                Split::Degree(1),
                Tensor::Sym(y(i)),
                Tensor::Sym(y(i).scale(&diag[i])),
            )),
            _ => unreachable!(),
        }
    }
    let target = Tensor::Sym(q.clone());
    let witness = if extension.is_empty() {
        Witness::Rational(StrengthCertificate::new(target, rational))
    } else {
        Witness::QuadraticExtension(ExtensionCertificate {
            target,
            rational,
            extension,
        })
    };
    Ok(DegreeTwoReport {
        flavor: Flavor::Sym,
        rank,
        strength: ceil_half(rank),
        witness,
    })
}

fn sym_two_finite<F: Field>(q: &SymTensor<F>) -> Result<DegreeTwoReport<F>> {
    let g = gram_matrix(q);
    let rank = g.rank();
    let w = maximal_singular_subspace(&g)?;
    let cert = certificate_from_vanishing_subspace(q, &w)?;
    Ok(DegreeTwoReport {
        flavor: Flavor::Sym,
        rank,
        strength: cert.len(),
        witness: Witness::Rational(cert),
    })
}

/// A maximal totally singular subspace of the quadric with Gram matrix `g`
/// over a finite field of odd characteristic. All maximal ones share the
/// same dimension, so the greedy construction is optimal.
fn maximal_singular_subspace<F: Field>(g: &Matrix<F>) -> Result<Vec<Vec<F>>> {
    let elements = F::elements().ok_or(Error::InfiniteField)?;
    let n = g.rows();
    let mut w: Vec<Vec<F>> = g.kernel();
    let (p, diag) = diagonalize(g);
    // orthogonal basis of a nondegenerate complement of the radical
    let mut basis: Vec<(Vec<F>, F)> = (0..n)
        .filter(|&k| !diag[k].is_zero())
        .map(|k| (p.column(k), diag[k].clone()))
        .collect();
    while basis.len() >= 2 {
        let combine = |coeffs: &[F], basis: &[(Vec<F>, F)]| -> Vec<F> {
            let mut v = vec![F::zero(); n];
            for (c, (b, _)) in coeffs.iter().zip(basis) {
                for (x, bi) in v.iter_mut().zip(b) {
                    *x += c.clone() * bi.clone();
                }
            }
            v
        };
        let a: Vec<F> = basis.iter().map(|(_, a)| a.clone()).collect();
        // isotropic u = x b_1 + y b_2 (+ b_3)
        let (coeffs, partner) = if basis.len() == 2 {
            match (-(a[1].clone() / a[0].clone())).sqrt() {
                Some(t) => (vec![t, F::one()], 1),
                None => break,
            }
        } else {
            let found = elements.iter().find_map(|x| {
                let rhs = (-a[2].clone() - a[0].clone() * x.clone() * x.clone()) / a[1].clone();
                rhs.sqrt().map(|y| vec![x.clone(), y, F::one()])
            });
            // a form in three variables over a finite field is isotropic
            (
                found.expect("ternary forms over finite fields are isotropic"),
                2,
            )
        };
        let u = combine(&coeffs, &basis);
        let v = basis[partner].0.clone();
        w.push(u.clone());
        // orthogonal complement of span(u, v) inside span(basis)
        let constraints = Matrix::from_rows(
            vec![
                basis.iter().map(|(b, _)| bilinear(g, b, &u)).collect(),
                basis.iter().map(|(b, _)| bilinear(g, b, &v)).collect(),
            ],
            basis.len(),
        )?;
        let complement: Vec<Vec<F>> = constraints
            .kernel()
            .iter()
            .map(|z| combine(z, &basis))
            .collect();
        let m = complement.len();
        let gram = Matrix::from_fn(m, m, |i, j| bilinear(g, &complement[i], &complement[j]));
        let (pp, dd) = diagonalize(&gram);
        basis = (0..m)
            .map(|k| {
                let coeffs = pp.column(k);
                let mut vec = vec![F::zero(); n];
                for (c, b) in coeffs.iter().zip(&complement) {
                    for (x, bi) in vec.iter_mut().zip(b) {
                        *x += c.clone() * bi.clone();
                    }
                }
                (vec, dd[k].clone())
            })
            .collect();
        debug_assert!(basis.iter().all(|(_, a)| !a.is_zero()));
    }
    Ok(w)
}

/// Given independent vectors spanning a subspace `W` on which `q` vanishes
/// identically, writes `q` with `n - dim W` terms `l_i · s_i`, the `l_i`
/// cutting out `W`.
pub(crate) fn certificate_from_vanishing_subspace<F: Field>(
    q: &SymTensor<F>,
    w: &[Vec<F>],
) -> Result<StrengthCertificate<F>> {
    let n = q.dim();
    let added = Matrix::complete_basis(w, n);
    let k = added.len();
    // columns: completion vectors first, then W
    let mut cols: Vec<Vec<F>> = added
        .iter()
        .map(|&i| {
            let mut e = vec![F::zero(); n];
            e[i] = F::one();
            e
        })
        .collect();
    cols.extend(w.iter().cloned());
    let p = Matrix::from_rows(cols, n)?.transpose();
    let pinv = p
        .inverse()
        .ok_or_else(|| Error::invalid("vanishing subspace vectors are dependent"))?;
    let moved = Tensor::Sym(SymTensor::new(q.degree(), q.poly().linear_substitute(&p)?)?);
    let (terms, rest) = factor_lowest(&moved, |i| i < k)?;
    if !rest.is_zero() {
        return Err(Error::invalid(
            "the form does not vanish on the given subspace",
        ));
    }
    let back = |t: &Tensor<F>| -> Result<Tensor<F>> {
        let s = t.as_sym().expect("sym");
        let poly: Polynomial<F> = s.poly().linear_substitute(&pinv)?;
        Ok(Tensor::Sym(SymTensor::new(s.degree(), poly)?))
    };
    let mut out = Vec::new();
    for t in terms {
        out.push(CertTerm::new(t.split.clone(), back(&t.r)?, back(&t.s)?));
    }
    let cert = StrengthCertificate::new(Tensor::Sym(q.clone()), out);
    cert.check()?;
    Ok(cert)
}
