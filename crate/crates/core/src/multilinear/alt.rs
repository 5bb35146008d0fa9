use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix};

/// An element of `∧^d V`: coefficients on strictly increasing index tuples
/// (0-based), with signs folded into the coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AltTensor<F> {
    d: u32,
    dim: usize,
    terms: BTreeMap<Vec<usize>, F>,
}

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats (the wedge vanishes).
pub fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

impl<F: Field> AltTensor<F> {
    pub fn zero(d: u32, dim: usize) -> Self {
        AltTensor {
            d,
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// `sum c * e_{i_1} ∧ ... ∧ e_{i_d}`, indices in any order.
    pub fn from_terms(
        d: u32,
        dim: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, F)>,
    ) -> Result<Self> {
        let mut out = Self::zero(d, dim);
        for (idx, c) in terms {
            if idx.len() != d as usize {
                return Err(Error::invalid(format!(
                    "index tuple of length {} in ∧^{d}",
                    idx.len()
                )));
            }
            if let Some(&i) = idx.iter().find(|&&i| i >= dim) {
                return Err(Error::VariableOutOfRange {
                    index: i,
                    nvars: dim,
                });
            }
            out.add_term(idx, c);
        }
        Ok(out)
    }

    pub fn basis(dim: usize, idx: &[usize]) -> Result<Self> {
        Self::from_terms(idx.len() as u32, dim, [(idx.to_vec(), F::one())])
    }

    pub fn vector(v: &[F]) -> Self {
        let mut out = Self::zero(1, v.len());
        for (i, c) in v.iter().enumerate() {
            out.add_term(vec![i], c.clone());
        }
        out
    }

    fn add_term(&mut self, mut idx: Vec<usize>, c: F) {
        if c.is_zero() {
            return;
        }
        let Some(negative) = sort_with_sign(&mut idx) else {
            return;
        };
        let c = if negative { -c } else { c };
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, idx: &[usize]) -> F {
        let mut v = idx.to_vec();
        match sort_with_sign(&mut v) {
            None => F::zero(),
            Some(neg) => {
                let c = self.terms.get(&v).cloned().unwrap_or_else(F::zero);
                if neg {
                    -c
                } else {
                    c
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.dim != other.dim {
            return Err(Error::dims(format!(
                "∧^{} of dim {} against ∧^{} of dim {}",
                self.d, self.dim, other.d, other.dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(self.d, self.dim);
        for (idx, a) in &self.terms {
            out.add_term(idx.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::dims("wedge product of different spaces"));
        }
        let mut out = Self::zero(self.d + other.d, self.dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut idx = a.clone();
                idx.extend_from_slice(b);
                out.add_term(idx, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    /// `∧^d(phi)(q)` for `phi: V -> W` given as a `dim W x dim V` matrix.
    pub fn induced(&self, phi: &Matrix<F>) -> Result<Self> {
        if phi.cols() != self.dim {
            return Err(Error::dims(format!(
                "map with {} columns applied to a tensor on a space of dim {}",
                phi.cols(),
                self.dim
            )));
        }
        let images: Vec<AltTensor<F>> = (0..self.dim)
            .map(|i| Self::vector(&phi.column(i)))
            .collect();
        let mut out = Self::zero(self.d, phi.rows());
        'terms: for (idx, c) in &self.terms {
            let mut acc = Self::zero(0, phi.rows());
            acc.add_term(Vec::new(), c.clone());
            for &i in idx {
                acc = acc.wedge(&images[i])?;
                if acc.is_zero() {
                    continue 'terms;
                }
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Interior product `ι_x q` (a derivation: `ι_x(a ∧ b) = ι_x a ∧ b ± a ∧ ι_x b`).
    pub fn contract(&self, x: &[F]) -> Result<Self> {
        if self.d == 0 {
            return Err(Error::invalid("cannot contract a degree-0 tensor"));
        }
        if x.len() != self.dim {
            return Err(Error::dims("dual vector length"));
        }
        let mut out = Self::zero(self.d - 1, self.dim);
        for (idx, c) in &self.terms {
            for (k, &i) in idx.iter().enumerate() {
                if x[i].is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(k);
                let v = c.clone() * x[i].clone();
                out.add_term(rest, if k % 2 == 1 { -v } else { v });
            }
        }
        Ok(out)
    }

    /// Pairing with a decomposable functional `x_1 ∧ ... ∧ x_d`:
    /// `sum_T c_T det(x_k[T_l])`.
    pub fn pair(&self, xs: &[Vec<F>]) -> Result<F> {
        if xs.len() != self.d as usize || xs.iter().any(|x| x.len() != self.dim) {
            return Err(Error::dims("functional shape does not match the tensor"));
        }
        let d = self.d as usize;
        let mut acc = F::zero();
        for (idx, c) in &self.terms {
            let m = Matrix::from_fn(d, d, |k, l| xs[k][idx[l]].clone());
            acc += c.clone() * m.determinant().expect("square");
        }
        Ok(acc)
    }

    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        Self::from_terms(
            self.d,
            dim,
            self.terms.iter().map(|(k, v)| (k.clone(), v.clone())),
        )
    }
}

impl<F: Field> fmt::Display for AltTensor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.terms.iter().map(|(idx, c)| {
            let wedge: Vec<String> = idx.iter().map(|i| format!("e{}", i + 1)).collect();
            (wedge.join("∧"), c)
        });
        write!(f, "{}", super::signed_sum(parts))
    }
}

impl<F: Field> fmt::Debug for AltTensor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "∧^{}[{}]({})", self.d, self.dim, self)
    }
}
