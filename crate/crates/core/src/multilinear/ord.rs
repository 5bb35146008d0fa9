use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix};

/// An element of `V_1 ⊗ ... ⊗ V_d`: coefficients on index tuples (0-based,
/// one index per slot).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrdTensor<F> {
    dims: Vec<usize>,
    terms: BTreeMap<Vec<usize>, F>,
}

impl<F: Field> OrdTensor<F> {
    pub fn zero(dims: Vec<usize>) -> Self {
        OrdTensor {
            dims,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        dims: Vec<usize>,
        terms: impl IntoIterator<Item = (Vec<usize>, F)>,
    ) -> Result<Self> {
        let mut out = Self::zero(dims);
        for (idx, c) in terms {
            if idx.len() != out.dims.len() {
                return Err(Error::invalid(format!(
                    "index tuple of length {} for {} slots",
                    idx.len(),
                    out.dims.len()
                )));
            }
            for (j, (&i, &n)) in idx.iter().zip(&out.dims).enumerate() {
                if i >= n {
                    return Err(Error::invalid(format!(
                        "index {} out of range in slot {} of dim {n}",
                        i + 1,
                        j + 1
                    )));
                }
            }
            out.add_term(idx, c);
        }
        Ok(out)
    }

    pub fn basis(dims: Vec<usize>, idx: &[usize]) -> Result<Self> {
        Self::from_terms(dims, [(idx.to_vec(), F::one())])
    }

    pub fn vector(v: &[F]) -> Self {
        let mut out = Self::zero(vec![v.len()]);
        for (i, c) in v.iter().enumerate() {
            out.add_term(vec![i], c.clone());
        }
        out
    }

    pub(crate) fn add_term(&mut self, idx: Vec<usize>, c: F) {
        if c.is_zero() {
            return;
        }
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
        self.dims.len() as u32
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &F)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &[usize]) -> F {
        self.terms.get(idx).cloned().unwrap_or_else(F::zero)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::dims(format!(
                "tensor with dims {:?} against {:?}",
                self.dims, other.dims
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
        let mut out = Self::zero(self.dims.clone());
        for (idx, a) in &self.terms {
            out.add_term(idx.clone(), a.clone() * c.clone());
        }
        out
    }

    /// Places `r` on the slots `slots` (increasing) and `s` on the remaining
    /// slots, giving an element of the full tensor product.
    pub fn place(slots: &[usize], r: &Self, s: &Self) -> Result<Self> {
        let d = r.dims.len() + s.dims.len();
        if slots.len() != r.dims.len() || slots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedTerm(
                "slot set must be increasing and match r".into(),
            ));
        }
        if slots.last().is_some_and(|&j| j >= d) {
            return Err(Error::MalformedTerm("slot out of range".into()));
        }
        let rest: Vec<usize> = (0..d).filter(|j| !slots.contains(j)).collect();
        let mut dims = vec![0; d];
        for (k, &j) in slots.iter().enumerate() {
            dims[j] = r.dims[k];
        }
        for (k, &j) in rest.iter().enumerate() {
            dims[j] = s.dims[k];
        }
        let mut out = Self::zero(dims);
        for (a, ca) in &r.terms {
            for (b, cb) in &s.terms {
                let mut idx = vec![0; d];
                for (k, &j) in slots.iter().enumerate() {
                    idx[j] = a[k];
                }
                for (k, &j) in rest.iter().enumerate() {
                    idx[j] = b[k];
                }
                out.add_term(idx, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    /// `(phi_1 ⊗ ... ⊗ phi_d)(q)`, with `phi_j` a `dim W_j x dim V_j` matrix.
    pub fn induced(&self, phis: &[Matrix<F>]) -> Result<Self> {
        if phis.len() != self.dims.len() {
            return Err(Error::dims(format!(
                "{} maps for {} slots",
                phis.len(),
                self.dims.len()
            )));
        }
        for (j, (phi, &n)) in phis.iter().zip(&self.dims).enumerate() {
            if phi.cols() != n {
                return Err(Error::dims(format!(
                    "map on slot {} has {} columns, slot dim is {n}",
                    j + 1,
                    phi.cols()
                )));
            }
        }
        let mut current = self.clone();
        for (j, phi) in phis.iter().enumerate() {
            let mut dims = current.dims.clone();
            dims[j] = phi.rows();
            let mut next = Self::zero(dims);
            for (idx, c) in &current.terms {
                for k in 0..phi.rows() {
                    let a = &phi[(k, idx[j])];
                    if a.is_zero() {
                        continue;
                    }
                    let mut t = idx.clone();
                    t[j] = k;
                    next.add_term(t, c.clone() * a.clone());
                }
            }
            current = next;
        }
        Ok(current)
    }

    /// Pairing with a decomposable functional `x_1 ⊗ ... ⊗ x_d`.
    pub fn pair(&self, xs: &[Vec<F>]) -> Result<F> {
        if xs.len() != self.dims.len() || xs.iter().zip(&self.dims).any(|(x, &n)| x.len() != n) {
            return Err(Error::dims("functional shape does not match the tensor"));
        }
        let mut acc = F::zero();
        for (idx, c) in &self.terms {
            let mut t = c.clone();
            for (j, &i) in idx.iter().enumerate() {
                t *= xs[j][i].clone();
            }
            acc += t;
        }
        Ok(acc)
    }

    /// The `d = 2` tensor as a `dims[0] x dims[1]` matrix.
    pub fn to_matrix(&self) -> Result<Matrix<F>> {
        if self.dims.len() != 2 {
            return Err(Error::invalid("matrix view needs exactly two slots"));
        }
        let mut m = Matrix::zeros(self.dims[0], self.dims[1]);
        for (idx, c) in &self.terms {
            m[(idx[0], idx[1])] = c.clone();
        }
        Ok(m)
    }

    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        Self::from_terms(dims, self.terms.iter().map(|(k, v)| (k.clone(), v.clone())))
    }
}

impl<F: Field> fmt::Display for OrdTensor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.terms.iter().map(|(idx, c)| {
            let t: Vec<String> = idx.iter().map(|i| format!("e{}", i + 1)).collect();
            (t.join("⊗"), c)
        });
        write!(f, "{}", super::signed_sum(parts))
    }
}

impl<F: Field> fmt::Debug for OrdTensor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{:?}({})", self.dims, self)
    }
}
