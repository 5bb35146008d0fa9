//! Symmetric, alternating and ordinary tensor powers, their induced maps,
//! products, the contraction pairing, and bigraded splittings over `U ⊕ V`.
//!
//! Block convention: in `U ⊕ V` the coordinates of `U` come first (per slot
//! for ordinary tensors).

mod alt;
mod basis;
mod bigraded;
mod ord;
mod sym;

use std::fmt;
use std::str::FromStr;

pub use alt::{sort_with_sign, AltTensor};
pub use basis::{binomial, increasing_tuples, product_tuples, sym_exponents, Coordinates};
pub use bigraded::{BigradedElement, Block};
pub use ord::OrdTensor;
pub use sym::SymTensor;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, Monomial, Polynomial};

/// A linear map `V -> W` as a `dim W x dim V` matrix.
pub type LinearMap<F> = Matrix<F>;

/// Sparse coordinates: basis key and coefficient.
pub type Entries<F> = Vec<(Vec<usize>, F)>;

/// `c1*b1 - c2*b2 + b3`: signs pulled out, unit coefficients dropped.
pub(crate) fn signed_sum<'a, F: Field + 'a>(
    terms: impl IntoIterator<Item = (String, &'a F)>,
) -> String {
    let mut out = String::new();
    for (k, (basis, c)) in terms.into_iter().enumerate() {
        let cs = c.to_string();
        let (neg, mag) = match cs.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, cs),
        };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if mag != "1" {
            out.push_str(&mag);
            out.push('*');
        }
        out.push_str(&basis);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Sym,
    Alt,
    Ord,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::Sym, Flavor::Alt, Flavor::Ord];

    /// Checks that `dims` has the shape this flavor expects for degree `d`:
    /// one dimension for sym/alt, one per slot for ord.
    pub fn check_dims(self, d: u32, dims: &[usize]) -> Result<()> {
        match self {
            Flavor::Sym | Flavor::Alt if dims.len() != 1 => Err(Error::dims(format!(
                "{self} tensors need exactly one dimension, got {}",
                dims.len()
            ))),
            Flavor::Ord if dims.len() != d as usize => Err(Error::dims(format!(
                "ord tensors of degree {d} need {d} dimensions, got {}",
                dims.len()
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Sym => "sym",
            Flavor::Alt => "alt",
            Flavor::Ord => "ord",
        })
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym" => Ok(Flavor::Sym),
            "alt" => Ok(Flavor::Alt),
            "ord" => Ok(Flavor::Ord),
            other => Err(Error::invalid(format!(
                "unknown flavor `{other}` (sym, alt, ord)"
            ))),
        }
    }
}

/// How a product term splits the degree: `r` has degree `e` (sym/alt) or
/// occupies the slots `J` (ord, 0-based, increasing).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Split {
    Degree(u32),
    Slots(Vec<usize>),
}

impl Split {
    pub fn validate(&self, flavor: Flavor, d: u32) -> Result<()> {
        match (flavor, self) {
            (Flavor::Sym | Flavor::Alt, Split::Degree(e)) => {
                if *e == 0 || *e >= d {
                    return Err(Error::MalformedTerm(format!(
                        "split degree {e} outside [1, {}]",
                        d.saturating_sub(1)
                    )));
                }
                Ok(())
            }
            (Flavor::Ord, Split::Slots(j)) => {
                if j.is_empty() || j.len() >= d as usize {
                    return Err(Error::MalformedTerm(
                        "slot set must be nonempty and proper".into(),
                    ));
                }
                if j.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::MalformedTerm(
                        "slot set has repeated or unordered slots".into(),
                    ));
                }
                if j.last().is_some_and(|&s| s >= d as usize) {
                    return Err(Error::MalformedTerm("slot out of range".into()));
                }
                Ok(())
            }
            _ => Err(Error::MalformedTerm(format!(
                "split kind does not match flavor {flavor}"
            ))),
        }
    }

    /// The slots not in `J`.
    pub fn complement(slots: &[usize], d: u32) -> Vec<usize> {
        (0..d as usize).filter(|j| !slots.contains(j)).collect()
    }
}

/// A tensor of any of the three flavors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Tensor<F> {
    Sym(SymTensor<F>),
    Alt(AltTensor<F>),
    Ord(OrdTensor<F>),
}

impl<F: Field> Tensor<F> {
    pub fn zero(flavor: Flavor, d: u32, dims: &[usize]) -> Result<Self> {
        flavor.check_dims(d, dims)?;
        Ok(match flavor {
            Flavor::Sym => Tensor::Sym(SymTensor::zero(d, dims[0])),
            Flavor::Alt => Tensor::Alt(AltTensor::zero(d, dims[0])),
            Flavor::Ord => Tensor::Ord(OrdTensor::zero(dims.to_vec())),
        })
    }

    /// Builds a tensor from `(key, coefficient)` pairs, where the key is an
    /// exponent vector (sym) or an index tuple (alt/ord), all 0-based.
    pub fn from_entries(
        flavor: Flavor,
        d: u32,
        dims: &[usize],
        entries: impl IntoIterator<Item = (Vec<usize>, F)>,
    ) -> Result<Self> {
        flavor.check_dims(d, dims)?;
        match flavor {
            Flavor::Sym => {
                let n = dims[0];
                let mut terms = Vec::new();
                for (key, c) in entries {
                    if key.len() != n {
                        return Err(Error::invalid(format!(
                            "exponent vector of length {} in dimension {n}",
                            key.len()
                        )));
                    }
                    if key.iter().sum::<usize>() != d as usize {
                        return Err(Error::invalid(format!(
                            "exponent vector {key:?} does not have degree {d}"
                        )));
                    }
                    let exps: Vec<u32> = key.iter().map(|&e| e as u32).collect();
                    terms.push((Monomial::from_exponents(&exps), c));
                }
                Ok(Tensor::Sym(SymTensor::new(
                    d,
                    Polynomial::from_terms(n, terms)?,
                )?))
            }
            Flavor::Alt => Ok(Tensor::Alt(AltTensor::from_terms(d, dims[0], entries)?)),
            Flavor::Ord => Ok(Tensor::Ord(OrdTensor::from_terms(dims.to_vec(), entries)?)),
        }
    }

    /// `(key, coefficient)` pairs in canonical order; see [`Tensor::from_entries`].
    pub fn entries(&self) -> Vec<(Vec<usize>, F)> {
        match self {
            Tensor::Sym(s) => s
                .poly()
                .terms()
                .map(|(m, c)| {
                    let key = m
                        .to_exponents(s.dim())
                        .into_iter()
                        .map(|e| e as usize)
                        .collect();
                    (key, c.clone())
                })
                .collect(),
            Tensor::Alt(a) => a.terms().map(|(k, c)| (k.clone(), c.clone())).collect(),
            Tensor::Ord(o) => o.terms().map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    pub fn flavor(&self) -> Flavor {
        match self {
            Tensor::Sym(_) => Flavor::Sym,
            Tensor::Alt(_) => Flavor::Alt,
            Tensor::Ord(_) => Flavor::Ord,
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Tensor::Sym(s) => s.degree(),
            Tensor::Alt(a) => a.degree(),
            Tensor::Ord(o) => o.degree(),
        }
    }

    /// `[dim V]` for sym/alt, `[n_1, ..., n_d]` for ord.
    pub fn dims(&self) -> Vec<usize> {
        match self {
            Tensor::Sym(s) => vec![s.dim()],
            Tensor::Alt(a) => vec![a.dim()],
            Tensor::Ord(o) => o.dims().to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Tensor::Sym(s) => s.is_zero(),
            Tensor::Alt(a) => a.is_zero(),
            Tensor::Ord(o) => o.is_zero(),
        }
    }

    pub fn num_terms(&self) -> usize {
        match self {
            Tensor::Sym(s) => s.poly().len(),
            Tensor::Alt(a) => a.len(),
            Tensor::Ord(o) => o.len(),
        }
    }

    pub fn as_sym(&self) -> Option<&SymTensor<F>> {
        match self {
            Tensor::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_alt(&self) -> Option<&AltTensor<F>> {
        match self {
            Tensor::Alt(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_ord(&self) -> Option<&OrdTensor<F>> {
        match self {
            Tensor::Ord(o) => Some(o),
            _ => None,
        }
    }

    fn mismatch(&self, other: &Self) -> Error {
        Error::dims(format!(
            "{} tensor of degree {} against {} tensor of degree {}",
            self.flavor(),
            self.degree(),
            other.flavor(),
            other.degree()
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Tensor::Sym(a), Tensor::Sym(b)) => Ok(Tensor::Sym(a.add(b)?)),
            (Tensor::Alt(a), Tensor::Alt(b)) => Ok(Tensor::Alt(a.add(b)?)),
            (Tensor::Ord(a), Tensor::Ord(b)) => Ok(Tensor::Ord(a.add(b)?)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        match self {
            Tensor::Sym(s) => Tensor::Sym(s.scale(c)),
            Tensor::Alt(a) => Tensor::Alt(a.scale(c)),
            Tensor::Ord(o) => Tensor::Ord(o.scale(c)),
        }
    }

    /// Image under the induced map: `maps` holds one matrix for sym/alt and
    /// one per slot for ord.
    pub fn induced(&self, maps: &[LinearMap<F>]) -> Result<Self> {
        match self {
            Tensor::Sym(s) => Ok(Tensor::Sym(s.induced(single(maps)?)?)),
            Tensor::Alt(a) => Ok(Tensor::Alt(a.induced(single(maps)?)?)),
            Tensor::Ord(o) => Ok(Tensor::Ord(o.induced(maps)?)),
        }
    }

    /// The product `r·s`, `r∧s` or `r⊗s` placed according to `split`.
    pub fn product(split: &Split, r: &Self, s: &Self) -> Result<Self> {
        let d = r.degree() + s.degree();
        split.validate(r.flavor(), d)?;
        match (r, s, split) {
            (Tensor::Sym(a), Tensor::Sym(b), Split::Degree(e)) => {
                if a.degree() != *e {
                    return Err(Error::MalformedTerm(format!(
                        "r has degree {}, split says {e}",
                        a.degree()
                    )));
                }
                Ok(Tensor::Sym(a.mul(b)?))
            }
            (Tensor::Alt(a), Tensor::Alt(b), Split::Degree(e)) => {
                if a.degree() != *e {
                    return Err(Error::MalformedTerm(format!(
                        "r has degree {}, split says {e}",
                        a.degree()
                    )));
                }
                Ok(Tensor::Alt(a.wedge(b)?))
            }
            (Tensor::Ord(a), Tensor::Ord(b), Split::Slots(j)) => {
                Ok(Tensor::Ord(OrdTensor::place(j, a, b)?))
            }
            _ => Err(Error::MalformedTerm(
                "factor flavors do not match the split".into(),
            )),
        }
    }

    /// Copy re-embedded into larger (or equal) dimensions, indices unchanged.
    pub fn with_dims(&self, dims: &[usize]) -> Result<Self> {
        self.flavor().check_dims(self.degree(), dims)?;
        match self {
            Tensor::Sym(s) => Ok(Tensor::Sym(s.with_dim(dims[0])?)),
            Tensor::Alt(a) => Ok(Tensor::Alt(a.with_dim(dims[0])?)),
            Tensor::Ord(o) => Ok(Tensor::Ord(o.with_dims(dims.to_vec())?)),
        }
    }
}

fn single<F>(maps: &[LinearMap<F>]) -> Result<&LinearMap<F>> {
    match maps {
        [m] => Ok(m),
        _ => Err(Error::dims(format!(
            "expected one linear map, got {}",
            maps.len()
        ))),
    }
}

impl<F: Field> fmt::Display for Tensor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tensor::Sym(s) => write!(f, "{s}"),
            Tensor::Alt(a) => write!(f, "{a}"),
            Tensor::Ord(o) => write!(f, "{o}"),
        }
    }
}

impl<F: Field> fmt::Debug for Tensor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tensor::Sym(s) => write!(f, "{s:?}"),
            Tensor::Alt(a) => write!(f, "{a:?}"),
            Tensor::Ord(o) => write!(f, "{o:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn ord_product_example() {
        let r = Tensor::Ord(OrdTensor::<Q>::basis(vec![1], &[0]).unwrap());
        let s = Tensor::Ord(OrdTensor::<Q>::basis(vec![1, 1], &[0, 0]).unwrap());
        let t = Tensor::product(&Split::Slots(vec![1]), &r, &s).unwrap();
        assert_eq!(
            t,
            Tensor::Ord(OrdTensor::basis(vec![1, 1, 1], &[0, 0, 0]).unwrap())
        );
    }

    #[test]
    fn split_validation() {
        assert!(Split::Degree(0).validate(Flavor::Sym, 3).is_err());
        assert!(Split::Degree(3).validate(Flavor::Sym, 3).is_err());
        assert!(Split::Degree(2).validate(Flavor::Alt, 3).is_ok());
        assert!(Split::Slots(vec![]).validate(Flavor::Ord, 3).is_err());
        assert!(Split::Slots(vec![0, 1, 2])
            .validate(Flavor::Ord, 3)
            .is_err());
        assert!(Split::Slots(vec![1, 1]).validate(Flavor::Ord, 3).is_err());
        assert!(Split::Slots(vec![0, 2]).validate(Flavor::Ord, 3).is_ok());
        assert!(Split::Degree(1).validate(Flavor::Ord, 3).is_err());
    }

    #[test]
    fn entries_round_trip() {
        let coords = Coordinates::new(Flavor::Sym, 2, &[2]).unwrap();
        let t: Tensor<Q> = coords
            .tensor(&[Q::from_i64(1), Q::from_i64(2), Q::from_i64(3)])
            .unwrap();
        assert_eq!(t.to_string(), "x1^2 + 2*x1*x2 + 3*x2^2");
        assert_eq!(coords.coordinates(&t).unwrap()[1], Q::from_i64(2));
    }
}
