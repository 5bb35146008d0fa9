use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, Monomial, Polynomial};

/// An element of `S^d V`, stored as a homogeneous polynomial of degree `d`
/// in the basis vectors of `V`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymTensor<F> {
    d: u32,
    poly: Polynomial<F>,
}

impl<F: Field> SymTensor<F> {
    pub fn new(d: u32, poly: Polynomial<F>) -> Result<Self> {
        if !poly.is_homogeneous(d) {
            return Err(Error::invalid(format!(
                "polynomial is not homogeneous of degree {d}"
            )));
        }
        Ok(SymTensor { d, poly })
    }

    pub fn zero(d: u32, dim: usize) -> Self {
        SymTensor {
            d,
            poly: Polynomial::zero(dim),
        }
    }

    /// The linear form `sum_i v[i] e_i` as an element of `S^1 V`.
    pub fn vector(v: &[F]) -> Self {
        SymTensor {
            d: 1,
            poly: Polynomial::linear(v),
        }
    }

    /// `v^d`.
    pub fn power(v: &[F], d: u32) -> Self {
        SymTensor {
            d,
            poly: Polynomial::linear(v).pow(d),
        }
    }

    pub fn monomial(dim: usize, m: Monomial, c: F) -> Self {
        SymTensor {
            d: m.degree(),
            poly: Polynomial::monomial(dim, m, c),
        }
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.poly.nvars()
    }

    pub fn poly(&self) -> &Polynomial<F> {
        &self.poly
    }

    pub fn into_poly(self) -> Polynomial<F> {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.dim() != other.dim() {
            return Err(Error::dims(format!(
                "S^{} of dim {} against S^{} of dim {}",
                self.d,
                self.dim(),
                other.d,
                other.dim()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(SymTensor {
            d: self.d,
            poly: &self.poly + &other.poly,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(SymTensor {
            d: self.d,
            poly: &self.poly - &other.poly,
        })
    }

    pub fn scale(&self, c: &F) -> Self {
        SymTensor {
            d: self.d,
            poly: self.poly.scale(c),
        }
    }

    /// The symmetric product `S^a V x S^b V -> S^(a+b) V`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::dims("symmetric product of different spaces"));
        }
        Ok(SymTensor {
            d: self.d + other.d,
            poly: &self.poly * &other.poly,
        })
    }

    /// `S^d(phi)(q)` for `phi: V -> W` given as a `dim W x dim V` matrix.
    pub fn induced(&self, phi: &Matrix<F>) -> Result<Self> {
        if phi.cols() != self.dim() {
            return Err(Error::dims(format!(
                "map with {} columns applied to a tensor on a space of dim {}",
                phi.cols(),
                self.dim()
            )));
        }
        // e_i -> sum_j phi[j][i] f_j
        Ok(SymTensor {
            d: self.d,
            poly: self.poly.linear_substitute(&phi.transpose())?,
        })
    }

    /// The pairing `<x, q> = sum_i x_i dq/de_i`, from `S^d V` to `S^(d-1) V`.
    pub fn contract(&self, x: &[F]) -> Result<Self> {
        if self.d == 0 {
            return Err(Error::invalid("cannot contract a degree-0 tensor"));
        }
        if x.len() != self.dim() {
            return Err(Error::dims(format!(
                "dual vector of length {} against dim {}",
                x.len(),
                self.dim()
            )));
        }
        let mut out = Polynomial::zero(self.dim());
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            out = &out + &self.poly.partial_derivative(i)?.scale(xi);
        }
        Ok(SymTensor {
            d: self.d - 1,
            poly: out,
        })
    }

    /// Value of `q` as a polynomial at the point `x`; for `q = v^d` this is `x(v)^d`.
    pub fn eval(&self, x: &[F]) -> Result<F> {
        self.poly.eval(x)
    }

    /// Copy living in a space of dimension `dim` (indices unchanged).
    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        Ok(SymTensor {
            d: self.d,
            poly: self.poly.with_nvars(dim)?,
        })
    }
}

impl<F: Field> fmt::Display for SymTensor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl<F: Field> fmt::Debug for SymTensor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S^{}[{}]({})", self.d, self.dim(), self.poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_polynomial;
    use num_rational::BigRational;

    type Q = BigRational;

    fn sym(text: &str, d: u32, n: usize) -> SymTensor<Q> {
        SymTensor::new(d, parse_polynomial(text, Some(n)).unwrap()).unwrap()
    }

    #[test]
    fn projection_kills_second_variable() {
        let q = sym("x1^2 + x1*x2 + x2^2", 2, 2);
        let phi = Matrix::from_rows(vec![vec![Q::from_i64(1), Q::from_i64(0)]], 2).unwrap();
        assert_eq!(q.induced(&phi).unwrap(), sym("x1^2", 2, 1));
    }

    #[test]
    fn contraction_examples() {
        let q = sym("x1^2*x2", 3, 2);
        let e1 = [Q::from_i64(1), Q::from_i64(0)];
        assert_eq!(q.contract(&e1).unwrap(), sym("2*x1*x2", 2, 2));
        assert!(q
            .contract(&[Q::from_i64(0), Q::from_i64(0)])
            .unwrap()
            .is_zero());
        assert!(sym("x2^3", 3, 2).contract(&e1).unwrap().is_zero());
        assert!(SymTensor::<Q>::zero(0, 2).contract(&e1).is_err());
        assert!(q.contract(&[Q::from_i64(1)]).is_err());
    }

    #[test]
    fn rejects_inhomogeneous() {
        assert!(SymTensor::new(2, parse_polynomial::<Q>("x1^2 + x2", None).unwrap()).is_err());
    }
}
