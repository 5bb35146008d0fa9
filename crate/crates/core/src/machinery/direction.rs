use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Polynomial};
use crate::multilinear::{AltTensor, Coordinates, Flavor, OrdTensor, SymTensor, Tensor};

/// Default half-width of the search box for [`find_direction`].
pub const DEFAULT_BOX: i64 = 2;

/// `h = ∂f/∂r`, the derivative of a generator in the direction of a
/// decomposable point `r = u^d`, `u_1 ∧ ... ∧ u_d` or `u_1 ⊗ ... ⊗ u_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionalDerivative<F: Field> {
    pub f: Polynomial<F>,
    /// Base coordinates of `r`.
    pub direction: Vec<F>,
    pub h: Polynomial<F>,
    /// The integer vectors `u` (one for sym, `d` for alt/ord).
    pub witness: Vec<Vec<i64>>,
}

impl<F: Field> DirectionalDerivative<F> {
    /// The witness as field elements.
    pub fn vectors(&self) -> Vec<Vec<F>> {
        self.witness
            .iter()
            .map(|u| u.iter().map(|&a| F::from_i64(a)).collect())
            .collect()
    }
}

/// Base coordinates of `u^d`, `u_1 ∧ ... ∧ u_d` or `u_1 ⊗ ... ⊗ u_d`.
pub fn decomposable_point<F: Field>(coords: &Coordinates, us: &[Vec<F>]) -> Result<Vec<F>> {
    let d = coords.degree();
    let t = match coords.flavor() {
        Flavor::Sym => {
            let [u] = us else {
                return Err(Error::invalid("a symmetric direction is one vector"));
            };
            Tensor::Sym(SymTensor::power(u, d))
        }
        Flavor::Alt => {
            if us.len() != d as usize {
                return Err(Error::invalid(format!(
                    "an alternating direction is {d} vectors"
                )));
            }
            let mut acc = AltTensor::vector(&us[0]);
            for u in &us[1..] {
                acc = acc.wedge(&AltTensor::vector(u))?;
            }
            Tensor::Alt(acc)
        }
        Flavor::Ord => Tensor::Ord(outer(us)?),
    };
    coords.coordinates(&t)
}

/// `u_1 ⊗ ... ⊗ u_d`.
pub(crate) fn outer<F: Field>(us: &[Vec<F>]) -> Result<OrdTensor<F>> {
    let dims: Vec<usize> = us.iter().map(Vec::len).collect();
    let mut entries: Vec<(Vec<usize>, F)> = vec![(Vec::new(), F::one())];
    for u in us {
        let mut next = Vec::new();
        for (key, c) in &entries {
            for (i, a) in u.iter().enumerate() {
                if !a.is_zero() {
                    let mut k = key.clone();
                    k.push(i);
                    next.push((k, c.clone() * a.clone()));
                }
            }
        }
        entries = next;
    }
    OrdTensor::from_terms(dims, entries)
}

/// `Σ_K r_K ∂f/∂c_K`.
pub fn derivative_along<F: Field>(f: &Polynomial<F>, r: &[F]) -> Result<Polynomial<F>> {
    let mut h = Polynomial::zero(f.nvars());
    for (k, rk) in r.iter().enumerate() {
        if !rk.is_zero() {
            h = &h + &f.partial_derivative(k)?.scale(rk);
        }
    }
    Ok(h)
}

/// Sweeps integer witnesses in `[-bound, bound]` for a direction with a
/// nonzero derivative of `f`.
///
/// The order is deterministic: by max-norm, then L1 norm, then earlier
/// support first, then entries in the order `0, 1, -1, 2, -2, ...`; so the
/// first candidates are the standard basis vectors.
pub fn find_direction<F: Field>(
    f: &Polynomial<F>,
    flavor: Flavor,
    d: u32,
    base_dims: &[usize],
    bound: i64,
) -> Result<DirectionalDerivative<F>> {
    let coords = Coordinates::new(flavor, d, base_dims)?;
    if f.nvars() != coords.len() {
        return Err(Error::dims(format!(
            "f uses {} coordinates, the base space has {}",
            f.nvars(),
            coords.len()
        )));
    }
    if f.is_zero() || f.total_degree() == Some(0) {
        return Err(Error::invalid("f must be a nonconstant polynomial"));
    }
    let exhausted = Error::BoxExhausted { bound };
    if f.all_partials_vanish() {
        return Err(exhausted);
    }
    let lens: Vec<usize> = match flavor {
        Flavor::Sym => vec![base_dims[0]],
        Flavor::Alt => vec![base_dims[0]; d as usize],
        Flavor::Ord => base_dims.to_vec(),
    };
    let total: usize = lens.iter().sum();
    let found = sweep(total, bound.max(0), &mut |flat| {
        let mut witness = Vec::with_capacity(lens.len());
        let mut at = 0;
        for &l in &lens {
            witness.push(flat[at..at + l].to_vec());
            at += l;
        }
        let us: Vec<Vec<F>> = witness
            .iter()
            .map(|u| u.iter().map(|&a| F::from_i64(a)).collect())
            .collect();
        let r = match decomposable_point(&coords, &us) {
            Ok(r) => r,
            Err(e) => return ControlFlow::Break(Err(e)),
        };
        if r.iter().all(F::is_zero) {
            return ControlFlow::Continue(());
        }
        match derivative_along(f, &r) {
            Ok(h) if h.is_zero() => ControlFlow::Continue(()),
            Ok(h) => ControlFlow::Break(Ok(DirectionalDerivative {
                f: f.clone(),
                direction: r,
                h,
                witness,
            })),
            Err(e) => ControlFlow::Break(Err(e)),
        }
    });
    found.unwrap_or(Err(exhausted))
}

/// Visits the integer vectors of length `len` and max-norm `1..=bound` in
/// sweep order until `visit` breaks: by max-norm, then L1 norm, then support
/// (earlier positions first), then entries ranked `1, -1, 2, -2, ...`.
fn sweep<B>(len: usize, bound: i64, visit: &mut impl FnMut(&[i64]) -> ControlFlow<B>) -> Option<B> {
    for norm in 1..=bound {
        for l1 in norm..=len as i64 * norm {
            let mut support = Vec::with_capacity(len);
            if let ControlFlow::Break(b) = supports(len, norm, l1, &mut support, visit) {
                return Some(b);
            }
        }
    }
    None
}

fn supports<B>(
    len: usize,
    norm: i64,
    l1: i64,
    support: &mut Vec<bool>,
    visit: &mut impl FnMut(&[i64]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let chosen = support.iter().filter(|&&b| b).count() as i64;
    let left = (len - support.len()) as i64;
    // the final support size s must allow l1 in [s, s * norm]
    if chosen > l1 || (chosen + left) * norm < l1 {
        return ControlFlow::Continue(());
    }
    if support.len() == len {
        let mut v = vec![0; len];
        return values(support, norm, l1, 0, false, &mut v, visit);
    }
    for b in [true, false] {
        support.push(b);
        let flow = supports(len, norm, l1, support, visit);
        support.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

fn values<B>(
    support: &[bool],
    norm: i64,
    left: i64,
    at: usize,
    hit: bool,
    v: &mut Vec<i64>,
    visit: &mut impl FnMut(&[i64]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let Some(rest) = support.get(at..) else {
        return ControlFlow::Continue(());
    };
    let slots = rest.iter().filter(|&&b| b).count() as i64;
    if slots == 0 {
        return if left == 0 && hit {
            visit(v)
        } else {
            ControlFlow::Continue(())
        };
    }
    if !support[at] {
        return values(support, norm, left, at + 1, hit, v, visit);
    }
    for a in 1..=norm {
        let remaining = left - a;
        if remaining < slots - 1 || remaining > (slots - 1) * norm {
            continue;
        }
        for x in [a, -a] {
            v[at] = x;
            values(support, norm, remaining, at + 1, hit || a == norm, v, visit)?;
        }
    }
    v[at] = 0;
    ControlFlow::Continue(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_polynomial, Fp};
    use crate::machinery::ClosedSetPresentation;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn sweep_order_matches_a_full_sort() {
        let (len, bound) = (4, 2);
        let mut seen = Vec::new();
        sweep::<()>(len, bound, &mut |v| {
            seen.push(v.to_vec());
            ControlFlow::Continue(())
        });
        let mut all: Vec<Vec<i64>> = vec![Vec::new()];
        for _ in 0..len {
            all = all
                .into_iter()
                .flat_map(|v| (-bound..=bound).map(move |a| [v.clone(), vec![a]].concat()))
                .collect();
        }
        all.retain(|v| v.iter().any(|&a| a != 0));
        let rank = |a: i64| if a > 0 { 2 * a - 1 } else { -2 * a };
        all.sort_by_key(|v| {
            let max = v.iter().map(|a| a.abs()).max();
            let l1: i64 = v.iter().map(|a| a.abs()).sum();
            let support: Vec<bool> = v.iter().map(|&a| a == 0).collect();
            (
                max,
                l1,
                support,
                v.iter().map(|&a| rank(a)).collect::<Vec<_>>(),
            )
        });
        assert_eq!(seen, all);
    }

    #[test]
    fn gram_determinant_along_first_square() {
        let p = ClosedSetPresentation::<Q>::rank_locus(Flavor::Sym, &[3], 2).unwrap();
        let dd = find_direction(&p.generators()[0], Flavor::Sym, 2, &[3], DEFAULT_BOX).unwrap();
        assert_eq!(dd.witness, vec![vec![1, 0, 0]]);
        // the (1,1) cofactor of the Gram matrix
        assert_eq!(
            dd.h,
            parse_polynomial("c_4*c_6 - 1/4*c_5^2", Some(6)).unwrap()
        );
        assert_eq!(dd.h.total_degree(), Some(2));
    }

    #[test]
    fn square_of_a_coordinate() {
        let f = parse_polynomial::<Q>("c_1^2", Some(4)).unwrap();
        let dd = find_direction(&f, Flavor::Sym, 3, &[2], 1).unwrap();
        assert_eq!(dd.h, parse_polynomial("2*c_1", Some(4)).unwrap());
    }

    #[test]
    fn mixed_coordinate_needs_a_mixed_direction() {
        // only x1*x2 matters, so e_1 and e_2 fail and e_1 + e_2 works
        let f = parse_polynomial::<Q>("c_2^2", Some(3)).unwrap();
        let dd = find_direction(&f, Flavor::Sym, 2, &[2], 1).unwrap();
        assert_eq!(dd.witness, vec![vec![1, 1]]);
    }

    #[test]
    fn box_exhaustion_and_enlargement() {
        let f = parse_polynomial::<Q>("c_1", Some(3)).unwrap();
        assert_eq!(
            find_direction(&f, Flavor::Sym, 2, &[2], 0),
            Err(Error::BoxExhausted { bound: 0 })
        );
        assert!(find_direction(&f, Flavor::Sym, 2, &[2], 1).is_ok());
        // over F_3 the coordinate of x^2*y never moves along a cube u^3
        let g = parse_polynomial::<Fp<3>>("c_2", Some(4)).unwrap();
        assert_eq!(
            find_direction(&g, Flavor::Sym, 3, &[2], 2),
            Err(Error::BoxExhausted { bound: 2 })
        );
    }

    #[test]
    fn alternating_and_ordinary_directions() {
        let f = parse_polynomial::<Q>("c_3^2", Some(3)).unwrap();
        let dd = find_direction(&f, Flavor::Alt, 2, &[3], 1).unwrap();
        assert_eq!(dd.direction[2], Q::from_i64(1));
        let g = parse_polynomial::<Q>("c_4", Some(4)).unwrap();
        let dd = find_direction(&g, Flavor::Ord, 2, &[2, 2], 1).unwrap();
        assert_eq!(dd.witness, vec![vec![0, 1], vec![0, 1]]);
    }
}
