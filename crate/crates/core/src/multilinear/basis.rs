use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactalg::Field;
use crate::multilinear::{Flavor, Tensor};

/// Exponent vectors of degree `d` in `n` variables, in descending
/// lexicographic order: `(2,0,0), (1,1,0), (1,0,1), (0,2,0), ...`.
pub fn sym_exponents(n: usize, d: u32) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(n, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d as usize, &mut Vec::new(), &mut out);
    out
}

/// Strictly increasing `d`-tuples from `0..n`, in lexicographic order.
pub fn increasing_tuples(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, d: usize, start: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == d {
            out.push(prefix.clone());
            return;
        }
        for i in start..n {
            prefix.push(i);
            rec(n, d, i + 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, 0, &mut Vec::new(), &mut out);
    out
}

/// All index tuples with `idx[j] < dims[j]`, in lexicographic order.
pub fn product_tuples(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in dims {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The canonical coordinate system on `S^d K^n`, `∧^d K^n` or
/// `K^{n_1} ⊗ ... ⊗ K^{n_d}`. Coordinate `k` is written `c_{k+1}`.
#[derive(Clone, Debug)]
pub struct Coordinates {
    flavor: Flavor,
    d: u32,
    dims: Vec<usize>,
    keys: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl Coordinates {
    pub fn new(flavor: Flavor, d: u32, dims: &[usize]) -> Result<Self> {
        flavor.check_dims(d, dims)?;
        let keys = match flavor {
            Flavor::Sym => sym_exponents(dims[0], d),
            Flavor::Alt => increasing_tuples(dims[0], d as usize),
            Flavor::Ord => product_tuples(dims),
        };
        let index = keys
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();
        Ok(Coordinates {
            flavor,
            d,
            dims: dims.to_vec(),
            keys,
            index,
        })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Exponent vector (sym) or index tuple (alt/ord) of coordinate `k`.
    pub fn key(&self, k: usize) -> &[usize] {
        &self.keys[k]
    }

    pub fn keys(&self) -> &[Vec<usize>] {
        &self.keys
    }

    pub fn index_of(&self, key: &[usize]) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn label(k: usize) -> String {
        format!("c_{}", k + 1)
    }

    /// Human-readable basis element, e.g. `x1^2*x2`, `e1∧e3`, `e2⊗e1`.
    pub fn describe(&self, k: usize) -> String {
        let key = &self.keys[k];
        match self.flavor {
            Flavor::Sym => {
                let parts: Vec<String> = key
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, e)
                        }
                    })
                    .collect();
                if parts.is_empty() {
                    "1".into()
                } else {
                    parts.join("*")
                }
            }
            Flavor::Alt => key
                .iter()
                .map(|i| format!("e{}", i + 1))
                .collect::<Vec<_>>()
                .join("∧"),
            Flavor::Ord => key
                .iter()
                .map(|i| format!("e{}", i + 1))
                .collect::<Vec<_>>()
                .join("⊗"),
        }
    }

    pub fn coordinates<F: Field>(&self, t: &Tensor<F>) -> Result<Vec<F>> {
        if t.flavor() != self.flavor || t.degree() != self.d || t.dims() != self.dims {
            return Err(Error::dims("tensor does not live in this coordinate space"));
        }
        let mut v = vec![F::zero(); self.len()];
        for (key, c) in t.entries() {
            v[self.index[&key]] = c;
        }
        Ok(v)
    }

    pub fn tensor<F: Field>(&self, coords: &[F]) -> Result<Tensor<F>> {
        if coords.len() != self.len() {
            return Err(Error::dims(format!(
                "{} coordinates for a space of dimension {}",
                coords.len(),
                self.len()
            )));
        }
        Tensor::from_entries(
            self.flavor,
            self.d,
            &self.dims,
            self.keys.iter().cloned().zip(coords.iter().cloned()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym_order_is_descending_lex() {
        let e = sym_exponents(3, 2);
        assert_eq!(e[0], vec![2, 0, 0]);
        assert_eq!(e[1], vec![1, 1, 0]);
        assert_eq!(e[2], vec![1, 0, 1]);
        assert_eq!(e[3], vec![0, 2, 0]);
        assert_eq!(e.len(), 6);
        assert_eq!(sym_exponents(0, 0), vec![Vec::<usize>::new()]);
        assert!(sym_exponents(0, 2).is_empty());
    }

    #[test]
    fn tuple_counts() {
        assert_eq!(increasing_tuples(4, 2).len(), 6);
        assert_eq!(increasing_tuples(4, 2)[0], vec![0, 1]);
        assert_eq!(product_tuples(&[2, 3]).len(), 6);
        assert_eq!(product_tuples(&[2, 3])[1], vec![0, 1]);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 3), 0);
    }
}
