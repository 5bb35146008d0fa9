use std::fmt;

/// A monomial stored sparsely as `(variable, exponent)` pairs sorted by
/// variable index, with every exponent positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        Monomial(vec![(i as u32, 1)])
    }

    pub fn var_pow(i: usize, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(i as u32, e)])
        }
    }

    /// From a dense exponent vector.
    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(
            exps.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i as u32, e))
                .collect(),
        )
    }

    /// From unsorted pairs; exponents of repeated variables are added.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut v: Vec<(u32, u32)> = pairs
            .into_iter()
            .filter(|&(_, e)| e > 0)
            .map(|(i, e)| (i as u32, e))
            .collect();
        v.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(v.len());
        for (i, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 += e,
                _ => out.push((i, e)),
            }
        }
        Monomial(out)
    }

    pub fn to_exponents(&self, nvars: usize) -> Vec<u32> {
        let mut v = vec![0; nvars];
        for &(i, e) in &self.0 {
            v[i as usize] = e;
        }
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|&(i, e)| (i as usize, e))
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, var: usize) -> u32 {
        match self.0.binary_search_by_key(&(var as u32), |&(i, _)| i) {
            Ok(k) => self.0[k].1,
            Err(_) => 0,
        }
    }

    /// Largest variable index present, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.0.last().map(|&(i, _)| i as usize)
    }

    /// Smallest variable index present, if any.
    pub fn min_var(&self) -> Option<usize> {
        self.0.first().map(|&(i, _)| i as usize)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    std::cmp::Ordering::Less => return None,
                    std::cmp::Ordering::Equal => continue,
                    std::cmp::Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(i, e)| (i, e * k)).collect())
    }

    /// Keeps only the variables accepted by `keep`.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Monomial {
        Monomial(
            self.0
                .iter()
                .copied()
                .filter(|&(i, _)| keep(i as usize))
                .collect(),
        )
    }

    /// Renames variables through `map`; the map must be injective on the support.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Monomial {
        Monomial::from_pairs(self.iter().map(|(i, e)| (map(i), e)))
    }

    /// Every exponent divided by `k`, when all are divisible.
    pub fn exact_root(&self, k: u32) -> Option<Monomial> {
        if self.0.iter().any(|&(_, e)| e % k != 0) {
            return None;
        }
        Some(Monomial(self.0.iter().map(|&(i, e)| (i, e / k)).collect()))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(i, e)| {
                if e == 1 {
                    format!("x{}", i + 1)
                } else {
                    format!("x{}^{}", i + 1, e)
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}
