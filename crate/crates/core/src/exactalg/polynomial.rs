use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, Monomial};

/// Sparse multivariate polynomial in canonical form: a map from monomials to
/// nonzero coefficients, over a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<F> {
    nvars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::monomial(nvars, Monomial::one(), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    /// The variable `x_i` (0-based). Panics when `i >= nvars`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable {i} out of range for {nvars} variables");
        Self::monomial(nvars, Monomial::var(i), F::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: F) -> Self {
        debug_assert!(m.max_var().is_none_or(|v| v < nvars));
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    /// Linear form `sum_i coeffs[i] * x_i`.
    pub fn linear(coeffs: &[F]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(i), c.clone());
        }
        p
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, F)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            if let Some(v) = m.max_var() {
                if v >= nvars {
                    return Err(Error::VariableOutOfRange { index: v, nvars });
                }
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, F)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    /// Adds `c * m` in place, keeping the canonical form.
    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        debug_assert!(m.max_var().is_none_or(|v| v < self.nvars));
        match self.terms.entry(m) {
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

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// The common degree of all terms, if the polynomial is nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.total_degree()?;
        self.is_homogeneous(d).then_some(d)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::dims(format!(
                "polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_filtered(other, &|_| true))
    }

    fn mul_filtered(&self, other: &Self, keep: &dyn Fn(&Monomial) -> bool) -> Self {
        let mut acc: HashMap<Monomial, F> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if !keep(&m) {
                    continue;
                }
                let c = ca.clone() * cb.clone();
                acc.entry(m).and_modify(|x| *x += c.clone()).or_insert(c);
            }
        }
        Polynomial {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[F]) -> Result<F> {
        if point.len() != self.nvars {
            return Err(Error::dims(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.iter() {
                t *= point[i].pow(e as u64);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Formal partial derivative in `var`.
    pub fn partial_derivative(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let reduced = m.div(&Monomial::var(var)).expect("var divides m");
            out.add_term(reduced, c.clone() * F::from_i64(e as i64));
        }
        Ok(out)
    }

    /// Replaces each `x_i` by `sum_j m[i][j] * y_j`; the result lives in
    /// `m.cols()` variables.
    pub fn linear_substitute(&self, m: &Matrix<F>) -> Result<Self> {
        if m.rows() != self.nvars {
            return Err(Error::dims(format!(
                "substitution matrix has {} rows for {} variables",
                m.rows(),
                self.nvars
            )));
        }
        let forms: Vec<Polynomial<F>> = (0..m.rows())
            .map(|i| Polynomial::linear(m.row(i)))
            .collect();
        self.substitute(&forms, m.cols())
    }

    /// Composition `f(g_1, ..., g_n)`; every `g_i` must live in `new_nvars` variables.
    pub fn substitute(&self, gs: &[Polynomial<F>], new_nvars: usize) -> Result<Self> {
        self.substitute_pruned(gs, new_nvars, &|_| true)
    }

    /// Composition that discards, after every multiplication, monomials
    /// rejected by `keep`. `keep` must be closed under division (if a
    /// monomial is rejected, so is every multiple of it) for the result to
    /// equal the truncation of the full composition.
    pub fn substitute_pruned(
        &self,
        gs: &[Polynomial<F>],
        new_nvars: usize,
        keep: &dyn Fn(&Monomial) -> bool,
    ) -> Result<Self> {
        if gs.len() != self.nvars {
            return Err(Error::dims(format!(
                "{} substitutions for {} variables",
                gs.len(),
                self.nvars
            )));
        }
        if let Some(g) = gs.iter().find(|g| g.nvars != new_nvars) {
            return Err(Error::dims(format!(
                "substituted polynomial in {} variables, expected {new_nvars}",
                g.nvars
            )));
        }
        let mut powers: HashMap<(usize, u32), Polynomial<F>> = HashMap::new();
        let mut out = Self::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut acc = Self::constant(new_nvars, c.clone());
            for (i, e) in m.iter() {
                powers.entry((i, e)).or_insert_with(|| {
                    let mut p = Self::one(new_nvars);
                    for _ in 0..e {
                        p = p.mul_filtered(&gs[i], keep);
                    }
                    p
                });
                acc = acc.mul_filtered(&powers[&(i, e)], keep);
                if acc.is_zero() {
                    break;
                }
            }
            for (mm, cc) in acc.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    /// The `p`-th root of a polynomial over a field of characteristic `p`,
    /// defined when every exponent is divisible by `p` (coefficients are
    /// fixed by Frobenius on the prime field). `Ok(None)` otherwise.
    pub fn frobenius_root(&self) -> Result<Option<Self>> {
        let p = F::characteristic();
        if p == 0 {
            return Err(Error::UnsupportedCharacteristic {
                characteristic: 0,
                reason: "Frobenius roots need a prime field".into(),
            });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            match m.exact_root(p as u32) {
                Some(r) => out.add_term(r, c.clone()),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    /// True when every partial derivative vanishes identically.
    pub fn all_partials_vanish(&self) -> bool {
        (0..self.nvars).all(|v| {
            self.partial_derivative(v)
                .map(|d| d.is_zero())
                .unwrap_or(true)
        })
    }

    /// Re-embeds into a different number of variables (indices unchanged).
    pub fn with_nvars(&self, nvars: usize) -> Result<Self> {
        if let Some(v) = self.terms.keys().filter_map(Monomial::max_var).max() {
            if v >= nvars {
                return Err(Error::VariableOutOfRange { index: v, nvars });
            }
        }
        Ok(Polynomial {
            nvars,
            terms: self.terms.clone(),
        })
    }

    /// Renames variables through an injective `map` into `nvars` variables.
    pub fn remap_vars(&self, map: impl Fn(usize) -> usize, nvars: usize) -> Result<Self> {
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mm = m.remap(&map);
            if let Some(v) = mm.max_var() {
                if v >= nvars {
                    return Err(Error::VariableOutOfRange { index: v, nvars });
                }
            }
            out.add_term(mm, c.clone());
        }
        Ok(out)
    }

    pub fn map_coefficients<G: Field>(&self, f: impl Fn(&F) -> G) -> Polynomial<G> {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Groups terms by their restriction to the variables accepted by
    /// `selected`: returns `m_sel -> coefficient polynomial` where the
    /// coefficient polynomial keeps the remaining variables.
    pub fn collect_by(
        &self,
        selected: impl Fn(usize) -> bool,
    ) -> BTreeMap<Monomial, Polynomial<F>> {
        let mut out: BTreeMap<Monomial, Polynomial<F>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let sel = m.restrict(&selected);
            let rest = m.restrict(|v| !selected(v));
            out.entry(sel)
                .or_insert_with(|| Polynomial::zero(self.nvars))
                .add_term(rest, c.clone());
        }
        out
    }

    /// Renders with custom variable names, e.g. `3/4*c_1*c_2^2 - x1`.
    pub fn to_string_with(&self, name: impl Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        // graded, then descending lexicographic in the exponent vectors
        let mut ordered: Vec<(&Monomial, &F)> = self.terms.iter().collect();
        ordered.sort_by_cached_key(|(m, _)| {
            (
                std::cmp::Reverse(m.degree()),
                std::cmp::Reverse(m.to_exponents(self.nvars)),
            )
        });
        let mut out = String::new();
        for (k, (m, c)) in ordered.into_iter().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = m
                .iter()
                .map(|(i, e)| {
                    if e == 1 {
                        name(i)
                    } else {
                        format!("{}^{}", name(i), e)
                    }
                })
                .collect();
            if vars.is_empty() {
                out.push_str(&mag);
            } else {
                if mag != "1" {
                    out.push_str(&mag);
                    out.push('*');
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }
}

impl<F: Field> Add for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl<F: Field> Sub for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl<F: Field> Mul for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        self.scale(&-F::one())
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(|i| format!("x{}", i + 1)))
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.nvars, self)
    }
}
