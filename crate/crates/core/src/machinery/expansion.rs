//! The `t`-expansion of `f(Φ_x(t) q)` and the covariant `Ψ`.
//!
//! `Φ_x(t)` maps `U ⊕ V -> U` by the identity on `U` and, on `V`,
//! `v ↦ t x(v) u` (sym), `v ↦ Σ_j t_j x_j(v) u_j` (alt) or slotwise
//! `v ↦ t_j x_j(v) u_j` (ord), where `u` is the direction of `h`.
//!
//! Write `q_i = Σ_α e_α · w_{i,α}` with `e_α` running over the basis of the
//! `U`-part of the block. The image of `q` then only depends on the scalars
//! `W = ⟨x-functional, w⟩` (one per factor below), so the expansion is a
//! polynomial in the base coordinates `c` of `q_0`, the `W`'s, a scalar `Z`
//! standing for `⟨x-functional, q_top⟩`, and `t`. Its extracted coefficient
//! is `h(c)·Z + Ψ(c, W)`, independent of `dim V`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Monomial, Polynomial};
use crate::families::{random_dense, random_vector};
use crate::machinery::direction::{outer, DirectionalDerivative};
use crate::machinery::minors::determinant;
use crate::multilinear::{
    increasing_tuples, product_tuples, sym_exponents, AltTensor, BigradedElement, Block,
    Coordinates, Entries, Flavor, Split, SymTensor, Tensor,
};

/// One `W` variable: a pairing of a piece `w` of a lower component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    /// `w_{i,α}(x)` with `w_{i,α} ∈ S^i V`; `u_key` is the exponent vector
    /// `α` on `U` (degree `d - i`).
    Sym { i: u32, u_key: Vec<usize> },
    /// `⟨x_{s_1} ∧ ... ∧ x_{s_i}, w_{i,A}⟩` with `w_{i,A} ∈ ∧^i V`; `u_key`
    /// is the tuple `A`, `slots` the increasing `s_1 < ... < s_i`.
    Alt {
        i: u32,
        u_key: Vec<usize>,
        slots: Vec<usize>,
    },
    /// `⟨⊗_{j∈J} x_j, w_{J,a}⟩`; `u_key` holds the `U` indices on the
    /// slots outside `J`.
    Ord {
        slots: Vec<usize>,
        u_key: Vec<usize>,
    },
}

impl Factor {
    /// Its `t`-degree.
    pub fn weight(&self) -> u32 {
        match self {
            Factor::Sym { i, .. } | Factor::Alt { i, .. } => *i,
            Factor::Ord { slots, .. } => slots.len() as u32,
        }
    }

    /// Which piece `w` it pairs: the block and the `U` key.
    pub fn piece(&self) -> (Block, Vec<usize>) {
        match self {
            Factor::Sym { i, u_key } | Factor::Alt { i, u_key, .. } => {
                (Block::VDegree(*i), u_key.clone())
            }
            Factor::Ord { slots, u_key } => (Block::VSlots(mask(slots)), u_key.clone()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Factor::Sym { i, u_key } => format!("W[{i};{u_key:?}]"),
            Factor::Alt { i, u_key, slots } => format!("W[{i};{u_key:?};x{slots:?}]"),
            Factor::Ord { slots, u_key } => format!("W[J={slots:?};{u_key:?}]"),
        }
    }
}

fn mask(slots: &[usize]) -> u64 {
    slots.iter().fold(0, |m, &j| m | 1 << j)
}

/// Evaluation functionals on `V`: one vector in `K^{dim V}` for sym, `d`
/// vectors for alt, one vector per slot for ord.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional<F>(pub Vec<Vec<F>>);

/// Lower-component pieces keyed by block and `U` key.
pub type Pieces<F> = BTreeMap<(Block, Vec<usize>), Tensor<F>>;

/// The pieces `w` of the lower components `q_1, ..., q_{d-1}` (or `q_J`),
/// keyed by block and `U` key, as tensors on the full space (sym/alt) or on
/// the slots of `J` (ord).
pub fn pieces<F: Field>(b: &BigradedElement<F>) -> Result<Pieces<F>> {
    let flavor = b.flavor();
    let d = b.degree();
    let du = b.dim_u();
    let full = b.full_dims();
    let mut grouped: BTreeMap<(Block, Vec<usize>), Entries<F>> = BTreeMap::new();
    for (&block, comp) in b.components() {
        if block == b.bottom_block() || block == b.top_block() {
            continue;
        }
        for (key, c) in comp.entries() {
            let (u_key, w_key) = match (flavor, block) {
                (Flavor::Sym, _) => {
                    let mut w = key.clone();
                    w[..du[0]].iter_mut().for_each(|e| *e = 0);
                    (key[..du[0]].to_vec(), w)
                }
                (Flavor::Alt, Block::VDegree(i)) => {
                    let split = (d - i) as usize;
                    (key[..split].to_vec(), key[split..].to_vec())
                }
                (Flavor::Ord, Block::VSlots(m)) => {
                    let (mut u, mut w) = (Vec::new(), Vec::new());
                    for (j, &k) in key.iter().enumerate() {
                        if m >> j & 1 == 1 {
                            w.push(k);
                        } else {
                            u.push(k);
                        }
                    }
                    (u, w)
                }
                _ => unreachable!("block kind matches the flavor"),
            };
            grouped.entry((block, u_key)).or_default().push((w_key, c));
        }
    }
    let mut out = BTreeMap::new();
    for ((block, u_key), entries) in grouped {
        let t = match block {
            Block::VDegree(i) => Tensor::from_entries(flavor, i, &full, entries)?,
            Block::VSlots(m) => {
                let dims: Vec<usize> = (0..d as usize)
                    .filter(|j| m >> j & 1 == 1)
                    .map(|j| full[j])
                    .collect();
                Tensor::from_entries(Flavor::Ord, dims.len() as u32, &dims, entries)?
            }
        };
        out.insert((block, u_key), t);
    }
    Ok(out)
}

pub(crate) struct Prepared<F: Field> {
    pub c0: Vec<F>,
    pub pieces: BTreeMap<(Block, Vec<usize>), Tensor<F>>,
}

/// The symbolic expansion and its split into `h·Z + Ψ`.
#[derive(Clone, Debug)]
pub struct PhiExpansion<F: Field> {
    flavor: Flavor,
    d: u32,
    dim_u: Vec<usize>,
    direction: DirectionalDerivative<F>,
    base: Coordinates,
    factors: Vec<Factor>,
    coefficient: Polynomial<F>,
    h: Polynomial<F>,
    psi: Polynomial<F>,
}

/// Builds the expansion of `f(Φ_x(t) q)` for the generator and direction in
/// `dd` and extracts the coefficient of `t^d` (sym) or `t_1 ⋯ t_d` (alt/ord).
pub fn phi_expand<F: Field>(
    flavor: Flavor,
    d: u32,
    dim_u: &[usize],
    dd: &DirectionalDerivative<F>,
) -> Result<PhiExpansion<F>> {
    let p = F::characteristic();
    if flavor != Flavor::Ord && p != 0 && p <= d as u64 {
        return Err(Error::UnsupportedCharacteristic {
            characteristic: p,
            reason: format!("the {flavor} expansion of degree {d} needs char 0 or char > {d}"),
        });
    }
    if d < 2 {
        return Err(Error::invalid("the expansion needs d >= 2"));
    }
    let base = Coordinates::new(flavor, d, dim_u)?;
    let nc = base.len();
    if dd.f.nvars() != nc {
        return Err(Error::dims("generator does not live on the base space"));
    }
    let us = dd.vectors();
    let factors = factor_list(flavor, d, dim_u);
    let nw = factors.len();
    let z = nc + nw;
    let nt = if flavor == Flavor::Sym { 1 } else { d as usize };
    let t0 = z + 1;
    let nvars = t0 + nt;

    let t_monomial = |f: &Factor| -> Monomial {
        match f {
            Factor::Sym { i, .. } => Monomial::var_pow(t0, *i),
            Factor::Alt { slots, .. } | Factor::Ord { slots, .. } => {
                Monomial::from_pairs(slots.iter().map(|&s| (t0 + s, 1)))
            }
        }
    };
    let full_t = match flavor {
        Flavor::Sym => Monomial::var_pow(t0, d),
        _ => Monomial::from_pairs((0..nt).map(|s| (t0 + s, 1))),
    };

    // g_K = c_K + Σ_F t^F W_F img_F[K] + t^top Z r_K
    let mut g: Vec<Polynomial<F>> = (0..nc).map(|k| Polynomial::var(nvars, k)).collect();
    for (w, factor) in factors.iter().enumerate() {
        let img = base.coordinates(&factor_image(factor, dim_u, &us)?)?;
        let mon = t_monomial(factor).mul(&Monomial::var(nc + w));
        for (k, c) in img.into_iter().enumerate() {
            if !c.is_zero() {
                g[k].add_term(mon.clone(), c);
            }
        }
    }
    let top_mon = full_t.mul(&Monomial::var(z));
    for (k, c) in dd.direction.iter().enumerate() {
        if !c.is_zero() {
            g[k].add_term(top_mon.clone(), c.clone());
        }
    }

    let keep = |m: &Monomial| -> bool {
        match flavor {
            Flavor::Sym => m.exponent(t0) <= d,
            _ => (0..nt).all(|s| m.exponent(t0 + s) <= 1),
        }
    };
    let expanded = dd.f.substitute_pruned(&g, nvars, &keep)?;
    let mut coefficient = Polynomial::zero(z + 1);
    for (m, c) in expanded.terms() {
        if m.restrict(|v| v >= t0) == full_t {
            coefficient.add_term(m.restrict(|v| v < t0), c.clone());
        }
    }

    let by_z = coefficient.collect_by(|v| v == z);
    let mut h = Polynomial::zero(nc);
    let mut psi = Polynomial::zero(nc + nw);
    for (zm, part) in by_z {
        match zm.exponent(z) {
            0 => psi = part.with_nvars(nc + nw)?,
            1 => h = part.with_nvars(nc)?,
            e => {
                return Err(Error::invalid(format!(
                    "unexpected power Z^{e} in the expansion"
                )))
            }
        }
    }
    if h != dd.h {
        return Err(Error::VerificationFailed(
            "the coefficient of the top pairing differs from the directional derivative".into(),
        ));
    }
    Ok(PhiExpansion {
        flavor,
        d,
        dim_u: dim_u.to_vec(),
        direction: dd.clone(),
        base,
        factors,
        coefficient,
        h,
        psi,
    })
}

fn factor_list(flavor: Flavor, d: u32, dim_u: &[usize]) -> Vec<Factor> {
    let mut out = Vec::new();
    match flavor {
        Flavor::Sym => {
            for i in 1..d {
                for u_key in sym_exponents(dim_u[0], d - i) {
                    out.push(Factor::Sym { i, u_key });
                }
            }
        }
        Flavor::Alt => {
            for i in 1..d {
                for u_key in increasing_tuples(dim_u[0], (d - i) as usize) {
                    for slots in increasing_tuples(d as usize, i as usize) {
                        out.push(Factor::Alt {
                            i,
                            u_key: u_key.clone(),
                            slots,
                        });
                    }
                }
            }
        }
        Flavor::Ord => {
            for size in 1..d as usize {
                for slots in increasing_tuples(d as usize, size) {
                    let rest = Split::complement(&slots, d);
                    let dims: Vec<usize> = rest.iter().map(|&j| dim_u[j]).collect();
                    for u_key in product_tuples(&dims) {
                        out.push(Factor::Ord {
                            slots: slots.clone(),
                            u_key,
                        });
                    }
                }
            }
        }
    }
    out
}

/// The base-space tensor multiplying `t^F W_F` in `Φ_x(t) q`.
fn factor_image<F: Field>(factor: &Factor, dim_u: &[usize], us: &[Vec<F>]) -> Result<Tensor<F>> {
    Ok(match factor {
        Factor::Sym { i, u_key } => {
            let exps: Vec<u32> = u_key.iter().map(|&e| e as u32).collect();
            let e = SymTensor::monomial(dim_u[0], Monomial::from_exponents(&exps), F::one());
            Tensor::Sym(e.mul(&SymTensor::power(&us[0], *i))?)
        }
        Factor::Alt { u_key, slots, .. } => {
            let mut acc = AltTensor::basis(dim_u[0], u_key)?;
            for &s in slots {
                acc = acc.wedge(&AltTensor::vector(&us[s]))?;
            }
            Tensor::Alt(acc)
        }
        Factor::Ord { slots, u_key } => {
            let mut vectors = Vec::with_capacity(dim_u.len());
            let mut rest = u_key.iter();
            for (j, &n) in dim_u.iter().enumerate() {
                if slots.contains(&j) {
                    vectors.push(us[j].clone());
                } else {
                    let mut e = vec![F::zero(); n];
                    e[*rest.next().expect("one U index per free slot")] = F::one();
                    vectors.push(e);
                }
            }
            Tensor::Ord(outer(&vectors)?)
        }
    })
}

impl<F: Field> PhiExpansion<F> {
    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn dim_u(&self) -> &[usize] {
        &self.dim_u
    }

    pub fn direction(&self) -> &DirectionalDerivative<F> {
        &self.direction
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// The extracted `t`-coefficient in `[c, W, Z]`.
    pub fn coefficient(&self) -> &Polynomial<F> {
        &self.coefficient
    }

    pub fn h(&self) -> &Polynomial<F> {
        &self.h
    }

    /// `Ψ(c, W)`.
    pub fn psi(&self) -> &Polynomial<F> {
        &self.psi
    }

    /// Variable names for display: `c_k`, the factor labels, `Z`.
    pub fn variable_name(&self, v: usize) -> String {
        let nc = self.base.len();
        if v < nc {
            Coordinates::label(v)
        } else if v < nc + self.factors.len() {
            self.factors[v - nc].describe()
        } else {
            "Z".into()
        }
    }

    fn check_split(&self, b: &BigradedElement<F>) -> Result<()> {
        if b.flavor() != self.flavor || b.degree() != self.d || b.dim_u() != self.dim_u.as_slice() {
            return Err(Error::dims("the element is split along a different U"));
        }
        Ok(())
    }

    /// Base coordinates of `q_0`.
    pub fn q0_coordinates(&self, b: &BigradedElement<F>) -> Result<Vec<F>> {
        self.check_split(b)?;
        self.base.coordinates(&b.q0())
    }

    /// `h(q_0)`.
    pub fn h_value(&self, b: &BigradedElement<F>) -> Result<F> {
        self.h.eval(&self.q0_coordinates(b)?)
    }

    fn padded(&self, b: &BigradedElement<F>, x: &Functional<F>) -> Result<Vec<Vec<F>>> {
        let dv = b.dim_v();
        let need = match self.flavor {
            Flavor::Sym => 1,
            _ => self.d as usize,
        };
        if x.0.len() != need {
            return Err(Error::dims(format!(
                "functional needs {need} vectors, got {}",
                x.0.len()
            )));
        }
        x.0.iter()
            .enumerate()
            .map(|(j, v)| {
                let slot = if self.flavor == Flavor::Ord { j } else { 0 };
                if v.len() != dv[slot] {
                    return Err(Error::dims(format!(
                        "functional vector of length {} on V of dim {}",
                        v.len(),
                        dv[slot]
                    )));
                }
                let mut out = vec![F::zero(); self.dim_u[slot]];
                out.extend(v.iter().cloned());
                Ok(out)
            })
            .collect()
    }

    /// `q_0`'s coordinates and the pieces of `q`, computed once per element.
    pub(crate) fn prepare(&self, b: &BigradedElement<F>) -> Result<Prepared<F>> {
        Ok(Prepared {
            c0: self.q0_coordinates(b)?,
            pieces: pieces(b)?,
        })
    }

    /// Values of the `W` variables at `(q, x)`.
    pub fn pairings(&self, b: &BigradedElement<F>, x: &Functional<F>) -> Result<Vec<F>> {
        self.pairings_prepared(&self.prepare(b)?, b, x)
    }

    fn pairings_prepared(
        &self,
        prep: &Prepared<F>,
        b: &BigradedElement<F>,
        x: &Functional<F>,
    ) -> Result<Vec<F>> {
        let xs = self.padded(b, x)?;
        self.factors
            .iter()
            .map(|factor| {
                let Some(w) = prep.pieces.get(&factor.piece()) else {
                    return Ok(F::zero());
                };
                match (factor, w) {
                    (Factor::Sym { .. }, Tensor::Sym(w)) => w.eval(&xs[0]),
                    (Factor::Alt { slots, .. }, Tensor::Alt(w)) => {
                        w.pair(&slots.iter().map(|&s| xs[s].clone()).collect::<Vec<_>>())
                    }
                    (Factor::Ord { slots, .. }, Tensor::Ord(w)) => {
                        w.pair(&slots.iter().map(|&s| xs[s].clone()).collect::<Vec<_>>())
                    }
                    _ => unreachable!("pieces have the expansion's flavor"),
                }
            })
            .collect()
    }

    /// `⟨x-functional, t⟩` for a top-degree tensor `t` on the full space.
    pub fn top_pairing(
        &self,
        b: &BigradedElement<F>,
        t: &Tensor<F>,
        x: &Functional<F>,
    ) -> Result<F> {
        let xs = self.padded(b, x)?;
        match t {
            Tensor::Sym(s) => s.eval(&xs[0]),
            Tensor::Alt(a) => a.pair(&xs),
            Tensor::Ord(o) => o.pair(&xs),
        }
    }

    /// `Ψ(x, q_0, ..., q_{d-1})`.
    pub fn psi_value(&self, b: &BigradedElement<F>, x: &Functional<F>) -> Result<F> {
        self.psi_prepared(&self.prepare(b)?, b, x)
    }

    pub(crate) fn psi_prepared(
        &self,
        prep: &Prepared<F>,
        b: &BigradedElement<F>,
        x: &Functional<F>,
    ) -> Result<F> {
        let mut point = prep.c0.clone();
        point.extend(self.pairings_prepared(prep, b, x)?);
        self.psi.eval(&point)
    }

    /// Checks `coefficient(t) = h(q_0)·⟨x, q_top⟩ + Ψ` at `samples` random
    /// `(q, x)` with `dim V = dim_v`, computing the left side independently
    /// by pushing all of `q` through `Φ_x(t)` with polynomial entries.
    pub fn check_identity(&self, dim_v: &[usize], samples: usize, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let full: Vec<usize> = self.dim_u.iter().zip(dim_v).map(|(u, v)| u + v).collect();
        for sample in 0..samples {
            let q = random_dense::<F>(self.flavor, self.d, &full, &mut rng)?;
            let b = BigradedElement::split(&q, &self.dim_u)?;
            let x = Functional(match self.flavor {
                Flavor::Sym => vec![random_vector(dim_v[0], &mut rng)],
                Flavor::Alt => (0..self.d)
                    .map(|_| random_vector(dim_v[0], &mut rng))
                    .collect(),
                Flavor::Ord => dim_v.iter().map(|&n| random_vector(n, &mut rng)).collect(),
            });
            let direct = self.direct_coefficient(&q, &x)?;
            let split =
                self.h_value(&b)? * self.top_pairing(&b, &b.top(), &x)? + self.psi_value(&b, &x)?;
            if direct != split {
                return Err(Error::VerificationFailed(format!(
                    "expansion identity fails at sample {}: {direct} != {split}",
                    sample + 1
                )));
            }
        }
        Ok(())
    }

    /// The `t`-coefficient of `f(Φ_x(t) q)`, computed from the whole of `q`.
    fn direct_coefficient(&self, q: &Tensor<F>, x: &Functional<F>) -> Result<F> {
        let d = self.d as usize;
        let nt = if self.flavor == Flavor::Sym { 1 } else { d };
        let us = self.direction.vectors();
        // image of basis vector b of slot j: a vector over U_j with entries in K[t]
        let column = |j: usize, b: usize| -> Vec<Polynomial<F>> {
            let n = self.dim_u[j];
            if b < n {
                return (0..n)
                    .map(|k| {
                        if k == b {
                            Polynomial::one(nt)
                        } else {
                            Polynomial::zero(nt)
                        }
                    })
                    .collect();
            }
            let b = b - n;
            let mut out = vec![Polynomial::zero(nt); n];
            let terms: Vec<(usize, usize)> = match self.flavor {
                Flavor::Sym => vec![(0, 0)],
                Flavor::Alt => (0..d).map(|s| (s, s)).collect(),
                Flavor::Ord => vec![(j, j)],
            };
            for (xi, ti) in terms {
                let scalar = x.0[xi][b].clone();
                let t = Polynomial::var(nt, if self.flavor == Flavor::Sym { 0 } else { ti });
                for (k, o) in out.iter_mut().enumerate() {
                    *o = &*o + &t.scale(&(scalar.clone() * us[xi][k].clone()));
                }
            }
            out
        };
        let nc = self.base.len();
        let mut c: Vec<Polynomial<F>> = vec![Polynomial::zero(nt); nc];
        match q {
            Tensor::Sym(s) => {
                // substitute e_b -> Σ_k column(b)[k] y_k in the ring [y (dim U), t]
                let nu = self.dim_u[0];
                let ring = nu + 1;
                let gs: Vec<Polynomial<F>> = (0..s.dim())
                    .map(|b| {
                        let col = column(0, b);
                        let mut g = Polynomial::zero(ring);
                        for (k, p) in col.iter().enumerate() {
                            let lifted = p.remap_vars(|_| nu, ring).expect("t lifts");
                            g = &g + &(&lifted * &Polynomial::var(ring, k));
                        }
                        g
                    })
                    .collect();
                let image = s.poly().substitute(&gs, ring)?;
                for (m, coef) in image.terms() {
                    let key: Vec<usize> = (0..nu).map(|k| m.exponent(k) as usize).collect();
                    let slot = self.base.index_of(&key).expect("degree-d key");
                    c[slot].add_term(Monomial::var_pow(0, m.exponent(nu)), coef.clone());
                }
            }
            Tensor::Alt(a) => {
                let cols: Vec<Vec<Polynomial<F>>> = (0..a.dim()).map(|b| column(0, b)).collect();
                for (key, coef) in a.terms() {
                    for (slot, l) in self.base.keys().iter().enumerate() {
                        let m: Vec<Vec<Polynomial<F>>> = l
                            .iter()
                            .map(|&row| key.iter().map(|&b| cols[b][row].clone()).collect())
                            .collect();
                        c[slot] = &c[slot] + &determinant(&m, nt).scale(coef);
                    }
                }
            }
            Tensor::Ord(o) => {
                for (key, coef) in o.terms() {
                    let cols: Vec<Vec<Polynomial<F>>> =
                        key.iter().enumerate().map(|(j, &b)| column(j, b)).collect();
                    for (slot, l) in self.base.keys().iter().enumerate() {
                        let mut p = Polynomial::constant(nt, coef.clone());
                        for (j, &row) in l.iter().enumerate() {
                            p = &p * &cols[j][row];
                        }
                        c[slot] = &c[slot] + &p;
                    }
                }
            }
        }
        let value = self.direction.f.substitute(&c, nt)?;
        let target = match self.flavor {
            Flavor::Sym => Monomial::var_pow(0, self.d),
            _ => Monomial::from_pairs((0..nt).map(|s| (s, 1))),
        };
        Ok(value.coefficient(&target))
    }

    /// `Ψ` written out in the coordinates of the lower components and of
    /// `x` for a given `dim V`: variables are the full-space coordinates of
    /// `q` (all blocks, in canonical order) followed by `x` (one vector for
    /// sym, then `d` vectors for alt/ord).
    pub fn in_coordinates(&self, dim_v: &[usize]) -> Result<Polynomial<F>> {
        let full: Vec<usize> = self.dim_u.iter().zip(dim_v).map(|(u, v)| u + v).collect();
        let qc = Coordinates::new(self.flavor, self.d, &full)?;
        let nq = qc.len();
        let xdims: Vec<usize> = match self.flavor {
            Flavor::Sym => vec![dim_v[0]],
            Flavor::Alt => vec![dim_v[0]; self.d as usize],
            Flavor::Ord => dim_v.to_vec(),
        };
        let offsets: Vec<usize> = xdims
            .iter()
            .scan(nq, |at, &n| {
                let o = *at;
                *at += n;
                Some(o)
            })
            .collect();
        let nvars = nq + xdims.iter().sum::<usize>();
        let xvar = |s: usize, b: usize| Polynomial::var(nvars, offsets[s] + b);
        let nc = self.base.len();
        let mut subs: Vec<Polynomial<F>> = Vec::with_capacity(nc + self.factors.len());
        // c_K of q_0 is the q coordinate with the same key (U indices come first)
        for key in self.base.keys() {
            let mut full_key = key.clone();
            if self.flavor == Flavor::Sym {
                full_key.resize(full[0], 0);
            }
            subs.push(Polynomial::var(
                nvars,
                qc.index_of(&full_key).expect("U key"),
            ));
        }
        let du = &self.dim_u;
        for factor in &self.factors {
            let mut w = Polynomial::zero(nvars);
            for (k, key) in qc.keys().iter().enumerate() {
                let qv = Polynomial::var(nvars, k);
                match factor {
                    Factor::Sym { u_key, .. } => {
                        if key[..du[0]] != u_key[..] {
                            continue;
                        }
                        let mut mon = qv;
                        for (b, &e) in key[du[0]..].iter().enumerate() {
                            mon = &mon * &xvar(0, b).pow(e as u32);
                        }
                        w = &w + &mon;
                    }
                    Factor::Alt { i, u_key, slots } => {
                        let split = (self.d - i) as usize;
                        if key[..split] != u_key[..] || key[split..].iter().any(|&v| v < du[0]) {
                            continue;
                        }
                        let bs = &key[split..];
                        let m: Vec<Vec<Polynomial<F>>> = slots
                            .iter()
                            .map(|&s| bs.iter().map(|&b| xvar(s, b - du[0])).collect())
                            .collect();
                        w = &w + &(&qv * &determinant(&m, nvars));
                    }
                    Factor::Ord { slots, u_key } => {
                        let mut rest = u_key.iter();
                        let mut mon = qv;
                        let mut ok = true;
                        for (j, &k) in key.iter().enumerate() {
                            if slots.contains(&j) {
                                if k < du[j] {
                                    ok = false;
                                    break;
                                }
                                mon = &mon * &xvar(j, k - du[j]);
                            } else if k != *rest.next().expect("free slot") {
                                ok = false;
                                break;
                            }
                        }
                        if ok {
                            w = &w + &mon;
                        }
                    }
                }
            }
            subs.push(w);
        }
        self.psi.substitute(&subs, nvars)
    }
}

/// `Ψ = Σ p(c)·Π W^α`, grouped by monomial in the `W`'s.
#[derive(Clone, Debug)]
pub struct CovariantExpansion<F: Field> {
    flavor: Flavor,
    d: u32,
    dim_u: Vec<usize>,
    factors: Vec<Factor>,
    terms: Vec<CovariantTerm<F>>,
    slot: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovariantTerm<F: Field> {
    /// `p(c)`, a polynomial in the base coordinates of `q_0`.
    pub coefficient: Polynomial<F>,
    /// `(factor index, exponent)` pairs, increasing in the index.
    pub factors: Vec<(usize, u32)>,
}

impl<F: Field> CovariantExpansion<F> {
    pub fn from_expansion(e: &PhiExpansion<F>) -> Result<Self> {
        let nc = e.base.len();
        let mut terms = Vec::new();
        for (wm, p) in e.psi.collect_by(|v| v >= nc) {
            terms.push(CovariantTerm {
                coefficient: p.with_nvars(nc)?,
                factors: wm.iter().map(|(v, k)| (v - nc, k)).collect(),
            });
        }
        let mut cov = CovariantExpansion {
            flavor: e.flavor,
            d: e.d,
            dim_u: e.dim_u.clone(),
            factors: e.factors.clone(),
            terms,
            slot: None,
        };
        if cov.flavor == Flavor::Ord {
            cov.slot = Some(cov.best_slot());
        }
        Ok(cov)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn terms(&self) -> &[CovariantTerm<F>] {
        &self.terms
    }

    /// `Σ weight·exponent` of a term.
    pub fn weighted_degree(&self, t: &CovariantTerm<F>) -> u32 {
        t.factors
            .iter()
            .map(|&(f, k)| self.factors[f].weight() * k)
            .sum()
    }

    /// Every term has weighted degree exactly `d`.
    pub fn weighted_degrees_ok(&self) -> bool {
        self.terms.iter().all(|t| self.weighted_degree(t) == self.d)
    }

    /// The factor a term is grouped by: smallest weight, then first in the
    /// factor order (sym/alt); the factor containing the grouping slot (ord).
    pub fn chosen_factor(&self, t: &CovariantTerm<F>) -> Option<usize> {
        match self.flavor {
            Flavor::Ord => {
                let m = self.slot?;
                t.factors
                    .iter()
                    .map(|&(f, _)| f)
                    .find(|&f| match &self.factors[f] {
                        Factor::Ord { slots, .. } => slots.contains(&m),
                        _ => false,
                    })
            }
            _ => t
                .factors
                .iter()
                .map(|&(f, _)| f)
                .min_by_key(|&f| (self.factors[f].weight(), self.factors[f].piece())),
        }
    }

    /// Every term has a factor of weight `<= d/2` (sym/alt) or a factor
    /// containing the grouping slot (ord).
    pub fn divisibility_ok(&self) -> bool {
        self.terms.iter().all(|t| match self.chosen_factor(t) {
            None => false,
            Some(f) => self.flavor == Flavor::Ord || self.factors[f].weight() <= self.d / 2,
        })
    }

    /// The ord grouping slot.
    pub fn slot(&self) -> Option<usize> {
        self.slot
    }

    /// Number of distinct pieces terms are grouped by: an upper bound on the
    /// size of the covariant certificate.
    pub fn group_count(&self) -> usize {
        self.group_count_for(self.slot)
    }

    fn group_count_for(&self, slot: Option<usize>) -> usize {
        let mut groups = std::collections::BTreeSet::new();
        for t in &self.terms {
            let chosen = match (self.flavor, slot) {
                (Flavor::Ord, Some(m)) => t.factors.iter().map(|&(f, _)| f).find(|&f| match &self
                    .factors[f]
                {
                    Factor::Ord { slots, .. } => slots.contains(&m),
                    _ => false,
                }),
                _ => self.chosen_factor(t),
            };
            if let Some(f) = chosen {
                groups.insert(self.factors[f].piece());
            }
        }
        groups.len()
    }

    /// The slot minimizing the number of groups; ties go to the larger
    /// `dim U_m`, then the smaller index.
    fn best_slot(&self) -> usize {
        (0..self.d as usize)
            .min_by_key(|&m| {
                (
                    self.group_count_for(Some(m)),
                    std::cmp::Reverse(self.dim_u[m]),
                    m,
                )
            })
            .expect("d >= 2")
    }
}
