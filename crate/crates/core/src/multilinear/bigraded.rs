use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactalg::Field;
use crate::multilinear::{Flavor, Tensor};

/// A bigraded block of `S^d(U ⊕ V)`, `∧^d(U ⊕ V)` or `T^d(U ⊕ V)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    /// Sym/alt: `V`-degree `i` (so `U`-degree `d - i`).
    VDegree(u32),
    /// Ord: bit `j` set iff slot `j` carries a `V` index.
    VSlots(u64),
}

/// A tensor over `U ⊕ V` split into its bigraded components. Components
/// are kept as tensors on the full space, so assembling is plain addition.
#[derive(Clone, PartialEq, Eq)]
pub struct BigradedElement<F> {
    flavor: Flavor,
    d: u32,
    dim_u: Vec<usize>,
    dim_v: Vec<usize>,
    components: BTreeMap<Block, Tensor<F>>,
}

impl<F: Field> BigradedElement<F> {
    /// Splits `q`, whose first `dim_u` coordinates (per slot for ord) span `U`.
    pub fn split(q: &Tensor<F>, dim_u: &[usize]) -> Result<Self> {
        let flavor = q.flavor();
        let d = q.degree();
        let dims = q.dims();
        if dim_u.len() != dims.len() || dim_u.iter().zip(&dims).any(|(u, n)| u > n) {
            return Err(Error::dims(format!(
                "U dimensions {dim_u:?} do not fit inside {dims:?}"
            )));
        }
        if flavor == Flavor::Ord && d > 63 {
            return Err(Error::invalid("too many slots"));
        }
        let dim_v: Vec<usize> = dims.iter().zip(dim_u).map(|(n, u)| n - u).collect();
        let mut groups: BTreeMap<Block, Vec<(Vec<usize>, F)>> = BTreeMap::new();
        for (key, c) in q.entries() {
            let block = match flavor {
                Flavor::Sym => Block::VDegree(key[dim_u[0]..].iter().sum::<usize>() as u32),
                Flavor::Alt => {
                    Block::VDegree(key.iter().filter(|&&i| i >= dim_u[0]).count() as u32)
                }
                Flavor::Ord => Block::VSlots(
                    key.iter()
                        .enumerate()
                        .filter(|(j, &i)| i >= dim_u[*j])
                        .fold(0u64, |m, (j, _)| m | (1 << j)),
                ),
            };
            groups.entry(block).or_default().push((key, c));
        }
        let mut components = BTreeMap::new();
        for (block, entries) in groups {
            components.insert(block, Tensor::from_entries(flavor, d, &dims, entries)?);
        }
        Ok(BigradedElement {
            flavor,
            d,
            dim_u: dim_u.to_vec(),
            dim_v,
            components,
        })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn dim_u(&self) -> &[usize] {
        &self.dim_u
    }

    pub fn dim_v(&self) -> &[usize] {
        &self.dim_v
    }

    pub fn full_dims(&self) -> Vec<usize> {
        self.dim_u
            .iter()
            .zip(&self.dim_v)
            .map(|(u, v)| u + v)
            .collect()
    }

    /// Every block, in increasing order, starting with the pure-`U` block.
    pub fn blocks(&self) -> Vec<Block> {
        match self.flavor {
            Flavor::Sym | Flavor::Alt => (0..=self.d).map(Block::VDegree).collect(),
            Flavor::Ord => (0..(1u64 << self.d)).map(Block::VSlots).collect(),
        }
    }

    /// The pure-`V` block: `q_d` or `q_{[d]}`.
    pub fn top_block(&self) -> Block {
        match self.flavor {
            Flavor::Sym | Flavor::Alt => Block::VDegree(self.d),
            Flavor::Ord => Block::VSlots((1u64 << self.d) - 1),
        }
    }

    pub fn bottom_block(&self) -> Block {
        match self.flavor {
            Flavor::Sym | Flavor::Alt => Block::VDegree(0),
            Flavor::Ord => Block::VSlots(0),
        }
    }

    fn zero(&self) -> Tensor<F> {
        Tensor::zero(self.flavor, self.d, &self.full_dims()).expect("consistent dims")
    }

    /// The component in `block`, as a tensor on the full space.
    pub fn component(&self, block: Block) -> Tensor<F> {
        self.components
            .get(&block)
            .cloned()
            .unwrap_or_else(|| self.zero())
    }

    /// Nonzero components.
    pub fn components(&self) -> impl Iterator<Item = (&Block, &Tensor<F>)> {
        self.components.iter()
    }

    pub fn top(&self) -> Tensor<F> {
        self.component(self.top_block())
    }

    /// Sum of all components except the top one.
    pub fn lower(&self) -> Tensor<F> {
        let top = self.top_block();
        self.components
            .iter()
            .filter(|(b, _)| **b != top)
            .fold(self.zero(), |acc, (_, t)| acc.add(t).expect("same space"))
    }

    /// `q_0` as a tensor on `U` alone.
    pub fn q0(&self) -> Tensor<F> {
        let bottom = self.component(self.bottom_block());
        Tensor::from_entries(
            self.flavor,
            self.d,
            &self.dim_u,
            bottom.entries().into_iter().map(|(mut k, c)| {
                if self.flavor == Flavor::Sym {
                    k.truncate(self.dim_u[0]);
                }
                (k, c)
            }),
        )
        .expect("bottom block lives on U")
    }

    pub fn assemble(&self) -> Tensor<F> {
        self.components
            .values()
            .fold(self.zero(), |acc, t| acc.add(t).expect("same space"))
    }
}

impl<F: Field> std::fmt::Debug for BigradedElement<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BigradedElement")
            .field("flavor", &self.flavor)
            .field("d", &self.d)
            .field("dim_u", &self.dim_u)
            .field("dim_v", &self.dim_v)
            .field("components", &self.components)
            .finish()
    }
}
