use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, Polynomial};
use crate::families::{border_strength, rank_locus_point};
use crate::machinery::minors::{determinant, pfaffian};
use crate::multilinear::{increasing_tuples, Coordinates, Flavor, Tensor};

/// Number of sampler draws checked against the generators on construction.
pub const SPOT_CHECKS: usize = 20;
const SPOT_SEED: u64 = 0x5eed;

/// A user-supplied sampler: given `dim V` (per slot for ord) it returns a
/// point of `X(U ⊕ V)` on the full space, `U` coordinates first.
pub type SampleFn<F> = Arc<dyn Fn(&[usize], &mut ChaCha8Rng) -> Result<Tensor<F>> + Send + Sync>;

/// How points of `X(U ⊕ V)` are produced.
#[derive(Clone)]
pub enum Sampler<F> {
    /// Degree 2: forms whose matrix (Gram, skew, plain) has rank `<= rank`.
    RankLocus {
        rank: usize,
    },
    /// Sums of `k` random products.
    BorderStrength {
        k: usize,
    },
    /// A fixed list of points; a draw picks one whose dimensions match.
    Points(Vec<Tensor<F>>),
    Custom(SampleFn<F>),
}

impl<F: Field> Sampler<F> {
    /// `rank_locus`, `border_strength` or `custom`.
    pub fn family(&self) -> &'static str {
        match self {
            Sampler::RankLocus { .. } => "rank_locus",
            Sampler::BorderStrength { .. } => "border_strength",
            Sampler::Points(_) | Sampler::Custom(_) => "custom",
        }
    }
}

impl<F: Field> fmt::Debug for Sampler<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sampler::RankLocus { rank } => write!(f, "RankLocus {{ rank: {rank} }}"),
            Sampler::BorderStrength { k } => write!(f, "BorderStrength {{ k: {k} }}"),
            Sampler::Points(p) => write!(f, "Points({})", p.len()),
            Sampler::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A closed subset `X` given by equations on the base space (`S^d U`,
/// `∧^d U` or `U_1 ⊗ ... ⊗ U_d`) and a sampler for `X(U ⊕ V)`.
///
/// Generators are polynomials in the base coordinates `c_1, c_2, ...`.
#[derive(Clone, Debug)]
pub struct ClosedSetPresentation<F: Field> {
    flavor: Flavor,
    d: u32,
    base_dims: Vec<usize>,
    generators: Vec<Polynomial<F>>,
    sampler: Sampler<F>,
    integral: bool,
    coords: Coordinates,
}

/// The least ordinary degree of a generator and its graded value `d ×` that.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaDegree {
    pub degree: u32,
    pub graded: u32,
    /// A nonzero constant generator: `X(U)` is empty.
    pub empty: bool,
}

impl<F: Field> ClosedSetPresentation<F> {
    /// Validates the generators and spot-checks that they vanish on
    /// [`SPOT_CHECKS`] sampled points of `X(U)`.
    pub fn new(
        flavor: Flavor,
        d: u32,
        base_dims: &[usize],
        generators: Vec<Polynomial<F>>,
        sampler: Sampler<F>,
        integral: bool,
    ) -> Result<Self> {
        let coords = Coordinates::new(flavor, d, base_dims)?;
        for (k, g) in generators.iter().enumerate() {
            if g.nvars() != coords.len() {
                return Err(Error::dims(format!(
                    "generator {} uses {} coordinates, the base space has {}",
                    k + 1,
                    g.nvars(),
                    coords.len()
                )));
            }
            if g.homogeneous_degree().is_none() && !g.is_zero() {
                return Err(Error::invalid(format!(
                    "generator {} is not homogeneous",
                    k + 1
                )));
            }
        }
        if let Sampler::RankLocus { .. } = sampler {
            if d != 2 {
                return Err(Error::invalid("the rank_locus sampler needs d = 2"));
            }
        }
        let p = ClosedSetPresentation {
            flavor,
            d,
            base_dims: base_dims.to_vec(),
            generators,
            sampler,
            integral,
            coords,
        };
        p.spot_check()?;
        Ok(p)
    }

    /// Degree-2 forms of rank at most `rank` on `U`: the `(rank+1)`-minors of
    /// the Gram matrix (`G_ii = c(x_i^2)`, `G_ij = c(x_i x_j)/2`), the
    /// `(rank+2)`-sub-Pfaffians of the skew matrix, or the `(rank+1)`-minors
    /// of the coefficient matrix.
    pub fn rank_locus(flavor: Flavor, base_dims: &[usize], rank: usize) -> Result<Self> {
        let coords = Coordinates::new(flavor, 2, base_dims)?;
        let nc = coords.len();
        let var =
            |key: Vec<usize>| Polynomial::<F>::var(nc, coords.index_of(&key).expect("base key"));
        let half = F::from_i64(2)
            .inv()
            .ok_or(Error::UnsupportedCharacteristic {
                characteristic: 2,
                reason: "the Gram matrix of a quadric needs 1/2".into(),
            });
        let mut generators = Vec::new();
        match flavor {
            Flavor::Sym => {
                let n = base_dims[0];
                let half = if n > 1 { Some(half?) } else { None };
                let gram: Vec<Vec<Polynomial<F>>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let mut key = vec![0; n];
                                key[i] += 1;
                                key[j] += 1;
                                let v = var(key);
                                if i == j {
                                    v
                                } else {
                                    v.scale(half.as_ref().expect("n > 1"))
                                }
                            })
                            .collect()
                    })
                    .collect();
                let subsets = increasing_tuples(n, rank + 1);
                for (a, rows) in subsets.iter().enumerate() {
                    for cols in &subsets[a..] {
                        let m: Vec<Vec<_>> = rows
                            .iter()
                            .map(|&i| cols.iter().map(|&j| gram[i][j].clone()).collect())
                            .collect();
                        generators.push(determinant(&m, nc));
                    }
                }
            }
            Flavor::Alt => {
                if rank % 2 == 1 {
                    return Err(Error::invalid("alternating forms have even rank"));
                }
                let n = base_dims[0];
                let skew = |i: usize, j: usize| -> Polynomial<F> {
                    match i.cmp(&j) {
                        std::cmp::Ordering::Less => var(vec![i, j]),
                        std::cmp::Ordering::Greater => -&var(vec![j, i]),
                        std::cmp::Ordering::Equal => Polynomial::zero(nc),
                    }
                };
                for rows in increasing_tuples(n, rank + 2) {
                    let m: Vec<Vec<_>> = rows
                        .iter()
                        .map(|&i| rows.iter().map(|&j| skew(i, j)).collect())
                        .collect();
                    generators.push(pfaffian(&m, nc));
                }
            }
            Flavor::Ord => {
                for rows in increasing_tuples(base_dims[0], rank + 1) {
                    for cols in increasing_tuples(base_dims[1], rank + 1) {
                        let m: Vec<Vec<_>> = rows
                            .iter()
                            .map(|&i| cols.iter().map(|&j| var(vec![i, j])).collect())
                            .collect();
                        generators.push(determinant(&m, nc));
                    }
                }
            }
        }
        generators.retain(|g| !g.is_zero());
        Self::new(
            flavor,
            2,
            base_dims,
            generators,
            Sampler::RankLocus { rank },
            true,
        )
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn base_dims(&self) -> &[usize] {
        &self.base_dims
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn sampler(&self) -> &Sampler<F> {
        &self.sampler
    }

    pub fn integral(&self) -> bool {
        self.integral
    }

    /// The coordinates `c_1, c_2, ...` the generators are written in.
    pub fn base_coordinates(&self) -> &Coordinates {
        &self.coords
    }

    /// Full dimensions of `U ⊕ V`.
    pub fn full_dims(&self, dim_v: &[usize]) -> Result<Vec<usize>> {
        if dim_v.len() != self.base_dims.len() {
            return Err(Error::dims(format!(
                "dim V has {} entries, expected {}",
                dim_v.len(),
                self.base_dims.len()
            )));
        }
        Ok(self
            .base_dims
            .iter()
            .zip(dim_v)
            .map(|(u, v)| u + v)
            .collect())
    }

    /// A point of `X(U ⊕ V)`.
    pub fn sample(&self, dim_v: &[usize], rng: &mut ChaCha8Rng) -> Result<Tensor<F>> {
        let dims = self.full_dims(dim_v)?;
        let q = match &self.sampler {
            Sampler::RankLocus { rank } => rank_locus_point(self.flavor, &dims, *rank, rng)?,
            Sampler::BorderStrength { k } => {
                border_strength(self.flavor, self.d, &dims, *k, rng)?.target
            }
            Sampler::Points(points) => {
                let matching: Vec<&Tensor<F>> =
                    points.iter().filter(|p| p.dims() == dims).collect();
                if matching.is_empty() {
                    return Err(Error::dims(format!("no sample point lives on {dims:?}")));
                }
                matching[rng.gen_range(0..matching.len())].clone()
            }
            Sampler::Custom(f) => f(dim_v, rng)?,
        };
        if q.flavor() != self.flavor || q.degree() != self.d || q.dims() != dims {
            return Err(Error::dims("sampler returned a tensor of the wrong shape"));
        }
        Ok(q)
    }

    /// Values of all generators at a point of the base space.
    pub fn evaluate(&self, q: &Tensor<F>) -> Result<Vec<F>> {
        let c = self.coords.coordinates(q)?;
        self.generators.iter().map(|g| g.eval(&c)).collect()
    }

    /// The projection `U ⊕ V -> U` (per slot for ord).
    pub fn projection(&self, full_dims: &[usize]) -> Vec<Matrix<F>> {
        self.base_dims
            .iter()
            .zip(full_dims)
            .map(|(&u, &n)| Matrix::from_fn(u, n, |i, j| if i == j { F::one() } else { F::zero() }))
            .collect()
    }

    fn spot_check(&self) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(SPOT_SEED);
        let points: Vec<Tensor<F>> = match &self.sampler {
            // a fixed point list is pushed down to U, which stays inside X
            Sampler::Points(points) => points.iter().take(SPOT_CHECKS).cloned().collect(),
            _ => {
                let zero = vec![0; self.base_dims.len()];
                (0..SPOT_CHECKS)
                    .map(|_| self.sample(&zero, &mut rng))
                    .collect::<Result<_>>()?
            }
        };
        for (j, q) in points.iter().enumerate() {
            let on_u = q.induced(&self.projection(&q.dims()))?;
            for (k, v) in self.evaluate(&on_u)?.into_iter().enumerate() {
                if !v.is_zero() {
                    return Err(Error::invalid(format!(
                        "generator {} does not vanish at sample {} (value {v})",
                        k + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// The least degree of a nonzero generator and its graded value.
    pub fn delta_degree(&self) -> Result<DeltaDegree> {
        let degree = self
            .generators
            .iter()
            .filter(|g| !g.is_zero())
            .filter_map(|g| g.total_degree())
            .min()
            .ok_or(Error::NoGenerators)?;
        Ok(DeltaDegree {
            degree,
            graded: self.d * degree,
            empty: degree == 0,
        })
    }

    /// Renders a generator in the base coordinates, e.g. `c_1*c_4 - c_2^2`.
    pub fn generator_string(&self, k: usize) -> String {
        self.generators[k].to_string_with(Coordinates::label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_polynomial;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn gram_determinant_degree() {
        let p = ClosedSetPresentation::<Q>::rank_locus(Flavor::Sym, &[3], 2).unwrap();
        assert_eq!(p.generators().len(), 1);
        let delta = p.delta_degree().unwrap();
        assert_eq!((delta.degree, delta.graded), (3, 6));
        assert_eq!(
            p.generators()[0],
            parse_polynomial(
                "c_1*c_4*c_6 + 1/4*c_2*c_3*c_5 - 1/4*c_1*c_5^2 - 1/4*c_4*c_3^2 - 1/4*c_6*c_2^2",
                Some(6)
            )
            .unwrap()
        );
    }

    #[test]
    fn constant_generator_means_empty() {
        let g = parse_polynomial::<Q>("1", Some(3)).unwrap();
        let p = ClosedSetPresentation::new(
            Flavor::Sym,
            2,
            &[2],
            vec![g],
            Sampler::Points(vec![]),
            true,
        )
        .unwrap();
        let delta = p.delta_degree().unwrap();
        assert_eq!((delta.degree, delta.graded, delta.empty), (0, 0, true));
    }

    #[test]
    fn high_degree_generator() {
        // one degree-8 equation on S^3 K^2 (coordinates c_1..c_4); the point
        // list is empty so nothing is spot-checked
        let g = parse_polynomial::<Q>("c_1^8 - c_4^8", Some(4)).unwrap();
        let p = ClosedSetPresentation::new(
            Flavor::Sym,
            3,
            &[2],
            vec![g],
            Sampler::Points(vec![]),
            true,
        )
        .unwrap();
        let delta = p.delta_degree().unwrap();
        assert_eq!((delta.degree, delta.graded), (8, 24));
    }

    #[test]
    fn spot_check_rejects_wrong_generators() {
        let g = parse_polynomial::<Q>("c_1", Some(6)).unwrap();
        let bad = ClosedSetPresentation::new(
            Flavor::Sym,
            2,
            &[3],
            vec![g],
            Sampler::RankLocus { rank: 2 },
            true,
        );
        assert!(matches!(bad, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn other_flavors() {
        let alt = ClosedSetPresentation::<Q>::rank_locus(Flavor::Alt, &[4], 2).unwrap();
        assert_eq!(alt.generator_string(0), "c_1*c_6 - c_2*c_5 + c_3*c_4");
        let ord = ClosedSetPresentation::<Q>::rank_locus(Flavor::Ord, &[2, 3], 1).unwrap();
        assert_eq!(ord.generators().len(), 3);
        let none = ClosedSetPresentation::<Q>::rank_locus(Flavor::Sym, &[1], 1).unwrap();
        assert!(matches!(none.delta_degree(), Err(Error::NoGenerators)));
    }
}
