//! Exhaustive strength over a small prime field.
//!
//! For `k = 0, 1, ...` every set of `k` candidate first factors `r_1 < ... < r_k`
//! is tried; the second factors then solve a linear system. Candidates are
//! nonzero `r` with first nonzero coordinate `1`, on splits where `r` is the
//! smaller side (`e <= d/2` for sym/alt, the smaller of `J`, `[d] \ J` for
//! ord), ordered by split and then lexicographically by coefficients.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix};
use crate::multilinear::{binomial, Coordinates, Flavor, Split, Tensor};
use crate::strength::{CertTerm, StrengthCertificate};

#[derive(Clone, Debug)]
pub struct BruteForceConfig {
    /// Largest `k` to try.
    pub k_max: usize,
    /// Maximum number of `r`-tuples (summed over all `k`) to enumerate.
    pub budget: u128,
    pub parallel: bool,
}

impl Default for BruteForceConfig {
    fn default() -> Self {
        BruteForceConfig {
            k_max: 4,
            budget: 5_000_000,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BruteForceResult<F: Field> {
    /// The exact strength, or `None` when it exceeds `k_max`.
    pub strength: Option<usize>,
    pub certificate: Option<StrengthCertificate<F>>,
    /// Number of `r`-tuples examined.
    pub examined: u128,
}

struct Candidate<F> {
    split: Split,
    r: Tensor<F>,
    /// Coordinates of `r · b` for each basis element `b` of the `s` space.
    columns: Vec<Vec<F>>,
    s_coords: Coordinates,
}

pub fn brute_force_strength<F: Field>(
    q: &Tensor<F>,
    config: &BruteForceConfig,
) -> Result<BruteForceResult<F>> {
    let elements = F::elements().ok_or(Error::InfiniteField)?;
    let p = elements.len() as u128;
    let d = q.degree();
    if d < 2 {
        return Err(Error::invalid("strength needs degree at least 2"));
    }
    if q.is_zero() {
        return Ok(BruteForceResult {
            strength: Some(0),
            certificate: Some(StrengthCertificate::empty(q.clone())),
            examined: 0,
        });
    }
    let flavor = q.flavor();
    let dims = q.dims();
    let target_coords = Coordinates::new(flavor, d, &dims)?;
    let target = target_coords.coordinates(q)?;

    // (split, r-space, s-space) in split order
    let mut spaces: Vec<(Split, Coordinates, Coordinates)> = Vec::new();
    match flavor {
        Flavor::Sym | Flavor::Alt => {
            for e in 1..=d / 2 {
                spaces.push((
                    Split::Degree(e),
                    Coordinates::new(flavor, e, &dims)?,
                    Coordinates::new(flavor, d - e, &dims)?,
                ));
            }
        }
        Flavor::Ord => {
            for mask in 1u64..(1 << d) - 1 {
                let j: Vec<usize> = (0..d as usize).filter(|&s| mask >> s & 1 == 1).collect();
                let rest = Split::complement(&j, d);
                let size =
                    |slots: &[usize]| slots.iter().map(|&s| dims[s] as u128).product::<u128>();
                let (rs, ss) = (size(&j), size(&rest));
                // keep one of {J, complement}: the smaller side, ties broken by slot 0
                if rs > ss || (rs == ss && !j.contains(&0)) {
                    continue;
                }
                let rd: Vec<usize> = j.iter().map(|&s| dims[s]).collect();
                let sd: Vec<usize> = rest.iter().map(|&s| dims[s]).collect();
                spaces.push((
                    Split::Slots(j.clone()),
                    Coordinates::new(Flavor::Ord, j.len() as u32, &rd)?,
                    Coordinates::new(Flavor::Ord, rest.len() as u32, &sd)?,
                ));
            }
            spaces.sort_by(|a, b| a.0.cmp(&b.0));
        }
    }

    let mut n_candidates: u128 = 0;
    for (_, rc, _) in &spaces {
        let count = p
            .checked_pow(rc.len() as u32)
            .map(|x| (x - 1) / (p - 1))
            .unwrap_or(u128::MAX);
        n_candidates = n_candidates.saturating_add(count);
    }
    if n_candidates > config.budget {
        return Err(Error::BudgetExceeded {
            needed: n_candidates,
            budget: config.budget,
        });
    }

    let mut candidates: Vec<Candidate<F>> = Vec::new();
    for (split, rc, sc) in &spaces {
        for coeffs in normalized_vectors(&elements, rc.len()) {
            let r = rc.tensor(&coeffs)?;
            let mut columns = Vec::with_capacity(sc.len());
            for b in 0..sc.len() {
                let mut unit = vec![F::zero(); sc.len()];
                unit[b] = F::one();
                let s = sc.tensor(&unit)?;
                let prod = Tensor::product(split, &r, &s)?;
                columns.push(target_coords.coordinates(&prod)?);
            }
            candidates.push(Candidate {
                split: split.clone(),
                r,
                columns,
                s_coords: sc.clone(),
            });
        }
    }

    let mut examined: u128 = 0;
    for k in 1..=config.k_max {
        let count = binomial(candidates.len() as u64, k as u64) as u128;
        if examined.saturating_add(count) > config.budget {
            return Err(Error::BudgetExceeded {
                needed: examined.saturating_add(count),
                budget: config.budget,
            });
        }
        examined += count;
        let combos = combinations(candidates.len(), k);
        let attempt =
            |combo: &Vec<usize>| solve_combo(&candidates, combo, &target, target_coords.len());
        let found = if config.parallel {
            combos.par_iter().find_map_first(attempt)
        } else {
            combos.iter().find_map(attempt)
        };
        if let Some(solution) = found {
            let combo_terms = solution?;
            let cert = StrengthCertificate::new(q.clone(), combo_terms);
            cert.check()?;
            return Ok(BruteForceResult {
                strength: Some(k),
                certificate: Some(cert),
                examined,
            });
        }
    }
    Ok(BruteForceResult {
        strength: None,
        certificate: None,
        examined,
    })
}

fn solve_combo<F: Field>(
    candidates: &[Candidate<F>],
    combo: &[usize],
    target: &[F],
    rows: usize,
) -> Option<Result<Vec<CertTerm<F>>>> {
    let cols: Vec<&Vec<F>> = combo
        .iter()
        .flat_map(|&c| candidates[c].columns.iter())
        .collect();
    let m = Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone());
    let x = m.solve(target).ok()??;
    let mut terms = Vec::new();
    let mut offset = 0;
    for &c in combo {
        let cand = &candidates[c];
        let len = cand.columns.len();
        let s = match cand.s_coords.tensor(&x[offset..offset + len]) {
            Ok(s) => s,
            Err(e) => return Some(Err(e)),
        };
        offset += len;
        if s.is_zero() {
            // a smaller k would have worked; cannot happen at the minimal k
            return None;
        }
        terms.push(CertTerm::new(cand.split.clone(), cand.r.clone(), s));
    }
    Some(Ok(terms))
}

/// Nonzero vectors of length `len` whose first nonzero entry is `1`, in
/// lexicographic order of the element list (which starts with zero).
fn normalized_vectors<F: Field>(elements: &[F], len: usize) -> Vec<Vec<F>> {
    let mut all: Vec<Vec<F>> = vec![Vec::new()];
    for _ in 0..len {
        all = all
            .into_iter()
            .flat_map(|t| {
                elements.iter().map(move |e| {
                    let mut t = t.clone();
                    t.push(e.clone());
                    t
                })
            })
            .collect();
    }
    all.retain(|v| v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_one()));
    all
}

/// Strictly increasing `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    crate::multilinear::increasing_tuples(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_polynomial, Fp};
    use crate::multilinear::SymTensor;

    type F2 = Fp<2>;

    fn sym(text: &str, d: u32) -> Tensor<F2> {
        Tensor::Sym(SymTensor::new(d, parse_polynomial(text, Some(2)).unwrap()).unwrap())
    }

    #[test]
    fn small_binary_forms() {
        let cfg = BruteForceConfig::default();
        let r = brute_force_strength(&sym("x^2*y", 3), &cfg).unwrap();
        assert_eq!(r.strength, Some(1));
        let r = brute_force_strength(&sym("x^3 + x^2*y + y^3", 3), &cfg).unwrap();
        assert_eq!(r.strength, Some(2));
        assert!(r.certificate.unwrap().verify().unwrap());
        let r = brute_force_strength(&sym("x^2*y + x*y^2", 3), &cfg).unwrap();
        assert_eq!(r.strength, Some(1));
    }

    #[test]
    fn budget_and_field_guards() {
        let cfg = BruteForceConfig {
            k_max: 3,
            budget: 2,
            parallel: false,
        };
        assert!(matches!(
            brute_force_strength(&sym("x^3 + x^2*y + y^3", 3), &cfg),
            Err(Error::BudgetExceeded { .. })
        ));
        let q: Tensor<num_rational::BigRational> =
            Tensor::Sym(SymTensor::new(2, parse_polynomial("x1*x2", None).unwrap()).unwrap());
        assert!(matches!(
            brute_force_strength(&q, &BruteForceConfig::default()),
            Err(Error::InfiniteField)
        ));
    }

    #[test]
    fn normalized_vector_count() {
        let els = Fp::<3>::elements().unwrap();
        let v = normalized_vectors(&els, 3);
        assert_eq!(v.len(), 13);
        assert_eq!(v[0], vec![Fp::new(0), Fp::new(0), Fp::new(1)]);
    }
}
