use serde::Serialize;

use crate::error::{Error, Result};
use crate::multilinear::{binomial, Flavor};

/// The explicit size `N` of the certificates produced by one layer of the
/// membership pipeline: chopping terms plus covariant terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub flavor: Flavor,
    pub d: u32,
    pub base_dims: Vec<usize>,
    #[serde(rename = "N")]
    pub n: u64,
    /// The chopping share: `dim U` or `n_1 + ... + n_d`.
    pub chop: u64,
    /// The covariant share.
    pub covariant: u64,
    /// Ord: the slot `m` of minimal `n_m` used in the formula.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slot: Option<usize>,
}

/// `dim U + Σ_{i=1}^{⌊d/2⌋} dim S^{d-i}U` (sym), the same with `∧^{d-i}U`
/// (alt), or `Σ n_j + n_m·Π_{j≠m}(n_j+1) − Π n_j` with `n_m` minimal (ord).
pub fn bound_n(flavor: Flavor, d: u32, base_dims: &[usize]) -> Result<BoundReport> {
    if d < 2 {
        return Err(Error::invalid("the bound is stated for d >= 2"));
    }
    let expected = if flavor == Flavor::Ord { d as usize } else { 1 };
    if base_dims.len() != expected {
        return Err(Error::dims(format!(
            "{flavor} needs {expected} base dimensions, got {}",
            base_dims.len()
        )));
    }
    let (chop, covariant, slot) = match flavor {
        Flavor::Sym | Flavor::Alt => {
            let n = base_dims[0] as u64;
            let cov = (1..=d / 2)
                .map(|i| {
                    let e = (d - i) as u64;
                    match flavor {
                        Flavor::Sym => binomial(n + e - 1, e),
                        _ => binomial(n, e),
                    }
                })
                .sum();
            (n, cov, None)
        }
        Flavor::Ord => {
            let ns: Vec<u64> = base_dims.iter().map(|&n| n as u64).collect();
            let m = (0..ns.len()).min_by_key(|&j| ns[j]).expect("d >= 2");
            let others: u64 = (0..ns.len())
                .filter(|&j| j != m)
                .map(|j| ns[j] + 1)
                .product();
            let all: u64 = ns.iter().product();
            (ns.iter().sum(), ns[m] * others - all, Some(m))
        }
    };
    Ok(BoundReport {
        flavor,
        d,
        base_dims: base_dims.to_vec(),
        n: chop + covariant,
        chop,
        covariant,
        slot,
    })
}
