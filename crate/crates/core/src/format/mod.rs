//! JSON documents for tensors, certificates and presentations.
//!
//! Coefficients are strings (`"3"`, `"-1/2"`) so rationals stay exact.
//! Alternating and ordinary index tuples are 1-based on the wire, as are ord
//! slot sets in certificate splits.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{parse_polynomial, Field, FieldTag};
use crate::machinery::{ClosedSetPresentation, Sampler};
use crate::multilinear::{Coordinates, Flavor, Split, SymTensor, Tensor};
use crate::strength::{CertTerm, StrengthCertificate};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub idx: Vec<usize>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorDoc {
    pub flavor: Flavor,
    pub d: u32,
    pub dims: Vec<usize>,
    pub field: String,
    pub terms: Vec<TermDoc>,
}

/// `e` for sym/alt, the 1-based slot set `J` for ord.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SplitDoc {
    Degree(u32),
    Slots(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertTermDoc {
    pub split: SplitDoc,
    pub r: TensorDoc,
    pub s: TensorDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub target: TensorDoc,
    pub terms: Vec<CertTermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerDoc {
    pub family: String,
    #[serde(default)]
    pub params: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PresentationDoc {
    pub flavor: Flavor,
    pub d: u32,
    pub base_dims: Vec<usize>,
    pub generators: Vec<String>,
    pub sampler: SamplerDoc,
    pub integral: bool,
}

/// Parses JSON, reporting syntax and shape errors with line and column.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}

/// The `field` entry of any document, without parsing the rest.
pub fn field_of(text: &str) -> Result<FieldTag> {
    let value: serde_json::Value = from_json(text)?;
    let field = value
        .get("field")
        .or_else(|| value.get("target").and_then(|t| t.get("field")))
        .and_then(|f| f.as_str())
        .ok_or_else(|| Error::invalid("document has no `field` entry"))?;
    field.parse().map_err(Error::InvalidInput)
}

fn check_field<F: Field>(field: &str) -> Result<()> {
    let tag: FieldTag = field.parse().map_err(Error::InvalidInput)?;
    if tag != F::tag() {
        return Err(Error::FieldMismatch {
            expected: F::tag().to_string(),
            found: tag.to_string(),
        });
    }
    Ok(())
}

fn scalar<F: Field>(s: &str) -> Result<F> {
    F::parse_scalar(s)
        .ok_or_else(|| Error::invalid(format!("`{s}` is not an element of {}", F::tag())))
}

impl TensorDoc {
    pub fn from_tensor<F: Field>(t: &Tensor<F>) -> Self {
        let one_based = t.flavor() != Flavor::Sym;
        let terms = t
            .entries()
            .into_iter()
            .map(|(idx, c)| TermDoc {
                idx: if one_based {
                    idx.iter().map(|i| i + 1).collect()
                } else {
                    idx
                },
                coeff: c.to_string(),
            })
            .collect();
        TensorDoc {
            flavor: t.flavor(),
            d: t.degree(),
            dims: t.dims(),
            field: F::tag().to_string(),
            terms,
        }
    }

    pub fn to_tensor<F: Field>(&self) -> Result<Tensor<F>> {
        check_field::<F>(&self.field)?;
        let one_based = self.flavor != Flavor::Sym;
        let entries = self
            .terms
            .iter()
            .map(|t| {
                let idx = if one_based {
                    t.idx
                        .iter()
                        .map(|&i| {
                            i.checked_sub(1)
                                .ok_or_else(|| Error::invalid("indices are 1-based"))
                        })
                        .collect::<Result<Vec<_>>>()?
                } else {
                    t.idx.clone()
                };
                Ok((idx, scalar::<F>(&t.coeff)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Tensor::from_entries(self.flavor, self.d, &self.dims, entries)
    }
}

impl CertificateDoc {
    pub fn from_certificate<F: Field>(c: &StrengthCertificate<F>) -> Self {
        CertificateDoc {
            target: TensorDoc::from_tensor(&c.target),
            terms: c
                .terms
                .iter()
                .map(|t| CertTermDoc {
                    split: match &t.split {
                        Split::Degree(e) => SplitDoc::Degree(*e),
                        Split::Slots(j) => SplitDoc::Slots(j.iter().map(|s| s + 1).collect()),
                    },
                    r: TensorDoc::from_tensor(&t.r),
                    s: TensorDoc::from_tensor(&t.s),
                })
                .collect(),
        }
    }

    pub fn to_certificate<F: Field>(&self) -> Result<StrengthCertificate<F>> {
        let target = self.target.to_tensor::<F>()?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let split = match (&t.split, target.flavor()) {
                    (SplitDoc::Degree(e), Flavor::Sym | Flavor::Alt) => Split::Degree(*e),
                    (SplitDoc::Slots(j), Flavor::Ord) => Split::Slots(
                        j.iter()
                            .map(|&s| {
                                s.checked_sub(1)
                                    .ok_or_else(|| Error::invalid("slots are 1-based"))
                            })
                            .collect::<Result<_>>()?,
                    ),
                    _ => {
                        return Err(Error::MalformedTerm(
                            "split kind does not match the flavor".into(),
                        ))
                    }
                };
                Ok(CertTerm::new(split, t.r.to_tensor()?, t.s.to_tensor()?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StrengthCertificate::new(target, terms))
    }
}

impl PresentationDoc {
    /// Closure samplers have no document form.
    pub fn from_presentation<F: Field>(p: &ClosedSetPresentation<F>) -> Result<Self> {
        let params = match p.sampler() {
            Sampler::RankLocus { rank } => serde_json::json!({ "rank": rank }),
            Sampler::BorderStrength { k } => serde_json::json!({ "k": k }),
            Sampler::Points(points) => {
                let docs: Vec<TensorDoc> = points.iter().map(TensorDoc::from_tensor).collect();
                serde_json::json!({ "points": docs })
            }
            Sampler::Custom(_) => {
                return Err(Error::invalid(
                    "a closure sampler cannot be written as JSON",
                ))
            }
        };
        Ok(PresentationDoc {
            flavor: p.flavor(),
            d: p.degree(),
            base_dims: p.base_dims().to_vec(),
            generators: (0..p.generators().len())
                .map(|k| p.generator_string(k))
                .collect(),
            sampler: SamplerDoc {
                family: p.sampler().family().into(),
                params,
            },
            integral: p.integral(),
        })
    }

    pub fn to_presentation<F: Field>(&self) -> Result<ClosedSetPresentation<F>> {
        let coords = Coordinates::new(self.flavor, self.d, &self.base_dims)?;
        let generators = self
            .generators
            .iter()
            .map(|g| parse_polynomial::<F>(g, Some(coords.len())))
            .collect::<Result<Vec<_>>>()?;
        let param = |key: &str| {
            self.sampler
                .params
                .get(key)
                .and_then(serde_json::Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| {
                    Error::invalid(format!(
                        "sampler `{}` needs an integer `{key}`",
                        self.sampler.family
                    ))
                })
        };
        let sampler = match self.sampler.family.as_str() {
            "rank_locus" => Sampler::RankLocus {
                rank: param("rank")?,
            },
            "border_strength" => Sampler::BorderStrength { k: param("k")? },
            "custom" => {
                let points = match self.sampler.params.get("points") {
                    Some(v) => serde_json::from_value::<Vec<TensorDoc>>(v.clone())
                        .map_err(|e| Error::invalid(format!("sampler points: {e}")))?,
                    None => Vec::new(),
                };
                Sampler::Points(
                    points
                        .iter()
                        .map(TensorDoc::to_tensor)
                        .collect::<Result<_>>()?,
                )
            }
            other => return Err(Error::invalid(format!("unknown sampler family `{other}`"))),
        };
        ClosedSetPresentation::new(
            self.flavor,
            self.d,
            &self.base_dims,
            generators,
            sampler,
            self.integral,
        )
    }
}

/// A symmetric tensor from polynomial text such as `x1^3 + x2^3`. The
/// dimension defaults to the largest variable index.
pub fn sym_from_text<F: Field>(text: &str, d: u32, dim: Option<usize>) -> Result<Tensor<F>> {
    let poly = parse_polynomial::<F>(text, dim)?;
    Ok(Tensor::Sym(SymTensor::new(d, poly)?))
}

/// Any document kind, for commands that accept either.
pub fn tensor_from_json<F: Field>(text: &str) -> Result<Tensor<F>> {
    from_json::<TensorDoc>(text)?.to_tensor()
}

pub fn certificate_from_json<F: Field>(text: &str) -> Result<StrengthCertificate<F>> {
    from_json::<CertificateDoc>(text)?.to_certificate()
}

pub fn presentation_from_json<F: Field>(text: &str) -> Result<ClosedSetPresentation<F>> {
    from_json::<PresentationDoc>(text)?.to_presentation()
}

/// Reference text for all formats.
pub const FORMATS: &str = r#"FORMATS

Polynomials (text)
  poly   := term (('+' | '-') term)*
  term   := ['+' | '-'] factor ('*' factor)*
  factor := int ['/' int] | var ['^' int]
  var    := x<i> | c_<i> | x | y | z | w        (1-based; x,y,z,w = x1..x4)
  Example: 1/2*x1^2*x2 - 3*x3^3
  No parentheses: expand products by hand.

Fields
  "Q" for the rationals, or a prime such as "2", "3", "5".

Tensor (JSON)
  {"flavor": "sym" | "alt" | "ord", "d": 3, "dims": [n] or [n1, ..., nd],
   "field": "Q", "terms": [{"idx": [...], "coeff": "a/b"}]}
  sym: idx is an exponent vector of length n summing to d.
  alt: idx is a strictly increasing 1-based tuple of length d.
  ord: idx holds one 1-based index per slot.

Certificate (JSON)
  {"target": <tensor>, "terms": [{"split": e | [J...], "r": <tensor>, "s": <tensor>}]}
  sym/alt: split is the degree e of r, 1 <= e <= d-1.
  ord: split is the 1-based slot set J carrying r; s fills the other slots.
  The certificate claims target = sum of r*s (sym), r^s (alt) or r (x) s (ord).

Presentation (JSON)
  {"flavor": ..., "d": 2, "baseDims": [3],
   "generators": ["c_1*c_4 - 1/4*c_2^2", ...],
   "sampler": {"family": "rank_locus" | "border_strength" | "custom",
               "params": {"rank": 2} | {"k": 2} | {"points": [<tensor>, ...]}},
   "integral": true}
  Generators are polynomials in the base coordinates c_1, c_2, ... of
  S^d U, /\^d U or U_1 (x) ... (x) U_d, numbered in canonical basis order
  (`strength formats --coords` prints the table for given dimensions).
  U occupies the low indices of U + V in every slot.
"#;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Fp;
    use crate::multilinear::{AltTensor, OrdTensor};
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn sym_text_and_document() {
        let t = sym_from_text::<Q>("x1^3 + x2^3", 3, None).unwrap();
        assert_eq!(t.num_terms(), 2);
        let doc = TensorDoc::from_tensor(&t);
        assert_eq!(doc.terms[0].idx, vec![3, 0]);
        assert_eq!(doc.to_tensor::<Q>().unwrap(), t);
        assert!(matches!(
            sym_from_text::<Q>("x1^", 3, None),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn alt_and_ord_indices_are_one_based() {
        let a = Tensor::Alt(AltTensor::<Q>::basis(3, &[0, 2]).unwrap());
        let json = to_json(&TensorDoc::from_tensor(&a));
        assert!(json.contains("\"alt\""));
        let doc: TensorDoc = from_json(&json).unwrap();
        assert_eq!(doc.terms[0].idx, vec![1, 3]);
        assert_eq!(doc.to_tensor::<Q>().unwrap(), a);
        let o = Tensor::Ord(OrdTensor::<Fp<3>>::basis(vec![2, 2], &[1, 0]).unwrap());
        let doc = TensorDoc::from_tensor(&o);
        assert_eq!(
            (doc.field.as_str(), doc.terms[0].idx.clone()),
            ("3", vec![2, 1])
        );
        assert!(matches!(
            doc.to_tensor::<Q>(),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = from_json::<TensorDoc>("{\n  \"flavor\": \"sym\",\n  \"d\": }").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn presentation_round_trip() {
        let p = ClosedSetPresentation::<Q>::rank_locus(Flavor::Sym, &[3], 2).unwrap();
        let doc = PresentationDoc::from_presentation(&p).unwrap();
        let json = to_json(&doc);
        assert!(json.contains("baseDims") && json.contains("rank_locus"));
        let back = presentation_from_json::<Q>(&json).unwrap();
        assert_eq!(back.generators(), p.generators());
        assert_eq!(field_of("{\"field\": \"5\"}").unwrap(), FieldTag::Prime(5));
    }
}
