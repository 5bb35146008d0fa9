use std::fmt::Write as _;
use std::io::Read;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use strength_core::exactalg::{Field, FieldTag, Fp};
use strength_core::families::{border_strength, power_sum, random_dense, triple_product};
use strength_core::format::{
    certificate_from_json, field_of, presentation_from_json, sym_from_text, tensor_from_json,
    to_json, CertificateDoc, PresentationDoc, TensorDoc, FORMATS,
};
use strength_core::machinery::{
    bound_n, find_direction, specialize_mod_p, ClosedSetPresentation, MembershipEngine,
};
use strength_core::multilinear::{BigradedElement, Coordinates, Flavor, Split, Tensor};
use strength_core::strength::{
    brute_force_strength, chop, degree_two_strength, leibniz_reduce, trivial_certificate,
    BruteForceConfig, StrengthCertificate, Witness,
};
use strength_core::{Error, Result, Q};

use crate::args::{Cli, Command, Family, Global, TensorInput};

/// Primes with a compiled field implementation.
pub const PRIMES: [u64; 11] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

/// Calls `$func::<F>(args)` with `F` the field named by `$tag`.
macro_rules! dispatch {
    ($tag:expr, $func:ident ( $($arg:expr),* $(,)? )) => {
        match $tag {
            FieldTag::Rationals => $func::<Q>($($arg),*),
            FieldTag::Prime(2) => $func::<Fp<2>>($($arg),*),
            FieldTag::Prime(3) => $func::<Fp<3>>($($arg),*),
            FieldTag::Prime(5) => $func::<Fp<5>>($($arg),*),
            FieldTag::Prime(7) => $func::<Fp<7>>($($arg),*),
            FieldTag::Prime(11) => $func::<Fp<11>>($($arg),*),
            FieldTag::Prime(13) => $func::<Fp<13>>($($arg),*),
            FieldTag::Prime(17) => $func::<Fp<17>>($($arg),*),
            FieldTag::Prime(19) => $func::<Fp<19>>($($arg),*),
            FieldTag::Prime(23) => $func::<Fp<23>>($($arg),*),
            FieldTag::Prime(29) => $func::<Fp<29>>($($arg),*),
            FieldTag::Prime(31) => $func::<Fp<31>>($($arg),*),
            FieldTag::Prime(p) => Err(Error::InvalidInput(format!(
                "F_{p} is not available; supported primes are {PRIMES:?}"
            ))),
        }
    };
}

/// What a command produced.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    /// The document written by `--out`.
    pub document: Option<String>,
    pub code: u8,
}

impl Outcome {
    fn ok(text: String, json: Value, document: Option<String>) -> Self {
        Outcome {
            text,
            json,
            document,
            code: 0,
        }
    }
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::VerificationFailed(_) | Error::SingularSystem { .. } | Error::MalformedTerm(_) => 1,
        Error::UnsupportedCharacteristic { .. } => 3,
        Error::BudgetExceeded { .. } | Error::BoxExhausted { .. } => 4,
        Error::YBranch => 5,
        _ => 2,
    }
}

fn read_input(path: Option<&str>) -> Result<String> {
    match path {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::InvalidInput(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Error::InvalidInput(format!("cannot read {p}: {e}"))),
    }
}

/// The explicit `--field`, else the document's, else Q.
fn field_for(global: &Global, text: Option<&str>) -> Result<FieldTag> {
    match (global.field, text) {
        (Some(f), _) => Ok(f),
        (None, Some(t)) => match field_of(t) {
            Ok(f) => Ok(f),
            Err(Error::InvalidInput(_)) => Ok(FieldTag::Rationals),
            Err(e) => Err(e),
        },
        (None, None) => Ok(FieldTag::Rationals),
    }
}

/// Tensor source: JSON text, or polynomial text with degree and dimension.
enum Source {
    Json(String),
    Poly {
        text: String,
        d: u32,
        dim: Option<usize>,
    },
}

impl Source {
    fn read(input: &TensorInput) -> Result<Self> {
        match (&input.poly, input.d) {
            (Some(text), Some(d)) => Ok(Source::Poly {
                text: text.clone(),
                d,
                dim: input.dim,
            }),
            _ => Ok(Source::Json(read_input(input.input.as_deref())?)),
        }
    }

    fn field(&self, global: &Global) -> Result<FieldTag> {
        match self {
            Source::Json(t) => field_for(global, Some(t)),
            Source::Poly { .. } => field_for(global, None),
        }
    }

    fn tensor<F: Field>(&self) -> Result<Tensor<F>> {
        match self {
            Source::Json(t) => tensor_from_json(t),
            Source::Poly { text, d, dim } => sym_from_text(text, *d, *dim),
        }
    }
}

fn list_terms<F: Field>(c: &StrengthCertificate<F>) -> String {
    let mut s = String::new();
    for (i, t) in c.terms.iter().enumerate() {
        let split = match &t.split {
            Split::Degree(e) => format!("degree {e}"),
            Split::Slots(j) => {
                let one_based: Vec<String> = j.iter().map(|k| (k + 1).to_string()).collect();
                format!("slots {}", one_based.join(","))
            }
        };
        let _ = writeln!(s, "  {:>3}. ({}) * ({})  [{split}]", i + 1, t.r, t.s);
    }
    s
}

fn certificate_json<F: Field>(c: &StrengthCertificate<F>) -> Value {
    serde_json::to_value(CertificateDoc::from_certificate(c)).expect("serializable")
}

fn parse_list<F: Field>(s: &str) -> Result<Vec<F>> {
    s.split(',')
        .map(|x| {
            F::parse_scalar(x.trim())
                .ok_or_else(|| Error::InvalidInput(format!("`{x}` is not in {}", F::tag())))
        })
        .collect()
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Verify { input } => {
            let text = read_input(input.as_deref())?;
            dispatch!(field_for(g, Some(&text))?, verify(&text))
        }
        Command::Trivial(input) => {
            let src = Source::read(input)?;
            dispatch!(src.field(g)?, trivial(&src))
        }
        Command::Quad(input) => {
            let src = Source::read(input)?;
            dispatch!(src.field(g)?, quad(&src))
        }
        Command::Brute {
            tensor,
            k_max,
            serial,
        } => {
            let src = Source::read(tensor)?;
            let config = BruteForceConfig {
                k_max: *k_max,
                budget: g.budget,
                parallel: !serial,
            };
            dispatch!(src.field(g)?, brute(&src, &config))
        }
        Command::Leibniz { input, functionals } => {
            let text = read_input(input.as_deref())?;
            dispatch!(field_for(g, Some(&text))?, leibniz(&text, functionals))
        }
        Command::Chop { tensor, dim_u } => {
            let src = Source::read(tensor)?;
            dispatch!(src.field(g)?, chop_cmd(&src, dim_u))
        }
        Command::Bound { flavor, d, dim_u } => bound(*flavor, *d, dim_u),
        Command::Derive { input } => {
            let text = read_input(input.as_deref())?;
            dispatch!(field_for(g, None)?, derive(&text, g.search_box))
        }
        Command::Psi {
            input,
            dim_v,
            samples,
        } => {
            let text = read_input(input.as_deref())?;
            dispatch!(
                field_for(g, None)?,
                psi(&text, dim_v.as_deref(), *samples, g)
            )
        }
        Command::Pipeline {
            input,
            dim_v,
            samples,
            tensor,
        } => {
            let text = read_input(input.as_deref())?;
            let point = tensor.as_deref().map(|p| read_input(Some(p))).transpose()?;
            dispatch!(
                field_for(g, None)?,
                pipeline(&text, dim_v.as_deref(), *samples, point.as_deref(), g)
            )
        }
        Command::Specialize { input, prime } => {
            let text = read_input(input.as_deref())?;
            let p = presentation_from_json::<Q>(&text)?;
            let tag = if strength_core::exactalg::is_prime(*prime) {
                FieldTag::Prime(*prime)
            } else {
                return Err(Error::InvalidInput(format!("{prime} is not prime")));
            };
            dispatch!(tag, specialize(&p, *prime))
        }
        Command::Generate {
            family,
            flavor,
            d,
            n,
            k,
            rank,
            dims,
        } => {
            let spec = GenerateSpec {
                family: *family,
                flavor: *flavor,
                d: *d,
                n: *n,
                k: *k,
                rank: *rank,
                dims: dims.clone(),
                seed: g.seed,
            };
            dispatch!(field_for(g, None)?, generate(&spec))
        }
        Command::Formats {
            coords,
            flavor,
            d,
            dims,
        } => formats(*coords, *flavor, *d, dims),
    }
}

fn verify<F: Field>(text: &str) -> Result<Outcome> {
    let cert = certificate_from_json::<F>(text)?;
    let valid = cert.verify()?;
    let json = json!({ "command": "verify", "valid": valid, "terms": cert.len() });
    let text = if valid {
        format!("valid: {} terms sum to the target\n", cert.len())
    } else {
        "invalid: the terms do not sum to the target\n".to_string()
    };
    Ok(Outcome {
        text,
        json,
        document: None,
        code: if valid { 0 } else { 1 },
    })
}

fn trivial<F: Field>(src: &Source) -> Result<Outcome> {
    let t = src.tensor::<F>()?;
    let cert = trivial_certificate(&t)?;
    cert.check()?;
    let text = format!(
        "trivial certificate with {} terms\n{}",
        cert.len(),
        list_terms(&cert)
    );
    let json = json!({ "command": "trivial", "terms": cert.len(), "certificate": certificate_json(&cert) });
    Ok(Outcome::ok(
        text,
        json,
        Some(to_json(&CertificateDoc::from_certificate(&cert))),
    ))
}

fn quad<F: Field>(src: &Source) -> Result<Outcome> {
    let t = src.tensor::<F>()?;
    let report = degree_two_strength(&t)?;
    if !report.witness.verify()? {
        return Err(Error::VerificationFailed("degree-two witness".into()));
    }
    let mut text = format!("rank {}, strength {}\n", report.rank, report.strength);
    let (witness, document) = match &report.witness {
        Witness::Rational(c) => {
            text.push_str(&list_terms(c));
            (
                json!({ "kind": "rational", "certificate": certificate_json(c) }),
                Some(to_json(&CertificateDoc::from_certificate(c))),
            )
        }
        Witness::QuadraticExtension(c) => {
            text.push_str(&list_terms(&StrengthCertificate::new(
                c.target.clone(),
                c.rational.clone(),
            )));
            let ext: Vec<Value> = c
                .extension
                .iter()
                .map(|e| {
                    let _ = writeln!(
                        text,
                        "  ({} + √{} ({})) * ({} + √{} ({}))",
                        e.r0, e.delta, e.r1, e.s0, e.delta, e.s1
                    );
                    json!({
                        "delta": e.delta.to_string(),
                        "r0": e.r0.to_string(), "r1": e.r1.to_string(),
                        "s0": e.s0.to_string(), "s1": e.s1.to_string(),
                    })
                })
                .collect();
            let rational = StrengthCertificate::new(c.target.clone(), c.rational.clone());
            (
                json!({
                    "kind": "quadratic_extension",
                    "rational": certificate_json(&rational)["terms"].clone(),
                    "extension": ext,
                }),
                None,
            )
        }
    };
    let json = json!({
        "command": "quad",
        "flavor": report.flavor,
        "rank": report.rank,
        "strength": report.strength,
        "witness": witness,
    });
    Ok(Outcome::ok(text, json, document))
}

fn brute<F: Field>(src: &Source, config: &BruteForceConfig) -> Result<Outcome> {
    let t = src.tensor::<F>()?;
    let result = brute_force_strength(&t, config)?;
    let (text, cert) = match (&result.strength, &result.certificate) {
        (Some(k), Some(c)) => (format!("strength {k}\n{}", list_terms(c)), Some(c)),
        _ => (format!("strength exceeds {}\n", config.k_max), None),
    };
    let json = json!({
        "command": "brute",
        "strength": result.strength,
        "k_max": config.k_max,
        "examined": result.examined.to_string(),
        "certificate": cert.map(certificate_json),
    });
    let document = cert.map(|c| to_json(&CertificateDoc::from_certificate(c)));
    Ok(Outcome::ok(text, json, document))
}

fn leibniz<F: Field>(text: &str, functionals: &[String]) -> Result<Outcome> {
    let cert = certificate_from_json::<F>(text)?;
    let probe = leibniz_reduce(&cert, &[])?;
    let m = probe.quotient.rows();
    let xs: Vec<Vec<F>> = if functionals.is_empty() {
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| if i == j { F::one() } else { F::zero() })
                    .collect()
            })
            .collect()
    } else {
        functionals
            .iter()
            .map(|s| parse_list(s))
            .collect::<Result<_>>()?
    };
    if let Some(x) = xs.iter().find(|x| x.len() != m) {
        return Err(Error::DimensionMismatch(format!(
            "functional of length {} on V/W of dimension {m}",
            x.len()
        )));
    }
    let red = leibniz_reduce(&cert, &xs)?;
    let k = cert.len();
    let mut out = format!(
        "k = {k}, linear terms = {}, dim W = {}, bound 2(k - l) = {}\nreduced: {}\n",
        red.linear_terms,
        red.w_basis.len(),
        red.bound(k),
        red.reduced
    );
    let mut derivs = Vec::new();
    for (x, c) in xs.iter().zip(&red.derivatives) {
        let valid = c.verify()?;
        if !valid || c.len() > red.bound(k) {
            return Err(Error::VerificationFailed(format!(
                "derivative certificate with {} terms (bound {})",
                c.len(),
                red.bound(k)
            )));
        }
        let xs: Vec<String> = x.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "x = ({}): {} terms", xs.join(", "), c.len());
        out.push_str(&list_terms(c));
        derivs.push(json!({ "x": xs, "terms": c.len(), "certificate": certificate_json(c) }));
    }
    let json = json!({
        "command": "leibniz",
        "k": k,
        "linear_terms": red.linear_terms,
        "w_basis": red.w_basis.iter().map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "reduced": red.reduced.to_string(),
        "bound": red.bound(k),
        "derivatives": derivs,
    });
    Ok(Outcome::ok(out, json, None))
}

fn chop_cmd<F: Field>(src: &Source, dim_u: &[usize]) -> Result<Outcome> {
    let t = src.tensor::<F>()?;
    let b = BigradedElement::split(&t, dim_u)?;
    let cert = chop(&b)?;
    cert.check()?;
    let limit: usize = dim_u.iter().sum();
    let text = format!(
        "lower part certified with {} terms (dim U bound {limit})\n{}",
        cert.len(),
        list_terms(&cert)
    );
    let json = json!({
        "command": "chop",
        "terms": cert.len(),
        "bound": limit,
        "top": TensorDoc::from_tensor(&b.top()),
        "certificate": certificate_json(&cert),
    });
    Ok(Outcome::ok(
        text,
        json,
        Some(to_json(&CertificateDoc::from_certificate(&cert))),
    ))
}

fn bound(flavor: Flavor, d: u32, dim_u: &[usize]) -> Result<Outcome> {
    let report = bound_n(flavor, d, dim_u)?;
    let text = format!("{}\n", report.n);
    let mut json = serde_json::to_value(&report).expect("serializable");
    json["command"] = json!("bound");
    Ok(Outcome::ok(text, json, None))
}

fn derive<F: Field>(text: &str, search_box: i64) -> Result<Outcome> {
    let p = presentation_from_json::<F>(text)?;
    let delta = p.delta_degree()?;
    let mut out = format!(
        "{} generators; least degree {} (graded {}){}\n",
        p.generators().len(),
        delta.degree,
        delta.graded,
        if delta.empty {
            "; a constant generator: X(U) is empty"
        } else {
            ""
        }
    );
    let mut rows = Vec::new();
    let mut found = false;
    for (k, f) in p.generators().iter().enumerate() {
        if f.total_degree().unwrap_or(0) == 0 {
            continue;
        }
        match find_direction(f, p.flavor(), p.degree(), p.base_dims(), search_box) {
            Ok(dd) => {
                found = true;
                let h = dd.h.to_string_with(Coordinates::label);
                let _ = writeln!(out, "generator {}: u = {:?}, h = {h}", k + 1, dd.witness);
                rows.push(json!({ "generator": k + 1, "witness": dd.witness, "h": h }));
            }
            Err(e @ Error::BoxExhausted { .. }) => {
                let _ = writeln!(out, "generator {}: {e}", k + 1);
                rows.push(json!({ "generator": k + 1, "error": e.to_string() }));
            }
            Err(e) => return Err(e),
        }
    }
    if !found && !delta.empty {
        return Err(Error::BoxExhausted { bound: search_box });
    }
    let json = json!({
        "command": "derive",
        "degree": delta.degree,
        "graded": delta.graded,
        "empty": delta.empty,
        "generators": rows,
    });
    Ok(Outcome::ok(out, json, None))
}

fn default_dim_v(p: &ClosedSetPresentation<impl Field>) -> Vec<usize> {
    vec![1; p.base_dims().len()]
}

fn psi<F: Field>(
    text: &str,
    dim_v: Option<&[usize]>,
    samples: usize,
    g: &Global,
) -> Result<Outcome> {
    let p = presentation_from_json::<F>(text)?;
    let engine = MembershipEngine::new(&p, g.search_box)?;
    let e = engine.expansion();
    let dim_v = dim_v.map_or_else(|| default_dim_v(&p), <[usize]>::to_vec);
    e.check_identity(&dim_v, samples, g.seed)?;
    let cov = engine.covariant();
    let h = e.h().to_string_with(Coordinates::label);
    let psi = e.psi().to_string_with(|v| e.variable_name(v));
    let out = format!(
        "generator {}: h = {h}\nPsi = {psi}\nidentity checked at {samples} points with dim V = {dim_v:?}\n\
         {} covariant terms in {} groups (bound {}), weighted degrees {}, divisibility {}\n",
        engine.generator() + 1,
        cov.terms().len(),
        cov.group_count(),
        engine.bound().covariant,
        if cov.weighted_degrees_ok() { "ok" } else { "FAILED" },
        if cov.divisibility_ok() { "ok" } else { "FAILED" },
    );
    let json = json!({
        "command": "psi",
        "generator": engine.generator() + 1,
        "h": h,
        "psi": psi,
        "factors": e.factors().iter().map(|f| f.describe()).collect::<Vec<_>>(),
        "identity_samples": samples,
        "dimV": dim_v,
        "covariant_terms": cov.terms().len(),
        "groups": cov.group_count(),
        "weighted_degrees_ok": cov.weighted_degrees_ok(),
        "divisibility_ok": cov.divisibility_ok(),
        "bound": engine.bound(),
    });
    Ok(Outcome::ok(out, json, None))
}

fn pipeline<F: Field>(
    text: &str,
    dim_v: Option<&[usize]>,
    samples: usize,
    point: Option<&str>,
    g: &Global,
) -> Result<Outcome> {
    let p = presentation_from_json::<F>(text)?;
    let engine = MembershipEngine::new(&p, g.search_box)?;
    let n = engine.bound().n as usize;
    if let Some(point) = point {
        let t = tensor_from_json::<F>(point)?;
        let mc = engine.certify(&t)?;
        let out = format!(
            "certificate with {} terms ({} chop + {} covariant), bound N = {n}\n{}",
            mc.certificate.len(),
            mc.chop_terms,
            mc.covariant_terms,
            list_terms(&mc.certificate)
        );
        let json = json!({
            "command": "pipeline",
            "terms": mc.certificate.len(),
            "chop_terms": mc.chop_terms,
            "covariant_terms": mc.covariant_terms,
            "N": n,
            "certificate": certificate_json(&mc.certificate),
        });
        return Ok(Outcome::ok(
            out,
            json,
            Some(to_json(&CertificateDoc::from_certificate(&mc.certificate))),
        ));
    }
    let dim_v = dim_v.map_or_else(|| default_dim_v(&p), <[usize]>::to_vec);
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let (mut certified, mut y_branch, mut max_terms) = (0usize, 0usize, 0usize);
    for _ in 0..samples {
        let t = p.sample(&dim_v, &mut rng)?;
        match engine.certify(&t) {
            Ok(mc) => {
                if engine.reconstruct(&t)? != engine.split(&t)?.top() {
                    return Err(Error::VerificationFailed(
                        "reconstructed top differs from the sample".into(),
                    ));
                }
                certified += 1;
                max_terms = max_terms.max(mc.certificate.len());
            }
            Err(Error::YBranch) => y_branch += 1,
            Err(e) => return Err(e),
        }
    }
    let out = format!(
        "{certified} of {samples} samples certified, {y_branch} in the Y-branch; \
         largest certificate {max_terms} terms, bound N = {n}\n"
    );
    let json = json!({
        "command": "pipeline",
        "samples": samples,
        "dimV": dim_v,
        "certified": certified,
        "y_branch": y_branch,
        "max_terms": max_terms,
        "N": n,
        "seed": g.seed,
    });
    Ok(Outcome::ok(out, json, None))
}

fn specialize<G: Field>(p: &ClosedSetPresentation<Q>, prime: u64) -> Result<Outcome> {
    let s = specialize_mod_p::<G>(p, prime)?;
    let one_based = |v: &[usize]| v.iter().map(|k| k + 1).collect::<Vec<_>>();
    let vanished = one_based(&s.vanished);
    let repaired: Vec<(usize, u32)> = s.repaired.iter().map(|&(k, r)| (k + 1, r)).collect();
    let mut out = String::new();
    if !vanished.is_empty() {
        let _ = writeln!(out, "generators vanishing mod {prime}: {vanished:?}");
    }
    for (k, r) in &repaired {
        let _ = writeln!(out, "generator {k}: replaced by its p-th root {r} time(s)");
    }
    let (doc, json_doc) = match &s.presentation {
        None => {
            let _ = writeln!(out, "the presentation vanishes mod {prime}");
            (None, Value::Null)
        }
        Some(q) => {
            let doc = PresentationDoc::from_presentation(q)?;
            out.push_str(&to_json(&doc));
            out.push('\n');
            (
                Some(to_json(&doc)),
                serde_json::to_value(&doc).expect("serializable"),
            )
        }
    };
    let json = json!({
        "command": "specialize",
        "prime": prime,
        "vanishes": s.vanishes(),
        "vanished": vanished,
        "repaired": repaired,
        "presentation": json_doc,
    });
    Ok(Outcome::ok(out, json, doc))
}

struct GenerateSpec {
    family: Family,
    flavor: Flavor,
    d: u32,
    n: usize,
    k: usize,
    rank: usize,
    dims: Option<Vec<usize>>,
    seed: u64,
}

impl GenerateSpec {
    fn dims(&self) -> Vec<usize> {
        self.dims.clone().unwrap_or_else(|| match self.flavor {
            Flavor::Ord => vec![self.n; self.d as usize],
            _ => vec![self.n],
        })
    }
}

fn generate<F: Field>(spec: &GenerateSpec) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let doc = match spec.family {
        Family::PowerSum => to_json(&TensorDoc::from_tensor(&power_sum::<F>(spec.d, spec.n)?)),
        Family::TripleProduct => to_json(&TensorDoc::from_tensor(&triple_product::<F>(spec.n)?)),
        Family::RandomDense => to_json(&TensorDoc::from_tensor(&random_dense::<F>(
            spec.flavor,
            spec.d,
            &spec.dims(),
            &mut rng,
        )?)),
        Family::BorderStrength => {
            let cert = border_strength::<F>(spec.flavor, spec.d, &spec.dims(), spec.k, &mut rng)?;
            cert.check()?;
            to_json(&CertificateDoc::from_certificate(&cert))
        }
        Family::RankLocus => {
            let p = ClosedSetPresentation::<F>::rank_locus(spec.flavor, &spec.dims(), spec.rank)?;
            to_json(&PresentationDoc::from_presentation(&p)?)
        }
    };
    let json: Value = serde_json::from_str(&doc).expect("generated JSON parses");
    Ok(Outcome::ok(format!("{doc}\n"), json, Some(doc)))
}

fn formats(coords: bool, flavor: Flavor, d: u32, dims: &[usize]) -> Result<Outcome> {
    if !coords {
        return Ok(Outcome::ok(
            FORMATS.to_string(),
            json!({ "command": "formats", "text": FORMATS }),
            None,
        ));
    }
    let c = Coordinates::new(flavor, d, dims)?;
    let mut out = format!("base coordinates of {flavor} degree {d} on {dims:?}\n");
    let mut rows = Vec::new();
    for k in 0..c.len() {
        let _ = writeln!(out, "  {:<6} {}", Coordinates::label(k), c.describe(k));
        rows.push(json!({ "name": Coordinates::label(k), "basis": c.describe(k) }));
    }
    Ok(Outcome::ok(
        out,
        json!({ "command": "formats", "coordinates": rows }),
        None,
    ))
}
