mod common;

use common::{q, random_matrix, rng};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;
use strength_core::exactalg::{parse_polynomial, Field, Fp};
use strength_core::families::{
    border_strength, power_sum, random_dense, random_vector, triple_product,
};
use strength_core::multilinear::{
    product_tuples, AltTensor, BigradedElement, Coordinates, Flavor, OrdTensor, Split, SymTensor,
    Tensor,
};
use strength_core::strength::{
    brute_force_strength, chop, degree_two_strength, leibniz_reduce, trivial_certificate,
    BruteForceConfig, CertTerm, StrengthCertificate, Witness,
};
use strength_core::{Error, Q};

type F2 = Fp<2>;
type F3 = Fp<3>;

fn sym<F: Field>(d: u32, n: usize, s: &str) -> Tensor<F> {
    Tensor::Sym(SymTensor::new(d, parse_polynomial(s, Some(n)).unwrap()).unwrap())
}

fn term<F: Field>(e: u32, n: usize, r: &str, s: &str, d: u32) -> CertTerm<F> {
    CertTerm::new(Split::Degree(e), sym(e, n, r), sym(d - e, n, s))
}

fn brute<F: Field>(t: &Tensor<F>) -> Option<usize> {
    let config = BruteForceConfig {
        k_max: 4,
        budget: 50_000_000,
        parallel: true,
    };
    let result = brute_force_strength(t, &config).unwrap();
    if let Some(cert) = &result.certificate {
        assert!(cert.verify().unwrap());
        assert_eq!(Some(cert.len()), result.strength);
    }
    result.strength
}

#[test]
fn triple_product_certificate() {
    let target = triple_product::<Q>(2).unwrap();
    assert_eq!(target, sym(3, 6, "x1*x2*x3 + x4*x5*x6"));
    let cert = StrengthCertificate::new(
        target.clone(),
        vec![term(1, 6, "x1", "x2*x3", 3), term(1, 6, "x4", "x5*x6", 3)],
    );
    assert!(cert.verify().unwrap());
    assert!(
        StrengthCertificate::<Q>::empty(Tensor::zero(Flavor::Sym, 3, &[6]).unwrap())
            .verify()
            .unwrap()
    );
    let perturbed = StrengthCertificate::new(
        sym::<Q>(3, 6, "x1*x2*x3 + 2*x4*x5*x6"),
        vec![term(1, 6, "x1", "x2*x3", 3), term(1, 6, "x4", "x5*x6", 3)],
    );
    assert!(!perturbed.verify().unwrap());
}

#[test]
fn malformed_terms_are_errors() {
    let bad = StrengthCertificate::new(
        sym::<Q>(3, 2, "x1^3"),
        vec![CertTerm::new(
            Split::Degree(3),
            sym(3, 2, "x1^3"),
            sym(0, 2, "1"),
        )],
    );
    assert!(matches!(bad.verify(), Err(Error::MalformedTerm(_))));
    let r = Tensor::Ord(OrdTensor::<Q>::basis(vec![2], &[0]).unwrap());
    let s = Tensor::Ord(OrdTensor::<Q>::basis(vec![2], &[0]).unwrap());
    let target = Tensor::Ord(OrdTensor::<Q>::basis(vec![2, 2], &[0, 0]).unwrap());
    let overlap =
        StrengthCertificate::new(target, vec![CertTerm::new(Split::Slots(vec![0, 1]), r, s)]);
    assert!(matches!(overlap.verify(), Err(Error::MalformedTerm(_))));
}

#[test]
fn trivial_certificate_examples() {
    let top = Tensor::Alt(AltTensor::<Q>::basis(3, &[0, 1, 2]).unwrap());
    assert_eq!(trivial_certificate(&top).unwrap().len(), 1);
    let two = Tensor::Alt(
        AltTensor::<Q>::from_terms(3, 5, [(vec![0, 1, 2], q(1)), (vec![0, 3, 4], q(1))]).unwrap(),
    );
    let cert = trivial_certificate(&two).unwrap();
    assert!(cert.verify().unwrap() && cert.len() <= 3);
    let diagonal = Tensor::Ord(
        OrdTensor::<Q>::from_terms(vec![2, 3, 4], (0..2).map(|i| (vec![i, i, i], q(1)))).unwrap(),
    );
    let cert = trivial_certificate(&diagonal).unwrap();
    assert!(cert.verify().unwrap() && cert.len() <= 2);
}

#[test]
fn quadratic_strength_of_power_sums() {
    for n in 1..=8 {
        let report = degree_two_strength(&power_sum::<Q>(2, n).unwrap()).unwrap();
        assert_eq!((report.rank, report.strength), (n, n.div_ceil(2)));
        assert_eq!(report.witness.len(), report.strength);
        assert!(report.witness.verify().unwrap());
    }
    // over F_5 every pair of squares factors, so the witness is rational
    let report = degree_two_strength(&power_sum::<Fp<5>>(2, 4).unwrap()).unwrap();
    assert_eq!(report.strength, 2);
    assert!(matches!(report.witness, Witness::Rational(_)));
}

#[test]
fn quadratic_strength_of_other_flavors() {
    let symplectic = Tensor::Alt(
        AltTensor::<Q>::from_terms(2, 4, [(vec![0, 1], q(1)), (vec![2, 3], q(1))]).unwrap(),
    );
    let report = degree_two_strength(&symplectic).unwrap();
    assert_eq!((report.rank, report.strength), (4, 2));
    assert!(report.witness.verify().unwrap());

    let identity = Tensor::Ord(
        OrdTensor::<Q>::from_terms(vec![3, 3], (0..3).map(|i| (vec![i, i], q(1)))).unwrap(),
    );
    let report = degree_two_strength(&identity).unwrap();
    // rank oracle: elimination on the matrix
    let rank = identity.as_ord().unwrap().to_matrix().unwrap().rank();
    assert_eq!((report.rank, report.strength), (rank, 3));
    assert!(report.witness.verify().unwrap());

    assert!(matches!(
        degree_two_strength(&sym::<F2>(2, 2, "x1*x2")),
        Err(Error::UnsupportedCharacteristic {
            characteristic: 2,
            ..
        })
    ));
}

#[test]
fn brute_force_examples_over_f2() {
    assert_eq!(brute(&sym::<F2>(3, 2, "x1^2*x2")), Some(1));
    assert_eq!(brute(&sym::<F2>(3, 2, "x1^3 + x1^2*x2 + x2^3")), Some(2));
    assert_eq!(brute(&sym::<F2>(3, 2, "x1^2*x2 + x1*x2^2")), Some(1));
    assert_eq!(
        brute(&Tensor::<F2>::zero(Flavor::Sym, 3, &[2]).unwrap()),
        Some(0)
    );
    assert!(matches!(
        brute_force_strength(&sym::<Q>(2, 2, "x1*x2"), &BruteForceConfig::default()),
        Err(Error::InfiniteField)
    ));
    let tiny = BruteForceConfig {
        k_max: 4,
        budget: 3,
        parallel: false,
    };
    assert!(matches!(
        brute_force_strength(&sym::<F2>(3, 3, "x1^3 + x2^3 + x3^3"), &tiny),
        Err(Error::BudgetExceeded { .. })
    ));
}

#[test]
fn a_cubic_without_rational_roots_has_no_linear_factor() {
    // oracle: x^3 + x^2 y + y^3 has no projective root over F_2, hence no linear factor
    let f = parse_polynomial::<F2>("x1^3 + x1^2*x2 + x2^3", Some(2)).unwrap();
    for (a, b) in [(1, 0), (0, 1), (1, 1)] {
        assert!(!f
            .eval(&[F2::from_i64(a), F2::from_i64(b)])
            .unwrap()
            .is_zero());
    }
    assert!(
        trivial_certificate(&sym::<F2>(3, 2, "x1^3 + x1^2*x2 + x2^3"))
            .unwrap()
            .len()
            <= 2
    );
}

fn all_quadrics<F: Field>(n: usize) -> Vec<Tensor<F>> {
    let coords = Coordinates::new(Flavor::Sym, 2, &[n]).unwrap();
    let elements = F::elements().unwrap();
    product_tuples(&vec![elements.len(); coords.len()])
        .into_iter()
        .map(|idx| {
            coords
                .tensor(&idx.iter().map(|&i| elements[i].clone()).collect::<Vec<_>>())
                .unwrap()
        })
        .collect()
}

#[test]
fn quadratic_strength_matches_brute_force_over_f3() {
    for n in [2, 3] {
        let quadrics = all_quadrics::<F3>(n);
        assert_eq!(quadrics.len(), 3usize.pow((n * (n + 1) / 2) as u32));
        for t in quadrics {
            let report = degree_two_strength(&t).unwrap();
            assert!(report.witness.verify().unwrap());
            assert_eq!(Some(report.strength), brute(&t), "{t}");
        }
    }
}

#[test]
fn leibniz_examples() {
    let cert = StrengthCertificate::new(
        sym::<Q>(3, 3, "x1*x2*x3"),
        vec![term(1, 3, "x1", "x2*x3", 3)],
    );
    let red = leibniz_reduce(&cert, &[vec![q(1), q(0)]]).unwrap();
    assert!(red.reduced.is_zero());
    assert_eq!((red.linear_terms, red.bound(1)), (1, 0));
    assert!(red.derivatives.iter().all(|c| c.is_empty()));

    let cert = StrengthCertificate::new(
        sym::<Q>(4, 2, "x1^2*x2^2"),
        vec![term(2, 2, "x1^2", "x2^2", 4)],
    );
    let red = leibniz_reduce(&cert, &[vec![q(1), q(0)]]).unwrap();
    assert_eq!(red.linear_terms, 0);
    let derivative = &red.derivatives[0];
    assert_eq!(derivative.target, sym(3, 2, "2*x1*x2^2"));
    assert!(derivative.verify().unwrap() && derivative.len() <= 2);

    let alt = StrengthCertificate::new(
        Tensor::Alt(AltTensor::<Q>::basis(2, &[0, 1]).unwrap()),
        Vec::new(),
    );
    assert!(leibniz_reduce(&alt, &[]).is_err());
}

#[test]
fn chopping_examples() {
    let b = BigradedElement::split(&sym::<Q>(2, 2, "x1^2 + 2*x1*x2 + x2^2"), &[1]).unwrap();
    let cert = chop(&b).unwrap();
    assert_eq!(cert.target, sym(2, 2, "x1^2 + 2*x1*x2"));
    assert_eq!(cert.len(), 1);
    assert!(cert.verify().unwrap());

    // (u1 + v1) ⊗ (u2 + v2) with U = (1, 1)
    let a = OrdTensor::vector(&[q(1), q(1)]);
    let t = Tensor::Ord(OrdTensor::place(&[0], &a, &a).unwrap());
    let cert = chop(&BigradedElement::split(&t, &[1, 1]).unwrap()).unwrap();
    assert!(cert.verify().unwrap() && cert.len() <= 2);
    assert_eq!(cert.target.num_terms(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn chopping_respects_dim_u(seed in any::<u64>()) {
        let mut r = rng(seed);
        for (flavor, d, u, v, bound) in [
            (Flavor::Sym, 3, vec![2], vec![3], 2),
            (Flavor::Alt, 3, vec![3], vec![3], 3),
            (Flavor::Ord, 2, vec![2, 2], vec![2, 2], 4),
        ] {
            let full: Vec<usize> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            let t = random_dense::<Q>(flavor, d, &full, &mut r).unwrap();
            let b = BigradedElement::split(&t, &u).unwrap();
            let cert = chop(&b).unwrap();
            prop_assert!(cert.verify().unwrap());
            prop_assert!(cert.len() <= bound);
            prop_assert_eq!(cert.target.add(&b.top()).unwrap(), t);
        }
    }

    #[test]
    fn trivial_certificates_respect_their_bounds(seed in any::<u64>()) {
        let mut r = rng(seed);
        for flavor in [Flavor::Sym, Flavor::Alt, Flavor::Ord] {
            let d = r.gen_range(2..=3);
            let dims: Vec<usize> = match flavor {
                Flavor::Ord => (0..d).map(|_| r.gen_range(1..=3)).collect(),
                _ => vec![r.gen_range(d as usize..=5)],
            };
            let bound = |dims: &[usize]| match flavor {
                Flavor::Sym => dims[0],
                Flavor::Alt => dims[0] + 1 - d as usize,
                Flavor::Ord => *dims.iter().min().unwrap(),
            };
            let t = random_dense::<Q>(flavor, d, &dims, &mut r).unwrap();
            let cert = trivial_certificate(&t).unwrap();
            prop_assert!(cert.verify().unwrap());
            prop_assert!(cert.len() <= bound(&dims));
            // push through a map onto a smaller space and recertify
            let smaller: Vec<usize> = dims.iter().map(|&n| if flavor == Flavor::Alt { n.max(d as usize + 1) - 1 } else { n.max(2) - 1 }).collect();
            let maps: Vec<_> = dims.iter().zip(&smaller).map(|(&a, &b)| random_matrix::<Q>(b, a, &mut r)).collect();
            let image = t.induced(&maps).unwrap();
            let cert = trivial_certificate(&image).unwrap();
            prop_assert!(cert.verify().unwrap());
            prop_assert!(cert.len() <= bound(&smaller));
        }
    }

    #[test]
    fn leibniz_certificates_verify(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = r.gen_range(3..=4);
        let k = r.gen_range(1..=3);
        let cert = border_strength::<Q>(Flavor::Sym, d, &[4], k, &mut r).unwrap();
        let probe = leibniz_reduce(&cert, &[]).unwrap();
        let quotient_dim = probe.quotient.rows();
        let xs: Vec<Vec<Q>> = (0..3).map(|_| random_vector(quotient_dim, &mut r)).collect();
        let red = leibniz_reduce(&cert, &xs).unwrap();
        prop_assert!(red.w_basis.len() <= red.linear_terms);
        prop_assert_eq!(red.derivatives.len(), 3);
        for (x, c) in xs.iter().zip(&red.derivatives) {
            prop_assert!(c.verify().unwrap());
            prop_assert!(c.len() <= red.bound(k));
            prop_assert_eq!(&c.target, &Tensor::Sym(red.reduced.contract(x).unwrap()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn brute_force_never_exceeds_a_certificate(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (flavor, d, dims) = match r.gen_range(0..3) {
            0 => (Flavor::Sym, 3, vec![2]),
            1 => (Flavor::Alt, 2, vec![4]),
            _ => (Flavor::Ord, 3, vec![2, 2, 2]),
        };
        let k = r.gen_range(1..=2);
        let cert = border_strength::<F3>(flavor, d, &dims, k, &mut r).unwrap();
        prop_assert!(cert.verify().unwrap());
        let s = brute(&cert.target).unwrap();
        prop_assert!(s <= cert.len());
        prop_assert!(s <= trivial_certificate(&cert.target).unwrap().len());
    }
}
