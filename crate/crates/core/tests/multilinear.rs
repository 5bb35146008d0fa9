mod common;

use common::{q, random_matrix, rng};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use strength_core::exactalg::{parse_polynomial, Matrix};
use strength_core::families::{border_strength, random_dense, random_vector};
use strength_core::multilinear::{
    increasing_tuples, AltTensor, BigradedElement, Block, Flavor, OrdTensor, Split, SymTensor,
    Tensor,
};
use strength_core::Q;

fn sym(d: u32, n: usize, s: &str) -> Tensor<Q> {
    Tensor::Sym(SymTensor::new(d, parse_polynomial(s, Some(n)).unwrap()).unwrap())
}

fn alt_basis(dim: usize, idx: &[usize]) -> AltTensor<Q> {
    AltTensor::basis(dim, idx).unwrap()
}

fn ord_basis(dims: &[usize], idx: &[usize]) -> OrdTensor<Q> {
    OrdTensor::basis(dims.to_vec(), idx).unwrap()
}

/// Random flavor, degree and dimensions with maps `V -> W -> X`.
fn random_setting(flavor: Flavor, r: &mut ChaCha8Rng) -> (u32, Vec<usize>, Vec<usize>, Vec<usize>) {
    let d = r.gen_range(2..=3);
    let slots = if flavor == Flavor::Ord { d as usize } else { 1 };
    let low = if flavor == Flavor::Alt { d as usize } else { 1 };
    let mut dims = || (0..slots).map(|_| r.gen_range(low..=4)).collect::<Vec<_>>();
    (d, dims(), dims(), dims())
}

fn maps(from: &[usize], to: &[usize], r: &mut ChaCha8Rng) -> Vec<Matrix<Q>> {
    from.iter()
        .zip(to)
        .map(|(&a, &b)| random_matrix(b, a, r))
        .collect()
}

#[test]
fn induced_map_examples() {
    let kill = Matrix::from_rows(vec![vec![q(1), q(0)]], 2).unwrap();
    assert_eq!(
        sym(2, 2, "x1^2 + x1*x2 + x2^2").induced(&[kill]).unwrap(),
        sym(2, 1, "x1^2")
    );
    let swap = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]], 2).unwrap();
    let e12 = Tensor::Alt(alt_basis(2, &[0, 1]));
    assert_eq!(e12.induced(&[swap]).unwrap(), e12.scale(&q(-1)));
}

#[test]
fn identity_maps_fix_everything() {
    let mut r = rng(5);
    for flavor in [Flavor::Sym, Flavor::Alt, Flavor::Ord] {
        for _ in 0..50 {
            let (d, dims, _, _) = random_setting(flavor, &mut r);
            let t = random_dense::<Q>(flavor, d, &dims, &mut r).unwrap();
            let id: Vec<Matrix<Q>> = dims.iter().map(|&n| Matrix::identity(n)).collect();
            assert_eq!(t.induced(&id).unwrap(), t);
        }
    }
}

#[test]
fn alternating_coefficients_are_minors() {
    // the coefficient of e_I in ∧^d φ (e_J) is the minor det φ[I, J]
    let mut r = rng(8);
    let phi: Matrix<Q> = random_matrix(4, 5, &mut r);
    for jdx in increasing_tuples(5, 3) {
        let image = alt_basis(5, &jdx).induced(&phi).unwrap();
        for idx in increasing_tuples(4, 3) {
            let minor = Matrix::from_fn(3, 3, |a, b| phi[(idx[a], jdx[b])].clone());
            assert_eq!(image.coefficient(&idx), minor.determinant().unwrap());
        }
    }
}

#[test]
fn symmetric_images_agree_with_pullback_evaluation() {
    // (S^d φ q)(y) = q(φ^T y) for a form q on V and a point y of W*
    let mut r = rng(9);
    for _ in 0..20 {
        let t = random_dense::<Q>(Flavor::Sym, 3, &[3], &mut r).unwrap();
        let phi: Matrix<Q> = random_matrix(2, 3, &mut r);
        let image = t.induced(std::slice::from_ref(&phi)).unwrap();
        let y = random_vector::<Q>(2, &mut r);
        let pulled = phi.transpose().mul_vec(&y).unwrap();
        assert_eq!(
            image.as_sym().unwrap().eval(&y).unwrap(),
            t.as_sym().unwrap().eval(&pulled).unwrap()
        );
    }
}

#[test]
fn bigraded_examples() {
    let b = BigradedElement::split(&sym(2, 2, "x1^2 + 2*x1*x2 + x2^2"), &[1]).unwrap();
    assert_eq!(b.component(Block::VDegree(0)), sym(2, 2, "x1^2"));
    assert_eq!(b.component(Block::VDegree(1)), sym(2, 2, "2*x1*x2"));
    assert_eq!(b.component(Block::VDegree(2)), sym(2, 2, "x2^2"));
    assert_eq!(b.top(), sym(2, 2, "x2^2"));

    // u_1 ⊗ v_2 in (K ⊕ K) ⊗ (K ⊕ K): V occupies index 1 of each slot
    let t = Tensor::Ord(ord_basis(&[2, 2], &[0, 1]));
    let b = BigradedElement::split(&t, &[1, 1]).unwrap();
    for (block, c) in b.components() {
        if *block == Block::VSlots(0b10) {
            assert_eq!(c, &t);
        } else {
            assert!(c.is_zero(), "{block:?}");
        }
    }
}

#[test]
fn contraction_examples() {
    let t = SymTensor::new(3, parse_polynomial::<Q>("x1^2*x2", Some(2)).unwrap()).unwrap();
    assert_eq!(
        t.contract(&[q(1), q(0)]).unwrap().poly(),
        &parse_polynomial("2*x1*x2", Some(2)).unwrap()
    );
    assert!(t.contract(&[q(0), q(0)]).unwrap().is_zero());
    let cube = SymTensor::new(3, parse_polynomial::<Q>("x2^3", Some(2)).unwrap()).unwrap();
    assert!(cube.contract(&[q(1), q(0)]).unwrap().is_zero());
    assert!(SymTensor::<Q>::zero(0, 2).contract(&[q(1), q(0)]).is_err());
    assert!(t.contract(&[q(1)]).is_err());
}

#[test]
fn product_examples() {
    let x = sym(1, 2, "x1");
    assert_eq!(
        Tensor::product(&Split::Degree(1), &x, &x).unwrap(),
        sym(2, 2, "x1^2")
    );
    let e1 = Tensor::Alt(alt_basis(2, &[0]));
    let e2 = Tensor::Alt(alt_basis(2, &[1]));
    assert!(Tensor::product(&Split::Degree(1), &e1, &e1)
        .unwrap()
        .is_zero());
    assert_eq!(
        Tensor::product(&Split::Degree(1), &e2, &e1).unwrap(),
        Tensor::Alt(alt_basis(2, &[0, 1])).scale(&q(-1))
    );
    let r = Tensor::Ord(ord_basis(&[2], &[0]));
    let s = Tensor::Ord(ord_basis(&[2, 2], &[0, 0]));
    assert_eq!(
        Tensor::product(&Split::Slots(vec![1]), &r, &s).unwrap(),
        Tensor::Ord(ord_basis(&[2, 2, 2], &[0, 0, 0]))
    );
    assert!(Tensor::product(&Split::Slots(vec![1, 1]), &s, &r).is_err());
}

fn check_functoriality(flavor: Flavor, seed: u64) -> Result<(), TestCaseError> {
    let mut r = rng(seed);
    let (d, v, w, x) = random_setting(flavor, &mut r);
    let psi = maps(&v, &w, &mut r);
    let phi = maps(&w, &x, &mut r);
    let composed: Vec<Matrix<Q>> = phi
        .iter()
        .zip(&psi)
        .map(|(a, b)| a.mul(b).unwrap())
        .collect();
    let a = random_dense::<Q>(flavor, d, &v, &mut r).unwrap();
    let b = random_dense::<Q>(flavor, d, &v, &mut r).unwrap();
    let c = q(r.gen_range(-3..=3));
    prop_assert_eq!(
        a.induced(&composed).unwrap(),
        a.induced(&psi).unwrap().induced(&phi).unwrap()
    );
    let lhs = a.add(&b.scale(&c)).unwrap().induced(&psi).unwrap();
    let rhs = a
        .induced(&psi)
        .unwrap()
        .add(&b.induced(&psi).unwrap().scale(&c))
        .unwrap();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn induced_maps_are_functorial_and_linear(seed in any::<u64>()) {
        check_functoriality(Flavor::Sym, seed)?;
        check_functoriality(Flavor::Alt, seed)?;
        check_functoriality(Flavor::Ord, seed)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn split_then_assemble_is_the_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        for flavor in [Flavor::Sym, Flavor::Alt, Flavor::Ord] {
            let (d, u, v, _) = random_setting(flavor, &mut r);
            let full: Vec<usize> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            let t = random_dense::<Q>(flavor, d, &full, &mut r).unwrap();
            let b = BigradedElement::split(&t, &u).unwrap();
            prop_assert_eq!(b.assemble(), t.clone());
            let total = b.components().fold(Tensor::zero(flavor, d, &full).unwrap(), |acc, (_, c)| acc.add(c).unwrap());
            prop_assert_eq!(total, t);
        }
    }

    #[test]
    fn contraction_of_a_power(seed in any::<u64>(), d in 1u32..=4) {
        let mut r = rng(seed);
        let v = random_vector::<Q>(3, &mut r);
        let x = random_vector::<Q>(3, &mut r);
        let xv: Q = x.iter().zip(&v).map(|(a, b)| a * b).sum();
        let lhs = SymTensor::power(&v, d).contract(&x).unwrap();
        let rhs = SymTensor::power(&v, d - 1).scale(&(q(d as i64) * xv));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn contraction_is_bilinear(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_dense::<Q>(Flavor::Sym, 3, &[3], &mut r).unwrap();
        let b = random_dense::<Q>(Flavor::Sym, 3, &[3], &mut r).unwrap();
        let (a, b) = (a.as_sym().unwrap(), b.as_sym().unwrap());
        let x = random_vector::<Q>(3, &mut r);
        let y = random_vector::<Q>(3, &mut r);
        prop_assert_eq!(a.add(b).unwrap().contract(&x).unwrap(), a.contract(&x).unwrap().add(&b.contract(&x).unwrap()).unwrap());
        let xy: Vec<Q> = x.iter().zip(&y).map(|(s, t)| s + t).collect();
        prop_assert_eq!(a.contract(&xy).unwrap(), a.contract(&x).unwrap().add(&a.contract(&y).unwrap()).unwrap());
    }

    #[test]
    fn wedge_is_graded_commutative_and_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = AltTensor::vector(&random_vector::<Q>(4, &mut r));
        let b = random_dense::<Q>(Flavor::Alt, 2, &[4], &mut r).unwrap().as_alt().unwrap().clone();
        let c = AltTensor::vector(&random_vector::<Q>(4, &mut r));
        prop_assert_eq!(a.wedge(&c).unwrap(), c.wedge(&a).unwrap().scale(&q(-1)));
        // even degree commutes
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
        prop_assert_eq!(a.wedge(&b).unwrap().wedge(&c).unwrap(), a.wedge(&b.wedge(&c).unwrap()).unwrap());
        prop_assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn certificates_push_forward(seed in any::<u64>(), k in 1usize..=2) {
        let mut r = rng(seed);
        for flavor in [Flavor::Sym, Flavor::Alt, Flavor::Ord] {
            let (d, v, w, _) = random_setting(flavor, &mut r);
            let cert = border_strength::<Q>(flavor, d, &v, k, &mut r).unwrap();
            prop_assert!(cert.verify().unwrap());
            let pushed = cert.induced(&maps(&v, &w, &mut r)).unwrap();
            prop_assert!(pushed.len() <= k);
            prop_assert!(pushed.verify().unwrap());
        }
    }
}

#[test]
fn pairing_of_a_decomposable_functional() {
    // <x_1 ⊗ x_2, u_1 ⊗ u_2> = x_1(u_1) x_2(u_2)
    let t = OrdTensor::vector(&[q(1), q(2)]);
    let s = OrdTensor::vector(&[q(3), q(-1), q(1)]);
    let prod = OrdTensor::place(&[0], &t, &s).unwrap();
    let value = prod
        .pair(&[vec![q(2), q(1)], vec![q(1), q(1), q(0)]])
        .unwrap();
    assert_eq!(value, q(4) * q(2));
    assert!(!value.is_zero());
}
