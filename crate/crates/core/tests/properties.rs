use proptest::prelude::*;

use num_bigint::BigInt;

use cinfty::cochain::{include_g, project_f, simplex_faces, Cochain};
use cinfty::form::Form;
use cinfty::scalar::Rational;
use cinfty::tensor::{koszul_sign, shuffle, Letter, SignRule, TensorSum};

const DIM: usize = 3;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

/// A random form on Ω_DIM with at most four monomials of degree `k`.
fn form_of_degree(k: usize) -> impl Strategy<Value = Form> {
    let monomial = (
        rational(),
        prop::collection::vec(0u32..=2, DIM),
        prop::sample::subsequence((1..=DIM).collect::<Vec<_>>(), k),
    );
    prop::collection::vec(monomial, 0..4).prop_map(|ms| {
        let mut out = Form::zero(DIM);
        for (c, exps, dts) in ms {
            out += &Form::term(DIM, c, &exps, &dts).unwrap();
        }
        out
    })
}

fn any_form() -> impl Strategy<Value = (usize, Form)> {
    (0..=DIM).prop_flat_map(|k| form_of_degree(k).prop_map(move |f| (k, f)))
}

fn cochain() -> impl Strategy<Value = Cochain> {
    let faces = simplex_faces(DIM);
    prop::collection::vec((prop::sample::select(faces), rational()), 0..5).prop_map(|entries| {
        let mut c = Cochain::zero(DIM);
        for (face, q) in entries {
            c.add_entry(face, q);
        }
        c
    })
}

fn sign(negative: bool, f: &Form) -> Form {
    if negative {
        -f
    } else {
        f.clone()
    }
}

fn letter() -> impl Strategy<Value = Letter> {
    (prop::sample::select(vec!["a", "b", "c"]), -1i64..=1).prop_map(|(n, d)| Letter::new(n, d))
}

fn word(max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(letter(), 1..=max)
}

fn shuffle_sum(x: &TensorSum<Vec<Letter>>, v: &[Letter]) -> TensorSum<Vec<Letter>> {
    let mut out = TensorSum::new();
    for (w, c) in x.terms() {
        out.add_sum(&shuffle(w, v), c);
    }
    out
}

fn sum_shuffle(u: &[Letter], x: &TensorSum<Vec<Letter>>) -> TensorSum<Vec<Letter>> {
    let mut out = TensorSum::new();
    for (w, c) in x.terms() {
        out.add_sum(&shuffle(u, w), c);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leibniz((k, a) in any_form(), (_, b) in any_form()) {
        let lhs = a.wedge(&b).unwrap().d();
        let rhs = &a.d().wedge(&b).unwrap() + &sign(k % 2 == 1, &a.wedge(&b.d()).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_squared_is_zero((_, a) in any_form()) {
        prop_assert!(a.d().d().is_zero());
    }

    #[test]
    fn stokes(a in form_of_degree(DIM - 1)) {
        // ∫_Δ dω = Σ_j (-1)^j ∫_{∂_j Δ} ω
        let lhs = a.d().integrate_top();
        let mut rhs = Rational::from_integer(0.into());
        for j in 0..=DIM {
            let face: Vec<usize> = (0..=DIM).filter(|&v| v != j).collect();
            let x = a.integrate_face(&face).unwrap();
            if j % 2 == 0 { rhs += x } else { rhs -= x }
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn face_restriction_is_functorial((_, a) in any_form(), (_, b) in any_form()) {
        let face = [0, 2, 3];
        let ra = a.face_restrict(&face).unwrap();
        prop_assert_eq!(a.d().face_restrict(&face).unwrap(), ra.d());
        prop_assert_eq!(
            a.wedge(&b).unwrap().face_restrict(&face).unwrap(),
            ra.wedge(&b.face_restrict(&face).unwrap()).unwrap()
        );
        // [0,2,3] then its edge [1,2] is the edge [2,3] of Δ^3
        prop_assert_eq!(
            ra.face_restrict(&[1, 2]).unwrap(),
            a.face_restrict(&[2, 3]).unwrap()
        );
    }

    #[test]
    fn f_is_a_chain_map((_, a) in any_form()) {
        prop_assert_eq!(project_f(&a.d()), project_f(&a).coboundary());
    }

    #[test]
    fn g_is_a_chain_map(c in cochain()) {
        prop_assert_eq!(include_g(&c.coboundary()), include_g(&c).d());
    }

    #[test]
    fn g_is_natural(c in cochain()) {
        for face in [vec![0, 1], vec![1, 3], vec![0, 2, 3], vec![0, 1, 2]] {
            prop_assert_eq!(
                include_g(&c.restrict(&face).unwrap()),
                include_g(&c).face_restrict(&face).unwrap()
            );
        }
    }

    #[test]
    fn shuffle_is_graded_commutative(u in word(3), v in word(3)) {
        let du: i64 = u.iter().map(|l| l.degree).sum();
        let dv: i64 = v.iter().map(|l| l.degree).sum();
        let mut lhs = shuffle(&u, &v);
        let minus = Rational::from_integer((-1).into());
        let one = Rational::from_integer(1.into());
        let swapped = shuffle(&v, &u);
        lhs.add_sum(&swapped, if SignRule::Koszul.swap(du, dv) { &one } else { &minus });
        prop_assert!(lhs.is_zero());
    }

    #[test]
    fn shuffle_is_associative(u in word(2), v in word(2), w in word(2)) {
        let left = shuffle_sum(&shuffle(&u, &v), &w);
        let right = sum_shuffle(&u, &shuffle(&v, &w));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn koszul_signs_compose(
        p1 in prop::collection::vec(0i64..2, 3),
        p2 in prop::collection::vec(0i64..2, 3),
        d in prop::collection::vec(-1i64..=1, 3),
    ) {
        // (φ_1 ⊗ φ_2 ⊗ φ_3)(ψ_1 ⊗ ψ_2 ⊗ ψ_3) = ± (φ_1ψ_1 ⊗ ..) with the sign
        // from moving each ψ_j past the φ_i, i > j
        let inner = koszul_sign(&p2, &d, SignRule::Koszul);
        let moved: Vec<i64> = d.iter().zip(&p2).map(|(a, p)| a + p).collect();
        let outer = koszul_sign(&p1, &moved, SignRule::Koszul);
        let mut exchange = false;
        for i in 0..3 {
            for j in 0..i {
                exchange ^= SignRule::Koszul.swap(p1[i], p2[j]);
            }
        }
        let composed: Vec<i64> = p1.iter().zip(&p2).map(|(a, b)| a + b).collect();
        prop_assert_eq!(inner ^ outer, exchange ^ koszul_sign(&composed, &d, SignRule::Koszul));
    }
}
