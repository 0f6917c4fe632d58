//! Built-in example groups: the modular group, the two signature-(1;2)
//! groups generated by explicit Moebius transformations over
//! Q(sqrt2, sqrt3, sqrt5), their squares subgroups, and a small
//! Galois-conjugation demo over Q(sqrt2).

use crate::error::Result;
use crate::fuchsian::{load_group, squares_subgroup, FuchsianRep, Mat2, Word};
use crate::intpoly::{int_poly_from_i64, rat, rat_from_i64, RootInterval};
use crate::numfield::{field_join, AlgebraicNumber, NumberField};
use std::sync::OnceLock;

pub const BUILTIN_NAMES: [&str; 6] = [
    "modular",
    "takeuchi-A",
    "takeuchi-B",
    "takeuchi-A2",
    "takeuchi-B2",
    "conj-sqrt2-demo",
];

/// The field Q(sqrt2, sqrt3, sqrt5) with its three square roots expressed
/// in the power basis of a primitive element.
pub struct CorpusField {
    pub field: NumberField,
    pub sqrt2: AlgebraicNumber,
    pub sqrt3: AlgebraicNumber,
    pub sqrt5: AlgebraicNumber,
}

static CORPUS_FIELD: OnceLock<CorpusField> = OnceLock::new();

pub fn corpus_field() -> &'static CorpusField {
    CORPUS_FIELD.get_or_init(|| {
        let q2 = NumberField::real_quadratic(2).expect("Q(sqrt2)");
        let j3 = field_join(
            &q2,
            &int_poly_from_i64(&[-3, 0, 1]),
            &RootInterval { lo: rat_from_i64(1), hi: rat_from_i64(2) },
        )
        .expect("adjoining sqrt3");
        let j5 = field_join(
            &j3.field,
            &int_poly_from_i64(&[-5, 0, 1]),
            &RootInterval { lo: rat_from_i64(2), hi: rat_from_i64(3) },
        )
        .expect("adjoining sqrt5");
        // express sqrt2 and sqrt3 inside the big field by evaluating their
        // coordinate polynomials at the image of the intermediate generator
        let embed = |x: &AlgebraicNumber| -> AlgebraicNumber {
            let mut acc = j5.field.zero();
            let mut pw = j5.field.one();
            for c in &x.coords {
                acc = acc.add(&pw.scale(c));
                pw = pw.mul(&j5.old_gen);
            }
            acc
        };
        let sqrt2 = embed(&j3.old_gen);
        let sqrt3 = embed(&j3.new_root);
        let sqrt5 = j5.new_root.clone();
        debug_assert_eq!(sqrt2.mul(&sqrt2), j5.field.from_i64(2));
        debug_assert_eq!(sqrt3.mul(&sqrt3), j5.field.from_i64(3));
        debug_assert_eq!(sqrt5.mul(&sqrt5), j5.field.from_i64(5));
        CorpusField { field: j5.field, sqrt2, sqrt3, sqrt5 }
    })
}

fn commutator_squared_relator() -> Word {
    Word::from_pairs(&[
        (0, 1),
        (1, 1),
        (0, -1),
        (1, -1),
        (0, 1),
        (1, 1),
        (0, -1),
        (1, -1),
    ])
}

/// PSL(2, Z), generated by the translation and the inversion.
pub fn modular() -> Result<FuchsianRep> {
    let q = NumberField::rationals();
    let t = Mat2::new(q.from_i64(1), q.from_i64(1), q.from_i64(0), q.from_i64(1));
    let s = Mat2::new(q.from_i64(0), q.from_i64(-1), q.from_i64(1), q.from_i64(0));
    load_group(
        &q,
        vec![t, s],
        vec!["t".into(), "s".into()],
        vec![
            Word::from_pairs(&[(1, 2)]),
            Word::from_pairs(&[(1, 1), (0, 1), (1, 1), (0, 1), (1, 1), (0, 1)]),
        ],
    )
}

/// First signature-(1;2) group: diag((1+sqrt5)/2, (-1+sqrt5)/2) and
/// [[sqrt3, sqrt2], [sqrt2, sqrt3]].
pub fn takeuchi_a() -> Result<FuchsianRep> {
    let cf = corpus_field();
    let f = &cf.field;
    let half = rat(1, 2);
    let phi = cf.sqrt5.add(&f.one()).scale(&half);
    let phi_conj = cf.sqrt5.sub(&f.one()).scale(&half);
    let alpha = Mat2::new(phi, f.zero(), f.zero(), phi_conj);
    let beta = Mat2::new(
        cf.sqrt3.clone(),
        cf.sqrt2.clone(),
        cf.sqrt2.clone(),
        cf.sqrt3.clone(),
    );
    load_group(
        f,
        vec![alpha, beta],
        vec!["a".into(), "b".into()],
        vec![commutator_squared_relator()],
    )
}

/// Second signature-(1;2) group: diag(1+sqrt2, sqrt2-1) and
/// (1/2)[[sqrt6, sqrt2], [sqrt2, sqrt6]].
pub fn takeuchi_b() -> Result<FuchsianRep> {
    let cf = corpus_field();
    let f = &cf.field;
    let half = rat(1, 2);
    let alpha = Mat2::new(
        cf.sqrt2.add(&f.one()),
        f.zero(),
        f.zero(),
        cf.sqrt2.sub(&f.one()),
    );
    let sqrt6 = cf.sqrt2.mul(&cf.sqrt3);
    let beta = Mat2::new(
        sqrt6.scale(&half),
        cf.sqrt2.scale(&half),
        cf.sqrt2.scale(&half),
        sqrt6.scale(&half),
    );
    load_group(
        f,
        vec![alpha, beta],
        vec!["a".into(), "b".into()],
        vec![commutator_squared_relator()],
    )
}

/// Squares subgroup of the first group; satisfies the trace field condition.
pub fn takeuchi_a2() -> Result<FuchsianRep> {
    Ok(squares_subgroup(&takeuchi_a()?)?.rep)
}

/// Squares subgroup of the second group.
pub fn takeuchi_b2() -> Result<FuchsianRep> {
    Ok(squares_subgroup(&takeuchi_b()?)?.rep)
}

/// A semi-arithmetic group over Q(sqrt2) whose first generator has a Galois
/// conjugate of equal absolute trace: the modular-embedding obstruction
/// produces a violation witness on it.
pub fn conj_sqrt2_demo() -> Result<FuchsianRep> {
    let f = NumberField::real_quadratic(2)?;
    let s2 = f.gen();
    let one = f.one();
    let g = Mat2::new(one.add(&s2), f.zero(), f.zero(), s2.sub(&one));
    let h = Mat2::new(
        f.from_i64(2).add(&s2),
        one.add(&s2),
        one.clone(),
        one.clone(),
    );
    load_group(&f, vec![g, h], vec!["g".into(), "h".into()], vec![])
}

/// Looks up a built-in by name.
pub fn by_name(name: &str) -> Option<Result<FuchsianRep>> {
    match name {
        "modular" => Some(modular()),
        "takeuchi-A" => Some(takeuchi_a()),
        "takeuchi-B" => Some(takeuchi_b()),
        "takeuchi-A2" => Some(takeuchi_a2()),
        "takeuchi-B2" => Some(takeuchi_b2()),
        "conj-sqrt2-demo" => Some(conj_sqrt2_demo()),
        _ => None,
    }
}
