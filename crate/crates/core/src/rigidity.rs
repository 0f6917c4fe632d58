//! The char-polynomial comparison pipeline for a generator correspondence
//! between two groups: for every short word, the characteristic polynomial
//! of its squared trace over the invariant trace field is compared exactly
//! and modulo good primes. A single disagreeing (word, prime) pair is a
//! certificate that the correspondence cannot preserve congruence
//! subgroups at that prime.

use crate::error::{Error, Result};
use crate::fuchsian::{
    conjugator, squares_subgroup, trace_field, FuchsianRep, Mat2, TraceField, Word,
};
use crate::intpoly::{int_mod_p, rat_to_int_primitive, IntPoly};
use crate::numfield::AlgebraicNumber;
use crate::order::factor_u64;
use num_bigint::BigInt;
use num_traits::Signed;

pub struct RigidityRow {
    pub word: Word,
    pub tr2_first: AlgebraicNumber,
    pub tr2_second: AlgebraicNumber,
    /// Monic integer characteristic polynomials over the respective
    /// invariant trace fields.
    pub chi_first: IntPoly,
    pub chi_second: IntPoly,
    pub equal_exactly: bool,
    /// Good primes at which the reductions differ.
    pub disagreeing_primes: Vec<u64>,
}

pub struct RigidityReport {
    pub rows: Vec<RigidityRow>,
    /// First word and prime witnessing a congruence obstruction.
    pub contradiction: Option<(Word, u64)>,
    pub all_equal_exactly: bool,
    /// Primes treated as good for the comparison.
    pub good_primes: Vec<u64>,
    /// When the entry fields agree and the squared traces match, the
    /// conjugacy solver runs; a conjugator certifies the correspondence is
    /// induced by conjugation.
    pub conjugator: Option<Mat2>,
    pub first_invariant_degree: usize,
    pub second_invariant_degree: usize,
}

fn invariant_trace_field(rep: &FuchsianRep) -> Result<TraceField> {
    if rep.tfc_by_construction {
        trace_field(rep)
    } else {
        trace_field(&squares_subgroup(rep)?.rep)
    }
}

/// Runs the comparison over all words of length at most `max_len` and
/// primes up to `p_max`. The correspondence maps generator i of the first
/// group to generator `correspondence[i]` of the second.
pub fn rigidity_report(
    first: &FuchsianRep,
    second: &FuchsianRep,
    correspondence: &[usize],
    max_len: usize,
    p_max: u64,
) -> Result<RigidityReport> {
    let m = first.rank();
    if correspondence.len() != m || second.rank() != m {
        return Err(Error::InvalidInput(
            "correspondence must be a bijection on generators".into(),
        ));
    }
    let inv1 = invariant_trace_field(first)?;
    let inv2 = invariant_trace_field(second)?;

    // good primes for the comparison: odd, prime to 3 and to both field
    // discriminants
    let mut excluded: Vec<u64> = vec![2, 3];
    let d1 = inv1.field().minpoly_discriminant();
    let d2 = inv2.field().minpoly_discriminant();
    for p in factor_u64(&BigInt::from(d1.abs() * d2.abs())) {
        if !excluded.contains(&p) {
            excluded.push(p);
        }
    }
    let good_primes: Vec<u64> = (5..=p_max)
        .filter(|&p| crate::finfld::is_prime_u64(p) && !excluded.contains(&p))
        .collect();

    let mut words: Vec<Word> = vec![];
    first.for_each_word(max_len, |w, _| words.push(w.clone()));

    let mut rows = vec![];
    let mut contradiction = None;
    let mut all_equal = true;
    for w in &words {
        let w2 = Word(
            w.0.iter()
                .map(|&(i, e)| (correspondence[i], e))
                .collect(),
        );
        let t1 = first.tr2(w);
        let t2 = second.tr2(&w2);
        let tr2_first = inv1.map.express(&t1).ok_or_else(|| {
            Error::InternalConsistency(
                "squared trace outside the invariant trace field".into(),
            )
        })?;
        let tr2_second = inv2.map.express(&t2).ok_or_else(|| {
            Error::InternalConsistency(
                "squared trace outside the invariant trace field".into(),
            )
        })?;
        let chi_first = rat_to_int_primitive(&tr2_first.char_poly());
        let chi_second = rat_to_int_primitive(&tr2_second.char_poly());
        let equal_exactly = chi_first == chi_second;
        let mut disagreeing = vec![];
        for &p in &good_primes {
            let fp = crate::finfld::FpCtx::new(p);
            if int_mod_p(&chi_first, &fp) != int_mod_p(&chi_second, &fp) {
                disagreeing.push(p);
                if contradiction.is_none() {
                    contradiction = Some((w.clone(), p));
                }
            }
        }
        if !equal_exactly {
            all_equal = false;
        }
        rows.push(RigidityRow {
            word: w.clone(),
            tr2_first,
            tr2_second,
            chi_first,
            chi_second,
            equal_exactly,
            disagreeing_primes: disagreeing,
        });
    }

    // attempt the conjugacy solver when nothing obstructs it
    let conj = if all_equal && first.field == second.field {
        conjugator(first, second, correspondence).unwrap_or(None)
    } else {
        None
    };

    Ok(RigidityReport {
        rows,
        contradiction,
        all_equal_exactly: all_equal,
        good_primes,
        conjugator: conj,
        first_invariant_degree: inv1.degree(),
        second_invariant_degree: inv2.degree(),
    })
}
