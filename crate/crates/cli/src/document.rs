//! The group-document file format: UTF-8 JSON with exact rational
//! coefficient vectors in the power basis of the declared field. Decimal
//! floats are rejected; rationals are strings like "3", "-1/2".

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rigidity_core::fuchsian::{load_group, FuchsianRep, Mat2, Word};
use rigidity_core::intpoly::{IntPoly, RootInterval};
use rigidity_core::numfield::{AlgebraicNumber, NumberField};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldBlock {
    /// Monic integer minimal polynomial, constant coefficient first.
    pub minpoly: Vec<String>,
    /// Rational interval isolating the distinguished real root.
    pub root_selector: [String; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub field: FieldBlock,
    /// Each generator: entries a, b, c, d; each entry a coefficient vector
    /// in the power basis, as exact rational strings.
    pub generators: Vec<[Vec<String>; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// Optional relators as lists of [generator index, exponent].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relators: Option<Vec<Vec<(usize, i64)>>>,
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(format!("decimal notation is not accepted: {:?}", s));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|e| format!("bad numerator {:?}: {}", num, e))?;
        let d: BigInt = den.trim().parse().map_err(|e| format!("bad denominator {:?}: {}", den, e))?;
        if d == BigInt::from(0) {
            return Err("zero denominator".into());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|e| format!("bad integer {:?}: {}", s, e))?;
        Ok(BigRational::from(n))
    }
}

pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl GroupDocument {
    pub fn parse(text: &str) -> Result<GroupDocument, String> {
        serde_json::from_str(text).map_err(|e| format!("document parse error: {}", e))
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable document")
    }

    pub fn build(&self) -> Result<FuchsianRep, String> {
        let mut minpoly: IntPoly = vec![];
        for c in &self.field.minpoly {
            let r = parse_rational(c)?;
            if !r.denom().is_one() {
                return Err(format!("minimal polynomial coefficient {} is not an integer", c));
            }
            minpoly.push(r.numer().clone());
        }
        let minpoly = rigidity_core::intpoly::int_trim(minpoly);
        let lo = parse_rational(&self.field.root_selector[0])?;
        let hi = parse_rational(&self.field.root_selector[1])?;
        let field = NumberField::create(&minpoly, lo, hi).map_err(|e| e.to_string())?;
        let d = field.degree();
        let mut mats = vec![];
        for (gi, g) in self.generators.iter().enumerate() {
            let mut entries = vec![];
            for coeffs in g {
                if coeffs.len() != d {
                    return Err(format!(
                        "generator {}: entry has {} coordinates, field degree is {}",
                        gi,
                        coeffs.len(),
                        d
                    ));
                }
                let coords: Result<Vec<BigRational>, String> =
                    coeffs.iter().map(|c| parse_rational(c)).collect();
                entries.push(AlgebraicNumber { field: field.clone(), coords: coords? });
            }
            mats.push(Mat2::new(
                entries[0].clone(),
                entries[1].clone(),
                entries[2].clone(),
                entries[3].clone(),
            ));
        }
        let labels = self.labels.clone().unwrap_or_default();
        let relators: Vec<Word> = self
            .relators
            .clone()
            .unwrap_or_default()
            .iter()
            .map(|pairs| Word::from_pairs(pairs))
            .collect();
        load_group(&field, mats, labels, relators).map_err(|e| e.to_string())
    }

    /// Canonical document for a representation (used for round-tripping).
    pub fn from_rep(rep: &FuchsianRep, label: Option<String>) -> GroupDocument {
        let minpoly = rep.field.minpoly().iter().map(|c| c.to_string()).collect();
        let iv: &RootInterval = rep.field.root_interval(rep.field.identity_embedding());
        let field = FieldBlock {
            minpoly,
            root_selector: [rational_to_string(&iv.lo), rational_to_string(&iv.hi)],
        };
        let generators = rep
            .gens
            .iter()
            .map(|m| {
                let conv = |x: &AlgebraicNumber| -> Vec<String> {
                    x.coords.iter().map(rational_to_string).collect()
                };
                [conv(&m.a), conv(&m.b), conv(&m.c), conv(&m.d)]
            })
            .collect();
        let relators = if rep.relators.is_empty() {
            None
        } else {
            Some(rep.relators.iter().map(|w| w.0.clone()).collect())
        };
        GroupDocument {
            label,
            field,
            generators,
            labels: Some(rep.labels.clone()),
            relators,
        }
    }
}

/// A homomorphism document: generator images in PSL(2, p^f), each matrix
/// entry a coefficient vector over F_p.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomDocument {
    pub p: u64,
    pub f: usize,
    pub images: Vec<[Vec<u64>; 4]>,
}

impl HomDocument {
    pub fn parse(text: &str) -> Result<HomDocument, String> {
        serde_json::from_str(text).map_err(|e| format!("hom document parse error: {}", e))
    }
}
