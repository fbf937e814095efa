//! The relations harness: verifies on supplied samples that the evaluation
//! maps are bimultiplicative, antisymmetric, and kill Steinberg pairs.
//! Failures are reported, never raised.

use serde::Serialize;

use crate::error::Result;
use crate::exactrings::{Element, Ring};

use super::kato::kato_res;
use super::tame::tame_symbol;
use super::word::SymbolWord;

#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub evaluator: String,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }
}

fn eval(word: &SymbolWord, kato_prec: Option<u32>) -> Result<Element> {
    match kato_prec {
        None => tame_symbol(word),
        Some(n) => kato_res(word, n),
    }
}

/// Run the relation battery on sample unit pairs. `kato_prec = None` checks the
/// tame symbol; `Some(n)` checks Kato's residue mod p^n.
pub fn symbol_relations_check(
    ring: &Ring,
    samples: &[(Element, Element, Element)],
    kato_prec: Option<u32>,
) -> RelationReport {
    let mut checks = Vec::new();
    let one = |x: &Element| x.is_one() || x.is_one_to_precision();

    // bimultiplicativity: {ab, c} = {a,c}{b,c}
    let mut pass = 0;
    let mut fail = 0;
    let mut detail = None;
    for (a, b, c) in samples {
        let run = || -> Result<bool> {
            let ab = a.mul(b)?;
            let lhs = eval(&SymbolWord::single(ab, c.clone())?, kato_prec)?;
            let r1 = eval(&SymbolWord::single(a.clone(), c.clone())?, kato_prec)?;
            let r2 = eval(&SymbolWord::single(b.clone(), c.clone())?, kato_prec)?;
            Ok(lhs.agrees_with(&r1.mul(&r2)?))
        };
        match run() {
            Ok(true) => pass += 1,
            Ok(false) => {
                fail += 1;
                if detail.is_none() {
                    detail = Some("product law violated".to_string());
                }
            }
            Err(e) => {
                fail += 1;
                if detail.is_none() {
                    detail = Some(format!("evaluation error: {e}"));
                }
            }
        }
    }
    checks.push(RelationCheck {
        name: "bimultiplicative".into(),
        passed: pass,
        failed: fail,
        detail,
    });

    // antisymmetry: {a,b}{b,a} = 1
    let mut pass = 0;
    let mut fail = 0;
    let mut detail = None;
    for (a, b, _) in samples {
        let run = || -> Result<bool> {
            let mut w = SymbolWord::new(ring.clone());
            w.push(a.clone(), b.clone(), 1)?;
            w.push(b.clone(), a.clone(), 1)?;
            Ok(one(&eval(&w, kato_prec)?))
        };
        match run() {
            Ok(true) => pass += 1,
            Ok(false) => {
                fail += 1;
                if detail.is_none() {
                    detail = Some("antisymmetry violated".into());
                }
            }
            Err(e) => {
                fail += 1;
                if detail.is_none() {
                    detail = Some(format!("evaluation error: {e}"));
                }
            }
        }
    }
    checks.push(RelationCheck {
        name: "antisymmetric".into(),
        passed: pass,
        failed: fail,
        detail,
    });

    // Steinberg: {a, 1-a} = 1 (when 1-a is a unit) and {a, -a} = 1
    let mut pass = 0;
    let mut fail = 0;
    let mut detail = None;
    for (a, _, _) in samples {
        let run = || -> Result<Option<bool>> {
            let onee = Element::one(ring);
            let oma = onee.sub(a)?;
            if oma.is_zero() || oma.valuation().is_err() {
                return Ok(None);
            }
            let s1 = one(&eval(&SymbolWord::single(a.clone(), oma)?, kato_prec)?);
            let s2 = one(&eval(
                &SymbolWord::single(a.clone(), a.neg())?,
                kato_prec,
            )?);
            Ok(Some(s1 && s2))
        };
        match run() {
            Ok(Some(true)) => pass += 1,
            Ok(Some(false)) => {
                fail += 1;
                if detail.is_none() {
                    detail = Some("steinberg relation violated".into());
                }
            }
            Ok(None) => {}
            Err(e) => {
                fail += 1;
                if detail.is_none() {
                    detail = Some(format!("evaluation error: {e}"));
                }
            }
        }
    }
    checks.push(RelationCheck {
        name: "steinberg".into(),
        passed: pass,
        failed: fail,
        detail,
    });

    RelationReport {
        evaluator: match kato_prec {
            None => "tame_symbol".into(),
            Some(n) => format!("kato_res mod p^{n}"),
        },
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactrings::parse_ring;
    use crate::symbols::sampler::{sample_unit, Sampler};

    #[test]
    fn tame_relations_f7() {
        let ring = parse_ring("F7((t))[-12..12]").unwrap();
        let mut rng = Sampler::new(41);
        let samples: Vec<_> = (0..40)
            .map(|_| {
                (
                    sample_unit(&ring, &mut rng).unwrap(),
                    sample_unit(&ring, &mut rng).unwrap(),
                    sample_unit(&ring, &mut rng).unwrap(),
                )
            })
            .collect();
        let rep = symbol_relations_check(&ring, &samples, None);
        assert!(rep.all_pass(), "{rep:?}");
    }

    #[test]
    fn kato_relations_q5() {
        let ring = parse_ring("Q5(6){{t}}[-12..14]").unwrap();
        let mut rng = Sampler::new(99);
        let samples: Vec<_> = (0..25)
            .map(|_| {
                (
                    sample_unit(&ring, &mut rng).unwrap(),
                    sample_unit(&ring, &mut rng).unwrap(),
                    sample_unit(&ring, &mut rng).unwrap(),
                )
            })
            .collect();
        let rep = symbol_relations_check(&ring, &samples, Some(3));
        assert!(rep.all_pass(), "{rep:?}");
    }
}
