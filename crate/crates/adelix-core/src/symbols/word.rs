use crate::error::{AdelixError, Result};
use crate::exactrings::{parse_element, print_element, Element, Ring};

/// A formal product of Milnor pairs {a,b} with integer exponents. No
/// canonicalization is ever applied; words are compared only through
/// evaluation maps.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolWord {
    pub ring: Ring,
    pub pairs: Vec<(Element, Element, i64)>,
}

impl SymbolWord {
    pub fn new(ring: Ring) -> SymbolWord {
        SymbolWord {
            ring,
            pairs: Vec::new(),
        }
    }

    pub fn single(a: Element, b: Element) -> Result<SymbolWord> {
        let mut w = SymbolWord::new(a.ring.clone());
        w.push(a, b, 1)?;
        Ok(w)
    }

    /// Append {a,b}^e; both entries must be declared units of the fraction
    /// field modeled by the descriptor.
    pub fn push(&mut self, a: Element, b: Element, exponent: i64) -> Result<()> {
        if a.ring != self.ring || b.ring != self.ring {
            return Err(AdelixError::DescriptorMismatch(format!(
                "pair ring {} / {} vs word ring {}",
                a.ring, b.ring, self.ring
            )));
        }
        for e in [&a, &b] {
            if e.is_zero() {
                return Err(AdelixError::NotAUnit(
                    "symbol entry is zero at working precision".into(),
                ));
            }
            // entries must have a determinable valuation (leading data present)
            e.valuation()?;
        }
        if exponent != 0 {
            self.pairs.push((a, b, exponent));
        }
        Ok(())
    }

    /// Concatenation (the group law of formal words).
    pub fn concat(&self, other: &SymbolWord) -> Result<SymbolWord> {
        if self.ring != other.ring {
            return Err(AdelixError::DescriptorMismatch(format!(
                "{} vs {}",
                self.ring, other.ring
            )));
        }
        let mut out = self.clone();
        out.pairs.extend(other.pairs.iter().cloned());
        Ok(out)
    }

    pub fn inverse(&self) -> SymbolWord {
        SymbolWord {
            ring: self.ring.clone(),
            pairs: self
                .pairs
                .iter()
                .map(|(a, b, e)| (a.clone(), b.clone(), -e))
                .collect(),
        }
    }

    /// Text format: one "[expt] (a) , (b)" line per pair.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (a, b, e) in &self.pairs {
            out.push_str(&format!(
                "[{e}] ({}) , ({})\n",
                print_element(a),
                print_element(b)
            ));
        }
        out
    }

    pub fn from_text(ring: &Ring, input: &str) -> Result<SymbolWord> {
        let mut w = SymbolWord::new(ring.clone());
        for line in input.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let close = line
                .find(']')
                .ok_or_else(|| AdelixError::Parse(format!("missing ']' in '{line}'")))?;
            let expt: i64 = line[1..close]
                .trim()
                .parse()
                .map_err(|_| AdelixError::Parse(format!("bad exponent in '{line}'")))?;
            let rest = &line[close + 1..];
            // split at the top-level comma
            let mut depth = 0i32;
            let mut split = None;
            for (i, c) in rest.char_indices() {
                match c {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    ',' if depth == 0 => {
                        split = Some(i);
                        break;
                    }
                    _ => {}
                }
            }
            let split =
                split.ok_or_else(|| AdelixError::Parse(format!("missing ',' in '{line}'")))?;
            let a = parse_element(ring, rest[..split].trim())?;
            let b = parse_element(ring, rest[split + 1..].trim())?;
            w.push(a, b, expt)?;
        }
        Ok(w)
    }
}

/// The two local shapes a codimension-one branch can take on the surface.
#[derive(Debug, Clone, PartialEq)]
pub enum BranchKind {
    /// Horizontal branch: coefficient field an unramified p-adic extension,
    /// uniformizer t - (lifted root) of the curve equation.
    Horizontal {
        coeff: Ring,
        /// Lifted root of the curve polynomial in the coefficient ring.
        root: Element,
    },
    /// Vertical branch: W(k(eta2)){{t}} with the fiber's local parameter.
    Vertical { coeff: Ring },
}

/// One analytic branch at a point of the surface, carrying the data needed to
/// evaluate local symbols there.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchField {
    pub kind: BranchKind,
    /// Residue descriptor: Q_q for a horizontal branch, F_q((tbar)) modeled by
    /// its coefficient data for a vertical one.
    pub residue: Ring,
}
