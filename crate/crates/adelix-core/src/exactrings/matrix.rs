use std::sync::OnceLock;

use crate::error::{AdelixError, Result};

use super::descriptor::Ring;
use super::element::Element;
use super::linalg::det_field;

/// Matrix over one ring of the tower; all entries share the descriptor.
/// Square matrices cache their determinant once computed.
#[derive(Debug)]
pub struct RingMatrix {
    pub ring: Ring,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Element>,
    det_cache: OnceLock<Element>,
}

impl Clone for RingMatrix {
    fn clone(&self) -> Self {
        RingMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.clone(),
            det_cache: self.det_cache.clone(),
        }
    }
}

impl PartialEq for RingMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.rows == other.rows
            && self.cols == other.cols
            && self.entries == other.entries
    }
}

impl RingMatrix {
    pub fn new(ring: Ring, rows: usize, cols: usize, entries: Vec<Element>) -> Result<RingMatrix> {
        if entries.len() != rows * cols {
            return Err(AdelixError::DescriptorMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        for e in &entries {
            if e.ring != ring {
                return Err(AdelixError::DescriptorMismatch(format!(
                    "entry ring {} does not match matrix ring {}",
                    e.ring, ring
                )));
            }
        }
        Ok(RingMatrix {
            ring,
            rows,
            cols,
            entries,
            det_cache: OnceLock::new(),
        })
    }

    pub fn identity(ring: &Ring, n: usize) -> RingMatrix {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(if i == j {
                    Element::one(ring)
                } else {
                    Element::zero(ring)
                });
            }
        }
        RingMatrix::new(ring.clone(), n, n, entries).unwrap()
    }

    pub fn zero(ring: &Ring, rows: usize, cols: usize) -> RingMatrix {
        RingMatrix::new(
            ring.clone(),
            rows,
            cols,
            vec![Element::zero(ring); rows * cols],
        )
        .unwrap()
    }

    pub fn diagonal(ring: &Ring, diag: Vec<Element>) -> Result<RingMatrix> {
        let n = diag.len();
        let mut m = RingMatrix::zero(ring, n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d)?;
        }
        Ok(m)
    }

    pub fn at(&self, i: usize, j: usize) -> &Element {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Element) -> Result<()> {
        if e.ring != self.ring {
            return Err(AdelixError::DescriptorMismatch(format!(
                "entry ring {} does not match matrix ring {}",
                e.ring, self.ring
            )));
        }
        self.entries[i * self.cols + j] = e;
        self.det_cache = OnceLock::new();
        Ok(())
    }

    pub fn row(&self, i: usize) -> Vec<Element> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Element> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<Element>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> RingMatrix {
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.at(i, j).clone());
            }
        }
        RingMatrix::new(self.ring.clone(), self.cols, self.rows, entries).unwrap()
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if self.cols != other.rows || self.ring != other.ring {
            return Err(AdelixError::DescriptorMismatch(
                "matrix product shape/ring mismatch".into(),
            ));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Element::zero(&self.ring);
                for k in 0..self.cols {
                    let t = self.at(i, k).mul(other.at(k, j))?;
                    acc = acc.add(&t)?;
                }
                entries.push(acc);
            }
        }
        RingMatrix::new(self.ring.clone(), self.rows, other.cols, entries)
    }

    pub fn add(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if self.rows != other.rows || self.cols != other.cols || self.ring != other.ring {
            return Err(AdelixError::DescriptorMismatch(
                "matrix sum shape/ring mismatch".into(),
            ));
        }
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            entries.push(a.add(b)?);
        }
        RingMatrix::new(self.ring.clone(), self.rows, self.cols, entries)
    }

    /// Row-vector times matrix (lattice vectors act on the left).
    pub fn apply_row(&self, v: &[Element]) -> Result<Vec<Element>> {
        if v.len() != self.rows {
            return Err(AdelixError::DescriptorMismatch(
                "row vector length mismatch".into(),
            ));
        }
        let mut out = Vec::with_capacity(self.cols);
        for j in 0..self.cols {
            let mut acc = Element::zero(&self.ring);
            for (i, vi) in v.iter().enumerate() {
                let t = vi.mul(self.at(i, j))?;
                acc = acc.add(&t)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn map<F>(&self, f: F) -> Result<RingMatrix>
    where
        F: Fn(&Element) -> Result<Element>,
    {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(f(e)?);
        }
        let ring = entries
            .first()
            .map(|e| e.ring.clone())
            .unwrap_or_else(|| self.ring.clone());
        RingMatrix::new(ring, self.rows, self.cols, entries)
    }

    pub fn embed(&self, target: &Ring) -> Result<RingMatrix> {
        self.map(|e| e.embed(target))
    }

    /// Exact determinant; cached. Field-like rings use elimination, other
    /// commutative rings cofactor expansion (fine at the ranks that occur).
    pub fn det(&self) -> Result<Element> {
        if self.rows != self.cols {
            return Err(AdelixError::DescriptorMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        if let Some(d) = self.det_cache.get() {
            return Ok(d.clone());
        }
        let d = if self.ring.is_field_like() {
            det_field(&self.rows_vec(), &self.ring)?
        } else {
            self.det_cofactor()?
        };
        let _ = self.det_cache.set(d.clone());
        Ok(d)
    }

    fn det_cofactor(&self) -> Result<Element> {
        let n = self.rows;
        if n > 8 {
            return Err(AdelixError::Unsupported(
                "cofactor determinant beyond rank 8".into(),
            ));
        }
        if n == 0 {
            return Ok(Element::one(&self.ring));
        }
        if n == 1 {
            return Ok(self.at(0, 0).clone());
        }
        let mut acc = Element::zero(&self.ring);
        for j in 0..n {
            if self.at(0, j).is_zero() {
                continue;
            }
            let minor = self.minor(0, j)?;
            let mut term = self.at(0, j).mul(&minor.det_cofactor()?)?;
            if j % 2 == 1 {
                term = term.neg();
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    fn minor(&self, row: usize, col: usize) -> Result<RingMatrix> {
        let mut entries = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            for j in 0..self.cols {
                if j == col {
                    continue;
                }
                entries.push(self.at(i, j).clone());
            }
        }
        RingMatrix::new(self.ring.clone(), self.rows - 1, self.cols - 1, entries)
    }

    /// Inverse. Over field-like rings Gauss-Jordan with valuation pivoting;
    /// over other commutative rings adjugate/det, requiring a unit determinant.
    pub fn inverse(&self) -> Result<RingMatrix> {
        if self.rows != self.cols {
            return Err(AdelixError::NotInvertible("non-square".into()));
        }
        let n = self.rows;
        if self.ring.is_field_like() {
            let mut work: Vec<Vec<Element>> = Vec::with_capacity(n);
            for i in 0..n {
                let mut row = self.row(i);
                for j in 0..n {
                    row.push(if i == j {
                        Element::one(&self.ring)
                    } else {
                        Element::zero(&self.ring)
                    });
                }
                work.push(row);
            }
            let frame = super::linalg::echelon_frame(&work, &self.ring)?;
            if frame.pivots.len() != n || frame.pivots.iter().enumerate().any(|(k, &p)| k != p) {
                return Err(AdelixError::NotInvertible(
                    "matrix is singular at working precision".into(),
                ));
            }
            let mut entries = Vec::with_capacity(n * n);
            for row in &frame.rows {
                entries.extend(row[n..].iter().cloned());
            }
            return RingMatrix::new(self.ring.clone(), n, n, entries);
        }
        let d = self.det()?;
        let dinv = d
            .inv()
            .map_err(|_| AdelixError::NotInvertible(format!("determinant is not a unit")))?;
        // adjugate
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let m = self.minor(j, i)?;
                let mut c = m.det_cofactor()?.mul(&dinv)?;
                if (i + j) % 2 == 1 {
                    c = c.neg();
                }
                entries.push(c);
            }
        }
        RingMatrix::new(self.ring.clone(), n, n, entries)
    }
}
