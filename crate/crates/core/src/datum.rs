//! Piecewise-constant initial data on boxes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fields::{GridField, GridSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DatumError {
    #[error("datum pieces {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("datum piece {0} is empty or inverted")]
    EmptyPiece(usize),
    #[error("datum pieces have inconsistent dimensions")]
    DimensionMismatch,
    #[error("datum has no pieces")]
    NoPieces,
}

/// `value` on the open box `Π ]lo_i, hi_i[`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatumPiece {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub value: f64,
}

impl DatumPiece {
    pub fn interval(a: f64, b: f64, value: f64) -> Self {
        Self {
            lo: vec![a],
            hi: vec![b],
            value,
        }
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    fn contains(&self, x: &[f64]) -> bool {
        self.lo.iter().zip(&self.hi).zip(x).all(|((a, b), v)| v > a && v < b)
    }

    fn overlaps(&self, other: &DatumPiece) -> bool {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(other.lo.iter().zip(&other.hi))
            .all(|((a0, b0), (a1, b1))| a0 < b1 && a1 < b0)
    }
}

/// A compactly supported piecewise-constant function on `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Datum {
    pieces: Vec<DatumPiece>,
}

impl Datum {
    pub fn new(pieces: Vec<DatumPiece>) -> Result<Self, DatumError> {
        let d = pieces.first().ok_or(DatumError::NoPieces)?.lo.len();
        for (i, p) in pieces.iter().enumerate() {
            if p.lo.len() != d || p.hi.len() != d || d == 0 {
                return Err(DatumError::DimensionMismatch);
            }
            if p.lo.iter().zip(&p.hi).any(|(a, b)| !(a < b)) {
                return Err(DatumError::EmptyPiece(i));
            }
        }
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                if pieces[i].overlaps(&pieces[j]) {
                    return Err(DatumError::Overlap(i, j));
                }
            }
        }
        let mut pieces = pieces;
        pieces.sort_by(|a, b| a.lo[0].total_cmp(&b.lo[0]));
        Ok(Self { pieces })
    }

    /// `2 · 1_{]0,1/2[}`.
    pub fn blowup() -> Self {
        Self::new(vec![DatumPiece::interval(0.0, 0.5, 2.0)]).expect("valid datum")
    }

    pub fn dim(&self) -> usize {
        self.pieces[0].lo.len()
    }

    pub fn pieces(&self) -> &[DatumPiece] {
        &self.pieces
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.pieces
            .iter()
            .find(|p| p.contains(x))
            .map_or(0.0, |p| p.value)
    }

    pub fn mass(&self) -> f64 {
        self.pieces.iter().map(|p| p.value * p.volume()).sum()
    }

    pub fn lq_norm(&self, q: f64) -> f64 {
        if q.is_infinite() {
            return self.pieces.iter().fold(0.0, |m, p| m.max(p.value.abs()));
        }
        self.pieces
            .iter()
            .map(|p| p.value.abs().powf(q) * p.volume())
            .sum::<f64>()
            .powf(1.0 / q)
    }

    /// Bounding box of the nonzero pieces.
    pub fn support_box(&self) -> Option<Vec<(f64, f64)>> {
        let nz: Vec<&DatumPiece> = self.pieces.iter().filter(|p| p.value != 0.0).collect();
        if nz.is_empty() {
            return None;
        }
        Some(
            (0..self.dim())
                .map(|i| {
                    let lo = nz.iter().map(|p| p.lo[i]).fold(f64::INFINITY, f64::min);
                    let hi = nz.iter().map(|p| p.hi[i]).fold(f64::NEG_INFINITY, f64::max);
                    (lo, hi)
                })
                .collect(),
        )
    }

    /// Exact cell averages on a 1D grid.
    pub fn to_grid(&self, spec: GridSpec) -> GridField {
        assert_eq!(self.dim(), 1, "grid projection is one-dimensional");
        let h = spec.h();
        let mut field = GridField::zeros(spec);
        let vals = field.values_mut();
        for p in &self.pieces {
            let (a, b) = (p.lo[0], p.hi[0]);
            for (j, v) in vals.iter_mut().enumerate() {
                let l = spec.left_edge(j);
                let overlap = (b.min(l + h) - a.max(l)).max(0.0);
                *v += p.value * overlap / h;
            }
        }
        field
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlapping_pieces_are_rejected() {
        let r = Datum::new(vec![DatumPiece::interval(0.0, 1.0, 1.0), DatumPiece::interval(0.5, 2.0, 1.0)]);
        assert_eq!(r, Err(DatumError::Overlap(0, 1)));
        // touching is fine
        assert!(Datum::new(vec![DatumPiece::interval(0.0, 1.0, 1.0), DatumPiece::interval(1.0, 2.0, 3.0)]).is_ok());
    }

    #[test]
    fn blowup_datum_norms() {
        let d = Datum::blowup();
        assert_eq!(d.mass(), 1.0);
        assert_eq!(d.lq_norm(f64::INFINITY), 2.0);
        assert_eq!(d.eval(&[0.25]), 2.0);
        assert_eq!(d.eval(&[0.5]), 0.0);
    }

    #[test]
    fn grid_projection_is_exact_on_aligned_cells() {
        let spec = GridSpec::new(-1.0, 1.0, 400).unwrap();
        let g = Datum::blowup().to_grid(spec);
        assert!((g.mass() - 1.0).abs() < 1e-14);
        assert!((g.lq_norm(f64::INFINITY) - 2.0).abs() < 1e-12);
    }
}
