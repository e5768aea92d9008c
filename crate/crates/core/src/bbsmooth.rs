//! Białynicki-Birula cells of products of projective spaces.
//!
//! For a linear action on `P^n` with distinct weights `w_0..w_n`, the fixed
//! points are the coordinate axes and the tangent weights at `e_i` are
//! `w_j - w_i` for `j != i`. On a product, cells multiply.

use crate::error::{Error, Result};
use crate::exactalg::HalfLaurent;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProjectiveAction {
    factors: Vec<Vec<i64>>,
}

impl LinearProjectiveAction {
    pub fn new(factors: Vec<Vec<i64>>) -> Result<Self> {
        for (f, w) in factors.iter().enumerate() {
            if w.is_empty() {
                return Err(Error::EmptyFactor(f));
            }
            for (i, x) in w.iter().enumerate() {
                if w[..i].contains(x) {
                    return Err(Error::RepeatedWeight { factor: f, weight: *x });
                }
            }
        }
        Ok(Self { factors })
    }

    /// Parses `0,1,2;0,1`.
    pub fn parse(text: &str) -> Result<Self> {
        let factors = text
            .split(';')
            .map(|f| {
                f.split(',')
                    .map(|w| {
                        w.trim()
                            .parse::<i64>()
                            .map_err(|_| Error::Format(format!("bad weight `{w}`")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    pub fn factors(&self) -> &[Vec<i64>] {
        &self.factors
    }

    pub fn dimension(&self) -> usize {
        self.factors.iter().map(|f| f.len() - 1).sum()
    }

    pub fn negated(&self) -> Self {
        Self {
            factors: self.factors.iter().map(|f| f.iter().map(|w| -w).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    /// Coordinate axis chosen in each factor.
    pub axes: Vec<usize>,
    pub d_plus: usize,
    pub d_minus: usize,
}

impl Cell {
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.axes.iter().map(|i| format!("e{i}")).collect();
        parts.join("x")
    }

    pub fn ind(&self) -> i64 {
        self.d_plus as i64 - self.d_minus as i64
    }
}

/// Fixed points with their attracting and repelling dimensions, in
/// lexicographic order of the axes.
pub fn bb_cells(a: &LinearProjectiveAction) -> Vec<Cell> {
    let mut cells = vec![Cell {
        axes: Vec::new(),
        d_plus: 0,
        d_minus: 0,
    }];
    for w in a.factors() {
        let mut next = Vec::with_capacity(cells.len() * w.len());
        for cell in &cells {
            for (i, wi) in w.iter().enumerate() {
                let up = w.iter().filter(|wj| *wj > wi).count();
                let mut axes = cell.axes.clone();
                axes.push(i);
                next.push(Cell {
                    axes,
                    d_plus: cell.d_plus + up,
                    d_minus: cell.d_minus + (w.len() - 1 - up),
                });
            }
        }
        cells = next;
    }
    cells
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellIdentity {
    /// Sum over cells of `L^{d_plus}`.
    pub lhs: HalfLaurent,
    /// `L^{dim/2}` times the sum over fixed points of `L^{Ind/2}`.
    pub rhs: HalfLaurent,
    pub equal: bool,
}

/// `[P^n] = 1 + L + ... + L^n`, multiplied over the factors.
pub fn known_class(a: &LinearProjectiveAction) -> HalfLaurent {
    a.factors().iter().fold(HalfLaurent::one(), |acc, f| {
        let pn = HalfLaurent::from_terms((0..f.len() as i64).map(|k| (2 * k, 1)));
        &acc * &pn
    })
}

pub fn verify_cell_identity(a: &LinearProjectiveAction) -> CellIdentity {
    let cells = bb_cells(a);
    let lhs = HalfLaurent::from_terms(cells.iter().map(|c| (2 * c.d_plus as i64, 1)));
    let dim = a.dimension() as i64;
    let rhs = HalfLaurent::from_terms(cells.iter().map(|c| (c.ind(), 1))).shift(dim);
    let known = known_class(a);
    let equal = lhs == known && rhs == known;
    CellIdentity { lhs, rhs, equal }
}

/// Negating the weights swaps attracting and repelling dimensions at every
/// fixed point and keeps the class identity.
pub fn verify_duality(a: &LinearProjectiveAction) -> bool {
    let neg = a.negated();
    let (up, down) = (bb_cells(a), bb_cells(&neg));
    let swapped = up
        .iter()
        .zip(&down)
        .all(|(c, d)| c.axes == d.axes && c.d_plus == d.d_minus && c.d_minus == d.d_plus);
    swapped && verify_cell_identity(a).equal && verify_cell_identity(&neg).equal
}
