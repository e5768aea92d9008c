//! Torus weights of the tangent-obstruction complex at a molten crystal.
//!
//! The complex of a framed representation `V` with potential is
//!
//! ```text
//! End(V) -> (+)_a Hom(V_s(a), V_t(a)) (+) V_f -> (+)_a Hom(V_t(a), V_s(a)) (+) V_f^* -> End(V)^*
//! ```
//!
//! in degrees 0..3. At a fixed point the atom `p` spans a line of weight
//! `w(p)`, and the matrix entry of arrow `a` from atom `u` to atom `v` has
//! weight `w(a) + w(u) - w(v)`. Degrees 2 and 3 are the negated duals of
//! degrees 1 and 0.
//!
//! The index counts contracting directions with sign: the positive weights of
//! the tangent half `deg1 - deg0` minus its negative weights.

use std::collections::HashMap;

use crate::crystal::{build_atom_poset, enumerate_crystals, AtomPoset, MoltenCrystal};
use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::quiverdsl::{elementary_cycles, validate_slope, QuiverWithPotential, Slope};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexReport {
    /// Sorted weight multisets in degrees 0..3.
    pub deg_weights: [Vec<i64>; 4],
    /// Net positive weights of the tangent half.
    pub d_plus: i64,
    /// Net multiplicity of weight 0 across the whole complex.
    pub d_zero: i64,
    /// Net negative weights of the tangent half.
    pub d_minus: i64,
    pub ind: i64,
    /// Net weight-0 multiplicity of the tangent half; nonzero when the chart
    /// has invariant directions (for instance from the relations).
    pub tangent_zero: i64,
    /// Tangent-half terms with slope weight 0 but nonzero torus weight: the
    /// slope sits on a hyperplane where these directions stop moving.
    pub unresolved: i64,
}

impl IndexReport {
    /// `net(w) = m1(w) + m3(w) - m0(w) - m2(w)`.
    pub fn net(&self) -> Vec<(i64, i64)> {
        let mut net: HashMap<i64, i64> = HashMap::new();
        for (k, sign) in [(0, -1), (1, 1), (2, -1), (3, 1)] {
            for &w in &self.deg_weights[k] {
                *net.entry(w).or_insert(0) += sign;
            }
        }
        let mut v: Vec<(i64, i64)> = net.into_iter().filter(|(_, m)| *m != 0).collect();
        v.sort_unstable();
        v
    }
}

/// One tangent-half term: slope weight, degree sign and torus character.
struct Term {
    slope_weight: i64,
    sign: i64,
    atoms: (usize, usize),
    arrow: Option<usize>,
}

fn tangent_terms(p: &AtomPoset, c: &MoltenCrystal, s: &Slope, mut f: impl FnMut(Term)) {
    let q = p.quiver();
    let sw: Vec<i64> = c.atoms().iter().map(|&i| s.pair(&p.atom(i).counts)).collect();
    let vertex: Vec<usize> = c.atoms().iter().map(|&i| p.atom(i).vertex).collect();
    let n = c.size();
    for (alpha, arrow) in q.arrows().iter().enumerate() {
        let wa = s.weights()[alpha];
        for u in 0..n {
            if vertex[u] != arrow.source {
                continue;
            }
            for v in 0..n {
                if vertex[v] == arrow.target {
                    f(Term {
                        slope_weight: wa + sw[u] - sw[v],
                        sign: 1,
                        atoms: (u, v),
                        arrow: Some(alpha),
                    });
                }
            }
        }
    }
    for &fv in q.framing() {
        for v in 0..n {
            if vertex[v] == fv {
                f(Term {
                    slope_weight: -sw[v],
                    sign: 1,
                    atoms: (usize::MAX, v),
                    arrow: None,
                });
            }
        }
    }
    for u in 0..n {
        for v in 0..n {
            if vertex[u] == vertex[v] {
                f(Term {
                    slope_weight: sw[u] - sw[v],
                    sign: -1,
                    atoms: (u, v),
                    arrow: None,
                });
            }
        }
    }
}

/// Torus character of a tangent-half term, over the slope-lattice basis.
fn character(p: &AtomPoset, c: &MoltenCrystal, t: &Term) -> Vec<i64> {
    let r = p.basis().len();
    let weight = |local: usize| -> Vec<i64> {
        if local == usize::MAX {
            vec![0; r]
        } else {
            p.atom(c.atoms()[local]).weight.clone()
        }
    };
    let (wu, wv) = (weight(t.atoms.0), weight(t.atoms.1));
    (0..r)
        .map(|i| {
            let wa = t.arrow.map_or(0, |a| p.basis()[i].weights()[a]);
            wa + wu[i] - wv[i]
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct QuickIndex {
    pub ind: i64,
    pub unresolved: i64,
}

pub(crate) fn quick_index(p: &AtomPoset, c: &MoltenCrystal, s: &Slope) -> QuickIndex {
    let mut ind = 0;
    let mut zero_chars: HashMap<Vec<i64>, i64> = HashMap::new();
    let mut pending = Vec::new();
    tangent_terms(p, c, s, |t| match t.slope_weight.signum() {
        1 => ind += t.sign,
        -1 => ind -= t.sign,
        _ => pending.push(t),
    });
    for t in pending {
        *zero_chars.entry(character(p, c, &t)).or_insert(0) += t.sign;
    }
    let unresolved = zero_chars
        .into_iter()
        .filter(|(ch, _)| ch.iter().any(|x| *x != 0))
        .map(|(_, m)| m.abs())
        .sum();
    QuickIndex { ind, unresolved }
}

/// Weight multisets and index of the complex at `c` for slope `s`.
pub fn tangent_complex_weights(p: &AtomPoset, c: &MoltenCrystal, s: &Slope) -> Result<IndexReport> {
    if s.len() != p.quiver().arrows().len() {
        return Err(Error::SlopeArity {
            expected: p.quiver().arrows().len(),
            got: s.len(),
        });
    }
    let mut deg0 = Vec::new();
    let mut deg1 = Vec::new();
    tangent_terms(p, c, s, |t| {
        if t.sign > 0 {
            deg1.push(t.slope_weight)
        } else {
            deg0.push(t.slope_weight)
        }
    });
    deg0.sort_unstable();
    deg1.sort_unstable();
    let negate = |v: &[i64]| {
        let mut n: Vec<i64> = v.iter().map(|w| -w).collect();
        n.sort_unstable();
        n
    };
    let deg2 = negate(&deg1);
    let deg3 = negate(&deg0);

    let mut half: HashMap<i64, i64> = HashMap::new();
    for &w in &deg1 {
        *half.entry(w).or_insert(0) += 1;
    }
    for &w in &deg0 {
        *half.entry(w).or_insert(0) -= 1;
    }
    let d_plus: i64 = half.iter().filter(|(w, _)| **w > 0).map(|(_, m)| m).sum();
    let d_minus: i64 = half.iter().filter(|(w, _)| **w < 0).map(|(_, m)| m).sum();
    let tangent_zero = half.get(&0).copied().unwrap_or(0);
    let quick = quick_index(p, c, s);
    let mut report = IndexReport {
        deg_weights: [deg0, deg1, deg2, deg3],
        d_plus,
        d_zero: 0,
        d_minus,
        ind: d_plus - d_minus,
        tangent_zero,
        unresolved: quick.unresolved,
    };
    report.d_zero = report.net().iter().find(|(w, _)| *w == 0).map_or(0, |(_, m)| *m);
    debug_assert_eq!(report.ind, quick.ind);
    if report.d_zero != 0 {
        return Err(Error::NotIsolated(report.d_zero));
    }
    Ok(report)
}

/// First elementary cycle of length at most `max_len` with weight 0.
pub fn zero_cycle(q: &QuiverWithPotential, s: &Slope, max_len: usize) -> Option<String> {
    elementary_cycles(q, max_len)
        .into_iter()
        .find(|c| c.weight_of(s) == 0)
        .map(|c| c.to_string())
}

/// True iff the slope is valid, no elementary cycle of length up to
/// `2 * max_size` has weight 0, and every fixed point up to `max_size` has no
/// net invariant weight.
pub fn is_generic(q: &QuiverWithPotential, s: &Slope, max_size: usize) -> Result<bool> {
    if s.is_zero() || !matches!(validate_slope(q, s), Ok(v) if v.is_empty()) {
        return Ok(false);
    }
    if zero_cycle(q, s, 2 * max_size).is_some() {
        return Ok(false);
    }
    let p = build_atom_poset(q, max_size)?;
    for c in enumerate_crystals(&p, max_size, Strategy::Sequential)? {
        match tangent_complex_weights(&p, &c, s) {
            Ok(_) => {}
            Err(Error::NotIsolated(_)) => return Ok(false),
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

/// True iff additionally no fixed point up to `max_size` has unresolved
/// tangent directions, so every per-point index is locally constant in `s`.
pub fn is_strictly_generic(q: &QuiverWithPotential, s: &Slope, max_size: usize) -> Result<bool> {
    if !is_generic(q, s, max_size)? {
        return Ok(false);
    }
    let p = build_atom_poset(q, max_size)?;
    Ok(enumerate_crystals(&p, max_size, Strategy::Sequential)?
        .iter()
        .all(|c| quick_index(&p, c, s).unresolved == 0))
}
