use std::fmt::Write;

use dtloc::bbsmooth::{bb_cells, verify_cell_identity, verify_duality, LinearProjectiveAction};
use dtloc::crystal::{build_atom_poset, enumerate_by_size, relations, Relation};
use dtloc::localize::{localization_series, wall_report, LocalizationSeries};
use dtloc::quiverdsl::{require_valid_slope, slope_lattice_basis};
use dtloc::tangent::{tangent_complex_weights, zero_cycle};
use dtloc::{Error, Slope, Strategy};
use serde_json::{json, Value};

use crate::render::{big, ints, json_text, series_json, series_table};
use crate::{Failure, Model};

const CAVEAT: &str = "# caveat: this is the class of the attracting locus of the slope; \
the slope is not circle-compact, so the complement term is missing";

pub fn validate(m: &Model, slope: Option<&Slope>, depth: usize) -> Result<String, Failure> {
    let q = &m.quiver;
    let mut out = String::new();
    writeln!(out, "model {}", m.name).unwrap();
    writeln!(
        out,
        "vertices {}  arrows {}  potential terms {}",
        q.vertices().len(),
        q.arrows().len(),
        q.potential().len()
    )
    .unwrap();
    let basis = slope_lattice_basis(q);
    writeln!(out, "slope lattice rank {}", basis.len()).unwrap();
    for b in &basis {
        writeln!(out, "  {b}").unwrap();
    }
    let rels = relations(q)?;
    let binomial = rels.iter().filter(|r| matches!(r, Relation::Binomial { .. })).count();
    writeln!(
        out,
        "relations {} binomial, {} monomial",
        binomial,
        rels.len() - binomial
    )
    .unwrap();
    let p = build_atom_poset(q, depth)?;
    let layers: Vec<String> = p.depth_counts().iter().map(|c| c.to_string()).collect();
    writeln!(
        out,
        "confluent up to depth {depth}; atoms per depth {}",
        layers.join(" ")
    )
    .unwrap();
    if let Some(s) = slope {
        require_valid_slope(q, s)?;
        writeln!(out, "slope {s} valid").unwrap();
    }
    for w in q.warnings() {
        writeln!(out, "warning: {w}").unwrap();
    }
    writeln!(out, "canonical form:").unwrap();
    out.push_str(&q.to_text());
    Ok(out)
}

pub fn fixedpoints(m: &Model, max_boxes: usize, json: bool, strategy: Strategy) -> Result<String, Failure> {
    let p = build_atom_poset(&m.quiver, max_boxes)?;
    let bins = enumerate_by_size(&p, max_boxes, strategy)?;
    if json {
        let crystals: Vec<Value> = bins
            .iter()
            .map(|bin| {
                Value::Array(
                    bin.iter()
                        .map(|c| Value::Array(c.atoms().iter().map(|&a| Value::from(p.atom_label(a))).collect()))
                        .collect(),
                )
            })
            .collect();
        let v = json!({
            "model": m.name,
            "max_boxes": max_boxes,
            "counts": bins.iter().map(|b| b.len()).collect::<Vec<_>>(),
            "crystals": crystals,
        });
        return Ok(json_text(&v));
    }
    let mut out = String::new();
    writeln!(out, "size  count").unwrap();
    for (n, bin) in bins.iter().enumerate() {
        writeln!(out, "{n:<5} {}", bin.len()).unwrap();
    }
    writeln!(out, "total {}", bins.iter().map(|b| b.len()).sum::<usize>()).unwrap();
    Ok(out)
}

fn reject_walls(m: &Model, s: &Slope, size: usize) -> Result<(), Failure> {
    require_valid_slope(&m.quiver, s)?;
    if s.is_zero() {
        return Err(Error::WallSlope {
            cycle: "(every cycle)".into(),
        }
        .into());
    }
    if let Some(cycle) = zero_cycle(&m.quiver, s, 2 * size) {
        return Err(Error::WallSlope { cycle }.into());
    }
    Ok(())
}

pub fn index(m: &Model, s: &Slope, max_boxes: usize, json: bool, strategy: Strategy) -> Result<String, Failure> {
    reject_walls(m, s, max_boxes)?;
    let p = build_atom_poset(&m.quiver, max_boxes)?;
    let bins = enumerate_by_size(&p, max_boxes, strategy)?;
    let mut rows = Vec::new();
    for (n, bin) in bins.iter().enumerate() {
        let reports = strategy.try_map(bin, |c| tangent_complex_weights(&p, c, s))?;
        for (id, (c, r)) in bin.iter().zip(reports).enumerate() {
            rows.push((n, id, c, r));
        }
    }
    if json {
        let points: Vec<Value> = rows
            .iter()
            .map(|(n, id, c, r)| {
                json!({
                    "size": n,
                    "id": id,
                    "atoms": c.atoms().iter().map(|&a| p.atom_label(a)).collect::<Vec<_>>(),
                    "ind": r.ind,
                    "d_plus": r.d_plus,
                    "d_minus": r.d_minus,
                    "d_zero": r.d_zero,
                    "unresolved": r.unresolved,
                    "weights": {
                        "deg0": ints(&r.deg_weights[0]),
                        "deg1": ints(&r.deg_weights[1]),
                        "deg2": ints(&r.deg_weights[2]),
                        "deg3": ints(&r.deg_weights[3]),
                    },
                })
            })
            .collect();
        let v = json!({
            "model": m.name,
            "slope": ints(s.weights()),
            "max_boxes": max_boxes,
            "points": points,
        });
        return Ok(json_text(&v));
    }
    let mut out = String::new();
    writeln!(out, "size  id    ind   d+    d-").unwrap();
    for (n, id, _, r) in &rows {
        let flag = if r.unresolved != 0 { "  *" } else { "" };
        writeln!(out, "{n:<5} {id:<5} {:<5} {:<5} {}{flag}", r.ind, r.d_plus, r.d_minus).unwrap();
    }
    if rows.iter().any(|(.., r)| r.unresolved != 0) {
        writeln!(
            out,
            "# * some tangent directions have slope weight 0 here; the index can jump under perturbation"
        )
        .unwrap();
    }
    Ok(out)
}

fn series_block(m: &Model, ls: &LocalizationSeries, qneg: bool) -> String {
    let series = if qneg { ls.series.negate_q() } else { ls.series.clone() };
    let mut out = String::new();
    writeln!(out, "model {}  slope {}  order {}", m.name, ls.slope, ls.order).unwrap();
    if ls.effective_slope != ls.slope {
        writeln!(
            out,
            "# indices taken at {} in the same chamber; some tangent weights vanish at {}",
            ls.effective_slope, ls.slope
        )
        .unwrap();
    }
    if qneg {
        writeln!(out, "# q -> -q").unwrap();
    }
    out.push_str(&series_table(&series));
    if !ls.circle_compact {
        writeln!(out, "{CAVEAT}").unwrap();
    }
    out
}

fn series_value(m: &Model, ls: &LocalizationSeries, qneg: bool) -> Value {
    let series = if qneg { ls.series.negate_q() } else { ls.series.clone() };
    json!({
        "model": m.name,
        "slope": ints(ls.slope.weights()),
        "order": ls.order,
        "coefficients": series_json(&series),
        "effective_slope": ints(ls.effective_slope.weights()),
        "sign_convention": if qneg { "qneg" } else { "plain" },
        "circle_compact": ls.circle_compact,
    })
}

pub fn series(
    m: &Model,
    s: &Slope,
    order: usize,
    qneg: bool,
    json: bool,
    strategy: Strategy,
) -> Result<String, Failure> {
    let ls = localization_series(&m.quiver, s, order, strategy)?;
    if json {
        return Ok(json_text(&series_value(m, &ls, qneg)));
    }
    Ok(series_block(m, &ls, qneg))
}

pub fn walls(m: &Model, s: &Slope, max_cycle_len: usize, json: bool) -> Result<String, Failure> {
    require_valid_slope(&m.quiver, s)?;
    let r = wall_report(&m.quiver, s, max_cycle_len);
    if json {
        let cycles: Vec<Value> = r
            .cycles
            .iter()
            .map(|(c, w)| json!({"cycle": c.to_string(), "weight": w}))
            .collect();
        let v = json!({
            "model": m.name,
            "slope": ints(s.weights()),
            "max_cycle_len": max_cycle_len,
            "cycles": cycles,
            "walls_hit": r.walls_hit.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "signature": r.chamber_signature.iter().map(|&x| x as i64).collect::<Vec<_>>(),
        });
        return Ok(json_text(&v));
    }
    let mut out = String::new();
    writeln!(out, "model {}  slope {}", m.name, s).unwrap();
    writeln!(out, "weight  cycle").unwrap();
    for (c, w) in &r.cycles {
        writeln!(out, "{w:<7} {c}").unwrap();
    }
    let sig: String = r
        .chamber_signature
        .iter()
        .map(|x| match x {
            1 => '+',
            -1 => '-',
            _ => '0',
        })
        .collect();
    writeln!(out, "signature {sig}").unwrap();
    if r.walls_hit.is_empty() {
        writeln!(out, "no wall hit").unwrap();
    } else {
        for c in &r.walls_hit {
            writeln!(out, "on wall: {c}").unwrap();
        }
    }
    Ok(out)
}

pub fn compare(
    m: &Model,
    a: &Slope,
    b: &Slope,
    order: usize,
    json: bool,
    strategy: Strategy,
) -> Result<String, Failure> {
    let la = localization_series(&m.quiver, a, order, strategy)?;
    let lb = localization_series(&m.quiver, b, order, strategy)?;
    let first = (0..=order).find(|&n| la.series.coeff(n) != lb.series.coeff(n));
    if json {
        let v = json!({
            "model": m.name,
            "order": order,
            "equal": first.is_none(),
            "first_differing_degree": first,
            "a": series_value(m, &la, false),
            "b": series_value(m, &lb, false),
        });
        return Ok(json_text(&v));
    }
    let mut out = series_block(m, &la, false);
    out.push('\n');
    out.push_str(&series_block(m, &lb, false));
    out.push('\n');
    match first {
        None => writeln!(out, "equal up to q^{order}").unwrap(),
        Some(n) => writeln!(out, "differ first at q^{n}").unwrap(),
    }
    Ok(out)
}

pub fn bbcheck(factors: &str, json: bool) -> Result<String, Failure> {
    let a = LinearProjectiveAction::parse(factors)?;
    let cells = bb_cells(&a);
    let check = verify_cell_identity(&a);
    let dual = verify_duality(&a);
    if json {
        let rows: Vec<Value> = cells
            .iter()
            .map(|c| json!({"point": c.label(), "d_plus": c.d_plus, "d_minus": c.d_minus, "ind": c.ind()}))
            .collect();
        let v = json!({
            "factors": a.factors().iter().map(|f| ints(f)).collect::<Vec<_>>(),
            "cells": rows,
            "lhs": check.lhs.to_string(),
            "rhs": check.rhs.to_string(),
            "equal": check.equal,
            "duality": dual,
            "euler": big(&check.lhs.specialize_y1()),
        });
        return Ok(json_text(&v));
    }
    let mut out = String::new();
    writeln!(out, "point       d+   d-   ind").unwrap();
    for c in &cells {
        writeln!(out, "{:<11} {:<4} {:<4} {}", c.label(), c.d_plus, c.d_minus, c.ind()).unwrap();
    }
    writeln!(out, "cells        {}", check.lhs).unwrap();
    writeln!(out, "fixed points {}", check.rhs).unwrap();
    writeln!(out, "{}", if check.equal { "equal" } else { "not equal" }).unwrap();
    writeln!(out, "duality {}", if dual { "holds" } else { "fails" }).unwrap();
    Ok(out)
}
