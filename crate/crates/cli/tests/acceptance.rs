//! End-to-end acceptance suite. Prints one line per criterion and exits
//! nonzero if any fails. Random draws are seeded from `DTLOC_SEED`.

use std::collections::{BTreeSet, HashSet};
use std::process::Command;
use std::time::{Duration, Instant};

use dtloc::bbsmooth::{verify_cell_identity, verify_duality, LinearProjectiveAction};
use dtloc::crystal::{build_atom_poset, crystal_weights, enumerate_crystals};
use dtloc::localize::{localization_series, negation_duality_holds, product_law_check, wall_report};
use dtloc::quiverdsl::{builtin, builtin_document, elementary_cycles, parse_quiver};
use dtloc::tangent::{is_generic, tangent_complex_weights};
use dtloc::{Error, HalfLaurent, QuiverWithPotential, Slope, Strategy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<String, String>;

const BIN: &str = env!("CARGO_BIN_EXE_dtloc");

fn seed() -> u64 {
    std::env::var("DTLOC_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(20240611)
}

fn model(name: &str) -> QuiverWithPotential {
    builtin(name).expect("built-in model")
}

fn dtloc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// A point of the slope lattice with entries drawn from `-r..=r`: every
/// potential term of both built-ins has weight equal to the sum of the slope.
fn random_slope(rng: &mut ChaCha8Rng, arrows: usize, r: i64) -> Slope {
    let mut w: Vec<i64> = (0..arrows - 1).map(|_| rng.gen_range(-r..=r)).collect();
    w.push(-w.iter().sum::<i64>());
    Slope::new(w)
}

fn random_generic(rng: &mut ChaCha8Rng, q: &QuiverWithPotential, size: usize) -> Slope {
    loop {
        let s = random_slope(rng, q.arrows().len(), 6);
        if is_generic(q, &s, size).unwrap() {
            return s;
        }
    }
}

// ---- oracles ----

/// Plane partitions of `n` as arrays of column heights, by size.
fn plane_partition_counts(max: usize) -> Vec<u64> {
    fn fill(h: &mut Vec<Vec<usize>>, cell: usize, left: usize, side: usize, out: &mut [u64], total: usize) {
        if cell == side * side {
            out[total - left] += 1;
            return;
        }
        let (i, j) = (cell / side, cell % side);
        let up = if i > 0 { h[i - 1][j] } else { left };
        let back = if j > 0 { h[i][j - 1] } else { left };
        let cap = up.min(back).min(left);
        for v in 0..=cap {
            h[i][j] = v;
            fill(h, cell + 1, left - v, side, out, total);
        }
        h[i][j] = 0;
    }
    let mut out = vec![0u64; max + 1];
    let mut h = vec![vec![0; max]; max];
    // a partition of n fits in the n x n corner; count each exactly once by
    // fixing the total budget at `max` and recording what was used
    fill(&mut h, 0, max, max, &mut out, max);
    out
}

/// Order ideals of the pyramid crystal: atoms are arrow-count vectors
/// `(a1, a2, b1, b2)` with `a1 + a2 - b1 - b2` in `{0, 1}`; the last arrow of
/// a path to an atom can be any arrow of the right kind with positive count.
fn pyramid_counts(max: usize) -> Vec<u64> {
    type Atom = [usize; 4];
    let below = |a: &Atom| -> Vec<Atom> {
        let kind = if a[0] + a[1] > a[2] + a[3] { [0, 1] } else { [2, 3] };
        kind.iter()
            .filter(|&&k| a[k] > 0)
            .map(|&k| {
                let mut b = *a;
                b[k] -= 1;
                b
            })
            .collect()
    };
    let mut atoms = Vec::new();
    for d in 0..max {
        for a1 in 0..=d {
            for a2 in 0..=d - a1 {
                for b1 in 0..=d - a1 - a2 {
                    let b2 = d - a1 - a2 - b1;
                    let diff = (a1 + a2) as i64 - (b1 + b2) as i64;
                    if diff == 0 || diff == 1 {
                        atoms.push([a1, a2, b1, b2]);
                    }
                }
            }
        }
    }
    let mut counts = vec![0u64; max + 1];
    let mut level: HashSet<BTreeSet<Atom>> = HashSet::from([BTreeSet::new()]);
    for slot in counts.iter_mut() {
        *slot = level.len() as u64;
        let mut next = HashSet::new();
        for ideal in &level {
            for a in &atoms {
                if !ideal.contains(a) && below(a).iter().all(|b| ideal.contains(b)) {
                    let mut bigger = ideal.clone();
                    bigger.insert(*a);
                    next.insert(bigger);
                }
            }
        }
        level = next;
    }
    counts
}

// ---- criteria ----

fn c1_c3_euler() -> Check {
    let start = Instant::now();
    let (code, out, err) = dtloc(&["series", "--model", "c3", "--slope", "1,1,-2", "--order", "6", "--json"]);
    let elapsed = start.elapsed();
    ensure(code == 0, format!("exit {code}: {err}"))?;
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let euler: Vec<i64> = v["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|deg| deg.as_array().unwrap().iter().map(|t| t[1].as_i64().unwrap()).sum())
        .collect();
    let oracle: Vec<i64> = plane_partition_counts(6).into_iter().map(|c| c as i64).collect();
    ensure(oracle == [1, 1, 3, 6, 13, 24, 48], format!("oracle gave {oracle:?}"))?;
    ensure(euler == oracle, format!("series gave {euler:?}, oracle {oracle:?}"))?;
    ensure(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    Ok(format!("{euler:?} in {:.0?}", elapsed))
}

fn c2_slope_dependence() -> Check {
    let q = model("c3");
    let mut seen = Vec::new();
    for (weights, expect_exp) in [(vec![1, 1, -2], 1), (vec![2, -1, -1], -1)] {
        // one box: the tangent space is the three coordinate directions
        let hand =
            weights.iter().filter(|w| **w > 0).count() as i64 - weights.iter().filter(|w| **w < 0).count() as i64;
        ensure(hand == expect_exp, "hand count")?;
        let s = Slope::new(weights.clone());
        let ls = localization_series(&q, &s, 1, Strategy::Parallel).map_err(|e| e.to_string())?;
        let got = ls.series.coeff(1).clone();
        ensure(
            got == HalfLaurent::monomial(hand, 1),
            format!("slope {s}: q coefficient {got}"),
        )?;
        seen.push(got.to_string());
    }
    Ok(format!("q coefficient {} / {}", seen[0], seen[1]))
}

fn c3_negation(rng: &mut ChaCha8Rng) -> Check {
    let mut n = 0;
    for name in ["c3", "conifold"] {
        let q = model(name);
        for _ in 0..50 {
            let s = random_generic(rng, &q, 4);
            let ok = negation_duality_holds(&q, &s, 4, Strategy::Parallel).map_err(|e| e.to_string())?;
            ensure(ok, format!("{name} slope {s}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} slopes"))
}

fn sorted(mut v: Vec<i64>) -> Vec<i64> {
    v.sort_unstable();
    v
}

fn c4_pairing(rng: &mut ChaCha8Rng) -> Check {
    let mut points = 0;
    for name in ["c3", "conifold"] {
        let q = model(name);
        let p = build_atom_poset(&q, 5).map_err(|e| e.to_string())?;
        let crystals = enumerate_crystals(&p, 5, Strategy::Parallel).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let s = random_generic(rng, &q, 5);
            let w = s.weights();
            for c in &crystals {
                let r = tangent_complex_weights(&p, c, &s).map_err(|e| e.to_string())?;
                let atoms = crystal_weights(&p, c, &s);
                // obstructions rebuilt from the cyclic derivatives of the potential
                let mut deg2 = Vec::new();
                for (ai, arrow) in q.arrows().iter().enumerate() {
                    let Some(term) = q.potential().iter().find(|t| t.word.contains(&ai)) else {
                        continue;
                    };
                    let rel_weight: i64 = term.word.iter().map(|&b| w[b]).sum::<i64>() - w[ai];
                    for &(vu, wu) in &atoms {
                        for &(vv, wv) in &atoms {
                            if vu == arrow.target && vv == arrow.source {
                                deg2.push(rel_weight + wu - wv);
                            }
                        }
                    }
                }
                let framed = q.framing()[0];
                deg2.extend(atoms.iter().filter(|(v, _)| *v == framed).map(|(_, wu)| *wu));
                let mut deg3 = Vec::new();
                for &(vu, wu) in &atoms {
                    for &(vv, wv) in &atoms {
                        if vu == vv {
                            deg3.push(wv - wu);
                        }
                    }
                }
                let neg = |v: &[i64]| sorted(v.iter().map(|x| -x).collect());
                ensure(
                    r.deg_weights[2] == neg(&r.deg_weights[1]),
                    format!("{name} {s}: deg2 != -deg1"),
                )?;
                ensure(
                    r.deg_weights[3] == neg(&r.deg_weights[0]),
                    format!("{name} {s}: deg3 != -deg0"),
                )?;
                ensure(
                    sorted(deg2) == r.deg_weights[2],
                    format!("{name} {s}: deg2 differs from relations"),
                )?;
                ensure(sorted(deg3) == r.deg_weights[3], format!("{name} {s}: deg3 differs"))?;
                points += 1;
            }
        }
    }
    Ok(format!("{points} point/slope pairs"))
}

fn c5_chambers(rng: &mut ChaCha8Rng) -> Check {
    let order = 4;
    let mut pairs = 0;
    let mut crossed = 0;
    for name in ["c3", "conifold"] {
        let q = model(name);
        let sig = |s: &Slope| wall_report(&q, s, 2 * order).chamber_signature;
        let mut same = 0;
        let mut tries = 0;
        while same < 20 {
            tries += 1;
            ensure(tries < 10_000, "could not draw same-chamber pairs")?;
            let a = random_generic(rng, &q, order);
            let b = random_generic(rng, &q, order);
            let sa = localization_series(&q, &a, order, Strategy::Parallel).map_err(|e| e.to_string())?;
            let sb = localization_series(&q, &b, order, Strategy::Parallel).map_err(|e| e.to_string())?;
            if sig(&a) == sig(&b) {
                ensure(
                    sa.series == sb.series,
                    format!("{name}: {a} and {b} share a chamber but differ"),
                )?;
                same += 1;
            } else if sa.series != sb.series {
                crossed += 1;
            }
        }
        pairs += same;
    }
    ensure(crossed > 0, "no cross-wall pair differed")?;
    Ok(format!(
        "{pairs} same-chamber pairs equal, {crossed} cross-wall pairs differ"
    ))
}

fn c6_genericity(rng: &mut ChaCha8Rng) -> Check {
    let mut points = 0;
    let mut rejected = 0;
    for name in ["c3", "conifold"] {
        let q = model(name);
        let p = build_atom_poset(&q, 5).map_err(|e| e.to_string())?;
        let crystals = enumerate_crystals(&p, 5, Strategy::Parallel).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let s = random_generic(rng, &q, 5);
            for c in &crystals {
                let r = tangent_complex_weights(&p, c, &s).map_err(|e| e.to_string())?;
                ensure(r.d_zero == 0, format!("{name} {s}: d_zero {}", r.d_zero))?;
                points += 1;
            }
        }
        let cycles = elementary_cycles(&q, 8);
        let mut here = 0;
        while here < 40 {
            let s = random_slope(rng, q.arrows().len(), 3);
            if s.is_zero() || cycles.iter().all(|c| c.weight_of(&s) != 0) {
                continue;
            }
            match localization_series(&q, &s, 4, Strategy::Sequential) {
                Err(Error::WallSlope { cycle }) => {
                    let named = cycles.iter().find(|c| c.to_string() == cycle);
                    ensure(
                        named.is_some_and(|c| c.weight_of(&s) == 0),
                        format!("{name} {s}: named `{cycle}` which is not a zero cycle"),
                    )?;
                }
                other => return Err(format!("{name} {s}: expected wall error, got {other:?}")),
            }
            here += 1;
        }
        rejected += here;
    }
    let (code, _, err) = dtloc(&["series", "--model", "c3", "--slope", "1,-1,0", "--order", "3"]);
    ensure(
        code == 1 && err.contains("`z`"),
        format!("cli wall diagnostic: {code} {err}"),
    )?;
    Ok(format!("{points} isolated points, {rejected} wall slopes rejected"))
}

fn c7_product_law() -> Check {
    let lp = model("loop");
    let c3 = model("c3");
    let one = Slope::new(vec![3]);
    let two = Slope::new(vec![1]);
    let chamber = Slope::new(vec![3, 2, -5]);
    let a = product_law_check(&lp, &lp, &one, &two, 4, Strategy::Parallel).map_err(|e| e.to_string())?;
    let b = product_law_check(&c3, &lp, &chamber, &one, 4, Strategy::Parallel).map_err(|e| e.to_string())?;
    let c = product_law_check(&lp, &lp, &one, &two.neg(), 4, Strategy::Parallel).map_err(|e| e.to_string())?;
    ensure(a && b && c, format!("loop+loop {a}, c3+loop {b}, mixed signs {c}"))?;
    Ok("loop+loop and c3+loop at order 4".into())
}

fn c8_conifold() -> Check {
    let q = model("conifold");
    let oracle = pyramid_counts(4);
    let ls =
        localization_series(&q, &Slope::new(vec![1, 2, -4, 1]), 4, Strategy::Parallel).map_err(|e| e.to_string())?;
    let got: Vec<u64> = ls
        .series
        .specialize_y1()
        .iter()
        .map(|c| c.to_string().parse().unwrap())
        .collect();
    ensure(got == oracle, format!("series {got:?}, oracle {oracle:?}"))?;
    Ok(format!("{got:?}"))
}

fn c9_smooth(rng: &mut ChaCha8Rng) -> Check {
    let start = Instant::now();
    let fixed: [&[&[i64]]; 5] = [
        &[&[0, 1]],
        &[&[0, 1, 2]],
        &[&[0, 1, 2, 3]],
        &[&[0, 1], &[0, 1]],
        &[&[0, 1, 2], &[0, 1]],
    ];
    let mut actions: Vec<LinearProjectiveAction> = fixed
        .iter()
        .map(|f| LinearProjectiveAction::new(f.iter().map(|x| x.to_vec()).collect()).unwrap())
        .collect();
    while actions.len() < fixed.len() + 100 {
        let factors: Vec<Vec<i64>> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let n = rng.gen_range(1..=4);
                let mut set = BTreeSet::new();
                while set.len() < n {
                    set.insert(rng.gen_range(-20..=20));
                }
                let mut v: Vec<i64> = set.into_iter().collect();
                v.rotate_left(rng.gen_range(0..n));
                v
            })
            .collect();
        actions.push(LinearProjectiveAction::new(factors).unwrap());
    }
    for a in &actions {
        let check = verify_cell_identity(a);
        ensure(
            check.equal,
            format!("{:?}: {} vs {}", a.factors(), check.lhs, check.rhs),
        )?;
        ensure(verify_duality(a), format!("{:?}: duality", a.factors()))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("{} actions in {:.0?}", actions.len(), elapsed))
}

fn c10_infrastructure() -> Check {
    for name in ["c3", "conifold"] {
        let q = parse_quiver(builtin_document(name).unwrap()).map_err(|e| e.to_string())?;
        let text = q.to_text();
        let again = parse_quiver(&text).map_err(|e| e.to_string())?;
        ensure(again == q && again.to_text() == text, format!("{name} round trip"))?;
    }

    let runs: [&[&str]; 3] = [
        &[
            "series", "--model", "conifold", "--slope", "1,2,-4,1", "--order", "5", "--json",
        ],
        &["fixedpoints", "--model", "c3", "--max-boxes", "5", "--json"],
        &[
            "index",
            "--model",
            "c3",
            "--slope",
            "3,2,-5",
            "--max-boxes",
            "4",
            "--json",
        ],
    ];
    for args in runs {
        let outs: Vec<String> = ["1", "2", "8"]
            .iter()
            .map(|t| {
                let mut full = vec!["--threads", t];
                full.extend_from_slice(args);
                dtloc(&full).1
            })
            .collect();
        ensure(
            !outs[0].is_empty() && outs.iter().all(|o| o == &outs[0]),
            format!("{args:?} depends on threads"),
        )?;
    }

    let matrix: [(&[&str], i32); 10] = [
        (&["series", "--model", "c3", "--slope", "1,1,-2", "--order", "3"], 0),
        (&["bbcheck", "--factors", "0,1"], 0),
        (&["validate", "--model", "conifold"], 0),
        (&["series", "--model", "c3", "--slope", "1,-1,0", "--order", "3"], 1),
        (&["series", "--model", "c3", "--slope", "1,1,1", "--order", "3"], 1),
        (&["bbcheck", "--factors", "0,0"], 1),
        (&["series", "--model", "c3", "--slope", "1,1", "--order", "3"], 2),
        (&["series", "--model", "nope", "--slope", "1,1,-2", "--order", "3"], 2),
        (&["series", "--slope", "1,1,-2", "--order", "3"], 2),
        (&["frobnicate"], 2),
    ];
    for (args, expect) in matrix {
        let (code, _, err) = dtloc(args);
        ensure(code == expect, format!("{args:?}: exit {code}, expected {expect}"))?;
        if expect != 0 {
            ensure(!err.trim().is_empty(), format!("{args:?}: no diagnostic"))?;
        }
        if expect == 1 {
            ensure(
                err.trim().lines().count() == 1,
                format!("{args:?}: diagnostic is not one line"),
            )?;
        }
    }
    Ok("round trip, threads 1/2/8, exit matrix".into())
}

fn main() {
    let seed = seed();
    println!("seed {seed}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let results: Vec<(&str, Check)> = vec![
        ("c3 euler specialization", c1_c3_euler()),
        ("slope dependence at degree 1", c2_slope_dependence()),
        ("slope negation duality", c3_negation(&mut rng)),
        ("tangent/obstruction pairing", c4_pairing(&mut rng)),
        ("chamber constancy", c5_chambers(&mut rng)),
        ("genericity", c6_genericity(&mut rng)),
        ("product law", c7_product_law()),
        ("conifold counts", c8_conifold()),
        ("smooth cell identity", c9_smooth(&mut rng)),
        ("infrastructure", c10_infrastructure()),
    ];

    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {why}", i + 1)
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
