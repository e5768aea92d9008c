//! Framed quivers with potential: data model, text format, slopes and cycles.
//!
//! The text format is line oriented:
//!
//! ```text
//! # comment
//! vertex 0
//! arrow x 0 0 ;
//! potential + x y z ;
//! framing 0
//! ```
//!
//! `arrow` and `potential` statements end with `;`. A `framing` line may carry
//! an explicit multiplicity, which must be 1.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::integer_kernel;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A signed cyclic word of arrow indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PotentialTerm {
    pub sign: i8,
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverWithPotential {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    potential: Vec<PotentialTerm>,
    framing: Vec<usize>,
}

impl QuiverWithPotential {
    /// Validates and assembles a quiver. Arrows and potential words refer to
    /// vertices and arrows by name.
    pub fn new(
        vertices: Vec<String>,
        arrows: Vec<(String, String, String)>,
        potential: Vec<(i8, Vec<String>)>,
        framing: Vec<String>,
    ) -> Result<Self> {
        let mut vindex = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vindex.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let vertex = |name: &str, context: &str| {
            vindex.get(name).copied().ok_or_else(|| Error::UnknownVertex {
                vertex: name.to_string(),
                context: context.to_string(),
            })
        };
        let mut aindex = HashMap::new();
        let mut arrow_list = Vec::with_capacity(arrows.len());
        for (name, src, dst) in arrows {
            let context = format!("arrow `{name}`");
            let source = vertex(&src, &context)?;
            let target = vertex(&dst, &context)?;
            if aindex.insert(name.clone(), arrow_list.len()).is_some() {
                return Err(Error::DuplicateArrow(name));
            }
            arrow_list.push(Arrow { name, source, target });
        }
        let mut terms = Vec::with_capacity(potential.len());
        for (sign, names) in potential {
            let word = names
                .iter()
                .map(|n| aindex.get(n).copied().ok_or_else(|| Error::UnknownArrow(n.clone())))
                .collect::<Result<Vec<_>>>()?;
            let text = names.join(" ");
            if word.is_empty() {
                return Err(Error::NonClosedTerm {
                    term: text,
                    detail: "empty word".into(),
                });
            }
            for (i, &a) in word.iter().enumerate() {
                let next = word[(i + 1) % word.len()];
                let (here, there) = (&arrow_list[a], &arrow_list[next]);
                if here.target != there.source {
                    return Err(Error::NonClosedTerm {
                        term: text,
                        detail: format!(
                            "`{}` ends at `{}` but `{}` starts at `{}`",
                            here.name, vertices[here.target], there.name, vertices[there.source]
                        ),
                    });
                }
            }
            terms.push(PotentialTerm { sign, word });
        }
        if framing.is_empty() {
            return Err(Error::MissingFraming);
        }
        let mut framed = Vec::new();
        for f in framing {
            let v = vertex(&f, "framing")?;
            if framed.contains(&v) {
                return Err(Error::FramingMultiplicity {
                    vertex: f,
                    multiplicity: 2,
                });
            }
            framed.push(v);
        }
        Ok(Self {
            vertices,
            arrows: arrow_list,
            potential: terms,
            framing: framed,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn potential(&self) -> &[PotentialTerm] {
        &self.potential
    }

    pub fn framing(&self) -> &[usize] {
        &self.framing
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn term_text(&self, term: &PotentialTerm) -> String {
        let sign = if term.sign < 0 { '-' } else { '+' };
        let names: Vec<&str> = term.word.iter().map(|&a| self.arrows[a].name.as_str()).collect();
        format!("{sign}{}", names.join(" "))
    }

    /// Arrows that appear in no potential term, when the potential is nonempty.
    pub fn warnings(&self) -> Vec<String> {
        if self.potential.is_empty() {
            return Vec::new();
        }
        let used: HashSet<usize> = self.potential.iter().flat_map(|t| t.word.iter().copied()).collect();
        self.arrows
            .iter()
            .enumerate()
            .filter(|(i, _)| !used.contains(i))
            .map(|(_, a)| format!("arrow `{}` does not appear in the potential", a.name))
            .collect()
    }

    pub fn longest_term(&self) -> usize {
        self.potential.iter().map(|t| t.word.len()).max().unwrap_or(0)
    }

    /// Per-term arrow multiplicities: one row per term, one column per arrow.
    pub fn incidence(&self) -> Vec<Vec<i64>> {
        self.potential
            .iter()
            .map(|t| {
                let mut row = vec![0i64; self.arrows.len()];
                for &a in &t.word {
                    row[a] += 1;
                }
                row
            })
            .collect()
    }

    /// Canonical text form; parses back to an equal quiver.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&format!("vertex {v}\n"));
        }
        for a in &self.arrows {
            out.push_str(&format!(
                "arrow {} {} {} ;\n",
                a.name, self.vertices[a.source], self.vertices[a.target]
            ));
        }
        for t in &self.potential {
            let sign = if t.sign < 0 { '-' } else { '+' };
            let names: Vec<&str> = t.word.iter().map(|&a| self.arrows[a].name.as_str()).collect();
            out.push_str(&format!("potential {sign} {} ;\n", names.join(" ")));
        }
        for &f in &self.framing {
            out.push_str(&format!("framing {}\n", self.vertices[f]));
        }
        out
    }

    /// Disjoint union; names are prefixed with `L.` and `R.`, both framings kept.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let mut vertices = Vec::new();
        let mut arrows = Vec::new();
        let mut potential = Vec::new();
        let mut framing = Vec::new();
        for (prefix, q) in [("L.", self), ("R.", other)] {
            let offset_v = vertices.len();
            let offset_a = arrows.len();
            vertices.extend(q.vertices.iter().map(|v| format!("{prefix}{v}")));
            arrows.extend(q.arrows.iter().map(|a| Arrow {
                name: format!("{prefix}{}", a.name),
                source: a.source + offset_v,
                target: a.target + offset_v,
            }));
            potential.extend(q.potential.iter().map(|t| PotentialTerm {
                sign: t.sign,
                word: t.word.iter().map(|a| a + offset_a).collect(),
            }));
            framing.extend(q.framing.iter().map(|f| f + offset_v));
        }
        Self {
            vertices,
            arrows,
            potential,
            framing,
        }
    }
}

// ---------------------------------------------------------------------------
// text format

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Semi,
    Plus,
    Minus,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, column) = (li + 1, i + 1);
            let single = match c {
                ';' => Some(Tok::Semi),
                '+' => Some(Tok::Plus),
                '-' => Some(Tok::Minus),
                _ => None,
            };
            if c.is_whitespace() {
                i += 1;
            } else if let Some(tok) = single {
                out.push(Spanned { tok, line, column });
                i += 1;
            } else if c.is_alphanumeric() || c == '_' || c == '.' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Word(chars[start..i].iter().collect()),
                    line,
                    column,
                });
            } else {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|s| (s.line, s.column)).unwrap_or(self.end)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn word(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Spanned { tok: Tok::Word(w), .. }) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().map(|s| &s.tok) == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_semi(&mut self) -> Result<()> {
        if self.eat(&Tok::Semi) {
            Ok(())
        } else {
            self.fail("expected `;`")
        }
    }

    fn at_keyword(&self) -> bool {
        matches!(
            self.peek(),
            Some(Spanned { tok: Tok::Word(w), .. })
                if matches!(w.as_str(), "vertex" | "arrow" | "potential" | "framing")
        )
    }
}

/// Parses a quiver description document.
pub fn parse_quiver(text: &str) -> Result<QuiverWithPotential> {
    let toks = lex(text)?;
    let end = (
        text.lines().count().max(1),
        text.lines().last().map_or(1, |l| l.len() + 1),
    );
    let mut p = Parser { toks, pos: 0, end };
    let mut vertices = Vec::new();
    let mut arrows = Vec::new();
    let mut potential = Vec::new();
    let mut framing = Vec::new();
    while p.peek().is_some() {
        let keyword = p.word("a statement keyword")?;
        match keyword.as_str() {
            "vertex" => {
                vertices.push(p.word("a vertex id")?);
                p.eat(&Tok::Semi);
            }
            "arrow" => {
                let name = p.word("an arrow name")?;
                let src = p.word("a source vertex")?;
                let dst = p.word("a target vertex")?;
                p.expect_semi()?;
                arrows.push((name, src, dst));
            }
            "potential" => {
                let sign = if p.eat(&Tok::Plus) {
                    1
                } else if p.eat(&Tok::Minus) {
                    -1
                } else {
                    return p.fail("expected `+` or `-`");
                };
                let mut word = Vec::new();
                while let Some(Spanned { tok: Tok::Word(_), .. }) = p.peek() {
                    word.push(p.word("an arrow name")?);
                }
                if word.is_empty() {
                    return p.fail("expected an arrow name");
                }
                p.expect_semi()?;
                potential.push((sign, word));
            }
            "framing" => {
                let v = p.word("a vertex id")?;
                if !p.at_keyword() {
                    if let Some(Spanned { tok: Tok::Word(m), .. }) = p.peek() {
                        let m = m.clone();
                        let multiplicity: u64 = match m.parse() {
                            Ok(x) => x,
                            Err(_) => return p.fail("expected a framing multiplicity"),
                        };
                        p.pos += 1;
                        if multiplicity != 1 {
                            return Err(Error::FramingMultiplicity {
                                vertex: v,
                                multiplicity,
                            });
                        }
                    }
                }
                p.eat(&Tok::Semi);
                framing.push(v);
            }
            other => {
                p.pos -= 1;
                return p.fail(format!("unknown statement `{other}`"));
            }
        }
    }
    QuiverWithPotential::new(vertices, arrows, potential, framing)
}

pub const C3_DOCUMENT: &str = "\
# C^3: one vertex, three loops, W = xyz - xzy
vertex 0
arrow x 0 0 ;
arrow y 0 0 ;
arrow z 0 0 ;
potential + x y z ;
potential - x z y ;
framing 0
";

pub const CONIFOLD_DOCUMENT: &str = "\
# resolved conifold, framed at vertex 1
vertex 1
vertex 2
arrow a1 1 2 ;
arrow a2 1 2 ;
arrow b1 2 1 ;
arrow b2 2 1 ;
potential + a1 b1 a2 b2 ;
potential - a1 b2 a2 b1 ;
framing 1
";

pub const LOOP_DOCUMENT: &str = "\
# one vertex, one loop, no potential
vertex 0
arrow x 0 0 ;
framing 0
";

/// Names of the compiled-in models.
pub const BUILTIN_MODELS: &[&str] = &["c3", "conifold", "loop"];

pub fn builtin_document(name: &str) -> Option<&'static str> {
    match name {
        "c3" => Some(C3_DOCUMENT),
        "conifold" => Some(CONIFOLD_DOCUMENT),
        "loop" => Some(LOOP_DOCUMENT),
        _ => None,
    }
}

pub fn builtin(name: &str) -> Option<QuiverWithPotential> {
    builtin_document(name).map(|d| parse_quiver(d).expect("built-in model parses"))
}

// ---------------------------------------------------------------------------
// slopes

/// Integer weight per arrow, in the quiver's arrow order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    weights: Vec<i64>,
}

impl Slope {
    pub fn new(weights: Vec<i64>) -> Self {
        Self { weights }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![0; n])
    }

    /// Builds a slope from named weights; every arrow must be present.
    pub fn from_named(q: &QuiverWithPotential, named: &[(&str, i64)]) -> Result<Self> {
        let map: HashMap<&str, i64> = named.iter().copied().collect();
        q.arrows()
            .iter()
            .map(|a| {
                map.get(a.name.as_str())
                    .copied()
                    .ok_or_else(|| Error::MissingArrowWeight(a.name.clone()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    /// Parses `1,1,-2`.
    pub fn parse_csv(text: &str) -> Result<Self> {
        text.split(',')
            .map(|w| {
                w.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Format(format!("bad slope weight `{w}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(|w| *w == 0)
    }

    /// Pairing with an arrow-count vector.
    pub fn pair(&self, counts: &[i64]) -> i64 {
        self.weights.iter().zip(counts).map(|(w, c)| w * c).sum()
    }

    pub fn neg(&self) -> Self {
        Self::new(self.weights.iter().map(|w| -w).collect())
    }

    pub fn scaled_plus(&self, factor: i64, other: &Slope) -> Self {
        Self::new(
            self.weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| factor * a + b)
                .collect(),
        )
    }

    /// Concatenation, matching `QuiverWithPotential::disjoint_union`.
    pub fn concat(&self, other: &Slope) -> Self {
        let mut w = self.weights.clone();
        w.extend_from_slice(&other.weights);
        Self::new(w)
    }

    pub fn to_csv(&self) -> String {
        let parts: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_csv())
    }
}

/// Indices of potential terms whose total slope weight is nonzero.
pub fn validate_slope(q: &QuiverWithPotential, s: &Slope) -> Result<Vec<usize>> {
    if s.len() != q.arrows().len() {
        return Err(Error::SlopeArity {
            expected: q.arrows().len(),
            got: s.len(),
        });
    }
    Ok(q.potential()
        .iter()
        .enumerate()
        .filter(|(_, t)| t.word.iter().map(|&a| s.weights[a]).sum::<i64>() != 0)
        .map(|(i, _)| i)
        .collect())
}

/// Like `validate_slope`, but any violation is an error.
pub fn require_valid_slope(q: &QuiverWithPotential, s: &Slope) -> Result<()> {
    let bad = validate_slope(q, s)?;
    if bad.is_empty() {
        Ok(())
    } else {
        let names: Vec<String> = bad
            .iter()
            .map(|&i| format!("`{}`", q.term_text(&q.potential()[i])))
            .collect();
        Err(Error::InvalidSlope(names.join(", ")))
    }
}

/// Basis of the lattice of slopes: integer kernel of the term/arrow incidence.
pub fn slope_lattice_basis(q: &QuiverWithPotential) -> Vec<Slope> {
    integer_kernel(&q.incidence(), q.arrows().len())
        .into_iter()
        .map(Slope::new)
        .collect()
}

// ---------------------------------------------------------------------------
// cycles

/// An elementary cycle, stored as its lexicographically least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleFunctional {
    names: Vec<String>,
    arrows: Vec<usize>,
}

impl CycleFunctional {
    fn canonical(q: &QuiverWithPotential, arrows: &[usize]) -> Self {
        let n = arrows.len();
        let names_of =
            |rot: usize| -> Vec<String> { (0..n).map(|i| q.arrows()[arrows[(rot + i) % n]].name.clone()).collect() };
        let best = (0..n).min_by_key(|&r| names_of(r)).unwrap_or(0);
        Self {
            names: names_of(best),
            arrows: (0..n).map(|i| arrows[(best + i) % n]).collect(),
        }
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn weight_of(&self, s: &Slope) -> i64 {
        self.arrows.iter().map(|&a| s.weights()[a]).sum()
    }
}

impl fmt::Display for CycleFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names.join(" "))
    }
}

/// All simple closed paths of length at most `max_len`, up to rotation.
pub fn elementary_cycles(q: &QuiverWithPotential, max_len: usize) -> Vec<CycleFunctional> {
    let mut found = BTreeSet::new();
    let mut path = Vec::new();
    let mut on_path = vec![false; q.vertices().len()];
    for start in 0..q.vertices().len() {
        cycle_search(q, start, start, max_len, &mut path, &mut on_path, &mut found);
    }
    found.into_iter().collect()
}

fn cycle_search(
    q: &QuiverWithPotential,
    start: usize,
    at: usize,
    max_len: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    found: &mut BTreeSet<CycleFunctional>,
) {
    if path.len() == max_len {
        return;
    }
    on_path[at] = true;
    for (i, a) in q.arrows().iter().enumerate() {
        if a.source != at {
            continue;
        }
        path.push(i);
        if a.target == start {
            found.insert(CycleFunctional::canonical(q, path));
        } else if !on_path[a.target] && a.target > start {
            // only cycles whose least vertex is `start`
            cycle_search(q, start, a.target, max_len, path, on_path, found);
        }
        path.pop();
    }
    on_path[at] = false;
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c3() -> QuiverWithPotential {
        builtin("c3").unwrap()
    }

    fn conifold() -> QuiverWithPotential {
        builtin("conifold").unwrap()
    }

    fn acyclic() -> QuiverWithPotential {
        parse_quiver("vertex 1\nvertex 2\narrow a 1 2 ;\nframing 1\n").unwrap()
    }

    #[test]
    fn parses_builtins() {
        let q = c3();
        assert_eq!(q.vertices().len(), 1);
        assert_eq!(q.arrows().len(), 3);
        assert_eq!(q.potential().len(), 2);
        assert_eq!(q.framing(), &[0]);
        let k = conifold();
        assert_eq!(k.arrows().len(), 4);
        assert_eq!(k.potential().len(), 2);
        assert!(k.warnings().is_empty());
    }

    #[test]
    fn rejects_open_potential_word() {
        let doc = "vertex 1\nvertex 2\narrow x 1 2 ;\narrow y 1 1 ;\npotential + x y ;\nframing 1\n";
        let err = parse_quiver(doc).unwrap_err();
        assert!(err.to_string().contains("non-closed potential term"), "{err}");
    }

    #[test]
    fn structural_errors() {
        let dup = "vertex 0\narrow x 0 0 ;\narrow x 0 0 ;\nframing 0\n";
        assert_eq!(parse_quiver(dup).unwrap_err(), Error::DuplicateArrow("x".into()));
        let unknown = "vertex 0\narrow x 0 9 ;\nframing 0\n";
        assert!(matches!(
            parse_quiver(unknown).unwrap_err(),
            Error::UnknownVertex { .. }
        ));
        let framing2 = "vertex 0\nframing 0 2\n";
        assert!(matches!(
            parse_quiver(framing2).unwrap_err(),
            Error::FramingMultiplicity { multiplicity: 2, .. }
        ));
        assert_eq!(parse_quiver("vertex 0\n").unwrap_err(), Error::MissingFraming);
        assert_eq!(
            parse_quiver("vertex 0\narrow x 0 0 ;\npotential + x w ;\nframing 0").unwrap_err(),
            Error::UnknownArrow("w".into())
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_quiver("vertex 0\narrow x 0 0\nframing 0\n").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 3,
                column: 1,
                message: "expected `;`".into()
            }
        );
        let err = parse_quiver("vertex 0\n  arrow x 0 0 ; $\n").unwrap_err();
        assert!(
            matches!(
                err,
                Error::Syntax {
                    line: 2,
                    column: 17,
                    ..
                }
            ),
            "{err:?}"
        );
        let err = parse_quiver("vertex 0\nedge x\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, column: 1, .. }), "{err:?}");
    }

    #[test]
    fn whitespace_and_comments_are_insignificant() {
        let doc = "# c3\nvertex 0 arrow x 0 0;arrow y 0 0 ;\n arrow   z 0 0 ;\npotential +x y z; potential -x z y;\nframing 0 1 # framed\n";
        assert_eq!(parse_quiver(doc).unwrap(), c3());
    }

    #[test]
    fn unused_arrow_warning() {
        let doc = "vertex 0\narrow x 0 0 ;\narrow y 0 0 ;\npotential + x x x ;\nframing 0\n";
        let q = parse_quiver(doc).unwrap();
        assert_eq!(q.warnings().len(), 1);
        assert!(q.warnings()[0].contains("`y`"));
    }

    #[test]
    fn slope_validation() {
        let q = c3();
        assert!(validate_slope(&q, &Slope::new(vec![1, 1, -2])).unwrap().is_empty());
        assert_eq!(validate_slope(&q, &Slope::new(vec![1, 1, 1])).unwrap(), vec![0, 1]);
        let k = conifold();
        let s = Slope::from_named(&k, &[("a1", 1), ("a2", 0), ("b1", -1), ("b2", 0)]).unwrap();
        assert!(validate_slope(&k, &s).unwrap().is_empty());
        assert_eq!(
            Slope::from_named(&k, &[("a1", 1)]).unwrap_err(),
            Error::MissingArrowWeight("a2".into())
        );
        assert!(matches!(
            validate_slope(&k, &Slope::new(vec![1])).unwrap_err(),
            Error::SlopeArity { expected: 4, got: 1 }
        ));
    }

    #[test]
    fn slope_lattice_ranks() {
        assert_eq!(slope_lattice_basis(&c3()).len(), 2);
        assert_eq!(slope_lattice_basis(&builtin("loop").unwrap()).len(), 1);
        assert_eq!(slope_lattice_basis(&conifold()).len(), 3);
        for q in [c3(), conifold()] {
            for s in slope_lattice_basis(&q) {
                assert!(validate_slope(&q, &s).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn cycles() {
        let c = elementary_cycles(&c3(), 1);
        let names: Vec<String> = c.iter().map(|c| c.to_string()).collect();
        assert_eq!(names, vec!["x", "y", "z"]);
        let k = elementary_cycles(&conifold(), 2);
        let names: Vec<String> = k.iter().map(|c| c.to_string()).collect();
        assert_eq!(names, vec!["a1 b1", "a1 b2", "a2 b1", "a2 b2"]);
        assert!(elementary_cycles(&acyclic(), 5).is_empty());
        // simple cycles never revisit a vertex, so longer bounds add nothing here
        assert_eq!(elementary_cycles(&conifold(), 8).len(), 4);
    }

    #[test]
    fn cycles_on_a_triangle_are_rotation_canonical() {
        let doc =
            "vertex 1\nvertex 2\nvertex 3\narrow u 1 2 ;\narrow v 2 3 ;\narrow w 3 1 ;\narrow t 1 1 ;\nframing 1\n";
        let q = parse_quiver(doc).unwrap();
        let names: Vec<String> = elementary_cycles(&q, 3).iter().map(|c| c.to_string()).collect();
        assert_eq!(names, vec!["t", "u v w"]);
        assert_eq!(elementary_cycles(&q, 2).len(), 1);
    }

    #[test]
    fn disjoint_union_keeps_both_framings() {
        let u = c3().disjoint_union(&builtin("loop").unwrap());
        assert_eq!(u.arrows().len(), 4);
        assert_eq!(u.framing().len(), 2);
        assert_eq!(parse_quiver(&u.to_text()).unwrap(), u);
    }

    proptest! {
        #[test]
        fn round_trip(model in prop::sample::select(BUILTIN_MODELS.to_vec())) {
            let q = builtin(model).unwrap();
            let again = parse_quiver(&q.to_text()).unwrap();
            prop_assert_eq!(&again, &q);
            prop_assert_eq!(again.to_text(), q.to_text());
        }

        #[test]
        fn random_lattice_points_are_valid(c in prop::collection::vec(-20i64..20, 3)) {
            let q = conifold();
            let basis = slope_lattice_basis(&q);
            let mut s = Slope::zero(q.arrows().len());
            for (b, k) in basis.iter().zip(&c) {
                s = b.scaled_plus(*k, &s);
            }
            prop_assert!(validate_slope(&q, &s).unwrap().is_empty());
        }
    }
}
