//! Torus-fixed points of the framed moduli space as molten crystals.
//!
//! Atoms are classes of paths starting at a framing vertex, modulo the
//! relations `dW/da = 0`. The classes are computed by a bounded coincidence
//! procedure: nodes are created breadth first up to the depth bound and every
//! relation is applied at every node until no more nodes merge. Crystals are
//! the finite order ideals of the resulting poset.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::lattice::integer_kernel;
use crate::quiverdsl::{slope_lattice_basis, QuiverWithPotential, Slope};

/// One relation `dW/da = 0` after collecting like paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `lhs = sign * rhs`
    Binomial { lhs: Vec<usize>, rhs: Vec<usize>, sign: i8 },
    /// The path is zero.
    Monomial(Vec<usize>),
}

/// Cyclic derivatives of the potential, one per arrow that yields a relation.
pub fn relations(q: &QuiverWithPotential) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    for (alpha, arrow) in q.arrows().iter().enumerate() {
        let mut paths: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
        for term in q.potential() {
            let w = &term.word;
            for i in 0..w.len() {
                if w[i] != alpha {
                    continue;
                }
                let path: Vec<usize> = w[i + 1..].iter().chain(&w[..i]).copied().collect();
                *paths.entry(path).or_insert(0) += i64::from(term.sign);
            }
        }
        paths.retain(|_, c| *c != 0);
        let terms: Vec<(Vec<usize>, i64)> = paths.into_iter().collect();
        match terms.as_slice() {
            [] => {}
            [(p, _)] => out.push(Relation::Monomial(p.clone())),
            [(p1, c1), (p2, c2)] if c1.abs() == c2.abs() => out.push(Relation::Binomial {
                lhs: p1.clone(),
                rhs: p2.clone(),
                sign: if c1.signum() == c2.signum() { -1 } else { 1 },
            }),
            _ => {
                return Err(Error::UnsupportedPotential(format!(
                    "the relation for arrow `{}` is not a binomial with unit coefficients",
                    arrow.name
                )))
            }
        }
    }
    Ok(out)
}

/// A box of the crystal: one class of paths from a framing vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    /// Index into the quiver's framing list.
    pub source: usize,
    pub vertex: usize,
    /// Arrow multiplicities of the shortest path reaching the atom.
    pub counts: Vec<i64>,
    /// Torus weight: pairing of `counts` with each slope-lattice basis vector.
    pub weight: Vec<i64>,
    pub depth: usize,
    /// Shortlex-least path reaching the atom.
    pub word: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct AtomPoset {
    quiver: QuiverWithPotential,
    basis: Vec<Slope>,
    depth_bound: usize,
    atoms: Vec<Atom>,
    succ: Vec<Vec<(usize, usize)>>,
    pred: Vec<Vec<usize>>,
    trans: Vec<Vec<Option<usize>>>,
    roots: Vec<usize>,
}

impl AtomPoset {
    pub fn quiver(&self) -> &QuiverWithPotential {
        &self.quiver
    }

    /// Slope-lattice basis used for atom weights.
    pub fn basis(&self) -> &[Slope] {
        &self.basis
    }

    pub fn depth_bound(&self) -> usize {
        self.depth_bound
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, id: usize) -> &Atom {
        &self.atoms[id]
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Covering relations `(arrow, target)` leaving an atom.
    pub fn successors(&self, id: usize) -> &[(usize, usize)] {
        &self.succ[id]
    }

    pub fn predecessors(&self, id: usize) -> &[usize] {
        &self.pred[id]
    }

    /// The framing atoms, one per framing vertex.
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    /// Number of atoms at each depth.
    pub fn depth_counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.depth_bound + 1];
        for a in &self.atoms {
            out[a.depth] += 1;
        }
        out
    }

    /// Normal form: the atom a path from framing vertex `source` lands on.
    /// `None` if the path is zero, does not compose, or leaves the bound.
    pub fn atom_of_word(&self, source: usize, word: &[usize]) -> Option<usize> {
        let mut cur = *self.roots.get(source)?;
        for &a in word {
            cur = self.trans[cur][a]?;
        }
        Some(cur)
    }

    pub fn atom_label(&self, id: usize) -> String {
        let a = &self.atoms[id];
        let names: Vec<&str> = a.word.iter().map(|&i| self.quiver.arrows()[i].name.as_str()).collect();
        let path = if names.is_empty() {
            "1".to_string()
        } else {
            names.join("")
        };
        if self.roots.len() > 1 {
            format!("{}:{path}", self.quiver.vertices()[self.quiver.framing()[a.source]])
        } else {
            path
        }
    }
}

struct Node {
    parent: usize,
    rel: i8,
    trans: Vec<Option<(usize, i8)>>,
    vertex: usize,
    source: usize,
    counts: Vec<i64>,
    depth: usize,
    zero: bool,
}

struct Builder<'a> {
    q: &'a QuiverWithPotential,
    nodes: Vec<Node>,
    queue: Vec<(usize, usize, i8)>,
}

impl<'a> Builder<'a> {
    fn find(&mut self, n: usize) -> (usize, i8) {
        let mut path = Vec::new();
        let mut cur = n;
        while self.nodes[cur].parent != cur {
            path.push(cur);
            cur = self.nodes[cur].parent;
        }
        // compress: sign of each node relative to the root
        let root = cur;
        let mut acc = 1i8;
        for &m in path.iter().rev() {
            acc *= self.nodes[m].rel;
            self.nodes[m].rel = acc;
            self.nodes[m].parent = root;
        }
        (root, if n == root { 1 } else { self.nodes[n].rel })
    }

    fn add_node(&mut self, vertex: usize, source: usize, counts: Vec<i64>, depth: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node {
            parent: id,
            rel: 1,
            trans: vec![None; self.q.arrows().len()],
            vertex,
            source,
            counts,
            depth,
            zero: false,
        });
        id
    }

    fn follow(&mut self, start: usize, path: &[usize]) -> Option<(usize, i8)> {
        let (mut cur, mut sign) = self.find(start);
        for &a in path {
            let (m, s) = self.nodes[cur].trans[a]?;
            let (r, rs) = self.find(m);
            cur = r;
            sign *= s * rs;
        }
        Some((cur, sign))
    }

    /// Records `val(a) = s * val(b)` and closes under successors.
    /// Returns whether anything changed.
    fn merge(&mut self, a: usize, b: usize, s: i8) -> bool {
        let mut changed = false;
        self.queue.push((a, b, s));
        while let Some((a, b, s)) = self.queue.pop() {
            let (ra, sa) = self.find(a);
            let (rb, sb) = self.find(b);
            let t = sa * s * sb;
            if ra == rb {
                if t != 1 && !self.nodes[ra].zero {
                    self.nodes[ra].zero = true;
                    changed = true;
                }
                continue;
            }
            changed = true;
            debug_assert_eq!(self.nodes[ra].vertex, self.nodes[rb].vertex);
            let (winner, loser) = if self.nodes[ra].depth <= self.nodes[rb].depth {
                (ra, rb)
            } else {
                (rb, ra)
            };
            // val(loser) = t * val(winner), symmetric since t = +-1
            self.nodes[loser].parent = winner;
            self.nodes[loser].rel = t;
            self.nodes[winner].zero |= self.nodes[loser].zero;
            let moved = std::mem::take(&mut self.nodes[loser].trans);
            for (alpha, entry) in moved.into_iter().enumerate() {
                let Some((m, ms)) = entry else { continue };
                match self.nodes[winner].trans[alpha] {
                    Some((n, ns)) => self.queue.push((n, m, ns * t * ms)),
                    None => self.nodes[winner].trans[alpha] = Some((m, t * ms)),
                }
            }
            self.nodes[loser].trans = vec![None; self.q.arrows().len()];
        }
        changed
    }

    fn live_roots(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].parent == i && !self.nodes[i].zero)
            .collect()
    }

    fn saturate(&mut self, rels: &[Relation]) {
        loop {
            let mut changed = false;
            for u in self.live_roots() {
                for rel in rels {
                    match rel {
                        Relation::Binomial { lhs, rhs, sign } => {
                            if let (Some((n1, s1)), Some((n2, s2))) = (self.follow(u, lhs), self.follow(u, rhs)) {
                                changed |= self.merge(n1, n2, s1 * sign * s2);
                            }
                        }
                        Relation::Monomial(p) => {
                            if let Some((n, _)) = self.follow(u, p) {
                                if !self.nodes[n].zero {
                                    self.nodes[n].zero = true;
                                    changed = true;
                                }
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    fn expand(&mut self, level: usize) {
        for u in self.live_roots() {
            if self.nodes[u].depth > level {
                continue;
            }
            let v = self.nodes[u].vertex;
            for (alpha, arrow) in self.q.arrows().iter().enumerate() {
                if arrow.source != v || self.nodes[u].trans[alpha].is_some() {
                    continue;
                }
                let mut counts = self.nodes[u].counts.clone();
                counts[alpha] += 1;
                let (source, depth) = (self.nodes[u].source, self.nodes[u].depth + 1);
                let n = self.add_node(arrow.target, source, counts, depth);
                self.nodes[u].trans[alpha] = Some((n, 1));
            }
        }
    }
}

/// Builds all atoms of depth at most `depth_bound`, with covering relations,
/// and verifies that path classes are exactly the `(vertex, torus weight)`
/// classes up to the bound.
pub fn build_atom_poset(q: &QuiverWithPotential, depth_bound: usize) -> Result<AtomPoset> {
    let rels = relations(q)?;
    let narrows = q.arrows().len();
    let mut b = Builder {
        q,
        nodes: Vec::new(),
        queue: Vec::new(),
    };
    for (k, &f) in q.framing().iter().enumerate() {
        b.add_node(f, k, vec![0; narrows], 0);
    }
    b.saturate(&rels);
    for level in 0..depth_bound {
        b.expand(level);
        b.saturate(&rels);
    }

    // zero classes annihilate everything above them
    let mut changed = true;
    while changed {
        changed = false;
        for u in 0..b.nodes.len() {
            if b.nodes[u].parent != u || !b.nodes[u].zero {
                continue;
            }
            for alpha in 0..narrows {
                if let Some((m, _)) = b.nodes[u].trans[alpha] {
                    let (r, _) = b.find(m);
                    if !b.nodes[r].zero {
                        b.nodes[r].zero = true;
                        changed = true;
                    }
                }
            }
        }
    }

    // breadth-first renumbering gives shortlex-least words and true depths
    let mut id_of: HashMap<usize, usize> = HashMap::new();
    let mut atoms: Vec<Atom> = Vec::new();
    let mut roots = Vec::new();
    let basis = slope_lattice_basis(q);
    for k in 0..q.framing().len() {
        let (r, _) = b.find(k);
        if b.nodes[r].zero {
            return Err(Error::UnsupportedPotential(
                "the framing vector itself is killed by the relations".into(),
            ));
        }
        let mut queue = VecDeque::new();
        id_of.insert(r, atoms.len());
        roots.push(atoms.len());
        atoms.push(make_atom(&b.nodes[r], &basis, 0, Vec::new()));
        queue.push_back(r);
        while let Some(u) = queue.pop_front() {
            let (depth, word) = {
                let a = &atoms[id_of[&u]];
                (a.depth, a.word.clone())
            };
            for alpha in 0..narrows {
                let Some((m, _)) = b.nodes[u].trans[alpha] else {
                    continue;
                };
                let (r, _) = b.find(m);
                if b.nodes[r].zero || id_of.contains_key(&r) {
                    continue;
                }
                let mut w = word.clone();
                w.push(alpha);
                id_of.insert(r, atoms.len());
                atoms.push(make_atom(&b.nodes[r], &basis, depth + 1, w));
                queue.push_back(r);
            }
        }
    }

    let mut succ = vec![Vec::new(); atoms.len()];
    let mut pred = vec![Vec::new(); atoms.len()];
    let mut trans = vec![vec![None; narrows]; atoms.len()];
    let mut by_id: Vec<usize> = vec![0; atoms.len()];
    for (&node, &id) in &id_of {
        by_id[id] = node;
    }
    for id in 0..atoms.len() {
        let moves: Vec<(usize, usize)> = b.nodes[by_id[id]]
            .trans
            .iter()
            .enumerate()
            .filter_map(|(alpha, t)| t.map(|(m, _)| (alpha, m)))
            .collect();
        for (alpha, m) in moves {
            let (r, _) = b.find(m);
            if let Some(&t) = id_of.get(&r) {
                succ[id].push((alpha, t));
                if !pred[t].contains(&id) {
                    pred[t].push(id);
                }
                trans[id][alpha] = Some(t);
            }
        }
    }
    for p in &mut pred {
        p.sort_unstable();
    }

    check_acyclic(&succ)?;
    check_confluence(q, &rels, &atoms)?;

    Ok(AtomPoset {
        quiver: q.clone(),
        basis,
        depth_bound,
        atoms,
        succ,
        pred,
        trans,
        roots,
    })
}

fn make_atom(node: &Node, basis: &[Slope], depth: usize, word: Vec<usize>) -> Atom {
    let mut counts = vec![0i64; node.counts.len()];
    for &a in &word {
        counts[a] += 1;
    }
    Atom {
        source: node.source,
        vertex: node.vertex,
        weight: basis.iter().map(|s| s.pair(&counts)).collect(),
        counts,
        depth,
        word,
    }
}

fn check_acyclic(succ: &[Vec<(usize, usize)>]) -> Result<()> {
    let n = succ.len();
    let mut indeg = vec![0usize; n];
    for s in succ {
        for &(_, t) in s {
            indeg[t] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(u) = stack.pop() {
        seen += 1;
        for &(_, t) in &succ[u] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                stack.push(t);
            }
        }
    }
    if seen == n {
        Ok(())
    } else {
        Err(Error::UnsupportedPotential(
            "the path classes do not form a partial order".into(),
        ))
    }
}

/// Two distinct path classes with the same source, vertex and torus weight
/// mean the relations do not determine atoms by their weights.
fn check_confluence(q: &QuiverWithPotential, rels: &[Relation], atoms: &[Atom]) -> Result<()> {
    let count = |p: &[usize]| {
        let mut c = vec![0i64; q.arrows().len()];
        for &a in p {
            c[a] += 1;
        }
        c
    };
    let diffs: Vec<Vec<i64>> = rels
        .iter()
        .filter_map(|r| match r {
            Relation::Binomial { lhs, rhs, .. } => {
                Some(count(lhs).iter().zip(count(rhs)).map(|(a, b)| a - b).collect())
            }
            Relation::Monomial(_) => None,
        })
        .collect();
    let projection = integer_kernel(&diffs, q.arrows().len());
    let mut seen: HashMap<(usize, usize, Vec<i64>), usize> = HashMap::new();
    for (id, a) in atoms.iter().enumerate() {
        let key: Vec<i64> = projection
            .iter()
            .map(|p| p.iter().zip(&a.counts).map(|(x, y)| x * y).sum())
            .collect();
        if let Some(&other) = seen.get(&(a.source, a.vertex, key.clone())) {
            let name = |i: usize| {
                let w: Vec<&str> = atoms[i].word.iter().map(|&x| q.arrows()[x].name.as_str()).collect();
                if w.is_empty() {
                    "1".to_string()
                } else {
                    w.join(" ")
                }
            };
            return Err(Error::NonConfluent {
                depth: a.depth,
                detail: format!(
                    "paths `{}` and `{}` have equal weight but are not related",
                    name(other),
                    name(id)
                ),
            });
        }
        seen.insert((a.source, a.vertex, key), id);
    }
    Ok(())
}

/// A finite order ideal of the atom poset, atoms sorted by id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MoltenCrystal {
    atoms: Vec<usize>,
}

impl MoltenCrystal {
    pub fn empty() -> Self {
        Self { atoms: Vec::new() }
    }

    pub fn from_atoms(mut atoms: Vec<usize>) -> Self {
        atoms.sort_unstable();
        atoms.dedup();
        Self { atoms }
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn size(&self) -> usize {
        self.atoms.len()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.atoms.binary_search(&id).is_ok()
    }
}

/// Checks the order-ideal property directly: every predecessor of every
/// member is a member.
pub fn is_order_ideal(p: &AtomPoset, atoms: &[usize]) -> bool {
    let set: std::collections::HashSet<usize> = atoms.iter().copied().collect();
    atoms
        .iter()
        .all(|&a| a < p.len() && p.predecessors(a).iter().all(|x| set.contains(x)))
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b))
    }
}

fn children(p: &AtomPoset, ideal: &Bits) -> Vec<Bits> {
    let mut cands = Bits::new(p.len());
    for &r in p.roots() {
        if !ideal.get(r) {
            cands.set(r);
        }
    }
    for x in ideal.ones() {
        for &(_, t) in p.successors(x) {
            if !ideal.get(t) {
                cands.set(t);
            }
        }
    }
    let mut out = Vec::new();
    for a in cands.ones() {
        if !p.predecessors(a).iter().all(|&x| ideal.get(x)) {
            continue;
        }
        // canonical parent: `a` must be the least maximal atom of the child
        let mut child = ideal.clone();
        child.set(a);
        let smaller_maximal = child
            .ones()
            .take_while(|&x| x < a)
            .any(|x| p.successors(x).iter().all(|&(_, t)| !child.get(t)));
        if !smaller_maximal {
            out.push(child);
        }
    }
    out
}

/// All order ideals of size at most `max_size`, sorted by size and then by
/// their sorted atom-weight lists.
pub fn enumerate_crystals(p: &AtomPoset, max_size: usize, strategy: Strategy) -> Result<Vec<MoltenCrystal>> {
    Ok(enumerate_by_size(p, max_size, strategy)?
        .into_iter()
        .flatten()
        .collect())
}

/// Same as `enumerate_crystals`, binned by size.
pub fn enumerate_by_size(p: &AtomPoset, max_size: usize, strategy: Strategy) -> Result<Vec<Vec<MoltenCrystal>>> {
    if p.depth_bound() < max_size {
        return Err(Error::InsufficientDepth {
            built: p.depth_bound(),
            needed: max_size,
        });
    }
    let mut bins = vec![vec![MoltenCrystal::empty()]];
    let mut frontier = vec![Bits::new(p.len())];
    for _ in 0..max_size {
        let next: Vec<Bits> = strategy
            .map(&frontier, |i| children(p, i))
            .into_iter()
            .flatten()
            .collect();
        let mut level: Vec<MoltenCrystal> = next
            .iter()
            .map(|b| MoltenCrystal {
                atoms: b.ones().collect(),
            })
            .collect();
        sort_canonically(p, &mut level);
        bins.push(level);
        frontier = next;
    }
    Ok(bins)
}

fn sort_canonically(p: &AtomPoset, crystals: &mut [MoltenCrystal]) {
    crystals.sort_by_cached_key(|c| {
        let mut weights: Vec<(&[i64], usize, usize)> = c
            .atoms
            .iter()
            .map(|&i| (p.atom(i).counts.as_slice(), p.atom(i).vertex, i))
            .collect();
        weights.sort();
        weights
            .into_iter()
            .map(|(w, v, i)| (w.to_vec(), v, i))
            .collect::<Vec<_>>()
    });
}

/// Per-atom weights along the slope, tagged by vertex.
pub fn crystal_weights(p: &AtomPoset, c: &MoltenCrystal, s: &Slope) -> Vec<(usize, i64)> {
    c.atoms
        .iter()
        .map(|&i| {
            let a = p.atom(i);
            (a.vertex, s.pair(&a.counts))
        })
        .collect()
}
