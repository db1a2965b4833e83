//! Three-layered diagrams of triples: decomposition, cutting, erasing, export.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Irrep, ModuleExpr, Restriction, SemisimpleAlgebra, Triple};
use crate::dsl;
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    G,
    H,
    V,
}

/// A vertex: `index` points into `g.factors`, `h.factors` or `v.summands`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub layer: Layer,
    pub index: usize,
    pub label: String,
    pub circled: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub triple: Triple,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ComponentKind {
    BaseComponent,
    FiberComponent,
    TrivialIsolated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub kind: ComponentKind,
    pub triple: Triple,
}

/// `g`-factors that coincide with an `h`-factor occurring in no other `g`-factor.
/// They are not drawn.
pub fn absorbed(t: &Triple) -> Vec<bool> {
    let nh = t.h.factors.len();
    let mut uses = vec![0usize; nh];
    for r in &t.embedding {
        for j in r.support() {
            uses[j] += 1;
        }
    }
    t.embedding
        .iter()
        .zip(&t.g.factors)
        .map(|(r, f)| {
            let s = r.support();
            s.len() == 1 && uses[s[0]] == 1 && r.is_identity_of(s[0], nh) && t.h.factors[s[0]] == *f
        })
        .collect()
}

impl Diagram {
    pub fn new(t: &Triple) -> Diagram {
        let mut vertices = Vec::new();
        let mut gid = vec![None; t.g.factors.len()];
        let abs = absorbed(t);
        for (i, f) in t.g.factors.iter().enumerate() {
            if !abs[i] {
                gid[i] = Some(vertices.len());
                vertices.push(Vertex { layer: Layer::G, index: i, label: f.to_string(), circled: false });
            }
        }
        let h0 = vertices.len();
        for (j, f) in t.h.factors.iter().enumerate() {
            vertices.push(Vertex { layer: Layer::H, index: j, label: f.to_string(), circled: false });
            let _ = j;
        }
        let v0 = vertices.len();
        for (k, s) in t.v.summands.iter().enumerate() {
            vertices.push(Vertex { layer: Layer::V, index: k, label: s.label(), circled: false });
        }
        let mut edges = Vec::new();
        for (i, r) in t.embedding.iter().enumerate() {
            let Some(a) = gid[i] else { continue };
            for j in r.support() {
                edges.push(Edge { from: a, to: h0 + j, label: Some(restriction_label(r, j)) });
            }
        }
        for (k, s) in t.v.summands.iter().enumerate() {
            for j in s.support() {
                edges.push(Edge { from: h0 + j, to: v0 + k, label: None });
            }
        }
        let mut d = Diagram { triple: t.clone(), vertices, edges };
        for j in crate::rules::rule_sites(t) {
            d.vertices[h0 + j].circled = true;
        }
        d
    }

    pub fn vertex_of(&self, layer: Layer, index: usize) -> Option<usize> {
        self.vertices.iter().position(|v| v.layer == layer && v.index == index)
    }

    fn components_of(&self, keep: impl Fn(&Edge) -> bool, layers: &[Layer]) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for e in self.edges.iter().filter(|e| keep(e)) {
            let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut root_pos = std::collections::BTreeMap::new();
        for v in 0..n {
            if !layers.contains(&self.vertices[v].layer) {
                continue;
            }
            let r = find(&mut parent, v);
            let p = *root_pos.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[p].push(v);
        }
        groups
    }

    fn split(&self, group: &[usize], with_v: bool) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let mut hs = Vec::new();
        let mut vs = Vec::new();
        let mut gs = Vec::new();
        for &x in group {
            let v = &self.vertices[x];
            match v.layer {
                Layer::G => gs.push(v.index),
                Layer::H => hs.push(v.index),
                Layer::V if with_v => vs.push(v.index),
                Layer::V => {}
            }
        }
        let abs = absorbed(&self.triple);
        for (i, r) in self.triple.embedding.iter().enumerate() {
            if abs[i] && hs.contains(&r.support()[0]) {
                gs.push(i);
            }
        }
        gs.sort();
        (gs, hs, vs)
    }

    /// Connected components, in order of their first vertex.
    pub fn decompose(&self) -> Vec<Component> {
        let all = [Layer::G, Layer::H, Layer::V];
        self.components_of(|_| true, &all)
            .into_iter()
            .map(|grp| {
                let (gs, hs, vs) = self.split(&grp, true);
                let triple = subtriple(&self.triple, &gs, &hs, &vs);
                let trivial = grp.len() == 1 && self.vertices[grp[0]].layer != Layer::G;
                let kind = if trivial {
                    ComponentKind::TrivialIsolated
                } else if vs.is_empty() {
                    ComponentKind::BaseComponent
                } else {
                    ComponentKind::FiberComponent
                };
                Component { kind, triple }
            })
            .collect()
    }

    /// Non-trivial and connected.
    pub fn is_primitive(&self) -> bool {
        let c = self.decompose();
        c.len() == 1 && c[0].kind != ComponentKind::TrivialIsolated
    }

    /// Components of the base graph that are not an isolated `h`-vertex, as pairs.
    pub fn base_components(&self) -> Vec<Triple> {
        self.components_of(|e| self.vertices[e.to].layer == Layer::H, &[Layer::G, Layer::H])
            .into_iter()
            .filter(|grp| !(grp.len() == 1 && self.vertices[grp[0]].layer == Layer::H && {
                let j = self.vertices[grp[0]].index;
                absorbed(&self.triple)
                    .iter()
                    .zip(&self.triple.embedding)
                    .any(|(a, r)| *a && r.support() == vec![j])
            }))
            .map(|grp| {
                let (gs, hs, _) = self.split(&grp, false);
                subtriple(&self.triple, &gs, &hs, &[])
            })
            .collect()
    }

    /// Components of the fiber graph, as triples `(h_c, h_c, V_c)`.
    pub fn fiber_components(&self) -> Vec<Triple> {
        self.components_of(|e| self.vertices[e.from].layer == Layer::H, &[Layer::H, Layer::V])
            .into_iter()
            .map(|grp| {
                let hs: Vec<usize> = grp
                    .iter()
                    .filter(|&&x| self.vertices[x].layer == Layer::H)
                    .map(|&x| self.vertices[x].index)
                    .collect();
                let vs: Vec<usize> = grp
                    .iter()
                    .filter(|&&x| self.vertices[x].layer == Layer::V)
                    .map(|&x| self.vertices[x].index)
                    .collect();
                let sub = subtriple(&self.triple, &[], &hs, &vs);
                Triple::fiber(sub.h, sub.v)
            })
            .collect()
    }

    /// No cycles in the underlying graph.
    pub fn is_tree(&self) -> bool {
        let comps = self.components_of(|_| true, &[Layer::G, Layer::H, Layer::V]).len();
        let distinct: BTreeSet<(usize, usize)> =
            self.edges.iter().map(|e| (e.from.min(e.to), e.from.max(e.to))).collect();
        distinct.len() == self.edges.len() && self.edges.len() + comps == self.vertices.len()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph triple {\n  rankdir=TB;\n");
        for layer in [Layer::G, Layer::H, Layer::V] {
            s.push_str("  { rank=same;");
            for (id, v) in self.vertices.iter().enumerate().filter(|(_, v)| v.layer == layer) {
                let shape = match (layer, v.circled) {
                    (Layer::V, _) => "point",
                    (_, true) => "doublecircle",
                    _ => "plaintext",
                };
                let _ = write!(s, " n{id} [label=\"{}\", shape={shape}, xlabel=\"{}\"];", v.label, v.label);
            }
            s.push_str(" }\n");
        }
        for e in &self.edges {
            match &e.label {
                Some(l) => {
                    let _ = writeln!(s, "  n{} -- n{} [label=\"{}\"];", e.from, e.to, l);
                }
                None => {
                    let _ = writeln!(s, "  n{} -- n{};", e.from, e.to);
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

fn restriction_label(r: &Restriction, j: usize) -> String {
    match r {
        Restriction::Module(pieces) => {
            let ws: Vec<String> = pieces
                .iter()
                .filter(|p| p.weights[j].iter().any(|&x| x != 0))
                .map(|p| {
                    let mut q = Irrep { weights: vec![Vec::new(); p.weights.len()] };
                    q.weights[0] = p.weights[j].clone();
                    q.weights.truncate(1);
                    q.label()
                })
                .collect();
            ws.join("+")
        }
        Restriction::G2Regular(sub, _) => format!("{sub:?}"),
    }
}

fn select_irrep(p: &Irrep, hs: &[usize]) -> Irrep {
    Irrep { weights: hs.iter().map(|&j| p.weights[j].clone()).collect() }
}

/// The triple on the given `g`-factors, `h`-factors and summands.
/// Restrictions keep only the pieces' coordinates on `hs`.
pub fn subtriple(t: &Triple, gs: &[usize], hs: &[usize], vs: &[usize]) -> Triple {
    let h = SemisimpleAlgebra::new(hs.iter().map(|&j| t.h.factors[j]).collect());
    let g = SemisimpleAlgebra::new(gs.iter().map(|&i| t.g.factors[i]).collect());
    let embedding = gs
        .iter()
        .map(|&i| match &t.embedding[i] {
            Restriction::Module(p) => Restriction::Module(p.iter().map(|x| select_irrep(x, hs)).collect()),
            Restriction::G2Regular(s, f) => Restriction::G2Regular(
                *s,
                f.iter().map(|j| hs.iter().position(|x| x == j).expect("factor in component")).collect(),
            ),
        })
        .collect();
    let v = ModuleExpr::new(vs.iter().map(|&k| select_irrep(&t.v.summands[k], hs)).collect());
    Triple { g, h, embedding, v }
}

/// Where an edge at a cut vertex goes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Neighbor {
    G(usize),
    H(usize),
    V(usize),
}

/// Cut at `h`-factor `j`: the edges to `second` move to a new copy of `h_j`.
/// A copy left without `g`-edges becomes a factor of `g` as well.
pub fn cut_h(t: &Triple, j: usize, second: &[Neighbor]) -> Result<Triple, Error> {
    if j >= t.h.factors.len() {
        return Err(Error::Arity { index: j, count: t.h.factors.len() });
    }
    let abs = absorbed(t);
    let mut out = t.clone();
    let jj = out.h.factors.len();
    out.h.factors.push(t.h.factors[j]);
    let rank = t.h.factors[j].rank;
    for r in out.embedding.iter_mut() {
        match r {
            Restriction::Module(p) => p.iter_mut().for_each(|x| x.weights.push(vec![0; rank])),
            Restriction::G2Regular(..) => {}
        }
    }
    for s in out.v.summands.iter_mut() {
        s.weights.push(vec![0; rank]);
    }
    for n in second {
        match *n {
            Neighbor::G(i) => {
                if i >= t.g.factors.len() || abs[i] || !t.embedding[i].support().contains(&j) {
                    return Err(Error::NotApplicable(format!("g-factor {i} is not adjacent to h-factor {j}")));
                }
                match &mut out.embedding[i] {
                    Restriction::Module(p) => p.iter_mut().for_each(|x| x.weights.swap(j, jj)),
                    Restriction::G2Regular(_, f) => f.iter_mut().filter(|x| **x == j).for_each(|x| *x = jj),
                }
            }
            Neighbor::V(k) => {
                if k >= t.v.summands.len() || !t.v.summands[k].support().contains(&j) {
                    return Err(Error::NotApplicable(format!("summand {k} is not adjacent to h-factor {j}")));
                }
                out.v.summands[k].weights.swap(j, jj);
            }
            Neighbor::H(_) => return Err(Error::NotApplicable("h-h edges do not exist".into())),
        }
    }
    for x in [j, jj] {
        if !out.embedding.iter().any(|r| r.support().contains(&x)) {
            out.g.factors.push(out.h.factors[x]);
            out.embedding.push(Restriction::Module(vec![Irrep::fundamental(&out.h, x, 1)]));
        }
    }
    out.validate()?;
    Ok(out)
}

/// Cut at summand `k`: `V_k = U_1 (x) U_2` with `U_2` carrying the factors in `second`
/// becomes `U_1 + U_2`.
pub fn cut_v(t: &Triple, k: usize, second: &[usize]) -> Result<Triple, Error> {
    let s = t
        .v
        .summands
        .get(k)
        .ok_or(Error::Arity { index: k, count: t.v.summands.len() })?;
    let sup = s.support();
    if let Some(j) = second.iter().find(|j| !sup.contains(j)) {
        return Err(Error::NotApplicable(format!("h-factor {j} is not adjacent to summand {k}")));
    }
    let mut u1 = s.clone();
    let mut u2 = Irrep::trivial(&t.h);
    for &j in second {
        u2.weights[j] = s.weights[j].clone();
        u1.weights[j].iter_mut().for_each(|x| *x = 0);
    }
    let mut out = t.clone();
    out.v.summands[k] = u1;
    out.v.summands.push(u2);
    Ok(out)
}

/// Erase `h`–`V` edges `(j, k)`: summand `k` loses its tensor factor for `h_j`.
pub fn erase(t: &Triple, edges: &[(usize, usize)]) -> Result<Triple, Error> {
    let mut out = t.clone();
    for &(j, k) in edges {
        let s = out
            .v
            .summands
            .get_mut(k)
            .ok_or(Error::Arity { index: k, count: t.v.summands.len() })?;
        if j >= s.weights.len() || s.weights[j].iter().all(|&x| x == 0) {
            return Err(Error::NotApplicable(format!("no edge between h-factor {j} and summand {k}")));
        }
        s.weights[j].iter_mut().for_each(|x| *x = 0);
    }
    Ok(out)
}

/// Product of triples: factors and summands side by side.
pub fn product(a: &Triple, b: &Triple) -> Triple {
    let na = a.h.factors.len();
    let nb = b.h.factors.len();
    let widen = |p: &Irrep, left: bool| -> Irrep {
        let (fa, fb) = (&a.h.factors, &b.h.factors);
        let mut w: Vec<Vec<i64>> = Vec::with_capacity(na + nb);
        if left {
            w.extend(p.weights.iter().cloned());
            w.extend(fb.iter().map(|f| vec![0; f.rank]));
        } else {
            w.extend(fa.iter().map(|f| vec![0; f.rank]));
            w.extend(p.weights.iter().cloned());
        }
        Irrep { weights: w }
    };
    let shift = |r: &Restriction, left: bool| match r {
        Restriction::Module(p) => Restriction::Module(p.iter().map(|x| widen(x, left)).collect()),
        Restriction::G2Regular(s, f) => {
            Restriction::G2Regular(*s, f.iter().map(|&j| if left { j } else { j + na }).collect())
        }
    };
    let mut g = a.g.factors.clone();
    g.extend(b.g.factors.iter().cloned());
    let mut h = a.h.factors.clone();
    h.extend(b.h.factors.iter().cloned());
    let mut embedding: Vec<Restriction> = a.embedding.iter().map(|r| shift(r, true)).collect();
    embedding.extend(b.embedding.iter().map(|r| shift(r, false)));
    let mut v: Vec<Irrep> = a.v.summands.iter().map(|x| widen(x, true)).collect();
    v.extend(b.v.summands.iter().map(|x| widen(x, false)));
    Triple { g: SemisimpleAlgebra::new(g), h: SemisimpleAlgebra::new(h), embedding, v: ModuleExpr::new(v) }
}

impl std::fmt::Display for Diagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", dsl::print(&self.triple))
    }
}

/// A cut or an erasure, as drawn by [`random_operation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Operation {
    CutH { factor: usize, second: Vec<Neighbor> },
    CutV { summand: usize, second: Vec<usize> },
    Erase { edges: Vec<(usize, usize)> },
}

impl Operation {
    pub fn apply(&self, t: &Triple) -> Result<Triple, Error> {
        match self {
            Operation::CutH { factor, second } => cut_h(t, *factor, second),
            Operation::CutV { summand, second } => cut_v(t, *summand, second),
            Operation::Erase { edges } => erase(t, edges),
        }
    }
}

fn proper_subset<T: Clone, R: Rng>(xs: &[T], rng: &mut R) -> Vec<T> {
    loop {
        let pick: Vec<T> = xs.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if !pick.is_empty() && pick.len() < xs.len() {
            return pick;
        }
    }
}

/// A random applicable cut or erasure of `t`, if any exists.
pub fn random_operation<R: Rng>(t: &Triple, rng: &mut R) -> Option<Operation> {
    let abs = absorbed(t);
    let mut ops: Vec<Operation> = Vec::new();
    for j in 0..t.h.factors.len() {
        let mut nb: Vec<Neighbor> = (0..t.g.factors.len())
            .filter(|&i| !abs[i] && t.embedding[i].support().contains(&j))
            .map(Neighbor::G)
            .collect();
        nb.extend((0..t.v.summands.len()).filter(|&k| t.v.summands[k].support().contains(&j)).map(Neighbor::V));
        if nb.len() >= 2 {
            ops.push(Operation::CutH { factor: j, second: proper_subset(&nb, rng) });
        }
    }
    let mut edges = Vec::new();
    for (k, s) in t.v.summands.iter().enumerate() {
        let sup = s.support();
        if sup.len() >= 2 {
            ops.push(Operation::CutV { summand: k, second: proper_subset(&sup, rng) });
        }
        edges.extend(sup.into_iter().map(|j| (j, k)));
    }
    if !edges.is_empty() {
        let n = rng.gen_range(1..=edges.len().min(3));
        let mut e: Vec<(usize, usize)> = edges.choose_multiple(rng, n).cloned().collect();
        e.sort();
        ops.push(Operation::Erase { edges: e });
    }
    ops.choose(rng).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_triple;

    #[test]
    fn random_operations_cover_all_kinds() {
        use rand::SeedableRng;
        let t = parse_triple("(sl(4)+sl(2), sl(3)+sl(2), w1 w1' + w1)").unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut seen = [false; 3];
        for _ in 0..200 {
            let op = random_operation(&t, &mut rng).unwrap();
            assert!(op.apply(&t).is_ok(), "{op:?}");
            seen[match op {
                Operation::CutH { .. } => 0,
                Operation::CutV { .. } => 1,
                Operation::Erase { .. } => 2,
            }] = true;
        }
        assert_eq!(seen, [true; 3]);
        assert!(random_operation(&parse_triple("(sl(3), sl(3), 0)").unwrap(), &mut rng).is_none());
    }

    #[test]
    fn defining_restriction_is_not_absorbed() {
        let t = parse_triple("(sl(4)+sp(4), sp(4)+sp(4), w1')").unwrap();
        assert_eq!(absorbed(&t), vec![false, true]);
    }

    #[test]
    fn example_layers() {
        let t = parse_triple("(sl(4)+sl(2), sl(3)+sl(2), w1 w1')").unwrap();
        let d = Diagram::new(&t);
        let layers: Vec<Layer> = d.vertices.iter().map(|v| v.layer).collect();
        assert_eq!(layers, vec![Layer::G, Layer::H, Layer::H, Layer::V]);
        assert_eq!(d.edges.len(), 3);
        assert!(d.is_primitive());
        assert!(d.is_tree());
        assert_eq!(d.base_components().len(), 1);
        assert_eq!(d.fiber_components().len(), 1);
    }

    #[test]
    fn decomposition_kinds() {
        let a = parse_triple("(sl(2n), sp(2n), w1)".replace("2n", "4").as_str()).unwrap();
        let b = parse_triple("(so(7), so(6), 0)").unwrap();
        let p = product(&a, &b);
        p.validate().unwrap();
        assert_eq!(Diagram::new(&p).decompose().len(), 2);
        let g = parse_triple("(sl(2), 0, 0)").unwrap();
        let c = Diagram::new(&g).decompose();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].kind, ComponentKind::BaseComponent);
        let k = parse_triple("(sl(3), sl(3), 0)").unwrap();
        let c = Diagram::new(&k).decompose();
        assert_eq!(c[0].kind, ComponentKind::TrivialIsolated);
        assert!(!Diagram::new(&k).is_primitive());
    }

    #[test]
    fn cuts_and_erasing() {
        let t = parse_triple("(sl(5), sl(3)+sl(2), w1 w1')").unwrap();
        let c = cut_v(&t, 0, &[1]).unwrap();
        assert_eq!(c.v.summands.len(), 2);
        assert_eq!(c.v.dim(&c.h), 5);
        // all g-edges on the first copy: (g, h + h_j, V)
        let c = cut_h(&t, 1, &[Neighbor::V(0)]).unwrap();
        assert_eq!(c.h.factors.len(), 3);
        assert_eq!(c.g.factors.len(), 2);
        let e = erase(&t, &[(0, 0)]).unwrap();
        assert_eq!(e.v.dim(&e.h), 2);
        assert!(erase(&t, &[(0, 0), (0, 0)]).is_err());
    }
}
