use std::fmt::Write as _;

use super::{Alphabet, GenId};
use crate::error::{invalid, Result};
use crate::linalg::{sign, Scalar};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    G(GenId),
    /// Leaf with a 0-based label.
    L(u32),
}

/// A tree in shuffle normal form, stored in preorder: every vertex is
/// followed by its children, and children appear in increasing order of
/// their minimal leaf label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree(pub Vec<Node>);

impl Tree {
    pub fn leaf(label: u32) -> Tree {
        Tree(vec![Node::L(label)])
    }

    pub fn is_unit(&self) -> bool {
        self.0.len() == 1
    }

    /// A chain of unary generators, root first.
    pub fn from_word(word: &[GenId]) -> Tree {
        let mut nodes: Vec<Node> = word.iter().map(|&g| Node::G(g)).collect();
        nodes.push(Node::L(0));
        Tree(nodes)
    }

    /// The generators along a chain of unary vertices, root first.
    pub fn as_word(&self) -> Option<Vec<GenId>> {
        let (last, rest) = self.0.split_last()?;
        if *last != Node::L(0) {
            return None;
        }
        rest.iter()
            .map(|n| match n {
                Node::G(g) => Some(*g),
                Node::L(_) => None,
            })
            .collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = GenId> + '_ {
        self.0.iter().filter_map(|n| match n {
            Node::G(g) => Some(*g),
            Node::L(_) => None,
        })
    }

    pub fn weight(&self) -> usize {
        self.vertices().count()
    }

    pub fn arity(&self) -> usize {
        self.0.iter().filter(|n| matches!(n, Node::L(_))).count()
    }

    pub fn degree(&self, alpha: &Alphabet) -> usize {
        self.vertices().map(|g| alpha.gen(g).degree).sum()
    }

    pub fn display(&self, alpha: &Alphabet) -> String {
        let mut out = String::new();
        let mut pos = 0;
        self.write(alpha, &mut pos, &mut out);
        out
    }

    fn write(&self, alpha: &Alphabet, pos: &mut usize, out: &mut String) {
        let node = self.0[*pos];
        *pos += 1;
        match node {
            Node::L(l) => {
                let _ = write!(out, "L{}", l + 1);
            }
            Node::G(g) => {
                let info = alpha.gen(g);
                out.push_str(&info.name);
                out.push('(');
                for i in 0..info.arity() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    self.write(alpha, pos, out);
                }
                out.push(')');
            }
        }
    }
}

/// A planar tree whose generator vertices carry their position in the
/// tensor product they came from. Normalizing it produces shuffle trees with
/// the Koszul sign of the reordering.
#[derive(Clone, Debug, Default)]
pub(crate) struct Planar {
    nodes: Vec<PNode>,
}

#[derive(Clone, Debug)]
struct PNode {
    kind: Node,
    children: Vec<usize>,
    key: usize,
}

struct Slot {
    node: Node,
    key: usize,
    odd: bool,
    /// alternatives for a generator vertex after reordering its children
    alts: Vec<(GenId, Scalar)>,
}

impl Planar {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn leaf(&mut self, label: u32) -> usize {
        self.nodes.push(PNode {
            kind: Node::L(label),
            children: Vec::new(),
            key: 0,
        });
        self.nodes.len() - 1
    }

    pub fn vertex(&mut self, g: GenId, key: usize, children: Vec<usize>) -> usize {
        self.nodes.push(PNode {
            kind: Node::G(g),
            children,
            key,
        });
        self.nodes.len() - 1
    }

    /// Copies a shuffle tree into the arena. Generator vertices get keys
    /// `*next_key, *next_key + 1, …` in preorder; leaves are handed to `leaf`.
    pub fn insert(
        &mut self,
        tree: &Tree,
        alpha: &Alphabet,
        next_key: &mut usize,
        leaf: &mut dyn FnMut(&mut Planar, u32) -> usize,
    ) -> usize {
        let mut pos = 0;
        self.insert_at(tree, alpha, &mut pos, next_key, leaf)
    }

    fn insert_at(
        &mut self,
        tree: &Tree,
        alpha: &Alphabet,
        pos: &mut usize,
        next_key: &mut usize,
        leaf: &mut dyn FnMut(&mut Planar, u32) -> usize,
    ) -> usize {
        let node = tree.0[*pos];
        *pos += 1;
        match node {
            Node::L(l) => leaf(self, l),
            Node::G(g) => {
                let key = *next_key;
                *next_key += 1;
                let k = alpha.gen(g).arity();
                let children = (0..k)
                    .map(|_| self.insert_at(tree, alpha, pos, next_key, leaf))
                    .collect();
                self.vertex(g, key, children)
            }
        }
    }

    fn canon(&self, v: usize, alpha: &Alphabet, out: &mut Vec<Slot>) -> u32 {
        let node = &self.nodes[v];
        match node.kind {
            Node::L(l) => {
                out.push(Slot {
                    node: node.kind,
                    key: 0,
                    odd: false,
                    alts: Vec::new(),
                });
                l
            }
            Node::G(g) => {
                let at = out.len();
                out.push(Slot {
                    node: node.kind,
                    key: node.key,
                    odd: alpha.gen(g).degree % 2 == 1,
                    alts: Vec::new(),
                });
                let mut parts: Vec<(u32, Vec<Slot>)> = node
                    .children
                    .iter()
                    .map(|&c| {
                        let mut sub = Vec::new();
                        let m = self.canon(c, alpha, &mut sub);
                        (m, sub)
                    })
                    .collect();
                let mut order: Vec<usize> = (0..parts.len()).collect();
                order.sort_by_key(|&i| parts[i].0);
                let tau = Permutation::from_images(order.clone()).expect("sorting order");
                out[at].alts = if tau.is_identity() {
                    vec![(g, crate::linalg::one())]
                } else {
                    alpha.act(g, &tau).iter().map(|(h, c)| (h as GenId, c.clone())).collect()
                };
                let min = order.first().map(|&i| parts[i].0).unwrap_or(u32::MAX);
                for &i in &order {
                    out.append(&mut parts[i].1);
                }
                min
            }
        }
    }

    /// Normal form of the tree rooted at `root` as a combination of shuffle trees.
    pub fn normalize(&self, root: usize, alpha: &Alphabet) -> Vec<(Tree, Scalar)> {
        let mut slots = Vec::new();
        self.canon(root, alpha, &mut slots);
        let odd_keys: Vec<usize> = slots.iter().filter(|s| s.odd).map(|s| s.key).collect();
        let mut inversions = 0;
        for i in 0..odd_keys.len() {
            for j in i + 1..odd_keys.len() {
                if odd_keys[i] > odd_keys[j] {
                    inversions += 1;
                }
            }
        }
        let mut out = vec![(Vec::with_capacity(slots.len()), sign(inversions % 2 == 1))];
        for slot in &slots {
            match slot.node {
                Node::L(_) => {
                    for (t, _) in &mut out {
                        t.push(slot.node);
                    }
                }
                Node::G(_) => {
                    if slot.alts.len() == 1 {
                        let (h, c) = &slot.alts[0];
                        for (t, coef) in &mut out {
                            t.push(Node::G(*h));
                            *coef *= c;
                        }
                    } else {
                        let mut next = Vec::with_capacity(out.len() * slot.alts.len());
                        for (t, coef) in &out {
                            for (h, c) in &slot.alts {
                                let mut t = t.clone();
                                t.push(Node::G(*h));
                                next.push((t, coef * c));
                            }
                        }
                        out = next;
                    }
                }
            }
        }
        out.into_iter().map(|(t, c)| (Tree(t), c)).collect()
    }
}

/// Parses tree notation such as `m2[12](L1, m2[12](L2, L3))`. The result is
/// planar; leaves keep their labels.
pub(crate) fn parse_planar(text: &str, alpha: &Alphabet) -> Result<(Planar, usize)> {
    let mut p = Planar::new();
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut key = 0;
    let root = parse_node(&chars, &mut pos, alpha, &mut p, &mut key)?;
    skip_ws(&chars, &mut pos);
    if pos != chars.len() {
        return Err(invalid(format!("trailing input in tree {text}")));
    }
    Ok((p, root))
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn parse_node(chars: &[char], pos: &mut usize, alpha: &Alphabet, p: &mut Planar, key: &mut usize) -> Result<usize> {
    skip_ws(chars, pos);
    let start = *pos;
    let mut depth = 0;
    while *pos < chars.len() {
        match chars[*pos] {
            '[' => depth += 1,
            ']' => depth -= 1,
            '(' | ',' | ')' if depth == 0 => break,
            _ => {}
        }
        *pos += 1;
    }
    let name: String = chars[start..*pos].iter().collect::<String>().trim().to_string();
    if let Some(g) = alpha.id(&name) {
        let my_key = *key;
        *key += 1;
        let k = alpha.gen(g).arity();
        skip_ws(chars, pos);
        if chars.get(*pos) != Some(&'(') {
            return Err(invalid(format!("expected ( after {name}")));
        }
        *pos += 1;
        let mut children = Vec::new();
        for i in 0..k {
            if i > 0 {
                skip_ws(chars, pos);
                if chars.get(*pos) != Some(&',') {
                    return Err(invalid(format!("expected , in children of {name}")));
                }
                *pos += 1;
            }
            children.push(parse_node(chars, pos, alpha, p, key)?);
        }
        skip_ws(chars, pos);
        if chars.get(*pos) != Some(&')') {
            return Err(invalid(format!("expected ) after children of {name}")));
        }
        *pos += 1;
        Ok(p.vertex(g, my_key, children))
    } else if let Some(l) = name.strip_prefix('L').and_then(|d| d.parse::<u32>().ok()) {
        if l == 0 {
            return Err(invalid("leaf labels start at 1"));
        }
        Ok(p.leaf(l - 1))
    } else {
        Err(invalid(format!("unknown generator {name}")))
    }
}
