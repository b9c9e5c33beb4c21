//! Rooted planar trees with every internal vertex of arity at least two.
//!
//! A tree is encoded canonically by its preorder arity sequence (a tail
//! has arity 0). The textual form nests parentheses with `*` for tails:
//! `(* (* * * *) *)` is a ternary root whose middle input is a 4-ary
//! vertex.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::scalar::Rational;
use crate::tensor::{koszul_apply, Homog, SignRule, SlotOp};
use crate::transfer::Contraction;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlanarTree {
    Leaf,
    Node(Vec<PlanarTree>),
}

impl PlanarTree {
    /// Number of tails.
    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(children) => children.iter().map(PlanarTree::leaves).sum(),
        }
    }

    /// Number of internal vertices.
    pub fn vertices(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(children) => 1 + children.iter().map(PlanarTree::vertices).sum::<usize>(),
        }
    }

    /// Preorder arity sequence.
    pub fn encoding(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.encode_into(&mut out);
        out
    }

    fn encode_into(&self, out: &mut Vec<usize>) {
        match self {
            PlanarTree::Leaf => out.push(0),
            PlanarTree::Node(children) => {
                out.push(children.len());
                for c in children {
                    c.encode_into(out);
                }
            }
        }
    }

    /// Rebuilds a tree from its preorder arity sequence.
    pub fn from_encoding(code: &[usize]) -> Result<PlanarTree, Error> {
        fn take(code: &[usize], pos: &mut usize) -> Result<PlanarTree, Error> {
            let arity = *code
                .get(*pos)
                .ok_or_else(|| Error::Parse("truncated tree encoding".into()))?;
            *pos += 1;
            match arity {
                0 => Ok(PlanarTree::Leaf),
                1 => Err(Error::Parse("unary vertex in tree encoding".into())),
                k => (0..k)
                    .map(|_| take(code, pos))
                    .collect::<Result<Vec<_>, _>>()
                    .map(PlanarTree::Node),
            }
        }
        let mut pos = 0;
        let tree = take(code, &mut pos)?;
        if pos != code.len() {
            return Err(Error::Parse("trailing entries in tree encoding".into()));
        }
        Ok(tree)
    }

    pub fn is_binary(&self) -> bool {
        match self {
            PlanarTree::Leaf => true,
            PlanarTree::Node(children) => children.len() == 2 && children.iter().all(PlanarTree::is_binary),
        }
    }

    /// Internal vertices on the path from the tail at `position` (1-based)
    /// down to the root, together with the branch taken at each, listed from
    /// the root upward: `false` for the leftmost input, `true` otherwise.
    fn path_from_tail(&self, position: usize) -> Vec<bool> {
        let mut out = Vec::new();
        let mut node = self;
        let mut pos = position;
        while let PlanarTree::Node(children) = node {
            let mut offset = 0;
            for (idx, c) in children.iter().enumerate() {
                let l = c.leaves();
                if pos <= offset + l {
                    out.push(idx > 0);
                    node = c;
                    pos -= offset;
                    break;
                }
                offset += l;
            }
        }
        out
    }

    /// The L/R word of a binary tree along the path from the tail at
    /// `position`, read from the root upward.
    pub fn lr_word(&self, position: usize) -> String {
        self.path_from_tail(position)
            .into_iter()
            .map(|right| if right { 'R' } else { 'L' })
            .collect()
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarTree::Leaf => f.write_str("*"),
            PlanarTree::Node(children) => {
                f.write_str("(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for PlanarTree {
    type Err = Error;

    /// Whitespace is insignificant, so `( * * )` and `(* *)` agree.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        fn parse(chars: &[char], pos: &mut usize) -> Result<PlanarTree, Error> {
            match chars.get(*pos) {
                Some('*') => {
                    *pos += 1;
                    Ok(PlanarTree::Leaf)
                }
                Some('(') => {
                    *pos += 1;
                    let mut children = Vec::new();
                    while chars.get(*pos) != Some(&')') {
                        if *pos >= chars.len() {
                            return Err(Error::Parse("unbalanced parentheses".into()));
                        }
                        children.push(parse(chars, pos)?);
                    }
                    *pos += 1;
                    if children.len() < 2 {
                        return Err(Error::Parse("vertex with fewer than two inputs".into()));
                    }
                    Ok(PlanarTree::Node(children))
                }
                other => Err(Error::Parse(format!("unexpected {other:?} in tree"))),
            }
        }
        let mut pos = 0;
        let tree = parse(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::Parse("trailing input after tree".into()));
        }
        Ok(tree)
    }
}

/// Memoized tree sets `T_1..=T_n`.
#[derive(Clone, Debug, Default)]
pub struct TreeCatalog {
    by_leaves: Vec<Vec<PlanarTree>>,
}

impl TreeCatalog {
    pub fn up_to(n: usize) -> TreeCatalog {
        let mut by_leaves: Vec<Vec<PlanarTree>> = vec![Vec::new(), vec![PlanarTree::Leaf]];
        for m in 2..=n {
            let mut trees = Vec::new();
            for k in 2..=m {
                for parts in crate::tensor::compositions(m, k) {
                    let mut partial: Vec<Vec<PlanarTree>> = vec![Vec::new()];
                    for &p in &parts {
                        let mut next = Vec::new();
                        for prefix in &partial {
                            for t in &by_leaves[p] {
                                let mut v = prefix.clone();
                                v.push(t.clone());
                                next.push(v);
                            }
                        }
                        partial = next;
                    }
                    trees.extend(partial.into_iter().map(PlanarTree::Node));
                }
            }
            trees.sort_by_key(PlanarTree::encoding);
            by_leaves.push(trees);
        }
        by_leaves.truncate(n.max(1) + 1);
        TreeCatalog { by_leaves }
    }

    pub fn trees(&self, n: usize) -> &[PlanarTree] {
        &self.by_leaves[n]
    }
}

/// `T_n` in canonical-encoding order.
pub fn enumerate_trees(n: usize) -> Vec<PlanarTree> {
    if n == 0 {
        return Vec::new();
    }
    TreeCatalog::up_to(n).trees(n).to_vec()
}

/// `|T_n|` without enumerating: with `Q(m)` the number of forests of
/// total `m` tails, `|T_n| = Σ_{m<n} |T_m| Q(n-m)`.
pub fn count_trees(n: usize) -> BigUint {
    if n == 0 {
        return BigUint::zero();
    }
    let mut s = vec![BigUint::zero(), BigUint::one()];
    let mut q = vec![BigUint::one(), BigUint::one()];
    for m in 2..=n {
        let sm: BigUint = (1..m).map(|j| &s[j] * &q[m - j]).sum();
        q.push(&sm * 2u32);
        s.push(sm);
    }
    s.swap_remove(n)
}

/// Binary trees with `leaves` tails whose path from the tail at `position`
/// to the root passes through every vertex.
pub fn path_trees(leaves: usize, position: usize) -> Result<Vec<PlanarTree>, Error> {
    if position == 0 || position > leaves {
        return Err(Error::PositionOutOfRange { position, leaves });
    }
    Ok(enumerate_trees(leaves)
        .into_iter()
        .filter(|t| t.is_binary() && t.path_from_tail(position).len() == leaves - 1)
        .collect())
}

/// Evaluates the subtree below a non-root vertex: `g` on a tail,
/// `H ∘ m_k^A` on an internal vertex.
fn eval_inner<C: Contraction>(
    ctx: &C,
    tree: &PlanarTree,
    inputs: &[Homog<C::B>],
    rule: SignRule,
) -> Homog<C::A> {
    let degree: i64 = inputs.iter().map(|b| b.degree).sum();
    match tree {
        PlanarTree::Leaf => Homog::new(ctx.g(&inputs[0].value), degree),
        PlanarTree::Node(children) => {
            let product = eval_vertex(ctx, children, inputs, rule);
            Homog::new(ctx.h(&product), degree)
        }
    }
}

/// `m_k^A` applied to the evaluated children, with Koszul signs from the
/// slotwise application of the child operators (all even here).
fn eval_vertex<C: Contraction>(
    ctx: &C,
    children: &[PlanarTree],
    inputs: &[Homog<C::B>],
    rule: SignRule,
) -> C::A {
    let mut groups = Vec::with_capacity(children.len());
    let mut start = 0;
    for c in children {
        let l = c.leaves();
        groups.push(Homog::new(inputs[start..start + l].to_vec(), inputs[start..start + l].iter().map(|b| b.degree).sum()));
        start += l;
    }
    let ops: Vec<SlotOp<'_, Vec<Homog<C::B>>, C::A>> = children
        .iter()
        .map(|c| SlotOp::new(0, move |w: &Homog<Vec<Homog<C::B>>>| eval_inner(ctx, c, &w.value, rule)))
        .collect();
    let (negative, args) = koszul_apply(&ops, &groups, rule).expect("one operator per child");
    let mut out = ctx.product(&args).unwrap_or_else(|| ctx.zero_a());
    if negative {
        out = ctx.scale_a(&out, &-Rational::one());
    }
    out
}

fn check_arity(tree: &PlanarTree, got: usize) -> Result<(), Error> {
    let expected = tree.leaves();
    if expected != got || matches!(tree, PlanarTree::Leaf) {
        return Err(Error::ArityMismatch { expected, got });
    }
    Ok(())
}

/// `m_T`: `g` on tails, `m_k^A` on vertices, `H` on interior edges and
/// `f` at the root.
pub fn evaluate_tree_m<C: Contraction>(
    ctx: &C,
    tree: &PlanarTree,
    inputs: &[Homog<C::B>],
    rule: SignRule,
) -> Result<C::B, Error> {
    check_arity(tree, inputs.len())?;
    let PlanarTree::Node(children) = tree else { unreachable!() };
    Ok(ctx.f(&eval_vertex(ctx, children, inputs, rule)))
}

/// `G_T`: as `m_T` with `H` at the root instead of `f`.
pub fn evaluate_tree_g<C: Contraction>(
    ctx: &C,
    tree: &PlanarTree,
    inputs: &[Homog<C::B>],
    rule: SignRule,
) -> Result<C::A, Error> {
    check_arity(tree, inputs.len())?;
    let PlanarTree::Node(children) = tree else { unreachable!() };
    Ok(ctx.h(&eval_vertex(ctx, children, inputs, rule)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_trees(1).len(), 1);
        assert_eq!(enumerate_trees(2).len(), 1);
        assert_eq!(enumerate_trees(3).len(), 3);
        assert_eq!(enumerate_trees(4).len(), 11);
    }

    #[test]
    fn two_leaf_tree_text() {
        assert_eq!(enumerate_trees(2)[0].to_string(), "(* *)");
    }

    #[test]
    fn figure_shape_round_trip() {
        let t: PlanarTree = "( * ( * * * * ) * )".parse().unwrap();
        assert_eq!(t.to_string(), "(* (* * * *) *)");
        assert_eq!(t.leaves(), 6);
        assert_eq!(t.encoding(), vec![3, 0, 4, 0, 0, 0, 0, 0]);
        assert_eq!(PlanarTree::from_encoding(&t.encoding()).unwrap(), t);
        assert!("(*)".parse::<PlanarTree>().is_err());
        assert!("(* *".parse::<PlanarTree>().is_err());
        assert!(PlanarTree::from_encoding(&[1, 0]).is_err());
    }

    #[test]
    fn path_tree_examples() {
        assert_eq!(path_trees(2, 1).unwrap().len(), 1);
        let left = path_trees(3, 1).unwrap();
        assert_eq!(left.len(), 1);
        assert_eq!(left[0].to_string(), "((* *) *)");
        assert!(path_trees(3, 0).is_err());
        assert!(path_trees(3, 4).is_err());
    }

    #[test]
    fn lr_words_count_right_turns() {
        for t in path_trees(5, 3).unwrap() {
            let w = t.lr_word(3);
            assert_eq!(w.len(), 4);
            assert_eq!(w.chars().filter(|&c| c == 'R').count(), 2);
        }
    }
}
