//! Equivalent literal substitution via the binary implication graph.

use std::collections::{BTreeMap, BTreeSet};

use crate::formula::{Added, ClauseId, Formula};
use crate::lit::{Lit, Var};
use crate::reconstruct::{EeTable, UndoStack, UndoStep};

/// Directed graph over literals with an edge `a -> b` for every binary clause
/// `[!a, b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicationGraph {
    num_vars: u32,
    succ: Vec<Vec<Lit>>,
}

impl ImplicationGraph {
    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Successors of `lit`, sorted.
    pub fn successors(&self, lit: Lit) -> &[Lit] {
        self.succ.get(lit.code()).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn has_edge(&self, from: Lit, to: Lit) -> bool {
        self.successors(from).binary_search(&to).is_ok()
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// `a -> b` iff `!b -> !a`.
    pub fn is_skew_symmetric(&self) -> bool {
        self.nodes()
            .all(|a| self.successors(a).iter().all(|&b| self.has_edge(!b, !a)))
    }

    /// All literals of the variable range in ascending order.
    pub fn nodes(&self) -> impl Iterator<Item = Lit> {
        (1..=self.num_vars).flat_map(|v| [Var::new(v).positive(), Var::new(v).negative()])
    }
}

pub fn build_big(f: &Formula) -> ImplicationGraph {
    let n = f.num_vars();
    let mut succ = vec![Vec::new(); 2 * (n as usize + 1)];
    for c in f.active_clauses() {
        if let [a, b] = *c {
            succ[(!a).code()].push(b);
            succ[(!b).code()].push(a);
        }
    }
    for s in &mut succ {
        s.sort_unstable();
        s.dedup();
    }
    ImplicationGraph { num_vars: n, succ }
}

/// Sign-normalized classes of equivalent literals. In each class the first
/// literal is the positive literal of the smallest variable; the remaining
/// literals are sorted by variable and each is equivalent to the first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivalenceClasses {
    classes: Vec<Vec<Lit>>,
}

/// Result of an equivalence search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalences {
    Classes(EquivalenceClasses),
    /// Some literal is equivalent to its own negation.
    Contradiction(Var),
}

impl EquivalenceClasses {
    pub fn classes(&self) -> &[Vec<Lit>] {
        &self.classes
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn retain(&mut self, keep: impl FnMut(&Vec<Lit>) -> bool) {
        self.classes.retain(keep);
    }

    /// Groups pairwise equivalences `a == b` into normalized classes.
    pub fn from_pairs(pairs: &[(Lit, Lit)]) -> Equivalences {
        // union-find with parity: value(v) = value(parent) xor parity
        let mut parent: BTreeMap<Var, (Var, bool)> = BTreeMap::new();
        fn find(parent: &mut BTreeMap<Var, (Var, bool)>, v: Var) -> (Var, bool) {
            let (p, par) = *parent.entry(v).or_insert((v, false));
            if p == v {
                return (v, false);
            }
            let (root, rp) = find(parent, p);
            parent.insert(v, (root, par ^ rp));
            (root, par ^ rp)
        }
        for &(a, b) in pairs {
            let (ra, pa) = find(&mut parent, a.var());
            let (rb, pb) = find(&mut parent, b.var());
            let rel = a.is_negative() ^ b.is_negative();
            if ra == rb {
                if pa ^ pb != rel {
                    return Equivalences::Contradiction(a.var());
                }
            } else {
                parent.insert(rb, (ra, pa ^ pb ^ rel));
            }
        }
        let vars: Vec<Var> = parent.keys().copied().collect();
        let mut groups: BTreeMap<Var, Vec<(Var, bool)>> = BTreeMap::new();
        for v in vars {
            let (root, par) = find(&mut parent, v);
            groups.entry(root).or_default().push((v, par));
        }
        let mut classes: Vec<Vec<Lit>> = groups
            .into_values()
            .filter(|g| g.len() > 1)
            .map(|mut g| {
                g.sort();
                let rep_par = g[0].1;
                g.into_iter().map(|(v, p)| v.lit(p == rep_par)).collect()
            })
            .collect();
        classes.sort_by_key(|c| c[0].var());
        Equivalences::Classes(EquivalenceClasses { classes })
    }
}

/// Iterative Tarjan over literal nodes in ascending order.
fn strongly_connected_components(g: &ImplicationGraph) -> Vec<Vec<Lit>> {
    const UNVISITED: usize = usize::MAX;
    let size = 2 * (g.num_vars as usize + 1);
    let mut index = vec![UNVISITED; size];
    let mut low = vec![0usize; size];
    let mut on_stack = vec![false; size];
    let mut stack: Vec<Lit> = Vec::new();
    let mut components = Vec::new();
    let mut counter = 0;

    for root in g.nodes() {
        if index[root.code()] != UNVISITED {
            continue;
        }
        // (node, next successor position)
        let mut call: Vec<(Lit, usize)> = vec![(root, 0)];
        index[root.code()] = counter;
        low[root.code()] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root.code()] = true;

        while let Some(&mut (node, ref mut pos)) = call.last_mut() {
            let succ = g.successors(node);
            if *pos < succ.len() {
                let next = succ[*pos];
                *pos += 1;
                if index[next.code()] == UNVISITED {
                    index[next.code()] = counter;
                    low[next.code()] = counter;
                    counter += 1;
                    stack.push(next);
                    on_stack[next.code()] = true;
                    call.push((next, 0));
                } else if on_stack[next.code()] {
                    low[node.code()] = low[node.code()].min(index[next.code()]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent.code()] = low[parent.code()].min(low[node.code()]);
            }
            if low[node.code()] == index[node.code()] {
                let mut component = Vec::new();
                loop {
                    let top = stack.pop().expect("node is on the stack");
                    on_stack[top.code()] = false;
                    component.push(top);
                    if top == node {
                        break;
                    }
                }
                components.push(component);
            }
        }
    }
    components
}

/// Strongly connected components of size > 1 as equivalence classes.
pub fn find_equivalences(g: &ImplicationGraph) -> Equivalences {
    let mut classes = Vec::new();
    for mut component in strongly_connected_components(g) {
        if component.len() < 2 {
            continue;
        }
        component.sort_unstable();
        if let Some(w) = component.windows(2).find(|w| w[0].var() == w[1].var()) {
            return Equivalences::Contradiction(w[0].var());
        }
        // each component has a mirror; keep the one whose smallest variable
        // appears positively
        if component[0].is_positive() {
            classes.push(component);
        }
    }
    classes.sort_by_key(|c| c[0].var());
    Equivalences::Classes(EquivalenceClasses { classes })
}

/// Substitutes every class member by its representative. Clauses that turn
/// into tautologies are deleted. Pushes an `ee` marker and records the
/// classes in `ee_table` when there is anything to apply. Returns the number
/// of replaced literal occurrences.
pub fn apply_equivalences(
    f: &mut Formula,
    e: &EquivalenceClasses,
    undo: &mut UndoStack,
    ee_table: &mut EeTable,
) -> usize {
    if e.is_empty() {
        return 0;
    }
    let mut substitute: BTreeMap<Var, Lit> = BTreeMap::new();
    for class in e.classes() {
        let rep = class[0];
        for &m in &class[1..] {
            substitute.insert(m.var(), if m.is_positive() { rep } else { !rep });
        }
    }
    let map = |l: Lit| match substitute.get(&l.var()) {
        Some(&r) if l.is_positive() => Some(r),
        Some(&r) => Some(!r),
        None => None,
    };

    let affected: BTreeSet<ClauseId> = substitute
        .keys()
        .flat_map(|v| {
            f.occurrences(v.positive())
                .iter()
                .chain(f.occurrences(v.negative()))
                .copied()
                .collect::<Vec<_>>()
        })
        .collect();

    let mut replaced = 0;
    for id in affected {
        let lits: Vec<Lit> = f
            .clause(id)
            .lits()
            .iter()
            .map(|&l| match map(l) {
                Some(r) => {
                    replaced += 1;
                    r
                }
                None => l,
            })
            .collect();
        if f.replace(id, &lits) == Added::Tautology {
            continue;
        }
    }
    undo.push(UndoStep::Ee);
    ee_table.merge(e.classes());
    replaced
}
