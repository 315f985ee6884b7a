use std::collections::{BTreeSet, HashMap, VecDeque};

use super::model::{fire, Count, Marking, Net, OmegaMarking};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmNode {
    pub marking: OmegaMarking,
    pub parent: Option<usize>,
    pub transition: Option<usize>,
}

/// Karp–Miller tree. Nodes whose marking already occurs in the tree are not
/// repeated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmAnalysis {
    pub nodes: Vec<KmNode>,
    /// Maximal ω-markings of the tree.
    pub cover_set: Vec<OmegaMarking>,
    pub bounded: bool,
    /// Inclusion-maximal sets of places that are ω together in some node.
    pub unbounded_place_sets: Vec<BTreeSet<usize>>,
}

fn dominates(a: &[Count], b: &[Count]) -> bool {
    a.iter().zip(b).all(|(x, y)| match (x, y) {
        (Count::Omega, _) => true,
        (Count::Fin(_), Count::Omega) => false,
        (Count::Fin(x), Count::Fin(y)) => x >= y,
    })
}

pub fn km_analyze(net: &Net) -> KmAnalysis {
    let mut nodes = vec![KmNode {
        marking: net.initial().to_vec(),
        parent: None,
        transition: None,
    }];
    let mut seen: HashMap<OmegaMarking, usize> = HashMap::from([(net.initial().to_vec(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for t in 0..net.transitions().len() {
            let Some(mut m) = net.fire_omega(&nodes[i].marking, t) else {
                continue;
            };
            let mut a = Some(i);
            while let Some(k) = a {
                let anc = &nodes[k].marking;
                if m != *anc && dominates(&m, anc) {
                    for (x, y) in m.iter_mut().zip(anc) {
                        if *x > *y {
                            *x = Count::Omega;
                        }
                    }
                }
                a = nodes[k].parent;
            }
            if seen.contains_key(&m) {
                continue;
            }
            nodes.push(KmNode {
                marking: m.clone(),
                parent: Some(i),
                transition: Some(t),
            });
            seen.insert(m, nodes.len() - 1);
            queue.push_back(nodes.len() - 1);
        }
    }
    let mut cover_set: Vec<OmegaMarking> = Vec::new();
    for n in &nodes {
        if !nodes.iter().any(|o| o.marking != n.marking && dominates(&o.marking, &n.marking))
            && !cover_set.contains(&n.marking)
        {
            cover_set.push(n.marking.clone());
        }
    }
    let omega_sets: Vec<BTreeSet<usize>> = nodes
        .iter()
        .map(|n| (0..n.marking.len()).filter(|p| n.marking[*p] == Count::Omega).collect())
        .collect();
    let mut unbounded_place_sets: Vec<BTreeSet<usize>> = Vec::new();
    for s in &omega_sets {
        if !s.is_empty()
            && !omega_sets.iter().any(|o| o != s && s.is_subset(o))
            && !unbounded_place_sets.contains(s)
        {
            unbounded_place_sets.push(s.clone());
        }
    }
    unbounded_place_sets.sort();
    KmAnalysis {
        bounded: unbounded_place_sets.is_empty(),
        nodes,
        cover_set,
        unbounded_place_sets,
    }
}

impl KmAnalysis {
    pub fn covers(&self, m: &[u64]) -> bool {
        let target: Vec<Count> = m.iter().map(|x| Count::Fin(*x)).collect();
        self.cover_set.iter().any(|c| dominates(c, &target))
    }

    /// Largest token count per place over the tree.
    pub fn place_bounds(&self) -> Vec<Count> {
        let n = self.nodes[0].marking.len();
        (0..n)
            .map(|p| self.nodes.iter().map(|x| x.marking[p]).max().unwrap_or(Count::Fin(0)))
            .collect()
    }

    pub fn simultaneously_unbounded(&self, places: &BTreeSet<usize>) -> bool {
        if places.is_empty() {
            return true;
        }
        self.unbounded_place_sets.iter().any(|s| places.is_subset(s))
    }
}

/// Whether some reachable marking covers `m`.
pub fn coverable(net: &Net, m: &[u64]) -> bool {
    km_analyze(net).covers(m)
}

/// A firing sequence reaching a marking that covers `target`. Markings
/// dominated by one already visited are pruned. `None` when nothing is
/// found within `max_states` markings.
pub fn find_cover(net: &Net, target: &[u64], max_states: usize) -> Option<Vec<usize>> {
    let m0 = net.initial_marking()?;
    let covers = |m: &[u64]| m.iter().zip(target).all(|(a, b)| a >= b);
    let mut visited: Vec<(Marking, Option<(usize, usize)>)> = vec![(m0, None)];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if covers(&visited[i].0) {
            let mut run = Vec::new();
            let mut k = i;
            while let Some((parent, t)) = visited[k].1 {
                run.push(t);
                k = parent;
            }
            run.reverse();
            return Some(run);
        }
        for t in 0..net.transitions().len() {
            let Some(m) = fire(net, &visited[i].0, t) else {
                continue;
            };
            if visited.iter().any(|(v, _)| m.iter().zip(v).all(|(a, b)| a <= b)) {
                continue;
            }
            if visited.len() >= max_states {
                return None;
            }
            visited.push((m, Some((i, t))));
            queue.push_back(visited.len() - 1);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReachVerdict {
    Yes(Vec<usize>),
    /// Every reachable marking was explored.
    NoWithinBound,
    Unknown,
}

/// Breadth-first search over exact markings, skipping markings with more
/// than `token_cap` tokens in a place.
pub fn bounded_reach(net: &Net, target: &[u64], max_states: usize, token_cap: u64) -> ReachVerdict {
    let Some(m0) = net.initial_marking() else {
        return ReachVerdict::Unknown;
    };
    let mut parent: HashMap<Marking, Option<(Marking, usize)>> = HashMap::from([(m0.clone(), None)]);
    let mut queue = VecDeque::from([m0]);
    let mut complete = true;
    while let Some(m) = queue.pop_front() {
        if m == target {
            let mut run = Vec::new();
            let mut cur = m;
            while let Some(Some((prev, t))) = parent.get(&cur) {
                run.push(*t);
                cur = prev.clone();
            }
            run.reverse();
            return ReachVerdict::Yes(run);
        }
        for t in 0..net.transitions().len() {
            let Some(next) = fire(net, &m, t) else {
                if net.post(t).contains(&Count::Omega) {
                    complete = false;
                }
                continue;
            };
            if parent.contains_key(&next) {
                continue;
            }
            if next.iter().any(|x| *x > token_cap) || parent.len() >= max_states {
                complete = false;
                continue;
            }
            parent.insert(next.clone(), Some((m.clone(), t)));
            queue.push_back(next);
        }
    }
    if complete {
        ReachVerdict::NoWithinBound
    } else {
        ReachVerdict::Unknown
    }
}
