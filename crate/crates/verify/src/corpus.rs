//! Seeded instance generation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arbor::arborescence::{dfs_build, Priority};
use arbor::{Arborescence, Digraph, VertexId, VertexSet};

pub const DEFAULT_SEED: u64 = 0x00a7_b0e5;

/// A host digraph with an arborescence inside it.
#[derive(Debug, Clone)]
pub struct Instance {
    pub label: String,
    pub d: Digraph,
    pub t: Arborescence,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_digraph<R: Rng>(rng: &mut R, n: u32, p: f64) -> Digraph {
    let edges: Vec<(u32, u32)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b)
        .filter(|_| rng.gen_bool(p))
        .collect();
    Digraph::on_range(n, &edges).expect("simple digraph")
}

/// Random digraph in which every vertex is reachable from 0.
pub fn random_reachable<R: Rng>(rng: &mut R, n: u32, p: f64) -> Digraph {
    let mut d = random_digraph(rng, n, p);
    loop {
        let reach = d.reachable_from(&VertexSet::from([VertexId(0)]), &VertexSet::new());
        let Some(&v) = d.vertex_set().difference(&reach).next() else {
            return d;
        };
        let from: Vec<VertexId> = reach.into_iter().collect();
        let a = *from.choose(rng).unwrap();
        d = d.union_edges([(a, v)]).expect("both endpoints exist");
    }
}

/// Grows a tree from 0 by repeatedly adding a random edge leaving it.
pub fn random_tree<R: Rng>(rng: &mut R, d: &Digraph, size: usize) -> Arborescence {
    let mut inside = VertexSet::from([VertexId(0)]);
    let mut edges = Vec::new();
    while inside.len() < size {
        let leaving: Vec<(VertexId, VertexId)> = d
            .edges()
            .filter(|(a, b)| inside.contains(a) && !inside.contains(b))
            .collect();
        let Some(&(a, b)) = leaving.choose(rng) else { break };
        inside.insert(b);
        edges.push((a, b));
    }
    Arborescence::new(VertexId(0), edges).expect("grown tree")
}

pub fn random_priority<R: Rng>(rng: &mut R, d: &Digraph) -> Priority {
    let mut vs: Vec<VertexId> = d.vertices().collect();
    vs.shuffle(rng);
    Priority::new(vs)
}

fn hand_instances() -> Vec<Instance> {
    let mk = |label: &str, n: u32, e: &[(u32, u32)], te: &[(u32, u32)]| Instance {
        label: label.to_string(),
        d: Digraph::on_range(n, e).unwrap(),
        t: Arborescence::from_raw(0, te).unwrap(),
    };
    vec![
        mk("one-way star", 3, &[(0, 1), (0, 2), (1, 2)], &[(0, 1), (0, 2)]),
        mk("two-cycle star", 3, &[(0, 1), (0, 2), (1, 2), (2, 1)], &[(0, 1), (0, 2)]),
        mk("chain", 3, &[(0, 1), (1, 2), (2, 0)], &[(0, 1), (1, 2)]),
        mk(
            "parent shortcut",
            4,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)],
            &[(0, 1), (0, 2), (0, 3)],
        ),
        mk(
            "deep shortcut",
            5,
            &[(0, 1), (0, 4), (1, 2), (1, 3), (2, 3), (3, 4), (4, 1)],
            &[(0, 1), (0, 4), (1, 2), (1, 3)],
        ),
        mk("single vertex", 1, &[], &[]),
    ]
}

/// Hand instances, grown trees on up to 8 host vertices (at most 7 tree
/// vertices) and DFS trees of hosts on up to 7 vertices.
pub fn corpus(seed: u64) -> Vec<Instance> {
    let mut rng = rng(seed);
    let mut out = hand_instances();
    for i in 0..300 {
        let n = rng.gen_range(2..=8);
        let p = [0.2, 0.35, 0.5][i % 3];
        let d = random_digraph(&mut rng, n, p);
        let size = rng.gen_range(1..=n.min(7) as usize);
        let t = random_tree(&mut rng, &d, size);
        out.push(Instance {
            label: format!("grown {i}"),
            d,
            t,
        });
    }
    for i in 0..200 {
        let n = rng.gen_range(2..=7);
        let p = [0.25, 0.4][i % 2];
        let d = random_reachable(&mut rng, n, p);
        let pr = random_priority(&mut rng, &d);
        let t = dfs_build(&d, VertexId(0), &pr).expect("root exists");
        out.push(Instance {
            label: format!("dfs {i}"),
            d,
            t,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic() {
        let a = corpus(7);
        let b = corpus(7);
        assert_eq!(a.len(), b.len());
        assert!(a.iter().zip(&b).all(|(x, y)| x.d == y.d && x.t == y.t));
    }

    #[test]
    fn trees_lie_in_hosts() {
        for inst in corpus(DEFAULT_SEED) {
            assert!(inst.t.check_in_host(&inst.d).is_ok(), "{}", inst.label);
            assert!(inst.t.len() <= 7);
        }
    }

    #[test]
    fn reachable_hosts() {
        let mut r = rng(3);
        for _ in 0..50 {
            let d = random_reachable(&mut r, 9, 0.1);
            let reach = d.reachable_from(&VertexSet::from([VertexId(0)]), &VertexSet::new());
            assert_eq!(reach.len(), 9);
        }
    }
}
