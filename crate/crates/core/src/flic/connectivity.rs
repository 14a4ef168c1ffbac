//! Connectivity post-processing: every label keeps its largest 4-connected
//! component; every other component is merged into the adjacent component
//! sharing the most border pixel pairs (ties to the smallest label).

use std::collections::HashMap;

use crate::imagecore::LabelMap;

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut i: u32) -> u32 {
        while self.parent[i as usize] != i {
            let grand = self.parent[self.parent[i as usize] as usize];
            self.parent[i as usize] = grand;
            i = grand;
        }
        i
    }

    fn attach(&mut self, child: u32, root: u32) {
        self.parent[child as usize] = root;
    }
}

/// Labels 4-connected components in scan order. Returns per-pixel component
/// ids and each component's (label, size).
fn connected_components(labels: &LabelMap) -> (Vec<u32>, Vec<(u32, usize)>) {
    let (w, h) = (labels.width(), labels.height());
    let data = labels.labels();
    let mut comp_of = vec![u32::MAX; w * h];
    let mut comps: Vec<(u32, usize)> = Vec::new();
    let mut stack = Vec::new();
    for start in 0..w * h {
        if comp_of[start] != u32::MAX {
            continue;
        }
        let id = comps.len() as u32;
        let label = data[start];
        let mut size = 0usize;
        comp_of[start] = id;
        stack.push(start);
        while let Some(i) = stack.pop() {
            size += 1;
            let (x, y) = (i % w, i / w);
            let mut visit = |j: usize| {
                if comp_of[j] == u32::MAX && data[j] == label {
                    comp_of[j] = id;
                    stack.push(j);
                }
            };
            if x > 0 {
                visit(i - 1);
            }
            if x + 1 < w {
                visit(i + 1);
            }
            if y > 0 {
                visit(i - w);
            }
            if y + 1 < h {
                visit(i + w);
            }
        }
        comps.push((label, size));
    }
    (comp_of, comps)
}

/// Rewrites the label map so each surviving label forms exactly one
/// 4-connected component. The largest component of each label keeps it;
/// smaller components are absorbed, in component scan order, by the adjacent
/// blob with the most shared border pairs (ties: smallest label, then
/// smallest component id). No label disappears.
pub fn enforce_connectivity(labels: &LabelMap, k_actual: usize) -> LabelMap {
    debug_assert!(labels.labels().iter().all(|&l| (l as usize) < k_actual.max(1)));
    let (w, h) = (labels.width(), labels.height());
    let (comp_of, comps) = connected_components(labels);
    let n_comps = comps.len();

    // The largest component of each label value survives; first one wins ties.
    let mut major_of_label: HashMap<u32, (usize, u32)> = HashMap::new();
    for (id, &(label, size)) in comps.iter().enumerate() {
        let entry = major_of_label.entry(label).or_insert((size, id as u32));
        if size > entry.0 {
            *entry = (size, id as u32);
        }
    }
    let mut is_major = vec![false; n_comps];
    for &(_, id) in major_of_label.values() {
        is_major[id as usize] = true;
    }

    // Border pair counts between touching components.
    let mut borders: Vec<HashMap<u32, u64>> = vec![HashMap::new(); n_comps];
    let note = |a: u32, b: u32, borders: &mut Vec<HashMap<u32, u64>>| {
        if a != b {
            *borders[a as usize].entry(b).or_insert(0) += 1;
            *borders[b as usize].entry(a).or_insert(0) += 1;
        }
    };
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if x + 1 < w {
                note(comp_of[i], comp_of[i + 1], &mut borders);
            }
            if y + 1 < h {
                note(comp_of[i], comp_of[i + w], &mut borders);
            }
        }
    }

    let mut uf = UnionFind::new(n_comps);
    for c in 0..n_comps as u32 {
        if is_major[c as usize] {
            continue;
        }
        // Aggregate this blob's borders by current root.
        let mut counts: HashMap<u32, u64> = HashMap::new();
        for (&other, &n) in &borders[c as usize] {
            let root = uf.find(other);
            if root != c {
                *counts.entry(root).or_insert(0) += n;
            }
        }
        let target = counts
            .iter()
            .max_by_key(|&(&root, &n)| {
                (n, std::cmp::Reverse(comps[root as usize].0), std::cmp::Reverse(root))
            })
            .map(|(&root, _)| root);
        let Some(target) = target else {
            continue; // single blob covering the whole image
        };
        let moved = std::mem::take(&mut borders[c as usize]);
        for (other, n) in moved {
            *borders[target as usize].entry(other).or_insert(0) += n;
        }
        uf.attach(c, target);
    }

    let mut out = vec![0u32; w * h];
    for (i, &c) in comp_of.iter().enumerate() {
        out[i] = comps[uf.find(c) as usize].0;
    }
    LabelMap::new(w, h, out).expect("dimensions preserved")
}
