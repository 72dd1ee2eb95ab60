//! Canonical minimal Mealy machines for elements of a self-similar group.

use std::collections::{BTreeMap, HashMap};

use rlcm_core::{Machine, Result, SemigroupError};

/// Minimizes the machine reachable from `start` and renumbers its states in
/// breadth-first order, so equal maps get identical machines.
pub fn canonical(perms: &[Vec<u32>], next: &[Vec<u32>], start: u32) -> Machine {
    let alphabet = perms.first().map_or(0, Vec::len);

    let mut reach = vec![start];
    let mut index: HashMap<u32, usize> = HashMap::from([(start, 0)]);
    let mut i = 0;
    while i < reach.len() {
        let q = reach[i] as usize;
        for &r in &next[q] {
            if !index.contains_key(&r) {
                index.insert(r, reach.len());
                reach.push(r);
            }
        }
        i += 1;
    }

    let mut class: Vec<usize> = {
        let mut ids: BTreeMap<&Vec<u32>, usize> = BTreeMap::new();
        reach
            .iter()
            .map(|q| {
                let n = ids.len();
                *ids.entry(&perms[*q as usize]).or_insert(n)
            })
            .collect()
    };
    loop {
        let mut ids: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let refined: Vec<usize> = reach
            .iter()
            .enumerate()
            .map(|(k, q)| {
                let sig: Vec<usize> = next[*q as usize].iter().map(|r| class[index[r]]).collect();
                let n = ids.len();
                *ids.entry((class[k], sig)).or_insert(n)
            })
            .collect();
        let stable = ids.len()
            == class
                .iter()
                .collect::<std::collections::BTreeSet<_>>()
                .len();
        class = refined;
        if stable {
            break;
        }
    }

    let representative: BTreeMap<usize, u32> = reach
        .iter()
        .enumerate()
        .rev()
        .map(|(k, q)| (class[k], *q))
        .collect();
    let mut order: Vec<usize> = vec![class[0]];
    let mut number: HashMap<usize, u32> = HashMap::from([(class[0], 0)]);
    let mut out_perms = Vec::new();
    let mut out_next = Vec::new();
    let mut k = 0;
    while k < order.len() {
        let q = representative[&order[k]] as usize;
        out_perms.push(perms[q].clone());
        let mut row = Vec::with_capacity(alphabet);
        for r in &next[q] {
            let c = class[index[r]];
            let id = *number.entry(c).or_insert_with(|| {
                order.push(c);
                (order.len() - 1) as u32
            });
            row.push(id);
        }
        out_next.push(row);
        k += 1;
    }
    Machine {
        perms: out_perms,
        next: out_next,
    }
}

/// The map `w -> g(h(w))`.
pub fn compose(g: &Machine, h: &Machine, cap: usize) -> Result<Machine> {
    if g.is_identity() {
        return Ok(h.clone());
    }
    if h.is_identity() {
        return Ok(g.clone());
    }
    let alphabet = g.perms[0].len();
    let mut ids: HashMap<(u32, u32), u32> = HashMap::from([((0, 0), 0)]);
    let mut pairs = vec![(0u32, 0u32)];
    let mut perms = Vec::new();
    let mut next = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        let (gp, hq) = (&g.perms[p as usize], &h.perms[q as usize]);
        perms.push((0..alphabet).map(|x| gp[hq[x] as usize]).collect());
        let mut row = Vec::with_capacity(alphabet);
        for x in 0..alphabet {
            let pair = (g.next[p as usize][hq[x] as usize], h.next[q as usize][x]);
            let n = pairs.len() as u32;
            let id = *ids.entry(pair).or_insert_with(|| {
                pairs.push(pair);
                n
            });
            row.push(id);
        }
        next.push(row);
        if pairs.len() > cap {
            return Err(SemigroupError::Capped {
                cap,
                context: "composing automaton sections".into(),
            });
        }
        i += 1;
    }
    Ok(canonical(&perms, &next, 0))
}

pub fn inverse(g: &Machine) -> Machine {
    let mut perms = Vec::with_capacity(g.states());
    let mut next = Vec::with_capacity(g.states());
    for (row, nrow) in g.perms.iter().zip(&g.next) {
        let mut inv = vec![0u32; row.len()];
        let mut n = vec![0u32; row.len()];
        for (x, &y) in row.iter().enumerate() {
            inv[y as usize] = x as u32;
            n[y as usize] = nrow[x];
        }
        perms.push(inv);
        next.push(n);
    }
    canonical(&perms, &next, 0)
}

/// `g(w)` together with the state reached after reading `w`.
pub fn run(g: &Machine, word: &[u32]) -> (Vec<u32>, u32) {
    let mut q = 0u32;
    let mut out = Vec::with_capacity(word.len());
    for &x in word {
        out.push(g.perms[q as usize][x as usize]);
        q = g.next[q as usize][x as usize];
    }
    (out, q)
}

/// `g|_w` as a canonical machine.
pub fn section(g: &Machine, word: &[u32]) -> Machine {
    let (_, q) = run(g, word);
    if q == 0 {
        return g.clone();
    }
    canonical(&g.perms, &g.next, q)
}

/// Every section `g|_w` as a canonical machine.
pub fn all_sections(g: &Machine) -> Vec<Machine> {
    (0..g.states() as u32)
        .map(|q| canonical(&g.perms, &g.next, q))
        .collect()
}
