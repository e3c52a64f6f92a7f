//! Brute-force reference implementations shared by the integration tests.
//! None of these call into the algebra module.

#![allow(dead_code)]

use std::collections::HashSet;

use cobool::model::{Constraint, Element, Instance, Template};

pub fn major(a: bool, b: bool, c: bool) -> bool {
    (a && b) || (a && c) || (b && c)
}

pub fn minor(a: bool, b: bool, c: bool) -> bool {
    a ^ b ^ c
}

/// Rows `(f_1(d), .., f_k(d), 0, 1)` for every element `d`.
pub fn rows_of(t: &Template) -> Vec<Vec<bool>> {
    (0..t.size())
        .map(|d| {
            let mut r: Vec<bool> = t.functions().iter().map(|f| f.table()[d] == 1).collect();
            r.push(false);
            r.push(true);
            r
        })
        .collect()
}

/// Least label tuple (lexicographically) whose image under `op` leaves
/// the row set.
pub fn brute_witness(rows: &[Vec<bool>], arity: usize, op: impl Fn(&[bool]) -> bool) -> Option<Vec<usize>> {
    let set: HashSet<&Vec<bool>> = rows.iter().collect();
    let n = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let total = n.pow(arity as u32);
    for code in 0..total {
        let mut labels = vec![0; arity];
        let mut c = code;
        for slot in labels.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        let image: Vec<bool> = (0..width)
            .map(|i| op(&labels.iter().map(|&l| rows[l][i]).collect::<Vec<_>>()))
            .collect();
        if !set.contains(&image) {
            return Some(labels);
        }
    }
    None
}

pub fn brute_major(rows: &[Vec<bool>]) -> Option<Vec<usize>> {
    brute_witness(rows, 3, |a| major(a[0], a[1], a[2]))
}

pub fn brute_minor(rows: &[Vec<bool>]) -> Option<Vec<usize>> {
    brute_witness(rows, 3, |a| minor(a[0], a[1], a[2]))
}

pub fn brute_meet(rows: &[Vec<bool>]) -> Option<Vec<usize>> {
    brute_witness(rows, 2, |a| a[0] && a[1])
}

pub fn brute_join(rows: &[Vec<bool>]) -> Option<Vec<usize>> {
    brute_witness(rows, 2, |a| a[0] || a[1])
}

/// Every self-map of `0..n` commuting with all functions, by full
/// enumeration of `n^n` maps.
pub fn commuting_maps(t: &Template) -> Vec<Vec<Element>> {
    let n = t.size();
    let mut out = Vec::new();
    let mut p = vec![0; n];
    loop {
        let ok = t.functions().iter().all(|f| {
            let f = |x: usize| f.table()[x] as usize;
            (0..n).all(|x| p[f(x)] == f(p[x]))
        });
        if ok {
            out.push(p.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            p[i] += 1;
            if p[i] < n {
                break;
            }
            p[i] = 0;
        }
    }
}

pub fn range_size(p: &[Element]) -> usize {
    p.iter().collect::<HashSet<_>>().len()
}

/// Size of the core by brute force: the smallest range of a commuting map.
pub fn brute_core_size(t: &Template) -> usize {
    commuting_maps(t).iter().map(|p| range_size(p)).min().expect("identity")
}

/// The verdict obtained from brute-force closure checks on the brute-force
/// core; `None` for NP-complete.
pub fn brute_verdict(t: &Template) -> Option<&'static str> {
    let maps = commuting_maps(t);
    let best = maps.iter().map(|p| range_size(p)).min().expect("identity");
    if best == 1 {
        return Some("DegenerateCore");
    }
    // restrict to the image of the least idempotent minimum-range map
    let p = maps
        .iter()
        .filter(|p| range_size(p) == best && (0..p.len()).all(|x| p[p[x]] == p[x]))
        .min()
        .expect("a minimum-range idempotent map exists");
    let mut image: Vec<usize> = p.clone();
    image.sort_unstable();
    image.dedup();
    let rows: Vec<Vec<bool>> = image.iter().map(|&d| rows_of(t)[d].clone()).collect();
    let ordered = rows[0].iter().zip(&rows[1]).all(|(a, b)| a <= b);
    if brute_major(&rows).is_none() {
        Some("MajorityClosed")
    } else if brute_minor(&rows).is_none() {
        Some("MinorityClosed")
    } else if brute_meet(&rows).is_none() && ordered {
        Some("MeetClosedOrdered")
    } else if brute_join(&rows).is_none() && ordered {
        Some("JoinClosedOrdered")
    } else {
        None
    }
}

/// Atoms over variables `x, y, z` (first `vars` of them): every
/// application, every equality and every pin.
pub fn atoms(t: &Template, vars: usize) -> Vec<Constraint> {
    let names = ["x", "y", "z"];
    let names = &names[..vars];
    let mut out = Vec::new();
    for f in t.functions() {
        for a in names {
            for b in names {
                out.push(Constraint::apply(f.name(), a, b));
            }
        }
    }
    for (i, a) in names.iter().enumerate() {
        for b in &names[i..] {
            out.push(Constraint::equal(a, b));
        }
    }
    for a in names {
        for d in 0..t.size() {
            out.push(Constraint::pin(a, d));
        }
    }
    out
}

/// All instances made of 1 to `max` atoms, as multisets.
pub fn small_instances(t: &Template, vars: usize, max: usize) -> Vec<Instance> {
    let atoms = atoms(t, vars);
    let mut out = Vec::new();
    let mut pick: Vec<usize> = Vec::new();
    fn rec(atoms: &[Constraint], start: usize, max: usize, pick: &mut Vec<usize>, out: &mut Vec<Instance>) {
        if !pick.is_empty() {
            out.push(Instance::new(pick.iter().map(|&i| atoms[i].clone()).collect()).expect("nonempty"));
        }
        if pick.len() == max {
            return;
        }
        for i in start..atoms.len() {
            pick.push(i);
            rec(atoms, i, max, pick, out);
            pick.pop();
        }
    }
    rec(&atoms, 0, max, &mut pick, &mut out);
    out
}

/// A random instance satisfied by a hidden random assignment: every
/// constraint is drawn among those the assignment satisfies.
pub fn planted_instance(seed: u64, t: &Template, vars: usize, cons: usize, pin_probability: f64) -> Instance {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..vars).map(|i| format!("p{i}")).collect();
    let values: Vec<Element> = (0..vars).map(|_| rng.gen_range(0..t.size())).collect();
    let mut by_value: Vec<Vec<usize>> = vec![Vec::new(); t.size()];
    for (i, &v) in values.iter().enumerate() {
        by_value[v].push(i);
    }
    let pick = |rng: &mut rand_chacha::ChaCha8Rng, v: Element| -> Option<usize> {
        let group = &by_value[v];
        (!group.is_empty()).then(|| group[rng.gen_range(0..group.len())])
    };
    let constraints = (0..cons)
        .map(|_| {
            let a = rng.gen_range(0..vars);
            if rng.gen_bool(pin_probability) {
                return Constraint::pin(&names[a], values[a]);
            }
            if rng.gen_bool(0.1) {
                let b = pick(&mut rng, values[a]).expect("a is in its own group");
                return Constraint::equal(&names[a], &names[b]);
            }
            let f = &t.functions()[rng.gen_range(0..t.functions().len())];
            match pick(&mut rng, f.apply(values[a])) {
                Some(b) => Constraint::apply(f.name(), &names[a], &names[b]),
                None => Constraint::pin(&names[a], values[a]),
            }
        })
        .collect();
    Instance::new(constraints).expect("cons > 0")
}
