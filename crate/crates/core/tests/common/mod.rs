//! Independent reference groups used as oracles by the integration tests.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};
use std::hash::Hash;
use std::path::PathBuf;

use pgx_core::pc::{PcBuilder, PcPresentation, RelOrder};
use pgx_core::Group;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Permutations of `0..n`, composed left to right: `(a*b)(i) = b(a(i))`.
#[derive(Clone, Copy, Debug)]
pub struct PermGroup {
    pub degree: usize,
}

pub type Perm = Vec<u32>;

impl PermGroup {
    pub fn cycles(&self, cycles: &[&[u32]]) -> Perm {
        let mut p: Perm = (0..self.degree as u32).collect();
        for c in cycles {
            for k in 0..c.len() {
                p[c[k] as usize] = c[(k + 1) % c.len()];
            }
        }
        p
    }
}

impl Group for PermGroup {
    type Elem = Perm;

    fn identity(&self) -> Perm {
        (0..self.degree as u32).collect()
    }

    fn mul(&self, a: &Perm, b: &Perm) -> Perm {
        a.iter().map(|&i| b[i as usize]).collect()
    }

    fn inv(&self, a: &Perm) -> Perm {
        let mut out = vec![0; a.len()];
        for (i, &j) in a.iter().enumerate() {
            out[j as usize] = i as u32;
        }
        out
    }
}

/// Upper unitriangular 3x3 matrices over Z/p, stored as (x, y, z) for
/// [[1,x,z],[0,1,y],[0,0,1]].
#[derive(Clone, Copy, Debug)]
pub struct UniTri {
    pub p: i64,
}

impl Group for UniTri {
    type Elem = (i64, i64, i64);

    fn identity(&self) -> Self::Elem {
        (0, 0, 0)
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let p = self.p;
        ((a.0 + b.0) % p, (a.1 + b.1) % p, (a.2 + b.2 + a.0 * b.1) % p)
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        let p = self.p;
        let x = (p - a.0) % p;
        let y = (p - a.1) % p;
        let z = ((a.0 * a.1 - a.2) % p + p) % p;
        (x, y, z)
    }
}

/// Upper unitriangular `n x n` integer matrices, row-major; nilpotent of
/// class `n - 1`.
#[derive(Clone, Copy, Debug)]
pub struct IntUniTri {
    pub n: usize,
}

impl IntUniTri {
    /// `1 + v E_{i,j}`.
    pub fn elementary(&self, i: usize, j: usize, v: i128) -> Vec<i128> {
        let mut m = self.identity();
        m[i * self.n + j] = v;
        m
    }

    /// Random element as a product of elementary matrices with small entries.
    pub fn random(&self, rng: &mut ChaCha8Rng) -> Vec<i128> {
        let mut m = self.identity();
        for _ in 0..6 {
            let i = rng.gen_range(0..self.n - 1);
            let j = rng.gen_range(i + 1..self.n);
            let e = self.elementary(i, j, rng.gen_range(-2..=2));
            m = self.mul(&m, &e);
        }
        m
    }
}

impl Group for IntUniTri {
    type Elem = Vec<i128>;

    fn identity(&self) -> Vec<i128> {
        let n = self.n;
        (0..n * n).map(|k| i128::from(k / n == k % n)).collect()
    }

    fn mul(&self, a: &Vec<i128>, b: &Vec<i128>) -> Vec<i128> {
        let n = self.n;
        let mut out = vec![0; n * n];
        for i in 0..n {
            for k in i..n {
                let x = a[i * n + k];
                if x != 0 {
                    for j in k..n {
                        out[i * n + j] += x * b[k * n + j];
                    }
                }
            }
        }
        out
    }

    fn inv(&self, a: &Vec<i128>) -> Vec<i128> {
        // back substitution on the strictly upper part
        let n = self.n;
        let mut out = self.identity();
        for j in 0..n {
            for i in (0..j).rev() {
                let s: i128 = (i + 1..=j).map(|k| a[i * n + k] * out[k * n + j]).sum();
                out[i * n + j] = -s;
            }
        }
        out
    }
}

/// All elements of the subgroup generated by `gens`, by breadth-first search.
pub fn enumerate<G: Group>(g: &G, gens: &[G::Elem]) -> Vec<G::Elem>
where
    G::Elem: Hash + Eq,
{
    let mut seen: HashSet<G::Elem> = HashSet::new();
    let mut queue = VecDeque::new();
    let id = g.identity();
    seen.insert(id.clone());
    queue.push_back(id);
    let mut out = Vec::new();
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y = g.mul(&x, s);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
        out.push(x);
    }
    out
}

/// Order of an element by repeated multiplication.
pub fn naive_order<G: Group>(g: &G, x: &G::Elem) -> u64 {
    let mut y = x.clone();
    let mut n = 1;
    while !g.is_identity(&y) {
        y = g.mul(&y, x);
        n += 1;
    }
    n
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random word of the given length in generator indices `0..rank`.
pub fn random_word(rng: &mut ChaCha8Rng, rank: usize, len: usize) -> Vec<(usize, i64)> {
    (0..len)
        .map(|_| (rng.gen_range(0..rank), if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect()
}

pub fn eval_word<G: Group>(g: &G, images: &[G::Elem], w: &[(usize, i64)]) -> G::Elem {
    let mut acc = g.identity();
    for &(i, e) in w {
        let x = if e > 0 { images[i].clone() } else { g.inv(&images[i]) };
        for _ in 0..e.abs() {
            acc = g.mul(&acc, &x);
        }
    }
    acc
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn read_corpus(file: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(file)).unwrap_or_else(|e| panic!("{file}: {e}"))
}

pub fn heisenberg_pc() -> PcPresentation {
    let mut b = PcBuilder::new(3).name("heisenberg-27");
    let a = b.gen("a", RelOrder::Finite(3), 1);
    let bb = b.gen("b", RelOrder::Finite(3), 1);
    let c = b.gen("c", RelOrder::Finite(3), 2);
    b.conj(bb, a, vec![(bb, 1), (c, 1)]);
    b.build().unwrap()
}

/// C3 wr C3 on generators t, a, b = [a,t], c = [b,t].
pub fn wreath33_pc() -> PcPresentation {
    let mut b = PcBuilder::new(3).name("C3wrC3");
    let t = b.gen("t", RelOrder::Finite(3), 1);
    let a = b.gen("a", RelOrder::Finite(3), 1);
    let bb = b.gen("b", RelOrder::Finite(3), 2);
    let c = b.gen("c", RelOrder::Finite(3), 3);
    b.conj(a, t, vec![(a, 1), (bb, 1)]);
    b.conj(bb, t, vec![(bb, 1), (c, 1)]);
    b.build().unwrap()
}

/// Permutation images of (t, a) for C3 wr C3 acting on 9 points.
pub fn wreath33_perms() -> (PermGroup, Perm, Perm) {
    let g = PermGroup { degree: 9 };
    let t = g.cycles(&[&[0, 3, 6], &[1, 4, 7], &[2, 5, 8]]);
    let a = g.cycles(&[&[0, 1, 2]]);
    (g, t, a)
}

/// Permutation images of (t, a) for C9 wr C3 acting on 27 points.
pub fn wreath93_perms() -> (PermGroup, Perm, Perm) {
    let g = PermGroup { degree: 27 };
    let t = {
        let mut p: Perm = (0..27).collect();
        for i in 0..27u32 {
            p[i as usize] = (i + 9) % 27;
        }
        p
    };
    let cycle: Vec<u32> = (0..9).collect();
    let a = g.cycles(&[&cycle]);
    (g, t, a)
}

/// Permutation images, in presentation generator order, of every corpus
/// group; independent of the toolkit.
pub fn corpus_perms(file: &str) -> (PermGroup, Vec<Perm>) {
    let affine = |n: u32, f: &dyn Fn(u32) -> u32| -> Perm { (0..n).map(f).collect() };
    match file {
        "c27.fp" => (PermGroup { degree: 27 }, vec![affine(27, &|x| (x + 1) % 27)]),
        "c9xc3.fp" => {
            let g = PermGroup { degree: 12 };
            let a = g.cycles(&[&[0, 1, 2, 3, 4, 5, 6, 7, 8]]);
            let b = g.cycles(&[&[9, 10, 11]]);
            (g, vec![a, b])
        }
        "c3cubed.fp" => {
            let g = PermGroup { degree: 9 };
            let gens = vec![g.cycles(&[&[0, 1, 2]]), g.cycles(&[&[3, 4, 5]]), g.cycles(&[&[6, 7, 8]])];
            (g, gens)
        }
        "heisenberg27.fp" => {
            // points (x, y) of F_3^2 as 3x + y; a translates x, b shears y by x
            let a = affine(9, &|p| ((p / 3 + 1) % 3) * 3 + p % 3);
            let b = affine(9, &|p| (p / 3) * 3 + (p % 3 + p / 3) % 3);
            (PermGroup { degree: 9 }, vec![a, b])
        }
        "m27.fp" => (
            PermGroup { degree: 9 },
            vec![affine(9, &|x| (x + 1) % 9), affine(9, &|x| (4 * x) % 9)],
        ),
        "burnside-class2.fp" => class2_exponent3_perms(),
        "wreath-c3-c3.fp" => {
            let (g, t, a) = wreath33_perms();
            (g, vec![a, t])
        }
        "wreath-c9-c3.fp" => {
            let (g, t, a) = wreath93_perms();
            (g, vec![a, t])
        }
        "extra/maxclass-243.fp" => {
            // points (x, y) of (Z/9)^2 as 9x + y
            let a = affine(81, &|p| ((p / 9 + 1) % 9) * 9 + p % 9);
            let b = affine(81, &|p| (p / 9) * 9 + (p % 9 + 1) % 9);
            // t(x, y) = (-y, x - y)
            let t = affine(81, &|p| {
                let (x, y) = (p / 9, p % 9);
                ((9 - y) % 9) * 9 + (x + 9 - y) % 9
            });
            (PermGroup { degree: 81 }, vec![a, b, t])
        }
        other => panic!("no oracle for {other}"),
    }
}

/// Regular representation of the free class-2 exponent-3 group of rank 3,
/// modelled as pairs (v, w) in F_3^3 x F_3^3 with a bilinear cocycle.
fn class2_exponent3_perms() -> (PermGroup, Vec<Perm>) {
    type E = ([u32; 3], [u32; 3]);
    let mul = |a: &E, b: &E| -> E {
        let v = [(a.0[0] + b.0[0]) % 3, (a.0[1] + b.0[1]) % 3, (a.0[2] + b.0[2]) % 3];
        let pairs = [(0, 1), (0, 2), (1, 2)];
        let mut w = [0; 3];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            w[k] = (a.1[k] + b.1[k] + a.0[j] * b.0[i]) % 3;
        }
        (v, w)
    };
    let code = |e: &E| -> u32 {
        e.0.iter().chain(e.1.iter()).fold(0, |acc, &x| acc * 3 + x)
    };
    let all: Vec<E> = (0..729u32)
        .map(|c| {
            let d: Vec<u32> = (0..6).rev().map(|k| (c / 3u32.pow(k)) % 3).collect();
            ([d[0], d[1], d[2]], [d[3], d[4], d[5]])
        })
        .collect();
    let gens: Vec<E> = (0..3)
        .map(|i| {
            let mut v = [0; 3];
            v[i] = 1;
            (v, [0; 3])
        })
        .collect();
    let perms = gens
        .iter()
        .map(|g| all.iter().map(|x| code(&mul(x, g))).collect())
        .collect();
    (PermGroup { degree: 729 }, perms)
}

/// Normal closure of `seeds` in the group generated by `gens`, as a set.
pub fn normal_closure_elems<G: Group>(g: &G, gens: &[G::Elem], seeds: Vec<G::Elem>) -> HashSet<G::Elem>
where
    G::Elem: Hash + Eq,
{
    let mut set: HashSet<G::Elem> = enumerate(g, &seeds).into_iter().collect();
    loop {
        let mut extra: Vec<G::Elem> = Vec::new();
        for x in &set {
            for s in gens {
                let y = g.conj(x, s);
                if !set.contains(&y) {
                    extra.push(y);
                }
            }
        }
        if extra.is_empty() {
            return set;
        }
        let mut all: Vec<G::Elem> = set.into_iter().collect();
        all.extend(extra);
        set = enumerate(g, &all).into_iter().collect();
    }
}

/// Orders of the lower central series terms `gamma_1, gamma_2, ...` down to 1.
pub fn lower_central_orders<G: Group>(g: &G, gens: &[G::Elem]) -> Vec<usize>
where
    G::Elem: Hash + Eq,
{
    let mut cur: HashSet<G::Elem> = enumerate(g, gens).into_iter().collect();
    let mut out = vec![cur.len()];
    while cur.len() > 1 {
        let seeds: Vec<G::Elem> = cur
            .iter()
            .flat_map(|x| gens.iter().map(move |s| g.comm(x, s)))
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        let next = normal_closure_elems(g, gens, seeds);
        assert!(next.len() < cur.len(), "lower central series does not descend");
        cur = next;
        out.push(cur.len());
    }
    out
}

pub const CORPUS: [&str; 8] = [
    "c27.fp",
    "c9xc3.fp",
    "c3cubed.fp",
    "heisenberg27.fp",
    "m27.fp",
    "burnside-class2.fp",
    "wreath-c3-c3.fp",
    "wreath-c9-c3.fp",
];

/// Direct product of two groups, used to check that generator images define
/// an isomorphism.
pub struct Pair<'a, A: Group, B: Group>(pub &'a A, pub &'a B);

impl<A: Group, B: Group> Group for Pair<'_, A, B> {
    type Elem = (A::Elem, B::Elem);

    fn identity(&self) -> Self::Elem {
        (self.0.identity(), self.1.identity())
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.0.mul(&a.0, &b.0), self.1.mul(&a.1, &b.1))
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        (self.0.inv(&a.0), self.1.inv(&a.1))
    }
}

/// Every corpus file, including the extra maximal-class group.
pub fn corpus_files() -> Vec<&'static str> {
    let mut files = CORPUS.to_vec();
    files.push("extra/maxclass-243.fp");
    files
}

/// Orders of the upper central series terms `Z_0 = 1, Z_1, ...` up to `G`.
pub fn upper_central_orders<G: Group>(g: &G, gens: &[G::Elem]) -> Vec<usize>
where
    G::Elem: Hash + Eq,
{
    let all = enumerate(g, gens);
    let mut cur: HashSet<G::Elem> = [g.identity()].into_iter().collect();
    let mut out = vec![1];
    while cur.len() < all.len() {
        let next: HashSet<G::Elem> = all
            .iter()
            .filter(|x| gens.iter().all(|s| cur.contains(&g.comm(x, s))))
            .cloned()
            .collect();
        assert!(next.len() > cur.len(), "upper central series does not ascend");
        cur = next;
        out.push(cur.len());
    }
    out
}

/// Order of the subgroup generated by all `q`-th powers.
pub fn power_subgroup_order<G: Group>(g: &G, gens: &[G::Elem], q: i64) -> usize
where
    G::Elem: Hash + Eq,
{
    let powers: HashSet<G::Elem> = enumerate(g, gens).iter().map(|x| g.pow_i64(x, q)).collect();
    let powers: Vec<G::Elem> = powers.into_iter().collect();
    enumerate(g, &powers).len()
}

/// Largest element order.
pub fn exponent_oracle<G: Group>(g: &G, gens: &[G::Elem]) -> u64
where
    G::Elem: Hash + Eq,
{
    enumerate(g, gens).iter().map(|x| naive_order(g, x)).max().unwrap_or(1)
}
