//! Subgroups given by induced generating sequences, normal closures and
//! quotients.

use std::collections::{BTreeMap, HashSet};

use num_integer::Integer;

use super::{PcBuilder, PcElement, PcOrder, PcPresentation, RelOrder, Syllables};
use crate::error::{Error, Result};

const EXPONENT_LIMIT: i64 = 1 << 40;

/// Subgroup of a pc-group, stored as an induced generating sequence: the
/// leading generator indices are strictly increasing and each leading
/// exponent is normalized (positive, dividing the relative order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcSubgroup {
    gens: Vec<PcElement>,
    leads: Vec<usize>,
    parent_len: usize,
}

impl PcSubgroup {
    pub fn trivial(parent_len: usize) -> Self {
        PcSubgroup {
            gens: Vec::new(),
            leads: Vec::new(),
            parent_len,
        }
    }

    pub fn gens(&self) -> &[PcElement] {
        &self.gens
    }

    pub fn leads(&self) -> &[usize] {
        &self.leads
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn parent_len(&self) -> usize {
        self.parent_len
    }

    fn from_map(parent_len: usize, map: &BTreeMap<usize, PcElement>) -> Self {
        PcSubgroup {
            leads: map.keys().copied().collect(),
            gens: map.values().cloned().collect(),
            parent_len,
        }
    }
}

/// `G/N` together with the data of the natural epimorphism.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: PcPresentation,
    /// Parent generator index of each quotient generator.
    pub kept: Vec<usize>,
    kernel: PcSubgroup,
}

impl Quotient {
    pub fn kernel(&self) -> &PcSubgroup {
        &self.kernel
    }

    /// Image of a parent element.
    pub fn image(&self, parent: &PcPresentation, x: &PcElement) -> PcElement {
        let r = parent.coset_representative(&self.kernel, x);
        PcElement {
            exps: self.kept.iter().map(|&i| r.exps[i]).collect(),
        }
    }

    /// The canonical coset representative of a quotient element.
    pub fn lift(&self, y: &PcElement) -> PcElement {
        let mut x = PcElement::identity(self.kernel.parent_len);
        for (t, &i) in self.kept.iter().enumerate() {
            x.exps[i] = y.exps[t];
        }
        x
    }

    /// Preimage of a subgroup of the quotient: generated by lifts and the kernel.
    pub fn preimage(&self, parent: &PcPresentation, h: &PcSubgroup) -> Result<PcSubgroup> {
        let mut gens: Vec<PcElement> = h.gens().iter().map(|y| self.lift(y)).collect();
        gens.extend(self.kernel.gens().iter().cloned());
        parent.subgroup_span(&gens)
    }
}

impl PcPresentation {
    /// The whole group as a subgroup of itself.
    pub fn whole(&self) -> PcSubgroup {
        PcSubgroup {
            gens: (0..self.len()).map(|i| self.generator(i)).collect(),
            leads: (0..self.len()).collect(),
            parent_len: self.len(),
        }
    }

    /// Relative order of each induced generator.
    pub fn subgroup_relative_orders(&self, h: &PcSubgroup) -> Vec<RelOrder> {
        h.gens
            .iter()
            .zip(&h.leads)
            .map(|(u, &d)| match self.rel_order(d) {
                RelOrder::Finite(m) => RelOrder::Finite(m / u.exps[d]),
                RelOrder::Infinite => RelOrder::Infinite,
            })
            .collect()
    }

    pub fn subgroup_order(&self, h: &PcSubgroup) -> PcOrder {
        let mut torsion_part = 1u128;
        let mut hirsch_length = 0;
        for r in self.subgroup_relative_orders(h) {
            match r {
                RelOrder::Finite(m) => torsion_part *= m as u128,
                RelOrder::Infinite => hirsch_length += 1,
            }
        }
        PcOrder {
            torsion_part,
            hirsch_length,
        }
    }

    /// Sifts `x` through the induced sequence: returns the exponents `c`
    /// and residue `r` with `x = u_1^{c_1} ... u_s^{c_s} r`, stopping at the
    /// first position the sequence cannot clear.
    pub fn sift(&self, h: &PcSubgroup, x: &PcElement) -> (Vec<i64>, PcElement) {
        let mut coeffs = vec![0; h.len()];
        let mut x = x.clone();
        for (t, (u, &d)) in h.gens.iter().zip(&h.leads).enumerate() {
            let Some(l) = x.leading() else { break };
            if l < d {
                break;
            }
            if l > d {
                continue;
            }
            let a = u.exps[d];
            let v = x.exps[d];
            if v % a != 0 {
                break;
            }
            let q = v / a;
            x = self.multiply(&self.power_elem(u, -q), &x);
            coeffs[t] = q;
        }
        (coeffs, x)
    }

    /// Membership test by sifting.
    pub fn contains(&self, h: &PcSubgroup, x: &PcElement) -> bool {
        self.sift(h, x).1.is_identity()
    }

    pub fn is_subgroup_of(&self, a: &PcSubgroup, b: &PcSubgroup) -> bool {
        a.gens.iter().all(|u| self.contains(b, u))
    }

    pub fn subgroups_equal(&self, a: &PcSubgroup, b: &PcSubgroup) -> bool {
        self.is_subgroup_of(a, b) && self.is_subgroup_of(b, a)
    }

    /// Scales `r` so its leading exponent is positive and, for finite
    /// relative order, divides it.
    fn normalize_lead(&self, r: PcElement) -> PcElement {
        let d = r.leading().expect("normalizing the identity");
        let a = r.exps[d];
        match self.rel_order(d) {
            RelOrder::Finite(m) => {
                let e = a.extended_gcd(&m);
                let g = e.gcd.abs();
                if a == g {
                    return r;
                }
                // k*a = g (mod m)
                let k = (e.x * e.gcd.signum()).rem_euclid(m / g);
                let k = if k == 0 { m / g } else { k };
                self.power_elem(&r, k)
            }
            RelOrder::Infinite => {
                if a < 0 {
                    self.invert(&r)
                } else {
                    r
                }
            }
        }
    }

    fn absorb(&self, seq: &mut BTreeMap<usize, PcElement>, x: PcElement, queue: &mut Vec<PcElement>) -> Result<bool> {
        let h = PcSubgroup::from_map(self.len(), seq);
        let (_, r) = self.sift(&h, &x);
        if r.is_identity() {
            return Ok(false);
        }
        if r.exps.iter().any(|e| e.abs() > EXPONENT_LIMIT) {
            return Err(Error::Unsupported("subgroup exponents grew beyond the supported range".into()));
        }
        let r = self.normalize_lead(r);
        let d = r.leading().unwrap();
        match seq.get(&d).cloned() {
            None => {
                seq.insert(d, r);
            }
            Some(u) => {
                let (a, b) = (u.exps[d], r.exps[d]);
                let (g, s, t) = {
                    let e = a.extended_gcd(&b);
                    if e.gcd < 0 {
                        (-e.gcd, -e.x, -e.y)
                    } else {
                        (e.gcd, e.x, e.y)
                    }
                };
                let v = if g == b {
                    r.clone()
                } else {
                    self.multiply(&self.power_elem(&u, s), &self.power_elem(&r, t))
                };
                let v = self.normalize_lead(v);
                seq.insert(d, v);
                queue.push(u);
                if g != b {
                    queue.push(r);
                }
            }
        }
        Ok(true)
    }

    /// Closure of `seeds` under products; when `acting` is given, also under
    /// conjugation by those elements (and their inverses when of infinite
    /// order).
    fn close(&self, seeds: &[PcElement], acting: Option<&[PcElement]>) -> Result<PcSubgroup> {
        let mut seq: BTreeMap<usize, PcElement> = BTreeMap::new();
        let mut queue: Vec<PcElement> = seeds.iter().rev().cloned().collect();
        let mut done: HashSet<PcElement> = HashSet::new();
        loop {
            while let Some(x) = queue.pop() {
                self.absorb(&mut seq, x, &mut queue)?;
            }
            let current: Vec<PcElement> = seq.values().cloned().collect();
            let fresh: Vec<&PcElement> = current.iter().filter(|u| !done.contains(*u)).collect();
            if fresh.is_empty() {
                break;
            }
            let h = PcSubgroup::from_map(self.len(), &seq);
            let mut obligations = Vec::new();
            for u in &fresh {
                let d = u.leading().unwrap();
                let infinite_u = self.rel_order(d).is_infinite();
                if let RelOrder::Finite(m) = self.rel_order(d) {
                    obligations.push(self.power_elem(u, m / u.exps[d]));
                }
                for v in &current {
                    obligations.push(self.conjugate(v, u));
                    if infinite_u {
                        obligations.push(self.conjugate(v, &self.invert(u)));
                    }
                    if !done.contains(v) && v != *u {
                        continue;
                    }
                    let dv = v.leading().unwrap();
                    obligations.push(self.conjugate(u, v));
                    if self.rel_order(dv).is_infinite() {
                        obligations.push(self.conjugate(u, &self.invert(v)));
                    }
                }
                if let Some(act) = acting {
                    for g in act {
                        obligations.push(self.conjugate(u, g));
                        if g.leading().is_some_and(|l| self.rel_order(l).is_infinite()) {
                            obligations.push(self.conjugate(u, &self.invert(g)));
                        }
                    }
                }
            }
            for u in fresh {
                done.insert(u.clone());
            }
            for o in obligations {
                let (_, r) = self.sift(&h, &o);
                if !r.is_identity() {
                    queue.push(r);
                }
            }
            if queue.is_empty() {
                // members added earlier in this pass may still be unchecked
                if seq.values().all(|u| done.contains(u)) {
                    break;
                }
            }
        }
        Ok(PcSubgroup::from_map(self.len(), &seq))
    }

    /// Induced generating sequence of `<S>`.
    pub fn subgroup_span(&self, s: &[PcElement]) -> Result<PcSubgroup> {
        self.close(s, None)
    }

    /// Smallest normal subgroup containing `S`.
    pub fn normal_closure(&self, s: &[PcElement]) -> Result<PcSubgroup> {
        let gens: Vec<PcElement> = (0..self.len()).map(|i| self.generator(i)).collect();
        self.close(s, Some(&gens))
    }

    /// Normal closure of `S` in the subgroup generated by `acting` (which
    /// must normalize nothing in particular; `S` is closed under it).
    pub fn closure_under(&self, s: &[PcElement], acting: &[PcElement]) -> Result<PcSubgroup> {
        self.close(s, Some(acting))
    }

    pub fn is_normal(&self, h: &PcSubgroup) -> bool {
        h.gens.iter().all(|u| {
            (0..self.len()).all(|i| {
                let g = self.generator(i);
                self.contains(h, &self.conjugate(u, &g))
                    && (!self.rel_order(i).is_infinite() || self.contains(h, &self.conjugate(u, &self.invert(&g))))
            })
        })
    }

    /// `[A, B]` for normal subgroups `A`, `B`.
    pub fn commutator_subgroup(&self, a: &PcSubgroup, b: &PcSubgroup) -> Result<PcSubgroup> {
        let mut comms = Vec::new();
        for x in &a.gens {
            for y in &b.gens {
                let c = self.commutator(x, y);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
    }

    /// Subgroup generated by two subgroups.
    pub fn join(&self, a: &PcSubgroup, b: &PcSubgroup) -> Result<PcSubgroup> {
        let mut gens = a.gens.clone();
        gens.extend(b.gens.iter().cloned());
        self.subgroup_span(&gens)
    }

    /// Canonical representative of `xN`: lead coordinates of `N` cleared by
    /// right multiplication.
    pub fn coset_representative(&self, n: &PcSubgroup, x: &PcElement) -> PcElement {
        let mut x = x.clone();
        for (u, &d) in n.gens.iter().zip(&n.leads) {
            let v = x.exps[d];
            if v != 0 {
                debug_assert_eq!(u.exps[d], 1);
                x = self.multiply(&x, &self.power_elem(u, -v));
            }
        }
        x
    }

    /// Pc-presentation of `G/N`.
    pub fn quotient(&self, n: &PcSubgroup) -> Result<Quotient> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal("quotient requires a normal subgroup".into()));
        }
        if n.gens.iter().zip(&n.leads).any(|(u, &d)| u.exps[d] != 1) {
            return Err(Error::Unsupported(
                "quotient needs unit leading exponents; refine to prime steps first".into(),
            ));
        }
        let lead_set: HashSet<usize> = n.leads.iter().copied().collect();
        let kept: Vec<usize> = (0..self.len()).filter(|i| !lead_set.contains(i)).collect();
        let mut pos = vec![usize::MAX; self.len()];
        for (t, &i) in kept.iter().enumerate() {
            pos[i] = t;
        }
        let project = |x: &PcElement| -> Syllables {
            let r = self.coset_representative(n, x);
            kept.iter()
                .enumerate()
                .filter(|(_, &i)| r.exps[i] != 0)
                .map(|(t, &i)| (t, r.exps[i]))
                .collect()
        };
        let mut b = PcBuilder::new(self.prime()).name(format!("{}/N", self.name()));
        for &i in &kept {
            let g = &self.gens()[i];
            b.gen(g.name.clone(), g.order, g.weight);
        }
        for (t, &i) in kept.iter().enumerate() {
            if self.rel_order(i).finite().is_some() {
                b.power(t, project(&self.element_from_normal(self.power_rhs(i))));
            }
            for (s, &l) in kept.iter().enumerate().take(t) {
                b.conj(t, s, project(&self.element_from_normal(self.conj_rhs(i, l))));
            }
        }
        let group = b.build()?;
        Ok(Quotient {
            group,
            kept,
            kernel: n.clone(),
        })
    }

    /// The subgroup as a pc-group in its own right, on the induced sequence.
    pub fn subgroup_presentation(&self, h: &PcSubgroup) -> Result<PcPresentation> {
        let orders = self.subgroup_relative_orders(h);
        let mut b = PcBuilder::new(self.prime()).name(format!("subgroup of {}", self.name()));
        for (t, (&d, &o)) in h.leads.iter().zip(&orders).enumerate() {
            let name = if h.gens[t] == self.generator(d) {
                self.gens()[d].name.clone()
            } else {
                format!("u{}", t + 1)
            };
            b.gen(name, o, self.weight(d));
        }
        let express = |x: &PcElement| -> Result<Syllables> {
            let (c, r) = self.sift(h, x);
            if !r.is_identity() {
                return Err(Error::Internal("induced sequence is not closed".into()));
            }
            Ok(c.iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, &e)| (i, e)).collect())
        };
        for (t, u) in h.gens.iter().enumerate() {
            if let RelOrder::Finite(m) = orders[t] {
                b.power(t, express(&self.power_elem(u, m))?);
            }
            for s in 0..t {
                b.conj(t, s, express(&self.conjugate(u, &h.gens[s]))?);
            }
        }
        b.build()
    }

    /// Exponents of `x` with respect to the induced sequence of `h`, if `x`
    /// lies in `h`.
    pub fn subgroup_coordinates(&self, h: &PcSubgroup, x: &PcElement) -> Option<Vec<i64>> {
        let (c, r) = self.sift(h, x);
        r.is_identity().then_some(c)
    }

    /// Element of the parent from coordinates over an induced sequence.
    pub fn from_subgroup_coordinates(&self, h: &PcSubgroup, c: &[i64]) -> PcElement {
        let mut x = PcElement::identity(self.len());
        for (u, &e) in h.gens.iter().zip(c) {
            if e != 0 {
                x = self.multiply(&x, &self.power_elem(u, e));
            }
        }
        x
    }

    /// All elements of a finite subgroup (in induced-sequence order).
    pub fn subgroup_elements(&self, h: &PcSubgroup) -> Result<Vec<PcElement>> {
        let orders: Vec<i64> = self
            .subgroup_relative_orders(h)
            .into_iter()
            .map(|o| o.finite().ok_or(Error::InfiniteOrder))
            .collect::<Result<_>>()?;
        let mut out = vec![PcElement::identity(self.len())];
        for (u, &m) in h.gens.iter().zip(&orders).rev() {
            let mut next = Vec::with_capacity(out.len() * m as usize);
            let mut pw = PcElement::identity(self.len());
            for _ in 0..m {
                for x in &out {
                    next.push(self.multiply(&pw, x));
                }
                pw = self.multiply(&pw, u);
            }
            out = next;
        }
        Ok(out)
    }

    /// All elements of a finite pc-group, straight from the normal forms.
    pub fn elements(&self) -> Result<Vec<PcElement>> {
        let orders: Vec<i64> = self
            .gens()
            .iter()
            .map(|g| g.order.finite().ok_or(Error::InfiniteOrder))
            .collect::<Result<_>>()?;
        let mut out = vec![Vec::new()];
        for &m in &orders {
            let mut next = Vec::with_capacity(out.len() * m as usize);
            for v in &out {
                for e in 0..m {
                    let mut w = v.clone();
                    w.push(e);
                    next.push(w);
                }
            }
            out = next;
        }
        Ok(out.into_iter().map(|exps| PcElement { exps }).collect())
    }
}
