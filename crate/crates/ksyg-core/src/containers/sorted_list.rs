//! Dynamic kinetic sorted list with one adjacency certificate per
//! consecutive pair, so every element touches at most two certificates.

use super::cmp_keys;
use crate::error::{Error, Result};
use crate::events::{CertData, CertId, CertTag, Event, EventQueue};
use crate::num::QPoly;
use std::cmp::Ordering;
use std::collections::HashMap;

struct ElemInfo {
    key: QPoly,
    tie: u64,
    pos: usize,
}

pub struct KineticSortedList {
    tag: CertTag,
    coord: u64,
    order: Vec<u64>,
    elems: HashMap<u64, ElemInfo>,
    /// certs[i] guards (order[i], order[i+1]); len == max(len-1, 0).
    certs: Vec<Option<CertId>>,
    pub stale_events: u64,
}

/// Outcome of a swap event: the pair that exchanged, by id, with the lower
/// position they straddle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SwapOutcome {
    pub upper_before: u64,
    pub lower_before: u64,
    pub pos: usize,
}

impl KineticSortedList {
    pub fn new(tag: CertTag, coord: u64) -> Self {
        KineticSortedList {
            tag,
            coord,
            order: Vec::new(),
            elems: HashMap::new(),
            certs: Vec::new(),
            stale_events: 0,
        }
    }

    /// Builds the list in one pass; elements are sorted by key at the
    /// queue's current time.
    pub fn build(
        tag: CertTag,
        coord: u64,
        elems: Vec<(u64, QPoly, u64)>,
        q: &mut EventQueue,
    ) -> Self {
        let mut list = Self::new(tag, coord);
        let now = q.now();
        let mut items = elems;
        items.sort_by(|a, b| cmp_keys(&now, &a.1, a.2, &b.1, b.2));
        for (pos, (id, key, tie)) in items.into_iter().enumerate() {
            list.order.push(id);
            list.elems.insert(id, ElemInfo { key, tie, pos });
        }
        for i in 0..list.order.len().saturating_sub(1) {
            list.certs.push(None);
            list.refresh_cert(i, q);
        }
        list
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[u64] {
        &self.order
    }

    pub fn contains(&self, id: u64) -> bool {
        self.elems.contains_key(&id)
    }

    pub fn position_of(&self, id: u64) -> Option<usize> {
        self.elems.get(&id).map(|e| e.pos)
    }

    pub fn key_of(&self, id: u64) -> Option<&QPoly> {
        self.elems.get(&id).map(|e| &e.key)
    }

    /// The k-th smallest element, 1-based.
    pub fn kth(&self, k: usize) -> Result<u64> {
        if k == 0 || k > self.order.len() {
            return Err(Error::RankRange { rank: k, len: self.order.len() });
        }
        Ok(self.order[k - 1])
    }

    fn cert_poly(&self, i: usize) -> QPoly {
        let a = &self.elems[&self.order[i]];
        let b = &self.elems[&self.order[i + 1]];
        b.key.sub(&a.key)
    }

    /// Rebuilds the certificate guarding positions (i, i+1).
    fn refresh_cert(&mut self, i: usize, q: &mut EventQueue) {
        if i >= self.certs.len() {
            return;
        }
        if let Some(old) = self.certs[i].take() {
            q.deschedule(old);
        }
        let poly = self.cert_poly(i);
        let data = CertData::Adjacent { a: self.order[i] as u64, b: self.order[i + 1] };
        self.certs[i] = Some(q.schedule(self.tag, data, &poly, self.coord));
    }

    pub fn insert(&mut self, id: u64, key: QPoly, tie: u64, q: &mut EventQueue) -> Result<usize> {
        if self.elems.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        let now = q.now();
        let pos = self.order.partition_point(|&other| {
            let o = &self.elems[&other];
            cmp_keys(&now, &o.key, o.tie, &key, tie) == Ordering::Less
        });
        self.order.insert(pos, id);
        self.elems.insert(id, ElemInfo { key, tie, pos });
        for p in pos + 1..self.order.len() {
            self.elems.get_mut(&self.order[p]).unwrap().pos = p;
        }
        if self.order.len() >= 2 {
            self.certs.insert(pos.min(self.certs.len()), None);
        }
        if pos > 0 {
            self.refresh_cert(pos - 1, q);
        }
        self.refresh_cert(pos, q);
        Ok(pos)
    }

    pub fn delete(&mut self, id: u64, q: &mut EventQueue) -> Result<usize> {
        let info = self.elems.remove(&id).ok_or(Error::UnknownId(id))?;
        let pos = info.pos;
        if pos > 0 {
            if let Some(c) = self.certs[pos - 1].take() {
                q.deschedule(c);
            }
        }
        if pos < self.certs.len() {
            if let Some(c) = self.certs[pos].take() {
                q.deschedule(c);
            }
        }
        self.order.remove(pos);
        if !self.certs.is_empty() {
            self.certs.remove(pos.min(self.certs.len() - 1));
        }
        for p in pos..self.order.len() {
            self.elems.get_mut(&self.order[p]).unwrap().pos = p;
        }
        if pos > 0 && pos < self.order.len() {
            // Bridge the gap.
            self.refresh_cert(pos - 1, q);
        }
        Ok(pos)
    }

    fn swap_at(&mut self, pos: usize, q: &mut EventQueue) -> SwapOutcome {
        let a = self.order[pos];
        let b = self.order[pos + 1];
        self.order.swap(pos, pos + 1);
        self.elems.get_mut(&a).unwrap().pos = pos + 1;
        self.elems.get_mut(&b).unwrap().pos = pos;
        if pos > 0 {
            self.refresh_cert(pos - 1, q);
        }
        self.refresh_cert(pos, q);
        if pos + 1 < self.certs.len() {
            self.refresh_cert(pos + 1, q);
        }
        SwapOutcome { upper_before: a, lower_before: b, pos }
    }

    /// True when the pair at (i, i+1) is out of order for the interval just
    /// after now. Between events this never happens; at an event instant a
    /// neighbor pair can tie exactly and diverge inverted.
    fn pair_inverted(&self, i: usize, now: &crate::num::SimTime) -> bool {
        if i + 1 >= self.order.len() {
            return false;
        }
        let a = &self.elems[&self.order[i]];
        let b = &self.elems[&self.order[i + 1]];
        cmp_keys(now, &a.key, a.tie, &b.key, b.tie) == Ordering::Greater
    }

    /// Applies a fired adjacency certificate. The primary pair swaps;
    /// neighbor pairs that tie at this exact instant and diverge inverted
    /// swap in the same update, so every created certificate is valid on
    /// the upcoming interval. Returns the swaps performed in order, or None
    /// (with a diagnostic count) for stale events.
    pub fn handle_swap(&mut self, ev: &Event, q: &mut EventQueue) -> Option<Vec<SwapOutcome>> {
        let CertData::Adjacent { a, b } = ev.data else {
            self.stale_events += 1;
            return None;
        };
        let pos = match self.elems.get(&a) {
            Some(e) => e.pos,
            None => {
                self.stale_events += 1;
                return None;
            }
        };
        let live = pos < self.certs.len() && self.certs[pos] == Some(ev.id);
        if !live || self.order.get(pos + 1) != Some(&b) {
            self.stale_events += 1;
            return None;
        }
        self.certs[pos] = None; // fired, already removed from the queue
        let now = q.now();
        let mut outcomes = vec![self.swap_at(pos, q)];
        let mut work: Vec<usize> = Vec::new();
        if pos > 0 {
            work.push(pos - 1);
        }
        work.push(pos + 1);
        while let Some(i) = work.pop() {
            if self.pair_inverted(i, &now) {
                outcomes.push(self.swap_at(i, q));
                if i > 0 {
                    work.push(i - 1);
                }
                work.push(i + 1);
            }
        }
        Some(outcomes)
    }

    /// Number of live certificates an element participates in (<= 2).
    pub fn cert_count_of(&self, id: u64) -> usize {
        match self.elems.get(&id) {
            None => 0,
            Some(e) => {
                let mut n = 0;
                if e.pos > 0 && self.certs[e.pos - 1].is_some() {
                    n += 1;
                }
                if e.pos < self.certs.len() && self.certs[e.pos].is_some() {
                    n += 1;
                }
                n
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::EventQueue;
    use crate::num::{rat_i64, QPoly, Rat, SimTime};

    fn lin(c0: i64, c1: i64) -> QPoly {
        QPoly::from_coeffs(vec![rat_i64(c0), rat_i64(c1)])
    }

    fn drain_and_apply(list: &mut KineticSortedList, q: &mut EventQueue, until: i64) -> usize {
        let mut n = 0;
        while let Some(t) = q.peek_time() {
            if t > SimTime::Rat(rat_i64(until)) {
                break;
            }
            let ev = q.pop_next().unwrap();
            list.handle_swap(&ev, q);
            n += 1;
        }
        n
    }

    #[test]
    fn swap_example() {
        // keys {a: t, b: 2-t} at t=0 -> order (a,b); swap at t=1 -> (b,a)
        let mut q = EventQueue::new(SimTime::zero());
        let mut list = KineticSortedList::build(
            CertTag(0),
            0,
            vec![(1, lin(0, 1), 1), (2, lin(2, -1), 2)],
            &mut q,
        );
        assert_eq!(list.order(), &[1, 2]);
        let n = drain_and_apply(&mut list, &mut q, 10);
        assert_eq!(n, 1);
        assert_eq!(list.order(), &[2, 1]);
    }

    #[test]
    fn insert_and_delete_examples() {
        let mut q = EventQueue::new(SimTime::zero());
        let mut list = KineticSortedList::build(
            CertTag(0),
            0,
            vec![(1, lin(0, 1), 1), (2, lin(2, -1), 2)],
            &mut q,
        );
        // insert c with constant key 10 -> order (a,b,c)
        list.insert(3, lin(10, 0), 3, &mut q).unwrap();
        assert_eq!(list.order(), &[1, 2, 3]);
        assert_eq!(q.live(), 2);
        assert!(list.insert(3, lin(0, 0), 3, &mut q).is_err());
        // delete b -> (a,c) with one bridging certificate
        list.delete(2, &mut q).unwrap();
        assert_eq!(list.order(), &[1, 3]);
        assert_eq!(q.live(), 1);
        assert!(list.delete(2, &mut q).is_err());
        assert_eq!(list.kth(1).unwrap(), 1);
        assert_eq!(list.kth(2).unwrap(), 3);
        assert!(list.kth(0).is_err());
        assert!(list.kth(3).is_err());
    }

    #[test]
    fn order_matches_brute_force_at_random_times() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let n = rng.gen_range(2..12usize);
            let elems: Vec<(u64, QPoly, u64)> = (0..n as u64)
                .map(|id| {
                    let c0 = rat_i64(rng.gen_range(-20..20));
                    let c1 = rat_i64(rng.gen_range(-5..5));
                    let c2 = rat_i64(rng.gen_range(-2..2));
                    (id, QPoly::from_coeffs(vec![c0, c1, c2]), id)
                })
                .collect();
            let mut q = EventQueue::new(SimTime::zero());
            let mut list = KineticSortedList::build(CertTag(0), 0, elems.clone(), &mut q);
            // Denominator 101 with numerator coprime to it: swap times of
            // these small integer-coefficient keys can never land there.
            let mut t_checks: Vec<Rat> = (0..100)
                .map(|_| {
                    let mut k = rng.gen_range(1..4000i64);
                    if k % 101 == 0 {
                        k += 1;
                    }
                    Rat::new(k.into(), 101.into())
                })
                .collect();
            t_checks.sort();
            for t in t_checks {
                // Advance the simulation past all events before t.
                while let Some(ft) = q.peek_time() {
                    if ft > SimTime::Rat(t.clone()) {
                        break;
                    }
                    let ev = q.pop_next().unwrap();
                    list.handle_swap(&ev, &mut q);
                }
                let mut expect: Vec<u64> = elems.iter().map(|e| e.0).collect();
                expect.sort_by(|&x, &y| {
                    let kx = elems[x as usize].1.eval(&t);
                    let ky = elems[y as usize].1.eval(&t);
                    kx.cmp(&ky).then(x.cmp(&y))
                });
                assert_eq!(list.order(), expect.as_slice(), "at t={}", t);
                // Certificate locality.
                for e in &elems {
                    assert!(list.cert_count_of(e.0) <= 2);
                }
            }
        }
    }

    #[test]
    fn linear_keys_event_budget() {
        // One moving element against n-1 static ones fires at most n-1 swaps.
        let mut q = EventQueue::new(SimTime::zero());
        let n = 12;
        let mut elems: Vec<(u64, QPoly, u64)> = (0..n - 1)
            .map(|i| (i as u64, lin(i + 1, 0), i as u64))
            .collect();
        elems.push((99, lin(0, 1), 99)); // starts lowest, sweeps upward
        let mut list = KineticSortedList::build(CertTag(0), 0, elems, &mut q);
        let mut fired = 0;
        while let Some(ev) = q.pop_next() {
            assert!(list.handle_swap(&ev, &mut q).is_some());
            fired += 1;
        }
        assert!(fired <= (n - 1) as usize);
        assert_eq!(list.order().last(), Some(&99));
    }

    #[test]
    fn identical_keys_are_inert_and_id_ordered() {
        let mut q = EventQueue::new(SimTime::zero());
        let list = KineticSortedList::build(
            CertTag(0),
            0,
            vec![(7, lin(1, 1), 7), (3, lin(1, 1), 3)],
            &mut q,
        );
        assert_eq!(list.order(), &[3, 7]);
        assert_eq!(q.counts.inert, 1);
        assert!(q.pop_next().is_none());
    }
}
