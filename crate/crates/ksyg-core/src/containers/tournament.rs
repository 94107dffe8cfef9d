//! Dynamic kinetic tournament tree: maintains the minimum-key element of a
//! changing set. Match certificates live at internal nodes; an update or
//! event touches one leaf-to-root path. Deletions mark slots dead and the
//! tree compacts itself once the live fraction drops below one half.

use super::cmp_keys;
use crate::error::{Error, Result};
use crate::events::{CertData, CertId, CertTag, Event, EventQueue};
use crate::num::QPoly;
use std::cmp::Ordering;
use std::collections::HashMap;

struct ElemInfo {
    key: QPoly,
    tie: u64,
    leaf: usize,
}

pub struct KineticTournament {
    tag: CertTag,
    coord: u64,
    /// Leaf slots; `None` marks a dead slot.
    leaves: Vec<Option<u64>>,
    elems: HashMap<u64, ElemInfo>,
    /// Implicit heap: winners of internal nodes 1..cap (leaves map to
    /// cap..2cap). Index 0 unused.
    winner: Vec<Option<u64>>,
    cert: Vec<Option<CertId>>,
    cap: usize,
    pub stale_events: u64,
}

impl KineticTournament {
    pub fn new(tag: CertTag, coord: u64) -> Self {
        KineticTournament {
            tag,
            coord,
            leaves: Vec::new(),
            elems: HashMap::new(),
            winner: Vec::new(),
            cert: Vec::new(),
            cap: 0,
            stale_events: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, id: u64) -> bool {
        self.elems.contains_key(&id)
    }

    pub fn key_of(&self, id: u64) -> Option<&QPoly> {
        self.elems.get(&id).map(|e| &e.key)
    }

    /// Minimum-key element at current time, or an error when empty.
    pub fn winner(&self) -> Result<u64> {
        if self.cap == 0 {
            return Err(Error::Empty("tournament winner"));
        }
        self.winner[1].ok_or(Error::Empty("tournament winner"))
    }

    fn beats(&self, now: &crate::num::SimTime, a: u64, b: u64) -> bool {
        let ea = &self.elems[&a];
        let eb = &self.elems[&b];
        cmp_keys(now, &ea.key, ea.tie, &eb.key, eb.tie) != Ordering::Greater
    }

    fn node_children(&self, node: usize) -> (Option<u64>, Option<u64>) {
        let get = |idx: usize| -> Option<u64> {
            if idx >= self.cap {
                self.leaves.get(idx - self.cap).copied().flatten()
            } else {
                self.winner[idx]
            }
        };
        (get(2 * node), get(2 * node + 1))
    }

    /// Recomputes winner and certificate of one internal node.
    fn refresh_node(&mut self, node: usize, q: &mut EventQueue) {
        if let Some(c) = self.cert[node].take() {
            q.deschedule(c);
        }
        let (l, r) = self.node_children(node);
        let now = q.now();
        let win = match (l, r) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (Some(a), Some(b)) => {
                let (w, loser) = if self.beats(&now, a, b) { (a, b) } else { (b, a) };
                let pw = &self.elems[&w].key;
                let pl = &self.elems[&loser].key;
                let pred = pl.sub(pw);
                let data = CertData::Match { node: node as u32, w, c: loser };
                self.cert[node] = Some(q.schedule(self.tag, data, &pred, self.coord));
                Some(w)
            }
        };
        self.winner[node] = win;
    }

    fn refresh_path(&mut self, leaf: usize, q: &mut EventQueue, work: &mut u64) {
        let mut node = (self.cap + leaf) / 2;
        while node >= 1 {
            self.refresh_node(node, q);
            *work += 1;
            node /= 2;
        }
    }

    fn rebuild(&mut self, q: &mut EventQueue, work: &mut u64) {
        for c in self.cert.iter_mut() {
            if let Some(id) = c.take() {
                q.deschedule(id);
            }
        }
        let mut ids: Vec<u64> = self.elems.keys().copied().collect();
        ids.sort_unstable();
        // cap >= 2 keeps the root an internal node even for one element.
        self.cap = ids.len().next_power_of_two().max(2);
        self.leaves = vec![None; self.cap];
        self.winner = vec![None; self.cap];
        self.cert = vec![None; self.cap];
        for (i, id) in ids.iter().enumerate() {
            self.leaves[i] = Some(*id);
            self.elems.get_mut(id).unwrap().leaf = i;
        }
        for node in (1..self.cap).rev() {
            self.refresh_node(node, q);
            *work += 1;
        }
    }

    pub fn insert(&mut self, id: u64, key: QPoly, tie: u64, q: &mut EventQueue, work: &mut u64) -> Result<()> {
        if self.elems.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        // Reuse a dead slot if one exists; otherwise grow.
        let slot = self.leaves.iter().position(|s| s.is_none());
        self.elems.insert(id, ElemInfo { key, tie, leaf: 0 });
        match slot {
            Some(i) if self.cap > 0 => {
                self.leaves[i] = Some(id);
                self.elems.get_mut(&id).unwrap().leaf = i;
                self.refresh_path(i, q, work);
            }
            _ => self.rebuild(q, work),
        }
        Ok(())
    }

    pub fn delete(&mut self, id: u64, q: &mut EventQueue, work: &mut u64) -> Result<()> {
        let info = self.elems.remove(&id).ok_or(Error::UnknownId(id))?;
        self.leaves[info.leaf] = None;
        if self.elems.len() * 2 < self.leaves.len() {
            self.rebuild(q, work);
        } else {
            self.refresh_path(info.leaf, q, work);
        }
        Ok(())
    }

    /// Replaces the key of an element (delete + insert fused on one path).
    pub fn update_key(&mut self, id: u64, key: QPoly, q: &mut EventQueue, work: &mut u64) -> Result<()> {
        let leaf = self.elems.get(&id).ok_or(Error::UnknownId(id))?.leaf;
        self.elems.get_mut(&id).unwrap().key = key;
        self.refresh_path(leaf, q, work);
        Ok(())
    }

    /// Applies a fired match certificate; returns the winner after the
    /// update when the event was live.
    pub fn handle_match(&mut self, ev: &Event, q: &mut EventQueue, work: &mut u64) -> Option<Option<u64>> {
        let CertData::Match { node, .. } = ev.data else {
            self.stale_events += 1;
            return None;
        };
        let node = node as usize;
        if node >= self.cert.len() || self.cert[node] != Some(ev.id) {
            self.stale_events += 1;
            return None;
        }
        self.cert[node] = None; // fired
        let mut n = node;
        while n >= 1 {
            self.refresh_node(n, q);
            *work += 1;
            n /= 2;
        }
        Some(self.winner.get(1).copied().flatten())
    }

    /// Live certificates attached to an element (locality check support).
    pub fn cert_count_of(&self, id: u64) -> usize {
        let Some(info) = self.elems.get(&id) else { return 0 };
        let mut count = 0;
        let mut node = (self.cap + info.leaf) / 2;
        while node >= 1 {
            if self.cert[node].is_some() {
                count += 1;
            }
            node /= 2;
        }
        count
    }
}
