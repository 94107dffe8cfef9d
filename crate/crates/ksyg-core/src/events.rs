//! Certificates and the global event queue of one simulation domain.
//!
//! A certificate is a polynomial predicate that must stay nonnegative; its
//! failure time is the predicate's next odd-multiplicity root. Simultaneous
//! failures pop in (time, coordinate id, point-id pair, sequence) order, so
//! the whole simulation is a deterministic total order of events.

use crate::num::roots::next_sign_change_after;
use crate::num::{QPoly, SimTime};
use std::collections::{BTreeMap, HashMap};

pub type CertId = u64;

/// Routing key: which structure owns a certificate and must handle its
/// failure. Layouts are assigned by the simulation when wiring structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CertTag(pub u64);

/// What the certificate guards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertData {
    /// Order of two adjacent elements in a sorted list.
    Adjacent { a: u64, b: u64 },
    /// A tournament match: current winner `w` beats contender `c` at `node`.
    Match { node: u32, w: u64, c: u64 },
}

impl CertData {
    fn pts(&self) -> (u64, u64) {
        let (x, y) = match *self {
            CertData::Adjacent { a, b } => (a, b),
            CertData::Match { w, c, .. } => (w, c),
        };
        (x.min(y), x.max(y))
    }
}

#[derive(Clone, Debug)]
struct QueueKey {
    time: SimTime,
    coord: u64,
    pts: (u64, u64),
    seq: u64,
}

impl PartialEq for QueueKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}
impl Eq for QueueKey {}
impl PartialOrd for QueueKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QueueKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.time
            .cmp(&other.time)
            .then_with(|| self.coord.cmp(&other.coord))
            .then_with(|| self.pts.cmp(&other.pts))
            .then_with(|| self.seq.cmp(&other.seq))
    }
}

struct CertEntry {
    tag: CertTag,
    data: CertData,
    key: Option<QueueKey>, // None: inert (predicate never fails)
}

/// A popped event, ready for dispatch to its owning structure.
#[derive(Clone, Debug)]
pub struct Event {
    pub id: CertId,
    pub tag: CertTag,
    pub data: CertData,
    pub time: SimTime,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueueCounts {
    pub scheduled: u64,
    pub descheduled: u64,
    pub popped: u64,
    pub inert: u64,
}

pub struct EventQueue {
    order: BTreeMap<QueueKey, CertId>,
    certs: HashMap<CertId, CertEntry>,
    now: SimTime,
    next_id: CertId,
    next_seq: u64,
    pub counts: QueueCounts,
}

impl EventQueue {
    pub fn new(t0: SimTime) -> Self {
        EventQueue {
            order: BTreeMap::new(),
            certs: HashMap::new(),
            now: t0,
            next_id: 1,
            next_seq: 0,
            counts: QueueCounts::default(),
        }
    }

    pub fn now(&self) -> SimTime {
        self.now.clone()
    }

    /// Live certificates currently registered (fireable or inert).
    pub fn live(&self) -> usize {
        self.certs.len()
    }

    pub fn pending(&self) -> usize {
        self.order.len()
    }

    /// Registers a certificate for the predicate `poly >= 0`. The failure
    /// time is the next sign change strictly after `now`; a predicate with
    /// no later sign change (including the identically-zero one) is stored
    /// inert and never fires.
    pub fn schedule(&mut self, tag: CertTag, data: CertData, poly: &QPoly, coord: u64) -> CertId {
        let id = self.next_id;
        self.next_id += 1;
        self.counts.scheduled += 1;
        let key = next_sign_change_after(poly, &self.now).map(|(time, _)| {
            let seq = self.next_seq;
            self.next_seq += 1;
            QueueKey { time, coord, pts: data.pts(), seq }
        });
        match key {
            Some(key) => {
                self.order.insert(key.clone(), id);
                self.certs.insert(id, CertEntry { tag, data, key: Some(key) });
            }
            None => {
                self.counts.inert += 1;
                self.certs.insert(id, CertEntry { tag, data, key: None });
            }
        }
        id
    }

    /// Removes a certificate without firing it. Returns false when the id is
    /// unknown (already popped or descheduled).
    pub fn deschedule(&mut self, id: CertId) -> bool {
        match self.certs.remove(&id) {
            Some(entry) => {
                if let Some(key) = entry.key {
                    self.order.remove(&key);
                }
                self.counts.descheduled += 1;
                true
            }
            None => false,
        }
    }

    pub fn is_live(&self, id: CertId) -> bool {
        self.certs.contains_key(&id)
    }

    /// Failure time of the next fireable certificate.
    pub fn peek_time(&self) -> Option<SimTime> {
        self.order.keys().next().map(|k| k.time.clone())
    }

    /// Pops the next event and advances current time to its failure time.
    /// Returns None when no fireable certificate remains (simulation end).
    pub fn pop_next(&mut self) -> Option<Event> {
        let (key, id) = self.order.pop_first()?;
        let entry = self.certs.remove(&id).expect("queue entry without certificate");
        debug_assert!(key.time >= self.now, "event queue time went backwards");
        self.now = key.time.clone();
        self.counts.popped += 1;
        Some(Event { id, tag: entry.tag, data: entry.data, time: key.time })
    }

    /// Advances current time to `t`; requires `t >= now` and no pending
    /// event earlier than `t` (callers drain those first).
    pub fn advance_now(&mut self, t: SimTime) {
        debug_assert!(t >= self.now);
        self.now = t;
    }
}
