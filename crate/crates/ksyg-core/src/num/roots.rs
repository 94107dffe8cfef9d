//! Real-root isolation and exactly ordered event times.
//!
//! Roots are isolated by Descartes'-rule bisection on rational intervals;
//! multiplicities come from Yun's squarefree decomposition. An isolated root
//! becomes a [`SimTime`]: either an exact rational or an algebraic real held
//! as (squarefree polynomial, shrinking isolating interval). Comparing two
//! times refines their intervals until disjoint, with a gcd test deciding
//! genuine equality, so the event queue gets a total order with no
//! floating-point ambiguity.

use super::poly::QPoly;
use super::Rat;
use num::traits::{One, Signed, Zero};
use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::rc::Rc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// An isolated real root of a specific squarefree polynomial.
#[derive(Clone, Debug)]
pub enum RootLoc {
    Exact(Rat),
    /// `poly` is squarefree with a single simple root in the open interval;
    /// the signs at the endpoints differ and are nonzero.
    Interval { poly: QPoly, lo: Rat, hi: Rat },
}

/// Number of sign variations in the coefficient sequence.
fn variations(coeffs: &[Rat]) -> usize {
    let mut count = 0;
    let mut last = 0i32;
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        let s = if c.is_positive() { 1 } else { -1 };
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Descartes bound on the number of roots of `p` in the open interval
/// `(a, b)`: variations of `(1+x)^n p((a + b x)/(1 + x))`.
fn descartes_bound(p: &QPoly, a: &Rat, b: &Rat) -> usize {
    let n = p.degree().unwrap_or(0);
    let lin_a = QPoly::from_coeffs(vec![a.clone(), b.clone()]); // a + b x
    let lin_b = QPoly::from_coeffs(vec![Rat::one(), Rat::one()]); // 1 + x
    // powers of both linear forms up to n
    let mut pow_a = Vec::with_capacity(n + 1);
    let mut pow_b = Vec::with_capacity(n + 1);
    pow_a.push(QPoly::constant(Rat::one()));
    pow_b.push(QPoly::constant(Rat::one()));
    for i in 1..=n {
        pow_a.push(pow_a[i - 1].mul(&lin_a));
        pow_b.push(pow_b[i - 1].mul(&lin_b));
    }
    let mut acc = QPoly::zero();
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&pow_a[i].mul(&pow_b[n - i]).scale(c));
    }
    variations(acc.coeffs())
}

/// Cauchy bound: all real roots lie strictly inside (-M, M).
fn root_bound(p: &QPoly) -> Rat {
    let lead = p.leading().expect("nonzero polynomial");
    let mut m = Rat::zero();
    for c in p.coeffs() {
        let r = (c / lead).abs();
        if r > m {
            m = r;
        }
    }
    m + Rat::one()
}

/// Isolates all roots of a squarefree `p` in `(a, b)`; requires nonzero
/// endpoint values.
fn isolate_squarefree(p: &QPoly, a: &Rat, b: &Rat, out: &mut Vec<RootLoc>) {
    debug_assert!(p.sign_at(a) != 0 && p.sign_at(b) != 0);
    match descartes_bound(p, a, b) {
        0 => {}
        1 => out.push(RootLoc::Interval {
            poly: p.clone(),
            lo: a.clone(),
            hi: b.clone(),
        }),
        _ => {
            let mid = (a + b) / super::rat_i64(2);
            if p.sign_at(&mid) == 0 {
                // Exact rational root: divide it out and recurse on the rest.
                let lin = QPoly::from_coeffs(vec![-mid.clone(), Rat::one()]);
                let (q, r) = p.div_rem(&lin);
                debug_assert!(r.is_zero());
                if !q.is_constant() {
                    isolate_squarefree(&q, a, &mid, out);
                }
                out.push(RootLoc::Exact(mid.clone()));
                if !q.is_constant() {
                    isolate_squarefree(&q, &mid, b, out);
                }
            } else {
                isolate_squarefree(p, a, &mid, out);
                isolate_squarefree(p, &mid, b, out);
            }
        }
    }
}

/// All real roots of `f` in ascending order with multiplicities.
pub fn real_roots(f: &QPoly) -> Vec<(RootLoc, usize)> {
    if f.is_zero() || f.is_constant() {
        return Vec::new();
    }
    if f.degree() == Some(1) {
        let c = f.coeffs();
        return vec![(RootLoc::Exact(-(&c[0] / &c[1])), 1)];
    }
    let mut roots: Vec<(RootLoc, usize)> = Vec::new();
    for (factor, mult) in f.squarefree_decomposition() {
        if factor.is_constant() {
            continue;
        }
        let mut locs = Vec::new();
        if factor.degree() == Some(1) {
            let c = factor.coeffs();
            locs.push(RootLoc::Exact(-(&c[0] / &c[1])));
        } else {
            let m = root_bound(&factor);
            isolate_squarefree(&factor, &(-m.clone()), &m, &mut locs);
        }
        for loc in locs {
            roots.push((loc, mult));
        }
    }
    // Roots of distinct squarefree factors are distinct; sort by refining.
    insertion_sort_roots(&mut roots);
    roots
}

fn insertion_sort_roots(roots: &mut Vec<(RootLoc, usize)>) {
    for i in 1..roots.len() {
        let mut j = i;
        while j > 0 {
            let (left, right) = roots.split_at_mut(j);
            if cmp_rootlocs(&mut left[j - 1].0, &mut right[0].0) == Ordering::Greater {
                roots.swap(j - 1, j);
                j -= 1;
            } else {
                break;
            }
        }
    }
}

fn refine_interval(poly: &QPoly, lo: &mut Rat, hi: &mut Rat) {
    let mid = (&*lo + &*hi) / super::rat_i64(2);
    let s = poly.sign_at(&mid);
    if s == 0 {
        // Collapse to the exact root.
        *lo = mid.clone();
        *hi = mid;
    } else if s == poly.sign_at(lo) {
        *lo = mid;
    } else {
        *hi = mid;
    }
}

/// Exact comparison of two isolated roots known to be distinct unless the
/// same location; refines intervals in place.
fn cmp_rootlocs(a: &mut RootLoc, b: &mut RootLoc) -> Ordering {
    loop {
        match (&mut *a, &mut *b) {
            (RootLoc::Exact(x), RootLoc::Exact(y)) => return (*x).cmp(&*y),
            (RootLoc::Exact(x), RootLoc::Interval { poly, lo, hi }) => {
                if *x <= *lo {
                    return Ordering::Less;
                }
                if *x >= *hi {
                    return Ordering::Greater;
                }
                if poly.sign_at(x) == 0 {
                    return Ordering::Equal;
                }
                let (p, mut l, mut h) = (poly.clone(), lo.clone(), hi.clone());
                refine_interval(&p, &mut l, &mut h);
                if l == h {
                    *a = RootLoc::Exact(x.clone());
                    *b = RootLoc::Exact(l);
                } else {
                    *b = RootLoc::Interval { poly: p, lo: l, hi: h };
                }
            }
            (RootLoc::Interval { .. }, RootLoc::Exact(_)) => {
                return cmp_rootlocs(b, a).reverse();
            }
            (
                RootLoc::Interval { poly: pa, lo: la, hi: ha },
                RootLoc::Interval { poly: pb, lo: lb, hi: hb },
            ) => {
                if *ha <= *lb {
                    return Ordering::Less;
                }
                if *hb <= *la {
                    return Ordering::Greater;
                }
                // Overlap: decide equality via the shared factor, else refine.
                let g = pa.gcd(pb);
                if !g.is_constant() {
                    let ilo = if la > lb { la.clone() } else { lb.clone() };
                    let ihi = if ha < hb { ha.clone() } else { hb.clone() };
                    if ilo < ihi && g.sign_at(&ilo) != g.sign_at(&ihi) {
                        return Ordering::Equal;
                    }
                }
                let (p1, mut l1, mut h1) = (pa.clone(), la.clone(), ha.clone());
                refine_interval(&p1, &mut l1, &mut h1);
                *a = if l1 == h1 {
                    RootLoc::Exact(l1)
                } else {
                    RootLoc::Interval { poly: p1, lo: l1, hi: h1 }
                };
                let (p2, mut l2, mut h2) = (pb.clone(), lb.clone(), hb.clone());
                refine_interval(&p2, &mut l2, &mut h2);
                *b = if l2 == h2 {
                    RootLoc::Exact(l2)
                } else {
                    RootLoc::Interval { poly: p2, lo: l2, hi: h2 }
                };
            }
        }
    }
}

/// A simulation timestamp: exact rational or isolated algebraic real.
/// Cheap to clone; clones share the refining interval.
#[derive(Clone)]
pub enum SimTime {
    Rat(Rat),
    Alg(Rc<AlgReal>),
}

pub struct AlgReal {
    poly: QPoly,
    iv: RefCell<(Rat, Rat)>,
}

impl SimTime {
    pub fn rational(r: Rat) -> Self {
        SimTime::Rat(r)
    }

    pub fn from_rootloc(loc: RootLoc) -> Self {
        match loc {
            RootLoc::Exact(r) => SimTime::Rat(r),
            RootLoc::Interval { poly, lo, hi } => SimTime::Alg(Rc::new(AlgReal {
                poly,
                iv: RefCell::new((lo, hi)),
            })),
        }
    }

    pub fn zero() -> Self {
        SimTime::Rat(Rat::zero())
    }

    /// Current rational lower bound (inclusive for `Rat`).
    pub fn lower_bound(&self) -> Rat {
        match self {
            SimTime::Rat(r) => r.clone(),
            SimTime::Alg(a) => a.iv.borrow().0.clone(),
        }
    }

    /// Current rational upper bound (inclusive for `Rat`).
    pub fn upper_bound(&self) -> Rat {
        match self {
            SimTime::Rat(r) => r.clone(),
            SimTime::Alg(a) => a.iv.borrow().1.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<Rat> {
        match self {
            SimTime::Rat(r) => Some(r.clone()),
            SimTime::Alg(a) => {
                let iv = a.iv.borrow();
                (iv.0 == iv.1).then(|| iv.0.clone())
            }
        }
    }

    fn refine_once(&self) {
        if let SimTime::Alg(a) = self {
            let mut iv = a.iv.borrow_mut();
            if iv.0 != iv.1 {
                let (mut lo, mut hi) = iv.clone();
                refine_interval(&a.poly, &mut lo, &mut hi);
                *iv = (lo, hi);
            }
        }
    }

    /// Shrinks the isolating interval below the given width.
    pub fn refine_to_width(&self, width: &Rat) {
        while {
            let lo = self.lower_bound();
            let hi = self.upper_bound();
            hi - lo > *width
        } {
            self.refine_once();
        }
    }

    pub fn to_f64(&self) -> f64 {
        let eps = Rat::new(1.into(), num::BigInt::from(1u64 << 48));
        self.refine_to_width(&eps);
        let mid = (self.lower_bound() + self.upper_bound()) / super::rat_i64(2);
        super::rat_to_f64(&mid)
    }

    /// Exact sign of `q` evaluated at this time.
    pub fn sign_of_poly(&self, q: &QPoly) -> i32 {
        if q.is_zero() {
            return 0;
        }
        match self {
            SimTime::Rat(r) => q.sign_at(r),
            SimTime::Alg(a) => {
                {
                    let (lo, hi) = a.iv.borrow().clone();
                    if lo == hi {
                        return q.sign_at(&lo);
                    }
                    // Cheap path: no q-roots inside the isolating interval.
                    if descartes_bound(q, &lo, &hi) == 0 {
                        let mid = (&lo + &hi) / super::rat_i64(2);
                        return q.sign_at(&mid);
                    }
                }
                // q could vanish exactly at this algebraic number.
                let g = a.poly.gcd(q);
                if !g.is_constant() {
                    let (lo, hi) = a.iv.borrow().clone();
                    if g.sign_at(&lo) != g.sign_at(&hi) {
                        return 0;
                    }
                }
                loop {
                    self.refine_once();
                    let (lo, hi) = a.iv.borrow().clone();
                    if lo == hi {
                        return q.sign_at(&lo);
                    }
                    if descartes_bound(q, &lo, &hi) == 0 {
                        let mid = (&lo + &hi) / super::rat_i64(2);
                        return q.sign_at(&mid);
                    }
                }
            }
        }
    }

    /// Sign of `q` immediately after this time: the sign it holds on the
    /// open interval up to its next root. Zero only for the zero polynomial.
    pub fn sign_just_after(&self, q: &QPoly) -> i32 {
        let now = self.sign_of_poly(q);
        if now != 0 {
            return now;
        }
        if q.is_zero() {
            return 0;
        }
        let probe = match next_root_after(q, self) {
            Some((next, _)) => {
                // Strictly between this time and the next root of q.
                loop {
                    let hi = self.upper_bound();
                    let lo = next.lower_bound();
                    if hi < lo {
                        break super::simplest_between(&hi, &lo);
                    }
                    if let Some(r) = self.as_rational() {
                        if r < lo {
                            break super::simplest_between(&r, &lo);
                        }
                    }
                    self.refine_once();
                    next.refine_once();
                }
            }
            None => self.upper_bound() + Rat::one(),
        };
        q.sign_at(&probe)
    }

    fn cmp_impl(&self, other: &SimTime) -> Ordering {
        match (self, other) {
            (SimTime::Rat(a), SimTime::Rat(b)) => a.cmp(b),
            (SimTime::Rat(r), SimTime::Alg(b)) => {
                loop {
                    let (lo, hi) = b.iv.borrow().clone();
                    if lo == hi {
                        return r.cmp(&lo);
                    }
                    if *r <= lo {
                        return Ordering::Less;
                    }
                    if *r >= hi {
                        return Ordering::Greater;
                    }
                    if b.poly.sign_at(r) == 0 {
                        return Ordering::Equal;
                    }
                    other.refine_once();
                }
            }
            (SimTime::Alg(_), SimTime::Rat(_)) => other.cmp_impl(self).reverse(),
            (SimTime::Alg(a), SimTime::Alg(b)) => {
                if Rc::ptr_eq(a, b) {
                    return Ordering::Equal;
                }
                let mut checked_gcd = false;
                loop {
                    let (la, ha) = a.iv.borrow().clone();
                    let (lb, hb) = b.iv.borrow().clone();
                    if la == ha {
                        return SimTime::Rat(la).cmp_impl(other);
                    }
                    if lb == hb {
                        return self.cmp_impl(&SimTime::Rat(lb));
                    }
                    if ha <= lb {
                        return Ordering::Less;
                    }
                    if hb <= la {
                        return Ordering::Greater;
                    }
                    if !checked_gcd {
                        checked_gcd = true;
                        let g = a.poly.gcd(&b.poly);
                        if !g.is_constant() {
                            let ilo = if la > lb { la.clone() } else { lb.clone() };
                            let ihi = if ha < hb { ha.clone() } else { hb.clone() };
                            if ilo < ihi && g.sign_at(&ilo) != g.sign_at(&ihi) {
                                return Ordering::Equal;
                            }
                        }
                    }
                    self.refine_once();
                    other.refine_once();
                }
            }
        }
    }
}

impl PartialEq for SimTime {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_impl(other) == Ordering::Equal
    }
}
impl Eq for SimTime {}
impl PartialOrd for SimTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_impl(other))
    }
}
impl Ord for SimTime {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_impl(other)
    }
}

impl fmt::Debug for SimTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimTime::Rat(r) => write!(f, "t={}", r),
            SimTime::Alg(a) => {
                let iv = a.iv.borrow();
                write!(f, "t in ({}, {})", iv.0, iv.1)
            }
        }
    }
}

/// First root of `poly` strictly after `t`, with parity of its multiplicity.
/// `None` for the zero polynomial or when no later root exists.
pub fn next_root_after(poly: &QPoly, t: &SimTime) -> Option<(SimTime, Parity)> {
    scan_roots_after(poly, t, false)
}

/// First root of odd multiplicity strictly after `t`: the next genuine sign
/// change, which is what order certificates schedule. Even-multiplicity
/// touch points are skipped.
pub fn next_sign_change_after(poly: &QPoly, t: &SimTime) -> Option<(SimTime, Parity)> {
    scan_roots_after(poly, t, true)
}

fn scan_roots_after(poly: &QPoly, t: &SimTime, only_odd: bool) -> Option<(SimTime, Parity)> {
    if poly.is_zero() {
        return None;
    }
    for (loc, mult) in real_roots(poly) {
        let parity = if mult % 2 == 1 { Parity::Odd } else { Parity::Even };
        if only_odd && parity == Parity::Even {
            continue;
        }
        let st = SimTime::from_rootloc(loc);
        if st.cmp_impl(t) == Ordering::Greater {
            return Some((st, parity));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat_frac, rat_i64};

    fn p(coeffs: &[i64]) -> QPoly {
        QPoly::from_coeffs(coeffs.iter().map(|&c| rat_i64(c)).collect())
    }

    #[test]
    fn isolates_simple_quadratic() {
        // t^2 - 4: roots -2, 2
        let roots = real_roots(&p(&[-4, 0, 1]));
        assert_eq!(roots.len(), 2);
        let times: Vec<SimTime> = roots.into_iter().map(|(l, _)| SimTime::from_rootloc(l)).collect();
        assert_eq!(times[0], SimTime::Rat(rat_i64(-2)));
        assert_eq!(times[1], SimTime::Rat(rat_i64(2)));
    }

    #[test]
    fn next_sign_change_examples() {
        let f = p(&[-4, 0, 1]); // t^2 - 4
        let (t, par) = next_sign_change_after(&f, &SimTime::Rat(rat_i64(1))).unwrap();
        assert_eq!(t, SimTime::Rat(rat_i64(2)));
        assert_eq!(par, Parity::Odd);
        assert!(next_sign_change_after(&f, &SimTime::Rat(rat_i64(3))).is_none());

        // (t-1)^2: tangency at 1 reported with even parity, no sign change scheduled.
        let g = p(&[1, -2, 1]);
        let (t, par) = next_root_after(&g, &SimTime::Rat(rat_i64(0))).unwrap();
        assert_eq!(t, SimTime::Rat(rat_i64(1)));
        assert_eq!(par, Parity::Even);
        assert!(next_sign_change_after(&g, &SimTime::Rat(rat_i64(0))).is_none());

        assert!(next_root_after(&QPoly::zero(), &SimTime::zero()).is_none());
    }

    #[test]
    fn irrational_roots_order_exactly() {
        // t^2 - 2 and t^2 - 3: sqrt(2) < sqrt(3), exact comparison via refinement.
        let a = real_roots(&p(&[-2, 0, 1]));
        let b = real_roots(&p(&[-3, 0, 1]));
        let sqrt2 = SimTime::from_rootloc(a[1].0.clone());
        let sqrt3 = SimTime::from_rootloc(b[1].0.clone());
        assert!(sqrt2 < sqrt3);
        assert!(sqrt2 > SimTime::Rat(rat_frac(7, 5)));
        assert!(sqrt2 < SimTime::Rat(rat_frac(3, 2)));
        // Same algebraic number from two structurally different intervals.
        let again = real_roots(&p(&[-2, 0, 1]));
        let sqrt2b = SimTime::from_rootloc(again[1].0.clone());
        assert_eq!(sqrt2, sqrt2b);
    }

    #[test]
    fn multiplicities_and_mixed_roots() {
        // (t-1)^2 (t^2 - 2) has roots -sqrt2, 1 (double), sqrt2
        let f = p(&[1, -2, 1]).mul(&p(&[-2, 0, 1]));
        let roots = real_roots(&f);
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[1].1, 2);
        let first = SimTime::from_rootloc(roots[0].0.clone());
        assert!(first < SimTime::Rat(rat_i64(-1)));
        // Next sign change after 0 skips the even root at 1.
        let (t, _) = next_sign_change_after(&f, &SimTime::zero()).unwrap();
        assert!(t > SimTime::Rat(rat_i64(1)));
    }

    #[test]
    fn random_root_soundness() {
        // Root soundness oracle: signs differ across each reported sign
        // change and no sign change is skipped in between.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let deg = rng.gen_range(1..=8usize);
            let coeffs: Vec<_> = (0..=deg).map(|_| rat_i64(rng.gen_range(-9..=9))).collect();
            let f = QPoly::from_coeffs(coeffs);
            if f.is_zero() || f.is_constant() {
                continue;
            }
            let roots = real_roots(&f);
            // Ascending and distinct.
            let times: Vec<SimTime> = roots
                .iter()
                .map(|(l, _)| SimTime::from_rootloc(l.clone()))
                .collect();
            for w in times.windows(2) {
                assert!(w[0] < w[1]);
            }
            // Signs flip exactly at odd-multiplicity roots. Refine until
            // consecutive isolating intervals are strictly separated.
            let mut width = rat_frac(1, 1 << 20);
            let probes: Vec<(crate::num::Rat, crate::num::Rat)> = loop {
                for t in &times {
                    t.refine_to_width(&width);
                }
                let iv: Vec<_> = times
                    .iter()
                    .map(|t| (t.lower_bound(), t.upper_bound()))
                    .collect();
                if iv.windows(2).all(|w| w[0].1 < w[1].0) {
                    break iv;
                }
                width = width / rat_i64(2);
            };
            let mut sign_before = {
                let far_left = probes
                    .first()
                    .map(|(lo, _)| lo - rat_i64(1))
                    .unwrap_or_else(|| rat_i64(0));
                f.sign_at(&far_left)
            };
            for (i, (_, hi)) in probes.iter().enumerate() {
                // Just right of root i (internals refined so no other root intrudes).
                let after = if i + 1 < probes.len() {
                    crate::num::simplest_between(hi, &probes[i + 1].0)
                } else {
                    hi + rat_i64(1)
                };
                let sign_after = f.sign_at(&after);
                assert_ne!(sign_after, 0);
                if roots[i].1 % 2 == 1 {
                    assert_eq!(sign_after, -sign_before, "odd root must flip sign: {:?}", f);
                } else {
                    assert_eq!(sign_after, sign_before, "even root must not flip: {:?}", f);
                }
                sign_before = sign_after;
            }
        }
    }
}
