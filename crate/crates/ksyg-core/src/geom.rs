//! Cone covers of R^d and cone-relative coordinates.
//!
//! Every direction predicate in the toolkit reduces to exact rational dot
//! products against fixed cone data, so the construction is careful about
//! two things:
//!
//! * Adjacent cones share boundary hyperplanes *exactly*: each hyperplane's
//!   normal is derived from one canonical primitive integer vector, and the
//!   two sides use exact negations of the same rational unit vector. Ties on
//!   a boundary therefore resolve identically from both sides and the cones
//!   tile space.
//! * Boundary ties are broken by fixed rules. The geometric rule uses
//!   per-facet closure flags (half-open sectors in the plane, a fixed
//!   off-boundary tie direction in higher dimension). Rank structures use a
//!   per-coordinate sign so that the simulated perturbation `p + eps^id * w`
//!   orders coincident coordinate values consistently everywhere.
//!
//! Layouts: in the plane, cone `l` spans polar angles
//! `[l*theta - theta/2, (l+1)*theta - theta/2)` with `c = ceil(2pi/theta)`
//! sectors (the last clipped); in higher dimension, cones are built by
//! central projection onto the facets of the unit cube, each facet cut into
//! a grid fine enough that every cell's angular diameter is at most theta,
//! each cell split into simplices, every cone an intersection of exactly
//! `d` half-spaces.

use crate::error::{Error, Result};
use crate::motion::PointId;
use crate::num::{rat_from_f64, rat_i64, rat_to_f64, Rat};
use num::bigint::BigInt;
use num::traits::{Signed, Zero};

#[derive(Clone, Debug)]
pub struct ConeTemplate {
    pub id: usize,
    /// Inward unit normals of the d bounding half-spaces (unit within 1e-12).
    pub normals: Vec<Vec<Rat>>,
    /// Per-facet closure under the geometric tie rule: on `u_i . v = 0`,
    /// a closed facet keeps `v` inside.
    pub closed: Vec<bool>,
    /// Per-facet rank tie sign: +1 when the tie direction has positive inner
    /// product with the normal (larger point id then sorts first on ties).
    pub tie_sign: Vec<i32>,
    /// Unit axis, strictly inside the cone.
    pub axis: Vec<Rat>,
    /// Largest angle between any two directions in the cone (radians).
    pub opening_angle: f64,
    /// Directions positively spanning the cone (boundary rays / simplex
    /// vertex directions); used by sampling tests.
    pub span_dirs: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug)]
pub struct ConeFamily {
    pub dim: usize,
    pub theta: f64,
    pub cones: Vec<ConeTemplate>,
    /// Fixed tie-break direction, off every facet hyperplane.
    pub tie_dir: Vec<Rat>,
    /// True when theta exceeds pi/3; such a family is fine standalone but
    /// the k-SYG containment arguments no longer apply.
    pub exceeds_lemma_bound: bool,
}

impl ConeFamily {
    pub fn c(&self) -> usize {
        self.cones.len()
    }

    /// Rank tie key for coordinate `u_i` (0-based facet index) of cone `l`:
    /// lexicographic (value, tie_rank) ascending reproduces the perturbed
    /// order for coincident values.
    pub fn tie_rank(&self, l: usize, facet: usize, id: PointId) -> u64 {
        if self.cones[l].tie_sign[facet] > 0 {
            u64::MAX - id as u64
        } else {
            id as u64
        }
    }
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rot90ccw(v: &[Rat]) -> Vec<Rat> {
    vec![-v[1].clone(), v[0].clone()]
}

/// Snaps f64 trig output to exact rationals where the true value is 0, ±1/2
/// or ±1, then converts the rest exactly.
fn snap(v: f64) -> Rat {
    for (target, exact) in [(0.0, 0i64), (1.0, 2), (-1.0, -2), (0.5, 1), (-0.5, -1)] {
        if (v - target).abs() < 1e-12 {
            return Rat::new(BigInt::from(exact), BigInt::from(2));
        }
    }
    rat_from_f64(v)
}

fn unit_dir(angle: f64) -> Vec<Rat> {
    vec![snap(angle.cos()), snap(angle.sin())]
}

/// Canonical primitive integer form of a rational vector: cleared
/// denominators, divided by content, first nonzero component positive.
/// Returns the primitive vector and the sign applied.
fn canonical_primitive(v: &[Rat]) -> (Vec<BigInt>, i32) {
    let mut lcm = BigInt::from(1u32);
    for x in v {
        lcm = num::integer::lcm(lcm, x.denom().clone());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut content = BigInt::zero();
    for x in &ints {
        content = num::integer::gcd(content, x.abs());
    }
    if !content.is_zero() {
        for x in &mut ints {
            *x /= &content;
        }
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(first) if first.is_negative() => -1,
        _ => 1,
    };
    if sign < 0 {
        for x in &mut ints {
            *x = -x.clone();
        }
    }
    (ints, sign)
}

/// f64-normalizes a canonical primitive vector into an exact rational unit
/// vector. Both sides of a shared hyperplane call this on the identical
/// primitive vector, so their normals are exact negations of each other.
fn unit_from_primitive(p: &[BigInt]) -> Vec<Rat> {
    let norm: f64 = p
        .iter()
        .map(|x| {
            let v = rat_to_f64(&Rat::from_integer(x.clone()));
            v * v
        })
        .sum::<f64>()
        .sqrt();
    p.iter()
        .map(|x| snap(rat_to_f64(&Rat::from_integer(x.clone())) / norm))
        .collect()
}

fn unit_from_rational(v: &[Rat]) -> Vec<Rat> {
    let norm: f64 = v.iter().map(|x| rat_to_f64(x).powi(2)).sum::<f64>().sqrt();
    v.iter().map(|x| snap(rat_to_f64(x) / norm)).collect()
}

/// Builds the cone cover. Deterministic: equal arguments produce an
/// identical family.
pub fn build_cone_family(dim: usize, theta: f64) -> Result<ConeFamily> {
    if dim < 2 {
        return Err(Error::ConeFamily(format!("dimension {} < 2", dim)));
    }
    if !(theta > 0.0) {
        return Err(Error::ConeFamily(format!("theta {} <= 0", theta)));
    }
    if theta >= std::f64::consts::PI {
        return Err(Error::ConeFamily(format!(
            "theta {} >= pi: sectors would degenerate",
            theta
        )));
    }
    let mut cones = if dim == 2 {
        build_planar(theta)
    } else {
        build_cube_facets(dim, theta)?
    };
    let tie_dir = pick_tie_dir(dim, &cones);
    for cone in &mut cones {
        cone.tie_sign = cone
            .normals
            .iter()
            .map(|n| if dot(n, &tie_dir).is_positive() { 1 } else { -1 })
            .collect();
        if dim > 2 {
            // Geometric closure in higher dimension follows the tie
            // direction as well (the plane keeps its half-open sectors).
            cone.closed = cone.tie_sign.iter().map(|&s| s > 0).collect();
        }
    }
    let family = ConeFamily {
        dim,
        theta,
        cones,
        tie_dir,
        exceeds_lemma_bound: theta > std::f64::consts::FRAC_PI_3 + 1e-12,
    };
    validate_family(&family)?;
    Ok(family)
}

fn build_planar(theta: f64) -> Vec<ConeTemplate> {
    let two_pi = std::f64::consts::TAU;
    let ratio = two_pi / theta;
    let c = if (ratio - ratio.round()).abs() < 1e-9 {
        ratio.round() as usize
    } else {
        ratio.ceil() as usize
    };
    let c = c.max(3);
    // Boundary rays, shared between neighboring sectors.
    let mut boundary_angle = Vec::with_capacity(c);
    let mut rays = Vec::with_capacity(c);
    for l in 0..c {
        let a = -theta / 2.0 + l as f64 * theta;
        // The top of the last sector wraps to ray 0, clipping it if needed.
        boundary_angle.push(a.min(two_pi - theta / 2.0));
        rays.push(unit_dir(boundary_angle[l]));
    }
    (0..c)
        .map(|l| {
            let lower = &rays[l];
            let upper = &rays[(l + 1) % c];
            let n_lower = rot90ccw(lower);
            let n_upper = {
                let r = rot90ccw(upper);
                vec![-r[0].clone(), -r[1].clone()]
            };
            let lo_ang = boundary_angle[l];
            let hi_ang = if l + 1 < c { boundary_angle[l + 1] } else { two_pi - theta / 2.0 };
            let axis = unit_dir((lo_ang + hi_ang) / 2.0);
            ConeTemplate {
                id: l,
                normals: vec![n_lower, n_upper],
                closed: vec![true, false],
                tie_sign: vec![0, 0],
                axis,
                opening_angle: hi_ang - lo_ang,
                span_dirs: vec![lower.clone(), upper.clone()],
            }
        })
        .collect()
}

/// Generalized cross product: the vector orthogonal to d-1 given vectors,
/// by cofactor expansion. Exact.
fn null_normal(vectors: &[Vec<Rat>]) -> Vec<Rat> {
    let d = vectors[0].len();
    debug_assert_eq!(vectors.len(), d - 1);
    (0..d)
        .map(|k| {
            let minor: Vec<Vec<Rat>> = vectors
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != k)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let det = determinant(&minor);
            if k % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

fn determinant(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return rat_i64(1);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Rat::zero();
    for k in 0..n {
        if m[0][k].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rat>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][k] * determinant(&minor);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    (dot / (na * nb)).clamp(-1.0, 1.0).acos()
}

fn build_cube_facets(dim: usize, theta: f64) -> Result<Vec<ConeTemplate>> {
    let dm1 = dim - 1;
    // Smallest grid resolution whose worst cell angular diameter fits theta.
    let mut grid = 1usize;
    loop {
        if grid > 4096 {
            return Err(Error::ConeFamily("grid resolution overflow".into()));
        }
        if worst_cell_diameter(dm1, grid) <= theta {
            break;
        }
        grid += 1;
    }
    let h = Rat::new(BigInt::from(2), BigInt::from(grid as u32));

    let mut cones = Vec::new();
    for axis_j in 0..dim {
        for sign in [1i64, -1] {
            let other_axes: Vec<usize> = (0..dim).filter(|&a| a != axis_j).collect();
            for cell in CellIter::new(dm1, grid) {
                for perm in permutations(dm1) {
                    // Simplex vertices on the facet hyperplane.
                    let mut vertex = vec![rat_i64(0); dim];
                    vertex[axis_j] = rat_i64(sign);
                    for (t, &ax) in other_axes.iter().enumerate() {
                        vertex[ax] = rat_i64(-1) + &h * rat_i64(cell[t] as i64);
                    }
                    let mut verts = vec![vertex.clone()];
                    let mut cur = vertex;
                    for &step_axis in &perm {
                        cur[other_axes[step_axis]] += &h;
                        verts.push(cur.clone());
                    }
                    cones.push(simplex_cone(cones.len(), verts));
                }
            }
        }
    }
    Ok(cones)
}

fn worst_cell_diameter(dm1: usize, grid: usize) -> f64 {
    let h = 2.0 / grid as f64;
    let mut worst: f64 = 0.0;
    for cell in CellIter::new(dm1, grid) {
        let corners: Vec<Vec<f64>> = (0..1usize << dm1)
            .map(|mask| {
                let mut v = vec![1.0];
                for (t, &ci) in cell.iter().enumerate() {
                    let base = -1.0 + ci as f64 * h;
                    v.push(if mask >> t & 1 == 1 { base + h } else { base });
                }
                v
            })
            .collect();
        for i in 0..corners.len() {
            for j in i + 1..corners.len() {
                worst = worst.max(angle_between(&corners[i], &corners[j]));
            }
        }
    }
    worst
}

fn simplex_cone(id: usize, verts: Vec<Vec<Rat>>) -> ConeTemplate {
    let d = verts[0].len();
    let normals: Vec<Vec<Rat>> = (0..d)
        .map(|omit| {
            let others: Vec<Vec<Rat>> = verts
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != omit)
                .map(|(_, v)| v.clone())
                .collect();
            let raw = null_normal(&others);
            let (prim, _) = canonical_primitive(&raw);
            let unit = unit_from_primitive(&prim);
            // Orient inward: positive against the omitted vertex. The exact
            // sign comes from the primitive vector, keeping shared planes
            // exactly negated between neighbors.
            let prim_rat: Vec<Rat> = prim.iter().map(|x| Rat::from_integer(x.clone())).collect();
            if dot(&prim_rat, &verts[omit]).is_negative() {
                unit.iter().map(|x| -x.clone()).collect()
            } else {
                unit
            }
        })
        .collect();
    let mut centroid = vec![Rat::zero(); d];
    for v in &verts {
        for (c, x) in centroid.iter_mut().zip(v) {
            *c += x;
        }
    }
    let axis = unit_from_rational(&centroid);
    let mut opening: f64 = 0.0;
    let fverts: Vec<Vec<f64>> = verts
        .iter()
        .map(|v| v.iter().map(rat_to_f64).collect())
        .collect();
    for i in 0..fverts.len() {
        for j in i + 1..fverts.len() {
            opening = opening.max(angle_between(&fverts[i], &fverts[j]));
        }
    }
    ConeTemplate {
        id,
        normals,
        closed: Vec::new(),
        tie_sign: Vec::new(),
        axis,
        opening_angle: opening,
        span_dirs: verts,
    }
}

struct CellIter {
    dims: usize,
    grid: usize,
    next: Option<Vec<usize>>,
}

impl CellIter {
    fn new(dims: usize, grid: usize) -> Self {
        CellIter { dims, grid, next: Some(vec![0; dims]) }
    }
}

impl Iterator for CellIter {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.clone()?;
        let mut nxt = cur.clone();
        let mut i = 0;
        loop {
            if i == self.dims {
                self.next = None;
                break;
            }
            nxt[i] += 1;
            if nxt[i] < self.grid {
                self.next = Some(nxt);
                break;
            }
            nxt[i] = 0;
            i += 1;
        }
        Some(cur)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    permute(&mut items, 0, &mut out);
    out.sort();
    out
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

fn pick_tie_dir(dim: usize, cones: &[ConeTemplate]) -> Vec<Rat> {
    'candidates: for m in 0..1024i64 {
        let q = Rat::new(BigInt::from(2 * m + 3), BigInt::from(4 * m * m + 13));
        let mut w = Vec::with_capacity(dim);
        let mut acc = rat_i64(1);
        for _ in 0..dim {
            w.push(acc.clone());
            acc *= &q;
        }
        for cone in cones {
            for n in &cone.normals {
                if dot(n, &w).is_zero() {
                    continue 'candidates;
                }
            }
        }
        return w;
    }
    panic!("no tie direction found; degenerate cone family");
}

fn validate_family(family: &ConeFamily) -> Result<()> {
    for cone in &family.cones {
        if cone.normals.len() != family.dim {
            return Err(Error::ConeFamily("cone must have exactly d facets".into()));
        }
        for n in &cone.normals {
            let norm2 = dot(n, n);
            let err = rat_to_f64(&(norm2 - rat_i64(1))).abs();
            if err > 3e-12 {
                return Err(Error::ConeFamily(format!("normal not unit: err {}", err)));
            }
        }
        let norm2 = dot(&cone.axis, &cone.axis);
        if rat_to_f64(&(norm2 - rat_i64(1))).abs() > 3e-12 {
            return Err(Error::ConeFamily("axis not unit".into()));
        }
        for n in &cone.normals {
            if !dot(n, &cone.axis).is_positive() {
                return Err(Error::ConeFamily("axis not strictly inside cone".into()));
            }
        }
        if cone.opening_angle > family.theta + 1e-9 {
            return Err(Error::ConeFamily("cone opening exceeds theta".into()));
        }
    }
    Ok(())
}

/// Geometric membership of direction `v` in cone `l` under the half-open
/// closure rule. `v` must be nonzero.
fn dir_in_cone(family: &ConeFamily, l: usize, v: &[Rat]) -> bool {
    let cone = &family.cones[l];
    cone.normals.iter().zip(&cone.closed).all(|(n, &closed)| {
        let s = dot(n, v);
        s.is_positive() || (s.is_zero() && closed)
    })
}

/// The unique cone of `family` whose translate at `apex` contains `target`.
pub fn locate_cone(family: &ConeFamily, apex: &[Rat], target: &[Rat]) -> Result<usize> {
    if apex.len() != family.dim || target.len() != family.dim {
        return Err(Error::Dimension(apex.len(), family.dim));
    }
    let v: Vec<Rat> = target.iter().zip(apex).map(|(t, a)| t - a).collect();
    if v.iter().all(|x| x.is_zero()) {
        return Err(Error::ApexTarget);
    }
    let mut found = None;
    for l in 0..family.c() {
        if dir_in_cone(family, l, &v) {
            debug_assert!(found.is_none(), "cones must partition directions");
            found = Some(l);
            if cfg!(not(debug_assertions)) {
                break;
            }
        }
    }
    Ok(found.expect("cone cover must contain every nonzero direction"))
}

/// Inner product with the axis of cone `l`.
pub fn axis_coordinate(family: &ConeFamily, l: usize, point: &[Rat]) -> Result<Rat> {
    if l >= family.c() {
        return Err(Error::ConeId { id: l, c: family.c() });
    }
    Ok(dot(&family.cones[l].axis, point))
}

/// Inner product with frame normal `u_i` (1-based `i`) of cone `l`.
pub fn frame_coordinate(family: &ConeFamily, l: usize, i: usize, point: &[Rat]) -> Result<Rat> {
    if l >= family.c() {
        return Err(Error::ConeId { id: l, c: family.c() });
    }
    if i == 0 || i > family.dim {
        return Err(Error::FrameIndex { i, d: family.dim });
    }
    Ok(dot(&family.cones[l].normals[i - 1], point))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat_frac;
    use rand::{Rng, SeedableRng};

    fn pt(coords: &[i64]) -> Vec<Rat> {
        coords.iter().map(|&c| rat_i64(c)).collect()
    }

    #[test]
    fn planar_quarter_layout() {
        let fam = build_cone_family(2, std::f64::consts::FRAC_PI_2).unwrap();
        assert_eq!(fam.c(), 4);
        assert!(fam.exceeds_lemma_bound);
        // Cone 0 axis is exactly +x, cone 1 exactly +y.
        assert_eq!(fam.cones[0].axis, pt(&[1, 0]));
        assert_eq!(fam.cones[1].axis, pt(&[0, 1]));
        assert_eq!(locate_cone(&fam, &pt(&[0, 0]), &pt(&[1, 0])).unwrap(), 0);
        assert_eq!(locate_cone(&fam, &pt(&[0, 0]), &pt(&[0, 3])).unwrap(), 1);
        // Boundary direction (1,1): half-open upper sector wins.
        assert_eq!(locate_cone(&fam, &pt(&[0, 0]), &pt(&[1, 1])).unwrap(), 1);
        assert!(matches!(
            locate_cone(&fam, &pt(&[2, 2]), &pt(&[2, 2])),
            Err(Error::ApexTarget)
        ));
    }

    #[test]
    fn planar_sixth_has_six_cones() {
        let fam = build_cone_family(2, std::f64::consts::FRAC_PI_3).unwrap();
        assert_eq!(fam.c(), 6);
        assert!(!fam.exceeds_lemma_bound);
    }

    #[test]
    fn axis_coordinate_examples() {
        let fam = build_cone_family(2, std::f64::consts::FRAC_PI_2).unwrap();
        assert_eq!(axis_coordinate(&fam, 0, &pt(&[2, 0])).unwrap(), rat_i64(2));
        assert_eq!(axis_coordinate(&fam, 1, &pt(&[2, 5])).unwrap(), rat_i64(5));
        assert_eq!(axis_coordinate(&fam, 0, &pt(&[0, 7])).unwrap(), rat_i64(0));
        assert!(axis_coordinate(&fam, 9, &pt(&[0, 7])).is_err());
    }

    #[test]
    fn frame_coordinates_encode_membership() {
        let fam = build_cone_family(2, std::f64::consts::FRAC_PI_2).unwrap();
        let p = pt(&[0, 0]);
        // (1,0) dominates the apex in both frame coordinates of cone 0.
        let q = pt(&[1, 0]);
        for i in 1..=2 {
            let fq = frame_coordinate(&fam, 0, i, &q).unwrap();
            let fp = frame_coordinate(&fam, 0, i, &p).unwrap();
            assert!(fq >= fp);
        }
        // (0,1) fails one frame inequality of cone 0.
        let r = pt(&[0, 1]);
        let fails = (1..=2).any(|i| {
            frame_coordinate(&fam, 0, i, &r).unwrap() < frame_coordinate(&fam, 0, i, &p).unwrap()
        });
        assert!(fails);
        assert!(frame_coordinate(&fam, 0, 0, &p).is_err());
        assert!(frame_coordinate(&fam, 0, 3, &p).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_cone_family(1, 1.0).is_err());
        assert!(build_cone_family(2, 0.0).is_err());
        assert!(build_cone_family(2, -1.0).is_err());
        assert!(build_cone_family(3, 4.0).is_err());
    }

    #[test]
    fn determinism() {
        let a = build_cone_family(3, std::f64::consts::FRAC_PI_3).unwrap();
        let b = build_cone_family(3, std::f64::consts::FRAC_PI_3).unwrap();
        assert_eq!(a.c(), b.c());
        for (ca, cb) in a.cones.iter().zip(&b.cones) {
            assert_eq!(ca.normals, cb.normals);
            assert_eq!(ca.axis, cb.axis);
            assert_eq!(ca.closed, cb.closed);
        }
        assert_eq!(a.tie_dir, b.tie_dir);
    }

    fn random_direction(rng: &mut impl Rng, d: usize) -> Vec<Rat> {
        loop {
            let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n: f64 = v.iter().map(|x| x * x).sum();
            if n > 1e-3 {
                return v.iter().map(|&x| rat_from_f64(x)).collect();
            }
        }
    }

    #[test]
    fn partition_and_duality_sampled() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (d, theta) in [(2, std::f64::consts::FRAC_PI_3), (3, std::f64::consts::FRAC_PI_3)] {
            let fam = build_cone_family(d, theta).unwrap();
            let origin = vec![Rat::zero(); d];
            let samples = if d == 2 { 10_000 } else { 2_000 };
            for _ in 0..samples {
                let v = random_direction(&mut rng, d);
                let members: Vec<usize> =
                    (0..fam.c()).filter(|&l| dir_in_cone(&fam, l, &v)).collect();
                assert_eq!(members.len(), 1, "direction in exactly one cone");
                // Duality: q in C_l(p) iff p in reflected cone of q, which is
                // by construction the same direction test.
                let l = members[0];
                assert_eq!(locate_cone(&fam, &origin, &v).unwrap(), l);
            }
            // Boundary directions also land in exactly one cone.
            for cone in fam.cones.iter().take(8) {
                for dir in &cone.span_dirs {
                    let members: Vec<usize> =
                        (0..fam.c()).filter(|&l| dir_in_cone(&fam, l, dir)).collect();
                    assert_eq!(members.len(), 1, "boundary dir in exactly one cone");
                }
            }
        }
    }

    #[test]
    fn sampled_angles_within_theta() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for (d, theta) in [(2, std::f64::consts::FRAC_PI_3), (3, std::f64::consts::FRAC_PI_3)] {
            let fam = build_cone_family(d, theta).unwrap();
            for cone in &fam.cones {
                // Positive combinations of the spanning directions sample the
                // cone's interior and boundary.
                let spans: Vec<Vec<f64>> = cone
                    .span_dirs
                    .iter()
                    .map(|v| v.iter().map(rat_to_f64).collect())
                    .collect();
                let mut dirs: Vec<Vec<f64>> = spans.clone();
                for _ in 0..60 {
                    let mut acc = vec![0.0; d];
                    for s in &spans {
                        let w: f64 = rng.gen_range(0.0..1.0);
                        for (a, x) in acc.iter_mut().zip(s) {
                            *a += w * x;
                        }
                    }
                    dirs.push(acc);
                }
                for i in 0..dirs.len() {
                    for j in i + 1..dirs.len() {
                        assert!(angle_between(&dirs[i], &dirs[j]) <= theta + 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn consistency_locate_vs_frames() {
        // locate_cone(apex, target) = l iff all d frame inequalities for l
        // hold (with closure flags on ties).
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let fam = build_cone_family(2, std::f64::consts::FRAC_PI_3).unwrap();
        for _ in 0..1000 {
            let apex = random_direction(&mut rng, 2);
            let target = random_direction(&mut rng, 2);
            if apex == target {
                continue;
            }
            let l = locate_cone(&fam, &apex, &target).unwrap();
            for i in 1..=2 {
                let fq = frame_coordinate(&fam, l, i, &target).unwrap();
                let fp = frame_coordinate(&fam, l, i, &apex).unwrap();
                assert!(fq >= fp);
            }
        }
    }

    #[test]
    fn clipped_last_sector_keeps_invariants() {
        // theta = 2.2 rad does not divide 2*pi; the last sector is clipped.
        let fam = build_cone_family(2, 2.2).unwrap();
        assert_eq!(fam.c(), 3);
        let last = &fam.cones[2];
        assert!(last.opening_angle <= 2.2 + 1e-12);
        for n in &last.normals {
            assert!(dot(n, &last.axis).is_positive());
        }
        assert_eq!(fam.cones.len(), 3);
    }

    #[test]
    fn planar_shared_boundaries_are_exact_negations() {
        let fam = build_cone_family(2, std::f64::consts::FRAC_PI_3).unwrap();
        let c = fam.c();
        for l in 0..c {
            let upper = &fam.cones[l].normals[1];
            let lower_next = &fam.cones[(l + 1) % c].normals[0];
            assert_eq!(upper.iter().map(|x| -x.clone()).collect::<Vec<_>>(), *lower_next);
        }
    }

    #[test]
    fn cube_construction_small_dims() {
        let fam = build_cone_family(3, 1.2).unwrap();
        // 6 facets, g x g cells, 2 triangles per cell.
        assert_eq!(fam.c() % 12, 0);
        for cone in &fam.cones {
            assert_eq!(cone.normals.len(), 3);
        }
        // c stays within the documented O((1/theta)^(d-1)) shape: for d=3
        // the grid construction gives c = 12 g^2 with g <= 2.2/theta + 1,
        // i.e. c <= 135 (1/theta)^2 over the supported theta range.
        let bound = 135.0 * (1.0 / fam.theta).powi(2);
        assert!((fam.c() as f64) <= bound);
        let tight = build_cone_family(3, std::f64::consts::FRAC_PI_3).unwrap();
        assert!((tight.c() as f64) <= 135.0 * (1.0 / tight.theta).powi(2));
    }

    #[test]
    fn tie_rank_orders_follow_sign() {
        let fam = build_cone_family(2, std::f64::consts::FRAC_PI_3).unwrap();
        for l in 0..fam.c() {
            for i in 0..2 {
                let s = fam.cones[l].tie_sign[i];
                assert!(s == 1 || s == -1);
                let r0 = fam.tie_rank(l, i, 0);
                let r1 = fam.tie_rank(l, i, 1);
                if s > 0 {
                    assert!(r1 < r0);
                } else {
                    assert!(r0 < r1);
                }
            }
        }
    }
}
