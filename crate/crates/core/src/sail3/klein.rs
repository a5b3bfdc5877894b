//! Klein sails: the boundary of the convex hull of the nonzero lattice
//! points in a closed orthant of a totally real operator.
//!
//! The hull is built by gift-wrapping over the enumerated points, starting
//! from a face near the origin and crossing edges. A face with plane
//! `n·x = c` is *certified* when `n` pairs positively with all three rays
//! and the cap `{x ∈ K : n·x <= c}` lies inside the enumeration box: then
//! no lattice point of the cone lies below the plane, so the face is a
//! face of the true sail. Only certified faces are crossed.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::cone::EigenCone3;
use super::{cross, dot, primitive, sub, LatticePoint3, V3};
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

/// A 2-face of the sail. `vertices` index into the patch vertex list and
/// run counter-clockwise seen from the origin side opposite to `normal`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KleinFace {
    pub vertices: Vec<usize>,
    /// Primitive integer normal pointing away from the origin.
    pub normal: V3,
    /// Integer distance from the origin: `normal · v` for any vertex `v`.
    pub distance: i64,
    pub certified: bool,
    /// Face across edge `(vertices[i], vertices[i + 1])`, when known.
    pub neighbors: Vec<Option<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KleinSailPatch {
    pub orthant: [i8; 3],
    pub radius: u64,
    pub vertices: Vec<LatticePoint3>,
    pub faces: Vec<KleinFace>,
    pub edges: Vec<(usize, usize)>,
    /// Lattice points of the orthant inside the box.
    pub enumerated: usize,
    /// Points left after discarding sums of two orthant points.
    pub candidates: usize,
    #[serde(skip)]
    pub(crate) points: Vec<V3>,
    #[serde(skip)]
    pub(crate) cone: EigenCone3,
}

impl KleinSailPatch {
    pub fn certified_faces(&self) -> impl Iterator<Item = (usize, &KleinFace)> {
        self.faces.iter().enumerate().filter(|(_, f)| f.certified)
    }

    /// Vertices of certified faces.
    pub fn certified_vertices(&self) -> BTreeSet<usize> {
        self.certified_faces().flat_map(|(_, f)| f.vertices.iter().copied()).collect()
    }

    pub(crate) fn point(&self, i: usize) -> &V3 {
        &self.points[i]
    }

    pub fn cone(&self) -> &EigenCone3 {
        &self.cone
    }

    /// Number of sail edges at vertex `v`, found by walking around it
    /// through face adjacencies; `None` unless every face met is
    /// certified.
    pub fn vertex_degree(&self, v: usize) -> Option<usize> {
        let (start, _) = self.certified_faces().find(|(_, f)| f.vertices.contains(&v))?;
        let mut face = start;
        let mut count = 0;
        loop {
            let f = &self.faces[face];
            if !f.certified {
                return None;
            }
            let pos = f.vertices.iter().position(|&x| x == v)?;
            let next = f.neighbors[pos]?;
            count += 1;
            face = next;
            if face == start {
                return Some(count);
            }
            if count > 1000 {
                return None;
            }
        }
    }

    /// Certified faces all of whose neighbours and vertex stars are
    /// certified.
    pub fn is_interior_face(&self, i: usize) -> bool {
        let f = &self.faces[i];
        f.certified
            && f.neighbors.iter().all(|n| n.is_some_and(|j| self.faces[j].certified))
            && f.vertices.iter().all(|&v| self.vertex_degree(v).is_some())
    }
}

/// Compute the sail patch of `a` in `orthant` from the lattice points of
/// max-norm at most `radius`.
pub fn klein_sail_patch(a: &IntMatrix, orthant: [i8; 3], radius: u64) -> Result<KleinSailPatch> {
    if radius < 2 {
        return Err(Error::RadiusTooSmall(radius));
    }
    let cone = EigenCone3::new(a, orthant)?;
    build_patch(cone, radius)
}

pub(crate) fn build_patch(cone: EigenCone3, radius: u64) -> Result<KleinSailPatch> {
    let r = i64::try_from(radius).map_err(|_| Error::RadiusCap { radius, cap: i64::MAX as u64 })?;
    let all = cone.enumerate(r);
    if all.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let enumerated = all.len();
    let pts = prune_sums(&cone, all);
    let mut hull = Hull { cone: &cone, pts: &pts, radius: r as f64, faces: Vec::new(), index: HashMap::new() };
    let first = hull.initial_face().ok_or(Error::RegionTooSmall { suggested_radius: radius * 2 })?;
    if !hull.faces[first].certified {
        return Err(Error::RegionTooSmall { suggested_radius: radius * 2 });
    }
    let mut queue = VecDeque::from([first]);
    while let Some(f) = queue.pop_front() {
        for fresh in hull.expand(f)? {
            queue.push_back(fresh);
        }
        if hull.faces.len() > 50_000 {
            return Err(Error::Internal("sail patch exceeded the face limit".into()));
        }
    }
    Ok(hull.into_patch(cone.clone(), radius, enumerated))
}

/// Drop points `v` with `v - b` in the open cone for a small cone point
/// `b`. Such `v` satisfy `n·v > n·b >= c` for every supporting plane of the
/// sail, so they lie on no face.
fn prune_sums(cone: &EigenCone3, mut pts: Vec<V3>) -> Vec<V3> {
    pts.sort_by_key(|v| (super::max_norm(v), *v));
    let coords: Vec<[(f64, f64); 3]> = pts.iter().map(|v| cone.coords(v)).collect();
    let small: Vec<usize> = (0..pts.len().min(96)).collect();
    let mut keep = Vec::new();
    for (i, v) in pts.iter().enumerate() {
        let tv = &coords[i];
        let dominated = small.iter().any(|&j| {
            j != i
                && (0..3).all(|k| {
                    let (a, ea) = tv[k];
                    let (b, eb) = coords[j][k];
                    a - b > ea + eb + 4.0 * f64::EPSILON * a.abs()
                })
        });
        if !dominated {
            keep.push(*v);
        }
    }
    keep
}

struct RawFace {
    poly: Vec<usize>,
    normal: V3,
    distance: i64,
    certified: bool,
    neighbors: Vec<Option<usize>>,
}

struct Hull<'a> {
    cone: &'a EigenCone3,
    pts: &'a [V3],
    radius: f64,
    faces: Vec<RawFace>,
    index: HashMap<Vec<usize>, usize>,
}

fn dot_i128(a: &[i128; 3], b: &V3) -> i128 {
    (0..3).map(|k| a[k] * b[k] as i128).sum()
}

impl Hull<'_> {
    fn certify(&self, n: &V3, c: i64) -> bool {
        for i in 0..3 {
            if self.cone.ray_pairing_sign(n, i) != Ordering::Greater {
                return false;
            }
        }
        for i in 0..3 {
            let (e, err) = self.cone.ray_approx(i);
            let mut d = 0.0;
            let mut mag = 0.0;
            for k in 0..3 {
                d += n[k] as f64 * e[k];
                mag += (n[k] as f64).abs();
            }
            let lower = d - mag * err - 8.0 * f64::EPSILON * mag;
            if lower <= 0.0 {
                return false;
            }
            if c as f64 * (1.0 + err) > self.radius * lower * (1.0 - 1e-9) {
                return false;
            }
        }
        true
    }

    /// Supporting plane through `p` obtained by rotating the supporting
    /// plane `n` about an axis through `p` towards `d`.
    fn wrap(&self, p: &V3, n: &[i128; 3], d: &[i128; 3]) -> Option<(V3, i64)> {
        let mut best: Option<(i128, i128)> = None;
        for s in self.pts {
            let w = sub(s, p);
            let b = dot_i128(d, &w);
            if b <= 0 {
                continue;
            }
            let a = dot_i128(n, &w);
            match best {
                Some((ba, bb)) if a * bb >= ba * b => {}
                _ => best = Some((a, b)),
            }
        }
        let (a, b) = best?;
        let m = primitive([0, 1, 2].map(|k| b * n[k] - a * d[k]))?;
        let c = i64::try_from(dot(&m, p)).ok()?;
        Some((m, c))
    }

    fn face_on_plane(&mut self, n: V3, c: i64) -> Option<(usize, bool)> {
        let on: Vec<usize> = (0..self.pts.len()).filter(|&i| dot(&n, &self.pts[i]) == c as i128).collect();
        let poly = polygon(self.pts, &on, &n)?;
        let mut key = poly.clone();
        key.sort_unstable();
        if let Some(&id) = self.index.get(&key) {
            return Some((id, false));
        }
        let certified = self.certify(&n, c);
        let m = poly.len();
        self.faces.push(RawFace { poly, normal: n, distance: c, certified, neighbors: vec![None; m] });
        let id = self.faces.len() - 1;
        self.index.insert(key, id);
        Some((id, true))
    }

    fn initial_face(&mut self) -> Option<usize> {
        let n0 = self.interior_dual_vector()?;
        let p0 = *self.pts.iter().min_by_key(|s| (dot(&n0, s), **s))?;
        let k = (0..3).min_by_key(|&k| n0[k].abs())?;
        let mut ek = [0i64; 3];
        ek[k] = 1;
        let u = cross(&n0, &ek);
        let n0w = n0.map(i128::from);
        let v = [u[1] * n0w[2] - u[2] * n0w[1], u[2] * n0w[0] - u[0] * n0w[2], u[0] * n0w[1] - u[1] * n0w[0]];
        let (m, c) = self.wrap(&p0, &n0w, &v).or_else(|| self.wrap(&p0, &n0w, &v.map(|x| -x)))?;
        let on: Vec<usize> = (0..self.pts.len()).filter(|&i| dot(&m, &self.pts[i]) == c as i128).collect();
        if let Some((id, _)) = self.face_on_plane(m, c) {
            return Some(id);
        }
        // the supporting plane meets the hull in an edge: turn about it
        let p1 = on.iter().map(|&i| self.pts[i]).find(|q| *q != p0)?;
        let d = cross(&sub(&p1, &p0), &m);
        let mw = m.map(i128::from);
        let (m2, c2) = self.wrap(&p0, &mw, &d).or_else(|| self.wrap(&p0, &mw, &d.map(|x| -x)))?;
        self.face_on_plane(m2, c2).map(|(id, _)| id)
    }

    /// An integer vector pairing positively with all three rays.
    fn interior_dual_vector(&self) -> Option<V3> {
        let mut dir = [0.0f64; 3];
        for i in 0..3 {
            let f = &self.cone.forms[i];
            let norm = f.approx.iter().map(|x| x * x).sum::<f64>().sqrt();
            for k in 0..3 {
                dir[k] += self.cone.orthant[i] as f64 * f.approx[k] / norm;
            }
        }
        let mut scale = 4.0;
        while scale < 1e6 {
            let n = dir.map(|x| (x * scale).round() as i64);
            if (0..3).all(|i| self.cone.ray_pairing_sign(&n, i) == Ordering::Greater) {
                return primitive(n.map(i128::from));
            }
            scale *= 2.0;
        }
        None
    }

    /// Wrap across every edge of a certified face; returns newly found
    /// certified faces.
    fn expand(&mut self, f: usize) -> Result<Vec<usize>> {
        if !self.faces[f].certified {
            return Ok(Vec::new());
        }
        let poly = self.faces[f].poly.clone();
        let n = self.faces[f].normal;
        let m = poly.len();
        let mut fresh = Vec::new();
        for i in 0..m {
            if self.faces[f].neighbors[i].is_some() {
                continue;
            }
            let p = self.pts[poly[i]];
            let q = self.pts[poly[(i + 1) % m]];
            let r = self.pts[poly[(i + 2) % m]];
            let mut d = cross(&sub(&q, &p), &n);
            if dot_i128(&d, &sub(&r, &p)) > 0 {
                d = d.map(|x| -x);
            }
            // the far side may lie entirely outside the window
            let Some((m2, c2)) = self.wrap(&p, &n.map(i128::from), &d) else { continue };
            let (g, new) = self
                .face_on_plane(m2, c2)
                .ok_or_else(|| Error::Internal("degenerate face across a certified edge".into()))?;
            self.faces[f].neighbors[i] = Some(g);
            // record the reverse adjacency
            let gp = &self.faces[g].poly;
            let gm = gp.len();
            if let Some(j) = (0..gm).find(|&j| gp[j] == poly[(i + 1) % m] && gp[(j + 1) % gm] == poly[i]) {
                self.faces[g].neighbors[j] = Some(f);
            } else {
                return Err(Error::Internal("adjacent sail faces disagree on orientation".into()));
            }
            if new && self.faces[g].certified {
                fresh.push(g);
            }
        }
        Ok(fresh)
    }

    fn into_patch(self, cone: EigenCone3, radius: u64, enumerated: usize) -> KleinSailPatch {
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut points = Vec::new();
        for f in &self.faces {
            for &i in &f.poly {
                remap.entry(i).or_insert_with(|| {
                    points.push(self.pts[i]);
                    points.len() - 1
                });
            }
        }
        let faces: Vec<KleinFace> = self
            .faces
            .iter()
            .map(|f| KleinFace {
                vertices: f.poly.iter().map(|i| remap[i]).collect(),
                normal: f.normal,
                distance: f.distance,
                certified: f.certified,
                neighbors: f.neighbors.clone(),
            })
            .collect();
        let mut edges = BTreeSet::new();
        for f in &faces {
            let m = f.vertices.len();
            for i in 0..m {
                let (a, b) = (f.vertices[i], f.vertices[(i + 1) % m]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        KleinSailPatch {
            orthant: cone.orthant,
            radius,
            vertices: points.iter().map(|v| LatticePoint3::from(*v)).collect(),
            faces,
            edges: edges.into_iter().collect(),
            enumerated,
            candidates: self.pts.len(),
            points,
            cone,
        }
    }
}

/// Convex polygon through the given coplanar points, counter-clockwise
/// with respect to `n`, without points interior to edges.
fn polygon(pts: &[V3], on: &[usize], n: &V3) -> Option<Vec<usize>> {
    if on.len() < 3 {
        return None;
    }
    let k = (0..3).max_by_key(|&k| n[k].abs())?;
    let (ia, ib) = ((k + 1) % 3, (k + 2) % 3);
    let mut idx: Vec<usize> = on.to_vec();
    idx.sort_by_key(|&i| (pts[i][ia], pts[i][ib]));
    let turn = |o: usize, a: usize, b: usize| -> i128 {
        let (o, a, b) = (pts[o], pts[a], pts[b]);
        (a[ia] - o[ia]) as i128 * (b[ib] - o[ib]) as i128 - (a[ib] - o[ib]) as i128 * (b[ia] - o[ia]) as i128
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], i) <= 0 {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], i) <= 0 {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return None;
    }
    let (a, b, c) = (pts[lower[0]], pts[lower[1]], pts[lower[2]]);
    let w = cross(&sub(&b, &a), &sub(&c, &a));
    let s: i128 = (0..3).map(|j| w[j] * n[j] as i128).sum();
    if s < 0 {
        lower.reverse();
    }
    // start from the smallest index for determinism
    let start = (0..lower.len()).min_by_key(|&i| pts[lower[i]])?;
    lower.rotate_left(start);
    Some(lower)
}
