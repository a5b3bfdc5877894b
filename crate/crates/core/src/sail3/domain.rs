//! Fundamental domains of the Dirichlet group action and the canonical
//! invariant built from them.

use std::collections::{BTreeSet, HashMap};

use num_rational::Ratio;
use serde::Serialize;

use super::dirichlet::{dirichlet_generators, DirichletGens};
use super::klein::{build_patch, KleinSailPatch};
use super::kv::{kv_factor_sail, kv_fundamental_domain};
use super::{apply, classify_spectrum, integer_area2, integer_length, integer_sine, small_matrix, EigenCone3};
use super::{LatticePoint3, SpectrumClass, V3};
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

/// Combinatorial record of one representative face. For Klein–Voronoi
/// domains the single record describes the whole period chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceRecord {
    pub dimension: u8,
    /// Lattice-normalized twice-area (Klein) or number of chain edges in
    /// one period (Klein–Voronoi).
    pub area: u64,
    pub vertex_count: usize,
    /// Integer distance of the face plane from the origin (Klein only).
    pub distance: u64,
    pub vertices: Vec<LatticePoint3>,
    pub edge_lengths: Vec<u64>,
    pub sines: Vec<u64>,
    pub degrees: Vec<u64>,
    /// Canonical data vector over cyclic relabelings and reversal.
    pub data: Vec<u64>,
}

impl FaceRecord {
    pub fn key(&self) -> FaceKey {
        FaceKey { dimension: self.dimension, area: self.area, vertex_count: self.vertex_count as u64, data: self.data.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FaceKey {
    pub dimension: u8,
    pub area: u64,
    pub vertex_count: u64,
    pub data: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FundamentalDomain3 {
    pub class: SpectrumClass,
    /// Orthant (Klein) or `[component, 0, 0]` (Klein–Voronoi).
    pub orthant: [i8; 3],
    pub radius: u64,
    pub faces: Vec<FaceRecord>,
    /// Certified faces of the patch in each representative's orbit.
    pub orbit_sizes: Vec<usize>,
    /// `V - E + F` of the quotient computed from the representatives.
    pub euler_characteristic: i64,
    pub generator_coefficients: Vec<[i64; 3]>,
}

/// Face lists of all fundamental domains, each sorted, then sorted as a
/// whole. Orthants `σ` and `-σ` carry mirror-image sails, so one of each
/// pair is used.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Invariant3 {
    pub class: SpectrumClass,
    pub components: Vec<Vec<FaceKey>>,
}

impl Invariant3 {
    pub fn from_domains(class: SpectrumClass, domains: &[FundamentalDomain3]) -> Self {
        let mut components: Vec<Vec<FaceKey>> = domains
            .iter()
            .map(|d| {
                let mut keys: Vec<FaceKey> = d.faces.iter().map(|f| f.key()).collect();
                keys.sort();
                keys
            })
            .collect();
        components.sort();
        Invariant3 { class, components }
    }
}

/// Smallest flattening over all cyclic starts of `items` and of its
/// reversal, where `items(order)` produces the per-position tuples.
pub(crate) fn canonical_cycle<F>(m: usize, items: F) -> Vec<u64>
where
    F: Fn(&[usize]) -> Vec<Vec<u64>>,
{
    let mut best: Option<Vec<u64>> = None;
    for rev in [false, true] {
        for s in 0..m {
            let order: Vec<usize> =
                (0..m).map(|k| if rev { (s + m - k) % m } else { (s + k) % m }).collect();
            let flat: Vec<u64> = items(&order).into_iter().flatten().collect();
            if best.as_ref().is_none_or(|b| flat < *b) {
                best = Some(flat);
            }
        }
    }
    best.unwrap_or_default()
}

fn face_triples(pts: &[V3], degrees: Option<&[u64]>, order: &[usize]) -> Vec<Vec<u64>> {
    let m = order.len();
    (0..m)
        .map(|k| {
            let prev = &pts[order[(k + m - 1) % m]];
            let cur = &pts[order[k]];
            let next = &pts[order[(k + 1) % m]];
            let mut t = vec![integer_length(cur, next), integer_sine(prev, cur, next)];
            if let Some(d) = degrees {
                t.push(d[order[k]]);
            }
            t
        })
        .collect()
}

fn face_area(pts: &[V3]) -> u64 {
    (1..pts.len() - 1).map(|k| integer_area2(&pts[0], &pts[k], &pts[k + 1])).sum()
}

fn face_record(patch: &KleinSailPatch, f: usize, degrees: Option<Vec<u64>>) -> FaceRecord {
    let face = &patch.faces[f];
    let pts: Vec<V3> = face.vertices.iter().map(|&v| *patch.point(v)).collect();
    let m = pts.len();
    let area = face_area(&pts);
    let identity: Vec<usize> = (0..m).collect();
    let plain = face_triples(&pts, degrees.as_deref(), &identity);
    let mut data = vec![face.distance as u64];
    data.extend(canonical_cycle(m, |order| face_triples(&pts, degrees.as_deref(), order)));
    FaceRecord {
        dimension: 2,
        area,
        vertex_count: m,
        distance: face.distance as u64,
        vertices: pts.iter().map(|v| LatticePoint3::from(*v)).collect(),
        edge_lengths: plain.iter().map(|t| t[0]).collect(),
        sines: plain.iter().map(|t| t[1]).collect(),
        degrees: degrees.unwrap_or_default(),
        data,
    }
}

/// Log cone coordinates of a face centroid (times the vertex count).
fn log_centroid(patch: &KleinSailPatch, f: usize) -> [f64; 3] {
    let face = &patch.faces[f];
    let mut c = [0i64; 3];
    for &v in &face.vertices {
        let p = patch.point(v);
        for k in 0..3 {
            c[k] += p[k];
        }
    }
    patch.cone().coords(&c).map(|(t, _)| t.ln())
}

/// Exponents `e` with `g^e` mapping face `f` onto face `h`, if any.
fn relating_element(patch: &KleinSailPatch, gens: &DirichletGens, f: usize, h: usize) -> Result<Option<Vec<i64>>> {
    let lf = log_centroid(patch, f);
    let lh = log_centroid(patch, h);
    let delta: Vec<f64> = (0..3).map(|k| lh[k] - lf[k]).collect();
    let l = gens.log_vectors();
    // least squares on the three coordinates
    let g11: f64 = (0..3).map(|k| l[0][k] * l[0][k]).sum();
    let g12: f64 = (0..3).map(|k| l[0][k] * l[1][k]).sum();
    let g22: f64 = (0..3).map(|k| l[1][k] * l[1][k]).sum();
    let r1: f64 = (0..3).map(|k| l[0][k] * delta[k]).sum();
    let r2: f64 = (0..3).map(|k| l[1][k] * delta[k]).sum();
    let det = g11 * g22 - g12 * g12;
    let a = (r1 * g22 - r2 * g12) / det;
    let b = (g11 * r2 - g12 * r1) / det;
    if !a.is_finite() || !b.is_finite() || a.abs() > 1e6 || b.abs() > 1e6 {
        return Ok(None);
    }
    let (a0, b0) = (a.round() as i64, b.round() as i64);
    let target: BTreeSet<V3> = patch.faces[h].vertices.iter().map(|&v| *patch.point(v)).collect();
    for (da, db) in [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)] {
        let e = vec![a0 + da, b0 + db];
        let g = small_matrix(&gens.power(&e)?);
        let Ok(g) = g else { continue };
        let image: Option<BTreeSet<V3>> = patch.faces[f].vertices.iter().map(|&v| apply(&g, patch.point(v))).collect();
        if image.as_ref() == Some(&target) {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// One face per orbit of the group generated by `gens` on the certified
/// part of `patch`, with full combinatorial data.
///
/// Completeness: every neighbour of every representative must lie in an
/// orbit that has a representative; since the sail is connected, the
/// representatives then cover every orbit.
pub fn klein_fundamental_domain(patch: &KleinSailPatch, gens: &DirichletGens) -> Result<FundamentalDomain3> {
    if gens.class != SpectrumClass::Klein || gens.rank() != 2 {
        return Err(Error::SpectrumMismatch("Klein domains need two Dirichlet generators".into()));
    }
    let too_small = Error::RegionTooSmall { suggested_radius: patch.radius * 2 };
    let certified: Vec<usize> = patch.certified_faces().map(|(i, _)| i).collect();
    let mut class_of = vec![usize::MAX; patch.faces.len()];
    // members with exponents relative to the first member of their class
    let mut classes: Vec<Vec<(usize, Vec<i64>)>> = Vec::new();
    let mut prekeys: Vec<Vec<u64>> = Vec::new();
    for &f in &certified {
        let pre = face_record(patch, f, None).key();
        let pre = [vec![pre.area, pre.vertex_count], pre.data].concat();
        let mut found = None;
        for (c, members) in classes.iter().enumerate() {
            if prekeys[c] == pre {
                if let Some(e) = relating_element(patch, gens, members[0].0, f)? {
                    found = Some((c, e));
                    break;
                }
            }
        }
        let (c, e) = found.unwrap_or_else(|| {
            classes.push(Vec::new());
            prekeys.push(pre.clone());
            (classes.len() - 1, vec![0, 0])
        });
        classes[c].push((f, e));
        class_of[f] = c;
    }
    let lookup: HashMap<V3, usize> = (0..patch.vertices.len()).map(|i| (*patch.point(i), i)).collect();
    let mut records = Vec::new();
    let mut reps = Vec::new();
    for members in &classes {
        let (rep, er) = members
            .iter()
            .find(|(f, _)| patch.faces[*f].neighbors.iter().all(|n| n.is_some_and(|j| patch.faces[j].certified)))
            .ok_or(too_small.clone())?;
        // degrees are invariant, so take each from any orbit member whose
        // star is complete
        let mut degrees = Vec::new();
        for &v in &patch.faces[*rep].vertices {
            let mut d = patch.vertex_degree(v);
            for (_, eh) in members {
                if d.is_some() {
                    break;
                }
                let g = small_matrix(&gens.power(&[eh[0] - er[0], eh[1] - er[1]])?);
                let w = g.ok().and_then(|g| apply(&g, patch.point(v)));
                d = w.and_then(|w| lookup.get(&w)).and_then(|&i| patch.vertex_degree(i));
            }
            degrees.push(d.ok_or(too_small.clone())? as u64);
        }
        records.push(face_record(patch, *rep, Some(degrees)));
        reps.push(*rep);
    }
    for &r in &reps {
        for n in patch.faces[r].neighbors.iter().flatten() {
            if class_of[*n] == usize::MAX {
                return Err(too_small);
            }
        }
    }
    // V - E + F of the torus quotient
    let mut chi = Ratio::new(0i64, 1);
    for rec in &records {
        chi += Ratio::new(1, 1) - Ratio::new(rec.vertex_count as i64, 2);
        for d in &rec.degrees {
            chi += Ratio::new(1, *d as i64);
        }
    }
    if !chi.is_integer() || chi.to_integer() != 0 {
        return Err(Error::Internal(format!("quotient of the sail has Euler characteristic {chi}, expected 0")));
    }
    Ok(FundamentalDomain3 {
        class: SpectrumClass::Klein,
        orthant: patch.orthant,
        radius: patch.radius,
        faces: records,
        orbit_sizes: classes.iter().map(|c| c.len()).collect(),
        euler_characteristic: 0,
        generator_coefficients: gens.certificates.iter().map(|c| c.coefficients).collect(),
    })
}

/// The invariant together with the domains and radius it came from.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub invariant: Invariant3,
    pub domains: Vec<FundamentalDomain3>,
    /// Largest radius (or bound) used.
    pub radius: u64,
    /// Unimodular change of basis the computation was carried out in.
    pub basis: IntMatrix,
    pub generators: DirichletGens,
    /// Whether every domain was reproduced at twice its radius.
    pub stable: bool,
}

/// Orthants up to the symmetry `σ ↦ -σ`.
pub const ORTHANT_REPS: [[i8; 3]; 4] = [[1, 1, 1], [1, 1, -1], [1, -1, 1], [1, -1, -1]];

const START_RADIUS: u64 = 8;

/// Compute the invariant of `a`, growing the enumeration radius from a
/// small start until every fundamental domain is complete, up to
/// `max_radius`. The work is done in a reduced basis `V⁻¹AV` in which the
/// eigenframe is well conditioned; the invariant does not depend on it.
pub fn invariant3(a: &IntMatrix, max_radius: u64) -> Result<InvariantReport> {
    let class = classify_spectrum(a)?;
    let v = super::balancing_transform(a)?;
    let b = &(&v.unimodular_inverse()? * a) * &v;
    let gens = dirichlet_generators(&b)?;
    let mut domains = Vec::new();
    let mut used = 0;
    let mut stable = true;
    match class {
        SpectrumClass::Klein => {
            for orthant in ORTHANT_REPS {
                let cone = EigenCone3::new(&b, orthant)?;
                let (d, r, ok) = grow(max_radius, |r| {
                    let patch = build_patch(cone.clone(), r)?;
                    klein_fundamental_domain(&patch, &gens)
                })?;
                used = used.max(r);
                stable &= ok;
                domains.push(d);
            }
        }
        SpectrumClass::KleinVoronoi => {
            let (d, r, ok) = grow(max_radius, |r| {
                let sail = kv_factor_sail(&b, 1, r)?;
                kv_fundamental_domain(&sail, &gens)
            })?;
            used = r;
            stable = ok;
            domains.push(d);
        }
    }
    Ok(InvariantReport { invariant: Invariant3::from_domains(class, &domains), domains, radius: used, basis: v, generators: gens, stable })
}

fn sorted_keys(d: &FundamentalDomain3) -> Vec<FaceKey> {
    let mut keys: Vec<FaceKey> = d.faces.iter().map(|f| f.key()).collect();
    keys.sort();
    keys
}

/// Double the radius until the domain is complete and the same domain is
/// found again at twice that radius. Returns the domain, the radius that
/// produced it, and whether the confirmation at `2r` fit under the cap.
fn grow(
    max_radius: u64,
    mut f: impl FnMut(u64) -> Result<FundamentalDomain3>,
) -> Result<(FundamentalDomain3, u64, bool)> {
    let too_small = |e: &Error| matches!(e, Error::RegionTooSmall { .. } | Error::EmptyWindow);
    let mut r = START_RADIUS.min(max_radius);
    loop {
        match f(r) {
            Ok(d) => {
                if r * 2 > max_radius {
                    return Ok((d, r, false));
                }
                match f(r * 2) {
                    Ok(e) if sorted_keys(&e) == sorted_keys(&d) => return Ok((d, r, true)),
                    Ok(_) => r *= 2,
                    Err(e) if too_small(&e) => r *= 2,
                    Err(e) => return Err(e),
                }
            }
            Err(e) if too_small(&e) && r < max_radius => r = (r * 2).min(max_radius),
            Err(e) if too_small(&e) => return Err(Error::RegionTooSmall { suggested_radius: max_radius * 2 }),
            Err(e) => return Err(e),
        }
    }
}
