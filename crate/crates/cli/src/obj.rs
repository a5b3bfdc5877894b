//! OBJ export of Klein sail patches: integer vertices, faces fan-triangulated
//! from their first vertex, certified and provisional faces in separate
//! groups.

use std::fmt::Write as _;

use sailkit_core::sail3::KleinSailPatch;

pub fn to_obj(patch: &KleinSailPatch) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# sail patch, orthant {:?}, radius {}", patch.orthant, patch.radius);
    for v in &patch.vertices {
        let _ = writeln!(s, "v {} {} {}", v.x, v.y, v.z);
    }
    for (group, certified) in [("certified", true), ("provisional", false)] {
        let faces: Vec<_> = patch.faces.iter().filter(|f| f.certified == certified).collect();
        if faces.is_empty() {
            continue;
        }
        let _ = writeln!(s, "g {group}");
        for f in faces {
            let idx = &f.vertices;
            for k in 1..idx.len().saturating_sub(1) {
                let _ = writeln!(s, "f {} {} {}", idx[0] + 1, idx[k] + 1, idx[k + 1] + 1);
            }
        }
    }
    s
}
