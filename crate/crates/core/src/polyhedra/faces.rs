use std::collections::{BTreeSet, VecDeque};

use num::Zero;

use super::{HRep, Polyhedron, VRep};

/// A nonempty face together with the indices of the canonical inequalities
/// of the parent that are tight on it.
#[derive(Clone, Debug)]
pub struct Face {
    pub polyhedron: Polyhedron,
    pub tight: Vec<usize>,
}

impl Polyhedron {
    /// All nonempty faces, the polyhedron itself included.
    pub fn faces(&self) -> Vec<Face> {
        if self.is_empty() {
            return Vec::new();
        }
        let p = self.reduced();
        let h = p.hrep().clone();
        let v = p.vrep().clone();
        let m = h.inequalities.len();
        let vert_tight: Vec<Vec<bool>> = v
            .vertices
            .iter()
            .map(|x| h.inequalities.iter().map(|c| c.slack(x).is_zero()).collect())
            .collect();
        let ray_tight: Vec<Vec<bool>> = v
            .rays
            .iter()
            .map(|r| h.inequalities.iter().map(|c| c.normal.dot(r).is_zero()).collect())
            .collect();

        let generators = |s: &[usize]| -> (Vec<usize>, Vec<usize>) {
            let on = |row: &Vec<bool>| s.iter().all(|&i| row[i]);
            (
                (0..v.vertices.len()).filter(|&j| on(&vert_tight[j])).collect(),
                (0..v.rays.len()).filter(|&j| on(&ray_tight[j])).collect(),
            )
        };
        let closure = |verts: &[usize], rays: &[usize]| -> Vec<usize> {
            (0..m)
                .filter(|&i| {
                    verts.iter().all(|&j| vert_tight[j][i]) && rays.iter().all(|&j| ray_tight[j][i])
                })
                .collect()
        };

        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        let (v0, r0) = generators(&[]);
        let root = closure(&v0, &r0);
        seen.insert(root.clone());
        queue.push_back((root, v0, r0));
        while let Some((s, verts, rays)) = queue.pop_front() {
            for i in 0..m {
                if s.contains(&i) {
                    continue;
                }
                let mut t = s.clone();
                t.push(i);
                let (fv, fr) = generators(&t);
                if fv.is_empty() {
                    continue;
                }
                let closed = closure(&fv, &fr);
                if seen.insert(closed.clone()) {
                    queue.push_back((closed, fv, fr));
                }
            }
            let face_v = VRep::new(
                p.dim(),
                verts.iter().map(|&j| v.vertices[j].clone()).collect(),
                rays.iter().map(|&j| v.rays[j].clone()).collect(),
                v.lines.clone(),
            );
            let mut face_h = HRep::new(p.dim());
            face_h.equalities = h.equalities.clone();
            for (i, c) in h.inequalities.iter().enumerate() {
                if s.contains(&i) {
                    face_h.equalities.push(c.clone());
                } else {
                    face_h.inequalities.push(c.clone());
                }
            }
            out.push(Face {
                polyhedron: Polyhedron::from_parts(face_v, face_h, true),
                tight: s,
            });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_la::{rat, Subspace, Vector};
    use crate::polyhedra::Membership;

    #[test]
    fn square_has_nine_faces() {
        let sq = Polyhedron::bounding_box(&Vector::from_ints(&[0, 0]), &Vector::from_ints(&[1, 1])).unwrap();
        let faces = sq.faces();
        assert_eq!(faces.len(), 9);
        let dims: Vec<usize> = faces.iter().map(|f| f.polyhedron.affine_dim().unwrap()).collect();
        assert_eq!(dims.iter().filter(|&&d| d == 0).count(), 4);
        assert_eq!(dims.iter().filter(|&&d| d == 1).count(), 4);
    }

    #[test]
    fn quadrant_faces() {
        let q = Polyhedron::from_h(
            HRep::new(2)
                .ge(Vector::from_ints(&[1, 0]), rat(0))
                .ge(Vector::from_ints(&[0, 1]), rat(0)),
        )
        .unwrap();
        let faces = q.faces();
        assert_eq!(faces.len(), 4);
        let origin = faces.iter().find(|f| f.tight.len() == 2).unwrap();
        assert!(origin.polyhedron.same_set(&Polyhedron::point(Vector::from_ints(&[0, 0]))));
        let e = Vector::from_ints(&[3, 0]);
        let edge = faces.iter().find(|f| f.tight.len() == 1 && f.polyhedron.contains(&e, Membership::Closed)).unwrap();
        assert!(edge.polyhedron.contains(&e, Membership::RelativeInterior));
    }

    #[test]
    fn affine_set_is_its_only_face() {
        let l = Polyhedron::subspace(&Subspace::new(2, vec![Vector::from_ints(&[1, 1])]));
        assert_eq!(l.faces().len(), 1);
    }
}
