use std::collections::{HashMap, VecDeque};

use super::Surface;

/// Vertex, edge and face relabeling taking one surface onto another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub faces: Vec<usize>,
}

type Flag = (usize, usize, usize);

struct Flags<'a> {
    s: &'a Surface,
    // edges of face f meeting vertex v
    corner: HashMap<(usize, usize), Vec<usize>>,
}

impl<'a> Flags<'a> {
    fn new(s: &'a Surface) -> Flags<'a> {
        let mut corner: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (f, face) in s.faces().iter().enumerate() {
            for &e in face {
                let [a, b] = s.edge(e).ends;
                corner.entry((f, a)).or_default().push(e);
                if b != a {
                    corner.entry((f, b)).or_default().push(e);
                }
            }
        }
        Flags { s, corner }
    }

    fn all(&self) -> Vec<Flag> {
        let mut flags = Vec::new();
        for (f, face) in self.s.faces().iter().enumerate() {
            for &e in face {
                for v in self.s.edge(e).ends {
                    flags.push((v, e, f));
                }
            }
        }
        flags
    }

    fn switch_vertex(&self, (v, e, f): Flag) -> Option<Flag> {
        let [a, b] = self.s.edge(e).ends;
        if a == b {
            return None;
        }
        Some((if v == a { b } else { a }, e, f))
    }

    fn switch_edge(&self, (v, e, f): Flag) -> Option<Flag> {
        let edges = self.corner.get(&(f, v))?;
        if edges.len() != 2 {
            return None;
        }
        let other = if edges[0] == e { edges[1] } else { edges[0] };
        Some((v, other, f))
    }

    fn switch_face(&self, (v, e, f): Flag) -> Flag {
        let other = self.s.faces_of_edge(e).find(|&g| g != f).unwrap_or(f);
        (v, e, other)
    }
}

/// Searches for an isomorphism of cellulations from `a` onto `b`.
///
/// Works on connected surfaces whose faces are polygons (every corner of a
/// face has exactly two face edges). Fixing one flag determines the whole
/// map, so the search tries each flag of `b` as the image of a fixed flag of
/// `a`. Boundary classes and open flags must be preserved.
pub fn find_isomorphism(a: &Surface, b: &Surface) -> Option<Isomorphism> {
    if a.num_vertices() != b.num_vertices()
        || a.num_edges() != b.num_edges()
        || a.num_faces() != b.num_faces()
    {
        return None;
    }
    let fa = Flags::new(a);
    let fb = Flags::new(b);
    let start = *fa.all().first()?;
    fb.all()
        .into_iter()
        .find_map(|target| propagate(&fa, &fb, start, target))
}

fn propagate(fa: &Flags, fb: &Flags, start: Flag, target: Flag) -> Option<Isomorphism> {
    let (a, b) = (fa.s, fb.s);
    let mut vmap = vec![usize::MAX; a.num_vertices()];
    let mut emap = vec![usize::MAX; a.num_edges()];
    let mut fmap = vec![usize::MAX; a.num_faces()];
    let mut seen: HashMap<Flag, Flag> = HashMap::new();
    let mut queue = VecDeque::from([(start, target)]);

    fn assign(map: &mut [usize], from: usize, to: usize) -> bool {
        if map[from] == usize::MAX {
            map[from] = to;
            true
        } else {
            map[from] == to
        }
    }

    while let Some((x, y)) = queue.pop_front() {
        if let Some(&prev) = seen.get(&x) {
            if prev != y {
                return None;
            }
            continue;
        }
        seen.insert(x, y);
        let (xv, xe, xf) = x;
        let (yv, ye, yf) = y;
        if a.is_open_vertex(xv) != b.is_open_vertex(yv) || a.edge(xe).class != b.edge(ye).class {
            return None;
        }
        if !assign(&mut vmap, xv, yv) || !assign(&mut emap, xe, ye) || !assign(&mut fmap, xf, yf) {
            return None;
        }
        match (fa.switch_vertex(x), fb.switch_vertex(y)) {
            (Some(nx), Some(ny)) => queue.push_back((nx, ny)),
            (None, None) => {}
            _ => return None,
        }
        match (fa.switch_edge(x), fb.switch_edge(y)) {
            (Some(nx), Some(ny)) => queue.push_back((nx, ny)),
            _ => return None,
        }
        queue.push_back((fa.switch_face(x), fb.switch_face(y)));
    }

    let bijective = |map: &[usize], n: usize| {
        let mut hit = vec![false; n];
        map.iter()
            .all(|&t| t != usize::MAX && !std::mem::replace(&mut hit[t], true))
    };
    if !bijective(&vmap, b.num_vertices())
        || !bijective(&emap, b.num_edges())
        || !bijective(&fmap, b.num_faces())
    {
        return None;
    }
    // incidences must be carried over exactly
    for (e, edge) in a.edges().iter().enumerate() {
        let mut mapped = [vmap[edge.ends[0]], vmap[edge.ends[1]]];
        let mut other = b.edge(emap[e]).ends;
        mapped.sort_unstable();
        other.sort_unstable();
        if mapped != other {
            return None;
        }
    }
    for (f, face) in a.faces().iter().enumerate() {
        let mut mapped: Vec<usize> = face.iter().map(|&e| emap[e]).collect();
        mapped.sort_unstable();
        if mapped != b.face(fmap[f]) {
            return None;
        }
    }
    Some(Isomorphism {
        vertices: vmap,
        edges: emap,
        faces: fmap,
    })
}
