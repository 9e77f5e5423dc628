//! Parametric benchmark lattices: toric, Bravyi–Kitaev planar, and
//! rectangular planar lattices punctured by rectangular holes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cellulation::{
    derive_dual, BoundaryClass, CellulationError, DualSurface, Edge, Surface,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeneratorError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("hole {0} does not lie strictly inside the lattice")]
    HoleOnBoundary(usize),
    #[error("holes {0} and {1} overlap or touch")]
    OverlappingHoles(usize, usize),
    #[error(
        "hole {index}: perimeter sequence has {found} classes, perimeter has {expected} edges"
    )]
    PerimeterLength {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("generated lattice is invalid: {0}")]
    Invalid(String),
}

impl From<CellulationError> for GeneratorError {
    fn from(err: CellulationError) -> Self {
        GeneratorError::Invalid(err.to_string())
    }
}

/// Class of a boundary side or perimeter edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideClass {
    Open,
    Closed,
}

impl SideClass {
    fn boundary_class(self) -> BoundaryClass {
        match self {
            SideClass::Open => BoundaryClass::OpenBoundary,
            SideClass::Closed => BoundaryClass::ClosedBoundary,
        }
    }
}

impl FromStr for SideClass {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "open" | "o" | "O" => Ok(SideClass::Open),
            "closed" | "c" | "C" => Ok(SideClass::Closed),
            other => Err(GeneratorError::Parameter(format!(
                "unknown boundary class `{other}`"
            ))),
        }
    }
}

impl fmt::Display for SideClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SideClass::Open => "open",
            SideClass::Closed => "closed",
        })
    }
}

/// Perimeter classes of a hole.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Perimeter {
    Uniform(SideClass),
    /// One class per perimeter edge, clockwise from the top-left corner.
    Sequence(Vec<SideClass>),
}

/// A rectangle of faces removed from a planar lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleSpec {
    pub row: usize,
    pub col: usize,
    pub height: usize,
    pub width: usize,
    pub perimeter: Perimeter,
}

impl HoleSpec {
    pub fn uniform(
        row: usize,
        col: usize,
        height: usize,
        width: usize,
        class: SideClass,
    ) -> HoleSpec {
        HoleSpec {
            row,
            col,
            height,
            width,
            perimeter: Perimeter::Uniform(class),
        }
    }

    pub fn perimeter_len(&self) -> usize {
        2 * (self.height + self.width)
    }
}

/// Parses `row,col,HxW:class` where class is `open`, `closed`, or a string
/// of `o`/`c` letters giving the perimeter clockwise from the top-left corner.
impl FromStr for HoleSpec {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || {
            GeneratorError::Parameter(format!("hole `{s}` is not of the form row,col,HxW:class"))
        };
        let (rect, class) = s.split_once(':').ok_or_else(bad)?;
        let mut parts = rect.split(',');
        let row = parts
            .next()
            .and_then(|p| p.trim().parse().ok())
            .ok_or_else(bad)?;
        let col = parts
            .next()
            .and_then(|p| p.trim().parse().ok())
            .ok_or_else(bad)?;
        let (height, width) = parse_dims(parts.next().ok_or_else(bad)?)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let perimeter = match class {
            "open" | "closed" => Perimeter::Uniform(class.parse()?),
            seq => Perimeter::Sequence(
                seq.chars()
                    .map(|c| c.to_string().parse())
                    .collect::<Result<Vec<SideClass>, _>>()?,
            ),
        };
        Ok(HoleSpec {
            row,
            col,
            height,
            width,
            perimeter,
        })
    }
}

/// Parses `RxC` into `(rows, cols)`.
pub fn parse_dims(s: &str) -> Result<(usize, usize), GeneratorError> {
    let bad = || GeneratorError::Parameter(format!("`{s}` is not of the form RxC"));
    let (r, c) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((r.parse().map_err(|_| bad())?, c.parse().map_err(|_| bad())?))
}

/// Classes of the four outer sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sides {
    pub top: SideClass,
    pub bottom: SideClass,
    pub left: SideClass,
    pub right: SideClass,
}

impl Sides {
    pub fn all(class: SideClass) -> Sides {
        Sides {
            top: class,
            bottom: class,
            left: class,
            right: class,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarSpec {
    pub cell_rows: usize,
    pub cell_cols: usize,
    pub sides: Sides,
    #[serde(default)]
    pub holes: Vec<HoleSpec>,
}

impl PlanarSpec {
    pub fn new(cell_rows: usize, cell_cols: usize, sides: Sides) -> PlanarSpec {
        PlanarSpec {
            cell_rows,
            cell_cols,
            sides,
            holes: Vec::new(),
        }
    }

    pub fn with_hole(mut self, hole: HoleSpec) -> PlanarSpec {
        self.holes.push(hole);
        self
    }

    fn check(&self) -> Result<(), GeneratorError> {
        if self.cell_rows == 0 || self.cell_cols == 0 {
            return Err(GeneratorError::Parameter(
                "lattice dimensions must be at least 1".into(),
            ));
        }
        for (i, h) in self.holes.iter().enumerate() {
            if h.height == 0 || h.width == 0 {
                return Err(GeneratorError::Parameter(format!("hole {i} is empty")));
            }
            if h.row == 0
                || h.col == 0
                || h.row + h.height >= self.cell_rows
                || h.col + h.width >= self.cell_cols
            {
                return Err(GeneratorError::HoleOnBoundary(i));
            }
            if let Perimeter::Sequence(seq) = &h.perimeter {
                if seq.len() != h.perimeter_len() {
                    return Err(GeneratorError::PerimeterLength {
                        index: i,
                        expected: h.perimeter_len(),
                        found: seq.len(),
                    });
                }
            }
        }
        for (i, a) in self.holes.iter().enumerate() {
            for (j, b) in self.holes.iter().enumerate().skip(i + 1) {
                // at least one face row or column between them
                let apart = a.row + a.height < b.row
                    || b.row + b.height < a.row
                    || a.col + a.width < b.col
                    || b.col + b.width < a.col;
                if !apart {
                    return Err(GeneratorError::OverlappingHoles(i, j));
                }
            }
        }
        Ok(())
    }

    fn default_name(&self) -> String {
        let s = self.sides;
        let mut name = format!(
            "planar-{}x{}-{}{}{}{}",
            self.cell_rows,
            self.cell_cols,
            initial(s.top),
            initial(s.bottom),
            initial(s.left),
            initial(s.right)
        );
        for h in &self.holes {
            let class = match &h.perimeter {
                Perimeter::Uniform(c) => c.to_string(),
                Perimeter::Sequence(seq) => seq.iter().map(|&c| initial(c)).collect(),
            };
            name.push_str(&format!(
                "-h{}.{}.{}x{}{}",
                h.row, h.col, h.height, h.width, class
            ));
        }
        name
    }
}

fn initial(c: SideClass) -> char {
    match c {
        SideClass::Open => 'o',
        SideClass::Closed => 'c',
    }
}

/// Square lattice on the torus: `d²` vertices, `2d²` interior edges, `d²` faces.
pub fn gen_toric(d: usize) -> Result<(Surface, DualSurface), GeneratorError> {
    if d < 2 {
        return Err(GeneratorError::Parameter(format!(
            "toric size d={d} must be at least 2"
        )));
    }
    let vertex = |r: usize, c: usize| (r % d) * d + (c % d);
    // horizontal edge (r, c) has id r*d + c, vertical edge (r, c) has id d² + r*d + c
    let h = |r: usize, c: usize| (r % d) * d + (c % d);
    let v = |r: usize, c: usize| d * d + (r % d) * d + (c % d);
    let mut edges = Vec::with_capacity(2 * d * d);
    for r in 0..d {
        for c in 0..d {
            edges.push(Edge {
                ends: [vertex(r, c), vertex(r, c + 1)],
                class: BoundaryClass::Interior,
            });
        }
    }
    for r in 0..d {
        for c in 0..d {
            edges.push(Edge {
                ends: [vertex(r, c), vertex(r + 1, c)],
                class: BoundaryClass::Interior,
            });
        }
    }
    let faces = (0..d)
        .flat_map(|r| (0..d).map(move |c| vec![h(r, c), h(r + 1, c), v(r, c), v(r, c + 1)]))
        .collect();
    let surface = Surface::from_parts(format!("toric-d{d}"), vec![false; d * d], edges, faces)?;
    let dual = derive_dual(&surface);
    Ok((surface, dual))
}

/// Bravyi–Kitaev planar code: a `d × (d+1)` vertex grid with open left and
/// right columns and closed top and bottom rows. `n = d² + (d-1)²`, `k = 1`.
pub fn gen_bravyi_kitaev(d: usize) -> Result<(Surface, DualSurface), GeneratorError> {
    if d < 2 {
        return Err(GeneratorError::Parameter(format!(
            "planar size d={d} must be at least 2"
        )));
    }
    let spec = PlanarSpec::new(
        d - 1,
        d,
        Sides {
            top: SideClass::Closed,
            bottom: SideClass::Closed,
            left: SideClass::Open,
            right: SideClass::Open,
        },
    );
    let (surface, _) = gen_planar(&spec)?;
    let surface = surface.with_name(format!("bk-d{d}"));
    let dual = derive_dual(&surface);
    Ok((surface, dual))
}

/// Rectangular `cell_rows × cell_cols` lattice with classed sides and holes.
pub fn gen_planar(spec: &PlanarSpec) -> Result<(Surface, DualSurface), GeneratorError> {
    spec.check()?;
    let (rows, cols) = (spec.cell_rows, spec.cell_cols);

    let mut removed = vec![false; rows * cols];
    for h in &spec.holes {
        for r in h.row..h.row + h.height {
            for c in h.col..h.col + h.width {
                removed[r * cols + c] = true;
            }
        }
    }
    let face_kept = |r: isize, c: isize| -> bool {
        r >= 0
            && c >= 0
            && (r as usize) < rows
            && (c as usize) < cols
            && !removed[r as usize * cols + c as usize]
    };

    // horizontal edge (r, c): (r,c)-(r,c+1), between faces (r-1,c) and (r,c)
    // vertical edge (r, c): (r,c)-(r+1,c), between faces (r,c-1) and (r,c)
    let mut class_override: std::collections::HashMap<(bool, usize, usize), BoundaryClass> =
        std::collections::HashMap::new();
    for h in &spec.holes {
        let classes: Vec<SideClass> = match &h.perimeter {
            Perimeter::Uniform(c) => vec![*c; h.perimeter_len()],
            Perimeter::Sequence(seq) => seq.clone(),
        };
        let mut walk = Vec::with_capacity(h.perimeter_len());
        for c in h.col..h.col + h.width {
            walk.push((true, h.row, c));
        }
        for r in h.row..h.row + h.height {
            walk.push((false, r, h.col + h.width));
        }
        for c in (h.col..h.col + h.width).rev() {
            walk.push((true, h.row + h.height, c));
        }
        for r in (h.row..h.row + h.height).rev() {
            walk.push((false, r, h.col));
        }
        for (key, class) in walk.into_iter().zip(classes) {
            class_override.insert(key, class.boundary_class());
        }
    }

    let mut edge_id = std::collections::HashMap::new();
    let mut edges: Vec<(usize, usize, BoundaryClass)> = Vec::new();
    let vid = |r: usize, c: usize| r * (cols + 1) + c;
    for r in 0..=rows {
        for c in 0..cols {
            let above = face_kept(r as isize - 1, c as isize);
            let below = face_kept(r as isize, c as isize);
            let class = match (above, below) {
                (false, false) => continue,
                (true, true) => BoundaryClass::Interior,
                _ if r == 0 => spec.sides.top.boundary_class(),
                _ if r == rows => spec.sides.bottom.boundary_class(),
                _ => class_override[&(true, r, c)],
            };
            edge_id.insert((true, r, c), edges.len());
            edges.push((vid(r, c), vid(r, c + 1), class));
        }
    }
    for r in 0..rows {
        for c in 0..=cols {
            let left = face_kept(r as isize, c as isize - 1);
            let right = face_kept(r as isize, c as isize);
            let class = match (left, right) {
                (false, false) => continue,
                (true, true) => BoundaryClass::Interior,
                _ if c == 0 => spec.sides.left.boundary_class(),
                _ if c == cols => spec.sides.right.boundary_class(),
                _ => class_override[&(false, r, c)],
            };
            edge_id.insert((false, r, c), edges.len());
            edges.push((vid(r, c), vid(r + 1, c), class));
        }
    }

    // drop vertices strictly inside holes and renumber
    let mut used = vec![false; (rows + 1) * (cols + 1)];
    for &(a, b, _) in &edges {
        used[a] = true;
        used[b] = true;
    }
    let mut new_vertex = vec![usize::MAX; used.len()];
    let mut next = 0;
    for (v, &u) in used.iter().enumerate() {
        if u {
            new_vertex[v] = next;
            next += 1;
        }
    }
    let mut open = vec![false; next];
    let edges: Vec<Edge> = edges
        .into_iter()
        .map(|(a, b, class)| {
            let ends = [new_vertex[a], new_vertex[b]];
            if class == BoundaryClass::OpenBoundary {
                open[ends[0]] = true;
                open[ends[1]] = true;
            }
            Edge { ends, class }
        })
        .collect();

    let mut faces = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if removed[r * cols + c] {
                continue;
            }
            faces.push(vec![
                edge_id[&(true, r, c)],
                edge_id[&(true, r + 1, c)],
                edge_id[&(false, r, c)],
                edge_id[&(false, r, c + 1)],
            ]);
        }
    }

    let surface = Surface::from_parts(spec.default_name(), open, edges, faces)?;
    let dual = derive_dual(&surface);
    Ok((surface, dual))
}

/// Planar parameters in their textual form, as given on the command line or
/// in a request: `cells = "RxC"`, a default side class, per-side overrides
/// and holes in the `row,col,HxW:class` syntax.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanarText {
    pub cells: String,
    #[serde(default)]
    pub sides: Option<String>,
    #[serde(default)]
    pub top: Option<String>,
    #[serde(default)]
    pub bottom: Option<String>,
    #[serde(default)]
    pub left: Option<String>,
    #[serde(default)]
    pub right: Option<String>,
    #[serde(default)]
    pub holes: Vec<String>,
}

impl PlanarText {
    /// Sides default to closed.
    pub fn to_spec(&self) -> Result<PlanarSpec, GeneratorError> {
        let (rows, cols) = parse_dims(&self.cells)?;
        let base: SideClass = self.sides.as_deref().unwrap_or("closed").parse()?;
        let side = |o: &Option<String>| o.as_deref().map_or(Ok(base), str::parse);
        let sides = Sides {
            top: side(&self.top)?,
            bottom: side(&self.bottom)?,
            left: side(&self.left)?,
            right: side(&self.right)?,
        };
        let mut spec = PlanarSpec::new(rows, cols, sides);
        for h in &self.holes {
            spec = spec.with_hole(h.parse()?);
        }
        Ok(spec)
    }
}

/// A reference to one of the generators with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorRef {
    Toric { d: usize },
    Bk { d: usize },
    Planar(PlanarText),
}

impl GeneratorRef {
    pub fn build(&self) -> Result<(Surface, DualSurface), GeneratorError> {
        match self {
            GeneratorRef::Toric { d } => gen_toric(*d),
            GeneratorRef::Bk { d } => gen_bravyi_kitaev(*d),
            GeneratorRef::Planar(text) => gen_planar(&text.to_spec()?),
        }
    }
}
