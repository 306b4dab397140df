//! Square-lattice torus geometry with qubits on edges and fermion modes on
//! faces.
//!
//! Coordinates: faces, vertices, horizontal edges and vertical edges are all
//! indexed by integer pairs mod (Lx, Ly). Face (fx, fy) occupies the unit
//! square with south-west corner at vertex (fx, fy). Horizontal edges are
//! oriented east, vertical edges north. Edge ids are horizontal-first
//! row-major: `h(x,y) = y*Lx + x`, `v(x,y) = Lx*Ly + y*Lx + x`.

use crate::error::{Error, Result};

/// Orientation of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Horizontal, oriented east.
    East,
    /// Vertical, oriented north.
    North,
}

/// Coarse-graining direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Dir {
    X,
    Y,
}

/// AB sublattice tag. In x-mode, faces in odd columns are B; in y-mode,
/// faces in odd rows are B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SublatticeTag {
    A,
    B,
}

/// Fate of an edge qubit under one coarse-graining step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeFate {
    /// Edge survives onto the coarse lattice.
    Retained,
    /// Edge is disentangled into |0> (stabilized by +Z).
    DisentangledZ,
    /// Edge is disentangled into |+> (stabilized by +X).
    DisentangledX,
}

/// Torus of faces with edge qubits; all coordinates wrap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeLattice {
    lx: usize,
    ly: usize,
}

impl EdgeLattice {
    /// Builds an Lx x Ly torus. Both dimensions must be at least 2 so that
    /// faces have four distinct corners.
    pub fn build_torus(lx: usize, ly: usize) -> Result<EdgeLattice> {
        if lx < 2 || ly < 2 {
            return Err(Error::InvalidLattice {
                lx,
                ly,
                reason: "torus needs Lx >= 2 and Ly >= 2",
            });
        }
        Ok(EdgeLattice { lx, ly })
    }

    pub fn lx(&self) -> usize {
        self.lx
    }

    pub fn ly(&self) -> usize {
        self.ly
    }

    pub fn n_faces(&self) -> usize {
        self.lx * self.ly
    }

    pub fn n_vertices(&self) -> usize {
        self.lx * self.ly
    }

    /// 2 * Lx * Ly edge qubits.
    pub fn n_edges(&self) -> usize {
        2 * self.lx * self.ly
    }

    fn wrap(&self, x: isize, y: isize) -> (usize, usize) {
        (
            x.rem_euclid(self.lx as isize) as usize,
            y.rem_euclid(self.ly as isize) as usize,
        )
    }

    /// Face id at (possibly out-of-range) coordinates.
    pub fn face(&self, fx: isize, fy: isize) -> usize {
        let (x, y) = self.wrap(fx, fy);
        y * self.lx + x
    }

    pub fn face_xy(&self, f: usize) -> (usize, usize) {
        (f % self.lx, f / self.lx)
    }

    /// Vertex id (same indexing scheme as faces).
    pub fn vertex(&self, vx: isize, vy: isize) -> usize {
        self.face(vx, vy)
    }

    pub fn vertex_xy(&self, v: usize) -> (usize, usize) {
        self.face_xy(v)
    }

    /// Horizontal (east-oriented) edge with tail at vertex (x, y).
    pub fn h_edge(&self, x: isize, y: isize) -> usize {
        let (x, y) = self.wrap(x, y);
        y * self.lx + x
    }

    /// Vertical (north-oriented) edge with tail at vertex (x, y).
    pub fn v_edge(&self, x: isize, y: isize) -> usize {
        let (x, y) = self.wrap(x, y);
        self.lx * self.ly + y * self.lx + x
    }

    /// Orientation and tail coordinates of an edge id.
    pub fn edge_info(&self, e: usize) -> (Orientation, usize, usize) {
        let hv = self.lx * self.ly;
        if e < hv {
            (Orientation::East, e % self.lx, e / self.lx)
        } else {
            let r = e - hv;
            (Orientation::North, r % self.lx, r / self.lx)
        }
    }

    /// North / East / South / West edges of face (fx, fy).
    pub fn face_edges(&self, fx: isize, fy: isize) -> FaceEdges {
        FaceEdges {
            n: self.h_edge(fx, fy + 1),
            e: self.v_edge(fx + 1, fy),
            s: self.h_edge(fx, fy),
            w: self.v_edge(fx, fy),
        }
    }

    /// The four edges incident on vertex (vx, vy).
    pub fn vertex_edges(&self, vx: isize, vy: isize) -> [usize; 4] {
        [
            self.h_edge(vx, vy),     // east arm
            self.h_edge(vx - 1, vy), // west arm
            self.v_edge(vx, vy),     // north arm
            self.v_edge(vx, vy - 1), // south arm
        ]
    }

    /// Face to the left of an oriented edge: north of an east edge, west of
    /// a north edge.
    pub fn l_face(&self, e: usize) -> usize {
        let (o, x, y) = self.edge_info(e);
        match o {
            Orientation::East => self.face(x as isize, y as isize),
            Orientation::North => self.face(x as isize - 1, y as isize),
        }
    }

    /// Face to the right of an oriented edge: south of an east edge, east of
    /// a north edge.
    pub fn r_face(&self, e: usize) -> usize {
        let (o, x, y) = self.edge_info(e);
        match o {
            Orientation::East => self.face(x as isize, y as isize - 1),
            Orientation::North => self.face(x as isize, y as isize),
        }
    }

    /// Companion edge r(e): the edge of the opposite orientation whose
    /// arrowhead sits at the tail of `e`.
    pub fn r_edge(&self, e: usize) -> usize {
        let (o, x, y) = self.edge_info(e);
        match o {
            Orientation::East => self.v_edge(x as isize, y as isize - 1),
            Orientation::North => self.h_edge(x as isize - 1, y as isize),
        }
    }

    /// Face to the north-east of vertex (vx, vy).
    pub fn ne_face(&self, vx: isize, vy: isize) -> usize {
        self.face(vx, vy)
    }

    /// AB tag of a face for a coarse-graining direction.
    pub fn sublattice(&self, f: usize, dir: Dir) -> SublatticeTag {
        let (fx, fy) = self.face_xy(f);
        let odd = match dir {
            Dir::X => fx % 2 == 1,
            Dir::Y => fy % 2 == 1,
        };
        if odd {
            SublatticeTag::B
        } else {
            SublatticeTag::A
        }
    }

    /// Torus distance between face centers (Chebyshev metric).
    pub fn face_distance(&self, f: usize, g: usize) -> usize {
        let (ax, ay) = self.face_xy(f);
        let (bx, by) = self.face_xy(g);
        let dx = ax.abs_diff(bx).min(self.lx - ax.abs_diff(bx));
        let dy = ay.abs_diff(by).min(self.ly - ay.abs_diff(by));
        dx.max(dy)
    }
}

/// The four boundary edges of a face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceEdges {
    pub n: usize,
    pub e: usize,
    pub s: usize,
    pub w: usize,
}

impl FaceEdges {
    pub fn all(&self) -> [usize; 4] {
        [self.n, self.e, self.s, self.w]
    }
}

/// One coarse-graining step: which edges survive, which are disentangled,
/// and how retained edges map onto the coarse lattice.
#[derive(Debug, Clone)]
pub struct CoarseGrainMap {
    pub dir: Dir,
    pub fine: EdgeLattice,
    pub coarse: EdgeLattice,
    /// Fate of every fine edge.
    pub fate: Vec<EdgeFate>,
    /// coarse edge id -> fine edge id.
    pub coarse_to_fine: Vec<usize>,
}

impl CoarseGrainMap {
    /// Fine edge id carrying a given coarse edge.
    pub fn fine_edge(&self, coarse_edge: usize) -> usize {
        self.coarse_to_fine[coarse_edge]
    }

    /// All fine edges disentangled into |0>.
    pub fn disentangled_z(&self) -> Vec<usize> {
        self.by_fate(EdgeFate::DisentangledZ)
    }

    /// All fine edges disentangled into |+>.
    pub fn disentangled_x(&self) -> Vec<usize> {
        self.by_fate(EdgeFate::DisentangledX)
    }

    fn by_fate(&self, fate: EdgeFate) -> Vec<usize> {
        self.fate
            .iter()
            .enumerate()
            .filter(|(_, &f)| f == fate)
            .map(|(e, _)| e)
            .collect()
    }
}

/// Halves the lattice along `dir`. The halved dimension must be even.
///
/// x-mode: B faces sit in odd columns; their west (vertical) edges are
/// disentangled into |0> and their south (horizontal) edges into |+>.
/// y-mode: B faces sit in odd rows; their south edges go to |0> and their
/// west edges to |+>.
pub fn coarse_grain(lat: &EdgeLattice, dir: Dir) -> Result<CoarseGrainMap> {
    let (lx, ly) = (lat.lx(), lat.ly());
    let coarse = match dir {
        Dir::X => {
            if lx % 2 != 0 || lx < 4 {
                return Err(Error::InvalidLattice {
                    lx,
                    ly,
                    reason: "x coarse-graining needs even Lx >= 4",
                });
            }
            EdgeLattice::build_torus(lx / 2, ly)?
        }
        Dir::Y => {
            if ly % 2 != 0 || ly < 4 {
                return Err(Error::InvalidLattice {
                    lx,
                    ly,
                    reason: "y coarse-graining needs even Ly >= 4",
                });
            }
            EdgeLattice::build_torus(lx, ly / 2)?
        }
    };

    let mut fate = vec![EdgeFate::Retained; lat.n_edges()];
    for e in 0..lat.n_edges() {
        let (o, x, y) = lat.edge_info(e);
        fate[e] = match (dir, o) {
            // h(x,y) with x odd is the south edge of B face (x,y).
            (Dir::X, Orientation::East) if x % 2 == 1 => EdgeFate::DisentangledX,
            // v(x,y) with x odd is the west edge of B face (x,y).
            (Dir::X, Orientation::North) if x % 2 == 1 => EdgeFate::DisentangledZ,
            // h(x,y) with y odd is the south edge of B face (x,y).
            (Dir::Y, Orientation::East) if y % 2 == 1 => EdgeFate::DisentangledZ,
            // v(x,y) with y odd is the west edge of B face (x,y).
            (Dir::Y, Orientation::North) if y % 2 == 1 => EdgeFate::DisentangledX,
            _ => EdgeFate::Retained,
        };
    }

    let mut coarse_to_fine = vec![0usize; coarse.n_edges()];
    for ce in 0..coarse.n_edges() {
        let (o, x, y) = coarse.edge_info(ce);
        let (x, y) = (x as isize, y as isize);
        let fine_e = match (dir, o) {
            (Dir::X, Orientation::East) => lat.h_edge(2 * x, y),
            (Dir::X, Orientation::North) => lat.v_edge(2 * x, y),
            (Dir::Y, Orientation::East) => lat.h_edge(x, 2 * y),
            (Dir::Y, Orientation::North) => lat.v_edge(x, 2 * y),
        };
        coarse_to_fine[ce] = fine_e;
    }

    Ok(CoarseGrainMap {
        dir,
        fine: *lat,
        coarse,
        fate,
        coarse_to_fine,
    })
}

/// Sixteen-layer superlattice bookkeeping: every face of a 4x4 unit cell
/// hosts one of 16 fermion layers; layers 1..=nu carry the paired
/// (topological) species, layers nu+1..=16 the trivial insulator.
#[derive(Debug, Clone)]
pub struct Superlattice16 {
    pub lattice: EdgeLattice,
    pub nu: usize,
    /// Face id -> layer index in 1..=16.
    pub layer_of_face: Vec<usize>,
}

/// Tags each face of the lattice with its layer in the 4x4 unit cell
/// (row-major: layer = 1 + 4*(fy mod 4) + (fx mod 4)). Requires both
/// dimensions to be multiples of 4 and 0 <= nu <= 16.
pub fn superlattice_16(lat: &EdgeLattice, nu: usize) -> Result<Superlattice16> {
    if lat.lx() % 4 != 0 || lat.ly() % 4 != 0 {
        return Err(Error::InvalidLattice {
            lx: lat.lx(),
            ly: lat.ly(),
            reason: "16-layer superlattice needs dimensions divisible by 4",
        });
    }
    if nu > 16 {
        return Err(Error::invalid(format!("nu = {nu} out of range 0..=16")));
    }
    let layer_of_face = (0..lat.n_faces())
        .map(|f| {
            let (fx, fy) = lat.face_xy(f);
            1 + 4 * (fy % 4) + (fx % 4)
        })
        .collect();
    Ok(Superlattice16 {
        lattice: *lat,
        nu,
        layer_of_face,
    })
}

impl Superlattice16 {
    /// Faces hosting a given layer, ascending.
    pub fn faces_of_layer(&self, layer: usize) -> Vec<usize> {
        assert!((1..=16).contains(&layer));
        (0..self.lattice.n_faces())
            .filter(|&f| self.layer_of_face[f] == layer)
            .collect()
    }

    /// True when the layer carries the paired species (layer <= nu).
    pub fn is_paired_layer(&self, layer: usize) -> bool {
        layer <= self.nu
    }
}
