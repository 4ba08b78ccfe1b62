//! Cut-cell discretization of the unit disk and finite-difference calculus on it.
//!
//! Nodes live on the square lattice `x = (i - n) h`, `y = (j - n) h` with
//! `n = ceil(1/h)`. A lattice node is *inside* when it lies strictly in the open
//! disk. Inside nodes whose four axis neighbours are all inside are
//! [`NodeKind::Interior`]; the rest are [`NodeKind::BoundaryCut`] and carry, for
//! every arm that leaves the disk, the fractional distance `theta` (in units of
//! `h`) to the circle along that axis.

mod calculus;
mod field;
mod io;

pub use calculus::{ck_norm, gradient, hessian, laplacian, second_derivative_weights};
pub use field::{MatrixField, ScalarField, VectorField};
pub use io::{read_table, write_table};

use crate::error::{Error, Result};

/// Lattice points closer than this to the circle (in `1 - |x|^2`) count as on it.
const ON_CIRCLE_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Interior,
    BoundaryCut,
    Exterior,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    East,
    West,
    North,
    South,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::East, Direction::West, Direction::North, Direction::South];

    pub fn offset(self) -> (isize, isize) {
        match self {
            Direction::East => (1, 0),
            Direction::West => (-1, 0),
            Direction::North => (0, 1),
            Direction::South => (0, -1),
        }
    }

    /// 0 for x, 1 for y.
    pub fn axis(self) -> usize {
        match self {
            Direction::East | Direction::West => 0,
            Direction::North | Direction::South => 1,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Direction::East | Direction::North => 1.0,
            Direction::West | Direction::South => -1.0,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Positive and negative direction along `axis`.
    pub fn along(axis: usize) -> (Direction, Direction) {
        if axis == 0 {
            (Direction::East, Direction::West)
        } else {
            (Direction::North, Direction::South)
        }
    }
}

/// What lies at the end of one of a node's four arms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Arm {
    /// Another inside node, at distance `h`.
    Node(usize),
    /// The circle, reached at cut point with this index.
    Cut(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub i: usize,
    pub j: usize,
    pub x: f64,
    pub y: f64,
    pub kind: NodeKind,
    /// Indexed by [`Direction::index`].
    pub arms: [Arm; 4],
}

/// Intersection of a node's arm with the unit circle.
#[derive(Clone, Debug, PartialEq)]
pub struct CutPoint {
    pub node: usize,
    pub direction: Direction,
    /// Distance from the node in units of `h`, in `(0, 1]`.
    pub theta: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiskGrid {
    h: f64,
    half: usize,
    kinds: Vec<NodeKind>,
    lattice_to_node: Vec<usize>,
    nodes: Vec<Node>,
    cuts: Vec<CutPoint>,
}

const NO_NODE: usize = usize::MAX;

impl DiskGrid {
    /// Builds the grid for spacing `0 < h <= 0.5`.
    pub fn new(h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0 && h <= 0.5) {
            return Err(Error::invalid("h", format!("spacing must lie in (0, 0.5], got {h}")));
        }
        let half = (1.0 / h).ceil() as usize;
        let side = 2 * half + 1;
        let coord = |i: usize| (i as f64 - half as f64) * h;
        let inside = |i: usize, j: usize| {
            let (x, y) = (coord(i), coord(j));
            1.0 - (x * x + y * y) > ON_CIRCLE_EPS
        };

        let mut lattice_to_node = vec![NO_NODE; side * side];
        let mut nodes = Vec::new();
        for j in 0..side {
            for i in 0..side {
                if inside(i, j) {
                    lattice_to_node[j * side + i] = nodes.len();
                    nodes.push(Node {
                        i,
                        j,
                        x: coord(i),
                        y: coord(j),
                        kind: NodeKind::Interior,
                        arms: [Arm::Node(NO_NODE); 4],
                    });
                }
            }
        }

        let mut cuts = Vec::new();
        for (idx, node) in nodes.iter_mut().enumerate() {
            for dir in Direction::ALL {
                let (di, dj) = dir.offset();
                // The boundary ring of the lattice is always outside, so neighbours exist.
                let ni = (node.i as isize + di) as usize;
                let nj = (node.j as isize + dj) as usize;
                let neighbour = lattice_to_node[nj * side + ni];
                node.arms[dir.index()] = if neighbour != NO_NODE {
                    Arm::Node(neighbour)
                } else {
                    node.kind = NodeKind::BoundaryCut;
                    let (along, across) = if dir.axis() == 0 { (node.x, node.y) } else { (node.y, node.x) };
                    let reach = (1.0 - across * across).max(0.0).sqrt();
                    let theta = ((reach - dir.sign() * along) / h).clamp(f64::MIN_POSITIVE, 1.0);
                    let (x, y) = match dir.axis() {
                        0 => (node.x + dir.sign() * theta * h, node.y),
                        _ => (node.x, node.y + dir.sign() * theta * h),
                    };
                    cuts.push(CutPoint { node: idx, direction: dir, theta, x, y });
                    Arm::Cut(cuts.len() - 1)
                };
            }
        }

        let kinds = (0..side * side)
            .map(|l| match lattice_to_node[l] {
                NO_NODE => NodeKind::Exterior,
                n => nodes[n].kind,
            })
            .collect();

        Ok(DiskGrid { h, half, kinds, lattice_to_node, nodes, cuts })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of lattice points per side of the bounding square.
    pub fn side(&self) -> usize {
        2 * self.half + 1
    }

    pub fn lattice_coord(&self, i: usize) -> f64 {
        (i as f64 - self.half as f64) * self.h
    }

    pub fn kind(&self, i: usize, j: usize) -> NodeKind {
        self.kinds[j * self.side() + i]
    }

    /// Inside-node index of lattice point `(i, j)`, if it is inside the disk.
    pub fn node_at(&self, i: usize, j: usize) -> Option<usize> {
        let side = self.side();
        if i >= side || j >= side {
            return None;
        }
        match self.lattice_to_node[j * side + i] {
            NO_NODE => None,
            n => Some(n),
        }
    }

    /// Inside nodes (interior and boundary-cut), in row-major lattice order.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn cuts(&self) -> &[CutPoint] {
        &self.cuts
    }

    pub fn interior_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Interior).count()
    }

    /// Node index of the neighbour two lattice steps along `dir`, or the cut on the
    /// first neighbour's arm, used for one-sided stencils.
    pub(crate) fn second_arm(&self, node: usize, dir: Direction) -> Option<(Arm, f64)> {
        match self.nodes[node].arms[dir.index()] {
            Arm::Node(next) => match self.nodes[next].arms[dir.index()] {
                Arm::Node(k) => Some((Arm::Node(k), 2.0 * self.h)),
                Arm::Cut(c) => Some((Arm::Cut(c), (1.0 + self.cuts[c].theta) * self.h)),
            },
            Arm::Cut(_) => None,
        }
    }

    /// Lattice cell containing `(x, y)`: lower-left corner indices and the local
    /// coordinates in `[0, 1]^2`.
    pub fn cell_of(&self, x: f64, y: f64) -> Option<(usize, usize, f64, f64)> {
        let locate = |c: f64| {
            let s = c / self.h + self.half as f64;
            if !(s >= 0.0 && s <= (self.side() - 1) as f64) {
                return None;
            }
            let i = (s.floor() as usize).min(self.side() - 2);
            Some((i, s - i as f64))
        };
        let (i, fx) = locate(x)?;
        let (j, fy) = locate(y)?;
        Some((i, j, fx, fy))
    }

    /// Distance from the node to the end of its arm along `dir`.
    pub fn arm_length(&self, node: usize, dir: Direction) -> f64 {
        match self.nodes[node].arms[dir.index()] {
            Arm::Node(_) => self.h,
            Arm::Cut(c) => self.cuts[c].theta * self.h,
        }
    }
}
