//! Toric code with one qubit per vertex of an `L × L` torus.
//!
//! Face `(r, c)` is the plaquette whose top-left vertex is `(r, c)`; its
//! boundary `∂f` is the four vertices `(r..=r+1, c..=c+1)` taken mod `L`.
//! Faces are checkerboard colored: `r + c` even carries `A_f = ∏ X_j`, odd
//! carries `B_f = ∏ Z_j`.

mod gf2;
mod pauli;
mod tableau;

pub use gf2::BitMatrix;
pub use pauli::{Pauli, PauliString};
pub use tableau::{
    diagonal_chain, lattice_demo, string_operator, LatticeSummary, Measurement, StabilizerTableau,
    StringKind,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("face ({0}, {1}) already belongs to another defect")]
    RegionConflict(usize, usize),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("generators {0} and {1} anticommute")]
    InconsistentTableau(usize, usize),
    #[error("no puncture pair with matching boundaries encodes a qubit")]
    NothingEncoded,
    #[error("invalid defect: {0}")]
    BadDefect(String),
    #[error("invalid observable: {0}")]
    BadObservable(String),
    #[error("construction produced an inconsistent operator: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FaceType {
    /// `A_f`
    X,
    /// `B_f`
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Lattice {
    side: usize,
}

impl Lattice {
    pub fn new(side: usize) -> Result<Self, LatticeError> {
        if side < 4 || side % 2 != 0 {
            return Err(LatticeError::InvalidLattice(format!(
                "side length must be even and at least 4, got {side}"
            )));
        }
        Ok(Lattice { side })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn n_qubits(&self) -> usize {
        self.side * self.side
    }

    pub fn n_faces(&self) -> usize {
        self.side * self.side
    }

    /// Vertex index with both coordinates wrapped onto the torus.
    pub fn qubit(&self, row: usize, col: usize) -> usize {
        (row % self.side) * self.side + col % self.side
    }

    pub fn coords(&self, q: usize) -> (usize, usize) {
        (q / self.side, q % self.side)
    }

    pub fn face_type(&self, row: usize, col: usize) -> FaceType {
        if (row + col) % 2 == 0 {
            FaceType::X
        } else {
            FaceType::Z
        }
    }

    pub fn face_qubits(&self, row: usize, col: usize) -> [usize; 4] {
        [
            self.qubit(row, col),
            self.qubit(row, col + 1),
            self.qubit(row + 1, col),
            self.qubit(row + 1, col + 1),
        ]
    }

    pub fn face_operator(&self, row: usize, col: usize) -> PauliString {
        let p = match self.face_type(row, col) {
            FaceType::X => Pauli::X,
            FaceType::Z => Pauli::Z,
        };
        PauliString::from_support(self.n_qubits(), &self.face_qubits(row, col), p)
    }

    /// Faces containing vertex `q`: `(r−1, c−1), (r−1, c), (r, c−1), (r, c)`.
    pub fn faces_of(&self, q: usize) -> [(usize, usize); 4] {
        let (r, c) = self.coords(q);
        let l = self.side;
        let (ru, cl) = ((r + l - 1) % l, (c + l - 1) % l);
        [(ru, cl), (ru, c), (r, cl), (r, c)]
    }

    /// Distinct vertices that lie on a common face.
    pub fn share_face(&self, a: usize, b: usize) -> bool {
        if a == b {
            return false;
        }
        let (ra, ca) = self.coords(a);
        let (rb, cb) = self.coords(b);
        self.wrap_distance(ra, rb) <= 1 && self.wrap_distance(ca, cb) <= 1
    }

    pub(crate) fn wrap_distance(&self, a: usize, b: usize) -> usize {
        let d = a.abs_diff(b);
        d.min(self.side - d)
    }

    /// Shortest signed displacement `to − from` on the cycle.
    pub(crate) fn signed_offset(&self, from: usize, to: usize) -> isize {
        let l = self.side as isize;
        let mut d = (to as isize - from as isize).rem_euclid(l);
        if d > l / 2 {
            d -= l;
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DefectKind {
    /// Condenses `e`; the `A_f` faces inside are removed.
    #[serde(rename = "puncture_solid")]
    Solid,
    /// Condenses `m`; the `B_f` faces inside are removed.
    #[serde(rename = "puncture_dashed")]
    Dashed,
    /// Solid left half and dashed right half, joined at two twist corners.
    #[serde(rename = "puncture_mixed")]
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryType {
    Solid,
    Dashed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Defect {
    pub kind: DefectKind,
    /// Faces as `[row, col]`.
    pub region: Vec<(usize, usize)>,
    /// Twist-corner vertices as `[row, col]`; only mixed defects have them.
    #[serde(default, rename = "corners")]
    pub twist_corners: Vec<(usize, usize)>,
}

impl Defect {
    pub fn solid(region: Vec<(usize, usize)>) -> Self {
        Defect {
            kind: DefectKind::Solid,
            region,
            twist_corners: Vec::new(),
        }
    }

    pub fn dashed(region: Vec<(usize, usize)>) -> Self {
        Defect {
            kind: DefectKind::Dashed,
            region,
            twist_corners: Vec::new(),
        }
    }

    /// Block of `2k + 1` rows by 2 columns of faces with top-left face
    /// `(row, col)`, which must be a `B_f` face.
    pub fn mixed(row: usize, col: usize, k: usize) -> Self {
        let height = 2 * k + 1;
        let mut region = Vec::with_capacity(2 * height);
        for j in 0..height {
            region.push((row + j, col));
            region.push((row + j, col + 1));
        }
        Defect {
            kind: DefectKind::Mixed,
            region,
            twist_corners: vec![(row, col + 1), (row + height, col + 1)],
        }
    }

    /// Boundary type of a face in the region.
    pub fn boundary(&self, face: (usize, usize)) -> Option<BoundaryType> {
        if !self.region.contains(&face) {
            return None;
        }
        Some(match self.kind {
            DefectKind::Solid => BoundaryType::Solid,
            DefectKind::Dashed => BoundaryType::Dashed,
            DefectKind::Mixed => {
                let min_col = self.region.iter().map(|f| f.1).min().unwrap_or(0);
                if face.1 == min_col {
                    BoundaryType::Solid
                } else {
                    BoundaryType::Dashed
                }
            }
        })
    }

    /// `(row, col, k)` of a well-formed mixed block.
    pub(crate) fn mixed_geometry(
        &self,
        lattice: &Lattice,
    ) -> Result<(usize, usize, usize), LatticeError> {
        let bad = |m: String| Err(LatticeError::BadDefect(m));
        let n = self.region.len();
        if n < 6 || n % 4 != 2 {
            return bad(format!(
                "a mixed puncture needs a (2k+1) x 2 face block with k >= 1, got {n} faces"
            ));
        }
        let (r0, c0) = *self.region.iter().min().expect("non-empty");
        let k = (n / 2 - 1) / 2;
        let expected = Defect::mixed(r0, c0, k);
        let mut got = self.region.clone();
        got.sort_unstable();
        let mut want = expected.region.clone();
        want.sort_unstable();
        if got != want {
            return bad("mixed region is not a contiguous (2k+1) x 2 block".into());
        }
        if lattice.face_type(r0, c0) != FaceType::Z {
            return bad(format!(
                "top-left face ({r0}, {c0}) of a mixed block must be a Z face"
            ));
        }
        if r0 + 2 * k + 1 > lattice.side() || c0 + 2 > lattice.side() || 2 * k + 2 >= lattice.side()
        {
            return bad("mixed block does not fit on the lattice".into());
        }
        if !self.twist_corners.is_empty() {
            let mut corners = self.twist_corners.clone();
            corners.sort_unstable();
            if corners != expected.twist_corners {
                return bad(format!(
                    "twist corners must be {:?}, got {:?}",
                    expected.twist_corners, self.twist_corners
                ));
            }
        }
        Ok((r0, c0, k))
    }
}
