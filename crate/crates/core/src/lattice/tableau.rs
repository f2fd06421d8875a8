use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{BitMatrix, Defect, DefectKind, FaceType, Lattice, LatticeError, Pauli, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StringKind {
    #[serde(rename = "Z_type")]
    Z,
    #[serde(rename = "X_type")]
    X,
}

impl StringKind {
    fn pauli(self) -> Pauli {
        match self {
            StringKind::Z => Pauli::Z,
            StringKind::X => Pauli::X,
        }
    }

    fn toggled(self) -> Self {
        match self {
            StringKind::Z => StringKind::X,
            StringKind::X => StringKind::Z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Measurement {
    /// `+1` or `−1`
    pub outcome: i8,
    pub deterministic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeSummary {
    pub n_qubits: usize,
    pub n_generators: usize,
    pub rank: usize,
    pub logical_count: Option<usize>,
    pub commutation_ok: bool,
}

#[derive(Debug, Clone)]
pub struct StabilizerTableau {
    lattice: Lattice,
    generators: Vec<PauliString>,
    /// face each generator was built from, while it is still that face
    origins: Vec<Option<(usize, usize)>>,
    defects: Vec<Defect>,
}

impl StabilizerTableau {
    /// All `A_f` and `B_f` of an `L × L` torus.
    pub fn build_torus(side: usize) -> Result<Self, LatticeError> {
        let lattice = Lattice::new(side)?;
        let mut generators = Vec::with_capacity(lattice.n_faces());
        let mut origins = Vec::with_capacity(lattice.n_faces());
        for r in 0..side {
            for c in 0..side {
                generators.push(lattice.face_operator(r, c));
                origins.push(Some((r, c)));
            }
        }
        Ok(StabilizerTableau {
            lattice,
            generators,
            origins,
            defects: Vec::new(),
        })
    }

    /// A tableau with arbitrary generators; commutation is checked lazily.
    pub fn from_generators(
        lattice: Lattice,
        generators: Vec<PauliString>,
    ) -> Result<Self, LatticeError> {
        if let Some(g) = generators
            .iter()
            .find(|g| g.n_qubits() != lattice.n_qubits())
        {
            return Err(LatticeError::BadObservable(format!(
                "generator acts on {} qubits, lattice has {}",
                g.n_qubits(),
                lattice.n_qubits()
            )));
        }
        let origins = vec![None; generators.len()];
        Ok(StabilizerTableau {
            lattice,
            generators,
            origins,
            defects: Vec::new(),
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn defects(&self) -> &[Defect] {
        &self.defects
    }

    pub fn n_qubits(&self) -> usize {
        self.lattice.n_qubits()
    }

    pub fn rank(&self) -> usize {
        let rows = self.generators.iter().map(|g| g.symplectic_row());
        BitMatrix::from_word_rows(2 * word_cols(self.n_qubits()), rows).rank()
    }

    /// First anticommuting generator pair, found through a qubit → generator
    /// incidence map so only overlapping pairs are compared.
    pub fn anticommuting_pair(&self) -> Option<(usize, usize)> {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.n_qubits()];
        let supports: Vec<Vec<usize>> = self.generators.iter().map(|g| g.support()).collect();
        for (i, s) in supports.iter().enumerate() {
            for &q in s {
                incident[q].push(i);
            }
        }
        let mut seen = vec![usize::MAX; self.generators.len()];
        for (i, s) in supports.iter().enumerate() {
            for &q in s {
                for &j in &incident[q] {
                    if j <= i || seen[j] == i {
                        continue;
                    }
                    seen[j] = i;
                    if !self.generators[i].commutes_with(&self.generators[j]) {
                        return Some((i, j));
                    }
                }
            }
        }
        None
    }

    pub fn all_commute(&self) -> bool {
        self.anticommuting_pair().is_none()
    }

    /// `n − rank` of a commuting generator set.
    pub fn count_logical(&self) -> Result<usize, LatticeError> {
        if let Some((a, b)) = self.anticommuting_pair() {
            return Err(LatticeError::InconsistentTableau(a, b));
        }
        Ok(self.n_qubits() - self.rank())
    }

    pub fn summary(&self) -> LatticeSummary {
        let commutation_ok = self.all_commute();
        let rank = self.rank();
        LatticeSummary {
            n_qubits: self.n_qubits(),
            n_generators: self.generators.len(),
            rank,
            logical_count: commutation_ok.then(|| self.n_qubits() - rank),
            commutation_ok,
        }
    }

    pub fn commutes_with_all(&self, p: &PauliString) -> bool {
        self.generators.iter().all(|g| g.commutes_with(p))
    }

    /// Generator indices whose product equals `p` up to phase, if any.
    pub fn decompose(&self, p: &PauliString) -> Option<Vec<usize>> {
        let m = self.generators.len();
        let sym = 2 * word_cols(self.n_qubits());
        let track = m.div_ceil(64);
        let width = sym + track;
        let mut rows: Vec<Vec<u64>> = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut r = g.symplectic_row();
                r.resize(width, 0);
                r[sym + i / 64] |= 1 << (i % 64);
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut next = 0;
        for w in 0..sym {
            for b in 0..64 {
                let mask = 1u64 << b;
                let Some(p) = (next..m).find(|&r| rows[r][w] & mask != 0) else {
                    continue;
                };
                rows.swap(next, p);
                for r in next + 1..m {
                    if rows[r][w] & mask != 0 {
                        let (head, tail) = rows.split_at_mut(r);
                        for (x, y) in tail[0][w..].iter_mut().zip(&head[next][w..]) {
                            *x ^= *y;
                        }
                    }
                }
                pivots.push((w, mask, next));
                next += 1;
            }
        }
        let mut target = p.symplectic_row();
        target.resize(width, 0);
        for &(w, mask, r) in &pivots {
            if target[w] & mask != 0 {
                for (x, y) in target[w..].iter_mut().zip(&rows[r][w..]) {
                    *x ^= *y;
                }
            }
        }
        if target[..sym].iter().any(|&w| w != 0) {
            return None;
        }
        Some(
            (0..m)
                .filter(|&i| (target[sym + i / 64] >> (i % 64)) & 1 == 1)
                .collect(),
        )
    }

    /// Measures the Hermitian Pauli `p` and updates the stabilizer group.
    pub fn measure<R: Rng + ?Sized>(
        &mut self,
        p: &PauliString,
        rng: &mut R,
    ) -> Result<Measurement, LatticeError> {
        if p.n_qubits() != self.n_qubits() {
            return Err(LatticeError::BadObservable(format!(
                "observable acts on {} qubits, lattice has {}",
                p.n_qubits(),
                self.n_qubits()
            )));
        }
        if !p.is_hermitian() {
            return Err(LatticeError::BadObservable(format!("{p} is not Hermitian")));
        }
        if p.is_identity() {
            return Err(LatticeError::BadObservable("identity observable".into()));
        }
        let anti: Vec<usize> = (0..self.generators.len())
            .filter(|&i| !self.generators[i].commutes_with(p))
            .collect();
        if let Some((&first, rest)) = anti.split_first() {
            for &j in rest {
                self.generators[j] = self.generators[j].mul(&self.generators[first]);
                self.origins[j] = None;
            }
            let outcome = random_sign(rng);
            self.generators[first] = signed(p, outcome);
            self.origins[first] = None;
            return Ok(Measurement {
                outcome,
                deterministic: false,
            });
        }
        if let Some(combo) = self.decompose(p) {
            let mut product = PauliString::identity(self.n_qubits());
            for i in combo {
                product = product.mul(&self.generators[i]);
            }
            let rel = (p.phase() + 4 - product.phase()) % 4;
            return Ok(Measurement {
                outcome: if rel == 0 { 1 } else { -1 },
                deterministic: true,
            });
        }
        let outcome = random_sign(rng);
        self.generators.push(signed(p, outcome));
        self.origins.push(None);
        Ok(Measurement {
            outcome,
            deterministic: false,
        })
    }

    fn remove_face(&mut self, face: (usize, usize)) -> Result<(), LatticeError> {
        let Some(i) = self.origins.iter().position(|o| *o == Some(face)) else {
            return Err(LatticeError::BadDefect(format!(
                "face ({}, {}) no longer carries its stabilizer",
                face.0, face.1
            )));
        };
        self.generators.remove(i);
        self.origins.remove(i);
        Ok(())
    }

    fn vertex_op(&self, sites: &[((usize, usize), Pauli)]) -> PauliString {
        let mut s = PauliString::identity(self.n_qubits());
        for &((r, c), p) in sites {
            s.toggle(self.lattice.qubit(r, c), p);
        }
        s
    }

    /// Vertices all four of whose faces lie in `region`.
    fn interior_qubits(&self, region: &[(usize, usize)]) -> Vec<usize> {
        let mut qs: Vec<usize> = region
            .iter()
            .flat_map(|&(r, c)| self.lattice.face_qubits(r, c))
            .filter(|&q| self.lattice.faces_of(q).iter().all(|f| region.contains(f)))
            .collect();
        qs.sort_unstable();
        qs.dedup();
        qs
    }

    /// Measures out the faces of `defect` and installs its boundary generators.
    pub fn create_puncture<R: Rng + ?Sized>(
        &mut self,
        defect: &Defect,
        rng: &mut R,
    ) -> Result<(), LatticeError> {
        let side = self.lattice.side();
        if defect.region.is_empty() {
            return Err(LatticeError::BadDefect("empty region".into()));
        }
        for (i, &(r, c)) in defect.region.iter().enumerate() {
            if r >= side || c >= side {
                return Err(LatticeError::BadDefect(format!(
                    "face ({r}, {c}) is off the lattice"
                )));
            }
            if defect.region[..i].contains(&(r, c)) {
                return Err(LatticeError::BadDefect(format!(
                    "face ({r}, {c}) listed twice"
                )));
            }
            if self.defects.iter().any(|d| d.region.contains(&(r, c))) {
                return Err(LatticeError::RegionConflict(r, c));
            }
        }
        let mut added: Vec<PauliString> = Vec::new();
        match defect.kind {
            DefectKind::Solid | DefectKind::Dashed => {
                if !defect.twist_corners.is_empty() {
                    return Err(LatticeError::BadDefect(
                        "only mixed punctures have twist corners".into(),
                    ));
                }
                let (removed, interior) = match defect.kind {
                    DefectKind::Solid => (FaceType::X, Pauli::Z),
                    _ => (FaceType::Z, Pauli::X),
                };
                for &(r, c) in &defect.region {
                    if self.lattice.face_type(r, c) == removed {
                        self.remove_face((r, c))?;
                    }
                }
                for q in self.interior_qubits(&defect.region) {
                    added.push(PauliString::from_support(self.n_qubits(), &[q], interior));
                }
            }
            DefectKind::Mixed => {
                let (r0, c0, k) = defect.mixed_geometry(&self.lattice)?;
                let height = 2 * k + 1;
                for &f in &defect.region {
                    self.remove_face(f)?;
                }
                // left column truncated to columns c0..=c0+1 without the interior
                // vertices, right column likewise on c0+1..=c0+2
                let left = |j: usize| -> Vec<((usize, usize), Pauli)> {
                    let mut v = vec![((r0 + j, c0), Pauli::Z), ((r0 + j + 1, c0), Pauli::Z)];
                    if j == 0 {
                        v.push(((r0, c0 + 1), Pauli::Z));
                    }
                    if j == height - 1 {
                        v.push(((r0 + height, c0 + 1), Pauli::Z));
                    }
                    v
                };
                let right = |j: usize| -> Vec<((usize, usize), Pauli)> {
                    let mut v = vec![
                        ((r0 + j, c0 + 2), Pauli::X),
                        ((r0 + j + 1, c0 + 2), Pauli::X),
                    ];
                    if j == 0 {
                        v.push(((r0, c0 + 1), Pauli::X));
                    }
                    if j == height - 1 {
                        v.push(((r0 + height, c0 + 1), Pauli::X));
                    }
                    v
                };
                for j in (0..height).step_by(2) {
                    let mut sites = left(j);
                    if j == 0 || j == height - 1 {
                        // corner: the two halves meet at a Y
                        sites.extend(right(j));
                        added.push(self.vertex_op(&sites));
                    } else {
                        added.push(self.vertex_op(&sites));
                        added.push(self.vertex_op(&right(j)));
                    }
                }
                for r in r0 + 1..r0 + height {
                    let q = self.lattice.qubit(r, c0 + 1);
                    added.push(PauliString::from_support(self.n_qubits(), &[q], Pauli::Z));
                }
            }
        }
        for g in &added {
            self.measure(g, rng)?;
        }
        if let Some((a, b)) = self.anticommuting_pair() {
            return Err(LatticeError::Internal(format!(
                "generators {a} and {b} anticommute after creating the puncture"
            )));
        }
        let mut stored = defect.clone();
        if stored.kind == DefectKind::Mixed && stored.twist_corners.is_empty() {
            let (r0, c0, k) = defect.mixed_geometry(&self.lattice)?;
            stored.twist_corners = Defect::mixed(r0, c0, k).twist_corners;
        }
        self.defects.push(stored);
        Ok(())
    }

    /// Generators carrying at least one `Y`.
    pub fn y_generators(&self) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&i| self.generators[i].has_y())
            .collect()
    }

    /// String between the first two punctures with matching uniform
    /// boundaries and a loop around the first of them, as `(X_L, Z_L)`.
    pub fn logical_pair(&self) -> Result<(PauliString, PauliString), LatticeError> {
        for kind in [DefectKind::Solid, DefectKind::Dashed] {
            let ds: Vec<&Defect> = self.defects.iter().filter(|d| d.kind == kind).collect();
            if ds.len() < 2 {
                continue;
            }
            let (removed, string_kind) = match kind {
                DefectKind::Solid => (FaceType::X, StringKind::Z),
                _ => (FaceType::Z, StringKind::X),
            };
            let faces = |d: &Defect| -> Vec<(usize, usize)> {
                d.region
                    .iter()
                    .copied()
                    .filter(|&(r, c)| self.lattice.face_type(r, c) == removed)
                    .collect()
            };
            let (fa, fb) = (faces(ds[0]), faces(ds[1]));
            if fa.is_empty() || fb.is_empty() {
                continue;
            }
            let dist = |a: (usize, usize), b: (usize, usize)| {
                self.lattice
                    .wrap_distance(a.0, b.0)
                    .max(self.lattice.wrap_distance(a.1, b.1))
            };
            let (from, to) = fa
                .iter()
                .flat_map(|&a| fb.iter().map(move |&b| (a, b)))
                .min_by_key(|&(a, b)| (dist(a, b), a, b))
                .expect("both face sets are non-empty");
            let path = diagonal_chain(&self.lattice, from, to)?;
            let string = string_operator(&self.lattice, &path, string_kind, &[])?;
            let mut ring = PauliString::identity(self.n_qubits());
            for &(r, c) in &fa {
                ring = ring.mul(&self.lattice.face_operator(r, c));
            }
            let ring = ring.with_phase(0);
            if !self.commutes_with_all(&string) || !self.commutes_with_all(&ring) {
                return Err(LatticeError::Internal(
                    "logical operator fails to commute with the stabilizers".into(),
                ));
            }
            if string.commutes_with(&ring) {
                return Err(LatticeError::Internal(
                    "string and loop commute; punctures are not separated".into(),
                ));
            }
            return Ok(match string_kind {
                StringKind::Z => (ring, string),
                StringKind::X => (string, ring),
            });
        }
        Err(LatticeError::NothingEncoded)
    }

    /// Ring around a mixed puncture starting at its top-left vertex, with the
    /// wall crossings at the two twist corners: `(path, crossings)`.
    pub fn mixed_ring(&self, defect: &Defect) -> Result<(Vec<usize>, Vec<usize>), LatticeError> {
        if defect.kind != DefectKind::Mixed {
            return Err(LatticeError::BadDefect("not a mixed puncture".into()));
        }
        let (r0, c0, k) = defect.mixed_geometry(&self.lattice)?;
        let h = 2 * k + 1;
        let q = |r, c| self.lattice.qubit(r, c);
        let mut path = vec![q(r0, c0), q(r0, c0 + 1)];
        path.extend((r0..=r0 + h).map(|r| q(r, c0 + 2)));
        path.push(q(r0 + h, c0 + 1));
        path.extend((r0 + 1..=r0 + h).rev().map(|r| q(r, c0)));
        Ok((path, vec![1, h + 3]))
    }
}

fn word_cols(n: usize) -> usize {
    n.div_ceil(64) * 64
}

fn random_sign<R: Rng + ?Sized>(rng: &mut R) -> i8 {
    if rng.gen::<bool>() {
        1
    } else {
        -1
    }
}

fn signed(p: &PauliString, outcome: i8) -> PauliString {
    if outcome < 0 {
        p.clone().negated()
    } else {
        p.clone()
    }
}

/// Builds a Hermitian string operator along `path`.
///
/// Each qubit gets the current type; a qubit whose position is listed in
/// `crossings` gets `Y` and the type switches `Z ↔ X` after it.
pub fn string_operator(
    lattice: &Lattice,
    path: &[usize],
    kind: StringKind,
    crossings: &[usize],
) -> Result<PauliString, LatticeError> {
    let n = lattice.n_qubits();
    if let Some(&q) = path.iter().find(|&&q| q >= n) {
        return Err(LatticeError::InvalidPath(format!(
            "qubit {q} is off the lattice"
        )));
    }
    for w in path.windows(2) {
        if !lattice.share_face(w[0], w[1]) {
            return Err(LatticeError::InvalidPath(format!(
                "qubits {:?} and {:?} share no face",
                lattice.coords(w[0]),
                lattice.coords(w[1])
            )));
        }
    }
    if let Some(&c) = crossings.iter().find(|&&c| c >= path.len()) {
        return Err(LatticeError::InvalidPath(format!(
            "crossing position {c} is past the end of a {}-qubit path",
            path.len()
        )));
    }
    let mut s = PauliString::identity(n);
    let mut current = kind;
    for (pos, &q) in path.iter().enumerate() {
        if crossings.contains(&pos) {
            s.toggle(q, Pauli::Y);
            current = current.toggled();
        } else {
            s.toggle(q, current.pauli());
        }
    }
    Ok(s)
}

/// Vertices shared by consecutive faces on a diagonal walk between two
/// same-colored faces.
pub fn diagonal_chain(
    lattice: &Lattice,
    from: (usize, usize),
    to: (usize, usize),
) -> Result<Vec<usize>, LatticeError> {
    let side = lattice.side();
    if from.0 >= side || from.1 >= side || to.0 >= side || to.1 >= side {
        return Err(LatticeError::InvalidPath("face is off the lattice".into()));
    }
    if lattice.face_type(from.0, from.1) != lattice.face_type(to.0, to.1) {
        return Err(LatticeError::InvalidPath(
            "diagonal chains join faces of one color".into(),
        ));
    }
    let dr = lattice.signed_offset(from.0, to.0);
    let dc = lattice.signed_offset(from.1, to.1);
    let steps = dr.unsigned_abs().max(dc.unsigned_abs());
    // the minor axis moves toward its target, then zigzags
    let moves = |major: isize, minor: isize| -> Vec<(isize, isize)> {
        let s = major.signum();
        let m = minor.signum();
        let mut out = Vec::new();
        for i in 0..major.unsigned_abs() {
            let sm = if i < minor.unsigned_abs() {
                m
            } else if (i - minor.unsigned_abs()) % 2 == 0 {
                1
            } else {
                -1
            };
            out.push((s, sm));
        }
        out
    };
    let steps_rc: Vec<(isize, isize)> = if dr.unsigned_abs() >= dc.unsigned_abs() {
        moves(dr, dc)
    } else {
        moves(dc, dr).into_iter().map(|(a, b)| (b, a)).collect()
    };
    debug_assert_eq!(steps_rc.len(), steps);
    let l = side as isize;
    let (mut r, mut c) = (from.0 as isize, from.1 as isize);
    let mut path = Vec::with_capacity(steps);
    for (sr, sc) in steps_rc {
        let vr = r + if sr > 0 { 1 } else { 0 };
        let vc = c + if sc > 0 { 1 } else { 0 };
        path.push(lattice.qubit(vr.rem_euclid(l) as usize, vc.rem_euclid(l) as usize));
        r += sr;
        c += sc;
    }
    debug_assert_eq!((r.rem_euclid(l) as usize, c.rem_euclid(l) as usize), to);
    Ok(path)
}

/// Torus with the given defects created in order, seeded for the outcomes of
/// the boundary measurements.
pub fn lattice_demo(
    side: usize,
    defects: &[Defect],
    seed: u64,
) -> Result<LatticeSummary, LatticeError> {
    let mut t = StabilizerTableau::build_torus(side)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for d in defects {
        t.create_puncture(d, &mut rng)?;
    }
    Ok(t.summary())
}
