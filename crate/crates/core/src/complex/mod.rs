//! Weighted cell complexes and Forman's curvature/Laplacian formulas, evaluated by
//! explicit enumeration of faces, co-faces and parallel cells.
//!
//! This is the slow, general path. Every closed-form kernel in [`crate::planar`]
//! and [`crate::voxel`] is checked against it.
//!
//! Conventions:
//! - weights are `≥ 0`; vertices of image complexes carry weight 0;
//! - a quotient whose numerator is exactly 0 evaluates to 0 whatever its divisor;
//!   a non-positive divisor under a nonzero numerator is [`Error::ZeroDivisor`].

mod cubical;

pub use cubical::{build_cubical_2d, build_cubical_3d, CubicalMap2d, CubicalMap3d};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId(usize);

impl CellId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

/// A signed incidence between a cell and one of its faces or co-faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub cell: CellId,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    dim: usize,
    weight: f64,
    faces: Vec<Incidence>,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn faces(&self) -> &[Incidence] {
        &self.faces
    }
}

/// Choice of the signs `ε` in the Laplacian entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EpsilonConvention {
    /// `ε` is the product of the two incidence signs; diagonal terms are all `+`.
    #[default]
    Standard,
    /// Like `Standard` off the diagonal, but on the diagonal each co-face term is
    /// signed by the cell's own incidence sign in that co-face. On a consistently
    /// oriented image tiling the two pixels of an interior edge then enter with
    /// opposite signs, giving `□₁(e) = w(e)/w(c₁) − w(e)/w(c₂)`.
    Oriented,
}

#[derive(Debug, Default)]
pub struct ComplexBuilder {
    cells: Vec<Cell>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            cells: Vec::with_capacity(n),
        }
    }

    /// Adds a cell whose faces are already present.
    pub fn add_cell(&mut self, dim: usize, weight: f64, faces: &[(CellId, i8)]) -> Result<CellId> {
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cell weight must be finite and >= 0, got {weight}"
            )));
        }
        let mut incidences = Vec::with_capacity(faces.len());
        for &(face, sign) in faces {
            let Some(f) = self.cells.get(face.0) else {
                return Err(Error::InvalidFace {
                    dim,
                    face: face.0,
                    reason: "unknown cell",
                });
            };
            if dim == 0 || f.dim != dim - 1 {
                return Err(Error::InvalidFace {
                    dim,
                    face: face.0,
                    reason: "face dimension must be one less",
                });
            }
            if sign != 1 && sign != -1 {
                return Err(Error::InvalidFace {
                    dim,
                    face: face.0,
                    reason: "orientation must be +1 or -1",
                });
            }
            if incidences.iter().any(|i: &Incidence| i.cell == face) {
                return Err(Error::InvalidFace {
                    dim,
                    face: face.0,
                    reason: "face listed twice",
                });
            }
            incidences.push(Incidence { cell: face, sign });
        }
        self.cells.push(Cell {
            dim,
            weight,
            faces: incidences,
        });
        Ok(CellId(self.cells.len() - 1))
    }

    pub fn build(self) -> CellComplex {
        let mut cofaces = vec![Vec::new(); self.cells.len()];
        for (idx, cell) in self.cells.iter().enumerate() {
            for f in &cell.faces {
                cofaces[f.cell.0].push(Incidence {
                    cell: CellId(idx),
                    sign: f.sign,
                });
            }
        }
        CellComplex {
            cells: self.cells,
            cofaces,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CellComplex {
    cells: Vec<Cell>,
    cofaces: Vec<Vec<Incidence>>,
}

/// `num / den`, with the zero-numerator rule.
#[inline]
fn quotient(num: f64, den: f64, divisor_cell: CellId) -> Result<f64> {
    if num == 0.0 {
        Ok(0.0)
    } else if den > 0.0 {
        Ok(num / den)
    } else {
        Err(Error::ZeroDivisor {
            cell: divisor_cell.0,
            weight: den,
        })
    }
}

impl CellComplex {
    pub fn builder() -> ComplexBuilder {
        ComplexBuilder::new()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, id: CellId) -> Result<&Cell> {
        self.cells.get(id.0).ok_or(Error::InvalidCell(id.0))
    }

    /// Looks up a raw index.
    pub fn id(&self, index: usize) -> Result<CellId> {
        if index < self.cells.len() {
            Ok(CellId(index))
        } else {
            Err(Error::InvalidCell(index))
        }
    }

    pub fn ids(&self) -> impl Iterator<Item = CellId> {
        (0..self.cells.len()).map(CellId)
    }

    pub fn cells_of_dim(&self, p: usize) -> impl Iterator<Item = CellId> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.dim == p)
            .map(|(i, _)| CellId(i))
    }

    pub fn count_of_dim(&self, p: usize) -> usize {
        self.cells.iter().filter(|c| c.dim == p).count()
    }

    #[inline]
    pub fn weight(&self, id: CellId) -> f64 {
        self.cells[id.0].weight
    }

    #[inline]
    pub fn dim(&self, id: CellId) -> usize {
        self.cells[id.0].dim
    }

    pub fn faces(&self, id: CellId) -> &[Incidence] {
        &self.cells[id.0].faces
    }

    pub fn cofaces(&self, id: CellId) -> &[Incidence] {
        &self.cofaces[id.0]
    }

    /// A copy with every weight replaced by `f(id, old_weight)`.
    pub fn reweighted(&self, mut f: impl FnMut(CellId, f64) -> f64) -> Result<Self> {
        let mut cells = self.cells.clone();
        for (i, c) in cells.iter_mut().enumerate() {
            let w = f(CellId(i), c.weight);
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidParameter(format!("weight {w} for cell {i}")));
            }
            c.weight = w;
        }
        Ok(Self {
            cells,
            cofaces: self.cofaces.clone(),
        })
    }

    /// A copy with all weights multiplied by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("scale must be > 0, got {lambda}")));
        }
        self.reweighted(|_, w| w * lambda)
    }

    fn shared_cofaces(&self, a: CellId, b: CellId) -> impl Iterator<Item = (CellId, i8, i8)> + '_ {
        let cb = &self.cofaces[b.0];
        self.cofaces[a.0].iter().filter_map(move |ia| {
            cb.iter()
                .find(|ib| ib.cell == ia.cell)
                .map(|ib| (ia.cell, ia.sign, ib.sign))
        })
    }

    fn shared_faces(&self, a: CellId, b: CellId) -> impl Iterator<Item = (CellId, i8, i8)> + '_ {
        let fb = &self.cells[b.0].faces;
        self.cells[a.0].faces.iter().filter_map(move |ia| {
            fb.iter()
                .find(|ib| ib.cell == ia.cell)
                .map(|ib| (ia.cell, ia.sign, ib.sign))
        })
    }

    /// Cells `b ≠ a` of the same dimension sharing a co-face with `a` or a face
    /// with `a`, but not both. Sorted by id.
    pub fn parallel_cells(&self, a: CellId) -> Result<Vec<CellId>> {
        self.cell(a)?;
        let mut candidates: Vec<CellId> = Vec::new();
        for up in &self.cofaces[a.0] {
            candidates.extend(self.cells[up.cell.0].faces.iter().map(|i| i.cell));
        }
        for down in &self.cells[a.0].faces {
            candidates.extend(self.cofaces[down.cell.0].iter().map(|i| i.cell));
        }
        candidates.sort_unstable();
        candidates.dedup();
        candidates.retain(|&b| {
            b != a && {
                let up = self.shared_cofaces(a, b).next().is_some();
                let down = self.shared_faces(a, b).next().is_some();
                up != down
            }
        });
        Ok(candidates)
    }

    /// Forman's curvature function `ℱ_p(a)` for standard-weight complexes:
    ///
    /// ```text
    /// ℱ(α) = w(α) [ Σ_{β>α} w(α)/w(β) + Σ_{γ<α} w(γ)/w(α)
    ///              − Σ_{α'∥α} | Σ_{β>α,α'} √(w(α)w(α'))/w(β) − Σ_{γ<α,α'} w(γ)/√(w(α)w(α')) | ]
    /// ```
    pub fn curvature_function(&self, a: CellId) -> Result<f64> {
        let cell = self.cell(a)?;
        let wa = cell.weight;
        if wa == 0.0 {
            return Ok(0.0);
        }
        let mut up = 0.0;
        for beta in &self.cofaces[a.0] {
            up += quotient(wa, self.weight(beta.cell), beta.cell)?;
        }
        let mut down = 0.0;
        for gamma in &cell.faces {
            down += quotient(self.weight(gamma.cell), wa, a)?;
        }
        let mut transverse = 0.0;
        for b in self.parallel_cells(a)? {
            let root = (wa * self.weight(b)).sqrt();
            let mut via_up = 0.0;
            for (beta, _, _) in self.shared_cofaces(a, b) {
                via_up += quotient(root, self.weight(beta), beta)?;
            }
            let mut via_down = 0.0;
            for (gamma, _, _) in self.shared_faces(a, b) {
                via_down += quotient(self.weight(gamma), root, b)?;
            }
            transverse += (via_up - via_down).abs();
        }
        Ok(wa * (up + down - transverse))
    }

    /// `ℱ_p` for every cell of dimension `p`, in id order.
    pub fn curvatures(&self, p: usize) -> Result<Vec<(CellId, f64)>> {
        self.cells_of_dim(p)
            .map(|id| self.curvature_function(id).map(|f| (id, f)))
            .collect()
    }

    /// Unit-weight curvature: `#co-faces + #faces − #parallel cells`.
    pub fn combinatorial_curvature(&self, a: CellId) -> Result<i64> {
        let parallel = self.parallel_cells(a)?.len();
        Ok(self.cofaces[a.0].len() as i64 + self.cells[a.0].faces.len() as i64 - parallel as i64)
    }

    /// Entry `□_p(a1, a2)` of the weighted combinatorial Laplacian.
    pub fn laplacian_entry(&self, a1: CellId, a2: CellId, conv: EpsilonConvention) -> Result<f64> {
        let (c1, c2) = (self.cell(a1)?, self.cell(a2)?);
        if c1.dim != c2.dim {
            return Err(Error::DimensionMismatch {
                a: a1.0,
                b: a2.0,
                dim_a: c1.dim,
                dim_b: c2.dim,
            });
        }
        let root = (c1.weight * c2.weight).sqrt();
        let diagonal = a1 == a2;
        let mut total = 0.0;
        for (beta, s1, s2) in self.shared_cofaces(a1, a2) {
            let eps = match conv {
                EpsilonConvention::Oriented if diagonal => s1,
                _ => s1 * s2,
            };
            total += f64::from(eps) * quotient(root, self.weight(beta), beta)?;
        }
        for (gamma, s1, s2) in self.shared_faces(a1, a2) {
            let eps = s1 * s2;
            total += f64::from(eps) * quotient(self.weight(gamma), root, a1)?;
        }
        Ok(total)
    }

    /// Diagonal of the Bochner part, `B_p(a) = □_p(a, a) − ℱ_p(a)`.
    pub fn bochner_diagonal(&self, a: CellId, conv: EpsilonConvention) -> Result<f64> {
        Ok(self.laplacian_entry(a, a, conv)? - self.curvature_function(a)?)
    }

    /// Signed coefficient of `γ` in `∂∂σ`, for every pair with a nonzero coefficient.
    pub fn double_boundary_defects(&self) -> Vec<(CellId, CellId, i64)> {
        let mut defects = Vec::new();
        let mut acc: Vec<(CellId, i64)> = Vec::new();
        for (idx, cell) in self.cells.iter().enumerate() {
            acc.clear();
            for f in &cell.faces {
                for g in &self.cells[f.cell.0].faces {
                    let term = i64::from(f.sign) * i64::from(g.sign);
                    match acc.iter_mut().find(|(c, _)| *c == g.cell) {
                        Some((_, s)) => *s += term,
                        None => acc.push((g.cell, term)),
                    }
                }
            }
            defects.extend(acc.iter().filter(|(_, s)| *s != 0).map(|&(g, s)| (CellId(idx), g, s)));
        }
        defects
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two unit squares glued along `e0`, with explicit weights. Vertices weigh 0.
    ///
    /// ```text
    ///  v0 --t1-- v1        c1 = upper square, c2 = lower square
    ///  |   c1    |         e1 = top of c1 (opposite e0 in c1)
    ///  v2 --e0-- v3        e2 = bottom of c2 (opposite e0 in c2)
    ///  |   c2    |
    ///  v4 --e2-- v5
    /// ```
    struct Strip {
        complex: CellComplex,
        e0: CellId,
        e1: CellId,
        c1: CellId,
        c2: CellId,
    }

    fn strip(w_e0: f64, w_e1: f64, w_e2: f64, w_c1: f64, w_c2: f64) -> Strip {
        let mut b = ComplexBuilder::new();
        let v: Vec<CellId> = (0..6).map(|_| b.add_cell(0, 0.0, &[]).unwrap()).collect();
        // horizontal edges oriented left to right, vertical edges oriented upward
        let e1 = b.add_cell(1, w_e1, &[(v[0], -1), (v[1], 1)]).unwrap();
        let e0 = b.add_cell(1, w_e0, &[(v[2], -1), (v[3], 1)]).unwrap();
        let e2 = b.add_cell(1, w_e2, &[(v[4], -1), (v[5], 1)]).unwrap();
        let l1 = b.add_cell(1, 0.0, &[(v[2], -1), (v[0], 1)]).unwrap();
        let r1 = b.add_cell(1, 0.0, &[(v[3], -1), (v[1], 1)]).unwrap();
        let l2 = b.add_cell(1, 0.0, &[(v[4], -1), (v[2], 1)]).unwrap();
        let r2 = b.add_cell(1, 0.0, &[(v[5], -1), (v[3], 1)]).unwrap();
        // counterclockwise squares
        let c1 = b.add_cell(2, w_c1, &[(e0, 1), (r1, 1), (e1, -1), (l1, -1)]).unwrap();
        let c2 = b.add_cell(2, w_c2, &[(e2, 1), (r2, 1), (e0, -1), (l2, -1)]).unwrap();
        Strip {
            complex: b.build(),
            e0,
            e1,
            c1,
            c2,
        }
    }

    #[test]
    fn strip_is_a_chain_complex() {
        let s = strip(1.0, 1.0, 1.0, 1.0, 1.0);
        assert!(s.complex.double_boundary_defects().is_empty());
    }

    #[test]
    fn worked_curvature_value() {
        // 4·[(4/2 + 4/2) − (√4/2 + √4/2)] = 8
        let s = strip(4.0, 1.0, 1.0, 2.0, 2.0);
        assert_eq!(s.complex.curvature_function(s.e0).unwrap(), 8.0);
    }

    #[test]
    fn worked_laplacian_and_bochner() {
        let s = strip(4.0, 1.0, 1.0, 2.0, 4.0);
        let c = &s.complex;
        let box1 = c.laplacian_entry(s.e0, s.e0, EpsilonConvention::Oriented).unwrap();
        assert_eq!(box1, 1.0);
        assert_eq!(c.curvature_function(s.e0).unwrap(), 6.0);
        assert_eq!(c.bochner_diagonal(s.e0, EpsilonConvention::Oriented).unwrap(), -5.0);
        // standard convention adds both co-face terms
        assert_eq!(c.laplacian_entry(s.e0, s.e0, EpsilonConvention::Standard).unwrap(), 3.0);
    }

    #[test]
    fn pixel_pair_laplacian_magnitude() {
        let s = strip(6.0, 1.0, 1.0, 4.0, 9.0);
        for conv in [EpsilonConvention::Standard, EpsilonConvention::Oriented] {
            let v = s.complex.laplacian_entry(s.c1, s.c2, conv).unwrap();
            assert_eq!(v.abs(), 1.0);
        }
    }

    #[test]
    fn unrelated_cells_have_zero_entry() {
        let s = strip(1.0, 2.0, 3.0, 1.0, 1.0);
        // e1 and the bottom edge e2 share neither a vertex nor a square
        let e2 = CellId(s.e1.0 + 2);
        assert_eq!(
            s.complex
                .laplacian_entry(s.e1, e2, EpsilonConvention::Standard)
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn parallel_edges_of_middle_edge() {
        let s = strip(1.0, 1.0, 1.0, 1.0, 1.0);
        let par = s.complex.parallel_cells(s.e0).unwrap();
        // the two opposite edges; the side edges share both a vertex and a square
        assert_eq!(par.len(), 2);
        assert!(par.contains(&s.e1));
    }

    #[test]
    fn zero_weight_cell_has_zero_curvature() {
        let s = strip(0.0, 1.0, 1.0, 0.0, 1.0);
        assert_eq!(s.complex.curvature_function(s.e0).unwrap(), 0.0);
    }

    #[test]
    fn zero_divisor_is_reported() {
        let s = strip(1.0, 1.0, 1.0, 0.0, 1.0);
        match s.complex.curvature_function(s.e0) {
            Err(Error::ZeroDivisor { cell, .. }) => assert_eq!(cell, s.c1.index()),
            other => panic!("expected zero divisor, got {other:?}"),
        }
    }

    #[test]
    fn single_cell_complex() {
        let mut b = ComplexBuilder::new();
        let v = b.add_cell(0, 1.0, &[]).unwrap();
        let c = b.build();
        assert!(c.parallel_cells(v).unwrap().is_empty());
        assert_eq!(c.combinatorial_curvature(v).unwrap(), 0);
    }

    #[test]
    fn isolated_edge_counts() {
        let mut b = ComplexBuilder::new();
        let v0 = b.add_cell(0, 0.0, &[]).unwrap();
        let v1 = b.add_cell(0, 0.0, &[]).unwrap();
        let e = b.add_cell(1, 1.0, &[(v0, -1), (v1, 1)]).unwrap();
        let c = b.build();
        assert_eq!(c.combinatorial_curvature(e).unwrap(), 2);
        // the two endpoints are parallel to each other through the edge
        assert_eq!(c.parallel_cells(v0).unwrap(), vec![v1]);
    }

    #[test]
    fn builder_validates_faces() {
        let mut b = ComplexBuilder::new();
        let v = b.add_cell(0, 0.0, &[]).unwrap();
        assert!(b.add_cell(2, 1.0, &[(v, 1)]).is_err());
        assert!(b.add_cell(1, 1.0, &[(v, 2)]).is_err());
        assert!(b.add_cell(1, 1.0, &[(CellId(99), 1)]).is_err());
        assert!(b.add_cell(1, -1.0, &[(v, 1)]).is_err());
        assert!(b.add_cell(1, 1.0, &[(v, 1), (v, -1)]).is_err());
    }

    #[test]
    fn invalid_ids_and_dimension_mismatch() {
        let s = strip(1.0, 1.0, 1.0, 1.0, 1.0);
        assert!(matches!(
            s.complex.parallel_cells(CellId(1000)),
            Err(Error::InvalidCell(1000))
        ));
        assert!(matches!(
            s.complex.laplacian_entry(s.e0, s.c1, EpsilonConvention::Standard),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn curvatures_in_one_pass() {
        let s = strip(4.0, 1.0, 1.0, 2.0, 2.0);
        let all = s.complex.curvatures(1).unwrap();
        assert_eq!(all.len(), 7);
        assert!(all.contains(&(s.e0, 8.0)));
        let _ = s.c2;
    }
}
