//! Cutting the polygon along a pairwise non-crossing set of n-diagonals.

use crate::diagset::DiagSet;
use crate::error::{Error, Result};
use crate::polygon::{Diagonal, Polygon, PolygonSpec};

/// One piece of a cut polygon. Vertices are ambient labels in clockwise
/// order starting from the smallest, which for a convex piece is ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    spec: PolygonSpec,
    vertices: Vec<u32>,
}

impl Cell {
    pub fn spec(&self) -> PolygonSpec {
        self.spec
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Cyclic position of an ambient vertex, if it belongs to the cell.
    pub fn position(&self, v: u32) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn vertex_at(&self, position: usize) -> u32 {
        self.vertices[position % self.vertices.len()]
    }

    pub fn contains_endpoints(&self, d: Diagonal) -> bool {
        self.position(d.a()).is_some() && self.position(d.b()).is_some()
    }

    /// True when both endpoints are cyclically adjacent in the cell.
    pub fn is_edge(&self, d: Diagonal) -> bool {
        match (self.position(d.a()), self.position(d.b())) {
            (Some(p), Some(q)) => {
                let gap = q.abs_diff(p);
                gap == 1 || gap == self.len() - 1
            }
            _ => false,
        }
    }

    /// `d` runs through the interior of this cell.
    pub fn contains_diagonal(&self, d: Diagonal) -> bool {
        self.contains_endpoints(d) && !self.is_edge(d)
    }

    /// Too small to host any n-diagonal of its own.
    pub fn is_trivial(&self) -> bool {
        self.len() < self.spec.n() as usize + 3
    }

    /// The polygon model of this cell after relabeling its vertices
    /// `1..=len` in cyclic order; `None` for trivial cells.
    pub fn cell_spec(&self) -> Option<PolygonSpec> {
        let n = self.spec.n() as usize;
        if self.is_trivial() || !(self.len() - 2).is_multiple_of(n) {
            return None;
        }
        let m = (self.len() - 2) / n - 1;
        PolygonSpec::new(self.spec.n(), m as u32).ok()
    }

    /// Ambient diagonal to its cell-local relabeling.
    pub fn to_local(&self, d: Diagonal) -> Option<(u32, u32)> {
        let p = self.position(d.a())? as u32 + 1;
        let q = self.position(d.b())? as u32 + 1;
        Some((p, q))
    }

    /// Cell-local labels back to the ambient diagonal.
    pub fn to_ambient(&self, local: Diagonal) -> Diagonal {
        Diagonal::ordered(
            self.vertices[local.a() as usize - 1],
            self.vertices[local.b() as usize - 1],
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellDecomposition {
    spec: PolygonSpec,
    cut: DiagSet,
    cells: Vec<Cell>,
}

impl CellDecomposition {
    pub fn spec(&self) -> PolygonSpec {
        self.spec
    }

    pub fn cut(&self) -> &DiagSet {
        &self.cut
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// The cell whose interior contains `d`, if any.
    pub fn cell_of(&self, d: Diagonal) -> Option<&Cell> {
        self.cells.iter().find(|c| c.contains_diagonal(d))
    }
}

impl Polygon {
    /// First crossing pair in rank order, if any.
    pub fn find_crossing_pair(&self, set: &DiagSet) -> Option<(Diagonal, Diagonal)> {
        for u in set {
            if let Some(v) = set.difference(self.non_crossing_mask(u)).iter().next() {
                let (x, y) = if u < v { (u, v) } else { (v, u) };
                return Some((self.diagonals()[x], self.diagonals()[y]));
            }
        }
        None
    }

    pub fn is_non_crossing(&self, set: &DiagSet) -> bool {
        self.find_crossing_pair(set).is_none()
    }

    /// Cut the polygon along `cut`, which must be pairwise non-crossing.
    /// Yields `|cut| + 1` cells sorted by their vertex lists.
    pub fn cell_decomposition(&self, cut: &DiagSet) -> Result<CellDecomposition> {
        if let Some((u, v)) = self.find_crossing_pair(cut) {
            return Err(Error::CrossingCutSet(u, v));
        }
        let spec = self.spec();
        let mut pieces: Vec<Vec<u32>> = vec![(1..=spec.vertices()).collect()];
        for d in self.diagonals_of(cut) {
            let (idx, ia, ib) = pieces
                .iter()
                .enumerate()
                .find_map(|(i, c)| {
                    let ia = c.binary_search(&d.a()).ok()?;
                    let ib = c.binary_search(&d.b()).ok()?;
                    let gap = ib - ia;
                    (gap != 1 && gap != c.len() - 1).then_some((i, ia, ib))
                })
                .expect("a non-crossing cut diagonal lies inside exactly one piece");
            let piece = std::mem::take(&mut pieces[idx]);
            let inner = piece[ia..=ib].to_vec();
            let mut outer = piece[..=ia].to_vec();
            outer.extend_from_slice(&piece[ib..]);
            pieces[idx] = inner;
            pieces.push(outer);
        }
        let mut cells: Vec<Cell> = pieces.into_iter().map(|vertices| Cell { spec, vertices }).collect();
        cells.sort();
        Ok(CellDecomposition {
            spec,
            cut: cut.clone(),
            cells,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(n: u32, m: u32) -> Polygon {
        Polygon::new(PolygonSpec::new(n, m).unwrap())
    }

    fn vertex_lists(dec: &CellDecomposition) -> Vec<Vec<u32>> {
        dec.cells().iter().map(|c| c.vertices().to_vec()).collect()
    }

    #[test]
    fn single_cut() {
        let p = poly(2, 3);
        let dec = p.cell_decomposition(&p.parse_set("{(1,6)}").unwrap()).unwrap();
        assert_eq!(
            vertex_lists(&dec),
            vec![vec![1, 2, 3, 4, 5, 6], vec![1, 6, 7, 8, 9, 10]]
        );
    }

    #[test]
    fn empty_cut_is_whole_polygon() {
        let p = poly(2, 3);
        let dec = p.cell_decomposition(&p.empty_set()).unwrap();
        assert_eq!(vertex_lists(&dec), vec![(1..=10).collect::<Vec<_>>()]);
    }

    #[test]
    fn fan_cut() {
        let p = poly(2, 3);
        let dec = p.cell_decomposition(&p.parse_set("{(1,4),(1,6)}").unwrap()).unwrap();
        assert_eq!(
            vertex_lists(&dec),
            vec![vec![1, 2, 3, 4], vec![1, 4, 5, 6], vec![1, 6, 7, 8, 9, 10]]
        );
        assert!(dec.cells()[0].is_trivial());
        assert_eq!(dec.cells()[0].cell_spec(), None);
        assert_eq!(dec.cells()[2].cell_spec(), Some(PolygonSpec::new(2, 1).unwrap()));
    }

    #[test]
    fn crossing_cut_rejected() {
        let p = poly(2, 3);
        let err = p
            .cell_decomposition(&p.parse_set("{(1,4),(2,5)}").unwrap())
            .unwrap_err();
        assert!(matches!(err, Error::CrossingCutSet(..)));
    }

    #[test]
    fn cell_specs() {
        let p = poly(1, 3);
        let dec = p.cell_decomposition(&p.parse_set("{(1,3),(1,4)}").unwrap()).unwrap();
        let squares: Vec<_> = dec.cells().iter().filter(|c| c.len() == 4).collect();
        assert_eq!(squares.len(), 1);
        assert_eq!(squares[0].cell_spec(), Some(PolygonSpec::new(1, 1).unwrap()));
        // an (nk+2)-gon models A_{k-1}
        let whole = poly(3, 4)
            .cell_decomposition(&DiagSet::empty(PolygonSpec::new(3, 4).unwrap()))
            .unwrap();
        assert_eq!(whole.cells()[0].cell_spec(), Some(PolygonSpec::new(3, 4).unwrap()));
    }

    /// Every non-crossing cut of every small polygon, via the pairwise
    /// non-crossing subsets reached by depth-first extension.
    fn non_crossing_sets(p: &Polygon) -> Vec<DiagSet> {
        let mut out = Vec::new();
        let mut stack = vec![(0usize, p.empty_set())];
        while let Some((next, set)) = stack.pop() {
            out.push(set.clone());
            for r in next..p.len() {
                if set.iter().all(|s| !p.crosses(s, r)) {
                    let mut t = set.clone();
                    t.insert(r);
                    stack.push((r + 1, t));
                }
            }
        }
        out
    }

    #[test]
    fn decomposition_invariants_small_polygons() {
        for n in 1..=4 {
            for m in 1..=5 {
                let spec = PolygonSpec::new(n, m).unwrap();
                if spec.vertices() > 14 {
                    continue;
                }
                let p = Polygon::new(spec);
                for cut in non_crossing_sets(&p) {
                    let dec = p.cell_decomposition(&cut).unwrap();
                    assert_eq!(dec.cells().len(), cut.len() + 1);
                    let total: usize = dec.cells().iter().map(Cell::len).sum();
                    assert_eq!(total, spec.vertices() as usize + 2 * cut.len());
                    for c in dec.cells() {
                        assert!(c.len() >= 3);
                        assert_eq!(c.len() % n as usize, 2 % n as usize);
                    }
                    // each cut diagonal is an edge of exactly two cells
                    for d in p.diagonals_of(&cut) {
                        assert_eq!(dec.cells().iter().filter(|c| c.is_edge(d)).count(), 2);
                    }
                    // each polygon edge belongs to exactly one cell
                    for v in 1..=spec.vertices() {
                        let w = spec.wrap(v as i64 + 1);
                        let count = dec
                            .cells()
                            .iter()
                            .filter(|c| {
                                matches!((c.position(v), c.position(w)), (Some(i), Some(j))
                                    if (i + 1) % c.len() == j || (j + 1) % c.len() == i)
                            })
                            .count();
                        assert_eq!(count, 1, "edge ({v},{w}) cut {cut:?}");
                    }
                    for (r, d) in p.diagonals().iter().enumerate() {
                        let crosses_cut = cut.iter().any(|c| p.crosses(c, r));
                        let inside: Vec<_> = dec.cells().iter().filter(|c| c.contains_diagonal(*d)).collect();
                        if crosses_cut || cut.contains(r) {
                            assert!(inside.is_empty());
                        } else {
                            assert_eq!(inside.len(), 1, "{d}");
                            let (i, j) = inside[0].to_local(*d).unwrap();
                            assert_eq!((j - i) % n, 1 % n, "{d} local residue");
                        }
                    }
                }
            }
        }
    }
}
