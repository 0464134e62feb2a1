//! The category side of the polygon model: Auslander–Reiten quiver
//! coordinates, the shift `[n]`, and the subfactor bijection realized as
//! cutting the polygon into cells.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::cells::Cell;
use crate::diagset::DiagSet;
use crate::error::{Error, Result};
use crate::polygon::{Diagonal, Polygon, PolygonSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuiverVertex {
    pub diagonal: Diagonal,
    pub column: i64,
    pub row: u32,
}

#[derive(Debug, Clone)]
pub struct ArQuiver {
    pub spec: PolygonSpec,
    /// In rank order, so vertex `i` is the diagonal of rank `i`.
    pub vertices: Vec<QuiverVertex>,
    /// Irreducible maps, as pairs of vertex indices.
    pub arrows: Vec<(usize, usize)>,
    /// `v ↦ τ_n(v)`, as pairs of vertex indices.
    pub translations: Vec<(usize, usize)>,
}

/// Column `c`, row `r` of the universal cover: the chord starting at
/// `1 + nc` of oriented length `nr + 1`.
fn lift(spec: PolygonSpec, column: i64, row: u32) -> Diagonal {
    let n = spec.n() as i64;
    let start = 1 + n * column;
    let end = start + n * row as i64 + 1;
    Diagonal::ordered(spec.wrap(start), spec.wrap(end))
}

impl ArQuiver {
    pub fn new(poly: &Polygon) -> ArQuiver {
        let spec = poly.spec();
        let period = spec.tau_order() as i64;
        let vertices: Vec<QuiverVertex> = poly
            .diagonals()
            .iter()
            .map(|&d| {
                let (column, row) = (0..period)
                    .flat_map(|c| (1..=spec.m()).map(move |r| (c, r)))
                    .find(|&(c, r)| lift(spec, c, r) == d)
                    .expect("every n-diagonal has a lift");
                QuiverVertex {
                    diagonal: d,
                    column,
                    row,
                }
            })
            .collect();

        let n = spec.n() as i64;
        let mut arrows = Vec::new();
        for (i, d) in poly.diagonals().iter().enumerate() {
            let (a, b) = (d.a() as i64, d.b() as i64);
            let mut targets = BTreeSet::new();
            for (x, y) in [(a, b + n), (a + n, b)] {
                if let Ok(t) = spec.n_diagonal(spec.wrap(x), spec.wrap(y)) {
                    targets.insert(poly.rank(t).expect("n-diagonal has a rank"));
                }
            }
            arrows.extend(targets.into_iter().map(|j| (i, j)));
        }
        let translations = poly
            .diagonals()
            .iter()
            .enumerate()
            .map(|(i, &d)| (i, poly.rank(spec.tau_n(d)).expect("τ_n preserves n-diagonals")))
            .collect();
        ArQuiver {
            spec,
            vertices,
            arrows,
            translations,
        }
    }

    /// The vertex one column to the left in the same row of the cover.
    pub fn left_neighbour(&self, v: &QuiverVertex) -> Diagonal {
        let period = self.spec.tau_order() as i64;
        lift(self.spec, (v.column - 1).rem_euclid(period), v.row)
    }

    /// Connectivity of the translation quiver (mesh arrows plus `τ_n`).
    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut adjacent = vec![Vec::new(); self.vertices.len()];
        for &(i, j) in self.arrows.iter().chain(&self.translations) {
            adjacent[i].push(j);
            adjacent[j].push(i);
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for &j in &adjacent[i] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Graphviz export. Mesh arrows are solid, translations dashed; `pos`
    /// places row `r`, column `c` at `(2c + r - 1, r)`.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph ar_quiver_{}_{} {{", self.spec.n(), self.spec.m());
        for v in &self.vertices {
            let d = v.diagonal;
            let _ = writeln!(
                out,
                "  d{}_{} [label=\"{}\", pos=\"{},{}!\"];",
                d.a(),
                d.b(),
                d,
                2 * v.column + v.row as i64 - 1,
                v.row
            );
        }
        let id = |i: usize| {
            let d = self.vertices[i].diagonal;
            format!("d{}_{}", d.a(), d.b())
        };
        for &(i, j) in &self.arrows {
            let _ = writeln!(out, "  {} -> {};", id(i), id(j));
        }
        for &(i, j) in &self.translations {
            let _ = writeln!(out, "  {} -> {} [style=dashed, constraint=false];", id(i), id(j));
        }
        out.push_str("}\n");
        out
    }
}

/// The object-level action of the shift `[n]`, which is `τ_n`.
pub fn shift_n(spec: PolygonSpec, d: Diagonal) -> Diagonal {
    spec.tau_n(d)
}

/// One non-trivial cell together with its own polygon model.
#[derive(Debug, Clone)]
pub struct SubfactorPart {
    pub cell: Cell,
    pub local: Arc<Polygon>,
    /// Local rank to ambient rank.
    pub to_ambient: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SubfactorImage {
    ambient: Arc<Polygon>,
    cut: DiagSet,
    parts: Vec<SubfactorPart>,
}

impl SubfactorImage {
    pub fn new(ambient: Arc<Polygon>, cut: &DiagSet) -> Result<SubfactorImage> {
        let dec = ambient.cell_decomposition(cut)?;
        let mut parts = Vec::new();
        for cell in dec.cells() {
            let Some(local_spec) = cell.cell_spec() else {
                continue;
            };
            let local = Arc::new(Polygon::new(local_spec));
            let to_ambient = local
                .diagonals()
                .iter()
                .map(|&ld| ambient.rank(cell.to_ambient(ld)))
                .collect::<Result<Vec<_>>>()?;
            parts.push(SubfactorPart {
                cell: cell.clone(),
                local,
                to_ambient,
            });
        }
        Ok(SubfactorImage {
            ambient,
            cut: cut.clone(),
            parts,
        })
    }

    pub fn ambient(&self) -> &Arc<Polygon> {
        &self.ambient
    }

    pub fn cut(&self) -> &DiagSet {
        &self.cut
    }

    pub fn parts(&self) -> &[SubfactorPart] {
        &self.parts
    }

    /// Split an ambient set whose frame contains the cut into cell-local sets.
    pub fn restrict(&self, set: &DiagSet) -> Result<Vec<DiagSet>> {
        let poly = &self.ambient;
        let missing = self.cut.difference(set);
        if !missing.is_empty() {
            return Err(Error::CutNotInFrame(poly.diagonals_of(&missing)));
        }
        let nc_cut = poly.nc(&self.cut);
        if let Some(r) = set.difference(&nc_cut).iter().next() {
            let c = self
                .cut
                .difference(poly.non_crossing_mask(r))
                .iter()
                .next()
                .expect("outside nc(cut) means crossing some cut diagonal");
            return Err(Error::CrossesCut {
                member: poly.diagonals()[r],
                cut: poly.diagonals()[c],
            });
        }
        Ok(self
            .parts
            .iter()
            .map(|part| {
                DiagSet::from_ranks(
                    part.local.spec(),
                    part.to_ambient
                        .iter()
                        .enumerate()
                        .filter(|(_, &amb)| set.contains(amb))
                        .map(|(local, _)| local),
                )
            })
            .collect())
    }

    /// Glue cell-local sets back together and add the cut.
    pub fn induce(&self, locals: &[DiagSet]) -> Result<DiagSet> {
        if locals.len() != self.parts.len() {
            return Err(Error::SpecMismatch);
        }
        let mut out = self.cut.clone();
        for (part, local) in self.parts.iter().zip(locals) {
            if local.spec() != part.local.spec() {
                return Err(Error::SpecMismatch);
            }
            for r in local {
                out.insert(part.to_ambient[r]);
            }
        }
        Ok(out)
    }

    /// Compare closed ambient sets whose frame contains the cut with tuples
    /// of closed cell-local sets.
    pub fn bijection_check(&self) -> SubfactorReport {
        let poly = &self.ambient;
        let mut report = SubfactorReport::default();
        let mut images = HashSet::new();
        for s in poly.enumerate_closed() {
            if !self.cut.is_subset(&poly.frame(&s)) {
                continue;
            }
            report.ambient_count += 1;
            let label = poly.format_set(&s);
            let locals = match self.restrict(&s) {
                Ok(l) => l,
                Err(e) => {
                    report.failures.push(format!("restrict {label}: {e}"));
                    continue;
                }
            };
            for (part, local) in self.parts.iter().zip(&locals) {
                if !part.local.is_closed(local) {
                    report.failures.push(format!(
                        "restrict {label}: local set {} not closed",
                        part.local.format_set(local)
                    ));
                }
            }
            if self.induce(&locals).as_ref() != Ok(&s) {
                report.failures.push(format!("induce(restrict({label})) differs"));
            }
            if !images.insert(locals) {
                report.failures.push(format!("restrict not injective at {label}"));
            }
        }

        let local_closed: Vec<Vec<DiagSet>> = self
            .parts
            .iter()
            .map(|p| p.local.enumerate_closed().collect())
            .collect();
        report.local_counts = local_closed.iter().map(Vec::len).collect();
        report.product_count = report.local_counts.iter().product();

        let mut index = vec![0usize; local_closed.len()];
        'tuples: loop {
            let tuple: Vec<DiagSet> = index
                .iter()
                .zip(&local_closed)
                .map(|(&i, sets)| sets[i].clone())
                .collect();
            match self.induce(&tuple) {
                Ok(s) => {
                    let label = poly.format_set(&s);
                    if !poly.is_closed(&s) || !self.cut.is_subset(&poly.frame(&s)) {
                        report
                            .failures
                            .push(format!("induce gives {label}, not closed around the cut"));
                    }
                    if self.restrict(&s).as_ref() != Ok(&tuple) {
                        report.failures.push(format!("restrict(induce) differs at {label}"));
                    }
                    if !images.contains(&tuple) {
                        report
                            .failures
                            .push(format!("tuple inducing {label} missed by restrict"));
                    }
                }
                Err(e) => report.failures.push(format!("induce: {e}")),
            }
            for k in (0..index.len()).rev() {
                index[k] += 1;
                if index[k] < local_closed[k].len() {
                    continue 'tuples;
                }
                index[k] = 0;
            }
            break;
        }
        if report.ambient_count != report.product_count {
            report.failures.push(format!(
                "cardinality mismatch: {} ambient vs {} local tuples",
                report.ambient_count, report.product_count
            ));
        }
        report
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubfactorReport {
    pub ambient_count: usize,
    pub product_count: usize,
    pub local_counts: Vec<usize>,
    pub failures: Vec<String>,
}

impl SubfactorReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(n: u32, m: u32) -> Arc<Polygon> {
        Arc::new(Polygon::new(PolygonSpec::new(n, m).unwrap()))
    }

    fn find(q: &ArQuiver, a: u32, b: u32) -> usize {
        q.vertices
            .iter()
            .position(|v| v.diagonal.endpoints() == [a, b])
            .unwrap()
    }

    #[test]
    fn figure_arrows_decagon() {
        let p = poly(2, 3);
        let q = ArQuiver::new(&p);
        assert_eq!(q.vertices.len(), 15);
        let has = |x: (u32, u32), y: (u32, u32)| q.arrows.contains(&(find(&q, x.0, x.1), find(&q, y.0, y.1)));
        assert!(has((1, 4), (1, 6)));
        assert!(has((1, 6), (3, 6)));
        assert!(has((5, 10), (2, 5)));
        assert!(has((4, 9), (1, 4)));
        assert!(!has((1, 4), (3, 6)));
    }

    /// The full mesh of the printed quiver for `C²_{A₃}`, one row at a time.
    #[test]
    fn golden_mesh_decagon() {
        let p = poly(2, 3);
        let q = ArQuiver::new(&p);
        let want: BTreeSet<((u32, u32), (u32, u32))> = [
            ((1, 4), (1, 6)),
            ((3, 6), (3, 8)),
            ((5, 8), (5, 10)),
            ((7, 10), (2, 7)),
            ((2, 9), (4, 9)),
            ((1, 6), (3, 6)),
            ((3, 8), (5, 8)),
            ((5, 10), (7, 10)),
            ((2, 7), (2, 9)),
            ((4, 9), (1, 4)),
            ((1, 6), (1, 8)),
            ((3, 8), (3, 10)),
            ((5, 10), (2, 5)),
            ((2, 7), (4, 7)),
            ((4, 9), (6, 9)),
            ((1, 8), (3, 8)),
            ((3, 10), (5, 10)),
            ((2, 5), (2, 7)),
            ((4, 7), (4, 9)),
            ((6, 9), (1, 6)),
        ]
        .into_iter()
        .collect();
        let got: BTreeSet<_> = q
            .arrows
            .iter()
            .map(|&(i, j)| {
                let (u, v) = (q.vertices[i].diagonal, q.vertices[j].diagonal);
                ((u.a(), u.b()), (v.a(), v.b()))
            })
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn figure_layout_decagon() {
        let p = poly(2, 3);
        let q = ArQuiver::new(&p);
        let at = |a, b| {
            let v = q.vertices[find(&q, a, b)];
            (v.column, v.row)
        };
        assert_eq!(at(1, 4), (0, 1));
        assert_eq!(at(3, 6), (1, 1));
        assert_eq!(at(1, 6), (0, 2));
        assert_eq!(at(1, 8), (0, 3));
        assert_eq!(at(2, 5), (2, 3));
        assert_eq!(at(2, 9), (4, 1));
        let tau = q.translations.iter().find(|&&(i, _)| i == find(&q, 3, 6)).unwrap();
        assert_eq!(q.vertices[tau.1].diagonal.endpoints(), [1, 4]);
    }

    #[test]
    fn quiver_invariants_small_polygons() {
        for n in 1..=5 {
            for m in 1..=6 {
                let spec = PolygonSpec::new(n, m).unwrap();
                if spec.vertices() > 14 {
                    continue;
                }
                let p = poly(n, m);
                let q = ArQuiver::new(&p);
                assert_eq!(q.vertices.len(), p.len());
                assert!(q.is_connected(), "spec {spec}");
                let mut out_degree = vec![0; q.vertices.len()];
                for &(i, _) in &q.arrows {
                    out_degree[i] += 1;
                }
                assert!(out_degree.iter().all(|&k| k <= 2));
                for v in &q.vertices {
                    assert!((1..=m).contains(&v.row));
                    assert_eq!(q.left_neighbour(v), spec.tau_n(v.diagonal), "spec {spec}");
                }
            }
        }
    }

    #[test]
    fn shift_examples() {
        let spec = PolygonSpec::new(2, 3).unwrap();
        let d = spec.n_diagonal(1, 4).unwrap();
        assert_eq!(shift_n(spec, d), spec.n_diagonal(2, 9).unwrap());
        let mut v = d;
        for _ in 0..spec.tau_order() {
            v = shift_n(spec, v);
        }
        assert_eq!(v, d);
        let all = spec.enumerate_n_diagonals();
        for u in &all {
            for w in &all {
                assert_eq!(u.crosses(w), shift_n(spec, *u).crosses(&shift_n(spec, *w)));
            }
        }
    }

    #[test]
    fn subfactor_two_hexagons() {
        let p = poly(2, 3);
        let img = SubfactorImage::new(p.clone(), &p.parse_set("{(1,6)}").unwrap()).unwrap();
        assert_eq!(img.parts().len(), 2);
        for part in img.parts() {
            assert_eq!(part.local.spec(), PolygonSpec::new(2, 1).unwrap());
            assert_eq!(part.to_ambient.len(), 3);
        }
        let report = img.bijection_check();
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!(report.ambient_count, 25);
        assert_eq!(report.product_count, 25);
        assert_eq!(report.local_counts, vec![5, 5]);
    }

    #[test]
    fn subfactor_empty_cut_is_identity() {
        let p = poly(2, 2);
        let img = SubfactorImage::new(p.clone(), &p.empty_set()).unwrap();
        assert_eq!(img.parts().len(), 1);
        assert_eq!(img.parts()[0].to_ambient, (0..p.len()).collect::<Vec<_>>());
        for s in p.enumerate_closed() {
            let locals = img.restrict(&s).unwrap();
            assert_eq!(locals[0].iter().collect::<Vec<_>>(), s.iter().collect::<Vec<_>>());
        }
        assert!(img.bijection_check().passed());
    }

    #[test]
    fn subfactor_maximal_cut() {
        let p = poly(2, 3);
        let cut = p.enumerate_cluster_tilting().next().unwrap();
        let img = SubfactorImage::new(p.clone(), &cut).unwrap();
        assert!(img.parts().is_empty());
        let report = img.bijection_check();
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!((report.ambient_count, report.product_count), (1, 1));
    }

    #[test]
    fn subfactor_hexagon_single_cuts() {
        // frozen from an independent scan of the 82 closed sets
        let p = poly(1, 3);
        for (r, &d) in p.diagonals().iter().enumerate() {
            let img = SubfactorImage::new(p.clone(), &DiagSet::from_ranks(p.spec(), [r])).unwrap();
            let report = img.bijection_check();
            assert!(report.passed(), "{d}: {:?}", report.failures);
            let want = if d.b() - d.a() == 3 { 16 } else { 17 };
            assert_eq!(report.ambient_count, want, "{d}");
        }
    }

    #[test]
    fn restrict_rejects_incompatible_sets() {
        let p = poly(2, 3);
        let img = SubfactorImage::new(p.clone(), &p.parse_set("{(1,6)}").unwrap()).unwrap();
        assert!(matches!(
            img.restrict(&p.parse_set("{(1,4)}").unwrap()),
            Err(Error::CutNotInFrame(_))
        ));
        assert!(matches!(
            img.restrict(&p.parse_set("{(1,6),(3,8)}").unwrap()),
            Err(Error::CrossesCut { .. })
        ));
        assert!(img.induce(&[]).is_err());
    }
}
