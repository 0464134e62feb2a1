//! The `nc` polar, closed sets, frames and Ptolemy diagrams.
//!
//! `nc(S)` is the set of n-diagonals crossing nothing in `S`. It is antitone
//! and `S ⊆ nc(nc(S))`, so `nc ∘ nc` is a closure operator and its fixed
//! points (the closed sets) are exactly the first halves of n-cotorsion pairs.
//! Closed sets are enumerated with Ganter's next-closure walk.

use std::sync::{Arc, OnceLock};

use crate::diagset::DiagSet;
use crate::error::{Error, Result};
use crate::polygon::Polygon;

impl Polygon {
    /// Every n-diagonal crossing no member of `set`.
    pub fn nc(&self, set: &DiagSet) -> DiagSet {
        let mut out = self.full_set();
        for r in set {
            out.intersect_with(self.non_crossing_mask(r));
        }
        out
    }

    /// `nc(nc(set))`.
    pub fn closure(&self, set: &DiagSet) -> DiagSet {
        self.nc(&self.nc(set))
    }

    pub fn is_closed(&self, set: &DiagSet) -> bool {
        self.closure(set) == *set
    }

    /// The pair `(S, nc(S))` for a closed `S`.
    pub fn cotorsion_pair(&self, set: &DiagSet) -> Result<(DiagSet, DiagSet)> {
        let partner = self.nc(set);
        if self.nc(&partner) != *set {
            return Err(Error::NotClosed);
        }
        Ok((set.clone(), partner))
    }

    /// Members crossing nothing else in the set, `S ∩ nc(S)`.
    pub fn frame(&self, set: &DiagSet) -> DiagSet {
        set.intersection(&self.nc(set))
    }

    /// For every crossing pair `(i,j), (k,l)` in the set, whichever of
    /// `(i,k), (i,l), (j,k), (j,l)` are n-diagonals must be members too.
    pub fn is_ptolemy(&self, set: &DiagSet) -> bool {
        let spec = self.spec();
        for u in set {
            for v in set.difference(self.non_crossing_mask(u)).iter().filter(|&v| v > u) {
                let (du, dv) = (self.diagonals()[u], self.diagonals()[v]);
                for x in du.endpoints() {
                    for y in dv.endpoints() {
                        let Ok(connector) = spec.n_diagonal(x, y) else {
                            continue;
                        };
                        if !set.contains(self.rank(connector).expect("n-diagonal has a rank")) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// All closed sets, each exactly once, in lectic order.
    pub fn enumerate_closed(&self) -> ClosedSets<'_> {
        ClosedSets {
            poly: self,
            next: Some(self.closure(&self.empty_set())),
        }
    }

    /// The next closed set after `current` in lectic order.
    pub fn next_closed(&self, current: &DiagSet) -> Option<DiagSet> {
        let mut prefix = current.clone();
        for i in (0..self.len()).rev() {
            if prefix.remove(i) {
                continue;
            }
            let mut seed = prefix.clone();
            seed.insert(i);
            let candidate = self.closure(&seed);
            let mut low = candidate.clone();
            low.truncate_below(i);
            if low.first_outside(&prefix).is_none() {
                return Some(candidate);
            }
        }
        None
    }

    /// Sets with `S = nc(S)`: the maximal pairwise non-crossing sets, i.e.
    /// the (n+2)-angulations of the polygon.
    pub fn enumerate_cluster_tilting(&self) -> ClusterTilting<'_> {
        ClusterTilting {
            poly: self,
            stack: vec![(0, self.empty_set())],
        }
    }
}

/// Stream of closed sets; see [`Polygon::enumerate_closed`].
pub struct ClosedSets<'a> {
    poly: &'a Polygon,
    next: Option<DiagSet>,
}

impl Iterator for ClosedSets<'_> {
    type Item = DiagSet;

    fn next(&mut self) -> Option<DiagSet> {
        let current = self.next.take()?;
        self.next = self.poly.next_closed(&current);
        Some(current)
    }
}

/// Depth-first search over pairwise non-crossing sets in rank order.
pub struct ClusterTilting<'a> {
    poly: &'a Polygon,
    stack: Vec<(usize, DiagSet)>,
}

impl Iterator for ClusterTilting<'_> {
    type Item = DiagSet;

    fn next(&mut self) -> Option<DiagSet> {
        let poly = self.poly;
        while let Some((i, set)) = self.stack.pop() {
            let compatible = poly.nc(&set);
            if i == poly.len() {
                if compatible == set {
                    return Some(set);
                }
                continue;
            }
            if !compatible.contains(i) {
                self.stack.push((i + 1, set));
                continue;
            }
            // Skipping i only pays off if something later can still cross it.
            let later_crosser = compatible.difference(poly.non_crossing_mask(i)).iter().any(|j| j > i);
            if later_crosser {
                self.stack.push((i + 1, set.clone()));
            }
            let mut with = set;
            with.insert(i);
            self.stack.push((i + 1, with));
        }
        None
    }
}

/// A candidate first half of an n-cotorsion pair, with its `nc` set, frame
/// and closedness computed on first use.
#[derive(Debug, Clone)]
pub struct Configuration {
    poly: Arc<Polygon>,
    members: DiagSet,
    nc: OnceLock<DiagSet>,
    frame: OnceLock<DiagSet>,
    closed: OnceLock<bool>,
}

impl Configuration {
    pub fn new(poly: Arc<Polygon>, members: DiagSet) -> Result<Configuration> {
        if members.spec() != poly.spec() {
            return Err(Error::SpecMismatch);
        }
        Ok(Configuration {
            poly,
            members,
            nc: OnceLock::new(),
            frame: OnceLock::new(),
            closed: OnceLock::new(),
        })
    }

    pub fn polygon(&self) -> &Arc<Polygon> {
        &self.poly
    }

    pub fn members(&self) -> &DiagSet {
        &self.members
    }

    pub fn nc_set(&self) -> &DiagSet {
        self.nc.get_or_init(|| self.poly.nc(&self.members))
    }

    pub fn frame(&self) -> &DiagSet {
        self.frame.get_or_init(|| self.members.intersection(self.nc_set()))
    }

    pub fn is_closed(&self) -> bool {
        *self.closed.get_or_init(|| self.poly.nc(self.nc_set()) == self.members)
    }
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Configuration {}
