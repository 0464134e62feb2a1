//! Rotation of n-diagonals inside the cells cut out by a non-crossing set,
//! and mutation of closed configurations along a subset of their frame.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cells::Cell;
use crate::closure::Configuration;
use crate::diagset::DiagSet;
use crate::error::{Error, Result};
use crate::polygon::{Diagonal, Polygon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Endpoints move `n` steps back; the forward D-mutation `μ_D`.
    Backward,
    /// Endpoints move `n` steps ahead; the backward D-mutation `μ_D⁻¹`.
    Forward,
}

impl Direction {
    pub fn inverse(self) -> Direction {
        match self {
            Direction::Backward => Direction::Forward,
            Direction::Forward => Direction::Backward,
        }
    }

    fn steps(self, n: u32) -> i64 {
        match self {
            Direction::Backward => -(n as i64),
            Direction::Forward => n as i64,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Backward => "backward",
            Direction::Forward => "forward",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "backward" => Ok(Direction::Backward),
            "forward" => Ok(Direction::Forward),
            other => Err(Error::Parse(format!(
                "unknown direction `{other}` (expected backward or forward)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationStep {
    pub cut: DiagSet,
    pub direction: Direction,
}

#[derive(Debug, Clone)]
pub struct MutationRecord {
    pub before: Configuration,
    pub step: MutationStep,
    pub after: Configuration,
    /// Old member to new member, for every member off the cut.
    pub movement: Vec<(Diagonal, Diagonal)>,
}

/// Rotate a diagonal of the whole polygon by `n` vertices.
pub fn rho_pi(poly: &Polygon, d: Diagonal, direction: Direction) -> Diagonal {
    poly.spec().shift(d, direction.steps(poly.n()))
}

/// Rotate `d` by `n` positions in the cyclic vertex order of `cell`.
pub fn rotate_in_cell(cell: &Cell, d: Diagonal, direction: Direction) -> Result<Diagonal> {
    if !cell.contains_endpoints(d) {
        return Err(Error::NotInCell(d));
    }
    if cell.is_edge(d) {
        return Err(Error::CellEdge(d));
    }
    let len = cell.len() as i64;
    let steps = direction.steps(cell.spec().n());
    let rotate = |v: u32| {
        let p = cell.position(v).expect("endpoint checked above") as i64;
        cell.vertex_at((p + steps).rem_euclid(len) as usize)
    };
    Ok(Diagonal::ordered(rotate(d.a()), rotate(d.b())))
}

impl Polygon {
    /// Members off the cut rotate inside their cells; the cut stays put.
    /// Also returns the movement map.
    pub fn rho_d_with_movement(
        &self,
        set: &DiagSet,
        cut: &DiagSet,
        direction: Direction,
    ) -> Result<(DiagSet, Vec<(Diagonal, Diagonal)>)> {
        let dec = self.cell_decomposition(cut)?;
        let mut out = cut.clone();
        let mut movement = Vec::new();
        for r in &set.difference(cut) {
            if let Some(c) = cut.difference(self.non_crossing_mask(r)).iter().next() {
                return Err(Error::CrossesCut {
                    member: self.diagonals()[r],
                    cut: self.diagonals()[c],
                });
            }
            let d = self.diagonals()[r];
            let cell = dec.cell_of(d).expect("a diagonal clear of the cut lies in one cell");
            let image = rotate_in_cell(cell, d, direction)?;
            out.insert(self.rank(image)?);
            movement.push((d, image));
        }
        Ok((out, movement))
    }

    pub fn rho_d(&self, set: &DiagSet, cut: &DiagSet, direction: Direction) -> Result<DiagSet> {
        self.rho_d_with_movement(set, cut, direction).map(|(s, _)| s)
    }
}

/// Mutate a closed configuration along a cut lying in its frame.
pub fn mutate(config: &Configuration, step: &MutationStep) -> Result<MutationRecord> {
    if !config.is_closed() {
        return Err(Error::NotClosed);
    }
    let poly: &Arc<Polygon> = config.polygon();
    if step.cut.spec() != poly.spec() {
        return Err(Error::SpecMismatch);
    }
    let outside = step.cut.difference(config.frame());
    if !outside.is_empty() {
        return Err(Error::CutNotInFrame(poly.diagonals_of(&outside)));
    }
    let (members, movement) = poly.rho_d_with_movement(config.members(), &step.cut, step.direction)?;
    let after = Configuration::new(poly.clone(), members)?;
    Ok(MutationRecord {
        before: config.clone(),
        step: step.clone(),
        after,
        movement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::PolygonSpec;

    fn poly(n: u32, m: u32) -> Arc<Polygon> {
        Arc::new(Polygon::new(PolygonSpec::new(n, m).unwrap()))
    }

    #[test]
    fn rho_pi_examples() {
        let p = poly(2, 3);
        let d = |a, b| p.spec().n_diagonal(a, b).unwrap();
        assert_eq!(rho_pi(&p, d(3, 6), Direction::Backward), d(1, 4));
        assert_eq!(rho_pi(&p, d(1, 4), Direction::Backward), d(2, 9));
        for &u in p.diagonals() {
            let back = rho_pi(&p, u, Direction::Backward);
            assert_eq!(back, p.spec().tau_n(u));
            assert_eq!(rho_pi(&p, back, Direction::Forward), u);
        }
    }

    #[test]
    fn rotate_in_cell_examples() {
        let p = poly(2, 3);
        let d = |a, b| p.spec().n_diagonal(a, b).unwrap();
        let dec = p.cell_decomposition(&p.parse_set("{(1,6)}").unwrap()).unwrap();
        let (left, right) = (&dec.cells()[0], &dec.cells()[1]);
        assert_eq!(rotate_in_cell(left, d(1, 4), Direction::Backward).unwrap(), d(2, 5));
        assert_eq!(rotate_in_cell(right, d(1, 8), Direction::Backward).unwrap(), d(6, 9));
        assert_eq!(rotate_in_cell(right, d(7, 10), Direction::Backward).unwrap(), d(1, 8));
        assert_eq!(rotate_in_cell(right, d(6, 9), Direction::Backward).unwrap(), d(7, 10));
        assert_eq!(
            rotate_in_cell(left, d(1, 8), Direction::Backward),
            Err(Error::NotInCell(d(1, 8)))
        );
        assert_eq!(
            rotate_in_cell(left, d(1, 6), Direction::Backward),
            Err(Error::CellEdge(d(1, 6)))
        );

        let whole = p.cell_decomposition(&p.empty_set()).unwrap();
        for &u in p.diagonals() {
            for dir in [Direction::Backward, Direction::Forward] {
                assert_eq!(rotate_in_cell(&whole.cells()[0], u, dir).unwrap(), rho_pi(&p, u, dir));
            }
        }
    }

    #[test]
    fn rho_d_worked_example() {
        let p = poly(2, 3);
        let x = p.parse_set("{(1,4),(1,6),(1,8),(7,10),(6,9)}").unwrap();
        let cut = p.parse_set("{(1,6)}").unwrap();
        let y = p.rho_d(&x, &cut, Direction::Backward).unwrap();
        assert_eq!(y, p.parse_set("{(2,5),(1,6),(6,9),(1,8),(7,10)}").unwrap());
        assert!(p.is_closed(&y));
        assert_eq!(p.rho_d(&y, &cut, Direction::Forward).unwrap(), x);
        assert_eq!(
            p.rho_d(&x, &x, Direction::Backward),
            Err(Error::CrossingCutSet(
                p.spec().n_diagonal(1, 8).unwrap(),
                p.spec().n_diagonal(6, 9).unwrap(),
            ))
        );
        let frame = p.frame(&x);
        assert_eq!(p.rho_d(&frame, &frame, Direction::Forward).unwrap(), frame);
    }

    #[test]
    fn rho_d_rejects_members_crossing_cut() {
        let p = poly(2, 3);
        let s = p.parse_set("{(1,6),(2,5)}").unwrap();
        let cut = p.parse_set("{(1,4)}").unwrap();
        assert!(matches!(
            p.rho_d(&s, &cut, Direction::Backward),
            Err(Error::CrossesCut { .. })
        ));
    }

    #[test]
    fn mutate_example() {
        let p = poly(2, 3);
        let x = p.parse_set("{(1,4),(1,6),(1,8),(7,10),(6,9)}").unwrap();
        let config = Configuration::new(p.clone(), x).unwrap();
        let step = MutationStep {
            cut: p.parse_set("{(1,6)}").unwrap(),
            direction: Direction::Backward,
        };
        let rec = mutate(&config, &step).unwrap();
        assert!(rec.after.is_closed());
        assert_eq!(*rec.after.frame(), p.parse_set("{(2,5),(1,6)}").unwrap());
        assert_eq!(rec.movement.len(), 4);
        assert!(rec
            .movement
            .contains(&(p.spec().n_diagonal(1, 4).unwrap(), p.spec().n_diagonal(2, 5).unwrap())));
    }

    #[test]
    fn mutate_preconditions() {
        let p = poly(2, 3);
        let open = Configuration::new(p.clone(), p.parse_set("{(1,4),(1,6),(3,6)}").unwrap()).unwrap();
        let step = MutationStep {
            cut: p.empty_set(),
            direction: Direction::Backward,
        };
        assert_eq!(mutate(&open, &step).unwrap_err(), Error::NotClosed);

        let x = Configuration::new(p.clone(), p.parse_set("{(1,4),(1,6),(1,8),(7,10),(6,9)}").unwrap()).unwrap();
        let bad = MutationStep {
            cut: p.parse_set("{(1,6),(1,8)}").unwrap(),
            direction: Direction::Forward,
        };
        assert_eq!(
            mutate(&x, &bad).unwrap_err(),
            Error::CutNotInFrame(vec![p.spec().n_diagonal(1, 8).unwrap()])
        );
    }

    #[test]
    fn empty_cut_is_global_rotation() {
        let p = poly(2, 3);
        let y = p.parse_set("{(1,4),(1,6),(3,6),(2,5)}").unwrap();
        let config = Configuration::new(p.clone(), y.clone()).unwrap();
        let rec = mutate(
            &config,
            &MutationStep {
                cut: p.empty_set(),
                direction: Direction::Backward,
            },
        )
        .unwrap();
        let shifted = p
            .set_from_diagonals(
                p.diagonals_of(&y)
                    .iter()
                    .map(|&d| p.spec().tau_n(d))
                    .collect::<Vec<_>>()
                    .iter(),
            )
            .unwrap();
        assert_eq!(*rec.after.members(), shifted);
        assert!(rec.after.is_closed());
    }

    #[test]
    fn global_rotation_commutes_with_nc() {
        for (n, m) in [(1, 4), (2, 3), (3, 2)] {
            let p = poly(n, m);
            let rotate_all = |s: &DiagSet| {
                p.set_from_diagonals(
                    p.diagonals_of(s)
                        .iter()
                        .map(|&d| rho_pi(&p, d, Direction::Backward))
                        .collect::<Vec<_>>()
                        .iter(),
                )
                .unwrap()
            };
            for s in p.enumerate_closed().take(200) {
                assert_eq!(p.nc(&rotate_all(&s)), rotate_all(&p.nc(&s)));
            }
        }
    }

    #[test]
    fn cell_rotation_well_defined() {
        for (n, m) in [(1, 3), (1, 4), (2, 2), (2, 3), (3, 2), (4, 2)] {
            let p = poly(n, m);
            for s in p.enumerate_closed() {
                let frame = p.frame(&s);
                let dec = p.cell_decomposition(&frame).unwrap();
                for cell in dec.cells() {
                    for &d in p.diagonals() {
                        if !cell.contains_diagonal(d) {
                            continue;
                        }
                        for dir in [Direction::Backward, Direction::Forward] {
                            let image = rotate_in_cell(cell, d, dir).unwrap();
                            assert!(p.spec().is_n_diagonal(image));
                            assert!(cell.contains_diagonal(image));
                            assert_eq!(rotate_in_cell(cell, image, dir.inverse()).unwrap(), d);
                        }
                    }
                }
            }
        }
    }
}
