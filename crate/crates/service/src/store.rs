//! In-memory session registry.
//!
//! Each session sits behind its own mutex, so writes to one session are
//! serialized while different sessions proceed independently. The registry
//! lock is only held to look sessions up or insert them.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use ncotor_core::document::SpecDoc;
use ncotor_core::render::{self, Drawing, Highlight};
use ncotor_core::{
    mutate, ConfigDocument, Configuration, DiagSet, Diagonal, Direction, MutationRecord, MutationStep, Polygon,
    PolygonSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::ServiceError;

/// How many closed sets a `random-closed` draw chooses among.
pub const DEFAULT_RANDOM_CAP: usize = 10_000;
pub const MAX_PAGE_SIZE: usize = 500;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Initial {
    Diagonals(Vec<[u32; 2]>),
    Empty,
    RandomClosed { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumerationKind {
    Closed,
    ClusterTilting,
}

pub struct Session {
    id: String,
    poly: Arc<Polygon>,
    initial: DiagSet,
    current: Configuration,
    history: Vec<MutationRecord>,
    created_at: SystemTime,
    updated_at: SystemTime,
}

impl Session {
    /// Fold the history over the initial configuration.
    fn replay(&self) -> Result<DiagSet, ServiceError> {
        let mut config = Configuration::new(self.poly.clone(), self.initial.clone())?;
        for record in &self.history {
            config = mutate(&config, &record.step)?.after;
        }
        Ok(config.members().clone())
    }

    fn view(&self) -> SessionView {
        let poly = &self.poly;
        let pairs = |s: &DiagSet| poly.diagonals_of(s).iter().map(|d| d.endpoints()).collect();
        SessionView {
            id: self.id.clone(),
            document: ConfigDocument::from_set(poly, self.current.members()),
            nc: pairs(self.current.nc_set()),
            frame: pairs(self.current.frame()),
            closed: self.current.is_closed(),
            history_len: self.history.len(),
            created_at_ms: millis(self.created_at),
            updated_at_ms: millis(self.updated_at),
        }
    }
}

fn millis(t: SystemTime) -> u64 {
    t.duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    #[serde(flatten)]
    pub document: ConfigDocument,
    pub nc: Vec<[u32; 2]>,
    pub frame: Vec<[u32; 2]>,
    pub closed: bool,
    pub history_len: usize,
    pub created_at_ms: u64,
    pub updated_at_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Movement {
    pub from: [u32; 2],
    pub to: [u32; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutationView {
    #[serde(flatten)]
    pub session: SessionView,
    pub direction: Direction,
    pub cut: Vec<[u32; 2]>,
    pub movement: Vec<Movement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndoView {
    #[serde(flatten)]
    pub session: SessionView,
    pub undone: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Page {
    pub spec: SpecDoc,
    pub kind: EnumerationKind,
    pub page: usize,
    pub page_size: usize,
    pub has_more: bool,
    pub items: Vec<ConfigDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    pub diagonals: Vec<[u32; 2]>,
    pub direction: Direction,
}

/// Persisted form of a session: the initial configuration in the usual
/// envelope plus the mutation steps taken since.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    #[serde(flatten)]
    pub initial: ConfigDocument,
    pub steps: Vec<StepDoc>,
}

#[derive(Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    polygons: Mutex<HashMap<PolygonSpec, Arc<Polygon>>>,
}

impl SessionStore {
    pub fn new() -> SessionStore {
        SessionStore::default()
    }

    pub fn polygon(&self, spec: PolygonSpec) -> Arc<Polygon> {
        let mut cache = self.polygons.lock().expect("polygon cache poisoned");
        cache
            .entry(spec)
            .or_insert_with(|| Arc::new(Polygon::new(spec)))
            .clone()
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ServiceError> {
        self.sessions
            .read()
            .expect("registry poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::not_found(id))
    }

    fn with_session<T>(
        &self,
        id: &str,
        f: impl FnOnce(&mut Session) -> Result<T, ServiceError>,
    ) -> Result<T, ServiceError> {
        let handle = self.session(id)?;
        let mut session = handle.lock().expect("session poisoned");
        f(&mut session)
    }

    pub fn create(&self, spec: PolygonSpec, initial: Initial) -> Result<SessionView, ServiceError> {
        let poly = self.polygon(spec);
        let members = match initial {
            Initial::Empty => poly.empty_set(),
            Initial::Diagonals(pairs) => {
                let doc = ConfigDocument {
                    version: ncotor_core::document::FORMAT_VERSION.to_string(),
                    spec: SpecDoc {
                        n: spec.n(),
                        m: spec.m(),
                    },
                    diagonals: pairs,
                    name: None,
                    notes: None,
                };
                doc.to_set(&poly)?
            }
            Initial::RandomClosed { seed } => {
                let pool: Vec<DiagSet> = poly.enumerate_closed().take(DEFAULT_RANDOM_CAP).collect();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                pool[rng.random_range(0..pool.len())].clone()
            }
        };
        self.insert(poly, members, Vec::new())
    }

    fn insert(
        &self,
        poly: Arc<Polygon>,
        members: DiagSet,
        steps: Vec<MutationStep>,
    ) -> Result<SessionView, ServiceError> {
        let config = Configuration::new(poly.clone(), members.clone())?;
        if !config.is_closed() {
            let closure = poly.closure(&members);
            let mut err = ServiceError::new(
                422,
                "not_closed",
                format!(
                    "{} is not closed; its closure is {}",
                    poly.format_set(&members),
                    poly.format_set(&closure)
                ),
            );
            err.offending = poly
                .diagonals_of(&closure.difference(&members))
                .iter()
                .map(|d| d.endpoints())
                .collect();
            err.suggestion = Some(poly.diagonals_of(&closure).iter().map(|d| d.endpoints()).collect());
            return Err(err);
        }
        let now = SystemTime::now();
        let mut session = Session {
            id: uuid::Uuid::new_v4().to_string(),
            poly,
            initial: members,
            current: config,
            history: Vec::new(),
            created_at: now,
            updated_at: now,
        };
        for step in steps {
            let record = mutate(&session.current, &step)?;
            session.current = record.after.clone();
            session.history.push(record);
        }
        let view = session.view();
        self.sessions
            .write()
            .expect("registry poisoned")
            .insert(session.id.clone(), Arc::new(Mutex::new(session)));
        Ok(view)
    }

    pub fn get(&self, id: &str) -> Result<SessionView, ServiceError> {
        self.with_session(id, |s| Ok(s.view()))
    }

    pub fn list_frame(&self, id: &str) -> Result<Vec<[u32; 2]>, ServiceError> {
        self.with_session(id, |s| Ok(s.view().frame))
    }

    pub fn mutate(&self, id: &str, cut: &[[u32; 2]], direction: Direction) -> Result<MutationView, ServiceError> {
        self.with_session(id, |s| {
            let poly = s.poly.clone();
            let mut cut_set = poly.empty_set();
            let mut outside: Vec<Diagonal> = Vec::new();
            for &[a, b] in cut {
                let d = poly.spec().n_diagonal(a, b).map_err(|e| {
                    let mut err = ServiceError::from(e);
                    err.offending = vec![[a, b]];
                    err
                })?;
                let r = poly.rank(d)?;
                if !s.current.frame().contains(r) {
                    outside.push(d);
                }
                cut_set.insert(r);
            }
            if !outside.is_empty() {
                let names: Vec<String> = outside.iter().map(|d| d.to_string()).collect();
                return Err(
                    ServiceError::new(422, "not_in_frame", format!("not in the frame: {}", names.join(", ")))
                        .with_offending(&outside),
                );
            }
            let step = MutationStep {
                cut: cut_set,
                direction,
            };
            let record = mutate(&s.current, &step)?;
            if !record.after.is_closed() {
                return Err(ServiceError::new(500, "internal", "mutation produced a non-closed set"));
            }
            let movement = record
                .movement
                .iter()
                .map(|(from, to)| Movement {
                    from: from.endpoints(),
                    to: to.endpoints(),
                })
                .collect();
            s.current = record.after.clone();
            s.history.push(record);
            s.updated_at = SystemTime::now();
            if cfg!(debug_assertions) {
                assert_eq!(s.replay()?, *s.current.members(), "history replay diverged");
            }
            Ok(MutationView {
                session: s.view(),
                direction,
                cut: poly.diagonals_of(&step.cut).iter().map(|d| d.endpoints()).collect(),
                movement,
            })
        })
    }

    pub fn undo(&self, id: &str) -> Result<UndoView, ServiceError> {
        self.with_session(id, |s| {
            let undone = match s.history.pop() {
                Some(record) => {
                    s.current = record.before;
                    s.updated_at = SystemTime::now();
                    true
                }
                None => false,
            };
            Ok(UndoView {
                session: s.view(),
                undone,
            })
        })
    }

    pub fn render(&self, id: &str, format: &str, highlight: Highlight) -> Result<String, ServiceError> {
        self.with_session(id, |s| {
            let cut = s
                .history
                .last()
                .map(|r| r.step.cut.clone())
                .unwrap_or_else(|| s.poly.empty_set());
            let drawing = Drawing::new(&s.poly, s.current.members(), &cut, highlight);
            match format {
                "svg" => Ok(render::svg(&drawing)),
                "tikz" => Ok(render::tikz(&drawing)),
                "dot" => Ok(render::dot(&drawing)),
                other => Err(ServiceError::bad_request(format!("unknown render format `{other}`"))),
            }
        })
    }

    pub fn enumerate(
        &self,
        spec: PolygonSpec,
        kind: EnumerationKind,
        page: usize,
        page_size: usize,
    ) -> Result<Page, ServiceError> {
        if page_size == 0 || page_size > MAX_PAGE_SIZE {
            return Err(ServiceError::bad_request(format!(
                "page_size must be in 1..={MAX_PAGE_SIZE}"
            )));
        }
        let poly = self.polygon(spec);
        let skip = page.saturating_mul(page_size);
        let sets: Vec<DiagSet> = match kind {
            EnumerationKind::Closed => poly.enumerate_closed().skip(skip).take(page_size + 1).collect(),
            EnumerationKind::ClusterTilting => poly
                .enumerate_cluster_tilting()
                .skip(skip)
                .take(page_size + 1)
                .collect(),
        };
        let has_more = sets.len() > page_size;
        Ok(Page {
            spec: SpecDoc {
                n: spec.n(),
                m: spec.m(),
            },
            kind,
            page,
            page_size,
            has_more,
            items: sets
                .iter()
                .take(page_size)
                .map(|s| ConfigDocument::from_set(&poly, s))
                .collect(),
        })
    }

    pub fn snapshot(&self, id: &str) -> Result<Snapshot, ServiceError> {
        self.with_session(id, |s| {
            Ok(Snapshot {
                initial: ConfigDocument::from_set(&s.poly, &s.initial),
                steps: s
                    .history
                    .iter()
                    .map(|r| StepDoc {
                        diagonals: s.poly.diagonals_of(&r.step.cut).iter().map(|d| d.endpoints()).collect(),
                        direction: r.step.direction,
                    })
                    .collect(),
            })
        })
    }

    /// Start a new session by replaying a snapshot.
    pub fn restore(&self, snapshot: &Snapshot) -> Result<SessionView, ServiceError> {
        let spec = snapshot.initial.validate()?;
        let poly = self.polygon(spec);
        let members = snapshot.initial.to_set(&poly)?;
        let steps = snapshot
            .steps
            .iter()
            .map(|step| {
                let cut = poly.set_from_pairs(step.diagonals.iter().map(|&[a, b]| (a, b)))?;
                Ok(MutationStep {
                    cut,
                    direction: step.direction,
                })
            })
            .collect::<Result<Vec<_>, ServiceError>>()?;
        self.insert(poly, members, steps)
    }

    pub fn save_snapshot(&self, id: &str, path: &Path) -> Result<(), ServiceError> {
        let snap = self.snapshot(id)?;
        let text = serde_json::to_string_pretty(&snap).expect("snapshots always serialize");
        std::fs::write(path, text).map_err(|e| ServiceError::new(500, "io", e.to_string()))
    }

    pub fn load_snapshot(&self, path: &Path) -> Result<SessionView, ServiceError> {
        let text = std::fs::read_to_string(path).map_err(|e| ServiceError::new(500, "io", e.to_string()))?;
        let snap: Snapshot = serde_json::from_str(&text).map_err(|e| ServiceError::bad_request(e.to_string()))?;
        self.restore(&snap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> PolygonSpec {
        PolygonSpec::new(2, 3).unwrap()
    }

    const Y: [[u32; 2]; 4] = [[1, 4], [1, 6], [3, 6], [2, 5]];

    #[test]
    fn create_and_get() {
        let store = SessionStore::new();
        let view = store.create(spec(), Initial::Diagonals(Y.to_vec())).unwrap();
        assert!(view.closed);
        assert_eq!(view.nc, vec![[1, 6], [1, 8], [6, 9], [7, 10]]);
        assert_eq!(store.get(&view.id).unwrap(), view);
    }

    #[test]
    fn non_closed_rejected_with_suggestion() {
        let store = SessionStore::new();
        let err = store
            .create(spec(), Initial::Diagonals(vec![[1, 4], [1, 6], [3, 6]]))
            .unwrap_err();
        assert_eq!(err.status, 422);
        assert_eq!(err.code, "not_closed");
        assert_eq!(err.suggestion, Some(vec![[1, 4], [1, 6], [2, 5], [3, 6]]));
        assert_eq!(err.offending, vec![[2, 5]]);
    }

    #[test]
    fn empty_and_random() {
        let store = SessionStore::new();
        let e = store.create(spec(), Initial::Empty).unwrap();
        assert!(e.document.diagonals.is_empty());
        let a = store.create(spec(), Initial::RandomClosed { seed: 3 }).unwrap();
        let b = store.create(spec(), Initial::RandomClosed { seed: 3 }).unwrap();
        assert_eq!(a.document, b.document);
        assert!(a.closed);
    }

    #[test]
    fn mutate_undo_cycle() {
        let store = SessionStore::new();
        let x = vec![[1, 4], [1, 6], [1, 8], [7, 10], [6, 9]];
        let view = store.create(spec(), Initial::Diagonals(x)).unwrap();
        let before = view.document.diagonals.clone();
        let m = store.mutate(&view.id, &[[1, 6]], Direction::Backward).unwrap();
        assert_eq!(
            m.session.document.diagonals,
            vec![[1, 6], [1, 8], [2, 5], [6, 9], [7, 10]]
        );
        assert!(m.movement.contains(&Movement {
            from: [1, 4],
            to: [2, 5]
        }));
        assert_eq!(m.session.history_len, 1);
        let u = store.undo(&view.id).unwrap();
        assert!(u.undone);
        assert_eq!(u.session.document.diagonals, before);
        let again = store.undo(&view.id).unwrap();
        assert!(!again.undone);
        assert_eq!(again.session.document.diagonals, before);
    }

    #[test]
    fn mutate_rejects_non_frame() {
        let store = SessionStore::new();
        let view = store.create(spec(), Initial::Diagonals(Y.to_vec())).unwrap();
        let err = store
            .mutate(&view.id, &[[1, 6], [2, 5]], Direction::Forward)
            .unwrap_err();
        assert_eq!(err.code, "not_in_frame");
        assert_eq!(err.offending, vec![[2, 5]]);
        let err = store.mutate(&view.id, &[[2, 4]], Direction::Forward).unwrap_err();
        assert_eq!(err.offending, vec![[2, 4]]);
        assert!(store.mutate("nope", &[], Direction::Forward).is_err());
    }

    #[test]
    fn empty_cut_is_global_step() {
        let store = SessionStore::new();
        let view = store.create(spec(), Initial::Diagonals(Y.to_vec())).unwrap();
        let m = store.mutate(&view.id, &[], Direction::Backward).unwrap();
        let poly = store.polygon(spec());
        let expected: Vec<[u32; 2]> = {
            let mut v: Vec<_> = Y
                .iter()
                .map(|&[a, b]| poly.spec().tau_n(poly.spec().n_diagonal(a, b).unwrap()))
                .collect();
            v.sort();
            v.iter().map(|d| d.endpoints()).collect()
        };
        assert_eq!(m.session.document.diagonals, expected);
        assert!(m.session.closed);
    }

    #[test]
    fn snapshot_round_trip() {
        let store = SessionStore::new();
        let x = vec![[1, 4], [1, 6], [1, 8], [7, 10], [6, 9]];
        let view = store.create(spec(), Initial::Diagonals(x)).unwrap();
        store.mutate(&view.id, &[[1, 6]], Direction::Backward).unwrap();
        store.mutate(&view.id, &[[1, 6]], Direction::Backward).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.json");
        store.save_snapshot(&view.id, &path).unwrap();
        let restored = store.load_snapshot(&path).unwrap();
        let original = store.get(&view.id).unwrap();
        assert_eq!(restored.document, original.document);
        assert_eq!(restored.history_len, 2);
        assert_ne!(restored.id, original.id);
    }

    #[test]
    fn pages_match_enumeration() {
        let store = SessionStore::new();
        let poly = store.polygon(spec());
        let all: Vec<ConfigDocument> = poly
            .enumerate_closed()
            .map(|s| ConfigDocument::from_set(&poly, &s))
            .collect();
        let mut paged = Vec::new();
        for page in 0.. {
            let p = store.enumerate(spec(), EnumerationKind::Closed, page, 50).unwrap();
            paged.extend(p.items);
            if !p.has_more {
                break;
            }
        }
        assert_eq!(paged, all);
        assert!(store.enumerate(spec(), EnumerationKind::Closed, 0, 0).is_err());
        let ct = store
            .enumerate(PolygonSpec::new(1, 3).unwrap(), EnumerationKind::ClusterTilting, 0, 100)
            .unwrap();
        assert_eq!(ct.items.len(), 14);
        assert!(!ct.has_more);
    }
}
