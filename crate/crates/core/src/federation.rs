//! An in-process federation runtime.
//!
//! Federation executions are created with a list of FOM modules and an
//! optional MIM; federates may bring further modules when they join. Every
//! load goes through [`CurrentFom::load`], so a failed create or join leaves
//! nothing behind. MOM data is pulled synchronously: requests return their
//! report as a value.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use indexmap::IndexMap;

use crate::io::{parse_module, serialize_module, ModuleDocument};
use crate::merge::{CurrentFom, Handle, MergeReport, Rejection};
use crate::mim::default_mim;
use crate::model::{INTERACTION_ROOT, OBJECT_ROOT};
use crate::rule::RuleId;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FederationError {
    #[error("[{rule}] {message}")]
    Runtime { rule: RuleId, message: String },
    #[error(transparent)]
    Rejected(#[from] Rejection),
}

impl FederationError {
    fn new(rule: RuleId, message: impl Into<String>) -> Self {
        FederationError::Runtime {
            rule,
            message: message.into(),
        }
    }

    pub fn rule(&self) -> RuleId {
        match self {
            FederationError::Runtime { rule, .. } => *rule,
            FederationError::Rejected(r) => r.rule,
        }
    }
}

pub type Result<T> = std::result::Result<T, FederationError>;

/// A successful operation, recorded in order.
#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    Created {
        federation: String,
        mim: Option<ModuleDocument>,
        modules: Vec<ModuleDocument>,
    },
    Joined {
        federate: String,
        modules: Vec<ModuleDocument>,
    },
    Published {
        federate: String,
        class: String,
    },
    Subscribed {
        federate: String,
        class: String,
    },
    Resigned {
        federate: String,
    },
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |docs: &[ModuleDocument]| {
            docs.iter()
                .map(|d| d.name().to_owned())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            Event::Created {
                federation,
                mim,
                modules,
            } => write!(
                f,
                "created {federation} mim={} modules=[{}]",
                mim.as_ref().map_or("default", |m| m.name()),
                names(modules)
            ),
            Event::Joined { federate, modules } => {
                write!(f, "joined {federate} modules=[{}]", names(modules))
            }
            Event::Published { federate, class } => write!(f, "published {federate} {class}"),
            Event::Subscribed { federate, class } => write!(f, "subscribed {federate} {class}"),
            Event::Resigned { federate } => write!(f, "resigned {federate}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Federate {
    pub name: String,
    pub handle: u64,
    /// Modules named in this federate's join call, as supplied.
    pub joined_modules: Vec<ModuleDocument>,
    pub publications: BTreeSet<Handle>,
    pub subscriptions: BTreeSet<Handle>,
}

impl Federate {
    pub fn module_designators(&self) -> Vec<String> {
        self.joined_modules
            .iter()
            .map(|d| d.name().to_owned())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomKind {
    RequestFomModuleData,
    ReportFomModuleData,
    RequestMimData,
    ReportMimData,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scope {
    Federation,
    Federate(String),
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Federation => f.write_str("federation"),
            Scope::Federate(name) => write!(f, "federate:{name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomInteraction {
    pub kind: MomKind,
    pub scope: Scope,
    pub module_index: Option<usize>,
    pub payload: Arc<[u8]>,
}

/// Values of the MOM attributes at one point in time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomSnapshot {
    pub federation_name: String,
    pub module_designators: Vec<String>,
    pub mim_designator: String,
    pub current_fdd: String,
    pub generation: u64,
    /// Joined federates in join order with their own designator lists.
    pub federates: Vec<(String, Vec<String>)>,
}

impl MomSnapshot {
    /// `key=value` lines. The FDD itself is summarised by its length.
    pub fn to_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("HLAfederationName={}", self.federation_name),
            format!(
                "HLAFOMmoduleDesignatorList={}",
                self.module_designators.join(",")
            ),
            format!("HLAMIMDesignator={}", self.mim_designator),
            format!("HLAcurrentFDD.bytes={}", self.current_fdd.len()),
            format!("generation={}", self.generation),
        ];
        for (name, modules) in &self.federates {
            lines.push(format!(
                "federate.{name}.HLAFOMmoduleDesignatorList={}",
                modules.join(",")
            ));
        }
        lines
    }
}

#[derive(Debug, Clone)]
pub struct FederationExecution {
    name: String,
    current_fom: CurrentFom,
    mim: ModuleDocument,
    /// Document first supplied for each loaded module, keyed by name.
    documents: BTreeMap<String, ModuleDocument>,
    federates: IndexMap<String, Federate>,
    next_federate_handle: u64,
    event_log: Vec<Event>,
}

impl FederationExecution {
    /// Creates an execution outside any registry.
    pub fn create(
        name: &str,
        modules: Vec<ModuleDocument>,
        mim: Option<ModuleDocument>,
    ) -> Result<Self> {
        if name.is_empty() {
            return Err(FederationError::new(
                RuleId::InvalidRequest,
                "federation name is empty",
            ));
        }
        if modules.is_empty() {
            return Err(FederationError::new(
                RuleId::InvalidRequest,
                "at least one FOM module is required",
            ));
        }
        let mim_doc = mim
            .clone()
            .unwrap_or_else(|| ModuleDocument::from(default_mim()));
        let mut current_fom = CurrentFom::new(mim_doc.module.clone())?;
        let set: Vec<_> = modules.iter().map(|d| d.module.clone()).collect();
        current_fom.load(&set)?;
        let mut fed = FederationExecution {
            name: name.to_owned(),
            current_fom,
            mim: mim_doc,
            documents: BTreeMap::new(),
            federates: IndexMap::new(),
            next_federate_handle: 0,
            event_log: Vec::new(),
        };
        fed.remember(&modules);
        fed.event_log.push(Event::Created {
            federation: name.to_owned(),
            mim,
            modules,
        });
        Ok(fed)
    }

    fn remember(&mut self, modules: &[ModuleDocument]) {
        for doc in modules {
            self.documents
                .entry(doc.name().to_owned())
                .or_insert_with(|| doc.clone());
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn current_fom(&self) -> &CurrentFom {
        &self.current_fom
    }

    pub fn event_log(&self) -> &[Event] {
        &self.event_log
    }

    pub fn federate(&self, name: &str) -> Option<&Federate> {
        self.federates.get(name)
    }

    pub fn federates(&self) -> impl Iterator<Item = &Federate> {
        self.federates.values()
    }

    /// Joins a federate, loading `modules` atomically first. A MIM among
    /// them is rejected.
    pub fn join(
        &mut self,
        federate: &str,
        modules: Vec<ModuleDocument>,
    ) -> Result<(u64, Option<MergeReport>)> {
        if self.federates.contains_key(federate) {
            return Err(FederationError::new(
                RuleId::DuplicateFederate,
                format!("federate {federate} already joined {}", self.name),
            ));
        }
        let report = if modules.is_empty() {
            None
        } else {
            let set: Vec<_> = modules.iter().map(|d| d.module.clone()).collect();
            Some(self.current_fom.load(&set)?)
        };
        self.remember(&modules);
        self.next_federate_handle += 1;
        let handle = self.next_federate_handle;
        self.federates.insert(
            federate.to_owned(),
            Federate {
                name: federate.to_owned(),
                handle,
                joined_modules: modules.clone(),
                publications: BTreeSet::new(),
                subscriptions: BTreeSet::new(),
            },
        );
        self.event_log.push(Event::Joined {
            federate: federate.to_owned(),
            modules,
        });
        Ok((handle, report))
    }

    pub fn mom_snapshot(&self) -> MomSnapshot {
        MomSnapshot {
            federation_name: self.name.clone(),
            module_designators: self.current_fom.module_designators().to_vec(),
            mim_designator: self.current_fom.mim_designator().to_owned(),
            current_fdd: self.current_fom.fdd(),
            generation: self.current_fom.generation(),
            federates: self
                .federates
                .values()
                .map(|f| (f.name.clone(), f.module_designators()))
                .collect(),
        }
    }

    /// Returns the original document of the module at `index` (0-based) of
    /// the scoped designator list.
    pub fn request_module_data(&self, scope: &Scope, index: usize) -> Result<MomInteraction> {
        let payload = match scope {
            Scope::Federation => {
                let designators = self.current_fom.module_designators();
                let name = designators
                    .get(index)
                    .ok_or_else(|| out_of_range(index, designators.len()))?;
                self.documents[name].source.clone()
            }
            Scope::Federate(name) => {
                let federate = self
                    .federates
                    .get(name)
                    .ok_or_else(|| unknown_federate(name))?;
                let doc = federate
                    .joined_modules
                    .get(index)
                    .ok_or_else(|| out_of_range(index, federate.joined_modules.len()))?;
                doc.source.clone()
            }
        };
        Ok(MomInteraction {
            kind: MomKind::ReportFomModuleData,
            scope: scope.clone(),
            module_index: Some(index),
            payload,
        })
    }

    pub fn request_mim_data(&self) -> MomInteraction {
        MomInteraction {
            kind: MomKind::ReportMimData,
            scope: Scope::Federation,
            module_index: None,
            payload: self.mim.source.clone(),
        }
    }

    /// Resolves a fully-qualified object class name, or a leaf name that is
    /// unique in the Current FOM.
    pub fn get_object_class_handle(&self, class: &str) -> Result<Handle> {
        let handles = self.current_fom.handles();
        let fqn = if class.starts_with(&format!("{OBJECT_ROOT}.")) || class == OBJECT_ROOT {
            class.to_owned()
        } else if class.contains('.') {
            format!("{OBJECT_ROOT}.{class}")
        } else {
            let suffix = format!(".{class}");
            let matches: Vec<&str> = handles
                .object_classes()
                .map(|(n, _)| n)
                .filter(|n| n.ends_with(&suffix))
                .collect();
            match matches.as_slice() {
                [one] => (*one).to_owned(),
                [] => return Err(unknown_class(class)),
                many => {
                    return Err(FederationError::new(
                        RuleId::AmbiguousClass,
                        format!("{class} matches {}", many.join(", ")),
                    ))
                }
            }
        };
        handles
            .object_class(&fqn)
            .ok_or_else(|| unknown_class(class))
    }

    /// Looks up an interaction class by fully-qualified name.
    pub fn get_interaction_class_handle(&self, class: &str) -> Result<Handle> {
        let fqn = if class.starts_with(INTERACTION_ROOT) {
            class.to_owned()
        } else {
            format!("{INTERACTION_ROOT}.{class}")
        };
        self.current_fom
            .handles()
            .interaction_class(&fqn)
            .ok_or_else(|| unknown_class(class))
    }

    pub fn publish(&mut self, federate: &str, class: &str) -> Result<Handle> {
        let handle = self.get_object_class_handle(class)?;
        let f = self
            .federates
            .get_mut(federate)
            .ok_or_else(|| unknown_federate(federate))?;
        f.publications.insert(handle);
        self.event_log.push(Event::Published {
            federate: federate.to_owned(),
            class: class.to_owned(),
        });
        Ok(handle)
    }

    pub fn subscribe(&mut self, federate: &str, class: &str) -> Result<Handle> {
        let handle = self.get_object_class_handle(class)?;
        let f = self
            .federates
            .get_mut(federate)
            .ok_or_else(|| unknown_federate(federate))?;
        f.subscriptions.insert(handle);
        self.event_log.push(Event::Subscribed {
            federate: federate.to_owned(),
            class: class.to_owned(),
        });
        Ok(handle)
    }

    /// Removes a federate. Its modules stay loaded.
    pub fn resign(&mut self, federate: &str) -> Result<()> {
        self.federates
            .shift_remove(federate)
            .ok_or_else(|| unknown_federate(federate))?;
        self.event_log.push(Event::Resigned {
            federate: federate.to_owned(),
        });
        Ok(())
    }

    /// Rebuilds an execution by re-applying a log from scratch.
    pub fn replay(log: &[Event]) -> Result<FederationExecution> {
        let Some(Event::Created {
            federation,
            mim,
            modules,
        }) = log.first()
        else {
            return Err(FederationError::new(
                RuleId::InvalidRequest,
                "log does not start with a creation",
            ));
        };
        let mut fed = FederationExecution::create(federation, modules.clone(), mim.clone())?;
        for event in &log[1..] {
            match event {
                Event::Created { .. } => {
                    return Err(FederationError::new(
                        RuleId::InvalidRequest,
                        "second creation in log",
                    ))
                }
                Event::Joined { federate, modules } => {
                    fed.join(federate, modules.clone())?;
                }
                Event::Published { federate, class } => {
                    fed.publish(federate, class)?;
                }
                Event::Subscribed { federate, class } => {
                    fed.subscribe(federate, class)?;
                }
                Event::Resigned { federate } => fed.resign(federate)?,
            }
        }
        Ok(fed)
    }
}

fn out_of_range(index: usize, len: usize) -> FederationError {
    FederationError::new(
        RuleId::IndexOutOfRange,
        format!("module index {index} out of range (designator list has {len})"),
    )
}

fn unknown_federate(name: &str) -> FederationError {
    FederationError::new(
        RuleId::UnknownFederate,
        format!("no joined federate named {name}"),
    )
}

fn unknown_class(name: &str) -> FederationError {
    FederationError::new(
        RuleId::UnknownClass,
        format!("no object class {name} in the current FOM"),
    )
}

/// Checks that an FDD payload parses back to the model it was produced from.
pub fn fdd_parses_back(fom: &CurrentFom) -> bool {
    match parse_module(fom.fdd().as_bytes()) {
        Ok(parsed) => serialize_module(&parsed.module) == fom.fdd(),
        Err(_) => false,
    }
}

/// Registry of live federation executions.
///
/// Operations on one execution are serialized by its own lock; distinct
/// executions proceed independently.
#[derive(Debug, Default)]
pub struct Rti {
    executions: RwLock<BTreeMap<String, Arc<Mutex<FederationExecution>>>>,
}

impl Rti {
    pub fn new() -> Self {
        Rti::default()
    }

    pub fn create_federation_execution(
        &self,
        name: &str,
        modules: Vec<ModuleDocument>,
        mim: Option<ModuleDocument>,
    ) -> Result<MomSnapshot> {
        let mut executions = self.executions.write().expect("registry lock");
        if executions.contains_key(name) {
            return Err(FederationError::new(
                RuleId::DuplicateFederation,
                format!("federation execution {name} already exists"),
            ));
        }
        let fed = FederationExecution::create(name, modules, mim)?;
        let snapshot = fed.mom_snapshot();
        executions.insert(name.to_owned(), Arc::new(Mutex::new(fed)));
        Ok(snapshot)
    }

    pub fn destroy_federation_execution(&self, name: &str) -> Result<()> {
        let mut executions = self.executions.write().expect("registry lock");
        let fed = executions
            .get(name)
            .ok_or_else(|| unknown_federation(name))?;
        let joined: Vec<String> = fed
            .lock()
            .expect("execution lock")
            .federates()
            .map(|f| f.name.clone())
            .collect();
        if !joined.is_empty() {
            return Err(FederationError::new(
                RuleId::FederatesJoined,
                format!(
                    "federation {name} still has joined federates: {}",
                    joined.join(", ")
                ),
            ));
        }
        executions.remove(name);
        Ok(())
    }

    /// Runs `op` with exclusive access to one execution.
    pub fn with<T>(
        &self,
        federation: &str,
        op: impl FnOnce(&mut FederationExecution) -> Result<T>,
    ) -> Result<T> {
        let fed = self
            .executions
            .read()
            .expect("registry lock")
            .get(federation)
            .cloned()
            .ok_or_else(|| unknown_federation(federation))?;
        let mut guard = fed.lock().expect("execution lock");
        op(&mut guard)
    }

    pub fn join_federation_execution(
        &self,
        federate: &str,
        federation: &str,
        modules: Vec<ModuleDocument>,
    ) -> Result<(u64, Option<MergeReport>)> {
        self.with(federation, |fed| fed.join(federate, modules))
    }

    pub fn mom_snapshot(&self, federation: &str) -> Result<MomSnapshot> {
        self.with(federation, |fed| Ok(fed.mom_snapshot()))
    }

    pub fn request_module_data(
        &self,
        federation: &str,
        scope: &Scope,
        index: usize,
    ) -> Result<MomInteraction> {
        self.with(federation, |fed| fed.request_module_data(scope, index))
    }

    pub fn request_mim_data(&self, federation: &str) -> Result<MomInteraction> {
        self.with(federation, |fed| Ok(fed.request_mim_data()))
    }

    pub fn get_object_class_handle(&self, federation: &str, class: &str) -> Result<Handle> {
        self.with(federation, |fed| fed.get_object_class_handle(class))
    }

    pub fn publish(&self, federation: &str, federate: &str, class: &str) -> Result<Handle> {
        self.with(federation, |fed| fed.publish(federate, class))
    }

    pub fn subscribe(&self, federation: &str, federate: &str, class: &str) -> Result<Handle> {
        self.with(federation, |fed| fed.subscribe(federate, class))
    }

    pub fn resign_federate(&self, federation: &str, federate: &str) -> Result<()> {
        self.with(federation, |fed| fed.resign(federate))
    }

    pub fn federation_names(&self) -> Vec<String> {
        self.executions
            .read()
            .expect("registry lock")
            .keys()
            .cloned()
            .collect()
    }
}

fn unknown_federation(name: &str) -> FederationError {
    FederationError::new(
        RuleId::UnknownFederation,
        format!("no federation execution named {name}"),
    )
}
