//! Running catalogs against a realization.

use std::time::Instant;

use rayon::prelude::*;

use crate::relations::dsl::{CatalogEntry, RelationSchema};
use crate::relations::engine::{instantiate, residual, Instance, Realization};
use crate::report::{Entry, Status};

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub mode_bound: u32,
    pub timings: bool,
}

fn check_instance<R: Realization>(
    suite: &str,
    schema: &RelationSchema,
    inst: &Instance,
    real: &R,
    timings: bool,
) -> Entry {
    let start = Instant::now();
    let res = residual(schema, inst, real);
    let micros = timings.then(|| start.elapsed().as_micros() as u64);
    let (holds, text) = match res {
        Ok(v) if real.is_zero(&v) => (true, None),
        Ok(v) => (false, Some(real.render(&v))),
        Err(e) => (false, Some(format!("error: {e}"))),
    };
    let status = match (schema.informational, holds) {
        (true, _) => Status::Informational,
        (false, true) => Status::Pass,
        (false, false) => Status::Fail,
    };
    let mut entry = Entry::new(suite, &schema.id, status);
    for (name, v) in inst.describe(schema) {
        entry = entry.with_param(&name, v);
    }
    entry.residual = if schema.informational && holds { Some("0".into()) } else { text };
    entry.micros = micros;
    entry
}

/// Instantiates and evaluates every entry. Output order follows the catalog
/// and the instance enumeration, independent of the thread count.
pub fn check_entries<R: Realization>(
    suite: &str,
    entries: &[CatalogEntry],
    real: &R,
    opts: CheckOptions,
) -> Vec<Entry> {
    let mut work: Vec<(&RelationSchema, Instance)> = Vec::new();
    let mut slots: Vec<Result<usize, Entry>> = Vec::new();
    for e in entries {
        match e {
            CatalogEntry::Unstated { id, reason } => {
                slots.push(Err(Entry::new(suite, id, Status::Skipped).with_residual(reason.clone())));
            }
            CatalogEntry::Relation(s) => {
                for inst in instantiate(s, real, opts.mode_bound) {
                    slots.push(Ok(work.len()));
                    work.push((s, inst));
                }
            }
        }
    }
    let mut done: Vec<Option<Entry>> = work
        .par_iter()
        .map(|(s, inst)| Some(check_instance(suite, s, inst, real, opts.timings)))
        .collect();
    slots
        .into_iter()
        .map(|slot| match slot {
            Ok(k) => done[k].take().expect("each instance reported once"),
            Err(e) => e,
        })
        .collect()
}

/// Entries with the negative-root mirror of each relation appended after it.
pub fn with_mirrors(entries: &[CatalogEntry]) -> Vec<CatalogEntry> {
    let mut out = Vec::with_capacity(entries.len() * 2);
    for e in entries {
        out.push(e.clone());
        if let CatalogEntry::Relation(s) = e {
            out.push(CatalogEntry::Relation(s.mirror()));
        }
    }
    out
}
