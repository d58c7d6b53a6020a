//! Execution context: resource budget, sweep executor and cohomology cache.

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::cohomology::CohomologyGroup;
use crate::group::DEFAULT_SUBGROUP_BOUND;
use crate::matrix::IntMatrix;

/// Default cap on the number of non-zero entries of a materialized
/// coboundary matrix.
pub const DEFAULT_BUDGET: usize = 5_000_000;

/// A unit of work handed to an [`Executor`].
pub type Task<'s> = Box<dyn FnOnce() + Send + 's>;

/// Runs independent tasks, possibly concurrently. Implementations must run
/// every task exactly once; ordering of side effects is up to the caller.
pub trait Executor: Sync {
    fn execute<'s>(&self, tasks: Vec<Task<'s>>);

    /// Number of workers; `1` means tasks run inline in order.
    fn parallelism(&self) -> usize {
        1
    }
}

/// Runs tasks one after another on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn execute<'s>(&self, tasks: Vec<Task<'s>>) {
        for t in tasks {
            t();
        }
    }
}

/// Maps `f` over `items` through the executor. The output order always
/// matches the input order.
pub fn par_map<T, R, F>(exec: &dyn Executor, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let mut slots: Vec<Option<R>> = items.iter().map(|_| None).collect();
    {
        let f = &f;
        let tasks: Vec<Task<'_>> = slots
            .iter_mut()
            .zip(items)
            .map(|(slot, item)| Box::new(move || *slot = Some(f(item))) as Task<'_>)
            .collect();
        exec.execute(tasks);
    }
    slots
        .into_iter()
        .map(|s| s.expect("executor skipped a task"))
        .collect()
}

/// Identity of a cohomology computation: the group table, the action of
/// the group generators and the degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CacheKey {
    pub table: Vec<usize>,
    pub generators: Vec<usize>,
    pub actions: Vec<IntMatrix>,
    pub degree: usize,
}

/// Memo table for cohomology groups. Implementations must be safe to call
/// from several workers at once.
pub trait CohomologyCache: Sync {
    fn get(&self, key: &CacheKey) -> Option<Arc<CohomologyGroup>>;
    fn insert(&self, key: CacheKey, value: Arc<CohomologyGroup>);
}

/// Cache that never stores anything.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoCache;

impl CohomologyCache for NoCache {
    fn get(&self, _: &CacheKey) -> Option<Arc<CohomologyGroup>> {
        None
    }
    fn insert(&self, _: CacheKey, _: Arc<CohomologyGroup>) {}
}

static SEQUENTIAL: Sequential = Sequential;
static NO_CACHE: NoCache = NoCache;

/// Shared settings for every computation.
#[derive(Clone, Copy)]
pub struct Context<'a> {
    /// Maximum non-zero entries in a materialized coboundary matrix.
    pub budget: usize,
    /// Maximum group order for subgroup enumeration.
    pub subgroup_bound: usize,
    pub executor: &'a dyn Executor,
    pub cache: &'a dyn CohomologyCache,
}

impl Default for Context<'static> {
    fn default() -> Self {
        Context {
            budget: DEFAULT_BUDGET,
            subgroup_bound: DEFAULT_SUBGROUP_BOUND,
            executor: &SEQUENTIAL,
            cache: &NO_CACHE,
        }
    }
}

impl<'a> Context<'a> {
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_executor<'b>(self, executor: &'b dyn Executor) -> Context<'b>
    where
        'a: 'b,
    {
        Context {
            budget: self.budget,
            subgroup_bound: self.subgroup_bound,
            executor,
            cache: self.cache,
        }
    }

    pub fn with_cache<'b>(self, cache: &'b dyn CohomologyCache) -> Context<'b>
    where
        'a: 'b,
    {
        Context {
            budget: self.budget,
            subgroup_bound: self.subgroup_bound,
            executor: self.executor,
            cache,
        }
    }

    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync,
    {
        par_map(self.executor, items, f)
    }
}

impl core::fmt::Debug for Context<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Context")
            .field("budget", &self.budget)
            .field("subgroup_bound", &self.subgroup_bound)
            .field("parallelism", &self.executor.parallelism())
            .finish()
    }
}
