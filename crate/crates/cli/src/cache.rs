//! Mutex-guarded memo table for cohomology groups.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use flasque_core::exec::{CacheKey, CohomologyCache};
use flasque_core::CohomologyGroup;

#[derive(Default)]
pub struct MemoCache {
    map: Mutex<HashMap<CacheKey, Arc<CohomologyGroup>>>,
}

impl MemoCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl CohomologyCache for MemoCache {
    fn get(&self, key: &CacheKey) -> Option<Arc<CohomologyGroup>> {
        self.map.lock().unwrap().get(key).cloned()
    }

    fn insert(&self, key: CacheKey, value: Arc<CohomologyGroup>) {
        self.map.lock().unwrap().entry(key).or_insert(value);
    }
}
