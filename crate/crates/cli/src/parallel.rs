//! Thread-pool executor for subgroup sweeps.

use flasque_core::exec::{Executor, Task};
use rayon::{ThreadPool, ThreadPoolBuilder};

pub struct RayonExecutor {
    pool: ThreadPool,
}

impl RayonExecutor {
    /// `threads = 0` lets rayon pick the number of workers.
    pub fn new(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(RayonExecutor { pool })
    }
}

impl Executor for RayonExecutor {
    fn execute<'s>(&self, tasks: Vec<Task<'s>>) {
        if tasks.len() <= 1 {
            tasks.into_iter().for_each(|t| t());
            return;
        }
        self.pool.in_place_scope(|s| {
            for t in tasks {
                s.spawn(move |_| t());
            }
        });
    }

    fn parallelism(&self) -> usize {
        self.pool.current_num_threads()
    }
}
