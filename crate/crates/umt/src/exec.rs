//! Thread-pool executor for miner sweeps.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use umt_core::miner::Executor;

/// Runs jobs on scoped worker threads. Jobs are handed out one at a time
/// and results come back in job order, so output never depends on the
/// worker count.
#[derive(Debug, Clone, Copy)]
pub struct Threaded {
    workers: usize,
}

impl Threaded {
    pub fn new(workers: usize) -> Self {
        Threaded {
            workers: workers.max(1),
        }
    }

    /// One worker per available core.
    pub fn available() -> Self {
        Threaded::new(thread::available_parallelism().map_or(1, |n| n.get()))
    }

    pub fn workers(&self) -> usize {
        self.workers
    }
}

impl Executor for Threaded {
    fn run<T, F>(&self, jobs: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        let next = AtomicUsize::new(0);
        let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..jobs).map(|_| None).collect());
        thread::scope(|scope| {
            for _ in 0..self.workers.min(jobs) {
                scope.spawn(|| loop {
                    let j = next.fetch_add(1, Ordering::Relaxed);
                    if j >= jobs {
                        break;
                    }
                    let out = f(j);
                    slots.lock().unwrap()[j] = Some(out);
                });
            }
        });
        slots
            .into_inner()
            .unwrap()
            .into_iter()
            .map(|t| t.expect("every job ran"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use umt_core::miner::{sweep, EnumerationSpec, Sequential};

    #[test]
    fn same_tally_as_sequential() {
        let spec = EnumerationSpec::binary(3);
        let visit = |c: u64, s: &umt_core::Structure, acc: &mut umt_core::miner::Tally| {
            acc.add("tuples", s.relation("R").unwrap().len() as u64);
            if c.count_ones() == 2 {
                acc.sample("pairs", c);
            }
        };
        let a = sweep(&Sequential, &spec, visit).unwrap();
        for w in [1, 3, 8] {
            assert_eq!(sweep(&Threaded::new(w), &spec, visit).unwrap(), a);
        }
    }
}
