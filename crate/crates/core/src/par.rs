//! Data-parallel helpers. With the `parallel` feature (default) work is spread
//! over a rayon pool; without it, or with one worker, everything runs
//! sequentially. Results are always returned in input order.

/// How many workers a scan may use. `Sequential` never touches rayon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Parallelism {
    Sequential,
    /// Rayon's global pool.
    #[default]
    Global,
    /// A dedicated pool with this many threads.
    Threads(usize),
}

impl Parallelism {
    pub fn from_workers(workers: usize) -> Self {
        match workers {
            0 => Parallelism::Global,
            1 => Parallelism::Sequential,
            n => Parallelism::Threads(n),
        }
    }
}

/// Ordered map over `items`.
pub fn map<T, R, F>(items: Vec<T>, par: Parallelism, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        match par {
            Parallelism::Sequential => items.into_iter().map(f).collect(),
            Parallelism::Global => items.into_par_iter().map(f).collect(),
            Parallelism::Threads(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(|| items.into_par_iter().map(&f).collect()),
                Err(_) => items.into_iter().map(f).collect(),
            },
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = par;
        items.into_iter().map(f).collect()
    }
}
