//! Sequential or rayon-backed evaluation of independent work items.
//!
//! With the `parallel` feature disabled, [`Execution::Parallel`] silently
//! runs sequentially; results are identical and in input order either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub(crate) fn map<T: Sync, R: Send>(self, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// Maximum of `f` over `items`, stopping early once a value exceeds `cap`.
    /// The result is clamped to `cap + 1`, so it is deterministic even when
    /// the parallel sweep stops at a different item.
    pub(crate) fn max_capped<T: Sync>(self, items: &[T], cap: usize, f: impl Fn(&T) -> usize + Sync + Send) -> usize {
        let clamp = |x: usize| x.min(cap + 1);
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                let r = items
                    .par_iter()
                    .try_fold(
                        || 0,
                        |acc, t| {
                            let v = clamp(f(t));
                            if v > cap {
                                Err(())
                            } else {
                                Ok(acc.max(v))
                            }
                        },
                    )
                    .try_reduce(|| 0, |a, b| Ok(a.max(b)));
                r.unwrap_or(cap + 1)
            }
            _ => {
                let mut best = 0;
                for t in items {
                    best = best.max(clamp(f(t)));
                    if best > cap {
                        break;
                    }
                }
                best
            }
        }
    }
}
