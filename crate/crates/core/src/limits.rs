//! Resource caps shared by the polyhedral and operator layers.
//!
//! Caps are scoped per thread: [`Limits::scoped`] installs a value for the
//! duration of a closure, everything else reads [`limits()`].

use std::cell::Cell;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest dimension of an operator's input/output space.
    pub max_dim: usize,
    /// Largest ambient dimension of an intermediate polyhedron.
    pub max_ambient: usize,
    /// Largest number of pieces in an operator graph.
    pub max_pieces: usize,
    /// Largest number of remainder regions during a covering test.
    pub max_branches: usize,
    /// Default number of probes for the 3*-monotonicity sweep.
    pub probe_budget: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dim: 6,
            max_ambient: 24,
            max_pieces: 64,
            max_branches: 10_000,
            probe_budget: 64,
        }
    }
}

thread_local! {
    static CURRENT: Cell<Limits> = Cell::new(Limits::default());
}

pub fn limits() -> Limits {
    CURRENT.with(|c| c.get())
}

impl Limits {
    /// Runs `f` with `self` installed as the current limits of this thread.
    pub fn scoped<T>(self, f: impl FnOnce() -> T) -> T {
        struct Restore(Limits);
        impl Drop for Restore {
            fn drop(&mut self) {
                CURRENT.with(|c| c.set(self.0));
            }
        }
        let _restore = Restore(CURRENT.with(|c| c.replace(self)));
        f()
    }
}
