use cupid_core::Join;

/// Runs both halves of a join on the current rayon pool.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl Join for Rayon {
    fn join<A, B, RA, RB>(&self, a: A, b: B) -> (RA, RB)
    where
        A: FnOnce() -> RA + Send,
        B: FnOnce() -> RB + Send,
        RA: Send,
        RB: Send,
    {
        rayon::join(a, b)
    }
}
