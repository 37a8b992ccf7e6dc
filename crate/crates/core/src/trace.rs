/// Work counters filled in by the instrumented query paths.
///
/// `nodes` counts tree nodes entered by root-to-leaf descents. Walking back up
/// a path that was already descended does not count again.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub nodes: u64,
    /// Band select probes on small-alphabet node sequences.
    pub band_probes: u64,
    /// Binary searches over the children of a node.
    pub child_searches: u64,
    /// Comparisons performed inside those searches.
    pub search_steps: u64,
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub(crate) fn visit(&mut self) {
        self.nodes += 1;
    }

    pub fn merge(&mut self, other: &Trace) {
        self.nodes += other.nodes;
        self.band_probes += other.band_probes;
        self.child_searches += other.child_searches;
        self.search_steps += other.search_steps;
    }
}
