/// Bit counts of the components of an index structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceReport {
    /// Text length the report is normalized by.
    pub n: usize,
    components: Vec<(&'static str, usize)>,
}

impl SpaceReport {
    pub fn new(n: usize) -> Self {
        SpaceReport {
            n,
            components: Vec::new(),
        }
    }

    pub fn with(mut self, name: &'static str, bits: usize) -> Self {
        self.components.push((name, bits));
        self
    }

    pub fn components(&self) -> &[(&'static str, usize)] {
        &self.components
    }

    pub fn bits(&self, name: &str) -> Option<usize> {
        self.components
            .iter()
            .find(|(c, _)| *c == name)
            .map(|&(_, b)| b)
    }

    pub fn total_bits(&self) -> usize {
        self.components.iter().map(|&(_, b)| b).sum()
    }

    pub fn bits_per_symbol(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.total_bits() as f64 / self.n as f64
        }
    }
}
