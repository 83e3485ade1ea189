use super::rng::GenRng;

/// Precedence DAG of one job with local operation numbers `1..=size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobDag {
    pub size: u32,
    pub layers: Vec<Vec<u32>>,
    /// Ascending.
    pub arcs: Vec<(u32, u32)>,
    /// The one forced successor arc of every non-final-layer operation.
    pub mandatory: Vec<(u32, u32)>,
}

impl JobDag {
    /// Pairs between consecutive layers that were eligible for the
    /// probabilistic draw, and how many of them became arcs.
    pub fn optional_pair_counts(&self) -> (usize, usize) {
        let pairs: usize = self
            .layers
            .windows(2)
            .map(|w| w[0].len() * w[1].len())
            .sum();
        let candidates = pairs - self.mandatory.len();
        let drawn = self.arcs.len() - self.mandatory.len();
        (candidates, drawn)
    }
}

/// Draws `o_j` in `[o_min, o_max]`, then layers of 1 to 4 operations (the
/// last one truncated to reach `o_j`), then arcs between consecutive layers.
pub fn gen_job_dag(rng: &mut GenRng, o_min: u32, o_max: u32) -> JobDag {
    let size = rng.uniform(o_min.into(), o_max.into()) as u32;
    gen_layered_dag(rng, size)
}

/// Layered DAG with exactly `size` operations.
pub fn gen_layered_dag(rng: &mut GenRng, size: u32) -> JobDag {
    let mut layers: Vec<Vec<u32>> = Vec::new();
    let mut next = 1;
    while next <= size {
        let width = (rng.uniform(1, 4) as u32).min(size - next + 1);
        layers.push((next..next + width).collect());
        next += width;
    }
    let mut arcs = Vec::new();
    let mut mandatory = Vec::new();
    for pair in layers.windows(2) {
        let (cur, nxt) = (&pair[0], &pair[1]);
        for &v in cur {
            let w = nxt[rng.index(nxt.len())];
            mandatory.push((v, w));
            for &u in nxt {
                if u == w || rng.chance(85, 100) {
                    arcs.push((v, u));
                }
            }
        }
    }
    arcs.sort_unstable();
    JobDag {
        size,
        layers,
        arcs,
        mandatory,
    }
}
