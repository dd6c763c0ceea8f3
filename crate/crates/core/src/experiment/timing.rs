use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::scales::{for_each_bronkerbosch, ContraFinder, ScaleCounts};
use crate::{Error, Execution, FormalContext, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    ContraFinder,
    BronKerbosch,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::ContraFinder => "contrafinder",
            Algorithm::BronKerbosch => "bronkerbosch",
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "contrafinder" => Ok(Algorithm::ContraFinder),
            "bronkerbosch" => Ok(Algorithm::BronKerbosch),
            other => Err(Error::InvalidArgument(format!("unknown algorithm {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmTiming {
    pub seconds: f64,
    pub finished: bool,
    /// Total number of scales, when finished.
    pub count: Option<u128>,
    pub max_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingReport {
    pub algorithms: BTreeMap<&'static str, AlgorithmTiming>,
    /// Whether all finished algorithms agree on count and maximal dimension.
    pub consistent: bool,
}

/// Wall-clock time of scale counting per algorithm. A run that passes
/// `timeout` is recorded as unfinished.
pub fn benchmark_enumeration(
    ctx: &FormalContext,
    algorithms: &[Algorithm],
    timeout: Duration,
    exec: Execution,
) -> TimingReport {
    let mut out = BTreeMap::new();
    let mut results = Vec::new();
    for &alg in algorithms {
        let start = Instant::now();
        let deadline = start + timeout;
        let counts = match alg {
            Algorithm::ContraFinder => ContraFinder::new(ctx).with_deadline(deadline).try_count(exec),
            Algorithm::BronKerbosch => {
                let mut counts = ScaleCounts::default();
                let flow = for_each_bronkerbosch(ctx, Some(deadline), |s| {
                    counts.add(s.dimension(), 1);
                    ControlFlow::Continue(())
                });
                flow.is_continue().then_some(counts)
            }
        };
        let seconds = start.elapsed().as_secs_f64();
        if let Some(c) = &counts {
            results.push((c.total, c.max_dimension()));
        }
        out.insert(
            alg.name(),
            AlgorithmTiming {
                seconds,
                finished: counts.is_some(),
                count: counts.as_ref().map(|c| c.total),
                max_dim: counts.as_ref().map(|c| c.max_dimension()),
            },
        );
    }
    let consistent = results.windows(2).all(|w| w[0] == w[1]);
    TimingReport {
        algorithms: out,
        consistent,
    }
}
