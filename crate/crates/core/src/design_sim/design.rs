use rand::seq::index;
use rand_distr::{Distribution, Geometric};
use serde::Serialize;

use super::rng::rng_from_seed;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DesignKind {
    ConstantColumn,
    Bernoulli,
}

impl DesignKind {
    pub fn label(&self) -> &'static str {
        match self {
            DesignKind::ConstantColumn => "cc",
            DesignKind::Bernoulli => "bernoulli",
        }
    }
}

/// Bipartite item–test incidence, stored in both directions.
#[derive(Debug, Clone, PartialEq)]
pub struct PoolingDesign {
    pub n: usize,
    pub m: usize,
    /// Exact item degree (constant column) or nominal expected degree `νm`
    /// (Bernoulli).
    pub delta: f64,
    /// Sorted test indices of each item.
    pub item_tests: Vec<Vec<usize>>,
    /// Sorted item indices of each test.
    pub test_items: Vec<Vec<usize>>,
    pub kind: DesignKind,
    pub seed: u64,
}

impl PoolingDesign {
    /// Build from per-item test lists; sorts them and derives the transpose.
    pub fn from_item_tests(
        n: usize,
        m: usize,
        delta: f64,
        mut item_tests: Vec<Vec<usize>>,
        kind: DesignKind,
        seed: u64,
    ) -> Result<Self> {
        if item_tests.len() != n {
            return Err(Error::Parameter(format!("{} item lists for n = {n}", item_tests.len())));
        }
        let mut test_items = vec![Vec::new(); m];
        for (x, tests) in item_tests.iter_mut().enumerate() {
            tests.sort_unstable();
            if tests.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Parameter(format!("item {x} appears twice in a test")));
            }
            for &a in tests.iter() {
                if a >= m {
                    return Err(Error::Parameter(format!("test index {a} >= m = {m}")));
                }
                test_items[a].push(x);
            }
        }
        Ok(Self {
            n,
            m,
            delta,
            item_tests,
            test_items,
            kind,
            seed,
        })
    }

    pub fn degree(&self, x: usize) -> usize {
        self.item_tests[x].len()
    }

    pub fn test_degree(&self, a: usize) -> usize {
        self.test_items[a].len()
    }

    /// `(Γ_min, Γ_max)`; `(0, 0)` for a design without tests.
    pub fn test_degree_extremes(&self) -> (usize, usize) {
        let degs = self.test_items.iter().map(Vec::len);
        (degs.clone().min().unwrap_or(0), degs.max().unwrap_or(0))
    }

    pub fn edges(&self) -> usize {
        self.item_tests.iter().map(Vec::len).sum()
    }
}

/// Every item joins `delta` distinct tests chosen uniformly at random.
pub fn constant_column_design(n: usize, m: usize, delta: usize, seed: u64) -> Result<PoolingDesign> {
    if n == 0 || m == 0 {
        return Err(Error::Parameter(format!("need n, m >= 1 (n = {n}, m = {m})")));
    }
    if delta == 0 || delta > m {
        return Err(Error::Parameter(format!("delta = {delta} not in [1, m = {m}]")));
    }
    let mut rng = rng_from_seed(seed);
    let item_tests = (0..n).map(|_| index::sample(&mut rng, m, delta).into_vec()).collect();
    PoolingDesign::from_item_tests(n, m, delta as f64, item_tests, DesignKind::ConstantColumn, seed)
}

/// Every (item, test) pair is included independently with probability `nu`.
pub fn bernoulli_design(n: usize, m: usize, nu: f64, seed: u64) -> Result<PoolingDesign> {
    if n == 0 || m == 0 {
        return Err(Error::Parameter(format!("need n, m >= 1 (n = {n}, m = {m})")));
    }
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(crate::error::domain("nu", nu, "(0, 1]"));
    }
    let mut item_tests = vec![Vec::new(); n];
    if nu == 1.0 {
        for tests in item_tests.iter_mut() {
            tests.extend(0..m);
        }
    } else {
        // skip directly between included pairs in item-major order
        let geo = Geometric::new(nu).map_err(|e| Error::Parameter(e.to_string()))?;
        let mut rng = rng_from_seed(seed);
        let total = n as u64 * m as u64;
        let mut pos = geo.sample(&mut rng);
        while pos < total {
            item_tests[(pos / m as u64) as usize].push((pos % m as u64) as usize);
            pos = pos.saturating_add(1).saturating_add(geo.sample(&mut rng));
        }
    }
    PoolingDesign::from_item_tests(n, m, nu * m as f64, item_tests, DesignKind::Bernoulli, seed)
}
