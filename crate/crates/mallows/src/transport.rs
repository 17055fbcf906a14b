#![doc = include_str!("../../../book/src/transport.md")]

use serde::{Deserialize, Serialize};

use crate::stable_law::validate_alpha;
use crate::{Error, Result};

/// Largest per-side atom count the brute-force oracle accepts.
pub const ORACLE_ATOM_LIMIT: usize = 8;

/// A sorted sample standing in for a distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    values: Vec<f64>,
}

impl EmpiricalDistribution {
    /// Wraps an already-sorted sample; rejects empty, unsorted, or
    /// non-finite input.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidEmpirical("empty sample".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidEmpirical("non-finite entry".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidEmpirical("not sorted ascending".into()));
        }
        Ok(Self { values })
    }

    /// Sorts, then wraps.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        values.sort_by(f64::total_cmp);
        Self::new(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Empirical quantile at `u` in (0, 1): the order statistic with index
    /// `ceil(u m)`.
    pub fn quantile(&self, u: f64) -> f64 {
        assert!(u > 0.0 && u < 1.0, "u must lie in (0,1)");
        let m = self.values.len();
        let idx = ((u * m as f64).ceil() as usize).clamp(1, m);
        self.values[idx - 1]
    }
}

/// A finite law given by atoms at strictly increasing locations with
/// probabilities summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiscreteLawRaw", into = "DiscreteLawRaw")]
pub struct DiscreteLaw {
    atoms: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DiscreteLawRaw {
    atoms: Vec<(f64, f64)>,
}

impl TryFrom<DiscreteLawRaw> for DiscreteLaw {
    type Error = Error;
    fn try_from(raw: DiscreteLawRaw) -> Result<Self> {
        DiscreteLaw::new(raw.atoms)
    }
}

impl From<DiscreteLaw> for DiscreteLawRaw {
    fn from(law: DiscreteLaw) -> Self {
        DiscreteLawRaw { atoms: law.atoms }
    }
}

impl DiscreteLaw {
    /// Probability-mass tolerance: the atom probabilities must sum to 1
    /// within this.
    pub const MASS_TOLERANCE: f64 = 1e-12;

    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidDiscreteLaw("no atoms".into()));
        }
        if atoms.iter().any(|(x, p)| !x.is_finite() || !p.is_finite()) {
            return Err(Error::InvalidDiscreteLaw("non-finite atom".into()));
        }
        if atoms.iter().any(|&(_, p)| p <= 0.0) {
            return Err(Error::InvalidDiscreteLaw("non-positive probability".into()));
        }
        if atoms.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidDiscreteLaw(
                "locations not strictly increasing".into(),
            ));
        }
        let mass: f64 = atoms.iter().map(|&(_, p)| p).sum();
        if (mass - 1.0).abs() > Self::MASS_TOLERANCE {
            return Err(Error::InvalidDiscreteLaw(format!(
                "probabilities sum to {mass}, not 1"
            )));
        }
        Ok(Self { atoms })
    }

    /// Point mass at `x`.
    pub fn point(x: f64) -> Self {
        Self::new(vec![(x, 1.0)]).expect("point mass is always valid")
    }

    /// Uniform law on the given strictly increasing locations.
    pub fn uniform_on(locations: &[f64]) -> Result<Self> {
        let p = 1.0 / locations.len() as f64;
        Self::new(locations.iter().map(|&x| (x, p)).collect())
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// Mean of the law.
    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|&(x, p)| x * p).sum()
    }

    /// `E{|X|^alpha 1(|X| > threshold)}`, exact.
    pub fn abs_moment_above(&self, threshold: f64, alpha: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|&&(x, _)| x.abs() > threshold)
            .map(|&(x, p)| x.abs().powf(alpha) * p)
            .sum()
    }

    /// `E{X 1(|X| <= threshold)}`, exact.
    pub fn mean_within(&self, threshold: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|&&(x, _)| x.abs() <= threshold)
            .map(|&(x, p)| x * p)
            .sum()
    }

    /// `E{X 1(|X| > threshold)}`, exact.
    pub fn mean_above(&self, threshold: f64) -> f64 {
        self.mean() - self.mean_within(threshold)
    }

    /// Variance of the truncated part `X 1(|X| <= threshold)`.
    pub fn truncated_variance(&self, threshold: f64) -> f64 {
        let m: f64 = self.mean_within(threshold);
        let m2: f64 = self
            .atoms
            .iter()
            .filter(|&&(x, _)| x.abs() <= threshold)
            .map(|&(x, p)| x * x * p)
            .sum();
        m2 - m * m
    }
}

/// A Mallows distance value: `cost` is `d_alpha^alpha = E|X - Y|^alpha`
/// under the optimal coupling, `root` is `cost^{1/alpha} = d_alpha`.
///
/// Both are reported because only `root` is a metric for alpha >= 1 and only
/// `cost` is for alpha <= 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceEstimate {
    pub alpha: f64,
    pub cost: f64,
    pub root: f64,
}

impl DistanceEstimate {
    fn from_cost(alpha: f64, cost: f64) -> Self {
        let cost = cost.max(0.0);
        Self { alpha, cost, root: cost.powf(1.0 / alpha) }
    }
}

/// Plug-in Mallows distance between two equal-size samples: the
/// order-statistics pairing
/// `cost = (1/m) sum_i |x_(i) - y_(i)|^alpha`.
///
/// This is the comonotone coupling of the two empirical laws, which attains
/// the 1-D optimum.
pub fn mallows_empirical(
    xs: &EmpiricalDistribution,
    ys: &EmpiricalDistribution,
    alpha: f64,
) -> Result<DistanceEstimate> {
    validate_alpha(alpha)?;
    if xs.len() != ys.len() {
        return Err(Error::UnequalSizes(xs.len(), ys.len()));
    }
    let m = xs.len() as f64;
    let cost = xs
        .values()
        .iter()
        .zip(ys.values())
        .map(|(x, y)| (x - y).abs().powf(alpha))
        .sum::<f64>()
        / m;
    Ok(DistanceEstimate::from_cost(alpha, cost))
}

/// Exact Mallows distance between two finite discrete laws via the quantile
/// coupling: the integral `int_0^1 |F_p^{-1}(u) - F_q^{-1}(u)|^alpha du`
/// evaluated by merging the two probability partitions.
pub fn mallows_discrete(p: &DiscreteLaw, q: &DiscreteLaw, alpha: f64) -> Result<DistanceEstimate> {
    validate_alpha(alpha)?;
    let mut cost = 0.0;
    let (mut i, mut j) = (0usize, 0usize);
    let (mut rem_p, mut rem_q) = (p.atoms[0].1, q.atoms[0].1);
    loop {
        let mass = rem_p.min(rem_q);
        cost += mass * (p.atoms[i].0 - q.atoms[j].0).abs().powf(alpha);
        rem_p -= mass;
        rem_q -= mass;
        if rem_p <= 0.0 {
            i += 1;
            if i == p.atoms.len() {
                break;
            }
            rem_p = p.atoms[i].1;
        }
        if rem_q <= 0.0 {
            j += 1;
            if j == q.atoms.len() {
                break;
            }
            rem_q = q.atoms[j].1;
        }
    }
    Ok(DistanceEstimate::from_cost(alpha, cost))
}

/// Ground-truth optimal transport cost for small discrete instances:
/// minimizes `sum_{ij} pi_{ij} |x_i - y_j|^alpha` over all couplings with
/// the given marginals, by successive-shortest-path min-cost flow on the
/// complete bipartite network. Independent of the quantile-coupling
/// argument used by [`mallows_discrete`]; restricted to at most
/// [`ORACLE_ATOM_LIMIT`] atoms per side.
pub fn transport_oracle(p: &DiscreteLaw, q: &DiscreteLaw, alpha: f64) -> Result<DistanceEstimate> {
    validate_alpha(alpha)?;
    let (m, k) = (p.atoms.len(), q.atoms.len());
    if m > ORACLE_ATOM_LIMIT || k > ORACLE_ATOM_LIMIT {
        return Err(Error::OracleTooLarge(m, k, ORACLE_ATOM_LIMIT));
    }
    let supplies: Vec<f64> = p.atoms.iter().map(|&(_, pr)| pr).collect();
    let demands: Vec<f64> = q.atoms.iter().map(|&(_, pr)| pr).collect();
    let mut costs = vec![vec![0.0; k]; m];
    for (i, &(x, _)) in p.atoms.iter().enumerate() {
        for (j, &(y, _)) in q.atoms.iter().enumerate() {
            costs[i][j] = (x - y).abs().powf(alpha);
        }
    }
    let cost = min_cost_transport(&supplies, &demands, &costs)?;
    Ok(DistanceEstimate::from_cost(alpha, cost))
}

/// Residual mass below this is treated as exhausted inside the flow solver.
const FLOW_EPS: f64 = 1e-13;

/// Min-cost flow on source -> supplies -> demands -> sink with real
/// capacities. Bellman-Ford finds a cheapest augmenting path each round;
/// with complete middle edges each augmentation exhausts a supply or demand,
/// so the round count stays small.
fn min_cost_transport(supplies: &[f64], demands: &[f64], costs: &[Vec<f64>]) -> Result<f64> {
    let m = supplies.len();
    let k = demands.len();
    let nodes = m + k + 2;
    let source = m + k;
    let sink = m + k + 1;

    struct Edge {
        to: usize,
        cap: f64,
        cost: f64,
        flow: f64,
    }
    let mut edges: Vec<Edge> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    let add_edge = |edges: &mut Vec<Edge>, adj: &mut Vec<Vec<usize>>, a: usize, b: usize, cap: f64, cost: f64| {
        adj[a].push(edges.len());
        edges.push(Edge { to: b, cap, cost, flow: 0.0 });
        adj[b].push(edges.len());
        edges.push(Edge { to: a, cap: 0.0, cost: -cost, flow: 0.0 });
    };
    for (i, &s) in supplies.iter().enumerate() {
        add_edge(&mut edges, &mut adj, source, i, s, 0.0);
    }
    for (j, &d) in demands.iter().enumerate() {
        add_edge(&mut edges, &mut adj, m + j, sink, d, 0.0);
    }
    for i in 0..m {
        for j in 0..k {
            add_edge(&mut edges, &mut adj, i, m + j, f64::INFINITY, costs[i][j]);
        }
    }

    // Dijkstra with Johnson potentials: reduced costs stay nonnegative (the
    // initial costs already are), and a node is settled at most once per
    // round, so predecessor chains cannot cycle even with rounding noise.
    let mut potential = vec![0.0f64; nodes];
    let mut total_cost = 0.0;
    for _round in 0..10_000 {
        let mut dist = vec![f64::INFINITY; nodes];
        let mut prev_edge = vec![usize::MAX; nodes];
        let mut settled = vec![false; nodes];
        dist[source] = 0.0;
        loop {
            let mut u = usize::MAX;
            let mut best = f64::INFINITY;
            for v in 0..nodes {
                if !settled[v] && dist[v] < best {
                    best = dist[v];
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            settled[u] = true;
            for &eid in &adj[u] {
                let e = &edges[eid];
                if e.cap - e.flow <= FLOW_EPS || settled[e.to] {
                    continue;
                }
                let reduced = (e.cost + potential[u] - potential[e.to]).max(0.0);
                if dist[u] + reduced < dist[e.to] {
                    dist[e.to] = dist[u] + reduced;
                    prev_edge[e.to] = eid;
                }
            }
        }
        if !dist[sink].is_finite() {
            break;
        }
        // Bottleneck along the path, then push; sum real edge costs.
        let mut bottleneck = f64::INFINITY;
        let mut path_cost = 0.0;
        let mut v = sink;
        while v != source {
            let e = &edges[prev_edge[v]];
            bottleneck = bottleneck.min(e.cap - e.flow);
            path_cost += e.cost;
            v = edges[prev_edge[v] ^ 1].to;
        }
        if bottleneck <= FLOW_EPS {
            break;
        }
        let mut v = sink;
        while v != source {
            let eid = prev_edge[v];
            edges[eid].flow += bottleneck;
            edges[eid ^ 1].flow -= bottleneck;
            v = edges[eid ^ 1].to;
        }
        total_cost += bottleneck * path_cost;
        for v in 0..nodes {
            if dist[v].is_finite() {
                potential[v] += dist[v];
            }
        }
    }

    // All supply must have been routed.
    let routed: f64 = adj[source]
        .iter()
        .map(|&eid| edges[eid].flow)
        .filter(|f| *f > 0.0)
        .sum();
    let total: f64 = supplies.iter().sum();
    if (routed - total).abs() > 1e-9 {
        return Err(Error::Numeric(format!(
            "transport solver routed {routed} of {total} mass"
        )));
    }
    Ok(total_cost)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emp(v: &[f64]) -> EmpiricalDistribution {
        EmpiricalDistribution::from_unsorted(v.to_vec()).unwrap()
    }

    #[test]
    fn empirical_rejects_unsorted_and_empty() {
        assert!(EmpiricalDistribution::new(vec![2.0, 1.0]).is_err());
        assert!(EmpiricalDistribution::new(vec![]).is_err());
        assert!(EmpiricalDistribution::new(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn quantile_is_order_statistic() {
        let e = emp(&[10.0, 20.0, 30.0, 40.0]);
        assert_eq!(e.quantile(0.1), 10.0);
        assert_eq!(e.quantile(0.26), 20.0);
        assert_eq!(e.quantile(0.5), 20.0);
        assert_eq!(e.quantile(0.51), 30.0);
        assert_eq!(e.quantile(0.99), 40.0);
    }

    #[test]
    fn empirical_identity_and_shift() {
        let xs = emp(&[0.3, -1.0, 2.5]);
        let d = mallows_empirical(&xs, &xs, 1.3).unwrap();
        assert_eq!(d.cost, 0.0);
        assert_eq!(d.root, 0.0);

        let shifted = emp(&[0.3 + 2.0, -1.0 + 2.0, 2.5 + 2.0]);
        for alpha in [0.5, 1.0, 1.7] {
            let d = mallows_empirical(&xs, &shifted, alpha).unwrap();
            assert!((d.cost - 2.0f64.powf(alpha)).abs() < 1e-12);
        }
    }

    #[test]
    fn empirical_two_point_example() {
        // Sorted pairing costs (|0-0|^1.5 + |1-2|^1.5)/2 = 0.5; the cross
        // pairing costs (2^1.5 + 1)/2 > 0.5, so sorted is optimal.
        let xs = emp(&[0.0, 1.0]);
        let ys = emp(&[0.0, 2.0]);
        let d = mallows_empirical(&xs, &ys, 1.5).unwrap();
        assert!((d.cost - 0.5).abs() < 1e-15);
        let cross = (2.0f64.powf(1.5) + 1.0) / 2.0;
        assert!(cross > d.cost);
    }

    #[test]
    fn empirical_unequal_sizes_error() {
        let xs = emp(&[0.0, 1.0]);
        let ys = emp(&[0.0]);
        assert!(matches!(
            mallows_empirical(&xs, &ys, 1.0),
            Err(Error::UnequalSizes(2, 1))
        ));
        assert!(mallows_empirical(&xs, &xs, 2.0).is_err());
    }

    #[test]
    fn discrete_law_validation() {
        assert!(DiscreteLaw::new(vec![(0.0, 0.5), (1.0, 0.5)]).is_ok());
        assert!(DiscreteLaw::new(vec![(0.0, 0.5), (0.0, 0.5)]).is_err());
        assert!(DiscreteLaw::new(vec![(0.0, 0.6), (1.0, 0.5)]).is_err());
        assert!(DiscreteLaw::new(vec![(0.0, 1.0), (1.0, 0.0)]).is_err());
    }

    #[test]
    fn discrete_point_masses() {
        let p = DiscreteLaw::point(0.0);
        let q = DiscreteLaw::point(3.0);
        let d = mallows_discrete(&p, &q, 1.0).unwrap();
        assert!((d.cost - 3.0).abs() < 1e-15);
        let same = mallows_discrete(&p, &p, 1.0).unwrap();
        assert_eq!(same.cost, 0.0);
    }

    #[test]
    fn discrete_two_point_uniform() {
        let p = DiscreteLaw::uniform_on(&[0.0, 1.0]).unwrap();
        let q = DiscreteLaw::uniform_on(&[0.0, 2.0]).unwrap();
        let d = mallows_discrete(&p, &q, 1.0).unwrap();
        assert!((d.cost - 0.5).abs() < 1e-15);
    }

    #[test]
    fn oracle_matches_hand_examples() {
        let p = DiscreteLaw::point(1.0);
        let q = DiscreteLaw::point(1.0);
        assert_eq!(transport_oracle(&p, &q, 1.5).unwrap().cost, 0.0);

        let p = DiscreteLaw::uniform_on(&[0.0, 1.0]).unwrap();
        let q = DiscreteLaw::uniform_on(&[0.0, 2.0]).unwrap();
        let d = transport_oracle(&p, &q, 1.5).unwrap();
        // 2x2 exhaustive: identity pairing costs 0.5, cross costs
        // (2^1.5 + 1)/2; the optimum is 0.5.
        assert!((d.cost - 0.5).abs() < 1e-12);
    }

    #[test]
    fn oracle_rejects_large_instances() {
        let locs: Vec<f64> = (0..9).map(|i| i as f64).collect();
        let p = DiscreteLaw::uniform_on(&locs).unwrap();
        assert!(matches!(
            transport_oracle(&p, &p, 1.0),
            Err(Error::OracleTooLarge(9, 9, _))
        ));
    }

    #[test]
    fn distance_estimate_root_consistency() {
        let p = DiscreteLaw::uniform_on(&[0.0, 4.0]).unwrap();
        let q = DiscreteLaw::uniform_on(&[1.0, 2.0]).unwrap();
        for alpha in [0.6, 1.0, 1.4, 1.9] {
            let d = mallows_discrete(&p, &q, alpha).unwrap();
            assert!((d.root - d.cost.powf(1.0 / alpha)).abs() < 1e-12);
        }
    }
}
