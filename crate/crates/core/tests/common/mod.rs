#![allow(dead_code)]

use graphmean::frechet::Sample;
use graphmean::Graph;
use rand::Rng;
use rand_xoshiro::SplitMix64;
use rand::SeedableRng;

pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// Undirected graph with uniform node attributes and edges of the given density.
pub fn random_graph(rng: &mut impl Rng, order: usize, dim: usize, density: f64) -> Graph {
    let mut g = Graph::zeros(order, dim, false);
    for i in 0..order {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        g.set_node(i, &v).unwrap();
        for j in (i + 1)..order {
            if rng.gen_bool(density) {
                let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                g.set_edge(i, j, &v).unwrap();
            }
        }
    }
    g
}

/// `n` graphs of orders in `orders`.
pub fn random_sample(rng: &mut impl Rng, n: usize, orders: std::ops::RangeInclusive<usize>, dim: usize) -> Sample<f64> {
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(orders.clone())).collect();
    Sample::new(sizes.into_iter().map(|m| random_graph(rng, m, dim, 0.5)).collect()).unwrap()
}

pub fn scalars(values: &[f64]) -> Sample<f64> {
    Sample::new(values.iter().map(|&v| Graph::from_nodes(&[vec![v]]).unwrap()).collect()).unwrap()
}

pub fn node_value(g: &Graph) -> f64 {
    g.node_attr(0)[0]
}
