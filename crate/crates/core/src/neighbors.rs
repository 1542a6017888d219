//! Exact nearest-point index over a fixed point set.
//!
//! Both backends (sorted coordinates in 1-D, a kd-tree in 2-D) return the
//! same answer a brute-force scan would: the point minimising squared
//! Euclidean distance, ties resolved to the lowest original index. Squared
//! distance is the comparison basis everywhere, so subtree pruning keeps
//! subtrees whose boundary distance *equals* the current best — an
//! equal-distance point with a lower index may still be inside.

use crate::geometry::Point;

/// Immutable nearest-point search structure.
#[derive(Debug, Clone)]
pub struct NearestIndex {
    backend: Backend,
}

#[derive(Debug, Clone)]
enum Backend {
    /// 1-D: points sorted by (coordinate, original index). `run_rep[i]` is the
    /// sorted position of the first point sharing `sorted[i]`'s coordinate,
    /// i.e. the lowest original index among duplicates.
    Sorted { coords: Vec<f64>, orig: Vec<usize>, run_rep: Vec<usize> },
    /// 2-D: kd-tree over point indices, median split, alternating axes.
    KdTree { points: Vec<Point>, nodes: Vec<KdNode> },
}

#[derive(Debug, Clone)]
struct KdNode {
    /// Index into the point list.
    point: usize,
    axis: usize,
    left: Option<usize>,
    right: Option<usize>,
}

impl NearestIndex {
    /// Build an index over the given points (all the same dimension, >= 1 point).
    pub fn build(points: &[Point]) -> Self {
        assert!(!points.is_empty(), "cannot index an empty point set");
        let dim = points[0].dim();
        debug_assert!(points.iter().all(|p| p.dim() == dim));
        let backend = if dim == 1 { build_sorted(points) } else { build_kdtree(points) };
        NearestIndex { backend }
    }

    /// Index of the nearest point to the query; ties go to the lowest index.
    pub fn nearest(&self, query: &Point) -> usize {
        match &self.backend {
            Backend::Sorted { coords, orig, run_rep } => {
                nearest_sorted(coords, orig, run_rep, query.x())
            }
            Backend::KdTree { points, nodes } => {
                let mut best = (f64::INFINITY, usize::MAX);
                search_kd(points, nodes, nodes.len() - 1, query, &mut best);
                best.1
            }
        }
    }
}

fn build_sorted(points: &[Point]) -> Backend {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a].x().total_cmp(&points[b].x()).then_with(|| a.cmp(&b))
    });
    let coords: Vec<f64> = order.iter().map(|&i| points[i].x()).collect();
    let mut run_rep = vec![0usize; order.len()];
    for i in 1..order.len() {
        run_rep[i] = if coords[i] == coords[i - 1] { run_rep[i - 1] } else { i };
    }
    Backend::Sorted { coords, orig: order, run_rep }
}

fn nearest_sorted(coords: &[f64], orig: &[usize], run_rep: &[usize], q: f64) -> usize {
    // First sorted position with coordinate > q.
    let p = coords.partition_point(|&c| c <= q);
    // Candidate on each side; a run of duplicates is represented by its first
    // element, which carries the lowest original index for that coordinate.
    let left = p.checked_sub(1).map(|i| (q - coords[i], orig[run_rep[i]]));
    let right = (p < coords.len()).then(|| {
        // Skip back to the run start so duplicates of coords[p] use the
        // lowest index. coords[p] > q, so its run start is still > q unless
        // the run began at or before p-1 with an equal coordinate, which is
        // impossible since coords[p] != coords[p-1] when partitioned on <= q.
        (coords[p] - q, orig[run_rep[p]])
    });
    match (left, right) {
        (Some((dl, il)), Some((dr, ir))) => {
            if dl < dr {
                il
            } else if dr < dl {
                ir
            } else {
                il.min(ir)
            }
        }
        (Some((_, il)), None) => il,
        (None, Some((_, ir))) => ir,
        (None, None) => unreachable!("empty index"),
    }
}

fn build_kdtree(points: &[Point]) -> Backend {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    let mut nodes = Vec::with_capacity(points.len());
    let root = build_kd_rec(points, &mut idx[..], 0, &mut nodes);
    debug_assert_eq!(root, Some(nodes.len() - 1));
    Backend::KdTree { points: points.to_vec(), nodes }
}

fn build_kd_rec(
    points: &[Point],
    idx: &mut [usize],
    axis: usize,
    nodes: &mut Vec<KdNode>,
) -> Option<usize> {
    if idx.is_empty() {
        return None;
    }
    let mid = idx.len() / 2;
    idx.select_nth_unstable_by(mid, |&a, &b| {
        points[a].coords()[axis]
            .total_cmp(&points[b].coords()[axis])
            .then_with(|| a.cmp(&b))
    });
    let point = idx[mid];
    let (lo, hi) = idx.split_at_mut(mid);
    let left = build_kd_rec(points, lo, 1 - axis, nodes);
    let right = build_kd_rec(points, &mut hi[1..], 1 - axis, nodes);
    nodes.push(KdNode { point, axis, left, right });
    Some(nodes.len() - 1)
}

fn search_kd(
    points: &[Point],
    nodes: &[KdNode],
    node: usize,
    query: &Point,
    best: &mut (f64, usize),
) {
    let n = &nodes[node];
    let d2 = query.dist2(&points[n.point]);
    if d2 < best.0 || (d2 == best.0 && n.point < best.1) {
        *best = (d2, n.point);
    }
    let delta = query.coords()[n.axis] - points[n.point].coords()[n.axis];
    let (near, far) = if delta <= 0.0 { (n.left, n.right) } else { (n.right, n.left) };
    if let Some(c) = near {
        search_kd(points, nodes, c, query, best);
    }
    // Keep equality: an equal-distance, lower-index point may lie beyond the
    // splitting plane.
    if let Some(c) = far {
        if delta * delta <= best.0 {
            search_kd(points, nodes, c, query, best);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn brute(points: &[Point], q: &Point) -> usize {
        let mut best = (f64::INFINITY, usize::MAX);
        for (i, p) in points.iter().enumerate() {
            let d2 = q.dist2(p);
            if d2 < best.0 {
                best = (d2, i);
            }
        }
        best.1
    }

    #[test]
    fn midpoint_tie_goes_to_lowest_index_1d() {
        let pts = vec![Point::one_d(0.0), Point::one_d(10.0)];
        let idx = NearestIndex::build(&pts);
        assert_eq!(idx.nearest(&Point::one_d(5.0)), 0);
        assert_eq!(idx.nearest(&Point::one_d(5.1)), 1);
        assert_eq!(idx.nearest(&Point::one_d(-3.0)), 0);
        assert_eq!(idx.nearest(&Point::one_d(40.0)), 1);
    }

    #[test]
    fn duplicates_resolve_to_first_occurrence() {
        let pts = vec![Point::one_d(3.0), Point::one_d(3.0), Point::one_d(7.0)];
        let idx = NearestIndex::build(&pts);
        assert_eq!(idx.nearest(&Point::one_d(2.0)), 0);
        assert_eq!(idx.nearest(&Point::one_d(3.0)), 0);
        // Midpoint of 3 and 7: tie between run-rep 0 and index 2.
        assert_eq!(idx.nearest(&Point::one_d(5.0)), 0);
    }

    #[test]
    fn midpoint_tie_goes_to_lowest_index_2d() {
        let pts = vec![Point::two_d(0.0, 0.0), Point::two_d(10.0, 0.0)];
        let idx = NearestIndex::build(&pts);
        assert_eq!(idx.nearest(&Point::two_d(5.0, 3.0)), 0);
        let dup = vec![Point::two_d(1.0, 1.0), Point::two_d(1.0, 1.0)];
        let idx = NearestIndex::build(&dup);
        assert_eq!(idx.nearest(&Point::two_d(9.0, -4.0)), 0);
    }

    #[test]
    fn matches_brute_force_1d() {
        let mut rng = crate::rng::rng_from_seed(101);
        for _ in 0..50 {
            let n = rng.gen_range(1..60);
            let pts: Vec<Point> =
                (0..n).map(|_| Point::one_d(rng.gen_range(-10.0..10.0))).collect();
            let idx = NearestIndex::build(&pts);
            for _ in 0..200 {
                let q = Point::one_d(rng.gen_range(-12.0..12.0));
                assert_eq!(idx.nearest(&q), brute(&pts, &q));
            }
        }
    }

    #[test]
    fn matches_brute_force_2d() {
        let mut rng = crate::rng::rng_from_seed(202);
        for _ in 0..40 {
            let n = rng.gen_range(1..60);
            let pts: Vec<Point> = (0..n)
                .map(|_| Point::two_d(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)))
                .collect();
            let idx = NearestIndex::build(&pts);
            for _ in 0..200 {
                let q = Point::two_d(rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0));
                assert_eq!(idx.nearest(&q), brute(&pts, &q));
            }
        }
    }

    #[test]
    fn matches_brute_force_2d_on_grid_ties() {
        // Integer grid with midpoint queries forces exact distance ties.
        let mut pts = Vec::new();
        for x in 0..5 {
            for y in 0..5 {
                pts.push(Point::two_d(x as f64, y as f64));
            }
        }
        let idx = NearestIndex::build(&pts);
        for x in 0..9 {
            for y in 0..9 {
                let q = Point::two_d(x as f64 * 0.5, y as f64 * 0.5);
                assert_eq!(idx.nearest(&q), brute(&pts, &q));
            }
        }
    }
}
