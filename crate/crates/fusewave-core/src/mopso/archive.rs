//! Bounded non-dominated repository with crowding-distance bookkeeping.

use alloc::vec::Vec;

/// `a` dominates `b` under minimization: no worse everywhere, strictly
/// better somewhere. Panics on length mismatch (caller enforces arity).
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    assert_eq!(a.len(), b.len(), "fitness vectors must share length");
    let mut strictly_better = false;
    for (x, y) in a.iter().zip(b.iter()) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Crowding distances over one non-dominated front (minimization).
///
/// Fronts of one or two members are all-infinite. Otherwise, per objective:
/// sort, give the extremes infinity, and accumulate the normalized
/// neighbour gap on interior members; an objective whose values all
/// coincide contributes nothing.
pub fn crowding_distances(front: &[Vec<f64>]) -> Vec<f64> {
    let n = front.len();
    if n == 0 {
        return Vec::new();
    }
    if n <= 2 {
        return alloc::vec![f64::INFINITY; n];
    }
    let nf = front[0].len();
    let mut dist = alloc::vec![0.0f64; n];
    let mut order: Vec<usize> = (0..n).collect();
    for j in 0..nf {
        order.sort_by(|&a, &b| front[a][j].partial_cmp(&front[b][j]).unwrap());
        let lo = front[order[0]][j];
        let hi = front[order[n - 1]][j];
        let span = hi - lo;
        if span == 0.0 {
            continue;
        }
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        for k in 1..n - 1 {
            let gap = front[order[k + 1]][j] - front[order[k - 1]][j];
            let d = &mut dist[order[k]];
            if d.is_finite() {
                *d += gap / span;
            }
        }
    }
    dist
}

/// One stored solution: position in the unit box and its fitness vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveMember {
    pub position: Vec<f64>,
    pub fitness: Vec<f64>,
}

/// The repository of non-dominated solutions, capacity-bounded by
/// crowding-based truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoArchive {
    members: Vec<ArchiveMember>,
    capacity: usize,
}

impl ParetoArchive {
    pub fn new(capacity: usize) -> Self {
        ParetoArchive {
            members: Vec::new(),
            capacity,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[ArchiveMember] {
        &self.members
    }

    /// Insert `candidate` unless an existing member dominates it; evict
    /// members it dominates; truncate by repeatedly dropping the lowest
    /// crowding distance (first on ties, recomputed after each removal).
    pub fn insert(&mut self, position: Vec<f64>, fitness: Vec<f64>) -> bool {
        if self
            .members
            .iter()
            .any(|m| dominates(&m.fitness, &fitness))
        {
            return false;
        }
        self.members.retain(|m| !dominates(&fitness, &m.fitness));
        self.members.push(ArchiveMember { position, fitness });
        while self.members.len() > self.capacity {
            let dist = self.crowding();
            let mut worst = 0;
            for (i, d) in dist.iter().enumerate() {
                if d < &dist[worst] {
                    worst = i;
                }
            }
            self.members.remove(worst);
        }
        true
    }

    pub fn crowding(&self) -> Vec<f64> {
        let fitness: Vec<Vec<f64>> = self.members.iter().map(|m| m.fitness.clone()).collect();
        crowding_distances(&fitness)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn dominance_basics() {
        assert!(dominates(&[1.0, 2.0], &[2.0, 3.0]));
        assert!(!dominates(&[1.0, 3.0], &[3.0, 1.0]));
        assert!(!dominates(&[3.0, 1.0], &[1.0, 3.0]));
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0]));
        assert!(dominates(&[1.0, 2.0], &[1.0, 2.5]));
    }

    #[test]
    fn crowding_small_fronts() {
        assert_eq!(crowding_distances(&[vec![1.0, 2.0]]), vec![f64::INFINITY]);
        assert_eq!(
            crowding_distances(&[vec![1.0, 2.0], vec![2.0, 1.0]]),
            vec![f64::INFINITY, f64::INFINITY]
        );
    }

    #[test]
    fn crowding_three_point_front() {
        let front = vec![vec![0.0, 2.0], vec![1.0, 1.0], vec![2.0, 0.0]];
        let d = crowding_distances(&front);
        assert_eq!(d[0], f64::INFINITY);
        assert_eq!(d[2], f64::INFINITY);
        assert!((d[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn crowding_skips_degenerate_objective() {
        let front = vec![vec![5.0, 0.0], vec![5.0, 1.0], vec![5.0, 4.0]];
        let d = crowding_distances(&front);
        assert_eq!(d[0], f64::INFINITY);
        assert_eq!(d[2], f64::INFINITY);
        assert!((d[1] - 1.0).abs() < 1e-15); // (4-0)/4 from objective 1 only
    }

    #[test]
    fn insert_rules() {
        let mut arch = ParetoArchive::new(10);
        assert!(arch.insert(vec![0.1], vec![1.0, 1.0]));
        assert_eq!(arch.len(), 1);

        // dominated candidate rejected
        assert!(!arch.insert(vec![0.2], vec![2.0, 2.0]));
        assert_eq!(arch.len(), 1);

        // dominating candidate purges
        let mut arch = ParetoArchive::new(10);
        arch.insert(vec![0.1], vec![1.0, 3.0]);
        arch.insert(vec![0.2], vec![3.0, 1.0]);
        assert!(arch.insert(vec![0.3], vec![0.0, 0.0]));
        assert_eq!(arch.len(), 1);
        assert_eq!(arch.members()[0].fitness, vec![0.0, 0.0]);

        // equal fitness is not dominance: duplicates accumulate
        let mut arch = ParetoArchive::new(10);
        assert!(arch.insert(vec![0.1], vec![1.0, 1.0]));
        assert!(arch.insert(vec![0.9], vec![1.0, 1.0]));
        assert_eq!(arch.len(), 2);
    }

    #[test]
    fn truncation_removes_densest() {
        let mut arch = ParetoArchive::new(3);
        arch.insert(vec![0.0], vec![0.0, 4.0]);
        arch.insert(vec![0.1], vec![4.0, 0.0]);
        arch.insert(vec![0.2], vec![1.0, 3.0]);
        // fourth member crowds the interior; one interior member must go
        arch.insert(vec![0.3], vec![1.2, 2.8]);
        assert_eq!(arch.len(), 3);
        // extremes always survive truncation
        let fits: Vec<&[f64]> = arch.members().iter().map(|m| m.fitness.as_slice()).collect();
        assert!(fits.contains(&[0.0, 4.0].as_slice()));
        assert!(fits.contains(&[4.0, 0.0].as_slice()));
    }
}
