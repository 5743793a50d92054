//! Disjoint-set forest over a dense `0..len` index space.

/// Union by size with path halving. Indices are `u32` to keep the forest at
/// eight bytes per vertex for the largest explicit graphs.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    sets: usize,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        assert!(
            len <= u32::MAX as usize,
            "union-find limited to u32 indices"
        );
        UnionFind {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
            sets: len,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Number of disjoint sets.
    pub fn sets(&self) -> usize {
        self.sets
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Returns `true` if `a` and `b` were in different sets.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        self.sets -= 1;
        true
    }

    pub fn same(&mut self, a: u32, b: u32) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn set_size(&mut self, x: u32) -> u32 {
        let r = self.find(x);
        self.size[r as usize]
    }

    /// Sizes of all sets, largest first.
    pub fn component_sizes(&mut self) -> Vec<u64> {
        let mut sizes: Vec<u64> = (0..self.len() as u32)
            .filter(|&x| self.parent[x as usize] == x)
            .map(|r| u64::from(self.size[r as usize]))
            .collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_of_three_edges() {
        let mut uf = UnionFind::new(8);
        assert!(uf.union(0, 1));
        assert!(uf.union(1, 2));
        assert!(uf.union(3, 2));
        assert!(!uf.union(0, 3));
        assert_eq!(uf.sets(), 5);
        assert!(uf.same(0, 3));
        assert!(!uf.same(0, 4));
        assert_eq!(uf.set_size(2), 4);
        assert_eq!(uf.component_sizes(), vec![4, 1, 1, 1, 1]);
    }

    #[test]
    fn sizes_sum_to_len() {
        let mut uf = UnionFind::new(1000);
        for k in 0..1000u32 {
            uf.union(k, (k * 7 + 3) % 1000 / 3);
        }
        let sizes = uf.component_sizes();
        assert_eq!(sizes.iter().sum::<u64>(), 1000);
        assert_eq!(sizes.len(), uf.sets());
        assert!(sizes.windows(2).all(|w| w[0] >= w[1]));
    }
}
