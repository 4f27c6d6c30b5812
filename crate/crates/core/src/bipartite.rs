//! Perfect bipartite matching by augmenting paths, with a Hall violator on failure.

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// `mate[i]` is the right vertex matched to left vertex `i`.
    Perfect(Vec<usize>),
    /// Left vertices whose joint neighbourhood (`right`) is strictly smaller.
    Violator { left: Vec<usize>, right: Vec<usize> },
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    right_mate: Vec<Option<usize>>,
    seen_left: Vec<bool>,
    seen_right: Vec<bool>,
}

impl Search<'_> {
    fn augment(&mut self, u: usize) -> bool {
        self.seen_left[u] = true;
        for &v in &self.adj[u] {
            if self.seen_right[v] {
                continue;
            }
            self.seen_right[v] = true;
            let free = match self.right_mate[v] {
                None => true,
                Some(w) => self.augment(w),
            };
            if free {
                self.right_mate[v] = Some(u);
                return true;
            }
        }
        false
    }
}

/// Left vertices are processed in index order and neighbours are tried in
/// adjacency order, so the result is deterministic.
pub fn perfect_matching(adj: &[Vec<usize>], right_count: usize) -> Outcome {
    let n = adj.len();
    let mut search = Search {
        adj,
        right_mate: vec![None; right_count],
        seen_left: vec![false; n],
        seen_right: vec![false; right_count],
    };
    for u in 0..n {
        search.seen_left.iter_mut().for_each(|s| *s = false);
        search.seen_right.iter_mut().for_each(|s| *s = false);
        if !search.augment(u) {
            // a failed search from u: the visited left side S has N(S) equal to
            // the visited right side, all matched into S \ {u}
            let left = (0..n).filter(|&i| search.seen_left[i]).collect();
            let right = (0..right_count).filter(|&j| search.seen_right[j]).collect();
            return Outcome::Violator { left, right };
        }
    }
    let mut mate = vec![usize::MAX; n];
    for (v, m) in search.right_mate.iter().enumerate() {
        if let Some(u) = m {
            mate[*u] = v;
        }
    }
    Outcome::Perfect(mate)
}

/// Joint neighbourhood of a set of left vertices.
pub fn neighbourhood(adj: &[Vec<usize>], left: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = left.iter().flat_map(|&i| adj[i].iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_a_perfect_matching() {
        let adj = vec![vec![1], vec![0, 1]];
        assert_eq!(perfect_matching(&adj, 2), Outcome::Perfect(vec![1, 0]));
    }

    #[test]
    fn reports_hall_violator() {
        let adj = vec![vec![1], vec![1]];
        match perfect_matching(&adj, 2) {
            Outcome::Violator { left, right } => {
                assert_eq!(left, vec![0, 1]);
                assert_eq!(right, vec![1]);
                assert_eq!(neighbourhood(&adj, &left), right);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn isolated_vertex() {
        let adj = vec![vec![]];
        assert_eq!(perfect_matching(&adj, 1), Outcome::Violator { left: vec![0], right: vec![] });
    }
}
