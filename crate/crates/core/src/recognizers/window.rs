//! The window rewritings of the three passes as relations on digit tuples.
//!
//! Each relation holds triples `(u, v, w)` where `u` lists the partial
//! quotients under the window (most significant first), `v` the window
//! before the step and `w` the window after it. All three are functional in
//! `(u, v)`; a rewrite that would leave `{0, ..., m}` has no image.

/// Width-four step of the first pass.
pub fn rewrite_a(u: [u32; 4], v: [u32; 4], bound: u32) -> Option<[u32; 4]> {
    let w = if v[0] < u[0] && v[1] > u[1] && v[2] == 0 {
        [v[0] + 1, v[1] - (u[1] + 1), u[2] - 1, v[3] + 1]
    } else if v[0] < u[0] && u[1] <= v[1] && v[1] <= 2 * u[1] && v[2] > 0 {
        [v[0] + 1, v[1] - u[1], v[2] - 1, v[3]]
    } else {
        v
    };
    w.iter().all(|&d| d <= bound).then_some(w)
}

/// Closing width-three step of the first pass, on positions 3, 2, 1.
pub fn rewrite_b(u: [u32; 3], v: [u32; 3], bound: u32) -> Option<[u32; 3]> {
    let w = if v[0] < u[0] && v[1] > u[1] && v[2] == 0 {
        [v[0] + 1, v[1] - (u[1] + 1), u[2] - 1]
    } else if v[0] < u[0] && v[1] >= u[1] && u[2] >= v[2] && v[2] > 0 {
        [v[0] + 1, v[1] - u[1], v[2] - 1]
    } else if v[0] < u[0] && v[1] >= u[1] && v[2] > u[2] {
        [v[0] + 1, v[1] - u[1] + 1, v[2] - u[2] - 1]
    } else if v[1] < u[1] && v[2] >= u[2] {
        [v[0], v[1] + 1, v[2] - u[2]]
    } else {
        v
    };
    w.iter().all(|&d| d <= bound).then_some(w)
}

/// Width-three step shared by the second and third passes. Only the first
/// two quotients matter.
pub fn rewrite_c(u: [u32; 3], v: [u32; 3]) -> [u32; 3] {
    if v[0] < u[0] && v[1] == u[1] && v[2] > 0 {
        [v[0] + 1, 0, v[2] - 1]
    } else {
        v
    }
}

/// One of the three window relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WindowRelation {
    A,
    B,
    C,
}

impl WindowRelation {
    pub fn width(self) -> usize {
        match self {
            WindowRelation::A => 4,
            WindowRelation::B | WindowRelation::C => 3,
        }
    }

    /// The window after the step, if it stays within `{0, ..., bound}`.
    ///
    /// # Panics
    ///
    /// If the slices do not have the relation's width.
    pub fn apply(self, quotients: &[u32], before: &[u32], bound: u32) -> Option<Vec<u32>> {
        match self {
            WindowRelation::A => rewrite_a(quotients.try_into().unwrap(), before.try_into().unwrap(), bound).map(Vec::from),
            WindowRelation::B => rewrite_b(quotients.try_into().unwrap(), before.try_into().unwrap(), bound).map(Vec::from),
            WindowRelation::C => {
                let w = rewrite_c(quotients.try_into().unwrap(), before.try_into().unwrap());
                w.iter().all(|&d| d <= bound).then(|| Vec::from(w))
            }
        }
    }

    /// Whether `(quotients, before, after)` belongs to the relation.
    pub fn contains(self, quotients: &[u32], before: &[u32], after: &[u32], bound: u32) -> bool {
        let width = self.width();
        if quotients.len() != width || before.len() != width || after.len() != width {
            return false;
        }
        if before.iter().chain(after).any(|&d| d > bound) {
            return false;
        }
        self.apply(quotients, before, bound).is_some_and(|w| w == after)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_examples() {
        // A2 on the golden-ratio sum 0 1 1 0
        assert_eq!(rewrite_a([1; 4], [0, 1, 1, 0], 3), Some([1, 0, 0, 0]));
        // A1 and its overflow
        assert_eq!(rewrite_a([1; 4], [0, 2, 0, 1], 3), Some([1, 0, 0, 2]));
        assert_eq!(rewrite_a([1; 4], [0, 2, 0, 3], 3), None);
        assert_eq!(rewrite_a([1; 4], [1, 2, 0, 1], 3), Some([1, 2, 0, 1]));
        assert_eq!(rewrite_b([2, 2, 2], [0, 2, 2], 5), Some([1, 0, 1]));
        assert_eq!(rewrite_b([2, 2, 2], [0, 1, 2], 5), Some([0, 2, 0]));
        assert_eq!(rewrite_b([2, 2, 2], [0, 3, 0], 5), Some([1, 0, 1]));
        assert_eq!(rewrite_b([2, 2, 2], [1, 2, 3], 5), Some([2, 1, 0]));
        assert_eq!(rewrite_c([1, 1, 1], [0, 1, 1]), [1, 0, 0]);
        assert_eq!(rewrite_c([1, 1, 1], [1, 1, 1]), [1, 1, 1]);
    }

    #[test]
    fn relations_are_functional() {
        let bound = 5;
        let digits = |n: usize| {
            let mut out = vec![vec![]];
            for _ in 0..n {
                out = out.into_iter().flat_map(|v: Vec<u32>| (0..=bound).map(move |d| [v.clone(), vec![d]].concat())).collect();
            }
            out
        };
        for rel in [WindowRelation::B, WindowRelation::C] {
            for u in digits(3).into_iter().filter(|u| u.iter().all(|&a| (1..=2).contains(&a))) {
                for v in digits(3) {
                    let images: Vec<_> = digits(3).into_iter().filter(|w| rel.contains(&u, &v, w, bound)).collect();
                    assert!(images.len() <= 1);
                    assert_eq!(images.first().cloned(), rel.apply(&u, &v, bound));
                }
            }
        }
    }
}
