use super::GroupOracle;
use crate::finite::FiniteGroup;

/// A finite group with the discrete topology: `V_0 = G`, `V_n = {e}` for
/// `n ≥ 1`.
#[derive(Clone, Debug)]
pub struct FiniteAdapter {
    group: FiniteGroup,
    /// Enumeration order, identity first.
    order: Vec<usize>,
}

impl FiniteAdapter {
    pub fn new(group: FiniteGroup) -> Self {
        let e = group.identity();
        let order = std::iter::once(e).chain((0..group.order()).filter(|&x| x != e)).collect();
        FiniteAdapter { group, order }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }
}

impl GroupOracle for FiniteAdapter {
    type Elem = usize;

    fn name(&self) -> String {
        format!("finite(order {})", self.group.order())
    }

    fn identity(&self) -> usize {
        self.group.identity()
    }

    /// Cycles with period `|G|`.
    fn enumerate(&self, m: u64) -> usize {
        self.order[(m.saturating_sub(1) % self.order.len() as u64) as usize]
    }

    fn order(&self) -> Option<u64> {
        Some(self.group.order() as u64)
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.group.mul(*a, *b)
    }

    fn inv(&self, a: &usize) -> usize {
        self.group.inv(*a)
    }

    fn basis_member(&self, n: u64, g: &usize) -> bool {
        n == 0 || *g == self.group.identity()
    }

    fn basis_enumerate(&self, n: u64, i: u64) -> usize {
        if n == 0 {
            self.enumerate(i + 1)
        } else {
            self.group.identity()
        }
    }

    fn basis_len(&self, n: u64) -> Option<u64> {
        Some(if n == 0 { self.group.order() as u64 } else { 1 })
    }

    fn conj_bound(&self, _g: &usize, n: u64) -> u64 {
        n.min(1)
    }

    fn sq_bound(&self, n: u64) -> u64 {
        n.min(1)
    }

    fn theta_exact(&self, _g: &usize, n: u64) -> Option<u64> {
        // V_0 = G ⊆ V_n only when G is trivial.
        Some(if self.group.order() == 1 { 0 } else { n.min(1) })
    }

    fn format(&self, g: &usize) -> String {
        self.group.label(*g).to_string()
    }
}
