use std::collections::HashMap;

use super::{ElemId, FiniteGroup, GroupOps};
use crate::error::{Error, Result};
use crate::Limits;

/// A subgroup tabulated as its own [`FiniteGroup`], with the inclusion into
/// the ambient group.
#[derive(Clone, Debug)]
pub struct Closure<E> {
    pub group: FiniteGroup,
    elements: Vec<E>,
    index: HashMap<E, ElemId>,
}

impl<E: Clone + Eq + std::hash::Hash> Closure<E> {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Inclusion map: element `k` of `group` is `elements()[k]` in the
    /// ambient group.
    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn id_of(&self, ambient: &E) -> Option<ElemId> {
        self.index.get(ambient).copied()
    }
}

pub fn subgroup_closure<G: GroupOps>(ambient: &G, generators: &[G::Elem]) -> Result<Closure<G::Elem>> {
    subgroup_closure_with_cap(ambient, generators, Limits::default().order_cap)
}

/// Breadth-first closure from the identity, generators tried in the given
/// order. Elements are numbered in discovery order.
pub fn subgroup_closure_with_cap<G: GroupOps>(
    ambient: &G,
    generators: &[G::Elem],
    cap: usize,
) -> Result<Closure<G::Elem>> {
    let k = generators.len();
    let mut elements = vec![ambient.identity()];
    let mut index: HashMap<G::Elem, ElemId> = HashMap::from([(ambient.identity(), 0)]);
    // parent[z] = (y, j) with z = y * gen_j
    let mut parent: Vec<(usize, usize)> = vec![(0, 0)];
    // right[x * k + j] = x * gen_j
    let mut right: Vec<ElemId> = Vec::new();
    let mut next = 0;
    while next < elements.len() {
        let x = elements[next].clone();
        for (j, g) in generators.iter().enumerate() {
            let y = ambient.mul(&x, g);
            let id = match index.get(&y) {
                Some(&id) => id,
                None => {
                    let id = elements.len();
                    if id >= cap {
                        return Err(Error::TooLarge { order: id as u128 + 1, cap });
                    }
                    index.insert(y.clone(), id as ElemId);
                    elements.push(y);
                    parent.push((next, j));
                    id as ElemId
                }
            };
            right.push(id);
        }
        next += 1;
    }
    let m = elements.len();
    let mut table = vec![0 as ElemId; m * m];
    for x in 0..m {
        table[x * m] = x as ElemId;
        for z in 1..m {
            let (y, j) = parent[z];
            table[x * m + z] = right[table[x * m + y] as usize * k + j];
        }
    }
    let group = FiniteGroup::from_flat("closure".into(), m, table)?;
    Ok(Closure { group, elements, index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_groups::{build_cyclic, build_symmetric, direct_product, TupleGroup};

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = build_symmetric(3).unwrap();
        assert_eq!(subgroup_closure(&g, &[]).unwrap().order(), 1);
    }

    #[test]
    fn closure_in_cyclic_four_squared() {
        let c4 = build_cyclic(4).unwrap();
        let t = TupleGroup::new(&c4, 2).unwrap();
        let c = subgroup_closure(&t, &[vec![0, 2]]).unwrap();
        assert_eq!(c.order(), 2);
        assert_eq!(c.elements(), &[vec![0, 0], vec![0, 2]]);
    }

    #[test]
    fn closure_of_three_cycle() {
        let s3 = build_symmetric(3).unwrap();
        // element 3 is [1, 2, 0], a 3-cycle
        let c = subgroup_closure(&s3, &[3]).unwrap();
        assert_eq!(c.order(), 3);
    }

    #[test]
    fn table_matches_ambient_products() {
        let s4 = build_symmetric(4).unwrap();
        let c = subgroup_closure(&s4, &[1, 7]).unwrap();
        for a in c.group.elements() {
            for b in c.group.elements() {
                let amb = s4.product(c.elements()[a as usize], c.elements()[b as usize]);
                assert_eq!(c.elements()[c.group.product(a, b) as usize], amb);
            }
        }
    }

    #[test]
    fn closure_is_idempotent() {
        let g = direct_product(&build_cyclic(4).unwrap(), &build_symmetric(3).unwrap()).unwrap();
        let c = subgroup_closure(&g, &[7, 14]).unwrap();
        let again = subgroup_closure(&g, c.elements()).unwrap();
        assert_eq!(again.elements(), c.elements());
    }

    #[test]
    fn cap_is_enforced() {
        let g = build_cyclic(50).unwrap();
        assert!(matches!(subgroup_closure_with_cap(&g, &[1], 10), Err(Error::TooLarge { .. })));
    }
}
