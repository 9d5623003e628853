//! The action 2-groupoid `Γ²(G)` of a finite group.
//!
//! Objects are the elements of `G`. A 1-map is a pair `(u, v)` going from
//! `v⁻¹u` to `uv⁻¹`, so 1-maps only connect conjugate elements and the
//! groupoid splits into one totally connected component per conjugacy class.
//! Composition is written diagrammatically: for `φ = (u₁, v₁): a ⇒ b` and
//! `ψ = (u₂, v₂): b ⇒ c`, `compose(φ, ψ) = (u₂v₁, v₂v₁): a ⇒ c`.
//!
//! There is exactly one 2-cell between any two parallel 1-maps. 2-cells are
//! never tabulated; a [`TwoCell`] is just the ordered pair of its boundaries.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{ConjugacyClassification, GroupElement, GroupTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Morphism {
    pub u: GroupElement,
    pub v: GroupElement,
}

impl Morphism {
    pub fn new(u: GroupElement, v: GroupElement) -> Self {
        Self { u, v }
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u.0, self.v.0)
    }
}

/// The unique 2-cell `src ⇒ dst` between parallel 1-maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwoCell {
    pub src: Morphism,
    pub dst: Morphism,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionGroupoid {
    group: GroupTable,
}

impl ActionGroupoid {
    pub fn new(group: GroupTable) -> Self {
        Self { group }
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn classes(&self) -> &ConjugacyClassification {
        self.group.conjugacy_classes()
    }

    /// `v⁻¹u`.
    pub fn source(&self, m: Morphism) -> GroupElement {
        self.group.mul(self.group.inv(m.v), m.u)
    }

    /// `uv⁻¹`.
    pub fn target(&self, m: Morphism) -> GroupElement {
        self.group.mul(m.u, self.group.inv(m.v))
    }

    pub fn compose(&self, phi: Morphism, psi: Morphism) -> Result<Morphism> {
        if self.target(phi) != self.source(psi) {
            return Err(Error::Composition {
                left: self.morphism_label(phi),
                right: self.morphism_label(psi),
            });
        }
        let g = &self.group;
        Ok(Morphism::new(g.mul(psi.u, phi.v), g.mul(psi.v, phi.v)))
    }

    /// `1_a = (a, e)`.
    pub fn identity_at(&self, a: GroupElement) -> Morphism {
        Morphism::new(a, self.group.identity())
    }

    /// `(v⁻¹uv⁻¹, v⁻¹)`.
    pub fn inverse_morphism(&self, m: Morphism) -> Morphism {
        let g = &self.group;
        let v_inv = g.inv(m.v);
        Morphism::new(g.mul(g.mul(v_inv, m.u), v_inv), v_inv)
    }

    /// `Hom(a, b)` as `(va, v)` for every `v` with `vav⁻¹ = b`, ascending in `v`.
    pub fn hom_set(&self, a: GroupElement, b: GroupElement) -> Vec<Morphism> {
        let g = &self.group;
        g.elements()
            .filter(|&v| g.conjugate(a, v) == b)
            .map(|v| Morphism::new(g.mul(v, a), v))
            .collect()
    }

    /// Every 1-map with source `a`, ascending in `v`.
    pub fn outgoing(&self, a: GroupElement) -> impl Iterator<Item = Morphism> + '_ {
        self.group
            .elements()
            .map(move |v| Morphism::new(self.group.mul(v, a), v))
    }

    /// Components `(class id, objects)`, one per conjugacy class.
    pub fn components(&self) -> Vec<(usize, Vec<GroupElement>)> {
        self.classes().classes.iter().cloned().enumerate().collect()
    }

    pub fn morphism_count(&self) -> usize {
        self.group.order() * self.group.order()
    }

    /// Position in the canonical order, lexicographic in `(v, u)`.
    pub fn morphism_index(&self, m: Morphism) -> usize {
        m.v.0 * self.group.order() + m.u.0
    }

    pub fn morphism_at(&self, index: usize) -> Morphism {
        let n = self.group.order();
        Morphism::new(GroupElement(index % n), GroupElement(index / n))
    }

    /// All `|G|²` 1-maps in canonical order.
    pub fn morphisms(&self) -> impl Iterator<Item = Morphism> + '_ {
        (0..self.morphism_count()).map(|i| self.morphism_at(i))
    }

    pub fn is_loop(&self, m: Morphism) -> bool {
        self.source(m) == self.target(m)
    }

    pub fn parallel(&self, phi: Morphism, psi: Morphism) -> bool {
        self.source(phi) == self.source(psi) && self.target(phi) == self.target(psi)
    }

    pub fn two_cell(&self, phi: Morphism, psi: Morphism) -> Option<TwoCell> {
        self.parallel(phi, psi)
            .then_some(TwoCell { src: phi, dst: psi })
    }

    pub fn identity_two_cell(&self, m: Morphism) -> TwoCell {
        TwoCell { src: m, dst: m }
    }

    /// `α • β` for `α: φ ⇒ ψ`, `β: ψ ⇒ ξ`.
    pub fn vcompose(&self, alpha: TwoCell, beta: TwoCell) -> Result<TwoCell> {
        if alpha.dst != beta.src {
            return Err(Error::Composition {
                left: self.two_cell_label(alpha),
                right: self.two_cell_label(beta),
            });
        }
        Ok(TwoCell {
            src: alpha.src,
            dst: beta.dst,
        })
    }

    /// `α ∘ α'` for `α: φ ⇒ ψ` in `Hom(a, b)` and `α': φ' ⇒ ψ'` in `Hom(b, c)`.
    pub fn hcompose(&self, alpha: TwoCell, alpha2: TwoCell) -> Result<TwoCell> {
        let err = || Error::Composition {
            left: self.two_cell_label(alpha),
            right: self.two_cell_label(alpha2),
        };
        let src = self.compose(alpha.src, alpha2.src).map_err(|_| err())?;
        let dst = self.compose(alpha.dst, alpha2.dst).map_err(|_| err())?;
        Ok(TwoCell { src, dst })
    }

    pub fn morphism_label(&self, m: Morphism) -> String {
        format!("({},{})", self.group.label(m.u), self.group.label(m.v))
    }

    pub fn two_cell_label(&self, c: TwoCell) -> String {
        format!(
            "{}=>{}",
            self.morphism_label(c.src),
            self.morphism_label(c.dst)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s3() -> ActionGroupoid {
        ActionGroupoid::new(GroupTable::named("S3").unwrap())
    }

    fn el(g: &ActionGroupoid, label: &str) -> GroupElement {
        g.group().element(label).unwrap()
    }

    #[test]
    fn source_target_examples() {
        let g = s3();
        let m = Morphism::new(el(&g, "(123)"), el(&g, "(12)"));
        assert_eq!(g.source(m), el(&g, "(23)"));
        assert_eq!(g.target(m), el(&g, "(13)"));
        let a = el(&g, "(123)");
        let id = Morphism::new(a, g.group().identity());
        assert_eq!((g.source(id), g.target(id)), (a, a));
        let c4 = ActionGroupoid::new(GroupTable::named("C4").unwrap());
        assert!(c4.morphisms().all(|m| c4.source(m) == c4.target(m)));
    }

    #[test]
    fn compose_examples() {
        let g = s3();
        let phi = Morphism::new(el(&g, "(123)"), el(&g, "(12)"));
        let b = g.target(phi);
        // right identity
        assert_eq!(g.compose(phi, g.identity_at(b)).unwrap(), phi);
        assert_eq!(
            g.compose(phi, Morphism::new(el(&g, "(13)"), g.group().identity()))
                .unwrap(),
            phi
        );
        // left identity
        let a = g.source(phi);
        assert_eq!(g.compose(g.identity_at(a), phi).unwrap(), phi);
        // non-composable
        let err = g.compose(phi, phi).unwrap_err();
        assert!(matches!(err, Error::Composition { .. }));
    }

    #[test]
    fn inverse_examples() {
        let g = s3();
        let a = el(&g, "(123)");
        assert_eq!(g.inverse_morphism(g.identity_at(a)), g.identity_at(a));
        let t = el(&g, "(12)");
        let m = Morphism::new(el(&g, "(123)"), t);
        let grp = g.group();
        let expected_u = grp.mul(grp.mul(t, el(&g, "(123)")), t);
        let inv = g.inverse_morphism(m);
        assert_eq!(inv, Morphism::new(expected_u, t));
        assert_eq!(g.compose(m, inv).unwrap(), g.identity_at(g.source(m)));
        assert_eq!(g.compose(inv, m).unwrap(), g.identity_at(g.target(m)));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let m = g.morphism_at(rng.gen_range(0..g.morphism_count()));
            assert_eq!(g.inverse_morphism(g.inverse_morphism(m)), m);
        }
    }

    #[test]
    fn hom_set_examples() {
        let g = s3();
        let e = g.group().identity();
        let loops = g.hom_set(e, e);
        assert_eq!(loops.len(), 6);
        assert!(loops.iter().all(|m| m.u == m.v));
        assert_eq!(g.hom_set(el(&g, "(23)"), el(&g, "(13)")).len(), 2);
        assert!(g.hom_set(el(&g, "(23)"), el(&g, "(123)")).is_empty());
    }

    #[test]
    fn hom_set_sizes_match_centralizers() {
        for name in ["S3", "D4", "Q8", "A4"] {
            let g = ActionGroupoid::new(GroupTable::named(name).unwrap());
            let grp = g.group();
            let mut total = 0;
            for a in grp.elements() {
                let z = grp.centralizer(a);
                for b in grp.elements() {
                    let hom = g.hom_set(a, b);
                    let expected = if grp.are_conjugate(a, b) { z.len() } else { 0 };
                    assert_eq!(hom.len(), expected);
                    assert!(hom.iter().all(|&m| g.source(m) == a && g.target(m) == b));
                    total += hom.len();
                }
                // loops at a are exactly (va, v) for v ∈ Z_G(a)
                let loops: Vec<Morphism> =
                    z.iter().map(|&v| Morphism::new(grp.mul(v, a), v)).collect();
                assert_eq!(g.hom_set(a, a), loops);
            }
            assert_eq!(total, grp.order() * grp.order());
        }
    }

    #[test]
    fn components_examples() {
        let mut sizes: Vec<usize> = s3().components().iter().map(|c| c.1.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        let trivial = ActionGroupoid::new(GroupTable::named("C1").unwrap());
        assert_eq!(trivial.components().len(), 1);
        let q8 = ActionGroupoid::new(GroupTable::named("Q8").unwrap());
        assert_eq!(q8.components().len(), 5);
        // totally connected: a non-empty hom-set between any two objects of a component
        for g in [s3(), q8] {
            for (_, objs) in g.components() {
                for &a in &objs {
                    assert!(objs.iter().all(|&b| !g.hom_set(a, b).is_empty()));
                }
            }
        }
    }

    #[test]
    fn two_cell_examples() {
        let g = s3();
        let hom = g.hom_set(el(&g, "(23)"), el(&g, "(13)"));
        let (phi, psi) = (hom[0], hom[1]);
        assert_eq!(g.two_cell(phi, phi), Some(g.identity_two_cell(phi)));
        assert_eq!(g.two_cell(phi, psi), Some(TwoCell { src: phi, dst: psi }));
        assert_eq!(g.two_cell(phi, g.identity_at(el(&g, "(23)"))), None);
    }

    #[test]
    fn two_cell_identity_laws() {
        let g = s3();
        let hom = g.hom_set(el(&g, "(23)"), el(&g, "(13)"));
        let alpha = g.two_cell(hom[0], hom[1]).unwrap();
        let id_src = g.identity_two_cell(alpha.src);
        let id_dst = g.identity_two_cell(alpha.dst);
        assert_eq!(g.vcompose(id_src, alpha).unwrap(), alpha);
        assert_eq!(g.vcompose(alpha, id_dst).unwrap(), alpha);
        let a = g.source(alpha.src);
        let b = g.target(alpha.src);
        let left = g.identity_two_cell(g.identity_at(a));
        let right = g.identity_two_cell(g.identity_at(b));
        assert_eq!(g.hcompose(left, alpha).unwrap(), alpha);
        assert_eq!(g.hcompose(alpha, right).unwrap(), alpha);
        assert!(g.vcompose(alpha, alpha).is_err());
        assert!(g.hcompose(alpha, alpha).is_err());
    }

    #[test]
    fn composition_laws_on_random_triples() {
        let g = ActionGroupoid::new(GroupTable::named("D4").unwrap());
        let grp = g.group();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let phi = g.morphism_at(rng.gen_range(0..g.morphism_count()));
            let psi = g
                .outgoing(g.target(phi))
                .nth(rng.gen_range(0..grp.order()))
                .unwrap();
            let xi = g
                .outgoing(g.target(psi))
                .nth(rng.gen_range(0..grp.order()))
                .unwrap();
            let left = g.compose(g.compose(phi, psi).unwrap(), xi).unwrap();
            let right = g.compose(phi, g.compose(psi, xi).unwrap()).unwrap();
            assert_eq!(left, right);
            let c = g.compose(phi, psi).unwrap();
            assert_eq!(g.source(c), g.source(phi));
            assert_eq!(g.target(c), g.target(psi));
        }
    }

    #[test]
    fn weak_inner_composition_identity() {
        // (a⁻¹bz, z) ∘ (bz, za) = (bz, az) ∘ (bza⁻¹, z) for z ∈ Z_G(b)
        for name in ["S3", "D4", "Q8"] {
            let g = ActionGroupoid::new(GroupTable::named(name).unwrap());
            let grp = g.group();
            for b in grp.elements() {
                for z in grp.centralizer(b) {
                    for a in grp.elements() {
                        let bz = grp.mul(b, z);
                        let a_inv = grp.inv(a);
                        let lhs = g
                            .compose(
                                Morphism::new(grp.mul(a_inv, bz), z),
                                Morphism::new(bz, grp.mul(z, a)),
                            )
                            .unwrap();
                        let rhs = g
                            .compose(
                                Morphism::new(bz, grp.mul(a, z)),
                                Morphism::new(grp.mul(bz, a_inv), z),
                            )
                            .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}
