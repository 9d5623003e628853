//! The character complex `0 → ℚ → X₀ → X₁ → X₂ → 0`.
//!
//! Level-0 characters are functions on objects. Level-1 characters are values on
//! 1-maps (all morphisms of an action groupoid, or the generating edges of a
//! presentation) that are additive under composition. Level-2 characters are
//! encoded by their values on the 2-cells `F(s, t) ⇒ ψ`, where `F` picks one
//! 1-map per ordered pair of objects in a component; such a 2-character is
//! determined by these values, and `φ₂(χ)(F(s,t) ⇒ ψ) = χ(ψ) − χ(F(s,t))`.
//! The level-2 coordinates are therefore the 1-maps outside `F`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::action::{ActionGroupoid, Morphism, TwoCell};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::linalg::{image_of, kernel_basis, Rational, SparseMatrix, Subspace};
use crate::presented::PresentedGroupoid;

/// Caps on generated constraint systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_rows: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_rows: 5_000_000,
        }
    }
}

/// Everything needed to build the complex for one source (a whole groupoid or
/// one of its components), in local coordinates.
#[derive(Debug, Clone)]
pub struct ComplexData {
    pub object_labels: Vec<String>,
    pub level1_labels: Vec<String>,
    /// `(source, target)` object of each level-1 coordinate.
    pub level1_ends: Vec<(usize, usize)>,
    /// Kernel of this matrix is `X₁`.
    pub additivity: SparseMatrix,
    /// Level-1 coordinates belonging to the spanning structure `F`.
    pub spanning: Vec<bool>,
    pub level2_labels: Vec<String>,
    /// Level-2 index of each level-1 coordinate outside `F`.
    pub level2_of_level1: Vec<Option<usize>>,
    /// `φ₂`, level-2 rows by level-1 columns.
    pub boundary2: SparseMatrix,
    /// A character is trivial on loops iff every row vanishes on it.
    pub loops: SparseMatrix,
    /// Object indices per connected component.
    pub components: Vec<Vec<usize>>,
}

pub trait CharacterSource {
    /// Complex of the whole source.
    fn complex(&self, limits: &Limits) -> Result<ComplexData>;
    /// One complex per connected component, ordered by lowest object.
    fn component_complexes(&self, limits: &Limits) -> Result<Vec<ComplexData>>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterSpace {
    pub level: u8,
    pub coordinates: Vec<String>,
    pub space: Subspace,
}

impl CharacterSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// `matrix` sends level `from_level` coordinates to level `to_level`
/// coordinates. Level `-1` is the scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMap {
    pub from_level: i8,
    pub to_level: i8,
    pub matrix: SparseMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositionCheck {
    /// Space where image and kernel are compared: `C`, `X0`, `X1` or `X2`.
    pub position: &'static str,
    pub image_dim: usize,
    pub kernel_dim: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComplexDims {
    pub x0: usize,
    pub x1: usize,
    pub x2: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentExactness {
    pub objects: Vec<String>,
    pub dims: ComplexDims,
    pub positions: Vec<PositionCheck>,
    /// `φ₁(X₀) ⊆ X₁` and `φ₂(X₁) ⊆ X₂`.
    pub maps_characters: bool,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub dims: ComplexDims,
    pub components: Vec<ComponentExactness>,
    /// The same four comparisons on the whole source.
    pub full_positions: Vec<PositionCheck>,
    /// `dim ker φ₁ − dim Im φ₀` on the whole source, i.e. `#components − 1`.
    pub defect_at_x0: usize,
    pub exact: bool,
}

impl ComplexData {
    pub fn num_objects(&self) -> usize {
        self.object_labels.len()
    }

    pub fn num_level1(&self) -> usize {
        self.level1_labels.len()
    }

    pub fn num_level2(&self) -> usize {
        self.level2_labels.len()
    }

    /// `φ₀`: the constants, as a single column.
    pub fn boundary0(&self) -> SparseMatrix {
        let n = self.num_objects();
        SparseMatrix::from_int_triplets(n, 1, (0..n).map(|i| (i, 0, 1)))
            .unwrap_or_else(|_| unreachable!())
    }

    /// `φ₁`: `+1` at the target object, `−1` at the source.
    pub fn boundary1(&self) -> SparseMatrix {
        let triplets = self
            .level1_ends
            .iter()
            .enumerate()
            .flat_map(|(r, &(s, t))| [(r, t, 1), (r, s, -1)]);
        SparseMatrix::from_int_triplets(self.num_level1(), self.num_objects(), triplets)
            .unwrap_or_else(|_| unreachable!())
    }

    pub fn boundary(&self, level: u8) -> Result<BoundaryMap> {
        let matrix = match level {
            0 => self.boundary0(),
            1 => self.boundary1(),
            2 => self.boundary2.clone(),
            _ => return Err(Error::Contract(format!("no boundary map at level {level}"))),
        };
        let level = level as i8;
        Ok(BoundaryMap {
            from_level: level - 1,
            to_level: level,
            matrix,
        })
    }

    /// Constraints on level-2 values: additivity with the `F` coordinates set to 0.
    pub fn two_character_constraints(&self) -> SparseMatrix {
        let keep: Vec<usize> = (0..self.num_level1())
            .filter(|&j| !self.spanning[j])
            .collect();
        self.additivity.select_columns(&keep)
    }

    pub fn x0_space(&self) -> CharacterSpace {
        CharacterSpace {
            level: 0,
            coordinates: self.object_labels.clone(),
            space: Subspace::full(self.num_objects()),
        }
    }

    pub fn x1_space(&self) -> CharacterSpace {
        CharacterSpace {
            level: 1,
            coordinates: self.level1_labels.clone(),
            space: kernel_basis(&self.additivity),
        }
    }

    /// `φ₂(X₁)`. Its equality with [`Self::x2_solution_space`] is the last
    /// exactness position.
    pub fn x2_space(&self) -> CharacterSpace {
        let x1 = kernel_basis(&self.additivity);
        CharacterSpace {
            level: 2,
            coordinates: self.level2_labels.clone(),
            space: image_of(&self.boundary2, &x1).unwrap_or_else(|_| unreachable!()),
        }
    }

    /// Every assignment of level-2 values compatible with additivity.
    pub fn x2_solution_space(&self) -> Subspace {
        kernel_basis(&self.two_character_constraints())
    }

    pub fn is_character(&self, chi: &[Rational]) -> Result<bool> {
        check_len("level-1 vector", chi.len(), self.num_level1())?;
        Ok(self.additivity.mul_vec(chi)?.iter().all(Zero::is_zero))
    }

    pub fn is_trivial_on_loops(&self, chi: &[Rational]) -> Result<bool> {
        check_len("level-1 vector", chi.len(), self.num_level1())?;
        Ok(self.loops.mul_vec(chi)?.iter().all(Zero::is_zero))
    }

    /// The 1-character vanishing on `F` whose boundary is `φ₂(c)`.
    pub fn lift_two_character(&self, c: &[Rational]) -> Result<Vec<Rational>> {
        if !self.is_character(c)? {
            return Err(Error::NotACharacter(
                "representative violates additivity".into(),
            ));
        }
        let y = self.boundary2.mul_vec(c)?;
        self.lift_level2(&y)
    }

    /// Places level-2 values on the non-`F` coordinates.
    pub fn lift_level2(&self, y: &[Rational]) -> Result<Vec<Rational>> {
        check_len("level-2 vector", y.len(), self.num_level2())?;
        Ok(self
            .level2_of_level1
            .iter()
            .map(|k| k.map_or_else(Rational::zero, |k| y[k].clone()))
            .collect())
    }

    /// The four comparisons `Im φ_s` vs `ker φ₀`, `Im φ₀` vs `ker φ₁`,
    /// `Im φ₁` vs `ker φ₂ ∩ X₁`, `Im φ₂` vs `X₂`.
    pub fn positions(&self) -> Vec<PositionCheck> {
        let x1 = kernel_basis(&self.additivity);
        let phi0 = self.boundary0();
        let phi1 = self.boundary1();
        let check = |position, image: Subspace, kernel: Subspace| PositionCheck {
            position,
            image_dim: image.dim(),
            kernel_dim: kernel.dim(),
            equal: image == kernel,
        };
        let ker_phi1 = kernel_basis(&phi1);
        let ker_phi2 = kernel_basis(
            &self
                .additivity
                .vstack(&self.boundary2)
                .unwrap_or_else(|_| unreachable!()),
        );
        vec![
            check("C", Subspace::zero(1), kernel_basis(&phi0)),
            check(
                "X0",
                Subspace::from_spanning(
                    self.num_objects(),
                    [vec![Rational::one(); self.num_objects()]],
                )
                .unwrap_or_else(|_| unreachable!()),
                ker_phi1,
            ),
            check(
                "X1",
                image_of(&phi1, &Subspace::full(self.num_objects()))
                    .unwrap_or_else(|_| unreachable!()),
                ker_phi2,
            ),
            check(
                "X2",
                image_of(&self.boundary2, &x1).unwrap_or_else(|_| unreachable!()),
                self.x2_solution_space(),
            ),
        ]
    }

    pub fn dims(&self) -> ComplexDims {
        ComplexDims {
            x0: self.num_objects(),
            x1: kernel_basis(&self.additivity).dim(),
            x2: self.x2_space().dim(),
        }
    }

    fn maps_characters(&self) -> bool {
        let x1 = kernel_basis(&self.additivity);
        let phi1 = self.boundary1();
        let into_x1 = (0..self.num_objects()).all(|i| {
            let col = phi1
                .mul_vec(&crate::linalg::unit_vector(self.num_objects(), i))
                .unwrap();
            x1.contains(&col).unwrap()
        });
        let x2 = self.x2_solution_space();
        let into_x2 = x1
            .basis()
            .iter()
            .all(|v| x2.contains(&self.boundary2.mul_vec(v).unwrap()).unwrap());
        into_x1 && into_x2
    }

    pub fn component_exactness(&self) -> ComponentExactness {
        let positions = self.positions();
        let maps_characters = self.maps_characters();
        let exact = maps_characters && positions.iter().all(|p| p.equal);
        ComponentExactness {
            objects: self.object_labels.clone(),
            dims: self.dims(),
            positions,
            maps_characters,
            exact,
        }
    }
}

fn check_len(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::Contract(format!(
            "{what} of length {got}, expected {want}"
        )));
    }
    Ok(())
}

pub fn x0_space<S: CharacterSource + ?Sized>(
    source: &S,
    limits: &Limits,
) -> Result<CharacterSpace> {
    Ok(source.complex(limits)?.x0_space())
}

pub fn x1_space<S: CharacterSource + ?Sized>(
    source: &S,
    limits: &Limits,
) -> Result<CharacterSpace> {
    Ok(source.complex(limits)?.x1_space())
}

pub fn x2_space<S: CharacterSource + ?Sized>(
    source: &S,
    limits: &Limits,
) -> Result<CharacterSpace> {
    Ok(source.complex(limits)?.x2_space())
}

pub fn boundary<S: CharacterSource + ?Sized>(
    level: u8,
    source: &S,
    limits: &Limits,
) -> Result<BoundaryMap> {
    source.complex(limits)?.boundary(level)
}

pub fn is_trivial_on_loops<S: CharacterSource + ?Sized>(
    chi: &[Rational],
    source: &S,
    limits: &Limits,
) -> Result<bool> {
    source.complex(limits)?.is_trivial_on_loops(chi)
}

pub fn lift_two_character<S: CharacterSource + ?Sized>(
    source: &S,
    c: &[Rational],
    limits: &Limits,
) -> Result<Vec<Rational>> {
    source.complex(limits)?.lift_two_character(c)
}

pub fn verify_exactness<S: CharacterSource + ?Sized>(
    source: &S,
    limits: &Limits,
) -> Result<ExactnessReport> {
    let full = source.complex(limits)?;
    let components: Vec<ComponentExactness> = source
        .component_complexes(limits)?
        .iter()
        .map(ComplexData::component_exactness)
        .collect();
    let full_positions = full.positions();
    let x0 = &full_positions[1];
    let exact = components.iter().all(|c| c.exact);
    Ok(ExactnessReport {
        dims: full.dims(),
        components,
        defect_at_x0: x0.kernel_dim - x0.image_dim,
        full_positions,
        exact,
    })
}

impl ActionGroupoid {
    fn complex_on(&self, objects: &[GroupElement], limits: &Limits) -> Result<ComplexData> {
        let g = self.group();
        let n = g.order();
        let requested = objects.len() as u128 * n as u128 * n as u128;
        if requested > limits.max_rows {
            return Err(Error::SizeLimit {
                what: "additivity constraint rows",
                requested,
                limit: limits.max_rows,
            });
        }
        let mut object_pos = vec![usize::MAX; n];
        for (i, a) in objects.iter().enumerate() {
            object_pos[a.index()] = i;
        }
        // Morphisms with source in `objects`, in canonical order.
        let morphisms: Vec<Morphism> = self
            .morphisms()
            .filter(|&m| object_pos[self.source(m).index()] != usize::MAX)
            .collect();
        let mut local = vec![usize::MAX; self.morphism_count()];
        for (i, &m) in morphisms.iter().enumerate() {
            local[self.morphism_index(m)] = i;
        }

        let mut triplets = Vec::new();
        let mut r = 0;
        for &phi in &morphisms {
            for psi in self.outgoing(self.target(phi)) {
                let comp = self.compose(phi, psi)?;
                triplets.push((r, local[self.morphism_index(comp)], 1));
                triplets.push((r, local[self.morphism_index(phi)], -1));
                triplets.push((r, local[self.morphism_index(psi)], -1));
                r += 1;
            }
        }
        let additivity = SparseMatrix::from_int_triplets(r, morphisms.len(), triplets)?;

        // F(b, c) = rep(b)⁻¹ ∘ rep(c), rep(x) the first morphism from the
        // component's lowest object to x.
        let classes = self.classes();
        let mut rep: HashMap<usize, Morphism> = HashMap::new();
        for &x in objects {
            let root = classes.representatives[classes.class_of(x)];
            let first = self
                .hom_set(root, x)
                .into_iter()
                .next()
                .unwrap_or_else(|| unreachable!("components are totally connected"));
            rep.insert(x.index(), first);
        }
        let f_of = |b: GroupElement, c: GroupElement| -> Morphism {
            self.compose(self.inverse_morphism(rep[&b.index()]), rep[&c.index()])
                .unwrap_or_else(|_| unreachable!("both representatives start at the root"))
        };
        let mut spanning = vec![false; morphisms.len()];
        for &b in objects {
            for &c in objects {
                if classes.class_of(b) == classes.class_of(c) {
                    spanning[local[self.morphism_index(f_of(b, c))]] = true;
                }
            }
        }

        let mut level2_labels = Vec::new();
        let mut level2_of_level1 = vec![None; morphisms.len()];
        let mut b2 = Vec::new();
        let mut loop_rows = Vec::new();
        for (j, &psi) in morphisms.iter().enumerate() {
            let (s, t) = (self.source(psi), self.target(psi));
            if s == t {
                loop_rows.push((loop_rows.len(), j, 1));
            }
            if spanning[j] {
                continue;
            }
            let f = f_of(s, t);
            let k = level2_labels.len();
            level2_of_level1[j] = Some(k);
            level2_labels.push(self.two_cell_label(TwoCell { src: f, dst: psi }));
            b2.push((k, j, 1));
            b2.push((k, local[self.morphism_index(f)], -1));
        }
        let boundary2 = SparseMatrix::from_int_triplets(level2_labels.len(), morphisms.len(), b2)?;
        let loops = SparseMatrix::from_int_triplets(loop_rows.len(), morphisms.len(), loop_rows)?;

        let mut components: Vec<Vec<usize>> = Vec::new();
        let mut comp_of_class = HashMap::new();
        for (i, &x) in objects.iter().enumerate() {
            let id = *comp_of_class.entry(classes.class_of(x)).or_insert_with(|| {
                components.push(Vec::new());
                components.len() - 1
            });
            components[id].push(i);
        }

        Ok(ComplexData {
            object_labels: objects.iter().map(|&a| g.label(a).to_string()).collect(),
            level1_labels: morphisms.iter().map(|&m| self.morphism_label(m)).collect(),
            level1_ends: morphisms
                .iter()
                .map(|&m| {
                    (
                        object_pos[self.source(m).index()],
                        object_pos[self.target(m).index()],
                    )
                })
                .collect(),
            additivity,
            spanning,
            level2_labels,
            level2_of_level1,
            boundary2,
            loops,
            components,
        })
    }
}

impl CharacterSource for ActionGroupoid {
    fn complex(&self, limits: &Limits) -> Result<ComplexData> {
        let objects: Vec<GroupElement> = self.group().elements().collect();
        self.complex_on(&objects, limits)
    }

    fn component_complexes(&self, limits: &Limits) -> Result<Vec<ComplexData>> {
        let n = self.group().order() as u128;
        let requested = n * n * n;
        if requested > limits.max_rows {
            return Err(Error::SizeLimit {
                what: "additivity constraint rows",
                requested,
                limit: limits.max_rows,
            });
        }
        self.components()
            .into_iter()
            .map(|(_, objects)| self.complex_on(&objects, limits))
            .collect()
    }
}

impl PresentedGroupoid {
    fn complex_on(&self, objects: &[usize]) -> Result<ComplexData> {
        let q = self.quiver();
        let n = q.objects().len();
        let mut object_pos = vec![usize::MAX; n];
        for (i, &x) in objects.iter().enumerate() {
            object_pos[x] = i;
        }
        let edges: Vec<usize> = (0..q.edges().len())
            .filter(|&e| object_pos[q.edges()[e].src] != usize::MAX)
            .collect();
        let mut local = vec![usize::MAX; q.edges().len()];
        for (i, &e) in edges.iter().enumerate() {
            local[e] = i;
        }
        let relations: Vec<usize> = (0..self.relations().len())
            .filter(|&r| {
                self.relations()[r]
                    .letters()
                    .first()
                    .is_some_and(|&(e, _)| local[e] != usize::MAX)
            })
            .collect();
        let full = self.relation_matrix();
        let triplets = full.entries().iter().filter_map(|(r, c, v)| {
            let row = relations.iter().position(|x| x == r)?;
            Some((row, local[*c], v.clone()))
        });
        let additivity = SparseMatrix::from_triplets(relations.len(), edges.len(), triplets)?;

        let forest = self.forest();
        let mut spanning = vec![false; edges.len()];
        for tree in &forest.trees {
            for &e in tree {
                if local[e] != usize::MAX {
                    spanning[local[e]] = true;
                }
            }
        }
        let mut level2_labels = Vec::new();
        let mut level2_of_level1 = vec![None; edges.len()];
        let mut b2: Vec<(usize, usize, Rational)> = Vec::new();
        for (j, &e) in edges.iter().enumerate() {
            if spanning[j] {
                continue;
            }
            let edge = &q.edges()[e];
            let k = level2_labels.len();
            level2_of_level1[j] = Some(k);
            level2_labels.push(format!(
                "T({},{})=>{}",
                q.objects()[edge.src],
                q.objects()[edge.dst],
                edge.name
            ));
            b2.push((k, j, Rational::one()));
            // minus the tree path src → dst, i.e. path(root → dst) − path(root → src)
            for (te, sign) in forest.path_from_root(q.edges(), edge.dst) {
                b2.push((k, local[te], Rational::from_integer((-sign).into())));
            }
            for (te, sign) in forest.path_from_root(q.edges(), edge.src) {
                b2.push((k, local[te], Rational::from_integer(sign.into())));
            }
        }
        let boundary2 = SparseMatrix::from_triplets(level2_labels.len(), edges.len(), b2)?;

        let mut components: Vec<Vec<usize>> = Vec::new();
        let mut comp_ids = HashMap::new();
        for (i, &x) in objects.iter().enumerate() {
            let id = *comp_ids.entry(self.component_of(x)).or_insert_with(|| {
                components.push(Vec::new());
                components.len() - 1
            });
            components[id].push(i);
        }

        Ok(ComplexData {
            object_labels: objects.iter().map(|&x| q.objects()[x].clone()).collect(),
            level1_labels: edges.iter().map(|&e| q.edges()[e].name.clone()).collect(),
            level1_ends: edges
                .iter()
                .map(|&e| (object_pos[q.edges()[e].src], object_pos[q.edges()[e].dst]))
                .collect(),
            additivity,
            spanning,
            level2_labels,
            level2_of_level1,
            loops: boundary2.clone(),
            boundary2,
            components,
        })
    }
}

impl CharacterSource for PresentedGroupoid {
    fn complex(&self, _limits: &Limits) -> Result<ComplexData> {
        let objects: Vec<usize> = (0..self.quiver().objects().len()).collect();
        self.complex_on(&objects)
    }

    fn component_complexes(&self, _limits: &Limits) -> Result<Vec<ComplexData>> {
        self.components()
            .iter()
            .map(|objects| self.complex_on(objects))
            .collect()
    }
}
