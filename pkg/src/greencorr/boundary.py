"""The boundary operator on isocommas: splitting (E/F/G) over (E/F/H).

Given a faithful i : H -> G and faithful embeddings E, F -> H, the isocomma
over H sits fully-faithfully inside the isocomma over G, with replete image;
the boundary is the union of the components missed by that image.  The
boundary always carries the restrictions of both projections and of the
tautological 2-cell, and embeds into H through the first projection (the
only convention this package uses).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, TheoremViolationError
from .groupoids import (
    FiniteGroupoid,
    GroupoidFunctor,
    IsocommaResult,
    TwoCell,
    compose_functors,
    full_subgroupoid,
    identity_functor,
    is_equivalence,
    isocomma,
)


@dataclass
class PartialResult:
    """The split (E/F/G) ≅ (E/F/H) ⊔ boundary, with all the attached maps.

    embedding is the fully-faithful comparison (E/F/H) -> (E/F/G); h_part is
    the union of components meeting its image; boundary the complement.
    pr1/pr2_to_F are the restricted projections on the boundary and pr1_to_H
    the tacit embedding boundary -> H through the first projection.
    """

    i: GroupoidFunctor
    iota_e: GroupoidFunctor
    iota_f: GroupoidFunctor
    ambient: IsocommaResult
    inner: IsocommaResult
    embedding: GroupoidFunctor
    h_part: FiniteGroupoid
    h_part_inclusion: GroupoidFunctor
    boundary: FiniteGroupoid
    boundary_inclusion: GroupoidFunctor
    pr1: GroupoidFunctor
    pr2_to_F: GroupoidFunctor
    pr1_to_H: GroupoidFunctor
    gamma: TwoCell

    @property
    def boundary_components(self):
        return self.boundary.components

    def ambient_to_boundary_objects(self) -> np.ndarray:
        out = np.full(self.ambient.groupoid.n_objects, -1, dtype=np.int64)
        out[self.boundary_inclusion.obj_map] = np.arange(self.boundary.n_objects)
        return out

    def ambient_to_boundary_morphisms(self) -> np.ndarray:
        out = np.full(self.ambient.groupoid.n_morphisms, -1, dtype=np.int64)
        out[self.boundary_inclusion.mor_map] = np.arange(self.boundary.n_morphisms)
        return out


def partial(i: GroupoidFunctor, iota_e: GroupoidFunctor,
            iota_f: GroupoidFunctor, name: str = "") -> PartialResult:
    """Compute the boundary of (E/F/G) relative to (E/F/H).

    i : H -> G and iota_e : E -> H, iota_f : F -> H must all be faithful.
    """
    for F, what in ((i, "i"), (iota_e, "iota_E"), (iota_f, "iota_F")):
        if not F.faithful:
            raise InputError(f"{what} must be faithful")
    if iota_e.codomain is not i.domain or iota_f.codomain is not i.domain:
        raise InputError("E and F must embed into the domain of i")

    inner = isocomma(iota_e, iota_f)
    ambient = isocomma(compose_functors(i, iota_e), compose_functors(i, iota_f))

    # the comparison (E/F/H) -> (E/F/G): (x, y, h) |-> (x, y, i(h))
    n_in = inner.groupoid.n_objects
    obj_map = np.empty(n_in, dtype=np.int32)
    for o, (x, y, h) in enumerate(inner.object_labels):
        obj_map[o] = ambient.object_index(x, y, i.mor(h))
    mor_map = np.empty(inner.groupoid.n_morphisms, dtype=np.int32)
    for m in range(inner.groupoid.n_morphisms):
        o, a, b = inner.morphism_parts(m)
        mor_map[m] = ambient.morphism_index(int(obj_map[o]), a, b)
    embedding = GroupoidFunctor(inner.groupoid, ambient.groupoid,
                                obj_map, mor_map, name="(E/F/i)")

    comp_of = ambient.groupoid.component_of()
    hit = set(int(comp_of[o]) for o in obj_map)
    h_objs = [o for o in range(ambient.groupoid.n_objects)
              if int(comp_of[o]) in hit]
    b_objs = [o for o in range(ambient.groupoid.n_objects)
              if int(comp_of[o]) not in hit]
    h_part, h_incl = full_subgroupoid(ambient.groupoid, h_objs,
                                      name=(name or "partial") + ":h-part")
    bdry, b_incl = full_subgroupoid(ambient.groupoid, b_objs,
                                    name=(name or "partial") + ":boundary")

    pr1 = compose_functors(ambient.pr1, b_incl)
    pr2 = compose_functors(ambient.pr2, b_incl)
    pr1_to_h = compose_functors(iota_e, pr1)
    gamma = TwoCell(
        compose_functors(compose_functors(i, iota_e), pr1),
        compose_functors(compose_functors(i, iota_f), pr2),
        ambient.gamma.components[b_incl.obj_map],
        name="gamma|boundary", check=False)
    return PartialResult(i, iota_e, iota_f, ambient, inner, embedding,
                         h_part, h_incl, bdry, b_incl, pr1, pr2, pr1_to_h, gamma)


def diagonal_functor(k: GroupoidFunctor, ell: GroupoidFunctor,
                     part: PartialResult, part_prime: PartialResult) -> GroupoidFunctor:
    """The boundary restriction of (k/ell/G) : (E/F/G) -> (E'/F'/G).

    Requires the strict commutation iota_E = iota_E' ∘ k and
    iota_F = iota_F' ∘ ell; the image of a boundary component never meets the
    (E'/F'/H) part, which the construction asserts.
    """
    if part.i is not part_prime.i:
        raise InputError("diagonal functor requires the same i : H -> G")
    ce = compose_functors(part_prime.iota_e, k)
    cf = compose_functors(part_prime.iota_f, ell)
    if not ((ce.obj_map == part.iota_e.obj_map).all()
            and (ce.mor_map == part.iota_e.mor_map).all()):
        raise InputError("embeddings do not commute strictly on the E side")
    if not ((cf.obj_map == part.iota_f.obj_map).all()
            and (cf.mor_map == part.iota_f.mor_map).all()):
        raise InputError("embeddings do not commute strictly on the F side")

    amb, amb2 = part.ambient, part_prime.ambient
    b_to_amb = part.boundary_inclusion
    amb2_obj = part_prime.ambient_to_boundary_objects()
    amb2_mor = part_prime.ambient_to_boundary_morphisms()

    n_obj = part.boundary.n_objects
    obj_map = np.empty(n_obj, dtype=np.int32)
    for o in range(n_obj):
        x, y, g = amb.object_labels[int(b_to_amb.obj_map[o])]
        target = amb2.object_index(k.obj(x), ell.obj(y), g)
        sub = int(amb2_obj[target])
        if sub < 0:
            raise TheoremViolationError(
                "image of a boundary object fell into the H part")
        obj_map[o] = sub
    n_mor = part.boundary.n_morphisms
    mor_map = np.empty(n_mor, dtype=np.int32)
    for m in range(n_mor):
        o, a, b = amb.morphism_parts(int(b_to_amb.mor_map[m]))
        amb2_o = int(part_prime.boundary_inclusion.obj_map[
            obj_map[int(part.boundary.msrc[m])]])
        target = amb2.morphism_index(amb2_o, k.mor(a), ell.mor(b))
        sub = int(amb2_mor[target])
        assert sub >= 0
        mor_map[m] = sub
    return GroupoidFunctor(part.boundary, part_prime.boundary, obj_map, mor_map,
                           name="∂(k,ell)")


def geography_check(i: GroupoidFunctor, j1: GroupoidFunctor,
                    j2: GroupoidFunctor) -> tuple[bool, GroupoidFunctor]:
    """Check the equivalence (D1 / boundary(H,D2) / H) ≃ boundary(D1,D2).

    Builds the canonical comparison functor obtained by pasting the Mackey
    squares of the double isocomma diagram and tests it exhaustively.
    Returns (verdict, witness functor).
    """
    H = i.domain
    part_dd = partial(i, j1, j2, name="dd")
    part_hd = partial(i, identity_functor(H), j2, name="hd")
    b2 = part_hd.boundary
    u2 = part_hd.pr1_to_H  # equals pr1 since E = H
    Y = isocomma(j1, u2)

    amb2_obj = part_hd.ambient_to_boundary_objects()
    amb2_mor = part_hd.ambient_to_boundary_morphisms()
    Bdd = part_dd.boundary
    b_to_amb = part_dd.boundary_inclusion

    obj_map = np.empty(Bdd.n_objects, dtype=np.int32)
    b2_of = np.empty(Bdd.n_objects, dtype=np.int64)
    for o in range(Bdd.n_objects):
        x, y, g = part_dd.ambient.object_labels[int(b_to_amb.obj_map[o])]
        amb_idx = part_hd.ambient.object_index(j1.obj(x), y, g)
        sub = int(amb2_obj[amb_idx])
        if sub < 0:
            raise TheoremViolationError(
                "boundary(D1,D2) object landed outside boundary(H,D2)")
        b2_of[o] = sub
        hx = j1.obj(x)
        obj_map[o] = Y.object_index(x, sub, H.identity_morphism(hx))
    mor_map = np.empty(Bdd.n_morphisms, dtype=np.int32)
    for m in range(Bdd.n_morphisms):
        amb_m = int(b_to_amb.mor_map[m])
        _, a, b = part_dd.ambient.morphism_parts(amb_m)
        o = int(Bdd.msrc[m])
        amb2_src = int(part_hd.boundary_inclusion.obj_map[b2_of[o]])
        w = part_hd.ambient.morphism_index(amb2_src, j1.mor(a), b)
        wsub = int(amb2_mor[w])
        assert wsub >= 0
        mor_map[m] = Y.morphism_index(int(obj_map[o]), a, wsub)
    witness = GroupoidFunctor(Bdd, Y.groupoid, obj_map, mor_map,
                              name="geography-comparison")
    return is_equivalence(witness), witness


@dataclass
class TrickyFactorization:
    """u : (H / boundary(D,D) / G) -> boundary(H,D) with pr1 ∘ u = pr1 strictly."""

    u: GroupoidFunctor
    domain_isocomma: IsocommaResult
    target_partial: PartialResult
    strict_on_objects: bool
    strict_on_morphisms: bool


def tricky_factorization(i: GroupoidFunctor, j: GroupoidFunctor) -> TrickyFactorization:
    """Factor pr1 : (H / boundary(D,D) / G) -> H through boundary(H,D).

    The functor u is assembled from two formulas, one per side of the split
    (H/B/G) ≅ (H/B/H) ⊔ boundary(H,B) where B = boundary(D,D): on components
    meeting (H/B/H) the middle triple is pushed along the inner 2-cell, on the
    rest the first projection of B is applied.  Strict equality pr1 ∘ u = pr1
    is asserted exhaustively; a failure would falsify the implementation.
    """
    H, G = i.domain, i.codomain
    D = j.domain
    part_dd = partial(i, j, j, name="dd")
    B = part_dd.boundary
    iota_b = part_dd.pr1_to_H  # B -> H via j ∘ pr1, the tacit convention

    part_hb = partial(i, identity_functor(H), iota_b, name="hb")
    M = part_hb.ambient  # (H/B/G)
    part_hd = partial(i, identity_functor(H), j, name="hd")
    W = part_hd.ambient  # (H/D/G)
    t_obj = part_hd.ambient_to_boundary_objects()
    t_mor = part_hd.ambient_to_boundary_morphisms()

    comp_of = M.groupoid.component_of()
    h_comps = set(int(c) for c in comp_of[part_hb.h_part_inclusion.obj_map])

    dd_amb = part_dd.ambient
    b_to_dd = part_dd.boundary_inclusion
    Ggpd = i.codomain

    n_obj = M.groupoid.n_objects
    obj_map = np.empty(n_obj, dtype=np.int32)
    for o in range(n_obj):
        x, b_obj, g = M.object_labels[o]
        xd, yd, a = dd_amb.object_labels[int(b_to_dd.obj_map[b_obj])]
        if int(comp_of[o]) in h_comps:
            target = W.object_index(x, yd, Ggpd.compose(a, g))
        else:
            target = W.object_index(x, xd, g)
        sub = int(t_obj[target])
        if sub < 0:
            raise TheoremViolationError(
                "factorization image left boundary(H,D)")
        obj_map[o] = sub

    n_mor = M.groupoid.n_morphisms
    mor_map = np.empty(n_mor, dtype=np.int32)
    Tgpd = part_hd.boundary
    for m in range(n_mor):
        o, h_m, bm = M.morphism_parts(m)
        _, d1, d2 = dd_amb.morphism_parts(int(b_to_dd.mor_map[bm]))
        w_src = int(part_hd.boundary_inclusion.obj_map[obj_map[o]])
        if int(comp_of[o]) in h_comps:
            w = W.morphism_index(w_src, h_m, d2)
        else:
            w = W.morphism_index(w_src, h_m, d1)
        sub = int(t_mor[w])
        assert sub >= 0
        mor_map[m] = sub
    u = GroupoidFunctor(M.groupoid, Tgpd, obj_map, mor_map, name="u")

    # strict equality pr1 ∘ u = pr1 on objects and morphisms
    left_obj = part_hd.pr1.obj_map[u.obj_map]
    left_mor = part_hd.pr1.mor_map[u.mor_map]
    strict_obj = bool((left_obj == M.pr1.obj_map).all())
    strict_mor = bool((left_mor == M.pr1.mor_map).all())
    if not (strict_obj and strict_mor):
        raise TheoremViolationError("pr1 ∘ u differs from pr1")
    return TrickyFactorization(u, M, part_hd, strict_obj, strict_mor)
