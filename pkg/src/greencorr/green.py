"""Quotient-category hom spaces and the Green correspondence.

A Scenario fixes a prime p and a chain D <= H <= G.  The engine computes
dimensions of hom spaces in the additive quotients of D-objects by
X-objects (X = {D ∩ gDg^-1 : g outside H}), moves indecomposables up and
down through induction/restriction by discarding the X- respectively Y-parts,
and assembles a machine-checked report of the correspondence properties.

Maps factoring through X-objects are computed as relative-trace images,
which is the counit factorization criterion transported through the
induction/restriction adjunction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg
from .boundary import partial
from .decompose import (
    decompose,
    end_info,
    is_direct_summand,
    relative_trace_image,
    vertex,
    _iso_indec,
)
from .errors import InputError, TheoremViolationError
from .groupoids import GroupoidFunctor, group_groupoid, identity_functor
from .linalg import rref
from .modules import (
    FpModule,
    hom_space,
    induce,
    regular_module,
    restrict,
    trivial_module,
)
from .permgroups import (
    Families,
    PermGroup,
    SubgroupEmbedding,
    all_subgroups,
    is_subconjugate,
    normalizer,
    whole_group,
    x_y_u_families,
)

SCHEMA_VERSION = "1"


@dataclass
class Scenario:
    """A (p, G, H, D) instance with its subgroup families and flags."""

    p: int
    G: PermGroup
    H: SubgroupEmbedding
    D: SubgroupEmbedding
    families: Families
    normalizer_condition: bool
    name: str = "scenario"

    @classmethod
    def build(cls, p: int, G: PermGroup, H: SubgroupEmbedding,
              D: SubgroupEmbedding, name: str = "scenario") -> "Scenario":
        if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
            raise InputError(f"{p} is not prime")
        if not H.contains(D):
            raise InputError("chain violation: D not contained in H")
        fams = x_y_u_families(G, H, D)
        ncond = H.contains(normalizer(G, D))
        return cls(p, G, H, D, fams, ncond, name)

    @cached_property
    def d_in_h(self) -> SubgroupEmbedding:
        return SubgroupEmbedding(
            self.H.group, tuple(self.H.from_ambient[a]
                                for a in self.D.element_indices), "D")

    def x_in_g(self) -> list[SubgroupEmbedding]:
        return self.families.x_classes

    @cached_property
    def _x_in_h(self) -> list[SubgroupEmbedding]:
        return self._family_in_h([S for _, S in self.families.x_pairs])

    @cached_property
    def _y_in_h(self) -> list[SubgroupEmbedding]:
        return self._family_in_h([S for _, S in self.families.y_pairs])

    def x_in_h(self) -> list[SubgroupEmbedding]:
        """The X family as subgroups of H, deduplicated up to H-conjugacy."""
        return self._x_in_h

    def y_in_h(self) -> list[SubgroupEmbedding]:
        return self._y_in_h

    def _family_in_h(self, members: list[SubgroupEmbedding]) -> list[SubgroupEmbedding]:
        seen: dict[tuple, SubgroupEmbedding] = {}
        for S in members:
            inside = SubgroupEmbedding(
                self.H.group,
                tuple(self.H.from_ambient[a] for a in S.element_indices),
                S.tag)
            key = inside.canonical_class_key()
            seen.setdefault(key, inside)
        return sorted(seen.values(), key=lambda s: (-s.order, s.element_indices))


# ---------------------------------------------------------------------------
# quotient homs
# ---------------------------------------------------------------------------


def factoring_subspace(M: FpModule, N: FpModule,
                       family: list[SubgroupEmbedding]) -> tuple[np.ndarray, list[int]]:
    """Echelonized basis of the maps M -> N factoring through family-induced
    objects: the sum over X of the image of postcomposition with the counit
    Ind_X Res_X N -> N, computed as relative-trace images."""
    rows = []
    for X in family:
        R, _ = relative_trace_image(M, N, X)
        if R.shape[0]:
            rows.append(R)
    if not rows:
        empty = np.zeros((0, M.dim * N.dim), dtype=np.int64)
        return empty, []
    stacked = np.concatenate(rows)
    return rref(stacked, M.p)


def quotient_hom_dim(M: FpModule, N: FpModule,
                     family: list[SubgroupEmbedding]) -> int:
    """dim Hom(M, N) minus the dimension of the family-factoring subspace."""
    full = len(hom_space(M, N))
    if not family:
        return full
    R, _ = factoring_subspace(M, N, family)
    return full - R.shape[0]


def is_x_object(M: FpModule, family: list[SubgroupEmbedding],
                seed: int = 0) -> bool:
    """Whether the indecomposable M lies in the additive closure of modules
    induced from the family: tested via vertex subconjugacy."""
    if not family:
        return False
    if M.dim == 0:
        return True
    v = vertex(M, seed).vertex
    G = M.group
    return any(is_subconjugate(G, v, X) for X in family)


def is_x_object_summand_check(M: FpModule, family: list[SubgroupEmbedding],
                              seed: int = 0) -> bool:
    """Direct cross-check: M is a retract of ⊕_X Ind_X Res_X M."""
    if not family:
        return False
    from .decompose import multiset_of_classes

    pieces = []
    for X in family:
        ind = induce(restrict(M, X), X)
        pieces.append(decompose(ind, seed))
    merged = multiset_of_classes(pieces)
    return any(rep.dim == M.dim and _iso_indec(M, rep) for rep, _ in merged)


# ---------------------------------------------------------------------------
# eligible test sets
# ---------------------------------------------------------------------------


def _dedup_classes(mods: list[FpModule]) -> list[FpModule]:
    out: list[FpModule] = []
    for m in mods:
        if m.dim == 0:
            continue
        if not any(r.dim == m.dim and _iso_indec(r, m) for r in out):
            out.append(m)
    return out


def generating_family_over_D(sc: Scenario, seed: int = 0) -> list[FpModule]:
    """Indecomposable kD-modules seeding the eligible sets: summands of the
    trivial and regular modules and of k[D/E] over subgroup classes E <= D.

    kD can have infinitely many indecomposables, so this finite catalog is the
    documented approximation of "all" of them.
    """
    Dgrp = sc.D.group
    mods: list[FpModule] = []
    sources = [trivial_module(Dgrp, sc.p), regular_module(Dgrp, sc.p)]
    seen_keys = set()
    for E in all_subgroups(Dgrp):
        key = E.canonical_class_key()
        if key in seen_keys or E.order == Dgrp.order:
            continue
        seen_keys.add(key)
        sources.append(induce(trivial_module(E.group, sc.p), E))
    for src in sources:
        for mod, _ in decompose(src, seed).summands:
            mods.append(mod)
    return _dedup_classes(mods)


def module_catalog(sc: Scenario, side: str,
                   seed: int = 0) -> list[tuple[FpModule, bool, bool]]:
    """Indecomposable classes discovered on one side with their verdicts.

    Returns (module, is_D_object, is_X_object) triples, sorted by dimension;
    generated from inductions of the kD catalog plus the trivial module and
    the summands of the regular module.
    """
    if side == "H":
        amb_group = sc.H.group
        d_emb = sc.d_in_h
        fam = sc.x_in_h()
    elif side == "G":
        amb_group = sc.G
        d_emb = sc.D
        fam = sc.x_in_g()
    else:
        raise InputError("side must be 'H' or 'G'")
    candidates: list[FpModule] = [trivial_module(amb_group, sc.p)]
    for mod, _ in decompose(regular_module(amb_group, sc.p), seed).summands:
        candidates.append(mod)
    for s in generating_family_over_D(sc, seed):
        for mod, _ in decompose(induce(s, d_emb), seed).summands:
            candidates.append(mod)
    from .decompose import is_relatively_projective

    out = []
    for mod in _dedup_classes(candidates):
        if not end_info(mod).local:
            continue
        d_obj = is_relatively_projective(mod, d_emb, seed)
        x_obj = is_x_object(mod, fam, seed)
        out.append((mod, d_obj, x_obj))
    out.sort(key=lambda t: t[0].dim)
    return out


def eligible_modules(sc: Scenario, side: str, seed: int = 0) -> list[FpModule]:
    """Certified-indecomposable D-objects that are not X-objects, over H or G."""
    return [mod for mod, d_obj, x_obj in module_catalog(sc, side, seed)
            if d_obj and not x_obj]


# ---------------------------------------------------------------------------
# the correspondence
# ---------------------------------------------------------------------------


def correspondent_up(n: FpModule, sc: Scenario, seed: int = 0) -> FpModule:
    """The X-free part of Ind_H^G n, which the Green correspondence promises
    is a single indecomposable with multiplicity one."""
    _require_eligible(n, sc, "H", seed)
    dec = decompose(induce(n, sc.H), seed)
    fam = sc.x_in_g()
    survivors = [(mod, mult) for mod, mult in dec.summands
                 if not is_x_object(mod, fam, seed)]
    if len(survivors) != 1 or survivors[0][1] != 1:
        raise TheoremViolationError(
            f"induction of {n.name} has {survivors} surviving classes")
    return survivors[0][0]


def correspondent_down(m: FpModule, sc: Scenario, seed: int = 0) -> FpModule:
    """The Y-free part of Res_H^G m."""
    _require_eligible(m, sc, "G", seed)
    dec = decompose(restrict(m, sc.H), seed)
    fam = sc.y_in_h()
    survivors = [(mod, mult) for mod, mult in dec.summands
                 if not is_x_object(mod, fam, seed)]
    if len(survivors) != 1 or survivors[0][1] != 1:
        raise TheoremViolationError(
            f"restriction of {m.name} has {survivors} surviving classes")
    return survivors[0][0]


def _require_eligible(mod: FpModule, sc: Scenario, side: str, seed: int) -> None:
    from .decompose import is_relatively_projective

    if mod.dim == 0 or not end_info(mod).local:
        raise InputError("correspondent requires a certified indecomposable")
    if side == "H":
        d_emb, fam = sc.d_in_h, sc.x_in_h()
    else:
        d_emb, fam = sc.D, sc.x_in_g()
    if not is_relatively_projective(mod, d_emb, seed):
        raise InputError("correspondent requires a D-object")
    if is_x_object(mod, fam, seed):
        raise InputError("correspondent requires a module outside the X-objects")


# ---------------------------------------------------------------------------
# verification harness
# ---------------------------------------------------------------------------


@dataclass
class ModuleEntry:
    name: str
    dim: int
    vertex_order: int
    vertex_is_d: bool
    x_object: bool


@dataclass
class GreenReport:
    scenario: str
    p: int
    orders: tuple[int, int, int]
    normalizer_condition: bool
    indecomposables_H: list[ModuleEntry]
    indecomposables_G: list[ModuleEntry]
    correspondence_pairs: list[dict]
    ff_table: list[dict]
    verdicts: dict[str, bool]
    family_orders: dict[str, list[int]] = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "scenario": self.scenario,
            "p": self.p,
            "orders": {"G": self.orders[0], "H": self.orders[1],
                       "D": self.orders[2]},
            "normalizer_condition": self.normalizer_condition,
            "family_orders": self.family_orders,
            "indecomposables_H": [vars(e) for e in self.indecomposables_H],
            "indecomposables_G": [vars(e) for e in self.indecomposables_G],
            "correspondence_pairs": self.correspondence_pairs,
            "ff_table": self.ff_table,
            "verdicts": dict(sorted(self.verdicts.items())),
            "all_pass": self.all_pass,
        }


def _vertex_class_in_g(sc: Scenario, mod: FpModule, side: str,
                       seed: int) -> tuple[tuple[int, ...], int]:
    """Vertex of a module on either side, as a canonical G-conjugacy key."""
    v = vertex(mod, seed).vertex
    if side == "H":
        amb = SubgroupEmbedding(
            sc.G, tuple(sc.H.to_ambient[x] for x in v.element_indices), "v")
    else:
        amb = v
    return amb.canonical_class_key(), v.order


def _entry_vertex(sc: Scenario, mod: FpModule, side: str,
                  d_key: tuple[int, ...], seed: int) -> tuple[int, bool]:
    key, order = _vertex_class_in_g(sc, mod, side, seed)
    return order, key == d_key


def boundary_families_match(sc: Scenario) -> bool:
    """Boundary components and stabilizers of the three isocomma splits
    must agree with the X/Y/U double-coset data."""
    G = sc.G
    Ggpd = group_groupoid(G, "G")
    Hgpd = group_groupoid(sc.H.group, "H")
    Dgpd = group_groupoid(sc.D.group, "D")
    i = GroupoidFunctor(Hgpd, Ggpd, [0],
                        np.array(sc.H.to_ambient, dtype=np.int32), name="i")
    d_in_h = [sc.H.from_ambient[a] for a in sc.D.to_ambient]
    j = GroupoidFunctor(Dgpd, Hgpd, [0], np.array(d_in_h, dtype=np.int32),
                        name="j")
    idh = identity_functor(Hgpd)
    splits = [
        (partial(i, j, j), sc.families.x_pairs),
        (partial(i, idh, j), sc.families.y_pairs),
        (partial(i, idh, idh), sc.families.u_pairs),
    ]
    for res, pairs in splits:
        comps = res.boundary_components
        if len(comps) != len(pairs):
            return False
        amb_to_b = res.ambient_to_boundary_objects()
        b_comp_of = res.boundary.component_of()
        for g, S in pairs:
            ginv = int(G.inv[g])
            amb_idx = res.ambient.object_index(0, 0, ginv)
            sub = int(amb_to_b[amb_idx])
            if sub < 0:
                return False
            comp = comps[int(b_comp_of[sub])]
            if comp.aut_order != S.order:
                return False
    return True


def verify_scenario(sc: Scenario, seed: int = 0) -> GreenReport:
    """Run every machine check of the Green equivalence and correspondence on
    the scenario's finite eligible test set."""
    cat_h = module_catalog(sc, "H", seed)
    cat_g = module_catalog(sc, "G", seed)
    elig_h = [mod for mod, d_obj, x_obj in cat_h if d_obj and not x_obj]
    elig_g = [mod for mod, d_obj, x_obj in cat_g if d_obj and not x_obj]
    names_h = [f"H:d{mod.dim}#{k}" for k, (mod, d_obj, x_obj) in enumerate(cat_h)
               if d_obj and not x_obj]
    names_g = [f"G:d{mod.dim}#{k}" for k, (mod, d_obj, x_obj) in enumerate(cat_g)
               if d_obj and not x_obj]
    fam_g = sc.x_in_g()
    fam_h = sc.x_in_h()
    d_key = sc.D.canonical_class_key()

    verdicts: dict[str, bool] = {}

    # (a) fully-faithfulness: quotient hom dims match under induction
    ff_rows = []
    ff_ok = True
    induced = [induce(n, sc.H) for n in elig_h]
    for i1, n1 in enumerate(elig_h):
        for i2, n2 in enumerate(elig_h):
            dim_h = quotient_hom_dim(n1, n2, fam_h)
            dim_g = quotient_hom_dim(induced[i1], induced[i2], fam_g)
            equal = dim_h == dim_g
            ff_ok = ff_ok and equal
            ff_rows.append({
                "n1": names_h[i1], "n2": names_h[i2],
                "qdim_H": dim_h, "qdim_G": dim_g, "equal": equal,
            })
    verdicts["fully_faithful"] = ff_ok

    # (b) bijection with round trips and explicit retract witnesses
    pairs = []
    bij_ok = True
    up_images: list[FpModule] = []
    for i1, n in enumerate(elig_h):
        m = correspondent_up(n, sc, seed)
        back = correspondent_down(m, sc, seed)
        round_trip = _iso_indec(n, back)
        m_le_ind = is_direct_summand(m, induce(n, sc.H), seed)
        n_le_res = is_direct_summand(n, restrict(m, sc.H), seed)
        bij_ok = bij_ok and round_trip and m_le_ind and n_le_res
        up_images.append(m)
        match_g = next((names_g[j] for j, mg in enumerate(elig_g)
                        if mg.dim == m.dim and _iso_indec(mg, m)), None)
        bij_ok = bij_ok and match_g is not None
        pairs.append({
            "n": names_h[i1], "m": match_g or f"G:d{m.dim}?",
            "dim_n": n.dim, "dim_m": m.dim,
            "round_trip": round_trip,
            "m_retract_of_ind": m_le_ind,
            "n_retract_of_res": n_le_res,
        })
    # surjectivity up to retracts: every eligible m over G is hit
    for j, m in enumerate(elig_g):
        hit = any(mu.dim == m.dim and _iso_indec(mu, m) for mu in up_images)
        if not hit:
            bij_ok = False
    verdicts["bijection_round_trip"] = bij_ok

    # (c) vertex preservation per pair
    vertex_ok = True
    vertex_d_ok = True
    for i1, (n, m) in enumerate(zip(elig_h, up_images)):
        key_n, ord_n = _vertex_class_in_g(sc, n, "H", seed)
        key_m, ord_m = _vertex_class_in_g(sc, m, "G", seed)
        same = key_n == key_m
        vertex_ok = vertex_ok and same
        n_is_d = key_n == d_key
        m_is_d = key_m == d_key
        if sc.normalizer_condition and (n_is_d or m_is_d):
            vertex_d_ok = vertex_d_ok and n_is_d and m_is_d
        pairs[i1]["vertex_order"] = ord_n
        pairs[i1]["vertex_preserved"] = same
    entries_h = [
        ModuleEntry(f"H:d{mod.dim}#{k}", mod.dim,
                    *_entry_vertex(sc, mod, "H", d_key, seed), x_obj)
        for k, (mod, d_obj, x_obj) in enumerate(cat_h) if d_obj
    ]
    entries_g = [
        ModuleEntry(f"G:d{mod.dim}#{k}", mod.dim,
                    *_entry_vertex(sc, mod, "G", d_key, seed), x_obj)
        for k, (mod, d_obj, x_obj) in enumerate(cat_g) if d_obj
    ]
    verdicts["vertex_preservation"] = vertex_ok
    if sc.normalizer_condition:
        verdicts["vertex_D_restriction"] = vertex_d_ok

    # (e) groupoid-level cross-checks
    verdicts["boundary_families_match"] = boundary_families_match(sc)

    # ideal property spot check: the factoring subspace is closed under
    # pre/post composition by arbitrary homs
    verdicts["factoring_is_ideal"] = _ideal_spotcheck(sc, elig_h, fam_h)

    family_orders = {
        "X": [S.order for S in sc.families.x_classes],
        "Y": [S.order for S in sc.families.y_classes],
        "U": [S.order for S in sc.families.u_classes],
    }
    return GreenReport(
        scenario=sc.name, p=sc.p,
        orders=(sc.G.order, sc.H.order, sc.D.order),
        normalizer_condition=sc.normalizer_condition,
        indecomposables_H=entries_h,
        indecomposables_G=entries_g,
        correspondence_pairs=pairs,
        ff_table=ff_rows,
        verdicts=verdicts,
        family_orders=family_orders,
    )


def _ideal_spotcheck(sc: Scenario, elig_h: list[FpModule],
                     fam_h: list[SubgroupEmbedding]) -> bool:
    if not elig_h or not fam_h:
        return True
    p = sc.p
    M = elig_h[0]
    R, piv = factoring_subspace(M, M, fam_h)
    if R.shape[0] == 0:
        return True
    ends = hom_space(M, M)
    for row in R:
        F = row.reshape(M.dim, M.dim)
        for e in ends[: min(len(ends), 4)]:
            pre = ((F @ e) % p).ravel()
            post = ((e @ F) % p).ravel()
            if not linalg.in_row_space(pre, R, piv, p):
                return False
            if not linalg.in_row_space(post, R, piv, p):
                return False
    return True


def degenerate_scenario(p: int, G: PermGroup, name: str = "degenerate") -> Scenario:
    W = whole_group(G)
    return Scenario.build(p, G, W, W, name)
