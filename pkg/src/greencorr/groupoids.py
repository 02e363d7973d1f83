"""Finite groupoids, functors, 2-cells, isocommas and Mackey squares.

Groupoids are extensional: every object and every morphism is enumerated,
with parallel source/target arrays.  Composition is exposed as a total
operation on composable pairs; for constructed groupoids (groups, coproducts,
isocommas, full subgroupoids) it is evaluated by O(1) index arithmetic rather
than a materialized table, which keeps isocommas with a few hundred thousand
morphisms workable.  Explicit tables are used for groupoids loaded from JSON.

Object labels are canonicalized by sorting (ints, then strings, then tuples,
recursively), so every derived construction is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InputError
from .permgroups import PermGroup, SubgroupEmbedding

VALIDATE_PAIR_LIMIT = 2_000_000


def label_key(label):
    """Total order on heterogeneous labels used for canonical object sorting."""
    if isinstance(label, bool):
        return (0, int(label))
    if isinstance(label, (int, np.integer)):
        return (0, int(label))
    if isinstance(label, str):
        return (1, label)
    if isinstance(label, (tuple, list)):
        return (2, tuple(label_key(x) for x in label))
    raise InputError(f"unsupported object label: {label!r}")


class FiniteGroupoid:
    """A finite groupoid with indexed objects and morphisms.

    Parameters
    ----------
    objects: list of hashable labels (already in canonical order).
    msrc, mtgt: int arrays, source/target object index per morphism.
    ident: int array, identity morphism index per object.
    comp: callable (g, f) -> index of g∘f; assumes tgt(f) == src(g).
    inv: callable m -> index of the inverse morphism.
    """

    def __init__(self, objects, msrc, mtgt, ident, comp, inv, name="groupoid",
                 mor_label=None):
        self.objects = list(objects)
        self.msrc = np.asarray(msrc, dtype=np.int32)
        self.mtgt = np.asarray(mtgt, dtype=np.int32)
        self._ident = np.asarray(ident, dtype=np.int32)
        self._comp = comp
        self._inv = inv
        self.name = name
        self._mor_label = mor_label

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.msrc)

    def compose(self, g: int, f: int) -> int:
        """g∘f, defined when tgt(f) == src(g)."""
        if self.mtgt[f] != self.msrc[g]:
            raise InputError("morphisms are not composable")
        return self._comp(g, f)

    def identity_morphism(self, x: int) -> int:
        return int(self._ident[x])

    def inverse(self, m: int) -> int:
        return self._inv(m)

    def mor_label(self, m: int):
        if self._mor_label is None:
            return m
        return self._mor_label(m)

    # lazy structural indexes -------------------------------------------------

    @cached_property
    def _out_sorted(self) -> np.ndarray:
        return np.argsort(self.msrc, kind="stable").astype(np.int32)

    @cached_property
    def _out_start(self) -> np.ndarray:
        counts = np.bincount(self.msrc, minlength=self.n_objects)
        return np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)

    @cached_property
    def out_pos(self) -> np.ndarray:
        """Position of each morphism within the out-list of its source."""
        pos = np.empty(self.n_morphisms, dtype=np.int32)
        order = self._out_sorted
        start = self._out_start
        for x in range(self.n_objects):
            block = order[start[x]:start[x + 1]]
            pos[block] = np.arange(len(block), dtype=np.int32)
        return pos

    def out(self, x: int) -> np.ndarray:
        start = self._out_start
        return self._out_sorted[start[x]:start[x + 1]]

    def out_degree(self, x: int) -> int:
        start = self._out_start
        return int(start[x + 1] - start[x])

    @cached_property
    def _hom_index(self) -> dict:
        hom: dict[tuple[int, int], list[int]] = {}
        for m in range(self.n_morphisms):
            hom.setdefault((int(self.msrc[m]), int(self.mtgt[m])), []).append(m)
        return hom

    def hom(self, x: int, y: int) -> list[int]:
        return self._hom_index.get((x, y), [])

    @cached_property
    def components(self) -> list["Component"]:
        return connected_components(self)

    def component_of(self) -> np.ndarray:
        """Array mapping each object to its component index."""
        comp = np.full(self.n_objects, -1, dtype=np.int32)
        for k, c in enumerate(self.components):
            comp[c.objects] = k
        return comp

    # exhaustive axioms -------------------------------------------------------

    def validate(self, pair_limit: int = VALIDATE_PAIR_LIMIT) -> None:
        """Exhaustively check the groupoid axioms (identities, inverses,
        source/target bookkeeping, associativity).  Raises on any failure."""
        n = self.n_morphisms
        for x in range(self.n_objects):
            e = self.identity_morphism(x)
            if self.msrc[e] != x or self.mtgt[e] != x:
                raise AssertionError(f"identity of {x} has wrong endpoints")
        pair_count = sum(
            self.out_degree(int(self.mtgt[m])) for m in range(n)
        )
        if pair_count > pair_limit:
            raise InputError(
                f"validation of {pair_count} composable pairs exceeds limit")
        for m in range(n):
            x, y = int(self.msrc[m]), int(self.mtgt[m])
            if self.compose(m, self.identity_morphism(x)) != m:
                raise AssertionError("right unit law fails")
            if self.compose(self.identity_morphism(y), m) != m:
                raise AssertionError("left unit law fails")
            w = self.inverse(m)
            if self.msrc[w] != y or self.mtgt[w] != x:
                raise AssertionError("inverse has wrong endpoints")
            if self.compose(m, w) != self.identity_morphism(y):
                raise AssertionError("m ∘ m^-1 is not an identity")
            if self.compose(w, m) != self.identity_morphism(x):
                raise AssertionError("m^-1 ∘ m is not an identity")
        for f in range(n):
            for g in self.out(int(self.mtgt[f])):
                gf = self.compose(int(g), f)
                if self.msrc[gf] != self.msrc[f] or self.mtgt[gf] != self.mtgt[g]:
                    raise AssertionError("composition endpoints inconsistent")
                for h in self.out(int(self.mtgt[int(g)])):
                    if self.compose(int(h), gf) != self.compose(
                            self.compose(int(h), int(g)), f):
                        raise AssertionError("associativity fails")

    def __repr__(self) -> str:
        return (f"FiniteGroupoid({self.name}: {self.n_objects} objects, "
                f"{self.n_morphisms} morphisms)")


@dataclass
class Component:
    """A connected component with the automorphism group of a base object."""

    objects: list[int]
    base: int
    loops: list[int]

    @property
    def aut_order(self) -> int:
        return len(self.loops)

    def aut_table(self, groupoid: FiniteGroupoid) -> np.ndarray:
        """Multiplication table of Aut(base), rows/cols indexed by self.loops."""
        pos = {m: i for i, m in enumerate(self.loops)}
        n = len(self.loops)
        table = np.empty((n, n), dtype=np.int32)
        for i, g in enumerate(self.loops):
            for j, f in enumerate(self.loops):
                table[i, j] = pos[groupoid.compose(g, f)]
        return table


def connected_components(G: FiniteGroupoid) -> list[Component]:
    """Partition by reachability; in a groupoid this is iso-class closure."""
    parent = list(range(G.n_objects))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for m in range(G.n_morphisms):
        a, b = find(int(G.msrc[m])), find(int(G.mtgt[m]))
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for x in range(G.n_objects):
        groups.setdefault(find(x), []).append(x)
    comps = []
    for root in sorted(groups):
        objs = sorted(groups[root])
        base = objs[0]
        comps.append(Component(objs, base, list(G.hom(base, base))))
    return comps


def element_order_in_table(table: np.ndarray, i: int, identity: int) -> int:
    k, x = 1, i
    while x != identity:
        x = int(table[x, i])
        k += 1
    return k


def table_identity(table: np.ndarray) -> int:
    n = table.shape[0]
    for e in range(n):
        if all(table[e, j] == j and table[j, e] == j for j in range(n)):
            return e
    raise InputError("multiplication table has no identity")


def tables_isomorphic(t1: np.ndarray, t2: np.ndarray) -> bool:
    """Group isomorphism of multiplication tables.

    Invariant pre-filter (order, element-order histogram), then backtracking
    over generator images.  Intended for orders <= 16.
    """
    n = t1.shape[0]
    if t2.shape[0] != n:
        return False
    e1, e2 = table_identity(t1), table_identity(t2)
    ords1 = [element_order_in_table(t1, i, e1) for i in range(n)]
    ords2 = [element_order_in_table(t2, i, e2) for i in range(n)]
    if sorted(ords1) != sorted(ords2):
        return False

    def close_partial(images: dict[int, int]) -> dict[int, int] | None:
        # close a partial homomorphism under multiplication; None on conflict
        images = dict(images)
        changed = True
        while changed:
            changed = False
            known = list(images.items())
            for a, fa in known:
                for b, fb in known:
                    ab, fab = int(t1[a, b]), int(t2[fa, fb])
                    if ab in images:
                        if images[ab] != fab:
                            return None
                    else:
                        images[ab] = fab
                        changed = True
        vals = list(images.values())
        if len(set(vals)) != len(vals):
            return None
        return images

    # greedy generating sequence for t1
    gens: list[int] = []
    span = {e1}
    for i in range(n):
        if i not in span:
            gens.append(i)
            span = _table_closure(t1, gens, e1)
            if len(span) == n:
                break

    def extend(k: int, images: dict[int, int]) -> bool:
        if k == len(gens):
            return len(images) == n
        g = gens[k]
        for cand in range(n):
            if ords2[cand] != ords1[g] or cand in images.values():
                continue
            nxt = close_partial({**images, g: cand})
            if nxt is not None and extend(k + 1, nxt):
                return True
        return False

    return extend(0, {e1: e2})


def _table_closure(table: np.ndarray, gens: list[int], identity: int) -> set[int]:
    seen = {identity, *gens}
    frontier = list(seen)
    while frontier:
        new = []
        for a in frontier:
            for b in list(seen):
                for c in (int(table[a, b]), int(table[b, a])):
                    if c not in seen:
                        seen.add(c)
                        new.append(c)
        frontier = new
    return seen


# ---------------------------------------------------------------------------
# functors and 2-cells
# ---------------------------------------------------------------------------


class GroupoidFunctor:
    def __init__(self, domain: FiniteGroupoid, codomain: FiniteGroupoid,
                 obj_map, mor_map, name: str = "functor"):
        self.domain = domain
        self.codomain = codomain
        self.obj_map = np.asarray(obj_map, dtype=np.int32)
        self.mor_map = np.asarray(mor_map, dtype=np.int32)
        self.name = name
        if len(self.obj_map) != domain.n_objects:
            raise InputError("object map is not total")
        if len(self.mor_map) != domain.n_morphisms:
            raise InputError("morphism map is not total")

    def obj(self, x: int) -> int:
        return int(self.obj_map[x])

    def mor(self, m: int) -> int:
        return int(self.mor_map[m])

    @cached_property
    def faithful(self) -> bool:
        """Injectivity of the morphism map on every hom-set."""
        for (x, y), homs in self.domain._hom_index.items():
            images = self.mor_map[homs]
            if len(np.unique(images)) != len(homs):
                return False
        return True

    def validate(self, pair_limit: int = VALIDATE_PAIR_LIMIT) -> None:
        """Exhaustively check structure preservation."""
        dom, cod = self.domain, self.codomain
        if not (cod.msrc[self.mor_map] == self.obj_map[dom.msrc]).all():
            raise AssertionError("functor does not preserve sources")
        if not (cod.mtgt[self.mor_map] == self.obj_map[dom.mtgt]).all():
            raise AssertionError("functor does not preserve targets")
        for x in range(dom.n_objects):
            if self.mor(dom.identity_morphism(x)) != cod.identity_morphism(self.obj(x)):
                raise AssertionError("functor does not preserve identities")
        pair_count = sum(
            dom.out_degree(int(dom.mtgt[m])) for m in range(dom.n_morphisms)
        )
        if pair_count > pair_limit:
            raise InputError("functor validation exceeds pair limit")
        for f in range(dom.n_morphisms):
            for g in dom.out(int(dom.mtgt[f])):
                if self.mor(dom.compose(int(g), f)) != cod.compose(
                        self.mor(int(g)), self.mor(f)):
                    raise AssertionError("functor does not preserve composition")

    def spot_check(self, rng, samples: int = 512) -> None:
        """Randomized functoriality probe for groupoids too large to validate
        exhaustively: identities, endpoints, and sampled composable pairs."""
        dom, cod = self.domain, self.codomain
        if not (cod.msrc[self.mor_map] == self.obj_map[dom.msrc]).all():
            raise AssertionError("functor does not preserve sources")
        if not (cod.mtgt[self.mor_map] == self.obj_map[dom.mtgt]).all():
            raise AssertionError("functor does not preserve targets")
        n = dom.n_morphisms
        if n == 0:
            return
        for _ in range(samples):
            f = int(rng.integers(n))
            outs = dom.out(int(dom.mtgt[f]))
            g = int(outs[int(rng.integers(len(outs)))])
            if self.mor(dom.compose(g, f)) != cod.compose(self.mor(g), self.mor(f)):
                raise AssertionError("functor does not preserve composition")

    def __repr__(self) -> str:
        return f"GroupoidFunctor({self.name}: {self.domain.name} -> {self.codomain.name})"


def identity_functor(G: FiniteGroupoid) -> GroupoidFunctor:
    return GroupoidFunctor(G, G, np.arange(G.n_objects), np.arange(G.n_morphisms),
                           name=f"id_{G.name}")


def compose_functors(g: GroupoidFunctor, f: GroupoidFunctor) -> GroupoidFunctor:
    """g∘f."""
    if f.codomain is not g.domain:
        raise InputError("functors are not composable")
    return GroupoidFunctor(f.domain, g.codomain,
                           g.obj_map[f.obj_map], g.mor_map[f.mor_map],
                           name=f"{g.name}∘{f.name}")


class TwoCell:
    """A natural isomorphism between parallel functors, given by components."""

    def __init__(self, source_functor: GroupoidFunctor,
                 target_functor: GroupoidFunctor, components,
                 name: str = "cell", check: bool = True):
        if (source_functor.domain is not target_functor.domain
                or source_functor.codomain is not target_functor.codomain):
            raise InputError("2-cell requires parallel functors")
        self.source_functor = source_functor
        self.target_functor = target_functor
        self.components = np.asarray(components, dtype=np.int32)
        self.name = name
        if len(self.components) != source_functor.domain.n_objects:
            raise InputError("2-cell components are not total")
        if check:
            self.validate()

    def validate(self) -> None:
        F, G2 = self.source_functor, self.target_functor
        dom, cod = F.domain, F.codomain
        for x in range(dom.n_objects):
            c = int(self.components[x])
            if int(cod.msrc[c]) != F.obj(x) or int(cod.mtgt[c]) != G2.obj(x):
                raise InputError("2-cell component has wrong endpoints")
        for m in range(dom.n_morphisms):
            x, y = int(dom.msrc[m]), int(dom.mtgt[m])
            left = cod.compose(int(self.components[y]), F.mor(m))
            right = cod.compose(G2.mor(m), int(self.components[x]))
            if left != right:
                raise InputError("2-cell naturality square does not commute")


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


def group_groupoid(P: PermGroup, name: str = "") -> FiniteGroupoid:
    """A finite group as a one-object groupoid; morphism order = element order."""
    n = P.order
    return FiniteGroupoid(
        objects=[0],
        msrc=np.zeros(n, dtype=np.int32),
        mtgt=np.zeros(n, dtype=np.int32),
        ident=[P.identity],
        comp=lambda g, f: int(P.mult[g, f]),
        inv=lambda m: int(P.inv[m]),
        name=name or f"group({P.order})",
    )


def subgroup_inclusion(emb: SubgroupEmbedding, ambient_gpd: FiniteGroupoid | None = None,
                       sub_gpd: FiniteGroupoid | None = None) -> GroupoidFunctor:
    """The faithful one-object functor induced by a subgroup embedding."""
    sub = sub_gpd or group_groupoid(emb.group, name=emb.tag or "H")
    amb = ambient_gpd or group_groupoid(emb.ambient, name="G")
    mor_map = np.array(emb.to_ambient, dtype=np.int32)
    return GroupoidFunctor(sub, amb, [0], mor_map, name=f"incl_{emb.tag or 'H'}")


def coproduct(G1: FiniteGroupoid, G2: FiniteGroupoid,
              name: str = "") -> tuple[FiniteGroupoid, GroupoidFunctor, GroupoidFunctor]:
    """Disjoint union with the two injection functors."""
    labels = [(0, lab) for lab in G1.objects] + [(1, lab) for lab in G2.objects]
    n1o, n1m = G1.n_objects, G1.n_morphisms
    msrc = np.concatenate([G1.msrc, G2.msrc + n1o])
    mtgt = np.concatenate([G1.mtgt, G2.mtgt + n1o])
    ident = np.concatenate([G1._ident, G2._ident + n1m])

    def comp(g: int, f: int) -> int:
        if f < n1m:
            return G1._comp(g, f)
        return G2._comp(g - n1m, f - n1m) + n1m

    def inv(m: int) -> int:
        return G1._inv(m) if m < n1m else G2._inv(m - n1m) + n1m

    G = FiniteGroupoid(labels, msrc, mtgt, ident, comp, inv,
                       name=name or f"{G1.name}⊔{G2.name}")
    inj1 = GroupoidFunctor(G1, G, np.arange(n1o), np.arange(n1m), name="inj1")
    inj2 = GroupoidFunctor(G2, G, np.arange(G2.n_objects) + n1o,
                           np.arange(G2.n_morphisms) + n1m, name="inj2")
    return G, inj1, inj2


def full_subgroupoid(A: FiniteGroupoid, object_idxs: list[int],
                     name: str = "") -> tuple[FiniteGroupoid, GroupoidFunctor]:
    """Full subgroupoid on a subset of objects, with its inclusion functor."""
    objs = sorted(object_idxs)
    obj_of = np.array(objs, dtype=np.int32)
    obj_sub = np.full(A.n_objects, -1, dtype=np.int32)
    obj_sub[obj_of] = np.arange(len(objs), dtype=np.int32)
    keep = (obj_sub[A.msrc] >= 0) & (obj_sub[A.mtgt] >= 0)
    mor_of = np.nonzero(keep)[0].astype(np.int32)
    mor_sub = np.full(A.n_morphisms, -1, dtype=np.int64)
    mor_sub[mor_of] = np.arange(len(mor_of))
    msrc = obj_sub[A.msrc[mor_of]]
    mtgt = obj_sub[A.mtgt[mor_of]]
    ident = mor_sub[A._ident[obj_of]]
    assert (ident >= 0).all()

    def comp(g: int, f: int) -> int:
        return int(mor_sub[A._comp(int(mor_of[g]), int(mor_of[f]))])

    def inv(m: int) -> int:
        return int(mor_sub[A._inv(int(mor_of[m]))])

    S = FiniteGroupoid([A.objects[i] for i in objs], msrc, mtgt, ident, comp, inv,
                       name=name or f"{A.name}|full")
    incl = GroupoidFunctor(S, A, obj_of, mor_of, name=f"incl({S.name})")
    return S, incl


@dataclass
class IsocommaResult:
    """The isocomma groupoid of a cospan with projections and canonical 2-cell.

    object_labels[k] is the triple (x, y, g) of indices: x an object of the
    left leg's domain, y of the right leg's domain, g a morphism of the shared
    codomain from i(x) to u(y).
    """

    groupoid: FiniteGroupoid
    pr1: GroupoidFunctor
    pr2: GroupoidFunctor
    gamma: TwoCell
    object_labels: list[tuple[int, int, int]]
    left: GroupoidFunctor
    right: GroupoidFunctor
    _obj_index: dict = field(repr=False, default_factory=dict)
    _m_ob: np.ndarray | None = field(repr=False, default=None)
    _m_a: np.ndarray | None = field(repr=False, default=None)
    _m_b: np.ndarray | None = field(repr=False, default=None)

    def object_index(self, x: int, y: int, g: int) -> int:
        return self._obj_index[(x, y, g)]

    def morphism_index(self, src_obj: int, a: int, b: int) -> int:
        """Morphism (a, b) out of the given isocomma object."""
        A, B = self.left.domain, self.right.domain
        x, y, _ = self.object_labels[src_obj]
        start = self.groupoid._out_start[src_obj]
        return int(start + A.out_pos[a] * B.out_degree(y) + B.out_pos[b])

    def morphism_parts(self, m: int) -> tuple[int, int, int]:
        return int(self._m_ob[m]), int(self._m_a[m]), int(self._m_b[m])


def isocomma(i: GroupoidFunctor, u: GroupoidFunctor, name: str = "") -> IsocommaResult:
    """The groupoid of triples (x, y, g : i(x) -> u(y)) over a cospan.

    Morphisms (x,y,g) -> (x',y',g') are pairs (a: x->x', b: y->y') with
    g'∘i(a) = u(b)∘g; both projections and the tautological 2-cell come back
    with the groupoid.
    """
    if i.codomain is not u.codomain:
        raise InputError("isocomma requires a shared codomain")
    A, B, C = i.domain, u.domain, i.codomain

    labels: list[tuple[int, int, int]] = []
    for x in range(A.n_objects):
        cx = i.obj(x)
        for y in range(B.n_objects):
            cy = u.obj(y)
            for g in C.hom(cx, cy):
                labels.append((x, y, int(g)))
    obj_index = {lab: k for k, lab in enumerate(labels)}
    n_obj = len(labels)

    out_deg_a = np.array([A.out_degree(x) for x in range(A.n_objects)])
    out_deg_b = np.array([B.out_degree(y) for y in range(B.n_objects)])
    block = np.array([out_deg_a[x] * out_deg_b[y] for x, y, _ in labels],
                     dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(block)])
    n_mor = int(offsets[-1])

    m_ob = np.empty(n_mor, dtype=np.int32)
    m_a = np.empty(n_mor, dtype=np.int32)
    m_b = np.empty(n_mor, dtype=np.int32)
    mtgt = np.empty(n_mor, dtype=np.int32)
    pos = 0
    for o, (x, y, g) in enumerate(labels):
        outs_b = [int(b) for b in B.out(y)]
        gb = {b: C._comp(u.mor(b), g) for b in outs_b}
        for a in A.out(x):
            a = int(a)
            ia_inv = C._inv(i.mor(a))
            xt = int(A.mtgt[a])
            for b in outs_b:
                gp = C._comp(gb[b], ia_inv)
                m_ob[pos] = o
                m_a[pos] = a
                m_b[pos] = b
                mtgt[pos] = obj_index[(xt, int(B.mtgt[b]), gp)]
                pos += 1
    assert pos == n_mor

    a_pos = A.out_pos
    b_pos = B.out_pos

    def midx(o: int, a: int, b: int) -> int:
        y = labels[o][1]
        return int(offsets[o] + a_pos[a] * out_deg_b[y] + b_pos[b])

    def comp(g2: int, f1: int) -> int:
        o = int(m_ob[f1])
        return midx(o, A._comp(int(m_a[g2]), int(m_a[f1])),
                    B._comp(int(m_b[g2]), int(m_b[f1])))

    def inv(m: int) -> int:
        return midx(int(mtgt[m]), A._inv(int(m_a[m])), B._inv(int(m_b[m])))

    ident = np.array(
        [midx(o, A.identity_morphism(x), B.identity_morphism(y))
         for o, (x, y, _) in enumerate(labels)],
        dtype=np.int32)

    P = FiniteGroupoid(labels, m_ob, mtgt, ident, comp, inv,
                       name=name or f"({A.name}/{B.name}/{C.name})")
    pr1 = GroupoidFunctor(P, A, [x for x, _, _ in labels], m_a, name="pr1")
    pr2 = GroupoidFunctor(P, B, [y for _, y, _ in labels], m_b, name="pr2")
    gamma = TwoCell(compose_functors(i, pr1), compose_functors(u, pr2),
                    [g for _, _, g in labels], name="gamma", check=False)
    return IsocommaResult(P, pr1, pr2, gamma, labels, i, u,
                          _obj_index=obj_index, _m_ob=m_ob, _m_a=m_a, _m_b=m_b)


def cotuple_functors(inj1: GroupoidFunctor, inj2: GroupoidFunctor,
                     f1: GroupoidFunctor, f2: GroupoidFunctor) -> GroupoidFunctor:
    """The functor out of a coproduct determined by its two restrictions."""
    if f1.codomain is not f2.codomain:
        raise InputError("cotuple requires a shared codomain")
    cop = inj1.codomain
    obj_map = np.empty(cop.n_objects, dtype=np.int32)
    obj_map[inj1.obj_map] = f1.obj_map
    obj_map[inj2.obj_map] = f2.obj_map
    mor_map = np.empty(cop.n_morphisms, dtype=np.int32)
    mor_map[inj1.mor_map] = f1.mor_map
    mor_map[inj2.mor_map] = f2.mor_map
    return GroupoidFunctor(cop, f1.codomain, obj_map, mor_map, name="[f1,f2]")


def isocomma_coproduct_relabeling(
    i: GroupoidFunctor, u1: GroupoidFunctor, u2: GroupoidFunctor
) -> tuple[GroupoidFunctor, GroupoidFunctor]:
    """The canonical isomorphism (i/u1) ⊔ (i/u2) -> (i/(u1 ⊔ u2)).

    Returns the two relabeling functors out of the summand isocommas; they
    are jointly bijective on objects and morphisms, which is asserted.
    """
    K, inj1, inj2 = coproduct(u1.domain, u2.domain)
    u = cotuple_functors(inj1, inj2, u1, u2)
    whole = isocomma(i, u)
    parts = []
    for iso_part, inj in ((isocomma(i, u1), inj1), (isocomma(i, u2), inj2)):
        P = iso_part.groupoid
        obj_map = np.empty(P.n_objects, dtype=np.int32)
        for o, (x, y, g) in enumerate(iso_part.object_labels):
            obj_map[o] = whole.object_index(x, inj.obj(y), g)
        mor_map = np.empty(P.n_morphisms, dtype=np.int32)
        for m in range(P.n_morphisms):
            o, a, b = iso_part.morphism_parts(m)
            mor_map[m] = whole.morphism_index(int(obj_map[o]), a, inj.mor(b))
        parts.append(GroupoidFunctor(P, whole.groupoid, obj_map, mor_map,
                                     name="relabel"))
    all_objs = np.concatenate([F.obj_map for F in parts])
    all_mors = np.concatenate([F.mor_map for F in parts])
    assert len(np.unique(all_objs)) == whole.groupoid.n_objects
    assert len(np.unique(all_mors)) == whole.groupoid.n_morphisms
    return parts[0], parts[1]


@dataclass
class CommaSquare:
    """A 2-cell square over a cospan: cell gamma : i∘v => u∘j."""

    i: GroupoidFunctor
    u: GroupoidFunctor
    v: GroupoidFunctor
    j: GroupoidFunctor
    cell: TwoCell

    def validate(self) -> None:
        if self.i.codomain is not self.u.codomain:
            raise InputError("square legs do not share a codomain")
        if self.v.domain is not self.j.domain:
            raise InputError("square apex mismatch")
        if self.v.codomain is not self.i.domain or self.j.codomain is not self.u.domain:
            raise InputError("square sides do not match the cospan")
        self.cell.validate()


def isocomma_square(iso: IsocommaResult) -> CommaSquare:
    return CommaSquare(iso.left, iso.right, iso.pr1, iso.pr2, iso.gamma)


def induced_comparison(square: CommaSquare,
                       iso: IsocommaResult | None = None) -> GroupoidFunctor:
    """The canonical functor from the square's apex into the isocomma,
    z |-> (v(z), j(z), gamma_z)."""
    square.validate()
    if iso is None:
        iso = isocomma(square.i, square.u)
    L = square.v.domain
    obj_map = np.empty(L.n_objects, dtype=np.int32)
    for z in range(L.n_objects):
        obj_map[z] = iso.object_index(square.v.obj(z), square.j.obj(z),
                                      int(square.cell.components[z]))
    mor_map = np.empty(L.n_morphisms, dtype=np.int32)
    for m in range(L.n_morphisms):
        z = int(L.msrc[m])
        mor_map[m] = iso.morphism_index(int(obj_map[z]), square.v.mor(m),
                                        square.j.mor(m))
    return GroupoidFunctor(L, iso.groupoid, obj_map, mor_map, name="comparison")


def is_equivalence(F: GroupoidFunctor) -> bool:
    """Full + faithful + essentially surjective, decided exhaustively.

    Faithfulness and fullness reduce to hom-set counts at component base
    points (hom-set sizes are uniform along a groupoid component), and
    essential surjectivity to the component partition.  Composition
    preservation is the caller's responsibility (validate/spot_check), but
    endpoint consistency is cheap and checked here.
    """
    dom, cod = F.domain, F.codomain
    if dom.n_morphisms and not (
        (cod.msrc[F.mor_map] == F.obj_map[dom.msrc]).all()
        and (cod.mtgt[F.mor_map] == F.obj_map[dom.mtgt]).all()
    ):
        raise InputError("morphism map endpoints contradict the object map")
    dcomp = dom.components
    ccomp = cod.components
    cod_comp_of = cod.component_of()
    hit: dict[int, int] = {}
    for k, c in enumerate(dcomp):
        base = c.base
        img = F.obj(base)
        target_k = int(cod_comp_of[img])
        if target_k in hit.values():
            return False  # two components collapse: not full
        hit[k] = target_k
        loops = dom.hom(base, base)
        images = {F.mor(m) for m in loops}
        if len(images) != len(loops):
            return False  # not faithful
        if len(loops) != len(cod.hom(img, img)):
            return False  # not full
    if len(set(hit.values())) != len(ccomp):
        return False  # not essentially surjective
    return True


def is_mackey_square(square: CommaSquare) -> bool:
    """True iff the canonical comparison into the isocomma is an equivalence."""
    return is_equivalence(induced_comparison(square))


def paste_squares(bottom: CommaSquare, top: CommaSquare) -> CommaSquare:
    """Paste top onto bottom along bottom's right leg.

    top must be a square over the cospan (bottom.j : P -> K, w : M -> K);
    the result is a square over (bottom.i, bottom.u ∘ w).
    """
    if top.i is not bottom.j:
        raise InputError("top square does not sit on bottom's right leg")
    u, cellb, cellt = bottom.u, bottom.cell, top.cell
    Q = top.v.domain
    G = bottom.i.codomain
    comps = np.empty(Q.n_objects, dtype=np.int32)
    for q in range(Q.n_objects):
        g1 = int(cellb.components[top.v.obj(q)])
        g2 = u.mor(int(cellt.components[q]))
        comps[q] = G.compose(g2, g1)
    new_u = compose_functors(u, top.u)
    new_v = compose_functors(bottom.v, top.v)
    cell = TwoCell(compose_functors(bottom.i, new_v),
                   compose_functors(new_u, top.j), comps, name="pasted")
    return CommaSquare(bottom.i, new_u, new_v, top.j, cell)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _label_to_json(label):
    if isinstance(label, tuple):
        return [_label_to_json(x) for x in label]
    return label


def _label_from_json(label):
    if isinstance(label, list):
        return tuple(_label_from_json(x) for x in label)
    return label


def groupoid_to_json(G: FiniteGroupoid) -> dict:
    """Extensional JSON document: objects, morphism records, composition triples."""
    comp_triples = []
    for f in range(G.n_morphisms):
        for g in G.out(int(G.mtgt[f])):
            comp_triples.append([int(g), f, G.compose(int(g), f)])
    return {
        "objects": [_label_to_json(lab) for lab in G.objects],
        "morphisms": [
            {"id": m, "src": int(G.msrc[m]), "tgt": int(G.mtgt[m])}
            for m in range(G.n_morphisms)
        ],
        "identity": [G.identity_morphism(x) for x in range(G.n_objects)],
        "inverse": [G.inverse(m) for m in range(G.n_morphisms)],
        "composition": comp_triples,
    }


def groupoid_from_json(doc: dict, name: str = "loaded") -> FiniteGroupoid:
    objects = [_label_from_json(lab) for lab in doc["objects"]]
    mor = doc["morphisms"]
    msrc = [r["src"] for r in mor]
    mtgt = [r["tgt"] for r in mor]
    ids = [r["id"] for r in mor]
    if ids != list(range(len(mor))):
        raise InputError("morphism ids must be 0..n-1 in order")
    table = {(g, f): h for g, f, h in doc["composition"]}
    inv = list(doc["inverse"])

    def comp(g: int, f: int) -> int:
        try:
            return table[(g, f)]
        except KeyError:
            raise InputError(f"composition table missing pair ({g}, {f})")

    G = FiniteGroupoid(objects, msrc, mtgt, doc["identity"], comp,
                       lambda m: inv[m], name=name)
    return G


def functor_to_json(F: GroupoidFunctor) -> dict:
    return {
        "object_map": [int(x) for x in F.obj_map],
        "morphism_map": [int(m) for m in F.mor_map],
    }


def functor_from_json(doc: dict, domain: FiniteGroupoid,
                      codomain: FiniteGroupoid) -> GroupoidFunctor:
    return GroupoidFunctor(domain, codomain, doc["object_map"], doc["morphism_map"])
