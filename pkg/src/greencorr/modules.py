"""Modules over group algebras kG with k = GF(p).

An FpModule is one invertible matrix per group generator; matrices for
arbitrary elements are filled on demand by walking the Cayley-graph spanning
tree recorded at group closure.  Vectors are columns and representations are
left actions, so rho(gh) = rho(g) rho(h).

hom_space uses a spin/standard-basis method: a module is spun from a small
set of seed vectors, images of the seeds are the unknowns, and the leftover
Cayley edges contribute the linear constraints.  This keeps the system at
(number of seeds) * dim(N) unknowns instead of dim(M) * dim(N).
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .errors import InputError
from .linalg import SpanBuilder, as_fp, mat_inv, rref
from .permgroups import PermGroup, SubgroupEmbedding, coset_lookup


class FpModule:
    def __init__(self, group: PermGroup, p: int, action, name: str = "M",
                 check: bool = True, dim: int | None = None):
        self.group = group
        self.p = p
        self.action = [as_fp(a, p) for a in action]
        if len(self.action) != len(group.generators):
            raise InputError("need exactly one action matrix per generator")
        if self.action:
            self.dim = int(self.action[0].shape[0])
        elif dim is not None:
            self.dim = int(dim)
        else:
            raise InputError("modules over a generator-free group need an explicit dim")
        for a in self.action:
            if a.shape != (self.dim, self.dim):
                raise InputError("action matrices must be square of equal size")
        self.name = name
        self._elem_cache: dict[int, np.ndarray] = {
            group.identity: np.eye(self.dim, dtype=np.int64)}
        if check and self.dim:
            for a in self.action:
                if linalg.rank(a, p) != self.dim:
                    raise InputError("action matrix is singular mod p")

    def element_action(self, idx: int) -> np.ndarray:
        """Matrix of the group element with the given index, memoized.

        The recursion follows the closure spanning tree, so each matrix is a
        fixed product of generator matrices: a write-once memo table.
        """
        cached = self._elem_cache.get(idx)
        if cached is not None:
            return cached
        parent, gpos = self.group.factor_of[idx]
        mat = (self.element_action(parent) @ self.action[gpos]) % self.p
        self._elem_cache[idx] = mat
        return mat

    def spot_check(self, rng: np.random.Generator, samples: int = 10) -> None:
        """Random check that cached matrices respect the multiplication table."""
        n = self.group.order
        for _ in range(samples):
            g, h = int(rng.integers(n)), int(rng.integers(n))
            lhs = self.element_action(int(self.group.mult[g, h]))
            rhs = (self.element_action(g) @ self.element_action(h)) % self.p
            assert (lhs == rhs).all(), "factorization-path inconsistency"

    def fingerprint(self) -> bytes:
        stacked = np.concatenate([a.ravel() for a in self.action]) if self.action \
            else np.zeros(0, dtype=np.int64)
        return (f"{self.p}:{self.dim}:".encode() + self.group.fingerprint
                + stacked.tobytes())

    def __repr__(self) -> str:
        return f"FpModule({self.name}, p={self.p}, dim={self.dim})"


def same_context(M: FpModule, N: FpModule) -> None:
    if M.p != N.p:
        raise InputError("modules live over different primes")
    if not M.group.same_group(N.group):
        raise InputError("modules live over different groups")
    if M.group is not N.group and M.group.generators != N.group.generators:
        # hom conditions pair generator matrices positionally, so the two
        # groups must agree on the generating sequence, not just the elements
        raise InputError("modules use different generating sequences")


def zero_module(group: PermGroup, p: int) -> FpModule:
    return FpModule(group, p, [np.zeros((0, 0), dtype=np.int64)
                               for _ in group.generators], name="0", dim=0)


def trivial_module(group: PermGroup, p: int) -> FpModule:
    return FpModule(group, p, [np.eye(1, dtype=np.int64)
                               for _ in group.generators], name="k", dim=1)


def regular_module(group: PermGroup, p: int) -> FpModule:
    """kG with the left multiplication action."""
    n = group.order
    mats = []
    for g in group.gen_indices:
        A = np.zeros((n, n), dtype=np.int64)
        for h in range(n):
            A[int(group.mult[g, h]), h] = 1
        mats.append(A)
    return FpModule(group, p, mats, name="kG", dim=n)


def permutation_module(group: PermGroup, S: SubgroupEmbedding, p: int) -> FpModule:
    """k[G/S] on the left cosets of S."""
    reps, where = coset_lookup(group, S)
    r = len(reps)
    mats = []
    for g in group.gen_indices:
        A = np.zeros((r, r), dtype=np.int64)
        for i, rep in enumerate(reps):
            A[int(where[group.mult[g, rep]]), i] = 1
        mats.append(A)
    return FpModule(group, p, mats, name=f"k[G/{S.tag or 'S'}]", dim=r)


def direct_sum(M: FpModule, N: FpModule, name: str = "") -> FpModule:
    same_context(M, N)
    mats = []
    for a, b in zip(M.action, N.action):
        blk = np.zeros((M.dim + N.dim, M.dim + N.dim), dtype=np.int64)
        blk[:M.dim, :M.dim] = a
        blk[M.dim:, M.dim:] = b
        mats.append(blk)
    return FpModule(M.group, M.p, mats, name=name or f"{M.name}⊕{N.name}",
                    dim=M.dim + N.dim)


def submodule_from_vectors(M: FpModule, vectors: list[np.ndarray],
                           name: str = "sub") -> FpModule:
    """The submodule spanned by the given vectors, as a module in its own basis."""
    span = SpanBuilder(M.dim, M.p)
    frontier = []
    for v in vectors:
        if span.add(v):
            frontier.append(span.rows[-1])
    while frontier:
        new = []
        for v in frontier:
            for A in M.action:
                w = (A @ v) % M.p
                if span.add(w):
                    new.append(w)
        frontier = new
    B = span.basis()  # rows span the submodule
    k = B.shape[0]
    mats = []
    for A in M.action:
        img = (A @ B.T) % M.p  # dim x k, columns are images of basis rows
        coeff = linalg.solve(B.T, img, M.p)
        assert coeff is not None
        mats.append(coeff % M.p)
    return FpModule(M.group, M.p, mats, name=name, dim=k)


def random_module(group: PermGroup, p: int, max_dim: int,
                  rng: np.random.Generator, pool: list[FpModule] | None = None,
                  attempts: int = 200) -> FpModule:
    """A random module of dimension <= max_dim, found as a random spun
    submodule of permutation-style modules (so relations always hold)."""
    if pool is None:
        pool = _default_pool(group, p)
    for _ in range(attempts):
        X = pool[int(rng.integers(len(pool)))]
        if int(rng.integers(2)) and X.dim <= 24:
            Y = pool[int(rng.integers(len(pool)))]
            X = direct_sum(X, Y)
        v = rng.integers(0, p, size=X.dim).astype(np.int64)
        if not v.any():
            continue
        S = submodule_from_vectors(X, [v], name="rand")
        if 1 <= S.dim <= max_dim:
            return S
    raise InputError("failed to sample a small module; widen max_dim")


def _default_pool(group: PermGroup, p: int) -> list[FpModule]:
    pool = [trivial_module(group, p)]
    seen = set()
    for g in list(group.gen_indices) + [
            int(group.mult[a, b]) for a in group.gen_indices
            for b in group.gen_indices]:
        S = group.subgroup_closure({g})
        if S in seen:
            continue
        seen.add(S)
        emb = SubgroupEmbedding(group, tuple(S), tag=f"<{g}>")
        if group.order // emb.order <= 30:
            pool.append(permutation_module(group, emb, p))
    if group.order <= 30:
        pool.append(regular_module(group, p))
    return pool


# ---------------------------------------------------------------------------
# hom spaces
# ---------------------------------------------------------------------------


class _SpinData:
    """Spin of the standard basis under the generator action.

    seeds: indices (into the spin order) of the vectors that started orbits.
    prov: per spin vector, (parent_spin_index, generator_pos) or None for seeds.
    edges: leftover (spin_index, generator_pos) pairs that close up and hence
    contribute constraints.
    basis: dim x dim matrix, row t = spin vector w_t.
    """

    def __init__(self, action: list[np.ndarray], dim: int, p: int):
        d = dim
        span = SpanBuilder(d, p)
        vectors: list[np.ndarray] = []
        prov: list[tuple[int, int] | None] = []
        seeds: list[int] = []
        edges: list[tuple[int, int]] = []
        next_seed = 0
        while len(vectors) < d:
            while next_seed < d:
                e = np.zeros(d, dtype=np.int64)
                e[next_seed] = 1
                if span.add(e):
                    seeds.append(len(vectors))
                    vectors.append(e)
                    prov.append(None)
                    next_seed += 1
                    break
                next_seed += 1
            t = seeds[-1]
            queue = [t]
            while queue:
                s = queue.pop(0)
                for gpos, A in enumerate(action):
                    w = (A @ vectors[s]) % p
                    if span.add(w):
                        queue.append(len(vectors))
                        vectors.append(w)
                        prov.append((s, gpos))
                    else:
                        edges.append((s, gpos))
        self.seeds = seeds
        self.prov = prov
        self.edges = edges
        self.basis = np.stack(vectors) if vectors else np.zeros((0, 0), dtype=np.int64)


def generating_seed_count(M: FpModule) -> int:
    """Size of the greedy kG-generating set found by spinning."""
    if M.dim == 0:
        return 0
    return len(_SpinData(M.action, M.dim, M.p).seeds)


def hom_space_from_actions(action_m: list[np.ndarray], dim_m: int,
                           action_n: list[np.ndarray], dim_n: int,
                           p: int) -> list[np.ndarray]:
    """hom_space core working on raw generator matrices."""
    if dim_m == 0 or dim_n == 0:
        return []
    spin = _SpinData(action_m, dim_m, p)
    r = len(spin.seeds)
    dN, dM = dim_n, dim_m
    u = r * dN

    # y_t = W[t] @ x_{block(t)}: each spin vector's operator is supported on
    # the dN-block of the seed that started its orbit
    W = np.zeros((dM, dN, dN), dtype=np.int64)
    block = np.full(dM, -1, dtype=np.int64)
    for k, t in enumerate(spin.seeds):
        W[t] = np.eye(dN, dtype=np.int64)
        block[t] = k
    for t in range(dM):
        if block[t] < 0:
            s, gpos = spin.prov[t]
            W[t] = (action_n[gpos] @ W[s]) % p
            block[t] = block[s]

    ibt = mat_inv(spin.basis.T, p)
    if spin.edges:
        vecs = np.stack([(action_m[g] @ spin.basis[s]) % p
                         for s, g in spin.edges])
        coords = (vecs @ ibt.T) % p  # row e: coordinates of A_g w_s
        ne = len(spin.edges)
        combos = np.zeros((ne, dN, u), dtype=np.int64)
        for k in range(r):
            mask = block == k
            if mask.any():
                combos[:, :, k * dN:(k + 1) * dN] = np.einsum(
                    "et,tnm->enm", coords[:, mask], W[mask]) % p
        for e, (s, g) in enumerate(spin.edges):
            kb = int(block[s])
            seg = combos[e, :, kb * dN:(kb + 1) * dN]
            combos[e, :, kb * dN:(kb + 1) * dN] = (seg - (action_n[g] @ W[s])) % p
        system = combos.reshape(-1, u)
        sols = linalg.nullspace(system, p)
    else:
        sols = np.eye(u, dtype=np.int64)

    if sols.shape[0] == 0:
        return []
    nsol = sols.shape[0]
    sol_blocks = sols.reshape(nsol, r, dN)
    gathered = sol_blocks[:, block, :]            # (nsol, dM, dN)
    Y = np.einsum("tnm,ktm->ktn", W, gathered) % p
    F = np.einsum("ktn,tm->knm", Y, ibt) % p      # F_k = Y_k^T @ ibt
    flat = F.reshape(nsol, -1)
    R, _ = rref(flat, p)
    return [row.reshape(dN, dM) for row in R]


def hom_space(M: FpModule, N: FpModule) -> list[np.ndarray]:
    """Basis of Hom_kG(M, N) = {F : F rho_M(g) = rho_N(g) F for all generators}.

    Returned matrices are dim(N) x dim(M), acting on column vectors, and the
    basis is canonical: reduced echelon form on the row-major vectorizations.
    """
    same_context(M, N)
    return hom_space_from_actions(M.action, M.dim, N.action, N.dim, M.p)


def hom_dim(M: FpModule, N: FpModule) -> int:
    return len(hom_space(M, N))


def is_invertible_hom(F: np.ndarray, p: int) -> bool:
    return F.shape[0] == F.shape[1] and linalg.rank(F, p) == F.shape[0]


# ---------------------------------------------------------------------------
# induction, restriction, conjugation
# ---------------------------------------------------------------------------


class InducedModule(FpModule):
    """Ind_S^G M as block permutation matrices over left coset representatives.

    Basis ordering: coset block i spans indices [i*dim(M), (i+1)*dim(M)), with
    representatives in the deterministic element order (block 0 is the
    identity coset).
    """

    def __init__(self, M: FpModule, emb: SubgroupEmbedding, name: str = ""):
        G = emb.ambient
        if not M.group.same_group(emb.group):
            raise InputError("module is not over the subgroup being induced from")
        reps, where = coset_lookup(G, emb)
        r = len(reps)
        d = M.dim
        mats = []
        for a in G.gen_indices:
            A = np.zeros((r * d, r * d), dtype=np.int64)
            for ipos, rep in enumerate(reps):
                t = int(G.mult[a, rep])
                jpos = int(where[t])
                s_amb = int(G.mult[G.inv[reps[jpos]], t])
                s_sub = emb.from_ambient[s_amb]
                if d:
                    A[jpos * d:(jpos + 1) * d, ipos * d:(ipos + 1) * d] = \
                        M.element_action(s_sub)
            mats.append(A)
        super().__init__(G, M.p, mats,
                         name=name or f"Ind({M.name})", check=False, dim=r * d)
        self.base = M
        self.embedding = emb
        self.coset_reps = reps
        self.coset_of = where


def induce(M: FpModule, emb: SubgroupEmbedding) -> FpModule:
    """Ind_S^G M; dimension [G:S] * dim M."""
    return InducedModule(M, emb)


def restrict(M: FpModule, emb: SubgroupEmbedding, name: str = "") -> FpModule:
    """Res_S^G M: the same space with the subgroup's generators acting."""
    if not M.group.same_group(emb.ambient):
        raise InputError("restriction target is not a subgroup of the module's group")
    mats = [M.element_action(emb.to_ambient[g])
            for g in emb.group.gen_indices]
    return FpModule(emb.group, M.p, mats, name=name or f"Res({M.name})",
                    check=False, dim=M.dim)


def conjugate_module(M: FpModule, emb: SubgroupEmbedding, g: int,
                     target: SubgroupEmbedding | None = None) -> tuple[FpModule, SubgroupEmbedding]:
    """conj_g M over gDg^-1 for M over D; action x -> rho(g^-1 x g)."""
    G = emb.ambient
    if not M.group.same_group(emb.group):
        raise InputError("module is not over the subgroup being conjugated")
    if target is None:
        target = emb.conjugated(g, tag=f"^g{emb.tag or 'D'}")
    ginv = int(G.inv[g])
    mats = []
    for x in target.group.gen_indices:
        amb = target.to_ambient[x]
        back = int(G.mult[G.mult[ginv, amb], g])
        mats.append(M.element_action(emb.from_ambient[back]))
    return (FpModule(target.group, M.p, mats, name=f"c_g({M.name})",
                     check=False, dim=M.dim), target)


# ---------------------------------------------------------------------------
# the two adjunctions, as explicit matrices
# ---------------------------------------------------------------------------


def counit_ind_res(N: FpModule, emb: SubgroupEmbedding) -> np.ndarray:
    """epsilon : Ind_S Res_S N -> N, g_i ⊗ n -> g_i . n (counit of Ind -| Res)."""
    reps, _ = coset_lookup(N.group, emb)
    blocks = [N.element_action(rep) for rep in reps]
    return np.concatenate(blocks, axis=1) % N.p


def unit_res_ind(N: FpModule, emb: SubgroupEmbedding) -> np.ndarray:
    """eta : N -> Ind_S Res_S N, n -> sum_i g_i ⊗ g_i^-1 n (unit of Res -| Ind)."""
    G = N.group
    reps, _ = coset_lookup(G, emb)
    blocks = [N.element_action(int(G.inv[rep])) for rep in reps]
    return np.concatenate(blocks, axis=0) % N.p


def unit_ind_res_on_base(M: FpModule, emb: SubgroupEmbedding) -> np.ndarray:
    """eta : M -> Res_S Ind_S M, inclusion at the identity coset block."""
    G = emb.ambient
    reps, _ = coset_lookup(G, emb)
    r, d = len(reps), M.dim
    out = np.zeros((r * d, d), dtype=np.int64)
    pos = reps.index(G.identity)
    out[pos * d:(pos + 1) * d, :] = np.eye(d, dtype=np.int64)
    return out


def counit_res_ind_on_base(M: FpModule, emb: SubgroupEmbedding) -> np.ndarray:
    """epsilon : Res_S Ind_S M -> M, projection onto the identity coset block."""
    G = emb.ambient
    reps, _ = coset_lookup(G, emb)
    r, d = len(reps), M.dim
    out = np.zeros((d, r * d), dtype=np.int64)
    pos = reps.index(G.identity)
    out[:, pos * d:(pos + 1) * d] = np.eye(d, dtype=np.int64)
    return out


def cohomological_composite(N: FpModule, emb: SubgroupEmbedding) -> np.ndarray:
    """epsilon ∘ eta : N -> Ind Res N -> N; must equal [G:S] * id exactly."""
    return (counit_ind_res(N, emb) @ unit_res_ind(N, emb)) % N.p


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def module_to_json(M: FpModule) -> dict:
    return {
        "p": M.p,
        "group_ref": {
            "degree": M.group.degree,
            "generators": [list(g) for g in M.group.generators],
        },
        "dim": M.dim,
        "action": {
            str(i): [int(v) for v in a.ravel()] for i, a in enumerate(M.action)
        },
    }


def module_from_json(doc: dict, group: PermGroup | None = None) -> FpModule:
    p = int(doc["p"])
    if group is None:
        ref = doc["group_ref"]
        group = PermGroup(int(ref["degree"]),
                          [tuple(g) for g in ref["generators"]])
    d = int(doc["dim"])
    mats = []
    for i in range(len(group.generators)):
        flat = doc["action"][str(i)]
        if len(flat) != d * d:
            raise InputError("action entry count does not match dim^2")
        mats.append(np.array(flat, dtype=np.int64).reshape(d, d) % p)
    return FpModule(group, p, mats, name="loaded")
