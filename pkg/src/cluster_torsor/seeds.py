"""Seed data, validation, derived maps, principal coefficients, and mutation.

A seed is the tuple (N, I, E, F, [.,.]): an ambient lattice rank, an index
set, basis vectors e_i spanning a saturated sublattice N_I, a frozen subset,
and an integer bilinear form stored on all of N.  Everything else the
package computes derives from this record.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Sequence

from .errors import FrozenIndexError, InvalidSeedError, NotSkewError
from .lattice import (
    IntMatrix,
    Vector,
    hermite_column_form,
    image_basis,
    kernel_basis,
    reduce_mod_lattice,
    smith_normal_form,
    solve_integer,
    vec_is_primitive,
)


@dataclass(frozen=True)
class Seed:
    rank: int
    index_set: tuple[int, ...]
    frozen: frozenset[int]
    basis: IntMatrix      # E: rank x |I|, columns are the e_i
    bracket: IntMatrix    # B: rank x rank, B[i][j] = [n_i, n_j]

    def __post_init__(self):
        if self.basis.shape != (self.rank, len(self.index_set)):
            raise InvalidSeedError(
                f"E must be {self.rank} x {len(self.index_set)}, got {self.basis.shape}")
        if self.bracket.shape != (self.rank, self.rank):
            raise InvalidSeedError(f"bracket must be {self.rank} x {self.rank}")
        if len(set(self.index_set)) != len(self.index_set):
            raise InvalidSeedError("repeated labels in index set")
        if not self.frozen <= set(self.index_set):
            raise InvalidSeedError("frozen indices not contained in the index set")

    # -- labels -----------------------------------------------------------
    @property
    def unfrozen(self) -> tuple[int, ...]:
        return tuple(i for i in self.index_set if i not in self.frozen)

    def position(self, label: int) -> int:
        try:
            return self.index_set.index(label)
        except ValueError:
            raise InvalidSeedError(f"unknown index {label}") from None

    def e_vector(self, label: int) -> Vector:
        return self.basis.column(self.position(label))

    def pairing(self, n1: Sequence[int], n2: Sequence[int]) -> int:
        """[n1, n2] in ambient coordinates."""
        return sum(self.bracket[i, j] * n1[i] * n2[j]
                   for i in range(self.rank) for j in range(self.rank))

    # -- serialization -------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "I": list(self.index_set),
            "F": sorted(self.frozen),
            "E": [list(r) for r in self.basis.data],
            "bracket": [list(r) for r in self.bracket.data],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Seed":
        try:
            return cls(
                rank=int(d["rank"]),
                index_set=tuple(int(i) for i in d["I"]),
                frozen=frozenset(int(i) for i in d["F"]),
                basis=IntMatrix(d["E"], cols=len(d["I"])),
                bracket=IntMatrix(d["bracket"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidSeedError(f"malformed seed record: {exc}") from exc

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def content_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]


@dataclass(frozen=True)
class DerivedMaps:
    """The lattice maps attached to a seed, as matrices in basis coordinates."""

    p1: IntMatrix       # N -> M,  n |-> [n, .]
    p2: IntMatrix       # N -> M,  n |-> [., n]
    pbar1: IntMatrix    # N -> M_I (restriction of p1 to N_I functionals)
    pbar2: IntMatrix    # N -> M_I
    K1: IntMatrix       # kernel basis of p1
    K2: IntMatrix       # kernel basis of p2
    kappa1: IntMatrix   # inclusion K1 -> N (same matrix as K1)
    kappa2: IntMatrix
    lambda_map: IntMatrix  # M -> K1^*, dual of kappa1


def derive_maps(seed: Seed) -> DerivedMaps:
    B = seed.bracket
    Et = seed.basis.transpose()
    p1 = B.transpose()
    p2 = B
    K1 = kernel_basis(p1)
    K2 = kernel_basis(p2)
    return DerivedMaps(
        p1=p1,
        p2=p2,
        pbar1=Et * p1,
        pbar2=Et * p2,
        K1=K1,
        K2=K2,
        kappa1=K1,
        kappa2=K2,
        lambda_map=K1.transpose(),
    )


def validate_seed(seed: Seed) -> list[str]:
    """Empty list iff the seed satisfies all standing assumptions."""
    violations: list[str] = []
    k = len(seed.index_set)
    if k > seed.rank:
        violations.append(f"|I| = {k} exceeds rank {seed.rank}")
        return violations
    if k:
        _, D, _ = smith_normal_form(seed.basis)
        diag = [D[i, i] for i in range(min(D.rows, D.cols))]
        if sum(1 for d in diag if d != 0) < k:
            violations.append("E columns are not linearly independent")
        elif any(d not in (0, 1) for d in diag):
            violations.append("N_I is not saturated in N")
    maps = derive_maps(seed)
    for label in seed.index_set:
        e = seed.e_vector(label)
        if label not in seed.frozen and seed.pairing(e, e) != 0:
            violations.append(f"[e_{label}, e_{label}] != 0 for unfrozen {label}")
        p2e = maps.p2.apply(e)
        if not any(p2e):
            violations.append(f"p2(e_{label}) = 0")
        elif label in seed.frozen and not vec_is_primitive(p2e):
            violations.append(f"p2(e_{label}) not primitive")
    return violations


def is_skew(seed: Seed) -> dict[int, int] | None:
    """Positive integers {d_j} exhibiting skew-symmetrizability on I_uf.

    Returns None when no such multipliers exist.  Normalization: the d_j are
    coprime positive integers; within each connected component of the
    exchange graph the least-label vertex is used as the anchor.
    """
    uf = seed.unfrozen
    if not uf:
        return {}
    A = {(i, j): seed.pairing(seed.e_vector(i), seed.e_vector(j)) for i in uf for j in uf}
    for i in uf:
        if A[(i, i)] != 0:
            return None
    d: dict[int, Fraction] = {}
    for start in uf:
        if start in d:
            continue
        d[start] = Fraction(1)
        queue = [start]
        while queue:
            i = queue.pop(0)
            for j in uf:
                if j == i:
                    continue
                aij, aji = A[(i, j)], A[(j, i)]
                if (aij == 0) != (aji == 0):
                    return None
                if aij == 0:
                    continue
                ratio = Fraction(-aij, aji)  # d_j / d_i
                if ratio <= 0:
                    return None
                dj = d[i] * ratio
                if j in d:
                    if d[j] != dj:
                        return None
                else:
                    d[j] = dj
                    queue.append(j)
    denominator = lcm(*(x.denominator for x in d.values()))
    ints = {i: x.numerator * (denominator // x.denominator) for i, x in d.items()}
    g = 0
    for x in ints.values():
        g = gcd(g, x)
    return {i: x // g for i, x in ints.items()}


def mutate_seed(seed: Seed, j: int) -> Seed:
    """The seed mutation at an unfrozen index: e_j -> -e_j and
    e_i -> e_i + max([e_i, e_j], 0) e_j for i != j.  The bracket is unchanged."""
    if is_skew(seed) is None:
        raise NotSkewError("mutation is only defined for skew seeds")
    if j in seed.frozen or j not in seed.index_set:
        raise FrozenIndexError(f"cannot mutate at {j}")
    ej = seed.e_vector(j)
    new_cols = []
    for label in seed.index_set:
        if label == j:
            new_cols.append(tuple(-x for x in ej))
        else:
            ei = seed.e_vector(label)
            m = max(seed.pairing(ei, ej), 0)
            new_cols.append(tuple(a + m * b for a, b in zip(ei, ej)))
    return Seed(
        rank=seed.rank,
        index_set=seed.index_set,
        frozen=seed.frozen,
        basis=IntMatrix.from_columns(new_cols, rows=seed.rank),
        bracket=seed.bracket,
    )


def mutate_along(seed: Seed, path: Sequence[int]) -> Seed:
    for j in path:
        seed = mutate_seed(seed, j)
    return seed


@dataclass(frozen=True)
class PrinSeed:
    """The principal-coefficients seed over N_prin = N_I + M, with bookkeeping.

    Coordinates on N_prin: the first |I| are N_I in the E-basis, the last
    rank(N) are M in the basis dual to the ambient basis of N.  Functions on
    the principal A-torus live on M_prin = M_I + N with the same split.
    """

    base: Seed
    prin: Seed
    pbar1: IntMatrix

    @property
    def mi_rank(self) -> int:
        return len(self.base.index_set)

    @property
    def n_rank(self) -> int:
        return self.base.rank

    @property
    def total_rank(self) -> int:
        return self.mi_rank + self.n_rank

    def split(self, q: Sequence[int]) -> tuple[Vector, Vector]:
        q = tuple(q)
        if len(q) != self.total_rank:
            raise InvalidSeedError(f"M_prin vector of length {len(q)} expected {self.total_rank}")
        return q[: self.mi_rank], q[self.mi_rank:]

    def join(self, m: Sequence[int], n: Sequence[int]) -> Vector:
        return tuple(m) + tuple(n)

    def degree_of(self, q: Sequence[int]) -> Vector:
        """deg z^(m,n) = m - pbar1(n), the M_I-grading."""
        m, n = self.split(q)
        return tuple(a - b for a, b in zip(m, self.pbar1.apply(n)))

    def wall_exponent(self, label: int) -> Vector:
        """p1_prin((e_i, 0)) = (pbar1(e_i), e_i) in M_prin coordinates."""
        e = self.base.e_vector(label)
        return self.join(self.pbar1.apply(e), e)

    def p2tilde_matrix(self) -> IntMatrix:
        """Exponent map of p2~: z^m z^n -> z^(m + pbar1(n), n) on M_I + N."""
        k, r = self.mi_rank, self.n_rank
        rows = []
        for i in range(k):
            rows.append([1 if j == i else 0 for j in range(k)] + list(self.pbar1.row(i)))
        for i in range(r):
            rows.append([0] * k + [1 if j == i else 0 for j in range(r)])
        return IntMatrix(rows)


def principal_seed(seed: Seed) -> PrinSeed:
    """Build S_prin over N_prin = N_I + M with the twisted bracket
    [(n1,m1),(n2,m2)] = [n1,n2] + <n1,m2> - <n2,m1>."""
    k, r = len(seed.index_set), seed.rank
    E, B = seed.basis, seed.bracket
    Et = E.transpose()
    bracket_NI = Et * B * E
    rows = []
    for i in range(k):
        rows.append(list(bracket_NI.row(i)) + list(Et.row(i)))
    for i in range(r):
        rows.append([-E[i, j] for j in range(k)] + [0] * r)
    prin_bracket = IntMatrix(rows)
    prin_basis = IntMatrix([[1 if j == i else 0 for j in range(k)] for i in range(k)]
                           + [[0] * k for _ in range(r)], cols=k)
    prin = Seed(
        rank=k + r,
        index_set=seed.index_set,
        frozen=seed.frozen,
        basis=prin_basis,
        bracket=prin_bracket,
    )
    return PrinSeed(base=seed, prin=prin, pbar1=derive_maps(seed).pbar1)


class Section:
    """A deterministic linear section s of pbar1, defined on image(pbar1).

    Built by lifting a Hermite basis of the image and extending linearly, so
    s is additive; values are canonicalized by reduction against ker(pbar1).
    """

    def __init__(self, seed: Seed):
        maps = derive_maps(seed)
        self._pbar1 = maps.pbar1
        self._kernel = kernel_basis(maps.pbar1)
        self._image = image_basis(maps.pbar1)
        lifts = []
        for j in range(self._image.cols):
            x = solve_integer(self._pbar1, self._image.column(j))
            assert x is not None, "image basis vector has no preimage"
            lifts.append(reduce_mod_lattice(x, self._kernel))
        self._lifts = lifts

    @property
    def image(self) -> IntMatrix:
        return self._image

    def contains(self, m0: Sequence[int]) -> bool:
        return self._coords(m0) is not None

    def _coords(self, m0: Sequence[int]) -> list[int] | None:
        """Coordinates of m0 in the Hermite image basis (forward solve)."""
        H = self._image
        v = list(m0)
        coords = [0] * H.cols
        for j in range(H.cols):
            prow = next((i for i in range(H.rows) if H[i, j] != 0), None)
            if prow is None:
                continue
            q, rem = divmod(v[prow], H[prow, j])
            if rem:
                return None
            coords[j] = q
            for i in range(H.rows):
                v[i] -= q * H[i, j]
        return coords if not any(v) else None

    def __call__(self, m0: Sequence[int]) -> Vector:
        coords = self._coords(m0)
        if coords is None:
            raise ValueError(f"{tuple(m0)} is not in the image of pbar1")
        n = [0] * self._pbar1.cols
        for c, lift in zip(coords, self._lifts):
            for i, x in enumerate(lift):
                n[i] += c * x
        result = tuple(n)
        assert self._pbar1.apply(result) == tuple(m0)
        return result


def section_of_pbar1(seed: Seed) -> Section:
    return Section(seed)


# -- standard desk-scale seeds used throughout the test-suite ----------------

def seed_a2() -> Seed:
    """Rank 2, no frozen indices, bracket [[0,1],[-1,0]]."""
    return Seed(2, (1, 2), frozenset(), IntMatrix.identity(2), IntMatrix([[0, 1], [-1, 0]]))


def seed_a1f() -> Seed:
    """As seed_a2 but with index 2 frozen."""
    return Seed(2, (1, 2), frozenset({2}), IntMatrix.identity(2), IntMatrix([[0, 1], [-1, 0]]))


def seed_k() -> Seed:
    """Bracket [[0,1],[-2,0]] with index 2 frozen; Pic is Z/2."""
    return Seed(2, (1, 2), frozenset({2}), IntMatrix.identity(2), IntMatrix([[0, 1], [-2, 0]]))
