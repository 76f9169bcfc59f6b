"""Exact arithmetic for finite abelian groups, their duals and automorphisms.

A group is a product of cyclic groups Z_{n_1} x ... x Z_{n_d}; elements are
residue tuples, indexed lexicographically.  The dual group is represented by
the same residue tuples through the pairing

    <xi, x> = exp(2*pi*i * sum_k xi_k * x_k / n_k),

so annihilators and adjoints can be computed in integer arithmetic, without
comparing floating-point characters to 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Iterable, Sequence

import numpy as np

Element = tuple[int, ...]

# Enumeration-based operations refuse to run past this size.
ENUMERATION_CAP = 1 << 22

_residue_cache: dict[tuple[int, ...], np.ndarray] = {}


@dataclass(frozen=True)
class GroupSpec:
    """A finite abelian group given by the orders of its cyclic factors."""

    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.orders) == 0:
            raise ValueError("group needs at least one cyclic factor")
        for n in self.orders:
            if not isinstance(n, int) or n < 1:
                raise ValueError(f"cyclic order must be a positive integer, got {n!r}")
        if self.size > ENUMERATION_CAP:
            raise ValueError(f"group size {self.size} exceeds cap {ENUMERATION_CAP}")

    @property
    def size(self) -> int:
        return prod(self.orders)

    @property
    def ndim(self) -> int:
        return len(self.orders)

    def reduce(self, residues: Sequence[int]) -> Element:
        if len(residues) != self.ndim:
            raise ValueError(f"expected {self.ndim} residues, got {len(residues)}")
        return tuple(int(r) % n for r, n in zip(residues, self.orders))

    def index_of(self, element: Sequence[int]) -> int:
        x = self.reduce(element)
        idx = 0
        for r, n in zip(x, self.orders):
            idx = idx * n + r
        return idx

    def element_at(self, index: int) -> Element:
        if not 0 <= index < self.size:
            raise ValueError(f"index {index} out of range for group of size {self.size}")
        out = []
        for n in reversed(self.orders):
            index, r = divmod(index, n)
            out.append(r)
        return tuple(reversed(out))

    def add(self, a: Sequence[int], b: Sequence[int]) -> Element:
        return tuple((x + y) % n for x, y, n in zip(self.reduce(a), self.reduce(b), self.orders))

    def neg(self, a: Sequence[int]) -> Element:
        return tuple((-x) % n for x, n in zip(self.reduce(a), self.orders))

    def sub(self, a: Sequence[int], b: Sequence[int]) -> Element:
        return self.add(a, self.neg(b))

    @property
    def zero(self) -> Element:
        return (0,) * self.ndim

    def residue_matrix(self) -> np.ndarray:
        """All elements as a (size, ndim) int64 matrix in index order."""
        cached = _residue_cache.get(self.orders)
        if cached is None:
            grids = np.meshgrid(*[np.arange(n, dtype=np.int64) for n in self.orders], indexing="ij")
            cached = np.stack([g.ravel() for g in grids], axis=1)
            _residue_cache[self.orders] = cached
        return cached

    def elements(self) -> Iterable[Element]:
        return (tuple(int(v) for v in row) for row in self.residue_matrix())

    def phase_table(self, fixed: Sequence[int]) -> np.ndarray:
        """Integer phases p[y] = sum_k fixed_k * y_k * (size/n_k) mod size, over all y.

        exp(2*pi*i*p[y]/size) is then the exact character pairing of `fixed`
        against every group element y.
        """
        x = self.reduce(fixed)
        size = self.size
        res = self.residue_matrix()
        acc = np.zeros(size, dtype=np.int64)
        for k, n in enumerate(self.orders):
            acc = (acc + (x[k] * (size // n)) * res[:, k]) % size
        return acc

    def __str__(self) -> str:
        return "Z" + "xZ".join(str(n) for n in self.orders)


def make_group(orders: Sequence[int]) -> GroupSpec:
    """Build the group Z_{orders[0]} x ... x Z_{orders[-1]}."""
    return GroupSpec(tuple(int(n) for n in orders))


def character_eval(group: GroupSpec, xi: Sequence[int], x: Sequence[int]) -> complex:
    """Evaluate the character indexed by the dual element xi at the point x."""
    xi = group.reduce(xi)
    x = group.reduce(x)
    size = group.size
    phase = 0
    for k, n in enumerate(group.orders):
        phase = (phase + xi[k] * x[k] * (size // n)) % size
    return complex(np.exp(2j * np.pi * phase / size))


def character_column(group: GroupSpec, xi: Sequence[int]) -> np.ndarray:
    """The character of xi evaluated at every group element, in index order."""
    phases = group.phase_table(xi)
    return np.exp(2j * np.pi * phases / group.size)


@dataclass(eq=False)
class Subgroup:
    """A subgroup stored as its full sorted element set plus a generator list."""

    parent: GroupSpec
    generators: tuple[Element, ...]
    indices: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self._index_set = frozenset(int(i) for i in self.indices)

    @property
    def order(self) -> int:
        return int(self.indices.size)

    @property
    def covolume(self) -> int:
        # |G| / |Gamma|; exact by Lagrange.
        return self.parent.size // self.order

    def elements(self) -> list[Element]:
        return [self.parent.element_at(int(i)) for i in self.indices]

    def contains(self, element: Sequence[int]) -> bool:
        return self.parent.index_of(element) in self._index_set

    def contains_index(self, index: int) -> bool:
        return int(index) in self._index_set

    def same_set(self, other: "Subgroup") -> bool:
        return self.parent.orders == other.parent.orders and np.array_equal(
            self.indices, other.indices
        )

    @cached_property
    def annihilator(self) -> "Subgroup":
        return annihilator(self.parent, self)

    @cached_property
    def translate_table(self) -> np.ndarray:
        """Index table T with T[i, x] = index(x - gamma_i), one row per subgroup element.

        values[T[i]] is then the translate by gamma_i of a signal stored as a
        flat vector, for every element of the subgroup at once.
        """
        group = self.parent
        res = group.residue_matrix()
        orders = np.asarray(group.orders, dtype=np.int64)
        gammas = res[self.indices]  # (|Gamma|, d)
        shifted = (res[None, :, :] - gammas[:, None, :]) % orders
        return np.ravel_multi_index(
            tuple(shifted[:, :, k] for k in range(group.ndim)), group.orders
        ).astype(np.int64)

    def __str__(self) -> str:
        gens = ",".join(str(g) for g in self.generators)
        return f"<{gens}> of order {self.order} in {self.parent}"


def _greedy_generators(group: GroupSpec, indices: np.ndarray) -> tuple[Element, ...]:
    """Pick a small generating set for the subgroup given by sorted indices."""
    target = frozenset(int(i) for i in indices)
    if target == {0}:
        return ()
    gens: list[Element] = []
    covered = {0}
    for idx in indices:
        idx = int(idx)
        if idx in covered:
            continue
        gens.append(group.element_at(idx))
        covered = _closure_indices(group, [group.element_at(i) for i in covered] + gens)
        if covered == target:
            break
    return tuple(gens)


def _closure_indices(group: GroupSpec, gens: Sequence[Element]) -> set[int]:
    closed = {0}
    frontier = {0}
    gen_tuples = [group.reduce(g) for g in gens]
    steps = 0
    while frontier:
        steps += 1
        if steps > group.size + 1:
            raise RuntimeError("subgroup closure did not terminate")
        new: set[int] = set()
        for idx in frontier:
            base = group.element_at(idx)
            for g in gen_tuples:
                nxt = group.index_of(group.add(base, g))
                if nxt not in closed:
                    new.add(nxt)
        closed |= new
        frontier = new
    return closed


def subgroup_from_generators(group: GroupSpec, gens: Sequence[Sequence[int]]) -> Subgroup:
    """Additive closure of the generators; always contains 0."""
    gen_tuples = tuple(group.reduce(g) for g in gens)
    closed = _closure_indices(group, gen_tuples)
    indices = np.array(sorted(closed), dtype=np.int64)
    return Subgroup(group, gen_tuples, indices)


def subgroup_from_indices(group: GroupSpec, indices: Iterable[int]) -> Subgroup:
    """Wrap an element set already known to be a subgroup."""
    arr = np.array(sorted(int(i) for i in set(indices)), dtype=np.int64)
    gens = _greedy_generators(group, arr)
    return Subgroup(group, gens, arr)


def full_subgroup(group: GroupSpec) -> Subgroup:
    return subgroup_from_indices(group, range(group.size))


def trivial_subgroup(group: GroupSpec) -> Subgroup:
    return Subgroup(group, (), np.array([0], dtype=np.int64))


_translation_table_cache: dict[tuple[int, ...], np.ndarray] = {}


def translation_index_table(group: GroupSpec) -> np.ndarray:
    """Full (|G|, |G|) table T with T[x, y] = index(y - x).

    Row x is the coordinate permutation of the translation by x.  Only used
    by dense capped operations; cached per group shape.
    """
    cached = _translation_table_cache.get(group.orders)
    if cached is None:
        res = group.residue_matrix()
        orders = np.asarray(group.orders, dtype=np.int64)
        shifted = (res[None, :, :] - res[:, None, :]) % orders
        cached = np.ravel_multi_index(
            tuple(shifted[:, :, k] for k in range(group.ndim)), group.orders
        ).astype(np.int64)
        _translation_table_cache[group.orders] = cached
    return cached


def negation_index_table(group: GroupSpec) -> np.ndarray:
    """Index of -x for every x."""
    res = group.residue_matrix()
    orders = np.asarray(group.orders, dtype=np.int64)
    neg = (-res) % orders
    return np.ravel_multi_index(
        tuple(neg[:, k] for k in range(group.ndim)), group.orders
    ).astype(np.int64)


def annihilator(group: GroupSpec, sub: Subgroup) -> Subgroup:
    """All dual elements whose character is identically 1 on the subgroup.

    Membership is decided through the integer congruence
    sum_k xi_k * gamma_k * (|G|/n_k) = 0 (mod |G|) per generator, so the
    result is exact.
    """
    if sub.parent.orders != group.orders:
        raise ValueError("subgroup does not belong to this group")
    keep = np.ones(group.size, dtype=bool)
    gens = sub.generators if sub.generators else ()
    for g in gens:
        keep &= group.phase_table(g) == 0
    indices = np.nonzero(keep)[0].astype(np.int64)
    return subgroup_from_indices(group, indices)


@dataclass(eq=False)
class Automorphism:
    """An automorphism x -> A x (mod orders) with its exact dual-side adjoint."""

    parent: GroupSpec
    matrix: tuple[tuple[int, ...], ...]
    adjoint_matrix: tuple[tuple[int, ...], ...]
    perm: np.ndarray = field(repr=False)
    inv_perm: np.ndarray = field(repr=False)
    adjoint_perm: np.ndarray = field(repr=False)
    adjoint_inv_perm: np.ndarray = field(repr=False)

    def apply(self, x: Sequence[int]) -> Element:
        return self.parent.element_at(int(self.perm[self.parent.index_of(x)]))

    def apply_inverse(self, x: Sequence[int]) -> Element:
        return self.parent.element_at(int(self.inv_perm[self.parent.index_of(x)]))

    def adjoint_apply(self, xi: Sequence[int]) -> Element:
        return self.parent.element_at(int(self.adjoint_perm[self.parent.index_of(xi)]))

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.perm, np.arange(self.parent.size)))

    def inverse_image(self, sub: Subgroup) -> Subgroup:
        """The subgroup alpha^{-1}(Gamma)."""
        return subgroup_from_indices(self.parent, self.inv_perm[sub.indices])

    def adjoint_image(self, sub: Subgroup) -> Subgroup:
        """The subgroup beta(Lambda) on the dual side."""
        return subgroup_from_indices(self.parent, self.adjoint_perm[sub.indices])

    def __str__(self) -> str:
        return f"automorphism {list(map(list, self.matrix))} of {self.parent}"


def _perm_from_matrix(group: GroupSpec, matrix: np.ndarray) -> np.ndarray:
    res = group.residue_matrix()
    orders = np.asarray(group.orders, dtype=np.int64)
    mapped = (res @ matrix.T) % orders
    return np.ravel_multi_index(
        tuple(mapped[:, k] for k in range(group.ndim)), group.orders
    ).astype(np.int64)


def automorphism_from_matrix(group: GroupSpec, matrix: Sequence[Sequence[int]]) -> Automorphism:
    """Validate an integer matrix as a group automorphism and package it.

    Raises ValueError when the matrix does not define a homomorphism (the
    congruence A[k][l]*n_l = 0 mod n_k fails) or is not bijective.
    """
    d = group.ndim
    a = np.asarray(matrix, dtype=np.int64)
    if a.shape != (d, d):
        raise ValueError(f"matrix must be {d}x{d}, got shape {a.shape}")
    orders = group.orders
    for k in range(d):
        for l in range(d):
            if (a[k, l] * orders[l]) % orders[k] != 0:
                raise ValueError(
                    f"matrix is not a homomorphism: entry ({k},{l})={a[k, l]} "
                    f"violates {a[k, l]}*{orders[l]} = 0 mod {orders[k]}"
                )
    a = a % np.asarray(orders, dtype=np.int64)[:, None]
    perm = _perm_from_matrix(group, a)
    counts = np.bincount(perm, minlength=group.size)
    if not np.all(counts == 1):
        raise ValueError("matrix is not bijective on the group")
    # Adjoint on dual indices: B[l][k] = A[k][l] * n_l / n_k, exact by the
    # homomorphism congruence; reduces to the plain transpose when all the
    # cyclic orders agree.
    b = np.zeros((d, d), dtype=np.int64)
    for l in range(d):
        for k in range(d):
            b[l, k] = (int(a[k, l]) * orders[l]) // orders[k] % orders[l]
    adjoint_perm = _perm_from_matrix(group, b)
    if not np.all(np.bincount(adjoint_perm, minlength=group.size) == 1):
        raise ValueError("adjoint matrix is not bijective on the dual")
    return Automorphism(
        parent=group,
        matrix=tuple(tuple(int(v) for v in row) for row in a),
        adjoint_matrix=tuple(tuple(int(v) for v in row) for row in b),
        perm=perm,
        inv_perm=np.argsort(perm).astype(np.int64),
        adjoint_perm=adjoint_perm,
        adjoint_inv_perm=np.argsort(adjoint_perm).astype(np.int64),
    )


def identity_automorphism(group: GroupSpec) -> Automorphism:
    eye = np.eye(group.ndim, dtype=np.int64)
    return automorphism_from_matrix(group, eye)
