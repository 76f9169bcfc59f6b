"""Discrete Fourier transform on products of cyclic groups.

Normalization is asymmetric: the forward transform is the plain character
sum (counting measure on the group), the inverse carries the 1/|G| factor
(so the dual group carries mass 1/|G| per point).  The fast path is a
per-axis mixed-radix decomposition; a naive O(|G|^2) path evaluated straight
from the character definition is kept as an independent reference.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .groups import GroupSpec, Subgroup

_KERNEL_CACHE: dict[tuple[int, int], np.ndarray] = {}

# Largest axis length handled by a single dense kernel; prime factors above
# this fall back to the chunked naive per-axis transform.
_DENSE_LEAF = 64


@dataclass(eq=False)
class Signal:
    """A complex vector indexed by group elements in lexicographic order."""

    group: GroupSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.complex128).reshape(-1)
        if self.values.size != self.group.size:
            raise ValueError(
                f"signal length {self.values.size} does not match group size {self.group.size}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def __getitem__(self, element: Sequence[int]) -> complex:
        return complex(self.values[self.group.index_of(element)])


@dataclass(eq=False)
class Spectrum:
    """A complex vector indexed by dual elements in lexicographic order."""

    group: GroupSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.complex128).reshape(-1)
        if self.values.size != self.group.size:
            raise ValueError(
                f"spectrum length {self.values.size} does not match group size {self.group.size}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def __getitem__(self, element: Sequence[int]) -> complex:
        return complex(self.values[self.group.index_of(element)])


def inner(f: Signal, g: Signal) -> complex:
    """Inner product sum_x f(x) * conj(g(x)) with counting measure."""
    if f.group.orders != g.group.orders:
        raise ValueError("group mismatch in inner product")
    return complex(np.vdot(g.values, f.values))


def _smallest_prime_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    p = 3
    while p * p <= n:
        if n % p == 0:
            return p
        p += 2
    return n


def _kernel(n: int, sign: int) -> np.ndarray:
    key = (n, sign)
    mat = _KERNEL_CACHE.get(key)
    if mat is None:
        j = np.arange(n)
        mat = np.exp((sign * 2j * np.pi / n) * np.outer(j, j))
        _KERNEL_CACHE[key] = mat
    return mat


def _transform_last_axis(a: np.ndarray, sign: int) -> np.ndarray:
    """Unnormalized length-n transform along the last axis of a 2-d batch."""
    n = a.shape[-1]
    if n == 1:
        return a.copy()
    if n <= _DENSE_LEAF:
        return a @ _kernel(n, sign)
    p = _smallest_prime_factor(n)
    if p == n:
        # Large prime axis: direct evaluation, chunked to bound memory.
        out = np.empty(a.shape, dtype=np.complex128)
        j = np.arange(n)
        step = max(1, (1 << 20) // n)
        for start in range(0, n, step):
            cols = np.arange(start, min(start + step, n))
            out[:, cols] = a @ np.exp((sign * 2j * np.pi / n) * np.outer(j, cols))
        return out
    m = n // p
    k = np.arange(n)
    kmod = k % m
    out = np.zeros(a.shape, dtype=np.complex128)
    for r in range(p):
        sub = _transform_last_axis(np.ascontiguousarray(a[:, r::p]), sign)
        out += np.exp((sign * 2j * np.pi * r / n) * k) * sub[:, kmod]
    return out


def _transform_all_axes(values: np.ndarray, orders: tuple[int, ...], sign: int) -> np.ndarray:
    grid = values.reshape(orders)
    for ax in range(len(orders)):
        moved = np.moveaxis(grid, ax, -1)
        shape = moved.shape
        flat = _transform_last_axis(np.ascontiguousarray(moved.reshape(-1, shape[-1])), sign)
        grid = np.moveaxis(flat.reshape(shape), -1, ax)
    return grid.reshape(-1)


def dft(f: Signal) -> Spectrum:
    """Forward transform F(xi) = sum_x f(x) * conj(<xi, x>)."""
    return Spectrum(f.group, _transform_all_axes(f.values, f.group.orders, -1))


def idft(spec: Spectrum) -> Signal:
    """Inverse transform f(x) = (1/|G|) sum_xi F(xi) * <xi, x>."""
    values = _transform_all_axes(spec.values, spec.group.orders, +1) / spec.group.size
    return Signal(spec.group, values)


def _naive_phase_rows(group: GroupSpec, rows: np.ndarray) -> np.ndarray:
    res = group.residue_matrix()
    weights = np.array([group.size // n for n in group.orders], dtype=np.int64)
    return ((res[rows] * weights) @ res.T) % group.size


def dft_naive(f: Signal) -> Spectrum:
    """Reference transform evaluated element by element from the definition."""
    group = f.group
    size = group.size
    out = np.empty(size, dtype=np.complex128)
    step = max(1, (1 << 20) // size)
    for start in range(0, size, step):
        rows = np.arange(start, min(start + step, size))
        phases = _naive_phase_rows(group, rows)
        out[rows] = np.exp(-2j * np.pi * phases / size) @ f.values
    return Spectrum(group, out)


def idft_naive(spec: Spectrum) -> Signal:
    group = spec.group
    size = group.size
    out = np.empty(size, dtype=np.complex128)
    step = max(1, (1 << 20) // size)
    for start in range(0, size, step):
        rows = np.arange(start, min(start + step, size))
        phases = _naive_phase_rows(group, rows)
        out[rows] = np.exp(2j * np.pi * phases / size) @ spec.values
    return Signal(group, out / size)


def apply_multiplier(symbol: Spectrum, f: Signal) -> Signal:
    """Pointwise multiplication by the symbol on the frequency side."""
    if symbol.group.orders != f.group.orders:
        raise ValueError("group mismatch between symbol and signal")
    return idft(Spectrum(f.group, symbol.values * dft(f).values))


def shift_spectrum(spec: Spectrum, offset: Sequence[int]) -> Spectrum:
    """Return S with S(xi) = spec(xi + offset)."""
    group = spec.group
    shift = [-int(r) for r in group.reduce(offset)]
    grid = np.roll(spec.values.reshape(group.orders), shift=shift, axis=tuple(range(group.ndim)))
    return Spectrum(group, grid.reshape(-1))


def delta_signal(group: GroupSpec, at: Sequence[int] | None = None) -> Signal:
    values = np.zeros(group.size, dtype=np.complex128)
    values[0 if at is None else group.index_of(at)] = 1.0
    return Signal(group, values)


def constant_signal(group: GroupSpec, value: complex = 1.0) -> Signal:
    return Signal(group, np.full(group.size, value, dtype=np.complex128))


def indicator_signal(group: GroupSpec, sub: Subgroup) -> Signal:
    values = np.zeros(group.size, dtype=np.complex128)
    values[sub.indices] = 1.0
    return Signal(group, values)


def random_signal(group: GroupSpec, rng: np.random.Generator | int) -> Signal:
    """Complex standard normal signal, deterministic for a fixed seed."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(int(rng))
    values = rng.standard_normal(group.size) + 1j * rng.standard_normal(group.size)
    return Signal(group, values / np.sqrt(2.0))
