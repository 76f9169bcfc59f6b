"""Seeded construction of random systems, engineered dual and orthogonal
pairs, and the standard desk-scale sweep corpus.

The engineered constructions work fiberwise on cosets of the annihilator:
stacking the window spectra of one coset into a matrix, duality of a pair
means (H* W G) = identity there, so drawing G at random and solving for H
with the weighted pseudo-inverse yields exact dual pairs; projecting onto
the orthocomplement of the column space yields exact orthogonal pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .analysis import SuperSignal
from .fourier import Signal, idft, Spectrum, random_signal
from .groups import (
    Automorphism,
    GroupSpec,
    Subgroup,
    automorphism_from_matrix,
    full_subgroup,
    make_group,
    subgroup_from_generators,
)
from .systems import GtiLayer, SuperSystemDescriptor, WeightedGenerator

SWEEP_GROUP_ORDERS: tuple[tuple[int, ...], ...] = (
    (4,),
    (6,),
    (8,),
    (12,),
    (16,),
    (2, 4),
    (3, 3),
    (2, 2, 2),
)

_subgroup_cache: dict[tuple[int, ...], list[Subgroup]] = {}


def all_small_subgroups(group: GroupSpec, max_generators: int = 2) -> list[Subgroup]:
    """Every distinct subgroup generated by at most `max_generators` elements."""
    cached = _subgroup_cache.get(group.orders)
    if cached is not None:
        return cached
    seen: dict[tuple[int, ...], Subgroup] = {}
    elements = list(group.elements())
    gen_sets = [()]
    gen_sets += [(g,) for g in elements]
    if max_generators >= 2:
        gen_sets += list(combinations(elements, 2))
    for gens in gen_sets:
        sub = subgroup_from_generators(group, gens)
        key = tuple(int(i) for i in sub.indices)
        if key not in seen:
            seen[key] = sub
    # Groups needing more than two generators (e.g. three Z_2 factors) would
    # otherwise miss their own improper subgroup.
    whole = full_subgroup(group)
    whole_key = tuple(int(i) for i in whole.indices)
    if whole_key not in seen:
        seen[whole_key] = whole
    out = list(seen.values())
    _subgroup_cache[group.orders] = out
    return out


def random_subgroup(rng: np.random.Generator, group: GroupSpec,
                    max_index: int | None = None) -> Subgroup:
    """A random subgroup, optionally with |G|/|Gamma| bounded by max_index."""
    pool = all_small_subgroups(group)
    if max_index is not None:
        pool = [s for s in pool if s.covolume <= max_index]
    return pool[int(rng.integers(len(pool)))]


def random_super_signal(rng: np.random.Generator, group: GroupSpec, channels: int) -> SuperSignal:
    return SuperSignal(tuple(random_signal(group, rng) for _ in range(channels)))


def _random_windows(rng: np.random.Generator, group: GroupSpec, channels: int) -> tuple[Signal, ...]:
    return tuple(random_signal(group, rng) for _ in range(channels))


def random_descriptor(
    rng: np.random.Generator,
    group: GroupSpec,
    channels: int,
    n_layers: int,
    gens_per_layer: int,
    subgroups: list[Subgroup] | None = None,
    random_weights: bool = False,
) -> SuperSystemDescriptor:
    layers = []
    for j in range(n_layers):
        sub = subgroups[j] if subgroups is not None else random_subgroup(rng, group)
        gens = []
        for _ in range(gens_per_layer):
            weight = float(rng.uniform(0.5, 2.0)) if random_weights else 1.0
            gens.append(WeightedGenerator(weight, _random_windows(rng, group, channels)))
        layers.append(GtiLayer(sub, gens))
    return SuperSystemDescriptor(group, channels, layers)


def matched_random_pair(
    rng: np.random.Generator,
    group: GroupSpec,
    channels: int,
    n_layers: int,
    gens_per_layer: int,
    full_group_layers: bool = False,
    random_weights: bool = True,
) -> tuple[SuperSystemDescriptor, SuperSystemDescriptor]:
    """Two structure-matched descriptors with independent random windows."""
    if full_group_layers:
        subgroups = [full_subgroup(group) for _ in range(n_layers)]
    else:
        subgroups = [random_subgroup(rng, group) for _ in range(n_layers)]
    weights = [
        [float(rng.uniform(0.5, 2.0)) if random_weights else 1.0 for _ in range(gens_per_layer)]
        for _ in range(n_layers)
    ]
    def build() -> SuperSystemDescriptor:
        layers = []
        for j in range(n_layers):
            gens = [
                WeightedGenerator(weights[j][p], _random_windows(rng, group, channels))
                for p in range(gens_per_layer)
            ]
            layers.append(GtiLayer(subgroups[j], gens))
        return SuperSystemDescriptor(group, channels, layers)
    return build(), build()


def _annihilator_cosets(group: GroupSpec, sub: Subgroup) -> list[list[int]]:
    """Partition of the dual index set into cosets of the annihilator."""
    ann = sub.annihilator
    ann_elements = ann.elements()
    covered = np.zeros(group.size, dtype=bool)
    cosets = []
    for start in range(group.size):
        if covered[start]:
            continue
        rep = group.element_at(start)
        coset = [group.index_of(group.add(rep, a)) for a in ann_elements]
        for idx in coset:
            covered[idx] = True
        cosets.append(coset)
    return cosets


def _fiberwise_pair_layer(
    rng: np.random.Generator,
    group: GroupSpec,
    sub: Subgroup,
    channels: int,
    extra_generators: int,
    orthogonal: bool,
    random_weights: bool,
) -> tuple[GtiLayer, GtiLayer]:
    """One layer of an exact dual (or orthogonal) pair over the subgroup."""
    cosets = _annihilator_cosets(group, sub)
    width = channels * sub.annihilator.order
    n_gens = width + extra_generators
    weights = (
        rng.uniform(0.5, 2.0, size=n_gens) if random_weights else np.ones(n_gens)
    )
    g_hat = np.zeros((n_gens, channels, group.size), dtype=np.complex128)
    h_hat = np.zeros_like(g_hat)
    for coset in cosets:
        gm = (
            rng.standard_normal((n_gens, width)) + 1j * rng.standard_normal((n_gens, width))
        ) / np.sqrt(2.0)
        gram = gm.conj().T @ gm
        if orthogonal:
            proj = gm @ np.linalg.solve(gram, gm.conj().T)
            rand = (
                rng.standard_normal((n_gens, width)) + 1j * rng.standard_normal((n_gens, width))
            )
            hm = (np.eye(n_gens) - proj) @ rand / weights[:, None]
        else:
            hm = gm @ np.linalg.inv(gram) / weights[:, None]
        for col, (n, xi_idx) in enumerate(
            (n, xi_idx) for n in range(channels) for xi_idx in coset
        ):
            g_hat[:, n, xi_idx] = gm[:, col]
            h_hat[:, n, xi_idx] = hm[:, col]
    def layer_from(hats: np.ndarray) -> GtiLayer:
        gens = []
        for p in range(n_gens):
            windows = tuple(
                idft(Spectrum(group, hats[p, n])) for n in range(channels)
            )
            gens.append(WeightedGenerator(float(weights[p]), windows))
        return GtiLayer(sub, gens)
    return layer_from(g_hat), layer_from(h_hat)


def dual_pair(
    rng: np.random.Generator,
    group: GroupSpec,
    channels: int,
    n_layers: int = 1,
    max_annihilator: int | None = None,
    random_weights: bool = True,
) -> tuple[SuperSystemDescriptor, SuperSystemDescriptor]:
    """An exact super dual frame pair with the requested layer count.

    Each layer is an exact dual pair on its own subgroup; layers are scaled
    by split masses summing to one, which keeps the combined pair dual.
    """
    if max_annihilator is None:
        max_annihilator = max(1, 4 // channels)
    masses = rng.dirichlet(np.ones(n_layers)) if n_layers > 1 else np.array([1.0])
    f_layers = []
    h_layers = []
    for j in range(n_layers):
        sub = random_subgroup(rng, group, max_index=max_annihilator)
        lf, lh = _fiberwise_pair_layer(
            rng, group, sub, channels, 0, orthogonal=False, random_weights=random_weights
        )
        scale = float(np.sqrt(masses[j]))
        for gen in lf.generators:
            for w in gen.windows:
                w.values *= scale
        for gen in lh.generators:
            for w in gen.windows:
                w.values *= scale
        f_layers.append(lf)
        h_layers.append(lh)
    return (
        SuperSystemDescriptor(group, channels, f_layers),
        SuperSystemDescriptor(group, channels, h_layers),
    )


def orthogonal_pair(
    rng: np.random.Generator,
    group: GroupSpec,
    channels: int,
    random_weights: bool = True,
) -> tuple[SuperSystemDescriptor, SuperSystemDescriptor]:
    """An exact orthogonal pair (zero mixed dual Gramian), single layer."""
    max_annihilator = max(1, 3 // channels)
    sub = random_subgroup(rng, group, max_index=max_annihilator)
    lf, lh = _fiberwise_pair_layer(
        rng, group, sub, channels, 1, orthogonal=True, random_weights=random_weights
    )
    return (
        SuperSystemDescriptor(group, channels, [lf]),
        SuperSystemDescriptor(group, channels, [lh]),
    )


def random_automorphism(
    rng: np.random.Generator, group: GroupSpec, max_tries: int = 64
) -> Automorphism:
    """A random valid automorphism: diagonal units plus an admissible shear."""
    d = group.ndim
    orders = group.orders
    for _ in range(max_tries):
        mat = np.zeros((d, d), dtype=np.int64)
        for k, n in enumerate(orders):
            units = [u for u in range(1, n + 1) if np.gcd(u, n) == 1] or [1]
            mat[k, k] = units[int(rng.integers(len(units)))]
        if d > 1 and rng.random() < 0.7:
            k, l = rng.choice(d, size=2, replace=False)
            step = orders[k] // np.gcd(orders[k], orders[l])
            mat[k, l] = step * int(rng.integers(0, max(1, orders[k] // max(1, step))))
        try:
            return automorphism_from_matrix(group, mat)
        except ValueError:
            continue
    raise RuntimeError(f"could not sample an automorphism of {group}")


@dataclass
class SweepCase:
    """One pair of the standard corpus, tagged with how it was built."""

    name: str
    kind: str  # "random", "full_group", "dual", "orthogonal"
    f_system: SuperSystemDescriptor
    h_system: SuperSystemDescriptor


def sweep_cases(seed: int = 20240801, per_group: dict[str, int] | None = None) -> list[SweepCase]:
    """The standard seeded corpus over the desk-scale group list.

    Default mix per group: 13 fully random pairs, 4 pairs whose layers all sit
    on the full group (so their Gramians are always translation-commuting),
    6 engineered dual pairs and 4 engineered orthogonal pairs.
    """
    counts = {"random": 13, "full_group": 4, "dual": 6, "orthogonal": 4}
    if per_group:
        counts.update(per_group)
    rng = np.random.default_rng(seed)
    cases = []
    for orders in SWEEP_GROUP_ORDERS:
        group = make_group(orders)
        for i in range(counts["random"]):
            channels = int(rng.integers(1, 4))
            f, h = matched_random_pair(
                rng, group, channels,
                n_layers=int(rng.integers(1, 4)),
                gens_per_layer=int(rng.integers(1, 5)),
            )
            cases.append(SweepCase(f"{group}-random-{i}", "random", f, h))
        for i in range(counts["full_group"]):
            channels = int(rng.integers(1, 4))
            f, h = matched_random_pair(
                rng, group, channels,
                n_layers=int(rng.integers(1, 3)),
                gens_per_layer=int(rng.integers(1, 5)),
                full_group_layers=True,
            )
            cases.append(SweepCase(f"{group}-full-{i}", "full_group", f, h))
        for i in range(counts["dual"]):
            channels = int(rng.integers(1, 4))
            f, h = dual_pair(rng, group, channels, n_layers=int(rng.integers(1, 3)))
            cases.append(SweepCase(f"{group}-dual-{i}", "dual", f, h))
        for i in range(counts["orthogonal"]):
            channels = int(rng.integers(1, 4))
            f, h = orthogonal_pair(rng, group, channels)
            cases.append(SweepCase(f"{group}-orth-{i}", "orthogonal", f, h))
    return cases
