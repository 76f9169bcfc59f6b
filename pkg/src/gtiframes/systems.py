"""Translation, modulation and dilation operators, and the descriptors that
expand Gabor / wavelet / wave-packet specifications into explicit layered
translation-invariant systems.

A descriptor is a union of layers; each layer translates a weighted list of
generators (one window per channel) along its subgroup.  Constructors always
expand to this layered form, rewriting dilation-translation products so that
every member is a plain translate of a stored window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import StructureMismatchError
from .fourier import Signal
from .groups import Automorphism, Element, GroupSpec, Subgroup, character_column


def translate(gamma: Sequence[int], f: Signal) -> Signal:
    """(T_gamma f)(x) = f(x - gamma)."""
    group = f.group
    shift = list(group.reduce(gamma))
    grid = np.roll(f.values.reshape(group.orders), shift=shift, axis=tuple(range(group.ndim)))
    return Signal(group, grid.reshape(-1))


def modulate(chi: Sequence[int], f: Signal) -> Signal:
    """(M_chi f)(x) = <chi, x> f(x); shifts the spectrum by chi."""
    return Signal(f.group, character_column(f.group, chi) * f.values)


def dilate(alpha: Automorphism, f: Signal) -> Signal:
    """(D_alpha f)(x) = f(alpha(x)); a permutation of coordinates."""
    if alpha.parent.orders != f.group.orders:
        raise ValueError("automorphism group does not match signal group")
    return Signal(f.group, f.values[alpha.perm])


@dataclass(eq=False)
class WeightedGenerator:
    """One generator of a layer: a nonnegative mass and one window per channel."""

    weight: float
    windows: tuple[Signal, ...]

    def __post_init__(self) -> None:
        self.windows = tuple(self.windows)
        if self.weight < 0:
            raise ValueError(f"generator weight must be nonnegative, got {self.weight}")
        if not self.windows:
            raise ValueError("generator needs at least one channel window")


@dataclass(eq=False)
class GtiLayer:
    """Translates its weighted generators along one subgroup."""

    subgroup: Subgroup
    generators: list[WeightedGenerator]

    def __post_init__(self) -> None:
        group = self.subgroup.parent
        for gen in self.generators:
            for w in gen.windows:
                if w.group.orders != group.orders:
                    raise ValueError("window group does not match layer subgroup parent")


@dataclass(eq=False)
class SuperSystemDescriptor:
    """A finite union of layers acting diagonally on an N-channel space."""

    group: GroupSpec
    channels: int
    layers: list[GtiLayer]

    def __post_init__(self) -> None:
        if not self.layers:
            raise ValueError("descriptor needs at least one layer")
        if self.channels < 1:
            raise ValueError("channel count must be at least 1")
        for layer in self.layers:
            if layer.subgroup.parent.orders != self.group.orders:
                raise ValueError("layer subgroup does not live in the descriptor group")
            for gen in layer.generators:
                if len(gen.windows) != self.channels:
                    raise ValueError(
                        f"generator has {len(gen.windows)} windows, expected {self.channels}"
                    )

    def generator_count(self) -> int:
        return sum(len(layer.generators) for layer in self.layers)


@dataclass
class Witness:
    """One offending (channel pair, offset, frequency) triple of a failed check."""

    channels: tuple[int, int]
    offset: Element
    frequency: Element
    residual: float


@dataclass
class Verdict:
    """Outcome of a characterization check: pass/fail plus the worst residuals."""

    passed: bool
    max_residual: float
    witnesses: list[Witness]
    tolerance: float
    bessel_bound: float | None = None
    blocks: dict[tuple[int, int], "Verdict"] | None = field(default=None, repr=False)

    @classmethod
    def from_witnesses(
        cls,
        witnesses: list[Witness],
        tolerance: float,
        top_k: int = 10,
        bessel_bound: float | None = None,
    ) -> "Verdict":
        ranked = sorted(witnesses, key=lambda w: -w.residual)
        max_residual = ranked[0].residual if ranked else 0.0
        return cls(
            passed=max_residual <= tolerance,
            max_residual=max_residual,
            witnesses=ranked[:top_k],
            tolerance=tolerance,
            bessel_bound=bessel_bound,
        )


def _validate_windows(windows: Sequence[Sequence[Signal]], group: GroupSpec) -> int:
    if not windows:
        raise ValueError("need at least one window tuple")
    channels = len(windows[0])
    if channels == 0:
        raise ValueError("window tuples must have at least one channel")
    for tup in windows:
        if len(tup) != channels:
            raise ValueError("all window tuples must have the same channel count")
        for w in tup:
            if w.group.orders != group.orders:
                raise ValueError("window group mismatch")
    return channels


def gabor_system(
    windows: Sequence[Sequence[Signal]],
    translation: Subgroup,
    modulation: Subgroup,
) -> SuperSystemDescriptor:
    """Expand {T_gamma M_chi psi_j} into a single layer on the translation subgroup.

    One generator per (j, chi) pair, window M_chi psi_j, weight 1; chi runs
    over the modulation subgroup in index order, so the expansion is stable.
    """
    group = translation.parent
    if modulation.parent.orders != group.orders:
        raise ValueError("modulation subgroup must live in the dual of the same group")
    channels = _validate_windows(windows, group)
    generators = [
        WeightedGenerator(1.0, tuple(modulate(chi, w) for w in tup))
        for tup in windows
        for chi in modulation.elements()
    ]
    layer = GtiLayer(translation, generators)
    return SuperSystemDescriptor(group, channels, [layer])


def wavelet_system(
    windows: Sequence[Sequence[Signal]],
    automorphisms: Sequence[Automorphism],
    translation: Subgroup,
) -> SuperSystemDescriptor:
    """Expand {D_alpha T_gamma psi_j} into one layer per automorphism.

    The rewrite D_alpha T_gamma = T_{alpha^{-1} gamma} D_alpha turns each
    dilation level into translates of D_alpha psi_j along alpha^{-1}(Gamma).
    """
    group = translation.parent
    if not automorphisms:
        raise ValueError("need at least one automorphism")
    channels = _validate_windows(windows, group)
    layers = []
    for alpha in automorphisms:
        if alpha.parent.orders != group.orders:
            raise ValueError("automorphism group mismatch")
        generators = [
            WeightedGenerator(1.0, tuple(dilate(alpha, w) for w in tup)) for tup in windows
        ]
        layers.append(GtiLayer(alpha.inverse_image(translation), generators))
    return SuperSystemDescriptor(group, channels, layers)


def wavepacket_system(
    windows: Sequence[Sequence[Signal]],
    automorphisms: Sequence[Automorphism],
    translation: Subgroup,
    modulation: Subgroup,
) -> SuperSystemDescriptor:
    """Expand {D_alpha T_gamma M_chi psi_j}: one layer per automorphism with
    generators D_alpha M_chi psi_j over (j, chi), translated along
    alpha^{-1}(Gamma)."""
    group = translation.parent
    if modulation.parent.orders != group.orders:
        raise ValueError("modulation subgroup must live in the dual of the same group")
    if not automorphisms:
        raise ValueError("need at least one automorphism")
    channels = _validate_windows(windows, group)
    layers = []
    for alpha in automorphisms:
        if alpha.parent.orders != group.orders:
            raise ValueError("automorphism group mismatch")
        generators = [
            WeightedGenerator(1.0, tuple(dilate(alpha, modulate(chi, w)) for w in tup))
            for tup in windows
            for chi in modulation.elements()
        ]
        layers.append(GtiLayer(alpha.inverse_image(translation), generators))
    return SuperSystemDescriptor(group, channels, layers)


def restrict_channel(system: SuperSystemDescriptor, channel: int) -> SuperSystemDescriptor:
    """Project onto one channel: keep that window from every generator."""
    if not 0 <= channel < system.channels:
        raise ValueError(f"channel {channel} out of range for {system.channels} channels")
    layers = [
        GtiLayer(
            layer.subgroup,
            [WeightedGenerator(gen.weight, (gen.windows[channel],)) for gen in layer.generators],
        )
        for layer in system.layers
    ]
    return SuperSystemDescriptor(system.group, 1, layers)


def require_matching_structure(f: SuperSystemDescriptor, h: SuperSystemDescriptor) -> None:
    """Check that two descriptors share group, channels, layer subgroups,
    generator counts and weights; raise StructureMismatchError otherwise."""
    if f.group.orders != h.group.orders:
        raise StructureMismatchError(
            f"group mismatch: {f.group} vs {h.group}"
        )
    if f.channels != h.channels:
        raise StructureMismatchError(
            f"channel mismatch: {f.channels} vs {h.channels}"
        )
    if len(f.layers) != len(h.layers):
        raise StructureMismatchError(
            f"layer count mismatch: {len(f.layers)} vs {len(h.layers)}"
        )
    for i, (lf, lh) in enumerate(zip(f.layers, h.layers)):
        if not lf.subgroup.same_set(lh.subgroup):
            raise StructureMismatchError(f"layer {i}: subgroup element sets differ")
        if len(lf.generators) != len(lh.generators):
            raise StructureMismatchError(
                f"layer {i}: generator count mismatch "
                f"({len(lf.generators)} vs {len(lh.generators)})"
            )
        for p, (gf, gh) in enumerate(zip(lf.generators, lh.generators)):
            if gf.weight != gh.weight:
                raise StructureMismatchError(
                    f"layer {i} generator {p}: weights differ ({gf.weight} vs {gh.weight})"
                )
