"""Direct, dense-matrix frame computations used as the oracle route.

Everything here works in the time domain from translate tables: analysis and
synthesis operators, the frame operator and its bounds, mixed dual Gramian
matrices, the canonical Gabor dual window, and a multiplexing codec on top
of a certified dual pair.  Synthesis carries the full measure weighting
(covolume per layer, user mass per generator); analysis is the plain
unweighted pairing, so the two compose to the weighted reproduction sum.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .errors import CapExceededError, NotAFrameError, UncertifiedPairError
from .fourier import Signal
from .groups import GroupSpec, Subgroup
from .systems import (
    SuperSystemDescriptor,
    gabor_system,
    require_matching_structure,
)

DEFAULT_CAP = 256


@dataclass(eq=False)
class SuperSignal:
    """An N-channel signal; one entry of the direct-sum space."""

    channels: tuple[Signal, ...]

    def __post_init__(self) -> None:
        self.channels = tuple(self.channels)
        if not self.channels:
            raise ValueError("super signal needs at least one channel")
        orders = self.channels[0].group.orders
        for s in self.channels:
            if s.group.orders != orders:
                raise ValueError("all channels must share one group")

    @property
    def group(self) -> GroupSpec:
        return self.channels[0].group

    @property
    def n_channels(self) -> int:
        return len(self.channels)

    def norm(self) -> float:
        return float(np.sqrt(sum(s.norm() ** 2 for s in self.channels)))

    def stacked(self) -> np.ndarray:
        """Channel-major (N, |G|) matrix of values."""
        return np.stack([s.values for s in self.channels])

    def flattened(self) -> np.ndarray:
        """Channel-major flat vector of length N*|G|."""
        return self.stacked().reshape(-1)

    @classmethod
    def from_stacked(cls, group: GroupSpec, values: np.ndarray) -> "SuperSignal":
        mat = np.asarray(values, dtype=np.complex128).reshape(-1, group.size)
        return cls(tuple(Signal(group, row) for row in mat))


@dataclass(eq=False)
class CoefficientMap:
    """Analysis coefficients indexed by (layer, generator, subgroup element).

    entries[j] has shape (generators, subgroup order).  The measure data used
    at synthesis time (covolume per layer, mass per generator) rides along.
    """

    group: GroupSpec
    channels: int
    entries: list[np.ndarray]
    covolumes: list[int]
    weights: list[np.ndarray]

    def total_size(self) -> int:
        return sum(e.size for e in self.entries)

    def max_abs(self) -> float:
        return max((float(np.abs(e).max()) if e.size else 0.0) for e in self.entries)


@dataclass(frozen=True)
class FrameBounds:
    """Best two-sided energy constants of a system (extreme eigenvalues)."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        if self.lower > self.upper + 1e-12:
            raise ValueError("lower bound exceeds upper bound")

    @property
    def is_frame(self) -> bool:
        # Conditioning-aware zero test for the lower bound.
        return self.lower > 1e-8 * max(self.upper, 1e-300)


def _check_signal_match(system: SuperSystemDescriptor, f: SuperSignal) -> None:
    if f.group.orders != system.group.orders:
        raise ValueError("signal group does not match system group")
    if f.n_channels != system.channels:
        raise ValueError(
            f"signal has {f.n_channels} channels, system expects {system.channels}"
        )


def analysis_coeffs(system: SuperSystemDescriptor, f: SuperSignal) -> CoefficientMap:
    """Plain pairings <f, T_gamma g> summed over channels, no weights applied."""
    _check_signal_match(system, f)
    fmat = f.stacked()
    entries = []
    covolumes = []
    weights = []
    for layer in system.layers:
        table = layer.subgroup.translate_table
        rows = np.empty((len(layer.generators), layer.subgroup.order), dtype=np.complex128)
        for p, gen in enumerate(layer.generators):
            acc = np.zeros(layer.subgroup.order, dtype=np.complex128)
            for n in range(system.channels):
                translates = gen.windows[n].values[table]
                acc += translates.conj() @ fmat[n]
            rows[p] = acc
        entries.append(rows)
        covolumes.append(layer.subgroup.covolume)
        weights.append(np.array([gen.weight for gen in layer.generators], dtype=float))
    return CoefficientMap(system.group, system.channels, entries, covolumes, weights)


def synthesis(system: SuperSystemDescriptor, coeffs: CoefficientMap) -> SuperSignal:
    """Weighted reproduction sum: covolume per layer, mass per generator."""
    if coeffs.group.orders != system.group.orders:
        raise ValueError("coefficient group does not match system group")
    if len(coeffs.entries) != len(system.layers):
        raise ValueError("coefficient layer count does not match system")
    out = np.zeros((system.channels, system.group.size), dtype=np.complex128)
    for j, layer in enumerate(system.layers):
        rows = coeffs.entries[j]
        if rows.shape != (len(layer.generators), layer.subgroup.order):
            raise ValueError(f"coefficient block {j} has shape {rows.shape}, expected "
                             f"({len(layer.generators)}, {layer.subgroup.order})")
        table = layer.subgroup.translate_table
        vol = layer.subgroup.covolume
        for p, gen in enumerate(layer.generators):
            scale = vol * gen.weight
            if scale == 0.0:
                continue
            row = rows[p]
            for n in range(system.channels):
                translates = gen.windows[n].values[table]
                out[n] += scale * (row @ translates)
    return SuperSignal.from_stacked(system.group, out)


def _require_cap(system: SuperSystemDescriptor, cap: int) -> None:
    total = system.channels * system.group.size
    if total > cap:
        raise CapExceededError(
            f"dense operation needs {total} rows, above the cap of {cap}"
        )


def mixed_dual_gramian(
    f_system: SuperSystemDescriptor,
    h_system: SuperSystemDescriptor,
    cap: int = DEFAULT_CAP,
) -> np.ndarray:
    """Dense matrix of the operator that analyzes against the second system
    and synthesizes with the first:

        f  |->  sum_j V_j sum_p w_p sum_gamma <f, T_gamma h_jp> T_gamma g_jp,

    with g from `f_system` and h from `h_system`.  For equal arguments this
    is the frame operator; identity means the pair is dual, zero means the
    systems are orthogonal.
    """
    require_matching_structure(f_system, h_system)
    _require_cap(f_system, cap)
    n = f_system.channels
    size = f_system.group.size
    out = np.zeros((n * size, n * size), dtype=np.complex128)
    for lf, lh in zip(f_system.layers, h_system.layers):
        table = lf.subgroup.translate_table
        vol = lf.subgroup.covolume
        for gf, gh in zip(lf.generators, lh.generators):
            scale = vol * gf.weight
            if scale == 0.0:
                continue
            tg = [gf.windows[c].values[table] for c in range(n)]
            th = [gh.windows[c].values[table] for c in range(n)]
            for n1 in range(n):
                block_row = tg[n1].T
                for n2 in range(n):
                    out[n1 * size:(n1 + 1) * size, n2 * size:(n2 + 1) * size] += (
                        scale * (block_row @ th[n2].conj())
                    )
    return out


def frame_operator_matrix(
    system: SuperSystemDescriptor, cap: int = DEFAULT_CAP
) -> np.ndarray:
    """Dense matrix of synthesis after analysis; Hermitian positive semidefinite."""
    return mixed_dual_gramian(system, system, cap=cap)


def frame_bounds(system: SuperSystemDescriptor, cap: int = DEFAULT_CAP) -> FrameBounds:
    """Extreme eigenvalues of the frame operator."""
    eigs = np.linalg.eigvalsh(frame_operator_matrix(system, cap=cap))
    return FrameBounds(lower=max(0.0, float(eigs[0])), upper=float(eigs[-1]))


def default_tolerance(
    f_system: SuperSystemDescriptor,
    h_system: SuperSystemDescriptor | None = None,
    cap: int = DEFAULT_CAP,
) -> tuple[float, float | None]:
    """Residual tolerance 1e-9 * max(1, B_F * B_H)^(1/2) and the recorded
    Bessel bound; falls back to the raw 1e-9 above the matrix cap."""
    try:
        b_f = frame_bounds(f_system, cap=cap).upper
        if h_system is None or h_system is f_system:
            b_h = b_f
        else:
            b_h = frame_bounds(h_system, cap=cap).upper
    except CapExceededError:
        return 1e-9, None
    return 1e-9 * max(1.0, b_f * b_h) ** 0.5, max(b_f, b_h)


def gramian_identity_residual(matrix: np.ndarray) -> float:
    """Entrywise max deviation from the identity."""
    return float(np.abs(matrix - np.eye(matrix.shape[0])).max())


def gabor_canonical_dual(
    window: Signal,
    translation: Subgroup,
    modulation: Subgroup,
    cap: int = DEFAULT_CAP,
) -> Signal:
    """Solve the frame-operator system S h = g for the single-window case.

    The frame operator of a Gabor layer commutes with its translations and
    modulations, so S^{-1} g generates the canonical dual over the same
    lattice pair.  Raises NotAFrameError when the lower bound vanishes.
    """
    system = gabor_system([[window]], translation, modulation)
    op = frame_operator_matrix(system, cap=cap)
    eigs = np.linalg.eigvalsh(op)
    lower, upper = float(eigs[0]), float(eigs[-1])
    if upper <= 0.0 or lower <= 1e-8 * upper:
        raise NotAFrameError(
            f"gabor system is not a frame (bounds {lower:.3e}, {upper:.3e})"
        )
    dual_values = np.linalg.solve(op, window.values)
    return Signal(window.group, dual_values)


def _certify_pair(
    f_system: SuperSystemDescriptor,
    h_system: SuperSystemDescriptor,
    tol: float | None,
    cap: int,
) -> float:
    matrix = mixed_dual_gramian(f_system, h_system, cap=cap)
    residual = gramian_identity_residual(matrix)
    if tol is None:
        tol, _ = default_tolerance(f_system, h_system, cap=cap)
    if residual > tol:
        raise UncertifiedPairError(
            f"pair is not a certified dual pair (residual {residual:.3e} > tol {tol:.3e})"
        )
    return residual


def multiplex_encode(
    pair: tuple[SuperSystemDescriptor, SuperSystemDescriptor],
    signals: SuperSignal,
    force: bool = False,
    tol: float | None = None,
    cap: int = DEFAULT_CAP,
) -> CoefficientMap:
    """Push N channels through one coefficient stream of the analysis system."""
    f_system, h_system = pair
    if not force:
        _certify_pair(f_system, h_system, tol, cap)
    return analysis_coeffs(f_system, signals)


def multiplex_decode(
    pair: tuple[SuperSystemDescriptor, SuperSystemDescriptor],
    coeffs: CoefficientMap,
    force: bool = False,
    tol: float | None = None,
    cap: int = DEFAULT_CAP,
) -> SuperSignal:
    """Recover all N channels from one coefficient stream via the dual system."""
    f_system, h_system = pair
    if not force:
        _certify_pair(f_system, h_system, tol, cap)
    return synthesis(h_system, coeffs)
