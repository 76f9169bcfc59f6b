"""Reading and writing system configurations, signals and coefficient files.

Configurations are JSON documents.  The explicit form lists layers with
subgroup generators and per-generator weighted windows; the structured forms
(`gabor`, `wavelet`, `wavepacket`) hold base windows plus lattice data and
are expanded deterministically through the constructors, so a configuration
round-trips to an identical descriptor.  Complex vectors are stored as
explicit re/im arrays to keep files diffable.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

import numpy as np

from .analysis import CoefficientMap, SuperSignal
from .errors import ConfigError
from .fourier import (
    Signal,
    constant_signal,
    delta_signal,
    indicator_signal,
    random_signal,
)
from .groups import GroupSpec, Subgroup, automorphism_from_matrix, make_group, subgroup_from_generators
from .systems import (
    GtiLayer,
    SuperSystemDescriptor,
    WeightedGenerator,
    gabor_system,
    wavelet_system,
    wavepacket_system,
)


def vector_to_json(values: np.ndarray) -> dict[str, list[float]]:
    arr = np.asarray(values, dtype=np.complex128)
    return {"re": [float(v) for v in arr.real], "im": [float(v) for v in arr.imag]}


def vector_from_json(doc: Any, expected_len: int, where: str) -> np.ndarray:
    if not isinstance(doc, dict) or "re" not in doc or "im" not in doc:
        raise ConfigError(f"{where}: expected an object with 're' and 'im' arrays")
    re, im = doc["re"], doc["im"]
    if len(re) != expected_len or len(im) != expected_len:
        raise ConfigError(
            f"{where}: vector length {len(re)}/{len(im)} does not match group size {expected_len}"
        )
    return np.asarray(re, dtype=float) + 1j * np.asarray(im, dtype=float)


def window_from_value(group: GroupSpec, value: Any, where: str, seed: int = 0) -> Signal:
    """Expand a window entry: explicit re/im object or a shorthand string.

    Shorthands: "delta", "constant", "indicator:<json generator list>",
    "random:<seed>" (bare "random" uses the --seed flag value).
    """
    if isinstance(value, str):
        if value == "delta":
            return delta_signal(group)
        if value == "constant":
            return constant_signal(group)
        if value.startswith("indicator:"):
            try:
                gens = json.loads(value[len("indicator:"):])
                sub = subgroup_from_generators(group, [tuple(g) for g in gens])
            except (json.JSONDecodeError, TypeError, ValueError) as exc:
                raise ConfigError(f"{where}: bad indicator shorthand {value!r}: {exc}") from exc
            return indicator_signal(group, sub)
        if value == "random":
            return random_signal(group, seed)
        if value.startswith("random:"):
            try:
                return random_signal(group, int(value[len("random:"):]))
            except ValueError as exc:
                raise ConfigError(f"{where}: bad random shorthand {value!r}") from exc
        raise ConfigError(f"{where}: unknown window shorthand {value!r}")
    return Signal(group, vector_from_json(value, group.size, where))


def _subgroup_from_doc(group: GroupSpec, gens: Any, where: str) -> Subgroup:
    if not isinstance(gens, list):
        raise ConfigError(f"{where}: expected a list of generator tuples")
    try:
        return subgroup_from_generators(group, [tuple(int(v) for v in g) for g in gens])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: bad subgroup generators: {exc}") from exc


def _windows_from_doc(
    group: GroupSpec, doc: Any, channels: int, where: str, seed: int
) -> list[tuple[Signal, ...]]:
    if not isinstance(doc, list) or not doc:
        raise ConfigError(f"{where}: expected a nonempty list of window tuples")
    out = []
    for j, tup in enumerate(doc):
        if not isinstance(tup, list) or len(tup) != channels:
            raise ConfigError(
                f"{where} entry {j}: expected {channels} channel windows"
            )
        out.append(
            tuple(
                window_from_value(group, w, f"{where} entry {j} channel {n}", seed)
                for n, w in enumerate(tup)
            )
        )
    return out


def parse_config(doc: dict, seed: int = 0) -> SuperSystemDescriptor:
    """Turn a configuration document into a descriptor."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    if "group" not in doc:
        raise ConfigError("configuration is missing the 'group' field")
    try:
        group = make_group(doc["group"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad group field: {exc}") from exc
    if "channels" not in doc:
        raise ConfigError("configuration is missing the 'channels' field")
    channels = int(doc["channels"])

    structured = [k for k in ("gabor", "wavelet", "wavepacket", "layers") if k in doc]
    if len(structured) != 1:
        raise ConfigError(
            "configuration must contain exactly one of 'layers', 'gabor', "
            f"'wavelet', 'wavepacket' (found {structured or 'none'})"
        )
    kind = structured[0]

    if kind == "layers":
        system = _parse_layers(group, channels, doc["layers"], seed)
    elif kind == "gabor":
        sec = doc["gabor"]
        windows = _windows_from_doc(group, sec.get("windows"), channels, "gabor windows", seed)
        translation = _subgroup_from_doc(group, sec.get("translation_generators"),
                                         "gabor translation_generators")
        modulation = _subgroup_from_doc(group, sec.get("modulation_generators"),
                                        "gabor modulation_generators")
        system = gabor_system(windows, translation, modulation)
    elif kind == "wavelet":
        sec = doc["wavelet"]
        windows = _windows_from_doc(group, sec.get("windows"), channels, "wavelet windows", seed)
        autos = _automorphisms_from_doc(group, sec.get("automorphism_matrices"))
        translation = _subgroup_from_doc(group, sec.get("translation_generators"),
                                         "wavelet translation_generators")
        system = wavelet_system(windows, autos, translation)
    else:
        sec = doc["wavepacket"]
        windows = _windows_from_doc(group, sec.get("windows"), channels, "wavepacket windows", seed)
        autos = _automorphisms_from_doc(group, sec.get("automorphism_matrices"))
        translation = _subgroup_from_doc(group, sec.get("translation_generators"),
                                         "wavepacket translation_generators")
        modulation = _subgroup_from_doc(group, sec.get("modulation_generators"),
                                        "wavepacket modulation_generators")
        system = wavepacket_system(windows, autos, translation, modulation)

    if system.channels != channels:
        raise ConfigError(
            f"declared channels={channels} but windows have {system.channels} channels"
        )
    return system


def _automorphisms_from_doc(group: GroupSpec, doc: Any):
    if not isinstance(doc, list) or not doc:
        raise ConfigError("expected a nonempty list of automorphism matrices")
    autos = []
    for i, mat in enumerate(doc):
        try:
            autos.append(automorphism_from_matrix(group, mat))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"automorphism matrix {i}: {exc}") from exc
    return autos


def _parse_layers(group: GroupSpec, channels: int, doc: Any, seed: int) -> SuperSystemDescriptor:
    if not isinstance(doc, list) or not doc:
        raise ConfigError("'layers' must be a nonempty list")
    layers = []
    for j, layer_doc in enumerate(doc):
        sub = _subgroup_from_doc(group, layer_doc.get("subgroup_generators"),
                                 f"layer {j} subgroup_generators")
        gens_doc = layer_doc.get("generators")
        if not isinstance(gens_doc, list) or not gens_doc:
            raise ConfigError(f"layer {j}: 'generators' must be a nonempty list")
        gens = []
        for p, gen_doc in enumerate(gens_doc):
            weight = float(gen_doc.get("weight", 1.0))
            if weight < 0:
                raise ConfigError(f"layer {j} generator {p}: negative weight {weight}")
            windows_doc = gen_doc.get("windows")
            if not isinstance(windows_doc, list) or len(windows_doc) != channels:
                raise ConfigError(
                    f"layer {j} generator {p}: expected {channels} channel windows"
                )
            windows = tuple(
                window_from_value(group, w, f"layer {j} generator {p} window {n}", seed)
                for n, w in enumerate(windows_doc)
            )
            gens.append(WeightedGenerator(weight, windows))
        layers.append(GtiLayer(sub, gens))
    return SuperSystemDescriptor(group, channels, layers)


def descriptor_to_config(system: SuperSystemDescriptor) -> dict:
    """Serialize a descriptor to the explicit layered form."""
    return {
        "group": list(system.group.orders),
        "channels": system.channels,
        "layers": [
            {
                "subgroup_generators": [list(g) for g in layer.subgroup.generators],
                "generators": [
                    {
                        "weight": gen.weight,
                        "windows": [vector_to_json(w.values) for w in gen.windows],
                    }
                    for gen in layer.generators
                ],
            }
            for layer in system.layers
        ],
    }


def load_config(path: str | Path, seed: int = 0) -> tuple[SuperSystemDescriptor, dict]:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(doc, seed=seed), doc


def config_digest(doc: dict) -> str:
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def super_signal_to_json(signals: SuperSignal) -> dict:
    return {
        "group": list(signals.group.orders),
        "channels": [vector_to_json(s.values) for s in signals.channels],
    }


def super_signal_from_json(doc: Any, group: GroupSpec | None = None) -> SuperSignal:
    if not isinstance(doc, dict) or "channels" not in doc:
        raise ConfigError("signals document needs a 'channels' list")
    if group is None:
        if "group" not in doc:
            raise ConfigError("signals document needs a 'group' field")
        group = make_group(doc["group"])
    channels = [
        Signal(group, vector_from_json(ch, group.size, f"signal channel {n}"))
        for n, ch in enumerate(doc["channels"])
    ]
    return SuperSignal(tuple(channels))


def coefficients_to_json(coeffs: CoefficientMap) -> dict:
    return {
        "group": list(coeffs.group.orders),
        "channels": coeffs.channels,
        "layers": [
            {
                "covolume": coeffs.covolumes[j],
                "weights": [float(w) for w in coeffs.weights[j]],
                "entries": [vector_to_json(row) for row in coeffs.entries[j]],
            }
            for j in range(len(coeffs.entries))
        ],
    }


def coefficients_from_json(doc: Any) -> CoefficientMap:
    if not isinstance(doc, dict) or "layers" not in doc:
        raise ConfigError("coefficients document needs a 'layers' list")
    group = make_group(doc["group"])
    entries = []
    covolumes = []
    weights = []
    for j, layer_doc in enumerate(doc["layers"]):
        rows = layer_doc["entries"]
        if not rows:
            raise ConfigError(f"coefficients layer {j} has no entries")
        width = len(rows[0]["re"])
        mat = np.stack(
            [vector_from_json(row, width, f"coefficients layer {j} row {p}")
             for p, row in enumerate(rows)]
        )
        entries.append(mat)
        covolumes.append(int(layer_doc["covolume"]))
        weights.append(np.asarray(layer_doc["weights"], dtype=float))
    return CoefficientMap(group, int(doc.get("channels", 1)), entries, covolumes, weights)
