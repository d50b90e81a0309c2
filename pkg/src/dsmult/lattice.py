"""Synthetic uniform-lattice datasets given by elliptic conjugacy classes.

Each class is a torsion point ``t`` of the compact Cartan in the root-system
frame; a character ``mu`` evaluates at it as ``exp(2 pi i <mu, t>)``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

from .errors import DegenerateClass, OrderInconsistent, SchemaError, ValidationError
from .exact import as_fraction, lcm
from .roots import (
    BUILTIN_ROOT_SYSTEMS,
    RootSystem,
    Vector,
    WeylGroup,
    apply,
    generate_group,
    generate_weyl,
    load_root_system,
    vec,
)

log = logging.getLogger(__name__)

WY_MODES = ("compact-subgroup", "full-subsystem")
DEFAULT_WY_MODE = "compact-subgroup"


@dataclass(frozen=True)
class EllipticClassData:
    label: str
    t: Vector
    order: int
    vol: Fraction
    component_index: int = 1


@dataclass(frozen=True)
class DerivedClassData:
    phi_y: frozenset[int]
    phi_y_pos: tuple[int, ...]
    delta_y: Vector
    w_y: WeylGroup
    d_y: int
    sign: int
    wy_mode: str


@dataclass
class LatticeData:
    root_system: RootSystem
    classes: tuple[EllipticClassData, ...]
    name: str = ""
    warnings: list[str] = field(default_factory=list)

    @property
    def n_gamma(self) -> int:
        return lcm(*(c.order for c in self.classes))

    def with_classes(self, classes: Sequence[EllipticClassData], name: str | None = None) -> "LatticeData":
        return LatticeData(self.root_system, tuple(classes), self.name if name is None else name)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "root_system": self.root_system.to_json(),
            "classes": [
                {
                    "label": c.label,
                    "t": [str(x) for x in c.t],
                    "order": c.order,
                    "vol": str(c.vol),
                    "component_index": c.component_index,
                }
                for c in self.classes
            ],
        }


def root_pairings(rs: RootSystem, t: Sequence) -> list[Fraction]:
    """<a, t> for every root a."""
    return [rs.pair(a, t) for a in rs.roots]


def _resolve_root_system(ref, base_dir: Path | None) -> RootSystem:
    if isinstance(ref, dict):
        return load_root_system(ref)
    if isinstance(ref, str):
        if ref in BUILTIN_ROOT_SYSTEMS:
            return BUILTIN_ROOT_SYSTEMS[ref]()
        path = Path(ref)
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        return load_root_system(path)
    raise SchemaError("root_system must be an object, a builtin name, or a file path")


def load_lattice(source, base_dir: Path | None = None) -> LatticeData:
    """Load a dataset from a path, a JSON string, or an already-parsed dict."""
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        path = Path(source)
        data = json.loads(path.read_text())
        base_dir = path.parent
    elif isinstance(source, str):
        data = json.loads(source)
    else:
        data = source
    if not isinstance(data, dict) or "root_system" not in data or "classes" not in data:
        raise SchemaError("dataset needs 'root_system' and 'classes'")
    rs = _resolve_root_system(data["root_system"], base_dir)
    raw = data["classes"]
    if not isinstance(raw, list) or not raw:
        raise SchemaError("'classes' must be a nonempty list")

    classes = []
    warnings = []
    labels = set()
    for entry in raw:
        try:
            label = str(entry["label"])
            t = vec(entry["t"])
            order = int(entry["order"])
            vol = as_fraction(entry["vol"])
            index = int(entry.get("component_index", 1))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"malformed class entry {entry!r}: {exc}") from exc
        if label in labels:
            raise SchemaError(f"duplicate class label {label!r}")
        labels.add(label)
        if len(t) != rs.rank:
            raise SchemaError(f"class {label!r}: t has length {len(t)}, expected {rs.rank}")
        if order < 1:
            raise SchemaError(f"class {label!r}: order must be positive")
        if vol <= 0:
            raise SchemaError(f"class {label!r}: vol must be positive")
        if index < 1:
            raise SchemaError(f"class {label!r}: component_index must be >= 1")
        pairings = root_pairings(rs, t)
        if any((order * p).denominator != 1 for p in pairings):
            raise OrderInconsistent(f"class {label!r}: order {order} does not kill every <a, t>")
        minimal = lcm(*(p.denominator for p in pairings))
        if minimal != order:
            msg = f"class {label!r}: declared order {order} exceeds the root-level order {minimal}"
            warnings.append(msg)
            log.info(msg)
        classes.append(EllipticClassData(label, t, order, vol, index))
    return LatticeData(rs, tuple(classes), str(data.get("name", "")), warnings)


def derive_class(rs: RootSystem, c: EllipticClassData, wy_mode: str = DEFAULT_WY_MODE) -> DerivedClassData:
    if wy_mode not in WY_MODES:
        raise ValidationError(f"unknown W_y mode {wy_mode!r}")
    pairings = root_pairings(rs, c.t)
    phi_y = frozenset(i for i, p in enumerate(pairings) if p.denominator == 1)
    phi_y_pos = tuple(i for i in rs.positive if i in phi_y)
    delta_y = rs.half_sum(phi_y_pos)
    for i in phi_y_pos:
        if rs.pair(delta_y, rs.roots[i]) == 0:
            raise DegenerateClass(f"class {c.label!r}: <delta_y, a> vanishes on a positive root of Phi_y")
    gens = [i for i in phi_y if i in rs.compact] if wy_mode == "compact-subgroup" else list(phi_y)
    w_y = generate_group(rs, gens)
    d_y = len(phi_y & rs.noncompact)
    exponent = rs.dim_p + d_y
    if exponent % 2:
        raise DegenerateClass(f"class {c.label!r}: d + d_y is odd")
    return DerivedClassData(phi_y, phi_y_pos, delta_y, w_y, d_y, (-1) ** (exponent // 2), wy_mode)


def effective_period(ld: LatticeData, direction: Sequence, weyl_c: WeylGroup | None = None) -> int:
    """lcm over classes and w in W_c of the denominator of <w direction, t>."""
    rs = ld.root_system
    direction = vec(direction)
    weyl_c = weyl_c or generate_weyl(rs, compact_only=True)
    images = {apply(w, direction) for w in weyl_c}
    return lcm(*(rs.pair(v, c.t).denominator for c in ld.classes for v in images))


def bundled_dataset_path(name: str) -> Path:
    return Path(str(resources.files("dsmult") / "data" / f"{name}.json"))


BUNDLED_DATASETS = ("sl2_torsion_free", "sl2_237", "su21_elliptic")


def load_bundled(name: str) -> LatticeData:
    if name not in BUNDLED_DATASETS:
        raise ValidationError(f"unknown bundled dataset {name!r}")
    return load_lattice(bundled_dataset_path(name))
