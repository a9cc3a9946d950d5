"""lmodule-engine: L-modules on reductive Borel-Serre compactifications."""

from __future__ import annotations

__version__ = "0.1.0"

from typing import Optional, Sequence

from lmodule_engine.config import DEFAULT_CAPS, Caps
from lmodule_engine.errors import LmlError
from lmodule_engine.graded_cat import GradedModule, GradedMorphism
from lmodule_engine.lmodule_core import LModule, Perversity, build, validate
from lmodule_engine.microsupport import (
    MicroSupportReport,
    RealFormOracle,
    essential_micro_support,
    micro_support,
)
from lmodule_engine.parabolics import ParabolicIndex, parabolic
from lmodule_engine.root_data import RootSystem, build_root_system


def analyze(
    cartan_type: str,
    lam: Sequence,
    *,
    construction: str = "ic",
    variant: Optional[str] = None,
    oracle: Optional[RealFormOracle] = None,
) -> MicroSupportReport:
    """Build an L-module and compute its essential micro-support.

    Args:
        cartan_type: Type descriptor, e.g. "C2" or "A1xA1".
        lam: Dominant integral highest weight in fundamental-weight coordinates.
        construction: "igstar", "ic" or "wc".
        variant: Perversity ("upper"/"lower") or weight profile.
        oracle: Real-form oracle; split by default.

    Returns:
        MicroSupportReport with the essential elements and c, d.
    """
    rs = build_root_system(cartan_type)
    m = build(rs, lam, construction, variant, oracle)
    return essential_micro_support(m, oracle)


__all__ = [
    "Caps",
    "DEFAULT_CAPS",
    "GradedModule",
    "GradedMorphism",
    "LModule",
    "LmlError",
    "MicroSupportReport",
    "ParabolicIndex",
    "Perversity",
    "RealFormOracle",
    "RootSystem",
    "analyze",
    "build",
    "build_root_system",
    "essential_micro_support",
    "micro_support",
    "parabolic",
    "validate",
]
