"""Standard parabolic subgroups as subsets of simple roots."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import TYPE_CHECKING, Iterable, Sequence

from lmodule_engine import linalg
from lmodule_engine.config import DEFAULT_CAPS, Caps
from lmodule_engine.errors import OrderingError
from lmodule_engine.root_data import (
    RootCoeffs,
    RootSystem,
    Weight,
    add,
    as_weight,
    is_root,
    pairing,
    rho,
    root_inner,
    root_support,
    root_weight,
    roots_supported_in,
    scaled,
    sub,
)

if TYPE_CHECKING:
    from lmodule_engine.microsupport import RealFormOracle

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParabolicIndex:
    """A standard parabolic P, given by the simple roots of its Levi L_P."""

    levi: frozenset[int]
    rank: int
    root_system: RootSystem = field(compare=False, repr=False)

    @property
    def is_group(self) -> bool:
        return len(self.levi) == self.rank

    @property
    def outside(self) -> tuple[int, ...]:
        """Indices of the simple roots not in the Levi (they give Delta_P)."""
        return tuple(j for j in range(self.rank) if j not in self.levi)

    def leq(self, other: "ParabolicIndex") -> bool:
        return self.levi <= other.levi

    def lt(self, other: "ParabolicIndex") -> bool:
        return self.levi < other.levi

    def sort_key(self) -> tuple:
        return (len(self.levi), tuple(sorted(self.levi)))

    def label(self) -> str:
        if self.is_group:
            return "P=*"
        return "P=[" + ",".join(str(i) for i in sorted(self.levi)) + "]"

    def __repr__(self) -> str:
        return self.label()


@dataclass(frozen=True)
class LeviRealData:
    """Dimensions attached to the Levi quotient of P."""

    dim_D: int
    dim_a: int
    fundamental_compact_dim: int
    fundamental_split_dim: int


def parabolic(rs: RootSystem, levi: Iterable[int]) -> ParabolicIndex:
    levi = frozenset(int(i) for i in levi)
    bad = [i for i in levi if not 0 <= i < rs.rank]
    if bad:
        raise OrderingError(f"simple root indices {bad} out of range for {rs.descriptor}")
    return ParabolicIndex(levi, rs.rank, rs)


def borel(rs: RootSystem) -> ParabolicIndex:
    return parabolic(rs, ())


def whole_group(rs: RootSystem) -> ParabolicIndex:
    return parabolic(rs, range(rs.rank))


def parse_parabolic(rs: RootSystem, text: str) -> ParabolicIndex:
    """Parse "P=[0,1]", "[0]", "0,1", "*" or "P=*"."""
    body = text.strip()
    if body.startswith("P="):
        body = body[2:]
    if body == "*":
        return whole_group(rs)
    body = body.strip("[]").strip()
    if not body:
        return borel(rs)
    try:
        indices = [int(part) for part in body.split(",")]
    except ValueError:
        raise OrderingError(f"cannot parse parabolic {text!r}")
    return parabolic(rs, indices)


def enumerate_parabolics(rs: RootSystem, caps: Caps = DEFAULT_CAPS) -> list[ParabolicIndex]:
    """All 2^rank standard parabolics, by size of Levi then lexicographically."""
    caps.check("rank", rs.rank, f"parabolic poset of {rs.descriptor}")
    out = []
    for size in range(rs.rank + 1):
        for levi in combinations(range(rs.rank), size):
            out.append(parabolic(rs, levi))
    return out


def interval(p: ParabolicIndex, r: ParabolicIndex) -> list[ParabolicIndex]:
    """Parabolics Q with P <= Q <= R, in the standard order."""
    require_leq(p, r)
    free = sorted(r.levi - p.levi)
    out = []
    for size in range(len(free) + 1):
        for extra in combinations(free, size):
            out.append(parabolic(p.root_system, p.levi | set(extra)))
    return sorted(out, key=ParabolicIndex.sort_key)


def require_leq(p: ParabolicIndex, q: ParabolicIndex) -> None:
    if not p.leq(q):
        raise OrderingError(f"{p.label()} is not contained in {q.label()}")


def levi_roots(p: ParabolicIndex) -> tuple[RootCoeffs, ...]:
    """Positive roots of L_P."""
    return roots_supported_in(p.root_system, p.levi)


def nilradical_roots(p: ParabolicIndex, q: ParabolicIndex) -> tuple[RootCoeffs, ...]:
    """Roots of n_P^Q: supported in the Levi of Q but not in that of P."""
    require_leq(p, q)
    return tuple(
        c
        for c in roots_supported_in(p.root_system, q.levi)
        if not root_support(c) <= p.levi
    )


def nilradical_weights(p: ParabolicIndex, q: ParabolicIndex) -> tuple[Weight, ...]:
    rs = p.root_system
    return tuple(root_weight(rs, c) for c in nilradical_roots(p, q))


def xi_restriction(mu: Sequence, p: ParabolicIndex) -> Weight:
    """Orthogonal projection of mu away from the span of the Levi simple roots."""
    rs = p.root_system
    levi = sorted(p.levi)
    mu = as_weight(mu)
    if not levi:
        return mu
    a, d = rs.cartan_matrix, rs.root_scale
    gram = tuple(tuple(Fraction(a[i][j]) * d[j] for j in levi) for i in levi)
    rhs = tuple(d[j] * mu[j] for j in levi)
    coeffs = linalg.solve(gram, rhs, len(levi))
    out = mu
    for c, i in zip(coeffs, levi):
        out = sub(out, scaled(rs.simple_roots[i], c))
    return out


def delta_pairings(mu: Sequence, p: ParabolicIndex) -> dict[int, Fraction]:
    """(xi + rho|a_P, alpha_j) for each simple root alpha_j outside the Levi.

    Computed as the pairing of the projection of mu + rho with alpha_j.
    """
    rs = p.root_system
    proj = xi_restriction(add(mu, rho(rs)), p)
    return {j: rs.root_scale[j] * proj[j] for j in p.outside}


def strongly_orthogonal(rs: RootSystem, c1: RootCoeffs, c2: RootCoeffs) -> bool:
    plus = tuple(x + y for x, y in zip(c1, c2))
    minus = tuple(x - y for x, y in zip(c1, c2))
    if not any(minus):
        return False
    return not is_root(rs, plus) and not is_root(rs, minus)


def maximum_strongly_orthogonal_sets(
    rs: RootSystem, roots: Sequence[RootCoeffs]
) -> list[tuple[RootCoeffs, ...]]:
    """All strongly orthogonal subsets of ``roots`` of maximum size."""
    roots = list(roots)
    if not roots:
        return [()]
    compatible = {
        (i, j): strongly_orthogonal(rs, roots[i], roots[j])
        for i in range(len(roots))
        for j in range(i + 1, len(roots))
    }
    best: list[tuple[int, ...]] = []
    best_size = 0

    def extend(chosen: tuple[int, ...], start: int):
        nonlocal best, best_size
        if len(chosen) > best_size:
            best, best_size = [chosen], len(chosen)
        elif len(chosen) == best_size:
            best.append(chosen)
        for k in range(start, len(roots)):
            if len(chosen) + len(roots) - k < best_size:
                return
            if all(compatible[(i, k)] for i in chosen):
                extend(chosen + (k,), k + 1)

    extend((), 0)
    return [tuple(roots[i] for i in s) for s in best]


def strongly_orthogonal_max(rs: RootSystem, roots: Sequence[RootCoeffs]) -> int:
    return len(maximum_strongly_orthogonal_sets(rs, roots)[0])


def split_levi_data(p: ParabolicIndex) -> LeviRealData:
    """Dimensions for a split group: dim D_P = |Phi+(L_P)| + rank_ss(L_P)."""
    roots = levi_roots(p)
    compact = strongly_orthogonal_max(p.root_system, roots)
    rank_ss = len(p.levi)
    return LeviRealData(
        dim_D=len(roots) + rank_ss,
        dim_a=p.rank - rank_ss,
        fundamental_compact_dim=compact,
        fundamental_split_dim=rank_ss - compact,
    )


def dim_symmetric_space(p: ParabolicIndex, oracle: "RealFormOracle") -> LeviRealData:
    return oracle.levi_real_data(p)


def codimension(p: ParabolicIndex, oracle: "RealFormOracle") -> int:
    """codim X_P = dim D_G - dim D_P."""
    g = whole_group(p.root_system)
    return oracle.levi_real_data(g).dim_D - oracle.levi_real_data(p).dim_D


def orthogonal_roots(rs: RootSystem, roots: Sequence[RootCoeffs], u: Sequence) -> tuple[RootCoeffs, ...]:
    """Roots gamma among ``roots`` with (gamma, u) = 0."""
    return tuple(c for c in roots if pairing(rs, root_weight(rs, c), u) == 0)


def roots_orthogonal_to_set(
    rs: RootSystem, roots: Sequence[RootCoeffs], others: Sequence[RootCoeffs]
) -> tuple[RootCoeffs, ...]:
    return tuple(c for c in roots if all(root_inner(rs, c, o) == 0 for o in others))
