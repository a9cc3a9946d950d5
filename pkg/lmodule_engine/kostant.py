"""Kostant's theorem for H(n_P^Q; V), as a functor on graded modules."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from lmodule_engine.config import DEFAULT_CAPS, Caps
from lmodule_engine.errors import DominanceError, InvariantError
from lmodule_engine.graded_cat import GradedModule, GradedMorphism
from lmodule_engine.parabolics import ParabolicIndex, nilradical_roots, require_leq
from lmodule_engine.root_data import (
    RootSystem,
    Weight,
    WeylElement,
    _breadth_first,
    act,
    add,
    as_weight,
    dominant_conjugate,
    dot_action,
    format_weight,
    is_dominant,
    is_integral,
    rho,
    sub,
    weyl_dimension,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KostantComponent:
    """One Levi-irreducible piece V_{w.nu} of H(n_P^Q; V_nu), in degree l(w)."""

    w: WeylElement
    weight: Weight
    degree: int


@lru_cache(maxsize=256)
def _coset_reps(
    rs: RootSystem, levi_p: frozenset, levi_q: frozenset, caps: Caps
) -> tuple[WeylElement, ...]:
    r = rho(rs)
    inside = sorted(levi_p)

    # w has no left descent in the Levi of P iff (w rho)_i > 0 there.
    def accept(w: WeylElement) -> bool:
        image = act(w, r)
        return all(image[i] > 0 for i in inside)

    reps = _breadth_first(rs, sorted(levi_q), caps, accept)
    logger.debug("W^{P,Q} for %s, %s in %s: %d elements", sorted(levi_p), sorted(levi_q), rs.descriptor, len(reps))
    return tuple(reps)


def minimal_coset_reps(
    p: ParabolicIndex, q: ParabolicIndex, caps: Caps = DEFAULT_CAPS
) -> list[WeylElement]:
    """W^{P,Q}: w in W_{L_Q} with w^-1(gamma) > 0 for positive roots gamma of L_P.

    Ordered by length, then lexicographically by reduced word.
    """
    require_leq(p, q)
    return list(_coset_reps(p.root_system, p.levi, q.levi, caps))


def length_generating_function(p: ParabolicIndex, q: ParabolicIndex) -> tuple[int, ...]:
    counts = Counter(w.length for w in minimal_coset_reps(p, q))
    return tuple(counts.get(k, 0) for k in range(max(counts) + 1))


def _check_levi_dominant(nu: Sequence, q: ParabolicIndex) -> Weight:
    nu = as_weight(nu)
    rank = q.root_system.rank
    if len(nu) != rank:
        raise DominanceError(f"weight {format_weight(nu)} has {len(nu)} coordinates, {q.root_system.descriptor} needs {rank}")
    if not is_integral(nu) or not is_dominant(q.root_system, nu, q.levi):
        raise DominanceError(
            f"{format_weight(nu)} is not dominant integral for the Levi of {q.label()}"
        )
    return nu


def kostant_cohomology(p: ParabolicIndex, q: ParabolicIndex, nu: Sequence) -> list[KostantComponent]:
    """Components of H(n_P^Q; V_nu) for nu dominant for the Levi of Q."""
    require_leq(p, q)
    nu = _check_levi_dominant(nu, q)
    rs = p.root_system
    out = []
    for w in minimal_coset_reps(p, q):
        mu = dot_action(w, nu, rs)
        if not is_dominant(rs, mu, p.levi):
            raise InvariantError(
                f"{w.label()}.{format_weight(nu)} = {format_weight(mu)} is not Levi-dominant"
            )
        out.append(KostantComponent(w, mu, w.length))
    return out


def kostant_preimage(mu: Sequence, p: ParabolicIndex, q: ParabolicIndex) -> Optional[tuple[Weight, int]]:
    """Inverse of nu -> w.nu: returns (nu, l(w)) or None if mu is not of that form."""
    rs = p.root_system
    x, steps = dominant_conjugate(rs, add(mu, rho(rs)), q.levi)
    if any(x[i] <= 0 for i in q.levi):
        return None
    return sub(x, rho(rs)), steps


def nilpotent_cohomology(module: GradedModule, p: ParabolicIndex, q: ParabolicIndex) -> GradedModule:
    """H(n_P^Q; E) for a graded L_Q-module E, as a graded L_P-module.

    The slot (nu, d) contributes (w.nu, d + l(w)) for each w in W^{P,Q}, with
    the same multiplicity space.
    """
    if p == q:
        return module
    rs = p.root_system
    reps = minimal_coset_reps(p, q)
    entries: dict = {}
    for (nu, d), labels in module.entries.items():
        for w in reps:
            slot = (dot_action(w, nu, rs), d + w.length)
            if slot in entries:
                raise InvariantError(f"two Kostant components land in {format_weight(slot[0])}")
            entries[slot] = labels
    return GradedModule(entries)


def nilpotent_cohomology_morphism(f: GradedMorphism, p: ParabolicIndex, q: ParabolicIndex) -> GradedMorphism:
    """H(n_P^Q; f): blocks are carried along with their slots."""
    if p == q:
        return f
    rs = p.root_system
    reps = minimal_coset_reps(p, q)
    blocks = {}
    for (nu, d), block in f.blocks.items():
        for w in reps:
            blocks[(dot_action(w, nu, rs), d + w.length)] = block
    return GradedMorphism(
        nilpotent_cohomology(f.source, p, q),
        nilpotent_cohomology(f.target, p, q),
        f.degree,
        blocks,
    )


def _as_multiset(components) -> Counter:
    return Counter((c.weight, c.degree) for c in components)


def kostant_transitivity_check(
    p: ParabolicIndex, r: ParabolicIndex, s: ParabolicIndex, nu: Sequence
) -> bool:
    """H(n_P^S; V) == H(n_P^R; H(n_R^S; V)) as multisets of (weight, degree)."""
    require_leq(p, r)
    require_leq(r, s)
    direct = _as_multiset(kostant_cohomology(p, s, nu))
    two_step: Counter = Counter()
    for outer in kostant_cohomology(r, s, nu):
        for inner in kostant_cohomology(p, r, outer.weight):
            two_step[(inner.weight, inner.degree + outer.degree)] += 1
    return direct == two_step


def euler_characteristic(p: ParabolicIndex, q: ParabolicIndex, nu: Sequence) -> int:
    """sum_w (-1)^l(w) dim V_{w.nu}, dimensions for the Levi of P."""
    rs = p.root_system
    return sum(
        (-1) ** c.degree * weyl_dimension(rs, c.weight, p.levi)
        for c in kostant_cohomology(p, q, nu)
    )


def top_degree(p: ParabolicIndex, q: ParabolicIndex) -> int:
    """Largest l(w) over W^{P,Q}; equals dim n_P^Q."""
    top = max(w.length for w in minimal_coset_reps(p, q))
    if top != len(nilradical_roots(p, q)):
        raise InvariantError(f"longest coset representative for {p.label()} in {q.label()} has wrong length")
    return top
