"""Graded Levi-modules, block morphisms and complexes.

A graded module is a finite map from slots (mu, d) to multiplicity spaces;
mu is a Levi-dominant highest weight and d a degree. A multiplicity space is
represented by its ordered tuple of provenance labels, so its dimension is
the tuple length. Morphisms respect isotypes, so they are stored as one
rational matrix per source slot.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

from lmodule_engine import linalg
from lmodule_engine.errors import InvariantError
from lmodule_engine.parabolics import delta_pairings
from lmodule_engine.root_data import Weight, as_weight, format_weight

logger = logging.getLogger(__name__)

Slot = tuple[Weight, int]

UPPER = "upper"
LOWER = "lower"
PROFILES = (UPPER, LOWER)


def _slot_key(slot: Slot):
    mu, d = slot
    return (d, mu)


@dataclass(frozen=True)
class GradedModule:
    """Finite direct sum of V_mu[-d] with labelled multiplicity spaces."""

    entries: Mapping[Slot, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {
            (as_weight(mu), int(d)): tuple(labels)
            for (mu, d), labels in self.entries.items()
            if labels
        }
        object.__setattr__(self, "entries", dict(sorted(clean.items(), key=lambda kv: _slot_key(kv[0]))))

    def mult(self, mu, d: int) -> int:
        return len(self.entries.get((as_weight(mu), d), ()))

    def labels(self, mu, d: int) -> tuple[str, ...]:
        return self.entries.get((as_weight(mu), d), ())

    def slots(self) -> list[Slot]:
        return list(self.entries)

    def weights(self) -> list[Weight]:
        return sorted({mu for mu, _ in self.entries})

    def degrees(self) -> list[int]:
        return sorted({d for _, d in self.entries})

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def multiplicities(self) -> dict[Slot, int]:
        return {slot: len(labels) for slot, labels in self.entries.items()}

    def shape_equal(self, other: "GradedModule") -> bool:
        """Equal as graded modules, ignoring provenance labels."""
        return self.multiplicities() == other.multiplicities()

    def restrict(self, keep: Callable[[Weight, int], bool]) -> "GradedModule":
        return GradedModule({s: l for s, l in self.entries.items() if keep(*s)})

    def shifted(self, k: int) -> "GradedModule":
        """M[k]: the slot (mu, d) moves to (mu, d - k)."""
        return GradedModule({(mu, d - k): l for (mu, d), l in self.entries.items()})

    def relabel(self, prefix: str) -> "GradedModule":
        return GradedModule(
            {s: tuple(f"{prefix}{x}" for x in l) for s, l in self.entries.items()}
        )

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        parts = []
        for (mu, d), labels in self.entries.items():
            m = len(labels)
            parts.append(f"{m if m > 1 else ''}V{format_weight(mu)}[{-d}]")
        return " + ".join(parts)


def zero_module() -> GradedModule:
    return GradedModule({})


def direct_sum(modules: Iterable[tuple[str, GradedModule]]) -> tuple[GradedModule, dict]:
    """Direct sum with label prefixes.

    Returns the sum and, per summand name, a map slot -> offset of that
    summand's multiplicity space inside the summed slot.
    """
    entries: dict[Slot, tuple[str, ...]] = {}
    offsets: dict[str, dict[Slot, int]] = {}
    for name, mod in modules:
        offsets[name] = {}
        for slot, labels in mod.entries.items():
            have = entries.get(slot, ())
            offsets[name][slot] = len(have)
            entries[slot] = have + tuple(f"{name}:{x}" for x in labels)
    return GradedModule(entries), offsets


@dataclass(frozen=True)
class GradedMorphism:
    """Degree-k map; ``blocks[(mu, d)]`` maps the (mu, d) slot of the source
    to the (mu, d + k) slot of the target. Missing blocks are zero."""

    source: GradedModule
    target: GradedModule
    degree: int = 0
    blocks: Mapping[Slot, linalg.Matrix] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (mu, d), block in self.blocks.items():
            mu = as_weight(mu)
            rows, cols = self.target.mult(mu, d + self.degree), self.source.mult(mu, d)
            block = linalg.as_matrix(block)
            if len(block) != rows or any(len(r) != cols for r in block):
                raise InvariantError(
                    f"block at {format_weight(mu)}, degree {d} has wrong shape for {rows}x{cols}"
                )
            if rows and cols and not linalg.is_zero(block):
                clean[(mu, d)] = block
        object.__setattr__(self, "blocks", dict(sorted(clean.items(), key=lambda kv: _slot_key(kv[0]))))

    def block(self, mu, d: int) -> linalg.Matrix:
        mu = as_weight(mu)
        found = self.blocks.get((mu, d))
        if found is not None:
            return found
        return linalg.zeros(self.target.mult(mu, d + self.degree), self.source.mult(mu, d))

    @property
    def is_zero(self) -> bool:
        return not self.blocks

    def then(self, other: "GradedMorphism") -> "GradedMorphism":
        """other after self."""
        return compose(other, self)

    def __neg__(self) -> "GradedMorphism":
        return GradedMorphism(
            self.source, self.target, self.degree,
            {s: linalg.scale(b, -1) for s, b in self.blocks.items()},
        )

    def __add__(self, other: "GradedMorphism") -> "GradedMorphism":
        if other.degree != self.degree:
            raise InvariantError("cannot add morphisms of different degrees")
        blocks = dict(self.blocks)
        for s, b in other.blocks.items():
            blocks[s] = linalg.add(blocks[s], b) if s in blocks else b
        return GradedMorphism(self.source, self.target, self.degree, blocks)


def zero_morphism(source: GradedModule, target: GradedModule, degree: int = 0) -> GradedMorphism:
    return GradedMorphism(source, target, degree, {})


def identity_morphism(module: GradedModule) -> GradedMorphism:
    return GradedMorphism(
        module, module, 0,
        {s: linalg.identity(len(l)) for s, l in module.entries.items()},
    )


def compose(f: GradedMorphism, g: GradedMorphism) -> GradedMorphism:
    """f after g; composition is block-wise matrix product."""
    blocks = {}
    for (mu, d), gb in g.blocks.items():
        fb = f.blocks.get((mu, d + g.degree))
        if fb is None:
            continue
        blocks[(mu, d)] = linalg.matmul(fb, gb, len(gb[0]))
    return GradedMorphism(g.source, f.target, f.degree + g.degree, blocks)


@dataclass(frozen=True)
class ComplexObject:
    """A graded module with a degree-1 differential squaring to zero."""

    module: GradedModule
    differential: Optional[GradedMorphism] = None

    def __post_init__(self):
        if self.differential is None:
            object.__setattr__(self, "differential", zero_morphism(self.module, self.module, 1))
        d = self.differential
        if d.degree != 1:
            raise InvariantError("differential must have degree 1")
        if not compose(d, d).is_zero:
            raise InvariantError("differential does not square to zero")

    @property
    def is_normal(self) -> bool:
        return self.differential.is_zero


def complex_from_module(module: GradedModule) -> ComplexObject:
    return ComplexObject(module)


@dataclass(frozen=True)
class Normalization:
    """Cohomology of a complex with the chain maps relating them.

    ``projection`` is a chain map C -> H(C) and ``section`` a chain map
    H(C) -> C by cycle representatives; projection after section is the
    identity of H(C).
    """

    module: GradedModule
    projection: GradedMorphism
    section: GradedMorphism


def normal_form(c: ComplexObject) -> Normalization:
    """Split each slot as boundaries + cohomology + complement, exactly."""
    mod, dif = c.module, c.differential
    h_entries: dict[Slot, tuple[str, ...]] = {}
    proj_blocks: dict[Slot, linalg.Matrix] = {}
    sect_blocks: dict[Slot, linalg.Matrix] = {}
    for (mu, d), labels in mod.entries.items():
        m = len(labels)
        out = dif.block(mu, d)
        inn = dif.block(mu, d - 1)
        bounds = linalg.columns(inn, mod.mult(mu, d - 1))
        cycles = linalg.nullspace(out, m)
        units = linalg.columns(linalg.identity(m), m)
        candidates = bounds + cycles + units
        _, pivots = linalg.rref(linalg.from_columns(candidates, m), len(candidates))
        nb, nz = len(bounds), len(cycles)
        chosen = [candidates[p] for p in pivots]
        h_pos = [k for k, p in enumerate(pivots) if nb <= p < nb + nz]
        if not h_pos:
            continue
        basis = linalg.from_columns(chosen, m)
        inv = linalg.inverse(basis)
        h_labels = []
        for k in h_pos:
            vec = chosen[k]
            lead = next(i for i, x in enumerate(vec) if x != 0)
            h_labels.append(labels[lead] if sum(1 for x in vec if x) == 1 else f"[{labels[lead]}]")
        h_entries[(mu, d)] = tuple(h_labels)
        proj_blocks[(mu, d)] = tuple(inv[k] for k in h_pos)
        sect_blocks[(mu, d)] = linalg.from_columns([chosen[k] for k in h_pos], m)
    h = GradedModule(h_entries)
    return Normalization(
        h,
        GradedMorphism(mod, h, 0, proj_blocks),
        GradedMorphism(h, mod, 0, sect_blocks),
    )


def cohomology(c: ComplexObject) -> GradedModule:
    """H(c) as a graded module (with zero differential)."""
    if c.is_normal:
        return c.module
    return normal_form(c).module


def cohomology_dims(c: ComplexObject) -> dict[Slot, int]:
    return cohomology(c).multiplicities()


def induced_map(f: GradedMorphism, c: ComplexObject, d: ComplexObject) -> GradedMorphism:
    """H(f): H(c) -> H(d) for a chain map f: c -> d."""
    nc, nd = normal_form(c), normal_form(d)
    return compose(nd.projection, compose(f, nc.section))


def shift(c: ComplexObject, k: int) -> ComplexObject:
    """c[k], with differential (-1)^k d."""
    mod = c.module.shifted(k)
    sign = -1 if k % 2 else 1
    blocks = {(mu, d - k): linalg.scale(b, sign) for (mu, d), b in c.differential.blocks.items()}
    return ComplexObject(mod, GradedMorphism(mod, mod, 1, blocks))


def truncate_degree(c: ComplexObject, p: int, side: str = "<=") -> ComplexObject:
    """tau^{<=p} or tau^{>p}, returned in normal form."""
    h = cohomology(c)
    if side == "<=":
        return ComplexObject(h.restrict(lambda mu, d: d <= p))
    if side == ">":
        return ComplexObject(h.restrict(lambda mu, d: d > p))
    raise ValueError(f"side must be '<=' or '>', got {side!r}")


def truncation_projection(c: ComplexObject, p: int) -> tuple[ComplexObject, GradedMorphism]:
    """The chain map c -> tau^{>p} c."""
    nf = normal_form(c)
    upper = nf.module.restrict(lambda mu, d: d > p)
    blocks = {s: b for s, b in nf.projection.blocks.items() if s[1] > p}
    return ComplexObject(upper), GradedMorphism(c.module, upper, 0, blocks)


def _negate(m: linalg.Matrix) -> linalg.Matrix:
    return linalg.scale(m, -1)


def cone_shift(f: GradedMorphism, c: ComplexObject, d: ComplexObject) -> ComplexObject:
    """Cone(f)[-1] = c + d[-1] with differential [[d_c, 0], [-f, -d_d]].

    This is the shift by -1 of Cone(f) = c[1] + d with [[-d_c, 0], [f, d_d]].
    The long exact sequence of the triangle is checked on dimensions.
    """
    if f.degree != 0 or f.source != c.module or f.target != d.module:
        raise InvariantError("cone needs a degree-0 map between the given complexes")
    if not (compose(d.differential, f) + -compose(f, c.differential)).is_zero:
        raise InvariantError("cone of a map that is not a chain map")
    total, offsets = direct_sum([("C", c.module), ("D", d.module.shifted(-1))])
    blocks: dict[Slot, linalg.Matrix] = {}
    for (mu, n) in total.slots():
        rows, cols = total.mult(mu, n + 1), total.mult(mu, n)
        mat = [list(r) for r in linalg.zeros(rows, cols)]

        def put(block, r0, c0):
            for i, row in enumerate(block):
                for j, x in enumerate(row):
                    mat[r0 + i][c0 + j] += x

        cm_src = c.module.mult(mu, n)
        cm_tgt = c.module.mult(mu, n + 1)
        if cm_src and cm_tgt:
            put(c.differential.block(mu, n), 0, 0)
        dm_src = d.module.mult(mu, n - 1)
        dm_tgt = d.module.mult(mu, n)
        if cm_src and dm_tgt:
            put(_negate(f.block(mu, n)), cm_tgt, 0)
        if dm_src and dm_tgt:
            put(_negate(d.differential.block(mu, n - 1)), cm_tgt, cm_src)
        if rows and cols:
            blocks[(mu, n)] = tuple(tuple(r) for r in mat)
    result = ComplexObject(total, GradedMorphism(total, total, 1, blocks))
    _check_cone_sequence(f, c, d, result)
    return result


def _check_cone_sequence(f, c, d, cone) -> None:
    hf = induced_map(f, c, d)
    hc, hd, hk = cohomology(c), cohomology(d), cohomology(cone)
    weights = set(hc.weights()) | set(hd.weights()) | set(hk.weights())
    degrees = set(hc.degrees()) | set(hd.degrees()) | set(hk.degrees())
    for mu in weights:
        for n in range(min(degrees, default=0) - 1, max(degrees, default=0) + 2):
            rank_n = linalg.rank(hf.block(mu, n), hc.mult(mu, n))
            rank_prev = linalg.rank(hf.block(mu, n - 1), hc.mult(mu, n - 1))
            expected = (hd.mult(mu, n - 1) - rank_prev) + (hc.mult(mu, n) - rank_n)
            if hk.mult(mu, n) != expected:
                raise InvariantError(
                    f"cone long exact sequence fails at {format_weight(mu)}, degree {n}"
                )


def kept_by_profile(pairings: Mapping[int, object], profile: str) -> bool:
    """Upper keeps when every pairing is >= 0, lower when every one is > 0."""
    if profile == UPPER:
        return all(v >= 0 for v in pairings.values())
    if profile == LOWER:
        return all(v > 0 for v in pairings.values())
    raise ValueError(f"profile must be one of {PROFILES}, got {profile!r}")


def truncate_weight(c: ComplexObject, p, profile: str) -> ComplexObject:
    """Keep the isotypes whose A_P-weight satisfies the profile inequality."""
    keep = {mu for mu in c.module.weights() if kept_by_profile(delta_pairings(mu, p), profile)}
    mod = c.module.restrict(lambda mu, d: mu in keep)
    blocks = {s: b for s, b in c.differential.blocks.items() if s[0] in keep}
    return ComplexObject(mod, GradedMorphism(mod, mod, 1, blocks))


def restrict_morphism(f: GradedMorphism, source: GradedModule, target: GradedModule) -> GradedMorphism:
    """Restrict a morphism to sub-sums made of whole slots."""
    blocks = {
        (mu, d): b
        for (mu, d), b in f.blocks.items()
        if source.mult(mu, d) == f.source.mult(mu, d)
        and target.mult(mu, d + f.degree) == f.target.mult(mu, d + f.degree)
    }
    return GradedMorphism(source, target, f.degree, blocks)
