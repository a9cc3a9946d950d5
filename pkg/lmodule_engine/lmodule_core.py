"""L-modules over the poset of standard parabolics and their calculus.

An L-module is a family (E_P, f_PQ): E_P a graded L_P-module in normal form
and f_PQ a degree-1 map H(n_P^Q; E_Q) -> E_P for P < Q, subject to

    sum_{P <= Q <= R} f_PQ o H(n_P^Q; f_QR) = 0.

Since every E_P has zero differential, only chains P < Q < R contribute.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Iterable, Mapping, Optional, Sequence

from lmodule_engine import linalg
from lmodule_engine.errors import DominanceError, InvariantError, LmlError, OrderingError
from lmodule_engine.graded_cat import (
    PROFILES,
    ComplexObject,
    GradedModule,
    GradedMorphism,
    Slot,
    cohomology,
    direct_sum,
    induced_map,
    kept_by_profile,
    normal_form,
    zero_module,
    zero_morphism,
)
from lmodule_engine.kostant import nilpotent_cohomology, nilpotent_cohomology_morphism
from lmodule_engine.parabolics import (
    ParabolicIndex,
    delta_pairings,
    enumerate_parabolics,
    split_levi_data,
    whole_group,
)
from lmodule_engine.root_data import RootSystem, Weight, as_weight, format_weight, is_dominant, is_integral

if TYPE_CHECKING:
    from lmodule_engine.microsupport import RealFormOracle

logger = logging.getLogger(__name__)

IGSTAR = "igstar"
IC = "ic"
WC = "wc"
CONSTRUCTIONS = (IGSTAR, IC, WC)


@dataclass(frozen=True)
class Perversity:
    """Middle perversity: upper floor((k-1)/2) or lower floor((k-2)/2)."""

    variant: str = "upper"

    def __post_init__(self):
        if self.variant not in ("upper", "lower"):
            raise ValueError(f"perversity must be 'upper' or 'lower', got {self.variant!r}")

    def __call__(self, k: int) -> int:
        if self.variant == "upper":
            return (k - 1) // 2
        return (k - 2) // 2


@dataclass(frozen=True)
class LModule:
    """A family (E_P, f_PQ) over a set of strata.

    ``f`` is keyed by pairs (P, Q) with P < Q; missing pairs are zero maps.
    """

    root_system: RootSystem = field(compare=False, repr=False)
    strata: tuple[ParabolicIndex, ...]
    E: Mapping[ParabolicIndex, GradedModule]
    f: Mapping[tuple[ParabolicIndex, ParabolicIndex], GradedMorphism] = field(default_factory=dict)
    construction: str = "custom"
    weight: Optional[Weight] = None
    variant: Optional[str] = None

    def __post_init__(self):
        strata = tuple(sorted(set(self.strata), key=ParabolicIndex.sort_key))
        object.__setattr__(self, "strata", strata)
        known = set(strata)
        extra = [p.label() for p in self.E if p not in known]
        if extra:
            raise OrderingError(f"objects given on {extra}, which are not strata")
        object.__setattr__(self, "E", {p: self.E.get(p, zero_module()) for p in strata})
        maps = {}
        for (p, q), g in self.f.items():
            if p not in known or q not in known or not p.lt(q):
                raise OrderingError(f"gluing map on ({p.label()}, {q.label()}) needs P < Q in the strata")
            if g.degree != 1:
                raise InvariantError(f"f for ({p.label()}, {q.label()}) must have degree 1")
            if not g.source.shape_equal(nilpotent_cohomology(self.E[q], p, q)):
                raise InvariantError(f"f for ({p.label()}, {q.label()}) has the wrong source")
            if not g.target.shape_equal(self.E[p]):
                raise InvariantError(f"f for ({p.label()}, {q.label()}) has the wrong target")
            if not g.is_zero:
                maps[(p, q)] = g
        object.__setattr__(
            self, "f", dict(sorted(maps.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key())))
        )

    def map(self, p: ParabolicIndex, q: ParabolicIndex) -> GradedMorphism:
        found = self.f.get((p, q))
        if found is not None:
            return found
        return zero_morphism(nilpotent_cohomology(self.E[q], p, q), self.E[p], 1)

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for e in self.E.values())

    def with_map(self, p: ParabolicIndex, q: ParabolicIndex, g: GradedMorphism) -> "LModule":
        maps = dict(self.f)
        maps[(p, q)] = g
        return replace(self, f=maps)

    def restricted(self, strata: Iterable[ParabolicIndex]) -> "LModule":
        keep = set(strata)
        return LModule(
            self.root_system,
            tuple(keep),
            {p: e for p, e in self.E.items() if p in keep},
            {k: g for k, g in self.f.items() if k[0] in keep and k[1] in keep},
            self.construction,
            self.weight,
            self.variant,
        )


def _default_strata(rs: RootSystem, strata: Optional[Iterable[ParabolicIndex]]) -> tuple[ParabolicIndex, ...]:
    if strata is None:
        return tuple(enumerate_parabolics(rs))
    return tuple(strata)


def zero_lmodule(rs: RootSystem, strata: Optional[Iterable[ParabolicIndex]] = None) -> LModule:
    return LModule(rs, _default_strata(rs, strata), {}, {}, "zero")


# --- validation ------------------------------------------------------------


@dataclass
class ValidationReport:
    """Nonzero residuals of the axiom, keyed by (P, R)."""

    residuals: dict[tuple[ParabolicIndex, ParabolicIndex], GradedMorphism] = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.residuals and not self.errors

    def locations(self) -> list[str]:
        out = [f"{p.label()} < {r.label()}" for p, r in self.residuals]
        return out + self.errors


def axiom_residual(m: LModule, p: ParabolicIndex, r: ParabolicIndex) -> GradedMorphism:
    """sum over P < Q < R of f_PQ o H(n_P^Q; f_QR), a degree-2 map."""
    source = nilpotent_cohomology(m.E[r], p, r)
    total = zero_morphism(source, m.E[p], 2)
    for q in m.strata:
        if not (p.lt(q) and q.lt(r)):
            continue
        if (p, q) not in m.f or (q, r) not in m.f:
            continue
        inner = nilpotent_cohomology_morphism(m.f[(q, r)], p, q)
        total = total + GradedMorphism(source, m.E[p], 2, _compose_blocks(m.f[(p, q)], inner))
    return total


def _compose_blocks(f: GradedMorphism, g: GradedMorphism) -> dict:
    blocks = {}
    for (mu, d), gb in g.blocks.items():
        fb = f.blocks.get((mu, d + g.degree))
        if fb is not None:
            blocks[(mu, d)] = linalg.matmul(fb, gb, len(gb[0]))
    return blocks


def validate(m: LModule) -> ValidationReport:
    """Check the axiom on every pair P < R; never raises."""
    report = ValidationReport()
    for p in m.strata:
        for r in m.strata:
            if not p.lt(r):
                continue
            try:
                res = axiom_residual(m, p, r)
            except LmlError as exc:
                report.errors.append(f"{p.label()} < {r.label()}: {exc}")
                continue
            if not res.is_zero:
                report.residuals[(p, r)] = res
    if not report.ok:
        logger.warning("L-module fails the axiom at %s", ", ".join(report.locations()))
    return report


# --- stalks and costalks ---------------------------------------------------


@dataclass(frozen=True)
class Stalk:
    """i_P^* as a complex, with the position of each summand H(n_P^R; E_R)."""

    complex: ComplexObject
    offsets: Mapping[str, Mapping[Slot, int]]
    summands: tuple[ParabolicIndex, ...]
    pieces: Mapping[str, GradedModule]


def _require_stratum(m: LModule, p: ParabolicIndex) -> None:
    if p not in m.strata:
        raise OrderingError(f"{p.label()} is not a stratum of this L-module")


def stalk(m: LModule, p: ParabolicIndex) -> Stalk:
    """Total complex of H(n_P^R; E_R) over strata R >= P."""
    _require_stratum(m, p)
    above = tuple(r for r in m.strata if p.leq(r))
    pieces = {r.label(): nilpotent_cohomology(m.E[r], p, r) for r in above}
    total, offsets = direct_sum(pieces.items())
    placements = []
    for r in above:
        for s in above:
            if r.lt(s) and (r, s) in m.f:
                placements.append((s.label(), r.label(), nilpotent_cohomology_morphism(m.f[(r, s)], p, r)))
    diff = place_blocks(total, offsets, total, offsets, 1, placements)
    return Stalk(ComplexObject(total, diff), offsets, above, pieces)


def place_blocks(
    source: GradedModule,
    source_offsets: Mapping[str, Mapping[Slot, int]],
    target: GradedModule,
    target_offsets: Mapping[str, Mapping[Slot, int]],
    degree: int,
    placements: Sequence[tuple[str, str, GradedMorphism]],
) -> GradedMorphism:
    """Assemble a morphism between direct sums from maps between summands."""
    mats: dict[Slot, list[list]] = {}
    for src_name, tgt_name, g in placements:
        for (mu, d), block in g.blocks.items():
            col0 = source_offsets[src_name][(mu, d)]
            row0 = target_offsets[tgt_name][(mu, d + degree)]
            mat = mats.get((mu, d))
            if mat is None:
                mat = [list(r) for r in linalg.zeros(target.mult(mu, d + degree), source.mult(mu, d))]
                mats[(mu, d)] = mat
            for i, row in enumerate(block):
                for j, x in enumerate(row):
                    mat[row0 + i][col0 + j] += x
    return GradedMorphism(source, target, degree, {s: tuple(tuple(r) for r in mat) for s, mat in mats.items()})


def i_star(m: LModule, p: ParabolicIndex) -> ComplexObject:
    """i_P^* m; raises InvariantError when d^2 != 0, i.e. the axiom fails."""
    return stalk(m, p).complex


def i_shriek(m: LModule, p: ParabolicIndex) -> ComplexObject:
    """i_P^! m = (E_P, f_PP), with f_PP = 0 in normal form."""
    _require_stratum(m, p)
    return ComplexObject(m.E[p])


# --- restrictions and extensions -------------------------------------------


def closed_restrict(m: LModule, q: ParabolicIndex) -> LModule:
    """The closed restriction to the strata P <= Q."""
    _require_stratum(m, q)
    return closed_part(m, q)


def closed_part(m: LModule, q: ParabolicIndex) -> LModule:
    return m.restricted(p for p in m.strata if p.leq(q))


def _is_up_closed(sub: Iterable[ParabolicIndex], whole: Iterable[ParabolicIndex]) -> bool:
    sub = set(sub)
    return all(r in sub for p in sub for r in whole if p.leq(r))


def open_restrict(m: LModule, opens: Iterable[ParabolicIndex]) -> LModule:
    """Restriction to an open, i.e. upward closed, set of strata."""
    opens = set(opens)
    if not opens <= set(m.strata) or not _is_up_closed(opens, m.strata):
        raise OrderingError("open restriction needs an upward closed subset of the strata")
    return m.restricted(opens)


def open_pushforward(m: LModule, strata: Iterable[ParabolicIndex]) -> LModule:
    """j_* for an open inclusion: the family extended by zero.

    Stalks of the result at new strata are the link complexes
    sum_{R in W} H(n_P^R; E_R); costalks there vanish.
    """
    strata = tuple(strata)
    if not set(m.strata) <= set(strata) or not _is_up_closed(m.strata, strata):
        raise OrderingError("pushforward needs an open (upward closed) subset of the target strata")
    return LModule(m.root_system, strata, dict(m.E), dict(m.f), m.construction, m.weight, m.variant)


# --- constructions ---------------------------------------------------------


def _check_weight(rs: RootSystem, lam) -> Weight:
    lam = as_weight(lam)
    if len(lam) != rs.rank:
        raise DominanceError(f"weight {format_weight(lam)} has {len(lam)} coordinates, {rs.descriptor} needs {rs.rank}")
    if not is_integral(lam) or not is_dominant(rs, lam):
        raise DominanceError(f"{format_weight(lam)} is not dominant integral")
    return lam


def codimension_of(p: ParabolicIndex, oracle: Optional["RealFormOracle"] = None) -> int:
    """codim X_P = dim D_G - dim D_P, split formula unless an oracle is given."""
    if oracle is not None:
        g = whole_group(p.root_system)
        return oracle.levi_real_data(g).dim_D - oracle.levi_real_data(p).dim_D
    return split_levi_data(whole_group(p.root_system)).dim_D - split_levi_data(p).dim_D


def build_igstar(
    rs: RootSystem, lam: Sequence, strata: Optional[Iterable[ParabolicIndex]] = None
) -> LModule:
    """i_{G*}E: E in degree 0 at G, zero elsewhere."""
    lam = _check_weight(rs, lam)
    strata = _default_strata(rs, strata)
    g = whole_group(rs)
    entries = {g: GradedModule({(lam, 0): ("E",)})} if g in strata else {}
    return LModule(rs, strata, entries, {}, IGSTAR, lam)


def _top_down(rs: RootSystem, strata: Sequence[ParabolicIndex]) -> list[ParabolicIndex]:
    if whole_group(rs) not in strata:
        raise OrderingError("the strata must contain the open stratum G")
    return sorted(strata, key=ParabolicIndex.sort_key, reverse=True)


def _glue_stratum(built: LModule, p: ParabolicIndex, keep_upper) -> tuple[GradedModule, dict]:
    """E_P and the maps f_PR from the link complex of the part already built.

    ``keep_upper(mu, d)`` selects the slots of the link cohomology that move
    into E_P (shifted by one degree); f_PR is the projection onto them.
    """
    extended = open_pushforward(built, built.strata + (p,))
    link = stalk(extended, p)
    nf = normal_form(link.complex)
    upper = nf.module.restrict(keep_upper)
    e_p = upper.shifted(-1)
    maps = {}
    for r in link.summands:
        if r == p:
            continue
        summand = nilpotent_cohomology(built.E[r], p, r)
        offs = link.offsets[r.label()]
        blocks = {}
        for (mu, d), labels in summand.entries.items():
            if not upper.mult(mu, d):
                continue
            full = nf.projection.block(mu, d)
            c0 = offs[(mu, d)]
            blocks[(mu, d)] = tuple(tuple(row[c0:c0 + len(labels)]) for row in full)
        maps[(p, r)] = GradedMorphism(summand, e_p, 1, blocks)
    return e_p, maps


def _build_recursive(
    rs: RootSystem,
    lam: Weight,
    strata: Sequence[ParabolicIndex],
    construction: str,
    variant: str,
    keep_for,
) -> LModule:
    order = _top_down(rs, strata)
    g = order[0]
    built = LModule(rs, (g,), {g: GradedModule({(lam, 0): ("E",)})}, {}, construction, lam, variant)
    for p in order[1:]:
        e_p, maps = _glue_stratum(built, p, keep_for(p))
        entries = dict(built.E)
        entries[p] = e_p
        fmaps = dict(built.f)
        fmaps.update(maps)
        built = LModule(rs, built.strata + (p,), entries, fmaps, construction, lam, variant)
        logger.debug("%s: glued %s, E_P = %s", construction, p.label(), e_p)
    return built


def build_ic(
    rs: RootSystem,
    lam: Sequence,
    perversity: Perversity = Perversity("upper"),
    oracle: Optional["RealFormOracle"] = None,
    strata: Optional[Iterable[ParabolicIndex]] = None,
) -> LModule:
    """Intersection cohomology by descending induction over the strata.

    At each stratum P the link cohomology H(A_P) is cut at p(codim X_P):
    E_P = (tau^{>p} H(A_P))[-1], glued by the projection.
    """
    lam = _check_weight(rs, lam)

    def keep_for(p):
        cut = perversity(codimension_of(p, oracle))
        return lambda mu, d: d > cut

    return _build_recursive(rs, lam, _default_strata(rs, strata), IC, perversity.variant, keep_for)


def build_wc(
    rs: RootSystem,
    lam: Sequence,
    profile: str = "upper",
    strata: Optional[Iterable[ParabolicIndex]] = None,
) -> LModule:
    """Weighted cohomology: as build_ic, cutting by weight instead of degree.

    The isotypes kept by the profile stay in the stalk; the rest move into
    E_P.
    """
    if profile not in PROFILES:
        raise ValueError(f"profile must be one of {PROFILES}, got {profile!r}")
    lam = _check_weight(rs, lam)

    def keep_for(p):
        return lambda mu, d: not kept_by_profile(delta_pairings(mu, p), profile)

    return _build_recursive(rs, lam, _default_strata(rs, strata), WC, profile, keep_for)


def build(
    rs: RootSystem,
    lam: Sequence,
    construction: str,
    variant: Optional[str] = None,
    oracle: Optional["RealFormOracle"] = None,
    strata: Optional[Iterable[ParabolicIndex]] = None,
) -> LModule:
    """Dispatch on the construction name."""
    if construction == IGSTAR:
        return build_igstar(rs, lam, strata)
    if construction == IC:
        return build_ic(rs, lam, Perversity(variant or "upper"), oracle, strata)
    if construction == WC:
        return build_wc(rs, lam, variant or "upper", strata)
    raise ValueError(f"construction must be one of {CONSTRUCTIONS}, got {construction!r}")


def closed_formula_one_stratum(
    rs: RootSystem,
    lam: Sequence,
    p: ParabolicIndex,
    perversity: Perversity = Perversity("upper"),
    oracle: Optional["RealFormOracle"] = None,
) -> LModule:
    """IC on the two strata {P, G} written down directly:
    E_P = (tau^{>p} H(n_P; E))[-1] with f_PG the identity on the kept part.
    """
    lam = _check_weight(rs, lam)
    g = whole_group(rs)
    e_g = GradedModule({(lam, 0): ("E",)})
    kostant = nilpotent_cohomology(e_g, p, g)
    cut = perversity(codimension_of(p, oracle))
    kept = kostant.restrict(lambda mu, d: d > cut)
    e_p = kept.shifted(-1)
    blocks = {slot: linalg.identity(len(labels)) for slot, labels in kept.entries.items()}
    f = GradedMorphism(kostant, e_p, 1, blocks)
    return LModule(rs, (p, g), {g: e_g, p: e_p}, {(p, g): f}, IC, lam, perversity.variant)


# --- the short exact sequence of a pair ------------------------------------


@dataclass
class SESReport:
    """Dimensions around 0 -> i_P^* i_Q^! m -> i_P^* m -> i_P^* j_* j^* m -> 0.

    ``rows`` has one entry per (weight, degree) with the cohomology
    dimensions of the three terms and the ranks of the three maps of the
    long exact sequence.
    """

    p: ParabolicIndex
    q: ParabolicIndex
    rows: list[dict] = field(default_factory=list)
    exact: bool = True


def summand_map(src: Stalk, tgt: Stalk, names: Iterable[str]) -> GradedMorphism:
    """Identity between the named summands of two stalks, zero elsewhere.

    A summand that is zero in the target (E_P in the pushforward stalk)
    gets no block.
    """
    placements = []
    for name in names:
        piece = tgt.pieces.get(name)
        if piece is None or piece.is_zero:
            continue
        placements.append((name, name, _identity_on(piece)))
    return place_blocks(src.complex.module, src.offsets, tgt.complex.module, tgt.offsets, 0, placements)


def _identity_on(module: GradedModule) -> GradedMorphism:
    return GradedMorphism(
        module, module, 0, {s: linalg.identity(len(l)) for s, l in module.entries.items()}
    )


def _composite_is_zero(f: GradedMorphism, g: GradedMorphism) -> bool:
    return all(linalg.is_zero(b) for b in _compose_blocks(f, g).values())


def ses_of_pair(m: LModule, p: ParabolicIndex, q: ParabolicIndex) -> SESReport:
    """Build the three stalk complexes and the maps between them, check the
    sequence is short exact degreewise and record the long exact sequence."""
    _require_stratum(m, p)
    if not p.leq(q):
        raise OrderingError(f"{p.label()} is not contained in {q.label()}")
    sub = stalk(closed_part(m, q), p)
    mid = stalk(m, p)
    rest = m.restricted(r for r in m.strata if not r.leq(q))
    quot = stalk(open_pushforward(rest, rest.strata + (p,)), p)

    incl = summand_map(sub, mid, sub.pieces)
    proj = summand_map(mid, quot, quot.pieces)
    for g, a, b in ((incl, sub, mid), (proj, mid, quot)):
        chain = (
            GradedMorphism(a.complex.module, b.complex.module, 1, _compose_blocks(b.complex.differential, g))
            + -GradedMorphism(a.complex.module, b.complex.module, 1, _compose_blocks(g, a.complex.differential))
        )
        if not chain.is_zero:
            raise InvariantError("maps of the pair sequence are not chain maps")
    if not _composite_is_zero(proj, incl):
        raise InvariantError("composite of the pair sequence is not zero")
    for slot, n in mid.complex.module.multiplicities().items():
        if sub.complex.module.mult(*slot) + quot.complex.module.mult(*slot) != n:
            raise InvariantError(f"pair sequence is not short exact at {format_weight(slot[0])}, degree {slot[1]}")

    h_incl = induced_map(incl, sub.complex, mid.complex)
    h_proj = induced_map(proj, mid.complex, quot.complex)
    hs, hm, hq = cohomology(sub.complex), cohomology(mid.complex), cohomology(quot.complex)
    report = SESReport(p, q)
    weights = sorted(set(hs.weights()) | set(hm.weights()) | set(hq.weights()))
    degrees = set(hs.degrees()) | set(hm.degrees()) | set(hq.degrees())
    lo, hi = min(degrees, default=0), max(degrees, default=-1)

    def rank_of(g, src, mu, n):
        return linalg.rank(g.block(mu, n), src.mult(mu, n)) if src.mult(mu, n) else 0

    for mu in weights:
        for n in range(lo, hi + 1):
            ri, rp = rank_of(h_incl, hs, mu, n), rank_of(h_proj, hm, mu, n)
            connecting = hq.mult(mu, n) - rp
            next_kernel = hs.mult(mu, n + 1) - rank_of(h_incl, hs, mu, n + 1)
            ok = hm.mult(mu, n) - rp == ri and connecting == next_kernel
            if not ok:
                report.exact = False
            if hs.mult(mu, n) or hm.mult(mu, n) or hq.mult(mu, n):
                report.rows.append({
                    "weight": mu,
                    "degree": n,
                    "dims": (hs.mult(mu, n), hm.mult(mu, n), hq.mult(mu, n)),
                    "ranks": (ri, rp, connecting),
                })
    if not report.exact:
        raise InvariantError(f"long exact sequence of the pair ({p.label()}, {q.label()}) is not exact")
    return report
