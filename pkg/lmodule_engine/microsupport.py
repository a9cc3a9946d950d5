"""Micro-support, essential micro-support and the degree bounds they give.

For V an irreducible L_P-module with highest weight mu, the signs of
(xi_V + rho, alpha) over the simple roots alpha outside the Levi cut out two
parabolics Q_V <= Q_V' above P. V lies in the micro-support of m when it
passes the duality test and some Q between them has H(i_P^* i_Q^! m)_V != 0.
Type_V(m) is the image of the V-isotypic part for Q_V in that for Q_V'.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

from lmodule_engine import linalg
from lmodule_engine.config import DEFAULT_CAPS, Caps
from lmodule_engine.errors import FormatError, InvariantError, OracleModeError, OrderingError
from lmodule_engine.graded_cat import GradedModule, Normalization, compose, normal_form
from lmodule_engine.kostant import minimal_coset_reps, nilpotent_cohomology
from lmodule_engine.lmodule_core import (
    IC,
    WC,
    LModule,
    Perversity,
    Stalk,
    build,
    build_ic,
    build_igstar,
    closed_part,
    codimension_of,
    stalk,
    summand_map,
)
from lmodule_engine.parabolics import (
    LeviRealData,
    ParabolicIndex,
    delta_pairings,
    enumerate_parabolics,
    interval,
    levi_roots,
    maximum_strongly_orthogonal_sets,
    nilradical_roots,
    orthogonal_roots,
    parabolic,
    roots_orthogonal_to_set,
    split_levi_data,
    strongly_orthogonal_max,
    whole_group,
    xi_restriction,
)
from lmodule_engine.root_data import (
    RootCoeffs,
    RootSystem,
    Weight,
    WeylElement,
    act,
    add,
    as_weight,
    dot_action,
    format_weight,
    longest_element,
    sub,
    weyl_enumerate,
)

logger = logging.getLogger(__name__)

SPLIT = "split"
TABLE = "table"
ORACLE_MODES = (SPLIT, TABLE)

# Families for which IC is known to be micro-pure.
HYPOTHESIS_FAMILIES = frozenset({"A", "B", "C", "BC", "G"})


# --- real-form oracle ------------------------------------------------------


@dataclass(frozen=True)
class CentralizerData:
    """L_P(u) for u a highest weight: its positive roots and two dimensions."""

    roots: tuple[RootCoeffs, ...]
    dim_D: int
    dim_n: int
    ordering_vacuous: bool = True


@lru_cache(maxsize=256)
def _levi_longest(rs: RootSystem, levi: frozenset) -> WeylElement:
    return longest_element(rs, sorted(levi))


@lru_cache(maxsize=256)
def _levi_group(rs: RootSystem, levi: frozenset) -> tuple[WeylElement, ...]:
    return tuple(weyl_enumerate(rs, sorted(levi)))


def _is_even(x: Fraction) -> bool:
    return (Fraction(x) / 2).denominator == 1


class RealFormOracle:
    """Answers the questions about the real form that the root datum cannot.

    In SPLIT mode everything is computed from the roots. In TABLE mode the
    Levi dimensions and the duality involution come from a user table, and
    centralizer queries are refused.
    """

    def __init__(
        self,
        mode: str = SPLIT,
        records: Optional[Mapping[frozenset, dict]] = None,
        source: Optional[str] = None,
    ):
        if mode not in ORACLE_MODES:
            raise OracleModeError(f"unknown oracle mode {mode!r}; expected one of {ORACLE_MODES}")
        self.mode = mode
        self.records = dict(records or {})
        self.source = source

    @classmethod
    def split(cls) -> "RealFormOracle":
        return cls(SPLIT)

    @classmethod
    def from_table(cls, path: Union[str, Path], rs: RootSystem) -> "RealFormOracle":
        """Load per-parabolic records from a JSON table.

        The file looks like ``{"type": "C2", "records": [{"levi": [0],
        "dim_D": 2, "dim_a": 1, "fundamental_compact_dim": 1,
        "fundamental_split_dim": 0, "involution": [[1, 0], [0, 1]]}]}``.
        """
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise FormatError(f"cannot read oracle table {path}: {exc}")
        if data.get("type") != rs.descriptor:
            raise FormatError(f"oracle table {path} is for {data.get('type')!r}, not {rs.descriptor!r}")
        records = {}
        for n, raw in enumerate(data.get("records", [])):
            try:
                levi = frozenset(int(i) for i in raw["levi"])
                rec = {
                    "data": LeviRealData(
                        dim_D=int(raw["dim_D"]),
                        dim_a=int(raw["dim_a"]),
                        fundamental_compact_dim=int(raw["fundamental_compact_dim"]),
                        fundamental_split_dim=int(raw["fundamental_split_dim"]),
                    ),
                    "involution": tuple(tuple(int(x) for x in row) for row in raw["involution"]),
                }
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"oracle table {path}, record {n}: {exc}")
            inv = rec["involution"]
            if len(inv) != rs.rank or any(len(row) != rs.rank for row in inv):
                raise FormatError(f"oracle table {path}, record {n}: involution must be {rs.rank}x{rs.rank}")
            records[levi] = rec
        logger.debug("loaded %d oracle records from %s", len(records), path)
        return cls(TABLE, records, str(path))

    def _record(self, p: ParabolicIndex) -> dict:
        rec = self.records.get(p.levi)
        if rec is None:
            raise OracleModeError(f"oracle table has no record for {p.label()}")
        return rec

    def levi_real_data(self, p: ParabolicIndex) -> LeviRealData:
        if self.mode == SPLIT:
            return split_levi_data(p)
        return self._record(p)["data"]

    def equal_rank(self, rs: RootSystem) -> bool:
        return self.levi_real_data(whole_group(rs)).fundamental_split_dim == 0

    def duality_test(self, mu: Sequence, p: ParabolicIndex) -> bool:
        """Whether V_mu restricted to M_P is isomorphic to its conjugate dual.

        SPLIT: conjugation is trivial, and the test is that mu + w0(mu), w0
        the longest element of the Levi, lies in twice the character lattice
        of L_P/[L_P, L_P].
        """
        mu = as_weight(mu)
        rs = p.root_system
        if self.mode == TABLE:
            inv = self._record(p)["involution"]
            m_part = sub(mu, xi_restriction(mu, p))
            image = tuple(sum((Fraction(a) * x for a, x in zip(row, m_part)), Fraction(0)) for row in inv)
            return image == m_part
        total = add(mu, act(_levi_longest(rs, p.levi), mu))
        if any(total[i] != 0 for i in p.levi):
            return False
        return all(_is_even(total[j]) for j in p.outside)

    def strongly_orthogonal_max(self, rs: RootSystem, roots: Sequence[RootCoeffs]) -> int:
        return strongly_orthogonal_max(rs, roots)

    def centralizer(self, u: Sequence, p: ParabolicIndex) -> CentralizerData:
        """Roots of L_P(u), dim D_P(u) and dim n_P(u).

        dim D_P(u) = dim b_{P,p} + |Psi+| + f_c(Psi), maximized over the
        W_{L_P}-orbit of u. dim n_P(u) does not depend on u: it is the largest
        count over strongly orthogonal sets of the whole Levi, a lower bound
        for every u, and 0 when the group is not of equal rank.
        """
        if self.mode != SPLIT:
            raise OracleModeError("centralizers are only available in split mode")
        rs = p.root_system
        u = as_weight(u)
        data = split_levi_data(p)
        candidates = []
        seen = set()
        for v in _levi_group(rs, p.levi):
            image = act(v, u)
            if image in seen:
                continue
            seen.add(image)
            psi = orthogonal_roots(rs, levi_roots(p), image)
            candidates.append((data.fundamental_split_dim + len(psi) + strongly_orthogonal_max(rs, psi), psi))
        values = {dim for dim, _ in candidates}
        if len(values) > 1:
            logger.warning(
                "ordering maximization for %s at %s is not vacuous: %s",
                format_weight(u), p.label(), sorted(values),
            )
        own = orthogonal_roots(rs, levi_roots(p), u)
        return CentralizerData(
            roots=own,
            dim_D=max(values),
            dim_n=self._dim_n(p),
            ordering_vacuous=len(values) == 1,
        )

    def _dim_n(self, p: ParabolicIndex) -> int:
        """Independent of u; see centralizer."""
        rs = p.root_system
        if not self.equal_rank(rs):
            return 0
        nil = nilradical_roots(p, whole_group(rs))
        return max(
            len(roots_orthogonal_to_set(rs, nil, s))
            for s in maximum_strongly_orthogonal_sets(rs, levi_roots(p))
        )


SPLIT_ORACLE = RealFormOracle.split()


def duality_condition(mu: Sequence, p: ParabolicIndex, oracle: Optional[RealFormOracle] = None) -> bool:
    return (oracle or SPLIT_ORACLE).duality_test(mu, p)


def centralizer_data(u: Sequence, p: ParabolicIndex, oracle: Optional[RealFormOracle] = None) -> CentralizerData:
    return (oracle or SPLIT_ORACLE).centralizer(u, p)


# --- Q_V, Q_V' and Type_V ----------------------------------------------------


def sign_parabolics(mu: Sequence, p: ParabolicIndex) -> tuple[ParabolicIndex, ParabolicIndex]:
    """(Q_V, Q_V'): P enlarged by the alpha with (xi_V + rho, alpha) < 0, resp. <= 0."""
    pairs = delta_pairings(mu, p)
    strict = {j for j, v in pairs.items() if v < 0}
    weak = {j for j, v in pairs.items() if v <= 0}
    rs = p.root_system
    return parabolic(rs, p.levi | strict), parabolic(rs, p.levi | weak)


class _LocalCohomology:
    """H(i_P^* i_Q^! m) for one P, computed once per Q."""

    def __init__(self, m: LModule, p: ParabolicIndex):
        self.m = m
        self.p = p
        self._stalks: dict[frozenset, Stalk] = {}
        self._normal: dict[frozenset, Normalization] = {}

    def stalk(self, q: ParabolicIndex) -> Stalk:
        if q.levi not in self._stalks:
            self._stalks[q.levi] = stalk(closed_part(self.m, q), self.p)
        return self._stalks[q.levi]

    def normal(self, q: ParabolicIndex) -> Normalization:
        if q.levi not in self._normal:
            self._normal[q.levi] = normal_form(self.stalk(q).complex)
        return self._normal[q.levi]

    def has_weight(self, q: ParabolicIndex, mu: Weight) -> bool:
        return any(w == mu for w in self.normal(q).module.weights())

    def image_ranks(self, q: ParabolicIndex, q2: ParabolicIndex, mu: Weight) -> dict[int, int]:
        """Ranks, per degree, of the V_mu part of H(i_P^* i_Q^! m) -> H(i_P^* i_Q'^! m)."""
        small, big = self.normal(q), self.normal(q2)
        src = small.module
        if q == q2:
            return {d: src.mult(mu, d) for w, d in src.slots() if w == mu}
        incl = summand_map(self.stalk(q), self.stalk(q2), self.stalk(q).pieces)
        induced = compose(big.projection, compose(incl, small.section))
        out = {}
        for w, d in src.slots():
            if w != mu:
                continue
            r = linalg.rank(induced.block(mu, d), src.mult(mu, d))
            if r:
                out[d] = r
        return out


def _interval_of(ranks: Mapping[int, int]) -> Optional[tuple[int, int]]:
    degrees = [d for d, r in ranks.items() if r]
    if not degrees:
        return None
    return min(degrees), max(degrees)


def type_v(
    m: LModule, p: ParabolicIndex, mu: Sequence, oracle: Optional[RealFormOracle] = None
) -> tuple[Optional[tuple[int, int]], dict[int, int]]:
    """Degree span of Type_V(m) and the ranks per degree; (None, {}) when zero.

    The duality condition is not consulted here.
    """
    mu = as_weight(mu)
    q_v, q_vp = sign_parabolics(mu, p)
    ranks = _LocalCohomology(m, p).image_ranks(q_v, q_vp, mu)
    return _interval_of(ranks), ranks


# --- micro-support -----------------------------------------------------------


@dataclass(frozen=True)
class MicroSupportElement:
    p: ParabolicIndex
    weight: Weight
    xi: Weight
    q_v: ParabolicIndex
    q_v_prime: ParabolicIndex
    duality: bool
    witnesses: tuple[ParabolicIndex, ...] = ()
    type_ranks: tuple[tuple[int, int], ...] = ()
    type_interval: Optional[tuple[int, int]] = None
    kostant_word: Optional[str] = None
    kostant_length: Optional[int] = None
    dim_D: Optional[int] = None
    dim_D_V: Optional[int] = None
    c_tilde: Optional[Fraction] = None
    d_tilde: Optional[Fraction] = None

    @property
    def essential(self) -> bool:
        return self.type_interval is not None

    def sort_key(self) -> tuple:
        return (self.p.sort_key(), self.weight)


@dataclass
class MicroSupportReport:
    """Elements sorted by (P, weight); c and d are None when emS is empty."""

    elements: list[MicroSupportElement] = field(default_factory=list)
    c: Optional[Fraction] = None
    d: Optional[Fraction] = None
    provenance: dict = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)

    @property
    def essential(self) -> list[MicroSupportElement]:
        return [e for e in self.elements if e.essential]

    @property
    def vanishes(self) -> bool:
        return self.c is None

    @property
    def parity_ok(self) -> bool:
        return not any(f.startswith("parity") for f in self.flags)


def _kostant_origins(m: LModule, p: ParabolicIndex) -> dict[Weight, WeylElement]:
    if m.weight is None:
        return {}
    rs = m.root_system
    return {dot_action(w, m.weight, rs): w for w in minimal_coset_reps(p, whole_group(rs))}


def _provenance(m: LModule, oracle: RealFormOracle) -> dict:
    return {
        "type": m.root_system.descriptor,
        "construction": m.construction,
        "variant": m.variant,
        "weight": None if m.weight is None else format_weight(m.weight),
        "oracle": oracle.mode,
        "strata": len(m.strata),
    }


def micro_support(m: LModule, oracle: Optional[RealFormOracle] = None) -> MicroSupportReport:
    """mS(m), each element carrying its Type_V and, when essential, c~ and d~."""
    oracle = oracle or SPLIT_ORACLE
    report = MicroSupportReport(provenance=_provenance(m, oracle))
    for p in m.strata:
        local = _LocalCohomology(m, p)
        candidates = sorted(set(stalk(m, p).complex.module.weights()))
        origins = _kostant_origins(m, p)
        for mu in candidates:
            q_v, q_vp = sign_parabolics(mu, p)
            witnesses = tuple(q for q in interval(q_v, q_vp) if local.has_weight(q, mu))
            if not witnesses:
                continue
            duality = oracle.duality_test(mu, p)
            if not duality:
                logger.debug("%s at %s fails the duality test", format_weight(mu), p.label())
                continue
            ranks = local.image_ranks(q_v, q_vp, mu)
            span = _interval_of(ranks)
            if span is not None and q_v not in witnesses:
                raise InvariantError(f"Type of {format_weight(mu)} at {p.label()} is nonzero outside mS")
            w = origins.get(mu)
            report.elements.append(
                MicroSupportElement(
                    p=p,
                    weight=mu,
                    xi=xi_restriction(mu, p),
                    q_v=q_v,
                    q_v_prime=q_vp,
                    duality=duality,
                    witnesses=witnesses,
                    type_ranks=tuple(sorted(ranks.items())),
                    type_interval=span,
                    kostant_word=None if w is None else w.label(),
                    kostant_length=None if w is None else w.length,
                )
            )
        logger.debug("micro-support at %s: %d candidates", p.label(), len(candidates))
    report.elements.sort(key=MicroSupportElement.sort_key)
    return degree_bounds(report, oracle)


def essential_micro_support(m: LModule, oracle: Optional[RealFormOracle] = None) -> MicroSupportReport:
    full = micro_support(m, oracle)
    full.elements = full.essential
    return full


def degree_bounds(report: MicroSupportReport, oracle: Optional[RealFormOracle] = None) -> MicroSupportReport:
    """Fill in c~ = (dim D_P - dim D_P(V))/2 + c and d~ = (dim D_P + dim D_P(V))/2 + d.

    A half-integer bound is flagged on the report, never rounded.
    """
    oracle = oracle or SPLIT_ORACLE
    updated = []
    for e in report.elements:
        if not e.essential:
            updated.append(e)
            continue
        dim_d = oracle.levi_real_data(e.p).dim_D
        try:
            dim_dv = oracle.centralizer(e.weight, e.p).dim_D
        except OracleModeError as exc:
            report.flags.append(f"centralizer unavailable at {e.p.label()}: {exc}")
            updated.append(e)
            continue
        lo, hi = e.type_interval
        c_t = Fraction(dim_d - dim_dv, 2) + lo
        d_t = Fraction(dim_d + dim_dv, 2) + hi
        if c_t.denominator != 1 or d_t.denominator != 1:
            report.flags.append(f"parity: half-integer bound at {e.p.label()}, {format_weight(e.weight)}")
            logger.warning("half-integer degree bound at %s, %s", e.p.label(), format_weight(e.weight))
        updated.append(_with_bounds(e, dim_d, dim_dv, c_t, d_t))
    report.elements = updated
    lows = [e.c_tilde for e in updated if e.c_tilde is not None]
    highs = [e.d_tilde for e in updated if e.d_tilde is not None]
    report.c = min(lows) if lows else None
    report.d = max(highs) if highs else None
    return report


def _with_bounds(e: MicroSupportElement, dim_d: int, dim_dv: int, c_t: Fraction, d_t: Fraction) -> MicroSupportElement:
    return MicroSupportElement(
        p=e.p,
        weight=e.weight,
        xi=e.xi,
        q_v=e.q_v,
        q_v_prime=e.q_v_prime,
        duality=e.duality,
        witnesses=e.witnesses,
        type_ranks=e.type_ranks,
        type_interval=e.type_interval,
        kostant_word=e.kostant_word,
        kostant_length=e.kostant_length,
        dim_D=dim_d,
        dim_D_V=dim_dv,
        c_tilde=c_t,
        d_tilde=d_t,
    )


# --- i_{G*}E in closed form and the vanishing bound ---------------------------


def closed_form_igstar(
    rs: RootSystem, lam: Sequence, oracle: Optional[RealFormOracle] = None
) -> list[tuple[ParabolicIndex, Weight, int]]:
    """emS(i_{G*}E) without building anything.

    (P, w.lam, l(w)) for w in W^P with (w(lam + rho), alpha) < 0 for every
    alpha outside the Levi and w.lam passing the duality test.
    """
    oracle = oracle or SPLIT_ORACLE
    lam = as_weight(lam)
    g = whole_group(rs)
    out = []
    for p in enumerate_parabolics(rs):
        for w in minimal_coset_reps(p, g):
            mu = dot_action(w, lam, rs)
            if all(v < 0 for v in delta_pairings(mu, p).values()) and oracle.duality_test(mu, p):
                out.append((p, mu, w.length))
    return sorted(out, key=lambda t: (t[0].sort_key(), t[1]))


def igstar_matches_closed_form(rs: RootSystem, lam: Sequence, oracle: Optional[RealFormOracle] = None) -> bool:
    report = essential_micro_support(build_igstar(rs, lam), oracle)
    got = [(e.p, e.weight, e.type_interval) for e in report.elements]
    expected = [(p, mu, (n, n)) for p, mu, n in closed_form_igstar(rs, lam, oracle)]
    if got != expected:
        logger.warning("emS(i_G*E) for %s differs from the closed form", format_weight(as_weight(lam)))
    return got == expected


@dataclass(frozen=True)
class VanishingBound:
    """c(i_{G*}E) against half the dimension of X."""

    dim_X: int
    half_dim_X: Fraction
    refined: Fraction
    equal_rank: bool
    c: Optional[Fraction]
    d: Optional[Fraction]
    report: Optional[MicroSupportReport] = field(default=None, compare=False, repr=False)

    @property
    def holds(self) -> bool:
        return self.c is None or self.c >= self.refined


def vanishing_bound(rs: RootSystem, lam: Sequence, oracle: Optional[RealFormOracle] = None) -> VanishingBound:
    """Compare c(i_{G*}E) with (dim X - (rank - rank K))/2.

    For equal-rank groups rank K = rank and the bound is dim X / 2.
    """
    oracle = oracle or SPLIT_ORACLE
    g = whole_group(rs)
    data = oracle.levi_real_data(g)
    if oracle.mode == SPLIT and data.dim_D != len(rs.positive_root_coeffs) + rs.rank:
        raise InvariantError(f"dim X for {rs.descriptor} is not |Phi+| + rank")
    report = essential_micro_support(build_igstar(rs, lam), oracle)
    return VanishingBound(
        dim_X=data.dim_D,
        half_dim_X=Fraction(data.dim_D, 2),
        refined=Fraction(data.dim_D - data.fundamental_split_dim, 2),
        equal_rank=data.fundamental_split_dim == 0,
        c=report.c,
        d=report.d,
        report=report,
    )


# --- lemma scan --------------------------------------------------------------


@dataclass(frozen=True)
class LemmaViolation:
    p: ParabolicIndex
    lam: Weight
    w: str
    length: int
    part: int
    dim_n: int
    dim_n_v: int

    def describe(self) -> str:
        side = ">=" if self.part == 1 else "<="
        bound = self.dim_n + self.dim_n_v if self.part == 1 else self.dim_n - self.dim_n_v
        return (
            f"{self.p.label()}, lambda={format_weight(self.lam)}, w={self.w}: "
            f"2*{self.length} {side} {bound} fails"
        )


def weight_grid(rs: RootSystem, bound: int) -> list[Weight]:
    """Dominant weights with every coordinate in 0..bound."""
    if bound < 0:
        raise ValueError(f"grid bound must be non-negative, got {bound}")
    return [as_weight(c) for c in product(range(bound + 1), repeat=rs.rank)]


def verify_basic_lemma(
    rs: RootSystem,
    grid: Union[int, Iterable[Sequence]],
    oracle: Optional[RealFormOracle] = None,
    caps: Caps = DEFAULT_CAPS,
) -> list[LemmaViolation]:
    """Length inequalities for W^P against the signs of (xi_V + rho, alpha).

    If every pairing is <= 0 then 2 l(w) >= dim n_P + dim n_P(V); if every
    pairing is >= 0 then 2 l(w) <= dim n_P - dim n_P(V). Only V passing the
    duality test are checked. Returns the violations.
    """
    oracle = oracle or SPLIT_ORACLE
    weights = weight_grid(rs, grid) if isinstance(grid, int) else [as_weight(x) for x in grid]
    g = whole_group(rs)
    out = []
    checked = 0
    for p in enumerate_parabolics(rs, caps):
        n = len(nilradical_roots(p, g))
        reps = minimal_coset_reps(p, g, caps)
        for lam in weights:
            for w in reps:
                mu = dot_action(w, lam, rs)
                if not oracle.duality_test(mu, p):
                    continue
                n_v = oracle.centralizer(mu, p).dim_n
                pairs = list(delta_pairings(mu, p).values())
                checked += 1
                if all(v <= 0 for v in pairs) and 2 * w.length < n + n_v:
                    out.append(LemmaViolation(p, lam, w.label(), w.length, 1, n, n_v))
                if all(v >= 0 for v in pairs) and 2 * w.length > n - n_v:
                    out.append(LemmaViolation(p, lam, w.label(), w.length, 2, n, n_v))
    logger.debug("lemma scan on %s: %d cases, %d violations", rs.descriptor, checked, len(out))
    return out


# --- micro-purity ------------------------------------------------------------


@dataclass
class PurityResult:
    pure: bool
    hypotheses_ok: bool
    report: MicroSupportReport
    notes: list[str] = field(default_factory=list)


def micro_purity_check(
    rs: RootSystem,
    lam: Sequence,
    construction: str = IC,
    variant: Optional[str] = None,
    oracle: Optional[RealFormOracle] = None,
) -> PurityResult:
    """Build IC (or WC) and check emS is {E} at G with Type in degree 0.

    Outside the families A, B, C, BC, G or for E failing the duality test
    the result is still computed, with the hypotheses flagged.
    """
    if construction not in (IC, WC):
        raise ValueError(f"micro-purity is checked for {IC!r} or {WC!r}, not {construction!r}")
    oracle = oracle or SPLIT_ORACLE
    lam = as_weight(lam)
    g = whole_group(rs)
    notes = []
    families = {family for family, _ in rs.cartan_type}
    if not families <= HYPOTHESIS_FAMILIES:
        notes.append(f"families {sorted(families - HYPOTHESIS_FAMILIES)} are outside A, B, C, BC, G")
    if not oracle.duality_test(lam, g):
        notes.append(f"E = V_{format_weight(lam)} is not isomorphic to its conjugate dual")
    for note in notes:
        logger.warning("micro-purity hypothesis: %s", note)
    m = build(rs, lam, construction, variant, oracle)
    report = essential_micro_support(m, oracle)
    ess = report.elements
    pure = len(ess) == 1 and ess[0].p == g and ess[0].weight == lam and ess[0].type_interval == (0, 0)
    return PurityResult(pure, not notes, report, notes)


# --- microtypes on one singular stratum -----------------------------------------


@dataclass
class MicroTypesResult:
    """H(i_P^* i_Q^! IC) for Q = G and Q = P, next to the truncations of H(n_P; E)."""

    matches: bool
    cut: int
    expected: dict = field(default_factory=dict)
    got: dict = field(default_factory=dict)


def eqn_microtypes_check(
    rs: RootSystem,
    lam: Sequence,
    p: ParabolicIndex,
    perversity: Perversity = Perversity("upper"),
    oracle: Optional[RealFormOracle] = None,
) -> MicroTypesResult:
    """On the strata {P, G} with P maximal:

    Q = G gives tau^{<=p} H(n_P; E) and Q = P gives (tau^{>p} H(n_P; E))[-1],
    p the perversity of codim X_P, which for the upper perversity is
    floor(dim n_P / 2).
    """
    g = whole_group(rs)
    lam = as_weight(lam)
    if p == g:
        m = build_ic(rs, lam, perversity, oracle, strata=(g,))
        got = _stalk_cohomology(m, g, g)
        expected = GradedModule({(lam, 0): ("E",)})
        return MicroTypesResult(got.shape_equal(expected), 0, {g.label(): expected}, {g.label(): got})
    if len(p.levi) != rs.rank - 1:
        raise OrderingError(f"{p.label()} is not a maximal parabolic")
    cut = perversity(codimension_of(p, oracle))
    n = len(nilradical_roots(p, g))
    if perversity.variant == "upper" and cut != n // 2:
        raise InvariantError(f"upper perversity cut {cut} at {p.label()} is not floor({n}/2)")
    m = build_ic(rs, lam, perversity, oracle, strata=(p, g))
    kostant = nilpotent_cohomology(GradedModule({(lam, 0): ("E",)}), p, g)
    expected = {
        g.label(): kostant.restrict(lambda mu, d: d <= cut),
        p.label(): kostant.restrict(lambda mu, d: d > cut).shifted(-1),
    }
    got = {q.label(): _stalk_cohomology(m, p, q) for q in (g, p)}
    matches = all(got[k].shape_equal(expected[k]) for k in expected)
    if not matches:
        logger.warning("microtypes at %s differ from the truncations of H(n_P; E)", p.label())
    return MicroTypesResult(matches, cut, expected, got)


def _stalk_cohomology(m: LModule, p: ParabolicIndex, q: ParabolicIndex) -> GradedModule:
    return normal_form(stalk(closed_part(m, q), p).complex).module
