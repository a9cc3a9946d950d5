"""Root systems, weights and Weyl groups in exact arithmetic.

Weights are tuples of ``Fraction`` in the basis of fundamental weights, so a
weight's coordinates are its pairings with the simple coroots. Simple roots
are numbered as in Bourbaki, 0-based. The inner product is normalized per
irreducible factor so that short roots have squared length 2.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import prod
from typing import Iterable, Optional, Sequence

import numpy as np

from lmodule_engine import linalg
from lmodule_engine.config import DEFAULT_CAPS, Caps
from lmodule_engine.errors import CartanTypeError, InvariantError
from lmodule_engine.tables import classified_entry, list_families, supported_ranks

logger = logging.getLogger(__name__)

Weight = tuple[Fraction, ...]
RootCoeffs = tuple[int, ...]

FAMILIES = ("A", "B", "C", "D", "E", "F", "G", "BC")

_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3, "BC": 1}
_EXACT_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,)}

_FACTOR_RE = re.compile(r"^(BC|[A-G])(\d+)$")


# --- weights -------------------------------------------------------------


def as_weight(coords: Iterable) -> Weight:
    """Coerce a sequence of numbers (or "p/q" strings) to a Weight."""
    return tuple(Fraction(c) for c in coords)


def zero_weight(rank: int) -> Weight:
    return tuple(Fraction(0) for _ in range(rank))


def add(x: Sequence, y: Sequence) -> Weight:
    return tuple(Fraction(a) + b for a, b in zip(x, y, strict=True))


def sub(x: Sequence, y: Sequence) -> Weight:
    return tuple(Fraction(a) - b for a, b in zip(x, y, strict=True))


def scaled(x: Sequence, c) -> Weight:
    return tuple(Fraction(c) * a for a in x)


def format_weight(x: Sequence) -> str:
    return "(" + ",".join(str(Fraction(c)) for c in x) + ")"


# --- Cartan data ---------------------------------------------------------


def parse_cartan_type(descriptor: str) -> tuple[tuple[str, int], ...]:
    """Parse "C2", "A1xA1", "BC3" into ((family, rank), ...)."""
    if not isinstance(descriptor, str) or not descriptor.strip():
        raise CartanTypeError("empty Cartan type descriptor")
    factors = []
    for part in descriptor.strip().split("x"):
        m = _FACTOR_RE.match(part.strip())
        if not m:
            raise CartanTypeError(
                f"cannot parse Cartan factor {part!r} in {descriptor!r}; "
                f"expected one of {', '.join(list_families())} followed by a rank"
            )
        family, rank = m.group(1), int(m.group(2))
        if rank < 1:
            raise CartanTypeError(f"{family}{rank}: rank must be at least 1")
        if family in _EXACT_RANKS and rank not in _EXACT_RANKS[family]:
            allowed = ", ".join(str(r) for r in _EXACT_RANKS[family])
            raise CartanTypeError(f"{family}{rank}: family {family} exists only in rank {allowed}")
        if family in _MIN_RANK and rank < _MIN_RANK[family]:
            raise CartanTypeError(
                f"{family}{rank}: family {family} requires rank >= {_MIN_RANK[family]}"
            )
        if classified_entry(family, rank) is None:
            ranks = ", ".join(str(r) for r in supported_ranks(family))
            raise CartanTypeError(f"{family}{rank}: not in the classification table (ranks {ranks})")
        factors.append((family, rank))
    return tuple(factors)


def cartan_matrix(family: str, n: int) -> list[list[int]]:
    """A[i][j] = <alpha_i, alpha_j^vee> for one irreducible factor."""
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, aij=-1, aji=-1):
        a[i][j] = aij
        a[j][i] = aji

    if family in ("A", "B", "C", "BC", "F"):
        for i in range(n - 1):
            link(i, i + 1)
        if family in ("B", "BC") and n > 1:
            link(n - 2, n - 1, -2, -1)
        elif family == "C":
            link(n - 2, n - 1, -1, -2)
        elif family == "F":
            link(1, 2, -2, -1)
    elif family == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif family == "E":
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif family == "G":
        link(0, 1, -1, -3)
    else:
        raise CartanTypeError(f"unknown family {family!r}")
    return a


def _symmetrizer(a: list[list[int]]) -> list[Fraction]:
    """d_i = (alpha_i, alpha_i)/2 with the shortest root of the factor at 1."""
    n = len(a)
    d = [Fraction(1)] + [None] * (n - 1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and a[i][j] != 0 and d[j] is None:
                d[j] = d[i] * Fraction(a[j][i], a[i][j])
                stack.append(j)
    low = min(d)
    return [x / low for x in d]


def _block_diag(blocks: list[list[list[int]]]) -> list[list[int]]:
    size = sum(len(b) for b in blocks)
    out = [[0] * size for _ in range(size)]
    offset = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[offset + i][offset + j] = v
        offset += len(b)
    return out


def _generate_positive_roots(a: list[list[int]]) -> list[RootCoeffs]:
    """Positive roots by simple-root strings, layer by height."""
    r = len(a)
    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    found = set(simple)
    layer = list(simple)
    roots = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(r):
                q = 0
                down = tuple(c - (k == i) for k, c in enumerate(beta))
                while down in found:
                    q += 1
                    down = tuple(c - (k == i) for k, c in enumerate(down))
                p = q - sum(beta[j] * a[j][i] for j in range(r))
                if p > 0:
                    up = tuple(c + (k == i) for k, c in enumerate(beta))
                    if up not in found:
                        found.add(up)
                        nxt.append(up)
        roots.extend(nxt)
        layer = nxt
    return roots


@dataclass(frozen=True)
class RootSystem:
    """Root datum of a semisimple simply connected split group.

    Roots are stored by their coefficients on the simple roots. The
    ``inner_product_matrix`` is the Gram matrix of the fundamental weights.
    """

    descriptor: str
    cartan_type: tuple[tuple[str, int], ...]
    cartan_matrix: tuple[tuple[int, ...], ...]
    root_scale: tuple[Fraction, ...]
    factor_of: tuple[int, ...]
    positive_root_coeffs: tuple[RootCoeffs, ...]
    inner_product_matrix: linalg.Matrix
    reduced: bool = True
    scales: tuple[Fraction, ...] = field(default=())

    @property
    def rank(self) -> int:
        return len(self.cartan_matrix)

    @cached_property
    def cartan_inverse(self) -> linalg.Matrix:
        return linalg.inverse(linalg.as_matrix(self.cartan_matrix))

    @cached_property
    def root_index(self) -> dict[RootCoeffs, int]:
        return {c: i for i, c in enumerate(self.positive_root_coeffs)}

    @cached_property
    def simple_roots(self) -> tuple[Weight, ...]:
        return tuple(as_weight(row) for row in self.cartan_matrix)

    @cached_property
    def fundamental_weights(self) -> tuple[Weight, ...]:
        return tuple(
            tuple(Fraction(int(i == j)) for j in range(self.rank)) for i in range(self.rank)
        )

    @cached_property
    def positive_roots(self) -> tuple[Weight, ...]:
        return tuple(root_weight(self, c) for c in self.positive_root_coeffs)

    @cached_property
    def factor_ranges(self) -> tuple[range, ...]:
        out, offset = [], 0
        for _, n in self.cartan_type:
            out.append(range(offset, offset + n))
            offset += n
        return tuple(out)

    def __repr__(self) -> str:
        return f"RootSystem({self.descriptor!r})"


def build_root_system(
    cartan_type: str, *, scales: Optional[Sequence] = None
) -> RootSystem:
    """Build the root system for a descriptor such as "C2" or "A1xA1".

    Args:
        cartan_type: Type descriptor, factors joined by "x".
        scales: Optional positive rational per factor multiplying that
            factor's inner product.

    Returns:
        RootSystem with its invariants checked.
    """
    factors = parse_cartan_type(cartan_type)
    scales = tuple(Fraction(s) for s in (scales or [1] * len(factors)))
    if len(scales) != len(factors) or any(s <= 0 for s in scales):
        raise CartanTypeError("need one positive scale per Cartan factor")

    blocks, d, factor_of = [], [], []
    extra_roots = []
    offset = 0
    for k, (family, n) in enumerate(factors):
        block = cartan_matrix(family, n)
        blocks.append(block)
        d.extend(x * scales[k] for x in _symmetrizer(block))
        factor_of.extend([k] * n)
        offset += n

    a = _block_diag(blocks)
    roots = _generate_positive_roots(a)

    # BC_n: adjoin the doubles of the short roots of B_n.
    def inner(c1, c2):
        return sum(c1[i] * c2[j] * a[i][j] * d[j] for i in range(len(a)) for j in range(len(a)))

    offset = 0
    for k, (family, n) in enumerate(factors):
        if family == "BC":
            block = range(offset, offset + n)
            own = [c for c in roots if any(c[i] for i in block)]
            shortest = min(inner(c, c) for c in own)
            extra_roots.extend(
                tuple(2 * x for x in c) for c in own if inner(c, c) == shortest
            )
        offset += n
    roots = sorted(set(roots) | set(extra_roots), key=lambda c: (sum(c), c))

    rank = len(a)
    a_inv = linalg.inverse(linalg.as_matrix(a))
    gram = tuple(
        tuple(d[i] * a_inv[j][i] for j in range(rank)) for i in range(rank)
    )
    rs = RootSystem(
        descriptor=cartan_type.strip(),
        cartan_type=factors,
        cartan_matrix=tuple(tuple(row) for row in a),
        root_scale=tuple(d),
        factor_of=tuple(factor_of),
        positive_root_coeffs=tuple(roots),
        inner_product_matrix=gram,
        reduced=not extra_roots,
        scales=scales,
    )
    _check_root_system(rs)
    logger.debug("built %s with %d positive roots", rs.descriptor, len(roots))
    return rs


def rescaled(rs: RootSystem, factor: int, scale) -> RootSystem:
    """Same root system with the inner product on one factor multiplied."""
    scales = list(rs.scales)
    scales[factor] *= Fraction(scale)
    return build_root_system(rs.descriptor, scales=scales)


def _check_root_system(rs: RootSystem) -> None:
    for k, (family, n) in enumerate(rs.cartan_type):
        expected = classified_entry(family, n)["positive_roots"]
        block = rs.factor_ranges[k]
        count = sum(1 for c in rs.positive_root_coeffs if any(c[i] for i in block))
        if count != expected:
            raise InvariantError(f"{family}{n}: {count} positive roots, table says {expected}")
    gram = rs.inner_product_matrix
    for i in range(rs.rank):
        for j in range(rs.rank):
            if gram[i][j] != gram[j][i]:
                raise InvariantError("inner product matrix is not symmetric")
    r = rho(rs)
    for i in range(rs.rank):
        if coroot_pairing(rs, r, _unit(rs.rank, i)) != 1:
            raise InvariantError("(rho, alpha^vee) != 1 for a simple root")
    for i in range(rs.rank):
        s = simple_reflection(rs, i)
        for x in rs.fundamental_weights:
            for y in rs.fundamental_weights:
                if pairing(rs, act(s, x), act(s, y)) != pairing(rs, x, y):
                    raise InvariantError("inner product is not Weyl invariant")


def _unit(rank: int, i: int) -> RootCoeffs:
    return tuple(int(i == j) for j in range(rank))


# --- pairings ------------------------------------------------------------


def pairing(rs: RootSystem, x: Sequence, y: Sequence) -> Fraction:
    """(x, y) for weights in fundamental-weight coordinates."""
    g = rs.inner_product_matrix
    return sum(
        (Fraction(x[i]) * g[i][j] * y[j] for i in range(rs.rank) for j in range(rs.rank) if x[i] and y[j]),
        Fraction(0),
    )


def root_weight(rs: RootSystem, coeffs: Sequence[int]) -> Weight:
    """Fundamental-weight coordinates of sum_i coeffs[i] alpha_i."""
    a = rs.cartan_matrix
    return tuple(
        Fraction(sum(coeffs[i] * a[i][k] for i in range(rs.rank))) for k in range(rs.rank)
    )


def root_coefficients(rs: RootSystem, x: Sequence) -> Weight:
    """Coefficients of a weight on the simple roots."""
    inv = rs.cartan_inverse
    return tuple(sum((Fraction(x[k]) * inv[k][i] for k in range(rs.rank)), Fraction(0)) for i in range(rs.rank))


def root_inner(rs: RootSystem, c1: Sequence[int], c2: Sequence[int]) -> Fraction:
    """(gamma, delta) for roots given by simple-root coefficients."""
    a, d = rs.cartan_matrix, rs.root_scale
    return sum(
        (c1[i] * c2[j] * a[i][j] * d[j] for i in range(rs.rank) for j in range(rs.rank) if c1[i] and c2[j]),
        Fraction(0),
    )


def coroot_pairing(rs: RootSystem, x: Sequence, coeffs: Sequence[int]) -> Fraction:
    """<x, gamma^vee> = 2 (x, gamma) / (gamma, gamma)."""
    gamma = root_weight(rs, coeffs)
    return 2 * pairing(rs, x, gamma) / root_inner(rs, coeffs, coeffs)


def is_root(rs: RootSystem, coeffs: Sequence[int]) -> bool:
    c = tuple(coeffs)
    return c in rs.root_index or tuple(-x for x in c) in rs.root_index


def root_support(coeffs: Sequence[int]) -> frozenset[int]:
    return frozenset(i for i, c in enumerate(coeffs) if c)


def roots_supported_in(rs: RootSystem, subset: Iterable[int]) -> tuple[RootCoeffs, ...]:
    """Positive roots whose support lies in ``subset``, in the fixed order."""
    allowed = frozenset(subset)
    return tuple(c for c in rs.positive_root_coeffs if root_support(c) <= allowed)


def rho(rs: RootSystem) -> Weight:
    """The Weyl vector: sum of the fundamental weights."""
    return tuple(Fraction(1) for _ in range(rs.rank))


def half_sum_positive_roots(rs: RootSystem) -> Weight:
    """Half the sum of all positive roots; equals rho unless the system is BC."""
    total = zero_weight(rs.rank)
    for x in rs.positive_roots:
        total = add(total, x)
    return scaled(total, Fraction(1, 2))


def is_dominant(rs: RootSystem, x: Sequence, subset: Optional[Iterable[int]] = None) -> bool:
    idx = range(rs.rank) if subset is None else subset
    return all(Fraction(x[i]) >= 0 for i in idx)


def is_integral(x: Sequence) -> bool:
    return all(Fraction(c).denominator == 1 for c in x)


def weyl_dimension(rs: RootSystem, lam: Sequence, subset: Optional[Iterable[int]] = None) -> int:
    """Weyl dimension formula for the group or the Levi on ``subset``."""
    subset = range(rs.rank) if subset is None else subset
    r = rho(rs)
    shifted = add(lam, r)
    num, den = Fraction(1), Fraction(1)
    for c in roots_supported_in(rs, subset):
        gamma = root_weight(rs, c)
        num *= pairing(rs, shifted, gamma)
        den *= pairing(rs, r, gamma)
    value = num / den
    if value.denominator != 1:
        raise InvariantError(f"Weyl dimension of {format_weight(lam)} is not an integer")
    return int(value)


# --- Weyl group ----------------------------------------------------------


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element, identified by its action on weight coordinates.

    ``word`` is one reduced word and takes no part in equality or hashing.
    """

    matrix: tuple[tuple[int, ...], ...]
    word: tuple[int, ...] = field(default=(), compare=False)

    @property
    def length(self) -> int:
        return len(self.word)

    def label(self) -> str:
        if not self.word:
            return "e"
        return "".join(f"s{i}" for i in self.word)


def _as_array(m) -> np.ndarray:
    return np.array(m, dtype=np.int64)


def _as_tuple(arr: np.ndarray) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in row) for row in arr.tolist())


def identity_element(rs: RootSystem) -> WeylElement:
    return WeylElement(_as_tuple(np.eye(rs.rank, dtype=np.int64)), ())


def simple_reflection(rs: RootSystem, j: int) -> WeylElement:
    """s_j(x) = x - <x, alpha_j^vee> alpha_j, as a matrix on coordinates."""
    a = rs.cartan_matrix
    m = np.eye(rs.rank, dtype=np.int64)
    for k in range(rs.rank):
        m[k][j] -= a[j][k]
    return WeylElement(_as_tuple(m), (j,))


def compose(u: WeylElement, v: WeylElement) -> WeylElement:
    """u v; the word is the concatenation and may not be reduced."""
    return WeylElement(_as_tuple(_as_array(u.matrix) @ _as_array(v.matrix)), u.word + v.word)


def act(w: WeylElement, x: Sequence) -> Weight:
    """Linear action w(x)."""
    return tuple(
        sum((m * Fraction(xi) for m, xi in zip(row, x) if m), Fraction(0)) for row in w.matrix
    )


def dot_action(w: WeylElement, lam: Sequence, rs: RootSystem) -> Weight:
    """w . lam = w(lam + rho) - rho."""
    r = rho(rs)
    return sub(act(w, add(lam, r)), r)


def is_positive(rs: RootSystem, x: Sequence) -> bool:
    """Sign of a root given in weight coordinates."""
    return sum(root_coefficients(rs, x)) > 0


def inversion_count(rs: RootSystem, w: WeylElement) -> int:
    """Number of positive roots sent to negative roots."""
    return sum(1 for x in rs.positive_roots if not is_positive(rs, act(w, x)))


def reduced_word(rs: RootSystem, w: WeylElement) -> tuple[int, ...]:
    """Lexicographically first reduced word, recomputed from the matrix.

    The smallest left descent of w is the smallest i with (w rho)_i < 0.
    """
    word = []
    cur = _as_array(w.matrix)
    r = rho(rs)
    while True:
        image = act(WeylElement(_as_tuple(cur)), r)
        descents = [i for i, c in enumerate(image) if c < 0]
        if not descents:
            break
        i = descents[0]
        word.append(i)
        cur = _as_array(simple_reflection(rs, i).matrix) @ cur
    return tuple(word)


def weyl_group_order(rs: RootSystem) -> int:
    """|W| from the classified degrees."""
    return prod(
        prod(classified_entry(family, n)["degrees"]) for family, n in rs.cartan_type
    )


def weyl_enumerate(
    rs: RootSystem,
    subset: Optional[Iterable[int]] = None,
    caps: Caps = DEFAULT_CAPS,
) -> list[WeylElement]:
    """All elements of W (or of the parabolic subgroup on ``subset``).

    Ordered by length, then by lexicographically first reduced word;
    the identity comes first.
    """
    gens = sorted(range(rs.rank) if subset is None else set(subset))
    if subset is None:
        caps.check("weyl", weyl_group_order(rs), f"Weyl group of {rs.descriptor}")
    return _breadth_first(rs, gens, caps, accept=None)


def _breadth_first(rs: RootSystem, gens, caps: Caps, accept) -> list[WeylElement]:
    """Enumerate by right multiplication with the generators.

    ``accept`` prunes elements (and their extensions) from the search; it
    must be closed under taking prefixes of reduced words.
    """
    simple = {i: simple_reflection(rs, i) for i in gens}
    start = identity_element(rs)
    seen = {start.matrix}
    out = [start]
    layer = [start]
    while layer:
        nxt = []
        for w in layer:
            for i in gens:
                if not is_positive(rs, act(w, rs.simple_roots[i])):
                    continue
                cand = WeylElement(compose(w, simple[i]).matrix, w.word + (i,))
                if cand.matrix in seen:
                    continue
                seen.add(cand.matrix)
                if accept is not None and not accept(cand):
                    continue
                nxt.append(cand)
        nxt.sort(key=lambda e: e.word)
        out.extend(nxt)
        caps.check("weyl", len(out), f"Weyl enumeration of {rs.descriptor}")
        layer = nxt
    return out


def longest_element(rs: RootSystem, subset: Optional[Iterable[int]] = None) -> WeylElement:
    return weyl_enumerate(rs, subset)[-1]


def dominant_conjugate(
    rs: RootSystem, x: Sequence, subset: Optional[Iterable[int]] = None
) -> tuple[Weight, int]:
    """Reflect x into the dominant chamber of ``subset``; returns (x', steps).

    For regular x the step count is the length of the element taking
    x' back to x.
    """
    idx = sorted(range(rs.rank) if subset is None else set(subset))
    cur = as_weight(x)
    steps = 0
    while True:
        neg = [i for i in idx if cur[i] < 0]
        if not neg:
            return cur, steps
        cur = act(simple_reflection(rs, neg[0]), cur)
        steps += 1


def poincare_polynomial(rs: RootSystem, subset: Optional[Iterable[int]] = None) -> tuple[int, ...]:
    """Coefficients of sum_w t^l(w), by enumeration."""
    counts: dict[int, int] = {}
    for w in weyl_enumerate(rs, subset):
        counts[w.length] = counts.get(w.length, 0) + 1
    top = max(counts)
    return tuple(counts.get(k, 0) for k in range(top + 1))


def poincare_product(rs: RootSystem) -> tuple[int, ...]:
    """prod_i (1 + t + ... + t^(d_i - 1)) over the classified degrees."""
    poly = [1]
    for family, n in rs.cartan_type:
        for deg in classified_entry(family, n)["degrees"]:
            out = [0] * (len(poly) + deg - 1)
            for i, c in enumerate(poly):
                for k in range(deg):
                    out[i + k] += c
            poly = out
    return tuple(poly)
