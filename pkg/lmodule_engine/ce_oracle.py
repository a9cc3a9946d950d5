"""Brute-force oracle: Chevalley bases, explicit irreducibles and
Chevalley-Eilenberg cohomology of nilradicals.

Nothing in this module uses Kostant's theorem. Irreducible modules are built
by lowering from a highest-weight vector: a new vector is kept exactly when
some raising operator sees it, which realizes the quotient of the Verma
module by the radical of its contravariant form. Root vectors are then
obtained from the simple ones by brackets, and structure constants are read
off a faithful sum of fundamental modules.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from lmodule_engine import linalg
from lmodule_engine.config import DEFAULT_CAPS, Caps
from lmodule_engine.errors import CartanTypeError, DominanceError, InvariantError, OrderingError
from lmodule_engine.kostant import kostant_cohomology
from lmodule_engine.parabolics import ParabolicIndex, nilradical_roots, require_leq
from lmodule_engine.root_data import (
    RootCoeffs,
    RootSystem,
    Weight,
    add,
    as_weight,
    format_weight,
    is_dominant,
    is_integral,
    is_root,
    root_inner,
    root_weight,
    sub,
    weyl_dimension,
)

logger = logging.getLogger(__name__)

Blocks = dict[Weight, linalg.Matrix]


def _negated(c: Sequence[int]) -> RootCoeffs:
    return tuple(-x for x in c)


def _plus(c1: Sequence[int], c2: Sequence[int]) -> RootCoeffs:
    return tuple(x + y for x, y in zip(c1, c2))


# --- explicit modules ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExplicitModule:
    """An irreducible module given by weight spaces and generator blocks.

    ``raising[i][nu]`` is the matrix of e_i from V_nu to V_{nu + alpha_i},
    ``lowering[i][nu]`` that of f_i from V_nu to V_{nu - alpha_i}. Absent
    blocks are zero.
    """

    root_system: RootSystem
    highest_weight: Weight
    levi: frozenset[int]
    dims: Mapping[Weight, int]
    raising: Mapping[int, Blocks]
    lowering: Mapping[int, Blocks]

    @property
    def dimension(self) -> int:
        return sum(self.dims.values())

    def weights(self) -> list[Weight]:
        return list(self.dims)

    def weight_multiset(self) -> Counter:
        return Counter(self.dims)


def irrep_construct(
    rs: RootSystem,
    lam: Sequence,
    levi: Optional[Iterable[int]] = None,
    caps: Caps = DEFAULT_CAPS,
) -> ExplicitModule:
    """The irreducible module of highest weight ``lam`` for G or for a Levi.

    Weight spaces are filled in by decreasing height. At a weight mu every
    f_i b with b a basis vector of V_{mu + alpha_i} is a candidate; its
    image under all e_j is computed from already known blocks using
    e_j f_i = f_i e_j + delta_ij h_i. Candidates with independent images
    form the basis of V_mu.
    """
    lam = as_weight(lam)
    idx = sorted(range(rs.rank) if levi is None else set(levi))
    if not is_integral(lam[i] for i in idx) or not is_dominant(rs, lam, idx):
        raise DominanceError(f"{format_weight(lam)} is not dominant integral")
    predicted = weyl_dimension(rs, lam, idx)
    caps.check("irrep_dim", predicted, f"irreducible module {format_weight(lam)}")
    alpha = {i: rs.simple_roots[i] for i in idx}

    dims: dict[Weight, int] = {lam: 1}
    raising: dict[int, Blocks] = {i: {} for i in idx}
    lowering: dict[int, Blocks] = {i: {} for i in idx}
    layer = [lam]
    while layer:
        candidates_weights = sorted({sub(nu, alpha[i]) for nu in layer for i in idx})
        new_layer = []
        for mu in candidates_weights:
            sources = [i for i in idx if add(mu, alpha[i]) in dims]
            cands = [(i, b) for i in sources for b in range(dims[add(mu, alpha[i])])]
            targets = sources
            nrows = sum(dims[add(mu, alpha[j])] for j in targets)
            cols = []
            for i, b in cands:
                nu = add(mu, alpha[i])
                col: list[Fraction] = []
                for j in targets:
                    tgt = add(mu, alpha[j])
                    vec = [Fraction(0)] * dims[tgt]
                    up = add(nu, alpha[j])
                    ej = raising[j].get(nu)
                    if ej is not None and up in dims:
                        fi = lowering[i][up]
                        for r in range(dims[tgt]):
                            vec[r] += sum(
                                (fi[r][s] * ej[s][b] for s in range(dims[up]) if ej[s][b]),
                                Fraction(0),
                            )
                    if i == j:
                        vec[b] += nu[i]
                    col.extend(vec)
                cols.append(col)
            image = linalg.from_columns(cols, nrows)
            reduced, pivots = linalg.rref(image, len(cands))
            if not pivots:
                continue
            dims[mu] = len(pivots)
            offset = 0
            for j in targets:
                n = dims[add(mu, alpha[j])]
                raising[j][mu] = tuple(
                    tuple(image[offset + r][c] for c in pivots) for r in range(n)
                )
                offset += n
            for i in sources:
                positions = [k for k, (ci, _) in enumerate(cands) if ci == i]
                lowering[i][add(mu, alpha[i])] = tuple(
                    tuple(reduced[r][k] for k in positions) for r in range(len(pivots))
                )
            new_layer.append(mu)
        layer = new_layer

    module = ExplicitModule(rs, lam, frozenset(idx), dims, raising, lowering)
    if module.dimension != predicted:
        raise InvariantError(
            f"module {format_weight(lam)} has dimension {module.dimension}, "
            f"Weyl dimension formula gives {predicted}"
        )
    logger.debug("built irreducible %s of dimension %d", format_weight(lam), predicted)
    return module


def _bracket_blocks(a: Blocks, sa: Weight, b: Blocks, sb: Weight, dims: Mapping[Weight, int]) -> Blocks:
    """[A, B] = AB - BA for weight-shifting block operators."""
    out: Blocks = {}
    for nu, n in dims.items():
        tgt = add(add(nu, sa), sb)
        if tgt not in dims:
            continue
        total = linalg.zeros(dims[tgt], n)
        mid = add(nu, sb)
        if nu in b and mid in a:
            total = linalg.add(total, linalg.matmul(a[mid], b[nu], n))
        mid = add(nu, sa)
        if nu in a and mid in b:
            total = linalg.add(total, linalg.scale(linalg.matmul(b[mid], a[nu], n), -1))
        if not linalg.is_zero(total):
            out[nu] = total
    return out


def _scale_blocks(a: Blocks, c) -> Blocks:
    return {nu: linalg.scale(m, c) for nu, m in a.items()}


# --- Chevalley basis -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class LiePresentation:
    """A split semisimple Lie algebra in a Chevalley basis.

    Basis: x_gamma for every root gamma and h_i = alpha_i^vee. ``structure``
    holds N with [x_gamma, x_delta] = N x_{gamma+delta}; ``coroots`` holds
    [x_gamma, x_-gamma] = h_gamma on the h_i. Each non-simple positive root
    has a ``recipe`` (i, beta, p): x_gamma = [x_{alpha_i}, x_beta] / (p + 1).
    """

    root_system: RootSystem
    roots: tuple[RootCoeffs, ...]
    structure: Mapping[tuple[RootCoeffs, RootCoeffs], int]
    coroots: Mapping[RootCoeffs, tuple[Fraction, ...]]
    recipe: Mapping[RootCoeffs, tuple[int, RootCoeffs, int]]

    @property
    def dimension(self) -> int:
        return len(self.roots) + self.root_system.rank

    def basis(self) -> list[tuple]:
        return [("e", c) for c in self.roots] + [("h", i) for i in range(self.root_system.rank)]

    def structure_constant(self, g: RootCoeffs, d: RootCoeffs) -> int:
        return self.structure.get((tuple(g), tuple(d)), 0)

    def bracket_basis(self, x: tuple, y: tuple) -> dict[tuple, Fraction]:
        (kx, vx), (ky, vy) = x, y
        if kx == "h" and ky == "h":
            return {}
        if kx == "h":
            c = root_weight(self.root_system, vy)[vx]
            return {y: c} if c else {}
        if ky == "h":
            return {k: -v for k, v in self.bracket_basis(y, x).items()}
        total = _plus(vx, vy)
        if not any(total):
            return {("h", i): c for i, c in enumerate(self.coroots[vx]) if c}
        n = self.structure_constant(vx, vy)
        return {("e", total): Fraction(n)} if n else {}

    def bracket(self, x: Mapping[tuple, Fraction], y: Mapping[tuple, Fraction]) -> dict[tuple, Fraction]:
        out: dict[tuple, Fraction] = {}
        for bx, cx in x.items():
            for by, cy in y.items():
                for k, v in self.bracket_basis(bx, by).items():
                    out[k] = out.get(k, Fraction(0)) + cx * cy * v
        return {k: v for k, v in out.items() if v}


def _recipes(rs: RootSystem) -> dict[RootCoeffs, tuple[int, RootCoeffs, int]]:
    recipe = {}
    for gamma in rs.positive_root_coeffs:
        if sum(gamma) == 1:
            continue
        for i in range(rs.rank):
            beta = tuple(c - (k == i) for k, c in enumerate(gamma))
            if beta in rs.root_index:
                p = 0
                down = tuple(c - (k == i) for k, c in enumerate(beta))
                while is_root(rs, down):
                    p += 1
                    down = tuple(c - (k == i) for k, c in enumerate(down))
                recipe[gamma] = (i, beta, p)
                break
    return recipe


def root_operators(module: ExplicitModule, recipe: Mapping) -> dict[RootCoeffs, Blocks]:
    """Blocks of x_gamma on the module, for every root of its Levi.

    Negative root vectors follow x_-gamma = -omega(x_gamma) for the
    Chevalley involution omega(e_i) = -f_i.
    """
    rs = module.root_system
    ops: dict[RootCoeffs, Blocks] = {}
    for gamma in rs.positive_root_coeffs:
        if not all(k in module.levi for k, c in enumerate(gamma) if c):
            continue
        if sum(gamma) == 1:
            i = gamma.index(1)
            ops[gamma] = dict(module.raising[i])
            ops[_negated(gamma)] = dict(module.lowering[i])
            continue
        i, beta, p = recipe[gamma]
        unit = tuple(int(k == i) for k in range(rs.rank))
        a_i, a_beta = rs.simple_roots[i], root_weight(rs, beta)
        pos = _bracket_blocks(ops[unit], a_i, ops[beta], a_beta, module.dims)
        ops[gamma] = _scale_blocks(pos, Fraction(1, p + 1))
        neg = _bracket_blocks(
            ops[_negated(unit)], tuple(-x for x in a_i),
            ops[_negated(beta)], tuple(-x for x in a_beta),
            module.dims,
        )
        ops[_negated(gamma)] = _scale_blocks(neg, Fraction(-1, p + 1))
    return ops


def _first_entry(blocks: Blocks):
    for nu in sorted(blocks):
        for r, row in enumerate(blocks[nu]):
            for c, x in enumerate(row):
                if x:
                    return nu, r, c
    return None


def chevalley_basis(rs: RootSystem, caps: Caps = DEFAULT_CAPS) -> LiePresentation:
    """Chevalley basis with structure constants and the Jacobi identity checked."""
    if not rs.reduced:
        raise CartanTypeError(f"{rs.descriptor} is not reduced; no Lie algebra is built")
    caps.check("oracle_rank", rs.rank, f"Chevalley basis of {rs.descriptor}")
    recipe = _recipes(rs)
    reps = []
    for k in range(rs.rank):
        module = irrep_construct(rs, rs.fundamental_weights[k], caps=caps)
        reps.append((module, root_operators(module, recipe)))

    positives = list(rs.positive_root_coeffs)
    roots = tuple(positives + [_negated(c) for c in positives])
    coroots = {}
    for gamma in positives:
        d_gamma = root_inner(rs, gamma, gamma) / 2
        co = tuple(Fraction(c) * rs.root_scale[i] / d_gamma for i, c in enumerate(gamma))
        coroots[gamma] = co
        coroots[_negated(gamma)] = tuple(-x for x in co)

    weight_of = {c: root_weight(rs, c) for c in roots}
    structure: dict[tuple[RootCoeffs, RootCoeffs], int] = {}
    for g in roots:
        for d in roots:
            total = _plus(g, d)
            if not any(total):
                for module, ops in reps:
                    br = _bracket_blocks(ops[g], weight_of[g], ops[d], weight_of[d], module.dims)
                    for nu, n in module.dims.items():
                        expected = sum((Fraction(c) * nu[i] for i, c in enumerate(coroots[g])), Fraction(0))
                        got = br.get(nu, linalg.zeros(n, n))
                        if got != linalg.scale(linalg.identity(n), expected):
                            raise InvariantError(f"[x_g, x_-g] != h_g for g = {g}")
                continue
            if total not in weight_of:
                continue
            value = None
            for module, ops in reps:
                br = _bracket_blocks(ops[g], weight_of[g], ops[d], weight_of[d], module.dims)
                where = _first_entry(ops[total])
                if where is None:
                    if br:
                        raise InvariantError(f"bracket of {g}, {d} acts where x_(g+d) vanishes")
                    continue
                nu, r, c = where
                got = br.get(nu, ())
                ratio = (got[r][c] if got else Fraction(0)) / ops[total][nu][r][c]
                if _scale_blocks(ops[total], ratio) != br:
                    raise InvariantError(f"bracket of {g}, {d} is not a multiple of x_(g+d)")
                if value is not None and value != ratio:
                    raise InvariantError(f"fundamental modules disagree on N({g}, {d})")
                value = ratio
            if value is None or value.denominator != 1:
                raise InvariantError(f"N({g}, {d}) = {value} is not a nonzero integer")
            structure[(g, d)] = int(value)

    pres = LiePresentation(rs, roots, structure, coroots, recipe)
    check_jacobi(pres)
    logger.debug("Chevalley basis of %s: dimension %d", rs.descriptor, pres.dimension)
    return pres


def check_jacobi(pres: LiePresentation) -> None:
    """Antisymmetry and the Jacobi identity on every triple of basis vectors."""
    for (g, d), n in pres.structure.items():
        if pres.structure_constant(d, g) != -n:
            raise InvariantError(f"N({g}, {d}) is not antisymmetric")
    basis = pres.basis()
    for i, a in enumerate(basis):
        for j in range(i + 1, len(basis)):
            b = basis[j]
            ab = pres.bracket_basis(a, b)
            for k in range(j + 1, len(basis)):
                c = basis[k]
                total: dict[tuple, Fraction] = {}
                for x, yz in (
                    (a, pres.bracket_basis(b, c)),
                    (b, pres.bracket_basis(c, a)),
                ):
                    for key, v in pres.bracket({x: Fraction(1)}, yz).items():
                        total[key] = total.get(key, Fraction(0)) + v
                for key, v in pres.bracket({c: Fraction(1)}, ab).items():
                    total[key] = total.get(key, Fraction(0)) + v
                if any(total.values()):
                    raise InvariantError(f"Jacobi identity fails on {a}, {b}, {c}")


def symmetric_space_dimension(pres: LiePresentation, levi: Optional[Iterable[int]] = None) -> tuple[int, int]:
    """(dim k, dim p) for the split form, from the Chevalley involution.

    omega(h) = -h and omega(x_gamma) = -x_-gamma; k and p are its +1 and -1
    eigenspaces inside the semisimple part of the Levi on ``levi``.
    """
    rs = pres.root_system
    allowed = frozenset(range(rs.rank) if levi is None else levi)
    basis = [
        b for b in pres.basis()
        if (b[0] == "h" and b[1] in allowed)
        or (b[0] == "e" and all(k in allowed for k, c in enumerate(b[1]) if c))
    ]
    index = {b: n for n, b in enumerate(basis)}

    def omega(b):
        if b[0] == "h":
            return {b: Fraction(-1)}
        return {("e", _negated(b[1])): Fraction(-1)}

    for x in basis:
        for y in basis:
            lhs: dict = {}
            for key, v in pres.bracket_basis(x, y).items():
                for k2, v2 in omega(key).items():
                    lhs[k2] = lhs.get(k2, Fraction(0)) + v * v2
            rhs = pres.bracket(omega(x), omega(y))
            if {k: v for k, v in lhs.items() if v} != rhs:
                raise InvariantError("Chevalley involution is not an automorphism")

    n = len(basis)
    cols = []
    for b in basis:
        col = [Fraction(0)] * n
        for key, v in omega(b).items():
            col[index[key]] = v
        cols.append(col)
    mat = linalg.from_columns(cols, n)
    ident = linalg.identity(n)
    plus = len(linalg.nullspace(linalg.add(mat, linalg.scale(ident, -1)), n))
    minus = len(linalg.nullspace(linalg.add(mat, ident), n))
    return plus, minus


# --- Chevalley-Eilenberg cohomology ----------------------------------------


@dataclass(frozen=True)
class CECohomology:
    """H(n_P^Q; E) from the explicit complex.

    ``components`` counts Levi highest-weight classes per (weight, degree).
    """

    betti: tuple[int, ...]
    components: Mapping[tuple[Weight, int], int] = field(default_factory=dict)
    cochain_dims: tuple[int, ...] = ()

    def as_multiset(self) -> Counter:
        return Counter({k: v for k, v in self.components.items() if v})


def _sign_of_insertion(g: int, rest: Sequence[int]) -> int:
    """Sign of the permutation sorting (g, *rest) with rest sorted."""
    return -1 if sum(1 for r in rest if r < g) % 2 else 1


class _Complex:
    """Weight-graded cochains Lambda^k (n*) (x) E with d and the Levi e_i."""

    def __init__(self, pres, module, nil, levi_p):
        rs = module.root_system
        self.rs = rs
        self.pres = pres
        self.module = module
        self.nil = list(nil)
        self.levi_p = sorted(levi_p)
        self.gamma_w = [root_weight(rs, c) for c in self.nil]
        self.pos_of = {c: n for n, c in enumerate(self.nil)}
        self.ops = root_operators(module, pres.recipe)
        self.basis: dict[int, dict[Weight, list]] = {}
        self.index: dict[int, dict[Weight, dict]] = {}
        n = len(self.nil)
        for k in range(n + 1):
            by_weight: dict[Weight, list] = {}
            for s in combinations(range(n), k):
                shift = tuple(Fraction(0) for _ in range(rs.rank))
                for t in s:
                    shift = add(shift, self.gamma_w[t])
                for nu, dim in module.dims.items():
                    omega = sub(nu, shift)
                    for b in range(dim):
                        by_weight.setdefault(omega, []).append((s, nu, b))
            self.basis[k] = by_weight
            self.index[k] = {w: {e: i for i, e in enumerate(v)} for w, v in by_weight.items()}

    def dim(self, k: int, omega: Weight) -> int:
        return len(self.basis.get(k, {}).get(omega, ()))

    def differential(self, k: int, omega: Weight) -> linalg.Matrix:
        cols = self.basis.get(k, {}).get(omega, [])
        rows = self.index.get(k + 1, {}).get(omega, {})
        mat = [[Fraction(0)] * len(cols) for _ in range(len(rows))]
        n = len(self.nil)
        for col, (s, nu, b) in enumerate(cols):
            members = set(s)
            for t in range(n):
                if t in members:
                    continue
                op = self.ops[self.nil[t]].get(nu)
                if op is None:
                    continue
                tt = tuple(sorted(members | {t}))
                sign = -1 if tt.index(t) % 2 else 1
                up = add(nu, self.gamma_w[t])
                for r, row in enumerate(op):
                    if row[b]:
                        mat[rows[(tt, up, r)]][col] += sign * row[b]
            for g in s:
                rest = [x for x in s if x != g]
                ins = _sign_of_insertion(g, rest)
                for a in range(n):
                    for c in range(a + 1, n):
                        if a in rest or c in rest:
                            continue
                        if _plus(self.nil[a], self.nil[c]) != self.nil[g]:
                            continue
                        coeff = self.pres.structure_constant(self.nil[a], self.nil[c])
                        if not coeff:
                            continue
                        tt = tuple(sorted(rest + [a, c]))
                        sign = -1 if (tt.index(a) + tt.index(c)) % 2 else 1
                        mat[rows[(tt, nu, b)]][col] += sign * ins * coeff
        return tuple(tuple(r) for r in mat)

    def levi_raising(self, i: int, k: int, omega: Weight) -> linalg.Matrix:
        """e_i: C^k_omega -> C^k_{omega + alpha_i} for alpha_i in the Levi of P."""
        rs = self.rs
        unit = tuple(int(x == i) for x in range(rs.rank))
        cols = self.basis.get(k, {}).get(omega, [])
        target = add(omega, rs.simple_roots[i])
        rows = self.index.get(k, {}).get(target, {})
        mat = [[Fraction(0)] * len(cols) for _ in range(len(rows))]
        op = self.ops[unit]
        for col, (s, nu, b) in enumerate(cols):
            block = op.get(nu)
            if block is not None:
                up = add(nu, rs.simple_roots[i])
                for r, row in enumerate(block):
                    if row[b]:
                        mat[rows[(s, up, r)]][col] += row[b]
            for m, t in enumerate(s):
                lower = tuple(c - (x == i) for x, c in enumerate(self.nil[t]))
                if lower not in self.pos_of:
                    continue
                u = self.pos_of[lower]
                if u in s:
                    continue
                coeff = -self.pres.structure_constant(unit, lower)
                replaced = list(s)
                replaced[m] = u
                ordered = tuple(sorted(replaced))
                perm_sign = 1
                for x in range(len(replaced)):
                    for y in range(x + 1, len(replaced)):
                        if replaced[x] > replaced[y]:
                            perm_sign = -perm_sign
                mat[rows[(ordered, nu, b)]][col] += perm_sign * coeff
        return tuple(tuple(r) for r in mat)


def ce_cohomology(
    p: ParabolicIndex,
    q: ParabolicIndex,
    module: ExplicitModule,
    pres: Optional[LiePresentation] = None,
    caps: Caps = DEFAULT_CAPS,
) -> CECohomology:
    """Cohomology of Lambda(n_P^Q)* (x) E by exact ranks, split by weight.

    Each degree is decomposed into Levi-irreducibles by counting classes at
    Levi-dominant weights that the raising operators of L_P send to
    coboundaries.
    """
    require_leq(p, q)
    if not q.levi <= module.levi:
        raise OrderingError(f"module is not a module for the Levi of {q.label()}")
    rs = p.root_system
    nil = nilradical_roots(p, q)
    caps.check("ce_dim", 2 ** len(nil) * module.dimension, "Chevalley-Eilenberg complex")
    pres = pres or chevalley_basis(rs, caps)
    cx = _Complex(pres, module, nil, p.levi)
    n = len(nil)

    diffs: dict[tuple[int, Weight], linalg.Matrix] = {}
    for k in range(n + 1):
        for omega in cx.basis[k]:
            diffs[(k, omega)] = cx.differential(k, omega)
    for (k, omega), dk in diffs.items():
        nxt = diffs.get((k + 1, omega))
        if nxt is None or not dk or not nxt:
            continue
        if not linalg.is_zero(linalg.matmul(nxt, dk, cx.dim(k, omega))):
            raise InvariantError(f"d o d != 0 at degree {k}, weight {format_weight(omega)}")

    def boundary_columns(k, omega):
        prev = diffs.get((k - 1, omega))
        if prev is None:
            return []
        return linalg.columns(prev, cx.dim(k - 1, omega))

    betti = [0] * (n + 1)
    components: dict[tuple[Weight, int], int] = {}
    for k in range(n + 1):
        for omega in cx.basis[k]:
            dim = cx.dim(k, omega)
            cycles = linalg.nullspace(diffs[(k, omega)], dim)
            bounds = boundary_columns(k, omega)
            b_rank = linalg.rank(linalg.from_columns(bounds, dim), len(bounds)) if bounds else 0
            h = len(cycles) - b_rank
            betti[k] += h
            if h and is_dominant(rs, omega, p.levi):
                count = _highest_weight_count(cx, k, omega, cycles, b_rank, boundary_columns)
                if count:
                    components[(omega, k)] = count

    for k in range(n + 1):
        from_components = sum(
            c * weyl_dimension(rs, mu, p.levi) for (mu, d), c in components.items() if d == k
        )
        if from_components != betti[k]:
            raise InvariantError(
                f"Levi decomposition of degree {k} has dimension {from_components}, expected {betti[k]}"
            )
    cochains = tuple(sum(len(v) for v in cx.basis[k].values()) for k in range(n + 1))
    logger.debug("CE cohomology for %s in %s: betti %s", p.label(), q.label(), betti)
    return CECohomology(tuple(betti), components, cochains)


def _highest_weight_count(cx, k, mu, cycles, b_rank, boundary_columns) -> int:
    """Classes in H^k_mu killed by every Levi e_i, modulo coboundaries."""
    if not cx.levi_p:
        return len(cycles) - b_rank
    dim = cx.dim(k, mu)
    nz = len(cycles)
    z = linalg.from_columns(cycles, dim)
    pieces = []
    for i in cx.levi_p:
        target = add(mu, cx.rs.simple_roots[i])
        tdim = cx.dim(k, target)
        if not tdim:
            continue
        ez = linalg.matmul(cx.levi_raising(i, k, mu), z, nz)
        pieces.append((tdim, ez, boundary_columns(k, target)))
    if not pieces:
        return nz - b_rank
    widths = [len(bc) for _, _, bc in pieces]
    total_cols = nz + sum(widths)
    rows = []
    offset = nz
    for (tdim, ez, bc), width in zip(pieces, widths):
        neg_b = linalg.scale(linalg.from_columns(bc, tdim), -1) if bc else linalg.zeros(tdim, 0)
        for r in range(tdim):
            row = [Fraction(0)] * total_cols
            row[:nz] = ez[r]
            row[offset:offset + width] = neg_b[r]
            rows.append(row)
        offset += width
    solutions = linalg.nullspace(rows, total_cols)
    projected = [s[:nz] for s in solutions]
    kept = linalg.rank(projected, nz) if projected else 0
    return kept - b_rank


def restrict_to_levi(module: ExplicitModule, levi: Iterable[int]) -> dict[Weight, int]:
    """Highest weights (with multiplicity) of the module restricted to a Levi."""
    rs = module.root_system
    idx = sorted(set(levi))
    out: dict[Weight, int] = {}
    for nu, n in module.dims.items():
        if not is_dominant(rs, nu, idx):
            continue
        stacked = []
        for i in idx:
            block = module.raising.get(i, {}).get(nu)
            if block is not None:
                stacked.extend(block)
        count = n - (linalg.rank(stacked, n) if stacked else 0)
        if count:
            out[nu] = count
    total = sum(c * weyl_dimension(rs, mu, idx) for mu, c in out.items())
    if total != module.dimension:
        raise InvariantError(f"Levi branching has dimension {total}, module has {module.dimension}")
    return out


def compare_with_kostant(
    p: ParabolicIndex, q: ParabolicIndex, nu: Sequence, caps: Caps = DEFAULT_CAPS
) -> tuple[bool, Counter, Counter]:
    """Run both computations; returns (agree, kostant multiset, oracle multiset)."""
    rs = p.root_system
    expected = Counter((c.weight, c.degree) for c in kostant_cohomology(p, q, nu))
    module = irrep_construct(rs, nu, q.levi, caps)
    got = ce_cohomology(p, q, module, caps=caps).as_multiset()
    return expected == got, expected, got
