"""Finitely presented modules over affine coordinate rings.

A module is a cokernel presentation: ambient rank n over B = R/I plus a
relation matrix with entries in R, kept in normal form modulo a fixed
Groebner basis of I.  The I-multiples of the ambient basis vectors are
implicit relations; they are appended explicitly whenever a computation runs
over the ambient polynomial ring.

The workhorse is a module Buchberger algorithm on free modules R^N with a
position-elimination order, which yields syzygies, kernels, membership tests
and lifts.  Everything downstream (resolutions, Betti numbers, Fitting
ideals, duals, Ext, torsion, depth) reduces to those primitives.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from plocus import kernel
from plocus.errors import BudgetExceededError, PointNotOnVarietyError
from plocus.groebner import (
    Budget,
    DEFAULT_BUDGET,
    Ideal,
    nf_mod_ring,
    quotient_gb,
)
from plocus.rings import MonomialOrder, Poly, RingDecl

# ---------------------------------------------------------------------------
# sparse vectors over R:  {position: Poly}


def _vec_from_column(col, ring: RingDecl) -> dict:
    vec = {}
    for i, p in enumerate(col):
        if p is not None and not p.is_zero():
            vec[i] = p.migrate(ring)
    return vec


def _vec_sub(a: dict, b: dict, ring: RingDecl) -> dict:
    out = dict(a)
    for i, p in b.items():
        q = out.get(i)
        s = (q - p) if q is not None else -p
        if s.is_zero():
            out.pop(i, None)
        else:
            out[i] = s
    return out


def _vec_mul_term(vec: dict, exp: tuple, coeff, ring: RingDecl) -> dict:
    return {i: p.mul_term(exp, coeff) for i, p in vec.items()}


def _vec_scale(vec: dict, c) -> dict:
    out = {}
    for i, p in vec.items():
        q = p.scale(c)
        if not q.is_zero():
            out[i] = q
    return out


def _vec_degree(vec: dict) -> int:
    return max((p.total_degree() for p in vec.values()), default=-1)


def _vec_nf_entries(vec: dict, budget) -> dict:
    out = {}
    for i, p in vec.items():
        q = nf_mod_ring(p, budget)
        if not q.is_zero():
            out[i] = q
    return out


class _ModuleOrder:
    """Position-elimination order on R^N: positions < split dominate.

    Within a block, monomials compare by the ring order with the smaller
    position winning ties.  This is a legitimate module term order, and GB
    elements supported entirely on the tag block form a basis of the
    intersection with the tag submodule (the syzygy elimination trick).
    """

    __slots__ = ("ring_order", "split")

    def __init__(self, ring_order: MonomialOrder, split: int):
        self.ring_order = ring_order
        self.split = split

    def compare(self, t1, t2) -> int:
        p1, e1 = t1
        p2, e2 = t2
        b1 = p1 >= self.split
        b2 = p2 >= self.split
        if b1 != b2:
            return -1 if b1 else 1
        c = self.ring_order.compare(e1, e2)
        if c:
            return c
        if p1 != p2:
            return 1 if p1 < p2 else -1
        return 0

    def lead_of(self, vec: dict):
        best = None
        for pos, poly in vec.items():
            e, _ = poly.leading(self.ring_order)
            cand = (pos, e)
            if best is None or self.compare(cand, best) > 0:
                best = cand
        return best


def _module_nf(vec: dict, elems: list[dict], leads: list, order: _ModuleOrder,
               ring: RingDecl, value_only: bool = False) -> dict:
    """Full normal form of vec against monic module elements.

    value_only restricts reduction to positions < split, which is what a
    membership/lift query needs: tag positions then accumulate quotients.
    """
    ring_order = order.ring_order
    char = ring.field.characteristic
    split = order.split

    work: dict[int, dict] = {i: dict(p.terms) for i, p in vec.items()}
    result: dict[int, dict] = {}

    def largest():
        best = None
        for pos, terms in work.items():
            if value_only and pos >= split:
                continue
            if not terms:
                continue
            e = max(terms, key=ring_order.key)
            if best is None or order.compare((pos, e), best[0]) > 0:
                best = ((pos, e), terms[e])
        return best

    while True:
        top = largest()
        if top is None:
            break
        (pos, e), c = top
        reducer = None
        for k, (lp, le) in enumerate(leads):
            if lp == pos and kernel.exp_divides(le, e):
                reducer = k
                break
        if reducer is None:
            work[pos].pop(e)
            result.setdefault(pos, {})[e] = c
            continue
        shift = kernel.exp_div(e, leads[reducer][1])
        g = elems[reducer]
        for gp, gpoly in g.items():
            target = work.setdefault(gp, {})
            for ge, gc in gpoly.terms.items():
                e2 = kernel.exp_mul(ge, shift)
                v = target.get(e2, 0) - c * gc
                if char:
                    v %= char
                if v:
                    target[e2] = v
                else:
                    target.pop(e2, None)

    merged: dict[int, dict] = {}
    for pos, terms in result.items():
        if terms:
            merged[pos] = dict(terms)
    for pos, terms in work.items():
        if terms:
            cur = merged.setdefault(pos, {})
            cur.update(terms)
    return {pos: Poly(ring, terms) for pos, terms in merged.items() if terms}


def _module_spair(f: dict, g: dict, lead_f, lead_g, order: _ModuleOrder, ring: RingDecl):
    lcm = kernel.exp_lcm(lead_f[1], lead_g[1])
    a = _vec_mul_term(f, kernel.exp_div(lcm, lead_f[1]), 1, ring)
    b = _vec_mul_term(g, kernel.exp_div(lcm, lead_g[1]), 1, ring)
    return _vec_sub(a, b, ring)


def _module_gm_update(pairs, leads, h, order: _ModuleOrder):
    """Chain-criterion pair update for modules (no product criterion)."""
    lcm = kernel.exp_lcm
    divides = kernel.exp_divides
    hp, he = leads[h]

    fresh = []
    for i in range(h):
        if leads[i][0] != hp:
            continue
        fresh.append((i, lcm(leads[i][1], he)))
    kept = []
    for i, l in fresh:
        redundant = False
        for j, l2 in fresh:
            if l2 != l and divides(l2, l):
                redundant = True
                break
        if not redundant:
            kept.append((i, l))
    seen: dict = {}
    for i, l in kept:
        seen.setdefault(l, (i, l))
    new_pairs = [(i, h, l) for i, l in seen.values()]

    survivors = []
    for i, j, l in pairs:
        if leads[i][0] == hp and divides(he, l) \
                and lcm(leads[i][1], he) != l and lcm(leads[j][1], he) != l:
            continue
        survivors.append((i, j, l))
    survivors.extend(new_pairs)
    survivors.sort(key=lambda item: (order.ring_order.key(item[2]), item[0], item[1]))
    return survivors


def module_buchberger(vecs: list[dict], split: int, ring: RingDecl,
                      budget: Budget | None = None,
                      order: MonomialOrder | None = None) -> tuple[list[dict], _ModuleOrder]:
    """Reduced module Groebner basis of span(vecs) in R^N.

    Input vectors are over the polynomial ring (quotient structure is the
    caller's business).  Returns monic, inter-reduced, canonically sorted
    elements.
    """
    budget = budget or DEFAULT_BUDGET
    morder = _ModuleOrder(order or (ring.order if ring.order.kind != "block"
                                    else MonomialOrder("grevlex")), split)

    basis: list[dict] = []
    leads: list = []
    pairs: list = []

    def add(vec: dict):
        lead = morder.lead_of(vec)
        c = vec[lead[0]].terms[lead[1]]
        if c != 1:
            vec = _vec_scale(vec, ring.field.invert(c))
        basis.append(vec)
        leads.append(lead)

    seed = [v for v in vecs if v]
    seed.sort(key=lambda v: _sort_key(morder, v))
    for v in seed:
        r = _module_nf(v, basis, leads, morder, ring) if basis else v
        if not r:
            continue
        add(r)
        pairs = _module_gm_update(pairs, leads, len(basis) - 1, morder)

    while pairs:
        budget.check_time("module buchberger")
        i, j, _ = pairs.pop(0)
        s = _module_spair(basis[i], basis[j], leads[i], leads[j], morder, ring)
        if not s:
            continue
        r = _module_nf(s, basis, leads, morder, ring)
        if not r:
            continue
        budget.check_degree(_vec_degree(r), "module buchberger")
        add(r)
        pairs = _module_gm_update(pairs, leads, len(basis) - 1, morder)

    # minimalize: drop elements whose lead is divisible by another lead
    keep = []
    for k, (p, e) in enumerate(leads):
        redundant = False
        for k2, (p2, e2) in enumerate(leads):
            if k2 == k or p2 != p:
                continue
            if kernel.exp_divides(e2, e) and (e2 != e or k2 < k):
                redundant = True
                break
        if not redundant:
            keep.append(k)
    minimal = [basis[k] for k in keep]
    minimal_leads = [leads[k] for k in keep]

    reduced = []
    for k, vec in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        other_leads = minimal_leads[:k] + minimal_leads[k + 1:]
        r = _module_nf(vec, others, other_leads, morder, ring)
        lead = morder.lead_of(r)
        c = r[lead[0]].terms[lead[1]]
        if c != 1:
            r = _vec_scale(r, ring.field.invert(c))
        reduced.append(r)
    reduced.sort(key=lambda v: _sort_key(morder, v))
    return reduced, morder


def _sort_key(morder: _ModuleOrder, vec: dict):
    pos, e = morder.lead_of(vec)
    return (pos >= morder.split, pos, morder.ring_order.key(e))


# ---------------------------------------------------------------------------
# syzygies and spans over a coordinate ring B = R/I


def _quotient_block(ring: RingDecl, nrows: int, budget) -> list[dict]:
    """Columns h*e_i for h in the reduced basis of the defining ideal."""
    cols = []
    for h in quotient_gb(ring, budget):
        for i in range(nrows):
            cols.append({i: h})
    return cols


def syzygy_columns(cols: list, nrows: int, ring: RingDecl,
                   budget: Budget | None = None) -> list[list[Poly]]:
    """Generators of the syzygy module of the given columns over R (no quotient)."""
    base = ring.polynomial_ring()
    vecs = []
    s = len(cols)
    for k, col in enumerate(cols):
        vec = _vec_from_column(col, base)
        vec[nrows + k] = base.one()
        vecs.append(vec)
    if not vecs:
        return []
    gb, morder = module_buchberger(vecs, nrows, base, budget)
    out = []
    for vec in gb:
        if all(pos >= nrows for pos in vec):
            out.append([vec.get(nrows + k, base.zero()) for k in range(s)])
    return out


def syzygy_over(ring: RingDecl, cols: list, nrows: int,
                budget: Budget | None = None) -> list[list[Poly]]:
    """Generators of the syzygies of the columns over B = R/I.

    Internally augments with the implicit I*e_i relations, then projects the
    polynomial-ring syzygies onto the visible coordinates and reduces mod I.
    """
    s = len(cols)
    base = ring.polynomial_ring()
    aug = [[p.migrate(base) for p in col] for col in cols]
    iblock = _quotient_block(ring, nrows, budget)
    all_cols = [list(c) for c in aug]
    for vec in iblock:
        col = [base.zero()] * nrows
        for i, p in vec.items():
            col[i] = p.migrate(base)
        all_cols.append(col)
    raw = syzygy_columns(all_cols, nrows, ring, budget)
    out = []
    seen = set()
    for row in raw:
        head = [nf_mod_ring(p.migrate(ring), budget) for p in row[:s]]
        if all(p.is_zero() for p in head):
            continue
        key = tuple(frozenset(p.terms.items()) for p in head)
        if key in seen:
            continue
        seen.add(key)
        out.append(head)
    return out


class SpanReducer:
    """Membership / normal form / lift against a span inside B^n.

    Built from generating columns; the implicit I*e_i relations are always
    included, so membership means membership modulo the defining ideal.
    """

    def __init__(self, ring: RingDecl, cols: list, nrows: int,
                 budget: Budget | None = None):
        self.ring = ring
        self.base = ring.polynomial_ring()
        self.nrows = nrows
        self.ncols = len(cols)
        budget = budget or DEFAULT_BUDGET
        vecs = []
        for k, col in enumerate(cols):
            vec = _vec_from_column(col, self.base)
            vec[nrows + k] = self.base.one()
            vecs.append(vec)
        offset = nrows + len(cols)
        for j, ivec in enumerate(_quotient_block(ring, nrows, budget)):
            vec = {i: p.migrate(self.base) for i, p in ivec.items()}
            vec[offset + j] = self.base.one()
            vecs.append(vec)
        vecs = [v for v in vecs if v]
        if vecs:
            self.gb, self.morder = module_buchberger(vecs, nrows, self.base, budget)
        else:
            self.gb, self.morder = [], _ModuleOrder(self.base.order, nrows)
        self.leads = [self.morder.lead_of(v) for v in self.gb]

    def reduce(self, col) -> tuple[list[Poly], list[Poly]]:
        """(normal form in B^n, quotients for the visible columns)."""
        vec = _vec_from_column(col, self.base)
        r = _module_nf(vec, self.gb, self.leads, self.morder, self.base,
                       value_only=True)
        remainder = [r.get(i, self.base.zero()) for i in range(self.nrows)]
        quots = [-r.get(self.nrows + k, self.base.zero()) for k in range(self.ncols)]
        return remainder, quots

    def contains(self, col) -> bool:
        remainder, _ = self.reduce(col)
        return all(p.is_zero() for p in remainder)

    def lift(self, col) -> list[Poly] | None:
        remainder, quots = self.reduce(col)
        if not all(p.is_zero() for p in remainder):
            return None
        return [nf_mod_ring(q.migrate(self.ring)) for q in quots]


# ---------------------------------------------------------------------------
# presented modules


class PresentedModule:
    """coker of a relation matrix over B, with optional ambient generators.

    relations: tuple of columns, each a tuple of Poly of length ambient_rank,
    entries in normal form modulo the ring's defining ideal.  generators, if
    given, embed the module's ambient basis into a parent free module B^m
    (used by duals, images, kernels and torsion submodules).
    """

    def __init__(self, ring: RingDecl, ambient_rank: int, relations,
                 generators=None, parent_rank: int | None = None,
                 budget: Budget | None = None):
        self.ring = ring
        self.ambient_rank = ambient_rank
        cols = []
        for col in relations:
            entries = tuple(nf_mod_ring(p.migrate(ring), budget) for p in col)
            if len(entries) != ambient_rank:
                raise ValueError("relation column of wrong length")
            if any(not p.is_zero() for p in entries):
                cols.append(entries)
        self.relations: tuple = tuple(cols)
        self.generators = None
        self.parent_rank = parent_rank
        if generators is not None:
            self.generators = tuple(
                tuple(nf_mod_ring(p.migrate(ring), budget) for p in g) for g in generators)
        self._fitting_cache: dict[int, Ideal] = {}

    # -- structural helpers ----------------------------------------------

    def relation_matrix(self) -> list[list[Poly]]:
        """Rows x columns, dense."""
        rows = []
        for i in range(self.ambient_rank):
            rows.append([col[i] for col in self.relations])
        return rows

    def augmented_columns(self, budget=None) -> list[list[Poly]]:
        """Relation columns plus the implicit I*e_i columns."""
        cols = [list(col) for col in self.relations]
        for vec in _quotient_block(self.ring, self.ambient_rank, budget):
            col = [self.ring.zero()] * self.ambient_rank
            for i, p in vec.items():
                col[i] = p
            cols.append(col)
        return cols

    def syzygy(self, budget: Budget | None = None) -> list[list[Poly]]:
        """Generators of the kernel of B^cols -> B^rows, v -> relations * v."""
        return syzygy_over(self.ring, [list(c) for c in self.relations],
                           self.ambient_rank, budget)

    def is_zero(self, budget: Budget | None = None) -> bool:
        return fitting_ideal(self, 0, budget).is_unit(budget)

    def __repr__(self):
        return (f"PresentedModule(rank {self.ambient_rank}, "
                f"{len(self.relations)} relations over {self.ring!r})")


def syzygy_matrix(module: PresentedModule, budget=None) -> list[list[Poly]]:
    return module.syzygy(budget)


def kernel_of_matrix(ring: RingDecl, matrix_cols: list, nrows: int,
                     budget=None) -> list[list[Poly]]:
    """Generators of ker(B^ncols -> B^nrows) for the column-matrix."""
    return syzygy_over(ring, matrix_cols, nrows, budget)


# ---------------------------------------------------------------------------
# Fitting ideals


def _make_det(entry, reduce_fn, zero: Poly):
    """Memoized Laplace expansion shared across all minors of one matrix."""

    @functools.lru_cache(maxsize=None)
    def det(rs: tuple, cs: tuple) -> Poly:
        if len(rs) == 1:
            return entry(rs[0], cs[0])
        total = None
        sign = 1
        for k, c in enumerate(cs):
            top = entry(rs[0], c)
            if not top.is_zero():
                sub = det(rs[1:], cs[:k] + cs[k + 1:])
                term = top * sub
                if sign < 0:
                    term = -term
                total = term if total is None else total + term
            sign = -sign
        if total is None:
            return zero
        return reduce_fn(total)

    return det


def fitting_ideal(module: PresentedModule, i: int, budget=None) -> Ideal:
    """F_i(M): ideal of (n-i)-minors of the augmented relation matrix, in B."""
    if i < 0:
        return Ideal(module.ring, [])
    cached = module._fitting_cache.get(i)
    if cached is not None:
        return cached
    ring = module.ring
    n = module.ambient_rank
    k = n - i
    if k <= 0:
        result = Ideal(ring, [ring.one()])
        module._fitting_cache[i] = result
        return result
    cols = module.augmented_columns(budget)
    m = len(cols)
    if k > m or k > n:
        result = Ideal(ring, [])
        module._fitting_cache[i] = result
        return result

    dense = cols  # cols[j][i] entry at row i, column j

    def entry(r, c):
        return dense[c][r]

    def reduce_fn(p: Poly) -> Poly:
        return nf_mod_ring(p, budget)

    det = _make_det(entry, reduce_fn, ring.zero())
    gens = []
    seen = set()
    for rows in itertools.combinations(range(n), k):
        for cs in itertools.combinations(range(m), k):
            d = reduce_fn(det(rows, cs))
            if d.is_zero():
                continue
            key = frozenset(d.monic().terms.items())
            if key in seen:
                continue
            seen.add(key)
            gens.append(d)
    result = Ideal(ring, gens)
    module._fitting_cache[i] = result
    return result


def generic_rank(module: PresentedModule, budget=None) -> int:
    """min i with F_i(M) nonzero in B (the rank at the generic point)."""
    for i in range(module.ambient_rank + 1):
        f = fitting_ideal(module, i, budget)
        if any(not g.is_zero() for g in f.gens):
            return i
    return module.ambient_rank


def minimal_generator_bound(module: PresentedModule, budget=None) -> int:
    """min i with F_i(M) = (1): the sup over points of beta_0(M_x)."""
    for i in range(module.ambient_rank + 1):
        if fitting_ideal(module, i, budget).is_unit(budget):
            return i
    return module.ambient_rank + 1  # cannot happen for honest presentations


# ---------------------------------------------------------------------------
# resolutions


@dataclass
class Resolution:
    """Chain of matrices d_1, d_2, ... over B with d_i . d_{i+1} = 0 mod I."""

    ring: RingDecl
    ambient_rank: int
    maps: list  # each entry: list of columns (tuples of Poly)
    terminated: bool
    minimal_at: str | None = None

    def length(self) -> int:
        return len(self.maps)

    def rank_at(self, level: int) -> int:
        if level == 0:
            return self.ambient_rank
        if level <= len(self.maps):
            return len(self.maps[level - 1])
        return 0


@dataclass
class BettiNumbers:
    """Local Betti data at the origin plus Euler characteristics."""

    betti: list[int]
    pd_exact: int | None
    pd_atleast: int | None

    @property
    def euler(self) -> int:
        return sum((-1) ** i * b for i, b in enumerate(self.betti))

    def partial_euler(self, i: int) -> int:
        return sum((-1) ** j * b for j, b in enumerate(self.betti) if j >= i)

    def pd_label(self) -> str:
        if self.pd_exact is not None:
            return str(self.pd_exact)
        return f"at-least({self.pd_atleast})"


def default_cutoff(module: PresentedModule, budget=None) -> int:
    ring = module.ring
    if not ring.ideal_gens:
        return ring.nvars + 1
    from plocus.groebner import krull_dim
    d = krull_dim(Ideal(ring.polynomial_ring(), list(ring.ideal_gens)), budget)
    return 2 * max(d, 0) + 2


def free_resolution(module: PresentedModule, cutoff: int | None = None,
                    budget=None) -> Resolution:
    """Resolve by iterated syzygies; flags truncation at the cutoff."""
    if cutoff is None:
        cutoff = default_cutoff(module, budget)
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    current = [list(c) for c in module.relations]
    nrows = module.ambient_rank
    if not current:
        return Resolution(module.ring, nrows, [], True)
    maps = [[tuple(c) for c in current]]
    terminated = False
    while len(maps) < cutoff:
        syz = syzygy_over(module.ring, current, nrows, budget)
        if not syz:
            terminated = True
            break
        nrows = len(current)
        current = [list(col) for col in _rows_to_cols(syz, nrows)]
        maps.append([tuple(c) for c in current])
    else:
        terminated = not syzygy_over(module.ring, current, nrows, budget)
    return Resolution(module.ring, module.ambient_rank, maps, terminated)


def _rows_to_cols(vectors: list[list[Poly]], length: int) -> list[tuple]:
    """Each vector (length = #columns of previous matrix) becomes a column."""
    return [tuple(vec) for vec in vectors]


def _const_of(p: Poly):
    return p.constant_term()


def _origin_check(ring: RingDecl):
    for g in ring.ideal_gens:
        if g.constant_term():
            raise PointNotOnVarietyError(
                f"origin does not lie on V(ideal of {ring.name})")


def minimal_presentation_at_origin(module: PresentedModule, budget=None):
    """Presentation with all relation entries in the maximal ideal at 0.

    Unit pivots are split off by column operations scaled by the pivot (unit
    multiples of relations present the same cokernel locally), then the pivot
    row and column are removed.  Returns (row indices kept, columns).
    """
    _origin_check(module.ring)
    ring = module.ring
    rows = list(range(module.ambient_rank))
    cols = [list(c) for c in module.relations]

    while True:
        pivot = None
        for ci, col in enumerate(cols):
            for ri in range(len(rows)):
                if col[ri].constant_term():
                    pivot = (ri, ci)
                    break
            if pivot:
                break
        if pivot is None:
            break
        ri, ci = pivot
        u = cols[ci][ri]
        new_cols = []
        for cj, col in enumerate(cols):
            if cj == ci:
                continue
            lam = col[ri]
            if lam.is_zero():
                new_col = [p for k, p in enumerate(col) if k != ri]
            else:
                new_col = []
                for k in range(len(rows)):
                    if k == ri:
                        continue
                    val = u * col[k] - lam * cols[ci][k]
                    new_col.append(nf_mod_ring(val, budget))
            new_cols.append(new_col)
        rows.pop(ri)
        cols = [c for c in new_cols if any(not p.is_zero() for p in c)]
    return rows, [tuple(c) for c in cols]


def minimize_at_origin(module: PresentedModule, cutoff: int | None = None,
                       budget=None) -> tuple[Resolution, BettiNumbers]:
    """Minimal free resolution of the localization at the origin.

    Level zero minimizes the presentation; above that, any syzygy carrying a
    unit coefficient marks a locally redundant generator, which is dropped
    before the syzygies are recomputed.  All maps stay polynomial and all
    entries vanish at the origin.
    """
    if cutoff is None:
        cutoff = default_cutoff(module, budget)
    ring = module.ring
    rows, cols = minimal_presentation_at_origin(module, budget)
    if not rows:
        res = Resolution(ring, 0, [], True, minimal_at="origin")
        return res, BettiNumbers([], 0, None)

    betti = [len(rows)]
    maps = []
    current = [list(c) for c in cols]
    nrows = len(rows)
    terminated = not current
    level = 1
    while current and level <= cutoff:
        (budget or DEFAULT_BUDGET).check_time("minimize_at_origin")
        syz = syzygy_over(ring, current, nrows, budget)
        dropped = None
        for vec in syz:
            for r, coeff in enumerate(vec):
                if coeff.constant_term():
                    dropped = r
                    break
            if dropped is not None:
                break
        if dropped is not None:
            # a syzygy with a unit coefficient marks a locally redundant
            # generator: drop it and recompute
            current.pop(dropped)
            if not current:
                terminated = True
            continue
        maps.append([tuple(c) for c in current])
        betti.append(len(current))
        if not syz:
            terminated = True
            break
        nrows = len(current)
        current = [list(col) for col in _rows_to_cols(syz, nrows)]
        level += 1

    res = Resolution(ring, betti[0], maps, terminated, minimal_at="origin")
    if terminated:
        data = BettiNumbers(betti, len(betti) - 1, None)
    else:
        data = BettiNumbers(betti, None, cutoff)
    return res, data


def betti_via_tor(module: PresentedModule, depth_needed: int | None = None,
                  budget=None) -> list[int]:
    """Independent Betti oracle: ranks of Tor against the residue field.

    Evaluates a (possibly non-minimal) free resolution at the origin and takes
    homology of the resulting complex of constant matrices.
    """
    _origin_check(module.ring)
    res = free_resolution(module, budget=budget)
    if not res.terminated:
        raise BudgetExceededError("betti_via_tor needs a finite resolution")
    mats = []
    ranks = [res.ambient_rank]
    for level, cols in enumerate(res.maps):
        nrows = ranks[-1]
        mat = [[_const_of(col[i]) for col in cols] for i in range(nrows)]
        mats.append(mat)
        ranks.append(len(cols))
    field = module.ring.field
    rks = []
    for m in mats:
        if not m or not m[0]:
            rks.append(0)
        else:
            rks.append(exact_rank(m, field))
    betti = []
    for i in range(len(ranks)):
        r_i = rks[i - 1] if i >= 1 else 0
        r_next = rks[i] if i < len(rks) else 0
        betti.append(ranks[i] - r_i - r_next)
    while betti and betti[-1] == 0:
        betti.pop()
    return betti


def exact_rank(matrix, field) -> int:
    """Rank of a constant matrix over Q or F_p, by exact elimination."""
    if not matrix or not matrix[0]:
        return 0
    p = field.characteristic
    m = [row[:] for row in matrix]
    nrows, ncols = len(m), len(m[0])
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = None
        for r in range(row, nrows):
            if m[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = field.invert(m[row][col])
        m[row] = [(v * inv) % p if p else v * inv for v in m[row]]
        for r in range(nrows):
            if r != row and m[r][col]:
                c = m[r][col]
                if p:
                    m[r] = [(a - c * b) % p for a, b in zip(m[r], m[row])]
                else:
                    m[r] = [a - c * b for a, b in zip(m[r], m[row])]
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank


# ---------------------------------------------------------------------------
# dual, transpose, Ext


def dual_module(module: PresentedModule, budget=None) -> PresentedModule:
    """Hom_B(M, B) presented by its generators inside B^n."""
    ring = module.ring
    n = module.ambient_rank
    rows = module.relation_matrix()  # n rows, m cols
    transposed_cols = [list(r) for r in rows]  # columns of A^T, each length m
    m = len(module.relations)
    if m == 0:
        gens = [[ring.one() if i == j else ring.zero() for i in range(n)]
                for j in range(n)]
    else:
        gens = syzygy_over(ring, transposed_cols, m, budget)
        gens = [list(g) for g in gens]
        # syzygy vectors have length n = number of columns of A^T
    relations = syzygy_over(ring, [list(g) for g in _cols_from_gens(gens)],
                            n, budget) if gens else []
    rel_cols = _rows_to_cols(relations, len(gens)) if gens else []
    return PresentedModule(ring, len(gens), rel_cols,
                           generators=[tuple(g) for g in gens], parent_rank=n,
                           budget=budget)


def _cols_from_gens(gens: list[list[Poly]]) -> list[list[Poly]]:
    """Interpret each generator (a vector in B^n) as a matrix column."""
    return [list(g) for g in gens]


def transpose_module(module: PresentedModule, budget=None) -> PresentedModule:
    """Cokernel of the transposed presentation matrix."""
    rows = module.relation_matrix()
    m = len(module.relations)
    cols = [tuple(r) for r in rows]  # each row becomes a column of length m
    return PresentedModule(module.ring, m, cols, budget=budget)


def ext_module(module: PresentedModule, i: int, budget=None) -> PresentedModule:
    """Ext^i_B(M, B) as a subquotient presentation from a free resolution."""
    if i < 0:
        raise ValueError("negative Ext index")
    if i == 0:
        return dual_module(module, budget)
    ring = module.ring
    res = free_resolution(module, cutoff=max(default_cutoff(module, budget), i + 1),
                          budget=budget)
    if res.length() < i + 1 and not res.terminated:
        raise BudgetExceededError(f"resolution truncated before level {i + 1}")

    rank_i = res.rank_at(i)
    if rank_i == 0:
        return PresentedModule(ring, 0, [])

    # kernel of d_{i+1}^T : (F_i)^* -> (F_{i+1})^*
    if i < res.length():
        d_next = res.maps[i]  # columns: F_{i+1} generators expressed in F_i
        dual_cols = []
        for r in range(rank_i):
            dual_cols.append([col[r] for col in d_next])
        ker_gens = syzygy_over(ring, dual_cols, len(d_next), budget)
        ker_gens = [list(g) for g in ker_gens]
    else:
        ker_gens = [[ring.one() if a == b else ring.zero() for a in range(rank_i)]
                    for b in range(rank_i)]
    if not ker_gens:
        return PresentedModule(ring, 0, [])

    # image of d_i^T : columns are the rows of d_i
    d_i = res.maps[i - 1]
    rank_prev = res.rank_at(i - 1)
    image_cols = []
    for r in range(rank_prev):
        image_cols.append([col[r] for col in d_i])

    reducer = SpanReducer(ring, _cols_from_gens(ker_gens), rank_i, budget)
    lifts = []
    for col in image_cols:
        lift = reducer.lift(col)
        if lift is None:
            raise RuntimeError("image of dual map escaped the kernel; "
                               "resolution is not a complex")
        lifts.append(tuple(lift))
    inner = syzygy_over(ring, _cols_from_gens(ker_gens), rank_i, budget)
    rel_cols = list(lifts) + list(_rows_to_cols(inner, len(ker_gens)))
    return PresentedModule(ring, len(ker_gens), rel_cols,
                           generators=[tuple(g) for g in ker_gens],
                           parent_rank=rank_i, budget=budget)


# ---------------------------------------------------------------------------
# torsion and depth


def torsion_submodule(module: PresentedModule, witness: Poly,
                      budget=None, max_power: int = 24) -> PresentedModule:
    """Elements killed by a power of the witness, with ambient generators.

    Saturates the zero submodule: at each stage the vectors v with
    witness^k * v in the relation span are collected, until stable.
    """
    if witness.is_zero():
        raise ValueError("torsion witness must be nonzero")
    ring = module.ring
    n = module.ambient_rank
    witness = nf_mod_ring(witness.migrate(ring), budget)
    rel_cols = [list(c) for c in module.relations]

    def quotient_gens(power: Poly) -> list[list[Poly]]:
        scaled = [[power if i == j else ring.zero() for i in range(n)]
                  for j in range(n)]
        cols = [list(c) for c in scaled] + rel_cols
        syz = syzygy_over(ring, cols, n, budget)
        gens = []
        for vec in syz:
            head = vec[:n]
            if any(not p.is_zero() for p in head):
                gens.append(list(head))
        return gens

    rel_reducer = SpanReducer(ring, rel_cols, n, budget)
    prev: list[list[Poly]] = []
    power = ring.one()
    for k in range(1, max_power + 1):
        power = nf_mod_ring(power * witness, budget)
        gens = [g for g in quotient_gens(power)
                if not rel_reducer.contains(g)]
        span = SpanReducer(ring, [list(g) for g in prev] + rel_cols, n, budget) \
            if prev else rel_reducer
        if all(span.contains(g) for g in gens):
            break
        prev = gens
    else:
        raise BudgetExceededError("torsion saturation did not stabilize")

    if not prev:
        return PresentedModule(ring, 0, [], generators=[], parent_rank=n)
    relations = syzygy_over(ring, [list(g) for g in prev] + rel_cols, n, budget)
    rel_out = []
    for vec in relations:
        head = tuple(vec[:len(prev)])
        if any(not p.is_zero() for p in head):
            rel_out.append(head)
    return PresentedModule(ring, len(prev), rel_out,
                           generators=[tuple(g) for g in prev], parent_rank=n,
                           budget=budget)


def as_module_over_polynomial_ring(module: PresentedModule, budget=None) -> PresentedModule:
    """The same abelian group viewed over the ambient polynomial ring."""
    ring = module.ring
    if not ring.ideal_gens:
        return module
    base = ring.polynomial_ring()
    cols = [tuple(p.migrate(base) for p in col)
            for col in module.augmented_columns(budget)]
    return PresentedModule(base, module.ambient_rank, cols, budget=budget)


def depth_at_origin(module: PresentedModule, budget=None) -> int | float:
    """Auslander-Buchsbaum over the regular ambient ring: nvars - pd at 0."""
    over_r = as_module_over_polynomial_ring(module, budget)
    _, data = minimize_at_origin(over_r, cutoff=over_r.ring.nvars + 1, budget=budget)
    if not data.betti:
        return float("inf")
    if data.pd_exact is None:
        raise BudgetExceededError("projective dimension did not resolve")
    return over_r.ring.nvars - data.pd_exact
