"""Groebner bases for ideals: Buchberger completion with Gebauer-Moeller
pair pruning, reduction, elimination, saturation, quotients, radical
membership, and combinatorial Krull dimension.

Everything is deterministic: the pair queue is kept sorted, reduction always
divides by the basis element with the smallest dividing leading monomial, and
reduced bases are unique for a fixed ring and order.
"""

from __future__ import annotations

import itertools
import threading
import time

from plocus import kernel
from plocus.errors import BudgetExceededError, RingMismatchError
from plocus.rings import MonomialOrder, Poly, RingDecl


class Budget:
    """Degree/time limits for completion-type algorithms.

    Exceeding a limit raises BudgetExceededError; there is never a silently
    truncated answer.
    """

    __slots__ = ("degree_cap", "seconds", "_deadline")

    def __init__(self, degree_cap: int = 40, seconds: float | None = None):
        self.degree_cap = degree_cap
        self.seconds = seconds
        self._deadline = time.monotonic() + seconds if seconds else None

    def restarted(self) -> "Budget":
        return Budget(self.degree_cap, self.seconds)

    def check_degree(self, degree: int, context: str):
        if degree > self.degree_cap:
            raise BudgetExceededError(
                f"{context}: degree {degree} exceeds cap {self.degree_cap}")

    def check_time(self, context: str):
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise BudgetExceededError(f"{context}: time budget exceeded")


DEFAULT_BUDGET = Budget()


class GroebnerBasis:
    """Reduced basis: monic, inter-reduced, sorted by increasing lead."""

    __slots__ = ("ring", "order", "elements", "leads")

    def __init__(self, ring: RingDecl, order: MonomialOrder, elements: list[Poly]):
        self.ring = ring
        self.order = order
        self.elements = list(elements)
        self.leads = [p.leading(order)[0] for p in self.elements]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def is_unit_ideal(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_one()

    def contains(self, p: Poly) -> bool:
        return normal_form(p, self).is_zero()

    def generator_strings(self) -> list[str]:
        return [str(g) for g in self.elements]


def spolynomial(f: Poly, g: Poly, order: MonomialOrder) -> Poly:
    ef, cf = f.leading(order)
    eg, cg = g.leading(order)
    lcm = kernel.exp_lcm(ef, eg)
    field = f.ring.field
    mf = f.mul_term(kernel.exp_div(lcm, ef), field.invert(cf))
    mg = g.mul_term(kernel.exp_div(lcm, eg), field.invert(cg))
    return mf - mg


def normal_form(p: Poly, basis: GroebnerBasis) -> Poly:
    """Full remainder of p under division by the basis."""
    order = basis.order
    key = order.key
    field = p.ring.field
    char = field.characteristic
    exp_div = kernel.exp_div
    find_reducer = kernel.find_reducer
    leads = basis.leads
    elements = basis.elements

    work = dict(p.terms)
    remainder: dict = {}
    while work:
        e = max(work, key=key)
        c = work.pop(e)
        i = find_reducer(leads, e)
        if i < 0:
            remainder[e] = c
            continue
        g = elements[i]
        shift = exp_div(e, leads[i])
        # basis elements are monic, so the cancelling multiple is c * x^shift
        for eg, cg in g.terms.items():
            if eg == leads[i]:
                continue
            e2 = kernel.exp_mul(eg, shift)
            v = work.get(e2, 0) - c * cg
            if char:
                v %= char
            if v:
                work[e2] = v
            elif e2 in work:
                del work[e2]
    return Poly(p.ring, remainder)


def _reduce_by_list(p: Poly, polys: list[Poly], order: MonomialOrder) -> Poly:
    """Normal form against an ad-hoc (monic) list sorted by increasing lead."""
    basis = GroebnerBasis(p.ring, order, polys) if polys else None
    return normal_form(p, basis) if basis else p


def _gm_update(basis, pairs, h_index, order, leads):
    """Gebauer-Moeller pair update when basis[h_index] enters."""
    lcm = kernel.exp_lcm
    divides = kernel.exp_divides
    coprime = kernel.exp_coprime
    t = leads[h_index]

    fresh = [(i, lcm(leads[i], t)) for i in range(h_index)]

    # criterion M: drop (i,h) when another (j,h) has a properly dividing lcm
    kept1 = []
    for i, l in fresh:
        redundant = False
        for j, l2 in fresh:
            if l2 != l and divides(l2, l):
                redundant = True
                break
        if redundant:
            continue
        kept1.append((i, l))
    # criterion F: among equal lcms keep one representative (smallest index)
    seen: dict = {}
    for i, l in kept1:
        if l not in seen:
            seen[l] = (i, l)
    kept2 = list(seen.values())
    # criterion B (product): coprime leads reduce to zero
    new_pairs = [(i, h_index, l) for i, l in kept2 if not coprime(leads[i], t)]

    # prune old pairs whose lcm is divisible by the new lead
    survivors = []
    for i, j, l in pairs:
        if divides(t, l) and lcm(leads[i], t) != l and lcm(leads[j], t) != l:
            continue
        survivors.append((i, j, l))
    survivors.extend(new_pairs)
    survivors.sort(key=lambda item: (order.key(item[2]), item[0], item[1]))
    return survivors


def buchberger_basis(gens: list[Poly], order: MonomialOrder,
                     budget: Budget | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by gens."""
    if not gens:
        raise ValueError("empty generator list")
    ring = gens[0].ring
    budget = budget or DEFAULT_BUDGET

    basis: list[Poly] = []
    leads: list[tuple] = []
    pairs: list = []

    def reducer_view() -> GroebnerBasis:
        ordered = sorted(basis, key=lambda p: order.key(p.leading(order)[0]))
        return GroebnerBasis(ring, order, ordered)

    for g in sorted((g for g in gens if not g.is_zero()),
                    key=lambda p: order.key(p.leading(order)[0])):
        if basis:
            g = normal_form(g, reducer_view())
        if g.is_zero():
            continue
        g = g.monic(order)
        basis.append(g)
        leads.append(g.leading(order)[0])
        pairs = _gm_update(basis, pairs, len(basis) - 1, order, leads)

    live = reducer_view()
    while pairs:
        budget.check_time("buchberger")
        i, j, _ = pairs.pop(0)
        s = spolynomial(basis[i], basis[j], order)
        if s.is_zero():
            continue
        r = normal_form(s, live)
        if r.is_zero():
            continue
        budget.check_degree(r.total_degree(), "buchberger")
        r = r.monic(order)
        basis.append(r)
        leads.append(r.leading(order)[0])
        pairs = _gm_update(basis, pairs, len(basis) - 1, order, leads)
        live = reducer_view()

    return _reduce_basis(ring, order, basis)


def _reduce_basis(ring: RingDecl, order: MonomialOrder, polys: list[Poly]) -> GroebnerBasis:
    # minimalize: no lead divides another
    polys = sorted(polys, key=lambda p: order.key(p.leading(order)[0]))
    minimal: list[Poly] = []
    for p in polys:
        e = p.leading(order)[0]
        if any(kernel.exp_divides(q.leading(order)[0], e) for q in minimal):
            continue
        minimal.append(p)
    # tail-reduce each against the others
    reduced: list[Poly] = []
    for i, p in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        r = _reduce_by_list(p, others, order).monic(order)
        reduced.append(r)
    reduced.sort(key=lambda p: order.key(p.leading(order)[0]))
    return GroebnerBasis(ring, order, reduced)


# ---------------------------------------------------------------------------
# Ideals


class Ideal:
    """Finitely generated ideal with a memoized reduced Groebner basis.

    The cache is keyed by order and guarded by a lock: concurrent readers get
    compute-once semantics.
    """

    def __init__(self, ring: RingDecl, gens):
        self.ring = ring
        self.gens: tuple[Poly, ...] = tuple(g.migrate(ring) for g in gens)
        self._cache: dict = {}
        self._lock = threading.Lock()

    def groebner(self, order: MonomialOrder | None = None,
                 budget: Budget | None = None) -> GroebnerBasis:
        order = order or self.ring.order
        key = (order.kind, order.block_split)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        gens = [g for g in self.gens if not g.is_zero()]
        if not gens:
            gb = GroebnerBasis(self.ring, order, [])
        else:
            gb = buchberger_basis(gens, order, budget)
        with self._lock:
            self._cache.setdefault(key, gb)
            return self._cache[key]

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.gens)

    def is_unit(self, budget: Budget | None = None) -> bool:
        gb = self.groebner(budget=budget)
        return gb.is_unit_ideal()

    def contains(self, p: Poly, budget: Budget | None = None) -> bool:
        gb = self.groebner(budget=budget)
        if not gb.elements:
            return p.is_zero()
        return normal_form(p, gb).is_zero()

    def contains_ideal(self, other: "Ideal", budget: Budget | None = None) -> bool:
        return all(self.contains(g, budget) for g in other.gens)

    def equals(self, other: "Ideal", budget: Budget | None = None) -> bool:
        return self.contains_ideal(other, budget) and other.contains_ideal(self, budget)

    def generator_strings(self, budget: Budget | None = None) -> list[str]:
        gb = self.groebner(budget=budget)
        if not gb.elements:
            return ["0"]
        return gb.generator_strings()

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.gens)})"


def ideal_membership(p: Poly, ideal: Ideal, budget: Budget | None = None) -> bool:
    return ideal.contains(p, budget)


# ---------------------------------------------------------------------------
# Derived rings (variable reordering / extension) for elimination tricks


def _reordered_ring(ring: RingDecl, first: list[str], tag: str) -> RingDecl:
    rest = [v for v in ring.vars if v not in first]
    return RingDecl(f"{ring.name}{tag}", tuple(first) + tuple(rest), ring.field,
                    MonomialOrder("block", block_split=len(first)))


def _fresh_var(ring: RingDecl, stem: str = "_z") -> str:
    name = stem
    k = 0
    while name in ring.vars:
        k += 1
        name = f"{stem}{k}"
    return name


def eliminate(ideal: Ideal, drop_vars, budget: Budget | None = None) -> Ideal:
    """I intersected with k[remaining vars], via a block-order basis.

    The result lives in a ring on the remaining variables (original order).
    """
    ring = ideal.ring
    drop = [v for v in ring.vars if v in set(drop_vars)]
    keep = [v for v in ring.vars if v not in set(drop_vars)]
    keep_ring = RingDecl(f"{ring.name}_sub", tuple(keep), ring.field, ring.order)
    if not drop:
        return Ideal(keep_ring if keep != list(ring.vars) else ring, ideal.gens)
    work = _reordered_ring(ring, drop, "_elim")
    gens = [g.migrate(work) for g in ideal.gens if not g.is_zero()]
    if not gens:
        return Ideal(keep_ring, [])
    gb = buchberger_basis(gens, work.order, budget)
    split = len(drop)
    kept = []
    for g in gb:
        if all(not any(e[:split]) for e in g.terms):
            kept.append(g.migrate(keep_ring))
    return Ideal(keep_ring, kept)


def saturate(ideal: Ideal, f: Poly, budget: Budget | None = None) -> Ideal:
    """(I : f^infinity) via the Rabinowitsch-style extra variable."""
    if f.is_zero():
        raise ValueError("cannot saturate by zero")
    ring = ideal.ring
    if f.is_constant():
        ideal.groebner(budget=budget)
        return ideal
    z = _fresh_var(ring)
    ext = RingDecl(f"{ring.name}_sat", (z,) + ring.vars, ring.field,
                   MonomialOrder("block", block_split=1))
    gens = [g.migrate(ext) for g in ideal.gens]
    gens.append(ext.var(z) * f.migrate(ext) - ext.one())
    gb = buchberger_basis([g for g in gens if not g.is_zero()], ext.order, budget)
    kept = [g.migrate(ring) for g in gb if all(not e[0] for e in g.terms)]
    return Ideal(ring, kept)


def ideal_quotient(ideal: Ideal, f: Poly, budget: Budget | None = None) -> Ideal:
    """(I : f) = {a : a*f in I}, via the syzygy of the row [f | gens]."""
    from plocus.modules import syzygy_columns  # local import to avoid a cycle

    ring = ideal.ring
    if f.is_zero():
        return Ideal(ring, [ring.one()])
    cols = [[f]] + [[g] for g in ideal.gens]
    syz = syzygy_columns(cols, 1, ring.polynomial_ring(), budget=budget)
    gens = []
    for vec in syz:
        a = vec[0]
        if not a.is_zero():
            gens.append(a)
    if not gens:
        return Ideal(ring, [])
    return Ideal(ring, buchberger_basis(gens, ring.order, budget).elements)


def radical_membership(p: Poly, ideal: Ideal, budget: Budget | None = None) -> bool:
    """p in sqrt(I), decided by 1 in I + (z*p - 1)."""
    if p.is_zero():
        return True
    ring = ideal.ring
    z = _fresh_var(ring)
    ext = RingDecl(f"{ring.name}_rad", (z,) + ring.vars, ring.field,
                   MonomialOrder("block", block_split=1))
    gens = [g.migrate(ext) for g in ideal.gens if not g.is_zero()]
    gens.append(ext.var(z) * p.migrate(ext) - ext.one())
    gb = buchberger_basis(gens, ext.order, budget)
    return gb.is_unit_ideal()


# ---------------------------------------------------------------------------
# Dimension


def krull_dim(ideal: Ideal, budget: Budget | None = None,
              order: MonomialOrder | None = None) -> int:
    """Krull dimension of R/(ring ideal + gens); -1 for the unit ideal.

    Computed as the maximal size of a variable set meeting no support of a
    leading monomial of the initial ideal (combinatorial dimension).
    """
    ring = ideal.ring
    gens = [g for g in ideal.gens if not g.is_zero()]
    gens += [g for g in ring.ideal_gens if not g.is_zero()]
    n = ring.nvars
    if not gens:
        return n
    base = ring.polynomial_ring()
    use_order = order or (base.order if base.order.kind != "block" else MonomialOrder("grevlex"))
    gb = buchberger_basis([g.migrate(base) for g in gens], use_order, budget)
    if gb.is_unit_ideal():
        return -1
    supports = []
    for e in gb.leads:
        supports.append(frozenset(i for i, x in enumerate(e) if x))
    supports = set(supports)
    for size in range(n, -1, -1):
        for combo in itertools.combinations(range(n), size):
            s = set(combo)
            if all(not sup <= s for sup in supports):
                return size
    return 0


def codim_in(ambient: Ideal, locus: Ideal, budget: Budget | None = None) -> int | None:
    """dim(R/ambient) - dim(R/(ambient+locus)); None when the locus is empty."""
    ring = ambient.ring
    total = Ideal(ring, list(ambient.gens) + [g.migrate(ring) for g in locus.gens])
    d_locus = krull_dim(total, budget)
    if d_locus < 0:
        return None
    d_amb = krull_dim(ambient, budget)
    return d_amb - d_locus


def quotient_gb(ring: RingDecl, budget: Budget | None = None) -> GroebnerBasis:
    """Reduced basis of the ring's defining ideal (memoized on the ring)."""
    key = (ring.order.kind, ring.order.block_split, "quotient")
    with ring._gb_lock:
        hit = ring._gb_cache.get(key)
    if hit is not None:
        return hit
    gens = [g for g in ring.ideal_gens if not g.is_zero()]
    gb = GroebnerBasis(ring, ring.order, []) if not gens else \
        buchberger_basis(gens, ring.order, budget)
    with ring._gb_lock:
        ring._gb_cache.setdefault(key, gb)
        return ring._gb_cache[key]


def nf_mod_ring(p: Poly, budget: Budget | None = None) -> Poly:
    """Normal form modulo the ring's defining ideal."""
    gb = quotient_gb(p.ring, budget)
    if not gb.elements:
        return p
    return normal_form(p, gb)
