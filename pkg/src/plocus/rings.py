"""Exact multivariate polynomials over Q or a prime field.

A Poly is a sparse map from exponent tuples to nonzero coefficients
(fractions.Fraction in characteristic 0, ints in [0, p) in characteristic p).
Canonical form is enforced at construction: no zero coefficients are stored,
so equality of term maps is equality of polynomials.
"""

from __future__ import annotations

import threading
from fractions import Fraction

from plocus import kernel
from plocus.errors import (
    ExponentOverflowError,
    PolySyntaxError,
    RingMismatchError,
    UnknownVariableError,
)

EXPONENT_CAP = 1 << 16


class FieldSpec:
    """Coefficient field: exact rationals or F_p for a prime p < 2**31."""

    __slots__ = ("characteristic",)

    def __init__(self, characteristic: int = 0):
        if characteristic:
            if characteristic < 2 or characteristic >= 1 << 31 or not _is_prime(characteristic):
                raise ValueError(f"characteristic must be 0 or a prime < 2^31, got {characteristic}")
        self.characteristic = characteristic

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    def coerce(self, value) -> Fraction | int:
        p = self.characteristic
        if p:
            if isinstance(value, Fraction):
                if value.denominator % p == 0:
                    raise ZeroDivisionError(f"denominator divisible by {p}")
                return value.numerator * pow(value.denominator, -1, p) % p
            return int(value) % p
        if isinstance(value, Fraction):
            return value
        return Fraction(value)

    def invert(self, value):
        if self.characteristic:
            return pow(value, -1, self.characteristic)
        return 1 / value

    def coeff_str(self, value) -> str:
        return str(value)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("FieldSpec", self.characteristic))

    def __repr__(self):
        return "Q" if self.is_rational else f"F{self.characteristic}"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class MonomialOrder:
    """lex, grevlex, or a two-block grevlex elimination order.

    block_split = k means variables [0, k) form the dominating block.
    """

    __slots__ = ("kind", "block_split")

    def __init__(self, kind: str = "grevlex", block_split: int | None = None):
        if kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown order kind {kind!r}")
        if (kind == "block") != (block_split is not None):
            raise ValueError("block_split is required exactly for block orders")
        self.kind = kind
        self.block_split = block_split

    def compare(self, e1: tuple, e2: tuple) -> int:
        if len(e1) != len(e2):
            raise RingMismatchError("exponent vectors of different lengths")
        if self.kind == "grevlex":
            return kernel.cmp_grevlex(e1, e2)
        if self.kind == "lex":
            return kernel.cmp_lex(e1, e2)
        return kernel.cmp_block(e1, e2, self.block_split)

    def key(self, e: tuple):
        """Sort key consistent with compare (bigger key = bigger monomial)."""
        if self.kind == "grevlex":
            return (sum(e), tuple(-x for x in reversed(e)))
        if self.kind == "lex":
            return e
        s = self.block_split
        head, tail = e[:s], e[s:]
        return (
            sum(head),
            tuple(-x for x in reversed(head)),
            sum(tail),
            tuple(-x for x in reversed(tail)),
        )

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and other.kind == self.kind
            and other.block_split == self.block_split
        )

    def __hash__(self):
        return hash(("MonomialOrder", self.kind, self.block_split))

    def __repr__(self):
        if self.kind == "block":
            return f"block({self.block_split})"
        return self.kind


class RingDecl:
    """A coordinate ring k[vars]/(ideal_gens); ideal_gens may be empty.

    Immutable after construction.  The defining ideal's reduced Groebner
    basis (under the ring's own order) is memoized with compute-once
    semantics so concurrent readers share one computation.
    """

    def __init__(self, name: str, variables, field: FieldSpec,
                 order: MonomialOrder | None = None, ideal_gens=()):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in ring {name}")
        self.name = name
        self.vars = variables
        self.field = field
        self.order = order or MonomialOrder("grevlex")
        self.ideal_gens: tuple[Poly, ...] = tuple(ideal_gens)
        self._var_index = {v: i for i, v in enumerate(variables)}
        self._gb_cache: dict = {}
        self._gb_lock = threading.Lock()

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def var_index(self, name: str) -> int:
        try:
            return self._var_index[name]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {name!r} in ring {self.name}", 0) from None

    def var(self, name: str) -> "Poly":
        i = self.var_index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.field.coerce(1)})

    def const(self, value) -> "Poly":
        c = self.field.coerce(value)
        if not c:
            return Poly(self, {})
        return Poly(self, {(0,) * self.nvars: c})

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def with_ideal(self, gens) -> "RingDecl":
        """Same variables/field/order, new defining ideal."""
        ring = RingDecl(self.name, self.vars, self.field, self.order)
        ring.ideal_gens = tuple(g.migrate(ring) for g in gens)
        return ring

    def polynomial_ring(self) -> "RingDecl":
        """The ambient polynomial ring (defining ideal dropped)."""
        if not self.ideal_gens:
            return self
        return RingDecl(self.name, self.vars, self.field, self.order)

    def compatible(self, other: "RingDecl") -> bool:
        return self.vars == other.vars and self.field == other.field

    def __repr__(self):
        quot = f"/({len(self.ideal_gens)} gens)" if self.ideal_gens else ""
        return f"{repr(self.field)}[{','.join(self.vars)}]{quot}"


class Poly:
    """Canonical sparse polynomial; immutable by convention."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingDecl, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- construction helpers -------------------------------------------

    @staticmethod
    def from_terms(ring: RingDecl, items) -> "Poly":
        terms: dict = {}
        for e, c in items:
            c = ring.field.coerce(c)
            if e in terms:
                c = terms[e] + c
                if ring.field.characteristic:
                    c %= ring.field.characteristic
            if c:
                terms[e] = c
            elif e in terms:
                del terms[e]
        return Poly(ring, terms)

    # -- predicates ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_one(self) -> bool:
        if len(self.terms) != 1:
            return False
        e, c = next(iter(self.terms.items()))
        return not any(e) and c == 1

    def constant_term(self):
        zero = (0,) * self.ring.nvars
        return self.terms.get(zero, self.ring.field.coerce(0))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(kernel.exp_degree(e) for e in self.terms)

    def variables_used(self) -> set[int]:
        used: set[int] = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used.add(i)
        return used

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "Poly"):
        if other.ring is not self.ring and not self.ring.compatible(other.ring):
            raise RingMismatchError(f"polynomials from {self.ring} and {other.ring}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        p = self.ring.field.characteristic
        terms = dict(self.terms)
        for e, c in other.terms.items():
            if e in terms:
                s = terms[e] + c
                if p:
                    s %= p
                if s:
                    terms[e] = s
                else:
                    del terms[e]
            else:
                terms[e] = c
        return Poly(self.ring, terms)

    def __neg__(self) -> "Poly":
        p = self.ring.field.characteristic
        if p:
            return Poly(self.ring, {e: (-c) % p for e, c in self.terms.items()})
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        p = self.ring.field.characteristic
        terms: dict = {}
        exp_mul = kernel.exp_mul
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = exp_mul(e1, e2)
                c = c1 * c2
                if e in terms:
                    c = terms[e] + c
                if p:
                    c %= p
                if c:
                    terms[e] = c
                elif e in terms:
                    del terms[e]
        return Poly(self.ring, terms)

    def scale(self, c) -> "Poly":
        c = self.ring.field.coerce(c)
        if not c:
            return Poly(self.ring, {})
        p = self.ring.field.characteristic
        if p:
            return Poly(self.ring, {e: (v * c) % p for e, v in self.terms.items()})
        return Poly(self.ring, {e: v * c for e, v in self.terms.items()})

    def mul_term(self, exp: tuple, coeff) -> "Poly":
        """Multiply by coeff * x^exp."""
        coeff = self.ring.field.coerce(coeff)
        if not coeff:
            return Poly(self.ring, {})
        p = self.ring.field.characteristic
        exp_mul = kernel.exp_mul
        if p:
            return Poly(self.ring, {exp_mul(e, exp): (v * coeff) % p for e, v in self.terms.items()})
        return Poly(self.ring, {exp_mul(e, exp): v * coeff for e, v in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        for e in result.terms:
            if any(x >= EXPONENT_CAP for x in e):
                raise ExponentOverflowError(f"exponent exceeds {EXPONENT_CAP}")
        return result

    def derivative(self, var: int) -> "Poly":
        p = self.ring.field.characteristic
        terms: dict = {}
        for e, c in self.terms.items():
            k = e[var]
            if not k:
                continue
            c2 = c * k
            if p:
                c2 %= p
            if not c2:
                continue
            e2 = list(e)
            e2[var] = k - 1
            terms[tuple(e2)] = c2
        return Poly(self.ring, terms)

    # -- leading data ----------------------------------------------------

    def leading(self, order: MonomialOrder | None = None):
        """(exponent, coefficient) of the leading term."""
        if not self.terms:
            return None
        order = order or self.ring.order
        key = order.key
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def monic(self, order: MonomialOrder | None = None) -> "Poly":
        lead = self.leading(order)
        if lead is None:
            return self
        _, c = lead
        if c == 1:
            return self
        return self.scale(self.ring.field.invert(c))

    # -- structure -------------------------------------------------------

    def migrate(self, ring: RingDecl) -> "Poly":
        """Re-home into a ring, matching variables by name."""
        if ring is self.ring:
            return self
        if ring.vars == self.ring.vars:
            return Poly(ring, dict(self.terms))
        mapping = []
        for i, v in enumerate(self.ring.vars):
            mapping.append(ring._var_index.get(v, -1))
        terms: dict = {}
        for e, c in self.terms.items():
            e2 = [0] * ring.nvars
            for i, x in enumerate(e):
                if not x:
                    continue
                j = mapping[i]
                if j < 0:
                    raise UnknownVariableError(
                        f"variable {self.ring.vars[i]!r} absent from ring {ring.name}", 0)
                e2[j] = x
            key = tuple(e2)
            if key in terms:
                raise RingMismatchError("variable collision during migration")
            terms[key] = ring.field.coerce(c)
        return Poly(ring, {e: c for e, c in terms.items() if c})

    def substitute(self, ring: RingDecl, images: list["Poly"]) -> "Poly":
        """Evaluate at images[i] in place of variable i; result lives in ring."""
        if len(images) != self.ring.nvars:
            raise RingMismatchError("one image per variable required")
        result = ring.zero()
        for e, c in self.terms.items():
            term = ring.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * images[i] ** k
            result = result + term
        return result

    # -- equality / printing ---------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring.compatible(other.ring) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        return render_poly(self)

    def __repr__(self):
        return f"Poly({render_poly(self)})"


# ---------------------------------------------------------------------------
# printing


def render_monomial(ring: RingDecl, e: tuple) -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(ring.vars[i])
        elif k > 1:
            parts.append(f"{ring.vars[i]}^{k}")
    return "*".join(parts)


def render_poly(p: Poly) -> str:
    """Canonical form: terms in decreasing order, integer or a/b coefficients."""
    if not p.terms:
        return "0"
    ring = p.ring
    key = ring.order.key
    chunks: list[str] = []
    for e in sorted(p.terms, key=key, reverse=True):
        c = p.terms[e]
        mono = render_monomial(ring, e)
        if ring.field.is_rational:
            negative = c < 0
            mag = -c if negative else c
        else:
            negative = False
            mag = c
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if not chunks:
            chunks.append(f"-{body}" if negative else body)
        else:
            chunks.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(chunks)


# ---------------------------------------------------------------------------
# parsing

_OPERATORS = set("+-*^()/")


def _tokenize(src: str):
    tokens = []
    i = 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            tokens.append(("int", src[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(("name", src[i:j], i))
            i = j
        elif ch in _OPERATORS:
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise PolySyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens, ring: RingDecl):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.advance()
        if tok[0] != kind:
            raise PolySyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse_expr(self) -> Poly:
        node = self.parse_term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term(self) -> Poly:
        node = self.parse_factor()
        while self.peek()[0] == "*":
            self.advance()
            node = node * self.parse_factor()
        return node

    def parse_factor(self) -> Poly:
        kind, _, pos = self.peek()
        if kind == "-":
            self.advance()
            return -self.parse_factor()
        base = self.parse_base()
        if self.peek()[0] == "^":
            self.advance()
            tok = self.expect("int")
            exponent = int(tok[1])
            if exponent >= EXPONENT_CAP:
                raise ExponentOverflowError(f"exponent {exponent} exceeds {EXPONENT_CAP}")
            return base ** exponent
        return base

    def parse_base(self) -> Poly:
        kind, text, pos = self.advance()
        if kind == "int":
            value = Fraction(int(text))
            if self.peek()[0] == "/":
                self.advance()
                tok = self.expect("int")
                den = int(tok[1])
                if den == 0:
                    raise PolySyntaxError("zero denominator", tok[2])
                value = Fraction(int(text), den)
            # reject implicit multiplication like "2x"
            nxt = self.peek()
            if nxt[0] in ("name", "int", "("):
                raise PolySyntaxError("implicit multiplication is not allowed", nxt[2])
            return self.ring.const(value)
        if kind == "name":
            if text not in self.ring._var_index:
                raise UnknownVariableError(f"unknown variable {text!r}", pos)
            nxt = self.peek()
            if nxt[0] in ("name", "int", "("):
                raise PolySyntaxError("implicit multiplication is not allowed", nxt[2])
            return self.ring.var(text)
        if kind == "(":
            inner = self.parse_expr()
            self.expect(")")
            nxt = self.peek()
            if nxt[0] in ("name", "int", "("):
                raise PolySyntaxError("implicit multiplication is not allowed", nxt[2])
            return inner
        raise PolySyntaxError(f"unexpected token {text!r}", pos)


def parse_poly(src: str, ring: RingDecl) -> Poly:
    """Parse an expression over integers, variables, + - * ^ / and parens."""
    parser = _Parser(_tokenize(src), ring)
    result = parser.parse_expr()
    parser.expect("end")
    return result


def gradient(p: Poly) -> list[Poly]:
    return [p.derivative(i) for i in range(p.ring.nvars)]
