"""Pure-Python exponent-vector kernel.

Exponent vectors are tuples of small non-negative ints.  These functions are
the hot path of polynomial reduction; plocus._exponents is the compiled twin
with identical semantics, and plocus.kernel picks one at import time.
"""

IMPLEMENTATION = "python"


def exp_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def exp_div(a, b):
    # caller guarantees b | a
    return tuple(x - y for x, y in zip(a, b))


def exp_divides(a, b):
    """True when the monomial a divides b."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def exp_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def exp_coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def exp_degree(a):
    return sum(a)


def cmp_lex(a, b):
    for x, y in zip(a, b):
        if x != y:
            return 1 if x > y else -1
    return 0


def cmp_grevlex(a, b):
    da = sum(a)
    db = sum(b)
    if da != db:
        return 1 if da > db else -1
    for i in range(len(a) - 1, -1, -1):
        if a[i] != b[i]:
            return 1 if a[i] < b[i] else -1
    return 0


def cmp_block(a, b, split):
    """Two grevlex blocks; the first block dominates (elimination order)."""
    da = sum(a[:split])
    db = sum(b[:split])
    if da != db:
        return 1 if da > db else -1
    for i in range(split - 1, -1, -1):
        if a[i] != b[i]:
            return 1 if a[i] < b[i] else -1
    da = sum(a[split:])
    db = sum(b[split:])
    if da != db:
        return 1 if da > db else -1
    for i in range(len(a) - 1, split - 1, -1):
        if a[i] != b[i]:
            return 1 if a[i] < b[i] else -1
    return 0


def find_reducer(leads, target):
    """Index of the first lead monomial dividing target, or -1.

    leads is kept sorted ascending by the active order, which realizes the
    smallest-dividing-lead reduction rule.
    """
    for i, lead in enumerate(leads):
        ok = True
        for x, y in zip(lead, target):
            if x > y:
                ok = False
                break
        if ok:
            return i
    return -1
