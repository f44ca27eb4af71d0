"""Exponent-kernel selection.

Prefers the compiled extension; falls back to the pure-Python module.  Set
PLOCUS_PURE_KERNEL=1 to force the fallback (used by the benchmark and by the
cross-check tests).
"""

import os

if os.environ.get("PLOCUS_PURE_KERNEL"):
    from plocus import _exponents_py as _impl
else:
    try:
        from plocus import _exponents as _impl  # type: ignore[attr-defined]
    except ImportError:
        from plocus import _exponents_py as _impl

IMPLEMENTATION = _impl.IMPLEMENTATION

exp_mul = _impl.exp_mul
exp_div = _impl.exp_div
exp_divides = _impl.exp_divides
exp_lcm = _impl.exp_lcm
exp_coprime = _impl.exp_coprime
exp_degree = _impl.exp_degree
cmp_lex = _impl.cmp_lex
cmp_grevlex = _impl.cmp_grevlex
cmp_block = _impl.cmp_block
find_reducer = _impl.find_reducer
