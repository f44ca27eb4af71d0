# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exponent-vector kernel; semantics match plocus._exponents_py."""

IMPLEMENTATION = "cython"


def exp_mul(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    cdef list out = [0] * n
    for i in range(n):
        out[i] = <long> a[i] + <long> b[i]
    return tuple(out)


def exp_div(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    cdef list out = [0] * n
    for i in range(n):
        out[i] = <long> a[i] - <long> b[i]
    return tuple(out)


def exp_divides(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    for i in range(n):
        if <long> a[i] > <long> b[i]:
            return False
    return True


def exp_lcm(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    cdef long x, y
    cdef list out = [0] * n
    for i in range(n):
        x = <long> a[i]
        y = <long> b[i]
        out[i] = x if x > y else y
    return tuple(out)


def exp_coprime(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    for i in range(n):
        if <long> a[i] != 0 and <long> b[i] != 0:
            return False
    return True


def exp_degree(tuple a):
    cdef Py_ssize_t i, n = len(a)
    cdef long s = 0
    for i in range(n):
        s += <long> a[i]
    return s


def cmp_lex(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    cdef long x, y
    for i in range(n):
        x = <long> a[i]
        y = <long> b[i]
        if x != y:
            return 1 if x > y else -1
    return 0


def cmp_grevlex(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    cdef long da = 0, db = 0, x, y
    for i in range(n):
        da += <long> a[i]
        db += <long> b[i]
    if da != db:
        return 1 if da > db else -1
    for i in range(n - 1, -1, -1):
        x = <long> a[i]
        y = <long> b[i]
        if x != y:
            return 1 if x < y else -1
    return 0


def cmp_block(tuple a, tuple b, Py_ssize_t split):
    cdef Py_ssize_t i, n = len(a)
    cdef long da = 0, db = 0, x, y
    for i in range(split):
        da += <long> a[i]
        db += <long> b[i]
    if da != db:
        return 1 if da > db else -1
    for i in range(split - 1, -1, -1):
        x = <long> a[i]
        y = <long> b[i]
        if x != y:
            return 1 if x < y else -1
    da = 0
    db = 0
    for i in range(split, n):
        da += <long> a[i]
        db += <long> b[i]
    if da != db:
        return 1 if da > db else -1
    for i in range(n - 1, split - 1, -1):
        x = <long> a[i]
        y = <long> b[i]
        if x != y:
            return 1 if x < y else -1
    return 0


def find_reducer(list leads, tuple target):
    cdef Py_ssize_t i, j, m = len(leads), n = len(target)
    cdef tuple lead
    cdef bint ok
    for i in range(m):
        lead = <tuple> leads[i]
        ok = True
        for j in range(n):
            if <long> lead[j] > <long> target[j]:
                ok = False
                break
        if ok:
            return i
    return -1
