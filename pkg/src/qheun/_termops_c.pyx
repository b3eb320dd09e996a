# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of qheun._termops.

Coefficients stay arbitrary Python objects (Fractions), so the win comes
from running the dict/tuple plumbing in C rather than from C numerics.
"""

BACKEND = "c"


def add_terms(dict a, dict b):
    cdef dict out = dict(a)
    for exp, c in b.items():
        s = out.get(exp)
        if s is None:
            out[exp] = c
        else:
            s = s + c
            if s:
                out[exp] = s
            else:
                del out[exp]
    return out


def sub_terms(dict a, dict b):
    cdef dict out = dict(a)
    for exp, c in b.items():
        s = out.get(exp)
        if s is None:
            out[exp] = -c
        else:
            s = s - c
            if s:
                out[exp] = s
            else:
                del out[exp]
    return out


def neg_terms(dict a):
    cdef dict out = {}
    for exp, c in a.items():
        out[exp] = -c
    return out


def scale_terms(dict a, c):
    cdef dict out = {}
    for exp, v in a.items():
        out[exp] = c * v
    return out


def mul_terms(dict a, dict b):
    cdef dict out = {}
    cdef tuple ea, eb, exp
    cdef Py_ssize_t n, i
    if len(a) > len(b):
        a, b = b, a
    for ea, ca in a.items():
        n = len(ea)
        for eb, cb in b.items():
            exp = tuple([ea[i] + eb[i] for i in range(n)])
            c = ca * cb
            s = out.get(exp)
            if s is None:
                out[exp] = c
            else:
                s = s + c
                if s:
                    out[exp] = s
                else:
                    del out[exp]
    return out
