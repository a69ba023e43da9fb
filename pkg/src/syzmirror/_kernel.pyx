# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse convolution kernel; semantics mirror ``_kernel_py``."""

IMPLEMENTATION = "cython"


cdef long _grade(tuple exponents, tuple grading):
    cdef long total = 0
    cdef Py_ssize_t i
    for i in range(len(exponents)):
        total += <long> grading[i] * <long> exponents[i]
    return total


def grade_of(exponents, grading):
    return _grade(tuple(exponents), tuple(grading))


def mul_terms(dict a, dict b, tuple grading, long order):
    """Convolve two exponent->coefficient maps, dropping grades > order."""
    cdef dict out = {}
    cdef dict small = a
    cdef dict big = b
    cdef Py_ssize_t nvars, i
    cdef long ga, gb
    cdef tuple ea, eb, e
    cdef list graded
    cdef object ca, cb, prev, prod

    if not a or not b:
        return out
    if len(a) > len(b):
        small = b
        big = a
    nvars = len(grading)
    graded = sorted([(_grade(eb, grading), eb) for eb in big])
    for ea, ca in small.items():
        ga = _grade(ea, grading)
        for gb, eb in graded:
            if ga + gb > order:
                break
            e = tuple([<long> ea[i] + <long> eb[i] for i in range(nvars)])
            cb = big[eb]
            prod = ca * cb
            prev = out.get(e)
            if prev is None:
                out[e] = prod
            else:
                out[e] = prev + prod
    return {e: c for e, c in out.items() if c != 0}
