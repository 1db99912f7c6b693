# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the q-product and bilateral-sum inner loops.

Same contract and operation order as ``qseries._pykernels``.
"""

from libc.math cimport hypot

cdef enum:
    MAXR = 32

cdef int OK = 0
cdef int NOT_CONVERGED = 1
cdef int POLE = 2


cdef inline double cabs_(double complex z) nogil:
    return hypot(z.real, z.imag)


cdef inline bint is_zero(double complex z) nogil:
    return z.real == 0.0 and z.imag == 0.0


cdef double complex _qpoch_inf(double complex x, double complex q, double eps,
                               long max_terms, int consec, long *terms, bint *conv) nogil:
    cdef double cutoff = eps * (1.0 - cabs_(q))
    cdef double complex prod = 1.0
    cdef double complex t = x
    cdef int small = 0
    cdef long m = 0
    while m < max_terms:
        prod = prod * (1.0 - t)
        m += 1
        if cabs_(t) < cutoff:
            small += 1
            if small >= consec:
                terms[0] = m
                conv[0] = True
                return prod
        else:
            small = 0
        t = t * q
    terms[0] = m
    conv[0] = False
    return prod


def qpoch_inf(x, q, double eps, long max_terms, int consec):
    cdef long terms = 0
    cdef bint conv = False
    cdef double complex v = _qpoch_inf(complex(x), complex(q), eps, max_terms, consec, &terms, &conv)
    return complex(v), terms, bool(conv)


def theta(x, q, double eps, long max_terms, int consec):
    cdef double complex cx = complex(x)
    cdef double complex cq = complex(q)
    cdef long n1 = 0, n2 = 0, n3 = 0
    cdef bint c1 = False, c2 = False, c3 = False
    cdef double complex p1 = _qpoch_inf(cx, cq, eps, max_terms, consec, &n1, &c1)
    cdef double complex p2 = _qpoch_inf(cq / cx, cq, eps, max_terms, consec, &n2, &c2)
    cdef double complex p3 = _qpoch_inf(cq, cq, eps, max_terms, consec, &n3, &c3)
    return complex(p1 * p2 * p3), max(n1, n2, n3), bool(c1 and c2 and c3)


def psi_sum(a, b, x, y, q, double eps, long max_terms, int consec):
    cdef int r = len(a)
    if r > MAXR or len(b) != r:
        raise ValueError("unsupported parameter list length")
    cdef double complex ay[MAXR]
    cdef double complex by[MAXR]
    cdef double complex cx = complex(x)
    cdef double complex cy = complex(y)
    cdef double complex cq = complex(q)
    cdef int j
    for j in range(r):
        ay[j] = complex(a[j]) * cy
        by[j] = complex(b[j]) * cy
    cdef double complex total = 1.0
    cdef double max_term = 1.0
    cdef double complex tp = 1.0
    cdef double complex tm = 1.0
    cdef double complex qp = 1.0
    cdef double complex qk = cq
    cdef double complex num, den
    cdef double at
    cdef int small_p = 0, small_m = 0
    cdef bint done_p = False, done_m = False
    cdef long k = 0
    cdef int status = NOT_CONVERGED
    with nogil:
        while k < max_terms:
            k += 1
            if not done_p:
                num = 1.0
                den = 1.0
                for j in range(r):
                    num = num * (1.0 - ay[j] * qp)
                    den = den * (1.0 - by[j] * qp)
                if is_zero(den):
                    status = POLE
                    break
                tp = tp * cx * num / den
                total = total + tp
                at = cabs_(tp)
                if at > max_term:
                    max_term = at
                if at < eps * (1.0 + cabs_(total)):
                    small_p += 1
                    if small_p >= consec:
                        done_p = True
                else:
                    small_p = 0
                qp = qp * cq
            if not done_m:
                num = 1.0
                den = 1.0
                for j in range(r):
                    num = num * (qk - by[j])
                    den = den * (qk - ay[j])
                if is_zero(den):
                    status = POLE
                    break
                tm = tm * num / (den * cx)
                total = total + tm
                at = cabs_(tm)
                if at > max_term:
                    max_term = at
                if at < eps * (1.0 + cabs_(total)):
                    small_m += 1
                    if small_m >= consec:
                        done_m = True
                else:
                    small_m = 0
                qk = qk * cq
            if done_p and done_m:
                status = OK
                break
    return complex(total), max_term, k, status


def w_sum(a, y, z, q, double eps, long max_terms, int consec):
    cdef int r = len(a)
    if r > MAXR:
        raise ValueError("unsupported parameter list length")
    cdef double complex ay[MAXR]
    cdef double complex qya[MAXR]
    cdef double complex cy = complex(y)
    cdef double complex cz = complex(z)
    cdef double complex cq = complex(q)
    cdef int j
    for j in range(r):
        ay[j] = complex(a[j]) * cy
        qya[j] = cq * cy / complex(a[j])
    cdef double complex y2 = cy * cy
    cdef double complex total = 1.0 - y2
    cdef double max_term = cabs_(total)
    cdef double complex up = 1.0
    cdef double complex vm = 1.0
    cdef double complex qp = 1.0
    cdef double complex qk = cq
    cdef double complex zq2 = cz * cq * cq
    cdef double complex num, den, t
    cdef double at
    cdef int small_p = 0, small_m = 0
    cdef bint done_p = False, done_m = False
    cdef long k = 0
    cdef int status = NOT_CONVERGED
    with nogil:
        while k < max_terms:
            k += 1
            if not done_p:
                num = 1.0
                den = 1.0
                for j in range(r):
                    num = num * (1.0 - ay[j] * qp)
                    den = den * (1.0 - qya[j] * qp)
                if is_zero(den):
                    status = POLE
                    break
                up = up * cz * num / den
                t = up * (1.0 - y2 * (qk * qk))
                total = total + t
                at = cabs_(t)
                if at > max_term:
                    max_term = at
                if at < eps * (1.0 + cabs_(total)):
                    small_p += 1
                    if small_p >= consec:
                        done_p = True
                else:
                    small_p = 0
                qp = qp * cq
            if not done_m:
                num = 1.0
                den = 1.0
                for j in range(r):
                    num = num * (qk - qya[j])
                    den = den * (qk - ay[j])
                if is_zero(den):
                    status = POLE
                    break
                vm = vm * num / (den * zq2)
                t = vm * (qk * qk - y2)
                total = total + t
                at = cabs_(t)
                if at > max_term:
                    max_term = at
                if at < eps * (1.0 + cabs_(total)):
                    small_m += 1
                    if small_m >= consec:
                        done_m = True
                else:
                    small_m = 0
            if not done_p or not done_m:
                qk = qk * cq
            if done_p and done_m:
                status = OK
                break
    return complex(total), max_term, k, status
