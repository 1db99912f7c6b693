"""Pure-Python reference kernels.

Mirrors ``_ckernels.pyx`` operation for operation so the two backends agree
to rounding.  Every kernel returns plain tuples; status codes are

    0  converged
    1  truncation cap reached (not converged)
    2  hit an exact pole of a summand
"""

from __future__ import annotations

OK = 0
NOT_CONVERGED = 1
POLE = 2


def qpoch_inf(x, q, eps, max_terms, consec):
    """Truncated ``prod_{m>=0} (1 - x q^m)``; returns ``(value, terms, converged)``."""
    x = complex(x)
    q = complex(q)
    cutoff = eps * (1.0 - abs(q))
    prod = 1.0 + 0.0j
    t = x
    small = 0
    m = 0
    while m < max_terms:
        prod *= 1.0 - t
        m += 1
        if abs(t) < cutoff:
            small += 1
            if small >= consec:
                return prod, m, True
        else:
            small = 0
        t *= q
    return prod, m, False


def theta(x, q, eps, max_terms, consec):
    """``(x, q/x, q)_inf``; returns ``(value, terms, converged)``."""
    x = complex(x)
    q = complex(q)
    p1, n1, c1 = qpoch_inf(x, q, eps, max_terms, consec)
    p2, n2, c2 = qpoch_inf(q / x, q, eps, max_terms, consec)
    p3, n3, c3 = qpoch_inf(q, q, eps, max_terms, consec)
    return p1 * p2 * p3, max(n1, n2, n3), c1 and c2 and c3


def psi_sum(a, b, x, y, q, eps, max_terms, consec):
    """Bilateral sum of ``(a y)_n / (b y)_n x^n`` over all integers n.

    Accumulates n = 0, 1, -1, 2, -2, ... and stops each direction after
    ``consec`` successive terms below ``eps * (1 + |S|)``.

    Returns ``(value, max_term, terms_used, status)``.
    """
    x = complex(x)
    y = complex(y)
    q = complex(q)
    ay = [complex(aj) * y for aj in a]
    by = [complex(bj) * y for bj in b]
    r = len(ay)
    total = 1.0 + 0.0j
    max_term = 1.0
    tp = 1.0 + 0.0j
    tm = 1.0 + 0.0j
    qp = 1.0 + 0.0j   # q^(k-1) for the forward ratio
    qk = q            # q^k for the backward ratio
    small_p = 0
    small_m = 0
    done_p = False
    done_m = False
    k = 0
    while k < max_terms:
        k += 1
        if not done_p:
            num = 1.0 + 0.0j
            den = 1.0 + 0.0j
            for j in range(r):
                num *= 1.0 - ay[j] * qp
                den *= 1.0 - by[j] * qp
            if den == 0:
                return total, max_term, k, POLE
            tp = tp * x * num / den
            total += tp
            at = abs(tp)
            if at > max_term:
                max_term = at
            if at < eps * (1.0 + abs(total)):
                small_p += 1
                if small_p >= consec:
                    done_p = True
            else:
                small_p = 0
            qp *= q
        if not done_m:
            # (1 - b y q^-k) / (1 - a y q^-k) rewritten as (q^k - b y) / (q^k - a y)
            num = 1.0 + 0.0j
            den = 1.0 + 0.0j
            for j in range(r):
                num *= qk - by[j]
                den *= qk - ay[j]
            if den == 0:
                return total, max_term, k, POLE
            tm = tm * num / (den * x)
            total += tm
            at = abs(tm)
            if at > max_term:
                max_term = at
            if at < eps * (1.0 + abs(total)):
                small_m += 1
                if small_m >= consec:
                    done_m = True
            else:
                small_m = 0
            qk *= q
        if done_p and done_m:
            return total, max_term, k, OK
    return total, max_term, k, NOT_CONVERGED


def w_sum(a, y, z, q, eps, max_terms, consec):
    """Bilateral very-well-poised sum.

    Terms are ``(a y)_n / (q y / a)_n (1 - y^2 q^(2n)) z^n``.  The backward
    direction carries ``q^(-2k)`` inside the running product so nothing
    overflows.  Returns ``(value, max_term, terms_used, status)``.
    """
    y = complex(y)
    z = complex(z)
    q = complex(q)
    ay = [complex(aj) * y for aj in a]
    qya = [q * y / complex(aj) for aj in a]
    r = len(ay)
    y2 = y * y
    total = 1.0 - y2
    max_term = abs(total)
    up = 1.0 + 0.0j    # u_k
    vm = 1.0 + 0.0j    # u_{-k} q^{-2k}
    qp = 1.0 + 0.0j    # q^(k-1)
    qk = q             # q^k
    zq2 = z * q * q
    small_p = 0
    small_m = 0
    done_p = False
    done_m = False
    k = 0
    while k < max_terms:
        k += 1
        if not done_p:
            num = 1.0 + 0.0j
            den = 1.0 + 0.0j
            for j in range(r):
                num *= 1.0 - ay[j] * qp
                den *= 1.0 - qya[j] * qp
            if den == 0:
                return total, max_term, k, POLE
            up = up * z * num / den
            t = up * (1.0 - y2 * (qk * qk))
            total += t
            at = abs(t)
            if at > max_term:
                max_term = at
            if at < eps * (1.0 + abs(total)):
                small_p += 1
                if small_p >= consec:
                    done_p = True
            else:
                small_p = 0
            qp *= q
        if not done_m:
            num = 1.0 + 0.0j
            den = 1.0 + 0.0j
            for j in range(r):
                num *= qk - qya[j]
                den *= qk - ay[j]
            if den == 0:
                return total, max_term, k, POLE
            vm = vm * num / (den * zq2)
            t = vm * (qk * qk - y2)
            total += t
            at = abs(t)
            if at > max_term:
                max_term = at
            if at < eps * (1.0 + abs(total)):
                small_m += 1
                if small_m >= consec:
                    done_m = True
            else:
                small_m = 0
        if not done_p or not done_m:
            qk *= q
        if done_p and done_m:
            return total, max_term, k, OK
    return total, max_term, k, NOT_CONVERGED
