"""Pure-Python kernel for the hot Laurent-polynomial primitives.

Terms are dicts mapping exponent tuples to nonzero Fractions.  The compiled
twin in ``_poly_speedups.pyx`` implements the same three functions; callers
pick one backend at import time (see ``cluster_torsor.laurent``).
"""

from __future__ import annotations

import heapq
from fractions import Fraction

BACKEND = "python"


def add_terms(t1: dict, t2: dict) -> dict:
    out = dict(t1)
    for e, c in t2.items():
        s = out.get(e)
        if s is None:
            out[e] = c
        else:
            s = s + c
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def mul_terms(t1: dict, t2: dict) -> dict:
    if len(t1) > len(t2):
        t1, t2 = t2, t1
    out: dict = {}
    for e1, c1 in t1.items():
        for e2, c2 in t2.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            s = out.get(e)
            if s is None:
                out[e] = c1 * c2
            else:
                s = s + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
    return out


def divide_binomial_terms(terms: dict, psi: tuple, c: Fraction) -> dict | None:
    """Exact quotient of ``terms`` by (1 + c*z^psi), or None if not exact.

    Works from the bottom of the grading w(e) = <e, psi> upward: the
    w-least term of the dividend must come from the quotient times the
    constant part of the binomial.  Exactness is order-independent.
    """
    if not terms:
        return {}
    weight = {e: sum(a * b for a, b in zip(e, psi)) for e in terms}
    w_max = max(weight.values())
    remaining = dict(terms)
    heap = [(w, e) for e, w in weight.items()]
    heapq.heapify(heap)
    quotient: dict = {}
    while remaining:
        while heap:
            w, e = heap[0]
            if e in remaining:
                break
            heapq.heappop(heap)
        if not heap:
            return None
        w, e = heapq.heappop(heap)
        if w > w_max:
            return None
        a = remaining.pop(e)
        quotient[e] = a
        shifted = tuple(x + y for x, y in zip(e, psi))
        s = remaining.get(shifted)
        delta = a * c
        if s is None:
            remaining[shifted] = -delta
            heapq.heappush(heap, (w + sum(a * b for a, b in zip(psi, psi)), shifted))
        else:
            s = s - delta
            if s:
                remaining[shifted] = s
            else:
                del remaining[shifted]
    return quotient
