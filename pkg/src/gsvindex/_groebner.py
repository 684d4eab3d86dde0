"""Global degrevlex Groebner engine used for canonical quotient coordinates.

Only needed internally: local quotients are pinned down exactly by passing
to the bounded global ideal I + m^(delta+1), where delta bounds the local
staircase degree. Everything here is classical Buchberger plus full division.
"""

from __future__ import annotations

import heapq

from .poly import (
    Polynomial,
    mono_degree,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)


def grevlex_key(mono):
    """Sort key: larger key = larger monomial in degrevlex (x1 > x2 > ...)."""
    return (mono_degree(mono), tuple(-e for e in reversed(mono)))


def leading(p: Polynomial):
    """(monomial, coefficient) of the degrevlex leading term."""
    lm = max(p.terms, key=grevlex_key)
    return lm, p.terms[lm]


def divide(p: Polynomial, basis, lms=None):
    """Full division remainder of p by the list `basis` (degrevlex).

    The remainder has no term divisible by any basis leading monomial;
    reducer choice is the first divisor in list order, so the result is
    deterministic (and canonical once `basis` is a reduced GB).
    """
    if lms is None:
        lms = [leading(g)[0] for g in basis]
    lcs = [g.terms[m] for g, m in zip(basis, lms)]
    rem = {}
    work = dict(p.terms)
    while work:
        m = max(work, key=grevlex_key)
        c = work.pop(m)
        for g, glm, glc in zip(basis, lms, lcs):
            if mono_divides(glm, m):
                q = mono_div(m, glm)
                f = c / glc
                for gm, gc in g.terms.items():
                    if gm == glm:
                        continue
                    key = mono_mul(gm, q)
                    s = work.get(key, 0) - f * gc
                    if s:
                        work[key] = s
                    else:
                        work.pop(key, None)
                break
        else:
            rem[m] = c
    return Polynomial(p.nvars, rem)


def buchberger(gens) -> "list[Polynomial]":
    """Reduced degrevlex Groebner basis (monic, pairwise tail-reduced)."""
    G = []
    for g in gens:
        if not g.is_zero:
            lm, lc = leading(g)
            G.append(g.scale(1 / lc))
    if not G:
        return []
    lms = [leading(g)[0] for g in G]
    heap = []
    for i in range(len(G)):
        for j in range(i):
            lcm = mono_lcm(lms[i], lms[j])
            heapq.heappush(heap, (mono_degree(lcm), j, i))
    while heap:
        _, i, j = heapq.heappop(heap)
        lit, ljt = lms[i], lms[j]
        lcm = mono_lcm(lit, ljt)
        if lcm == mono_mul(lit, ljt):
            continue  # product criterion
        s = G[i].mul_term(mono_div(lcm, lit), 1) - G[j].mul_term(
            mono_div(lcm, ljt), 1
        )
        h = divide(s, G, lms)
        if h.is_zero:
            continue
        hlm, hlc = leading(h)
        G.append(h.scale(1 / hlc))
        lms.append(hlm)
        k = len(G) - 1
        for t in range(k):
            lcm = mono_lcm(lms[t], hlm)
            heapq.heappush(heap, (mono_degree(lcm), t, k))
    # minimalize: drop any element whose LM is divisible by another's
    keep = []
    for i, lm in enumerate(lms):
        dominated = False
        for j, other in enumerate(lms):
            if j != i and mono_divides(other, lm) and (other != lm or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    minimal = [G[i] for i in keep]
    min_lms = [lms[i] for i in keep]
    # tail-reduce each element against the others
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        olms = min_lms[:i] + min_lms[i + 1 :]
        r = divide(g, others, olms) if others else g
        lm, lc = leading(r)
        reduced.append(r.scale(1 / lc))
    reduced.sort(key=lambda g: grevlex_key(leading(g)[0]), reverse=True)
    return reduced


def staircase_monomials(lms, nvars):
    """Monomials below the staircase of the leading ideal, or None if infinite."""
    bounds = []
    for i in range(nvars):
        pure = [
            m[i]
            for m in lms
            if all(e == 0 for k, e in enumerate(m) if k != i)
        ]
        if not pure:
            return None
        bounds.append(min(pure))
    out = []

    def rec(prefix):
        if len(prefix) == nvars:
            m = tuple(prefix)
            if not any(mono_divides(lm, m) for lm in lms):
                out.append(m)
            return
        for e in range(bounds[len(prefix)]):
            rec(prefix + [e])

    rec([])
    return out
