"""Exact rank computation over the scalar field.

Rows are sparse dicts column -> Scalar.  Elimination is plain Gaussian
reduction with a smallest-row pivot heuristic; every zero test is exact.

For full-rank certificates there is a sound shortcut: specializing the
formal variable at a rational point is a ring homomorphism, so the rank can
only drop.  When the specialized rank already meets the target, the
symbolic rank is certified without symbolic elimination; otherwise the
caller falls back to the symbolic path.  Nothing here is approximate.
"""

from __future__ import annotations

from fractions import Fraction

from .scalar import ScalarError

__all__ = ["gauss_rank", "specialize_rows", "certified_rank"]

SPECIALIZE_POINTS = (Fraction(5, 7), Fraction(3, 11), Fraction(7, 2), Fraction(13, 5))


def gauss_rank(rows):
    """Rank of a list of sparse rows; destructive on the copies it makes."""
    live = [dict(r) for r in rows if r]
    rank = 0
    while live:
        piv_i = min(range(len(live)), key=lambda i: len(live[i]))
        piv = live.pop(piv_i)
        piv_col = min(piv)
        rank += 1
        inv = piv[piv_col].inverse()
        piv = {c: s * inv for c, s in piv.items()}
        nxt = []
        for r in live:
            f = r.get(piv_col)
            if f is not None:
                out = dict(r)
                del out[piv_col]
                for c, s in piv.items():
                    if c == piv_col:
                        continue
                    cur = out.get(c)
                    cur = -(s * f) if cur is None else cur - s * f
                    if cur.is_zero():
                        out.pop(c, None)
                    else:
                        out[c] = cur
                if out:
                    nxt.append(out)
            else:
                nxt.append(r)
        live = nxt
    return rank


def specialize_rows(rows, q0):
    """Rows with every entry evaluated at the rational point q0."""
    out = []
    for r in rows:
        row = {}
        for c, s in r.items():
            v = s.specialize(q0)
            if not v.is_zero():
                row[c] = v
        out.append(row)
    return out


def certified_rank(rows, expected=None, formal=True):
    """(rank, method).  A specialized full-rank result certifies the target;
    anything short of the target falls back to symbolic elimination."""
    if expected is not None and formal:
        for q0 in SPECIALIZE_POINTS:
            try:
                spec = specialize_rows(rows, q0)
            except ScalarError:
                continue
            r = gauss_rank(spec)
            if r == expected:
                return r, f"specialized q={q0}"
        # inconclusive: the honest answer needs the symbolic rank
    return gauss_rank(rows), "symbolic"
