"""Sparse square matrices over an exact ring (Poly, RatFunc or QScalar).

A matrix is a dict ``row -> {col: entry}`` with zero entries omitted.
"""

from __future__ import annotations

from typing import Callable, Dict, Iterator, Optional, Tuple

Sparse = Dict[int, Dict[int, object]]


def _nonzero(x) -> bool:
    return not x.is_zero()


def mat_mul(a: Sparse, b: Sparse) -> Sparse:
    out: Sparse = {}
    for i, row in a.items():
        acc: Dict[int, object] = {}
        for k, x in row.items():
            brow = b.get(k)
            if not brow:
                continue
            for j, y in brow.items():
                v = x * y
                if j in acc:
                    acc[j] = acc[j] + v
                else:
                    acc[j] = v
        acc = {j: v for j, v in acc.items() if _nonzero(v)}
        if acc:
            out[i] = acc
    return out


def mat_add(a: Sparse, b: Sparse, sign: int = 1) -> Sparse:
    out: Sparse = {i: dict(r) for i, r in a.items()}
    for i, row in b.items():
        dst = out.setdefault(i, {})
        for j, y in row.items():
            y = y if sign == 1 else -y
            dst[j] = dst[j] + y if j in dst else y
            if not _nonzero(dst[j]):
                del dst[j]
        if not dst:
            del out[i]
    return out


def mat_scale(a: Sparse, c) -> Sparse:
    out = {}
    for i, row in a.items():
        r = {j: x * c for j, x in row.items()}
        r = {j: x for j, x in r.items() if _nonzero(x)}
        if r:
            out[i] = r
    return out


def mat_map(a: Sparse, f: Callable) -> Sparse:
    out = {}
    for i, row in a.items():
        r = {j: f(x) for j, x in row.items()}
        r = {j: x for j, x in r.items() if _nonzero(x)}
        if r:
            out[i] = r
    return out


def entries(a: Sparse) -> Iterator[Tuple[int, int, object]]:
    for i in sorted(a):
        for j in sorted(a[i]):
            yield i, j, a[i][j]


def first_nonzero(a: Sparse) -> Optional[Tuple[int, int, object]]:
    for i, j, x in entries(a):
        if _nonzero(x):
            return i, j, x
    return None


def identity(size: int, one) -> Sparse:
    return {i: {i: one} for i in range(size)}


def transpose(a: Sparse) -> Sparse:
    out: Sparse = {}
    for i, row in a.items():
        for j, x in row.items():
            out.setdefault(j, {})[i] = x
    return out


def permute(a: Sparse, perm) -> Sparse:
    """Conjugate by a basis permutation: entry (perm[i], perm[j]) = a[i][j]."""
    out: Sparse = {}
    for i, row in a.items():
        for j, x in row.items():
            out.setdefault(perm[i], {})[perm[j]] = x
    return out


def inverse(a: Sparse, size: int, one, zero) -> Sparse:
    """Gauss-Jordan inverse; entries must support division (field elements)."""
    rows = [dict(a.get(i, {})) for i in range(size)]
    inv = [{i: one} for i in range(size)]
    for c in range(size):
        piv = None
        for r in range(c, size):
            x = rows[r].get(c)
            if x is not None and _nonzero(x):
                piv = r
                break
        if piv is None:
            raise ArithmeticError(f"singular matrix at column {c}")
        rows[c], rows[piv] = rows[piv], rows[c]
        inv[c], inv[piv] = inv[piv], inv[c]
        p = rows[c][c]
        pinv = one / p
        rows[c] = {j: x * pinv for j, x in rows[c].items()}
        inv[c] = {j: x * pinv for j, x in inv[c].items()}
        for r in range(size):
            if r == c:
                continue
            f = rows[r].get(c)
            if f is None or not _nonzero(f):
                continue
            for src, dst in ((rows[c], rows[r]), (inv[c], inv[r])):
                for j, x in src.items():
                    v = dst[j] - f * x if j in dst else -(f * x)
                    if _nonzero(v):
                        dst[j] = v
                    else:
                        dst.pop(j, None)
    return {i: r for i, r in enumerate(inv) if r}
