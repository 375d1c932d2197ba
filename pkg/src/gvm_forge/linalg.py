"""Exact sparse Gaussian elimination over Q."""

from __future__ import annotations

from typing import Iterable, Mapping

from gmpy2 import mpq


def nullspace(rows: Iterable[Mapping[int, mpq]], ncols: int) -> list[dict[int, mpq]]:
    """Basis of {x : row . x = 0 for every row}, as sparse vectors.

    Rows are reduced in the order given into a reduced row echelon form; each
    new pivot is the smallest column index left in the reduced row. The basis
    vector for free column f has x_f = 1.
    """
    pivots: dict[int, dict[int, mpq]] = {}
    for row in rows:
        if len(pivots) == ncols:
            break
        r = {c: v for c, v in row.items() if v}
        for c in [c for c in r if c in pivots]:
            f = r.get(c)
            if not f:
                continue
            for cc, vv in pivots[c].items():
                s = r.get(cc, 0) - f * vv
                if s:
                    r[cc] = s
                else:
                    r.pop(cc, None)
        if not r:
            continue
        pc = min(r)
        inv = 1 / r[pc]
        r = {c: v * inv for c, v in r.items()}
        for prow in pivots.values():
            f = prow.get(pc)
            if not f:
                continue
            for cc, vv in r.items():
                s = prow.get(cc, 0) - f * vv
                if s:
                    prow[cc] = s
                else:
                    prow.pop(cc, None)
        pivots[pc] = r

    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        vec = {f: mpq(1)}
        for pc, prow in pivots.items():
            v = prow.get(f)
            if v:
                vec[pc] = -v
        basis.append(vec)
    return basis
