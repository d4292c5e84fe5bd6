"""Exact sparse Gaussian elimination over Q(i, sqrt2).

Vectors are dicts from hashable coordinates to Scalars.  Pivoting is
deterministic: the smallest coordinate under the supplied sort key is
eliminated first, so reduced bases are reproducible.
"""

from __future__ import annotations

from .scalars import ONE, Scalar, ZERO


class SpanChecker:
    """Incremental row reduction with span membership tests."""

    def __init__(self, coord_key):
        self.coord_key = coord_key
        self.rows: list[tuple[object, dict]] = []  # (pivot coordinate, row)

    def _normalize(self, vec: dict) -> dict:
        return {k: v for k, v in vec.items() if v}

    def reduce(self, vec: dict) -> dict:
        """Residue of vec modulo the current span."""
        vec = self._normalize(dict(vec))
        for pivot, row in self.rows:
            coef = vec.get(pivot)
            if coef:
                for k, v in row.items():
                    t = vec.get(k, ZERO) - coef * v
                    if t:
                        vec[k] = t
                    else:
                        vec.pop(k, None)
        return vec

    def add(self, vec: dict) -> dict:
        """Insert vec; returns the residue (empty when already in span)."""
        residue = self.reduce(vec)
        if not residue:
            return residue
        pivot = min(residue, key=self.coord_key)
        inv = residue[pivot].inverse()
        row = {k: inv * v for k, v in residue.items()}
        for _, old in self.rows:
            coef = old.get(pivot)
            if coef:
                for k, v in row.items():
                    t = old.get(k, ZERO) - coef * v
                    if t:
                        old[k] = t
                    else:
                        old.pop(k, None)
        self.rows.append((pivot, row))
        self.rows.sort(key=lambda pr: self.coord_key(pr[0]))
        return residue

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def basis(self) -> list[dict]:
        return [dict(row) for _, row in self.rows]


def kernel_basis(images: list[dict], domain_size: int, coord_key) -> list[dict]:
    """Kernel of the linear map sending domain basis vector j to images[j].

    Returns reduced kernel vectors as dicts {domain index: Scalar}.
    """
    rows: list[tuple[object, dict, dict]] = []  # (pivot, image row, preimage)
    kernel: list[dict] = []
    for j in range(domain_size):
        img = {k: v for k, v in images[j].items() if v}
        pre = {j: ONE}
        for pivot, row, rowpre in rows:
            coef = img.get(pivot)
            if coef:
                for k, v in row.items():
                    t = img.get(k, ZERO) - coef * v
                    if t:
                        img[k] = t
                    else:
                        img.pop(k, None)
                for k, v in rowpre.items():
                    t = pre.get(k, ZERO) - coef * v
                    if t:
                        pre[k] = t
                    else:
                        pre.pop(k, None)
        if img:
            pivot = min(img, key=coord_key)
            inv = img[pivot].inverse()
            rows.append(
                (pivot, {k: inv * v for k, v in img.items()},
                 {k: inv * v for k, v in pre.items()})
            )
        else:
            kernel.append(pre)
    # canonicalise: reduce kernel vectors against each other (RREF on domain)
    reducer = SpanChecker(coord_key=lambda j: j)
    out: list[dict] = []
    for vec in kernel:
        residue = reducer.add(vec)
        if residue:
            pivot = min(residue, key=lambda j: j)
            inv = residue[pivot].inverse()
            out.append({k: inv * v for k, v in residue.items()})
    return out
