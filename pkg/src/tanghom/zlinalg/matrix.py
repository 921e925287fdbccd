"""Sparse integer matrices stored as dictionaries of rows."""
from __future__ import annotations

from typing import Iterable, Sequence


class IntMatrix:
    """``nrows x ncols`` integer matrix; ``rows[r][c]`` holds nonzero entries.

    A matrix acts on column vectors, so a map ``A -> B`` between free modules
    is stored with shape ``(dim B, dim A)``.
    """

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: dict[int, dict[int, int]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = {}
        if rows:
            for r, row in rows.items():
                clean = {c: v for c, v in row.items() if v}
                if clean:
                    self.rows[r] = clean

    # -- constructors --------------------------------------------------------
    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], ncols: int | None = None):
        data = [list(map(int, r)) for r in data]
        nc = ncols if ncols is not None else (len(data[0]) if data else 0)
        return cls(len(data), nc, {r: {c: v for c, v in enumerate(row) if v} for r, row in enumerate(data)})

    @classmethod
    def from_entries(cls, nrows, ncols, entries: Iterable[tuple[int, int, int]]):
        rows: dict[int, dict[int, int]] = {}
        for r, c, v in entries:
            row = rows.setdefault(r, {})
            row[c] = row.get(c, 0) + v
        return cls(nrows, ncols, rows)

    @classmethod
    def from_columns(cls, nrows, cols: Sequence[dict[int, int]]):
        rows: dict[int, dict[int, int]] = {}
        for c, col in enumerate(cols):
            for r, v in col.items():
                if v:
                    rows.setdefault(r, {})[c] = v
        return cls(nrows, len(cols), rows)

    # -- access --------------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, rc):
        r, c = rc
        return self.rows.get(r, {}).get(c, 0)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for r, row in self.rows.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def columns(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [dict() for _ in range(self.ncols)]
        for r, row in self.rows.items():
            for c, v in row.items():
                cols[c][r] = v
        return cols

    def entries(self):
        for r in sorted(self.rows):
            row = self.rows[r]
            for c in sorted(row):
                yield r, c, row[c]

    # -- algebra -------------------------------------------------------------
    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_entries(self.ncols, self.nrows, ((c, r, v) for r, c, v in self.entries()))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out: dict[int, dict[int, int]] = {}
        orows = other.rows
        for r, row in self.rows.items():
            acc: dict[int, int] = {}
            for k, v in row.items():
                orow = orows.get(k)
                if orow:
                    for c, w in orow.items():
                        acc[c] = acc.get(c, 0) + v * w
            acc = {c: v for c, v in acc.items() if v}
            if acc:
                out[r] = acc
        return IntMatrix(self.nrows, other.ncols, out)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        out = {r: dict(row) for r, row in self.rows.items()}
        for r, row in other.rows.items():
            t = out.setdefault(r, {})
            for c, v in row.items():
                t[c] = t.get(c, 0) + v
        return IntMatrix(self.nrows, self.ncols, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.nrows, self.ncols, {r: {c: k * v for c, v in row.items()} for r, row in self.rows.items()})

    def mod(self, p: int) -> "IntMatrix":
        return IntMatrix(self.nrows, self.ncols, {r: {c: v % p for c, v in row.items()} for r, row in self.rows.items()})

    def apply(self, vec: dict[int, int]) -> dict[int, int]:
        """Image of a sparse column vector."""
        out: dict[int, int] = {}
        for r, row in self.rows.items():
            s = 0
            for c, v in vec.items():
                w = row.get(c)
                if w:
                    s += v * w
            if s:
                out[r] = s
        return out

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "IntMatrix":
        rpos = {r: i for i, r in enumerate(row_idx)}
        cpos = {c: j for j, c in enumerate(col_idx)}
        out: dict[int, dict[int, int]] = {}
        for r, row in self.rows.items():
            i = rpos.get(r)
            if i is None:
                continue
            sub = {cpos[c]: v for c, v in row.items() if c in cpos}
            if sub:
                out[i] = sub
        return IntMatrix(len(row_idx), len(col_idx), out)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        return f"IntMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def block_matrix(blocks: Sequence[Sequence[IntMatrix | None]], row_sizes, col_sizes) -> IntMatrix:
    """Assemble a block matrix; ``None`` blocks are zero."""
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    rows: dict[int, dict[int, int]] = {}
    for bi, brow in enumerate(blocks):
        for bj, blk in enumerate(brow):
            if blk is None:
                continue
            if blk.shape != (row_sizes[bi], col_sizes[bj]):
                raise ValueError(f"block ({bi},{bj}) has shape {blk.shape}")
            for r, row in blk.rows.items():
                t = rows.setdefault(r + roff[bi], {})
                for c, v in row.items():
                    t[c + coff[bj]] = t.get(c + coff[bj], 0) + v
    return IntMatrix(roff[-1], coff[-1], rows)
