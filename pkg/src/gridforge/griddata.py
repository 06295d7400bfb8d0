"""Grid diagrams: validation, (de)serialization, mirror and the
commutation path to the anti-diagonal position.

Convention: column ``i`` holds its O marker in row ``O[i]`` and its X
marker in row ``X[i]``.  Rows are counted from the bottom.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple


class GridError(ValueError):
    """Malformed or invalid grid input."""


class CapacityError(RuntimeError):
    """Input exceeds the configured state capacity."""


class InternalError(RuntimeError):
    """An internal consistency check failed."""


def _is_permutation(seq: Sequence[int], n: int) -> bool:
    return len(seq) == n and sorted(seq) == list(range(n))


def _cycle_count(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    cycles = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycles += 1
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
    return cycles


@dataclass(frozen=True)
class GridDiagram:
    n: int
    o_rows: Tuple[int, ...]
    x_rows: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "o_rows", tuple(int(r) for r in self.o_rows))
        object.__setattr__(self, "x_rows", tuple(int(r) for r in self.x_rows))
        self.validate()

    @classmethod
    def from_lists(cls, o_rows: Iterable[int], x_rows: Iterable[int]) -> "GridDiagram":
        o_rows, x_rows = list(o_rows), list(x_rows)
        return cls(len(o_rows), tuple(o_rows), tuple(x_rows))

    def validate(self) -> None:
        n = self.n
        if not isinstance(n, int) or n < 1:
            raise GridError(f"grid size must be a positive integer, got {n!r}")
        if not _is_permutation(self.o_rows, n):
            raise GridError("O rows do not form a permutation of 0..n-1")
        if not _is_permutation(self.x_rows, n):
            raise GridError("X rows do not form a permutation of 0..n-1")
        if n >= 2:
            for i, (o, x) in enumerate(zip(self.o_rows, self.x_rows)):
                if o == x:
                    raise GridError(f"column {i} has O and X in the same square")
        # walking O -> X along columns and X -> O along rows must visit
        # every column, otherwise the diagram is a link
        o_inv = [0] * n
        for c, r in enumerate(self.o_rows):
            o_inv[r] = c
        walk = [o_inv[self.x_rows[c]] for c in range(n)]
        if _cycle_count(walk) != 1:
            raise GridError("grid diagram represents a link with more than one component")

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        return {"n": self.n, "O": list(self.o_rows), "X": list(self.x_rows)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data) -> "GridDiagram":
        if not isinstance(data, dict):
            raise GridError("grid JSON must be an object")
        try:
            n, o_rows, x_rows = data["n"], data["O"], data["X"]
        except KeyError as exc:
            raise GridError(f"grid JSON missing field {exc.args[0]!r}") from None
        if not isinstance(n, int) or isinstance(n, bool):
            raise GridError("field 'n' must be an integer")
        for name, rows in (("O", o_rows), ("X", x_rows)):
            if not isinstance(rows, list) or not all(
                isinstance(r, int) and not isinstance(r, bool) for r in rows
            ):
                raise GridError(f"field {name!r} must be a list of integers")
            if len(rows) != n:
                raise GridError(f"field {name!r} has length {len(rows)}, expected {n}")
        return cls(n, tuple(o_rows), tuple(x_rows))

    @classmethod
    def from_json(cls, text: str) -> "GridDiagram":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GridError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    def to_text(self) -> str:
        """Plaintext picture, top row first."""
        if self.n == 1:
            raise GridError("a 1x1 grid cannot be drawn in plaintext")
        lines = []
        for r in reversed(range(self.n)):
            row = []
            for c in range(self.n):
                if self.o_rows[c] == r:
                    row.append("O")
                elif self.x_rows[c] == r:
                    row.append("X")
                else:
                    row.append(".")
            lines.append("".join(row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GridDiagram":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        n = len(lines)
        if n == 0:
            raise GridError("empty plaintext grid")
        o_rows: List[int] = [-1] * n
        x_rows: List[int] = [-1] * n
        for k, line in enumerate(lines):
            r = n - 1 - k
            if len(line) != n:
                raise GridError(f"plaintext row {k} has length {len(line)}, expected {n}")
            for c, ch in enumerate(line):
                if ch == ".":
                    continue
                target = {"O": o_rows, "X": x_rows}.get(ch)
                if target is None:
                    raise GridError(f"unexpected character {ch!r} in plaintext grid")
                if target[c] != -1:
                    raise GridError(f"column {c} has more than one {ch}")
                target[c] = r
        if -1 in o_rows or -1 in x_rows:
            raise GridError("every column needs exactly one O and one X")
        return cls(n, tuple(o_rows), tuple(x_rows))

    # -- operations ----------------------------------------------------

    def mirror(self) -> "GridDiagram":
        """Reflect left to right; the result presents the mirror knot."""
        return GridDiagram(self.n, self.o_rows[::-1], self.x_rows[::-1])

    def swap_columns(self, i: int) -> "GridDiagram":
        """Exchange columns ``i`` and ``i + 1`` (no validity check on X)."""
        o, x = list(self.o_rows), list(self.x_rows)
        o[i], o[i + 1] = o[i + 1], o[i]
        x[i], x[i + 1] = x[i + 1], x[i]
        return GridDiagram(self.n, tuple(o), tuple(x))

    def key(self) -> str:
        return self.to_json()


def antidiagonal_pattern(n: int) -> Tuple[int, ...]:
    """O rows for which every O sits on the torus anti-diagonal."""
    return tuple((n - 2 - c) % n for c in range(n))


def on_antidiagonal(grid: GridDiagram) -> bool:
    return grid.o_rows == antidiagonal_pattern(grid.n)


def antidiagonal_path(grid: GridDiagram) -> Tuple[GridDiagram, List[int]]:
    """Adjacent column swaps (left index) that bring every O onto the
    anti-diagonal, and the resulting diagram.  Bubble sort on the O rows,
    so no swap wraps around."""
    n = grid.n
    target = antidiagonal_pattern(n)
    rank = {row: k for k, row in enumerate(target)}
    keys = [rank[r] for r in grid.o_rows]
    moves: List[int] = []
    for end in range(n - 1, 0, -1):
        for i in range(end):
            if keys[i] > keys[i + 1]:
                keys[i], keys[i + 1] = keys[i + 1], keys[i]
                moves.append(i)
    final = grid
    for i in moves:
        final = final.swap_columns(i)
    return final, moves


def parse_grid(text: str) -> GridDiagram:
    """Accept either the JSON form or the plaintext picture."""
    if text.lstrip().startswith("{"):
        return GridDiagram.from_json(text)
    return GridDiagram.from_text(text)
