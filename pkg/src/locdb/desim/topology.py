"""Three-level database hierarchy: one DB0, n0/n1 DB1s, n0 DB2s."""

from __future__ import annotations

from dataclasses import dataclass

from locdb.params import SystemParams

__all__ = ["DbNode", "Hierarchy", "build_topology"]


@dataclass(frozen=True)
class DbNode:
    level: int              # 0, 1, or 2
    index_in_level: int
    global_id: int
    parent_global_id: int | None


@dataclass(frozen=True)
class Hierarchy:
    db0: DbNode
    db1s: tuple[DbNode, ...]
    db2s: tuple[DbNode, ...]

    @property
    def n_nodes(self) -> int:
        return 1 + len(self.db1s) + len(self.db2s)

    def instances(self, level: int) -> int:
        return (1, len(self.db1s), len(self.db2s))[level]

    def node(self, global_id: int) -> DbNode:
        if global_id == 0:
            return self.db0
        g = len(self.db1s)
        if global_id <= g:
            return self.db1s[global_id - 1]
        return self.db2s[global_id - 1 - g]

    def level_of(self, global_id: int) -> int:
        return self.node(global_id).level

    def first_global_id(self, level: int) -> int:
        return (0, 1, 1 + len(self.db1s))[level]


def build_topology(p: SystemParams) -> Hierarchy:
    """Lay out the subsystem: DB2 ``i`` reports to DB1 ``i // n1``.

    Global ids: 0 is the DB0, then the DB1s, then the DB2s.
    """
    if p.n1 < 1 or p.n0 % p.n1 != 0:
        raise ValueError(f"n0={p.n0} DB2s cannot tile DB1 groups of n1={p.n1}")
    n_db1 = p.n0 // p.n1
    db0 = DbNode(level=0, index_in_level=0, global_id=0, parent_global_id=None)
    db1s = tuple(
        DbNode(level=1, index_in_level=i, global_id=1 + i, parent_global_id=0)
        for i in range(n_db1))
    db2s = tuple(
        DbNode(level=2, index_in_level=i, global_id=1 + n_db1 + i,
               parent_global_id=1 + i // p.n1)
        for i in range(p.n0))
    return Hierarchy(db0, db1s, db2s)
