from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, is_path
from .matroid import LinearMatroid


class FrameworkError(ValueError):
    pass


@dataclass(frozen=True)
class Framework:
    """Graph plus a linear matroid on its vertex set, terminals and target rank."""

    graph: Graph
    matroid: LinearMatroid
    s: int
    t: int
    k: int

    def __post_init__(self):
        if tuple(sorted(self.matroid.ground)) != self.graph.vertices:
            raise FrameworkError("matroid ground set differs from vertex set")
        if self.s == self.t:
            raise FrameworkError("terminals must differ")
        if self.s not in self.graph or self.t not in self.graph:
            raise FrameworkError("terminal not in graph")
        if self.k < 0:
            raise FrameworkError("negative k")

    def delete(self, v) -> "Framework":
        if v in (self.s, self.t):
            raise FrameworkError("cannot delete a terminal")
        return Framework(self.graph.delete_vertex(v), self.matroid.delete(v), self.s, self.t, self.k)

    def restrict(self, keep) -> "Framework":
        keep = set(keep)
        return Framework(self.graph.subgraph(keep), self.matroid.restrict(keep), self.s, self.t, self.k)

    def with_k(self, k) -> "Framework":
        return Framework(self.graph, self.matroid, self.s, self.t, k)

    def path_rank(self, path) -> int:
        return self.matroid.rank(path)

    def witness_set(self, path) -> list:
        """Greedy independent subset of the path, at most k elements."""
        out = []
        for v in sorted(path):
            if len(out) >= self.k:
                break
            if self.matroid.is_independent(out + [v]):
                out.append(v)
        return out

    def verify(self, path, independent=None) -> bool:
        if not is_path(self.graph, list(path), self.s, self.t):
            return False
        if independent is not None:
            ind = list(independent)
            if not set(ind) <= set(path) or len(ind) < self.k or not self.matroid.is_independent(ind):
                return False
        return self.path_rank(path) >= self.k
