"""Call sites, call graphs and their textual renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Site:
    """A statement position: ``Class.method#index`` (1-based index)."""

    cls: str
    method: str
    index: int

    @property
    def scope(self) -> tuple:
        return (self.cls, self.method)

    def __str__(self) -> str:
        return f"{self.cls}.{self.method}#{self.index}"


def render_target(target: tuple) -> str:
    return f"{target[0]}.{target[1]}"


@dataclass(frozen=True)
class CallGraph:
    edges: frozenset = frozenset()  # of (Site, (class, method))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(sorted(self.edges))

    def targets(self, site: Site) -> frozenset:
        return frozenset(t for s, t in self.edges if s == site)

    def sites(self) -> frozenset:
        return frozenset(s for s, _ in self.edges)

    def methods(self) -> frozenset:
        return frozenset(t for _, t in self.edges)

    def dump(self) -> list:
        return [f"EDGE\t{s}\t{render_target(t)}" for s, t in self]

    def to_json(self) -> list:
        return [{"site": str(s), "target": render_target(t)} for s, t in self]

    def to_dot(self, name: str = "callgraph", site_owner=None) -> str:
        """Method-level digraph; edges are labelled with call-site ids.

        ``site_owner`` maps a Site to the caller node label; by default it is
        the site's enclosing method.
        """
        lines = [f"digraph {json.dumps(name)} {{"]
        nodes = set()
        rows = []
        for s, t in self:
            src = site_owner(s) if site_owner else f"{s.cls}.{s.method}"
            dst = render_target(t)
            nodes.update((src, dst))
            rows.append(f"  {json.dumps(src)} -> {json.dumps(dst)} [label={json.dumps(str(s))}];")
        lines.extend(f"  {json.dumps(n)};" for n in sorted(nodes))
        lines.extend(rows)
        lines.append("}")
        return "\n".join(lines) + "\n"
