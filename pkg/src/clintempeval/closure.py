"""Transitive closure and cycle detection for CONTAINS graphs."""

from __future__ import annotations

from dataclasses import dataclass

from .model import ContainerRelation, Document


@dataclass(frozen=True)
class RelationGraph:
    nodes: frozenset
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if a not in self.nodes or b not in self.nodes:
                raise ValueError(f"edge ({a!r}, {b!r}) has an endpoint outside the node set")

    @classmethod
    def from_edges(cls, edges, nodes=()):
        edges = frozenset(edges)
        return cls(frozenset(nodes) | {x for e in edges for x in e}, edges)

    @classmethod
    def from_document(cls, doc: Document) -> RelationGraph:
        nodes = {e.id for e in doc.entities()}
        return cls(nodes, {(r.source, r.target) for r in doc.relations})

    def successors(self) -> dict:
        out = {n: [] for n in self.nodes}
        for a, b in self.edges:
            out[a].append(b)
        for v in out.values():
            v.sort()
        return out


@dataclass(frozen=True)
class ConsistencyResult:
    consistent: bool
    witness_cycle: tuple | None = None


class InconsistentGraphError(ValueError):
    def __init__(self, result: ConsistencyResult, where: str = ""):
        self.result = result
        cycle = " -> ".join(map(str, result.witness_cycle + result.witness_cycle[:1]))
        prefix = f"{where}: " if where else ""
        super().__init__(f"{prefix}CONTAINS cycle {cycle}")


def check_consistency(graph: RelationGraph) -> ConsistencyResult:
    """Depth-first search for a directed cycle; returns the first one found."""
    succ = graph.successors()
    WHITE, GREY, BLACK = 0, 1, 2
    color = dict.fromkeys(graph.nodes, WHITE)
    for root in sorted(graph.nodes):
        if color[root] != WHITE:
            continue
        path = [root]
        stack = [iter(succ[root])]
        color[root] = GREY
        while stack:
            child = next(stack[-1], None)
            if child is None:
                color[path.pop()] = BLACK
                stack.pop()
            elif color[child] == GREY:
                return ConsistencyResult(False, tuple(path[path.index(child):]))
            elif color[child] == WHITE:
                color[child] = GREY
                path.append(child)
                stack.append(iter(succ[child]))
    return ConsistencyResult(True)


def strongly_connected_components(graph: RelationGraph) -> list[frozenset]:
    """Tarjan's algorithm, iterative so deep chains don't hit the recursion limit."""
    succ = graph.successors()
    index, low = {}, {}
    on_stack = set()
    stack = []
    comps = []
    counter = 0
    for root in sorted(graph.nodes):
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            child = next(it, None)
            if child is not None:
                if child not in index:
                    index[child] = low[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(succ[child])))
                elif child in on_stack:
                    low[node] = min(low[node], index[child])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    x = stack.pop()
                    on_stack.discard(x)
                    comp.append(x)
                    if x == node:
                        break
                comps.append(frozenset(comp))
    return comps


def _reachable(succ: dict, start) -> set:
    seen = set()
    todo = list(succ[start])
    while todo:
        n = todo.pop()
        if n not in seen:
            seen.add(n)
            todo.extend(succ[n])
    return seen


def close_contains(graph: RelationGraph) -> RelationGraph:
    """Smallest transitively closed superset of ``graph``'s edges.

    Raises InconsistentGraphError when the graph has a cycle, since its
    closure would make some entity contain itself.
    """
    result = check_consistency(graph)
    if not result.consistent:
        raise InconsistentGraphError(result)
    succ = graph.successors()
    edges = {(a, b) for a in graph.nodes for b in _reachable(succ, a)}
    return RelationGraph(graph.nodes, edges)


def close_contains_repaired(graph: RelationGraph) -> RelationGraph:
    """Closure that tolerates cycles.

    Works on the condensation: members of one strongly connected component
    all contain each other, and every member of a component contains every
    member of the components reachable from it. Self-containment pairs are
    never emitted.
    """
    comps = strongly_connected_components(graph)
    comp_of = {n: i for i, c in enumerate(comps) for n in c}
    dag_succ = {i: set() for i in range(len(comps))}
    for a, b in graph.edges:
        if comp_of[a] != comp_of[b]:
            dag_succ[comp_of[a]].add(comp_of[b])
    edges = set()
    for i, comp in enumerate(comps):
        targets = set()
        for j in _reachable(dag_succ, i):
            targets |= comps[j]
        if len(comp) > 1:
            targets |= comp
        for a in comp:
            edges.update((a, b) for b in targets if b != a)
    return RelationGraph(graph.nodes, edges)


def close_document(doc: Document, repair: bool = False) -> tuple[Document, list[str]]:
    """Replace a document's relations by their closure; returns (doc, warnings)."""
    graph = RelationGraph.from_document(doc)
    warnings = []
    result = check_consistency(graph)
    if result.consistent:
        closed = close_contains(graph)
    elif repair:
        cycle = " -> ".join(result.witness_cycle + result.witness_cycle[:1])
        warnings.append(
            f"{doc.doc_id}: CONTAINS cycle {cycle}; closure computed on the condensation"
        )
        closed = close_contains_repaired(graph)
    else:
        raise InconsistentGraphError(result, doc.doc_id)
    rels = tuple(ContainerRelation(a, b) for a, b in sorted(closed.edges))
    return doc.replace(relations=rels), warnings
