"""
Finite-depth König search on layered graphs.

Layer n (1-based) is a finite tuple of payloads; an implicit root sits above
layer 1 and is adjacent to all of it. Unless explicit edges are given, a
vertex w of layer n is adjacent to v in layer n-1 when w[:n-1] == v.
"""
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterator, List, Optional, Sequence, Set, Tuple, Union

from interval.arith import Interval

logger = logging.getLogger(__name__)

Payload = Tuple[Hashable, ...]
EdgeSet = FrozenSet[Tuple[int, int]]


def _item_key(item):
    if isinstance(item, Interval):
        return item.sort_key()
    return item


def payload_key(payload: Payload) -> tuple:
    """Exact lexicographic key; intervals order by their endpoints"""
    return tuple(_item_key(item) for item in payload)


@dataclass(frozen=True)
class LayeredGraph:
    """
    `edges[n-2]` holds (child, parent) index pairs between layer n and layer
    n-1. `warnings` and `excluded` are per-layer audit data filled in by
    build_layers.
    """
    layers: Tuple[Tuple[Payload, ...], ...]
    edges: Optional[Tuple[EdgeSet, ...]] = None
    warnings: Tuple[Tuple[str, ...], ...] = ()
    excluded: Tuple[Tuple[Payload, ...], ...] = ()

    def __post_init__(self):
        if self.edges is not None and len(self.edges) != max(0, len(self.layers) - 1):
            raise ValueError(f"{len(self.layers)} layers need {max(0, len(self.layers) - 1)} edge sets")

    @classmethod
    def of(cls, layers: Sequence[Sequence[Payload]], edges=None) -> "LayeredGraph":
        frozen_edges = None if edges is None else tuple(frozenset(e) for e in edges)
        return cls(tuple(tuple(tuple(p) for p in layer) for layer in layers), frozen_edges)

    @property
    def depth(self) -> int:
        return len(self.layers)

    def layer(self, n: int) -> Tuple[Payload, ...]:
        return self.layers[n - 1]

    def layer_sizes(self) -> Tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)

    def children(self) -> List[List[List[int]]]:
        """children[n-1][i]: indices in layer n+1 adjacent to vertex i of layer n, smallest payload first"""
        result = []
        for n in range(1, self.depth):
            parents, kids = self.layers[n - 1], self.layers[n]
            adjacency: List[List[int]] = [[] for _ in parents]
            if self.edges is None:
                position: Dict[Payload, int] = {payload: i for i, payload in enumerate(parents)}
                for child, payload in enumerate(kids):
                    parent = position.get(tuple(payload[:n]))
                    if parent is not None:
                        adjacency[parent].append(child)
            else:
                for child, parent in self.edges[n - 1]:
                    adjacency[parent].append(child)
            for row in adjacency:
                row.sort(key=lambda child: payload_key(kids[child]))
            result.append(adjacency)
        return result


@dataclass(frozen=True)
class Ray:
    vertices: Tuple[Payload, ...]
    indices: Tuple[int, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.vertices)

    def has_prefix_property(self) -> bool:
        return all(
            tuple(self.vertices[i + 1][:i + 1]) == tuple(self.vertices[i])
            for i in range(len(self.vertices) - 1)
        )


@dataclass(frozen=True)
class NoRay:
    """Every path from the root dies before reaching `layer`"""
    layer: int
    layer_sizes: Tuple[int, ...] = ()


def _ordered(layer: Sequence[Payload], indices) -> List[int]:
    return sorted(indices, key=lambda i: payload_key(layer[i]))


def find_ray(graph: LayeredGraph) -> Union[Ray, NoRay]:
    """
    Root-to-bottom path through every layer, choosing the smallest payload
    first at each branch. Dead vertices are remembered, so each edge is
    followed at most once.
    """
    sizes = graph.layer_sizes()
    if graph.depth == 0:
        return Ray(())
    children = graph.children()

    # forward reachability finds the first layer no path reaches
    reached: Set[int] = set(range(sizes[0]))
    if not reached:
        return NoRay(1, sizes)
    for n in range(2, graph.depth + 1):
        reached = {child for parent in reached for child in children[n - 2][parent]}
        if not reached:
            logger.debug(f"no path reaches layer {n}")
            return NoRay(n, sizes)

    dead: Set[Tuple[int, int]] = set()
    path: List[int] = []
    frames: List[Iterator[int]] = [iter(_ordered(graph.layers[0], range(sizes[0])))]
    while frames:
        level = len(frames)
        step = next((i for i in frames[-1] if (level, i) not in dead), None)
        if step is None:
            frames.pop()
            if path:
                dead.add((level - 1, path.pop()))
            continue
        path.append(step)
        if level == graph.depth:
            vertices = tuple(graph.layers[n][i] for n, i in enumerate(path))
            return Ray(vertices, tuple(path))
        frames.append(iter(children[level - 1][step]))
    # unreachable when the forward pass succeeded
    return NoRay(graph.depth, sizes)


def check_chain(graph: LayeredGraph) -> bool:
    """The prefix projection of every layer lies inside the layer above it"""
    for i in range(1, graph.depth):
        upper = set(graph.layer(i))
        for payload in graph.layer(i + 1):
            if tuple(payload[:i]) not in upper:
                return False
    return True
