"""
Iterated images of eventually-shift self-maps of a countable set.

X is a finite core plus rays Ray(i, 0), Ray(i, 1), ...; every node maps to
the next node of its ray unless a finite override table says otherwise, and
every core node is overridden. E^k = X - f^k(X) is exactly the set of nodes
whose longest backward chain is shorter than k, which keeps every quantity
here finite and exactly computable.

Let span_i be the largest position of ray i used by an override (-1 if
none). Past span_i + 1 a ray node has its predecessor as only preimage, so
depth grows by one per step and E^k only contains ray positions below
span_i + 1 + k. Forward orbits either cycle or escape past every span, and
after escaping they never meet an override again.
"""
import logging
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from ..errors import InvalidNodeError, NotApplicableError, SpecError, UnresolvedError
from ..models import (
    BackwardOrbit,
    Core,
    Lemma1Witness,
    Node,
    OrbitVerdict,
    Ray,
    StabilityVerdict,
    sorted_nodes,
)
from ..settings import DEFAULT_SETTINGS

logger = logging.getLogger(__name__)

MAX_RANDOM_RAYS = 4
MAX_RANDOM_CORE = 6
MAX_RANDOM_OVERRIDES = 8
MAX_RANDOM_COORDINATE = 12


@dataclass(frozen=True)
class CofiniteSelfMap:
    core_labels: Tuple[str, ...]
    ray_count: int
    overrides: Mapping[Node, Node] = field(default_factory=dict)

    def __post_init__(self):
        labels = tuple(self.core_labels)
        if len(set(labels)) != len(labels):
            raise SpecError(f"duplicate core labels in {labels}")
        if self.ray_count < 0:
            raise SpecError(f"ray count must be nonnegative, got {self.ray_count}")
        if not labels and not self.ray_count:
            raise SpecError("the set X must be nonempty")
        object.__setattr__(self, "core_labels", labels)
        object.__setattr__(self, "overrides", MappingProxyType(dict(self.overrides)))
        for source, target in self.overrides.items():
            self.check(source)
            self.check(target)
        missing = [label for label in labels if Core(label) not in self.overrides]
        if missing:
            raise SpecError(f"core nodes without an image: {missing}")
        sources: Dict[Node, List[Node]] = {}
        for source, target in self.overrides.items():
            sources.setdefault(target, []).append(source)
        object.__setattr__(self, "_sources", {t: frozenset(s) for t, s in sources.items()})

    def __hash__(self):
        return hash((self.core_labels, self.ray_count, frozenset(self.overrides.items())))

    def check(self, node: Node) -> Node:
        if isinstance(node, Core):
            if node.label not in self.core_labels:
                raise InvalidNodeError(f"unknown core node {node}")
        elif isinstance(node, Ray):
            if not 0 <= node.index < self.ray_count or node.position < 0:
                raise InvalidNodeError(f"{node} is not a node of a spec with {self.ray_count} rays")
        else:
            raise InvalidNodeError(f"not a node: {node!r}")
        return node

    def span(self, index: int) -> int:
        positions = [
            n.position
            for pair in self.overrides.items()
            for n in pair
            if isinstance(n, Ray) and n.index == index
        ]
        return max(positions, default=-1)

    @property
    def max_coordinate(self) -> int:
        return max((self.span(i) for i in range(self.ray_count)), default=-1)

    @property
    def stability_bound(self) -> int:
        spans = sum(self.span(i) + 1 for i in range(self.ray_count))
        return len(self.core_labels) + spans + self.ray_count + 1

    def region(self, k: int) -> List[Node]:
        """Nodes that can belong to E^k."""
        nodes: List[Node] = [Core(label) for label in self.core_labels]
        for i in range(self.ray_count):
            nodes.extend(Ray(i, n) for n in range(self.span(i) + 1 + k))
        return nodes


def apply(spec: CofiniteSelfMap, node: Node) -> Node:
    spec.check(node)
    target = spec.overrides.get(node)
    if target is not None:
        return target
    return Ray(node.index, node.position + 1)


def preimages(spec: CofiniteSelfMap, node: Node) -> FrozenSet[Node]:
    spec.check(node)
    found = set(spec._sources.get(node, ()))
    if isinstance(node, Ray) and node.position >= 1:
        before = Ray(node.index, node.position - 1)
        if before not in spec.overrides:
            found.add(before)
    return frozenset(found)


def _fill_depths(spec: CofiniteSelfMap, roots: Iterable[Node], memo: Dict[Node, float]) -> None:
    """Longest backward chain per node; math.inf when a cycle is reachable backwards."""
    for root in roots:
        if root in memo:
            continue
        stack = [root]
        on_path = {root}
        pending = {root: sorted_nodes(preimages(spec, root))}
        best = {root: 0}
        while stack:
            node = stack[-1]
            if pending[node]:
                child = pending[node].pop()
                if child in on_path:
                    best[node] = math.inf
                elif child in memo:
                    best[node] = max(best[node], memo[child] + 1)
                else:
                    stack.append(child)
                    on_path.add(child)
                    pending[child] = sorted_nodes(preimages(spec, child))
                    best[child] = 0
                continue
            stack.pop()
            on_path.discard(node)
            memo[node] = best[node]
            if stack:
                parent = stack[-1]
                best[parent] = max(best[parent], best[node] + 1)


def depth(spec: CofiniteSelfMap, node: Node, memo: Optional[Dict[Node, float]] = None) -> Optional[int]:
    """Length of the longest backward chain ending at node, None if unbounded."""
    spec.check(node)
    memo = {} if memo is None else memo
    _fill_depths(spec, [node], memo)
    value = memo[node]
    return None if value == math.inf else int(value)


def in_e_infinity(spec: CofiniteSelfMap, node: Node) -> bool:
    return depth(spec, node) is not None


def e_set(spec: CofiniteSelfMap, k: int, memo: Optional[Dict[Node, float]] = None) -> FrozenSet[Node]:
    """E^k = X - f^k(X)."""
    if k < 1:
        raise NotApplicableError(f"k must be positive, got {k}")
    memo = {} if memo is None else memo
    region = spec.region(k)
    _fill_depths(spec, region, memo)
    return frozenset(node for node in region if memo[node] < k)


def _escape_index(spec: CofiniteSelfMap, e: Node, memo: Dict[Node, float]) -> Optional[int]:
    """
    Steps until the forward orbit of e passes every override of its ray, or
    None when some orbit point has unbounded depth (this covers cycles).
    """
    node = e
    steps = 0
    while True:
        _fill_depths(spec, [node], memo)
        if memo[node] == math.inf:
            return None
        if isinstance(node, Ray) and node.position > spec.span(node.index):
            return steps
        node = apply(spec, node)
        steps += 1


def is_stable(spec: CofiniteSelfMap) -> StabilityVerdict:
    """
    NotStable exactly when some e in E keeps its whole forward orbit inside
    E^infinity; otherwise the first K with no node of depth K gives E^K = E^infinity.
    """
    memo: Dict[Node, float] = {}
    for e in sorted_nodes(e_set(spec, 1, memo)):
        if _escape_index(spec, e, memo) is not None:
            logger.debug("unstable: forward orbit of %s stays in E^infinity", e)
            return StabilityVerdict(stable=False, witness=e)
    bound = spec.stability_bound
    region = spec.region(bound + 2)
    _fill_depths(spec, region, memo)
    depths = {memo[node] for node in region}
    index = next((k for k in range(1, bound + 2) if k not in depths), None)
    if index is None:
        raise UnresolvedError(f"no stabilization index below the bound {bound + 1}")
    return StabilityVerdict(stable=True, index=index, e_k=sorted_nodes(e_set(spec, index, memo)))


def backward_orbit(spec: CofiniteSelfMap, node: Node, depth_cap: int = DEFAULT_SETTINGS.depth_cap) -> BackwardOrbit:
    """Breadth-first reverse search; in a functional graph a revisit means a cycle."""
    if depth_cap < 1:
        raise NotApplicableError(f"depth_cap must be positive, got {depth_cap}")
    spec.check(node)
    visited = {node}
    frontier = [node]
    edges: List[Tuple[Node, Node]] = []
    level = 0
    while frontier:
        fresh = []
        for parent in frontier:
            for child in sorted_nodes(preimages(spec, parent)):
                edges.append((child, parent))
                if child in visited:
                    return BackwardOrbit(root=node, edges=edges, verdict=OrbitVerdict.CONTAINS_CYCLE)
                visited.add(child)
                fresh.append(child)
        if fresh:
            if level + 1 > depth_cap:
                raise UnresolvedError(f"backward orbit of {node} is deeper than {depth_cap}")
            level += 1
        frontier = fresh
    return BackwardOrbit(root=node, edges=edges, verdict=OrbitVerdict.FINITE_TREE, depth=level)


def lemma1_witness(spec: CofiniteSelfMap, bound: int = DEFAULT_SETTINGS.orbit_bound) -> Lemma1Witness:
    """
    e in E with its forward orbit in E^infinity, and the least M such that
    f^k(e) has f^(k-1)(e) as its only preimage for every k >= M.
    """
    verdict = is_stable(spec)
    if verdict.stable:
        raise NotApplicableError("the spec is stable; no point of E has its whole orbit in E^infinity")
    e = verdict.witness
    memo: Dict[Node, float] = {}
    escape = _escape_index(spec, e, memo)
    orbit = [e]
    for _ in range(max(bound, escape + 1)):
        orbit.append(apply(spec, orbit[-1]))
    extra = [k for k in range(1, len(orbit)) if preimages(spec, orbit[k]) != {orbit[k - 1]}]
    m = 1 + max(extra, default=0)
    prefix = orbit[: bound + 1]
    if len(set(prefix)) != len(prefix):
        raise UnresolvedError(f"forward orbit of {e} repeats within {bound} steps")
    return Lemma1Witness(e=e, m=m, orbit_prefix=prefix)


def truncation_oracle(spec: CofiniteSelfMap, k_max: int, n_max: int) -> Dict[int, FrozenSet[Node]]:
    """
    Brute-force E^k for k <= k_max on X cut at ray position n_max, reported on
    the positions below n_max - k_max that the cut cannot affect.
    """
    if n_max <= spec.max_coordinate + k_max:
        raise NotApplicableError(
            f"n_max={n_max} must exceed the largest override coordinate {spec.max_coordinate} plus k_max={k_max}"
        )
    universe = [Core(label) for label in spec.core_labels]
    universe += [Ray(i, n) for i in range(spec.ray_count) for n in range(n_max)]
    limit = n_max - k_max

    def visible(node: Node) -> bool:
        return isinstance(node, Core) or node.position < limit

    image = set(universe)
    result = {}
    for k in range(1, k_max + 1):
        image = {apply(spec, node) for node in image}
        result[k] = frozenset(node for node in universe if visible(node) and node not in image)
    return result


def random_cofinite_map(rng: np.random.Generator) -> CofiniteSelfMap:
    """Seeded random spec: <= 4 rays, <= 6 core nodes, <= 8 extra overrides, coordinates <= 12."""
    ray_count = int(rng.integers(0, MAX_RANDOM_RAYS + 1))
    core_size = int(rng.integers(0, MAX_RANDOM_CORE + 1))
    if not ray_count and not core_size:
        ray_count = 1
    labels = tuple(f"c{i}" for i in range(core_size))

    def random_node() -> Node:
        if labels and (not ray_count or rng.random() < 0.3):
            return Core(labels[int(rng.integers(len(labels)))])
        return Ray(int(rng.integers(ray_count)), int(rng.integers(0, MAX_RANDOM_COORDINATE + 1)))

    overrides: Dict[Node, Node] = {Core(label): random_node() for label in labels}
    if ray_count:
        for _ in range(int(rng.integers(0, MAX_RANDOM_OVERRIDES + 1))):
            source = Ray(int(rng.integers(ray_count)), int(rng.integers(0, MAX_RANDOM_COORDINATE + 1)))
            overrides[source] = random_node()
    return CofiniteSelfMap(core_labels=labels, ray_count=ray_count, overrides=overrides)
