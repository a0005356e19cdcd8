from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import List, Literal, NamedTuple, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .algebra import MultiPoly, Point, format_point

# -- setdyn nodes ------------------------------------------------------------


class Core(NamedTuple):
    label: str

    def __str__(self):
        return f"core:{self.label}"


class Ray(NamedTuple):
    index: int
    position: int

    def __str__(self):
        return f"ray:{self.index}:{self.position}"


Node = Union[Core, Ray]


def node_sort_key(node: Node):
    if isinstance(node, Core):
        return (0, node.label, 0)
    return (1, node.index, node.position)


def sorted_nodes(nodes) -> List[Node]:
    return sorted(nodes, key=node_sort_key)


# -- statuses ----------------------------------------------------------------


class FiberStatus(str, Enum):
    EMPTY = "Empty"
    FINITE = "Finite"
    INFINITE = "Infinite"


class Membership(str, Enum):
    YES = "Yes"
    NO = "No"
    INDETERMINATE = "Indeterminate"


class MapKind(str, Enum):
    JACOBIAN_PAIR = "JacobianPair"
    NON_CONSTANT_JACOBIAN = "NonConstantJacobian"
    DEGENERATE_JACOBIAN = "DegenerateJacobian"


class OrbitVerdict(str, Enum):
    FINITE_TREE = "FiniteTree"
    CONTAINS_CYCLE = "ContainsCycle"
    # not produced for cofinite self-maps
    UNBOUNDED_PATH = "UnboundedPath"


class ResultModel(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


# -- polynomial side ---------------------------------------------------------


class FiberResult(ResultModel):
    target: Point
    status: FiberStatus
    distinct_count_over_c: Optional[int] = Field(
        default=None, ge=0, description="Distinct complex solutions; a lower bound when not certified, None when infinite"
    )
    certified: bool = Field(default=True, description="Whether distinct_count_over_c is proven")
    certificate: Optional[str] = Field(default=None, description="How the status/count was proven")
    rational_solutions: List[Point] = Field(default_factory=list)
    rational_complete: bool = Field(default=True, description="False when the rational-root search was truncated")
    shear: Optional[int] = Field(default=None, description="lambda of the frame y -> y + lambda*x used")
    eliminant_degree: Optional[int] = None

    @property
    def is_empty(self) -> bool:
        return self.status == FiberStatus.EMPTY


class AMembership(ResultModel):
    point: Point
    n: int = Field(ge=0)
    member: Membership
    distinct_count: Optional[int] = None
    certified: bool = True


class MapClassification(ResultModel):
    jacobian: MultiPoly
    kind: MapKind

    @property
    def constant(self) -> Optional[Fraction]:
        return self.jacobian.constant_value if self.jacobian.is_constant else None


class CoimageSearch(ResultModel):
    candidates: List[Point]
    coimage: List[Point] = Field(description="Candidates certified outside the image")
    refuted: List[Point] = Field(description="Candidates shown to be in the image")
    exhausted: bool = Field(description="False when some candidate system could not be solved completely")
    notes: List[str] = Field(default_factory=list)


class IndeterminatePoint(ResultModel):
    level: int
    point: Point


class StabilizationReport(ResultModel):
    candidates: List[Point]
    omitted: List[Point] = Field(default_factory=list, description="Finite set F with Omega = C^2 - F")
    omitted_invariant: Optional[bool] = Field(default=None, description="Whether f(Omega) lies in Omega; None if undecided")
    universe: List[Point]
    chain: List[List[Point]] = Field(description="chain[k-1] is the probed E^k")
    k_max: int
    stabilization_index: Optional[int] = None
    indeterminate: List[IndeterminatePoint] = Field(default_factory=list)
    stable_image_note: str = ""

    @property
    def reached(self) -> bool:
        return self.stabilization_index is not None


class InjectivityWitness(ResultModel):
    first: Point
    second: Point
    common_image: Point

    def __str__(self):
        return f"{format_point(self.first)} {format_point(self.second)} -> {format_point(self.common_image)}"


class CoverageSummary(ResultModel):
    total: int
    finite: int
    infinite: int
    empty_points: List[Point] = Field(default_factory=list)

    @property
    def nonempty(self) -> int:
        return self.finite + self.infinite


# -- setdyn side -------------------------------------------------------------


class StabilityVerdict(ResultModel):
    stable: bool
    index: Optional[int] = Field(default=None, description="K with E^K = E^infinity")
    e_k: List[Node] = Field(default_factory=list)
    witness: Optional[Node] = Field(default=None, description="e in E whose forward orbit stays in E^infinity")


class BackwardOrbit(ResultModel):
    root: Node
    edges: List[Tuple[Node, Node]] = Field(description="(child, parent) with f(child) = parent")
    verdict: OrbitVerdict
    depth: Optional[int] = None


class Lemma1Witness(ResultModel):
    e: Node
    m: int = Field(ge=1)
    orbit_prefix: List[Node]


# -- front door --------------------------------------------------------------

Command = Literal[
    "jacobian",
    "classify",
    "fiber",
    "image-test",
    "a-member",
    "coimage",
    "stabilize",
    "witness",
    "iterate",
    "dyn-stability",
    "dyn-witness",
    "dyn-oracle",
    "dyn-eset",
    "dyn-orbit",
]


class Invocation(BaseModel):
    command: Command
    input_path: Path
    points: List[str] = Field(default_factory=list)
    omit: List[str] = Field(default_factory=list)
    n: Optional[int] = Field(default=None, ge=0)
    k: Optional[int] = Field(default=None, ge=1)
    k_max: Optional[int] = Field(default=None, ge=1)
    n_max: Optional[int] = Field(default=None, ge=1)
    node: Optional[str] = None
    auto_probe: bool = False
    seed: Optional[int] = None
    degree_cap: Optional[int] = None
    height: Optional[int] = None
    bound: Optional[int] = None
    depth_cap: Optional[int] = None
    tsv: bool = False

    @model_validator(mode="after")
    def _required_options(self) -> "Invocation":
        missing = [name for name in REQUIRED_OPTIONS.get(self.command, ()) if getattr(self, name) in (None, [])]
        if missing:
            flags = ", ".join(OPTION_FLAGS.get(m, "--" + m.replace("_", "-")) for m in missing)
            raise ValueError(f"{self.command} needs {flags}")
        return self


REQUIRED_OPTIONS = {
    "fiber": ("points",),
    "image-test": ("points",),
    "a-member": ("points", "n"),
    "iterate": ("k",),
    "dyn-eset": ("k",),
    "dyn-oracle": ("k_max",),
    "dyn-orbit": ("node",),
}

OPTION_FLAGS = {"points": "--point"}
