"""
Line-oriented reports.

Every line starts with a tag: FACT for proven statements, INDET for points the
solver could not decide, NOTE for context and ERR for failures. With --tsv a
line is the tag, a key and its fields separated by tabs.
"""
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .algebra import Point, PolyMap, format_point, format_poly, format_rational
from .models import (
    AMembership,
    BackwardOrbit,
    CoimageSearch,
    FiberResult,
    FiberStatus,
    InjectivityWitness,
    Lemma1Witness,
    MapClassification,
    Membership,
    Node,
    StabilityVerdict,
    StabilizationReport,
    sorted_nodes,
)

FACT, INDET, NOTE, ERR = "FACT", "INDET", "NOTE", "ERR"
NOT_REACHED = "not-reached"


class ReportLine(NamedTuple):
    tag: str
    key: str
    fields: Tuple[str, ...]
    text: str

    def render(self, tsv: bool = False) -> str:
        if tsv:
            return "\t".join((self.tag, self.key) + self.fields)
        return f"{self.tag} {self.text}"


def line(tag: str, key: str, fields: Sequence[str], text: str) -> ReportLine:
    return ReportLine(tag, key, tuple(str(f) for f in fields), text)


def render(lines: Iterable[ReportLine], tsv: bool = False) -> str:
    return "".join(item.render(tsv) + "\n" for item in lines)


def point_set(points: Iterable[Point]) -> str:
    return "{" + ", ".join(format_point(p) for p in points) + "}"


def node_set(nodes: Iterable[Node]) -> str:
    return "{" + ", ".join(str(n) for n in sorted_nodes(nodes)) + "}"


# -- polynomial side ---------------------------------------------------------


def jacobian_lines(classification: MapClassification) -> List[ReportLine]:
    text = format_poly(classification.jacobian)
    return [line(FACT, "jacobian", [text], f"jacobian {text}")]


def classify_lines(classification: MapClassification) -> List[ReportLine]:
    kind = classification.kind.value
    if classification.jacobian.is_constant:
        value = format_rational(classification.jacobian.constant_value)
        return [line(FACT, "classify", ["constant", value, kind], f"jacobian constant {value}; {kind}")]
    text = format_poly(classification.jacobian)
    return [line(FACT, "classify", ["polynomial", text, kind], f"jacobian {text}; {kind}")]


def image_lines(point: Point, membership: Membership) -> List[ReportLine]:
    shown = format_point(point)
    if membership == Membership.NO:
        return [line(FACT, "image", [shown, "no"], f"point {shown} NOT in image")]
    return [line(FACT, "image", [shown, "yes"], f"point {shown} in image")]


def fiber_lines(result: FiberResult) -> List[ReportLine]:
    shown = format_point(result.target)
    status = result.status.value
    lines = [line(FACT, "fiber", [shown, status], f"fiber {shown} status {status}")]
    if result.status == FiberStatus.FINITE:
        count = str(result.distinct_count_over_c)
        if result.certified:
            lines.append(
                line(FACT, "count", [shown, count, result.certificate],
                     f"fiber {shown} distinct-count {count} ({result.certificate})")
            )
        else:
            lines.append(line(INDET, "count", [shown, count], f"fiber {shown} distinct-count at least {count}"))
        for solution in result.rational_solutions:
            source = format_point(solution)
            lines.append(line(FACT, "preimage", [shown, source], f"preimage {source} -> {shown}"))
        if not result.rational_complete:
            lines.append(line(NOTE, "partial", [shown], f"fiber {shown} rational enumeration partial"))
    return lines


def a_member_lines(result: AMembership) -> List[ReportLine]:
    shown = format_point(result.point)
    n = str(result.n)
    if result.member == Membership.YES:
        return [line(FACT, "a-member", [shown, n, "yes"], f"point {shown} in A(f,{n})")]
    if result.member == Membership.NO:
        return [line(FACT, "a-member", [shown, n, "no"], f"point {shown} NOT in A(f,{n})")]
    return [
        line(INDET, "a-member", [shown, n, "indeterminate"],
             f"point {shown} membership in A(f,{n}) undetermined (at least {result.distinct_count} preimages)")
    ]


def coimage_lines(search: CoimageSearch) -> List[ReportLine]:
    lines = [line(FACT, "coimage", [format_point(p)], f"coimage point {format_point(p)}") for p in search.coimage]
    lines += [
        line(NOTE, "refuted", [format_point(p)], f"candidate {format_point(p)} refuted: in image")
        for p in search.refuted
    ]
    lines += [line(NOTE, "note", [text], text) for text in search.notes]
    if search.exhausted:
        lines.append(line(NOTE, "search", ["exhausted"], "candidates exhausted"))
    else:
        lines.append(line(NOTE, "search", ["truncated"], "search truncated; coimage points may be missing"))
    return lines


def stabilization_lines(report: StabilizationReport) -> List[ReportLine]:
    lines: List[ReportLine] = []
    if report.omitted:
        omitted = point_set(report.omitted)
        if report.omitted_invariant is True:
            lines.append(line(FACT, "invariant", [omitted, "yes"], f"Omega = C^2 - {omitted} is invariant"))
        elif report.omitted_invariant is False:
            lines.append(line(FACT, "invariant", [omitted, "no"], f"Omega = C^2 - {omitted} is NOT invariant"))
        else:
            lines.append(line(INDET, "invariant", [omitted], f"invariance of Omega = C^2 - {omitted} undetermined"))
    for k, level in enumerate(report.chain, start=1):
        shown = point_set(level)
        lines.append(line(FACT, "level", [str(k), shown], f"E^{k} = {shown}"))
    for item in report.indeterminate:
        shown = format_point(item.point)
        lines.append(line(INDET, "level-point", [str(item.level), shown], f"point {shown} at level {item.level} undetermined"))
    lines.append(line(NOTE, "universe", [str(len(report.universe))], f"probe universe of {len(report.universe)} points"))
    if report.reached:
        k = str(report.stabilization_index)
        lines.append(line(FACT, "stable", [k], f"K={k}"))
        lines.append(line(NOTE, "stable-image", [report.stable_image_note], report.stable_image_note))
    else:
        lines.append(line(NOTE, NOT_REACHED, [str(report.k_max)], report.stable_image_note))
    return lines


def witness_lines(witness: Optional[InjectivityWitness], probed: int) -> List[ReportLine]:
    if witness is None:
        return [
            line(NOTE, "witness", ["none", str(probed)],
                 f"no rational witness among {probed} probed targets; not a proof of injectivity")
        ]
    fields = [format_point(witness.first), format_point(witness.second), format_point(witness.common_image)]
    return [line(FACT, "witness", fields, f"witness {witness}")]


def iterate_lines(k: int, g: PolyMap) -> List[ReportLine]:
    return [line(FACT, "iterate", [str(k), str(g)], f"iterate k={k} {g}")]


# -- setdyn side -------------------------------------------------------------


def stability_lines(verdict: StabilityVerdict) -> List[ReportLine]:
    if verdict.stable:
        shown = node_set(verdict.e_k)
        return [line(FACT, "stable", [str(verdict.index), shown], f"stable K={verdict.index} E^K={shown}")]
    return [line(FACT, "unstable", [str(verdict.witness)], f"not stable e={verdict.witness}")]


def lemma1_lines(witness: Lemma1Witness) -> List[ReportLine]:
    bound = len(witness.orbit_prefix) - 1
    return [
        line(FACT, "lemma1", [str(witness.e), str(witness.m)], f"e={witness.e} M={witness.m}"),
        line(NOTE, "orbit", [str(bound)], f"orbit of {witness.e} pairwise distinct up to k={bound}"),
    ]


def e_set_lines(k: int, nodes: FrozenSet[Node]) -> List[ReportLine]:
    shown = node_set(nodes)
    return [line(FACT, "eset", [str(k), shown], f"E^{k} = {shown}")]


def oracle_lines(oracle: Dict[int, FrozenSet[Node]], exact: Dict[int, FrozenSet[Node]], limit: int) -> List[ReportLine]:
    lines = []
    for k in sorted(oracle):
        shown = node_set(oracle[k])
        lines.append(line(FACT, "oracle", [str(k), shown], f"E^{k} ~ {shown} (positions < {limit})"))
        if oracle[k] != exact[k]:
            lines.append(line(ERR, "oracle-mismatch", [str(k)], f"oracle disagrees with e_set at k={k}"))
    return lines


def orbit_lines(orbit: BackwardOrbit) -> List[ReportLine]:
    verdict = orbit.verdict.value
    if orbit.depth is not None:
        head = line(FACT, "orbit", [str(orbit.root), verdict, str(orbit.depth)], f"orbit {orbit.root} {verdict} depth {orbit.depth}")
    else:
        head = line(FACT, "orbit", [str(orbit.root), verdict], f"orbit {orbit.root} {verdict}")
    edges = [line(FACT, "edge", [str(c), str(p)], f"edge {c} -> {p}") for c, p in orbit.edges]
    return [head] + edges


def error_lines(error: Exception) -> List[ReportLine]:
    return [line(ERR, type(error).__name__, [str(error)], str(error))]
