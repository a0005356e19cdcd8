"""
Command-line front door.

    stable-image <command> [options] <input file>

Polynomial commands read a map file (`f(x,y) = (p, q)`), the dyn-* commands
read a cofinite self-map spec. Reports go to stdout, logs to stderr.
"""
import argparse
import logging
import re
import sys
from typing import List, Optional, Sequence, Tuple

from pydantic import ValidationError

from .algorithms import (
    a_membership,
    backward_orbit,
    classify,
    coimage_candidates,
    e_set,
    in_image,
    injectivity_witness_search,
    is_stable,
    iterate_map,
    lemma1_witness,
    low_height_points,
    solve_fiber,
    stabilization_report,
    truncation_oracle,
)
from .errors import InvalidInvocation, StableImageError
from .models import Core, Invocation
from .parser import parse_map, parse_node, parse_point, parse_spec, read_source
from .reports import (
    ERR,
    FACT,
    INDET,
    NOT_REACHED,
    ReportLine,
    a_member_lines,
    classify_lines,
    coimage_lines,
    e_set_lines,
    error_lines,
    fiber_lines,
    image_lines,
    iterate_lines,
    jacobian_lines,
    lemma1_lines,
    oracle_lines,
    orbit_lines,
    render,
    stability_lines,
    stabilization_lines,
    witness_lines,
)
from .settings import load_settings

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_INPUT, EXIT_INDETERMINATE, EXIT_UNRESOLVED = 0, 1, 2, 3


class _ArgumentParser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # point values such as -2,1/2 are arguments, not flags
        self._negative_number_matcher = re.compile(r"^-\d")

    def error(self, message):
        raise InvalidInvocation(message)


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="seed for shears and random draws (STABLE_IMAGE_SEED wins)")
    common.add_argument("--degree-cap", type=int, help="largest total degree accepted")
    common.add_argument("--tsv", action="store_true", help="tab-separated output")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logs")

    parser = _ArgumentParser(prog="stable-image", description="Exact analysis of polynomial plane maps and set dynamics")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.add_argument("input_path", help="map or spec file")
        return sub

    command("jacobian", "print J(f)")
    command("classify", "classify J(f) as constant, non-constant or zero")
    command("coimage", "search the points omitted by f")
    fiber = command("fiber", "solve f(x,y) = (a,b)")
    fiber.add_argument("--point", dest="points", action="append", default=[])
    image_test = command("image-test", "decide whether a point is in the image")
    image_test.add_argument("--point", dest="points", action="append", default=[])
    a_member = command("a-member", "decide whether a point has at most n preimages")
    a_member.add_argument("--point", dest="points", action="append", default=[])
    a_member.add_argument("--n", type=int)
    stabilize = command("stabilize", "probe E^k on the closure of the coimage candidates")
    stabilize.add_argument("--point", dest="points", action="append", default=[])
    stabilize.add_argument("--k-max", type=int)
    stabilize.add_argument("--omit", action="append", default=[])
    witness = command("witness", "search two rational points with a common image")
    witness.add_argument("--point", dest="points", action="append", default=[])
    witness.add_argument("--auto-probe", action="store_true")
    witness.add_argument("--height", type=int)
    witness.add_argument("--omit", action="append", default=[])
    iterate = command("iterate", "print f^k")
    iterate.add_argument("--k", type=int)
    command("dyn-stability", "decide whether E^k stabilizes")
    dyn_witness = command("dyn-witness", "extract e and M for an unstable spec")
    dyn_witness.add_argument("--bound", type=int)
    oracle = command("dyn-oracle", "brute-force E^k on a truncated window")
    oracle.add_argument("--k-max", type=int)
    oracle.add_argument("--n-max", type=int)
    eset = command("dyn-eset", "print E^k")
    eset.add_argument("--k", type=int)
    orbit = command("dyn-orbit", "backward orbit tree of a node")
    orbit.add_argument("--node")
    orbit.add_argument("--depth-cap", type=int)
    return parser


def _points(texts: Sequence[str]):
    return [parse_point(text) for text in texts]


def _dedupe(points):
    seen = set()
    ordered = []
    for point in points:
        if point not in seen:
            seen.add(point)
            ordered.append(point)
    return ordered


def exit_status(lines: Sequence[ReportLine]) -> int:
    tags = {item.tag for item in lines}
    if ERR in tags or any(item.key == NOT_REACHED for item in lines):
        return EXIT_UNRESOLVED
    if INDET in tags and FACT not in tags:
        return EXIT_INDETERMINATE
    return EXIT_OK


def run(invocation: Invocation) -> Tuple[int, List[ReportLine]]:
    """Execute one command; returns the exit status and the report lines."""
    command = invocation.command
    try:
        settings = load_settings(seed=invocation.seed, degree_cap=invocation.degree_cap)
        try:
            source = read_source(invocation.input_path)
        except OSError as exc:
            raise InvalidInvocation(f"cannot read {invocation.input_path}: {exc.strerror or exc}") from exc
        logger.info("%s on %s (seed %d)", command, source.origin, settings.seed)

        lines: List[ReportLine] = []
        if command.startswith("dyn-"):
            spec = parse_spec(source)
            if command == "dyn-stability":
                lines = stability_lines(is_stable(spec))
            elif command == "dyn-witness":
                lines = lemma1_lines(lemma1_witness(spec, invocation.bound or settings.orbit_bound))
            elif command == "dyn-oracle":
                k_max = invocation.k_max
                n_max = invocation.n_max or spec.max_coordinate + k_max + 1
                oracle = truncation_oracle(spec, k_max, n_max)
                limit = n_max - k_max
                exact = {k: frozenset(node for node in e_set(spec, k) if _visible(node, limit)) for k in oracle}
                lines = oracle_lines(oracle, exact, limit)
            elif command == "dyn-eset":
                lines = e_set_lines(invocation.k, e_set(spec, invocation.k))
            elif command == "dyn-orbit":
                node = spec.check(parse_node(invocation.node))
                lines = orbit_lines(backward_orbit(spec, node, invocation.depth_cap or settings.depth_cap))
        else:
            f = parse_map(source, settings)
            if command == "jacobian":
                lines = jacobian_lines(classify(f))
            elif command == "classify":
                lines = classify_lines(classify(f))
            elif command == "fiber":
                for point in _points(invocation.points):
                    lines += fiber_lines(solve_fiber(f, point, settings))
            elif command == "image-test":
                for point in _points(invocation.points):
                    lines += image_lines(point, in_image(f, point, settings))
            elif command == "a-member":
                for point in _points(invocation.points):
                    lines += a_member_lines(a_membership(f, point, invocation.n, settings))
            elif command == "coimage":
                lines = coimage_lines(coimage_candidates(f, settings))
            elif command == "stabilize":
                candidates = _points(invocation.points) or coimage_candidates(f, settings).coimage
                report = stabilization_report(f, candidates, invocation.k_max, _points(invocation.omit), settings)
                lines = stabilization_lines(report)
            elif command == "witness":
                targets = _points(invocation.points)
                if invocation.auto_probe:
                    targets += low_height_points(invocation.height or settings.probe_height)
                targets = _dedupe(targets)
                if not targets:
                    raise InvalidInvocation("witness needs --point or --auto-probe")
                found = injectivity_witness_search(f, targets, _points(invocation.omit), settings)
                lines = witness_lines(found, len(targets))
            elif command == "iterate":
                lines = iterate_lines(invocation.k, iterate_map(f, invocation.k, settings))
    except StableImageError as exc:
        logger.debug("%s failed", command, exc_info=True)
        return exc.exit_code, error_lines(exc)
    return exit_status(lines), lines


def _visible(node, limit: int) -> bool:
    return isinstance(node, Core) or node.position < limit


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _configure_logging(args.verbose)
        fields = {key: value for key, value in vars(args).items() if key != "verbose"}
        invocation = Invocation(**fields)
    except InvalidInvocation as exc:
        sys.stdout.write(render(error_lines(exc)))
        return EXIT_INPUT
    except ValidationError as exc:
        problem = exc.errors()[0]
        where = ".".join(str(part) for part in problem["loc"])
        message = f"{where}: {problem['msg']}" if where else problem["msg"]
        sys.stdout.write(render(error_lines(InvalidInvocation(message))))
        return EXIT_INPUT

    status, lines = run(invocation)
    sys.stdout.write(render(lines, invocation.tsv))
    return status


if __name__ == "__main__":
    sys.exit(main())
