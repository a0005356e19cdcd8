"""
Text formats: polynomials, plane maps, points and cofinite self-map specs.

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' INT)?
    atom   := NUMBER | IDENT | '(' expr ')'

NUMBER is an integer or a rational literal n/d. Multiplication is always
explicit. '#' starts a comment that runs to the end of the line.
"""
import re
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Union

from pydantic import BaseModel

from .algebra import MultiPoly, PolyMap, format_point, format_poly
from .algorithms.setdyn import CofiniteSelfMap
from .errors import ArityError, DegreeCapExceeded, ParseError, SpecError
from .models import Core, Node, Ray, sorted_nodes
from .settings import DEFAULT_SETTINGS, SolverSettings


class SourceText(BaseModel):
    text: str
    origin: str = "<inline>"


Source = Union[str, SourceText]


def _source(src: Source) -> SourceText:
    return src if isinstance(src, SourceText) else SourceText(text=src)


class Token(NamedTuple):
    kind: str  # NUMBER, IDENT, OP, EOF
    value: object
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
    (?P<space>[ \t\r\f\v]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<number>\d+(?:[ \t]*/[ \t]*\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*^(),=])
    """,
    re.VERBOSE,
)


def tokenize(src: Source) -> List[Token]:
    src = _source(src)
    text = src.text
    tokens: List[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, column, src.origin)
        kind = match.lastgroup
        lexeme = match.group()
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind == "number":
            if "/" in lexeme:
                numerator, denominator = (int(part) for part in lexeme.split("/"))
                if denominator == 0:
                    raise ParseError("zero denominator in rational literal", line, column, src.origin)
                tokens.append(Token("NUMBER", Fraction(numerator, denominator), line, column))
            else:
                tokens.append(Token("NUMBER", Fraction(int(lexeme)), line, column))
        elif kind == "ident":
            tokens.append(Token("IDENT", lexeme, line, column))
        elif kind == "op":
            tokens.append(Token("OP", lexeme, line, column))
        pos = match.end()
    tokens.append(Token("EOF", None, line, pos - line_start + 1))
    return tokens


def _describe(token: Token) -> str:
    if token.kind == "EOF":
        return "end of input"
    if token.kind == "NUMBER":
        return f"number {token.value}"
    return repr(token.value)


class _Parser:
    def __init__(self, src: SourceText, ring: Sequence[str] = (), settings: SolverSettings = DEFAULT_SETTINGS):
        self.origin = src.origin
        self.tokens = tokenize(src)
        self.pos = 0
        self.ring = tuple(ring)
        self.degree_cap = settings.degree_cap

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, token: Optional[Token] = None) -> ParseError:
        token = token or self.current
        return ParseError(message, token.line, token.column, self.origin)

    def advance(self) -> Token:
        token = self.current
        if token.kind != "EOF":
            self.pos += 1
        return token

    def at(self, kind: str, value=None) -> bool:
        token = self.current
        return token.kind == kind and (value is None or token.value == value)

    def expect(self, kind: str, value=None) -> Token:
        if not self.at(kind, value):
            wanted = repr(value) if value is not None else kind.lower()
            raise self.error(f"expected {wanted}, found {_describe(self.current)}")
        return self.advance()

    def expect_end(self) -> None:
        if not self.at("EOF"):
            raise self.error(f"unexpected {_describe(self.current)}")

    # -- polynomial grammar --------------------------------------------------

    def expression(self) -> MultiPoly:
        result = self.term()
        while self.at("OP", "+") or self.at("OP", "-"):
            op = self.advance().value
            right = self.term()
            result = result + right if op == "+" else result - right
        return result

    def term(self) -> MultiPoly:
        result = self.unary()
        while self.at("OP", "*"):
            self.advance()
            factor = self.unary()
            self.check_degree(max(result.total_degree, 0) + max(factor.total_degree, 0), "*")
            result = result * factor
        return result

    def unary(self) -> MultiPoly:
        if self.at("OP", "-"):
            self.advance()
            return -self.unary()
        if self.at("OP", "+"):
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if not self.at("OP", "^"):
            return base
        self.advance()
        token = self.current
        if token.kind == "OP" and token.value == "-":
            raise self.error("negative exponent")
        if token.kind != "NUMBER" or token.value.denominator != 1:
            raise self.error(f"exponent must be a nonnegative integer, found {_describe(token)}")
        self.advance()
        exponent = int(token.value)
        self.check_degree(max(base.total_degree, 0) * exponent, "^")
        return base ** exponent

    def check_degree(self, degree: int, what: str) -> None:
        if degree > self.degree_cap:
            raise DegreeCapExceeded(degree, self.degree_cap, f"{self.origin}: {what}")

    def atom(self) -> MultiPoly:
        token = self.current
        if token.kind == "NUMBER":
            self.advance()
            return MultiPoly.constant(self.ring, token.value)
        if token.kind == "IDENT":
            if token.value not in self.ring:
                raise self.error(f"unknown variable {token.value!r} (ring: {', '.join(self.ring)})")
            self.advance()
            return MultiPoly.variable(self.ring, token.value)
        if self.at("OP", "("):
            self.advance()
            inner = self.expression()
            self.expect("OP", ")")
            return inner
        raise self.error(f"unexpected {_describe(token)}")

    def signed_number(self) -> Fraction:
        negative = False
        while self.at("OP", "-") or self.at("OP", "+"):
            negative ^= self.advance().value == "-"
        value = self.expect("NUMBER").value
        return -value if negative else value


def parse_poly(src: Source, ring: Sequence[str], settings: SolverSettings = DEFAULT_SETTINGS) -> MultiPoly:
    parser = _Parser(_source(src), ring, settings)
    if parser.at("EOF"):
        raise parser.error("empty polynomial")
    poly = parser.expression()
    parser.expect_end()
    return poly


def parse_map(src: Source, settings: SolverSettings = DEFAULT_SETTINGS) -> PolyMap:
    """`f(x,y) = (p, q)`; the ring is taken from the head."""
    parser = _Parser(_source(src), settings=settings)
    parser.expect("IDENT")
    head = parser.expect("OP", "(")
    names = [parser.expect("IDENT").value]
    while parser.at("OP", ","):
        parser.advance()
        names.append(parser.expect("IDENT").value)
    parser.expect("OP", ")")
    if len(names) != 2:
        raise ArityError(f"{parser.origin}:{head.line}:{head.column}: a plane map takes 2 variables, got {len(names)}")
    if names[0] == names[1]:
        raise parser.error(f"variable {names[0]!r} listed twice", head)
    parser.ring = tuple(names)
    parser.expect("OP", "=")
    opening = parser.expect("OP", "(")
    components = [parser.expression()]
    while parser.at("OP", ","):
        parser.advance()
        components.append(parser.expression())
    parser.expect("OP", ")")
    parser.expect_end()
    if len(components) != 2:
        raise ArityError(
            f"{parser.origin}:{opening.line}:{opening.column}: a plane map has 2 components, got {len(components)}"
        )
    return PolyMap(components[0], components[1])


def parse_point(src: Source):
    """`a,b` or `(a,b)` with signed integer or rational coordinates."""
    parser = _Parser(_source(src))
    parenthesized = parser.at("OP", "(")
    if parenthesized:
        parser.advance()
    first = parser.signed_number()
    parser.expect("OP", ",")
    second = parser.signed_number()
    if parenthesized:
        parser.expect("OP", ")")
    parser.expect_end()
    return (first, second)


_NODE_RE = re.compile(r"^(?:core:(?P<label>[A-Za-z_][A-Za-z0-9_]*)|ray:(?P<index>\d+):(?P<position>\d+))$")


def parse_node(text: str, line: int = 1, column: int = 1, origin: str = "<inline>") -> Node:
    match = _NODE_RE.match(text.strip())
    if match is None:
        raise ParseError(f"bad node {text.strip()!r}; expected core:<label> or ray:<i>:<n>", line, column, origin)
    if match.group("label"):
        return Core(match.group("label"))
    return Ray(int(match.group("index")), int(match.group("position")))


_SPEC_LINE_RE = re.compile(r"^\s*(?P<key>[a-z]+)\s*:(?P<rest>.*)$")
_MAP_RE = re.compile(r"^(?P<lead>\s*)(?P<source>\S+)\s*->\s*(?P<target>\S+)\s*$")


def parse_spec(src: Source) -> CofiniteSelfMap:
    """Lines `rays: r`, `core: a b c` and `map: <node> -> <node>`."""
    src = _source(src)
    rays: Optional[int] = None
    labels: List[str] = []
    overrides = {}
    for number, raw in enumerate(src.text.splitlines(), start=1):
        text = raw.split("#", 1)[0]
        if not text.strip():
            continue
        match = _SPEC_LINE_RE.match(text)
        if match is None:
            raise ParseError("expected `rays:`, `core:` or `map:`", number, 1, src.origin)
        key, rest = match.group("key"), match.group("rest")
        column = match.start("rest") + 1
        if key == "rays":
            if rays is not None:
                raise ParseError("`rays:` given twice", number, 1, src.origin)
            if not rest.strip().isdigit():
                raise ParseError(f"ray count must be a nonnegative integer, got {rest.strip()!r}", number, column, src.origin)
            rays = int(rest)
        elif key == "core":
            for label in rest.split():
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", label):
                    raise ParseError(f"bad core label {label!r}", number, column + rest.index(label), src.origin)
                labels.append(label)
        elif key == "map":
            arrow = _MAP_RE.match(rest)
            if arrow is None:
                raise ParseError("expected `<node> -> <node>`", number, column, src.origin)
            source = parse_node(arrow.group("source"), number, column + arrow.start("source"), src.origin)
            target = parse_node(arrow.group("target"), number, column + arrow.start("target"), src.origin)
            if source in overrides:
                raise ParseError(f"{source} is mapped twice", number, column, src.origin)
            overrides[source] = target
        else:
            raise ParseError(f"unknown key {key!r}", number, 1, src.origin)
    try:
        return CofiniteSelfMap(core_labels=tuple(labels), ray_count=rays or 0, overrides=overrides)
    except SpecError as exc:
        raise SpecError(f"{src.origin}: {exc}") from exc


def print_canonical(value) -> str:
    if isinstance(value, MultiPoly):
        return format_poly(value)
    if isinstance(value, PolyMap):
        return str(value)
    if isinstance(value, CofiniteSelfMap):
        lines = [f"rays: {value.ray_count}"]
        if value.core_labels:
            lines.append("core: " + " ".join(value.core_labels))
        for source in sorted_nodes(value.overrides):
            lines.append(f"map: {source} -> {value.overrides[source]}")
        return "\n".join(lines) + "\n"
    if isinstance(value, (Core, Ray)):
        return str(value)
    if isinstance(value, tuple) and len(value) == 2:
        return format_point(value)
    raise TypeError(f"no canonical text for {type(value).__name__}")


def read_source(path) -> SourceText:
    with open(path, encoding="utf-8") as handle:
        return SourceText(text=handle.read(), origin=str(path))
