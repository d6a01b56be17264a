"""Two-vertex quiver presentations with quadratic monomial relations.

Composition is right-to-left throughout: the relation word "d*c" means
"apply c, then d", and a stored relation pair (beta, alpha) forbids the
path beta-after-alpha.  The built-in catalog collects the fifteen
infinite-dimensional gentle presentations on two vertices that the rest
of the package classifies modules over.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class DSLError(ValueError):
    """Parse failure in the presentation DSL, with a 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str, str], ...]  # (name, source, target)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate arrow ids")
        vs = set(self.vertices)
        for name, s, t in self.arrows:
            if s not in vs or t not in vs:
                raise ValueError(f"arrow {name}: undeclared vertex")

    def source(self, arrow: str) -> str:
        return self._by_name()[arrow][1]

    def target(self, arrow: str) -> str:
        return self._by_name()[arrow][2]

    def _by_name(self):
        return {a[0]: a for a in self.arrows}

    @property
    def arrow_names(self) -> tuple[str, ...]:
        return tuple(a[0] for a in self.arrows)


@dataclass(frozen=True)
class Path:
    """A composable run of arrows, or a trivial path at a vertex.

    `arrows` is in display order: the leftmost arrow is applied last,
    matching the relation words ("ca" is a-then-c).
    """

    arrows: tuple[str, ...]
    at: str | None = None  # basepoint, only for the trivial path

    def __post_init__(self):
        if not self.arrows and self.at is None:
            raise ValueError("trivial path needs a basepoint vertex")

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def display(self) -> str:
        if self.is_trivial:
            return f"e_{self.at}"
        return "*".join(self.arrows)


@dataclass
class GentleReport:
    ok: bool
    violations: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class Presentation:
    quiver: Quiver
    relations: tuple[tuple[str, str], ...]  # (beta, alpha): beta-after-alpha is zero
    note: str = ""

    def __post_init__(self):
        seen = set()
        for rel in self.relations:
            if rel in seen:
                raise ValueError(f"duplicate relation {rel[0]}*{rel[1]}")
            seen.add(rel)

    @property
    def relation_set(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.relations)

    def source(self, arrow: str) -> str:
        return self.quiver.source(arrow)

    def target(self, arrow: str) -> str:
        return self.quiver.target(arrow)

    def path_source(self, p: Path) -> str:
        return p.at if p.is_trivial else self.source(p.arrows[-1])

    def path_target(self, p: Path) -> str:
        return p.at if p.is_trivial else self.target(p.arrows[0])

    def to_dsl(self) -> str:
        lines = ["vertices: " + " ".join(self.quiver.vertices)]
        lines.append("arrows: " + " ; ".join(
            f"{n}: {s} -> {t}" for n, s, t in self.quiver.arrows))
        if self.relations:
            lines.append("relations: " + " ; ".join(
                f"{b}*{a}" for b, a in self.relations))
        return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> Presentation:
    """Parse the line-oriented DSL.

    Format (comments start with '#'):

        vertices: 1 2
        arrows: a: 1 -> 1 ; c: 1 -> 2
        relations: a*a ; d*c

    Raises DSLError with a line number on malformed input.
    """
    vertices = None
    arrows = None
    relations = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise DSLError("expected 'key: ...'", lineno)
        key, _, rest = line.partition(":")
        key = key.strip().lower()
        if key == "vertices":
            if vertices is not None:
                raise DSLError("duplicate 'vertices' line", lineno)
            vertices = tuple(rest.split())
            if not vertices:
                raise DSLError("no vertices given", lineno)
        elif key == "arrows":
            if arrows is not None:
                raise DSLError("duplicate 'arrows' line", lineno)
            arrows = []
            for chunk in rest.split(";"):
                chunk = chunk.strip()
                if not chunk:
                    continue
                try:
                    name, spec = chunk.split(":", 1)
                    src, tgt = spec.split("->")
                except ValueError:
                    raise DSLError(f"bad arrow {chunk!r}", lineno) from None
                name, src, tgt = name.strip(), src.strip(), tgt.strip()
                if not (name and src and tgt):
                    raise DSLError(f"bad arrow {chunk!r}", lineno)
                arrows.append((name, src, tgt))
            if not arrows:
                raise DSLError("no arrows given", lineno)
        elif key == "relations":
            if relations is not None:
                raise DSLError("duplicate 'relations' line", lineno)
            relations = []
            for chunk in rest.split(";"):
                chunk = chunk.strip()
                if not chunk:
                    continue
                factors = [f.strip() for f in chunk.split("*")]
                if len(factors) != 2 or not all(factors):
                    raise DSLError(
                        f"relation {chunk!r} must be a length-2 word", lineno)
                relations.append((factors[0], factors[1]))
        else:
            raise DSLError(f"unknown key {key!r}", lineno)
    if vertices is None:
        raise DSLError("missing 'vertices' line")
    if arrows is None:
        raise DSLError("missing 'arrows' line")
    try:
        quiver = Quiver(vertices, tuple(arrows))
        return Presentation(quiver, tuple(relations or ()))
    except ValueError as exc:
        raise DSLError(str(exc)) from None


def validate_gentle(p: Presentation) -> GentleReport:
    """Check the gentle conditions (G1)-(G4).

    (G1) relations are composable length-2 monomials; (G2) at most two
    arrows start and at most two end at each vertex; (G3) for each
    arrow, at most one left and one right neighbour avoiding the ideal;
    (G4) the same with "inside the ideal".  Non-composable relations
    are reported as errors, not gentle violations.
    """
    report = GentleReport(ok=True)
    names = set(p.quiver.arrow_names)
    for beta, alpha in p.relations:
        if beta not in names or alpha not in names:
            report.errors.append(f"relation {beta}*{alpha}: unknown arrow")
        elif p.source(beta) != p.target(alpha):
            report.errors.append(
                f"relation {beta}*{alpha}: not composable "
                f"(source({beta}) != target({alpha}))")
    if report.errors:
        report.ok = False
        return report

    for v in p.quiver.vertices:
        outs = [a for a, s, _ in p.quiver.arrows if s == v]
        ins = [a for a, _, t in p.quiver.arrows if t == v]
        if len(outs) > 2:
            report.violations.append(f"(G2) vertex {v}: {len(outs)} arrows out")
        if len(ins) > 2:
            report.violations.append(f"(G2) vertex {v}: {len(ins)} arrows in")

    rels = p.relation_set
    for alpha in p.quiver.arrow_names:
        succ = [b for b in p.quiver.arrow_names
                if p.source(b) == p.target(alpha)]
        cont = [b for b in succ if (b, alpha) not in rels]
        kill = [b for b in succ if (b, alpha) in rels]
        if len(cont) > 1:
            report.violations.append(
                f"(G3) arrow {alpha}: continuations {sorted(cont)} all avoid the ideal")
        if len(kill) > 1:
            report.violations.append(
                f"(G4) arrow {alpha}: {sorted(kill)} both annihilate after {alpha}")
        pred = [b for b in p.quiver.arrow_names
                if p.target(b) == p.source(alpha)]
        cont_p = [b for b in pred if (alpha, b) not in rels]
        kill_p = [b for b in pred if (alpha, b) in rels]
        if len(cont_p) > 1:
            report.violations.append(
                f"(G3) arrow {alpha}: predecessors {sorted(cont_p)} all avoid the ideal")
        if len(kill_p) > 1:
            report.violations.append(
                f"(G4) arrow {alpha}: {sorted(kill_p)} both annihilate before {alpha}")

    report.ok = not report.violations
    return report


def compose(p: Presentation, q: Path, r: Path) -> Path | None:
    """The path "q after r", or None when it is zero or ill-typed.

    Trivial paths act as identities at their vertex.
    """
    if q.is_trivial and r.is_trivial:
        return q if q.at == r.at else None
    if q.is_trivial:
        return r if p.path_target(r) == q.at else None
    if r.is_trivial:
        return q if p.path_source(q) == r.at else None
    if p.path_source(q) != p.path_target(r):
        return None
    arrows = q.arrows + r.arrows
    rels = p.relation_set
    for i in range(len(arrows) - 1):
        if (arrows[i], arrows[i + 1]) in rels:
            return None
    return Path(arrows)


@dataclass
class RadicalLayerReport:
    vertex: str
    depth: int
    layers: list[list[str]]          # sorted simple labels per radical power
    arms: list[dict]                 # {"first_arrow", "targets", "paths"}


def radical_series(p: Presentation, v: str, depth: int) -> RadicalLayerReport:
    """Layers and arms of the projective at v, truncated at `depth`.

    Layer i lists the simple at the target of every nonzero length-i
    path starting at v.  Each arm follows one starting arrow through
    its unique ideal-avoiding continuations until the path dies or the
    depth is reached.
    """
    if v not in p.quiver.vertices:
        raise ValueError(f"unknown vertex {v!r}")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    rels = p.relation_set

    layers = [[f"S{v}"]]
    frontier = [Path((), at=v)]
    for _ in range(depth):
        new = []
        for path in frontier:
            succ_from = p.path_target(path)
            for name in p.quiver.arrow_names:
                if p.source(name) != succ_from:
                    continue
                ext = compose(p, Path((name,)), path)
                if ext is not None:
                    new.append(ext)
        frontier = new
        layers.append(sorted(f"S{p.path_target(pa)}" for pa in frontier))

    arms = []
    for name in p.quiver.arrow_names:
        if p.source(name) != v:
            continue
        chain = [name]
        targets = [f"S{p.target(name)}"]
        paths = ["*".join(reversed(chain))]
        while len(chain) < depth:
            last = chain[-1]
            cont = [b for b in p.quiver.arrow_names
                    if p.source(b) == p.target(last) and (b, last) not in rels]
            if not cont:
                break
            if len(cont) > 1:
                raise ValueError(
                    f"arrow {last}: ambiguous continuation, presentation not gentle")
            chain.append(cont[0])
            targets.append(f"S{p.target(cont[0])}")
            paths.append("*".join(reversed(chain)))
        arms.append({"first_arrow": name, "targets": targets, "paths": paths})
    return RadicalLayerReport(vertex=v, depth=depth, layers=layers, arms=arms)


def _entry(name, vertices, arrows, relations, note=""):
    return name, Presentation(Quiver(tuple(vertices), tuple(arrows)),
                              tuple(relations), note=note)


def table1_catalog() -> list[tuple[str, Presentation]]:
    """The fifteen two-vertex infinite-dimensional gentle presentations.

    Names group presentations by quiver (qi..qviii) with a running
    index per ideal.  Entries whose printed source used clashing arrow
    labels carry a note describing the normalization adopted here.
    """
    V = ("1", "2")
    entries = [
        _entry("qi.1", V, [("a", "1", "2"), ("b", "2", "1")], []),
        _entry("qii.1", V,
               [("a", "1", "2"), ("b", "1", "2"), ("c", "2", "1")],
               [("a", "c"), ("c", "a")],
               note="arrow labels normalized: two forward arrows a, b and "
                    "one backward arrow c, the unique gentle reading of the "
                    "printed ideal <ac, ca>"),
        _entry("qiii.1", V,
               [("a", "1", "2"), ("b", "1", "2"),
                ("c", "2", "1"), ("d", "2", "1")],
               [("c", "a"), ("d", "b"), ("a", "c"), ("b", "d")]),
        _entry("qiii.2", V,
               [("a", "1", "2"), ("b", "1", "2"),
                ("c", "2", "1"), ("d", "2", "1")],
               [("c", "a"), ("d", "b"), ("b", "c"), ("a", "d")],
               note="second ideal on the four-arrow quiver; verified "
                    "composable and gentle exactly as printed"),
        _entry("qiv.1", V, [("a", "1", "1"), ("b", "1", "2")], [("b", "a")]),
        _entry("qv.1", V, [("b", "1", "2"), ("a", "2", "2")], [("a", "b")]),
        _entry("qvi.1", V,
               [("a", "1", "1"), ("b", "1", "2"), ("c", "2", "1")],
               [("a", "a"), ("b", "c")]),
        _entry("qvi.2", V,
               [("a", "1", "1"), ("b", "1", "2"), ("c", "2", "1")],
               [("b", "a"), ("a", "c")]),
        _entry("qvi.3", V,
               [("a", "1", "1"), ("b", "1", "2"), ("c", "2", "1")],
               [("b", "a"), ("a", "c"), ("c", "b")]),
        _entry("qvii.1", V,
               [("a", "1", "1"), ("c", "1", "2"), ("b", "2", "2")],
               [("a", "a"), ("b", "c")]),
        _entry("qvii.2", V,
               [("a", "1", "1"), ("c", "1", "2"), ("b", "2", "2")],
               [("c", "a"), ("b", "b")]),
        _entry("qvii.3", V,
               [("a", "1", "1"), ("c", "1", "2"), ("b", "2", "2")],
               [("c", "a"), ("b", "c")]),
        _entry("qviii.1", V,
               [("a", "1", "1"), ("c", "1", "2"),
                ("d", "2", "1"), ("b", "2", "2")],
               [("a", "a"), ("b", "b"), ("d", "c"), ("c", "d")]),
        _entry("qviii.2", V,
               [("a", "1", "1"), ("c", "1", "2"),
                ("d", "2", "1"), ("b", "2", "2")],
               [("a", "a"), ("d", "b"), ("b", "c"), ("c", "d")]),
        _entry("qviii.3", V,
               [("a", "1", "1"), ("c", "1", "2"),
                ("d", "2", "1"), ("b", "2", "2")],
               [("c", "a"), ("d", "b"), ("b", "c"), ("a", "d")]),
    ]
    return entries


def catalog_presentation(name: str) -> Presentation:
    for entry_name, pres in table1_catalog():
        if entry_name == name:
            return pres
    raise KeyError(f"no catalog entry named {name!r}")


LAMBDA0 = "qviii.1"
