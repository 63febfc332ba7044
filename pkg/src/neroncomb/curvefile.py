"""Line-based curve files.

::

    # two elliptic components meeting in three nodes
    vertex C1 1
    vertex C2 1
    edge C1 C2
    edge C1 C2
    edge C1 C2
    twister -5,5      # optional: custom twister lattice generator

``vertex`` lines fix the component order; ``edge`` lines refer to vertex ids
and may repeat (multiple nodes) or join a vertex to itself (a loop).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import CurveSyntaxError, DuplicateVertexId
from .graph import DualGraph, build_curve


@dataclass(frozen=True)
class CurveFile:
    curve: DualGraph
    twisters: tuple[tuple[int, ...], ...] | None = None
    path: str | None = None


def parse_curve(text: str, path: str | None = None) -> CurveFile:
    vertices: list[tuple[str, int]] = []
    index: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    twisters: list[tuple[tuple[int, ...], int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        if head == "vertex":
            if len(args) != 2:
                raise CurveSyntaxError("expected 'vertex <id> <genus>'", lineno)
            vid, gtxt = args
            try:
                genus = int(gtxt)
            except ValueError:
                raise CurveSyntaxError(f"genus {gtxt!r} is not an integer", lineno) from None
            if genus < 0:
                raise CurveSyntaxError("genus must be non-negative", lineno)
            if vid in index:
                raise DuplicateVertexId(f"line {lineno}: duplicate vertex id {vid!r}")
            index[vid] = len(vertices)
            vertices.append((vid, genus))
        elif head == "edge":
            if len(args) != 2:
                raise CurveSyntaxError("expected 'edge <id_u> <id_v>'", lineno)
            for vid in args:
                if vid not in index:
                    raise CurveSyntaxError(f"unknown vertex id {vid!r}", lineno)
            edges.append((index[args[0]], index[args[1]]))
        elif head == "twister":
            body = "".join(args)
            try:
                gen = tuple(int(x) for x in body.split(","))
            except ValueError:
                raise CurveSyntaxError(f"bad twister generator {body!r}", lineno) from None
            twisters.append((gen, lineno))
        else:
            raise CurveSyntaxError(f"unknown directive {head!r}", lineno)
    if not vertices:
        raise CurveSyntaxError("no vertex lines")
    for gen, lineno in twisters:
        if len(gen) != len(vertices):
            raise CurveSyntaxError(
                f"twister has {len(gen)} entries but the curve has {len(vertices)} components", lineno
            )
    curve = build_curve(vertices, edges)
    return CurveFile(curve, tuple(g for g, _ in twisters) or None, path)


def read_curve(path) -> CurveFile:
    path = Path(path)
    return parse_curve(path.read_text(encoding="utf-8"), str(path))


def serialize_curve(curve: DualGraph | CurveFile) -> str:
    twisters = None
    if isinstance(curve, CurveFile):
        curve, twisters = curve.curve, curve.twisters
    lines = [f"vertex {vid} {g}" for vid, g in zip(curve.ids, curve.genera)]
    lines += [f"edge {curve.ids[u]} {curve.ids[v]}" for u, v in curve.edges]
    for gen in twisters or ():
        lines.append("twister " + ",".join(map(str, gen)))
    return "\n".join(lines) + "\n"
