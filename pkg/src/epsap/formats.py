"""Bit-exact text formats for sets, colorings, hypergraphs, and JSON witnesses.

SET        optional '#' comment lines, then one point per line as m
           whitespace-separated base-10 integers, sorted lexicographically,
           newline-terminated.
COLORING   header '# N=<N> r=<r> eps=<p>/<q> k=<k>', then N lines, line i
           holding the color of integer i.
HYPERGRAPH header '# N=<N> k=<k> eps=<p>/<q>', then one edge per line as k
           sorted integers.
"""

from __future__ import annotations

from fractions import Fraction

from .geometry import Witness1D, WitnessMD
from .rational import to_fraction

__all__ = [
    "write_set",
    "read_set",
    "write_coloring",
    "read_coloring",
    "write_hypergraph",
    "read_hypergraph",
    "fraction_json",
    "witness1d_json",
    "witness_md_json",
    "eps_header",
]


def eps_header(eps) -> str:
    e = to_fraction(eps)
    return f"{e.numerator}/{e.denominator}"


def write_set(points, comment: str = "") -> str:
    rows = sorted(tuple(p) for p in points)
    lines = []
    if comment:
        for part in comment.splitlines():
            lines.append(f"# {part}")
    for row in rows:
        lines.append(" ".join(str(c) for c in row))
    return "\n".join(lines) + "\n"


def read_set(text: str, m: int = None) -> tuple:
    rows = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            row = tuple(int(tok) for tok in line.split())
        except ValueError as exc:
            raise ValueError(f"set file line {ln}: {raw!r} is not integers") from exc
        rows.append(row)
    if m is None:
        if not rows:
            raise ValueError("empty set file needs an explicit dimension")
        m = len(rows[0])
    for row in rows:
        if len(row) != m:
            raise ValueError(f"set file row {row} is not {m}-dimensional")
    return tuple(sorted(set(rows)))


def write_coloring(coloring, eps, k: int) -> str:
    head = f"# N={coloring.N} r={coloring.r} eps={eps_header(eps)} k={k}"
    body = "\n".join(str(coloring.color(x)) for x in range(1, coloring.N + 1))
    return head + ("\n" + body if coloring.N else "") + "\n"


def read_coloring(text: str):
    """Returns (Coloring, eps, k)."""
    from .colorings import Coloring

    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError("coloring file must start with its '# N=.. r=..' header")
    fields = {}
    for tok in lines[0].lstrip("#").split():
        key, _, val = tok.partition("=")
        fields[key] = val
    try:
        n = int(fields["N"])
        r = int(fields["r"])
        eps = Fraction(fields["eps"])
        k = int(fields["k"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"malformed coloring header: {lines[0]!r}") from exc
    colors = [int(tok) for tok in lines[1:] if tok.strip()]
    if len(colors) != n:
        raise ValueError(f"coloring header says N={n} but file has {len(colors)} colors")
    return Coloring(N=n, r=r, colors=colors), eps, k


def write_hypergraph(h) -> str:
    head = f"# N={h.N} k={h.k} eps={eps_header(h.eps)}"
    body = "\n".join(" ".join(str(x) for x in edge) for edge in h.edges)
    return head + ("\n" + body if h.edges else "") + "\n"


def read_hypergraph(text: str):
    from .search import EpsApHypergraph

    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError("hypergraph file must start with its '# N=.. k=..' header")
    fields = {}
    for tok in lines[0].lstrip("#").split():
        key, _, val = tok.partition("=")
        fields[key] = val
    try:
        n = int(fields["N"])
        k = int(fields["k"])
        eps = Fraction(fields["eps"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"malformed hypergraph header: {lines[0]!r}") from exc
    edges = []
    for raw in lines[1:]:
        line = raw.strip()
        if not line:
            continue
        edge = tuple(int(tok) for tok in line.split())
        if len(edge) != k or any(a >= b for a, b in zip(edge, edge[1:])):
            raise ValueError(f"bad edge line {raw!r}: need {k} sorted integers")
        edges.append(edge)
    return EpsApHypergraph(N=n, k=k, eps=eps, edges=tuple(edges))


def fraction_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def witness1d_json(w: Witness1D) -> dict:
    return {
        "a": fraction_json(w.a),
        "d": fraction_json(w.d),
        "margin": fraction_json(w.margin),
    }


def witness_md_json(w: WitnessMD, tol: float) -> dict:
    return {
        "a": [repr(c) for c in w.a],
        "d": repr(w.d),
        "residual": repr(w.residual),
        "tol": repr(tol),
    }
