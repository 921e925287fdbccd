"""``tanghom`` command line.

Exit codes: 0 success, 1 bad input or a failing check, 2 crossing guard hit.
"""
from __future__ import annotations

import json
import logging
import os
import sys
from dataclasses import dataclass

import click

from . import catalog
from .errors import TangleError, TooManyCrossings
from .tangle_dsl import (SourceSpan, TangleSyntaxError, ValidationError, emit_result, parse_movie,
                         parse_spanned)

log = logging.getLogger("tanghom")

GUARD = {"Z": 10, "Q": 10, "Z2": 14}
RINGS = ("Z", "Z2", "Q")


@dataclass
class RunConfig:
    command: str
    source: str               # path, catalog name or inline text
    text: str
    label: str
    ring: str = "Z"
    output: str | None = None
    verbosity: int = 0
    max_crossings: int | None = None

    @property
    def guard(self) -> int:
        return self.max_crossings if self.max_crossings is not None else GUARD[self.ring]


def _resolve(arg: str) -> tuple[str, str]:
    """``(text, label)`` for a file path, a catalog name or inline text."""
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read(), arg
    if arg in catalog.WORDS:
        return catalog.WORDS[arg], f"<{arg}>"
    return arg, "<input>"


def _diagnostic(label: str, text: str, span: SourceSpan, message: str) -> str:
    line, col = span.line_col(text)
    src = text.splitlines()[line - 1] if text.splitlines() else ""
    width = max(1, min(span.end, span.start + len(src) - col + 1) - span.start)
    return f"{label}:{line}:{col}: error: {message}\n  {src}\n  {' ' * (col - 1)}{'^' * width}"


def _fail(label, text, exc) -> None:
    if isinstance(exc, TangleSyntaxError):
        msg = _diagnostic(label, text, exc.span, exc.message)
    elif isinstance(exc, ValidationError):
        msg = _diagnostic(label, text, exc.span, str(exc.cause))
    else:
        msg = f"{label}: error: {exc}"
    click.echo(msg, err=True)
    sys.exit(1)


def _emit(payload: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    else:
        click.echo(payload)


def _looks_like_pd(text: str, label: str) -> bool:
    return label.endswith(".pd") or text.lstrip().startswith("X[")


def _setup_logging(verbose: int) -> None:
    level = logging.WARNING - 10 * min(verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(message)s", stream=sys.stderr)


@click.group()
@click.version_option(package_name="tanghom")
def main():
    """Khovanov homology of even tangles via arc algebras."""


@main.command()
@click.argument("source")
@click.option("--ring", type=click.Choice(RINGS), default="Z", show_default=True)
@click.option("--convention", type=click.Choice(["paper", "standard"]), default="paper", show_default=True,
              help="standard negates the quantum grading")
@click.option("--pd", "force_pd", is_flag=True, help="read SOURCE as PD text and use the cube of resolutions")
@click.option("--max-crossings", type=int, default=None, help="override the crossing guard")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.option("-v", "--verbose", count=True)
def homology(source, ring, convention, force_pd, max_crossings, output, verbose):
    """Homology of a word, a .tng file, a catalog name or a PD file, as JSON."""
    _setup_logging(verbose)
    text, label = _resolve(source)
    cfg = RunConfig("homology", source, text, label, ring, output, verbose, max_crossings)
    try:
        if force_pd or _looks_like_pd(text, label):
            from .oracle import cube_homology, parse_pd
            d = parse_pd(text)
            if len(d.crossings) > cfg.guard:
                raise TooManyCrossings(len(d.crossings), cfg.guard)
            log.info("PD diagram with %d crossings", len(d.crossings))
            r = cube_homology(d, ring, limit=None)
        else:
            from .khov import word_homology
            w = parse_spanned(text).word
            n = sum(g.is_crossing for g in w.gens)
            if n > cfg.guard:
                raise TooManyCrossings(n, cfg.guard)
            log.info("word with %d generators, %d crossings", len(w.gens), n)
            r = word_homology(w, ring)
    except TooManyCrossings as exc:
        click.echo(f"{label}: error: {exc} (use --max-crossings to raise it)", err=True)
        sys.exit(2)
    except TangleError as exc:
        _fail(label, text, exc)
    if convention == "standard":
        from .zlinalg import HomologyReport
        r = HomologyReport({(j, -k): g for (j, k), g in r.groups.items()}, r.ring, dict(r.meta))
    r.meta["convention"] = convention
    _emit(emit_result(r), output)


@main.command()
@click.argument("suite")
@click.option("--word", "word_arg", default=None, help="word file, catalog name or inline word (triangle)")
@click.option("--site", default="all", show_default=True,
              help="1-based crossing number along the word, or 'all' (triangle)")
@click.option("--mode", type=click.Choice(["paper", "derived", "both"]), default="both", show_default=True,
              help="triangle shifts to test")
@click.option("--ring", type=click.Choice(["Z2", "Z"]), default="Z2", show_default=True, help="triangle ring")
@click.option("--seed", type=int, default=0, show_default=True, help="seed for random suites")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def verify(suite, word_arg, site, mode, ring, seed, output):
    """Run a property suite and print a JSON summary; exit 1 on any failure."""
    from .verify import SUITES, run_suite
    if suite not in SUITES:
        raise click.BadParameter(f"choose from {', '.join(SUITES)}", param_hint="SUITE")
    kwargs = {}
    if suite in ("tensor", "cobordism"):
        kwargs["seed"] = seed
    if suite == "triangle":
        kwargs["modes"] = ("paper", "derived") if mode == "both" else (mode,)
        kwargs["ring"] = ring
        if word_arg is not None:
            text, label = _resolve(word_arg)
            try:
                w = parse_spanned(text).word
            except TangleError as exc:
                _fail(label, text, exc)
            kwargs["word"] = w
            crossings = [k for k, g in enumerate(w.gens) if g.is_crossing]
            if site != "all":
                try:
                    n = int(site)
                    kwargs["sites"] = [crossings[n - 1]]
                    if n < 1:
                        raise IndexError
                except (ValueError, IndexError):
                    raise click.BadParameter(f"expected 1..{len(crossings)} or 'all'", param_hint="--site")
    elif word_arg is not None:
        raise click.BadParameter("only the triangle suite takes --word", param_hint="--word")
    rep = run_suite(suite, **kwargs)
    _emit(json.dumps(rep.to_dict(), indent=2, sort_keys=True), output)
    sys.exit(0 if rep.ok else 1)


def _blocks(f):
    """Split a flat cobordism matrix into blocks by source quantum degree."""
    from .khov import layout
    sv, tv = f.source.vertices[0], f.target.vertices[0]
    ds = [d + sv.q for d in layout(sv.tangle).degrees]
    dt = [d + tv.q for d in layout(tv.tangle).degrees]
    dense = f.matrix.to_dense()
    out = []
    for q in sorted(set(ds)):
        cols = [c for c, d in enumerate(ds) if d == q]
        rows = [r for r, d in enumerate(dt) if d == q + f.declared_degree]
        if not rows:
            continue
        out.append({"source_q": q, "target_q": q + f.declared_degree,
                    "matrix": [[dense[r][c] for c in cols] for r in rows]})
    return out


@main.command()
@click.argument("movie", type=click.Path(exists=True, dir_okay=False))
@click.option("--m", "m", type=int, default=None, help="bottom has 2m points (default from the first generator)")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def cobordism(movie, m, output):
    """Compose the elementary maps of a .mov file and report them as JSON."""
    from .khov import compose_movie, run_movie
    from .tangle_dsl import pretty
    from .planar import TangleWord
    with open(movie, encoding="utf-8") as fh:
        text = fh.read()
    try:
        mv = parse_movie(text)
        maps = run_movie(mv.word.gens, [(s.kind, s.site) for s in mv.steps], m)
        for f in maps:
            f.check()
    except TangleError as exc:
        move = getattr(exc, "move_index", None)
        if move is not None and 1 <= move <= len(mv.steps):
            _fail(movie, text, ValidationError(mv.steps[move - 1].span, exc, text))
        _fail(movie, text, exc)
    if not maps:
        click.echo(f"{movie}: error: the movie has no moves", err=True)
        sys.exit(1)
    total = compose_movie(maps)
    report = {
        "source": pretty(TangleWord(tuple(mv.word.gens))) if mv.word.gens else "",
        "target": pretty(TangleWord(tuple(total.target_word))) if total.target_word else "",
        "moves": [{"kind": f.kind, "degree": f.degree, "blocks": _blocks(f)} for f in maps],
        "total_degree": total.declared_degree,
        "composite": _blocks(total),
    }
    _emit(json.dumps(report, indent=2, sort_keys=True), output)


if __name__ == "__main__":
    main()
