"""Text formats: tangle words, movies of elementary surfaces, and results.

Word grammar (whitespace-insensitive, ``#`` starts a comment)::

    word := item (sep item)* [sep]       sep := ';' | newline
    item := 'id' INT
          | ('cup' | 'cap') INT '@' INT
          | ('s+' | 's-') INT '@' INT
          | 'orient' SIGNS

``cup i @ m`` is the cup with index ``i`` whose bottom has ``2m`` points
(likewise for the other generators); items are read bottom to top.
``orient`` fixes the directions (``u``/``d``) of the row of points below the
next generator, so a leading ``orient`` sets the bottom boundary.

Movie grammar: lines starting with ``move`` are steps, everything else is the
starting word::

    move birth P I | move death P | move saddle P [I]
    move minimal P | move iso RULE P

Results are JSON with ``"format": 1``; see :func:`emit_result`.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .errors import TangleError
from .planar import (CAP, CUP, ID, SMINUS, SPLUS, ElementaryGenerator, TangleWord,
                     validate_word)
from .zlinalg import HomologyReport

FORMAT = 1


@dataclass(frozen=True)
class SourceSpan:
    """Offsets ``[start, end)`` into the input text."""

    start: int
    end: int

    def __post_init__(self):
        if not 0 <= self.start <= self.end:
            raise ValueError(f"bad span {self.start}..{self.end}")

    def line_col(self, text: str) -> tuple[int, int]:
        line = text.count("\n", 0, self.start) + 1
        col = self.start - (text.rfind("\n", 0, self.start) + 1) + 1
        return line, col

    def excerpt(self, text: str) -> str:
        return text[self.start:self.end]


class TangleSyntaxError(TangleError, SyntaxError):
    """Malformed input; ``span`` locates the offending text."""

    def __init__(self, span: SourceSpan, message: str, text: str | None = None):
        self.span = span
        self.message = message
        where = f"offset {span.start}"
        if text is not None:
            line, col = span.line_col(text)
            where = f"line {line}, column {col}"
        super().__init__(f"{where}: {message}")

    def __str__(self):
        return self.args[0] if self.args else self.message


class ValidationError(TangleError):
    """A well-formed word that is not a valid tangle; wraps the planar error."""

    def __init__(self, span: SourceSpan, cause: TangleError, text: str | None = None):
        self.span = span
        self.cause = cause
        where = f"offset {span.start}"
        if text is not None:
            line, col = span.line_col(text)
            where = f"line {line}, column {col}"
        super().__init__(f"{where}: {cause}")


# --------------------------------------------------------------------------
# lexer
# --------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+) | (?P<comment>\#[^\n]*) | (?P<semi>;) | (?P<at>@)
  | (?P<int>\d+) | (?P<name>[A-Za-z_]+[+-]?)
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    span: SourceSpan


def tokenize(text: str) -> list[Token]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise TangleSyntaxError(SourceSpan(pos, pos + 1), f"unexpected character {text[pos]!r}", text)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), SourceSpan(m.start(), m.end())))
        pos = m.end()
    out.append(Token("eof", "", SourceSpan(len(text), len(text))))
    return out


# --------------------------------------------------------------------------
# words
# --------------------------------------------------------------------------

_KEYWORDS = ("id", "cup", "cap", "s+", "s-", "orient")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.k = 0

    def peek(self) -> Token:
        return self.toks[self.k]

    def take(self, kind: str, what: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            found = "end of input" if t.kind == "eof" else repr(t.value)
            raise TangleSyntaxError(t.span, f"expected {what}, found {found}", self.text)
        self.k += 1
        return t

    def integer(self, what: str) -> int:
        return int(self.take("int", what).value)

    def item(self, gens, spans, orient):
        t = self.peek()
        if t.kind != "name" or t.value not in _KEYWORDS:
            found = "end of input" if t.kind == "eof" else repr(t.value)
            raise TangleSyntaxError(
                t.span, "expected one of 'id', 'cup', 'cap', 's+', 's-', 'orient', found " + found, self.text)
        self.k += 1
        if t.value == "orient":
            s = self.take("name", "a direction string over u/d")
            if set(s.value) - {"u", "d"}:
                raise TangleSyntaxError(s.span, f"expected a direction string over u/d, found {s.value!r}",
                                        self.text)
            orient.append((len(gens), s.value, SourceSpan(t.span.start, s.span.end)))
            return
        if t.value == "id":
            m = self.integer("a strand count after 'id'")
            g = ElementaryGenerator(ID, 0, m)
        else:
            i = self.integer(f"an index after {t.value!r}")
            self.take("at", "'@'")
            m = self.integer("a strand count after '@'")
            g = ElementaryGenerator({"cup": CUP, "cap": CAP, "s+": SPLUS, "s-": SMINUS}[t.value], i, m)
        gens.append(g)
        spans.append(SourceSpan(t.span.start, self.toks[self.k - 1].span.end))

    def _newline_before(self) -> bool:
        prev, nxt = self.toks[self.k - 1].span.end, self.peek().span.start
        return "\n" in self.text[prev:nxt]

    def word(self):
        gens, spans, orient = [], [], []
        self.item(gens, spans, orient)
        while True:
            if self.peek().kind == "semi":
                self.k += 1
            elif not (self.peek().kind != "eof" and self._newline_before()):
                break
            if self.peek().kind == "eof":
                break
            self.item(gens, spans, orient)
        t = self.peek()
        if t.kind != "eof":
            raise TangleSyntaxError(t.span, f"expected ';', a new line or end of input, found {t.value!r}", self.text)
        return gens, spans, orient


@dataclass(frozen=True)
class ParsedWord:
    word: TangleWord
    spans: tuple[SourceSpan, ...]          # one per generator
    orient_spans: tuple[SourceSpan, ...]   # one per directive


def parse_spanned(text: str, validate: bool = True) -> ParsedWord:
    gens, spans, orient = _Parser(text).word()
    if not gens:
        raise TangleSyntaxError(SourceSpan(len(text), len(text)), "a word needs at least one generator", text)
    w = TangleWord(tuple(gens), tuple((lv, f) for lv, f, _ in orient))
    pw = ParsedWord(w, tuple(spans), tuple(sp for _, _, sp in orient))
    if validate:
        try:
            validate_word(w)
        except TangleError as exc:
            pos = getattr(exc, "position", None)
            if isinstance(pos, int) and 0 <= pos < len(spans):
                span = spans[pos]
            else:
                span = SourceSpan(0, len(text))
            raise ValidationError(span, exc, text) from exc
    return pw


def parse(text: str) -> TangleWord:
    """Parse and validate a word."""
    return parse_spanned(text).word


def format_generator(g: ElementaryGenerator) -> str:
    if g.kind == ID:
        return f"id {g.m}"
    return f"{g.kind} {g.i} @ {g.m}"


def pretty(w: TangleWord) -> str:
    """Canonical text of ``w``; ``parse(pretty(w)) == w``."""
    items = []
    directives = dict(w.orient)
    for k, g in enumerate(w.gens):
        if k in directives:
            items.append(f"orient {directives[k]}")
        items.append(format_generator(g))
    if len(w.gens) in directives:
        items.append(f"orient {directives[len(w.gens)]}")
    return " ; ".join(items)


# --------------------------------------------------------------------------
# movies
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MovieStep:
    kind: str
    site: object
    span: SourceSpan


@dataclass(frozen=True)
class Movie:
    word: TangleWord
    steps: tuple[MovieStep, ...]


_MOVE_ARITY = {"birth": (2,), "death": (1,), "saddle": (1, 2), "minimal": (1,), "iso": (2,)}


def parse_movie(text: str) -> Movie:
    """Parse a movie; the word may span several lines."""
    blank = list(text)
    steps = []
    pos = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        stripped = body.strip()
        if stripped.startswith("move") and (len(stripped) == 4 or stripped[4].isspace()):
            start = pos + body.index("move")
            span = SourceSpan(start, pos + len(body.rstrip()))
            steps.append(_parse_step(stripped.split()[1:], span, text))
            for c in range(pos, pos + len(line)):
                if text[c] != "\n":
                    blank[c] = " "
        pos += len(line)
    word = parse_spanned("".join(blank), validate=False).word
    return Movie(word, tuple(steps))


def _parse_step(args, span, text) -> MovieStep:
    if not args or args[0] not in _MOVE_ARITY:
        raise TangleSyntaxError(span, "expected one of 'birth', 'death', 'saddle', 'minimal', 'iso' after 'move'",
                                text)
    kind, rest = args[0], args[1:]
    if kind == "iso":
        if len(rest) != 2 or not rest[1].isdigit():
            raise TangleSyntaxError(span, "expected 'move iso RULE P'", text)
        return MovieStep(kind, (rest[0], int(rest[1])), span)
    if len(rest) not in _MOVE_ARITY[kind] or not all(a.isdigit() for a in rest):
        want = " or ".join(str(n) for n in _MOVE_ARITY[kind])
        raise TangleSyntaxError(span, f"'move {kind}' takes {want} integer argument(s)", text)
    vals = tuple(int(a) for a in rest)
    return MovieStep(kind, vals if len(vals) > 1 else vals[0], span)


# --------------------------------------------------------------------------
# results
# --------------------------------------------------------------------------

def _collapsed(r: HomologyReport):
    from .khov import collapse
    return collapse(r)


def result_dict(r: HomologyReport) -> dict:
    meta = r.meta or {}
    return {
        "format": FORMAT,
        "ring": r.ring,
        "convention": meta.get("convention", "paper"),
        "groups": [{"j": j, "k": k, "rank": rank, "torsion": list(tors)}
                   for (j, k), (rank, tors) in sorted(r.groups.items())],
        "collapsed": [{"i": i, "rank": rank, "torsion": list(tors)}
                      for i, (rank, tors) in _collapsed(r).items()],
        "writhe": meta.get("writhe"),
        "cups": meta.get("cups"),
        "poincare": r.poincare_string(),
    }


def emit_result(r: HomologyReport) -> str:
    """Canonical JSON of a homology report (sorted keys, two-space indent).

    ``groups`` lists ``{j, k, rank, torsion}`` per bidegree; ``collapsed`` lists
    ``{i, rank, torsion}`` for ``i = j + k``; ``poincare`` is the free part as a
    polynomial in ``t`` (homological) and ``q`` (quantum).
    """
    return json.dumps(result_dict(r), indent=2, sort_keys=True)


def parse_result(text: str) -> HomologyReport:
    data = json.loads(text)
    if data.get("format") != FORMAT:
        raise ValueError(f"unsupported result format {data.get('format')!r}")
    groups = {(g["j"], g["k"]): (g["rank"], tuple(g["torsion"])) for g in data["groups"]}
    meta = {key: data[key] for key in ("writhe", "cups", "convention") if data.get(key) is not None}
    return HomologyReport(groups, data["ring"], meta)
