"""Named words used by the verification suites, the tests and the CLI."""
from __future__ import annotations

from .planar import TangleWord

WORDS: dict[str, str] = {
    "unknot": "cup 1 @ 1 ; cap 1 @ 1",
    "unlink2": "cup 1 @ 1 ; cup 3 @ 2 ; cap 3 @ 2 ; cap 1 @ 1",
    "unlink3": "cup 1 @ 1 ; cup 3 @ 2 ; cup 5 @ 3 ; cap 5 @ 3 ; cap 3 @ 2 ; cap 1 @ 1",
    # plat closures of two-strand braids; the default orientation runs the
    # two middle strands against each other
    "hopf": "cup 1 @ 1 ; cup 3 @ 2 ; s+ 2 @ 2 ; s+ 2 @ 2 ; cap 3 @ 2 ; cap 1 @ 1",
    "hopf_parallel": "cup 1 @ 1 ; cup 3 @ 2 ; orient uddu ; s+ 2 @ 2 ; s+ 2 @ 2 ; cap 3 @ 2 ; cap 1 @ 1",
    "trefoil": "cup 1 @ 1 ; cup 3 @ 2 ; s+ 2 @ 2 ; s+ 2 @ 2 ; s+ 2 @ 2 ; cap 3 @ 2 ; cap 1 @ 1",
    "trefoil_mirror": "cup 1 @ 1 ; cup 3 @ 2 ; s- 2 @ 2 ; s- 2 @ 2 ; s- 2 @ 2 ; cap 3 @ 2 ; cap 1 @ 1",
    "figure_eight": "cup 1 @ 1 ; cup 3 @ 2 ; s+ 2 @ 2 ; s- 1 @ 2 ; s+ 2 @ 2 ; s+ 2 @ 2 ; cap 3 @ 2 ; cap 1 @ 1",
    "knot_7_1": "cup 1 @ 1 ; cup 3 @ 2 ; " + " ; ".join(["s+ 2 @ 2"] * 7) + " ; cap 3 @ 2 ; cap 1 @ 1",
    # Reidemeister moves applied to the unknot
    "unknot_r1_plus": "cup 1 @ 1 ; s+ 1 @ 1 ; cap 1 @ 1",
    "unknot_r1_minus": "cup 1 @ 1 ; s- 1 @ 1 ; cap 1 @ 1",
    "unknot_r2": "cup 1 @ 1 ; s+ 1 @ 1 ; s- 1 @ 1 ; cap 1 @ 1",
    "unknot_r3_left": "cup 1 @ 1 ; cup 3 @ 2 ; cup 5 @ 3 ; s+ 1 @ 3 ; s+ 2 @ 3 ; s+ 1 @ 3 ; "
                      "cap 3 @ 3 ; cap 2 @ 2 ; cap 1 @ 1",
    "unknot_r3_right": "cup 1 @ 1 ; cup 3 @ 2 ; cup 5 @ 3 ; s+ 2 @ 3 ; s+ 1 @ 3 ; s+ 2 @ 3 ; "
                       "cap 3 @ 3 ; cap 2 @ 2 ; cap 1 @ 1",
}


def word(name: str) -> TangleWord:
    from .tangle_dsl import parse
    return parse(WORDS[name])
