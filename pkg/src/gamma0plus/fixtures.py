"""Access to the vendored ground-truth fixture files.

Layout (override the root with the SI_FIXTURES_DIR environment variable):

    fixtures/appendixA/m{m}_N{N}.txt   lines "P c0 c1 ..." and "Q c0 c1 ..."
    fixtures/appendixB/m{m}_N{N}.txt   line  "R c0 c1 ..."
    fixtures/appendixC/m{m}_N{N}.txt   lines "x <decimal>" and "y <decimal>"
    fixtures/appendixD/N{N}_dk{d}.txt  line  "M c0 c1 ..."

Polynomial coefficients are exact decimal integers, ascending degree.
"""

from __future__ import annotations

import os
import re
from pathlib import Path

from .exactalg import IntPoly

_PACKAGED = Path(__file__).parent / "data" / "fixtures"


def fixtures_dir():
    env = os.environ.get("SI_FIXTURES_DIR")
    if env:
        return Path(env)
    return _PACKAGED


def _read_keyed(path):
    out = {}
    for line in path.read_text().splitlines():
        parts = line.split()
        if parts:
            out[parts[0]] = parts[1:]
    return out


def appendix_pq(m, N):
    """The vendored (P, Q) pair for (m, N)."""
    d = _read_keyed(fixtures_dir() / "appendixA" / f"m{m}_N{N}.txt")
    return IntPoly(int(c) for c in d["P"]), IntPoly(int(c) for c in d["Q"])


def appendix_genpoly(m, N):
    """The vendored generating polynomial for (m, N)."""
    d = _read_keyed(fixtures_dir() / "appendixB" / f"m{m}_N{N}.txt")
    return IntPoly(int(c) for c in d["R"])


def appendix_value(m, N):
    """The vendored decimal strings (x, y) at the CM point i*sqrt(m/N)."""
    d = _read_keyed(fixtures_dir() / "appendixC" / f"m{m}_N{N}.txt")
    return d["x"][0], d["y"][0]


def appendix_minpoly(N, d_K):
    """The vendored class-field minimal polynomial for (N, d_K)."""
    d = _read_keyed(fixtures_dir() / "appendixD" / f"N{N}_dk{d_K}.txt")
    return IntPoly(int(c) for c in d["M"])


def appendix_pairs(letter):
    """Sorted (m, N) pairs present in appendix A/B/C, or (N, d_K) for D."""
    root = fixtures_dir() / f"appendix{letter}"
    out = []
    for p in root.iterdir():
        m = re.fullmatch(r"m(\d+)_N(\d+)\.txt", p.name)
        if m:
            out.append((int(m.group(1)), int(m.group(2))))
            continue
        m = re.fullmatch(r"N(\d+)_dk(-\d+)\.txt", p.name)
        if m:
            out.append((int(m.group(1)), int(m.group(2))))
    return sorted(out)


def pairs_for_level(N):
    """All m with a vendored (P, Q) and generating polynomial for level N."""
    return sorted(m for m, n in appendix_pairs("A") if n == N)
