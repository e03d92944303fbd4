"""Gap sequences: validation, decomposition and spectral bookkeeping.

A gap sequence lists the oscillator levels removed by the transformation
chain.  Structural validity is a cheap necessary test; the authoritative
admissibility check is the exact regularity certificate in
:mod:`resho.spectralmodel`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence


class SequenceError(ValueError):
    """Raised for structurally invalid gap sequences."""


@dataclass(frozen=True)
class GapSequence:
    """Validated gap sequence with its three-part decomposition.

    ``sigma_sing`` is the run of consecutive odd levels starting at 1,
    ``sigma_sing_adler`` collects pairs of odd levels two apart, and
    ``sigma_adler`` collects pairs of adjacent integers containing the even
    levels.  ``structural`` is False for sequences built leniently (shape is
    fine but no decomposition exists); those can still be fed to the
    regularity certificate.
    """

    elements: tuple[int, ...]
    sigma_sing: tuple[int, ...]
    sigma_sing_adler: tuple[int, ...]
    sigma_adler: tuple[int, ...]
    structural: bool
    structure_reason: Optional[str] = None

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def last(self) -> int:
        return self.elements[-1]

    @property
    def l_n(self) -> int:
        odd = sum(1 for n in self.elements if n % 2 == 1)
        return odd - (len(self.elements) - odd)

    def __str__(self) -> str:
        return "{" + ",".join(str(n) for n in self.elements) + "}"


def _check_shape(raw: Sequence[int]) -> tuple[int, ...]:
    elems = tuple(int(n) for n in raw)
    if not elems:
        raise SequenceError("gap sequence must be nonempty")
    if any(n < 1 for n in elems):
        if 0 in elems:
            raise SequenceError(
                "level 0 not allowed: a sequence starting {0,..,k,...} defines the "
                "same potential as the shifted sequence without the leading run; "
                "re-enter the shifted form")
        raise SequenceError("levels must be naturals >= 1")
    if any(a >= b for a, b in zip(elems, elems[1:])):
        raise SequenceError("levels must be strictly increasing")
    return elems


def _pair_leftover_odds(odds: list[int]) -> Optional[tuple[int, ...]]:
    """Partition sorted odds into disjoint pairs {o, o+2}; the smallest element
    can only pair with the next one, so sequential pairing is complete."""
    out: list[int] = []
    while odds:
        if len(odds) >= 2 and odds[1] == odds[0] + 2:
            out.extend(odds[:2])
            odds = odds[2:]
        else:
            return None
    return tuple(out)


def _pair_evens(rest: tuple[int, ...], evens: list[int], idx: int, used: frozenset[int]):
    if idx == len(evens):
        left = [n for n in rest if n % 2 == 1 and n not in used]
        sing_adler = _pair_leftover_odds(left)
        if sing_adler is None:
            return None
        return sing_adler, tuple(sorted(used))
    e = evens[idx]
    for partner in (e - 1, e + 1):  # smaller adjacent odd preferred
        if partner in rest and partner not in used and partner % 2 == 1:
            res = _pair_evens(rest, evens, idx + 1, used | {e, partner})
            if res is not None:
                return res
    return None


def _decompose(elems: tuple[int, ...]):
    """Maximize sigma_sing, then pair evens with an adjacent odd (smaller one
    preferred) and leftover odds two apart.  Deterministic first-success
    backtracking over the pairing orientations."""
    max_run = 0
    while 2 * max_run + 1 in elems:
        max_run += 1
    for s in range(max_run, -1, -1):
        sing = tuple(range(1, 2 * s + 1, 2))
        rest = tuple(n for n in elems if n not in sing)
        evens = [n for n in rest if n % 2 == 0]
        res = _pair_evens(rest, evens, 0, frozenset())
        if res is not None:
            sing_adler, adler = res
            return sing, sing_adler, adler
    return None


def validate(raw: Sequence[int]) -> GapSequence:
    """Validate a gap sequence and compute its decomposition.

    Raises SequenceError for non-increasing input, levels < 1, an even level
    with no adjacent odd partner, unpairable leftover odds, or a negative
    level-count balance.
    """
    elems = _check_shape(raw)
    dec = _decompose(elems)
    if dec is None:
        evens = [n for n in elems if n % 2 == 0]
        raise SequenceError(
            f"sequence {list(elems)} has no admissible decomposition: every even "
            "level needs an adjacent odd partner and leftover odd levels must "
            f"pair two apart (evens present: {evens})")
    seq = GapSequence(elems, *dec, structural=True)
    if seq.l_n < 0:
        raise SequenceError(f"more even than odd levels in {list(elems)}")
    return seq


def lenient(raw: Sequence[int]) -> GapSequence:
    """Build a GapSequence from any strictly increasing naturals, marking it
    non-structural when no decomposition exists.  Lets the regularity
    certificate run on structurally invalid sequences."""
    elems = _check_shape(raw)
    dec = _decompose(elems)
    if dec is None:
        return GapSequence(elems, (), (), (), structural=False,
                           structure_reason="no pairing decomposition")
    return GapSequence(elems, *dec, structural=True)


def parse(text: str) -> GapSequence:
    """Parse a comma-separated sequence string such as '1,6,7'."""
    try:
        raw = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise SequenceError(f"cannot parse sequence {text!r}: {exc}") from None
    return validate(raw)


def l_number(seq: GapSequence) -> int:
    """Centrifugal strength: number of odd levels minus number of even levels."""
    return seq.l_n


@dataclass(frozen=True)
class SpectrumView:
    """Ascending bound-state energies n + 1/2 over odd n not in the sequence."""

    levels_n: tuple[int, ...]

    @property
    def energies(self) -> tuple[float, ...]:
        return tuple(n + 0.5 for n in self.levels_n)

    def gaps(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.levels_n, self.levels_n[1:]))


def spectrum(seq: GapSequence, count: int) -> SpectrumView:
    """First `count` spectrum levels of the transformed half-line problem."""
    if count < 1:
        raise ValueError("count must be positive")
    excluded = set(seq.elements)
    levels = []
    n = 1
    while len(levels) < count:
        if n not in excluded:
            levels.append(n)
        n += 2
    return SpectrumView(tuple(levels))


def spectrum_levels(seq: GapSequence, count: int) -> list[int]:
    return list(spectrum(seq, count).levels_n)


class WellPrediction(NamedTuple):
    count: int
    heuristic: bool


def predicted_wells(seq: GapSequence) -> WellPrediction:
    """Predicted number of potential wells on (0, inf).

    Exact for {1, 2m, 2m+1} (m-1 wells) and for pure consecutive-odd
    sequences (single well); otherwise the count of levels below the
    equidistant tail, flagged heuristic.
    """
    e = seq.elements
    if len(e) == 3 and e[0] == 1 and e[1] % 2 == 0 and e[2] == e[1] + 1 and e[1] >= 4:
        return WellPrediction(e[1] // 2 - 1, heuristic=False)
    if e == tuple(range(1, 2 * len(e), 2)):
        return WellPrediction(1, heuristic=False)
    below_tail = sum(1 for n in range(1, seq.last, 2) if n not in e)
    return WellPrediction(max(1, below_tail), heuristic=True)
