"""
Stabilization sequence calculus.

A sequence of single stabilizations (+1) and destabilizations (-1) from a
splitting of genus q can be shortened by deleting every destabilization
immediately followed by a stabilization. What remains climbs to a peak and
then descends, and its peak is a common stabilization of both ends.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from models.errors import GapViolation, InvalidSequence, ParityViolation

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class MoveSequence:
    base_genus: int
    moves: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.base_genus < 0:
            raise InvalidSequence(f"Base genus {self.base_genus} is negative")
        genus = self.base_genus
        for i, move in enumerate(self.moves):
            if move not in (1, -1):
                raise InvalidSequence(f"Move {i} is {move}, expected +1 or -1")
            genus += move
            if genus < 0:
                raise InvalidSequence(f"Move {i} destabilizes a genus 0 splitting")

    @classmethod
    def of(cls, base_genus: int, moves: Sequence[int]) -> "MoveSequence":
        return cls(int(base_genus), tuple(int(m) for m in moves))

    @property
    def genera(self) -> List[int]:
        values = [self.base_genus]
        for move in self.moves:
            values.append(values[-1] + move)
        return values

    @property
    def end_genus(self) -> int:
        return self.base_genus + sum(self.moves)


@dataclass(frozen=True)
class ReducedSequence:
    base_genus: int
    moves: Tuple[int, ...]
    peak: int

    @property
    def end_genus(self) -> int:
        return self.base_genus + sum(self.moves)

    @property
    def is_monotone(self) -> bool:
        return all(not (a == -1 and b == 1) for a, b in zip(self.moves[:-1], self.moves[1:]))


def reduce(sequence: MoveSequence) -> ReducedSequence:
    """Delete adjacent (-1, +1) pairs, scanning left to right until none remain."""
    moves = list(sequence.moves)
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(moves) - 1:
            if moves[i] == -1 and moves[i + 1] == 1:
                del moves[i:i + 2]
                changed = True
            else:
                i += 1
    peak = sequence.base_genus + moves.count(1)
    return ReducedSequence(sequence.base_genus, tuple(moves), peak)


def common_stab_genus(p: int, q: int, c: int) -> int:
    """Genus (p + q + c) / 2 of the common stabilization reached through c moves."""
    if p < 0 or q < 0 or c < 0:
        raise ValueError(f"Genera and move count must be nonnegative, got p={p}, q={q}, c={c}")
    if (p + q + c) % 2:
        raise ParityViolation(f"c={c} and p + q = {p + q} have different parity")
    if c < abs(p - q):
        raise GapViolation(f"c={c} is smaller than |p - q| = {abs(p - q)}")
    return (p + q + c) // 2


def from_trajectory(trajectory) -> MoveSequence:
    """Base genus q and the genus steps of a sweep trajectory as unit moves, in angle order."""
    moves: List[int] = []
    for step in trajectory.steps:
        moves.extend([1 if step > 0 else -1] * abs(step))
    return MoveSequence.of(trajectory.q, moves)


@dataclass(frozen=True)
class StableGenusReport:
    p: int
    q: int
    c: int
    bound: Fraction
    moves: Tuple[int, ...]
    reduced: ReducedSequence
    trajectory_peak: int

    def to_dict(self) -> Dict:
        return {
            "p": self.p,
            "q": self.q,
            "c": self.c,
            "bound": str(self.bound),
            "moves": list(self.moves),
            "reduced_moves": list(self.reduced.moves),
            "reduced_peak": self.reduced.peak,
            "trajectory_peak": self.trajectory_peak,
        }


def stable_genus_report(trajectory, c: int) -> StableGenusReport:
    sequence = from_trajectory(trajectory)
    reduced = reduce(sequence)
    bound = Fraction(common_stab_genus(trajectory.p, trajectory.q, c))
    LOGGER.info("Reduced %d move(s) to %d, peak %d, bound %s",
                len(sequence.moves), len(reduced.moves), reduced.peak, bound)
    return StableGenusReport(
        p=trajectory.p,
        q=trajectory.q,
        c=c,
        bound=bound,
        moves=sequence.moves,
        reduced=reduced,
        trajectory_peak=max(trajectory.genera),
    )
