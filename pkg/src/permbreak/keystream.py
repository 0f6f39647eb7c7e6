"""Logistic-map keystream and the rank-order permutation schedules built from it.

The cipher draws all of its secret material from one real-valued orbit of the
logistic map x -> mu*x*(1-x).  A contiguous segment of the orbit is turned
into a permutation by ranking: position of the largest sample first, then the
second largest, and so on.  One segment orders the image rows, and one
segment per row orders the bits inside that row.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Control parameters below this threshold leave the map's periodic window;
# the cipher's key space is the chaotic band up to (but excluding) 4.
MU_MIN = 3.569945672
MU_MAX = 4.0


class InvalidKeyDomain(ValueError):
    """A key component lies outside its admissible interval."""


class EmptySegment(ValueError):
    """Rank ordering requested for a zero-length segment."""


@dataclass(frozen=True)
class Key:
    """Five-component secret key of the permutation cipher.

    x0          initial condition of the logistic map, in the open (0, 1)
    mu          control parameter, in the open (MU_MIN, 4)
    row_offset  orbit samples skipped before the row-ranking segment
    col_offset  orbit samples skipped before the per-row bit segments
    rounds      number of times the whole permutation pass is repeated

    The on-disk key line ``x0 mu m n T`` maps onto the fields in this order
    (see :func:`parse_key`).
    """

    x0: float
    mu: float
    row_offset: int
    col_offset: int
    rounds: int

    def __post_init__(self):
        if not 0.0 < self.x0 < 1.0:
            raise InvalidKeyDomain(f"x0 must lie strictly inside (0, 1), got {self.x0}")
        if not MU_MIN < self.mu < MU_MAX:
            raise InvalidKeyDomain(
                f"mu must lie strictly inside ({MU_MIN}, {MU_MAX}), got {self.mu}"
            )
        for name in ("row_offset", "col_offset", "rounds"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise InvalidKeyDomain(f"{name} must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class ChaoticSequence:
    """The first ``len(values)`` iterates of the map, seed excluded."""

    values: np.ndarray
    origin_x0: float

    @property
    def final_state(self) -> float:
        """Last iterate; reseeds the map between cipher rounds."""
        return float(self.values[-1])


def _fold(x: float) -> float:
    # The map satisfies f(x) = f(1-x) exactly in real arithmetic.  Evaluating
    # every step at the upper representative of {x, 1-x} makes the identity
    # hold bit-exactly in floats too: 1-x is exact for x in [0.5, 1]
    # (Sterbenz), so both members of a mirrored pair fold to one double.
    y = 1.0 - x
    return y if x < y < 1.0 else x


def logistic_step(x: float, mu: float) -> float:
    """One iterate mu*x*(1-x) of the logistic map.

    Both arguments are validated against the key domain, since the cipher is
    only defined there.  For seeds in (0, 1) and mu < 4 the result stays
    strictly inside (0, 1), and mirrored seeds x and 1-x give bit-identical
    results.
    """
    if not 0.0 < x < 1.0:
        raise InvalidKeyDomain(f"x must lie strictly inside (0, 1), got {x}")
    if not MU_MIN < mu < MU_MAX:
        raise InvalidKeyDomain(f"mu must lie strictly inside ({MU_MIN}, {MU_MAX}), got {mu}")
    x = _fold(x)
    return mu * x * (1.0 - x)


def generate_sequence(key: Key, length: int) -> ChaoticSequence:
    """Iterate the map ``length`` times from ``key.x0``.

    values[0] is already one step past the seed, so seeds x0 and 1-x0 yield
    identical sequences (the map is symmetric about 1/2).  Equivalent to
    ``length`` chained calls of :func:`logistic_step`, folding included.
    """
    if length < 1:
        raise ValueError(f"sequence length must be >= 1, got {length}")
    mu = key.mu
    x = key.x0
    out = np.empty(length, dtype=np.float64)
    for k in range(length):
        y = 1.0 - x
        if x < y < 1.0:
            x = y
        x = mu * x * (1.0 - x)
        out[k] = x
    return ChaoticSequence(out, key.x0)


def rank_vector(segment) -> np.ndarray:
    """Indices of the segment's elements from largest to smallest.

    indices[i] is the position of the (i+1)-th largest sample; equal samples
    keep their original left-to-right order.
    """
    seg = np.asarray(segment, dtype=np.float64)
    if seg.ndim != 1:
        raise ValueError(f"segment must be one-dimensional, got shape {seg.shape}")
    if seg.size == 0:
        raise EmptySegment("cannot rank an empty segment")
    return np.argsort(-seg, kind="stable")


def build_schedule(key: Key, rows: int, cols: int):
    """Derive one round's permutation schedule for a rows x cols grid.

    Returns ``(row_perm, col_perms, final_state)``: the row ranking (length
    ``rows``), one ranking of length ``cols`` per row (a ``rows x cols``
    array), and the orbit's last state for reseeding the next round.  The
    orbit is generated to length max(row_offset + rows, col_offset +
    rows*cols), exactly long enough for both segment families.
    """
    if rows < 1 or cols < 1:
        raise ValueError("schedule needs rows >= 1 and cols >= 1")
    length = max(key.row_offset + rows, key.col_offset + rows * cols)
    seq = generate_sequence(key, length)
    v = seq.values
    row_perm = rank_vector(v[key.row_offset : key.row_offset + rows])
    col_segments = v[key.col_offset : key.col_offset + rows * cols].reshape(rows, cols)
    col_perms = np.argsort(-col_segments, axis=1, kind="stable")
    return row_perm, col_perms, seq.final_state


def trajectory_histogram(x0: float, mu: float, count: int, bins: int) -> np.ndarray:
    """Histogram of the first ``count`` iterates over (0, 1).

    Bin b covers [b/bins, (b+1)/bins).  Chaotic-band orbits are visibly
    non-uniform, which is what makes the ranking schedule weak randomness.
    """
    if bins < 1 or count < bins:
        raise ValueError("need count >= bins >= 1")
    seq = generate_sequence(Key(x0, mu, 1, 1, 1), count)
    counts, _ = np.histogram(seq.values, bins=bins, range=(0.0, 1.0))
    return counts


def random_key(rng: np.random.Generator, max_offset: int = 64, max_rounds: int = 4) -> Key:
    """Draw a uniformly random key, for experiments.

    Offsets and round count stay small so that orbit generation, the cost of
    which is linear in offset + grid size, does not dominate experiment time.
    """
    x0 = float(rng.uniform(0.0, 1.0))
    while x0 == 0.0:
        x0 = float(rng.uniform(0.0, 1.0))
    mu = float(rng.uniform(MU_MIN, MU_MAX))
    while mu <= MU_MIN:
        mu = float(rng.uniform(MU_MIN, MU_MAX))
    return Key(
        x0=x0,
        mu=mu,
        row_offset=int(rng.integers(1, max_offset + 1)),
        col_offset=int(rng.integers(1, max_offset + 1)),
        rounds=int(rng.integers(1, max_rounds + 1)),
    )


def parse_key(text: str) -> Key:
    """Parse the one-line key format ``x0 mu m n T``."""
    fields = text.split()
    if len(fields) != 5:
        raise InvalidKeyDomain(
            f"key line must hold exactly 5 fields 'x0 mu m n T', got {len(fields)}"
        )
    try:
        x0, mu = float(fields[0]), float(fields[1])
        m, n, t = int(fields[2]), int(fields[3]), int(fields[4])
    except ValueError as exc:
        raise InvalidKeyDomain(f"malformed key line: {exc}") from exc
    return Key(x0=x0, mu=mu, row_offset=m, col_offset=n, rounds=t)


def format_key(key: Key) -> str:
    """Inverse of :func:`parse_key`."""
    return f"{key.x0!r} {key.mu!r} {key.row_offset} {key.col_offset} {key.rounds}"
