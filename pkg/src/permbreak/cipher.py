"""The bit-permutation image cipher and its equivalent-key representation.

An 8-bit grayscale image of height M and width N is expanded into an
M x 8N binary matrix (least-significant bit first inside each byte).  Each
round gathers whole rows by the row ranking, then gathers bits inside every
row by that row's column ranking; the pass is repeated ``key.rounds`` times,
reseeding the orbit from its own final state between rounds.  Because the
scheme only moves bits and never changes them, its entire effect is one
fixed bijection on the M x 8N position grid, captured here as a
:class:`PermutationMap` and usable as an equivalent decryption key.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .keystream import Key, build_schedule


class ShapeError(ValueError):
    """Operands with incompatible or invalid dimensions."""


def _as_image(img) -> np.ndarray:
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.size == 0:
        raise ShapeError(f"image must be a non-empty 2-D array, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if arr.dtype.kind not in "iu" or arr.min() < 0 or arr.max() > 255:
            raise ShapeError("image values must be integers in [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits)
    if arr.ndim != 2 or arr.size == 0:
        raise ShapeError(f"bit matrix must be a non-empty 2-D array, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        arr = arr.astype(np.uint8)
    if arr.max() > 1:
        raise ShapeError("bit matrix entries must be 0 or 1")
    return arr


def expand_to_bits(img) -> np.ndarray:
    """M x N image -> M x 8N bit matrix, bit l = 8j+k carrying weight 2**k."""
    return np.unpackbits(_as_image(img), axis=1, bitorder="little")


def pack_to_image(bits) -> np.ndarray:
    """Exact inverse of :func:`expand_to_bits`."""
    arr = _as_bits(bits)
    if arr.shape[1] % 8 != 0:
        raise ShapeError(f"bit matrix width must be a multiple of 8, got {arr.shape[1]}")
    return np.packbits(arr, axis=1, bitorder="little")


def encrypt_round(grid, row_perm, col_perms) -> np.ndarray:
    """One permutation pass: gather rows, then gather within each row.

    Output row i is input row row_perm[i]; output bit (i, l) is then bit
    col_perms[i, l] of that gathered row.  Works on any 2-D value grid, so a
    single round also serves as a byte-level permutation cipher.
    """
    g = np.asarray(grid)
    rows, cols = g.shape
    if row_perm.shape != (rows,) or col_perms.shape != (rows, cols):
        raise ShapeError(
            f"schedule shapes {row_perm.shape}/{col_perms.shape} do not match grid {g.shape}"
        )
    intermediate = g[row_perm, :]
    return np.take_along_axis(intermediate, col_perms, axis=1)


def decrypt_round(grid, row_perm, col_perms) -> np.ndarray:
    """Exact inverse of :func:`encrypt_round`: scatter within rows, then scatter rows."""
    g = np.asarray(grid)
    rows, cols = g.shape
    if row_perm.shape != (rows,) or col_perms.shape != (rows, cols):
        raise ShapeError(
            f"schedule shapes {row_perm.shape}/{col_perms.shape} do not match grid {g.shape}"
        )
    intermediate = np.empty_like(g)
    np.put_along_axis(intermediate, col_perms, g, axis=1)
    out = np.empty_like(g)
    out[row_perm, :] = intermediate
    return out


def round_schedules(key: Key, rows: int, cols: int) -> list:
    """All per-round schedules, chaining each round's seed from the previous
    round's final orbit state (round 1 is seeded by the key itself)."""
    schedules = []
    x0 = key.x0
    for _ in range(key.rounds):
        row_perm, col_perms, x0 = build_schedule(replace(key, x0=x0), rows, cols)
        schedules.append((row_perm, col_perms))
    return schedules


def encrypt(img, key: Key) -> np.ndarray:
    """Encrypt a grayscale image under ``key``."""
    bits = expand_to_bits(img)
    for row_perm, col_perms in round_schedules(key, *bits.shape):
        bits = encrypt_round(bits, row_perm, col_perms)
    return pack_to_image(bits)


def decrypt(img, key: Key) -> np.ndarray:
    """Invert :func:`encrypt`: undo the rounds in reverse order.

    The per-round seeds are only defined forwards, so the whole seed chain is
    recomputed before anything is undone.
    """
    bits = expand_to_bits(img)
    for row_perm, col_perms in reversed(round_schedules(key, *bits.shape)):
        bits = decrypt_round(bits, row_perm, col_perms)
    return pack_to_image(bits)


@dataclass(frozen=True)
class PermutationMap:
    """Bijection on the rows x cols position grid.

    target[i*cols + l] is the flat destination of position (i, l): applying
    the map moves the value at (i, l) there.  Ground-truth maps come from
    :func:`compose_permutation`; estimated ones from the recovery tree.
    """

    rows: int
    cols: int
    target: np.ndarray

    def __post_init__(self):
        n = self.rows * self.cols
        t = self.target
        if t.shape != (n,):
            raise ShapeError(f"target must be flat of length {n}, got shape {t.shape}")
        if not np.array_equal(np.sort(t), np.arange(n)):
            raise ShapeError("target does not define a bijection on the grid")


def compose_permutation(key: Key, height: int, width: int) -> PermutationMap:
    """Collapse the full multi-round cipher into a single position bijection.

    The returned map W satisfies: for every image, the cipher bit at W(i, l)
    equals the plain bit at (i, l).
    """
    cols = 8 * width
    size = height * cols
    # Each round is a gather out[q] = in[src[q]]; compose the gathers, then
    # invert to express "where does plain position p end up".
    gather = np.arange(size, dtype=np.int64)
    for row_perm, col_perms in round_schedules(key, height, cols):
        src = (row_perm[:, None] * cols + col_perms).reshape(-1)
        gather = gather[src]
    target = np.empty(size, dtype=np.int64)
    target[gather] = np.arange(size, dtype=np.int64)
    return PermutationMap(height, cols, target)


def apply_map(pmap: PermutationMap, grid) -> np.ndarray:
    """Scatter a value grid through the map: out[W(p)] = in[p]."""
    g = np.asarray(grid)
    if g.shape != (pmap.rows, pmap.cols):
        raise ShapeError(f"grid shape {g.shape} does not match map {pmap.rows}x{pmap.cols}")
    flat = g.reshape(-1)
    out = np.empty_like(flat)
    out[pmap.target] = flat
    return out.reshape(g.shape)


def apply_inverse(pmap: PermutationMap, grid) -> np.ndarray:
    """Gather back through the map: out[p] = in[W(p)].

    With an estimated map this is decryption by equivalent key.
    """
    g = np.asarray(grid)
    if g.shape != (pmap.rows, pmap.cols):
        raise ShapeError(f"grid shape {g.shape} does not match map {pmap.rows}x{pmap.cols}")
    return g.reshape(-1)[pmap.target].reshape(g.shape)


def save_permutation(pmap: PermutationMap, path) -> None:
    """Write a map as text: header ``rows cols``, then one ``i l i' l'`` per line."""
    size = pmap.rows * pmap.cols
    src = np.arange(size, dtype=np.int64)
    quads = np.column_stack(
        (
            src // pmap.cols,
            src % pmap.cols,
            pmap.target // pmap.cols,
            pmap.target % pmap.cols,
        )
    )
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{pmap.rows} {pmap.cols}\n")
        np.savetxt(fh, quads, fmt="%d")


def load_permutation(path) -> PermutationMap:
    """Inverse of :func:`save_permutation`."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ShapeError("permutation file must start with a 'rows cols' header line")
        rows, cols = int(header[0]), int(header[1])
        quads = np.loadtxt(fh, dtype=np.int64, ndmin=2)
    if quads.shape != (rows * cols, 4):
        raise ShapeError(
            f"expected {rows * cols} quadruples of 4 fields, got shape {quads.shape}"
        )
    target = np.empty(rows * cols, dtype=np.int64)
    target[quads[:, 0] * cols + quads[:, 1]] = quads[:, 2] * cols + quads[:, 3]
    return PermutationMap(rows, cols, target)
