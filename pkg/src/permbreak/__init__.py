"""Chaos-based bit-permutation image cipher and the attacks that break it."""

from .analysis import (
    AccuracySummary,
    bit_histogram,
    compare_images,
    demonstrate_equivalent_key,
    difference_histogram,
    median_filter_3x3,
    perm_accuracy,
)
from .cipher import (
    PermutationMap,
    ShapeError,
    apply_inverse,
    apply_map,
    compose_permutation,
    decrypt,
    decrypt_round,
    encrypt,
    encrypt_round,
    expand_to_bits,
    load_permutation,
    pack_to_image,
    save_permutation,
)
from .keystream import (
    ChaoticSequence,
    EmptySegment,
    InvalidKeyDomain,
    Key,
    build_schedule,
    generate_sequence,
    logistic_step,
    parse_key,
    random_key,
    rank_vector,
    trajectory_histogram,
)
from .pgm import read_pgm, write_pgm
from .recovery import (
    AttackReport,
    InconsistentPair,
    RecoveryTree,
    attack,
    chosen_plaintext_count,
    construct_chosen_plaintexts,
    error_bit_pmf,
    min_known_plaintexts,
    predicted_bit_accuracy,
    recovery_probability,
)

__all__ = [
    "AccuracySummary",
    "AttackReport",
    "ChaoticSequence",
    "EmptySegment",
    "InconsistentPair",
    "InvalidKeyDomain",
    "Key",
    "PermutationMap",
    "RecoveryTree",
    "ShapeError",
    "apply_inverse",
    "apply_map",
    "attack",
    "bit_histogram",
    "build_schedule",
    "chosen_plaintext_count",
    "compare_images",
    "compose_permutation",
    "construct_chosen_plaintexts",
    "decrypt",
    "decrypt_round",
    "demonstrate_equivalent_key",
    "difference_histogram",
    "encrypt",
    "encrypt_round",
    "error_bit_pmf",
    "expand_to_bits",
    "generate_sequence",
    "load_permutation",
    "logistic_step",
    "median_filter_3x3",
    "min_known_plaintexts",
    "pack_to_image",
    "parse_key",
    "perm_accuracy",
    "predicted_bit_accuracy",
    "random_key",
    "rank_vector",
    "read_pgm",
    "recovery_probability",
    "save_permutation",
    "trajectory_histogram",
    "write_pgm",
]
