"""Folksonomy analytics and social link prediction."""

from tagnet._core import (  # noqa: F401
    ActivityProfile,
    AlignmentConfig,
    DataError,
    DistanceProfile,
    Distribution,
    DomainError,
    Folksonomy,
    GroupMembership,
    MixingCurve,
    NotFoundError,
    PairAlignment,
    ParseError,
    RocResult,
    ShuffleReport,
    SimilarityIndex,
    SocialGraph,
    StateError,
    SynthConfig,
    SynthData,
    TagProbabilityTable,
    __version__,
    activity_profile,
    alignment_histogram,
    alignment_profile,
    all_measure_specs,
    batch_similarity,
    bfs_distances,
    distribution,
    generate,
    nn_mixing_curve,
    pair_alignment,
    pearson,
    relative_improvement,
    roc,
    shuffle_groups,
    shuffle_tags,
    similarity,
    tag_probabilities,
)
