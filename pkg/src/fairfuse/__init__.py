"""Fair consensus ranking: audit group bias, aggregate under a parity bound, iterate.

The heavy surfaces stay behind their submodules: ``fairfuse.service``
(HTTP app), ``fairfuse.reporting`` (figures), ``fairfuse.cli``.
"""

from .consensus import (
    ConsensusResult,
    FairKemenyResult,
    GenerationRequest,
    KemenyResult,
    PreferenceMatrix,
    SwapStep,
    apply_edit,
    brute_force_fair_kemeny,
    brute_force_kemeny,
    copeland_ranking,
    copeland_scores,
    exact_delta,
    fair_copeland,
    min_achievable_arp,
    oracle_profile,
    preference_matrix,
)
from .errors import (
    BaseRankingImmutable,
    CandidateSetMismatch,
    CannotDeletePinned,
    DuplicateId,
    EmptyFile,
    EmptyRankingSet,
    FairfuseError,
    InvalidDataset,
    InvalidRequest,
    MalformedRow,
    MissingColumn,
    NoMixedPairs,
    NonFiniteScore,
    PositionOutOfRange,
    RankingNotFound,
    SessionNotFound,
    SingleGroup,
    ThresholdOutOfRange,
    TooLarge,
    UnknownCandidate,
    UnknownColumn,
)
from .ingestion import (
    ScoreTable,
    load_dataset,
    load_rankings,
    load_scores,
    parse_dataset,
    parse_rankings,
    parse_scores,
    rankings_from_scores,
    scores_to_ranking,
    serialize_dataset,
    serialize_rankings,
    synthesize_rankings,
    write_dataset_csv,
    write_rankings_csv,
)
from .metrics import (
    DEFAULT_HISTOGRAM_BINS,
    FairnessReport,
    GroupAudit,
    GroupRate,
    SimilarityMatrix,
    arp,
    arp_exact,
    audit,
    fpr,
    kendall_tau,
    max_kendall_tau,
    position_histogram,
    similarity,
    similarity_matrix,
)
from .model import Candidate, Dataset, Group, Ranking
from .session import (
    Session,
    SessionStore,
    create_session,
    delete_ranking,
    edit_ranking,
    generate_consensus,
    pin_ranking,
    session_from_dict,
    session_similarity,
    session_to_dict,
    unpin_ranking,
)

__version__ = "0.1.0"

__all__ = [
    "BaseRankingImmutable",
    "Candidate",
    "CandidateSetMismatch",
    "CannotDeletePinned",
    "ConsensusResult",
    "Dataset",
    "DEFAULT_HISTOGRAM_BINS",
    "DuplicateId",
    "EmptyFile",
    "EmptyRankingSet",
    "FairKemenyResult",
    "FairfuseError",
    "FairnessReport",
    "GenerationRequest",
    "Group",
    "GroupAudit",
    "GroupRate",
    "InvalidDataset",
    "InvalidRequest",
    "KemenyResult",
    "MalformedRow",
    "MissingColumn",
    "NoMixedPairs",
    "NonFiniteScore",
    "PositionOutOfRange",
    "PreferenceMatrix",
    "Ranking",
    "RankingNotFound",
    "ScoreTable",
    "Session",
    "SessionNotFound",
    "SessionStore",
    "SimilarityMatrix",
    "SingleGroup",
    "SwapStep",
    "ThresholdOutOfRange",
    "TooLarge",
    "UnknownCandidate",
    "UnknownColumn",
    "apply_edit",
    "arp",
    "arp_exact",
    "audit",
    "brute_force_fair_kemeny",
    "brute_force_kemeny",
    "copeland_ranking",
    "copeland_scores",
    "create_session",
    "delete_ranking",
    "edit_ranking",
    "exact_delta",
    "fair_copeland",
    "fpr",
    "generate_consensus",
    "kendall_tau",
    "load_dataset",
    "load_rankings",
    "load_scores",
    "max_kendall_tau",
    "min_achievable_arp",
    "oracle_profile",
    "parse_dataset",
    "parse_rankings",
    "parse_scores",
    "pin_ranking",
    "position_histogram",
    "preference_matrix",
    "rankings_from_scores",
    "scores_to_ranking",
    "serialize_dataset",
    "serialize_rankings",
    "session_from_dict",
    "session_similarity",
    "session_to_dict",
    "similarity",
    "similarity_matrix",
    "synthesize_rankings",
    "unpin_ranking",
    "write_dataset_csv",
    "write_rankings_csv",
]
