"""coherence-atlas: strategic-alignment analytics over coded strategy corpora."""

from __future__ import annotations

from importlib import resources

from .alignment import (
    AlignmentMatrix,
    IndexReport,
    alignment_coverage,
    build_matrix,
    foresight_sophistication,
    implementation_specificity_index,
    index_report,
    matrix_to_csv,
    mean_alignment_score,
    normalized_alignment,
    objective_coverage_index,
    objective_intensity,
    score_cell,
    strategic_alignment_index,
)
from .analytics import (
    CorrelationResult,
    Grouping,
    PrevalenceTable,
    Wave,
    correlate,
    correlation_p_value,
    country_comparison,
    group_profile,
    prevalence,
    strongest_pairs,
    temporal_trends,
)
from .corpus import (
    Adjudication,
    AlignmentCell,
    AlignmentEvidence,
    CodedStrategy,
    ComponentCoding,
    Corpus,
    StrategyMeta,
    ValidationReport,
    dump_corpus,
    export_csv,
    load_corpus,
    load_corpus_file,
    merge_coders,
    validate,
)
from .errors import (
    AnalysisError,
    CatalogError,
    CoherenceAtlasError,
    CorpusParseError,
    CorpusValidationError,
    MergeError,
)
from .network import (
    CentralityReport,
    CommunityPartition,
    NetworkProfile,
    PolicyNetwork,
    build_cooccurrence_network,
    build_policy_network,
    centralities,
    detect_communities,
    modularity,
    network_profile,
)
from .reliability import (
    ReliabilityReport,
    WeightScheme,
    cohen_kappa,
    reliability_report,
    weighted_kappa,
)
from .taxonomy import (
    ComponentId,
    ComponentKind,
    GovernanceModel,
    Region,
    catalog,
    category_of,
    parse_component,
)

__version__ = "0.1.0"


def reference_corpus_bytes() -> bytes:
    """Raw bytes of the bundled 20-strategy reference corpus."""
    return resources.files(__name__).joinpath("data/reference_corpus.json").read_bytes()


def load_reference_corpus() -> Corpus:
    """The bundled 20-strategy reference corpus."""
    return load_corpus(reference_corpus_bytes())
