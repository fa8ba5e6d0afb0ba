"""Seeded synthetic temporal-graph tasks: generation, splits, F1 evaluation."""

__version__ = "0.1.0"

from .graph_core import DynamicGraph, Snapshot, canonical_pair, snapshot_from_pairs
from .random_graphs import (
    ErParams,
    RngStream,
    SbmParams,
    random_equal_partition,
    sample_er,
    sample_sbm,
)
from .splits import SplitIndex, split_fraction, split_periods
from .tasks import (
    SbmTemplate,
    TaskFamily,
    TaskSpec,
    gen_cause_effect,
    gen_long_range,
    gen_periodic_det,
    gen_periodic_sto,
    generate,
    periodic_index,
    schedule_periodic,
    sto_distributions,
)
from .metrics import (
    MetricReport,
    PairScores,
    aggregate,
    change_points,
    evaluate_all_pairs,
    evaluate_node_restricted,
    f1_from_counts,
)
from .baselines import (
    CliquePredictor,
    EdgeBankPredictor,
    PersistencePredictor,
    make_predictor,
    run_protocol,
)
from .serialization import (
    DatasetError,
    DatasetStats,
    Manifest,
    SchemaError,
    StatsMismatchError,
    compute_stats,
    export_ctdg_events,
    export_dataset,
    import_dataset,
    read_metrics_report,
    write_metrics_report,
)

__all__ = [
    "__version__",
    "DynamicGraph",
    "Snapshot",
    "canonical_pair",
    "snapshot_from_pairs",
    "ErParams",
    "RngStream",
    "SbmParams",
    "random_equal_partition",
    "sample_er",
    "sample_sbm",
    "SplitIndex",
    "split_fraction",
    "split_periods",
    "SbmTemplate",
    "TaskFamily",
    "TaskSpec",
    "gen_cause_effect",
    "gen_long_range",
    "gen_periodic_det",
    "gen_periodic_sto",
    "generate",
    "periodic_index",
    "schedule_periodic",
    "sto_distributions",
    "MetricReport",
    "PairScores",
    "aggregate",
    "change_points",
    "evaluate_all_pairs",
    "evaluate_node_restricted",
    "f1_from_counts",
    "CliquePredictor",
    "EdgeBankPredictor",
    "PersistencePredictor",
    "make_predictor",
    "run_protocol",
    "DatasetError",
    "DatasetStats",
    "Manifest",
    "SchemaError",
    "StatsMismatchError",
    "compute_stats",
    "export_ctdg_events",
    "export_dataset",
    "import_dataset",
    "read_metrics_report",
    "write_metrics_report",
]
