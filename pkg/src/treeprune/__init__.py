"""Point-cloud pruning analysis: light scoring, prune simulation, suggestions."""

from .cloud import (
    BINARY_FORMAT,
    CSV_FORMAT,
    LABEL_FOLIAGE,
    LABEL_TRUNK,
    LABEL_UNKNOWN,
    LabeledPoint,
    PointCloud,
    load_cloud,
    save_cloud,
)
from .errors import (
    CloudParseError,
    ConsistencyError,
    DegenerateLightError,
    DegeneratePruneError,
    EmptyCloudError,
    EmptyCutError,
    InvalidCutError,
    NoSunError,
    ParameterError,
    TreepruneError,
    UndefinedRecallError,
)
from .graph import (
    CutSpec,
    PruneResult,
    TreeGraph,
    apply_prune,
    build_graph,
    find_trunk,
    shortest_paths,
    simulate_prune,
)
from .light import (
    DistributionScore,
    LightField,
    SkyModel,
    build_sky_model,
    distribution_score,
    light_fraction,
    raytrace,
)
from .scoring import Coefficients, ScoreReport, combined_score, normalize_set, total_light, tree_volume
from .voxel import VoxelCell, VoxelGrid, hull_area_2d, slice_components, voxelize
from .config import PipelineConfig
from .pipeline import TreeMetrics, measure, score_reports, sky_for
from .suggest import (
    CandidateScore,
    ShadeField,
    SuggestionSet,
    evaluate_suggestions,
    path_influence,
    select_candidates,
    shade_scores,
    suggest_cuts,
)
from .synth import (
    GroundTruthPair,
    ScanConfig,
    Scene,
    Segment,
    SynthParams,
    TreeMesh,
    build_stand,
    evaluate_f1,
    generate_tree,
    largest_limbs,
    mesh_prune,
    sample_tree_cloud,
    virtual_scan,
)
from .benchmark import BenchmarkResult, run_f1_benchmark

__version__ = "0.1.0"
