"""driftlab: online active-learning ensemble classification of parallel,
unevenly timed feature streams under concept drift and class evolution."""

from .classifiers import (LabeledFrameSet, score_frame, train_gaussian_nb,
                          train_gmm, train_logistic, train_one_class)
from .config import RunConfig, load_config
from .ensemble import (ClassRegistry, ColdStartError, CompositeModel,
                       append_member, compute_weights, ensemble_score,
                       load_snapshot, save_snapshot)
from .evaluation import (RunReport, accuracy, annotation_effort,
                         sweep_batch_size, sweep_threshold)
from .fusion import (BatchDecision, FusionConfig, bcl_margin, bcl_modified_mc,
                     bcl_most_confident, bcl_ratio, combine_product_log,
                     combine_sum, decide_batch)
from .loop import Oracle, OracleError, ScriptedOracle, run, run_time_slot
from .streams import (Batch, DimensionMismatchError, Frame, StreamDataset,
                      TimeSlotView, assemble_batches, time_slot_view)
from .synthetic import (ScenarioSpec, StreamSpec, UndefinedSegmentError,
                        build_scenario, class_params, sample_frame,
                        scenario_spec)

__version__ = "0.1.0"
