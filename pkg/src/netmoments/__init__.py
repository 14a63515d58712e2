"""Node-subsampling inference for network moments under sparse graphon models."""

__version__ = "0.1.0"

from .algebra import (LinearityReport, MergeEntry, MergeTable, build_merge_table,
                      enumerate_subsample_moments, exact_subsample_covariance,
                      exact_subsample_expectation, g1_covariance, g1_sum_variance, g1_values,
                      hoeffding_g1, verify_linearity)
from .compare import (ComparisonReport, ConditionalSlice, EmptySliceError, case1_compare,
                      case2_compare, conditional_slice)
from .counting import (CountContext, count_induced, count_noninduced, injection_count,
                       network_moment)
from .experiments import ExperimentGrid, ks_error_experiment
from .graph import (EdgeListError, Graph, complete_graph, cycle_graph, disjoint_union,
                    edge_density, empty_graph, erdos_renyi, induced_subgraph,
                    largest_connected_component, load_edge_list, path_graph, star_graph)
from .graphon import (GraphonModel, PopulationMoment, builtin_graphon, limiting_covariance,
                      parse_schedule, population_moment, sample_graph, theoretical_mean)
from .motifs import CATALOG, MOTIF_NAMES, Motif, automorphism_count, get_motif, parse_motif
from .subsample import (EmpiricalJointCDF, MomentSample, RescaledSample, SubsampleConfig,
                        empirical_cdf, ks_distance, reference_sample, rescale, run_subsampling)
