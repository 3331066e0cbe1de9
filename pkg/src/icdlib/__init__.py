"""Anytime iterative causal discovery (ICD), FCI, and a benchmark harness."""

from .citest import CiCache, DataSet, FisherZ, fisher_z_test, partial_correlation
from .evaluation import Ecdf, StructuralErrors, ecdf_quantile, ks_2sample, structural_errors
from .fci import fci, possible_d_sep
from .graph import (
    ARROW,
    CIRCLE,
    TAIL,
    CausalDag,
    EdgeMark,
    GraphError,
    MixedGraph,
    graph_equal,
    parse_graph,
    read_graph,
    write_graph,
)
from .icd import IcdConfig, icd_main, iter_icd, pds_distances, pdsep_r
from .oracle import DSepOracle, d_separated, oracle_ci, true_pag
from .orientation import SepsetRecord, apply_rules, orient_v_structures
from .simgen import GenConfig, LinearGaussianScm, random_dag, random_instance, sample_data, select_latents

__version__ = "0.1.0"
