"""Citation-network exploration toolkit.

Pipeline: parse WoS exports, resolve cited references into citation edges,
build an acyclic citation graph, then analyze it — core publications,
resolution clustering, query-driven drill-down, timeline layouts — from the
CLI, the HTTP service, or this API.
"""

from .clustering import UNASSIGNED, Clustering, brute_force_cluster, cluster, compute_quality
from .cores import CoreSet, extract_core
from .drill import DrillSession, intermediates
from .graph import BlockStats, BuildReport, CitationGraph, build_graph
from .kernels import BACKEND as KERNEL_BACKEND
from .layout import LayoutParams, LayoutResult, display_order, layout, select_display
from .query import Query, mark, parse_query
from .records import CitedRef, Diagnostic, PublicationRecord, make_record
from .wos import IngestOptions, MatchReport, match_references, parse_cited_reference, parse_wos_file

__version__ = "0.1.0"

__all__ = [
    "BlockStats",
    "BuildReport",
    "CitationGraph",
    "CitedRef",
    "Clustering",
    "CoreSet",
    "Diagnostic",
    "DrillSession",
    "IngestOptions",
    "KERNEL_BACKEND",
    "LayoutParams",
    "LayoutResult",
    "MatchReport",
    "PublicationRecord",
    "Query",
    "UNASSIGNED",
    "brute_force_cluster",
    "build_graph",
    "cluster",
    "compute_quality",
    "display_order",
    "extract_core",
    "intermediates",
    "layout",
    "make_record",
    "mark",
    "parse_cited_reference",
    "parse_query",
    "parse_wos_file",
    "select_display",
    "match_references",
]
