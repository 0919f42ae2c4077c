"""Independent transversals in bipartite covers: decide, construct, certify."""

from .graph import (CapacityError, CoverGraph, DeficitReport, GraphBuilder, Params, PartitionedGraph,
                    Side, StructureError, ValidationReport, deficits, delete_vertices, disjoint_union,
                    merge_class_into, validate)
from .criteria import (ConditionError, NormalizationTrace, normalize, sufficient, surplus,
                       witness_counting_check)
from .solver import (BudgetExceeded, DominationWitness, Found, ITSolution, NoIT, find_domination_witness,
                     find_it, random_cover, verify_domination_witness, verify_it)
from .construct import (BuildTrace, build_sharp, gadget, join, phase1, phase2, phase3, predicted_b_deficit,
                        replay, run_pipeline, verify_trace)

__all__ = [name for name in dir() if not name.startswith("_")]
