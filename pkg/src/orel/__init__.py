"""orel: computations with one-relator groups.

Free group words, Christoffel words, Stallings graphs, primitive exceptional
intersection words, bounded primitivity rank and Magnus-Moldavanskii towers.
"""
from .christoffel import Slope, christoffel_word, classify_primitive_rank2, complement_slope_word
from .exceptional import (MagnusPartition, PEIClassification, check_first_type, check_second_type,
                          enumerate_product_factorizations, exceptional_splitting,
                          find_pei_decompositions, magnus_intersection)
from .presentation import OneRelatorPresentation, parse_presentation
from .stallings import (LabeledGraph, conjugate_intersections, core, fibre_product, fold,
                        intersect_subgroups, malnormal_cyclic_family, subgroup_graph)
from .tower import (build_tower, classify_presentation, construct_primitive_extension, detect_powered,
                    magnus_rewrite, rebalance, recognize_bs_relator, zero_sum_epimorphism)
from .words import Alphabet, Word, cyclic_reduce, free_reduce, parse_word, primitive_root, w
from .wsubgroups import PiRankBudget, pi_rank_bounded, two_free_certificate

__version__ = "0.1.0"
