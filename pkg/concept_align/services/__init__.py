"""
خدمات البحث عن التفسيرات
"""

from .labels import Explanation, Label, classify_difference, parse_label
from .masks import ConceptDataset, NeuronMask, binarize_activations, generate_synthetic
from .search import beam_search_heuristic, beam_search_vanilla, brute_force, optimal_search

__version__ = "0.1.0"
