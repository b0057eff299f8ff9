"""
خدمة البحث: البحث الأمثل والبحث الشعاعي والبحث الشامل
"""

from .beam_search import BeamSearch, beam_search_heuristic, beam_search_vanilla
from .brute_force import BruteForce, brute_force, state_space_size
from .frontier import SearchNode, SearchState, Tier, reduce_frontier
from .optimal_search import OptimalSearch, backpropagate_prefix, optimal_search

__version__ = "0.1.0"
