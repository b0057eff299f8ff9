"""
خدمة الكميات: التقسيم وتقاطعات المفاهيم ومصفوفة الانفصال ومتجهات Top/Bott
"""

from .models import QUANTITY_NAMES, ConceptQuantities, DisjointMatrix, NeuronSplit, Partition, TopBott
from .quantity_analyzer import (
    QuantityAnalyzer,
    compute_all_quantities,
    compute_concept_quantities,
    compute_disjoint_matrix,
    compute_neuron_split,
    compute_partition,
    compute_top_bott,
    mask_quantities,
)

__version__ = "0.1.0"
