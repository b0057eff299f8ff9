"""
خدمة الأقنعة الثنائية: التمثيل والتنسيقات والتوليد الاصطناعي
"""

from .activations import binarize_activations
from .archive import (
    encode_concept_archive,
    encode_neuron_mask,
    load_concept_archive,
    load_neuron,
    load_neuron_mask,
    load_raw_activations,
    read_concept_archive,
    read_neuron_mask,
    read_raw_activations,
    sniff_magic,
    write_concept_archive,
    write_neuron_mask,
    write_raw_activations,
)
from .bit_matrix import BitMatrix
from .dataset import ConceptDataset, NeuronMask
from .synthetic import SyntheticGenerator, generate_synthetic, generate_units

__version__ = "0.1.0"
