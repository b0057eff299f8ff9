import numpy as np
import pytest

from concept_align.core.config import SynthConfig
from concept_align.services.masks.bit_matrix import BitMatrix
from concept_align.services.masks.dataset import ConceptDataset, NeuronMask
from concept_align.services.masks.synthetic import generate_synthetic

# عينة واحدة، ثلاثة مفاهيم، ستة مواضع
WORKED_CONCEPTS = {
    "c1": [1, 1, 0, 0, 1, 1],
    "c2": [1, 1, 0, 1, 0, 0],
    "c3": [1, 0, 1, 0, 1, 1],
}
WORKED_NEURON = [1, 1, 1, 0, 0, 0]


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="تشغيل اختبارات الأداء البطيئة")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running performance checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="يحتاج --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def worked_dataset() -> ConceptDataset:
    return ConceptDataset.from_bool(list(WORKED_CONCEPTS), [np.array(v, dtype=bool) for v in WORKED_CONCEPTS.values()])


@pytest.fixture
def worked_neuron() -> NeuronMask:
    return NeuronMask(BitMatrix.from_bool(np.array(WORKED_NEURON, dtype=bool)))


def synthetic(seed: int, **overrides):
    """مجموعة مفاهيم وعصبون اصطناعيان بإعدادات صغيرة افتراضياً"""
    values = dict(seed=seed, concepts=6, samples=4, features=24, annotation_density=0.5, overlap_density=0.3)
    values.update(overrides)
    return generate_synthetic(SynthConfig(**values))


@pytest.fixture
def make_instance():
    return synthetic


@pytest.fixture
def small_instance():
    return synthetic(7)


@pytest.fixture
def archive_dir(tmp_path, worked_dataset, worked_neuron):
    """ملفات المثال المحلول على القرص"""
    from concept_align.services.masks.archive import write_concept_archive, write_neuron_mask

    write_concept_archive(worked_dataset, tmp_path / "concepts.cma")
    write_neuron_mask(worked_neuron, tmp_path / "neuron.nam")
    return tmp_path
