"""
تشغيل الخوارزميات على وحدة واحدة أو على مجلد وحدات وتجميع النتائج في جداول
"""
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd
from tqdm import tqdm

from ...core.config import RunConfig
from ...core.errors import ConfigError
from ...utils.logging import configure_logging, logger
from ..labels.evaluation import exact_label_quantities, iou
from ..labels.explanation import Explanation, classify_difference
from ..labels.label import Label
from ..masks.archive import load_concept_archive, load_neuron
from ..masks.dataset import ConceptDataset, NeuronMask
from ..quantities.quantity_analyzer import QuantityAnalyzer
from ..search.beam_search import BeamSearch
from ..search.brute_force import BruteForce
from ..search.optimal_search import OptimalSearch
from .models import (
    BenchReport,
    BenchRow,
    ComparisonReport,
    ComparisonSummary,
    IouValue,
    LabelQuantities,
    PrefixQuantities,
    RunReport,
    UnitComparison,
)

UNIT_SUFFIXES = (".nam", ".naf")
CATEGORIES = ("Cat1", "Cat2", "Cat3")


def discover_units(directory) -> List[Tuple[str, Path]]:
    """
    ملفات الوحدات في المجلد مرتبة حسب الاسم

    Returns:
        قائمة (اسم الوحدة، المسار)، والاسم هو اسم الملف بدون الامتداد
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise ConfigError(f"units directory not found: {directory}")
    units = sorted(
        (path.stem, path) for path in directory.iterdir()
        if path.is_file() and path.suffix.lower() in UNIT_SUFFIXES
    )
    if not units:
        raise ConfigError(f"no .nam or .naf files in {directory}")
    return units


@dataclass
class UnitResult:
    unit: str
    reports: List[RunReport]
    category: Optional[str] = None

    @property
    def optimal(self) -> bool:
        return all(report.optimal_flag for report in self.reports)


class UnitAnalyzer:
    def __init__(self, dataset: ConceptDataset, config: RunConfig):
        """
        تهيئة محلل الوحدات

        Args:
            dataset: مجموعة المفاهيم المشتركة بين كل الوحدات
            config: إعدادات التشغيل
        """
        self.dataset = dataset
        self.config = config

    def explain(
        self,
        neuron: NeuronMask,
        algorithm: Optional[str] = None,
        analyzer: Optional[QuantityAnalyzer] = None,
    ) -> Explanation:
        algorithm = algorithm or self.config.algorithm
        cfg = self.config
        if algorithm == "optimal":
            return OptimalSearch(
                self.dataset, neuron, cfg.max_length, cfg.operators, cfg.limits(), analyzer
            ).run()
        if algorithm in ("beam", "beam-vanilla"):
            return BeamSearch(
                self.dataset, neuron, cfg.beam(), guided=algorithm == "beam", analyzer=analyzer
            ).run()
        if algorithm == "brute":
            return BruteForce(self.dataset, neuron, cfg.max_length, cfg.operators, top=cfg.top).run()
        raise ConfigError(f"unknown algorithm: {algorithm}")

    def analyze(
        self,
        unit: str,
        neuron: NeuronMask,
        algorithms: Optional[Sequence[str]] = None,
        classify: bool = False,
    ) -> UnitResult:
        """
        تشغيل خوارزمية أو أكثر على نفس الوحدة مع مشاركة الكميات الذرية

        Args:
            unit: اسم الوحدة
            neuron: قناع العصبون
            algorithms: الخوارزميات بالترتيب (الافتراضي خوارزمية الإعدادات)
            classify: تصنيف الفرق بين أول خوارزميتين

        Returns:
            UnitResult: تقرير لكل خوارزمية
        """
        algorithms = list(algorithms or [self.config.algorithm])
        analyzer = QuantityAnalyzer(self.dataset, neuron, self.config.max_length)
        explanations: Dict[str, Explanation] = {}
        reports = []
        for algorithm in algorithms:
            if algorithm not in explanations:
                explanations[algorithm] = self.explain(neuron, algorithm, analyzer)
            config = self.config.model_copy(update={"algorithm": algorithm}).echo()
            reports.append(RunReport.from_explanation(
                unit, algorithm, explanations[algorithm], config, self.config.seedless_output
            ))
        category = None
        if classify:
            first, second = algorithms[0], algorithms[1]
            category = classify_difference(explanations[first], explanations[second]).value
        logger.info("الوحدة %s: %s", unit, ", ".join(f"{r.algorithm}={r.iou.value}" for r in reports))
        return UnitResult(unit=unit, reports=reports, category=category)


# حالة كل عملية عاملة: المحلل وإعدادات تحويل التنشيطات
_worker: Optional[Tuple[UnitAnalyzer, float, Optional[float]]] = None


def _init_worker(dataset_path, strict, config, quantile, upper_value, log_level) -> None:
    global _worker
    configure_logging(log_level)
    dataset = load_concept_archive(dataset_path, strict=strict)
    _worker = (UnitAnalyzer(dataset, config), quantile, upper_value)


def _run_task(task) -> UnitResult:
    unit, path, algorithms, classify = task
    analyzer, quantile, upper_value = _worker
    neuron = load_neuron(path, quantile, upper_value)
    return analyzer.analyze(unit, neuron, algorithms, classify)


class BatchRunner:
    def __init__(
        self,
        dataset_path,
        config: RunConfig,
        quantile: float,
        upper_value: Optional[float] = None,
        jobs: int = 1,
        strict: bool = True,
        log_level: Optional[str] = None,
        progress: bool = True,
    ):
        """
        تشغيل الوحدات بالتوازي على مستوى الوحدة فقط؛ نتيجة كل وحدة لا تعتمد على jobs
        """
        if jobs < 1:
            raise ConfigError(f"jobs must be at least 1, got {jobs}")
        self.initargs = (dataset_path, strict, config, quantile, upper_value, log_level)
        self.jobs = jobs
        self.progress = progress

    def run(
        self, units: Sequence[Tuple[str, Path]], algorithms: Sequence[str], classify: bool = False
    ) -> List[UnitResult]:
        tasks = [(unit, path, list(algorithms), classify) for unit, path in units]
        bar = tqdm(total=len(tasks), desc="units", file=sys.stderr, disable=not self.progress)
        results = []
        try:
            if self.jobs == 1:
                _init_worker(*self.initargs)
                for task in tasks:
                    results.append(_run_task(task))
                    bar.update(1)
            else:
                with ProcessPoolExecutor(
                    max_workers=self.jobs, initializer=_init_worker, initargs=self.initargs
                ) as executor:
                    for result in executor.map(_run_task, tasks):
                        results.append(result)
                        bar.update(1)
        finally:
            bar.close()
        return results


def _iou_frame(results: Sequence[UnitResult]) -> pd.DataFrame:
    rows = []
    for result in results:
        optimal, baseline = result.reports[0], result.reports[1]
        rows.append({
            "unit": result.unit,
            "category": result.category,
            "optimal_iou": float(optimal.iou.num) / optimal.iou.den,
            "baseline_iou": float(baseline.iou.num) / baseline.iou.den,
        })
    return pd.DataFrame(rows, columns=["unit", "category", "optimal_iou", "baseline_iou"])


def summarize_comparison(
    results: Sequence[UnitResult], baseline: str, config: Dict
) -> ComparisonReport:
    """
    نسب الفئات ومتوسطات IoU لمقارنة البحث الأمثل بخوارزمية أساس
    """
    frame = _iou_frame(results)
    total = len(frame)
    counts = frame["category"].value_counts()

    def pct(category: str) -> float:
        return round(100.0 * int(counts.get(category, 0)) / total, 6) if total else 0.0

    cats = {category: pct(category) for category in CATEGORIES}
    diff = round(sum(int(counts.get(c, 0)) for c in CATEGORIES) * 100.0 / total, 6) if total else 0.0
    summary = ComparisonSummary(
        units=total,
        diff_pct=diff,
        cat1_pct=cats["Cat1"],
        cat2_pct=cats["Cat2"],
        cat3_pct=cats["Cat3"],
        same_pct=pct("Same"),
        mean_iou_optimal=round(float(frame["optimal_iou"].mean()), 12) if total else 0.0,
        mean_iou_baseline=round(float(frame["baseline_iou"].mean()), 12) if total else 0.0,
    )
    units = []
    for result in results:
        optimal, other = result.reports[0], result.reports[1]
        units.append(UnitComparison(
            unit=result.unit,
            category=result.category,
            optimal_label=optimal.label,
            optimal_iou=optimal.iou,
            baseline_label=other.label,
            baseline_iou=other.iou,
        ))
    return ComparisonReport(baseline=baseline, summary=summary, units=units, config=config)


def summarize_bench(results: Sequence[UnitResult], algorithms: Sequence[str], config: Dict) -> BenchReport:
    """متوسط وانحراف العدادات والزمن لكل خوارزمية"""
    rows = []
    for result in results:
        for report in result.reports:
            rows.append({
                "algorithm": report.algorithm,
                "visited": report.stats.visited,
                "expanded": report.stats.expanded,
                "estimated": report.stats.estimated,
                "elapsed_ms": report.stats.elapsed_ms,
                "iou": float(report.iou.num) / report.iou.den,
            })
    frame = pd.DataFrame(rows)
    table = frame.groupby("algorithm").agg(["mean", "std", "count"]).fillna(0.0)

    bench_rows = []
    for algorithm in algorithms:
        stats = table.loc[algorithm]
        bench_rows.append(BenchRow(
            algorithm=algorithm,
            units=int(stats[("visited", "count")]),
            visited_mean=round(float(stats[("visited", "mean")]), 6),
            visited_std=round(float(stats[("visited", "std")]), 6),
            expanded_mean=round(float(stats[("expanded", "mean")]), 6),
            expanded_std=round(float(stats[("expanded", "std")]), 6),
            estimated_mean=round(float(stats[("estimated", "mean")]), 6),
            estimated_std=round(float(stats[("estimated", "std")]), 6),
            elapsed_ms_mean=round(float(stats[("elapsed_ms", "mean")]), 3),
            elapsed_ms_std=round(float(stats[("elapsed_ms", "std")]), 3),
            mean_iou=round(float(stats[("iou", "mean")]), 12),
        ))
    return BenchReport(rows=bench_rows, config=config)


def label_quantities(analyzer: QuantityAnalyzer, label: Label) -> LabelQuantities:
    """الكميات الدقيقة لكل بادئة من تسمية معطاة مع IoU التسمية كاملة"""
    names = analyzer.dataset.concept_names
    exact = exact_label_quantities(label, analyzer.dataset, analyzer.neuron, analyzer.partition, analyzer.split)
    prefixes = []
    for prefix, quantities in zip(label.prefixes(), exact):
        diou = quantities.diou(analyzer.n_total)
        prefixes.append(PrefixQuantities(
            label=prefix.render(names),
            quantities=quantities.totals(),
            diou=str(diou),
            diou_value=diou.decimal(),
        ))
    return LabelQuantities(
        label=label.render(names),
        iou=IouValue.from_rational(iou(label, analyzer.neuron, analyzer.dataset)),
        prefixes=prefixes,
    )
