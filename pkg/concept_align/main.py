"""
واجهة سطر الأوامر: explain و compare و gen و stats و bench

تقارير JSON تُكتب إلى stdout والتشخيص إلى stderr.
رموز الخروج: 0 نجاح، 2 معاملات أو إعدادات غير صالحة، 3 ملف تالف أو أبعاد غير متطابقة، 4 نفاد الميزانية.
"""
import functools
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional

import click

from . import __version__
from .core.config import ALGORITHMS, RunConfig, Settings, SynthConfig, build
from .core.errors import (
    ArchiveFormatError,
    ConfigError,
    DimensionMismatchError,
    InvalidActivationsError,
    LabelError,
    SearchCapExceededError,
)
from .core.operators import parse_operators
from .services.labels.label import parse_label
from .services.masks.archive import load_concept_archive, load_neuron, write_concept_archive, write_neuron_mask
from .services.masks.synthetic import SyntheticGenerator
from .services.quantities.quantity_analyzer import QuantityAnalyzer
from .services.reporting.models import QuantityReport, dump
from .services.reporting.schema import validate_report
from .services.reporting.unit_analyzer import (
    BatchRunner,
    UnitAnalyzer,
    discover_units,
    label_quantities,
    summarize_bench,
    summarize_comparison,
)
from .services.search.brute_force import state_space_size
from .utils.logging import configure_logging, logger

EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_BUDGET = 4

_USAGE_ERRORS = (ConfigError, SearchCapExceededError, LabelError)
_FORMAT_ERRORS = (ArchiveFormatError, DimensionMismatchError, InvalidActivationsError)


def _handle_errors(command):
    """تحويل أخطاء الحزمة إلى رسالة على stderr ورمز خروج"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except _USAGE_ERRORS as e:
            click.echo(f"خطأ: {e}", err=True)
            sys.exit(EXIT_USAGE)
        except _FORMAT_ERRORS as e:
            click.echo(f"خطأ في الملف: {e}", err=True)
            sys.exit(EXIT_FORMAT)

    return wrapper


def _emit(kind: str, report) -> None:
    data = dump(report)
    validate_report(kind, data)
    click.echo(json.dumps(data, indent=2, ensure_ascii=False))


def _run_config(algorithm: str, options: Dict) -> RunConfig:
    try:
        operators = parse_operators(options["operators"])
    except ValueError as e:
        raise ConfigError(str(e)) from e
    return build(
        RunConfig,
        algorithm=algorithm,
        max_length=options["max_length"],
        beam_size=options["beam_size"],
        operators=operators,
        backpropagation=not options["no_backprop"],
        max_nodes=options["budget_nodes"],
        max_seconds=options["budget_seconds"],
        top=options["top"],
        seedless_output=options["seedless_output"],
    )


def _quantile(value: Optional[float]) -> float:
    return value if value is not None else Settings.from_env().quantile


def _search_options(command):
    """خيارات البحث المشتركة بين explain و compare و bench"""
    options = [
        click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False),
                     help="ملف مجموعة المفاهيم CMA1"),
        click.option("--quantile", type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True),
                     default=None, help="نسبة التنشيطات العليا لملفات NAF1 (الافتراضي 0.005)"),
        click.option("--upper-cutoff", type=float, default=None,
                     help="حد علوي اختياري لقيمة التنشيط لملفات NAF1"),
        click.option("--max-length", type=click.IntRange(min=1), default=3, show_default=True),
        click.option("--beam-size", type=click.IntRange(min=1), default=5, show_default=True),
        click.option("--operators", default="or,and,andnot", show_default=True),
        click.option("--no-backprop", is_flag=True, help="تعطيل تحديث التقديرات من البادئات"),
        click.option("--budget-nodes", type=click.IntRange(min=1), default=None),
        click.option("--budget-seconds", type=click.FloatRange(min=0.0, min_open=True), default=None),
        click.option("--top", type=click.IntRange(min=1), default=10, show_default=True,
                     help="حجم ترتيب البحث الشامل"),
        click.option("--seedless-output", is_flag=True, help="تصفير elapsed_ms لمخرجات قابلة للمقارنة بايتياً"),
        click.option("--allow-empty-concepts", is_flag=True, help="قبول مفاهيم بدون تعليقات مع تحذير"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


@click.group()
@click.option("--log-level", type=click.Choice(["error", "warn", "info", "debug", "trace"]), default=None,
              help="يتجاوز CONCEPT_ALIGN_LOG")
@click.version_option(__version__, prog_name="concept-align")
@click.pass_context
def cli(ctx, log_level):
    """تفسيرات تركيبية مثلى لعصبونات الشبكات"""
    ctx.ensure_object(dict)
    ctx.obj["log_level"] = log_level
    configure_logging(log_level)


@cli.command()
@_search_options
@click.option("--neuron", required=True, type=click.Path(exists=True, dir_okay=False),
              help="قناع NAM1 أو تنشيطات NAF1")
@click.option("--algorithm", type=click.Choice(ALGORITHMS), default="optimal", show_default=True)
@click.option("--unit", default=None, help="اسم الوحدة في التقرير (الافتراضي اسم الملف)")
@_handle_errors
def explain(dataset, neuron, algorithm, unit, quantile, upper_cutoff, allow_empty_concepts, **options):
    """أفضل تسمية لعصبون واحد"""
    config = _run_config(algorithm, options)
    concepts = load_concept_archive(dataset, strict=not allow_empty_concepts)
    mask = load_neuron(neuron, _quantile(quantile), upper_cutoff)
    result = UnitAnalyzer(concepts, config).analyze(unit or Path(neuron).stem, mask)
    report = result.reports[0]
    _emit("RunReport", report)
    if "budget_exhausted" in report.warnings:
        sys.exit(EXIT_BUDGET)


def _batch(ctx, dataset, units_dir, quantile, upper_cutoff, allow_empty_concepts, jobs, config):
    units = discover_units(units_dir)
    # تحميل مبكر لاكتشاف أخطاء التنسيق قبل تشغيل العمال
    load_concept_archive(dataset, strict=not allow_empty_concepts)
    return units, BatchRunner(
        dataset,
        config,
        _quantile(quantile),
        upper_cutoff,
        jobs=jobs,
        strict=not allow_empty_concepts,
        log_level=ctx.obj.get("log_level"),
        progress=sys.stderr.isatty(),
    )


def _exhausted(results) -> bool:
    return not all(result.optimal for result in results)


@cli.command()
@_search_options
@click.option("--units-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--baseline", type=click.Choice(ALGORITHMS), default="beam", show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.pass_context
@_handle_errors
def compare(ctx, dataset, units_dir, baseline, jobs, quantile, upper_cutoff, allow_empty_concepts, **options):
    """مقارنة البحث الأمثل بخوارزمية أساس على كل وحدات المجلد"""
    config = _run_config("optimal", options)
    units, runner = _batch(ctx, dataset, units_dir, quantile, upper_cutoff, allow_empty_concepts, jobs, config)
    results = runner.run(units, ["optimal", baseline], classify=True)
    echo = config.echo()
    echo["beam_size"] = config.beam_size
    _emit("ComparisonReport", summarize_comparison(results, baseline, echo))
    if _exhausted(results):
        sys.exit(EXIT_BUDGET)


@cli.command()
@_search_options
@click.option("--units-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--algorithms", default=",".join(ALGORITHMS), show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.pass_context
@_handle_errors
def bench(ctx, dataset, units_dir, algorithms, jobs, quantile, upper_cutoff, allow_empty_concepts, **options):
    """متوسط وانحراف العدادات والزمن لكل خوارزمية على وحدات المجلد"""
    selected: List[str] = []
    for name in (part.strip() for part in algorithms.split(",")):
        if not name:
            continue
        if name not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm: {name}")
        if name not in selected:
            selected.append(name)
    if not selected:
        raise ConfigError("at least one algorithm is required")
    config = _run_config(selected[0], options)
    units, runner = _batch(ctx, dataset, units_dir, quantile, upper_cutoff, allow_empty_concepts, jobs, config)
    results = runner.run(units, selected)
    echo = config.model_dump(mode="json", exclude={"algorithm", "seedless_output"})
    echo["algorithms"] = selected
    _emit("BenchReport", summarize_bench(results, selected, echo))
    if _exhausted(results):
        sys.exit(EXIT_BUDGET)


@cli.command()
@click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--neuron", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--quantile", type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True), default=None)
@click.option("--upper-cutoff", type=float, default=None)
@click.option("--max-length", type=click.IntRange(min=1), default=3, show_default=True)
@click.option("--operators", default="or,and,andnot", show_default=True)
@click.option("--per-sample", is_flag=True, help="إضافة متجهات الكميات لكل عينة")
@click.option("--label", "label_text", default=None, help="تسمية بأسماء المفاهيم لعرض كميات بادئاتها")
@click.option("--allow-empty-concepts", is_flag=True)
@_handle_errors
def stats(dataset, neuron, quantile, upper_cutoff, max_length, operators, per_sample, label_text, allow_empty_concepts):
    """كميات كل مفهوم ومصفوفة الانفصال"""
    try:
        ops = parse_operators(operators)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    if not ops:
        raise ConfigError("at least one operator is required")
    concepts = load_concept_archive(dataset, strict=not allow_empty_concepts)
    mask = load_neuron(neuron, _quantile(quantile), upper_cutoff)
    analyzer = QuantityAnalyzer(concepts, mask, max_length)
    summary = analyzer.analyze()
    report = QuantityReport(
        **summary,
        state_space={
            "concepts": concepts.size,
            "max_length": max_length,
            "operators": len(ops),
            "labels": state_space_size(concepts.size, max_length, len(ops)),
        },
        per_sample=analyzer.per_sample() if per_sample else None,
        label=label_quantities(analyzer, parse_label(label_text, concepts.concept_names)) if label_text else None,
    )
    _emit("QuantityReport", report)


@cli.command()
@click.option("--out", required=True, type=click.Path(file_okay=False), help="مجلد المخرجات")
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--concepts", type=int, default=8, show_default=True)
@click.option("--samples", type=int, default=16, show_default=True)
@click.option("--features", type=int, default=64, show_default=True)
@click.option("--annotation-density", type=float, default=0.5, show_default=True)
@click.option("--overlap-density", type=float, default=0.3, show_default=True)
@click.option("--fire-rate", type=float, default=0.05, show_default=True)
@click.option("--max-concepts-per-feature", type=int, default=3, show_default=True)
@click.option("--planted-length", type=int, default=2, show_default=True)
@click.option("--planted-recall", type=float, default=0.9, show_default=True)
@click.option("--units", type=click.IntRange(min=1), default=1, show_default=True)
@_handle_errors
def gen(out, seed, concepts, samples, features, annotation_density, overlap_density, fire_rate,
        max_concepts_per_feature, planted_length, planted_recall, units):
    """توليد مجموعة مفاهيم اصطناعية ووحدات عصبونية"""
    config = build(
        SynthConfig,
        seed=seed,
        concepts=concepts,
        samples=samples,
        features=features,
        annotation_density=annotation_density,
        overlap_density=overlap_density,
        neuron_fire_rate=fire_rate,
        max_concepts_per_feature=max_concepts_per_feature,
        planted_length=planted_length,
        planted_recall=planted_recall,
    )
    dataset, neurons = SyntheticGenerator(config).generate_units(units)

    out = Path(out)
    unit_dir = out / "units"
    unit_dir.mkdir(parents=True, exist_ok=True)
    dataset_path = out / "concepts.cma"
    write_concept_archive(dataset, dataset_path)
    written = []
    for name, neuron in neurons:
        path = unit_dir / f"{name}.nam"
        write_neuron_mask(neuron, path)
        written.append(str(path))
    logger.info("كُتبت %d وحدة في %s", len(written), unit_dir)
    click.echo(json.dumps({"dataset": str(dataset_path), "units": written}, indent=2))


if __name__ == "__main__":
    cli()
