"""Leave-one-out evaluation, per-class reporting, and the resolution sweep.

Every sample is held out once: the image is resized to the working
resolution, the requested feature extracted, a model trained on all other
samples, and the held-out sample predicted. Accuracies are kept as exact
integer ratios; rendering to percent (one decimal, round-half-up, optional
decimal comma) happens only at the output boundary.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .classifier import (
    LABEL_ADULTERATED,
    LABEL_NORMAL,
    SolverConfig,
    TrainingSet,
    decision_value,
    predict,
    train_csvc,
)
from .features import Comparator, FeatureKind, extract_feature
from .imagecore import GrayImage, Resolution, resize_bilinear

# 4:3 sweep grid from 50x37 up to the default working resolution 300x225
DEFAULT_SWEEP_RESOLUTIONS = tuple(
    Resolution(w, h)
    for w, h in (
        (50, 37),
        (75, 56),
        (100, 75),
        (125, 94),
        (150, 113),
        (175, 131),
        (200, 150),
        (225, 169),
        (250, 188),
        (275, 207),
        (300, 225),
    )
)
DEFAULT_RESOLUTION = Resolution(300, 225)


@dataclass(eq=False)
class DatasetEntry:
    sample_id: str
    image: GrayImage
    label: int  # +1 adulterated, -1 normal
    group: int  # 1 or 2

    def __post_init__(self):
        if not self.sample_id:
            raise ValueError("sample id must be non-empty")
        if self.label not in (LABEL_ADULTERATED, LABEL_NORMAL):
            raise ValueError("label must be +1 or -1")
        if self.group not in (1, 2):
            raise ValueError("group must be 1 or 2")


@dataclass(eq=False)
class LabeledDataset:
    entries: tuple[DatasetEntry, ...]

    def __post_init__(self):
        self.entries = tuple(self.entries)
        if len(self.entries) < 3:
            raise ValueError("dataset needs at least 3 entries")
        seen = set()
        for e in self.entries:
            if e.sample_id in seen:
                raise ValueError(f"duplicate sample id {e.sample_id!r}")
            seen.add(e.sample_id)
        labels = {e.label for e in self.entries}
        if labels != {LABEL_ADULTERATED, LABEL_NORMAL}:
            raise ValueError("dataset must contain both labels")

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class FoldResult:
    held_out_id: str
    true_label: int
    predicted_label: int
    decision: float


@dataclass(eq=False)
class EvalReport:
    """Aggregate of one leave-one-out run.

    `confusion` rows are true classes in order (normal, adulterated),
    columns the predicted classes in the same order.
    """

    feature_kind: FeatureKind
    n: int
    correct: int
    confusion: np.ndarray
    misclassified_ids: tuple[str, ...]

    @property
    def global_accuracy(self) -> float:
        return self.correct / self.n

    @property
    def normal_total(self) -> int:
        return int(self.confusion[0].sum())

    @property
    def adulterated_total(self) -> int:
        return int(self.confusion[1].sum())

    @property
    def normal_accuracy(self) -> float | None:
        total = self.normal_total
        return int(self.confusion[0, 0]) / total if total else None

    @property
    def adulterated_accuracy(self) -> float | None:
        total = self.adulterated_total
        return int(self.confusion[1, 1]) / total if total else None


@dataclass(frozen=True)
class SweepRow:
    resolution: Resolution
    n: int
    lbp_correct: int
    gray_correct: int
    concat_correct: int

    @property
    def acc_lbp(self) -> float:
        return self.lbp_correct / self.n

    @property
    def acc_gray(self) -> float:
        return self.gray_correct / self.n

    @property
    def acc_concat(self) -> float:
        return self.concat_correct / self.n


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]


def render_percent(numerator: int, denominator: int, decimal_comma: bool = False) -> str:
    """Exact ratio rendered as a percent with one decimal, round-half-up.

    Computed in integer tenths of a percent so rendering never depends on
    floating point: 57/59 -> "96.6%", 19/20 -> "95.0%".
    """
    if denominator <= 0:
        raise ValueError("denominator must be positive")
    tenths = (2000 * numerator + denominator) // (2 * denominator)
    separator = "," if decimal_comma else "."
    return f"{tenths // 10}{separator}{tenths % 10}%"


def build_report(folds: Sequence[FoldResult], kind: FeatureKind) -> EvalReport:
    """Aggregate fold outcomes into counts, confusion matrix and id list."""
    if not folds:
        raise ValueError("cannot build a report from zero folds")
    confusion = np.zeros((2, 2), dtype=np.int64)
    misclassified = []
    for fold in folds:
        row = 0 if fold.true_label == LABEL_NORMAL else 1
        col = 0 if fold.predicted_label == LABEL_NORMAL else 1
        confusion[row, col] += 1
        if fold.predicted_label != fold.true_label:
            misclassified.append(fold.held_out_id)
    return EvalReport(
        feature_kind=FeatureKind(kind),
        n=len(folds),
        correct=int(np.trace(confusion)),
        confusion=confusion,
        misclassified_ids=tuple(misclassified),
    )


def loocv_folds(
    data: LabeledDataset,
    kind: FeatureKind,
    target: Resolution = DEFAULT_RESOLUTION,
    cmp: Comparator = Comparator.STRICT_GREATER,
    cfg: SolverConfig | None = None,
) -> tuple[FoldResult, ...]:
    """One FoldResult per dataset entry, in dataset order.

    Images are resized from their originals inside the run, so the target
    resolution is a parameter of the experiment, not of the dataset.
    Features are pure functions of each image and are computed once.
    """
    if target.width < 3 or target.height < 3:
        raise ValueError("evaluation resolutions must be at least 3x3")
    kind = FeatureKind(kind)
    cfg = cfg if cfg is not None else SolverConfig()
    vectors = [
        extract_feature(resize_bilinear(e.image, target), kind, cmp) for e in data.entries
    ]
    folds = []
    for i, entry in enumerate(data.entries):
        samples = [
            (vectors[j], e.label) for j, e in enumerate(data.entries) if j != i
        ]
        try:
            training = TrainingSet.from_samples(samples)
        except ValueError as exc:
            raise ValueError(
                f"fold holding out {entry.sample_id!r} is untrainable: {exc}"
            ) from None
        model = train_csvc(training, cfg)
        folds.append(
            FoldResult(
                held_out_id=entry.sample_id,
                true_label=entry.label,
                predicted_label=predict(model, vectors[i]),
                decision=decision_value(model, vectors[i]),
            )
        )
    return tuple(folds)


def loocv(
    data: LabeledDataset,
    kind: FeatureKind,
    target: Resolution = DEFAULT_RESOLUTION,
    cmp: Comparator = Comparator.STRICT_GREATER,
    cfg: SolverConfig | None = None,
) -> EvalReport:
    """Leave-one-out cross-validation at one resolution and feature kind."""
    return build_report(loocv_folds(data, kind, target, cmp, cfg), kind)


def resolution_sweep(
    data: LabeledDataset,
    resolutions: Sequence[Resolution] = DEFAULT_SWEEP_RESOLUTIONS,
    cmp: Comparator = Comparator.STRICT_GREATER,
    cfg: SolverConfig | None = None,
) -> SweepReport:
    """Leave-one-out accuracy of all three feature kinds per resolution."""
    if not resolutions:
        raise ValueError("at least one resolution is required")
    if len(set(resolutions)) != len(resolutions):
        raise ValueError("duplicate resolutions are not allowed")
    rows = []
    for res in resolutions:
        per_kind = {
            kind: loocv(data, kind, res, cmp, cfg)
            for kind in (FeatureKind.LBP, FeatureKind.GRAY, FeatureKind.CONCAT)
        }
        rows.append(
            SweepRow(
                resolution=res,
                n=per_kind[FeatureKind.LBP].n,
                lbp_correct=per_kind[FeatureKind.LBP].correct,
                gray_correct=per_kind[FeatureKind.GRAY].correct,
                concat_correct=per_kind[FeatureKind.CONCAT].correct,
            )
        )
    return SweepReport(tuple(rows))


def _class_block(correct: int, total: int, decimal_comma: bool) -> dict:
    return {
        "correct": correct,
        "total": total,
        "accuracy": correct / total if total else None,
        "percent": render_percent(correct, total, decimal_comma) if total else None,
    }


def report_to_json(report: EvalReport, decimal_comma: bool = False) -> str:
    obj = {
        "feature_kind": report.feature_kind.value,
        "n": report.n,
        "correct": report.correct,
        "global_accuracy": report.global_accuracy,
        "global_percent": render_percent(report.correct, report.n, decimal_comma),
        "per_class": {
            "normal": _class_block(
                int(report.confusion[0, 0]), report.normal_total, decimal_comma
            ),
            "adulterated": _class_block(
                int(report.confusion[1, 1]), report.adulterated_total, decimal_comma
            ),
        },
        "confusion": report.confusion.tolist(),
        "misclassified_ids": list(report.misclassified_ids),
    }
    return json.dumps(obj, indent=2) + "\n"


def report_to_table(report: EvalReport, decimal_comma: bool = False) -> str:
    """One-row comma-separated summary of an evaluation report."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["kind", "n", "correct", "global", "normal", "adulterated", "misclassified"]
    )
    normal = (
        render_percent(int(report.confusion[0, 0]), report.normal_total, decimal_comma)
        if report.normal_total
        else ""
    )
    adulterated = (
        render_percent(int(report.confusion[1, 1]), report.adulterated_total, decimal_comma)
        if report.adulterated_total
        else ""
    )
    writer.writerow(
        [
            report.feature_kind.value,
            report.n,
            report.correct,
            render_percent(report.correct, report.n, decimal_comma),
            normal,
            adulterated,
            ";".join(report.misclassified_ids),
        ]
    )
    return buf.getvalue()


def sweep_to_json(report: SweepReport, decimal_comma: bool = False) -> str:
    rows = []
    for row in report.rows:
        rows.append(
            {
                "width": row.resolution.width,
                "height": row.resolution.height,
                "n": row.n,
                "lbp": _class_block(row.lbp_correct, row.n, decimal_comma),
                "gray": _class_block(row.gray_correct, row.n, decimal_comma),
                "concat": _class_block(row.concat_correct, row.n, decimal_comma),
            }
        )
    return json.dumps({"rows": rows}, indent=2) + "\n"


def sweep_to_table(report: SweepReport) -> str:
    """Comma-separated sweep table: width,height,acc_lbp,acc_gray,acc_concat."""
    lines = ["width,height,acc_lbp,acc_gray,acc_concat"]
    for row in report.rows:
        lines.append(
            f"{row.resolution.width},{row.resolution.height},"
            f"{row.acc_lbp!r},{row.acc_gray!r},{row.acc_concat!r}"
        )
    return "\n".join(lines) + "\n"
