"""Confusion matrices, per-class and macro precision/recall/F1, sweeps.

Conventions: the political class is positive; precision = tp/(tp+fp),
recall = tp/(tp+fn); any 0/0 is defined as 0; macro values are the
unweighted mean of the two per-class values. Displayed numbers are
rounded to two decimals, half away from zero; machine outputs keep
full precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from agora.corpus import NON_POLITICAL, POLITICAL
from agora.sml import ProbThreshold, TrainedModel, predict_proba


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvalReport:
    political: ClassMetrics
    non_political: ClassMetrics
    macro: ClassMetrics
    support: dict[str, int]
    confusion: ConfusionMatrix


@dataclass(frozen=True)
class GridCell:
    model_name: str
    mode: str
    eval_set: str
    f1_political: float
    f1_macro: float
    report: EvalReport | None = None
    error: str | None = None


def confusion(gold, pred) -> ConfusionMatrix:
    """Count tp/fp/fn/tn with political as the positive class."""
    gold = list(gold)
    pred = list(pred)
    if len(gold) != len(pred) or not gold:
        raise EvaluationError(
            f"gold and pred must be equal-length, non-empty (got {len(gold)} vs {len(pred)})"
        )
    tp = fp = fn = tn = 0
    for g, p in zip(gold, pred):
        if p == POLITICAL:
            if g == POLITICAL:
                tp += 1
            else:
                fp += 1
        else:
            if g == POLITICAL:
                fn += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, fp=fp, fn=fn, tn=tn)


def _prf(tp: int, fp: int, fn: int) -> ClassMetrics:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return ClassMetrics(precision=precision, recall=recall, f1=f1)


def class_metrics(cm: ConfusionMatrix, positive: str = POLITICAL) -> ClassMetrics:
    """Precision/recall/F1 for one class; the negative class swaps roles."""
    if positive == POLITICAL:
        return _prf(cm.tp, cm.fp, cm.fn)
    return _prf(cm.tn, cm.fn, cm.fp)


def macro_report(cm: ConfusionMatrix) -> EvalReport:
    """Both classes' metrics plus their unweighted means."""
    pol = class_metrics(cm, POLITICAL)
    non = class_metrics(cm, NON_POLITICAL)
    macro = ClassMetrics(
        precision=(pol.precision + non.precision) / 2,
        recall=(pol.recall + non.recall) / 2,
        f1=(pol.f1 + non.f1) / 2,
    )
    support = {POLITICAL: cm.tp + cm.fn, NON_POLITICAL: cm.tn + cm.fp}
    return EvalReport(political=pol, non_political=non, macro=macro, support=support, confusion=cm)


def evaluate(gold, pred) -> EvalReport:
    return macro_report(confusion(gold, pred))


DEFAULT_PROB_GRID = (0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40)


def sweep_prob_threshold(
    model: TrainedModel, dataset, grid=DEFAULT_PROB_GRID
) -> tuple[float, list[tuple[float, float]]]:
    """Macro F1 per probability threshold over (FeatureVector, label) pairs.

    Returns the best threshold (ties to the smallest) and the full
    per-threshold table.
    """
    pairs = list(dataset)
    grid = list(grid)
    if not grid or not pairs:
        raise EvaluationError("need a non-empty grid and dataset")
    gold = [lab for _, lab in pairs]
    probas = [predict_proba(model, vec) for vec, _ in pairs]
    table = []
    for p in sorted(grid):
        t = ProbThreshold(p)
        pred = [POLITICAL if pr >= t.p else NON_POLITICAL for pr in probas]
        table.append((p, macro_report(confusion(gold, pred)).macro.f1))
    best_p = max(table, key=lambda row: (row[1], -row[0]))[0]
    return best_p, table


def round_display(x: float, places: int = 2) -> float:
    """Round half away from zero for table display."""
    q = Decimal(1).scaleb(-places)
    return float(Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_UP))


def format_cell(f1_political: float, f1_macro: float) -> str:
    """Render one benchmark-grid cell, e.g. ``0.76 [0.79]``."""
    return f"{round_display(f1_political):.2f} [{round_display(f1_macro):.2f}]"
