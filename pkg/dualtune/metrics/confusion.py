"""Confusion counts and the recall / false-alarm family of metrics."""

from __future__ import annotations

import numpy as np

from ..errors import ArgumentError
from ..models.results import Confusion, EvalResult
from .ranking import ifa, rank_reports


def _labels(v: np.ndarray, name: str) -> np.ndarray:
    v = np.asarray(v).reshape(-1)
    if v.size and not np.isin(v, (0, 1)).all():
        raise ArgumentError(f"{name} must contain only 0 and 1")
    return v.astype(np.int64)


def confusion(y_true: np.ndarray, y_pred: np.ndarray) -> Confusion:
    t = _labels(y_true, "y_true")
    p = _labels(y_pred, "y_pred")
    if t.shape != p.shape:
        raise ArgumentError(f"length mismatch: {t.shape[0]} labels vs {p.shape[0]} predictions")
    return Confusion(
        TP=int(np.sum((t == 1) & (p == 1))),
        FN=int(np.sum((t == 1) & (p == 0))),
        FP=int(np.sum((t == 0) & (p == 1))),
        TN=int(np.sum((t == 0) & (p == 0))),
    )


def g_measure(pd: float, pf: float) -> float:
    """Harmonic mean of recall and 1 - false alarm rate; 0 when both are 0."""
    spec = 1.0 - pf
    denom = pd + spec
    if denom == 0:
        return 0.0
    return 2.0 * pd * spec / denom


def rates(conf: Confusion) -> tuple[float, float, list[str]]:
    """(pd, pf, undefined) where undefined names any rate with a zero denominator."""
    undefined: list[str] = []
    if conf.positives:
        pd = conf.TP / conf.positives
    else:
        pd = 0.0
        undefined.append("pd")
    if conf.negatives:
        pf = conf.FP / conf.negatives
    else:
        pf = 0.0
        undefined.append("pf")
    return pd, pf, undefined


def precision_f(conf: Confusion) -> tuple[float, float, list[str]]:
    """(prec, f_score, undefined); undefined values are reported as 0."""
    undefined: list[str] = []
    predicted = conf.TP + conf.FP
    if predicted:
        prec = conf.TP / predicted
    else:
        prec = 0.0
        undefined.append("prec")
    pd = conf.TP / conf.positives if conf.positives else 0.0
    if pd + prec > 0:
        f = 2.0 * pd * prec / (pd + prec)
    else:
        f = 0.0
        undefined.append("f")
    return prec, f, undefined


def from_confusion(conf: Confusion, ifa: int = 0, ifa_hit: bool = True) -> EvalResult:
    pd, pf, undefined = rates(conf)
    prec, f, more = precision_f(conf)
    undefined += more
    if pd == 0 and pf == 1:
        undefined.append("g")
    return EvalResult(
        confusion=conf,
        pd=pd,
        pf=pf,
        prec=prec,
        f_score=f,
        g=g_measure(pd, pf),
        ifa=ifa,
        ifa_hit=ifa_hit,
        undefined=undefined,
    )


def evaluate(
    y_true: np.ndarray,
    scores: np.ndarray,
    order: np.ndarray | None = None,
    threshold: float = 0.5,
) -> EvalResult:
    """Confusion metrics plus IFA over the ranked predicted positives."""
    y_true = _labels(y_true, "y_true")
    scores = np.asarray(scores, dtype=float)
    y_pred = (scores > threshold).astype(np.int64)
    conf = confusion(y_true, y_pred)
    ranked = rank_reports(scores, order, labels=y_true)
    count, hit = ifa(ranked.where(ranked.scores > threshold))
    return from_confusion(conf, ifa=count, ifa_hit=hit)
