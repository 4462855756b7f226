"""Slope fitting, prediction-vs-measurement verdicts and report serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .errors import TooFewSamples, UnconvergedFit
from .grid import GridParams
from .predictor import DegenerationConfig, SlopePrediction, ZeroContribution, predict
from .quadrature import EnergySample, sample

SCHEMA_VERSION = "1.0"
CONVENTIONS = (
    "omega density (1/pi) dd^c ln|S|^2 per dA, total mass d; Ric mass 2; "
    "J = (1/(2 pi V)) int |d_z phi|^2 dA; slopes are coefficients of ln(1/|t|)"
)
FIELDS = {"nu": "nu", "futaki": "F0_direct", "futaki_via_J": "F0_via_J", "J": "J", "I0": "I0"}


@dataclass
class FitResult:
    slope: float
    intercept: float
    stepwise_slopes: list[float]
    max_residual: float
    converged: bool
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "stepwise_slopes": list(self.stepwise_slopes),
            "max_residual": self.max_residual,
            "converged": self.converged,
            "notes": list(self.notes),
        }

    @property
    def last_stepwise(self) -> float:
        return self.stepwise_slopes[-1]


@dataclass
class Verdict:
    predicted: float
    measured: float
    abs_error: float
    rel_error: float | None
    passed: bool

    def as_dict(self) -> dict:
        return {
            "predicted": self.predicted,
            "measured": self.measured,
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
            "pass": self.passed,
        }


@dataclass
class SlopeReport:
    config: dict
    prediction: SlopePrediction
    fits: dict[str, FitResult]
    verdicts: dict[str, Verdict]
    environment: dict = field(default_factory=dict)
    samples: list[EnergySample] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.verdicts) and all(v.passed for v in self.verdicts.values())


def fit_slope(samples: Sequence[EnergySample], field_name: str = "nu", convergence_tol: float = 0.01) -> FitResult:
    """Least-squares fit of an energy against ``ln(1/t)`` plus successive-difference slopes.

    ``converged`` requires the last two stepwise slopes to agree within
    ``convergence_tol``.
    """
    attr = FIELDS.get(field_name, field_name)
    good = [s for s in samples if s.error is None and math.isfinite(getattr(s, attr))]
    if len(good) < 3:
        failed = [s.error for s in samples if s.error]
        why = f" (first failure: {failed[0]})" if failed else ""
        raise TooFewSamples(f"need at least 3 valid samples to fit {field_name}, got {len(good)}{why}")
    ts = [s.t for s in good]
    if any(b >= a for a, b in zip(ts, ts[1:])):
        raise ValueError("samples must have strictly decreasing t")
    x = np.array([math.log(1.0 / t) for t in ts])
    y = np.array([getattr(s, attr) for s in good])
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + intercept)
    steps = list(np.diff(y) / np.diff(x))
    notes = []
    if len(good) < len(samples):
        notes.append(f"{len(samples) - len(good)} failed sample(s) excluded")
    converged = abs(steps[-1] - steps[-2]) < convergence_tol
    if not converged:
        notes.append(f"last stepwise slopes differ by {abs(steps[-1] - steps[-2]):.3g}")
    return FitResult(
        slope=float(slope),
        intercept=float(intercept),
        stepwise_slopes=[float(s) for s in steps],
        max_residual=float(np.max(np.abs(resid))),
        converged=bool(converged),
        notes=notes,
    )


def quadrature_health(samples: Sequence[EnergySample], d: int, volume_tol: float = 1e-5, route_tol: float = 1e-5) -> list[str]:
    """Self-consistency problems of the samples (volume drift, Futaki route disagreement)."""
    problems = []
    for s in samples:
        if s.error is not None:
            problems.append(f"t={s.t:.6g}: {s.error}")
            continue
        if abs(s.volume - d) > volume_tol * d:
            problems.append(f"t={s.t:.6g}: volume {s.volume:.10g} differs from {d}")
        if abs(s.F0_direct - s.F0_via_J) > route_tol * max(1.0, abs(s.F0_direct)):
            problems.append(f"t={s.t:.6g}: Futaki routes differ by {abs(s.F0_direct - s.F0_via_J):.3g}")
    return problems


def _verdict(predicted: float, measured: float, tolerance: float, abs_floor: float) -> Verdict:
    err = abs(measured - predicted)
    if predicted == 0:
        rel = None if err else 0.0
        ok = abs(measured) < abs_floor
    else:
        rel = err / abs(predicted)
        ok = rel <= tolerance
    return Verdict(float(predicted), float(measured), float(err), rel, bool(ok))


def compare(
    prediction: SlopePrediction,
    fits: dict[str, FitResult],
    tolerance: float = 0.03,
    override_unconverged: bool = False,
    abs_floor: float = 0.02,
    **report_fields,
) -> SlopeReport:
    """Verdicts use the last stepwise slope of each fit.

    A zero prediction passes when ``|measured| < abs_floor``; otherwise the
    relative error must not exceed ``tolerance``.
    """
    if not override_unconverged:
        bad = [name for name, f in fits.items() if not f.converged]
        if bad:
            notes = list(dict.fromkeys(n for name in bad for n in fits[name].notes))
            if len(notes) > 4:
                notes = notes[:4] + [f"{len(notes) - 4} more"]
            detail = "; ".join(notes) or "stepwise slopes unstable"
            raise UnconvergedFit(f"unconverged fit(s) {', '.join(bad)}: {detail}")
    targets = {"nu": prediction.mabuchi_coefficient, "futaki": prediction.futaki_coefficient}
    verdicts = {
        name: _verdict(float(targets[name]), fit.last_stepwise, tolerance, abs_floor)
        for name, fit in fits.items()
        if name in targets
    }
    return SlopeReport(prediction=prediction, fits=fits, verdicts=verdicts, **{"config": {}, **report_fields})


def default_schedule(points: int = 5, start: float = 1.0, stop: float = 3.0) -> list[float]:
    return [float(10.0 ** -e) for e in np.linspace(start, stop, points)]


def verify(
    config: DegenerationConfig,
    t_schedule: Sequence[float] | None = None,
    grid_params: GridParams | None = None,
    tolerance: float = 0.03,
    override_unconverged: bool = False,
    convergence_tol: float = 0.01,
    t_min: float | None = None,
) -> SlopeReport:
    """Predict, measure along ``t_schedule`` and compare."""
    grid_params = grid_params or GridParams()
    ts = list(t_schedule) if t_schedule is not None else default_schedule()
    prediction = predict(config)
    samples = sample(config, ts, grid_params, t_min=t_min)
    fits = {
        "nu": fit_slope(samples, "nu", convergence_tol),
        "futaki": fit_slope(samples, "futaki", convergence_tol),
    }
    health = quadrature_health(samples, config.d)
    if health:
        for f in fits.values():
            f.converged = False
            f.notes.extend(health)
    environment = {
        "grid": grid_params.as_dict(),
        "t_schedule": ts,
        "t_min": t_min if t_min is not None else min(ts),
        "tolerance": tolerance,
        "convergence_tol": convergence_tol,
        "abs_floor": 0.02,
        "override_unconverged": override_unconverged,
        "kernel_backend": kernels.BACKEND,
        "conventions": CONVENTIONS,
    }
    return compare(
        prediction,
        fits,
        tolerance,
        override_unconverged,
        config=config.digest(),
        environment=environment,
        samples=samples,
    )


# serialisation ---------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x + 0.0, ".17g")  # + 0.0 folds -0.0 into 0.0
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _emit(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_emit(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_emit(v) for v in obj) + "]"
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return _emit(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON text: insertion-ordered keys, floats with 17 significant digits."""
    return _emit(obj)


def report_to_dict(report: SlopeReport, timing: bool = False) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "config": report.config,
        "prediction": report.prediction.as_dict(),
        "fits": {k: v.as_dict() for k, v in report.fits.items()},
        "verdicts": {k: v.as_dict() for k, v in report.verdicts.items()},
        "environment": report.environment,
        "samples": [s.as_dict(timing) for s in report.samples],
        "pass": report.passed,
    }


def _csv_num(x) -> str:
    if x is None:
        return ""
    return _fmt_float(float(x)) if math.isfinite(float(x)) else "nan"


def serialize_report(report: SlopeReport, fmt: str = "json", timing: bool = False) -> bytes:
    """Serialise a report as JSON (schema-versioned) or CSV.

    Wall times are left out of JSON unless ``timing`` is set, so repeated runs
    produce identical bytes; CSV always carries them in ``wall_ms``.
    """
    if fmt == "json":
        return (dumps(report_to_dict(report, timing)) + "\n").encode()
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "functional", "value", "volume", "wall_ms"])
    for s in report.samples:
        wall = None if s.wall_time is None else 1000.0 * s.wall_time
        for name in ("nu", "futaki"):
            w.writerow([_csv_num(s.t), name, _csv_num(getattr(s, FIELDS[name])), _csv_num(s.volume), _csv_num(wall)])
    for name in ("nu", "futaki"):
        v = report.verdicts.get(name)
        if v is None:
            continue
        w.writerow(["summary", f"{name}_predicted", _csv_num(v.predicted), "", ""])
        w.writerow(["summary", f"{name}_measured", _csv_num(v.measured), "", ""])
        w.writerow(["summary", f"{name}_pass", "1" if v.passed else "0", "", ""])
    w.writerow(["summary", "overall_pass", "1" if report.passed else "0", "", ""])
    return buf.getvalue().encode()


def _num(x):
    return math.nan if x is None else x


def parse_report(data: bytes | str) -> SlopeReport:
    doc = json.loads(data)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {doc.get('schema_version')!r}")
    pr = doc["prediction"]
    prediction = SlopePrediction(
        futaki_coefficient=Fraction(pr["futaki_exact"]),
        mabuchi_coefficient=Fraction(pr["mabuchi_exact"]),
        global_futaki_term=Fraction(pr["global_futaki_term"]),
        per_zero=tuple(
            ZeroContribution(
                z["zero_id"], z["chart"], complex(*z["location"]), Fraction(z["mabuchi"]), Fraction(z["futaki"])
            )
            for z in pr["per_zero"]
        ),
    )
    fits = {k: FitResult(**v) for k, v in doc["fits"].items()}
    verdicts = {
        k: Verdict(v["predicted"], v["measured"], v["abs_error"], v["rel_error"], v["pass"])
        for k, v in doc["verdicts"].items()
    }
    samples = [
        EnergySample(
            t=s["t"],
            F0_direct=_num(s["F0_direct"]),
            F0_via_J=_num(s["F0_via_J"]),
            J=_num(s["J"]),
            I0=_num(s["I0"]),
            nu=_num(s["nu"]),
            volume=_num(s["volume"]),
            wall_time=s["wall_time"],
            error=s["error"],
        )
        for s in doc["samples"]
    ]
    return SlopeReport(doc["config"], prediction, fits, verdicts, doc["environment"], samples)
