"""Regression corpus of golden values and the runner that checks the library against it.

Corpus files live in ``corpus/*.txt``: UTF-8, one record per block of
``key: value`` lines, blocks separated by blank lines, ``#`` starts a comment.
Required keys are ``scenario``, ``op``, ``expected``, ``tolerance`` and
``provenance``; ``inputs`` holds whitespace-separated ``name=value`` pairs.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable

from .information import (
    asymptotic_ratio,
    family_information,
    lambda_threshold,
    optimum,
    srm_information,
    srm_mud_crossing,
)
from .optimizer import GeneralEnsemble, optimize
from .pyramid import make_pyramid
from .thresholds import alice_bob_information, ck_threshold, critical_disturbance

REQUIRED = ("scenario", "op", "expected", "tolerance", "provenance")


@dataclass(frozen=True)
class GoldenRecord:
    scenario: str
    op: str
    inputs: dict
    expected: float
    tolerance: float
    provenance: str
    source: str = ""


@dataclass(frozen=True)
class GoldenOutcome:
    record: GoldenRecord
    actual: float | None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and abs(self.actual - self.record.expected) <= self.record.tolerance


def _optimized_info(N, lam, M=None, seed=42, restarts=16):
    p = make_pyramid(N, lam)
    return optimize(GeneralEnsemble.from_pyramid(p), M or N + 2, seed=seed, restarts=restarts).info


OPS: dict[str, Callable[..., float]] = {
    "ck_threshold": lambda N, strategy: ck_threshold(N, strategy).D_star,
    "critical_disturbance": critical_disturbance,
    "srm_information": lambda N, lam: srm_information(make_pyramid(N, lam)),
    "family_information": lambda N, lam, T: family_information(make_pyramid(N, lam), T),
    "imax": lambda N, lam: optimum(make_pyramid(N, lam)).Imax,
    "tstar": lambda N, lam: optimum(make_pyramid(N, lam)).Tstar,
    "lambda_threshold": lambda_threshold,
    "asymptotic_ratio": asymptotic_ratio,
    "srm_mud_crossing": srm_mud_crossing,
    "alice_bob_information": alice_bob_information,
    "optimized_information": _optimized_info,
}


def _value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_corpus(text: str, source: str = "") -> list[GoldenRecord]:
    records = []
    for block in text.split("\n\n"):
        fields = {}
        for line in block.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition(":")
            if not sep:
                raise ValueError(f"{source}: malformed line {line!r}")
            fields[key.strip()] = value.strip()
        if not fields:
            continue
        missing = [k for k in REQUIRED if k not in fields]
        if missing:
            raise ValueError(f"{source}: record {fields.get('scenario', '?')} lacks {missing}")
        inputs = {}
        for tok in fields.get("inputs", "").split():
            name, _, val = tok.partition("=")
            inputs[name] = _value(val)
        records.append(GoldenRecord(fields["scenario"], fields["op"], inputs,
                                    float(fields["expected"]), float(fields["tolerance"]),
                                    fields["provenance"], source))
    return records


def corpus_files(directory: Path | None = None) -> list[Path]:
    root = Path(directory) if directory else Path(str(resources.files(__package__) / "corpus"))
    files = sorted(root.glob("*.txt"))
    if not files:
        raise FileNotFoundError(f"no corpus files in {root}")
    return files


def load_corpus(directory: Path | None = None) -> list[GoldenRecord]:
    records = []
    for path in corpus_files(directory):
        records += parse_corpus(path.read_text(encoding="utf-8"), path.name)
    return records


def records_for(op: str, directory: Path | None = None) -> list[GoldenRecord]:
    return [r for r in load_corpus(directory) if r.op == op]


def evaluate(record: GoldenRecord) -> GoldenOutcome:
    fn = OPS.get(record.op)
    if fn is None:
        return GoldenOutcome(record, None, f"unknown op {record.op!r}")
    try:
        actual = float(fn(**record.inputs))
    except Exception as exc:  # report, don't abort the suite
        return GoldenOutcome(record, None, f"{type(exc).__name__}: {exc}")
    if not math.isfinite(actual):
        return GoldenOutcome(record, actual, "non-finite result")
    return GoldenOutcome(record, actual)


def run_golden_suite(directory: Path | None = None, skip_ops: tuple = ()) -> list[GoldenOutcome]:
    return [evaluate(r) for r in load_corpus(directory) if r.op not in skip_ops]


def main() -> int:
    outcomes = run_golden_suite()
    for o in outcomes:
        flag = "PASS" if o.passed else "FAIL"
        detail = o.error or f"{o.actual:.12g} vs {o.record.expected:.12g} (tol {o.record.tolerance:g})"
        print(f"{flag} {o.record.scenario}: {detail}")
    return 0 if all(o.passed for o in outcomes) else 1


if __name__ == "__main__":
    raise SystemExit(main())
