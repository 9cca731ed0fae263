"""JSON/CSV output records.

Angles and other reals are written as 17-significant-digit decimal strings
and polynomial coefficients as exact rational strings such as ``"-6/5"``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .closed_form import SolveResult
from .polynomials import RationalPolynomial

SCHEMA_VERSION = "1"


def fmt_real(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def to_jsonable(value: Any) -> Any:
    """Certificate values to JSON scalars/containers, exact where possible."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (float, np.floating)):
        return fmt_real(value)
    if isinstance(value, RationalPolynomial):
        return value.to_strings()
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in value]
    return str(value)


@dataclass
class OutputRecord:
    group: str
    rank: int
    angles: list[str]
    cosines: list[str]
    polynomial: list[str] | None
    log_volume: str
    certificates: dict[str, Any] = field(default_factory=dict)
    provenance: str = "closed_form"
    schema_version: str = SCHEMA_VERSION

    @classmethod
    def from_result(cls, result: SolveResult, provenance: str = "closed_form") -> "OutputRecord":
        return cls(
            group=result.spec.family,
            rank=result.spec.rank,
            angles=[fmt_real(a) for a in result.angles],
            cosines=[fmt_real(c) for c in result.cosines],
            polynomial=None if result.polynomial is None else result.polynomial.to_strings(),
            log_volume=fmt_real(result.log_volume),
            certificates=to_jsonable(result.certificates),
            provenance=provenance,
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "OutputRecord":
        data = json.loads(text)
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {data.get('schema_version')!r}")
        return cls(**data)

    def polynomial_exact(self) -> RationalPolynomial | None:
        if self.polynomial is None:
            return None
        return RationalPolynomial.from_strings(self.polynomial)

    def to_csv(self) -> str:
        ncoef = len(self.polynomial or [])
        header = ["group", "rank", "provenance", "log_volume"]
        header += [f"c{k}" for k in range(ncoef)]
        header += [f"theta_{k + 1}" for k in range(len(self.angles))]
        header += [f"cos_{k + 1}" for k in range(len(self.cosines))]
        row = [self.group, str(self.rank), self.provenance, self.log_volume]
        row += list(self.polynomial or []) + self.angles + self.cosines
        return write_csv([header, row])


def write_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()
