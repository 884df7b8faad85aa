"""Zero tables: TSV / JSONL serialization and digit-wise comparison.

TSV layout::

    # n beta gamma digits=25
    # provenance=computed
    1	10.64819051685409775194069	-0.9510429326052617932842788

Numbers are fixed-point decimals with a set number of significant digits,
rounded half-even, never in exponent notation.  The reader also accepts
two-column ``beta gamma`` rows, numbering them from 1.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, InvalidOperation, localcontext
from pathlib import Path

from .errors import RauxError

PROVENANCES = ("computed", "reference")
DATA_DIR = Path(__file__).with_name("data")


class TableFormatError(RauxError, ValueError):
    """The file cannot be read as a zero table."""


def to_decimal(x) -> Decimal:
    """Exact Decimal value of an mpf, int, str or Decimal."""
    if isinstance(x, Decimal):
        return x
    if isinstance(x, (int, str)):
        return Decimal(x)
    man, exp = abs(x).man_exp  # mpf; unsigned, and the mantissa may be a gmpy2 integer
    man, exp = int(man), int(exp)
    if x < 0:
        man = -man
    if exp >= 0:
        return Decimal(man << exp)
    with localcontext() as dc:
        dc.prec = man.bit_length() + 2 * (-exp) + 10
        return Decimal(man) / (Decimal(2) ** -exp)


def round_sig(x, digits: int) -> Decimal:
    """Round to ``digits`` significant digits, ties to even."""
    d = to_decimal(x)
    if d == 0:
        return Decimal(0).quantize(Decimal(1).scaleb(-(digits - 1)))
    for _ in range(2):
        quantum = Decimal(1).scaleb(d.adjusted() - digits + 1)
        with localcontext() as dc:
            dc.prec = max(28, digits + abs(d.adjusted()) + 5)
            r = d.quantize(quantum, rounding=ROUND_HALF_EVEN)
        if r.adjusted() == d.adjusted():
            return r
        d = r  # rounding carried into a new leading digit
    return r


def format_sig(x, digits: int) -> str:
    return format(round_sig(x, digits), "f")


def sig_digits(text: str) -> int:
    """Significant digits as printed: '10.64' -> 4, '-0.950' -> 3."""
    digits = re.sub(r"[^0-9]", "", text.split("e")[0].split("E")[0]).lstrip("0")
    return max(1, len(digits))


def ulp_at(x: Decimal, digits: int) -> Decimal:
    return Decimal(1).scaleb(x.adjusted() - digits + 1)


def agree(printed: str, value, digits: int) -> bool:
    """Do ``printed`` and ``value`` match to one unit in the ``digits``-th significant place.

    Both sides are rounded to ``digits`` significant digits before the
    comparison; ``digits`` is capped by what ``printed`` carries.
    """
    k = min(digits, sig_digits(printed))
    a = round_sig(Decimal(printed), k)
    b = round_sig(value, k)
    if (a < 0) != (b < 0) and a != 0 and b != 0:
        return False
    return abs(a - b) <= max(ulp_at(a, k), ulp_at(b, k))


@dataclass(frozen=True)
class TableRow:
    n: int
    beta: str
    gamma: str


@dataclass(frozen=True)
class ZeroTable:
    records: tuple
    digits: int
    provenance: str = "computed"
    layout: str = "n beta gamma"

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise TableFormatError(f"unknown provenance {self.provenance!r}")
        prev = None
        for row in self.records:
            if prev is not None and row.n != prev + 1:
                raise TableFormatError(
                    f"row n={row.n} follows n={prev}: indices must increase by one"
                )
            prev = row.n

    def sign_violations(self) -> list:
        """Indices whose beta is not positive or whose gamma is not negative."""
        return [r.n for r in self.records if not (Decimal(r.beta) > 0 and Decimal(r.gamma) < 0)]

    @classmethod
    def from_records(cls, records, digits: int, provenance: str = "computed") -> "ZeroTable":
        rows = tuple(
            TableRow(r.n, format_sig(r.beta, digits), format_sig(r.gamma, digits)) for r in records
        )
        return cls(rows, digits, provenance)

    def to_tsv(self) -> str:
        lines = [f"# n beta gamma digits={self.digits}", f"# provenance={self.provenance}"]
        lines += [f"{r.n}\t{r.beta}\t{r.gamma}" for r in self.records]
        return "\n".join(lines) + "\n"


def _number(text: str, lineno: int) -> str:
    try:
        d = Decimal(text)
    except InvalidOperation:
        raise TableFormatError(f"line {lineno}: {text!r} is not a decimal number") from None
    if not d.is_finite():
        raise TableFormatError(f"line {lineno}: non-finite entry {text!r}")
    return text


def parse_table(text: str) -> ZeroTable:
    """Read a TSV zero table in either the ``n beta gamma`` or the ``beta gamma`` layout."""
    digits = None
    provenance = "reference"
    layout = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = re.search(r"digits\s*=\s*(\d+)", line)
            if m:
                digits = int(m.group(1))
            m = re.search(r"provenance\s*=\s*(\w+)", line)
            if m:
                provenance = m.group(1)
            continue
        fields = line.split()
        kind = {3: "n beta gamma", 2: "beta gamma"}.get(len(fields))
        if kind is None:
            raise TableFormatError(f"line {lineno}: expected 2 or 3 fields, got {len(fields)}")
        if layout is None:
            layout = kind
        elif kind != layout:
            raise TableFormatError(f"line {lineno}: mixes the {kind!r} and {layout!r} layouts")
        if kind == "n beta gamma":
            try:
                n = int(fields[0])
            except ValueError:
                raise TableFormatError(f"line {lineno}: bad index {fields[0]!r}") from None
            if n < 1:
                raise TableFormatError(f"line {lineno}: index must be >= 1")
            beta, gamma = fields[1], fields[2]
        else:
            n = len(rows) + 1
            beta, gamma = fields
        rows.append(TableRow(n, _number(beta, lineno), _number(gamma, lineno)))
    if not rows:
        raise TableFormatError("table has no rows")
    if digits is None:
        digits = max(max(sig_digits(r.beta), sig_digits(r.gamma)) for r in rows)
    return ZeroTable(tuple(rows), digits, provenance, layout)


def record_json(rec, digits: int) -> str:
    """One JSONL line for a ZeroRecord."""
    return json.dumps(
        {
            "n": rec.n,
            "beta": format_sig(rec.beta, digits),
            "gamma": format_sig(rec.gamma, digits),
            "residual": format(round_sig(rec.residual, 6), "e") if rec.residual else "0",
            "digits": rec.digits,
        }
    )


def parse_jsonl(text: str, digits: int | None = None) -> ZeroTable:
    rows = []
    seen_digits = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            rows.append(TableRow(int(obj["n"]), _number(str(obj["beta"]), lineno),
                                 _number(str(obj["gamma"]), lineno)))
        except (ValueError, KeyError, TypeError) as exc:
            raise TableFormatError(f"line {lineno}: {exc}") from None
        seen_digits.append(max(sig_digits(rows[-1].beta), sig_digits(rows[-1].gamma)))
    if not rows:
        raise TableFormatError("table has no rows")
    return ZeroTable(tuple(rows), digits or max(seen_digits), "computed", "jsonl")


def load_any(path) -> ZeroTable:
    """TSV or JSONL, told apart by the first non-blank character."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise TableFormatError(f"{path}: not UTF-8 text") from exc
    head = text.lstrip()[:1]
    return parse_jsonl(text) if head == "{" else parse_table(text)


def bundled(name: str = "zeros_1_50.tsv") -> Path:
    """Path of a table shipped with the package."""
    return DATA_DIR / name
