"""Persistent table of Bernoulli numbers (Milnor-Stasheff convention)."""

import logging
import os
import tempfile
from fractions import Fraction
from typing import Iterable, List, Optional

from .errors import CacheError

logger = logging.getLogger(__name__)

CACHE_TAG = "bernoulli-ms-v1"
CACHE_FILENAME = f"{CACHE_TAG}.tsv"


def tangent_numbers(count: int) -> List[int]:
    """Tangent numbers T_1..T_count (1, 2, 16, 272, ...), integers only."""
    if count <= 0:
        return []
    # Brent-Harvey in-place recurrence; t[k] holds T_{k+1}.
    t = [0] * count
    t[0] = 1
    for k in range(1, count):
        t[k] = k * t[k - 1]
    for k in range(1, count):
        for j in range(k, count):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    return t


class BernoulliTable:
    """B_1..B_max_m with B_m = |B_2m| (modern), so B_1 = 1/6, B_2 = 1/30."""

    def __init__(self, values: Optional[Iterable[Fraction]] = None):
        self._values: List[Fraction] = list(values or [])

    @property
    def max_m(self) -> int:
        return len(self._values)

    def value(self, m: int) -> Fraction:
        """Return B_m, extending the table when m is beyond it."""
        if m > self.max_m:
            self.extend_to(m)
        return self._values[m - 1]

    def extend_to(self, max_m: int):
        """Recompute the table so that it covers 1..max_m."""
        if max_m <= self.max_m:
            return
        # grow geometrically, the recurrence has to restart from scratch
        target = max(max_m, 2 * self.max_m)
        logger.debug("Extending Bernoulli table from %d to %d", self.max_m, target)
        values = []
        for m, t in enumerate(tangent_numbers(target), start=1):
            four_m = 4**m
            values.append(Fraction(2 * m * t, four_m * (four_m - 1)))
        self._values = values

    def to_lines(self) -> List[str]:
        """Serialize in the cache file format, header first."""
        lines = [f"{CACHE_TAG} max_m={self.max_m}"]
        for m, b in enumerate(self._values, start=1):
            lines.append(f"{m}\t{b.numerator}\t{b.denominator}")
        return lines

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "BernoulliTable":
        """Parse the cache file format; raises CacheError on any defect."""
        lines = [line.rstrip("\n") for line in lines if line.strip()]
        if not lines:
            raise CacheError("empty cache file")
        header = lines[0].split()
        if len(header) != 2 or header[0] != CACHE_TAG or not header[1].startswith(
            "max_m="
        ):
            raise CacheError(f"bad cache header: {lines[0]!r}")
        try:
            max_m = int(header[1][len("max_m=") :])
        except ValueError as e:
            raise CacheError(f"bad cache header: {lines[0]!r}") from e
        if len(lines) - 1 != max_m:
            raise CacheError(f"expected {max_m} records, found {len(lines) - 1}")

        values = []
        for expected_m, line in enumerate(lines[1:], start=1):
            fields = line.split("\t")
            if len(fields) != 3:
                raise CacheError(f"bad cache record: {line!r}")
            try:
                m, num, den = (int(f) for f in fields)
            except ValueError as e:
                raise CacheError(f"bad cache record: {line!r}") from e
            if m != expected_m or den <= 0 or num <= 0:
                raise CacheError(f"bad cache record: {line!r}")
            values.append(Fraction(num, den))
        return cls(values)


class BernoulliCacheManager:
    """Loads and saves the Bernoulli table in a cache directory."""

    def __init__(self, cache_dir: str):
        self.cache_dir = cache_dir

    @property
    def cache_path(self) -> str:
        return os.path.join(self.cache_dir, CACHE_FILENAME)

    def load(self) -> Optional[BernoulliTable]:
        """Load the cached table; None when missing or unreadable."""
        if not os.path.exists(self.cache_path):
            return None
        try:
            with open(self.cache_path, "r", encoding="ascii") as f:
                table = BernoulliTable.from_lines(f)
        except (OSError, UnicodeDecodeError, CacheError) as e:
            logger.warning("Ignoring Bernoulli cache %s: %s", self.cache_path, e)
            return None
        logger.info("Loaded %d Bernoulli numbers from %s", table.max_m, self.cache_path)
        return table

    def save(self, table: BernoulliTable) -> bool:
        """Write the table atomically; False when the directory is unwritable."""
        try:
            os.makedirs(self.cache_dir, exist_ok=True)
            fd, tmp_path = tempfile.mkstemp(dir=self.cache_dir, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="ascii", newline="\n") as f:
                f.write("\n".join(table.to_lines()) + "\n")
            os.replace(tmp_path, self.cache_path)
        except OSError as e:
            logger.warning("Could not save Bernoulli cache %s: %s", self.cache_path, e)
            return False
        logger.info("Saved %d Bernoulli numbers to %s", table.max_m, self.cache_path)
        return True

    def table(self, max_m: int) -> BernoulliTable:
        """Cached table covering 1..max_m, computing and saving when needed."""
        table = self.load() or BernoulliTable()
        if table.max_m < max_m:
            table.extend_to(max_m)
            self.save(table)
        return table
