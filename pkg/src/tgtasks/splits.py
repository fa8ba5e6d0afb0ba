"""Chronological train/validation/test partitioning of a snapshot sequence.

Periodic tasks split on whole-period boundaries (default 40/4/4 periods);
everything else splits fractionally (default 80/10/10). Fractional cut
points use floor for train and validation with the remainder going to test,
so the test range never falls below its nominal share.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor


@dataclass(frozen=True)
class SplitIndex:
    """Timestep ranges train [0, a), val [a, b), test [b, T)."""

    train_end: int
    val_end: int
    num_timesteps: int

    def __post_init__(self) -> None:
        a, b, t = self.train_end, self.val_end, self.num_timesteps
        if not 0 < a < b <= t:
            raise ValueError(f"need 0 < train_end < val_end <= T, got ({a}, {b}, {t})")

    @property
    def train(self) -> range:
        return range(0, self.train_end)

    @property
    def val(self) -> range:
        return range(self.train_end, self.val_end)

    @property
    def test(self) -> range:
        return range(self.val_end, self.num_timesteps)

    @property
    def evaluated(self) -> range:
        """Validation plus test: every timestep the protocol scores."""
        return range(self.train_end, self.num_timesteps)


def split_periods(
    T: int, k: int, n: int, train_p: int, val_p: int, test_p: int
) -> SplitIndex:
    """Allocate whole periods (length k*n) to each range."""
    if min(train_p, val_p, test_p) < 1:
        raise ValueError("each range needs at least one period")
    period = k * n
    if period < 1:
        raise ValueError(f"invalid period length k*n = {period}")
    if (train_p + val_p + test_p) * period != T:
        raise ValueError(
            f"T={T} is not {train_p}+{val_p}+{test_p} periods of length {period}"
        )
    return SplitIndex(train_p * period, (train_p + val_p) * period, T)


def split_fraction(T: int, f_train: float = 0.8, f_val: float = 0.1) -> SplitIndex:
    """Floor-based fractional split; test takes the remainder.

    Fractions are interpreted via their decimal literal (``0.8`` means
    exactly 8/10) so cut points never drift on binary rounding.
    """
    if T < 3:
        raise ValueError(f"need T >= 3 to split, got {T}")
    a = floor(Fraction(str(f_train)) * T)
    b = a + floor(Fraction(str(f_val)) * T)
    if a < 1 or b <= a or b >= T:
        raise ValueError(
            f"split of T={T} with fractions ({f_train}, {f_val}) leaves an empty range"
        )
    return SplitIndex(a, b, T)
