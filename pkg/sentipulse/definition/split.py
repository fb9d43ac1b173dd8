# standard library imports
from dataclasses import dataclass, field
from typing import FrozenSet, Optional
import datetime


@dataclass(frozen=True)
class SplitSpec:
    """
    Date-based train/test split of a panel. Both ranges are closed intervals of calendar
    dates; rows dated on an excluded date belong to neither part and rows outside of
    [train_start, test_end] are not used at all.

    Parameters
    ----------
    train_start, train_end
        First and last date of the training period.
    test_start, test_end
        First and last date of the testing period; test_start must lie after train_end.
    excluded_dates
        Dates removed from both periods (e.g. market holidays).
    """

    train_start: datetime.date = datetime.date(2023, 2, 1)
    train_end: datetime.date = datetime.date(2023, 3, 7)
    test_start: datetime.date = datetime.date(2023, 3, 8)
    test_end: datetime.date = datetime.date(2023, 3, 19)
    excluded_dates: FrozenSet[datetime.date] = field(
        default_factory=lambda: frozenset([datetime.date(2023, 2, 20)])
    )

    def __post_init__(self):
        if not self.train_start <= self.train_end:
            raise ValueError(
                f"train_start ({self.train_start}) lies after train_end "
                f"({self.train_end})"
            )
        if not self.train_end < self.test_start:
            raise ValueError(
                f"train_end ({self.train_end}) must lie before test_start "
                f"({self.test_start})"
            )
        if not self.test_start <= self.test_end:
            raise ValueError(
                f"test_start ({self.test_start}) lies after test_end ({self.test_end})"
            )
        object.__setattr__(self, "excluded_dates", frozenset(self.excluded_dates))

    def part_of(self, date: datetime.date) -> Optional[str]:
        """
        Returns 'train' or 'test' for a date that belongs to one of the two periods and
        None for excluded dates and dates outside of both periods.
        """
        if date in self.excluded_dates:
            return None
        if self.train_start <= date <= self.train_end:
            return "train"
        if self.test_start <= date <= self.test_end:
            return "test"
        return None

    def as_dict(self) -> dict:
        return {
            "train_start": self.train_start.isoformat(),
            "train_end": self.train_end.isoformat(),
            "test_start": self.test_start.isoformat(),
            "test_end": self.test_end.isoformat(),
            "excluded_dates": sorted(d.isoformat() for d in self.excluded_dates),
        }
