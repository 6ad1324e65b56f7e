#
# Copyright (C) 2026 Spectral Index contributors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
"""Progress bar for seeded instance suites."""
import sys

from types import TracebackType
from typing import Any, Optional, Type

from tqdm import tqdm


class ProgressBar(tqdm):
    """tqdm progress bar that can be driven from a callback."""

    total: Any

    def update_progress(self, completed: float = 1, total: Optional[float] = None) -> None:
        """Move the bar to an absolute position.

        Args:
            completed: Number of instances finished so far.
            total: Total number of instances, if it changed.
        """
        if total is not None and self.total != total:
            self.total = total
        self.update(completed - self.n)


class SuiteProgress:
    """Reports how many seeded instances of a suite have run and how many failed, on stderr."""

    def __init__(self, name: str, total: int, enabled: bool = True) -> None:
        """Initialiser.

        Args:
            name: Label shown in front of the bar.
            total: Number of instances the suite will run.
            enabled: Set to False to keep stderr quiet.
        """
        self.name = name
        self.total = total
        self.enabled = enabled
        self.completed = 0
        self.failures = 0
        self.bar: Optional[ProgressBar] = None

    def __enter__(self) -> "SuiteProgress":
        """Open the bar."""
        if self.enabled:
            self.bar = ProgressBar(total=self.total, desc=self.name, file=sys.stderr, leave=False)
        return self

    def __exit__(
        self,
        exc_type: Optional[Type[BaseException]],
        exc_value: Optional[BaseException],
        traceback: Optional[TracebackType],
    ) -> None:
        """Close the bar."""
        if self.bar is not None:
            self.bar.close()

    def step(self, passed: bool) -> None:
        """Record one finished instance."""
        self.completed += 1
        if not passed:
            self.failures += 1
        if self.bar is not None:
            self.bar.set_postfix(failures=self.failures, refresh=False)
            self.bar.update_progress(completed=self.completed, total=self.total)
