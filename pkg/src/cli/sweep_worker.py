"""Sweep runner that reports progress through Qt signals."""

from typing import Optional

from PySide6.QtCore import QObject, Signal

from ..core.bernoulli_cache import BernoulliTable
from ..core.obstruction import SweepReport, sweep_a2


class SweepWorker(QObject):
    """Runs sweep_a2 and emits progress as rows come back."""

    progress_updated = Signal(int, int)  # rows done, rows total
    sweep_finished = Signal(object)  # SweepReport

    def __init__(
        self,
        m_max: int,
        strategy: str,
        workers: int = 1,
        table: Optional[BernoulliTable] = None,
    ):
        super().__init__()
        self.m_max = m_max
        self.strategy = strategy
        self.workers = workers
        self.table = table

    def run(self) -> SweepReport:
        report = sweep_a2(
            self.m_max,
            self.strategy,
            workers=self.workers,
            table=self.table,
            progress=self.progress_updated.emit,
        )
        self.sweep_finished.emit(report)
        return report
