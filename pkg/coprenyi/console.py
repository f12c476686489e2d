"""Console, logging and progress display for coprenyi.

Everything human-facing goes to standard error through one Rich console, so
standard output carries only the structured records a command produces. Log
records are printed above any live progress bars. The numerical modules log
through this module too, so it sits beside them rather than under the CLI.

For detailed documentation and examples, see docs/console.md
"""

from __future__ import annotations

import logging
import threading
from contextlib import contextmanager
from itertools import count
from logging import WARNING, getLogger
from typing import TYPE_CHECKING, Any

from rich.console import Console
from rich.live import Live
from rich.logging import RichHandler
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TaskID,
    TextColumn,
    TimeElapsedColumn,
    TimeRemainingColumn,
)

if TYPE_CHECKING:
    from collections.abc import Iterator

# stdout is reserved for records
console = Console(stderr=True)

# Worker threads report progress too, so every display call takes this lock
progress_lock = threading.RLock()
progress = Progress(
    SpinnerColumn(),
    TextColumn("[bold blue]{task.description}"),
    BarColumn(),
    MofNCompleteColumn(),
    TimeElapsedColumn(),
    TimeRemainingColumn(),
    console=console,
    expand=True,
)

live_display = Live(
    progress,
    console=console,
    refresh_per_second=10,
    transient=False,  # finished bars stay on screen
    auto_refresh=False,  # refreshed explicitly after each change
)

# Caller-facing identifiers mapped to Rich task ids; the display stops when this empties
_active_tasks: dict[str, TaskID] = {}
_task_counter = count(1)


class LiveDisplayHandler(RichHandler):
    """Rich handler that keeps log lines above the live progress bars."""

    def emit(self, record: logging.LogRecord) -> None:
        """Render a record, refreshing the live display around it when active."""
        with progress_lock:
            rendered = self.render(record)
            if live_display.is_started:
                # Refresh before and after so the bars are redrawn below the new line
                live_display.refresh()
                console.print(rendered)
                live_display.refresh()
            else:
                console.print(rendered)


# -v raises this to INFO, -vv to DEBUG
logging.basicConfig(
    level=WARNING,
    format="%(message)s",
    datefmt="[%X]",
    handlers=[LiveDisplayHandler(console=console, rich_tracebacks=True, show_time=True)],
    force=True,
)

log = getLogger("coprenyi")


def start_live_display() -> None:
    """Start the live display if it is not already running."""
    with progress_lock:
        if not live_display.is_started:
            live_display.start()


def stop_live_display() -> None:
    """Stop the live display once no progress task is left."""
    with progress_lock:
        if live_display.is_started and not _active_tasks:
            live_display.stop()


def create_progress(description: str, total: int = 100, task_id: str | None = None) -> str:
    """Create a new progress bar task.

    Args:
        description: Text shown beside the bar
        total: Number of steps the task will take
        task_id: Optional identifier (a numbered one is generated otherwise)

    Returns:
        Identifier for use with update_progress and complete_progress
    """
    with progress_lock:
        start_live_display()
        # A counter rather than a timestamp: bars created in the same tick stay distinct
        if task_id is None:
            task_id = f"task_{next(_task_counter)}"
        _active_tasks[task_id] = progress.add_task(description, total=total)
        live_display.refresh()
        return task_id


def update_progress(
    task_id: str,
    advance: float | None = None,
    completed: float | None = None,
    description: str | None = None,
    **kwargs: Any,
) -> None:
    """Advance or relabel a progress task.

    Args:
        task_id: Identifier returned by create_progress
        advance: Steps to add
        completed: Absolute number of completed steps
        description: Replacement description
        **kwargs: Passed through to Progress.update
    """
    with progress_lock:
        if task_id not in _active_tasks:
            log.warning("Attempted to update non-existent progress task: %s", task_id)
            return
        # Only forward what the caller set; None would reset Rich's fields
        changes = {
            key: value
            for key, value in (("advance", advance), ("completed", completed), ("description", description))
            if value is not None
        }
        progress.update(_active_tasks[task_id], **changes, **kwargs)
        if live_display.is_started:
            live_display.refresh()


def complete_progress(task_id: str, description: str | None = None) -> None:
    """Fill a progress task, forget it, and stop the display if it was the last one.

    Args:
        task_id: Identifier returned by create_progress
        description: Final description for the finished bar
    """
    with progress_lock:
        if task_id not in _active_tasks:
            log.warning("Attempted to complete non-existent progress task: %s", task_id)
            return
        progress_task_id = _active_tasks.pop(task_id)
        if description is not None:
            progress.update(progress_task_id, description=description)
        # Rich task ids are not list positions once earlier bars exist
        total = next(task.total for task in progress.tasks if task.id == progress_task_id)
        progress.update(progress_task_id, completed=total)
        if live_display.is_started:
            live_display.refresh()
        # No-op while other bars are still running
        stop_live_display()


@contextmanager
def tracked_progress(description: str, total: int, done: str, failed: str) -> Iterator[str]:
    """Run a block under a progress bar that is always completed on exit.

    Args:
        description: Text shown while the block runs
        total: Number of steps the block will report
        done: Final description on success
        failed: Final description when the block raises

    Yields:
        The progress task identifier
    """
    task_id = create_progress(description, total=total)
    try:
        yield task_id
    except BaseException:
        # Completing the bar lets the display stop even when the work failed
        complete_progress(task_id, failed)
        raise
    complete_progress(task_id, done)
