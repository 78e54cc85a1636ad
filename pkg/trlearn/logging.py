"""Logging and timing of fits and cross-validation runs
"""
import logging
from datetime import datetime, timedelta, timezone
from logging import DEBUG, ERROR, INFO, WARNING
from typing import Callable, Optional

HINT = (INFO + DEBUG) // 2
logging.addLevelName(HINT, "HINT")

_PREFIXES = {INFO: "", HINT: "--> ", DEBUG: "    "}


class _RootLogger(logging.RootLogger):
    def __init__(self, level):
        super().__init__(level)
        self.propagate = False
        _RootLogger.manager = logging.Manager(self)

    def log(
        self,
        level: int,
        msg: str,
        *,
        time: Optional[datetime] = None,
        extra: Optional[dict] = None,
    ) -> datetime:
        now = datetime.now(timezone.utc)
        elapsed = None if time is None else now - time
        super().log(level, msg, extra={**(extra or {}), "elapsed": elapsed})
        return now


def _format_elapsed(elapsed: timedelta) -> str:
    seconds = elapsed.total_seconds()
    if seconds < 60:
        return f"{seconds:.2f}s"
    return str(elapsed).split(".")[0]


class _LogFormatter(logging.Formatter):
    def __init__(self):
        super().__init__("{levelname}: {message}", style="{")

    def format(self, record: logging.LogRecord) -> str:
        prefix = _PREFIXES.get(record.levelno)
        text = record.getMessage()
        if prefix is None:
            text = f"{record.levelname}: {text}"
        else:
            text = prefix + text
        if record.elapsed is not None:
            text += f" ({_format_elapsed(record.elapsed)})"
        return text


def _set_log_file(settings):
    root = settings._root_logger
    name = settings.logpath
    handler = (
        logging.StreamHandler(settings.logfile) if name is None else logging.FileHandler(name)
    )
    handler.setFormatter(_LogFormatter())
    handler.setLevel(root.level)
    if len(root.handlers) > 1:
        raise RuntimeError("trlearn's root logger has more than one handler")
    for old in list(root.handlers):
        root.removeHandler(old)
    root.addHandler(handler)


def _set_log_level(settings, level):
    root = settings._root_logger
    root.setLevel(level)
    (handler,) = root.handlers
    handler.setLevel(level)


_NUMERIC_DEPENDENCIES = ["numpy", "scipy", "numba", "pandas", "anndata", "click", "tqdm"]


def _versions(modules):
    for name in modules:
        try:
            yield name, __import__(name).__version__
        except (ImportError, AttributeError):
            pass


def print_versions(file=None):
    """\
    Versions of trlearn and of the packages its numbers depend on.

    Printed to `file`, by default the log file.
    """
    from ._settings import settings

    modules = ["trlearn"] + _NUMERIC_DEPENDENCIES
    print(
        " ".join(f"{name}=={version}" for name, version in _versions(modules)),
        file=settings.logfile if file is None else file,
    )


def error(
    msg: str,
    *,
    time: Optional[datetime] = None,
    extra: Optional[dict] = None,
) -> datetime:
    """\
    Log `msg` at the given level and return the current time.

    Parameters
    ----------
    msg
        Message to display.
    time
        Start time of the step being reported. The time passed since then
        is appended to `msg`, e.g. ` (0.42s)`.
    extra
        Additional attributes for the log record.

    Returns
    -------
    The current time, to be passed as `time` to a later call.
    """
    from ._settings import settings

    return settings._root_logger.log(ERROR, msg, time=time, extra=extra)


def _level_function(level: int, name: str) -> Callable[..., datetime]:
    def log(msg, *, time=None, extra=None) -> datetime:
        from ._settings import settings

        return settings._root_logger.log(level, msg, time=time, extra=extra)

    log.__name__ = log.__qualname__ = name
    log.__doc__ = error.__doc__
    return log


warning = _level_function(WARNING, "warning")
info = _level_function(INFO, "info")
hint = _level_function(HINT, "hint")
debug = _level_function(DEBUG, "debug")
