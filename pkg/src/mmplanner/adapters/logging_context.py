"""Run-scoped log attributes.

The CLI opens a scope per command and the bench runner one per scenario and
strategy; ``StructuredLogHandler`` merges the active attributes into every
record it converts. Records logged by the planner inside ``bench`` therefore
carry ``command``, ``scenario_id`` and ``strategy`` without the planner
knowing about any of them.
"""

from collections.abc import Generator, Mapping
from contextlib import contextmanager
from contextvars import ContextVar
from types import MappingProxyType

from mmplanner.core.logs import LogAttribute

Attributes = Mapping[str, LogAttribute]

_EMPTY: Attributes = MappingProxyType({})

_scope: ContextVar[Attributes] = ContextVar("mmplanner_log_scope", default=_EMPTY)


def _push(attrs: Mapping[str, LogAttribute]) -> Attributes:
    return MappingProxyType({**_scope.get(), **attrs})


def get_log_context() -> dict[str, LogAttribute]:
    """Active attributes as a fresh dict; the handler's context provider.

    Example:
        >>> set_log_context(scenario_id="fig5", seed=1)
        >>> get_log_context()
        {'scenario_id': 'fig5', 'seed': 1}
        >>> clear_log_context()
    """
    return dict(_scope.get())


def set_log_context(**attrs: LogAttribute) -> None:
    """Replace the active attributes."""
    _scope.set(MappingProxyType(dict(attrs)))


def update_log_context(**attrs: LogAttribute) -> None:
    """Add to the active attributes; later values win.

    Example:
        >>> set_log_context(command="bench")
        >>> update_log_context(scenario_id="fig2a")
        >>> get_log_context()
        {'command': 'bench', 'scenario_id': 'fig2a'}
        >>> clear_log_context()
    """
    _scope.set(_push(attrs))


def clear_log_context() -> None:
    """Drop every active attribute."""
    _scope.set(_EMPTY)


@contextmanager
def log_context(**attrs: LogAttribute) -> Generator[None]:
    """Scope attributes to a block, restoring the outer ones on exit.

    Example:
        >>> with log_context(scenario_id="fig5"):
        ...     with log_context(strategy="gbfs"):
        ...         inner = get_log_context()
        >>> inner
        {'scenario_id': 'fig5', 'strategy': 'gbfs'}
        >>> get_log_context()
        {}
    """
    token = _scope.set(_push(attrs))
    try:
        yield
    finally:
        _scope.reset(token)
