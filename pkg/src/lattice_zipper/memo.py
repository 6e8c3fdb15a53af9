"""Iterative memoised evaluation of recursively defined tables."""

from __future__ import annotations

from typing import Callable, Hashable


def evaluate(key: Hashable, deps: Callable, combine: Callable, memo: dict, budget: int | None = None):
    """Evaluate ``key`` where value(k) = combine(k, [value(d) for d in deps(k)]).

    Uses an explicit stack so deep dependency chains do not hit Python's
    recursion limit.  ``budget`` bounds the stack depth."""
    if key in memo:
        return memo[key]
    stack = [(key, None)]
    on_stack = {key}
    while stack:
        k, ds = stack[-1]
        if ds is None:
            ds = tuple(deps(k))
            stack[-1] = (k, ds)
        pending = [d for d in ds if d not in memo]
        if pending:
            for d in pending:
                if d in on_stack:
                    raise RuntimeError(f"cyclic dependency at {d!r}")
            d = pending[0]
            stack.append((d, None))
            on_stack.add(d)
            if budget is not None and len(stack) > budget:
                from .errors import RecursionBudgetExceeded
                raise RecursionBudgetExceeded(f"evaluation depth exceeded {budget}")
            continue
        memo[k] = combine(k, [memo[d] for d in ds])
        stack.pop()
        on_stack.discard(k)
    return memo[key]
