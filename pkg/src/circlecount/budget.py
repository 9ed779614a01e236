"""Explicit operation/memory budgets with deterministic refusal.

Every potentially expensive operation estimates its cost up front and calls
:meth:`Budget.check_ops` / :meth:`Budget.check_bytes` before doing any work.
Refusal is an error, never a truncated best-effort answer, so results are
reproducible regardless of the machine the code runs on.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError

DEFAULT_MAX_OPS = 10**9
DEFAULT_MAX_KEY_BYTES = 4 * 1024**3  # 4 GiB


@dataclass(frozen=True)
class Budget:
    """Cost ceiling for one operation: elementary ops and key-storage bytes."""

    max_ops: int = DEFAULT_MAX_OPS
    max_key_bytes: int = DEFAULT_MAX_KEY_BYTES

    def check_ops(self, ops: int, what: str) -> None:
        if ops > self.max_ops:
            raise BudgetExceededError(
                f"{what}: estimated {ops} elementary operations exceeds "
                f"budget of {self.max_ops}"
            )

    def check_bytes(self, nbytes: int, what: str) -> None:
        if nbytes > self.max_key_bytes:
            raise BudgetExceededError(
                f"{what}: estimated {nbytes} bytes of key storage exceeds "
                f"budget of {self.max_key_bytes}"
            )


DEFAULT_BUDGET = Budget()
