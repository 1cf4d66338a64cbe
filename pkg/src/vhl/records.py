"""Verification records shared by every checking routine."""

from __future__ import annotations


class CheckRecord:
    """Outcome of one exact comparison.

    ``inputs``, ``lhs`` and ``rhs`` may be given as zero-argument callables;
    they are rendered to text on first access, so passing checks in large
    batches never pay for formatting unless a report asks for it.
    """

    __slots__ = ("name", "_inputs", "_lhs", "_rhs", "passed")

    def __init__(self, name: str, inputs, lhs, rhs, passed: bool):
        self.name = name
        self._inputs = inputs
        self._lhs = lhs
        self._rhs = rhs
        self.passed = bool(passed)

    @staticmethod
    def _text(value) -> str:
        return value() if callable(value) else str(value)

    @property
    def inputs(self) -> str:
        if not isinstance(self._inputs, str):
            self._inputs = self._text(self._inputs)
        return self._inputs

    @property
    def lhs(self) -> str:
        if not isinstance(self._lhs, str):
            self._lhs = self._text(self._lhs)
        return self._lhs

    @property
    def rhs(self) -> str:
        if not isinstance(self._rhs, str):
            self._rhs = self._text(self._rhs)
        return self._rhs

    def line(self) -> str:
        if self.passed:
            return f"PASS {self.name} {self.inputs}"
        return f"FAIL {self.name} {self.inputs} lhs={self.lhs} rhs={self.rhs}"

    def as_dict(self) -> dict:
        return {"name": self.name, "inputs": self.inputs, "lhs": self.lhs, "rhs": self.rhs, "pass": self.passed}

    def __repr__(self):
        return f"CheckRecord({self.line()!r})"


def record(name: str, inputs, lhs, rhs) -> CheckRecord:
    """Compare two values with ``==``; their text is produced lazily from ``repr``."""
    return CheckRecord(name, inputs, lambda: repr(lhs), lambda: repr(rhs), lhs == rhs)
