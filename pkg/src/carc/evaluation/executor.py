"""Subprocess execution of synthesized programs.

Contract: the candidate is run as a script, receives the input grid as JSON
on stdin and must print the output grid as JSON on stdout. Timeouts, crashes
and unreadable output score 1.0 for that pair; the run continues.
"""

import json
import logging
import os
import re
import shutil
import subprocess
import tempfile
from collections.abc import Callable
from pathlib import Path

from pydantic import ValidationError

from carc.config import settings
from carc.errors import ConfigError
from carc.evaluation.metrics import hamming_relative
from carc.evaluation.models import ContractResult, ExecutionResult, ExecutionStatus, PairScore
from carc.grid.models import Grid
from carc.prompts.models import ExecutionLimits, ProgramContract

logger = logging.getLogger(__name__)

_FENCE = re.compile(r"```[\w+-]*[ \t]*\n(.*?)```", re.DOTALL)


def extract_program(response: str) -> str:
    """Source of the last fenced code block, or the whole response when there is none."""
    blocks = _FENCE.findall(response)
    return blocks[-1] if blocks else response


def _memory_limit(memory_mb: int) -> Callable[[], None]:
    def apply() -> None:
        import resource

        limit = memory_mb * 1024 * 1024
        resource.setrlimit(resource.RLIMIT_AS, (limit, limit))
        resource.setrlimit(resource.RLIMIT_CORE, (0, 0))

    return apply


class SubprocessExecutor:
    """Runs candidate programs with ``command`` (default: this interpreter)."""

    def __init__(self, command: list[str] | None = None) -> None:
        self.command = list(command or settings.executor.command)
        if not self.command:
            raise ConfigError("executor command is empty")
        program = self.command[0]
        if shutil.which(program) is None and not Path(program).is_file():
            raise ConfigError(f"executor {program!r} not found")

    def run(self, source: str, grid: Grid, limits: ExecutionLimits) -> ExecutionResult:
        with tempfile.TemporaryDirectory(prefix="carc-") as tmp:
            script = Path(tmp) / "candidate.py"
            script.write_text(source, encoding="utf-8")
            try:
                proc = subprocess.run(
                    [*self.command, str(script)],
                    input=json.dumps(grid.to_list()),
                    capture_output=True,
                    text=True,
                    timeout=limits.wall_clock_seconds,
                    cwd=tmp,
                    preexec_fn=_memory_limit(limits.memory_mb) if os.name == "posix" else None,
                )
            except subprocess.TimeoutExpired:
                logger.debug(f"Candidate timed out after {limits.wall_clock_seconds}s")
                return ExecutionResult(status=ExecutionStatus.TIMEOUT)

        stderr = proc.stderr[-2000:]
        if proc.returncode != 0:
            logger.debug(f"Candidate exited with {proc.returncode}")
            return ExecutionResult(status=ExecutionStatus.CRASH, stderr=stderr)
        if len(proc.stdout.encode("utf-8")) > limits.max_output_bytes:
            return ExecutionResult(status=ExecutionStatus.INVALID_OUTPUT, stderr="output too large")
        try:
            output = Grid.from_list(json.loads(proc.stdout))
        except (ValueError, TypeError, IndexError, ValidationError) as e:
            return ExecutionResult(status=ExecutionStatus.INVALID_OUTPUT, stderr=str(e)[:2000])
        return ExecutionResult(status=ExecutionStatus.OK, output=output, stderr=stderr)


def run_program_contract(
    contract: ProgramContract, executor: SubprocessExecutor | None = None
) -> ContractResult:
    """Run ``contract.candidate`` on every held-out pair and score each output."""
    executor = executor or SubprocessExecutor()
    scores = []
    for pair in contract.held_out:
        result = executor.run(contract.candidate, pair.input, contract.limits)
        hd = hamming_relative(result.output, pair.output)
        scores.append(PairScore(status=result.status, exact=hd == 0.0, hd=hd))
    return ContractResult(pairs=scores)
