"""Pass/fail lines of the acceptance criteria, printed at the end of the run."""

import time
from contextlib import contextmanager

LINES: list[str] = []


@contextmanager
def criterion(number: int, title: str):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        status = "PASS"
    finally:
        line = f"criterion {number}: {status} {title} ({time.perf_counter() - start:.2f}s)"
        LINES.append(line)
        print(line)
