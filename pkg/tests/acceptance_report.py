"""Collects one pass/fail line per acceptance criterion for the terminal
summary printed after the run."""

RESULTS: list[tuple[int, str, bool]] = []


def record(criterion: int, description: str, ok: bool) -> None:
    RESULTS.append((criterion, description, ok))
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {criterion}: {status} — {description}")
