"""Collects the one-line verdicts printed by the acceptance tests."""

LINES: list[str] = []


def record(number, description, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {number} {description}" + (f"  ({detail})" if detail else "")
    LINES.append(line)
    print(line)
    return ok
