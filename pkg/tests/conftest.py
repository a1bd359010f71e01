import pytest

from star_synth.constraints import ConstraintSet, datum

# Production order a,c,b,e,f,d and consumption order c,a,e,b,d,f on one
# cycle-granular timeline.
SAMPLE_WRITES = {"a": 0, "c": 1, "b": 2, "e": 3, "f": 4, "d": 5}
SAMPLE_READS = {"c": 2, "a": 3, "e": 4, "b": 5, "d": 6, "f": 7}


def make_sample():
    return ConstraintSet.simple([datum(k, SAMPLE_WRITES[k], SAMPLE_READS[k]) for k in SAMPLE_WRITES])


@pytest.fixture
def sample():
    return make_sample()


def pytest_terminal_summary(terminalreporter):
    from verdicts import RESULTS
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        title, ok, secs, why = RESULTS[number]
        line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title} ({secs:.2f}s)"
        terminalreporter.write_line(line + (f": {why}" if why else ""))
