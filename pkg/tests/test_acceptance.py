"""One line per acceptance criterion (printed in the terminal summary).

A criterion line reads PASS only if every check behind it passes, including
the checks on the literal fixtures. Claims that the literal fixtures do not
support are kept as strict xfail tests next to passing checks on the
repaired fixtures.
"""
import pytest

from ordlogic.casebook import CHECKS, run_checks

CRITERIA = {
    1: "classification of the introductory sentences",
    2: "non-interpolation block: models, small-model search, strategy relation",
    3: "separations via kround_game and guarded fixpoints",
    4: "windowed evaluator agrees with the naive one",
    5: "encoding round-trips",
    6: "suffix form and normal forms",
    7: "unravelling: hedges, types, game",
    8: "joint-model constructions",
}

_cache: dict[str, object] = {}


def _outcomes(criterion):
    names = [c.name for c in CHECKS if c.criterion == criterion]
    missing = [n for n in names if n not in _cache]
    for o in run_checks(names=missing):
        _cache[o.check.name] = o
    return [_cache[n] for n in names]


def _record(lines, criterion, outcomes):
    ok = all(o.ok for o in outcomes)
    parts = ", ".join(f"{o.check.name}={o.status}" for o in outcomes)
    lines[criterion] = f"criterion {criterion} ({CRITERIA[criterion]}): {'PASS' if ok else 'FAIL'} [{parts}]"
    return ok


def _expected(outcomes):
    return [o for o in outcomes if o.check.expect == "pass"]


def _literal(outcomes):
    return [o for o in outcomes if o.check.expect == "xfail"]


@pytest.mark.parametrize("criterion", [1, 2, 4, 5, 6, 8])
def test_criterion(criterion, acceptance_lines):
    outs = _outcomes(criterion)
    _record(acceptance_lines, criterion, outs)
    bad = [(o.check.name, o.detail) for o in outs if not o.ok]
    assert not bad


def test_criterion_1_is_fast():
    outs = _outcomes(1)
    assert sum(o.seconds for o in outs) < 1.0


def test_criterion_2_search_time():
    o = next(o for o in _outcomes(2) if o.check.name == "thm9-no-small-model")
    assert o.seconds < 120


@pytest.mark.parametrize("criterion", [3, 7])
def test_supported_parts(criterion, acceptance_lines):
    outs = _outcomes(criterion)
    _record(acceptance_lines, criterion, outs)
    bad = [(o.check.name, o.detail) for o in _expected(outs) if not o.ok]
    assert not bad
    if criterion == 3:
        assert sum(o.seconds for o in outs) < 5.0


@pytest.mark.xfail(strict=True, reason="the literal separation fixtures are not bisimilar as claimed")
def test_criterion_3_literal_fixtures():
    outs = _literal(_outcomes(3))
    assert outs and all(o.ok for o in outs), [(o.check.name, o.detail) for o in outs]


@pytest.mark.xfail(strict=True, reason="spoiler wins at the depth frontier of the unravelling")
def test_criterion_7_literal_game_bound():
    outs = _literal(_outcomes(7))
    assert outs and all(o.ok for o in outs), [(o.check.name, o.detail) for o in outs]
