import pytest

from hpdic.referential import PropertyRule, Referential, ReferentialError, builtin_referential, format_rule, parse_rules, rules_using
from hpdic.terms import Struct, Var

RULE = """
rule rightTrPerp granularity low
  premises { perp(line(L1), line(L2)). triangle(A, B, C). }
  guards { on(A, L1). on(B, L1). on(A, L2). on(C, L2). }
  result rightTriangle(triangle(A, B, C), A)
  justification "A triangle that has a right angle is a right triangle".
"""


def errors(text):
    with pytest.raises(ReferentialError) as exc:
        parse_rules(text)
    return [d.code for d in exc.value.diagnostics]


def test_parse_single_rule():
    r = parse_rules(RULE)
    (rule,) = r.rules
    assert rule.id == "rightTrPerp"
    assert rule.premise_predicates == ("perp", "triangle")
    assert rule.result == Struct("rightTriangle", (Struct("triangle", (Var("A"), Var("B"), Var("C"))), Var("A")))
    assert rule.justification.startswith("A triangle")
    assert r.premise_index["perp"] == ((rule, 0),)


def test_empty_referential():
    assert len(parse_rules("")) == 0
    assert len(parse_rules("% only a comment\n")) == 0


def test_builtin_contents():
    r = builtin_referential()
    assert len(r) == 31
    assert "rightTrPerp" in {x.id for x in r}
    assert {x.id for x in r.select(granularity="high")} == {"triangleAngleSum", "quadAngleSum"}
    assert r.rule("fourRightAngles").justification == "A rectangle is a quadrilateral that has four right angles"


def test_rules_using_positions():
    r = builtin_referential()
    positions = [(rule.id, pos) for rule, pos in rules_using("angleValue", r) if rule.id == "equalMeasureAngles"]
    assert positions == [("equalMeasureAngles", 0), ("equalMeasureAngles", 1)]
    assert rules_using("point", r) == []


def test_select_by_predicate():
    ids = {x.id for x in builtin_referential().select(predicate="rectangle")}
    assert ids == {"parallelogramRightAngle", "fourRightAngles"}


def test_format_round_trip():
    r = builtin_referential()
    text = "\n\n".join(format_rule(x) for x in r)
    assert parse_rules(text).rules == r.rules


def test_value_computation():
    r = builtin_referential()
    assert [str(g) for g in r.rule("pythagorasHypotenuse").value_computation] == ["H is sqrt(X * X + Y * Y)"]
    # angleAt looks up an angle, it does not compute a number
    assert [str(g) for g in r.rule("triangleAngleSum").value_computation] == ["W is 180 - X - Y"]


@pytest.mark.parametrize(
    "text, code",
    [
        (RULE.replace("perp(line(L1), line(L2))", "orthogonal(L1, L2)"), "unknown-predicate"),
        (RULE.replace("triangle(A, B, C). }", "triangle(A, B). }"), "arity"),
        (RULE.replace("granularity low", "granularity medium"), "granularity"),
        (RULE.replace("on(C, L2). }", "on(C, L2). near(A, B). }"), "unknown-guard"),
        (RULE.replace("on(C, L2). }", "on(D, L2). }"), "unbound-variable"),
        (RULE.replace("rightTriangle(triangle(A, B, C), A)", "rightTriangle(triangle(A, B, C), D)"), "unbound-variable"),
        (RULE.replace("perp(line(L1), line(L2))", "perp(quad(L1), line(L2))"), "sort"),
        (RULE + RULE, "duplicate-id"),
        (RULE.replace("premises {", "premises"), "syntax"),
        (RULE.replace("on(A, L1).", "X is foo(A)."), "unknown-function"),
    ],
)
def test_rule_errors(text, code):
    assert code in errors(text)


def test_errors_carry_line_numbers():
    with pytest.raises(ReferentialError) as exc:
        parse_rules("\n\n" + RULE.replace("granularity low", "granularity medium"))
    assert exc.value.diagnostics[0].location == 4


def test_duplicate_ids_rejected_programmatically():
    rule = PropertyRule("x", "j", (Struct("point", (Var("A"),)),), Struct("point", (Var("A"),)))
    with pytest.raises(ValueError):
        Referential.from_rules([rule, rule])
