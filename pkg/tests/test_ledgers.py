import pandas as pd
import pytest

from sigcy.arith.fixloci import FixedKind, PairEntry
from sigcy.errors import PreconditionError, VerificationFailure
from sigcy.geometry.varieties import IDENTITY
from sigcy.topology.ledgers import (
    BlowupCenter,
    EulerLedger,
    LiftingRules,
    arrangement_centers,
    bidouble_euler,
    bidouble_strata,
    blowup_euler,
    hodge_picard_assembly,
    stringy_euler,
    verify_cover,
    verify_hodge,
    verify_stringy,
)

NODE = (1, 0, 0, 0, 1, 0, 0, 0)


def entry(kinds, count, shared):
    return PairEntry(IDENTITY, IDENTITY, kinds, count, count, tuple([NODE] * shared))


def synthetic_census():
    kinds = {f"n{i}": FixedKind.NODES for i in range(6)}
    kinds.update({f"c{i}": FixedKind.CURVES for i in range(12)})
    kinds.update({f"f{i}": FixedKind.FREE for i in range(13)})
    cn = (FixedKind.CURVES, FixedKind.NODES)
    cc = (FixedKind.CURVES, FixedKind.CURVES)
    pairs = ([entry(cn, 8, 8)] * 48 + [entry(cc, 16, 0)] * 48 + [entry(cc, 8, 8)] * 24
             + [entry((FixedKind.FREE, FixedKind.NODES), 0, 0)] * 10)
    return kinds, pairs


# ---------------------------------------------------------
# Ledgers and blow-ups
# ---------------------------------------------------------

def test_ledger_totals():
    ledger = EulerLedger("demo")
    ledger.add("a.x", 3, 2)
    ledger.add("a.y", 1, -1)
    ledger.add("b", 2, 5)
    assert ledger.total == 15
    assert ledger.subtotal("a.") == 5
    frame = ledger.to_frame()
    assert isinstance(frame, pd.DataFrame)
    assert list(frame["contribution"]) == [6, -1, 10]
    assert ledger.as_dict()["total"] == 15


def test_blowup_gains():
    assert BlowupCenter("point").euler_gain == 2
    assert BlowupCenter("curve").euler_gain == 2
    assert BlowupCenter("curve", genus=1).euler_gain == 0
    with pytest.raises(PreconditionError):
        BlowupCenter("surface").euler_gain
    assert blowup_euler(4, arrangement_centers()) == 52


def test_bidouble_cover_euler():
    assert bidouble_euler(52, 40, 40, 32) == 80
    assert bidouble_strata(52, 40, 40, 32) == 80
    rows, e = verify_cover(40, 40, 32)
    assert e == 80
    assert all(row.passed for row in rows)


# ---------------------------------------------------------
# Stringy Euler number
# ---------------------------------------------------------

def test_lifting_rules():
    rules = LiftingRules()
    assert rules.single(FixedKind.NODES)[0] == 32
    assert rules.single(FixedKind.CURVES)[0] == 0
    cc = (FixedKind.CURVES, FixedKind.CURVES)
    assert rules.pair(entry(cc, 8, 8))[0] == 16
    assert rules.pair(entry(cc, 16, 0))[0] == 16
    with pytest.raises(VerificationFailure):
        rules.pair(entry(cc, 8, 3))


def test_stringy_sum_on_a_synthetic_census():
    kinds, pairs = synthetic_census()
    result = stringy_euler(kinds, pairs)
    assert result.pre_division == 2560
    assert result.total == 80
    assert result.intermediates == {"singles": 20, "curve_node": 24, "after_curve_node": 44,
                                    "curve_curve_16": 24, "curve_curve_8": 12,
                                    "curve_curve": 36}


def test_stringy_sum_rejects_fractional_totals():
    kinds, pairs = synthetic_census()
    with pytest.raises(VerificationFailure):
        stringy_euler(kinds, pairs[:-11])


def test_stringy_sum_on_the_fixed_locus_table(fixed_census, pairs):
    kinds = {g: r.kind for g, r in fixed_census.reports.items()}
    rows, result = verify_stringy(kinds, pairs.entries.values())
    assert result.total == 80
    assert all(row.passed for row in rows)


# ---------------------------------------------------------
# Hodge numbers and Picard ledgers
# ---------------------------------------------------------

def test_hodge_assembly():
    assembly = hodge_picard_assembly(80, 80, 0, 36, 12, 12, 3)
    assert (assembly.h11, assembly.h12) == (40, 0)
    assert assembly.ledger_a.total == assembly.ledger_b.total == 40
    assert assembly.as_dict()["picard_divisors"]["total"] == 40


def test_hodge_assembly_disagreements():
    with pytest.raises(VerificationFailure):
        hodge_picard_assembly(80, 78, 0, 36, 12, 12, 3)
    with pytest.raises(VerificationFailure):
        hodge_picard_assembly(80, 80, 0, 35, 12, 12, 3)
    with pytest.raises(VerificationFailure):
        hodge_picard_assembly(80, 80, 1, 36, 12, 12, 3)


def test_divisor_ledger_follows_the_quadric_count():
    assembly = hodge_picard_assembly(80, 80, 0, 36, 12, 12, 3)
    assert assembly.ledger_b.rows[-1].multiplicity == 3
    with pytest.raises(VerificationFailure):
        hodge_picard_assembly(80, 80, 0, 36, 12, 12, 2)
    with pytest.raises(VerificationFailure):
        verify_hodge(80, 80, 0, 36, 4)


def test_verify_hodge_rows():
    rows, assembly = verify_hodge(80, 80, 0, 36, 3)
    assert all(row.passed for row in rows)
    assert assembly.e == 80
