import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import C_STEP, EXAMPLE, SYNC, U1, U2, copy_system, population
from revlts import ccs
from revlts.reversible import (
    InvalidSequence,
    NotEnabled,
    NotUndoable,
    ReversibleLts,
    ValidSequence,
    bwd,
    fwd,
    inverse,
    loop_check,
)
from revlts.xmachine import Memory, SystemLabel, SystemTerm

R = ReversibleLts(ccs.RefinedCcs())
P = ccs.parse
L = ccs.parse_label
u1, u2, sync, c = (L(t) for t in (U1, U2, SYNC, C_STEP))
r0 = R.init(P(EXAMPLE))


def test_init():
    r = R.init(P("0"))
    assert len(r.trace) == 0 and R.project(r) == R.initial_term(r) == P("0")
    assert R.enabled_backward(r0) == []
    assert R.enabled_forward(R.init(P("0"))) == []


def test_enabled_forward_counts():
    assert len(R.enabled_forward(R.init(P("a.0 | b.0")))) == 2
    r = R.apply_signed(r0, [fwd(u1)])
    assert len(R.enabled_forward(r)) == len(R.instance.enumerate(R.project(r))) == 3


def test_forward_first_step():
    r = R.forward(r0, u1)
    assert r.trace.canonical == (u1,)
    assert R.project(r) == P("b.0 | ~b.c.0")
    assert R.initial_term(r) == P(EXAMPLE)


def test_forward_not_enabled():
    with pytest.raises(NotEnabled):
        R.forward(r0, c)


def test_computation_one_undo_either_order():
    r = R.apply_signed(r0, [fwd(u1), fwd(u2)])
    assert set(R.enabled_backward(r)) == {u1, u2}
    assert R.project(R.backward(r, u1)) == P("a.b.0 | c.0")
    assert R.project(R.backward(r, u2)) == P("b.0 | ~b.c.0")


def test_computation_two_undo_only_last():
    r = R.apply_signed(r0, [fwd(u1), fwd(sync), fwd(c)])
    assert R.project(r) == P("0 | 0")
    assert R.enabled_backward(r) == [c]
    with pytest.raises(NotUndoable):
        R.backward(r, u1)
    with pytest.raises(NotUndoable):
        R.backward(r, sync)
    back = R.apply_signed(r, [bwd(c), bwd(sync), bwd(u1)])
    assert back == r0


def test_copy_system_forward():
    rx = ReversibleLts(copy_system(values=None))
    r = rx.init(SystemTerm(("q0", "q0"), Memory(x=5)))
    r = rx.forward(r, SystemLabel(1, "q0", "a", "q1", 0))
    assert rx.project(r).memory == Memory(x=5, y=5)
    assert rx.backward(r, SystemLabel(1, "q0", "a", "q1", 0)) == rx.init(
        SystemTerm(("q0", "q0"), Memory(x=5)))


def test_apply_signed_examples():
    assert R.apply_signed(r0, [fwd(u1), bwd(u1)]) == r0
    assert R.apply_signed(r0, [fwd(u1), fwd(u2), bwd(u1)]) == R.apply_signed(r0, [fwd(u2)])


def test_apply_signed_reports_index():
    with pytest.raises(NotUndoable) as info:
        R.apply_signed(r0, [fwd(u1), fwd(sync), bwd(u1)])
    assert info.value.index == 2


def test_normalize_examples():
    assert R.normalize(r0, [fwd(u1), bwd(u1)]) == ((), ())
    assert R.normalize(r0, [fwd(u1), fwd(u2), bwd(u1)]) == ((), (u2,))
    with pytest.raises(InvalidSequence):
        R.normalize(r0, [bwd(u1)])


def test_normalize_keeps_undo_of_history():
    r = R.apply_signed(r0, [fwd(u1), fwd(u2)])
    seq = [bwd(u1), fwd(u1), bwd(u2), bwd(u1)]
    l1, l2 = R.normalize(r, seq)
    assert l2 == ()
    assert R.apply_signed(r, inverse([fwd(u) for u in l1])) == R.apply_signed(r, seq)


def test_causal_equivalence_examples():
    s1 = R.run(r0, [fwd(u1), fwd(u2)])
    s2 = R.run(r0, [fwd(u2), fwd(u1)])
    assert R.causally_equivalent(s1, s2)
    assert R.causally_equivalent(R.run(r0, [fwd(u1), bwd(u1)]), R.run(r0, []))
    assert not R.causally_equivalent(s1, R.run(r0, [fwd(u1)]))
    with pytest.raises(InvalidSequence):
        R.causally_equivalent(ValidSequence((fwd(u1),), r0), s1)


def test_equiv_oracle_examples():
    r = R.apply_signed(r0, [fwd(u1), fwd(u2)])
    a = R.run(r, [bwd(u1), bwd(u2)])
    b = R.run(r, [bwd(u2), bwd(u1)])
    assert R.equiv_oracle(a, a, 0) is True
    assert R.equiv_oracle(a, b, 4) is True
    assert R.equiv_oracle(a, R.run(r, [bwd(u1)]), 4) is False
    long_ = R.run(r0, [fwd(u1), bwd(u1), fwd(u2), bwd(u2)])
    assert R.equiv_oracle(long_, R.run(r0, []), 1) is None
    assert R.equiv_oracle(long_, R.run(r0, []), 4) is True


def test_signed_text_round_trip():
    seq = [fwd(u1), bwd(u1), fwd(sync)]
    text = R.encode_signed(seq)
    assert text.count("^-1") == 1
    assert R.parse_signed(text) == seq
    assert R.parse_script(f"fwd {U1}\n# comment\nback {U1}\n\nf {SYNC}") == seq
    assert R.parse_script("") == []
    with pytest.raises(ValueError):
        R.parse_script("jump (*|*)")


def test_loop_check_on_example():
    report = loop_check(R, [P(EXAMPLE)], 6)
    assert report.ok and report.checked > 0


POP = population(R, P(EXAMPLE), 4)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(POP))
def test_normalize_parabolic(s):
    r = R.initial_configuration(s)
    l1, l2 = R.normalize(r, s.seq)
    assert len(l1) + len(l2) <= len(s.seq)
    shaped = [bwd(u) for u in reversed(l1)] + [fwd(u) for u in l2]
    assert R.apply_signed(r, shaped) == s.final


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(POP))
def test_inverse_sequence_returns(s):
    r = R.initial_configuration(s)
    assert R.apply_signed(s.final, inverse(s.seq)) == r
    assert R.initial_term(s.final) == R.project(r) == P(EXAMPLE)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(POP), st.sampled_from(POP))
def test_square_and_swap_out(s, _):
    # the lemma on configurations, checked on every adjacent pair of the sequence
    r = R.initial_configuration(s)
    path = [r]
    for g in s.seq:
        path.append(R.apply(path[-1], g))
    for i in range(len(s.seq) - 1):
        a, b = s.seq[i], s.seq[i + 1]
        if a.label == b.label:
            continue
        if not a.backward and b.backward:
            # forward then a different undo: the two must be independent and swap
            assert R.instance.independent(a.label, b.label)
        if R.instance.independent(a.label, b.label):
            mid = R.apply(path[i], b)
            assert R.apply(mid, a) == path[i + 2]


def test_preservation_on_fragment():
    for s in POP:
        for g, r2 in R.moves(s.final):
            if not g.backward:
                assert (g.label, R.project(r2)) in set(R.instance.enumerate(R.project(s.final)))
            else:
                assert (g.label, R.project(s.final)) in set(R.instance.enumerate(R.project(r2)))
