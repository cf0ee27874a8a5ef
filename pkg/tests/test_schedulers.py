import pytest

from almreg.schedulers import ConstantSchedule, SequenceSchedule, build_schedule
from almreg.utils.exceptions import ConfigError


def test_constant_partial_sums():
    schedule = ConstantSchedule(0.5)
    assert schedule.tau(7) == 0.5
    assert schedule.t(4) == pytest.approx(2.0)
    assert schedule.t(0) == 0.0
    assert schedule.tau_bar == 0.5


def test_sequence_with_tail():
    schedule = SequenceSchedule([1.0, 2.0, 4.0], tail=0.5)
    assert schedule.taus(5) == [1.0, 2.0, 4.0, 0.5, 0.5]
    assert schedule.t(5) == pytest.approx(8.0)
    assert schedule.t(2) == pytest.approx(3.0)
    assert schedule.tau_bar == 4.0


def test_sequence_repeats_last_step():
    schedule = SequenceSchedule([1.0, 3.0])
    assert schedule.tau(10) == 3.0
    assert schedule.t(4) == pytest.approx(10.0)


def test_indices_start_at_one():
    with pytest.raises(IndexError):
        ConstantSchedule().tau(0)


@pytest.mark.parametrize('bad', [0.0, -1.0])
def test_non_positive_steps(bad):
    with pytest.raises(ConfigError):
        ConstantSchedule(bad)
    with pytest.raises(ConfigError):
        SequenceSchedule([1.0, bad])


def test_build_schedule():
    assert build_schedule({'tau': 2.0}).to_dict() == {'name': 'constant', 'tau': 2.0}
    schedule = build_schedule({'schedule': 'sequence', 'taus': [1.0, 2.0]})
    assert schedule.to_dict() == {'name': 'sequence', 'taus': [1.0, 2.0], 'tail': 2.0}
    with pytest.raises(ConfigError, match="not in schedule dict"):
        build_schedule({'schedule': 'geometric'})
    with pytest.raises(ConfigError):
        build_schedule({'schedule': 'sequence'})


def test_sequence_tail_ignores_constant_step():
    conf = {'schedule': 'sequence', 'tau': 1.0, 'taus': [0.5, 4.0], 'tail': None}
    schedule = build_schedule(conf)
    assert schedule.tail == 4.0
    assert schedule.tau(9) == 4.0
    assert build_schedule({**conf, 'tail': 0.25}).tau(3) == 0.25
