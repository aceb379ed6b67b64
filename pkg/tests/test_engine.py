import pytest

from felsim.engine import Engine, PastEventError, RandomStream, StreamFactory


def test_schedule_on_fresh_engine_returns_first_id():
    engine = Engine()
    event_id = engine.schedule(0, "interest-issue", lambda: None)
    assert event_id == 0
    assert engine.queue_length() == 1


def test_equal_timestamps_processed_in_insertion_order():
    engine = Engine()
    order = []
    engine.schedule(5, "a", lambda: order.append("A"))
    engine.schedule(5, "b", lambda: order.append("B"))
    engine.run_until(5)
    assert order == ["A", "B"]


def test_schedule_in_the_past_raises():
    engine = Engine()
    engine.schedule(7, "x", lambda: None)
    engine.run_until(7)
    with pytest.raises(PastEventError):
        engine.schedule(3, "x", lambda: None)


def test_run_until_empty_queue_advances_clock():
    engine = Engine()
    assert engine.run_until(100) == 0
    assert engine.now == 100


def test_run_until_respects_boundary():
    engine = Engine()

    def first():
        engine.schedule(20, "spawn", lambda: None)

    engine.schedule(10, "first", first)
    assert engine.run_until(15) == 1
    assert engine.now == 15
    assert engine.queue_length() == 1


def test_self_rescheduling_chain_processes_ten_events():
    # Chain stepping 1 ms from t=0: events at 0..9 inclusive -> 10 fired.
    engine = Engine()
    fired = []

    def step():
        fired.append(engine.now)
        if engine.now + 1 <= 9:
            engine.schedule(engine.now + 1, "step", step)

    engine.schedule(0, "step", step)
    assert engine.run_until(9) == 10
    assert fired == list(range(10))


def test_handler_never_sees_clock_before_fire_time():
    engine = Engine()
    seen = []
    engine.schedule(4, "a", lambda: seen.append(engine.now))
    engine.schedule(9, "b", lambda: seen.append(engine.now))
    engine.run_until(20)
    assert seen == [4, 9]


def test_same_seed_same_stream_identical_draws():
    a = RandomStream(42, "workload")
    b = RandomStream(42, "workload")
    assert [a.next_uniform() for _ in range(20)] == [b.next_uniform() for _ in range(20)]


def test_distinct_streams_differ():
    factory = StreamFactory(42)
    workload = factory.stream("workload")
    mobility = factory.stream("mobility")
    assert [workload.next_uniform() for _ in range(5)] != [
        mobility.next_uniform() for _ in range(5)
    ]


def test_stream_factory_memoizes():
    factory = StreamFactory(1)
    assert factory.stream("x") is factory.stream("x")


def test_uniform_sample_mean_near_half():
    stream = RandomStream(7, "check")
    n = 100_000
    mean = sum(stream.next_uniform() for _ in range(n)) / n
    assert abs(mean - 0.5) < 0.01


def test_exponential_mean_matches_parameter():
    stream = RandomStream(11, "exp")
    n = 20_000
    mean = sum(stream.exponential(50.0) for _ in range(n)) / n
    assert abs(mean - 50.0) < 2.5  # within 5%
