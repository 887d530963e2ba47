import logging

from backend.app.observability import StageTimer, VerificationMetrics


class _RecordingMetrics:
    def __init__(self):
        self.stages = []

    def observe_stage_latency(self, duration_s, stage):
        self.stages.append((stage, duration_s))


def test_stage_timer_logs_structured_fields(caplog):
    metrics = _RecordingMetrics()
    with caplog.at_level(logging.INFO, logger='backend.app.observability'):
        with StageTimer('weyl', metrics, degree=240, group_order=696729600) as timer:
            pass
    record = next(r for r in caplog.records if r.getMessage() == 'Stage finished')
    assert record.stage == 'weyl'
    assert record.degree == 240
    assert record.duration_ms >= 0
    assert metrics.stages == [('weyl', timer.duration_s)]


def test_stage_timer_does_not_swallow_errors():
    metrics = _RecordingMetrics()
    try:
        with StageTimer('search', metrics):
            raise ValueError('budget must be positive')
    except ValueError:
        pass
    else:
        raise AssertionError('error was swallowed')
    assert [s for s, _ in metrics.stages] == ['search']


def test_metrics_work_without_exporters():
    metrics = VerificationMetrics()
    metrics.observe_stage_latency(0.5, 'mathieu')
    metrics.increment_check_outcome('mathieu', passed=False)
