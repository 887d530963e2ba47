import logging
import time
from contextlib import ContextDecorator

logger = logging.getLogger(__name__)


class StageTimer(ContextDecorator):
    """Time a verification stage and log its duration with structured fields."""

    def __init__(self, stage, metrics=None, **fields):
        self.stage = stage
        self.metrics = metrics
        self.fields = fields
        self.duration_s = 0.0
        self._start = None

    def __enter__(self):
        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.duration_s = time.perf_counter() - self._start
        logger.info(
            'Stage finished',
            extra={'stage': self.stage, 'duration_ms': round(self.duration_s * 1000, 3), **self.fields},
        )
        metrics = self.metrics if self.metrics is not None else verification_metrics
        metrics.observe_stage_latency(self.duration_s, self.stage)
        return False


class _NoopCounter:
    def labels(self, **kwargs):
        return self

    def inc(self, value=1):
        return None


class _NoopHistogram:
    def labels(self, **kwargs):
        return self

    def observe(self, value):
        return None


class VerificationMetrics:
    """Lightweight wrapper for optional Prometheus/OpenTelemetry metrics."""

    def __init__(self):
        self.stage_latency = _NoopHistogram()
        self.check_outcomes = _NoopCounter()

        self._init_prometheus()
        self._init_opentelemetry()

    def _init_prometheus(self):
        try:
            from prometheus_client import Counter, Histogram

            self.stage_latency = Histogram(
                'genus_stage_latency_seconds',
                'Latency of verification stages',
                ['stage'],
            )
            self.check_outcomes = Counter(
                'genus_check_outcomes_total',
                'Count of verification outcomes by check and result',
                ['check', 'outcome'],
            )
        except Exception:
            return

    def _init_opentelemetry(self):
        try:
            from opentelemetry import metrics as otel_metrics

            meter = otel_metrics.get_meter('genus_toolkit.verification')
            self._otel_stage_latency = meter.create_histogram(
                'genus.stage_latency.seconds',
                unit='s',
                description='Latency of verification stages',
            )
            self._otel_check_outcomes = meter.create_counter(
                'genus.check_outcomes',
                unit='1',
                description='Verification outcomes',
            )
        except Exception:
            self._otel_stage_latency = None
            self._otel_check_outcomes = None

    def observe_stage_latency(self, duration_s: float, stage: str):
        self.stage_latency.labels(stage=stage).observe(duration_s)
        if self._otel_stage_latency:
            self._otel_stage_latency.record(duration_s, {'stage': stage})

    def increment_check_outcome(self, check: str, passed: bool, value: int = 1):
        outcome = 'pass' if passed else 'fail'
        self.check_outcomes.labels(check=check, outcome=outcome).inc(value)
        if self._otel_check_outcomes:
            self._otel_check_outcomes.add(value, {'check': check, 'outcome': outcome})


verification_metrics = VerificationMetrics()
