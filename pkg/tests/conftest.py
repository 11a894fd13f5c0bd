"""Shared fixtures."""

import numpy as np
import pytest
from opentelemetry import trace
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import SimpleSpanProcessor
from opentelemetry.sdk.trace.export.in_memory_span_exporter import InMemorySpanExporter

_exporter = InMemorySpanExporter()
_provider = TracerProvider()
_provider.add_span_processor(SimpleSpanProcessor(_exporter))
# The global provider can only be set once per process.
trace.set_tracer_provider(_provider)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so randomized sweeps are reproducible."""
    return np.random.default_rng(20240917)


@pytest.fixture
def span_exporter() -> InMemorySpanExporter:
    """In-memory exporter receiving every span finished during the test."""
    _exporter.clear()
    yield _exporter
    _exporter.clear()
