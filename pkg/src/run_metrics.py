"""Sweep traces & summary metrics"""
import json
import logging
from dataclasses import asdict
from datetime import datetime, timezone
from typing import Any, Dict, List

logger = logging.getLogger(__name__)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class SweepRecorder:
    """Collects one trace per validated instance plus per-suite summaries."""

    def __init__(self, service: str = "ecdlab", deterministic: bool = False):
        self.service = service
        self.deterministic = deterministic
        self.traces: List[Dict[str, Any]] = []
        self.metrics: Dict[str, Dict[str, Any]] = {}

    def log_instance(self, suite: str, result) -> Dict[str, Any]:
        """Record a single harness instance."""
        tags = asdict(result)
        duration = tags.pop("wall_ms")
        trace = {
            "service": self.service,
            "span_name": f"validate.{suite}",
            "tags": tags,
        }
        if not self.deterministic:
            trace["timestamp"] = _now()
            trace["duration_ms"] = duration
        self.traces.append(trace)
        return trace

    def log_sweep_summary(self, summary: Dict[str, Any]) -> Dict[str, Any]:
        """Record the counts of a finished sweep."""
        metrics = dict(summary)
        if self.deterministic:
            metrics.pop("elapsed_s", None)
        else:
            metrics["timestamp"] = _now()
        self.metrics[summary["suite"]] = metrics
        return metrics

    def export_metrics(self, output_file: str = "metrics.json") -> str:
        """Export all traces and summaries to a JSON file."""
        payload: Dict[str, Any] = {
            "service": self.service,
            "traces": self.traces,
            "summary_metrics": self.metrics,
            "total_instances": len(self.traces),
        }
        if not self.deterministic:
            payload["export_time"] = _now()
        with open(output_file, "w") as f:
            json.dump(payload, f, indent=2)
        logger.info(f"Exported {len(self.traces)} traces to {output_file}")
        return output_file
