"""Unit tests for the run ledger."""

import json

import numpy as np

from netkriging import __version__
from netkriging.core.audit import RunLedger
from netkriging.network.scenarios import scenario


class TestRunLedger:
    """Test RunLedger functionality."""

    def test_initialization(self):
        """Test ledger initialization."""
        ledger = RunLedger("evaluate-abc")

        assert ledger.run_id == "evaluate-abc"
        assert len(ledger.entries) == 0
        assert ledger.created_at is not None

    def test_log_entry(self):
        """Test logging a ledger entry."""
        ledger = RunLedger("evaluate-abc")

        ledger.log_entry(
            stage="factor_stage",
            action="factors_ready",
            input_data=np.ones((3, 4)),
            output_data={"p": 2},
            metadata={"window": 50},
        )

        assert len(ledger.entries) == 1
        entry = ledger.entries[0]
        assert entry.stage == "factor_stage"
        assert entry.action == "factors_ready"
        assert entry.metadata["window"] == 50
        assert len(entry.input_hash) == 64

    def test_hash_is_content_based(self):
        """Test that equal arrays hash equally and different ones do not."""
        a = np.arange(6.0).reshape(2, 3)

        assert RunLedger.hash_data(a) == RunLedger.hash_data(a.copy())
        assert RunLedger.hash_data(a) != RunLedger.hash_data(a + 1e-9)
        assert RunLedger.hash_data(a) != RunLedger.hash_data(a.reshape(3, 2))

    def test_hash_of_models_and_dicts(self):
        """Test hashing pydantic models and key-order independence."""
        assert RunLedger.hash_data(scenario(7)) == RunLedger.hash_data(scenario(7))
        assert RunLedger.hash_data(scenario(7)) != RunLedger.hash_data(scenario(8))
        assert RunLedger.hash_data({"a": 1, "b": 2}) == RunLedger.hash_data({"b": 2, "a": 1})

    def test_get_summary(self):
        """Test getting the ledger summary."""
        ledger = RunLedger("sweep-1")

        ledger.log_entry("topology_stage", "routing_built", {}, {})
        ledger.log_entry("factor_stage", "factors_ready", {}, {})
        ledger.log_entry("topology_stage", "routing_built", {}, {})

        summary = ledger.get_summary()

        assert summary["run_id"] == "sweep-1"
        assert summary["total_entries"] == 3
        assert summary["stages_involved"] == ["factor_stage", "topology_stage"]

    def test_get_timeline(self):
        """Test getting the chronological timeline."""
        ledger = RunLedger("sweep-1")

        ledger.log_entry("stage1", "action1", {}, {})
        ledger.log_entry("stage2", "action2", {}, {})

        timeline = ledger.get_timeline()

        assert [entry["action"] for entry in timeline] == ["action1", "action2"]
        assert all("timestamp" in entry for entry in timeline)

    def test_write(self, tmp_path):
        """Test writing the ledger report."""
        ledger = RunLedger("predict-1")
        ledger.log_entry("prediction_stage", "predicted", [1, 2], [3.0])

        path = ledger.write(tmp_path / "nested" / "run-ledger.json")
        report = json.loads(path.read_text(encoding="utf-8"))

        assert report["run_id"] == "predict-1"
        assert report["version"] == __version__
        assert len(report["timeline"]) == 1
