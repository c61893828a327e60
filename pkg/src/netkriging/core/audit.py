"""Run ledger recording what each pipeline stage consumed and produced."""

import json
from datetime import datetime
from hashlib import sha256
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from netkriging import __version__


class LedgerEntry(BaseModel):
    """Single ledger entry."""

    timestamp: datetime = Field(default_factory=datetime.now)
    stage: str
    action: str
    input_hash: str
    output_hash: str
    metadata: Dict[str, Any] = Field(default_factory=dict)


class RunLedger:
    """
    Append-only record of an experiment run.

    Inputs and outputs are stored as SHA256 digests so two runs can be compared
    without keeping the arrays around.
    """

    def __init__(self, run_id: str):
        """
        Initialize the ledger for a run.

        Args:
            run_id: Experiment run identifier
        """
        self.run_id = run_id
        self.entries: List[LedgerEntry] = []
        self.created_at = datetime.now()

    def log_entry(
        self,
        stage: str,
        action: str,
        input_data: Any,
        output_data: Any,
        metadata: Optional[Dict[str, Any]] = None,
    ) -> None:
        """
        Append an entry.

        Args:
            stage: Stage that performed the action
            action: Description of the action
            input_data: Input data (hashed)
            output_data: Output data (hashed)
            metadata: Additional metadata stored verbatim
        """
        self.entries.append(
            LedgerEntry(
                stage=stage,
                action=action,
                input_hash=self.hash_data(input_data),
                output_hash=self.hash_data(output_data),
                metadata=metadata or {},
            )
        )

    @staticmethod
    def hash_data(data: Any) -> str:
        """
        SHA256 digest of arrays, pydantic models, containers or plain values.

        Args:
            data: Data to hash

        Returns:
            Hex digest
        """
        digest = sha256()
        RunLedger._feed(digest, data)
        return digest.hexdigest()

    @staticmethod
    def _feed(digest: Any, data: Any) -> None:
        if isinstance(data, np.ndarray):
            array = np.ascontiguousarray(data)
            digest.update(str((array.dtype.str, array.shape)).encode())
            digest.update(array.tobytes())
        elif isinstance(data, BaseModel):
            for name in sorted(type(data).model_fields):
                digest.update(name.encode())
                RunLedger._feed(digest, getattr(data, name))
        elif isinstance(data, dict):
            for key in sorted(data, key=str):
                digest.update(str(key).encode())
                RunLedger._feed(digest, data[key])
        elif isinstance(data, (list, tuple)):
            digest.update(f"seq{len(data)}".encode())
            for item in data:
                RunLedger._feed(digest, item)
        else:
            digest.update(json.dumps(data, sort_keys=True, default=str).encode())

    def get_summary(self) -> Dict[str, Any]:
        """Summary of the ledger."""
        return {
            "run_id": self.run_id,
            "created_at": self.created_at.isoformat(),
            "total_entries": len(self.entries),
            "stages_involved": sorted(set(e.stage for e in self.entries)),
            "actions": sorted(set(e.action for e in self.entries)),
        }

    def get_timeline(self) -> List[Dict[str, Any]]:
        """Entries in chronological order."""
        return [
            {
                "timestamp": entry.timestamp.isoformat(),
                "stage": entry.stage,
                "action": entry.action,
                "input_hash": entry.input_hash,
                "output_hash": entry.output_hash,
                "metadata": entry.metadata,
            }
            for entry in sorted(self.entries, key=lambda e: e.timestamp)
        ]

    def generate_report(self) -> Dict[str, Any]:
        """Complete ledger report."""
        return {
            "run_id": self.run_id,
            "summary": self.get_summary(),
            "timeline": self.get_timeline(),
            "version": __version__,
            "generated_at": datetime.now().isoformat(),
        }

    def export_json(self) -> str:
        """Ledger report as indented JSON."""
        return json.dumps(self.generate_report(), indent=2, default=str)

    def write(self, path: Path) -> Path:
        """Write the ledger report to ``path``."""
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.export_json(), encoding="utf-8")
        return path
