"""
Storage manager for Theta Complex.
"""

import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.complex.simplicial_complex import Complex
from src.errors import ComplexError, DimensionMismatchError
from src.random_lab.experiments import CSV_COLUMNS, ExperimentRow
from src.sdp.admm_solver import SdpProblem, to_sdpa

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class StorageManager:
    """
    Reads and writes complexes, matrices, results and experiment tables.
    """

    def __init__(self, config: Dict[str, Any]):
        """
        Initialize the storage manager.

        Args:
            config (dict): The `storage` configuration section
        """
        self.float_digits = int(config.get("float_digits", 12))
        self.base_path = Path(__file__).parent.parent.parent
        results_dir = Path(config.get("results_dir", "results"))
        self.results_path = results_dir if results_dir.is_absolute() else self.base_path / results_dir

    def _round(self, value: Any) -> Any:
        """Recursively render floats with a fixed number of significant digits."""
        if isinstance(value, (bool, type(None), str)):
            return value
        if isinstance(value, (float, np.floating)):
            value = float(value)
            if not math.isfinite(value):
                return str(value)
            return float(f"%.{self.float_digits}g" % value)
        if isinstance(value, (int, np.integer)):
            return int(value)
        if isinstance(value, dict):
            return {str(k): self._round(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [self._round(v) for v in value]
        if isinstance(value, np.ndarray):
            return self._round(value.tolist())
        return value

    def dumps(self, data: Any) -> str:
        """
        Deterministic JSON text: sorted keys, fixed-precision floats.

        Args:
            data: JSON-compatible data, numpy scalars and arrays allowed

        Returns:
            str: JSON document
        """
        return json.dumps(self._round(data), sort_keys=True, indent=2)

    def save_result(self, data: Any, path: PathLike) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.dumps(data) + "\n")
        logger.info(f"Saved result to {path}")
        return path

    def load_complex(self, path: PathLike) -> Complex:
        """
        Load a complex from {"n": int, "k": int, "k_faces": [[...], ...]}.

        Raises:
            ComplexError: If the file is missing, not JSON, or describes an invalid complex
        """
        path = Path(path)
        try:
            with open(path, "r") as f:
                data = json.load(f)
        except FileNotFoundError as e:
            raise ComplexError(f"Complex file not found: {path}") from e
        except json.JSONDecodeError as e:
            raise ComplexError(f"Complex file {path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ComplexError(f"Complex file {path} must contain a JSON object")
        complex_ = Complex.from_dict(data)
        logger.info(f"Loaded {complex_!r} from {path}")
        return complex_

    def complex_json(self, complex_: Complex) -> str:
        return json.dumps(complex_.to_dict(), sort_keys=True)

    def save_complex(self, complex_: Complex, path: PathLike) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.complex_json(complex_) + "\n")
        logger.info(f"Saved {complex_!r} to {path}")
        return path

    def matrix_csv(self, matrix: np.ndarray, labels: Sequence[str]) -> str:
        """
        Dense matrix as CSV with a face-label header row and a label column.

        Args:
            matrix: Square matrix
            labels: Face labels in row order

        Returns:
            str: CSV text
        """
        matrix = np.asarray(matrix)
        if matrix.shape != (len(labels), len(labels)):
            raise DimensionMismatchError(f"matrix of shape {matrix.shape} does not match {len(labels)} labels")
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow([""] + list(labels))
        fmt = f"%.{self.float_digits}g"
        for label, row in zip(labels, matrix):
            writer.writerow([label] + [fmt % value for value in row])
        return buffer.getvalue()

    def save_matrix(self, matrix: np.ndarray, labels: Sequence[str], path: PathLike) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.matrix_csv(matrix, labels))
        return path

    def load_matrix(self, path: PathLike, expected_labels: Optional[Sequence[str]] = None) -> Tuple[np.ndarray, List[str]]:
        """
        Read a labelled CSV matrix.

        Args:
            path: CSV file written by save_matrix (or by hand in the same layout)
            expected_labels: Required header labels, in order

        Returns:
            tuple: (matrix, labels)

        Raises:
            DimensionMismatchError: If the labels differ from the expected ones or the matrix is not square
        """
        with open(path, "r", newline="") as f:
            rows = [row for row in csv.reader(f) if row]
        if not rows:
            raise DimensionMismatchError(f"Matrix file {path} is empty")
        labels = [label.strip() for label in rows[0][1:]]
        body = rows[1:]
        if len(body) != len(labels):
            raise DimensionMismatchError(f"Matrix file {path} has {len(body)} rows for {len(labels)} labels")
        row_labels = [row[0].strip() for row in body]
        if row_labels != labels:
            raise DimensionMismatchError(f"Row labels of {path} do not match its header")
        if expected_labels is not None and labels != list(expected_labels):
            raise DimensionMismatchError(
                f"Matrix file {path} is indexed by {len(labels)} faces that do not match the "
                f"expected {len(expected_labels)} faces in lexicographic order"
            )
        try:
            matrix = np.array([[float(v) for v in row[1:]] for row in body], dtype=float).reshape(len(labels), len(labels))
        except ValueError as e:
            raise DimensionMismatchError(f"Matrix file {path} is malformed: {e}") from e
        return matrix, labels

    def experiment_csv(self, rows: Sequence[ExperimentRow]) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            data = self._round(row.to_dict())
            writer.writerow({key: "" if data[key] is None else data[key] for key in CSV_COLUMNS})
        return buffer.getvalue()

    def save_experiment(self, rows: Sequence[ExperimentRow], summary: Dict[str, Any], name: str) -> Tuple[Path, Path]:
        """
        Write `<name>.csv` and `<name>_summary.json` under the results directory.

        Returns:
            tuple: (csv path, summary path)
        """
        self.results_path.mkdir(parents=True, exist_ok=True)
        csv_path = self.results_path / f"{name}.csv"
        csv_path.write_text(self.experiment_csv(rows))
        summary_path = self.save_result(summary, self.results_path / f"{name}_summary.json")
        logger.info(f"Saved {len(rows)} experiment rows to {csv_path}")
        return csv_path, summary_path

    def save_sdpa(self, problem: SdpProblem, path: PathLike) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(to_sdpa(problem, self.float_digits))
        logger.info(f"Wrote conic dump of {problem.name or 'problem'} to {path}")
        return path
