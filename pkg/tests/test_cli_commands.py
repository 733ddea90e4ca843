"""
Tests for the CLI commands.
"""

import json
from unittest.mock import MagicMock

import numpy as np
import pytest

# Import the module to test
from src.cli.commands import (
    alpha_command,
    bounds_command,
    chi_command,
    chik_command,
    experiment_command,
    gen_command,
    info_command,
    laplacian_command,
    link_check_command,
    theta_command,
)
from src.combinatorics.homomorphism import ChromaticSearch
from src.complex.families import complete_tripartite, cycle_complex
from src.complex.simplicial_complex import Complex, complete_complex
from src.errors import ComplexError, ConfigurationError, PreconditionError
from src.random_lab.experiments import CSV_COLUMNS, ExperimentRow
from src.storage.storage_manager import StorageManager
from src.theta.theta_builder import build_theta_k

# Sample test data
SAMPLE_RESULT = {"level": 2, "value": 2.0, "status": "converged", "certificate_bound": 2.0}

SAMPLE_ROWS = [
    ExperimentRow("theta_k", 8, 2, 0.5, 1, value=3.0, reference=2.0, ratio=1.5, status="converged"),
    ExperimentRow("theta_k", 8, 2, 0.5, 2, value=3.2, reference=2.0, ratio=1.6, status="converged"),
]


@pytest.fixture
def storage_manager(tmp_path):
    """Create a storage manager writing under a temporary directory."""
    return StorageManager({"results_dir": str(tmp_path / "results")})


@pytest.fixture
def write_complex(storage_manager, tmp_path):
    """Save a complex and return its path."""
    def _write(complex_: Complex, name: str = "complex.json") -> str:
        return str(storage_manager.save_complex(complex_, tmp_path / name))
    return _write


@pytest.fixture
def mock_theta_calculator():
    """Create a mock theta calculator."""
    calculator = MagicMock()
    result = MagicMock(value=2.0, certificate_bound=2.0)
    result.to_dict.return_value = SAMPLE_RESULT
    calculator.evaluate.return_value = result
    calculator.certificate_bound.return_value = 2.5
    calculator.lovasz_theta.return_value = 1.0
    return calculator


def stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


@pytest.mark.unit
class TestInfoCommand:
    """Test the info_command function."""

    def test_info_command(self, storage_manager, write_complex, capsys):
        """Test face counts and structure of K_{2,2,2}^2."""
        path = write_complex(complete_tripartite(2))
        assert info_command(storage_manager, path) is True
        data = stdout_json(capsys)
        assert data["n"] == 6
        assert data["face_counts"]["2"] == 8
        assert data["face_counts"]["1"] == 12
        assert data["complete_skeleton"] is False
        assert data["components"] == 1
        assert "hodge" in data

    def test_info_table(self, storage_manager, write_complex, capsys):
        """Test the table format."""
        path = write_complex(complete_complex(4, 2))
        assert info_command(storage_manager, path, output_format="table")
        assert "Complex" in capsys.readouterr().out

    def test_missing_file(self, storage_manager, tmp_path):
        """Test that a missing file raises a complex error."""
        with pytest.raises(ComplexError):
            info_command(storage_manager, str(tmp_path / "missing.json"))


@pytest.mark.unit
class TestLaplacianCommand:
    """Test the laplacian_command function."""

    def test_matrix_csv(self, storage_manager, write_complex, capsys):
        """Test the labelled CSV of L_up_1(K_4^2)."""
        path = write_complex(complete_complex(4, 2))
        assert laplacian_command(storage_manager, path, dim=1)
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == ",0-1,0-2,0-3,1-2,1-3,2-3"
        assert lines[1].split(",")[:2] == ["0-1", "2"]

    def test_spectrum(self, storage_manager, write_complex, capsys):
        """Test that L_up_1(K_4^2) has eigenvalues 0 and 4, three times each."""
        path = write_complex(complete_complex(4, 2))
        assert laplacian_command(storage_manager, path, dim=1, show_spectrum=True, output_format="json")
        data = stdout_json(capsys)
        assert data["size"] == 6
        assert data["multiplicities"] == {"0": 3, "4": 3}

    def test_adjacency_json(self, storage_manager, write_complex, capsys):
        """Test the adjacency matrix of a graph."""
        path = write_complex(cycle_complex(5))
        assert laplacian_command(storage_manager, path, dim=0, which="adjacency", output_format="json")
        data = stdout_json(capsys)
        assert data["labels"] == ["0", "1", "2", "3", "4"]
        assert np.sum(np.array(data["matrix"])) == pytest.approx(10.0)

    def test_adjacency_wrong_dimension(self, storage_manager, write_complex):
        """Test that the adjacency lives on dimension k-1."""
        path = write_complex(complete_complex(4, 2))
        with pytest.raises(PreconditionError):
            laplacian_command(storage_manager, path, dim=0, which="adjacency")

    def test_unknown_operator(self, storage_manager, write_complex):
        """Test that unknown operators are rejected."""
        path = write_complex(complete_complex(4, 2))
        with pytest.raises(ConfigurationError):
            laplacian_command(storage_manager, path, dim=1, which="hodge")


@pytest.mark.unit
class TestThetaCommand:
    """Test the theta_command function."""

    def test_theta_command(self, mock_theta_calculator, storage_manager, write_complex, capsys):
        """Test solving at the default level."""
        path = write_complex(complete_complex(5, 2))
        assert theta_command(mock_theta_calculator, storage_manager, path)
        mock_theta_calculator.evaluate.assert_called_once()
        args = mock_theta_calculator.evaluate.call_args.args
        assert args[1] == 2
        assert args[2] is False
        assert stdout_json(capsys)["value"] == 2.0

    def test_dump(self, mock_theta_calculator, storage_manager, write_complex, tmp_path, capsys):
        """Test that the program is written before solving."""
        path = write_complex(cycle_complex(5))
        dump = tmp_path / "theta.dat-s"
        assert theta_command(mock_theta_calculator, storage_manager, path, dump=str(dump))
        assert dump.read_text().splitlines()[:3] == ["6", "1", "5"]

    def test_dump_hat(self, mock_theta_calculator, storage_manager, write_complex, tmp_path):
        """Test the conic dump of the strengthened program."""
        path = write_complex(cycle_complex(5))
        dump = tmp_path / "hat.dat-s"
        assert theta_command(mock_theta_calculator, storage_manager, path, level=2, hat=True, dump=str(dump))
        assert dump.read_text().splitlines()[1:3] == ["2", "5 5"]

    def test_certificate(self, mock_theta_calculator, storage_manager, write_complex, tmp_path, capsys):
        """Test that a certificate is evaluated instead of solving."""
        complex_ = cycle_complex(5)
        path = write_complex(complex_)
        labels = build_theta_k(complex_).index.labels()
        certificate = storage_manager.save_matrix(np.zeros((5, 5)), labels, tmp_path / "cert.csv")
        assert theta_command(mock_theta_calculator, storage_manager, path, certificate=str(certificate))
        assert stdout_json(capsys)["certificate_bound"] == 2.5
        mock_theta_calculator.evaluate.assert_not_called()


@pytest.mark.unit
class TestBoundsCommand:
    """Test the bounds_command function."""

    def test_complete_complex(self, mock_theta_calculator, storage_manager, write_complex, capsys):
        """Test every bound on K_5^2 with theta = 2."""
        path = write_complex(complete_complex(5, 2))
        assert bounds_command(mock_theta_calculator, storage_manager, path)
        data = stdout_json(capsys)
        assert data["golubev"] == pytest.approx(2.0)
        assert data["ratio"] == pytest.approx(1.0)
        assert data["link"] == pytest.approx(2.0)
        assert data["spectral_lower"] == 2.0
        assert data["alpha"] == 2
        assert data["sandwich"] == {"alpha_le_theta": True, "theta_le_bounds": True, "lower_le_theta": True}

    def test_missing_bounds(self, mock_theta_calculator, storage_manager, write_complex, capsys):
        """Test that unavailable bounds and alpha are reported as null."""
        path = write_complex(complete_tripartite(2))
        assert bounds_command(mock_theta_calculator, storage_manager, path, max_alpha_vertices=3)
        data = stdout_json(capsys)
        assert data["link"] is None
        assert data["alpha"] is None
        assert data["sandwich"]["alpha_le_theta"] is None


@pytest.mark.unit
class TestCombinatorialCommands:
    """Test alpha, chi and chi_k commands."""

    def test_alpha_command(self, storage_manager, write_complex, capsys):
        """Test the independence number of C_5."""
        assert alpha_command(storage_manager, write_complex(cycle_complex(5)))
        data = stdout_json(capsys)
        assert data["alpha"] == 2
        assert len(data["witness"]) == 2

    def test_chi_command(self, storage_manager, write_complex, capsys):
        """Test both chromatic numbers of K_{2,2,2}^2."""
        assert chi_command(storage_manager, write_complex(complete_tripartite(2)))
        data = stdout_json(capsys)
        assert data["chi_skeleton"] == 3
        assert len(data["coloring"]) == 6

    def test_chik_command(self, storage_manager, write_complex, capsys):
        """Test chi_k of K_4^2."""
        search = ChromaticSearch({"max_nodes": 2000000})
        assert chik_command(search, storage_manager, write_complex(complete_complex(4, 2)))
        data = stdout_json(capsys)
        assert data["value"] == 4
        assert data["component_bound"] == 4


@pytest.mark.unit
class TestGenCommand:
    """Test the gen_command function."""

    def test_named_family(self, storage_manager, capsys):
        """Test a named family on stdout."""
        assert gen_command(storage_manager, "tripartite", m=2)
        data = stdout_json(capsys)
        assert data["n"] == 6
        assert len(data["k_faces"]) == 8

    def test_complement(self, storage_manager, capsys):
        """Test the complement of K_{2,2,2}^2."""
        assert gen_command(storage_manager, "tripartite", m=2, complement=True)
        assert len(stdout_json(capsys)["k_faces"]) == 20 - 8

    def test_random_to_file(self, storage_manager, tmp_path):
        """Test a seeded Linial-Meshulam sample written to a file."""
        first = tmp_path / "first.json"
        second = tmp_path / "second.json"
        gen_command(storage_manager, "lm", n=7, k=2, p=0.5, seed=3, output=str(first))
        gen_command(storage_manager, "lm", n=7, k=2, p=0.5, seed=3, output=str(second))
        assert first.read_text() == second.read_text()

    def test_gnp(self, storage_manager, capsys):
        """Test G(n, 1) gives all edges."""
        assert gen_command(storage_manager, "gnp", n=5, p=1.0)
        data = stdout_json(capsys)
        assert data["k"] == 1
        assert len(data["k_faces"]) == 10

    def test_missing_parameters(self, storage_manager):
        """Test that random families need n and p."""
        with pytest.raises(ConfigurationError):
            gen_command(storage_manager, "lm", n=7)
        with pytest.raises(ComplexError):
            gen_command(storage_manager, "complete", n=5)


@pytest.mark.unit
class TestExperimentCommands:
    """Test the experiment commands."""

    @pytest.fixture
    def mock_experiment(self):
        """Create a mock experiment runner."""
        experiment = MagicMock()
        experiment.run.return_value = SAMPLE_ROWS
        return experiment

    def test_csv_output(self, mock_experiment, storage_manager, capsys):
        """Test that rows are printed as CSV."""
        assert experiment_command(mock_experiment, storage_manager, "theta_k", "n=8;p=0.5;k=2", seeds=[1, 2])
        mock_experiment.run.assert_called_once_with("theta_k", [(8, 0.5, 2)], [1, 2])
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 3

    def test_json_summary_and_save(self, mock_experiment, storage_manager, capsys):
        """Test the summary output and the saved files."""
        assert experiment_command(mock_experiment, storage_manager, "theta_k", "n=8;p=0.5;k=2",
                                  name="run", output_format="json")
        summary = stdout_json(capsys)
        assert summary["cells"][0]["ratio_median"] == pytest.approx(1.55)
        assert (storage_manager.results_path / "run.csv").exists()
        assert (storage_manager.results_path / "run_summary.json").exists()

    def test_bad_grid(self, mock_experiment, storage_manager):
        """Test that a malformed grid is rejected before running."""
        with pytest.raises(ConfigurationError):
            experiment_command(mock_experiment, storage_manager, "theta_k", "n=8")
        mock_experiment.run.assert_not_called()

    def test_link_check_command(self, storage_manager, capsys):
        """Test the localization check on seeded samples."""
        assert link_check_command(storage_manager, 6, 2, 0.5, [1, 2])
        data = stdout_json(capsys)
        assert [sample["seed"] for sample in data["samples"]] == [1, 2]
        assert data["all_hold"] is True
