import json

from annulus_green.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


class TestEvalGreen:
    def test_json_record_round_trips(self, capsys):
        code, out = run_cli(
            capsys,
            "eval-green", "--n", "3", "--a", "0.5",
            "0.6", "0.1", "0", "0.8", "-0.2", "0.1",
        )
        assert code == 0
        record = json.loads(out)
        assert json.loads(json.dumps(record)) == record
        assert record["converged"] is True
        assert record["tail_bound"] >= 0.0
        # both evaluation paths present and in agreement
        assert record["path_difference"] <= (
            record["tail_bound"] + record["piecewise_tail_bound"] + 1e-9
        )

    def test_boundary_point_is_zero(self, capsys):
        code, out = run_cli(
            capsys,
            "eval-green", "--n", "3", "--a", "0.5",
            "1.0", "0", "0", "0.7", "0", "0",
        )
        assert code == 0
        record = json.loads(out)
        assert abs(record["value"]) <= record["tail_bound"] + 1e-8

    def test_coincident_points_exit_2(self, capsys):
        code, out = run_cli(
            capsys,
            "eval-green", "--n", "3", "--a", "0.5",
            "0.7", "0", "0", "0.7", "0", "0",
        )
        assert code == 2
        record = json.loads(out)
        assert record["error"] == "SingularityError"

    def test_wrong_coordinate_count_exit_2(self, capsys):
        code, _ = run_cli(capsys, "eval-green", "--n", "3", "--a", "0.5", "0.7", "0", "0")
        assert code == 2


class TestEvalRobin:
    def test_three_dimensions(self, capsys):
        code, out = run_cli(capsys, "eval-robin", "--n", "3", "--a", "0.5", "0.7")
        assert code == 0
        record = json.loads(out)
        assert record["value"] < 0
        assert record["converged"] is True

    def test_two_dimensions(self, capsys):
        code, out = run_cli(capsys, "eval-robin", "--n", "2", "--a", "0.2", "0.57")
        assert code == 0
        record = json.loads(out)
        assert record["value"] > 0

    def test_invalid_radius_exit_2(self, capsys):
        code, _ = run_cli(capsys, "eval-robin", "--n", "3", "--a", "0.5", "0.4")
        assert code == 2

    def test_budget_exhaustion_exit_3(self, capsys):
        code, out = run_cli(
            capsys, "eval-robin", "--n", "3", "--a", "0.5", "--max-terms", "4", "0.99"
        )
        assert code == 3
        record = json.loads(out)
        assert record["converged"] is False


class TestCriticalPoint:
    def test_record_fields(self, capsys):
        code, out = run_cli(capsys, "critical-point", "--n", "3", "--a", "0.5")
        assert code == 0
        record = json.loads(out)
        assert 0.5 < record["r0"] < 1.0
        assert record["residual"] <= 1e-10
        assert record["is_radial_minimum"] is False
        assert record["nondegenerate"] is True
        assert record["concentration_root_difference"] <= 1e-8

    def test_planar_record(self, capsys):
        code, out = run_cli(capsys, "critical-point", "--n", "2", "--a", "0.2")
        assert code == 0
        record = json.loads(out)
        assert record["is_radial_minimum"] is True
        assert "concentration_root" not in record

    def test_invalid_inner_radius_exit_2(self, capsys):
        code, _ = run_cli(capsys, "critical-point", "--n", "3", "--a", "1.5")
        assert code == 2


class TestVerifyCommand:
    def test_seeded_runs_are_byte_identical(self, capsys):
        code1, out1 = run_cli(
            capsys, "verify", "--seed", "7", "--default-policy", "--suite", "distance-series"
        )
        code2, out2 = run_cli(
            capsys, "verify", "--seed", "7", "--default-policy", "--suite", "distance-series"
        )
        assert code1 == code2 == 0
        assert out1 == out2

    def test_starved_policy_exits_1(self, capsys):
        code, out = run_cli(
            capsys, "verify", "--seed", "7", "--max-terms", "2", "--suite", "distance-series"
        )
        assert code == 1
        assert "FAIL" in out


class TestExportGrid:
    def test_robin_csv_shape(self, capsys, tmp_path):
        path = tmp_path / "robin.csv"
        code, _ = run_cli(
            capsys,
            "export-grid", "robin", "--n", "3", "--a", "0.5",
            "--grid-points", "40", "--format", "csv", "--out", str(path),
        )
        assert code == 0
        raw = path.read_bytes()
        assert b"\r" not in raw  # LF endings only
        lines = raw.decode().strip().split("\n")
        assert lines[0] == "r,robin,tail_bound,terms_used,converged"
        assert len(lines) == 41
        value = float(lines[1].split(",")[1])
        assert value < 0

    def test_gradient_column_changes_sign_once(self, capsys, tmp_path):
        path = tmp_path / "grad.csv"
        code, _ = run_cli(
            capsys,
            "export-grid", "gradient", "--n", "3", "--a", "0.5",
            "--grid-points", "200", "--r-min", "0.55", "--r-max", "0.95",
            "--format", "csv", "--out", str(path),
        )
        assert code == 0
        rows = path.read_text().strip().split("\n")[1:]
        signs = [float(row.split(",")[1]) > 0 for row in rows]
        flips = sum(1 for s1, s2 in zip(signs, signs[1:]) if s1 != s2)
        assert flips == 1
        # the sign change brackets the reported critical radius
        code, out = run_cli(capsys, "critical-point", "--n", "3", "--a", "0.5")
        r0 = json.loads(out)["r0"]
        radii = [float(row.split(",")[0]) for row in rows]
        flip_at = next(i for i, (s1, s2) in enumerate(zip(signs, signs[1:])) if s1 != s2)
        assert radii[flip_at] < r0 < radii[flip_at + 1]

    def test_green_slice_vanishes_at_both_walls(self, capsys, tmp_path):
        path = tmp_path / "slice.csv"
        code, _ = run_cli(
            capsys,
            "export-grid", "green-slice", "--n", "3", "--a", "0.5",
            "--y", "0,0.7,0", "--grid-points", "30", "--format", "csv", "--out", str(path),
        )
        assert code == 0
        rows = path.read_text().strip().split("\n")[1:]
        first = rows[0].split(",")
        last = rows[-1].split(",")
        assert float(first[0]) == 0.5 and float(last[0]) == 1.0
        for row in (first, last):
            assert abs(float(row[1])) <= float(row[2]) + 1e-8

    def test_modal_coefficient_grid(self, capsys, tmp_path):
        path = tmp_path / "modal.json"
        code, _ = run_cli(
            capsys,
            "export-grid", "modal-coefficient", "--n", "3", "--a", "0.5",
            "--mode", "2", "--s-radius", "0.8", "--grid-points", "11",
            "--format", "json", "--out", str(path),
        )
        assert code == 0
        record = json.loads(path.read_text())
        assert record["columns"] == ["r", "coefficient", "tail_bound"]
        assert len(record["rows"]) == 11

    def test_full_precision_rendering(self, capsys, tmp_path):
        path = tmp_path / "robin.csv"
        run_cli(
            capsys,
            "export-grid", "robin", "--n", "3", "--a", "0.5",
            "--grid-points", "3", "--r-min", "0.7", "--r-max", "0.8",
            "--format", "csv", "--out", str(path),
        )
        cell = path.read_text().strip().split("\n")[1].split(",")[1]
        assert float(cell) == float(format(float(cell), ".17g"))
        assert len(cell.replace("-", "").replace(".", "").lstrip("0")) >= 15

    def test_malformed_window_exit_2(self, capsys):
        code, _ = run_cli(
            capsys,
            "export-grid", "robin", "--n", "3", "--a", "0.5",
            "--r-min", "0.9", "--r-max", "0.6",
        )
        assert code == 2

    def test_missing_source_point_exit_2(self, capsys):
        code, _ = run_cli(capsys, "export-grid", "green-slice", "--n", "3", "--a", "0.5")
        assert code == 2
