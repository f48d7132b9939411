"""Tests for the command-line interface."""
import pytest

from ultrashift.__main__ import create_parser, main
from ultrashift.config import AnalysisConfig
from ultrashift.ug_files import parse_presentation


@pytest.fixture
def ug(presentations_dir):
    def path(name: str) -> str:
        return str(presentations_dir / f"{name}.ug")
    return path


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.strip(), captured.err


class TestParser:
    """Argument parsing and settings."""

    def test_global_flags(self):
        """Global flags feed the analysis settings."""
        args = create_parser().parse_args(["--cap", "30", "--edge-limit", "5", "rfum", "x.ug"])
        config = AnalysisConfig.from_args(args)
        assert config.cap == 30
        assert config.edge_limit == 5
        assert config.horizon == 100

    def test_command_required(self):
        """A subcommand is mandatory."""
        with pytest.raises(SystemExit):
            create_parser().parse_args([])

    def test_negative_setting(self, capsys, ug):
        """Negative bounds are input errors."""
        code, _, err = run(capsys, "--cap", "-1", "rfum", ug("example1"))
        assert code == 2
        assert "cap must be non-negative" in err


class TestSetCommands:
    """validate, emitters, rfum, lattice and gzero."""

    def test_rfum_fail(self, capsys, ug):
        """Matrix C fails with the even vertices left over."""
        code, out, _ = run(capsys, "rfum", ug("matrixC"))
        assert code == 1
        assert out == "Fail(e_1, residual ap(2,2,10))"

    def test_rfum_pass(self, capsys, ug):
        """Matrix B passes and prints its decompositions."""
        code, out, _ = run(capsys, "rfum", ug("matrixB"))
        assert code == 0
        assert out.splitlines()[0] == "Pass"

    def test_validate(self, capsys, ug):
        """Validation lists the distinct ranges."""
        code, out, _ = run(capsys, "validate", ug("tiny"))
        assert code == 0
        assert out.splitlines()[0] == "valid tiny"
        assert "r(e_2) = fin{1}" in out

    def test_emitters_with_oracle(self, capsys, ug):
        """Symbolic and brute-force emitters agree."""
        code, out, _ = run(capsys, "--cap", "200", "emitters", ug("example1"), "--oracle")
        assert code == 0
        assert "  ap(3,1,1)" in out.splitlines()
        assert "agrees" in out

    def test_lattice(self, capsys, ug):
        """Matrix B has three lattice elements."""
        code, out, _ = run(capsys, "lattice", ug("matrixB"))
        assert out.splitlines()[0] == "range lattice of matrixB: 3 elements"

    def test_gzero(self, capsys, ug):
        """Membership passes with a certificate, fails with a residual."""
        code, out, _ = run(capsys, "gzero", ug("example1"), "fin{1} | ap(3,1,1)")
        assert code == 0
        assert out.startswith("in G0")
        code, out, _ = run(capsys, "gzero", ug("matrixC"), "ap(2,2,10)")
        assert code == 1
        assert out == "not in G0: residual ap(2,2,10)"


class TestDynamicsCommands:
    """shift, window, tograph and checkmorphism."""

    def test_shift(self, capsys, ug):
        """Dropping the only edge of a finite point."""
        code, out, _ = run(capsys, "shift", ug("example1"), "fin e1:[ap(3,1,1)]")
        assert code == 0
        assert out == "fin :[ap(3,1,1)]"

    def test_window(self, capsys, ug):
        """The window and its shift image."""
        code, out, _ = run(capsys, "window", ug("example1"), "path e1(cycle e3)")
        assert out.splitlines()[0] == "full e1:[ap(3,1,1)]"
        assert out.splitlines()[1].startswith("image: ")

    def test_tograph_output_parses(self, capsys, ug):
        """The printed graph is itself a presentation."""
        code, out, _ = run(capsys, "tograph", ug("tiny"))
        assert code == 0
        assert out.splitlines()[0] == "# f1 = e1 to v1"
        assert len(parse_presentation(out).families) == 3

    def test_checkmorphism(self, capsys, ug, write_file):
        """A shift-closed identity table passes."""
        table = write_file("id.tab", "path (cycle e1) -> path (cycle e1)\n")
        code, out, _ = run(capsys, "checkmorphism", ug("tiny"), str(table))
        assert code == 0
        assert ": pass" in out.splitlines()[0]

    def test_checkmorphism_not_closed(self, capsys, ug, write_file):
        """Missing shifts are an input error."""
        table = write_file("open.tab", "path e2(cycle e1) -> path e2(cycle e1)\n")
        code, _, err = run(capsys, "checkmorphism", ug("tiny"), str(table))
        assert code == 2
        assert "not in the table" in err


class TestActionCommands:
    """domain, act, axioms and degree."""

    def test_domain(self, capsys, ug):
        """X_e1 is the cylinder of e1."""
        code, out, _ = run(capsys, "domain", ug("example1"), "e1")
        assert out == ".: next fin{1}"

    def test_act(self, capsys, ug):
        """theta_e1 prepends e1."""
        code, out, _ = run(capsys, "act", ug("example1"), "e1", "path (cycle e3)")
        assert code == 0
        assert out == "path e1(cycle e3)"

    def test_act_on_failing_space(self, capsys, ug):
        """The action needs Condition (RFUM)."""
        code, _, err = run(capsys, "act", ug("matrixC"), "e1", "path (cycle e1)")
        assert code == 2
        assert "RFUM" in err

    def test_axioms_with_oracle(self, capsys, ug):
        """Axioms hold and agree with the naive action."""
        code, out, _ = run(capsys, "--cap", "4", "axioms", ug("example1"), "e1", "~e1", "--oracle")
        assert code == 0, out
        assert "0 disagreements" in out

    def test_degree(self, capsys):
        """Degree needs no presentation."""
        code, out, _ = run(capsys, "degree", "e1.e2~e3")
        assert (code, out) == (0, "1")


class TestTopologyCommands:
    """separate, converge, cyl and clopen."""

    def test_separate(self, capsys, ug):
        """Two cylinders, one per line."""
        code, out, _ = run(capsys, "separate", ug("example1"), "path e1(cycle e3)",
                           "path e2(cycle e3)")
        assert out.splitlines() == ["full e1:[ap(3,1,1)]", "full e2:[ap(1,1,1)]"]

    def test_converge(self, capsys, ug, write_file):
        """A rule sequence through ever later edges converges to the finite point."""
        seq = write_file("seq.txt", "rule path e1.e{n+2}(cycle e3)\n")
        code, out, _ = run(capsys, "--horizon", "20", "converge", ug("example1"), str(seq),
                           "fin e1:[ap(3,1,1)]")
        assert code == 0
        assert out.startswith("certificate")

    def test_clopen_union(self, capsys, ug):
        """Union of two cylinders in normal form."""
        code, out, _ = run(capsys, "clopen", ug("example1"), "union", "full e1:[ap(3,1,1)]",
                           "full :[fin{1,2}]")
        assert out == ".: next fin{1,2}"

    def test_bad_cylinder(self, capsys, ug):
        """Invalid cylinders are input errors."""
        code, _, err = run(capsys, "cyl", ug("example1"), "full e1:[all]")
        assert code == 2
        assert err.startswith("Error:")


class TestAlgebraCommands:
    """mul, star and relations."""

    def test_mul(self, capsys, ug):
        """s_e1* s_e1 = p_r(e1)."""
        code, out, _ = run(capsys, "mul", ug("example1"), "s*:e1", "s:e1")
        assert out == "0: 1*[.: atoms ap(3,1,1), next ap(3,1,1)]"

    def test_star(self, capsys, ug):
        """The adjoint of s_e1 lives on e1^-1."""
        code, out, _ = run(capsys, "star", ug("example1"), "s:e1")
        assert out == "~e1: 1*[.: atoms ap(3,1,1), next ap(3,1,1)]"

    def test_relations(self, capsys, ug):
        """The relations hold on a small sweep."""
        code, out, _ = run(capsys, "--edge-limit", "4", "--vrange", "4", "relations",
                           ug("example1"))
        assert code == 0, out
        assert out.splitlines()[0] == "relations for example1: pass"


class TestInputErrors:
    """Exit code 2 on bad input."""

    def test_bad_set_literal(self, capsys, ug):
        """Parse errors are reported on stderr."""
        code, out, err = run(capsys, "gzero", ug("example1"), "ap(1,2")
        assert code == 2
        assert out == ""
        assert err.startswith("Error: 1:")

    def test_missing_file(self, capsys, tmp_path):
        """Unreadable presentations are input errors."""
        code, _, err = run(capsys, "rfum", str(tmp_path / "missing.ug"))
        assert code == 2
        assert "Error:" in err

    def test_invalid_point(self, capsys, ug):
        """Points must be paths of the ultragraph."""
        code, _, err = run(capsys, "shift", ug("example1"), "path e1(cycle e2)")
        assert code == 2
