"""
Command-line front end:

1.  `main`: argument parsing, exit codes, the `levylt` console script.
2.  `commands`: one handler per curve or simulation command.
3.  `figures`: canned runs regenerating the figure data.
4.  `serializers`: CSV/JSON curve files and the optional SVG chart.
5.  `verify`: the PASS/FAIL verification suite.
"""

from levylt.cli.commands import execute, single_row
from levylt.cli.figures import FigureRecipe, figure_recipes
from levylt.cli.main import main_cli, run
from levylt.cli.verify import CheckResult, run_suite

__all__ = [
    "run",
    "main_cli",
    "execute",
    "single_row",
    "FigureRecipe",
    "figure_recipes",
    "CheckResult",
    "run_suite",
]
