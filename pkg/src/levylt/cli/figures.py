"""
Canned run configurations that regenerate the figure data on dimensionless axes:

  fig1  sample paths and their local-time profiles, λ ∈ {2, 1.5, 1}
  fig2  P̄(x̄) = ℓ P(x, t),                x̄ = x/ℓ,        λ ∈ {1, 1.5, 2}
  fig3  R̄(x̄) = ℓ_E E R(x, −E),           x̄ = x/ℓ_E,      λ ∈ {1, 1.5, 2}
  fig4  W̄(L̄) = t W(L)/ℓ, fixed x_b = x_a, L̄ = ℓL/t,      λ ∈ {1.05, 1.5, 2}
  fig5  the same for a free endpoint
  fig6  μ̄(x̄) = ℓ μ(x)/t, fixed x_b = x_a, x̄ = (x − x_a)/ℓ, λ ∈ {1, 1.5, 2}
  fig7  the same for a free endpoint

with ℓ = (Dt)^{1/λ} and ℓ_E = (D/E)^{1/λ}. λ = 1 has no normalizable
local-time distribution, so fig4/fig5 use λ = 1.05 to show the flattening.
Grids that pass through a λ = 1 singularity use an even point count so that
x̄ = 0 is never sampled.
"""
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from levylt.core.resources import load_config
from levylt.core.schemas import GridSpec, RunConfig, WalkModel

logger = logging.getLogger(__name__)

CURVE_LAMBDAS = (1.0, 1.5, 2.0)
DISTRIBUTION_LAMBDAS = (1.05, 1.5, 2.0)


class FigureRecipe(BaseModel):
    """The runs that produce one figure's data, one RunConfig per curve."""
    name: str
    description: str
    runs: List[RunConfig] = Field(default_factory=list)


def _tag(lam: float) -> str:
    return f"lambda{lam:g}"


def figure_recipes(settings: Optional[Dict[str, Any]] = None) -> List[FigureRecipe]:
    settings = settings if settings is not None else load_config()
    figures = settings.get("figures", {})
    D = float(figures.get("diffusion", 1.0))
    t = float(figures.get("time", 1.0))
    E = float(figures.get("energy", 1.0))
    points = int(figures.get("grid_points", 201))
    even = points + 1 if points % 2 else points
    fig1 = figures.get("fig1", {})

    def model(lam: float) -> WalkModel:
        return WalkModel(lam=lam, diffusion=D)

    def curves(name: str, lambdas, **fields: Any) -> List[RunConfig]:
        return [
            RunConfig(model=model(lam), scaled=True, output=f"{name}_{_tag(lam)}.csv", **fields)
            for lam in lambdas
        ]

    recipes = [
        FigureRecipe(
            name="fig1",
            description="Sample paths x(τ) and their local-time profiles L(x)",
            runs=[
                RunConfig(
                    command="simulate", model=model(lam), t=t, paths=1,
                    steps=int(fig1.get("steps", 1000)), seed=int(seed), estimate="paths",
                    grid=GridSpec.parse(fig1.get("profile_grid", "-3:3:121")),
                    output=f"fig1_{_tag(lam)}.csv",
                )
                for lam, seed in zip(fig1.get("lambdas", [2.0, 1.5, 1.0]), fig1.get("seeds", [11, 12, 13]))
            ],
        ),
        FigureRecipe(
            name="fig2",
            description="Stable density P̄(x̄)",
            runs=curves("fig2", CURVE_LAMBDAS, command="density", t=t,
                        grid=GridSpec(start=-5.0, stop=5.0, count=points)),
        ),
        FigureRecipe(
            name="fig3",
            description="Resolvent R̄(x̄)",
            runs=curves("fig3", CURVE_LAMBDAS, command="resolvent", E=E,
                        grid=GridSpec(start=-5.0, stop=5.0, count=even)),
        ),
        FigureRecipe(
            name="fig4",
            description="One-point distribution W̄(L̄) at x_a, fixed endpoint x_b = x_a",
            runs=curves("fig4", DISTRIBUTION_LAMBDAS, command="ltdist", t=t, endpoint="fixed", x_b=0.0,
                        grid=GridSpec(start=0.0, stop=3.0, count=points)),
        ),
        FigureRecipe(
            name="fig5",
            description="One-point distribution W̄*(L̄) at x_a, free endpoint",
            runs=curves("fig5", DISTRIBUTION_LAMBDAS, command="ltdist", t=t, endpoint="free",
                        grid=GridSpec(start=0.0, stop=3.0, count=points)),
        ),
        FigureRecipe(
            name="fig6",
            description="Mean local time μ̄(x̄), fixed endpoint x_b = x_a",
            runs=curves("fig6", CURVE_LAMBDAS, command="moment", t=t, endpoint="fixed", x_b=0.0,
                        grid=GridSpec(start=-3.0, stop=3.0, count=even)),
        ),
        FigureRecipe(
            name="fig7",
            description="Mean local time μ̄*(x̄), free endpoint",
            runs=curves("fig7", CURVE_LAMBDAS, command="moment", t=t, endpoint="free",
                        grid=GridSpec(start=-3.0, stop=3.0, count=even)),
        ),
    ]
    return recipes


def recipe_by_name(name: str, settings: Optional[Dict[str, Any]] = None) -> FigureRecipe:
    for recipe in figure_recipes(settings):
        if recipe.name == name:
            return recipe
    raise KeyError(f"no figure recipe named '{name}'")


def retarget(run: RunConfig, output_dir: Path) -> RunConfig:
    """The same run writing into `output_dir`."""
    return run.model_copy(update={"output": str(output_dir / Path(run.output).name)})
