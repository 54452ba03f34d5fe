"""
Hensel lifting: a root of f mod p refined to a root mod p^N by iterating the
Newton map x -> x - f(x) / f'(x), which strictly contracts the residue disc
x0 + pZ when f'(x0) is a unit.
"""
import logging
from typing import Callable, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.agents.limit_oracle import LimitOracle
from src.agents.validator import check_strict_contraction
from src.graph.workflow import run
from src.spaces.maps import NewtonMap
from src.spaces.padic import IntPolynomial, PadicDisc, PadicInt
from src.state.errors import HenselConditionFailed
from src.state.report import Report
from src.state.schema import DriverConfig, Inconclusive, Outcome

logger = logging.getLogger(__name__)


class HenselProblem(BaseModel):
    """Find z with f(z) = 0 mod p^n and z = seed mod p."""
    model_config = ConfigDict(frozen=True)
    p: int = Field(ge=2, description="Prime")
    n: int = Field(default=4, ge=1, description="Target precision N")
    poly: IntPolynomial
    seed: int = Field(description="x0 with f(x0) = 0 mod p")

    def space(self, sample_size: int = 20) -> PadicDisc:
        """The residue disc seed + pZ, where the Newton map is a strict contraction."""
        return PadicDisc(self.p, self.n, self.seed, sample_size=sample_size)


class HenselResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)
    problem: HenselProblem
    outcome: Outcome
    root: Optional[PadicInt] = None
    contraction: Optional[Report] = Field(
        default=None,
        description="Strict contraction of the Newton map on sampled disc pairs; None for a one-point disc",
    )


def check_hensel_condition(prob: HenselProblem, space: PadicDisc) -> PadicInt:
    """The seed as a residue, provided f(x0) = 0 mod p and f'(x0) is a unit."""
    x0 = space.element(prob.seed)
    value = prob.poly(x0)
    if value.residue % prob.p != 0:
        raise HenselConditionFailed(f"f({prob.seed}) = {value.residue} is not divisible by {prob.p}")
    slope = prob.poly.derivative()(x0)
    if not slope.is_unit():
        raise HenselConditionFailed(
            f"f'({prob.seed}) = {slope.residue} is divisible by {prob.p}; only simple roots are lifted"
        )
    return x0


def hensel_solve(
    prob: HenselProblem,
    config: Optional[DriverConfig] = None,
    oracle: Optional[LimitOracle] = None,
    sample_pairs: int = 12,
    progress: Optional[Callable[[str, dict], None]] = None,
) -> HenselResult:
    space = prob.space(sample_size=sample_pairs + 1)
    x0 = check_hensel_condition(prob, space)
    newton = NewtonMap(prob.poly)

    disc = space.sample_points()
    contraction = None
    if len(disc) > 1:
        contraction = check_strict_contraction(space, newton, list(zip(disc, disc[1:])))
    if contraction is not None and not contraction.passed:
        logger.warning("Newton map failed the contraction check: %s", contraction.summary())

    outcome = run(space, newton, x0, config, oracle, progress)
    root = None if isinstance(outcome, Inconclusive) else outcome.point
    logger.info("hensel %s mod %d^%d from %d: %s", prob.poly, prob.p, prob.n, prob.seed, outcome.kind)
    return HenselResult(problem=prob, outcome=outcome, root=root, contraction=contraction)


def brute_force_roots(f: IntPolynomial, p: int, n: int) -> List[int]:
    """Every residue r mod p^n with f(r) = 0 mod p^n."""
    modulus = p ** n
    return [r for r in range(modulus) if f(r) % modulus == 0]
