"""The twelve Internet2 observation scenarios."""

from typing import Dict, Tuple

from netkriging.core.errors import ScenarioError
from netkriging.models.topology import ObservationScenario

# scenario id -> (predicted links, observed links)
_SCENARIOS: Dict[int, Tuple[Tuple[int, ...], Tuple[int, ...]]] = {
    1: ((7,), (2, 12)),
    2: ((7,), (2, 12, 13, 15)),
    3: ((7,), (2, 12, 13, 15, 23, 25)),
    4: ((7,), (2, 3, 9, 12, 15, 21, 23, 25)),
    5: ((13,), (3, 7)),
    6: ((13,), (3, 9)),
    7: ((13,), (3, 9, 12)),
    8: ((13,), (3, 7, 9, 12, 17, 19, 21)),
    9: ((13,), (2, 3, 9, 12, 15, 21, 23, 25)),
    10: ((19,), (3, 9)),
    11: ((19,), (3, 9, 13)),
    12: ((19,), (2, 3, 9, 12, 15, 21, 23, 25)),
}

SCENARIO_IDS: Tuple[int, ...] = tuple(sorted(_SCENARIOS))


def scenario(scenario_id: int) -> ObservationScenario:
    """
    Observed and predicted Internet2 links of a numbered scenario.

    Args:
        scenario_id: 1..12

    Raises:
        ScenarioError: Unknown id
    """
    try:
        predicted, observed = _SCENARIOS[scenario_id]
    except KeyError as e:
        raise ScenarioError(
            f"scenario id must be in 1..12, got {scenario_id}", operation="scenario"
        ) from e
    return ObservationScenario(observed=observed, unobserved=predicted, scenario_id=scenario_id)
